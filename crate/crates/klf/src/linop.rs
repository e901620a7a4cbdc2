//! Linear algebra operations on the rank-(n+1) fiber: symmetric, exterior and
//! tensor powers and products thereof, their index sets `J`, weight generating
//! polynomials `R(T)`, trace functionals, and the obstruction counts
//! `d(L, n, p) = #{(j_1..j_m) in J : zeta_{n+1}^{j_1} + ... + zeta_{n+1}^{j_m} = 0 in char p}`.

use crate::config::Caps;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Sym,
    Ext,
    Tensor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub degree: u32,
}

/// An ordered product of factors, e.g. `sym:3` or `ext:2*sym:1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinOp {
    pub factors: Vec<Factor>,
}

impl LinOp {
    pub fn sym(k: u32) -> Self {
        LinOp { factors: vec![Factor { kind: FactorKind::Sym, degree: k }] }
    }

    /// Parse the compact grammar `kind:degree(*kind:degree)*`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split('*') {
            let (kind, deg) = part
                .split_once(':')
                .ok_or_else(|| Error::BadLinOp(s.to_string()))?;
            let kind = match kind.trim() {
                "sym" => FactorKind::Sym,
                "ext" => FactorKind::Ext,
                "tensor" => FactorKind::Tensor,
                _ => return Err(Error::BadLinOp(s.to_string())),
            };
            let degree: u32 = deg
                .trim()
                .parse()
                .map_err(|_| Error::BadLinOp(s.to_string()))?;
            if degree == 0 {
                return Err(Error::BadLinOp(s.to_string()));
            }
            factors.push(Factor { kind, degree });
        }
        if factors.is_empty() {
            return Err(Error::BadLinOp(s.to_string()));
        }
        Ok(LinOp { factors })
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|f| {
                let k = match f.kind {
                    FactorKind::Sym => "sym",
                    FactorKind::Ext => "ext",
                    FactorKind::Tensor => "tensor",
                };
                format!("{}:{}", k, f.degree)
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Total degree `m_L`: the operation is a quotient of `V^(tensor m_L)`.
    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|f| f.degree).sum()
    }

    /// `Some(k)` when the operation is a single symmetric power.
    pub fn as_pure_sym(&self) -> Option<u32> {
        match self.factors.as_slice() {
            [Factor { kind: FactorKind::Sym, degree }] => Some(*degree),
            _ => None,
        }
    }

    fn check_dims(&self, n: u32) -> Result<()> {
        for f in &self.factors {
            if f.kind == FactorKind::Ext && f.degree > n + 1 {
                return Err(Error::ExtTooLarge { l: f.degree, dim: n + 1 });
            }
        }
        Ok(())
    }

    /// `#J`: the rank of the operation applied to a space of dimension `n+1`.
    pub fn index_count(&self, n: u32) -> Result<BigInt> {
        self.check_dims(n)?;
        let mut total = BigInt::from(1);
        for f in &self.factors {
            let c = match f.kind {
                FactorKind::Sym => binomial(n as u64 + f.degree as u64, f.degree as u64),
                FactorKind::Ext => binomial(n as u64 + 1, f.degree as u64),
                FactorKind::Tensor => BigInt::from(n as u64 + 1).pow(f.degree),
            };
            total *= c;
        }
        Ok(total)
    }
}

impl std::fmt::Display for LinOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut num = BigInt::from(1);
    for i in 0..k {
        num = num * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    num
}

/// Generating polynomial `R_L(T) = sum over J of T^(j_1 + ... + j_m)`, the
/// weight enumerator of the basis of `L V` for `dim V = n + 1`.
pub fn r_poly(op: &LinOp, n: u32) -> Result<IntPoly> {
    op.check_dims(n)?;
    let mut total = IntPoly::one();
    for f in &op.factors {
        let fac = match f.kind {
            FactorKind::Sym => sym_weight_poly(f.degree, n),
            FactorKind::Ext => ext_weight_poly(f.degree, n),
            FactorKind::Tensor => {
                let line = IntPoly::new(vec![BigInt::from(1); n as usize + 1]);
                line.pow(f.degree)
            }
        };
        total = total.mul(&fac);
    }
    Ok(total)
}

fn sym_weight_poly(k: u32, n: u32) -> IntPoly {
    // multisets of size k from weights {0..n}
    let k = k as usize;
    let maxw = k * n as usize;
    let mut ways = vec![vec![BigInt::from(0); maxw + 1]; k + 1];
    ways[0][0] = BigInt::from(1);
    for j in 0..=n as usize {
        for c in 1..=k {
            for w in j..=maxw {
                let add = ways[c - 1][w - j].clone();
                ways[c][w] += add;
            }
        }
    }
    IntPoly::new(ways[k].clone())
}

fn ext_weight_poly(l: u32, n: u32) -> IntPoly {
    // strictly increasing l-tuples from {0..n}
    let l = l as usize;
    let maxw = (0..=n as usize).rev().take(l).sum::<usize>();
    let mut ways = vec![vec![BigInt::from(0); maxw + 1]; l + 1];
    ways[0][0] = BigInt::from(1);
    for j in 0..=n as usize {
        for c in (1..=l).rev() {
            for w in (j..=maxw).rev() {
                let add = ways[c - 1][w - j].clone();
                ways[c][w] += add;
            }
        }
    }
    IntPoly::new(ways[l].clone())
}

/// Trace of the operation applied to a matrix with the given eigenvalue power
/// sums: `Tr Sym^k = h_k`, `Tr Ext^l = e_l`, `Tr V^(tensor m) = p_1^m`,
/// products multiply. Newton-identity divisions are verified exact.
pub fn trace_from_power_sums(op: &LinOp, psums: &[CycInt]) -> Result<CycInt> {
    let need = op.factors.iter().map(|f| f.degree).max().unwrap_or(0) as usize;
    if psums.len() < need {
        return Err(Error::Internal(format!(
            "need {need} power sums, got {}",
            psums.len()
        )));
    }
    let p = psums
        .first()
        .map(|c| c.p())
        .ok_or_else(|| Error::Internal("empty power sums".into()))?;
    let mut total = CycInt::one(p);
    for f in &op.factors {
        let t = match f.kind {
            FactorKind::Sym => complete_homogeneous(psums, f.degree as usize)?,
            FactorKind::Ext => elementary(psums, f.degree as usize)?,
            FactorKind::Tensor => {
                let mut acc = CycInt::one(p);
                for _ in 0..f.degree {
                    acc = acc.mul(&psums[0])?;
                }
                acc
            }
        };
        total = total.mul(&t)?;
    }
    Ok(total)
}

/// `h_k` from `p_1..p_k` via `k h_k = sum_{j=1}^{k} h_{k-j} p_j`.
pub fn complete_homogeneous(psums: &[CycInt], k: usize) -> Result<CycInt> {
    let p = psums[0].p();
    let mut h = vec![CycInt::one(p)];
    for s in 1..=k {
        let mut acc = CycInt::zero(p);
        for j in 1..=s {
            acc = acc.add(&h[s - j].mul(&psums[j - 1])?)?;
        }
        h.push(acc.div_exact_int(s as u64)?);
    }
    Ok(h[k].clone())
}

/// `e_k` from `p_1..p_k` via `k e_k = sum_{j=1}^{k} (-1)^(j-1) e_{k-j} p_j`.
pub fn elementary(psums: &[CycInt], k: usize) -> Result<CycInt> {
    Ok(elementary_all(psums, k)?[k].clone())
}

/// `e_0..e_k` in one pass.
pub fn elementary_all(psums: &[CycInt], k: usize) -> Result<Vec<CycInt>> {
    let p = psums[0].p();
    let mut e = vec![CycInt::one(p)];
    for s in 1..=k {
        let mut acc = CycInt::zero(p);
        for j in 1..=s {
            let term = e[s - j].mul(&psums[j - 1])?;
            acc = if j % 2 == 0 { acc.sub(&term)? } else { acc.add(&term)? };
        }
        e.push(acc.div_exact_int(s as u64)?);
    }
    Ok(e)
}

/// The root-of-unity data behind an obstruction count: the residue field
/// `F_p[x]/(g)` with `g` the lexicographically smallest irreducible factor of
/// the (n+1)-st cyclotomic polynomial mod p, and the chosen root.
///
/// When `p | n+1` the cyclotomic polynomial degenerates: mod p it is a power
/// of the cyclotomic polynomial of the prime-to-p part `m` of `n+1`, so the
/// root has order `m` instead of `n+1`. Counts computed through it are flagged
/// `degenerate`.
pub struct ObstructionField {
    pub field: Field,
    pub zeta: FieldElem,
    pub factor_poly: Vec<u64>,
    pub root_order: u64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DObstruction {
    pub count: u64,
    pub degenerate: bool,
    /// chosen irreducible factor of the cyclotomic polynomial mod p
    pub factor_poly: Vec<u64>,
    pub root_order: u64,
}

/// Build the deterministic root-of-unity field for `zeta_{n+1}` in char `p`.
pub fn obstruction_field(n: u32, p: u64, caps: &Caps) -> Result<ObstructionField> {
    let npl1 = n as u64 + 1;
    let mut m = npl1;
    let mut degenerate = false;
    while m % p == 0 {
        m /= p;
        degenerate = true;
    }
    // order of p mod m = degree of every irreducible factor of Phi_m mod p
    let f = if m == 1 {
        1u32
    } else {
        let mut ord = 1u32;
        let mut cur = p % m;
        while cur != 1 {
            cur = cur * p % m;
            ord += 1;
        }
        ord
    };
    let field = Field::new(p, f, 0, caps)?;
    let l = field.size() - 1;
    debug_assert_eq!(l % m, 0);
    let zeta0 = field.pow(&field.generator(), (l / m) as u128);
    // all primitive m-th roots, grouped into Frobenius orbits; the minimal
    // polynomial of each orbit is an irreducible factor of Phi_m mod p
    let mut best: Option<(Vec<u64>, FieldElem)> = None;
    let mut seen = vec![false; m as usize];
    for j in 1..=m {
        if num_integer::Integer::gcd(&j, &m) != 1 || seen[(j % m) as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut e = j % m;
        loop {
            seen[e as usize] = true;
            orbit.push(e);
            e = e * (p % m) % m;
            if e == j % m {
                break;
            }
        }
        // minimal polynomial prod (x - zeta0^e), coefficients land in F_p
        let mut mpoly = vec![field.one()];
        for &e in &orbit {
            let root = field.pow(&zeta0, e as u128);
            let mut next = vec![field.zero(); mpoly.len() + 1];
            for (i, c) in mpoly.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                let t = field.mul(c, &root);
                next[i] = field.sub(&next[i], &t);
            }
            mpoly = next;
        }
        let coeffs: Vec<u64> = mpoly
            .iter()
            .map(|c| {
                debug_assert!(c.coeffs[1..].iter().all(|&x| x == 0));
                c.coeffs[0]
            })
            .collect();
        let root = field.pow(&zeta0, (j % m) as u128);
        match &best {
            Some((b, _)) if *b <= coeffs => {}
            _ => best = Some((coeffs, root)),
        }
    }
    let (factor_poly, zeta) = best.expect("at least one primitive root orbit");
    Ok(ObstructionField { field, zeta, factor_poly, root_order: m, degenerate })
}

/// Strict obstruction count: errors when `p | n+1` (the primitive root of
/// unity does not exist in characteristic p).
pub fn d_obstruction(op: &LinOp, n: u32, p: u64, caps: &Caps) -> Result<u64> {
    if (n as u64 + 1) % p == 0 {
        return Err(Error::PDividesOrder { p, m: n as u64 + 1 });
    }
    Ok(d_obstruction_general(op, n, p, caps)?.count)
}

/// Obstruction count through the degenerate root when `p | n+1`.
pub fn d_obstruction_general(op: &LinOp, n: u32, p: u64, caps: &Caps) -> Result<DObstruction> {
    let of = obstruction_field(n, p, caps)?;
    let count = count_zero_tuples(op, n, &of)?;
    Ok(DObstruction {
        count,
        degenerate: of.degenerate,
        factor_poly: of.factor_poly,
        root_order: of.root_order,
    })
}

/// Count J-tuples with vanishing root-of-unity sum, factor by factor.
fn count_zero_tuples(op: &LinOp, n: u32, of: &ObstructionField) -> Result<u64> {
    op.check_dims(n)?;
    let field = &of.field;
    let zpow: Vec<FieldElem> = (0..=n as u64)
        .map(|j| field.pow(&of.zeta, (j % of.root_order) as u128))
        .collect();
    // partial sums over the cartesian product of per-factor index sets
    let mut partials: Vec<FieldElem> = vec![field.zero()];
    for f in &op.factors {
        let sums = factor_sums(f, n, field, &zpow);
        let mut next = Vec::with_capacity(partials.len() * sums.len());
        for a in &partials {
            for b in &sums {
                next.push(field.add(a, b));
            }
        }
        partials = next;
        if partials.len() > 50_000_000 {
            return Err(Error::Internal("index set too large to enumerate".into()));
        }
    }
    Ok(partials.iter().filter(|x| x.is_zero()).count() as u64)
}

/// The multiset of `sum_i zeta^{j_i}` over the factor's index set.
fn factor_sums(f: &Factor, n: u32, field: &Field, zpow: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = Vec::new();
    match f.kind {
        FactorKind::Sym => {
            // compositions (i_0..i_n) of k: sum i_j * zeta^j
            let k = f.degree;
            let mut comp = vec![0u32; n as usize + 1];
            comp[0] = k;
            loop {
                let mut acc = field.zero();
                for (j, &c) in comp.iter().enumerate() {
                    if c > 0 {
                        acc = field.add(&acc, &field.scalar_mul(c as u64, &zpow[j]));
                    }
                }
                out.push(acc);
                if !next_composition(&mut comp) {
                    break;
                }
            }
            out
        }
        FactorKind::Ext => {
            let l = f.degree as usize;
            let mut idx: Vec<usize> = (0..l).collect();
            loop {
                let mut acc = field.zero();
                for &j in &idx {
                    acc = field.add(&acc, &zpow[j]);
                }
                out.push(acc);
                // next strictly increasing tuple
                let mut i = l;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if idx[i] < n as usize - (l - 1 - i) {
                        idx[i] += 1;
                        for t in i + 1..l {
                            idx[t] = idx[t - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        FactorKind::Tensor => {
            let m = f.degree as usize;
            let mut idx = vec![0usize; m];
            loop {
                let mut acc = field.zero();
                for &j in &idx {
                    acc = field.add(&acc, &zpow[j]);
                }
                out.push(acc);
                let mut i = 0usize;
                loop {
                    if i == m {
                        return out;
                    }
                    idx[i] += 1;
                    if idx[i] <= n as usize {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

/// Advance a composition of fixed total; false when the last one was reached.
pub fn next_composition(comp: &mut [u32]) -> bool {
    let n = comp.len();
    let mut first = 0;
    while first < n && comp[first] == 0 {
        first += 1;
    }
    if first + 1 >= n {
        return false;
    }
    let moved = comp[first] - 1;
    comp[first] = 0;
    comp[0] = moved;
    comp[first + 1] += 1;
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub p: u64,
    pub count: u64,
    pub degenerate: bool,
}

/// All primes `p <= p_max` with nonzero obstruction count (degenerate roots
/// included, flagged).
pub fn scan_primes(op: &LinOp, n: u32, p_max: u64, caps: &Caps) -> Result<Vec<ScanEntry>> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        if !(2..p).all(|f| f * f > p || p % f != 0) {
            continue;
        }
        let d = d_obstruction_general(op, n, p, caps)?;
        if d.count != 0 {
            out.push(ScanEntry { p, count: d.count, degenerate: d.degenerate });
        }
    }
    Ok(out)
}

/// Recompute the count with every conjugate cyclotomic factor; the counts must
/// agree (reindexing bijects the solution sets).
pub fn d_all_factor_choices(op: &LinOp, n: u32, p: u64, caps: &Caps) -> Result<Vec<u64>> {
    let of = obstruction_field(n, p, caps)?;
    let m = of.root_order;
    let mut counts = Vec::new();
    let mut seen = vec![false; m as usize];
    for j in 1..=m {
        if num_integer::Integer::gcd(&j, &m) != 1 || seen[(j % m) as usize] {
            continue;
        }
        let mut e = j % m;
        loop {
            seen[e as usize] = true;
            e = e * (p % m) % m;
            if e == j % m {
                break;
            }
        }
        let alt = ObstructionField {
            zeta: of.field.pow(&of.zeta, (j % m) as u128),
            field: Field::new(p, of.field.degree(), 0, caps)?,
            factor_poly: Vec::new(),
            root_order: m,
            degenerate: of.degenerate,
        };
        // note: the clone field has the same defining polynomial, so elements transfer
        counts.push(count_zero_tuples(op, n, &alt)?);
    }
    Ok(counts)
}
