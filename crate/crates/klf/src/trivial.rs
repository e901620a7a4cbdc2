//! The trivial factor `P(n,k,T) = A_0(n,k,T) A_inf(n,k,T) / B(n,k,T)` of the
//! k-th symmetric power L-function: an explicit rational function whose
//! reciprocal zeros and poles are powers of `q`.
//!
//! `A_0` comes from the generating-function coefficients `m_k(i)`; `A_inf`
//! from counting shift orbits of the vanishing-sum compositions `S_k(n,p)`,
//! with sign data from the vectors `v_o` when `n` is odd and `k` even; `B` is
//! nontrivial only when `p`, `k`, `n` are all even. The three-branch case
//! analysis for `n` odd / `k` even is implemented exactly as displayed in its
//! source, top to bottom, first match wins; the diagnostics record the branch
//! taken and warn both when the overlapping third branch is shadowed and when
//! no branch matches at all.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linop::{self, LinOp};
use crate::poly::{IntPoly, RatFunc};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use std::collections::BTreeMap;

/// A product of linear factors `(1 - sign q^exponent T)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloPoly {
    pub factors: Vec<CycloFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloFactor {
    pub exponent: u32,
    /// +1 for `(1 - q^i T)`, -1 for `(1 + q^i T)`
    pub sign: i8,
    pub multiplicity: u64,
}

impl CycloPoly {
    pub fn one() -> Self {
        CycloPoly { factors: Vec::new() }
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    pub fn expand(&self, q: u64) -> IntPoly {
        let mut out = IntPoly::one();
        for f in &self.factors {
            let root = BigInt::from(f.sign) * BigInt::from(q).pow(f.exponent);
            let lin = IntPoly::one_minus(root, 1);
            for _ in 0..f.multiplicity {
                out = out.mul(&lin);
            }
        }
        out
    }
}

/// Coefficients `m_k(0..floor(kn/2))` of the expansion of
/// `prod_{j=n+1}^{n+k} (1 - x^j) / prod_{j=2}^{k} (1 - x^j)`.
///
/// The full ratio is the Gaussian binomial `C(n+k,k)_x` times `(1 - x)`, a
/// polynomial; only the prefix inside the window is returned, and it must be
/// nonnegative there.
pub fn mk_coefficients(n: u32, k: u32) -> Result<Vec<BigInt>> {
    let mut num = IntPoly::one();
    for j in (n + 1)..=(n + k) {
        num = num.mul(&IntPoly::one_minus(1, j as usize));
    }
    let mut quo = num;
    for j in 2..=k {
        quo = quo
            .div_exact(&IntPoly::one_minus(1, j as usize))
            .ok_or_else(|| Error::Internal("m_k ratio is not a polynomial".into()))?;
    }
    let window = (k * n / 2) as usize;
    let mut out = Vec::with_capacity(window + 1);
    for i in 0..=window {
        let c = quo.coeff(i);
        if c.is_negative() {
            return Err(Error::NegativeMk(i));
        }
        out.push(c);
    }
    Ok(out)
}

/// `A_0(n,k,T) = prod_{i=0}^{floor(kn/2)} (1 - q^i T)^{m_k(i)}`.
pub fn a0_factor(n: u32, k: u32) -> Result<CycloPoly> {
    let mk = mk_coefficients(n, k)?;
    let factors = mk
        .iter()
        .enumerate()
        .filter(|(_, m)| !num_traits::Zero::is_zero(*m))
        .map(|(i, m)| CycloFactor {
            exponent: i as u32,
            sign: 1,
            multiplicity: m.try_into().expect("m_k fits u64"),
        })
        .collect();
    Ok(CycloPoly { factors })
}

/// The vanishing-sum compositions `S_k(n,p)`, their shift orbits, and the
/// counts `a_k`, and (for `n` odd, `k` even) `b_k`, `c_k`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitData {
    pub s_k: Vec<Vec<u32>>,
    /// orbit representatives (first element encountered)
    pub orbit_reps: Vec<Vec<u32>>,
    pub a_k: u64,
    pub b_k: Option<u64>,
    pub c_k: Option<u64>,
    /// root of unity was degenerate (p | n+1)
    pub degenerate: bool,
}

fn shift(v: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(v.len());
    out.push(v[v.len() - 1]);
    out.extend_from_slice(&v[..v.len() - 1]);
    out
}

fn weight(v: &[u32]) -> u64 {
    v.iter().enumerate().map(|(j, &c)| j as u64 * c as u64).sum()
}

/// Signed multiset `v_o = sum_l (-1)^(i_n + ... + i_{n-l}) e^(sigma^l(i))`,
/// reduced by merging duplicate monomials.
fn v_orbit(start: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let n = start.len() - 1;
    let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut cur = start.to_vec();
    let mut sign_exp = 0u64;
    for l in 0..=n {
        // exponent of the sign: i_n + i_{n-1} + ... + i_{n-l} of the original tuple
        sign_exp += start[n - l] as u64;
        let sign = if sign_exp % 2 == 0 { 1i64 } else { -1 };
        if l > 0 {
            cur = shift(&cur);
        } else {
            // l = 0 term is sigma^0 with sign (-1)^(i_n)
        }
        *acc.entry(cur.clone()).or_insert(0) += sign;
    }
    acc.retain(|_, v| *v != 0);
    acc
}

/// Enumerate `S_k(n,p)` and its sigma-orbit structure.
pub fn orbit_data(n: u32, k: u32, p: u64, caps: &Caps) -> Result<OrbitData> {
    let of = linop::obstruction_field(n, p, caps)?;
    let field = &of.field;
    let zpow: Vec<_> = (0..=n as u64)
        .map(|j| field.pow(&of.zeta, (j % of.root_order) as u128))
        .collect();
    let mut s_k: Vec<Vec<u32>> = Vec::new();
    let mut comp = vec![0u32; n as usize + 1];
    comp[0] = k;
    loop {
        let mut acc = field.zero();
        for (j, &c) in comp.iter().enumerate() {
            if c > 0 {
                acc = field.add(&acc, &field.scalar_mul(c as u64, &zpow[j]));
            }
        }
        if acc.is_zero() {
            s_k.push(comp.clone());
        }
        if !linop::next_composition(&mut comp) {
            break;
        }
    }
    // sigma-orbits
    let mut seen: std::collections::HashSet<Vec<u32>> = Default::default();
    let mut orbit_reps = Vec::new();
    let mut orbits: Vec<Vec<Vec<u32>>> = Vec::new();
    for tuple in &s_k {
        if seen.contains(tuple) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = tuple.clone();
        loop {
            seen.insert(cur.clone());
            orbit.push(cur.clone());
            cur = shift(&cur);
            if cur == *tuple {
                break;
            }
        }
        // stability check: every shift must also solve the vanishing sum
        for member in &orbit {
            debug_assert!(
                s_k.contains(member),
                "shift left S_k: sigma is not stable on it"
            );
        }
        orbit_reps.push(tuple.clone());
        orbits.push(orbit);
    }
    let a_k = orbits.len() as u64;
    let (b_k, c_k) = if n % 2 == 1 && k % 2 == 0 {
        let mut b = 0u64;
        let mut c = 0u64;
        for orbit in &orbits {
            let v = v_orbit(&orbit[0]);
            if !v.is_empty() {
                b += 1;
                if weight(&orbit[0]) % 2 == 1 {
                    c += 1;
                }
            }
        }
        (Some(b), Some(c))
    } else {
        (None, None)
    };
    Ok(OrbitData { s_k, orbit_reps, a_k, b_k, c_k, degenerate: of.degenerate })
}

#[derive(Clone, Debug, Serialize)]
pub struct AInfDiagnostics {
    pub branch: String,
    pub warning: Option<String>,
}

/// `A_inf(n,k,T)` per the printed case analysis.
pub fn a_infty_factor(n: u32, k: u32, q: u64, p: u64, caps: &Caps) -> Result<(CycloPoly, AInfDiagnostics)> {
    let kn_half = || k * n / 2;
    if n % 2 == 1 && k % 2 == 1 {
        return Ok((
            CycloPoly::one(),
            AInfDiagnostics { branch: "n odd, k odd".into(), warning: None },
        ));
    }
    let data = orbit_data(n, k, p, caps)?;
    if n % 2 == 0 {
        let factors = if data.a_k > 0 {
            vec![CycloFactor { exponent: kn_half(), sign: 1, multiplicity: data.a_k }]
        } else {
            Vec::new()
        };
        return Ok((
            CycloPoly { factors },
            AInfDiagnostics { branch: "n even".into(), warning: None },
        ));
    }
    // n odd, k even
    let b = data.b_k.unwrap();
    let c = data.c_k.unwrap();
    let two_np1 = 2 * (n as u64 + 1);
    let cond1 = (q - 1) % two_np1 == 0;
    let cond2 = !cond1 && ((n + 1) % 4 == 0 || k % 4 == 0);
    let cond3 = !cond1 && (n + 1) % 4 == 0 && k % 4 == 0;
    let push = |fs: &mut Vec<CycloFactor>, sign: i8, mult: u64| {
        if mult > 0 {
            fs.push(CycloFactor { exponent: kn_half(), sign, multiplicity: mult });
        }
    };
    let mut factors = Vec::new();
    let (branch, warning);
    if cond1 {
        push(&mut factors, 1, b);
        branch = "n odd, k even: 2(n+1) | q-1".to_string();
        warning = None;
    } else if cond2 {
        push(&mut factors, -1, c);
        push(&mut factors, 1, b - c);
        branch = "n odd, k even: 2(n+1) does not divide q-1, and 4 | n+1 or 4 | k".to_string();
        warning = if cond3 {
            Some("third branch condition also holds but is shadowed by the second (the printed conditions overlap)".to_string())
        } else {
            None
        };
    } else if cond3 {
        push(&mut factors, 1, c);
        push(&mut factors, -1, b - c);
        branch = "n odd, k even: 2(n+1) does not divide q-1, 4 | n+1 and 4 | k".to_string();
        warning = None;
    } else {
        branch = "n odd, k even: no printed branch matches".to_string();
        warning = if b != 0 {
            Some(format!(
                "no branch of the printed case analysis covers 2(n+1) not dividing q-1 with 4 dividing neither n+1 nor k, and b_k = {b} is nonzero; factor left as 1"
            ))
        } else {
            Some("no printed branch matches, but b_k = 0 so every candidate factor is 1".to_string())
        };
    }
    Ok((CycloPoly { factors }, AInfDiagnostics { branch, warning }))
}

/// `B(n,k,T)`: `(1 - q^{kn/2} T)(1 - q^{(kn+2)/2} T)` when `p`, `k`, `n` are
/// all even, otherwise 1.
pub fn b_factor(n: u32, k: u32, p: u64) -> CycloPoly {
    if p % 2 == 0 && k % 2 == 0 && n % 2 == 0 {
        debug_assert!((k * n) % 2 == 0);
        CycloPoly {
            factors: vec![
                CycloFactor { exponent: k * n / 2, sign: 1, multiplicity: 1 },
                CycloFactor { exponent: (k * n + 2) / 2, sign: 1, multiplicity: 1 },
            ],
        }
    } else {
        CycloPoly::one()
    }
}

/// The assembled trivial factor with its parts and diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct TrivialFactor {
    pub n: u32,
    pub k: u32,
    pub q: u64,
    pub a0: CycloPoly,
    pub a_inf: CycloPoly,
    pub b: CycloPoly,
    pub orbit_data: OrbitData,
    pub a_inf_diagnostics: AInfDiagnostics,
    /// `A_0 A_inf / B` in reduced form
    pub p_reduced: RatFunc,
}

pub fn trivial_factor(n: u32, k: u32, q: u64, p: u64, caps: &Caps) -> Result<TrivialFactor> {
    let a0 = a0_factor(n, k)?;
    let (a_inf, diag) = a_infty_factor(n, k, q, p, caps)?;
    let b = b_factor(n, k, p);
    let data = orbit_data(n, k, p, caps)?;
    let num = a0.expand(q).mul(&a_inf.expand(q));
    let den = b.expand(q);
    let p_reduced = RatFunc::new_reduced(num, den)?;
    Ok(TrivialFactor {
        n,
        k,
        q,
        a0,
        a_inf,
        b,
        orbit_data: data,
        a_inf_diagnostics: diag,
        p_reduced,
    })
}

/// Cross-module consistency: `#S_k(n,p)` must equal the symmetric-power
/// obstruction count.
pub fn s_k_matches_obstruction(n: u32, k: u32, p: u64, caps: &Caps) -> Result<bool> {
    let data = orbit_data(n, k, p, caps)?;
    let d = linop::d_obstruction_general(&LinOp::sym(k), n, p, caps)?;
    Ok(data.s_k.len() as u64 == d.count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn mk_i64(n: u32, k: u32) -> Vec<i64> {
        mk_coefficients(n, k)
            .unwrap()
            .iter()
            .map(|c| num_traits::ToPrimitive::to_i64(c).unwrap())
            .collect()
    }

    #[test]
    fn mk_examples() {
        // n=1,k=2: ratio is 1 - x^3, window {0,1}
        assert_eq!(mk_i64(1, 2), vec![1, 0]);
        // n=1,k=3: ratio is 1 - x^4, window 0..floor(3/2): nonzero prefix (1)
        assert_eq!(mk_i64(1, 3), vec![1, 0]);
        // k=1: ratio is 1 - x^{n+1}, window 0..floor(n/2)
        assert_eq!(mk_i64(4, 1), vec![1, 0, 0]);
        // n=2,k=2: (1-x^3)(1-x^4)/(1-x^2) = (1+x^2-x^3-x^5), window {0,1,2}
        assert_eq!(mk_i64(2, 2), vec![1, 0, 1]);
        assert_eq!(mk_i64(1, 5), vec![1, 0, 0]);
    }

    #[test]
    fn a0_examples() {
        let a = a0_factor(1, 3).unwrap();
        assert_eq!(a.expand(2), IntPoly::from_i64(&[1, -1])); // (1 - T)
        let a = a0_factor(1, 2).unwrap();
        assert_eq!(a.expand(3), IntPoly::from_i64(&[1, -1]));
        // degree = sum of multiplicities
        let a = a0_factor(2, 2).unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(a.expand(3), IntPoly::from_i64(&[1, -1]).mul(&IntPoly::from_i64(&[1, -9])));
    }

    #[test]
    fn orbit_data_examples() {
        // n=1,k=2,p=3: S = {(1,1)}, one orbit, v = 0 so b = c = 0
        let d = orbit_data(1, 2, 3, &caps()).unwrap();
        assert_eq!(d.s_k, vec![vec![1, 1]]);
        assert_eq!(d.a_k, 1);
        assert_eq!((d.b_k, d.c_k), (Some(0), Some(0)));
        // n=1,k=3,p=3: S = {(3,0),(0,3)}, a single orbit, k odd: no b/c
        let d = orbit_data(1, 3, 3, &caps()).unwrap();
        assert_eq!(d.s_k.len(), 2);
        assert_eq!(d.a_k, 1);
        assert_eq!((d.b_k, d.c_k), (None, None));
        // d_k = 0 => S empty => a = 0
        let d = orbit_data(1, 3, 5, &caps()).unwrap();
        assert!(d.s_k.is_empty());
        assert_eq!(d.a_k, 0);
    }

    #[test]
    fn v_orbit_signs() {
        // v_{(1,1)} = -e^{(1,1)} + e^{(1,1)} = 0
        assert!(v_orbit(&[1, 1]).is_empty());
        // v_{(6,0)} = e^{(6,0)} + e^{(0,6)} (signs (+,+) since i_1 = 0)
        let v = v_orbit(&[6, 0]);
        assert_eq!(v.len(), 2);
        assert!(v.values().all(|&s| s == 1));
        // well-definedness: v_{sigma(i)} = (-1)^{i_n} v_i for k even
        for tuple in [[2u32, 2], [4, 0], [3, 1]] {
            let v1 = v_orbit(&tuple);
            let shifted = shift(&tuple);
            let v2 = v_orbit(&shifted);
            let sign = if tuple[1] % 2 == 0 { 1 } else { -1 };
            let rescaled: BTreeMap<Vec<u32>, i64> =
                v1.iter().map(|(k, &v)| (k.clone(), sign * v)).collect();
            assert_eq!(v2, rescaled, "tuple {tuple:?}");
        }
    }

    #[test]
    fn a_infty_cases() {
        // n odd, k odd: 1
        let (a, d) = a_infty_factor(1, 3, 2, 2, &caps()).unwrap();
        assert_eq!(a, CycloPoly::one());
        assert_eq!(d.branch, "n odd, k odd");
        // n=2,k=2,p=2,q=2: one orbit of the three doubled tuples: (1 - q^2 T)
        let (a, _) = a_infty_factor(2, 2, 2, 2, &caps()).unwrap();
        assert_eq!(a.expand(2), IntPoly::from_i64(&[1, -4]));
        // n=1,k=2,p=3: b = c = 0: factor 1 whatever the branch
        let (a, _) = a_infty_factor(1, 2, 3, 3, &caps()).unwrap();
        assert_eq!(a, CycloPoly::one());
        // n=2,k=2,p=3 (degenerate root): S empty, factor 1
        let (a, _) = a_infty_factor(2, 2, 3, 3, &caps()).unwrap();
        assert_eq!(a, CycloPoly::one());
    }

    #[test]
    fn a_infty_gap_is_reported() {
        // (n,k,q,p) = (1,6,3,3): no printed branch matches and b = 1
        let (a, d) = a_infty_factor(1, 6, 3, 3, &caps()).unwrap();
        assert_eq!(a, CycloPoly::one());
        assert!(d.warning.unwrap().contains("no branch"));
    }

    #[test]
    fn b_factor_cases() {
        let b = b_factor(2, 2, 2);
        assert_eq!(b.expand(2), IntPoly::from_i64(&[1, -4]).mul(&IntPoly::from_i64(&[1, -8])));
        assert_eq!(b_factor(2, 2, 3), CycloPoly::one());
        assert_eq!(b_factor(1, 2, 2), CycloPoly::one());
    }

    #[test]
    fn trivial_factor_with_cancellation() {
        // (p,n,k) = (2,2,2), q = 2: P = (1-T)(1-4T)^2 / ((1-4T)(1-8T))
        // reduces to (1-T)(1-4T)/(1-8T)
        let t = trivial_factor(2, 2, 2, 2, &caps()).unwrap();
        let expect_num = IntPoly::from_i64(&[1, -1]).mul(&IntPoly::from_i64(&[1, -4]));
        assert_eq!(t.p_reduced.num, expect_num);
        assert_eq!(t.p_reduced.den, IntPoly::from_i64(&[1, -8]));
        // battery configs: P is a polynomial
        for (n, k, q, p) in [(1u32, 3u32, 2u64, 2u64), (1, 5, 2, 2), (1, 3, 5, 5), (2, 2, 3, 3)] {
            let t = trivial_factor(n, k, q, p, &caps()).unwrap();
            assert!(t.p_reduced.is_polynomial(), "(n,k,q) = ({n},{k},{q})");
        }
    }

    #[test]
    fn s_k_count_equals_obstruction_count() {
        for (n, k, p) in [(1u32, 2u32, 3u64), (1, 3, 3), (2, 2, 2), (1, 4, 5), (3, 2, 3), (1, 6, 3)] {
            assert!(s_k_matches_obstruction(n, k, p, &caps()).unwrap(), "({n},{k},{p})");
        }
    }
}
