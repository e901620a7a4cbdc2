//! Finite linear algebra over `F_q[t]` for the reduced symmetric-power
//! complex: the cyclic matrix `G` (`e_i -> e_{i+1}` for `i < n`,
//! `e_n -> t e_0`), its derivation `nabla_G` on the k-th symmetric power, the
//! twisted differential `t d/dt + nabla_G`, weight-graded cokernels, and
//! extraction of a basis of constant vectors.
//!
//! The module `Sym^k` over `F_q[t]` has basis monomials `t^r e^i` graded by
//! `W(r, i) = (n+1) r + w(i)` with `w(i) = sum j i_j`; `nabla_G` is
//! homogeneous of weight 1, so everything decomposes into finite blocks per
//! weight. Blocks of weight above `nk` repeat with period `n+1` (every
//! monomial there is divisible by `t`, and `t` is an invertible weight-(n+1)
//! shift commuting with `nabla_G`), so ranks are computed once on
//! `N <= nk + n + 1` and extended periodically.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linop::next_composition;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// Basis data of `Sym^k` of the rank-(n+1) module.
pub struct GradedSymModule {
    pub n: u32,
    pub k: u32,
    pub field: Arc<Field>,
    /// all compositions of k into n+1 parts
    pub comps: Vec<Vec<u32>>,
    comp_index: HashMap<Vec<u32>, usize>,
    /// w(i) per composition
    pub weights: Vec<u32>,
}

/// A monomial `t^r e^i`, identified by the composition index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub r: u32,
    pub comp: usize,
}

impl GradedSymModule {
    pub fn new(field: Arc<Field>, n: u32, k: u32) -> Self {
        let mut comps = Vec::new();
        let mut comp = vec![0u32; n as usize + 1];
        comp[0] = k;
        loop {
            comps.push(comp.clone());
            if !next_composition(&mut comp) {
                break;
            }
        }
        comps.sort();
        let comp_index = comps
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let weights = comps
            .iter()
            .map(|c| c.iter().enumerate().map(|(j, &x)| j as u32 * x).sum())
            .collect();
        GradedSymModule { n, k, field, comps, comp_index, weights }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        (self.n + 1) * m.r + self.weights[m.comp]
    }

    /// Basis monomials of homogeneous weight `w`, sorted by (r, composition).
    pub fn monomials_of_weight(&self, w: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (ci, &cw) in self.weights.iter().enumerate() {
            if cw <= w && (w - cw) % (self.n + 1) == 0 {
                out.push(Monomial { r: (w - cw) / (self.n + 1), comp: ci });
            }
        }
        out.sort();
        out
    }

    /// `nabla_G(t^r e^i)` by the Leibniz rule: terms `(coefficient, monomial)`.
    pub fn nabla(&self, m: &Monomial) -> Vec<(u64, Monomial)> {
        let p = self.field.p();
        let comp = &self.comps[m.comp];
        let n = self.n as usize;
        let mut out = Vec::new();
        for j in 0..=n {
            let ij = comp[j];
            if ij == 0 || ij as u64 % p == 0 {
                continue;
            }
            let mut target = comp.clone();
            target[j] -= 1;
            let (tr, slot) = if j < n { (m.r, j + 1) } else { (m.r + 1, 0) };
            target[slot] += 1;
            let ti = self.comp_index[&target];
            out.push((ij as u64 % p, Monomial { r: tr, comp: ti }));
        }
        out
    }

    /// `(t d/dt + nabla_G)(t^r e^i)`.
    pub fn partial1(&self, m: &Monomial) -> Vec<(u64, Monomial)> {
        let p = self.field.p();
        let mut out = self.nabla(m);
        let rc = m.r as u64 % p;
        if rc != 0 {
            out.push((rc, *m));
        }
        out
    }
}

/// Matrices of `nabla_G` per weight, from the weight-`N` block to the
/// weight-`N+1` block, in the monomial basis.
#[derive(Serialize)]
pub struct GradedMap {
    pub n: u32,
    pub k: u32,
    pub n_max: u32,
    /// `blocks[N]` = (source dim, target dim, entries as (row, col, coeff))
    pub blocks: Vec<BlockMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockMatrix {
    pub weight: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, u64)>,
    pub rank: usize,
}

fn block_rank(field: &Field, rows: usize, cols: usize, entries: &[(usize, usize, u64)]) -> usize {
    // dense Gaussian elimination over F_q (entries here lie in the prime field)
    let mut mat = vec![vec![field.zero(); cols]; rows];
    for &(r, c, v) in entries {
        mat[r][c] = field.from_int(v);
    }
    gaussian_rank(field, &mut mat)
}

fn gaussian_rank(field: &Field, mat: &mut [Vec<FieldElem>]) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !mat[r][c].is_zero()) else { continue };
        mat.swap(rank, pr);
        let inv = field.inv(&mat[rank][c]).expect("pivot nonzero");
        for cc in 0..cols {
            mat[rank][cc] = field.mul(&mat[rank][cc], &inv);
        }
        for r in 0..rows {
            if r != rank && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for cc in 0..cols {
                    let sub = field.mul(&f, &mat[rank][cc]);
                    mat[r][cc] = field.sub(&mat[r][cc], &sub);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact matrices of `nabla_G` for all weights `<= n_max` (clamped up to the
/// stabilization window `nk + n + 1`).
pub fn nabla_matrix(sm: &GradedSymModule, n_max: u32) -> GradedMap {
    let window = sm.n * sm.k + sm.n + 1;
    let n_max = n_max.max(window);
    let mut blocks = Vec::new();
    for w in 0..=n_max {
        let src = sm.monomials_of_weight(w);
        let dst = sm.monomials_of_weight(w + 1);
        let dst_index: HashMap<Monomial, usize> =
            dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut entries = Vec::new();
        for (col, m) in src.iter().enumerate() {
            for (coef, tm) in sm.nabla(m) {
                let row = dst_index[&tm];
                entries.push((row, col, coef));
            }
        }
        let rank = block_rank(&sm.field, dst.len(), src.len(), &entries);
        blocks.push(BlockMatrix { weight: w, rows: dst.len(), cols: src.len(), entries, rank });
    }
    GradedMap { n: sm.n, k: sm.k, n_max, blocks }
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub injective: bool,
    pub kernel_weights: Vec<u32>,
    pub window: u32,
}

/// Is `nabla_G` injective? Full column rank on every weight block up to the
/// stabilization window.
pub fn injectivity_report(sm: &GradedSymModule, n_max: u32) -> InjectivityReport {
    let map = nabla_matrix(sm, n_max);
    let kernel_weights: Vec<u32> = map
        .blocks
        .iter()
        .filter(|b| b.rank < b.cols)
        .map(|b| b.weight)
        .collect();
    InjectivityReport {
        injective: kernel_weights.is_empty(),
        kernel_weights,
        window: map.n_max,
    }
}

/// Dimensions of the weight-graded cokernel of `nabla_G` (the weight-`N`
/// piece of `Sym^k (dt/t) / image`).
pub fn coker_dimensions(sm: &GradedSymModule, n_max: u32) -> Vec<u64> {
    let map = nabla_matrix(sm, n_max);
    let mut dims = Vec::with_capacity(map.blocks.len());
    for w in 0..=map.n_max {
        let dim_target = sm.monomials_of_weight(w).len();
        let rank_in = if w == 0 { 0 } else { map.blocks[w as usize - 1].rank };
        dims.push((dim_target - rank_in) as u64);
    }
    dims
}

/// Greedy extraction of a constant basis of the cokernel: per weight, prefer
/// t-degree-0 monomials `e^i` in lexicographic exponent order; spanning and
/// independence are verified, a deficit is a hard error with the failing
/// weight as witness.
pub fn constant_basis(sm: &GradedSymModule) -> Result<Vec<Vec<u32>>> {
    let field = &sm.field;
    let nk = sm.n * sm.k;
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    for w in 0..=nk {
        let dst = sm.monomials_of_weight(w);
        let dim = dst.len();
        if dim == 0 {
            continue;
        }
        let dst_index: HashMap<Monomial, usize> =
            dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        // columns of the incoming nabla block
        let src = if w == 0 { Vec::new() } else { sm.monomials_of_weight(w - 1) };
        let mut cols: Vec<Vec<FieldElem>> = Vec::new();
        for m in &src {
            let mut v = vec![field.zero(); dim];
            for (coef, tm) in sm.nabla(m) {
                v[dst_index[&tm]] = field.from_int(coef);
            }
            cols.push(v);
        }
        let mut mat: Vec<Vec<FieldElem>> = transpose(field, &cols, dim);
        let base_rank = gaussian_rank(field, &mut mat);
        // candidate constant monomials at this weight, in lex exponent order
        let mut cands: Vec<usize> = (0..sm.comps.len())
            .filter(|&ci| sm.weights[ci] == w)
            .collect();
        cands.sort_by(|&x, &y| sm.comps[x].cmp(&sm.comps[y]));
        let mut rank = base_rank;
        for ci in cands {
            if rank == dim {
                break;
            }
            let mono = Monomial { r: 0, comp: ci };
            let mut v = vec![field.zero(); dim];
            v[dst_index[&mono]] = field.one();
            cols.push(v);
            let mut mat = transpose(field, &cols, dim);
            let new_rank = gaussian_rank(field, &mut mat);
            if new_rank > rank {
                rank = new_rank;
                chosen.push(sm.comps[ci].clone());
            } else {
                cols.pop();
            }
        }
        if rank < dim {
            return Err(Error::ConstantBasisDeficit { weight: w });
        }
    }
    Ok(chosen)
}

fn transpose(field: &Field, cols: &[Vec<FieldElem>], dim: usize) -> Vec<Vec<FieldElem>> {
    let mut mat = vec![vec![field.zero(); cols.len()]; dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            mat[r][c] = v.clone();
        }
    }
    mat
}

/// A finite `F_q[t]`-combination of basis monomials.
pub type Element = Vec<(FieldElem, Monomial)>;

#[derive(Debug, Serialize)]
pub struct Reduction {
    /// coordinates on the constant basis, as (exponent tuple, coefficient)
    pub coords: Vec<(Vec<u32>, Vec<u64>)>,
    /// certificate: `xi - sum coords = (t d/dt + nabla_G)(zeta)`
    pub certificate: Vec<(Vec<u64>, u32, Vec<u32>)>,
}

/// Express the class of `xi` modulo the image of `t d/dt + nabla_G` in the
/// constant basis, solving the filtered linear system up to the weight of `xi`.
pub fn partial1_reduce(sm: &GradedSymModule, xi: &Element) -> Result<(Vec<(Vec<u32>, FieldElem)>, Element)> {
    let field = &sm.field;
    let basis = constant_basis(sm)?;
    let nmax = xi.iter().map(|(_, m)| sm.weight(m)).max().unwrap_or(0);
    // unknowns: zeta over monomials of weight <= N-1, plus coefficients on
    // basis tuples of weight <= N
    let mut zeta_monos: Vec<Monomial> = Vec::new();
    for w in 0..nmax {
        zeta_monos.extend(sm.monomials_of_weight(w));
    }
    let basis_monos: Vec<Monomial> = basis
        .iter()
        .filter(|c| {
            let w: u32 = c.iter().enumerate().map(|(j, &x)| j as u32 * x).sum();
            w <= nmax
        })
        .map(|c| Monomial { r: 0, comp: *sm.comp_index.get(c).unwrap() })
        .collect();
    // equations over monomials of weight <= N
    let mut eq_monos: Vec<Monomial> = Vec::new();
    for w in 0..=nmax {
        eq_monos.extend(sm.monomials_of_weight(w));
    }
    let eq_index: HashMap<Monomial, usize> =
        eq_monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let rows = eq_monos.len();
    let cols = zeta_monos.len() + basis_monos.len();
    let mut mat = vec![vec![field.zero(); cols + 1]; rows];
    for (c, m) in zeta_monos.iter().enumerate() {
        for (coef, tm) in sm.partial1(m) {
            if let Some(&r) = eq_index.get(&tm) {
                let add = field.from_int(coef);
                mat[r][c] = field.add(&mat[r][c], &add);
            }
        }
    }
    for (bi, m) in basis_monos.iter().enumerate() {
        let r = eq_index[m];
        let c = zeta_monos.len() + bi;
        mat[r][c] = field.one();
    }
    for (coef, m) in xi {
        let r = *eq_index
            .get(m)
            .ok_or_else(|| Error::Internal("element outside the filtration".into()))?;
        mat[r][cols] = field.add(&mat[r][cols], coef);
    }
    // solve
    let sol = solve_affine(field, &mut mat, cols).ok_or(Error::ReductionInconsistent)?;
    let zeta: Element = zeta_monos
        .iter()
        .enumerate()
        .filter(|(i, _)| !sol[*i].is_zero())
        .map(|(i, &m)| (sol[i].clone(), m))
        .collect();
    let coords: Vec<(Vec<u32>, FieldElem)> = basis_monos
        .iter()
        .enumerate()
        .filter(|(i, _)| !sol[zeta_monos.len() + *i].is_zero())
        .map(|(i, m)| (sm.comps[m.comp].clone(), sol[zeta_monos.len() + i].clone()))
        .collect();
    // verify: coords + partial1(zeta) reproduces xi
    let mut check: HashMap<Monomial, FieldElem> = HashMap::new();
    for (coef, m) in &zeta {
        for (c2, tm) in sm.partial1(m) {
            let term = field.scalar_mul(c2, coef);
            let e = check.entry(tm).or_insert_with(|| field.zero());
            *e = field.add(e, &term);
        }
    }
    for (comp, coef) in &coords {
        let m = Monomial { r: 0, comp: sm.comp_index[comp] };
        let e = check.entry(m).or_insert_with(|| field.zero());
        *e = field.add(e, coef);
    }
    for (coef, m) in xi {
        let e = check.entry(*m).or_insert_with(|| field.zero());
        *e = field.sub(e, coef);
    }
    if check.values().any(|v| !v.is_zero()) {
        return Err(Error::Internal("reduction certificate fails to reproduce the element".into()));
    }
    Ok((coords, zeta))
}

fn solve_affine(field: &Field, mat: &mut [Vec<FieldElem>], cols: usize) -> Option<Vec<FieldElem>> {
    let rows = mat.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !mat[r][c].is_zero()) else { continue };
        mat.swap(rank, pr);
        let inv = field.inv(&mat[rank][c]).ok()?;
        for cc in 0..=cols {
            mat[rank][cc] = field.mul(&mat[rank][cc], &inv);
        }
        for r in 0..rows {
            if r != rank && !mat[r][c].is_zero() {
                let f = mat[r][c].clone();
                for cc in 0..=cols {
                    let sub = field.mul(&f, &mat[rank][cc]);
                    mat[r][cc] = field.sub(&mat[r][cc], &sub);
                }
            }
        }
        pivots.push((rank, c));
        rank += 1;
    }
    for row in mat.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![field.zero(); cols];
    for (r, c) in pivots {
        sol[c] = mat[r][cols].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;

    fn module(p: u64, a: u32, n: u32, k: u32) -> GradedSymModule {
        let field = Arc::new(Field::new(p, a, 0, &Caps::default()).unwrap());
        GradedSymModule::new(field, n, k)
    }

    #[test]
    fn nabla_leibniz_in_char_2() {
        // n=1, k=3 over F_2: nabla(e0^3) = e0^2 e1, nabla(e0^2 e1) = t e0^3
        let sm = module(2, 1, 1, 3);
        let e03 = Monomial { r: 0, comp: sm.comps.iter().position(|c| c == &[3, 0]).unwrap() };
        let out = sm.nabla(&e03);
        assert_eq!(out.len(), 1);
        assert_eq!(sm.comps[out[0].1.comp], vec![2, 1]);
        assert_eq!(out[0].0, 1); // 3 = 1 mod 2
        let e021 = Monomial { r: 0, comp: sm.comps.iter().position(|c| c == &[2, 1]).unwrap() };
        let out = sm.nabla(&e021);
        // 2 e0 e1^2 vanishes mod 2; remaining term is t e0^3
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].1.r, 1);
        assert_eq!(sm.comps[out[0].1.comp], vec![3, 0]);
    }

    #[test]
    fn nabla_is_weight_one() {
        let sm = module(3, 1, 2, 2);
        for w in 0..10 {
            for m in sm.monomials_of_weight(w) {
                for (_, tm) in sm.nabla(&m) {
                    assert_eq!(sm.weight(&tm), w + 1);
                }
            }
        }
    }

    #[test]
    fn k1_matrix_is_companion_with_t() {
        // k = 1: the matrix of G itself; one basis vector per weight
        let sm = module(5, 1, 2, 1);
        let map = nabla_matrix(&sm, 5);
        for b in &map.blocks {
            assert!(b.cols <= 1);
            if b.cols == 1 {
                assert_eq!(b.rank, 1);
            }
        }
    }

    #[test]
    fn injectivity_cases() {
        // (1,3,F_2): injective
        assert!(injectivity_report(&module(2, 1, 1, 3), 6).injective);
        // (1,2,any p): never injective
        for p in [2u64, 3, 5, 7] {
            let rep = injectivity_report(&module(p, 1, 1, 2), 6);
            assert!(!rep.injective, "p={p}");
        }
        // (1,3,F_3): not injective (obstruction count 2)
        let rep = injectivity_report(&module(3, 1, 1, 3), 6);
        assert!(!rep.injective);
        // (2,2,F_3): injective (degenerate obstruction count 0)
        assert!(injectivity_report(&module(3, 1, 2, 2), 10).injective);
    }

    #[test]
    fn coker_dims_match_q_polynomial() {
        // (1,3,F_2): Q(T) = 1 + T^2 -> dims (1,0,1,0,...)
        let dims = coker_dimensions(&module(2, 1, 1, 3), 6);
        assert_eq!(&dims[..4], &[1, 0, 1, 0]);
        assert!(dims[4..].iter().all(|&d| d == 0));
        // (2,2,F_3): total 2 = (1/3) C(4,2)
        let dims = coker_dimensions(&module(3, 1, 2, 2), 10);
        assert_eq!(dims.iter().sum::<u64>(), 2);
        assert_eq!(&dims[..3], &[1, 0, 1]);
        // (1,5,F_2): Q = 1 + T^2 + T^4
        let dims = coker_dimensions(&module(2, 1, 1, 5), 8);
        assert_eq!(&dims[..5], &[1, 0, 1, 0, 1]);
        assert_eq!(dims.iter().sum::<u64>(), 3);
    }

    #[test]
    fn constant_basis_examples() {
        // (1,3,F_2): B_3 = {e0^3, e0 e1^2}
        let b = constant_basis(&module(2, 1, 1, 3)).unwrap();
        assert_eq!(b, vec![vec![3, 0], vec![1, 2]]);
        // #B_k = (1/(n+1)) C(n+k, n)
        let b = constant_basis(&module(3, 1, 2, 2)).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b, vec![vec![2, 0, 0], vec![0, 2, 0]]);
        // k = 1: single basis vector e_0, cokernel concentrated in weight 0
        for (p, n) in [(2u64, 2u32), (3, 1), (5, 3)] {
            let b = constant_basis(&module(p, 1, n, 1)).unwrap();
            let mut expect = vec![0u32; n as usize + 1];
            expect[0] = 1;
            assert_eq!(b, vec![expect], "p={p} n={n}");
        }
    }

    #[test]
    fn reduce_basis_element_is_identity() {
        let sm = module(2, 1, 1, 3);
        let ci = sm.comps.iter().position(|c| c == &[1, 2]).unwrap();
        let xi: Element = vec![(sm.field.one(), Monomial { r: 0, comp: ci })];
        let (coords, zeta) = partial1_reduce(&sm, &xi).unwrap();
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[0].0, vec![1, 2]);
        assert!(zeta.is_empty());
    }

    #[test]
    fn reduce_t_times_basis() {
        // t e0^3 lies in the image: t e0^3 = partial1(e0^2 e1) in char 2
        let sm = module(2, 1, 1, 3);
        let ci = sm.comps.iter().position(|c| c == &[3, 0]).unwrap();
        let xi: Element = vec![(sm.field.one(), Monomial { r: 1, comp: ci })];
        let (coords, zeta) = partial1_reduce(&sm, &xi).unwrap();
        assert!(coords.is_empty(), "coords = {coords:?}");
        assert!(!zeta.is_empty());
    }

    #[test]
    fn reduce_image_of_partial_is_zero() {
        let sm = module(3, 1, 1, 3);
        // xi = partial1(t e0^2 e1): must reduce to zero coordinates
        let ci = sm.comps.iter().position(|c| c == &[2, 1]).unwrap();
        let src = Monomial { r: 1, comp: ci };
        let xi: Element = sm
            .partial1(&src)
            .into_iter()
            .map(|(c, m)| (sm.field.from_int(c), m))
            .collect();
        let (coords, _) = partial1_reduce(&sm, &xi).unwrap();
        assert!(coords.is_empty());
    }

    #[test]
    fn injectivity_matches_obstruction_count() {
        use crate::linop::{d_obstruction_general, LinOp};
        // biconditional at desk scale, both signs included
        for (p, n, k) in [
            (2u64, 1u32, 1u32), (2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 1, 5),
            (3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 3),
            (2, 2, 2), (3, 2, 2), (3, 2, 3), (5, 2, 2), (2, 3, 2), (3, 3, 2),
        ] {
            let inj = injectivity_report(&module(p, 1, n, k), n * k + n + 1).injective;
            let d = d_obstruction_general(&LinOp::sym(k), n, p, &Caps::default())
                .unwrap()
                .count;
            assert_eq!(inj, d == 0, "(p,n,k) = ({p},{n},{k}): inj={inj}, d={d}");
        }
    }
}
