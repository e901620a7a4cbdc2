//! The family L-function `L(L Kl_n / F_q, T)`: integer log-coefficients from
//! per-fiber traces, exponential assembly into a power series, exact rational
//! reconstruction, and the split into trivial factor times pure part.
//!
//! Two independent assembly routes are provided: the rational-point route
//! `c_m = sum over t in F_{q^m}^* of Tr L(m-Frobenius at t)` (the production
//! path) and the closed-point product of fiber determinants (the small-scale
//! cross-check).

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::expsum::{self, Session};
use crate::fiber;
use crate::linop::{self, DObstruction, LinOp};
use crate::poly::{IntPoly, IntSeries, RatFunc};
use crate::polygon::{self, HodgeData, HullComparison, Polygon};
use crate::trivial::{self, TrivialFactor};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// `c_1..c_D` with `c_m = sum_{t in F_{q^m}^*} Tr L(alpha_t over F_{q^m})`,
/// each verified to be a rational integer.
pub fn log_coefficients(sess: &Session, p: u64, a: u32, n: u32, op: &LinOp, d_max: usize) -> Result<Vec<BigInt>> {
    let m_total = op.total_degree() as usize;
    let j_max = (m_total as u32).min(n + 1);
    let mut out = Vec::with_capacity(d_max);
    for m in 1..=d_max {
        let tab = expsum::batch_power_sums(sess, p, a, m as u32, j_max, n)?;
        let mut acc = CycInt::zero(p);
        for psums in &tab.psums {
            let extended;
            let ps: &[CycInt] = if m_total > psums.len() {
                extended = fiber::extend_power_sums(psums, m_total)?;
                &extended
            } else {
                psums
            };
            acc = acc.add(&linop::trace_from_power_sums(op, ps)?)?;
        }
        let c = acc
            .is_rational_integer()
            .ok_or(Error::NonIntegerCoefficient { index: m })?;
        out.push(c);
    }
    Ok(out)
}

/// `exp(sum c_m T^m / m)` as an integer series: `m a_m = sum_{j<=m} c_j a_{m-j}`.
pub fn exp_series(c: &[BigInt]) -> Result<IntSeries> {
    let mut a = vec![BigInt::one()];
    for m in 1..=c.len() {
        let mut acc = BigInt::zero();
        for j in 1..=m {
            acc += &c[j - 1] * &a[m - j];
        }
        let (q, r) = num_integer::Integer::div_rem(&acc, &BigInt::from(m));
        if !r.is_zero() {
            return Err(Error::NonIntegerCoefficient { index: m });
        }
        a.push(q);
    }
    IntSeries::new(a)
}

/// Solve `den * series = num mod T^(D+1)` with `deg num <= num_deg`,
/// `deg den <= den_deg`, `den(0) = 1`; verify against every computed
/// coefficient and return the reduced form.
pub fn reconstruct(series: &IntSeries, num_deg: usize, den_deg: usize, guard: usize) -> Result<RatFunc> {
    let d = series.order();
    if d < num_deg + den_deg + guard {
        return Err(Error::NoReconstruction { num: num_deg, den: den_deg });
    }
    let s = &series.coeffs;
    // unknowns d_1..d_{den_deg}; rows from coefficients num_deg+1..D
    let rows = d - num_deg;
    let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for m in (num_deg + 1)..=d {
        let mut row: Vec<BigRational> = (1..=den_deg)
            .map(|j| {
                if m >= j {
                    BigRational::from_integer(s[m - j].clone())
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        row.push(BigRational::from_integer(-s[m].clone()));
        mat.push(row);
    }
    // exact Gaussian elimination
    let ncols = den_deg;
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let pr = (r..mat.len()).find(|&i| !mat[i][c].is_zero());
        let Some(pr) = pr else { continue };
        mat.swap(r, pr);
        let pv = mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for cc in 0..=ncols {
                    let sub = &f * &mat[r][cc];
                    mat[i][cc] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in mat.iter().skip(r) {
        if !row[ncols].is_zero() {
            return Err(Error::NoReconstruction { num: num_deg, den: den_deg });
        }
    }
    let mut dcoef = vec![BigRational::zero(); den_deg + 1];
    dcoef[0] = BigRational::one();
    for (i, &c) in pivots.iter().enumerate() {
        dcoef[c + 1] = mat[i][ncols].clone();
    }
    // numerator = den * series truncated at num_deg
    let mut ncoef = vec![BigRational::zero(); num_deg + 1];
    for (m, nc) in ncoef.iter_mut().enumerate() {
        let mut acc = BigRational::zero();
        for j in 0..=den_deg.min(m) {
            acc += &dcoef[j] * BigRational::from_integer(s[m - j].clone());
        }
        *nc = acc;
    }
    // clear denominators and verify integrality of the normalized pair
    let lcm = dcoef
        .iter()
        .chain(&ncoef)
        .map(|x| x.denom().clone())
        .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
    let num = IntPoly::new(ncoef.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect());
    let den = IntPoly::new(dcoef.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect());
    // strip the common content (the lcm scale), restoring constant terms 1
    let g = num_integer::Integer::gcd(&num.content(), &den.content());
    let num = IntPoly::new(num.coeffs().iter().map(|c| c / &g).collect());
    let den = IntPoly::new(den.coeffs().iter().map(|c| c / &g).collect());
    if !num.coeff(0).is_one() || !den.coeff(0).is_one() {
        return Err(Error::NoReconstruction { num: num_deg, den: den_deg });
    }
    let rf = RatFunc::new_reduced(num, den)?;
    // verification against all computed coefficients
    let back = rf.series(d + 1)?;
    if back != s[..] {
        return Err(Error::NoReconstruction { num: num_deg, den: den_deg });
    }
    Ok(rf)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub passed: bool,
    pub expected: u64,
    pub found: u64,
    pub is_polynomial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PureWeilCheck {
    pub passed: bool,
    pub weight: u32,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

/// Everything `assemble` produces: the L-function, its factorization through
/// the trivial factor, polygons, and the theorem checks.
#[derive(Clone, Debug, Serialize)]
pub struct Assembly {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    pub op: String,
    pub d_obstruction: DObstruction,
    pub truncation: usize,
    pub series: IntSeries,
    pub l: RatFunc,
    pub trivial: Option<TrivialFactor>,
    /// pure part `M = L / P` (symmetric powers only)
    pub m_pure: Option<RatFunc>,
    pub hodge: HodgeData,
    pub hodge_polygon: Option<Polygon>,
    pub newton_polygon_l: Option<Polygon>,
    pub comparison: Option<HullComparison>,
    pub degree_check: Option<DegreeCheck>,
    pub weil_m: Option<PureWeilCheck>,
    pub stable: bool,
    pub warnings: Vec<String>,
}

/// Degree of the L-function predicted by the acyclicity theorem: `#J / (n+1)`.
pub fn theorem_degree(op: &LinOp, n: u32) -> Result<Option<u64>> {
    let j = op.index_count(n)?;
    let (q, r) = num_integer::Integer::div_rem(&j, &BigInt::from(n + 1));
    Ok(if r.is_zero() { q.to_u64() } else { None })
}

/// Assemble the L-function of the operation over `F_{p^a}`.
///
/// When the obstruction count vanishes the theorem pins the degree, so the
/// series is computed to `#J/(n+1) + 3` terms; otherwise truncation bounds
/// start from the trivial-factor degrees and escalate until two successive
/// reconstructions agree.
pub fn assemble(sess: &Session, p: u64, a: u32, n: u32, op: &LinOp) -> Result<Assembly> {
    let q = p.pow(a);
    let mut warnings = Vec::new();
    let d_info = linop::d_obstruction_general(op, n, p, &sess.caps)?;
    if d_info.degenerate {
        warnings.push(format!(
            "p = {p} divides n+1 = {}: obstruction count uses the degenerate root of order {}",
            n + 1,
            d_info.root_order
        ));
    }
    let thm_deg = theorem_degree(op, n)?;
    let triv = match op.as_pure_sym() {
        Some(k) => Some(trivial::trivial_factor(n, k, q, p, &sess.caps)?),
        None => None,
    };
    if let Some(t) = &triv {
        if let Some(w) = &t.a_inf_diagnostics.warning {
            warnings.push(format!("A_inf: {w}"));
        }
    }

    // truncation bounds
    let guard = 3usize;
    let (mut num_deg, mut den_deg) = if d_info.count == 0 && thm_deg.is_some() {
        (thm_deg.unwrap() as usize, 0usize)
    } else if let Some(t) = &triv {
        let p_deg = t.a0.degree() + t.a_inf.degree();
        let den = usize::from(!t.b.factors.is_empty());
        let pure = thm_deg.unwrap_or_else(|| {
            (op.index_count(n).unwrap().to_u64().unwrap_or(0) + n as u64) / (n as u64 + 1)
        }) as usize;
        (p_deg as usize + pure, den)
    } else {
        let pure = (op.index_count(n)?.to_u64().unwrap_or(8) as usize + n as usize) / (n as usize + 1);
        (pure + n as usize + 1, 1)
    };

    let mut attempt = 0;
    let (series, l, stable) = loop {
        let d_total = num_deg + den_deg + guard;
        let c = log_coefficients(sess, p, a, n, op, d_total)?;
        let series = exp_series(&c)?;
        let first = reconstruct(&series, num_deg, den_deg, guard);
        let second = first.as_ref().ok().and_then(|_| {
            reconstruct(&series.truncate(d_total - 2), num_deg, den_deg, guard.saturating_sub(2)).ok()
        });
        match (first, second) {
            (Ok(f), Some(sec)) if f == sec => break (series, f, true),
            (Ok(f), _) if attempt >= 2 => {
                warnings.push("reconstruction did not stabilize twice; reporting the last attempt".into());
                break (series, f, false);
            }
            _ if attempt >= 2 => {
                return Err(Error::NoReconstruction { num: num_deg, den: den_deg });
            }
            _ => {
                attempt += 1;
                num_deg += 2;
                den_deg = den_deg.max(1).min(den_deg + 1);
            }
        }
    };

    // pure part
    let m_pure = match &triv {
        Some(t) => {
            let m = l.div(&t.p_reduced)?;
            if !m.is_polynomial() {
                return Err(Error::TrivialFactorRemainder);
            }
            Some(m)
        }
        None => None,
    };

    // polygons and theorem checks
    let r = linop::r_poly(op, n)?;
    let hodge = polygon::hodge_numbers(&r, n)?;
    if !hodge.exact {
        warnings.push("R(T)/(1+T+...+T^n) has a remainder: Hodge polygon undefined, comparison skipped".into());
    }
    let hodge_poly = if hodge.exact { Some(polygon::hodge_polygon(&hodge)?) } else { None };
    let newton_l = if l.is_polynomial() {
        Some(polygon::newton_polygon(&l.num, p, a)?)
    } else {
        warnings.push("L is not a polynomial: no Newton polygon for the full L".into());
        None
    };
    let comparison = match (&newton_l, &hodge_poly) {
        (Some(np), Some(hp)) => Some(polygon::lies_on_or_above(np, hp)),
        _ => None,
    };
    let degree_check = thm_deg.filter(|_| d_info.count == 0).map(|expected| {
        let found = l.num.degree() as u64;
        DegreeCheck {
            passed: l.is_polynomial() && found == expected,
            expected,
            found,
            is_polynomial: l.is_polynomial(),
        }
    });
    let weil_m = m_pure.as_ref().and_then(|m| {
        if m.num.degree() == 0 {
            return None; // nothing to check
        }
        let weight = n * op.total_degree() + 1;
        let expected = (q as f64).powf(weight as f64 / 2.0);
        let coeffs: Vec<(f64, f64)> = m
            .num
            .coeffs()
            .iter()
            .map(|c| (c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        let roots = fiber::roots::durand_kerner(&coeffs).ok()?;
        let mut max_rel = 0.0f64;
        for (re, im) in roots {
            let pi_mod = 1.0 / (re * re + im * im).sqrt();
            max_rel = max_rel.max((pi_mod - expected).abs() / expected);
        }
        Some(PureWeilCheck {
            passed: max_rel <= 1e-9,
            weight,
            max_rel_error: max_rel,
            tolerance: 1e-9,
        })
    });

    Ok(Assembly {
        p,
        a,
        n,
        op: op.name(),
        d_obstruction: d_info,
        truncation: series.order(),
        series,
        l,
        trivial: triv,
        m_pure,
        hodge,
        hodge_polygon: hodge_poly,
        newton_polygon_l: newton_l,
        comparison,
        degree_check,
        weil_m,
        stable,
        warnings,
    })
}

/// Independent assembly through closed points: the truncation of
/// `prod over closed points of deg <= D of det(1 - L(companion) T^deg)^(-1)`.
pub fn closed_point_series(sess: &Session, p: u64, a: u32, n: u32, op: &LinOp, d_max: usize) -> Result<IntSeries> {
    let m_total = op.total_degree() as usize;
    // per-point traces live in Z[zeta_p]; only the aggregate per degree is rational
    let mut c = vec![CycInt::zero(p); d_max];
    for r in 1..=d_max as u32 {
        let reps = fiber::closed_points(sess, p, a, r)?;
        if reps.is_empty() {
            continue;
        }
        let tab = expsum::batch_power_sums(sess, p, a, r, n + 1, n)?;
        for rep in reps {
            let base = tab.power_sums(&rep)?;
            let smax = d_max / r as usize;
            let ext = fiber::extend_power_sums(base, m_total * smax.max(1))?;
            for s in 1..=smax {
                // power sums of the s-th power Frobenius: p_{s j}
                let ps: Vec<CycInt> = (1..=m_total).map(|j| ext[s * j - 1].clone()).collect();
                let tr = linop::trace_from_power_sums(op, &ps)?;
                let m = r as usize * s;
                c[m - 1] = c[m - 1].add(&tr.scalar_mul(&BigInt::from(r)))?;
            }
        }
    }
    let ints: Result<Vec<BigInt>> = c
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.is_rational_integer()
                .ok_or(Error::NonIntegerCoefficient { index: i + 1 })
        })
        .collect();
    exp_series(&ints?)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::config::Caps;

    fn sess() -> Session {
        let mut s = Session::new(Caps::default());
        s.caps.work_cap = 1 << 36; // the battery is opt-in past the default cap
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exp_series_examples() {
        assert_eq!(exp_series(&ints(&[0, 0, 0])).unwrap().coeffs, ints(&[1, 0, 0, 0]));
        assert_eq!(exp_series(&ints(&[1, 1])).unwrap().coeffs, ints(&[1, 1, 1]));
        // c_m = -1 for all m is log(1 - T)
        assert_eq!(
            exp_series(&ints(&[-1, -1, -1, -1])).unwrap().coeffs,
            ints(&[1, -1, 0, 0, 0])
        );
    }

    #[test]
    fn log_coefficients_sym1() {
        // Sym^1: c_m = -(full Kloosterman sum over fibers); q=2: c_1 = -1
        let s = sess();
        let c = log_coefficients(&s, 2, 1, 1, &LinOp::sym(1), 3).unwrap();
        assert_eq!(c, ints(&[-1, -1, -1]));
        // q=3, n=1: c_1 = p_1(1) + p_1(2) = 1 - 2 = -1
        let c = log_coefficients(&s, 3, 1, 1, &LinOp::sym(1), 2).unwrap();
        assert_eq!(c, ints(&[-1, -1]));
        // and L(Sym^1) = 1 - T
        let series = exp_series(&c).unwrap();
        let l = reconstruct(&series, 1, 0, 1).unwrap();
        assert_eq!(l.num, IntPoly::from_i64(&[1, -1]));
    }

    #[test]
    fn sym3_over_f2_log_coefficients() {
        // frozen from the independent enumeration: c = 3, -17, 63, -257, ...
        let s = sess();
        let c = log_coefficients(&s, 2, 1, 1, &LinOp::sym(3), 4).unwrap();
        assert_eq!(c, ints(&[3, -17, 63, -257]));
    }

    #[test]
    fn reconstruct_examples() {
        // series of (1 - 2T)/(1 - T) to D = 6
        let rf = RatFunc {
            num: IntPoly::from_i64(&[1, -2]),
            den: IntPoly::from_i64(&[1, -1]),
        };
        let series = IntSeries::new(rf.series(7).unwrap()).unwrap();
        let back = reconstruct(&series, 1, 1, 3).unwrap();
        assert_eq!(back, rf);
        // geometric series with bounds (0, 1)
        let series = IntSeries::new(ints(&[1, 1, 1, 1, 1])).unwrap();
        let back = reconstruct(&series, 0, 1, 3).unwrap();
        assert_eq!(back.den, IntPoly::from_i64(&[1, -1]));
        assert!(back.num.is_one());
        // polynomial input with bounds (deg, 0) returns itself
        let series = IntSeries::new(ints(&[1, 3, -4, 0, 0, 0])).unwrap();
        let back = reconstruct(&series, 2, 0, 3).unwrap();
        assert_eq!(back.num, IntPoly::from_i64(&[1, 3, -4]));
        // impossible bounds are reported
        assert!(matches!(
            reconstruct(&series, 0, 0, 3),
            Err(Error::NoReconstruction { .. })
        ));
    }

    #[test]
    fn assemble_sym3_f2() {
        // L = (1 - T)(1 + 4T), P = 1 - T, M = 1 + 4T
        let s = sess();
        let asm = assemble(&s, 2, 1, 1, &LinOp::sym(3)).unwrap();
        assert_eq!(asm.l.num, IntPoly::from_i64(&[1, 3, -4]));
        assert!(asm.l.is_polynomial());
        assert_eq!(asm.m_pure.as_ref().unwrap().num, IntPoly::from_i64(&[1, 4]));
        assert!(asm.degree_check.as_ref().unwrap().passed);
        assert_eq!(asm.degree_check.as_ref().unwrap().expected, 2);
        assert!(asm.stable);
        assert!(matches!(asm.comparison, Some(HullComparison::Above { .. })));
        assert!(asm.weil_m.as_ref().unwrap().passed);
        // Newton polygon of L: (0,0),(1,0),(2,2)
        let np = asm.newton_polygon_l.as_ref().unwrap();
        assert_eq!(np.vertices_i64().unwrap(), vec![(0, 0), (1, 0), (2, 2)]);
    }

    #[test]
    fn closed_point_oracle_matches_exp_series() {
        let s = sess();
        for (p, a, n, k, d) in [(2u64, 1u32, 1u32, 3u32, 4usize), (3, 1, 1, 2, 4), (2, 2, 1, 2, 3), (2, 1, 2, 2, 4)] {
            let op = LinOp::sym(k);
            let c = log_coefficients(&s, p, a, n, &op, d).unwrap();
            let direct = exp_series(&c).unwrap();
            let via_cp = closed_point_series(&s, p, a, n, &op, d).unwrap();
            assert_eq!(direct, via_cp, "(p,a,n,k) = ({p},{a},{n},{k})");
        }
    }
}
