//! Fiber L-factors: the degree-(n+1) polynomial
//! `prod_{i=0}^{n} (1 - pi_i(t) T)` over `Z[zeta_p]` whose reciprocal roots
//! are the Frobenius eigenvalues at the fiber `t`, built from power sums by
//! Newton identities, together with the classical checks: every complex
//! embedding of every `pi_i` has modulus `q_t^(n/2)`, and the `q_t`-adic
//! valuations of the `pi_i` are exactly `0, 1, ..., n`.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::expsum::{self, Session};
use crate::field::FieldElem;
use crate::linop;
use crate::polygon::Polygon;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

/// `prod (1 - pi_i(t) T)` with coefficients in `Z[zeta_p]`, `c_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberLFactor {
    pub p: u64,
    /// base field is F_q, q = p^a
    pub a: u32,
    /// degree of the fiber over F_q
    pub r: u32,
    pub n: u32,
    pub t: FieldElem,
    /// c_0..c_{n+1}, where c_s = (-1)^s e_s(pi_0..pi_n)
    pub coeffs: Vec<CycInt>,
}

impl FiberLFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `q_t = q^r`, the cardinality of the field generated by the fiber.
    pub fn q_t(&self) -> u64 {
        self.p.pow(self.a * self.r)
    }
}

/// Fiber polynomial from the power sums `p_j = (-1)^n T(t; q_t^j)`,
/// `j = 1..n+1`, via `s e_s = sum (-1)^(j-1) e_{s-j} p_j`.
pub fn fiber_polynomial_from_psums(
    p: u64,
    a: u32,
    r: u32,
    n: u32,
    t: FieldElem,
    psums: &[CycInt],
) -> Result<FiberLFactor> {
    let es = linop::elementary_all(psums, n as usize + 1)?;
    let coeffs: Vec<CycInt> = es
        .iter()
        .enumerate()
        .map(|(s, e)| if s % 2 == 1 { e.neg() } else { e.clone() })
        .collect();
    Ok(FiberLFactor { p, a, r, n, t, coeffs })
}

/// Fiber polynomial of the parameter `t` in `F_{q^r}`, `q = p^a`, computing
/// the required sums over `F_{q^{rj}}` for `j <= n+1`.
pub fn fiber_polynomial(sess: &Session, p: u64, a: u32, r: u32, t: &FieldElem, n: u32) -> Result<FiberLFactor> {
    if t.is_zero() {
        return Err(Error::ZeroFiber);
    }
    let base = sess.field(p, a * r)?;
    let sign_flip = n % 2 == 1;
    let mut psums = Vec::with_capacity(n as usize + 1);
    for j in 1..=(n + 1) {
        let amb = sess.field(p, a * r * j)?;
        let emb = amb.embed_from(&base, &sess.caps)?;
        let tj = emb.apply(&amb, t)?;
        let v = expsum::fiber_sum_naive(&amb, &tj, n, sess)?;
        psums.push(if sign_flip { v.neg() } else { v });
    }
    fiber_polynomial_from_psums(p, a, r, n, t.clone(), &psums)
}

/// Extend `p_1..p_{n+1}` to `p_1..p_upto` through the characteristic
/// polynomial recurrence `p_j = sum_{i=1}^{n+1} (-1)^(i-1) e_i p_{j-i}`.
pub fn extend_power_sums(psums: &[CycInt], upto: usize) -> Result<Vec<CycInt>> {
    let npl1 = psums.len();
    let es = linop::elementary_all(psums, npl1)?;
    let mut ps: Vec<CycInt> = psums.to_vec();
    while ps.len() < upto {
        let j = ps.len() + 1;
        let p = ps[0].p();
        let mut acc = CycInt::zero(p);
        for i in 1..=npl1 {
            let term = es[i].mul(&ps[j - i - 1])?;
            acc = if i % 2 == 0 { acc.sub(&term)? } else { acc.add(&term)? };
        }
        ps.push(acc);
    }
    Ok(ps)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilCheck {
    pub passed: bool,
    /// reciprocal-root moduli across every complex embedding
    pub moduli: Vec<f64>,
    /// worst relative deviation of |pi| from q_t^(n/2) over all embeddings
    pub max_rel_error: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeCheck {
    pub passed: bool,
    /// q_t-adic Newton slopes of the factor, as exact rationals
    pub slopes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingCheck {
    pub passed: bool,
    /// lambda-adic valuation of c_{n+1}, normalized so ord(p) = 1
    pub valuation: String,
    pub expected: String,
}

/// Report of the eigenvalue facts for one fiber.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub weil: WeilCheck,
    pub slopes: SlopeCheck,
    pub leading: LeadingCheck,
}

impl FiberReport {
    pub fn all_passed(&self) -> bool {
        self.weil.passed && self.slopes.passed && self.leading.passed
    }
}

/// Run the Weil-modulus, Newton-slope and leading-coefficient checks.
pub fn fiber_checks(f: &FiberLFactor, precision_bits: u32, rel_tol: f64) -> Result<FiberReport> {
    let qt = f.q_t() as f64;
    let expected_modulus = qt.powf(f.n as f64 / 2.0);

    // (i) complex moduli across every embedding of Z[zeta_p]
    let embedding_count = (f.p - 1) as usize;
    let mut max_rel = 0.0f64;
    let mut moduli = Vec::new();
    for e in 0..embedding_count {
        let coeffs: Vec<(f64, f64)> = f
            .coeffs
            .iter()
            .map(|c| c.complex_embeddings(precision_bits).0[e])
            .collect();
        let roots = roots::durand_kerner(&coeffs)?;
        for (re, im) in roots {
            let modulus = (re * re + im * im).sqrt();
            // reciprocal roots pi = 1/root
            let pi_mod = 1.0 / modulus;
            moduli.push(pi_mod);
            let rel = (pi_mod - expected_modulus).abs() / expected_modulus;
            max_rel = max_rel.max(rel);
        }
    }
    let weil = WeilCheck { passed: max_rel <= rel_tol, moduli, max_rel_error: max_rel, tolerance: rel_tol };

    // (ii) q_t-adic Newton polygon has slopes exactly 0, 1, ..., n
    let ar = (f.a * f.r) as i64;
    let mut pts = Vec::new();
    for (s, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = c.lambda_valuation()?;
        let ord = BigRational::new((*v.numer() as i64).into(), ((*v.denom() as i64) * ar).into());
        pts.push((BigRational::from_integer(s.into()), ord));
    }
    let np = Polygon::lower_hull(&pts)?;
    let want: Vec<BigRational> = (0..=f.n as i64).map(|s| BigRational::from_integer(s.into())).collect();
    let got: Vec<BigRational> = np
        .slopes()
        .iter()
        .flat_map(|(s, len)| {
            let mut v = Vec::new();
            if len.is_integer() {
                for _ in 0..len.to_integer().to_i64().unwrap_or(0) {
                    v.push(s.clone());
                }
            } else {
                v.push(BigRational::from_integer((-1).into()));
            }
            v
        })
        .collect();
    let slopes = SlopeCheck {
        passed: got == want,
        slopes: got.iter().map(|s| s.to_string()).collect(),
    };

    // (iii) c_{n+1} has valuation a r n(n+1)/2, i.e. |prod pi_i| = q_t^(n(n+1)/2)
    let lead = f.coeffs.last().unwrap();
    let expected = BigRational::from_integer(
        ((f.a * f.r) as i64 * (f.n as i64) * (f.n as i64 + 1) / 2).into(),
    );
    let leading = match lead.lambda_valuation() {
        Ok(v) => {
            let val = BigRational::new((*v.numer() as i64).into(), (*v.denom() as i64).into());
            LeadingCheck {
                passed: val == expected,
                valuation: val.to_string(),
                expected: expected.to_string(),
            }
        }
        Err(_) => LeadingCheck {
            passed: false,
            valuation: "infinite".into(),
            expected: expected.to_string(),
        },
    };

    Ok(FiberReport { weil, slopes, leading })
}

/// Representatives of the closed points of `G_m / F_q` of exact degree `r`:
/// Frobenius orbits `{t, t^q, ...}` of length `r` in `F_{q^r}^*`, represented
/// by the orbit element with the smallest coefficient vector.
pub fn closed_points(sess: &Session, p: u64, a: u32, r: u32) -> Result<Vec<FieldElem>> {
    let field = sess.field_with_tables(p, a * r)?;
    let l = field.size() - 1;
    let q = (p as u128).pow(a);
    let mut seen = vec![false; l as usize];
    let mut reps = Vec::new();
    for i in 0..l {
        if seen[i as usize] {
            continue;
        }
        // orbit of indices under multiplication by q
        let mut orbit = Vec::new();
        let mut cur = i;
        loop {
            seen[cur as usize] = true;
            orbit.push(cur);
            cur = ((cur as u128 * q) % l as u128) as u64;
            if cur == i {
                break;
            }
        }
        if orbit.len() != r as usize {
            continue; // proper subfield point
        }
        let g = field.generator();
        let rep = orbit
            .iter()
            .map(|&idx| field.pow(&g, idx as u128))
            .min_by(|x, y| x.coeffs.cmp(&y.coeffs))
            .unwrap();
        reps.push(rep);
    }
    reps.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
    Ok(reps)
}

/// Durand-Kerner simultaneous root finding on complex-embedded polynomials.
pub(crate) mod roots {
    use crate::error::{Error, Result};

    type Cx = (f64, f64);

    fn cmul(a: Cx, b: Cx) -> Cx {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn csub(a: Cx, b: Cx) -> Cx {
        (a.0 - b.0, a.1 - b.1)
    }

    fn cdiv(a: Cx, b: Cx) -> Cx {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    }

    fn cabs(a: Cx) -> f64 {
        (a.0 * a.0 + a.1 * a.1).sqrt()
    }

    fn eval(coeffs: &[Cx], z: Cx) -> Cx {
        let mut acc = (0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = cmul(acc, z);
            acc = (acc.0 + c.0, acc.1 + c.1);
        }
        acc
    }

    /// All roots of `sum coeffs[i] z^i` (leading coefficient nonzero).
    pub fn durand_kerner(coeffs: &[Cx]) -> Result<Vec<Cx>> {
        let deg = coeffs.len() - 1;
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = coeffs[deg];
        if cabs(lead) == 0.0 {
            return Err(Error::Internal("zero leading coefficient".into()));
        }
        let monic: Vec<Cx> = coeffs.iter().map(|&c| cdiv(c, lead)).collect();
        // radius guess from coefficient magnitudes
        let radius = 1.0
            + monic[..deg]
                .iter()
                .map(|&c| cabs(c))
                .fold(0.0, f64::max);
        let mut z: Vec<Cx> = (0..deg)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / deg as f64;
                (radius * theta.cos(), radius * theta.sin())
            })
            .collect();
        for _ in 0..200 {
            let mut worst = 0.0f64;
            for i in 0..deg {
                let mut denom = (1.0, 0.0);
                for j in 0..deg {
                    if i != j {
                        denom = cmul(denom, csub(z[i], z[j]));
                    }
                }
                let delta = cdiv(eval(&monic, z[i]), denom);
                z[i] = csub(z[i], delta);
                worst = worst.max(cabs(delta));
            }
            if worst < 1e-14 {
                break;
            }
        }
        Ok(z)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn quadratic_roots() {
            // z^2 - 3z + 2 = (z-1)(z-2)
            let roots = durand_kerner(&[(2.0, 0.0), (-3.0, 0.0), (1.0, 0.0)]).unwrap();
            let mut mags: Vec<f64> = roots.iter().map(|&r| cabs(r)).collect();
            mags.sort_by(f64::total_cmp);
            assert!((mags[0] - 1.0).abs() < 1e-10);
            assert!((mags[1] - 2.0).abs() < 1e-10);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use num_bigint::BigInt;

    fn sess() -> Session {
        Session::new(Caps::default())
    }

    fn int_coeffs(f: &FiberLFactor) -> Vec<i64> {
        f.coeffs
            .iter()
            .map(|c| {
                c.is_rational_integer()
                    .and_then(|b| num_traits::ToPrimitive::to_i64(&b))
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn kl1_fiber_over_f2() {
        // p_1 = -1, p_2 = -3 gives 1 + T + 2T^2
        let s = sess();
        let f2 = s.field(2, 1).unwrap();
        let f = fiber_polynomial(&s, 2, 1, 1, &f2.one(), 1).unwrap();
        assert_eq!(int_coeffs(&f), vec![1, 1, 2]);
        let report = fiber_checks(&f, 128, 1e-9).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.slopes.slopes, vec!["0", "1"]);
    }

    #[test]
    fn kl1_fiber_over_f3() {
        // p_1 = 1, p_2 = -5: 1 - T + 3T^2
        let s = sess();
        let f3 = s.field(3, 1).unwrap();
        let f = fiber_polynomial(&s, 3, 1, 1, &f3.one(), 1).unwrap();
        assert_eq!(int_coeffs(&f), vec![1, -1, 3]);
        assert!(fiber_checks(&f, 128, 1e-9).unwrap().all_passed());
    }

    #[test]
    fn kl1_fiber_over_f4() {
        // base q = 4: p_1 = -3, p_2 = 1: 1 + 3T + 4T^2
        let s = sess();
        let f4 = s.field(2, 2).unwrap();
        let f = fiber_polynomial(&s, 2, 2, 1, &f4.one(), 1).unwrap();
        assert_eq!(int_coeffs(&f), vec![1, 3, 4]);
        let report = fiber_checks(&f, 128, 1e-9).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn constant_coefficient_is_one() {
        let s = sess();
        let f5 = s.field(5, 1).unwrap();
        for t in [1u64, 2, 3, 4] {
            let f = fiber_polynomial(&s, 5, 1, 1, &f5.from_int(t), 1).unwrap();
            assert_eq!(f.coeffs[0], CycInt::one(5));
        }
    }

    #[test]
    fn failing_slope_control() {
        // constructed negative control: 1 + T + 4T^2 over q_t = 2 has slopes {0, 2}
        let s = sess();
        let f2 = s.field(2, 1).unwrap();
        let bad = FiberLFactor {
            p: 2,
            a: 1,
            r: 1,
            n: 1,
            t: f2.one(),
            coeffs: vec![
                CycInt::one(2),
                CycInt::one(2),
                CycInt::from_integer(2, 4),
            ],
        };
        let report = fiber_checks(&bad, 128, 1e-9).unwrap();
        assert!(!report.slopes.passed);
        assert_eq!(report.slopes.slopes, vec!["0", "2"]);
        assert!(!report.weil.passed);
    }

    #[test]
    fn weil_and_slopes_small_sweep() {
        // every fiber with q_t <= 16ish, n <= 2
        let s = sess();
        for (p, a, n) in [(2u64, 1u32, 1u32), (3, 1, 1), (2, 2, 1), (5, 1, 1), (2, 1, 2), (3, 1, 2), (7, 1, 1), (13, 1, 1), (2, 2, 2)] {
            let base = s.field(p, a).unwrap();
            let g = base.generator();
            for i in 0..(base.size() - 1).min(6) {
                let t = base.pow(&g, i as u128);
                let f = fiber_polynomial(&s, p, a, 1, &t, n).unwrap();
                let report = fiber_checks(&f, 128, 1e-9).unwrap();
                assert!(report.all_passed(), "p={p} a={a} n={n} t=g^{i}: {report:?}");
            }
        }
    }

    #[test]
    fn conjugate_fibers_same_factor() {
        let s = sess();
        let f9 = s.field(3, 2).unwrap();
        let g = f9.generator();
        let t = g.clone();
        let t3 = f9.pow(&t, 3);
        let a = fiber_polynomial(&s, 3, 1, 2, &t, 1).unwrap();
        let b = fiber_polynomial(&s, 3, 1, 2, &t3, 1).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn degree_two_fiber_checks() {
        // fibers of degree 2 over F_2: the closed point {w, w^2} in F_4
        let s = sess();
        let pts = closed_points(&s, 2, 1, 2).unwrap();
        assert_eq!(pts.len(), 1);
        let f = fiber_polynomial(&s, 2, 1, 2, &pts[0], 1).unwrap();
        assert_eq!(int_coeffs(&f), vec![1, -1, 4]);
        assert!(fiber_checks(&f, 128, 1e-9).unwrap().all_passed());
    }

    #[test]
    fn closed_point_counts() {
        let s = sess();
        // over F_2: 1 point of degree 1, 1 of degree 2, 2 of degree 3
        assert_eq!(closed_points(&s, 2, 1, 1).unwrap().len(), 1);
        assert_eq!(closed_points(&s, 2, 1, 2).unwrap().len(), 1);
        assert_eq!(closed_points(&s, 2, 1, 3).unwrap().len(), 2);
        // over F_3: 2 of degree 1, 3 of degree 2
        assert_eq!(closed_points(&s, 3, 1, 1).unwrap().len(), 2);
        assert_eq!(closed_points(&s, 3, 1, 2).unwrap().len(), 3);
        // over F_4 (q = 4): 3 of degree 1, 6 of degree 2
        assert_eq!(closed_points(&s, 2, 2, 1).unwrap().len(), 3);
        assert_eq!(closed_points(&s, 2, 2, 2).unwrap().len(), 6);
    }

    #[test]
    fn extend_power_sums_via_recurrence() {
        // eigenvalues of 1 + T + 2T^2: p_j continue by p_j = -p_{j-1} - 2 p_{j-2}
        let ps = vec![CycInt::from_integer(2, -1), CycInt::from_integer(2, -3)];
        let ext = extend_power_sums(&ps, 6).unwrap();
        let vals: Vec<i64> = ext
            .iter()
            .map(|c| num_traits::ToPrimitive::to_i64(&c.is_rational_integer().unwrap()).unwrap())
            .collect();
        assert_eq!(vals, vec![-1, -3, 5, 1, -11, 9]);
        let _ = BigInt::from(0);
    }
}
