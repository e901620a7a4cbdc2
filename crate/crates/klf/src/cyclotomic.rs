//! Exact arithmetic in the cyclotomic integers `Z[zeta_p]`, `p` prime.
//!
//! Elements are held in the power basis `{1, zeta, ..., zeta^(p-2)}`, the
//! unique representation modulo `1 + zeta + ... + zeta^(p-1) = 0`. Uniqueness
//! makes equality and rational-integrality tests coefficient-wise. The prime
//! `p = 2` runs through the same code path with a vector of length 1
//! (`zeta_2 = -1` already lies in `Z`).

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An element of `Z[zeta_p]` in the power basis of length `p - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = n.into();
        c
    }

    /// Build from an arbitrary-length vector of coefficients of `zeta^0, zeta^1, ...`,
    /// reducing exponents mod `p` and then to the power basis.
    pub fn from_coeffs(p: u64, raw: &[BigInt]) -> Self {
        let mut folded = vec![BigInt::zero(); p as usize];
        for (i, c) in raw.iter().enumerate() {
            folded[i % p as usize] += c;
        }
        Self::from_folded(p, folded)
    }

    // length-p vector (coefficients of zeta^0..zeta^(p-1)) -> canonical form
    fn from_folded(p: u64, mut folded: Vec<BigInt>) -> Self {
        let last = folded.pop().expect("length p");
        let coeffs = folded.into_iter().map(|c| c - &last).collect();
        CycInt { p, coeffs }
    }

    /// `zeta_p^e` with `e` reduced mod `p` (negative allowed).
    pub fn zeta_power(p: u64, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as u64;
        let mut folded = vec![BigInt::zero(); p as usize];
        folded[e as usize] = BigInt::one();
        Self::from_folded(p, folded)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedP(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scalar_mul(&self, s: &BigInt) -> Self {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let p = self.p as usize;
        let mut folded = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                folded[(i + j) % p] += a * b;
            }
        }
        Ok(Self::from_folded(self.p, folded))
    }

    /// Galois conjugate `zeta -> zeta^s`, `gcd(s, p) = 1`.
    pub fn conjugate(&self, s: u64) -> Self {
        let p = self.p as usize;
        let s = (s % self.p) as usize;
        let mut folded = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            folded[(i * s) % p] += a;
        }
        Self::from_folded(self.p, folded)
    }

    /// The integer `n` when the element lies in `Z`, otherwise `None`.
    pub fn is_rational_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Exact division by a rational integer; errors if any coordinate is not divisible.
    pub fn div_exact_int(&self, s: u64) -> Result<Self> {
        let d = BigInt::from(s);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, &d);
            if !r.is_zero() {
                return Err(Error::InexactNewton { divisor: s });
            }
            coeffs.push(q);
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Exact division by `1 - zeta`, or `None` if not divisible.
    ///
    /// Uses `(1 - zeta) * g = p` with `g = prod_{j=2}^{p-1} (1 - zeta^j)`, so
    /// `a / (1 - zeta) = a * g / p`.
    fn div_by_uniformizer(&self) -> Option<Self> {
        if self.p == 2 {
            // 1 - zeta_2 = 2
            return self.div_exact_int(2).ok();
        }
        let mut g = CycInt::one(self.p);
        for j in 2..self.p {
            let f = CycInt::one(self.p)
                .sub(&CycInt::zeta_power(self.p, j as i64))
                .expect("same p");
            g = g.mul(&f).expect("same p");
        }
        let ag = self.mul(&g).expect("same p");
        ag.div_exact_int(self.p).ok()
    }

    /// The `(1 - zeta_p)`-adic valuation normalized so that `ord(p) = 1`;
    /// returns `v / (p - 1)` where `v` is the exact order. Errors on zero.
    pub fn lambda_valuation(&self) -> Result<Ratio<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        let mut v = 0u64;
        let mut cur = self.clone();
        while let Some(next) = cur.div_by_uniformizer() {
            v += 1;
            cur = next;
        }
        Ok(Ratio::new(v, self.p - 1))
    }

    /// Sum of the absolute values of the coefficients (used for error bounds).
    pub fn coeff_l1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluate the coefficient polynomial at all primitive p-th roots of unity.
    ///
    /// Returns the `p - 1` complex values `(re, im)` together with a rigorous
    /// absolute error bound. Evaluation is done in fixed-point arithmetic with
    /// `precision` fractional bits so that cancellation between large integer
    /// coefficients is exact; only the final conversion rounds to `f64`.
    pub fn complex_embeddings(&self, precision: u32) -> (Vec<(f64, f64)>, f64) {
        let p = self.p;
        if p == 2 {
            let v = self.coeffs[0].to_f64().unwrap_or(f64::NAN);
            return (vec![(v, 0.0)], ulp_bound(&self.coeff_l1()));
        }
        let prec = precision.max(64);
        let w = fixed::root_of_unity(p, prec);
        let mut out = Vec::with_capacity((p - 1) as usize);
        for j in 1..p {
            // w^j, then Horner over the coefficients
            let zj = fixed::pow(&w, j, prec);
            let mut acc = fixed::Cx::zero();
            for c in self.coeffs.iter().rev() {
                acc = fixed::mul(&acc, &zj, prec);
                acc.re += c << prec;
            }
            out.push(fixed::to_f64(&acc, prec));
        }
        // error: root accuracy ~ 2^-prec propagated through <= p multiplies per
        // power and p-2 Horner steps, scaled by the coefficient l1 norm
        let l1 = self.coeff_l1().to_f64().unwrap_or(f64::MAX);
        let ops = (2 * p * p) as f64;
        let err = l1.max(1.0) * ops * (2.0f64).powi(-(prec as i32)) + l1 * 1e-15;
        (out, err)
    }
}

fn ulp_bound(l1: &BigInt) -> f64 {
    l1.to_f64().unwrap_or(f64::MAX) * f64::EPSILON
}

/// JSON form: `{"p": p, "coeffs": ["...decimal strings..."]}`.
#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    p: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntRepr {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycIntRepr::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect();
        let coeffs = coeffs?;
        if coeffs.len() != (repr.p - 1) as usize {
            return Err(serde::de::Error::custom("coefficient vector has wrong length"));
        }
        Ok(CycInt { p: repr.p, coeffs })
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Fixed-point complex arithmetic on `BigInt` mantissas: `(re, im) / 2^prec`.
mod fixed {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    pub struct Cx {
        pub re: BigInt,
        pub im: BigInt,
    }

    impl Cx {
        pub fn zero() -> Self {
            Cx { re: BigInt::zero(), im: BigInt::zero() }
        }
    }

    fn shr_round(x: BigInt, prec: u32) -> BigInt {
        // round-to-nearest shift
        let half = BigInt::one() << (prec - 1);
        if x.is_negative() {
            -((-x + half) >> prec)
        } else {
            (x + half) >> prec
        }
    }

    pub fn mul(a: &Cx, b: &Cx, prec: u32) -> Cx {
        Cx {
            re: shr_round(&a.re * &b.re - &a.im * &b.im, prec),
            im: shr_round(&a.re * &b.im + &a.im * &b.re, prec),
        }
    }

    pub fn pow(a: &Cx, mut e: u64, prec: u32) -> Cx {
        let mut base = Cx { re: a.re.clone(), im: a.im.clone() };
        let mut acc = Cx { re: BigInt::one() << prec, im: BigInt::zero() };
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = mul(&base, &base, prec);
            }
        }
        acc
    }

    pub fn to_f64(a: &Cx, prec: u32) -> (f64, f64) {
        let scale = (2.0f64).powi(-(prec as i32));
        (
            a.re.to_f64().map(|v| v * scale).unwrap_or(f64::NAN),
            a.im.to_f64().map(|v| v * scale).unwrap_or(f64::NAN),
        )
    }

    /// pi to `prec` fractional bits (Machin: pi = 16 atan(1/5) - 4 atan(1/239)).
    fn pi_fixed(prec: u32) -> BigInt {
        let guard = prec + 16;
        fn atan_inv(x: u64, guard: u32) -> BigInt {
            // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
            let mut term = (BigInt::one() << guard) / BigInt::from(x);
            let x2 = BigInt::from(x) * BigInt::from(x);
            let mut sum = BigInt::zero();
            let mut k = 0u64;
            while !term.is_zero() {
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 0 {
                    sum += &t;
                } else {
                    sum -= &t;
                }
                term = term / &x2;
                k += 1;
            }
            sum
        }
        let pi = atan_inv(5, guard) * 16 - atan_inv(239, guard) * 4;
        shr_round(pi, 16)
    }

    /// e^(2 pi i / p) to `prec` fractional bits via Taylor series of cos + i sin.
    pub fn root_of_unity(p: u64, prec: u32) -> Cx {
        let guard = prec + 32;
        let two_pi = pi_fixed(guard) * 2;
        let x = &two_pi / BigInt::from(p); // angle, fixed-point at guard bits
        // cos x = sum (-1)^k x^(2k) / (2k)!, sin likewise; terms shrink since x < 2 pi
        let mut cos = BigInt::zero();
        let mut sin = BigInt::zero();
        let mut term = BigInt::one() << guard; // x^0 / 0!
        let mut k = 0u64;
        loop {
            match k % 4 {
                0 => cos += &term,
                1 => sin += &term,
                2 => cos -= &term,
                _ => sin -= &term,
            }
            k += 1;
            term = shr_round(term * &x, guard) / BigInt::from(k);
            if term.is_zero() {
                break;
            }
            if k > 500 {
                break; // x <= pi: factorial growth has long since dominated
            }
        }
        Cx { re: shr_round(cos, guard - prec), im: shr_round(sin, guard - prec) }
    }
}
