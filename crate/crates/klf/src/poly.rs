//! Dense integer polynomials, truncated integer power series, and rational
//! functions over `Z` with constant term 1.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Polynomial with `BigInt` coefficients, little-endian, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    /// `1 - c T^k`
    pub fn one_minus(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] = BigInt::one();
        coeffs[k] = -c.into();
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::new(out)
    }

    /// Exact division: `Some(q)` iff `self = q * div` over `Z`.
    pub fn div_exact(&self, div: &Self) -> Option<Self> {
        if div.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() < div.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dlead = div.coeffs.last().unwrap();
        let dlen = div.coeffs.len();
        let qlen = rem.len() - dlen + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dlen - 1];
            if c.is_zero() {
                continue;
            }
            let (qc, r) = num_integer::Integer::div_rem(c, dlead);
            if !r.is_zero() {
                return None;
            }
            q[k] = qc;
            for (i, dc) in div.coeffs.iter().enumerate() {
                let sub = dc * &q[k];
                rem[k + i] -= sub;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Quotient and remainder over `Q`, returned only if both are integral.
    pub fn divrem(&self, div: &Self) -> Option<(Self, Self)> {
        if div.is_zero() {
            return None;
        }
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let dlen = div.coeffs.len();
        if rem.len() < dlen {
            return Some((Self::zero(), self.clone()));
        }
        let dlead = BigRational::from_integer(div.coeffs.last().unwrap().clone());
        let qlen = rem.len() - dlen + 1;
        let mut q = vec![BigRational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + dlen - 1].clone();
            if c.is_zero() {
                continue;
            }
            let qc = c / &dlead;
            for (i, dc) in div.coeffs.iter().enumerate() {
                let sub = BigRational::from_integer(dc.clone()) * &qc;
                rem[k + i] -= sub;
            }
            q[k] = qc;
        }
        let to_int = |v: Vec<BigRational>| -> Option<Vec<BigInt>> {
            v.into_iter()
                .map(|r| if r.is_integer() { Some(r.to_integer()) } else { None })
                .collect()
        };
        Some((IntPoly::new(to_int(q)?), IntPoly::new(to_int(rem)?)))
    }

    /// Content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Polynomial gcd over `Q`, normalized to primitive with positive leading
    /// coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            // pseudo-remainder, then strip content to control growth
            let lead = b.coeffs.last().unwrap().clone();
            let k = a.coeffs.len().saturating_sub(b.coeffs.len()) + 1;
            let mut scaled = a.clone();
            let factor = num_traits::pow::pow(lead, k);
            scaled = IntPoly::new(scaled.coeffs.iter().map(|c| c * &factor).collect());
            let (_, r) = scaled.divrem(&b).expect("pseudo-division is integral");
            a = b;
            let content = r.content();
            b = if content.is_zero() {
                IntPoly::zero()
            } else {
                IntPoly::new(r.coeffs.iter().map(|c| c / &content).collect())
            };
        }
        let content = a.content();
        if content.is_zero() {
            return a;
        }
        let mut out = IntPoly::new(a.coeffs.iter().map(|c| c / &content).collect());
        if out.coeffs.last().map(|c| c.is_negative()).unwrap_or(false) {
            out = out.neg();
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// First `len` coefficients of the power series `self / den`, requiring
    /// `den(0) = ±1` so the expansion is integral.
    pub fn series_div(&self, den: &Self, len: usize) -> Result<Vec<BigInt>> {
        let d0 = den.coeff(0);
        if !d0.is_one() && d0 != BigInt::from(-1) {
            return Err(Error::BadConstantTerm);
        }
        let mut out = vec![BigInt::zero(); len];
        for i in 0..len {
            let mut acc = self.coeff(i);
            for j in 1..=i.min(den.degree()) {
                acc -= den.coeff(j) * &out[i - j];
            }
            out[i] = if d0.is_one() { acc } else { -acc };
        }
        Ok(out)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => c.to_string(),
                1 if c.is_one() => var.to_string(),
                1 if *c == BigInt::from(-1) => format!("-{var}"),
                1 => format!("{c}*{var}"),
                _ if c.is_one() => format!("{var}^{i}"),
                _ if *c == BigInt::from(-1) => format!("-{var}^{i}"),
                _ => format!("{c}*{var}^{i}"),
            };
            parts.push(body);
        }
        let mut s = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k == 0 {
                s.push_str(part);
            } else if let Some(stripped) = part.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(part);
            }
        }
        s
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_in("T"))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect();
        Ok(IntPoly::new(coeffs?))
    }
}

/// Truncated integer power series with `a_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    pub coeffs: Vec<BigInt>,
}

impl Serialize for IntSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect();
        Ok(IntSeries { coeffs: coeffs? })
    }
}

impl IntSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.first().map(|c| !c.is_one()).unwrap_or(true) {
            return Err(Error::Internal("series must start with 1".into()));
        }
        Ok(IntSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncate(&self, order: usize) -> Self {
        IntSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }
}

/// Reduced rational function over `Z`: coprime numerator and denominator, both
/// with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunc {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RatFunc {
    pub fn from_poly(num: IntPoly) -> Self {
        RatFunc { num, den: IntPoly::one() }
    }

    pub fn new_reduced(num: IntPoly, den: IntPoly) -> Result<Self> {
        if !num.coeff(0).is_one() || !den.coeff(0).is_one() {
            return Err(Error::Internal("rational function must have constant terms 1".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            let n = num.div_exact(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
            let d = den.div_exact(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
            // renormalize constants (gcd is primitive, constants may flip sign)
            let scale = n.coeff(0);
            if scale == BigInt::from(-1) {
                (n.neg(), d.neg())
            } else {
                (n, d)
            }
        } else {
            (num, den)
        };
        Ok(RatFunc { num, den })
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Multiply by another rational function, keeping reduced form.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new_reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Exact quotient `self / other`; error if the result is not a rational
    /// function with integer coefficients in reduced form.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Self::new_reduced(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn series(&self, len: usize) -> Result<Vec<BigInt>> {
        self.num.series_div(&self.den, len)
    }
}

impl std::fmt::Display for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
