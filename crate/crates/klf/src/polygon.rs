//! Hodge numbers, Hodge polygons, q-adic Newton polygons, and their exact
//! rational comparison.
//!
//! The Hodge side comes from the weight enumerator: writing
//! `R(T) / (1 + T + ... + T^n) = sum h_i T^i`, the Hodge polygon is the lower
//! convex hull of the points `(sum_{i<=N} h_i, sum_{i<=N} i h_i)` — equally,
//! the q-adic Newton polygon of `prod (1 - q^i T)^{h_i}`. The Newton side of a
//! polynomial with constant term 1 is the lower hull of `(i, ord_q c_i)`.

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Lower convex hull with rational vertices, starting at (0,0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<(BigRational, BigRational)>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Polygon {
    /// Lower convex hull of a set of points; the points must include x = 0,
    /// and the hull is normalized to start at the leftmost point.
    pub fn lower_hull(points: &[(BigRational, BigRational)]) -> Result<Polygon> {
        if points.is_empty() {
            return Err(Error::Internal("no points for hull".into()));
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        // keep only the lowest y per x
        let mut filtered: Vec<(BigRational, BigRational)> = Vec::new();
        for p in pts {
            match filtered.last() {
                Some(last) if last.0 == p.0 => {} // sorted: first occurrence is lowest
                _ => filtered.push(p),
            }
        }
        // monotone chain, lower part
        let mut hull: Vec<(BigRational, BigRational)> = Vec::new();
        for p in filtered {
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // cross( b-a, p-a ) <= 0 means b is not strictly below the chord
                let cross = (&b.0 - &a.0) * (&p.1 - &a.1) - (&p.0 - &a.0) * (&b.1 - &a.1);
                if cross <= BigRational::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let poly = Polygon { vertices: hull };
        poly.validate()?;
        Ok(poly)
    }

    fn validate(&self) -> Result<()> {
        for w in self.vertices.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Internal("hull x not strictly increasing".into()));
            }
        }
        let slopes = self.slopes();
        for w in slopes.windows(2) {
            if w[1].0 < w[0].0 {
                return Err(Error::Internal("hull slopes decrease".into()));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[(BigRational, BigRational)] {
        &self.vertices
    }

    pub fn x_end(&self) -> &BigRational {
        &self.vertices.last().unwrap().0
    }

    /// `(slope, horizontal length)` per segment.
    pub fn slopes(&self) -> Vec<(BigRational, BigRational)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let dx = &w[1].0 - &w[0].0;
                let dy = &w[1].1 - &w[0].1;
                (dy / &dx, dx)
            })
            .collect()
    }

    /// Piecewise-linear value at `x` (must lie within the hull's x-range).
    pub fn value_at(&self, x: &BigRational) -> Option<BigRational> {
        let first = self.vertices.first()?;
        if *x < first.0 || *x > *self.x_end() {
            return None;
        }
        if *x == first.0 {
            return Some(first.1.clone());
        }
        for w in self.vertices.windows(2) {
            if *x <= w[1].0 {
                let tfrac = (x - &w[0].0) / (&w[1].0 - &w[0].0);
                return Some(&w[0].1 + tfrac * (&w[1].1 - &w[0].1));
            }
        }
        None
    }

    /// Integer-slope multiset when every segment has integral slope and length.
    pub fn integer_slopes(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        for (s, len) in self.slopes() {
            if !s.is_integer() || !len.is_integer() {
                return None;
            }
            let count = len.to_integer().to_i64()?;
            for _ in 0..count {
                out.push(s.to_integer().to_i64()?);
            }
        }
        Some(out)
    }

    pub fn vertices_i64(&self) -> Option<Vec<(i64, i64)>> {
        self.vertices
            .iter()
            .map(|(x, y)| {
                if x.is_integer() && y.is_integer() {
                    Some((x.to_integer().to_i64()?, y.to_integer().to_i64()?))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn from_integer_vertices(v: &[(i64, i64)]) -> Result<Polygon> {
        let pts: Vec<(BigRational, BigRational)> =
            v.iter().map(|&(x, y)| (rat(x, 1), rat(y, 1))).collect();
        Polygon::lower_hull(&pts)
    }

    /// CSV vertex list `x,y` with exact rationals.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.vertices {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    }
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|(x, y)| [x.to_string(), y.to_string()])
            .collect();
        v.serialize(s)
    }
}

/// Coefficients of `R(T) / (1 + T + ... + T^n)`: exact polynomial quotient
/// when the division has no remainder, truncated series otherwise.
#[derive(Clone, Debug)]
pub struct HodgeData {
    pub h: Vec<BigInt>,
    pub exact: bool,
}

impl Serialize for HodgeData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HodgeData", 2)?;
        st.serialize_field("h", &self.h.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

pub fn hodge_numbers(r: &IntPoly, n: u32) -> Result<HodgeData> {
    let den = IntPoly::new(vec![BigInt::from(1); n as usize + 1]);
    if let Some(q) = r.div_exact(&den) {
        if q.coeffs().iter().any(|c| c.is_negative()) {
            return Err(Error::Internal("negative Hodge number in exact quotient".into()));
        }
        return Ok(HodgeData { h: q.coeffs().to_vec(), exact: true });
    }
    let len = r.degree() + 1;
    Ok(HodgeData { h: r.series_div(&den, len)?, exact: false })
}

/// Vertices `(sum_{i<=N} h_i, sum_{i<=N} i h_i)`; requires exact Hodge data.
pub fn hodge_polygon(h: &HodgeData) -> Result<Polygon> {
    if !h.exact {
        return Err(Error::InexactHodge);
    }
    let mut pts = vec![(rat(0, 1), rat(0, 1))];
    let mut cx = BigInt::zero();
    let mut cy = BigInt::zero();
    for (i, hi) in h.h.iter().enumerate() {
        cx += hi;
        cy += BigInt::from(i) * hi;
        pts.push((
            BigRational::from_integer(cx.clone()),
            BigRational::from_integer(cy.clone()),
        ));
    }
    Polygon::lower_hull(&pts)
}

fn ord_p(c: &BigInt, p: u64) -> u64 {
    debug_assert!(!c.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0u64;
    let mut cur = c.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, &pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// q-adic Newton polygon of a polynomial with `f(0) = 1`: lower hull of
/// `(i, ord_p(c_i) / a)`, zero coefficients skipped.
pub fn newton_polygon(f: &IntPoly, p: u64, a: u32) -> Result<Polygon> {
    if !f.coeff(0).is_one() {
        return Err(Error::BadConstantTerm);
    }
    let mut pts = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        pts.push((rat(i as i64, 1), rat(ord_p(c, p) as i64, a as i64)));
    }
    Polygon::lower_hull(&pts)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum HullComparison {
    /// NP(x) >= HP(x) everywhere; margins at integer abscissae
    Above { margins: Vec<String> },
    Below { first_failure_x: String, deficit: String },
    Incomparable { reason: String },
}

/// Does the first polygon lie on or above the second? Requires equal
/// endpoints; evaluates both hulls at every integer abscissa.
pub fn lies_on_or_above(np: &Polygon, hp: &Polygon) -> HullComparison {
    if np.x_end() != hp.x_end() {
        return HullComparison::Incomparable {
            reason: format!("endpoints differ: {} vs {}", np.x_end(), hp.x_end()),
        };
    }
    let end = np.x_end().to_integer().to_i64().unwrap_or(0);
    let mut margins = Vec::new();
    for x in 0..=end {
        let xr = rat(x, 1);
        let (nv, hv) = match (np.value_at(&xr), hp.value_at(&xr)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return HullComparison::Incomparable { reason: format!("no value at x={x}") };
            }
        };
        let margin = &nv - &hv;
        if margin.is_negative() {
            return HullComparison::Below {
                first_failure_x: x.to_string(),
                deficit: (-margin).to_string(),
            };
        }
        margins.push(margin.to_string());
    }
    HullComparison::Above { margins }
}

/// Small axis-labeled SVG with both polygons overlaid.
pub fn polygons_svg(np: &Polygon, hp: &Polygon) -> String {
    let to_f = |r: &BigRational| r.to_f64().unwrap_or(0.0);
    let all: Vec<(f64, f64)> = np
        .vertices()
        .iter()
        .chain(hp.vertices())
        .map(|(x, y)| (to_f(x), to_f(y)))
        .collect();
    let maxx = all.iter().map(|p| p.0).fold(1.0, f64::max);
    let maxy = all.iter().map(|p| p.1).fold(1.0, f64::max);
    let (w, h, m) = (480.0, 360.0, 40.0);
    let sx = (w - 2.0 * m) / maxx;
    let sy = (h - 2.0 * m) / maxy;
    let path = |poly: &Polygon| -> String {
        poly.vertices()
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", m + to_f(x) * sx, h - m - to_f(y) * sy))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n",
            "<line x1=\"{m}\" y1=\"{ybase}\" x2=\"{xmax}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<line x1=\"{m}\" y1=\"{ybase}\" x2=\"{m}\" y2=\"{m}\" stroke=\"black\"/>\n",
            "<text x=\"{xmax}\" y=\"{ylab}\" font-size=\"12\">degree</text>\n",
            "<text x=\"4\" y=\"{m}\" font-size=\"12\">ord_q</text>\n",
            "<polyline points=\"{np}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"2\"/>\n",
            "<polyline points=\"{hp}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n",
            "<text x=\"{legx}\" y=\"{m}\" font-size=\"12\" fill=\"crimson\">Newton</text>\n",
            "<text x=\"{legx}\" y=\"{leg2}\" font-size=\"12\" fill=\"steelblue\">Hodge</text>\n",
            "</svg>\n"
        ),
        w = w,
        h = h,
        m = m,
        ybase = h - m,
        xmax = w - m,
        ylab = h - m + 16.0,
        np = path(np),
        hp = path(hp),
        legx = w - 110.0,
        leg2 = m + 16.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hodge_numbers_exact_and_inexact() {
        // n=1, k=3: (1+T+T^2+T^3)/(1+T) = 1 + T^2
        let h = hodge_numbers(&IntPoly::from_i64(&[1, 1, 1, 1]), 1).unwrap();
        assert!(h.exact);
        assert_eq!(h.h, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        // n=1, k=2: (1+T+T^2)/(1+T) leaves a remainder
        let h = hodge_numbers(&IntPoly::from_i64(&[1, 1, 1]), 1).unwrap();
        assert!(!h.exact);
        // n=2, k=2: (1+T+2T^2+T^3+T^4)/(1+T+T^2) = 1 + T^2
        let h = hodge_numbers(&IntPoly::from_i64(&[1, 1, 2, 1, 1]), 2).unwrap();
        assert!(h.exact);
        assert_eq!(h.h, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn hodge_polygon_vertices() {
        let h = HodgeData { h: vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)], exact: true };
        let poly = hodge_polygon(&h).unwrap();
        assert_eq!(poly.vertices_i64().unwrap(), vec![(0, 0), (1, 0), (2, 2)]);
        // single block: slope-0 segment
        let h = HodgeData { h: vec![BigInt::from(3)], exact: true };
        let poly = hodge_polygon(&h).unwrap();
        assert_eq!(poly.vertices_i64().unwrap(), vec![(0, 0), (3, 0)]);
        let h = HodgeData { h: vec![BigInt::from(1), BigInt::from(1)], exact: true };
        let poly = hodge_polygon(&h).unwrap();
        assert_eq!(poly.vertices_i64().unwrap(), vec![(0, 0), (1, 0), (2, 1)]);
        // inexact data is refused
        let h = HodgeData { h: vec![BigInt::from(1)], exact: false };
        assert!(hodge_polygon(&h).is_err());
    }

    #[test]
    fn newton_polygon_examples() {
        let np = newton_polygon(&IntPoly::from_i64(&[1, 1, 2]), 2, 1).unwrap();
        assert_eq!(np.vertices_i64().unwrap(), vec![(0, 0), (1, 0), (2, 1)]);
        // 1 - q^s T: one segment of slope s
        let np = newton_polygon(&IntPoly::from_i64(&[1, -8]), 2, 1).unwrap();
        assert_eq!(np.integer_slopes().unwrap(), vec![3]);
        // (1 - T)(1 - qT): slopes {0, 1}
        let f = IntPoly::from_i64(&[1, -1]).mul(&IntPoly::from_i64(&[1, -3]));
        let np = newton_polygon(&f, 3, 1).unwrap();
        assert_eq!(np.integer_slopes().unwrap(), vec![0, 1]);
        // constant term must be 1
        assert!(newton_polygon(&IntPoly::from_i64(&[2, 1]), 2, 1).is_err());
        // zero coefficients are skipped
        let np = newton_polygon(&IntPoly::from_i64(&[1, 0, 4]), 2, 1).unwrap();
        assert_eq!(np.vertices_i64().unwrap(), vec![(0, 0), (2, 2)]);
    }

    #[test]
    fn hodge_equals_newton_of_product() {
        // hodge polygon of h = NP of prod (1 - q^i T)^{h_i}
        for (h, q) in [(vec![2i64, 1, 3], 3u64), (vec![1, 0, 2, 1], 5), (vec![1, 1], 2)] {
            let hd = HodgeData { h: h.iter().map(|&x| BigInt::from(x)).collect(), exact: true };
            let hp = hodge_polygon(&hd).unwrap();
            let mut f = IntPoly::one();
            for (i, &hi) in h.iter().enumerate() {
                let factor = IntPoly::one_minus(BigInt::from(q).pow(i as u32), 1);
                f = f.mul(&factor.pow(hi as u32));
            }
            let np = newton_polygon(&f, q, 1).unwrap();
            assert_eq!(np, hp);
        }
    }

    #[test]
    fn comparison_verdicts() {
        let hp = Polygon::from_integer_vertices(&[(0, 0), (1, 0), (2, 2)]).unwrap();
        // equality: margins all zero
        match lies_on_or_above(&hp, &hp) {
            HullComparison::Above { margins } => {
                assert!(margins.iter().all(|m| m == "0"));
            }
            other => panic!("{other:?}"),
        }
        // strict above: single segment (0,0)-(2,3) has margin 3/2 at x=1
        let np = Polygon::from_integer_vertices(&[(0, 0), (2, 3)]).unwrap();
        match lies_on_or_above(&np, &hp) {
            HullComparison::Above { margins } => assert_eq!(margins[1], "3/2"),
            other => panic!("{other:?}"),
        }
        // endpoint mismatch
        let short = Polygon::from_integer_vertices(&[(0, 0), (1, 2)]).unwrap();
        assert!(matches!(
            lies_on_or_above(&short, &hp),
            HullComparison::Incomparable { .. }
        ));
        // below
        let low = Polygon::from_integer_vertices(&[(0, 0), (2, 1)]).unwrap();
        assert!(matches!(lies_on_or_above(&low, &hp), HullComparison::Below { .. }));
    }

    #[test]
    fn exact_quotient_totals() {
        // when exact: sum h_i = R(1)/(n+1)
        use crate::linop::{r_poly, LinOp};
        for (n, k) in [(1u32, 3u32), (2, 2), (1, 5), (3, 2), (4, 3)] {
            let r = r_poly(&LinOp::sym(k), n).unwrap();
            let h = hodge_numbers(&r, n).unwrap();
            if h.exact {
                let total: BigInt = h.h.iter().sum();
                assert_eq!(total * (n + 1), r.eval_i64(1), "(n,k)=({n},{k})");
            }
        }
    }

    #[test]
    fn coprime_symmetric_powers_divide_exactly() {
        // gcd(n+1, k) = 1 forces an exact quotient; swept over 1<=n<=5, 1<=k<=8
        use crate::linop::{r_poly, LinOp};
        for n in 1..=5u32 {
            for k in 1..=8u32 {
                let r = r_poly(&LinOp::sym(k), n).unwrap();
                let h = hodge_numbers(&r, n).unwrap();
                if num_integer::Integer::gcd(&(n as u64 + 1), &(k as u64)) == 1 {
                    assert!(h.exact, "gcd(n+1,k)=1 must divide exactly: (n,k)=({n},{k})");
                    let total: BigInt = h.h.iter().sum();
                    assert_eq!(total * (n + 1), r.eval_i64(1));
                }
            }
        }
    }

    #[test]
    fn csv_and_svg_emission() {
        let hp = Polygon::from_integer_vertices(&[(0, 0), (1, 0), (2, 2)]).unwrap();
        let csv = hp.to_csv();
        assert!(csv.starts_with("x,y\n0,0\n"));
        let svg = polygons_svg(&hp, &hp);
        assert!(svg.contains("<svg") && svg.contains("polyline"));
    }
}
