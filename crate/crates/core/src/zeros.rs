//! Zero analysis for special polynomials: multiplicities via Hasse
//! derivatives, trivial-zero order reports, and Newton polygons.
//!
//! Polynomials in `u` are coefficient slices `c_0, c_1, ...` over any
//! [`Ring`]. Ordinary derivatives vanish too often in characteristic `p`,
//! so multiplicities use `D^(i) u^d = C(d, i) u^(d-i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::digits::{digit_sum, lucas_binomial};
use crate::error::{Error, Result};
use crate::field::{FieldEmbedding, FieldSpec};
use crate::poly::{Poly, PolyRing};
use crate::ring::{Graded, Ring};
use crate::special::{special_polynomial, AnySpecial, ZetaRing};

/// `i`-th Hasse derivative of `sum c_d u^d`.
pub fn hasse_derivative<R: Ring>(ring: &R, coeffs: &[R::Elem], i: usize) -> Vec<R::Elem> {
    let p = ring.characteristic();
    let mut out: Vec<R::Elem> = coeffs
        .iter()
        .enumerate()
        .skip(i)
        .map(|(d, c)| {
            let b = lucas_binomial(d as u64, i as u64, p);
            if b == 0 {
                ring.zero()
            } else {
                ring.mul(&ring.from_int(b), c)
            }
        })
        .collect();
    while out.last().is_some_and(|c| ring.is_zero(c)) {
        out.pop();
    }
    out
}

/// Horner evaluation at `x`.
pub fn evaluate<R: Ring>(ring: &R, coeffs: &[R::Elem], x: &R::Elem) -> R::Elem {
    coeffs
        .iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// Order of vanishing of `P` at `beta`: the least `i` with
/// `D^(i) P (beta) != 0`.
pub fn multiplicity_at_point<R: Ring>(ring: &R, coeffs: &[R::Elem], beta: &R::Elem) -> Result<usize> {
    if coeffs.iter().all(|c| ring.is_zero(c)) {
        return Err(Error::InvalidInput("multiplicity of the zero polynomial".into()));
    }
    for i in 0..coeffs.len() {
        let d = hasse_derivative(ring, coeffs, i);
        if !ring.is_zero(&evaluate(ring, &d, beta)) {
            return Ok(i);
        }
    }
    unreachable!("the top Hasse derivative of a nonzero polynomial is its leading coefficient")
}

/// An exact rational slope, rendered as `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(pub Ratio<i64>);

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl std::str::FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let bad = || Error::Parse(format!("bad slope {s:?}"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Slope(Ratio::new(n, d)))
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Slope,
    pub length: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// `(d, val(c_d))` for the nonzero coefficients.
    pub points: Vec<(u64, i64)>,
    pub vertices: Vec<(u64, i64)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Lower convex hull of the given points (any order, distinct `d`).
    pub fn from_points(mut points: Vec<(u64, i64)>) -> Self {
        points.sort_unstable();
        let mut hull: Vec<(u64, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // Drop b unless it lies strictly below the chord from a to pt.
                let cross = (b.0 as i128 - a.0 as i128) * (pt.1 as i128 - a.1 as i128)
                    - (b.1 as i128 - a.1 as i128) * (pt.0 as i128 - a.0 as i128);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let dx = (w[1].0 - w[0].0) as i64;
                Segment {
                    slope: Slope(Ratio::new(w[1].1 - w[0].1, dx)),
                    length: dx as u64,
                }
            })
            .collect();
        NewtonPolygon {
            points,
            vertices: hull,
            segments,
        }
    }

    /// `s1:len1|s2:len2|...`; empty for a single point.
    pub fn slopes_string(&self) -> String {
        self.segments
            .iter()
            .map(|s| format!("{}:{}", s.slope, s.length))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Horizontal length of the segment of slope 0, if any.
    pub fn zero_slope_length(&self) -> u64 {
        self.segments
            .iter()
            .find(|s| *s.slope.0.numer() == 0)
            .map_or(0, |s| s.length)
    }
}

/// Newton polygon for the valuation at infinity, `val(c) = -deg(c)`.
pub fn newton_polygon_infty<R: Graded>(ring: &R, coeffs: &[R::Elem]) -> NewtonPolygon {
    let points = coeffs
        .iter()
        .enumerate()
        .filter_map(|(d, c)| ring.degree(c).map(|deg| (d as u64, -(deg as i64))))
        .collect();
    NewtonPolygon::from_points(points)
}

/// Newton polygon for `ord_v` on `F_q[T]` coefficients.
pub fn newton_polygon_at_v(ring: &PolyRing, coeffs: &[Poly], v: &Poly) -> NewtonPolygon {
    let points = coeffs
        .iter()
        .enumerate()
        .filter_map(|(d, c)| ring.ord(c, v).map(|o| (d as u64, o as i64)))
        .collect();
    NewtonPolygon::from_points(points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityCheck {
    pub holds: bool,
    pub violations: Vec<Segment>,
}

/// Every root is determined by its absolute value iff all segments have
/// horizontal length 1.
pub fn rh_simplicity_check(np: &NewtonPolygon) -> SimplicityCheck {
    let violations: Vec<Segment> = np.segments.iter().filter(|s| s.length > 1).cloned().collect();
    SimplicityCheck {
        holds: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialZeroReport {
    pub ring: String,
    pub j: u64,
    pub v0: usize,
    pub v1: usize,
    pub nonclassical: bool,
    pub l_p: u64,
    pub l_r: u64,
    pub np_slopes: String,
    /// Horizontal length of the slope-0 segment at infinity.
    pub np_zero_slope_length: u64,
}

impl TrivialZeroReport {
    pub const CSV_HEADER: &'static str = "j,l_p,l_r,v0,v1,nonclassical,np_slopes";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.j, self.l_p, self.l_r, self.v0, self.v1, self.nonclassical, self.np_slopes
        )
    }
}

fn check_trivial_zero_exponent(r: u64, j: u64) -> Result<()> {
    if j == 0 {
        return Err(Error::NotATrivialZero {
            j,
            reason: "z(u, 0) = 1 has no zero at u = 1".into(),
        });
    }
    if j % (r - 1) != 0 {
        return Err(Error::NotATrivialZero {
            j,
            reason: format!("j is not divisible by r - 1 = {}", r - 1),
        });
    }
    Ok(())
}

/// Report for a special polynomial already computed with the trivial
/// character.
pub fn report_from_special(ring: &ZetaRing, z: &AnySpecial) -> Result<TrivialZeroReport> {
    let j = z.j();
    check_trivial_zero_exponent(ring.r(), j)?;
    let (v1, np) = match z {
        AnySpecial::Base { ring, poly } => (
            multiplicity_at_point(ring, &poly.coeffs, &ring.one())?,
            newton_polygon_infty(ring, &poly.coeffs),
        ),
        AnySpecial::Curve { spec, poly } => (
            multiplicity_at_point(spec.as_ref(), &poly.coeffs, &spec.one())?,
            newton_polygon_infty(spec.as_ref(), &poly.coeffs),
        ),
    };
    Ok(TrivialZeroReport {
        ring: ring.id(),
        j,
        v0: 1,
        v1,
        nonclassical: v1 > 1,
        l_p: digit_sum(j, ring.p()),
        l_r: digit_sum(j, ring.r()),
        np_slopes: np.slopes_string(),
        np_zero_slope_length: np.zero_slope_length(),
    })
}

/// Order of the trivial zero of `z(u, -j)` at `u = 1`.
pub fn trivial_zero_report(ring: &ZetaRing, j: u64) -> Result<TrivialZeroReport> {
    check_trivial_zero_exponent(ring.r(), j)?;
    let z = special_polynomial(ring, None, j, None)?;
    report_from_special(ring, &z)
}

/// Roots of unity in `F_{q^L}` at which `P` vanishes.
#[derive(Clone, Debug)]
pub struct UnitRoots {
    pub field: Arc<FieldSpec>,
    /// Element code to multiplicity, nonzero entries only.
    pub roots: BTreeMap<u32, usize>,
}

impl UnitRoots {
    pub fn rendered(&self) -> BTreeMap<String, usize> {
        self.roots
            .iter()
            .map(|(&c, &m)| (self.field.render(crate::field::FieldElement(c)), m))
            .collect()
    }
}

/// Multiplicity of each `beta` in `F_{q^L}^*` as a root of `P`, whose
/// coefficients lie in `F_q[T]`.
pub fn unit_root_multiplicities(ring: &PolyRing, coeffs: &[Poly], l: u32) -> Result<UnitRoots> {
    if l == 0 {
        return Err(Error::InvalidInput("extension degree L must be at least 1".into()));
    }
    let base = ring.field();
    let target = if l == 1 {
        Arc::clone(base)
    } else {
        FieldSpec::new(base.p(), base.m() * l)?
    };
    let emb = FieldEmbedding::new(base, &target)?;
    let big = PolyRing::with_var(Arc::clone(&target), ring.var());
    let lifted: Vec<Poly> = coeffs.iter().map(|c| ring.embed(c, &emb)).collect();
    let mut roots = BTreeMap::new();
    for beta in target.elements().filter(|b| !b.is_zero()) {
        let m = multiplicity_at_point(&big, &lifted, &Poly::constant(beta))?;
        if m > 0 {
            roots.insert(beta.code(), m);
        }
    }
    Ok(UnitRoots { field: target, roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveElement, CurveSpec};
    use crate::field::{field_of_order, FieldElement};
    use crate::ring::TextFormat;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2t() -> PolyRing {
        PolyRing::new(field_of_order(2).unwrap())
    }

    fn parse_all(ring: &PolyRing, cs: &[&str]) -> Vec<Poly> {
        cs.iter().map(|c| ring.parse(c).unwrap()).collect()
    }

    /// Divides by the monic `u - beta` until a nonzero remainder appears.
    fn division_multiplicity<R: Ring>(ring: &R, coeffs: &[R::Elem], beta: &R::Elem) -> usize {
        let mut cur: Vec<R::Elem> = coeffs.to_vec();
        let mut count = 0;
        loop {
            if cur.is_empty() {
                return count;
            }
            // Synthetic division from the top.
            let n = cur.len();
            let mut quot = vec![ring.zero(); n - 1];
            let mut carry = ring.zero();
            for d in (0..n).rev() {
                let v = ring.add(&cur[d], &ring.mul(&carry, beta));
                if d == 0 {
                    if !ring.is_zero(&v) {
                        return count;
                    }
                } else {
                    quot[d - 1] = v.clone();
                }
                carry = v;
            }
            while quot.last().is_some_and(|c| ring.is_zero(c)) {
                quot.pop();
            }
            cur = quot;
            count += 1;
        }
    }

    fn mul_linear<R: Ring>(ring: &R, coeffs: &[R::Elem], beta: &R::Elem) -> Vec<R::Elem> {
        // (u - beta) * P
        let mut out = vec![ring.zero(); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            out[d + 1] = ring.add(&out[d + 1], c);
            out[d] = ring.sub(&out[d], &ring.mul(beta, c));
        }
        out
    }

    #[test]
    fn hasse_examples() {
        let f = field_of_order(2).unwrap();
        let one = FieldElement::ONE;
        let zero = FieldElement::ZERO;
        assert_eq!(hasse_derivative(f.as_ref(), &[one, one], 1), vec![one]);
        assert!(hasse_derivative(f.as_ref(), &[one, zero, one], 1).is_empty());
        assert_eq!(hasse_derivative(f.as_ref(), &[one, zero, one], 2), vec![one]);
    }

    #[test]
    fn multiplicity_examples() {
        let f = field_of_order(2).unwrap();
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        assert_eq!(multiplicity_at_point(f.as_ref(), &[o, o], &o).unwrap(), 1);
        assert_eq!(multiplicity_at_point(f.as_ref(), &[o, z, o], &o).unwrap(), 2);
        assert_eq!(multiplicity_at_point(f.as_ref(), &[o, o, o], &o).unwrap(), 0);
        assert!(matches!(
            multiplicity_at_point(f.as_ref(), &[z, z], &o),
            Err(Error::InvalidInput(_))
        ));
    }

    fn random_poly(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> Poly {
        Poly::from_coeffs((0..=deg).map(|_| FieldElement(rng.gen_range(0..q))).collect())
    }

    #[test]
    fn multiplicity_matches_division_over_fqt() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4, 5, 9] {
            let ring = PolyRing::new(field_of_order(q).unwrap());
            let consts: Vec<FieldElement> = ring.field().elements().collect();
            for _ in 0..1000 {
                let len = rng.gen_range(1..5);
                let mut p: Vec<Poly> = (0..len).map(|_| random_poly(&mut rng, q as u32, 3)).collect();
                let beta = if rng.gen_bool(0.5) {
                    Poly::constant(consts[rng.gen_range(0..consts.len())])
                } else {
                    random_poly(&mut rng, q as u32, 1)
                };
                for _ in 0..rng.gen_range(0..4) {
                    p = mul_linear(&ring, &p, &beta);
                }
                if p.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let m = multiplicity_at_point(&ring, &p, &beta).unwrap();
                assert_eq!(m, division_multiplicity(&ring, &p, &beta), "q={q}");
            }
        }
    }

    #[test]
    fn multiplicity_matches_division_over_curve_rings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in [CurveSpec::genus1(), CurveSpec::genus2()] {
            let pool: Vec<CurveElement> = (0..8).flat_map(|d| crate::curve::enumerate_by_degree(&spec, d)).collect();
            for _ in 0..1000 {
                let len = rng.gen_range(1..5);
                let mut p: Vec<CurveElement> = (0..len).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
                let beta = if rng.gen_bool(0.6) {
                    spec.one()
                } else {
                    pool[rng.gen_range(0..pool.len())].clone()
                };
                for _ in 0..rng.gen_range(0..4) {
                    p = mul_linear(spec.as_ref(), &p, &beta);
                }
                if p.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let m = multiplicity_at_point(spec.as_ref(), &p, &beta).unwrap();
                assert_eq!(m, division_multiplicity(spec.as_ref(), &p, &beta));
            }
        }
    }

    #[test]
    fn trivial_zero_examples() {
        let g1 = ZetaRing::parse("genus1").unwrap();
        let rep = trivial_zero_report(&g1, 1).unwrap();
        assert_eq!((rep.v0, rep.v1, rep.nonclassical), (1, 2, true));
        let g2 = ZetaRing::parse("genus2").unwrap();
        let rep = trivial_zero_report(&g2, 7).unwrap();
        assert_eq!((rep.v1, rep.nonclassical), (1, false));
        let f3 = ZetaRing::fqt(3).unwrap();
        assert_eq!(trivial_zero_report(&f3, 2).unwrap().v1, 1);
        assert!(matches!(trivial_zero_report(&f3, 3), Err(Error::NotATrivialZero { j: 3, .. })));
        assert!(matches!(trivial_zero_report(&g1, 0), Err(Error::NotATrivialZero { j: 0, .. })));
    }

    #[test]
    fn newton_polygon_examples() {
        let ring = f2t();
        let np = newton_polygon_infty(&ring, &parse_all(&ring, &["1", "T^2+T+1", "T^2+T"]));
        assert_eq!(np.slopes_string(), "-2/1:1|0/1:1");
        assert!(rh_simplicity_check(&np).holds);
        let mono = newton_polygon_infty(&ring, &parse_all(&ring, &["0", "T"]));
        assert!(mono.segments.is_empty());
        assert!(rh_simplicity_check(&mono).holds);
        let g1 = CurveSpec::genus1();
        let np = newton_polygon_infty(g1.as_ref(), &[g1.one(), g1.zero(), g1.one()]);
        assert_eq!(np.slopes_string(), "0/1:2");
        let check = rh_simplicity_check(&np);
        assert!(!check.holds);
        assert_eq!(check.violations.len(), 1);
    }

    #[test]
    fn hull_merges_collinear_and_keeps_points_above() {
        let np = NewtonPolygon::from_points(vec![(0, 0), (1, 1), (2, 2), (3, 0), (4, -1)]);
        for s in np.segments.windows(2) {
            assert!(s[0].slope < s[1].slope);
        }
        let total: u64 = np.segments.iter().map(|s| s.length).sum();
        assert_eq!(total, 4);
        assert_eq!(np.slopes_string(), "-1/4:4");
        let np = NewtonPolygon::from_points(vec![(0, 0), (1, -1), (3, -2), (4, 0)]);
        assert_eq!(np.slopes_string(), "-1/1:1|-1/2:2|2/1:1");
    }

    #[test]
    fn slope_serde_round_trip() {
        let s: Slope = "-3/6".parse().unwrap();
        assert_eq!(s.to_string(), "-1/2");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"-1/2\"");
        assert_eq!(serde_json::from_str::<Slope>(&json).unwrap(), s);
        assert!("1/0".parse::<Slope>().is_err());
    }

    #[test]
    fn unit_roots_examples() {
        let ring = f2t();
        let z = parse_all(&ring, &["1", "1"]);
        let ur = unit_root_multiplicities(&ring, &z, 1).unwrap();
        assert_eq!(ur.roots, BTreeMap::from([(1, 1)]));
        let none = parse_all(&ring, &["1", "1", "1"]);
        assert!(unit_root_multiplicities(&ring, &none, 1).unwrap().roots.is_empty());
        // 1 + u + u^2 has its roots in F_4.
        let ur = unit_root_multiplicities(&ring, &none, 2).unwrap();
        assert_eq!(ur.roots.len(), 2);
        let chi0 = parse_all(&ring, &["1", "T+1", "T"]);
        assert_eq!(unit_root_multiplicities(&ring, &chi0, 1).unwrap().roots, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn frobenius_does_not_lower_the_order() {
        for id in ["fqt:2", "fqt:3", "genus1", "genus2"] {
            let ring = ZetaRing::parse(id).unwrap();
            let p = ring.p();
            let step = ring.r() - 1;
            for j in (step..40).step_by(step as usize) {
                if j * p > 80 {
                    break;
                }
                let a = trivial_zero_report(&ring, j).unwrap();
                let b = trivial_zero_report(&ring, p * j).unwrap();
                assert!(b.v1 >= a.v1 && a.v1 >= 1, "{id} j={j}");
                assert!(a.np_zero_slope_length >= a.v1 as u64);
            }
        }
    }
}
