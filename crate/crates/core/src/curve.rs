//! The Artin–Schreier rings `A = F_2[T1, T2] / (T1^2 + T1 + h(T2))` with
//! `h` of odd degree `w`.
//!
//! Elements are kept in the normal form `g + h*T1` with `g, h in F_2[T2]`.
//! At the unique place at infinity `v(T2) = -2` and `v(T1) = -w`, so the
//! degree of `g + h*T1` is `max(2 deg g, w + 2 deg h)`; the two candidates
//! have opposite parity and never tie. Every nonzero element has sign 1.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{F2Poly, PolyRing};
use crate::ring::{Graded, Ring, TextFormat};

/// Strata larger than this are split into blocks for parallel reduction.
const PARALLEL_BLOCK_BITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    relation: F2Poly,
    weight: usize,
    genus: usize,
    label: String,
    experimental: bool,
}

/// Run-metadata form of a [`CurveSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInfo {
    pub p: u32,
    pub w: usize,
    pub genus: usize,
    pub relation: String,
    pub experimental: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CurveElement {
    pub g_part: F2Poly,
    pub h_part: F2Poly,
}

impl CurveElement {
    pub fn new(g_part: F2Poly, h_part: F2Poly) -> Self {
        CurveElement { g_part, h_part }
    }

    pub fn zero() -> Self {
        CurveElement::default()
    }

    pub fn one() -> Self {
        CurveElement::new(F2Poly::one(), F2Poly::zero())
    }

    /// `T2^a`.
    pub fn t2_pow(a: usize) -> Self {
        CurveElement::new(F2Poly::monomial(a), F2Poly::zero())
    }

    /// `T2^a * T1`.
    pub fn t2_pow_t1(a: usize) -> Self {
        CurveElement::new(F2Poly::zero(), F2Poly::monomial(a))
    }

    pub fn is_zero(&self) -> bool {
        self.g_part.is_zero() && self.h_part.is_zero()
    }

    pub fn add_assign(&mut self, other: &CurveElement) {
        self.g_part.add_assign(&other.g_part);
        self.h_part.add_assign(&other.h_part);
    }
}

impl CurveSpec {
    /// `T1^2 + T1 + T2^3 + T2 + 1`.
    pub fn genus1() -> Arc<CurveSpec> {
        Arc::new(Self::build(F2Poly::from_exponents(&[3, 1, 0]), "genus1", false))
    }

    /// `T1^2 + T1 + T2^5 + T2^3 + 1`.
    pub fn genus2() -> Arc<CurveSpec> {
        Arc::new(Self::build(F2Poly::from_exponents(&[5, 3, 0]), "genus2", false))
    }

    /// An arbitrary odd-degree relation. Anything other than the two
    /// built-in rings is flagged experimental: class number one and a
    /// degree-one place at infinity are not checked.
    pub fn from_relation(relation: F2Poly) -> Result<Arc<CurveSpec>> {
        let w = relation
            .degree()
            .ok_or_else(|| Error::InvalidInput("curve relation must be nonzero".into()))?;
        if w % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "curve relation must have odd degree, got {w}"
            )));
        }
        for known in [Self::genus1(), Self::genus2()] {
            if known.relation == relation {
                return Ok(known);
            }
        }
        let label = format!("curve:{}", render_f2(&relation));
        Ok(Arc::new(Self::build(relation, &label, true)))
    }

    fn build(relation: F2Poly, label: &str, experimental: bool) -> CurveSpec {
        let weight = relation.degree().expect("nonzero relation");
        CurveSpec {
            relation,
            weight,
            genus: (weight - 1) / 2,
            label: label.to_string(),
            experimental,
        }
    }

    pub fn relation(&self) -> &F2Poly {
        &self.relation
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_experimental(&self) -> bool {
        self.experimental
    }

    pub fn info(&self) -> CurveInfo {
        CurveInfo {
            p: 2,
            w: self.weight,
            genus: self.genus,
            relation: render_f2(&self.relation),
            experimental: self.experimental,
        }
    }

    /// `max(2 deg g, w + 2 deg h)`, `None` for zero.
    pub fn element_degree(&self, a: &CurveElement) -> Option<u64> {
        let from_g = a.g_part.degree().map(|d| 2 * d as u64);
        let from_h = a.h_part.degree().map(|d| self.weight as u64 + 2 * d as u64);
        from_g.max(from_h)
    }

    /// `(g1 + h1 T1)(g2 + h2 T1) = (g1 g2 + h1 h2 h(T2)) + (g1 h2 + g2 h1 + h1 h2) T1`.
    pub fn multiply(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        let gg = a.g_part.mul(&b.g_part);
        let hh = a.h_part.mul(&b.h_part);
        // Karatsuba for the cross term: (g1+h1)(g2+h2) - g1 g2 - h1 h2.
        let mut cross = a.g_part.add(&a.h_part).mul(&b.g_part.add(&b.h_part));
        cross.add_assign(&gg);
        let mut g = gg;
        g.add_assign(&hh.mul(&self.relation));
        CurveElement::new(g, cross)
    }

    /// `(g + h T1)^2 = (g^2 + h^2 h(T2)) + h^2 T1`.
    pub fn square(&self, a: &CurveElement) -> CurveElement {
        let h2 = a.h_part.square();
        let mut g = a.g_part.square();
        g.add_assign(&h2.mul(&self.relation));
        CurveElement::new(g, h2)
    }

    /// The monomial `T2^a T1^b` of degree `d`, if any.
    pub fn monomial_of_degree(&self, d: usize) -> Option<CurveElement> {
        if d % 2 == 0 {
            Some(CurveElement::t2_pow(d / 2))
        } else if d >= self.weight {
            Some(CurveElement::t2_pow_t1((d - self.weight) / 2))
        } else {
            None
        }
    }

    /// Monomials of degree `< d`, in increasing degree.
    pub fn monomials_below(&self, d: usize) -> Vec<CurveElement> {
        (0..d).filter_map(|e| self.monomial_of_degree(e)).collect()
    }

    /// The degree-`d` elements: the degree-`d` monomial plus any `F_2`
    /// combination of lower monomials. `None` at gap degrees.
    pub fn stratum(&self, d: usize) -> Option<Stratum> {
        let top = self.monomial_of_degree(d)?;
        Some(Stratum {
            top,
            basis: self.monomials_below(d),
        })
    }

    /// The degrees in `0..d` carrying no element (Weierstrass gaps at infinity).
    pub fn gap_degrees(&self, below: usize) -> Vec<usize> {
        (0..below)
            .filter(|&d| self.monomial_of_degree(d).is_none())
            .collect()
    }

    fn render_element(&self, a: &CurveElement) -> String {
        format!("{};{}", render_f2(&a.g_part), render_f2(&a.h_part))
    }
}

/// The elements of one degree, as an affine `F_2`-space `top + span(basis)`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub top: CurveElement,
    pub basis: Vec<CurveElement>,
}

impl Stratum {
    pub fn len(&self) -> u64 {
        1u64 << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The element selected by the bit mask (bit `k` adds `basis[k]`).
    pub fn element(&self, mask: u64) -> CurveElement {
        let mut a = self.top.clone();
        for (k, b) in self.basis.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                a.add_assign(b);
            }
        }
        a
    }

    /// Elements in mask order, lowest basis monomial varying fastest.
    pub fn iter(&self) -> impl Iterator<Item = CurveElement> + '_ {
        (0..self.len()).map(|mask| self.element(mask))
    }
}

/// Ordered stream of the nonzero elements of degree `d` (empty at gaps).
pub fn enumerate_by_degree(spec: &CurveSpec, d: usize) -> Vec<CurveElement> {
    match spec.stratum(d) {
        Some(s) => s.iter().collect(),
        None => Vec::new(),
    }
}

/// Checked multiplication of elements tagged with their ring.
pub fn curve_multiply(
    a: (&Arc<CurveSpec>, &CurveElement),
    b: (&Arc<CurveSpec>, &CurveElement),
) -> Result<CurveElement> {
    if !Arc::ptr_eq(a.0, b.0) && a.0 != b.0 {
        return Err(Error::SpecMismatch(format!("{} vs {}", a.0.label, b.0.label)));
    }
    Ok(a.0.multiply(a.1, b.1))
}

/// `a^j` as the product of the Frobenius powers `a^(2^i)` over the binary
/// digits of `j`, each obtained by repeated squaring.
pub fn curve_pow(spec: &CurveSpec, a: &CurveElement, j: u64) -> CurveElement {
    let mut acc = CurveElement::one();
    let mut sq = a.clone();
    let mut e = j;
    while e > 0 {
        if e & 1 == 1 {
            acc = spec.multiply(&acc, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = spec.square(&sq);
        }
    }
    acc
}

/// `sum over deg a = d of a^j`.
///
/// Since `a -> a^(2^i)` is additive, the Frobenius factors of a stratum
/// element are the top monomial's factors plus those of the selected basis
/// monomials. Walking the stratum in Gray-code order updates each factor by
/// one addition; only the product of the `l_2(j)` factors is recomputed per
/// element.
pub fn curve_power_sum(spec: &CurveSpec, d: usize, j: u64) -> CurveElement {
    let Some(stratum) = spec.stratum(d) else {
        return CurveElement::zero();
    };
    let n = stratum.basis.len();
    if j == 0 {
        // 2^n copies of 1.
        return if n == 0 { CurveElement::one() } else { CurveElement::zero() };
    }
    let bits: Vec<u32> = (0..64).filter(|i| (j >> i) & 1 == 1).collect();
    let frob = |a: &CurveElement| -> Vec<CurveElement> {
        let mut out = Vec::with_capacity(bits.len());
        let mut cur = a.clone();
        let mut at = 0u32;
        for &i in &bits {
            while at < i {
                cur = spec.square(&cur);
                at += 1;
            }
            out.push(cur.clone());
        }
        out
    };
    let top_frob = frob(&stratum.top);
    let basis_frob: Vec<Vec<CurveElement>> = stratum.basis.iter().map(frob).collect();

    let run_block = |start: u64, len: u64| -> CurveElement {
        let gray = start ^ (start >> 1);
        let mut factors = top_frob.clone();
        for (k, bf) in basis_frob.iter().enumerate() {
            if (gray >> k) & 1 == 1 {
                for (f, b) in factors.iter_mut().zip(bf) {
                    f.add_assign(b);
                }
            }
        }
        let mut acc = product(spec, &factors);
        for s in start + 1..start + len {
            let k = s.trailing_zeros() as usize;
            for (f, b) in factors.iter_mut().zip(&basis_frob[k]) {
                f.add_assign(b);
            }
            acc.add_assign(&product(spec, &factors));
        }
        acc
    };

    if n <= PARALLEL_BLOCK_BITS + 2 {
        return run_block(0, 1u64 << n);
    }
    let block = 1u64 << PARALLEL_BLOCK_BITS;
    let blocks = (1u64 << n) / block;
    (0..blocks)
        .into_par_iter()
        .map(|b| run_block(b * block, block))
        .reduce(CurveElement::zero, |mut x, y| {
            x.add_assign(&y);
            x
        })
}

fn product(spec: &CurveSpec, factors: &[CurveElement]) -> CurveElement {
    let mut it = factors.iter();
    let first = it.next().cloned().unwrap_or_else(CurveElement::one);
    it.fold(first, |acc, f| spec.multiply(&acc, f))
}

fn f2_ring() -> PolyRing {
    PolyRing::with_var(FieldSpec::prime(2).expect("F_2"), "T2")
}

fn render_f2(a: &F2Poly) -> String {
    f2_ring().render(&a.to_poly())
}

fn parse_f2(s: &str) -> Result<F2Poly> {
    Ok(F2Poly::from_poly(&f2_ring().parse(s)?))
}

/// Parses a relation polynomial written in `T2`.
pub fn parse_relation(s: &str) -> Result<F2Poly> {
    parse_f2(s)
}

impl Ring for CurveSpec {
    type Elem = CurveElement;

    fn zero(&self) -> CurveElement {
        CurveElement::zero()
    }
    fn one(&self) -> CurveElement {
        CurveElement::one()
    }
    fn is_zero(&self, a: &CurveElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }
    fn neg(&self, a: &CurveElement) -> CurveElement {
        a.clone()
    }
    fn mul(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        self.multiply(a, b)
    }
    fn characteristic(&self) -> u64 {
        2
    }
    fn pow(&self, a: &CurveElement, e: u64) -> CurveElement {
        curve_pow(self, a, e)
    }
}

impl Graded for CurveSpec {
    fn degree(&self, a: &CurveElement) -> Option<u64> {
        self.element_degree(a)
    }
}

impl TextFormat for CurveSpec {
    /// `g;h` for `g + h*T1`, each part in the `T2` polynomial grammar.
    fn render(&self, a: &CurveElement) -> String {
        self.render_element(a)
    }

    fn parse(&self, s: &str) -> Result<CurveElement> {
        let (g, h) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("curve element {s:?} must be written g;h")))?;
        Ok(CurveElement::new(parse_f2(g)?, parse_f2(h)?))
    }
}
