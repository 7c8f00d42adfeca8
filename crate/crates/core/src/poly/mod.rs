//! Univariate polynomials over `F_q`: the ring `A = F_q[T]`.
//!
//! Coefficients are stored densely in ascending order with no trailing
//! zeros, so the zero polynomial is the empty vector.

mod f2;
mod text;

use std::sync::Arc;

pub use f2::F2Poly;

use crate::digits::base_digits;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldEmbedding, FieldSpec};
use crate::ring::{Graded, Ring, TextFormat};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// Builds a polynomial from ascending coefficients, stripping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: FieldElement, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The variable `T`.
    pub fn x() -> Self {
        Self::monomial(FieldElement::ONE, 1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FieldElement::ONE
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// `F_q[T]` as a ring object.
#[derive(Clone, Debug)]
pub struct PolyRing {
    field: Arc<FieldSpec>,
    var: String,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.var == other.var
    }
}

impl PolyRing {
    pub fn new(field: Arc<FieldSpec>) -> Self {
        Self::with_var(field, "T")
    }

    pub fn with_var(field: Arc<FieldSpec>, var: &str) -> Self {
        PolyRing {
            field,
            var: var.to_string(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Field order `q`.
    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }

    pub fn scale(&self, c: FieldElement, a: &Poly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(a.coeffs.iter().map(|&x| self.field.mul_elems(c, x)).collect())
    }

    /// `a * T^k`.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; k];
        coeffs.extend_from_slice(&a.coeffs);
        Poly { coeffs }
    }

    pub fn add_assign(&self, acc: &mut Poly, b: &Poly) {
        if acc.coeffs.len() < b.coeffs.len() {
            acc.coeffs.resize(b.coeffs.len(), FieldElement::ZERO);
        }
        for (x, &y) in acc.coeffs.iter_mut().zip(&b.coeffs) {
            *x = self.field.add_elems(*x, y);
        }
        while acc.coeffs.last().is_some_and(|c| c.is_zero()) {
            acc.coeffs.pop();
        }
    }

    /// Product; the sparser operand drives the loop, which keeps products by
    /// Frobenius-spread factors cheap.
    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let (sparse, dense) = if a.nnz() <= b.nnz() { (a, b) } else { (b, a) };
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        let f = &*self.field;
        if f.m() == 1 && f.p() < (1 << 16) {
            let p = f.p() as u64;
            if p == 2 {
                let mut out = vec![0u32; len];
                for (i, c) in sparse.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, d) in out[i..].iter_mut().zip(&dense.coeffs) {
                        *o ^= d.0;
                    }
                }
                return Poly::from_coeffs(out.into_iter().map(FieldElement).collect());
            }
            // Accumulate unreduced; (p-1)^2 * len stays below u64::MAX for p < 2^16.
            let mut out = vec![0u64; len];
            for (i, c) in sparse.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = c.0 as u64;
                for (o, d) in out[i..].iter_mut().zip(&dense.coeffs) {
                    *o += c * d.0 as u64;
                }
            }
            return Poly::from_coeffs(
                out.into_iter()
                    .map(|x| FieldElement((x % p) as u32))
                    .collect(),
            );
        }
        let mut out = vec![FieldElement::ZERO; len];
        for (i, &c) in sparse.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &d) in out[i..].iter_mut().zip(&dense.coeffs) {
                *o = f.add_elems(*o, f.mul_elems(c, d));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Division with remainder by a nonzero divisor.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = self.field.inv(b.lead())?;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut q = vec![FieldElement::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = r[top];
            if c.is_zero() {
                continue;
            }
            let t = self.field.mul_elems(c, inv_lead);
            q[top - db] = t;
            for (k, &bk) in b.coeffs.iter().enumerate() {
                let idx = top - db + k;
                r[idx] = self.field.add_elems(r[idx], self.field.neg_elem(self.field.mul_elems(t, bk)));
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(a, b)?.1)
    }

    pub fn monic(&self, a: &Poly) -> Result<Poly> {
        let inv = self.field.inv(a.lead())?;
        Ok(self.scale(inv, a))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        if x.is_zero() {
            x
        } else {
            self.monic(&x).expect("nonzero")
        }
    }

    pub fn pow_mod(&self, a: &Poly, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut acc = self.rem(&Poly::one(), m)?;
        let mut base = self.rem(a, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul_poly(&acc, &base), m)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.rem(&self.mul_poly(&base, &base), m)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, a: &Poly, x: FieldElement) -> FieldElement {
        a.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
            self.field.add_elems(self.field.mul_elems(acc, x), c)
        })
    }

    /// Applies `c -> c^(p^i)` to every coefficient.
    pub fn frobenius_coeffs(&self, a: &Poly, i: u32) -> Poly {
        Poly {
            coeffs: a.coeffs.iter().map(|&c| self.field.frobenius(c, i)).collect(),
        }
    }

    /// Substitutes `T -> T^k`.
    pub fn spread(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; (a.coeffs.len() - 1) * k + 1];
        for (i, &c) in a.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        Poly { coeffs }
    }

    /// `a^j` through the base-p expansion `j = sum j_i p^i`: the factor
    /// `a^(p^i)` is the coefficient Frobenius of `a` with exponents spread by
    /// `p^i`, so every multiplication has a sparse operand.
    pub fn pow_frobenius_split(&self, a: &Poly, j: u64) -> Poly {
        if j == 0 {
            return Poly::one();
        }
        let p = self.p();
        let mut acc = Poly::one();
        for (i, digit) in base_digits(j, p).into_iter().enumerate() {
            if digit == 0 {
                continue;
            }
            let twisted = self.spread(&self.frobenius_coeffs(a, i as u32), p.pow(i as u32) as usize);
            for _ in 0..digit {
                acc = self.mul_poly(&acc, &twisted);
            }
        }
        acc
    }

    /// Order of vanishing at the prime `v` (`None` for the zero polynomial).
    pub fn ord(&self, a: &Poly, v: &Poly) -> Option<usize> {
        if a.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = a.clone();
        loop {
            let (q, r) = self.divrem(&cur, v).expect("nonzero place");
            if !r.is_zero() {
                return Some(k);
            }
            cur = q;
            k += 1;
        }
    }

    /// Maps coefficients through a field embedding into `target`.
    pub fn embed(&self, a: &Poly, emb: &FieldEmbedding) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&c| emb.map(c)).collect())
    }

    /// Deterministic irreducibility test (Ben-Or): `f` of degree `n` is
    /// irreducible iff `gcd(f, T^(q^i) - T) = 1` for `1 <= i <= n/2`.
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool> {
        let n = f
            .degree()
            .ok_or_else(|| Error::InvalidInput("the zero polynomial has no factorization".into()))?;
        if n == 0 {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic(f)?;
        let x = Poly::x();
        let mut h = self.rem(&x, &f)?;
        for _ in 1..=n / 2 {
            h = self.pow_mod(&h, self.q(), &f)?;
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut acc = a.clone();
        self.add_assign(&mut acc, b);
        acc
    }
    fn neg(&self, a: &Poly) -> Poly {
        Poly {
            coeffs: a.coeffs.iter().map(|&c| self.field.neg_elem(c)).collect(),
        }
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.mul_poly(a, b)
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn from_int(&self, k: u64) -> Poly {
        Poly::constant(self.field.from_u64(k))
    }
}

impl Graded for PolyRing {
    fn degree(&self, a: &Poly) -> Option<u64> {
        a.degree().map(|d| d as u64)
    }
}

impl TextFormat for PolyRing {
    fn render(&self, a: &Poly) -> String {
        text::render(&self.field, &self.var, a)
    }
    fn parse(&self, s: &str) -> Result<Poly> {
        text::parse(&self.field, &self.var, s)
    }
}

/// Iterator over the `q^d` monic polynomials of degree `d`, in
/// lexicographic order of coefficient vectors with the constant term
/// varying fastest.
pub struct MonicIter {
    q: u32,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let mut coeffs: Vec<FieldElement> = self.digits.iter().map(|&c| FieldElement(c)).collect();
        coeffs.push(FieldElement::ONE);
        let item = Poly { coeffs };
        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.q {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(item)
    }
}

pub fn monic_enumerate(field: &FieldSpec, d: usize) -> MonicIter {
    MonicIter {
        q: field.order(),
        digits: vec![0; d],
        done: false,
    }
}

/// `S_d(j) = sum of n^j over monic n of degree d`, with `n^j` formed by the
/// base-p Frobenius split.
pub fn frobenius_power_sum(ring: &PolyRing, d: usize, j: u64) -> Poly {
    let mut acc = Poly::zero();
    for n in monic_enumerate(ring.field(), d) {
        let t = ring.pow_frobenius_split(&n, j);
        ring.add_assign(&mut acc, &t);
    }
    acc
}
