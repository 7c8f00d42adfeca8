//! Context-object ring interface shared by the coefficient domains
//! (finite fields, `F_q[T]`, and the Artin–Schreier curve rings).
//!
//! Elements are plain values; all arithmetic goes through the ring object,
//! which owns the structure constants (field tables, curve relation).

use std::fmt::Debug;

use crate::error::Result;

pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The prime characteristic.
    fn characteristic(&self) -> u64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// The image of the integer `k` (reduced mod the characteristic).
    fn from_int(&self, k: u64) -> Self::Elem {
        let k = k % self.characteristic();
        let one = self.one();
        let mut acc = self.zero();
        for _ in 0..k {
            acc = self.add(&acc, &one);
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Rings carrying the degree attached to the place at infinity
/// (`-v_inf`). `None` for the zero element.
pub trait Graded: Ring {
    fn degree(&self, a: &Self::Elem) -> Option<u64>;
}

/// Rings whose elements have a canonical text form.
pub trait TextFormat: Ring {
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
}
