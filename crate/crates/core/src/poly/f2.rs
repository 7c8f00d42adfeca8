//! Bit-packed polynomials over `F_2`; bit `k` of the word vector is the
//! coefficient of `x^k`.

use std::fmt;

use crate::field::FieldElement;

use super::Poly;

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<usize> = self.exponents().collect();
        write!(f, "F2Poly{exps:?}")
    }
}

impl F2Poly {
    pub fn zero() -> Self {
        F2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        F2Poly { words: vec![1] }
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        F2Poly { words }
    }

    /// From the exponents carrying a 1 (repeats cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut out = F2Poly::zero();
        for &k in exps {
            out.add_assign(&F2Poly::monomial(k));
        }
        out
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        F2Poly { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn bit(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add_assign(&mut self, other: &F2Poly) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        self.normalize();
    }

    pub fn add(&self, other: &F2Poly) -> F2Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> F2Poly {
        if self.is_zero() {
            return F2Poly::zero();
        }
        let mut out = vec![0u64; self.words.len() + k / 64 + 1];
        xor_shifted(&mut out, &self.words, k);
        F2Poly::from_words(out)
    }

    pub fn mul(&self, other: &F2Poly) -> F2Poly {
        if self.is_zero() || other.is_zero() {
            return F2Poly::zero();
        }
        let (a, b) = (&self.words, &other.words);
        let mut out = vec![0u64; a.len() + b.len()];
        let (pa, pb) = (self.popcount(), other.popcount());
        let (sparse, sp, dense) = if pa <= pb { (self, pa, b) } else { (other, pb, a) };
        // Shift-and-xor costs about one word op per set bit and dense word;
        // the carry-less kernel about two per word pair.
        if sp * dense.len() <= 2 * a.len() * b.len() {
            for k in sparse.exponents() {
                xor_shifted(&mut out, dense, k);
            }
        } else {
            clmul_schoolbook(a, b, &mut out);
        }
        F2Poly::from_words(out)
    }

    /// Squaring spreads bit `k` to bit `2k`.
    pub fn square(&self) -> F2Poly {
        let mut out = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            out.push(spread_bits(w as u32));
            out.push(spread_bits((w >> 32) as u32));
        }
        F2Poly::from_words(out)
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.degree().map_or(0, |d| d + 1);
        Poly::from_coeffs(
            (0..n)
                .map(|k| if self.bit(k) { FieldElement::ONE } else { FieldElement::ZERO })
                .collect(),
        )
    }

    /// Interprets a polynomial over `F_2` (coefficient codes 0/1).
    pub fn from_poly(p: &Poly) -> F2Poly {
        let exps: Vec<usize> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.code() & 1 == 1)
            .map(|(k, _)| k)
            .collect();
        let mut words = vec![0u64; exps.last().map_or(0, |k| k / 64 + 1)];
        for k in exps {
            words[k / 64] |= 1u64 << (k % 64);
        }
        F2Poly::from_words(words)
    }
}

fn xor_shifted(out: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    if bs == 0 {
        for (o, s) in out[ws..].iter_mut().zip(src) {
            *o ^= s;
        }
    } else {
        let mut carry = 0u64;
        for (o, &s) in out[ws..].iter_mut().zip(src) {
            *o ^= (s << bs) | carry;
            carry = s >> (64 - bs);
        }
        if carry != 0 {
            out[ws + src.len()] ^= carry;
        }
    }
}

fn spread_bits(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

fn clmul_schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            unsafe { clmul_schoolbook_pclmul(a, b, out) };
            return;
        }
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (k, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul_soft(x, y);
            out[i + k] ^= lo;
            out[i + k + 1] ^= hi;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_schoolbook_pclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xv = _mm_set_epi64x(0, x as i64);
        for (k, &y) in b.iter().enumerate() {
            let r = _mm_clmulepi64_si128(xv, _mm_set_epi64x(0, y as i64), 0x00);
            let lo = _mm_cvtsi128_si64(r) as u64;
            let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
            out[i + k] ^= lo;
            out[i + k + 1] ^= hi;
        }
    }
}

/// Portable 64x64 -> 128 carry-less product with a 4-bit window.
fn clmul_soft(x: u64, y: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    for t in 1..16usize {
        let mut v = 0u128;
        for bit in 0..4 {
            if (t >> bit) & 1 == 1 {
                v ^= (y as u128) << bit;
            }
        }
        table[t] = v;
    }
    let mut acc = 0u128;
    for nib in (0..16).rev() {
        acc <<= 4;
        acc ^= table[((x >> (4 * nib)) & 0xF) as usize];
    }
    (acc as u64, (acc >> 64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mul(a: &F2Poly, b: &F2Poly) -> F2Poly {
        let mut out = F2Poly::zero();
        for i in a.exponents() {
            for k in b.exponents() {
                out.add_assign(&F2Poly::monomial(i + k));
            }
        }
        out
    }

    #[test]
    fn soft_clmul_matches_definition() {
        let cases = [(0u64, 5u64), (1, u64::MAX), (0xDEAD_BEEF_1234_5678, 0x8000_0000_0000_0001)];
        for (x, y) in cases {
            let (lo, hi) = clmul_soft(x, y);
            let mut expect = 0u128;
            for i in 0..64 {
                if (x >> i) & 1 == 1 {
                    expect ^= (y as u128) << i;
                }
            }
            assert_eq!((lo, hi), (expect as u64, (expect >> 64) as u64));
        }
    }

    #[test]
    fn degree_and_bits() {
        let p = F2Poly::from_exponents(&[0, 3, 130]);
        assert_eq!(p.degree(), Some(130));
        assert!(p.bit(3) && !p.bit(2));
        assert_eq!(F2Poly::zero().degree(), None);
        assert_eq!(F2Poly::from_exponents(&[5, 5]), F2Poly::zero());
    }

    proptest! {
        #[test]
        fn mul_matches_naive(a in prop::collection::vec(any::<u64>(), 0..6),
                             b in prop::collection::vec(any::<u64>(), 0..6)) {
            let a = F2Poly::from_words(a);
            let b = F2Poly::from_words(b);
            prop_assert_eq!(a.mul(&b), naive_mul(&a, &b));
            prop_assert_eq!(a.square(), a.mul(&a));
            let mut out = vec![0u64; a.words().len() + b.words().len()];
            if !a.is_zero() && !b.is_zero() {
                clmul_schoolbook(a.words(), b.words(), &mut out);
                prop_assert_eq!(F2Poly::from_words(out), naive_mul(&a, &b));
            }
        }

        #[test]
        fn poly_conversion_round_trip(a in prop::collection::vec(any::<u64>(), 0..4)) {
            let a = F2Poly::from_words(a);
            prop_assert_eq!(F2Poly::from_poly(&a.to_poly()), a);
        }
    }
}
