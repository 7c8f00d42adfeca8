//! Prime and extension finite fields `F_{p^m}`.
//!
//! An element is stored as the integer code `sum c_i p^i` of its coordinate
//! vector in the polynomial basis `1, x, ..., x^{m-1}` modulo the field's
//! defining polynomial. Multiplication goes through discrete-log tables built
//! once per field; the fields used here are small.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::digits::{is_prime, prime_power};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Largest field order for which log tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const ADD_TABLE_LIMIT: u32 = 256;

/// An element of some `F_q`, as its coordinate code. Meaningful only
/// together with the [`FieldSpec`] it was produced by.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic defining polynomial over `F_p`, ascending, length `m + 1`.
    /// `None` for prime fields.
    modulus: Option<Vec<u32>>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    p_pows: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Serializable description of a field, recorded in run metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub m: u32,
    pub modulus: Option<Vec<u32>>,
    pub generator: Vec<u32>,
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<FieldSpec>> {
        Self::new(p, 1)
    }

    /// `F_{p^m}` with the library-chosen modulus: the first primitive monic
    /// polynomial of degree `m` in coefficient-code order (constant term
    /// varying fastest).
    pub fn new(p: u32, m: u32) -> Result<Arc<FieldSpec>> {
        check_size(p, m)?;
        if m == 1 {
            return Self::build(p, 1, None);
        }
        let q = (p as u64).pow(m);
        let factors = prime_factors(q - 1);
        for code in 0..(p as u64).pow(m) {
            let mut modulus = code_to_coords(code as u32, p, m);
            modulus.push(1);
            if modulus[0] == 0 || !is_irreducible_over_prime(&modulus, p) {
                continue;
            }
            let x = vec_x(m);
            if has_full_order(&x, &modulus, p, q - 1, &factors) {
                return Self::build(p, m, Some(modulus));
            }
        }
        Err(Error::InvalidInput(format!(
            "no primitive polynomial of degree {m} over F_{p}"
        )))
    }

    /// `F_{p^m}` for `m = modulus.len() - 1` with a caller-supplied monic
    /// modulus. The modulus is verified irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<FieldSpec>> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let m = (modulus.len() - 1) as u32;
        check_size(p, m)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if !is_irreducible_over_prime(&modulus, p) {
            return Err(Error::NotIrreducible(format!("{modulus:?} over F_{p}")));
        }
        if m == 1 {
            return Self::build(p, 1, None);
        }
        Self::build(p, m, Some(modulus))
    }

    fn build(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Arc<FieldSpec>> {
        let q = p.pow(m);
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            match &modulus {
                Some(md) => mul_mod_coords(a, b, md, p),
                None => vec![(a[0] as u64 * b[0] as u64 % p as u64) as u32],
            }
        };
        let reducer: Vec<u32> = modulus.clone().unwrap_or_else(|| vec![0, 1]);
        let generator = (1..q)
            .find(|&code| {
                let g = code_to_coords(code, p, m);
                match &modulus {
                    Some(md) => has_full_order(&g, md, p, order, &factors),
                    None => has_full_order(&g, &reducer, p, order, &factors),
                }
            })
            .ok_or_else(|| Error::InvalidInput("field has no generator".into()))?;

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let g = code_to_coords(generator, p, m);
        let mut cur = code_to_coords(1, p, m);
        for i in 0..order as u32 {
            let code = coords_to_code(&cur, p);
            if log[code as usize] != u32::MAX {
                return Err(Error::InvalidInput("generator order check failed".into()));
            }
            log[code as usize] = i;
            exp.push(code);
            cur = mul(&cur, &g);
        }
        let mut p_pows = Vec::with_capacity(m as usize);
        let mut pp = 1u32;
        for _ in 0..m {
            p_pows.push(pp);
            pp = pp.wrapping_mul(p);
        }
        let mut spec = FieldSpec {
            p,
            m,
            q,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
            add_table: None,
            p_pows,
        };
        if p != 2 && m > 1 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = spec.add_digits(a, b);
                }
            }
            spec.add_table = Some(table);
        }
        Ok(Arc::new(spec))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `q = p^m`.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            generator: self.coords(self.generator),
        }
    }

    /// Every element, in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn element(&self, code: u32) -> Result<FieldElement> {
        if code < self.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::SpecMismatch(format!(
                "code {code} is not an element of F_{}",
                self.q
            )))
        }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.m as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "{coords:?} is not a coordinate vector of F_{}",
                self.q
            )));
        }
        Ok(FieldElement(coords_to_code(coords, self.p)))
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        code_to_coords(a.0, self.p, self.m)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        for &pp in &self.p_pows {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * pp;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add_elems(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg_elem(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.m == 1 {
            return FieldElement(self.p - a.0);
        }
        let mut code = a.0;
        let mut out = 0;
        for &pp in &self.p_pows {
            let c = code % self.p;
            out += ((self.p - c) % self.p) * pp;
            code /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn mul_elems(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.m == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FieldElement(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm to the base of [`FieldSpec::generator`].
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// `generator^e`.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % (self.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize] as u64;
        Ok(self.exp((self.q as u64 - 1 - l) % (self.q as u64 - 1)))
    }

    /// `a^e` for a non-negative exponent (`0^0 = 1`).
    pub fn pow_elem(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u128;
        FieldElement(self.exp[((l * e as u128) % (self.q as u128 - 1)) as usize])
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: FieldElement, i: u32) -> FieldElement {
        if a.0 == 0 || self.m == 1 {
            return a;
        }
        let i = i % self.m;
        let l = self.log[a.0 as usize] as u64;
        let pi = (self.p as u64).pow(i);
        FieldElement(self.exp[((l * pi) % (self.q as u64 - 1)) as usize])
    }

    /// The integer `k` as a field element.
    pub fn from_u64(&self, k: u64) -> FieldElement {
        FieldElement((k % self.p as u64) as u32)
    }

    /// Text form used inside polynomial strings: a bare integer for prime
    /// fields, `[c0,c1,...]` otherwise.
    pub fn render(&self, a: FieldElement) -> String {
        if self.m == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coords = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad coordinate {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            return self.from_coords(&coords);
        }
        let v: u32 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        if self.m == 1 {
            if v >= self.p {
                return Err(Error::Parse(format!("{v} is not a residue mod {}", self.p)));
            }
            Ok(FieldElement(v))
        } else if v < self.p {
            // A bare integer in an extension field means a prime-field constant.
            Ok(FieldElement(v))
        } else {
            Err(Error::Parse(format!(
                "extension-field element must be written [c0,...], got {s:?}"
            )))
        }
    }

    /// JSON form: bare integer for prime fields, coordinate array otherwise.
    pub fn to_json(&self, a: FieldElement) -> serde_json::Value {
        if self.m == 1 {
            serde_json::Value::from(a.0)
        } else {
            serde_json::Value::from(self.coords(a))
        }
    }
}

impl Ring for FieldSpec {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0 == 0
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add_elems(*a, *b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        self.neg_elem(*a)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.mul_elems(*a, *b)
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn from_int(&self, k: u64) -> FieldElement {
        self.from_u64(k)
    }
    fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow_elem(*a, e)
    }
}

/// A field element bundled with its field, for the checked arithmetic entry
/// point [`field_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    pub spec: Arc<FieldSpec>,
    pub value: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
    Frobenius(u32),
}

impl Gf {
    pub fn new(spec: &Arc<FieldSpec>, value: FieldElement) -> Result<Self> {
        spec.element(value.0)?;
        Ok(Gf {
            spec: Arc::clone(spec),
            value,
        })
    }

    fn same_field(&self, other: &Gf) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!(
                "F_{} vs F_{}",
                self.spec.order(),
                other.spec.order()
            )))
        }
    }

    fn with(&self, value: FieldElement) -> Gf {
        Gf {
            spec: Arc::clone(&self.spec),
            value,
        }
    }

    pub fn coords(&self) -> Vec<u32> {
        self.spec.coords(self.value)
    }
}

/// Checked field arithmetic. Binary operations take `b`; unary ones ignore it.
pub fn field_arith(a: &Gf, b: Option<&Gf>, op: FieldOp) -> Result<Gf> {
    let need_b = || b.ok_or_else(|| Error::InvalidInput(format!("{op:?} needs two operands")));
    match op {
        FieldOp::Add => {
            let b = need_b()?;
            a.same_field(b)?;
            Ok(a.with(a.spec.add_elems(a.value, b.value)))
        }
        FieldOp::Mul => {
            let b = need_b()?;
            a.same_field(b)?;
            Ok(a.with(a.spec.mul_elems(a.value, b.value)))
        }
        FieldOp::Inv => Ok(a.with(a.spec.inv(a.value)?)),
        FieldOp::Pow(e) => Ok(a.with(a.spec.pow_elem(a.value, e))),
        FieldOp::Frobenius(i) => Ok(a.with(a.spec.frobenius(a.value, i))),
    }
}

/// A field embedding `F_{p^m} -> F_{p^n}` (`m | n`), tabulated on every
/// element of the source field.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: Arc<FieldSpec>,
    target: Arc<FieldSpec>,
    table: Vec<FieldElement>,
}

impl FieldEmbedding {
    /// Sends the source's basis root to the first root (in code order) of
    /// the source modulus inside the target field.
    pub fn new(source: &Arc<FieldSpec>, target: &Arc<FieldSpec>) -> Result<Self> {
        if source.p != target.p || target.m % source.m != 0 {
            return Err(Error::SpecMismatch(format!(
                "F_{} does not embed in F_{}",
                source.q, target.q
            )));
        }
        let root = match &source.modulus {
            None => FieldElement::ONE,
            Some(md) => {
                let md_t: Vec<FieldElement> = md.iter().map(|&c| target.from_u64(c as u64)).collect();
                target
                    .elements()
                    .find(|&x| {
                        let mut acc = FieldElement::ZERO;
                        for c in md_t.iter().rev() {
                            acc = target.add_elems(target.mul_elems(acc, x), *c);
                        }
                        acc.is_zero()
                    })
                    .ok_or_else(|| Error::InvalidInput("source modulus has no root".into()))?
            }
        };
        let table = source
            .elements()
            .map(|a| {
                if source.m == 1 {
                    return target.from_u64(a.0 as u64);
                }
                let mut acc = FieldElement::ZERO;
                for &c in source.coords(a).iter().rev() {
                    acc = target.add_elems(target.mul_elems(acc, root), target.from_u64(c as u64));
                }
                acc
            })
            .collect();
        Ok(FieldEmbedding {
            source: Arc::clone(source),
            target: Arc::clone(target),
            table,
        })
    }

    pub fn source(&self) -> &Arc<FieldSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldSpec> {
        &self.target
    }

    #[inline]
    pub fn map(&self, a: FieldElement) -> FieldElement {
        self.table[a.0 as usize]
    }
}

fn check_size(p: u32, m: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if q > MAX_FIELD_ORDER {
        return Err(Error::InvalidInput(format!(
            "field of order {p}^{m} exceeds the supported size {MAX_FIELD_ORDER}"
        )));
    }
    Ok(())
}

/// Parses a field order `q = p^m` into the default field.
pub fn field_of_order(q: u64) -> Result<Arc<FieldSpec>> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    FieldSpec::new(p as u32, m)
}

fn code_to_coords(mut code: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(code % p);
        code /= p;
    }
    out
}

fn coords_to_code(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn vec_x(m: u32) -> Vec<u32> {
    let mut v = vec![0; m as usize];
    if m > 1 {
        v[1] = 1;
    }
    v
}

/// Product of coordinate vectors modulo a monic modulus over `F_p`.
fn mul_mod_coords(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (k, &y) in b.iter().enumerate() {
            prod[i + k] = (prod[i + k] + x as u64 * y as u64) % p64;
        }
    }
    for top in (m..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (k, &md) in modulus[..m].iter().enumerate() {
            let idx = top - m + k;
            prod[idx] = (prod[idx] + (p64 - c) * md as u64) % p64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|c| c as u32).collect()
}

fn pow_mod_coords(a: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut acc = vec![0; m];
    acc[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_coords(&acc, &base, modulus, p);
        }
        base = mul_mod_coords(&base, &base, modulus, p);
        e >>= 1;
    }
    acc
}

fn has_full_order(g: &[u32], modulus: &[u32], p: u32, order: u64, factors: &[u64]) -> bool {
    let m = modulus.len() - 1;
    let mut one = vec![0; m];
    one[0] = 1;
    if g.iter().all(|&c| c == 0) {
        return false;
    }
    if pow_mod_coords(g, order, modulus, p) != one {
        return false;
    }
    factors
        .iter()
        .all(|&l| pow_mod_coords(g, order / l, modulus, p) != one)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible_over_prime(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    for dd in 1..=n / 2 {
        let count = (p as u64).pow(dd as u32);
        for code in 0..count {
            let mut g = code_to_coords(code as u32, p, dd as u32);
            g.push(1);
            if rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p64 = p as u64;
    for top in (dg..r.len()).rev() {
        let c = r[top] % p64;
        if c == 0 {
            continue;
        }
        for (k, &gk) in g.iter().enumerate() {
            let idx = top - dg + k;
            r[idx] = (r[idx] + (p64 - c) * gk as u64) % p64;
        }
    }
    r[..dg].iter().all(|&c| c % p64 == 0)
}
