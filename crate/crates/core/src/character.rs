//! Tame Dirichlet characters modulo an irreducible `f` in `F_r[T]`, with
//! values taken directly in `F_{r^deg f}`.
//!
//! `(A/f)^*` is cyclic of order `r^deg f - 1`; a character is fixed by an
//! index `k` and sends the residue `g^e` (for the chosen group generator `g`)
//! to `omega^(k e)` with `omega` the value field's generator.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{field_of_order, FieldElement, FieldEmbedding, FieldInfo, FieldSpec};
use crate::poly::{Poly, PolyRing};
use crate::ring::{Ring, TextFormat};

#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    base: PolyRing,
    modulus: Poly,
    value_field: Arc<FieldSpec>,
    value_ring: PolyRing,
    embedding: FieldEmbedding,
    group_generator: Poly,
    index: u64,
    group_order: u64,
    /// `dlog[code(residue)]`; `u32::MAX` at the zero residue.
    dlog: Vec<u32>,
}

/// Run-metadata form of a character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterInfo {
    pub r: u64,
    pub f: String,
    pub k: u64,
    pub order: u64,
    pub group_generator: String,
    pub value_field: FieldInfo,
}

impl DirichletCharacter {
    /// The character of index `k` modulo the irreducible `f` over `F_r`.
    pub fn build(r: u64, f: &str, k: u64) -> Result<DirichletCharacter> {
        let base = PolyRing::new(field_of_order(r)?);
        let f = base.parse(f)?;
        Self::from_parts(base, f, k)
    }

    pub fn from_parts(base: PolyRing, f: Poly, k: u64) -> Result<DirichletCharacter> {
        if f.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput("character modulus must have positive degree".into()));
        }
        if !base.is_irreducible(&f)? {
            return Err(Error::NotIrreducible(base.render(&f)));
        }
        let f = base.monic(&f)?;
        let e = f.degree().expect("positive degree") as u32;
        let r = base.q();
        let size = r
            .checked_pow(e)
            .filter(|&s| s <= crate::field::MAX_FIELD_ORDER)
            .ok_or_else(|| Error::InvalidInput("residue field too large".into()))?;
        let group_order = size - 1;
        if k >= group_order {
            return Err(Error::InvalidIndex { k, bound: group_order });
        }
        let field = base.field();
        let value_field = FieldSpec::new(field.p(), field.m() * e)?;
        let embedding = FieldEmbedding::new(field, &value_field)?;
        let value_ring = PolyRing::new(Arc::clone(&value_field));

        let factors = prime_factors(group_order);
        let one = Poly::one();
        let mut group_generator = None;
        for code in 1..size {
            let g = residue_from_code(code, r, e as usize);
            let full = factors
                .iter()
                .all(|&l| base.pow_mod(&g, group_order / l, &f).map(|x| x != one).unwrap_or(false));
            if full {
                group_generator = Some(g);
                break;
            }
        }
        let group_generator =
            group_generator.ok_or_else(|| Error::InvalidInput("residue group has no generator".into()))?;

        let mut dlog = vec![u32::MAX; size as usize];
        let mut cur = Poly::one();
        for i in 0..group_order {
            let code = residue_code(&cur, r);
            if dlog[code as usize] != u32::MAX {
                return Err(Error::InvalidInput("residue generator order check failed".into()));
            }
            dlog[code as usize] = i as u32;
            cur = base.rem(&base.mul(&cur, &group_generator), &f)?;
        }
        Ok(DirichletCharacter {
            base,
            modulus: f,
            value_field,
            value_ring,
            embedding,
            group_generator,
            index: k,
            group_order,
            dlog,
        })
    }

    /// Parses `r=2,f=T^2+T+1,k=1`.
    pub fn from_designation(s: &str) -> Result<DirichletCharacter> {
        let (mut r, mut f, mut k) = (None, None, None);
        // `f` may contain commas inside extension coefficients, so split on
        // the key markers rather than on every comma.
        for part in split_designation(s) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad character field {part:?}")))?;
            match key.trim() {
                "r" => r = Some(val.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad r {val:?}")))?),
                "f" => f = Some(val.trim().to_string()),
                "k" => k = Some(val.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad k {val:?}")))?),
                other => return Err(Error::Parse(format!("unknown character key {other:?}"))),
            }
        }
        let missing = |name: &str| Error::Parse(format!("character designation {s:?} lacks {name}="));
        Self::build(r.ok_or_else(|| missing("r"))?, &f.ok_or_else(|| missing("f"))?, k.ok_or_else(|| missing("k"))?)
    }

    pub fn designation(&self) -> String {
        format!("r={},f={},k={}", self.base.q(), self.base.render(&self.modulus), self.index)
    }

    pub fn info(&self) -> CharacterInfo {
        CharacterInfo {
            r: self.base.q(),
            f: self.base.render(&self.modulus),
            k: self.index,
            order: self.order(),
            group_generator: self.base.render(&self.group_generator),
            value_field: self.value_field.info(),
        }
    }

    pub fn base_ring(&self) -> &PolyRing {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn value_field(&self) -> &Arc<FieldSpec> {
        &self.value_field
    }

    /// `F_{r^deg f}[T]`, where the special polynomials of this character live.
    pub fn value_ring(&self) -> &PolyRing {
        &self.value_ring
    }

    /// `F_r -> F_{r^deg f}`.
    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }

    pub fn group_generator(&self) -> &Poly {
        &self.group_generator
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Order of the character: `(r^e - 1) / gcd(k, r^e - 1)`.
    pub fn order(&self) -> u64 {
        self.group_order / self.index.gcd(&self.group_order)
    }

    /// `chi(n)` for `n` coprime to `f`; `None` when `f | n`.
    pub fn value(&self, n: &Poly) -> Option<FieldElement> {
        let residue = self.base.rem(n, &self.modulus).expect("nonzero modulus");
        let code = residue_code(&residue, self.base.q());
        let log = self.dlog[code as usize];
        if log == u32::MAX {
            return None;
        }
        Some(self.value_field.exp(self.index * log as u64 % self.group_order))
    }

    /// Lifts a base-ring polynomial into the value ring.
    pub fn embed_poly(&self, a: &Poly) -> Poly {
        self.base.embed(a, &self.embedding)
    }
}

pub fn character_value(chi: &DirichletCharacter, n: &Poly) -> Option<FieldElement> {
    chi.value(n)
}

fn split_designation(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0usize;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth = depth.saturating_sub(1),
            b',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

fn residue_code(a: &Poly, r: u64) -> u64 {
    a.coeffs().iter().rev().fold(0u64, |acc, c| acc * r + c.code() as u64)
}

fn residue_from_code(mut code: u64, r: u64, len: usize) -> Poly {
    let mut coeffs = Vec::with_capacity(len);
    for _ in 0..len {
        coeffs.push(FieldElement((code % r) as u32));
        code /= r;
    }
    Poly::from_coeffs(coeffs)
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
