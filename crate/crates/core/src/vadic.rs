//! Interpolation at a finite place `v` of `F_r[T]`: the special polynomial
//! with the Euler factor at `v` removed, its trivial zero at `u = v^{-j}`,
//! and the congruences that make `j -> Q(j)` v-adically continuous.

use serde::{Deserialize, Serialize};

use crate::character::DirichletCharacter;
use crate::digits::digit_sum;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{Poly, PolyRing};
use crate::ring::{Ring, TextFormat};
use crate::special::{special_polynomial_character, special_polynomial_fqt};
use crate::zeros::{multiplicity_at_point, newton_polygon_at_v, NewtonPolygon};

/// `Q = (1 - chi(v) v^j u^{d_v}) z(chi, u, -j)`.
#[derive(Clone, Debug)]
pub struct VadicSpecial {
    /// Ring holding the coefficients (the character's value ring, or the base ring).
    pub coeff_ring: PolyRing,
    /// The place, inside `coeff_ring`.
    pub v: Poly,
    pub d_v: usize,
    pub j: u64,
    pub character: String,
    pub z: Vec<Poly>,
    pub q: Vec<Poly>,
    pub z_d_max_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VadicRecord {
    pub ring: String,
    #[serde(rename = "char")]
    pub character: String,
    pub v: String,
    pub d_v: usize,
    pub j: u64,
    pub q: Vec<String>,
    pub z: Vec<String>,
    pub z_d_max_used: usize,
}

impl VadicSpecial {
    pub fn record(&self, ring_id: &str) -> VadicRecord {
        let r = &self.coeff_ring;
        VadicRecord {
            ring: ring_id.to_string(),
            character: self.character.clone(),
            v: r.render(&self.v),
            d_v: self.d_v,
            j: self.j,
            q: self.q.iter().map(|c| r.render(c)).collect(),
            z: self.z.iter().map(|c| r.render(c)).collect(),
            z_d_max_used: self.z_d_max_used,
        }
    }

    /// Newton polygon of `Q` for `ord_v`.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        newton_polygon_at_v(&self.coeff_ring, &self.q, &self.v)
    }
}

fn check_place(ring: &PolyRing, v: &Poly) -> Result<usize> {
    let d_v = match v.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidInput("the place v must have positive degree".into())),
    };
    if !v.is_monic() {
        return Err(Error::InvalidInput(format!("the place {} must be monic", ring.render(v))));
    }
    if !ring.is_irreducible(v)? {
        return Err(Error::NotIrreducible(ring.render(v)));
    }
    Ok(d_v)
}

fn poly_mul_u(ring: &PolyRing, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate() {
            let t = ring.mul_poly(x, y);
            ring.add_assign(&mut out[i + k], &t);
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Builds `Q` for the place `v` of `base`, optionally twisted by `chi`.
pub fn vadic_special_polynomial(
    base: &PolyRing,
    chi: Option<&DirichletCharacter>,
    v: &Poly,
    j: u64,
) -> Result<VadicSpecial> {
    let d_v = check_place(base, v)?;
    let (coeff_ring, chi_v, z, character) = match chi {
        None => {
            let z = special_polynomial_fqt(base, j, None)?;
            (base.clone(), FieldElement::ONE, z, "trivial".to_string())
        }
        Some(chi) => {
            if chi.base_ring().q() != base.q() {
                return Err(Error::SpecMismatch(format!(
                    "character over F_{} used with F_{}[T]",
                    chi.base_ring().q(),
                    base.q()
                )));
            }
            let chi_v = chi.value(v).ok_or_else(|| {
                Error::RamifiedPlace(format!(
                    "{} divides the conductor {}",
                    base.render(v),
                    base.render(chi.modulus())
                ))
            })?;
            let z = special_polynomial_character(chi, j, None)?;
            (chi.value_ring().clone(), chi_v, z, chi.designation())
        }
    };
    let v_c = match chi {
        None => v.clone(),
        Some(chi) => chi.embed_poly(v),
    };
    let mut euler = vec![Poly::zero(); d_v + 1];
    euler[0] = Poly::one();
    let vj = coeff_ring.pow_frobenius_split(&v_c, j);
    euler[d_v] = coeff_ring.neg(&coeff_ring.scale(chi_v, &vj));
    let q = poly_mul_u(&coeff_ring, &euler, &z.coeffs);
    Ok(VadicSpecial {
        coeff_ring,
        v: v_c,
        d_v,
        j,
        character,
        z: z.coeffs,
        q,
        z_d_max_used: z.d_max_used,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VadicOrder {
    pub j: u64,
    pub v0: usize,
    pub v1: usize,
    pub nonclassical: bool,
    pub l_p: u64,
    pub l_r: u64,
}

/// Order of `Q` at `u = v^{-j}` for a degree-one place, via
/// `Q~(w) = sum q_d v^{j(D-d)} w^d` and its multiplicity at `w = 1`.
pub fn vadic_trivial_zero_order(base: &PolyRing, v: &Poly, j: u64) -> Result<VadicOrder> {
    vadic_order_with_special(base, v, j).map(|(order, _)| order)
}

/// [`vadic_trivial_zero_order`] together with the `Q` it was read from.
pub fn vadic_order_with_special(base: &PolyRing, v: &Poly, j: u64) -> Result<(VadicOrder, VadicSpecial)> {
    let d_v = check_place(base, v)?;
    if d_v != 1 {
        return Err(Error::UnsupportedPlaceDegree(d_v));
    }
    if j == 0 {
        return Err(Error::NotATrivialZero {
            j,
            reason: "z(u, 0) = 1 and Q = 1 - u carries only the Euler factor".into(),
        });
    }
    let vs = vadic_special_polynomial(base, None, v, j)?;
    let v1 = order_from_q(base, &vs.q, v, j)?;
    let order = VadicOrder {
        j,
        v0: 1,
        v1,
        nonclassical: v1 >= 2,
        l_p: digit_sum(j, base.p()),
        l_r: digit_sum(j, base.q()),
    };
    Ok((order, vs))
}

fn order_from_q(ring: &PolyRing, q: &[Poly], v: &Poly, j: u64) -> Result<usize> {
    let big_d = q.len() - 1;
    let vj = ring.pow_frobenius_split(v, j);
    let mut tilde = vec![Poly::zero(); q.len()];
    let mut scale = Poly::one();
    for d in (0..=big_d).rev() {
        tilde[d] = ring.mul_poly(&q[d], &scale);
        if d > 0 {
            scale = ring.mul_poly(&scale, &vj);
        }
    }
    multiplicity_at_point(ring, &tilde, &ring.one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityWitness {
    /// Index of the first coefficient that differs mod `v^{N+1}`.
    pub d: usize,
    pub difference_mod: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub j1: u64,
    pub j2: u64,
    pub n: u32,
    pub modulus: String,
    pub holds: bool,
    pub witness: Option<ContinuityWitness>,
}

/// Checks `Q(j1) = Q(j2) mod v^{N+1}` coefficient-wise, given
/// `j1 = j2 mod (r^{d_v} - 1) p^N`.
pub fn vadic_continuity_check(
    base: &PolyRing,
    chi: Option<&DirichletCharacter>,
    v: &Poly,
    j1: u64,
    j2: u64,
    n: u32,
) -> Result<ContinuityReport> {
    let d_v = check_place(base, v)?;
    let modulus = (base.q() as u128)
        .checked_pow(d_v as u32)
        .and_then(|x| (x - 1).checked_mul((base.p() as u128).checked_pow(n)?))
        .ok_or_else(|| Error::InvalidInput("congruence modulus overflows".into()))?;
    if (j1 as u128).abs_diff(j2 as u128) % modulus != 0 {
        return Err(Error::InvalidPair {
            j1,
            j2,
            modulus: modulus as u64,
        });
    }
    let a = vadic_special_polynomial(base, chi, v, j1)?;
    let b = vadic_special_polynomial(base, chi, v, j2)?;
    let ring = &a.coeff_ring;
    let vn = ring.pow(&a.v, n as u64 + 1);
    let len = a.q.len().max(b.q.len());
    let mut witness = None;
    for d in 0..len {
        let x = a.q.get(d).cloned().unwrap_or_default();
        let y = b.q.get(d).cloned().unwrap_or_default();
        let diff = ring.rem(&ring.sub(&x, &y), &vn)?;
        if !diff.is_zero() {
            witness = Some(ContinuityWitness {
                d,
                difference_mod: ring.render(&diff),
            });
            break;
        }
    }
    Ok(ContinuityReport {
        j1,
        j2,
        n,
        modulus: ring.render(&vn),
        holds: witness.is_none(),
        witness,
    })
}
