//! Text grammar for polynomials:
//!
//! ```text
//! poly := term ('+' term)*
//! term := coef | coef? '*'? VAR ('^' uint)?
//! ```
//!
//! Prime-field coefficients are bare integers (`2T^3+T+1`); extension-field
//! coefficients are coordinate vectors (`[0,1]*T^2+[1,1]`). Rendering lists
//! terms by descending degree and omits unit coefficients.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

use super::Poly;

pub(crate) fn render(field: &FieldSpec, var: &str, a: &Poly) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (k, &c) in a.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let term = if k == 0 {
            field.render(c)
        } else if c == FieldElement::ONE {
            mono
        } else if field.m() == 1 {
            format!("{}{mono}", field.render(c))
        } else {
            format!("{}*{mono}", field.render(c))
        };
        terms.push(term);
    }
    terms.join("+")
}

pub(crate) fn parse(field: &FieldSpec, var: &str, s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<FieldElement> = Vec::new();
    for term in split_terms(&compact) {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let (c, k) = parse_term(field, var, term)?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, FieldElement::ZERO);
        }
        coeffs[k] = field.add_elems(coeffs[k], c);
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Splits on `+` outside of `[...]`.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_term(field: &FieldSpec, var: &str, term: &str) -> Result<(FieldElement, usize)> {
    // The variable starts at the first alphabetic character outside brackets.
    let mut depth = 0usize;
    let mut var_pos = None;
    for (i, ch) in term.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            c if depth == 0 && c.is_ascii_alphabetic() => {
                var_pos = Some(i);
                break;
            }
            _ => {}
        }
    }
    let Some(pos) = var_pos else {
        return Ok((field.parse_elem(term)?, 0));
    };
    let coef_str = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
    let coef = if coef_str.is_empty() {
        FieldElement::ONE
    } else {
        field.parse_elem(coef_str)?
    };
    let rest = &term[pos..];
    let after = rest
        .strip_prefix(var)
        .ok_or_else(|| Error::Parse(format!("expected variable {var:?} in term {term:?}")))?;
    let k = if after.is_empty() {
        1
    } else if let Some(e) = after.strip_prefix('^') {
        e.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad exponent in term {term:?}")))?
    } else {
        return Err(Error::Parse(format!("unexpected {after:?} in term {term:?}")));
    };
    Ok((coef, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_order;
    use crate::poly::PolyRing;
    use crate::ring::TextFormat;
    use proptest::prelude::*;

    #[test]
    fn renders_prime_field_polys() {
        let r = PolyRing::new(field_of_order(3).unwrap());
        let p = r.parse("2T^3 + T + 1").unwrap();
        assert_eq!(r.render(&p), "2T^3+T+1");
        assert_eq!(r.render(&Poly::zero()), "0");
        assert_eq!(r.parse("T+T+T").unwrap(), Poly::zero());
        assert_eq!(r.parse("2*T").unwrap(), r.parse("2T").unwrap());
    }

    #[test]
    fn renders_extension_field_polys() {
        let r = PolyRing::new(field_of_order(4).unwrap());
        let p = r.parse("[0,1]*T^2+T+[1,1]").unwrap();
        assert_eq!(r.render(&p), "[0,1]*T^2+T+[1,1]");
    }

    #[test]
    fn custom_variable() {
        let r = PolyRing::with_var(field_of_order(2).unwrap(), "T2");
        let p = r.parse("T2^3+T2+1").unwrap();
        assert_eq!(p.degree(), Some(3));
        assert_eq!(r.render(&p), "T2^3+T2+1");
        assert!(r.parse("T^3").is_err());
    }

    #[test]
    fn rejects_garbage() {
        let r = PolyRing::new(field_of_order(2).unwrap());
        for bad in ["", "T^", "T^x", "2T", "T+", "X", "T3"] {
            assert!(r.parse(bad).is_err(), "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5, 9]),
                           raw in prop::collection::vec(0u32..1000, 0..12)) {
            let f = field_of_order(q).unwrap();
            let r = PolyRing::new(f.clone());
            let p = Poly::from_coeffs(raw.iter().map(|&c| FieldElement(c % f.order())).collect());
            prop_assert_eq!(r.parse(&r.render(&p)).unwrap(), p);
        }
    }
}
