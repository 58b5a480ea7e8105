//! Text syntax for codifferentials: `;`-separated terms `a b -> t : c`,
//! with the coefficient defaulting to 1.

use crate::basis::{GradedBasis, MultiIndex};
use crate::cochain::{BasisCochain, Cochain, Codifferential, Rational};
use crate::error::{Error, Result};

fn parse_term(term: &str, basis: &GradedBasis) -> Result<(BasisCochain, Rational)> {
    let (body, coeff) = match term.split_once(':') {
        Some((body, c)) => {
            let c = c.trim();
            let value: Rational = c.parse().map_err(|_| Error::Parse(format!("bad coefficient `{c}` in `{term}`")))?;
            (body, value)
        }
        None => (term, Rational::from_integer(1.into())),
    };
    let (inputs, target) = body.split_once("->").ok_or_else(|| Error::Parse(format!("missing `->` in `{term}`")))?;
    let letters = inputs.split_whitespace().map(|w| basis.parse_generator(w)).collect::<Result<Vec<_>>>()?;
    let target = target.trim();
    if target.split_whitespace().count() != 1 {
        return Err(Error::Parse(format!("expected exactly one target in `{term}`")));
    }
    let target = basis.parse_generator(target)?;
    let bc = BasisCochain::new(MultiIndex::new(letters), target);
    if bc.degree() != 2 || bc.parity() != 1 {
        return Err(Error::WrongShape { degree: 2, parity: 1, got_degree: bc.degree(), got_parity: bc.parity() });
    }
    Ok((bc, coeff))
}

/// Parses and validates a codifferential: every term must be a degree 2 odd
/// cochain and `[d,d]` must vanish.
pub fn parse_codifferential(spec: &str, basis: &GradedBasis) -> Result<Codifferential> {
    let terms = spec
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_term(t, basis))
        .collect::<Result<Vec<_>>>()?;
    if terms.is_empty() {
        return Err(Error::Parse("empty codifferential".into()));
    }
    let d = Cochain::from_terms(2, 1, terms)?;
    if d.is_zero() {
        return Err(Error::Parse("codifferential has no nonzero terms".into()));
    }
    Codifferential::new(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(r: u16, s: u16) -> GradedBasis {
        GradedBasis::new(r, s).unwrap()
    }

    #[test]
    fn accepts_theorem_codifferentials() {
        let d = parse_codifferential("e1 e1 -> f1", &basis(1, 1)).unwrap();
        assert_eq!(d.to_string(), "phi[e1 e1->f1]");
        let d = parse_codifferential("f1 f1 -> f2", &basis(1, 2)).unwrap();
        assert_eq!(d.to_string(), "phi[f1 f1->f2]");
    }

    #[test]
    fn coefficients_and_separators() {
        let d = parse_codifferential(" e1 e1 -> f1 : -3/2 ; ", &basis(1, 1)).unwrap();
        assert_eq!(d.to_string(), "-3/2*phi[e1 e1->f1]");
        let d = parse_codifferential("e1 e1 -> f2 : 2; e2 e2 -> f2", &basis(2, 2)).unwrap();
        assert_eq!(d.cochain().len(), 2);
    }

    #[test]
    fn rejects_even_terms() {
        let err = parse_codifferential("e1 e1 -> e1", &basis(1, 1)).unwrap_err();
        assert!(matches!(err, Error::WrongShape { got_parity: 0, .. }));
        assert!(matches!(parse_codifferential("e1 -> f1", &basis(1, 1)), Err(Error::WrongShape { got_degree: 1, .. })));
    }

    #[test]
    fn rejects_unknown_generators() {
        assert!(matches!(parse_codifferential("e2 e1 -> f1", &basis(1, 1)), Err(Error::UnknownGenerator(_))));
        assert!(parse_codifferential("x y -> f1", &basis(1, 1)).is_err());
    }

    #[test]
    fn rejects_nonzero_self_bracket() {
        // odd, but [d,d] does not vanish
        let err = parse_codifferential("e1 f1 -> e1", &basis(1, 1)).unwrap_err();
        match err {
            Error::NotCodifferential(rendered) => assert!(rendered.contains("phi[")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", " ; ", "e1 e1 f1", "e1 e1 -> f1 : x", "e1 e1 -> f1 e1"] {
            assert!(parse_codifferential(bad, &basis(1, 1)).is_err(), "{bad}");
        }
    }
}
