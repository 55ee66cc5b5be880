use super::{Base, Formula, Modality, Style, Weight};
use crate::error::{Error, Result};

/// ρ: `⊟o φ ↦ □o ¬ρ(φ)`, `⊟p ψ ↦ □p ¬ρ(ψ)`, homomorphic elsewhere.
///
/// Only defined on formulas whose modalities are plain windows over `I`.
pub fn translate_rho(f: &Formula) -> Result<Formula> {
    f.map_modalities(&mut |m, inner| {
        if m.style != Style::Window || m.base != Base::I || !m.is_plain() {
            return Err(Error::Unsupported(format!(
                "ρ is defined on plain windows only, found `{m}`"
            )));
        }
        Ok(Formula::modal(
            Modality {
                style: Style::Box,
                ..m
            },
            inner.not(),
        ))
    })
}

/// τ: every modality gets weight 1.
pub fn translate_tau(f: &Formula) -> Result<Formula> {
    f.map_modalities(&mut |m, inner| {
        if !m.is_plain() {
            return Err(Error::Unsupported(format!(
                "τ needs grade- and weight-free input, found `{m}`"
            )));
        }
        Ok(Formula::modal(m.weighted(Weight::from_integer(1)), inner))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn rho_clauses() {
        let r = |s: &str| translate_rho(&parse(s).unwrap()).unwrap();
        assert_eq!(r("[[o]] p@1"), parse("[o] ~p@1").unwrap());
        assert_eq!(r("p@1"), parse("p@1").unwrap());
        assert_eq!(r("[[p]] [[o]] p@1"), parse("[p] ~[o] ~p@1").unwrap());
        assert_eq!(r("~[[p]] q@2 & p@1"), parse("~[p] ~q@2 & p@1").unwrap());
        assert!(translate_rho(&parse("[o] p@1").unwrap()).is_err());
        assert!(translate_rho(&parse("[[o:1]] p@1").unwrap()).is_err());
        assert!(translate_rho(&parse("[[-o]] p@1").unwrap()).is_err());
    }

    #[test]
    fn tau_clauses() {
        let t = |s: &str| translate_tau(&parse(s).unwrap()).unwrap();
        assert_eq!(t("[o] p@1"), parse("[o>=1] p@1").unwrap());
        assert_eq!(t("p@1"), parse("p@1").unwrap());
        assert_eq!(t("[[p]] q@2"), parse("[[p>=1]] q@2").unwrap());
        assert_eq!(
            t("<-o> [[p]]~ q@2"),
            parse("<-o>=1> [[p>=1]]~ q@2").unwrap()
        );
        assert!(translate_tau(&parse("[o:2] p@1").unwrap()).is_err());
    }
}
