use super::{Base, Formula, Modality, Style};

/// Rewrites defined operators into box/window over `I` plus connectives.
///
/// Weighted overlined boxes and windows are left alone: at weights other
/// than 0 and 1 they are not definable from the `I`-based ones.
pub fn desugar(f: &Formula) -> Formula {
    f.map_modalities(&mut |m, inner| Ok(expand(m, inner)))
        .expect("desugaring is total")
}

fn expand(m: Modality, inner: Formula) -> Formula {
    if m.exact {
        let n = m.grade.expect("exact modalities are graded");
        let plain = Modality { exact: false, ..m };
        let lower = expand(plain.graded(n - 1), inner.clone());
        let upper = expand(plain.graded(n), inner);
        return lower.and(upper.not());
    }
    let weighted = m.weight.is_some();
    match (m.style, m.base) {
        (Style::Diamond, _) => expand(
            Modality {
                style: Style::Box,
                ..m
            },
            inner.not(),
        )
        .not(),
        (Style::WindowDual, _) => expand(
            Modality {
                style: Style::Window,
                ..m
            },
            inner.not(),
        )
        .not(),
        (Style::Box | Style::Window, Base::I) => Formula::modal(m, inner),
        (Style::Box | Style::Window, Base::Complement) if weighted => Formula::modal(m, inner),
        (Style::Box, Base::Complement) => Formula::modal(
            Modality {
                style: Style::Window,
                base: Base::I,
                ..m
            },
            inner.not(),
        ),
        (Style::Window, Base::Complement) => Formula::modal(
            Modality {
                style: Style::Box,
                base: Base::I,
                ..m
            },
            inner.not(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn d(s: &str) -> Formula {
        desugar(&parse(s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(d("[U_o] p@1"), parse("[o] p@1 & [[o]] ~p@1").unwrap());
        assert_eq!(d("<o> p@1"), parse("~[o] ~p@1").unwrap());
        assert_eq!(d("<o:1!> p@1"), d("<o:0> p@1 & ~<o:1> p@1"));
        assert_eq!(d("[-o] p@1"), parse("[[o]] ~p@1").unwrap());
        assert_eq!(d("[[-p:2]] q@2"), parse("[p:2] ~q@2").unwrap());
        assert_eq!(d("[[o]]~ p@1"), parse("~[[o]] ~p@1").unwrap());
        assert_eq!(d("[-o>=1/2] p@1"), parse("[-o>=1/2] p@1").unwrap());
        assert_eq!(d("<-o>=1/2> p@1"), parse("~[-o>=1/2] ~p@1").unwrap());
    }

    #[test]
    fn only_core_constructors_remain() {
        let f = d("<-o:2!> p@1 -> [[-o]]~ [-p] <o> p@1");
        for m in f.modalities() {
            assert!(matches!(m.style, Style::Box | Style::Window));
            assert_eq!(m.base, Base::I);
            assert!(!m.exact);
        }
    }
}
