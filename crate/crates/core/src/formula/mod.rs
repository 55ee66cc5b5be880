//! Two-sorted modal formulas: AST, concrete syntax, sort checking,
//! desugaring, the ρ and τ translations and a Hilbert-style proof checker.

mod desugar;
mod parse;
mod print;
pub mod proof;
mod translate;

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::context::Sort;
use crate::error::{Error, Result};

pub use desugar::desugar;
pub use parse::{parse, parse_with, SortEnv};
pub use translate::{translate_rho, translate_tau};

/// Exact weights in `[0, 1]`.
pub type Weight = Ratio<u64>;

/// `O` modalities read an object formula and hold at attributes; `P` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    O,
    P,
}

impl Dir {
    /// Sort of the operand.
    pub fn input(self) -> Sort {
        match self {
            Dir::O => Sort::S1,
            Dir::P => Sort::S2,
        }
    }

    pub fn output(self) -> Sort {
        self.input().flip()
    }

    pub fn letter(self) -> char {
        match self {
            Dir::O => 'o',
            Dir::P => 'p',
        }
    }
}

/// `Complement` marks the overlined operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    I,
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Style {
    Box,
    Diamond,
    Window,
    WindowDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modality {
    pub dir: Dir,
    pub base: Base,
    pub style: Style,
    pub grade: Option<u32>,
    pub weight: Option<Weight>,
    /// `◇ⁿ!`: exactly n witnesses.
    pub exact: bool,
}

impl Modality {
    pub fn new(dir: Dir, style: Style) -> Self {
        Modality {
            dir,
            base: Base::I,
            style,
            grade: None,
            weight: None,
            exact: false,
        }
    }

    pub fn boxm(dir: Dir) -> Self {
        Self::new(dir, Style::Box)
    }

    pub fn diamond(dir: Dir) -> Self {
        Self::new(dir, Style::Diamond)
    }

    pub fn window(dir: Dir) -> Self {
        Self::new(dir, Style::Window)
    }

    pub fn window_dual(dir: Dir) -> Self {
        Self::new(dir, Style::WindowDual)
    }

    pub fn overline(self) -> Self {
        Modality {
            base: Base::Complement,
            ..self
        }
    }

    pub fn graded(self, n: u32) -> Self {
        Modality {
            grade: Some(n),
            ..self
        }
    }

    pub fn weighted(self, c: Weight) -> Self {
        Modality {
            weight: Some(c),
            ..self
        }
    }

    pub fn exactly(self, n: u32) -> Self {
        Modality {
            grade: Some(n),
            exact: true,
            ..self
        }
    }

    pub fn is_plain(&self) -> bool {
        self.grade.is_none() && self.weight.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if self.grade.is_some() && self.weight.is_some() {
            return Err(Error::Malformed(
                "a modality cannot carry both a grade and a weight".into(),
            ));
        }
        if let Some(w) = self.weight {
            if w > Weight::from_integer(1) {
                return Err(Error::OutOfRange(format!("weight {w} exceeds 1")));
            }
        }
        if self.exact && (self.style != Style::Diamond || self.grade.unwrap_or(0) < 1) {
            return Err(Error::Malformed(
                "`!` needs a diamond with grade >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Sort),
    True(Sort),
    False(Sort),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Modal(Modality, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str, sort: Sort) -> Formula {
        Formula::Atom(name.to_string(), sort)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn modal(m: Modality, f: Formula) -> Formula {
        Formula::Modal(m, Box::new(f))
    }

    /// `N_o(φ1, φ2) := □o φ1 ∧ ⊟o ¬φ2` (and the p version).
    pub fn n_op(dir: Dir, a: Formula, b: Formula) -> Formula {
        Formula::modal(Modality::boxm(dir), a).and(Formula::modal(Modality::window(dir), b.not()))
    }

    /// `[U_o]φ := N_o(φ, φ)`.
    pub fn universal(dir: Dir, f: Formula) -> Formula {
        Self::n_op(dir, f.clone(), f)
    }

    /// Sort of the formula, or the first ill-sorted subterm.
    pub fn sort(&self) -> Result<Sort> {
        match self {
            Formula::Atom(_, s) | Formula::True(s) | Formula::False(s) => Ok(*s),
            Formula::Not(f) => f.sort(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                let (sa, sb) = (a.sort()?, b.sort()?);
                if sa != sb {
                    return Err(Error::IllSorted {
                        term: self.to_string(),
                        message: format!("connective joins {sa} and {sb}"),
                    });
                }
                Ok(sa)
            }
            Formula::Modal(m, f) => {
                m.validate().map_err(|e| Error::IllSorted {
                    term: self.to_string(),
                    message: e.to_string(),
                })?;
                let s = f.sort()?;
                if s != m.dir.input() {
                    return Err(Error::IllSorted {
                        term: self.to_string(),
                        message: format!("{}-modality applied to a {s} formula", m.dir.letter()),
                    });
                }
                Ok(m.dir.output())
            }
        }
    }

    /// Atoms as `(name, sort)`, sorted by name then sort.
    pub fn atoms(&self) -> BTreeSet<(String, Sort)> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<(String, Sort)>) {
        match self {
            Formula::Atom(n, s) => {
                out.insert((n.clone(), *s));
            }
            Formula::True(_) | Formula::False(_) => {}
            Formula::Not(f) | Formula::Modal(_, f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Modal nesting depth.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::True(_) | Formula::False(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Modal(_, f) => 1 + f.modal_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
        }
    }

    /// Every modality in the formula, outermost first.
    pub fn modalities(&self) -> Vec<Modality> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Modal(m, _) = f {
                out.push(*m);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::True(_) | Formula::False(_) => {}
            Formula::Not(a) | Formula::Modal(_, a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Rebuilds the formula bottom-up, applying `f` to every modal node.
    pub fn map_modalities(
        &self,
        f: &mut impl FnMut(Modality, Formula) -> Result<Formula>,
    ) -> Result<Formula> {
        Ok(match self {
            Formula::Atom(..) | Formula::True(_) | Formula::False(_) => self.clone(),
            Formula::Not(a) => a.map_modalities(f)?.not(),
            Formula::And(a, b) => a.map_modalities(f)?.and(b.map_modalities(f)?),
            Formula::Or(a, b) => a.map_modalities(f)?.or(b.map_modalities(f)?),
            Formula::Implies(a, b) => a.map_modalities(f)?.implies(b.map_modalities(f)?),
            Formula::Iff(a, b) => a.map_modalities(f)?.iff(b.map_modalities(f)?),
            Formula::Modal(m, a) => {
                let inner = a.map_modalities(f)?;
                f(*m, inner)?
            }
        })
    }
}

/// Sort of a well-formed formula.
pub fn sort_of(f: &Formula) -> Result<Sort> {
    f.sort()
}
