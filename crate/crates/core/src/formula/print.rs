use std::fmt;

use super::{Base, Formula, Modality, Style};

// Binding strength; higher binds tighter.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Modal(..) => UNARY,
        _ => ATOM,
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.style {
            Style::Box => ("[", "]"),
            Style::Diamond => ("<", ">"),
            Style::Window => ("[[", "]]"),
            Style::WindowDual => ("[[", "]]~"),
        };
        f.write_str(open)?;
        if self.base == Base::Complement {
            f.write_str("-")?;
        }
        write!(f, "{}", self.dir.letter())?;
        if let Some(n) = self.grade {
            write!(f, ":{n}")?;
            if self.exact {
                f.write_str("!")?;
            }
        }
        if let Some(w) = self.weight {
            if *w.denom() == 1 {
                write!(f, ">={}", w.numer())?;
            } else {
                write!(f, ">={}/{}", w.numer(), w.denom())?;
            }
        }
        f.write_str(close)
    }
}

fn child(f: &mut fmt::Formatter<'_>, c: &Formula, min: u8) -> fmt::Result {
    if prec(c) < min {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n, s) => write!(f, "{n}@{}", s.digit()),
            Formula::True(s) => write!(f, "true@{}", s.digit()),
            Formula::False(s) => write!(f, "false@{}", s.digit()),
            Formula::Not(a) => {
                f.write_str("~")?;
                child(f, a, UNARY)
            }
            // The space keeps `[[o]] ~p` apart from the window-dual token `]]~`.
            Formula::Modal(m, a) => {
                write!(f, "{m} ")?;
                child(f, a, UNARY)
            }
            Formula::And(a, b) => {
                child(f, a, AND)?;
                f.write_str(" & ")?;
                child(f, b, AND + 1)
            }
            Formula::Or(a, b) => {
                child(f, a, OR)?;
                f.write_str(" | ")?;
                child(f, b, OR + 1)
            }
            Formula::Implies(a, b) => {
                child(f, a, IMP + 1)?;
                f.write_str(" -> ")?;
                child(f, b, IMP)
            }
            Formula::Iff(a, b) => {
                child(f, a, IFF)?;
                f.write_str(" <-> ")?;
                child(f, b, IFF + 1)
            }
        }
    }
}
