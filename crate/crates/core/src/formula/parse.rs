//! Recursive-descent parser for the ASCII formula syntax (see docs/grammar.ebnf).

use std::collections::HashMap;

use super::{Base, Dir, Formula, Modality, Style, Weight};
use crate::context::Sort;
use crate::error::{Error, Result};

/// Sorts for atoms written without an `@1`/`@2` suffix.
pub type SortEnv = HashMap<String, Sort>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String, Option<Sort>),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Comma,
    Modal(Modality),
    Universal(Dir),
    NOp(Dir),
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{s}`")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| syntax(start, "number too large"))
    }

    /// `-`? (`o`|`p`) (`:` n `!`? | `>=` rational)?
    fn modal_body(&mut self, style: Style) -> Result<Modality> {
        let base = if self.eat("-") {
            Base::Complement
        } else {
            Base::I
        };
        let dir = if self.eat("o") {
            Dir::O
        } else if self.eat("p") {
            Dir::P
        } else {
            return Err(syntax(self.pos, "expected modality direction `o` or `p`"));
        };
        let mut m = Modality {
            base,
            ..Modality::new(dir, style)
        };
        if self.eat(":") {
            let at = self.pos;
            let n = self.number()?;
            m.grade = Some(u32::try_from(n).map_err(|_| syntax(at, "grade too large"))?);
            m.exact = self.eat("!");
        } else if self.eat(">=") {
            let at = self.pos;
            let num = self.number()?;
            let den = if self.eat("/") { self.number()? } else { 1 };
            if den == 0 {
                return Err(syntax(at, "zero denominator"));
            }
            m.weight = Some(Weight::new(num, den));
        }
        Ok(m)
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '~' => {
                self.pos += 1;
                Tok::Not
            }
            '&' => {
                self.pos += 1;
                Tok::And
            }
            '|' => {
                self.pos += 1;
                Tok::Or
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            ',' => {
                self.pos += 1;
                Tok::Comma
            }
            '-' => {
                self.expect("->")?;
                Tok::Imp
            }
            '<' if self.eat("<->") => Tok::Iff,
            '<' => {
                self.pos += 1;
                let m = self.modal_body(Style::Diamond)?;
                self.expect(">")?;
                Tok::Modal(m)
            }
            '[' if self.eat("[U_o]") => Tok::Universal(Dir::O),
            '[' if self.eat("[U_p]") => Tok::Universal(Dir::P),
            '[' if self.eat("[[") => {
                let m = self.modal_body(Style::Window)?;
                self.expect("]]")?;
                // `]]~` with no space in between is the dual window.
                if self.eat("~") {
                    Tok::Modal(Modality {
                        style: Style::WindowDual,
                        ..m
                    })
                } else {
                    Tok::Modal(m)
                }
            }
            '[' => {
                self.pos += 1;
                let m = self.modal_body(Style::Box)?;
                self.expect("]")?;
                Tok::Modal(m)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name = self.src[start..self.pos].to_string();
                if (name == "N_o" || name == "N_p") && self.rest().trim_start().starts_with('(') {
                    Tok::NOp(if name == "N_o" { Dir::O } else { Dir::P })
                } else {
                    let sort = if self.eat("@1") {
                        Some(Sort::S1)
                    } else if self.eat("@2") {
                        Some(Sort::S2)
                    } else if self.peek() == Some('@') {
                        return Err(syntax(self.pos, "sort suffix must be @1 or @2"));
                    } else {
                        None
                    };
                    Tok::Ident(name, sort)
                }
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        Ok(Some((start, tok)))
    }
}

struct Parser<'e> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    env: &'e SortEnv,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.i += 1;
            lhs = lhs.iff(self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.i += 1;
            return Ok(lhs.implies(self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.i += 1;
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.i += 1;
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Not) => Ok(self.unary()?.not()),
            Some(Tok::Modal(m)) => {
                m.validate().map_err(|e| syntax(at, e.to_string()))?;
                Ok(Formula::modal(m, self.unary()?))
            }
            Some(Tok::Universal(d)) => Ok(Formula::universal(d, self.unary()?)),
            Some(Tok::NOp(d)) => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.iff()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::n_op(d, a, b))
            }
            Some(Tok::LParen) => {
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name, sort)) => {
                let constant = name == "true" || name == "false";
                let sort = match sort {
                    Some(s) => s,
                    None if constant => {
                        return Err(syntax(at, format!("`{name}` needs a sort suffix")))
                    }
                    None => *self.env.get(&name).ok_or_else(|| {
                        syntax(
                            at,
                            format!("atom `{name}` has no sort suffix or declaration"),
                        )
                    })?,
                };
                Ok(match name.as_str() {
                    "true" => Formula::True(sort),
                    "false" => Formula::False(sort),
                    _ => Formula::Atom(name, sort),
                })
            }
            Some(_) => Err(syntax(at, "expected a formula")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses and sort-checks a formula whose atoms all carry `@1`/`@2`.
pub fn parse(text: &str) -> Result<Formula> {
    parse_with(text, &SortEnv::new())
}

/// Parses and sort-checks, resolving unsuffixed atoms through `env`.
pub fn parse_with(text: &str, env: &SortEnv) -> Result<Formula> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut toks = Vec::new();
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
        env,
    };
    let f = p.iff()?;
    if p.i < p.toks.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    f.sort()?;
    Ok(f)
}
