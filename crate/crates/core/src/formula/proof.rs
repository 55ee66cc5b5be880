//! Hilbert-style proofs for KB, KF and BM.
//!
//! Text format, one step per line (`#` starts a comment line):
//!
//! ```text
//! 1. ~(p@1 & ~p@1) ; PL
//! 2. [[o]] (p@1 & ~p@1) ; UG(win_o, 1)
//! ```
//!
//! Justifications: `PL`, an axiom name (optionally as `axiom(NAME)`),
//! `MP(i, j)` with line `j` being `line_i -> this`, or `UG(rule, i)` with
//! rule one of `box_o`, `box_p`, `win_o`, `win_p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::{parse, Base, Dir, Formula, Modality, Style};
use crate::context::Sort;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum System {
    KB,
    KF,
    BM,
}

impl std::str::FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "KB" => Ok(System::KB),
            "KF" => Ok(System::KF),
            "BM" => Ok(System::BM),
            _ => Err(Error::Malformed(format!("unknown system `{s}`"))),
        }
    }
}

/// Generalization rules. The window rules take `¬φ` and conclude `⊟φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UgRule {
    BoxO,
    BoxP,
    WinO,
    WinP,
}

impl UgRule {
    pub const ALL: [UgRule; 4] = [UgRule::BoxO, UgRule::BoxP, UgRule::WinO, UgRule::WinP];

    pub fn name(self) -> &'static str {
        match self {
            UgRule::BoxO => "box_o",
            UgRule::BoxP => "box_p",
            UgRule::WinO => "win_o",
            UgRule::WinP => "win_p",
        }
    }

    fn from_name(s: &str) -> Option<UgRule> {
        let s = s.strip_prefix("UG_").unwrap_or(s);
        UgRule::ALL.into_iter().find(|r| r.name() == s)
    }

    fn allowed_in(self, sys: System) -> bool {
        match self {
            UgRule::BoxO | UgRule::BoxP => sys != System::KF,
            UgRule::WinO | UgRule::WinP => sys != System::KB,
        }
    }

    fn modality(self) -> Modality {
        match self {
            UgRule::BoxO => Modality::boxm(Dir::O),
            UgRule::BoxP => Modality::boxm(Dir::P),
            UgRule::WinO => Modality::window(Dir::O),
            UgRule::WinP => Modality::window(Dir::P),
        }
    }

    /// Premise that licenses `conclusion`, if the conclusion has the right shape.
    pub fn premise_for(self, conclusion: &Formula) -> Option<Formula> {
        match conclusion {
            Formula::Modal(m, f) if *m == self.modality() => Some(match self {
                UgRule::BoxO | UgRule::BoxP => (**f).clone(),
                UgRule::WinO | UgRule::WinP => (**f).clone().not(),
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(String),
    Mp(usize, usize),
    Ug(UgRule, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(n) => f.write_str(n),
            Justification::Mp(i, j) => write!(f, "MP({i}, {j})"),
            Justification::Ug(r, i) => write!(f, "UG({}, {i})", r.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}. {} ; {}", l.number, l.formula, l.justification)?;
        }
        Ok(())
    }
}

fn parse_justification(s: &str) -> Option<Justification> {
    let s = s.trim();
    let (head, args) = match s.find('(') {
        Some(i) if s.ends_with(')') => (s[..i].trim(), Some(&s[i + 1..s.len() - 1])),
        _ => (s, None),
    };
    let nums =
        |a: &str| -> Option<Vec<usize>> { a.split(',').map(|x| x.trim().parse().ok()).collect() };
    match (head, args) {
        ("MP", Some(a)) => match nums(a)?.as_slice() {
            [i, j] => Some(Justification::Mp(*i, *j)),
            _ => None,
        },
        ("UG", Some(a)) => {
            let (rule, i) = a.split_once(',')?;
            Some(Justification::Ug(
                UgRule::from_name(rule.trim())?,
                i.trim().parse().ok()?,
            ))
        }
        (h, Some(a)) if h.starts_with("UG_") => Some(Justification::Ug(
            UgRule::from_name(h)?,
            a.trim().parse().ok()?,
        )),
        ("axiom", Some(a)) => Some(Justification::Axiom(a.trim().to_string())),
        (h, None) if !h.is_empty() && h.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
            Some(Justification::Axiom(h.to_string()))
        }
        _ => None,
    }
}

/// Parses the line-oriented proof format. Errors carry 1-based text lines.
pub fn parse_proof(text: &str) -> Result<Proof> {
    let mut lines: Vec<ProofLine> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Line { line, message };
        let (num, rest) = t
            .split_once('.')
            .ok_or_else(|| err("expected `n. formula ; justification`".into()))?;
        let number: usize = num
            .trim()
            .parse()
            .map_err(|_| err(format!("bad step number `{num}`")))?;
        if lines.last().is_some_and(|l| l.number >= number) {
            return Err(err(format!("step {number} is out of order")));
        }
        let (ftext, jtext) = rest
            .rsplit_once(';')
            .ok_or_else(|| err("missing `; justification`".into()))?;
        let formula = parse(ftext.trim()).map_err(|e| err(e.to_string()))?;
        let justification = parse_justification(jtext)
            .ok_or_else(|| err(format!("bad justification `{}`", jtext.trim())))?;
        lines.push(ProofLine {
            number,
            formula,
            justification,
        });
    }
    Ok(Proof { lines })
}

/// A named axiom schema. Every atom in the pattern is a metavariable.
#[derive(Debug, Clone)]
pub struct Schema {
    pub name: &'static str,
    pub pattern: Formula,
    systems: &'static [System],
}

impl Schema {
    pub fn in_system(&self, sys: System) -> bool {
        self.systems.contains(&sys)
    }

    /// Metavariables as `(name, sort)`.
    pub fn metavariables(&self) -> Vec<(String, Sort)> {
        self.pattern.atoms().into_iter().collect()
    }

    /// Replaces metavariables; unbound ones are left as they are.
    pub fn instantiate(&self, subst: &HashMap<(String, Sort), Formula>) -> Formula {
        substitute(&self.pattern, subst)
    }

    /// Substitution making `f` an instance, if there is one.
    pub fn matches(&self, f: &Formula) -> Option<HashMap<(String, Sort), Formula>> {
        let mut b = HashMap::new();
        unify(&self.pattern, f, &mut b).then_some(b)
    }
}

fn substitute(p: &Formula, s: &HashMap<(String, Sort), Formula>) -> Formula {
    match p {
        Formula::Atom(n, so) => s
            .get(&(n.clone(), *so))
            .cloned()
            .unwrap_or_else(|| p.clone()),
        Formula::True(_) | Formula::False(_) => p.clone(),
        Formula::Not(a) => substitute(a, s).not(),
        Formula::And(a, b) => substitute(a, s).and(substitute(b, s)),
        Formula::Or(a, b) => substitute(a, s).or(substitute(b, s)),
        Formula::Implies(a, b) => substitute(a, s).implies(substitute(b, s)),
        Formula::Iff(a, b) => substitute(a, s).iff(substitute(b, s)),
        Formula::Modal(m, a) => Formula::modal(*m, substitute(a, s)),
    }
}

fn unify(p: &Formula, t: &Formula, b: &mut HashMap<(String, Sort), Formula>) -> bool {
    match (p, t) {
        (Formula::Atom(n, s), _) => {
            if t.sort().ok() != Some(*s) {
                return false;
            }
            match b.get(&(n.clone(), *s)) {
                Some(bound) => bound == t,
                None => {
                    b.insert((n.clone(), *s), t.clone());
                    true
                }
            }
        }
        (Formula::True(a), Formula::True(c)) | (Formula::False(a), Formula::False(c)) => a == c,
        (Formula::Not(a), Formula::Not(c)) => unify(a, c, b),
        (Formula::And(a1, a2), Formula::And(c1, c2))
        | (Formula::Or(a1, a2), Formula::Or(c1, c2))
        | (Formula::Implies(a1, a2), Formula::Implies(c1, c2))
        | (Formula::Iff(a1, a2), Formula::Iff(c1, c2)) => unify(a1, c1, b) && unify(a2, c2, b),
        (Formula::Modal(m, a), Formula::Modal(n, c)) => m == n && unify(a, c, b),
        _ => false,
    }
}

const KB: &[System] = &[System::KB, System::BM];
const KF: &[System] = &[System::KF, System::BM];
const BM: &[System] = &[System::BM];

const SCHEMA_TEXT: &[(&str, &str, &[System])] = &[
    ("K_box_o", "[o] (A@1 -> B@1) -> [o] A@1 -> [o] B@1", KB),
    ("Dual_o", "<o> A@1 <-> ~[o] ~A@1", KB),
    ("KB_o", "A@1 -> [p] <o> A@1", KB),
    ("K_box_p", "[p] (A@2 -> B@2) -> [p] A@2 -> [p] B@2", KB),
    ("Dual_p", "<p> A@2 <-> ~[p] ~A@2", KB),
    ("KB_p", "A@2 -> [o] <p> A@2", KB),
    (
        "K_win_o",
        "[[o]] (A@1 & ~B@1) -> [[o]] ~A@1 -> [[o]] ~B@1",
        KF,
    ),
    ("B1", "A@1 -> [[p]] [[o]] A@1", KF),
    (
        "K_win_p",
        "[[p]] (A@2 & ~B@2) -> [[p]] ~A@2 -> [[p]] ~B@2",
        KF,
    ),
    ("B2", "A@2 -> [[o]] [[p]] A@2", KF),
    (
        "N_o",
        "N_o(A@1, B@1) & N_o(A@1 -> C@1, B@1 -> D@1) -> N_o(C@1, D@1)",
        BM,
    ),
    (
        "N_p",
        "N_p(A@2, B@2) & N_p(A@2 -> C@2, B@2 -> D@2) -> N_p(C@2, D@2)",
        BM,
    ),
    ("U_o", "[U_o] A@1 -> [U_o] [U_p] [U_o] A@1", BM),
    ("U_p", "[U_p] A@2 -> [U_p] [U_o] [U_p] A@2", BM),
];

/// All axiom schemas except PL, which is checked by truth table.
pub fn schemas() -> &'static [Schema] {
    static CELL: OnceLock<Vec<Schema>> = OnceLock::new();
    CELL.get_or_init(|| {
        SCHEMA_TEXT
            .iter()
            .map(|(name, text, systems)| Schema {
                name,
                pattern: parse(text).expect("schema text parses"),
                systems,
            })
            .collect()
    })
}

pub fn schema(name: &str) -> Option<&'static Schema> {
    schemas().iter().find(|s| s.name == name)
}

const MAX_PL_ATOMS: usize = 20;

/// Propositional tautology check; modal subformulas are opaque atoms.
pub fn is_tautology(f: &Formula) -> Result<bool> {
    fn index(f: &Formula, ix: &mut HashMap<Formula, usize>) {
        match f {
            Formula::Atom(..) | Formula::Modal(..) => {
                let n = ix.len();
                ix.entry(f.clone()).or_insert(n);
            }
            Formula::True(_) | Formula::False(_) => {}
            Formula::Not(a) => index(a, ix),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                index(a, ix);
                index(b, ix);
            }
        }
    }
    fn eval(f: &Formula, ix: &HashMap<Formula, usize>, v: u32) -> bool {
        match f {
            Formula::Atom(..) | Formula::Modal(..) => v >> ix[f] & 1 == 1,
            Formula::True(_) => true,
            Formula::False(_) => false,
            Formula::Not(a) => !eval(a, ix, v),
            Formula::And(a, b) => eval(a, ix, v) && eval(b, ix, v),
            Formula::Or(a, b) => eval(a, ix, v) || eval(b, ix, v),
            Formula::Implies(a, b) => !eval(a, ix, v) || eval(b, ix, v),
            Formula::Iff(a, b) => eval(a, ix, v) == eval(b, ix, v),
        }
    }
    let mut ix = HashMap::new();
    index(f, &mut ix);
    if ix.len() > MAX_PL_ATOMS {
        return Err(Error::Unsupported(format!(
            "{} propositional atoms exceed the PL limit of {MAX_PL_ATOMS}",
            ix.len()
        )));
    }
    Ok((0..1u32 << ix.len()).all(|v| eval(f, &ix, v)))
}

fn in_language(f: &Formula, sys: System) -> std::result::Result<(), String> {
    for m in f.modalities() {
        if !m.is_plain() {
            return Err(format!(
                "graded or weighted modality `{m}` is outside {sys:?}"
            ));
        }
        let ok = match sys {
            System::KB => m.base == Base::I && matches!(m.style, Style::Box | Style::Diamond),
            System::KF => m.base == Base::I && m.style == Style::Window,
            System::BM => true,
        };
        if !ok {
            return Err(format!("modality `{m}` is outside {sys:?}"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Step number as written in the proof.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub system: System,
    pub steps: usize,
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

/// Checks every step; a bad step is reported and later steps are still checked.
pub fn check_proof(proof: &Proof, sys: System) -> Verdict {
    let mut seen: HashMap<usize, &Formula> = HashMap::new();
    let mut failures = Vec::new();
    for l in &proof.lines {
        if let Err(reason) = check_line(l, sys, &seen) {
            failures.push(Failure {
                line: l.number,
                reason,
            });
        }
        seen.insert(l.number, &l.formula);
    }
    Verdict {
        system: sys,
        steps: proof.lines.len(),
        failures,
    }
}

fn check_line(
    l: &ProofLine,
    sys: System,
    seen: &HashMap<usize, &Formula>,
) -> std::result::Result<(), String> {
    l.formula.sort().map_err(|e| e.to_string())?;
    in_language(&l.formula, sys)?;
    let get = |i: usize| {
        seen.get(&i)
            .copied()
            .ok_or_else(|| format!("dangling reference to step {i}"))
    };
    match &l.justification {
        Justification::Axiom(name) if name == "PL" => match is_tautology(&l.formula) {
            Ok(true) => Ok(()),
            Ok(false) => Err("not a propositional tautology".into()),
            Err(e) => Err(e.to_string()),
        },
        Justification::Axiom(name) => {
            let s = schema(name).ok_or_else(|| format!("unknown axiom `{name}`"))?;
            if !s.in_system(sys) {
                return Err(format!("axiom `{name}` is not part of {sys:?}"));
            }
            s.matches(&l.formula)
                .map(|_| ())
                .ok_or_else(|| format!("not an instance of `{name}`"))
        }
        Justification::Mp(i, j) => {
            let (a, b) = (get(*i)?, get(*j)?);
            let fits = |ant: &Formula, imp: &Formula| matches!(imp, Formula::Implies(x, y) if **x == *ant && **y == l.formula);
            if fits(a, b) || fits(b, a) {
                Ok(())
            } else {
                Err(format!("MP does not apply to steps {i} and {j}"))
            }
        }
        Justification::Ug(rule, i) => {
            if !rule.allowed_in(sys) {
                return Err(format!("rule UG({}) is not part of {sys:?}", rule.name()));
            }
            let prem = get(*i)?;
            match rule.premise_for(&l.formula) {
                Some(want) if want == *prem => Ok(()),
                _ => Err(format!(
                    "UG({}) does not derive this from step {i}",
                    rule.name()
                )),
            }
        }
    }
}
