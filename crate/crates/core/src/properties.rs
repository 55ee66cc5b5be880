//! Relation classes read off graded formulas, and the weighted-logic
//! counterexamples and positive laws.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::{FormalContext, Sort};
use crate::error::{Error, Result};
use crate::formula::{translate_tau, Base, Dir, Formula, Modality, Weight};
use crate::semantics::{satisfies_at, truth_set, ContextModel, Model, Valuation};

/// Which relation a check reads: `I` or its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelBase {
    I,
    Complement,
}

/// Functional properties of a relation `G → M`. `injective`, `surjective`
/// and `bijective` all imply `function`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RelationClass {
    pub partial_function: bool,
    pub function: bool,
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

pub fn relation_class(k: &FormalContext, base: RelBase) -> RelationClass {
    let rel = match base {
        RelBase::I => k.clone(),
        RelBase::Complement => k.complement(),
    };
    let rows: Vec<usize> = (0..rel.n_objects()).map(|g| rel.row(g).count()).collect();
    let cols: Vec<usize> = (0..rel.n_attributes())
        .map(|m| rel.col(m).count())
        .collect();
    let partial_function = rows.iter().all(|&n| n <= 1);
    let function = rows.iter().all(|&n| n == 1);
    let injective = function && cols.iter().all(|&n| n <= 1);
    let surjective = function && cols.iter().all(|&n| n >= 1);
    RelationClass {
        partial_function,
        function,
        injective,
        surjective,
        bijective: injective && surjective,
    }
}

/// One line of a check report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportItem {
    pub clause: String,
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
    /// A world falsifying the formula side, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn top(sort: Sort) -> Formula {
    Formula::True(sort)
}

fn dia(dir: Dir, base: Base, n: u32) -> Modality {
    let m = Modality::diamond(dir).graded(n);
    if base == Base::Complement {
        m.overline()
    } else {
        m
    }
}

fn exactly(dir: Dir, base: Base, n: u32) -> Modality {
    let m = Modality::diamond(dir).exactly(n);
    if base == Base::Complement {
        m.overline()
    } else {
        m
    }
}

/// `◇ⁿ⊤`-style formulas for each clause; the object-sort part first.
pub fn graded_clauses() -> Vec<(&'static str, Vec<Formula>)> {
    let p = |m: Modality| Formula::modal(m, top(Sort::S2));
    let o = |m: Modality| Formula::modal(m, top(Sort::S1));
    let mut out = vec![
        ("a:I", vec![p(dia(Dir::P, Base::I, 1)).not()]),
        ("a:Ibar", vec![p(dia(Dir::P, Base::Complement, 1)).not()]),
        ("b:I", vec![p(exactly(Dir::P, Base::I, 1))]),
        ("b:Ibar", vec![p(exactly(Dir::P, Base::Complement, 1))]),
    ];
    for (name, b) in [("c", Base::I), ("d", Base::Complement)] {
        out.push((
            name,
            vec![p(exactly(Dir::P, b, 1)), o(dia(Dir::O, b, 1)).not()],
        ));
    }
    for (name, b) in [("e", Base::I), ("f", Base::Complement)] {
        out.push((name, vec![p(exactly(Dir::P, b, 1)), o(dia(Dir::O, b, 0))]));
    }
    for (name, b) in [("g", Base::I), ("h", Base::Complement)] {
        out.push((
            name,
            vec![p(exactly(Dir::P, b, 1)), o(exactly(Dir::O, b, 1))],
        ));
    }
    out
}

fn clause_lhs(k: &FormalContext, clause: &str) -> bool {
    let (i, ibar) = (
        relation_class(k, RelBase::I),
        relation_class(k, RelBase::Complement),
    );
    match clause {
        "a:I" => i.partial_function,
        "a:Ibar" => ibar.partial_function,
        "b:I" => i.function,
        "b:Ibar" => ibar.function,
        "c" => i.injective,
        "d" => ibar.injective,
        "e" => i.surjective,
        "f" => ibar.surjective,
        "g" => i.bijective,
        _ => ibar.bijective,
    }
}

/// Compares each relational clause with the global truth of its graded
/// formulas. The formulas are atom-free, so any valuation gives the same answer.
pub fn graded_characterization_check(k: &FormalContext) -> Result<Vec<ReportItem>> {
    let model = ContextModel::new(k.clone(), Valuation::new())?;
    let mut out = Vec::new();
    for (clause, formulas) in graded_clauses() {
        let mut witness = None;
        for f in &formulas {
            let t = truth_set(&model, f)?;
            if let Some(w) = t.members.complement().iter().next() {
                witness = Some(k.universe(t.sort)[w].clone());
                break;
            }
        }
        let (lhs, rhs) = (clause_lhs(k, clause), witness.is_none());
        out.push(ReportItem {
            clause: clause.into(),
            lhs,
            rhs,
            agree: lhs == rhs,
            witness,
        });
    }
    Ok(out)
}

/// Families of weighted counterexamples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterKind {
    /// `p → ◇ᶜp □ᵈo p` and `q → □ᶜp ◇ᵉo q`; needs `c, d ∈ (0,1]`, `e ∈ [0,1)`.
    BoxDiaU,
    /// `⊟ᶜo(p ∧ ¬q) → (⊟ᵈo ¬p → ⊟ᵉo ¬q)`; needs `c, d ∈ [0,1)`, `e ∈ (0,1]`.
    Contingency,
    /// `p → ⊟ᶜp ⊟ᵈo p`; needs `c ∈ (0,1]`, `d ∈ (0,1)`.
    NestedBox,
}

impl std::str::FromStr for CounterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box_dia_U" | "box_dia_u" => Ok(CounterKind::BoxDiaU),
            "contingency" => Ok(CounterKind::Contingency),
            "nested_box" => Ok(CounterKind::NestedBox),
            _ => Err(Error::Malformed(format!(
                "unknown counterexample kind `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedParams {
    pub c: Weight,
    pub d: Weight,
    pub e: Weight,
}

impl WeightedParams {
    pub fn new(c: Weight, d: Weight, e: Weight) -> Self {
        WeightedParams { c, d, e }
    }
}

/// A model together with formulas expected to fail at named worlds.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub model: ContextModel,
    pub targets: Vec<(Formula, String)>,
}

impl Counterexample {
    /// True when every target formula is false at its world.
    pub fn falsified(&self) -> Result<bool> {
        for (f, w) in &self.targets {
            let (sort, ix) = self.model.context().world(w)?;
            if satisfies_at(&self.model, sort, ix, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn zero() -> Weight {
    Weight::from_integer(0)
}

fn one() -> Weight {
    Weight::from_integer(1)
}

fn need(ok: bool, what: &str, x: Weight) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{what} = {x} is outside the supported range"
        )))
    }
}

fn in_unit(x: Weight) -> bool {
    x <= one()
}

/// Smallest integer `n ≥ x`.
fn ceil(x: Weight) -> usize {
    x.ceil().to_integer() as usize
}

/// Smallest integer `n > x`.
fn above(x: Weight) -> usize {
    x.floor().to_integer() as usize + 1
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Builds the counter-model from the matching proof, using the smallest
/// sizes the proof's bounds allow, and checks that it actually refutes.
pub fn weighted_counterexample(kind: CounterKind, p: WeightedParams) -> Result<Counterexample> {
    let WeightedParams { c, d, e } = p;
    let wbox = |dir: Dir, w: Weight| Modality::boxm(dir).weighted(w);
    let wwin = |dir: Dir, w: Weight| Modality::window(dir).weighted(w);
    let wdia = |dir: Dir, w: Weight| Modality::diamond(dir).weighted(w);
    let (pa, qa) = (Formula::atom("p", Sort::S1), Formula::atom("q", Sort::S1));
    let cx = match kind {
        CounterKind::BoxDiaU => {
            need(c > zero() && in_unit(c), "c", c)?;
            need(d > zero() && in_unit(d), "d", d)?;
            need(e < one(), "e", e)?;
            // |G| = n ≥ max(1/(1−e), 1 + 1/d), every object related to m0.
            let n = ceil(one() / (one() - e)).max(ceil(one() + one() / d));
            let k =
                FormalContext::from_rows(ids("g", n), vec!["m0".into()], vec![BitSet::full(1); n])?;
            let g0 = BitSet::from_indices(n, [0]);
            let v = Valuation::new()
                .with("p", Sort::S1, g0.clone())
                .with("q", Sort::S1, g0);
            let f1 = pa.clone().implies(Formula::modal(
                wdia(Dir::P, c),
                Formula::modal(wbox(Dir::O, d), pa),
            ));
            let f2 = qa.clone().implies(Formula::modal(
                wbox(Dir::P, c),
                Formula::modal(wdia(Dir::O, e), qa),
            ));
            Counterexample {
                model: ContextModel::new(k, v)?,
                targets: vec![(f1, "g0".into()), (f2, "g0".into())],
            }
        }
        CounterKind::Contingency => {
            need(c < one(), "c", c)?;
            need(d < one(), "d", d)?;
            need(e > zero() && in_unit(e), "e", e)?;
            // k4 > 1/e − 1 and k3 ≥ k4·d/(1−d); k1 = k2 = 0.
            let k4 = above(one() / e - one());
            let k3 = ceil(Weight::from_integer(k4 as u64) * d / (one() - d));
            // Objects: one p∧¬q in I, k3 ¬p∧q in I, k4 ¬p∧¬q outside I.
            let n = 1 + k3 + k4;
            let rows = (0..n)
                .map(|g| BitSet::from_indices(1, (g <= k3).then_some(0)))
                .collect();
            let k = FormalContext::from_rows(ids("g", n), vec!["m0".into()], rows)?;
            let v = Valuation::new()
                .with("p", Sort::S1, BitSet::from_indices(n, [0]))
                .with("q", Sort::S1, BitSet::from_indices(n, 1..=k3));
            let f = Formula::modal(wwin(Dir::O, c), pa.clone().and(qa.clone().not())).implies(
                Formula::modal(wwin(Dir::O, d), pa.not())
                    .implies(Formula::modal(wwin(Dir::O, e), qa.not())),
            );
            Counterexample {
                model: ContextModel::new(k, v)?,
                targets: vec![(f, "m0".into())],
            }
        }
        CounterKind::NestedBox => {
            need(c > zero() && in_unit(c), "c", c)?;
            need(d > zero(), "d", d)?;
            if d >= one() {
                return Err(Error::Unsupported(
                    "d = 1 has no counter-model when empty denominators count as true: p → ⊟ᶜp ⊟¹o p is valid".into(),
                ));
            }
            // |G| = n + 1 with 1/n < d. A second attribute m1 where ⊟ᵈo p holds
            // keeps the outer ratio's denominator non-empty; it needs
            // (n − 1)/n ≥ d.
            let n = above(one() / d).max(ceil(one() / (one() - d))).max(2);
            let g = n + 1;
            let rows = (0..g)
                .map(|x| match x {
                    0 => BitSet::from_indices(2, [0]),
                    1 => BitSet::from_indices(2, [0]),
                    _ => BitSet::from_indices(2, [1]),
                })
                .collect();
            let k = FormalContext::from_rows(ids("g", g), vec!["m0".into(), "m1".into()], rows)?;
            let v = Valuation::new().with(
                "p",
                Sort::S1,
                BitSet::from_indices(g, (0..g).filter(|&x| x != 1)),
            );
            let f = pa.clone().implies(Formula::modal(
                wwin(Dir::P, c),
                Formula::modal(wwin(Dir::O, d), pa),
            ));
            Counterexample {
                model: ContextModel::new(k, v)?,
                targets: vec![(f, "g0".into())],
            }
        }
    };
    if !cx.falsified()? {
        return Err(Error::Malformed(format!(
            "construction for {kind:?} at {p:?} does not refute its target"
        )));
    }
    Ok(cx)
}

/// The four weighted equivalences that hold only for `c = d ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefinabilityForm {
    /// `⊟ᶜo φ ↔ □̄ᵈo ¬φ`
    WinO,
    /// `⊟ᶜp ψ ↔ □̄ᵈp ¬ψ`
    WinP,
    /// `⊟̄ᶜo φ ↔ □ᵈo ¬φ`
    WinBarO,
    /// `⊟̄ᶜp ψ ↔ □ᵈp ¬ψ`
    WinBarP,
}

impl DefinabilityForm {
    pub const ALL: [DefinabilityForm; 4] = [
        DefinabilityForm::WinO,
        DefinabilityForm::WinP,
        DefinabilityForm::WinBarO,
        DefinabilityForm::WinBarP,
    ];

    fn dir(self) -> Dir {
        match self {
            DefinabilityForm::WinO | DefinabilityForm::WinBarO => Dir::O,
            _ => Dir::P,
        }
    }

    fn barred(self) -> bool {
        matches!(self, DefinabilityForm::WinBarO | DefinabilityForm::WinBarP)
    }

    pub fn formula(self, c: Weight, d: Weight) -> Formula {
        let dir = self.dir();
        let x = Formula::atom("x", dir.input());
        let (win, bx) = (
            Modality::window(dir).weighted(c),
            Modality::boxm(dir).weighted(d),
        );
        let (win, bx) = if self.barred() {
            (win.overline(), bx)
        } else {
            (win, bx.overline())
        };
        Formula::modal(win, x.clone()).iff(Formula::modal(bx, x.not()))
    }
}

/// Searches `k1, k3, k4 ≤ bound` for a contingency table refuting the form
/// at a single world. `None` means nothing was found within the bound, not
/// that the equivalence is valid.
pub fn nondefinability_search(
    form: DefinabilityForm,
    c: Weight,
    d: Weight,
    bound: usize,
) -> Result<Option<Counterexample>> {
    for total in 1..=3 * bound {
        for k1 in 0..=bound.min(total) {
            for k3 in 0..=bound.min(total - k1) {
                let k4 = total - k1 - k3;
                if k4 > bound {
                    continue;
                }
                let cx = table_model(form, k1, k3, k4, c, d)?;
                if cx.falsified()? {
                    return Ok(Some(cx));
                }
            }
        }
    }
    Ok(None)
}

/// One world `w0` of the output sort with `k1 + k3 + k4` neighbours of the
/// input sort: the first `k1` are related to it (under `I`, or `Ī` for the
/// barred forms) and satisfy `x`, the next `k3` satisfy `x` but are not
/// related, the last `k4` satisfy neither.
fn table_model(
    form: DefinabilityForm,
    k1: usize,
    k3: usize,
    k4: usize,
    c: Weight,
    d: Weight,
) -> Result<Counterexample> {
    let n = k1 + k3 + k4;
    let related = |i: usize| (i < k1) != form.barred();
    let (k, w) = match form.dir() {
        Dir::O => {
            let rows = (0..n)
                .map(|i| BitSet::from_indices(1, related(i).then_some(0)))
                .collect();
            (
                FormalContext::from_rows(ids("g", n), vec!["w0".into()], rows)?,
                Sort::S1,
            )
        }
        Dir::P => {
            let row = BitSet::from_indices(n, (0..n).filter(|&i| related(i)));
            (
                FormalContext::from_rows(vec!["w0".into()], ids("m", n), vec![row])?,
                Sort::S2,
            )
        }
    };
    let v = Valuation::new().with("x", w, BitSet::from_indices(n, 0..k1 + k3));
    Ok(Counterexample {
        model: ContextModel::new(k, v)?,
        targets: vec![(form.formula(c, d), "w0".into())],
    })
}

/// Outcome of [`weighted_validity_suite`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn box_styles(dir: Dir) -> [Modality; 4] {
    let (b, w) = (Modality::boxm(dir), Modality::window(dir));
    [b, w, b.overline(), w.overline()]
}

/// Positive weighted laws on each model and formula (formulas must be
/// plain BM so that τ applies):
/// monotonicity `Xᶜφ → Xᵈφ` for `c ≥ d`, antitone weight-1 windows on
/// `φ ∧ χ ⊨ φ`, the weight-1 equivalences, τ-embedding with `⊨ X⁰τ(φ)`, and
/// the graded ↔ weighted bridge wherever `|I_{•m}| ≥ n`.
pub fn weighted_validity_suite(
    models: &[ContextModel],
    formulas: &[Formula],
    c: Weight,
    d: Weight,
) -> Result<SuiteReport> {
    if c < d || c > one() {
        return Err(Error::OutOfRange(format!(
            "need 1 ≥ c ≥ d, got c = {c}, d = {d}"
        )));
    }
    let mut rep = SuiteReport::default();
    for (mi, m) in models.iter().enumerate() {
        for f in formulas {
            let sort = f.sort()?;
            let dir = if sort == Sort::S1 { Dir::O } else { Dir::P };
            let ts = |g: &Formula| truth_set(m, g).map(|t| t.members);
            for x in box_styles(dir) {
                let (hi, lo) = (
                    ts(&Formula::modal(x.weighted(c), f.clone()))?,
                    ts(&Formula::modal(x.weighted(d), f.clone()))?,
                );
                rep.expect(hi.is_subset(&lo), || {
                    format!("model {mi}: {} ⊄ {} for {f}", x.weighted(c), x.weighted(d))
                });
            }
            // Weight-1 windows are antitone along φ ∧ χ ⊨ φ.
            let chi = formulas
                .iter()
                .find(|g| g.sort().ok() == Some(sort) && *g != f)
                .cloned()
                .unwrap_or(Formula::True(sort));
            let narrow = f.clone().and(chi);
            for x in [Modality::window(dir), Modality::window(dir).overline()] {
                let w = x.weighted(one());
                let (wide, small) = (
                    ts(&Formula::modal(w, f.clone()))?,
                    ts(&Formula::modal(w, narrow.clone()))?,
                );
                rep.expect(wide.is_subset(&small), || {
                    format!("model {mi}: {w} not antitone on {f}")
                });
            }
            // □¹¬φ ↔ ⊟̄¹φ and □̄¹¬φ ↔ ⊟¹φ.
            let one_m = |m: Modality| m.weighted(one());
            for (lhs, rhs) in [
                (Modality::boxm(dir), Modality::window(dir).overline()),
                (Modality::boxm(dir).overline(), Modality::window(dir)),
            ] {
                let a = ts(&Formula::modal(one_m(lhs), f.clone().not()))?;
                let b = ts(&Formula::modal(one_m(rhs), f.clone()))?;
                rep.expect(a == b, || {
                    format!("model {mi}: {}¬φ ≠ {}φ for {f}", one_m(lhs), one_m(rhs))
                });
            }
            let t = translate_tau(f)?;
            rep.expect(ts(f)? == ts(&t)?, || {
                format!("model {mi}: τ changes the truth set of {f}")
            });
            for x in [Modality::boxm(dir), Modality::window(dir)] {
                let all = ts(&Formula::modal(x.weighted(zero()), t.clone()))?;
                rep.expect(all.is_full(), || {
                    format!("model {mi}: {} τ(φ) not valid for {f}", x.weighted(zero()))
                });
            }
            bridge(m, mi, f, dir, &mut rep)?;
        }
    }
    Ok(rep)
}

/// `□ⁿφ ↔ □^{1−n/k}φ` at every world whose `I`-neighbourhood has `k ≥ n` members.
fn bridge(m: &ContextModel, mi: usize, f: &Formula, dir: Dir, rep: &mut SuiteReport) -> Result<()> {
    let k = m.context();
    let out = dir.output();
    for w in 0..k.universe_len(out) {
        let size = if out == Sort::S1 {
            k.row(w).count()
        } else {
            k.col(w).count()
        };
        for n in 0..=size as u32 {
            let graded = Formula::modal(Modality::boxm(dir).graded(n), f.clone());
            let wt = Weight::from_integer(1) - Weight::new(n as u64, size.max(1) as u64);
            let weighted = Formula::modal(Modality::boxm(dir).weighted(wt), f.clone());
            let (a, b) = (
                satisfies_at(m, out, w, &graded)?,
                satisfies_at(m, out, w, &weighted)?,
            );
            rep.expect(a == b, || {
                format!(
                    "model {mi}: {graded} vs {weighted} differ at {}",
                    k.universe(out)[w]
                )
            });
        }
    }
    Ok(())
}
