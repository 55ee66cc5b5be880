//! Model checking over context-based and generalized models, plus
//! brute-force frame validity and local consequence.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::context::{FormalContext, Sort, SortedSet};
use crate::error::{Error, Result};
use crate::formula::{Base, Dir, Formula, Modality, Style, Weight};

/// Default cap on the number of valuations `frame_valid` may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Truth sets for atoms, one map per sort.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    pub s1: BTreeMap<String, BitSet>,
    pub s2: BTreeMap<String, BitSet>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn map(&self, sort: Sort) -> &BTreeMap<String, BitSet> {
        match sort {
            Sort::S1 => &self.s1,
            Sort::S2 => &self.s2,
        }
    }

    pub fn set(&mut self, name: &str, sort: Sort, members: BitSet) {
        let m = match sort {
            Sort::S1 => &mut self.s1,
            Sort::S2 => &mut self.s2,
        };
        m.insert(name.to_string(), members);
    }

    pub fn with(mut self, name: &str, sort: Sort, members: BitSet) -> Self {
        self.set(name, sort, members);
        self
    }

    pub fn get(&self, name: &str, sort: Sort) -> Option<&BitSet> {
        self.map(sort).get(name)
    }

    /// Every truth set must span the universe of its sort.
    pub fn check_against(&self, k: &FormalContext) -> Result<()> {
        for sort in [Sort::S1, Sort::S2] {
            for (n, b) in self.map(sort) {
                if b.len() != k.universe_len(sort) {
                    return Err(Error::Malformed(format!(
                        "valuation of `{n}@{}` has the wrong universe",
                        sort.digit()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The relations a formula is evaluated against. `j` is the window base,
/// `ibar` the complement of `i`; they coincide on context-based models.
#[derive(Debug, Clone, Copy)]
pub struct Frame<'a> {
    pub i: &'a FormalContext,
    pub j: &'a FormalContext,
    pub ibar: &'a FormalContext,
}

impl Frame<'_> {
    /// True when `J = Ī`, the only case where weighted modalities are defined.
    pub fn context_based(&self) -> bool {
        self.j.rows() == self.ibar.rows()
    }
}

pub trait Model: Sync {
    fn frame(&self) -> Frame<'_>;
    fn valuation(&self) -> &Valuation;

    fn context(&self) -> &FormalContext {
        self.frame().i
    }
}

/// `(G, M, I, v)`; the complement of `I` is cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextModel {
    context: FormalContext,
    complement: FormalContext,
    valuation: Valuation,
}

impl ContextModel {
    pub fn new(context: FormalContext, valuation: Valuation) -> Result<Self> {
        valuation.check_against(&context)?;
        let complement = context.complement();
        Ok(ContextModel {
            context,
            complement,
            valuation,
        })
    }

    pub fn complement_context(&self) -> &FormalContext {
        &self.complement
    }

    pub fn into_parts(self) -> (FormalContext, Valuation) {
        (self.context, self.valuation)
    }
}

impl Model for ContextModel {
    fn frame(&self) -> Frame<'_> {
        Frame {
            i: &self.context,
            j: &self.complement,
            ibar: &self.complement,
        }
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

/// `(G, M, I, J, v)` with `I ∪ J = G × M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedModel {
    i: FormalContext,
    j: FormalContext,
    ibar: FormalContext,
    valuation: Valuation,
}

impl GeneralizedModel {
    /// `i` and `j` must share universes (same ids in the same order).
    pub fn new(i: FormalContext, j: FormalContext, valuation: Valuation) -> Result<Self> {
        let g = Self::new_unchecked(i, j, valuation)?;
        if let Some((a, b)) = g.totality_gap() {
            return Err(Error::Malformed(format!(
                "I ∪ J is not total: neither I nor J relates `{}` and `{}`",
                g.i.objects()[a],
                g.i.attributes()[b]
            )));
        }
        Ok(g)
    }

    /// Skips the totality check (universes and valuation are still checked).
    pub fn new_unchecked(i: FormalContext, j: FormalContext, valuation: Valuation) -> Result<Self> {
        if i.objects() != j.objects() || i.attributes() != j.attributes() {
            return Err(Error::Malformed(
                "I and J are over different universes".into(),
            ));
        }
        valuation.check_against(&i)?;
        let ibar = i.complement();
        Ok(GeneralizedModel {
            i,
            j,
            ibar,
            valuation,
        })
    }

    pub fn from_context_model(m: &ContextModel) -> Self {
        GeneralizedModel {
            i: m.context.clone(),
            j: m.complement.clone(),
            ibar: m.complement.clone(),
            valuation: m.valuation.clone(),
        }
    }

    /// First `(g, m)` related by neither `I` nor `J`.
    pub fn totality_gap(&self) -> Option<(usize, usize)> {
        (0..self.i.n_objects()).find_map(|g| {
            let gap = self.i.row(g).union(self.j.row(g)).complement();
            let first = gap.iter().next();
            first.map(|m| (g, m))
        })
    }

    pub fn i(&self) -> &FormalContext {
        &self.i
    }

    pub fn j(&self) -> &FormalContext {
        &self.j
    }

    pub fn is_context_based(&self) -> bool {
        self.frame().context_based()
    }

    pub fn with_valuation(&self, valuation: Valuation) -> Result<Self> {
        valuation.check_against(&self.i)?;
        Ok(GeneralizedModel {
            valuation,
            ..self.clone()
        })
    }
}

impl Model for GeneralizedModel {
    fn frame(&self) -> Frame<'_> {
        Frame {
            i: &self.i,
            j: &self.j,
            ibar: &self.ibar,
        }
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

fn neighbors(k: &FormalContext, dir: Dir, w: usize) -> &BitSet {
    match dir {
        Dir::O => k.col(w),
        Dir::P => k.row(w),
    }
}

/// `num / den >= c`, with an empty denominator counting as true.
fn ratio_at_least(num: usize, den: usize, c: Weight) -> bool {
    den == 0 || num as u128 * *c.denom() as u128 >= *c.numer() as u128 * den as u128
}

/// Truth set of `f` under a frame and valuation.
pub fn eval(fr: Frame<'_>, v: &Valuation, f: &Formula) -> Result<BitSet> {
    f.sort()?;
    eval_sorted(fr, v, f)
}

fn eval_sorted(fr: Frame<'_>, v: &Valuation, f: &Formula) -> Result<BitSet> {
    let eval = eval_sorted;
    let len = |s: Sort| fr.i.universe_len(s);
    Ok(match f {
        Formula::Atom(n, s) => v.get(n, *s).cloned().ok_or_else(|| {
            Error::UnknownId(format!("atom `{n}@{}` has no valuation", s.digit()))
        })?,
        Formula::True(s) => BitSet::full(len(*s)),
        Formula::False(s) => BitSet::new(len(*s)),
        Formula::Not(a) => eval(fr, v, a)?.complement(),
        Formula::And(a, b) => eval(fr, v, a)?.intersection(&eval(fr, v, b)?),
        Formula::Or(a, b) => eval(fr, v, a)?.union(&eval(fr, v, b)?),
        Formula::Implies(a, b) => eval(fr, v, a)?.complement().union(&eval(fr, v, b)?),
        Formula::Iff(a, b) => {
            let (x, y) = (eval(fr, v, a)?, eval(fr, v, b)?);
            x.intersection(&y).union(&x.union(&y).complement())
        }
        Formula::Modal(m, a) => eval_modal(fr, *m, &eval(fr, v, a)?)?,
    })
}

fn eval_modal(fr: Frame<'_>, m: Modality, x: &BitSet) -> Result<BitSet> {
    m.validate()?;
    if m.exact {
        // ◇ⁿ!φ = ◇ⁿ⁻¹φ ∧ ¬◇ⁿφ
        let n = m.grade.expect("validated");
        let plain = Modality { exact: false, ..m };
        let lower = eval_modal(fr, plain.graded(n - 1), x)?;
        let upper = eval_modal(fr, plain.graded(n), x)?;
        return Ok(lower.difference(&upper));
    }
    match m.style {
        Style::Diamond => {
            return Ok(eval_modal(
                fr,
                Modality {
                    style: Style::Box,
                    ..m
                },
                &x.complement(),
            )?
            .complement())
        }
        Style::WindowDual => {
            return Ok(eval_modal(
                fr,
                Modality {
                    style: Style::Window,
                    ..m
                },
                &x.complement(),
            )?
            .complement())
        }
        Style::Box | Style::Window => {}
    }
    if m.weight.is_some() && !fr.context_based() {
        return Err(Error::Unsupported(
            "weighted modalities are only defined on context-based models (J = complement of I)"
                .into(),
        ));
    }
    let out = m.dir.output();
    let n_out = fr.i.universe_len(out);
    let x_count = x.count();
    let window = m.style == Style::Window;
    let holds = |w: usize| -> bool {
        let ni = neighbors(fr.i, m.dir, w);
        let nib = neighbors(fr.ibar, m.dir, w);
        match (m.grade, m.weight) {
            (None, None) => match (window, m.base) {
                (false, Base::I) => ni.is_subset(x),
                (false, Base::Complement) => neighbors(fr.j, m.dir, w).is_subset(x),
                (true, Base::I) => !x.intersects(neighbors(fr.j, m.dir, w)),
                (true, Base::Complement) => !x.intersects(ni),
            },
            (Some(n), _) => {
                let n = n as usize;
                match (window, m.base) {
                    (false, Base::I) => ni.count() - ni.intersection_count(x) <= n,
                    (false, Base::Complement) => nib.count() - nib.intersection_count(x) <= n,
                    (true, Base::I) => nib.intersection_count(x) <= n,
                    (true, Base::Complement) => ni.intersection_count(x) <= n,
                }
            }
            (None, Some(c)) => match (window, m.base) {
                (false, Base::I) => ratio_at_least(ni.intersection_count(x), ni.count(), c),
                (false, Base::Complement) => {
                    ratio_at_least(nib.intersection_count(x), nib.count(), c)
                }
                (true, Base::I) => ratio_at_least(ni.intersection_count(x), x_count, c),
                (true, Base::Complement) => ratio_at_least(nib.intersection_count(x), x_count, c),
            },
        }
    };
    Ok(BitSet::from_indices(
        n_out,
        (0..n_out).filter(|&w| holds(w)),
    ))
}

pub fn truth_set(model: &impl Model, f: &Formula) -> Result<SortedSet> {
    let sort = f.sort()?;
    Ok(SortedSet::new(
        sort,
        eval_sorted(model.frame(), model.valuation(), f)?,
    ))
}

/// `model, w ⊨ f` for the world with id `world`.
pub fn satisfies(model: &impl Model, world: &str, f: &Formula) -> Result<bool> {
    let (sort, ix) = model.context().world(world)?;
    satisfies_at(model, sort, ix, f)
}

pub fn satisfies_at(model: &impl Model, sort: Sort, ix: usize, f: &Formula) -> Result<bool> {
    let fs = f.sort()?;
    if fs != sort {
        return Err(Error::SortMismatch {
            expected: fs,
            found: sort,
        });
    }
    Ok(eval_sorted(model.frame(), model.valuation(), f)?.contains(ix))
}

/// A falsifying valuation and the first world (of the formula's sort) where it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub valuation: Valuation,
    pub sort: Sort,
    pub world: usize,
}

/// Enumerates every valuation of `atoms` over `k`, atoms in the given order
/// with the first atom in the low bits of a binary counter.
struct Enumeration {
    atoms: Vec<(String, Sort)>,
    widths: Vec<usize>,
    total: u64,
}

impl Enumeration {
    fn new(k: &FormalContext, atoms: Vec<(String, Sort)>, budget: u64) -> Result<Self> {
        let widths: Vec<usize> = atoms.iter().map(|(_, s)| k.universe_len(*s)).collect();
        let bits: usize = widths.iter().sum();
        if bits >= 64 || (1u64 << bits) > budget {
            return Err(Error::BudgetExceeded {
                bits: bits as u32,
                cap: budget,
            });
        }
        Ok(Enumeration {
            atoms,
            widths,
            total: 1u64 << bits,
        })
    }

    fn valuation(&self, mut code: u64) -> Valuation {
        let mut v = Valuation::new();
        for ((name, sort), &w) in self.atoms.iter().zip(&self.widths) {
            let mask = if w == 0 {
                0
            } else {
                code & (u64::MAX >> (64 - w))
            };
            v.set(name, *sort, BitSet::from_mask(w, mask));
            code = code.checked_shr(w as u32).unwrap_or(0);
        }
        v
    }
}

/// First valuation (in enumeration order) under which some world of the
/// formulas' sort satisfies every premise but not `f`.
pub fn local_countermodel(
    k: &FormalContext,
    premises: &[Formula],
    f: &Formula,
    budget: u64,
) -> Result<Option<Countermodel>> {
    let sort = f.sort()?;
    let mut atoms = f.atoms();
    for p in premises {
        let ps = p.sort()?;
        if ps != sort {
            return Err(Error::SortMismatch {
                expected: sort,
                found: ps,
            });
        }
        atoms.extend(p.atoms());
    }
    let en = Enumeration::new(k, atoms.into_iter().collect(), budget)?;
    let complement = k.complement();
    let fr = Frame {
        i: k,
        j: &complement,
        ibar: &complement,
    };
    let fails = |code: u64| -> Option<Countermodel> {
        let v = en.valuation(code);
        let mut ok = BitSet::full(k.universe_len(sort));
        for p in premises {
            ok.intersect_with(&eval_sorted(fr, &v, p).expect("sort-checked"));
        }
        let bad = ok.difference(&eval_sorted(fr, &v, f).expect("sort-checked"));
        let world = bad.iter().next();
        world.map(|world| Countermodel {
            valuation: v,
            sort,
            world,
        })
    };
    // Modalities were validated by the sort check, so evaluation cannot fail.
    Ok((0..en.total).into_par_iter().find_map_first(fails))
}

pub fn local_consequence(
    k: &FormalContext,
    premises: &[Formula],
    f: &Formula,
    budget: u64,
) -> Result<bool> {
    Ok(local_countermodel(k, premises, f, budget)?.is_none())
}

pub fn frame_countermodel(
    k: &FormalContext,
    f: &Formula,
    budget: u64,
) -> Result<Option<Countermodel>> {
    local_countermodel(k, &[], f, budget)
}

/// Truth at every world under every valuation of `f`'s atoms over `k`.
pub fn frame_valid(k: &FormalContext, f: &Formula, budget: u64) -> Result<bool> {
    Ok(frame_countermodel(k, f, budget)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::tests::k2;
    use crate::formula::parse;
    use proptest::prelude::*;

    fn k2_model() -> ContextModel {
        let k = k2();
        let v = Valuation::new().with("p", Sort::S1, BitSet::from_indices(2, [0]));
        ContextModel::new(k, v).unwrap()
    }

    fn ts(m: &impl Model, s: &str) -> Vec<usize> {
        truth_set(m, &parse(s).unwrap()).unwrap().members.to_vec()
    }

    #[test]
    fn k2_examples() {
        let m = k2_model();
        // ⊟o p = {g1}⁺
        let up = m.context().up(&BitSet::from_indices(2, [0]));
        assert_eq!(ts(&m, "[[o]] p@1"), up.to_vec());
        assert_eq!(ts(&m, "[[o]] p@1"), vec![0, 1]);
        assert!(ts(&m, "[o:1] p@1").contains(&1));
        assert!(ts(&m, "[o>=1/2] p@1").contains(&1));
        assert!(!ts(&m, "[o>=2/3] p@1").contains(&1));
        assert!(satisfies(&m, "g1", &parse("p@1").unwrap()).unwrap());
        assert!(satisfies(&m, "g2", &parse("~p@1").unwrap()).unwrap());
        assert!(!satisfies(&m, "m2", &parse("[o] p@1").unwrap()).unwrap());
        assert!(satisfies(&m, "m2", &parse("p@1").unwrap()).is_err());
    }

    #[test]
    fn counting_oracles() {
        // Grades and weights against direct counts over I_{•m}.
        let m = k2_model();
        let p = BitSet::from_indices(2, [0]);
        for n in 0..3u32 {
            let got = ts(&m, &format!("[o:{n}] p@1"));
            let want: Vec<usize> = (0..2)
                .filter(|&a| m.context().col(a).difference(&p).count() <= n as usize)
                .collect();
            assert_eq!(got, want);
        }
        for (num, den) in [(0, 1), (1, 3), (1, 2), (1, 1)] {
            let got = ts(&m, &format!("[o>={num}/{den}] p@1"));
            let want: Vec<usize> = (0..2)
                .filter(|&a| {
                    let col = m.context().col(a);
                    col.count() == 0 || col.intersection_count(&p) * den >= num * col.count()
                })
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn frame_validity_examples() {
        let k = k2();
        let v = |s: &str| frame_valid(&k, &parse(s).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(v("p@1 -> [[p]] [[o]] p@1"));
        assert!(v("[[p]] q@2 <-> [[p]] [[o]] [[p]] q@2"));
        assert!(v("true@1"));
        assert!(!v("[[o]] p@1"));
    }

    #[test]
    fn countermodel_is_first_in_order() {
        let k = k2();
        let f = parse("p@1").unwrap();
        let c = frame_countermodel(&k, &f, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(c.valuation.get("p", Sort::S1).unwrap().is_empty());
        assert_eq!(c.world, 0);
    }

    #[test]
    fn budget() {
        let k = FormalContext::from_code(3, 3, 0);
        let f = parse("p@1 & q@1 & r@1 & s@1 & t@1 -> p@1").unwrap();
        assert!(matches!(
            frame_valid(&k, &f, 1 << 14),
            Err(Error::BudgetExceeded { bits: 15, .. })
        ));
        assert!(frame_valid(&k, &f, 1 << 15).unwrap());
    }

    #[test]
    fn local_consequence_examples() {
        let k = k2();
        let p = parse("p@1").unwrap();
        assert!(local_consequence(&k, std::slice::from_ref(&p), &p, DEFAULT_BUDGET).unwrap());
        assert!(local_consequence(
            &k,
            std::slice::from_ref(&p),
            &parse("[p] <o> p@1").unwrap(),
            DEFAULT_BUDGET
        )
        .unwrap());
        assert!(!local_consequence(&k, &[], &p, DEFAULT_BUDGET).unwrap());
        assert!(local_consequence(&k, &[parse("q@2").unwrap()], &p, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn weighted_rejected_on_overlapping_generalized() {
        let k = k2();
        let full = FormalContext::from_code(2, 2, 0b1111);
        let v = Valuation::new().with("p", Sort::S1, BitSet::new(2));
        let g = GeneralizedModel::new(k.clone(), full, v.clone()).unwrap();
        assert!(matches!(
            truth_set(&g, &parse("[o>=1/2] p@1").unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(truth_set(&g, &parse("[[o]] p@1").unwrap()).is_ok());
        let bad = GeneralizedModel::new(k.clone(), FormalContext::from_code(2, 2, 0), v);
        assert!(bad.is_err());
    }

    fn arb_generalized() -> impl Strategy<Value = GeneralizedModel> {
        (1usize..4, 1usize..4)
            .prop_flat_map(|(g, m)| {
                let cells = g * m;
                (
                    Just((g, m)),
                    0u64..1 << cells,
                    0u64..1 << cells,
                    0u64..1 << g,
                    0u64..1 << m,
                )
            })
            .prop_map(|((g, m), i, extra, p, q)| {
                let all = (1u64 << (g * m)) - 1;
                let j = (all & !i) | (extra & all);
                let v = Valuation::new()
                    .with("p", Sort::S1, BitSet::from_mask(g, p))
                    .with("q", Sort::S2, BitSet::from_mask(m, q));
                GeneralizedModel::new(
                    FormalContext::from_code(g, m, i),
                    FormalContext::from_code(g, m, j),
                    v,
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn universal_modality_reads_i_or_j(g in arb_generalized()) {
            // m ⊨ [U_o]φ iff every g with Igm or Jgm satisfies φ.
            let f = parse("[U_o] p@1").unwrap();
            let got = truth_set(&g, &f).unwrap().members;
            let p = g.valuation().get("p", Sort::S1).unwrap().clone();
            for m in 0..g.i().n_attributes() {
                let nb = g.i().col(m).union(g.j().col(m));
                prop_assert_eq!(got.contains(m), nb.is_subset(&p));
            }
        }

        #[test]
        fn duals_and_grades(g in arb_generalized(), n in 0u32..3) {
            let t = |s: &str| truth_set(&g, &parse(s).unwrap()).unwrap().members;
            for (b, d) in [("[o]", "<o>"), ("[[o]]", "[[o]]~"), ("[-o]", "<-o>"), ("[[-o]]", "[[-o]]~")] {
                prop_assert_eq!(t(&format!("{d} p@1")), t(&format!("~{b} ~p@1")));
            }
            prop_assert_eq!(t("[o:0] p@1"), t("[o] p@1"));
            let lo = t(&format!("[p:{n}] q@2"));
            let hi = t(&format!("[p:{}] q@2", n + 1));
            prop_assert!(lo.is_subset(&hi));
        }
    }
}
