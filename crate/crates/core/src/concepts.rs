//! Formal, property-oriented and object-oriented concepts; semiconcepts and
//! protoconcepts with their algebras; logical (formula-pair) concepts.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::dba::{AdjointMaps, BooleanAlgebra, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::formula::{Base, Dir, Formula, Modality};
use crate::semantics::frame_valid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptKind {
    Formal,
    Property,
    Object,
}

impl std::str::FromStr for ConceptKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formal" => Ok(ConceptKind::Formal),
            "property" => Ok(ConceptKind::Property),
            "object" => Ok(ConceptKind::Object),
            _ => Err(Error::Malformed(format!("unknown concept kind `{s}`"))),
        }
    }
}

impl ConceptKind {
    pub const ALL: [ConceptKind; 3] = [
        ConceptKind::Formal,
        ConceptKind::Property,
        ConceptKind::Object,
    ];

    /// Formal `A⁺`, property `◇o A`, object `□o A`.
    pub fn intent_of(self, k: &FormalContext, a: &BitSet) -> BitSet {
        match self {
            ConceptKind::Formal => k.up(a),
            ConceptKind::Property => k.poss_o(a),
            ConceptKind::Object => k.nec_o(a),
        }
    }

    /// Formal `B⁻`, property `□p B`, object `◇p B`.
    pub fn extent_of(self, k: &FormalContext, b: &BitSet) -> BitSet {
        match self {
            ConceptKind::Formal => k.down(b),
            ConceptKind::Property => k.nec_p(b),
            ConceptKind::Object => k.poss_p(b),
        }
    }

    pub fn is_concept(self, k: &FormalContext, a: &BitSet, b: &BitSet) -> bool {
        self.intent_of(k, a) == *b && self.extent_of(k, b) == *a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

impl Concept {
    fn key(&self) -> (usize, Vec<usize>) {
        (self.extent.count(), self.extent.to_vec())
    }
}

fn canonical(mut cs: Vec<Concept>) -> Vec<Concept> {
    cs.sort_by_cached_key(Concept::key);
    cs.dedup();
    cs
}

/// Largest object universe handled by the subset scan.
pub const NAIVE_LIMIT: usize = 12;

/// Every `A ⊆ G` that is the extent of a concept of the kind.
pub fn concepts_naive(k: &FormalContext, kind: ConceptKind) -> Vec<Concept> {
    let n = k.n_objects();
    assert!(n <= NAIVE_LIMIT, "subset scan over {n} objects");
    let cs = (0..1u64 << n)
        .filter_map(|mask| {
            let a = BitSet::from_mask(n, mask);
            let b = kind.intent_of(k, &a);
            (kind.extent_of(k, &b) == a).then_some(Concept {
                extent: a,
                intent: b,
            })
        })
        .collect();
    canonical(cs)
}

/// All closed sets of `closure` over `0..n` in lectic order.
pub fn next_closure(n: usize, closure: impl Fn(&BitSet) -> BitSet) -> Vec<BitSet> {
    let mut a = closure(&BitSet::new(n));
    let mut out = vec![a.clone()];
    'outer: loop {
        for i in (0..n).rev() {
            if a.contains(i) {
                a.remove(i);
                continue;
            }
            let mut b = a.clone();
            b.insert(i);
            let c = closure(&b);
            if c.difference(&a).iter().all(|j| j >= i) {
                a = c;
                out.push(a.clone());
                continue 'outer;
            }
        }
        return out;
    }
}

/// Lectic enumeration over the attributes. Property-oriented intents are
/// the open sets of `◇o□p`, so their complements are enumerated instead.
pub fn concepts_next_closure(k: &FormalContext, kind: ConceptKind) -> Vec<Concept> {
    let m = k.n_attributes();
    let cs = match kind {
        ConceptKind::Formal => next_closure(m, |b| k.up(&k.down(b)))
            .into_iter()
            .map(|b| Concept {
                extent: k.down(&b),
                intent: b,
            })
            .collect(),
        ConceptKind::Object => next_closure(m, |b| k.nec_o(&k.poss_p(b)))
            .into_iter()
            .map(|b| Concept {
                extent: k.poss_p(&b),
                intent: b,
            })
            .collect(),
        ConceptKind::Property => {
            next_closure(m, |c| k.poss_o(&k.nec_p(&c.complement())).complement())
                .into_iter()
                .map(|c| {
                    let b = c.complement();
                    Concept {
                        extent: k.nec_p(&b),
                        intent: b,
                    }
                })
                .collect()
        }
    };
    canonical(cs)
}

/// Concepts ordered by `(|extent|, extent members)`, with the extent-inclusion
/// order and binary meet and join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    pub kind: ConceptKind,
    pub concepts: Vec<Concept>,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl ConceptLattice {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn index_of(&self, c: &Concept) -> Option<usize> {
        self.concepts.iter().position(|x| x == c)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.concepts[i].extent.is_subset(&self.concepts[j].extent)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).fold(0, |acc, i| self.meet(acc, i))
    }

    pub fn top(&self) -> usize {
        (0..self.len()).fold(0, |acc, i| self.join(acc, i))
    }

    /// Meet of a set of concepts; the empty meet is the top.
    pub fn meet_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.top(), |acc, &i| self.meet(acc, i))
    }

    pub fn join_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.bottom(), |acc, &i| self.join(acc, i))
    }

    /// Covering pairs `(lower, upper)`: the transitive reduction of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && self.leq(i, j)
                    && !(0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Set-level meet and join. On extents: formal and property meets intersect,
/// object joins unite; the other operation goes through intents.
fn set_ops(k: &FormalContext, kind: ConceptKind, c1: &Concept, c2: &Concept) -> (Concept, Concept) {
    match kind {
        ConceptKind::Formal => {
            let a = c1.extent.intersection(&c2.extent);
            let b = c1.intent.intersection(&c2.intent);
            (
                Concept {
                    intent: k.up(&a),
                    extent: a,
                },
                Concept {
                    extent: k.down(&b),
                    intent: b,
                },
            )
        }
        ConceptKind::Property => {
            let a = c1.extent.intersection(&c2.extent);
            let b = c1.intent.union(&c2.intent);
            (
                Concept {
                    intent: k.poss_o(&a),
                    extent: a,
                },
                Concept {
                    extent: k.nec_p(&b),
                    intent: b,
                },
            )
        }
        ConceptKind::Object => {
            let b = c1.intent.intersection(&c2.intent);
            let a = c1.extent.union(&c2.extent);
            (
                Concept {
                    extent: k.poss_p(&b),
                    intent: b,
                },
                Concept {
                    intent: k.nec_o(&a),
                    extent: a,
                },
            )
        }
    }
}

fn build_lattice(k: &FormalContext, kind: ConceptKind, concepts: Vec<Concept>) -> ConceptLattice {
    let ix: HashMap<&BitSet, usize> = concepts
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.extent, i))
        .collect();
    let n = concepts.len();
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for c1 in &concepts {
        for c2 in &concepts {
            let (m, j) = set_ops(k, kind, c1, c2);
            meet.push(ix[&m.extent]);
            join.push(ix[&j.extent]);
        }
    }
    ConceptLattice {
        kind,
        concepts,
        meet,
        join,
    }
}

/// Subset scan for small object sets, NextClosure otherwise.
pub fn enumerate_concepts(k: &FormalContext, kind: ConceptKind) -> ConceptLattice {
    let cs = if k.n_objects() <= NAIVE_LIMIT {
        concepts_naive(k, kind)
    } else {
        concepts_next_closure(k, kind)
    };
    build_lattice(k, kind, cs)
}

/// Meet and join of two members of `l`.
pub fn lattice_ops(
    k: &FormalContext,
    l: &ConceptLattice,
    c1: &Concept,
    c2: &Concept,
) -> Result<(Concept, Concept)> {
    for c in [c1, c2] {
        if !l.kind.is_concept(k, &c.extent, &c.intent) {
            return Err(Error::Malformed(format!(
                "pair is not a {:?} concept",
                l.kind
            )));
        }
    }
    Ok(set_ops(k, l.kind, c1, c2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCheck {
    pub name: &'static str,
    pub order_reversing: bool,
    pub source_size: usize,
    pub target_size: usize,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub checks: Vec<IsoCheck>,
}

impl IsoReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.violation.is_none())
    }
}

fn check_map(
    name: &'static str,
    src: &ConceptLattice,
    dst: &ConceptLattice,
    reversing: bool,
    f: impl Fn(&Concept) -> Concept,
) -> IsoCheck {
    let mut check = IsoCheck {
        name,
        order_reversing: reversing,
        source_size: src.len(),
        target_size: dst.len(),
        violation: None,
    };
    let mut image = Vec::with_capacity(src.len());
    for c in &src.concepts {
        let fc = f(c);
        match dst.index_of(&fc) {
            Some(i) => image.push(i),
            None => {
                check.violation = Some(format!(
                    "image of {:?} is not in the target",
                    c.extent.to_vec()
                ));
                return check;
            }
        }
    }
    let mut seen = image.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != src.len() || src.len() != dst.len() {
        check.violation = Some("map is not a bijection".into());
        return check;
    }
    for i in 0..src.len() {
        for j in 0..src.len() {
            let want = src.leq(i, j);
            let got = if reversing {
                dst.leq(image[j], image[i])
            } else {
                dst.leq(image[i], image[j])
            };
            if want != got {
                check.violation = Some(format!(
                    "order not {} at concepts {i}, {j}",
                    if reversing { "reversed" } else { "preserved" }
                ));
                return check;
            }
        }
    }
    check
}

/// `B(K) ≅ P(K̄)` by `(A, M∖B)`, `P(K) ≅ᵈ O(K)` by `(G∖A, M∖B)` and
/// `B(K) ≅ᵈ O(K̄)` by `(G∖A, B)`.
pub fn verify_isomorphisms(k: &FormalContext) -> IsoReport {
    let kc = k.complement();
    let b = enumerate_concepts(k, ConceptKind::Formal);
    let p = enumerate_concepts(k, ConceptKind::Property);
    let o = enumerate_concepts(k, ConceptKind::Object);
    let pc = enumerate_concepts(&kc, ConceptKind::Property);
    let oc = enumerate_concepts(&kc, ConceptKind::Object);
    let checks = vec![
        check_map("B(K) -> P(K~)", &b, &pc, false, |c| Concept {
            extent: c.extent.clone(),
            intent: c.intent.complement(),
        }),
        check_map("P(K) -> O(K)", &p, &o, true, |c| Concept {
            extent: c.extent.complement(),
            intent: c.intent.complement(),
        }),
        check_map("B(K) -> O(K~)", &b, &oc, true, |c| Concept {
            extent: c.extent.complement(),
            intent: c.intent.clone(),
        }),
    ];
    IsoReport { checks }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PairClass {
    pub formal: bool,
    pub left_semi: bool,
    pub right_semi: bool,
    pub semiconcept: bool,
    pub protoconcept: bool,
    pub property_concept: bool,
    pub object_concept: bool,
    pub object_semiconcept: bool,
    pub object_protoconcept: bool,
}

pub fn classify_pair(k: &FormalContext, a: &BitSet, b: &BitSet) -> PairClass {
    let left_semi = k.up(a) == *b;
    let right_semi = k.down(b) == *a;
    let obj_left = k.nec_o(a) == *b;
    let obj_right = k.poss_p(b) == *a;
    PairClass {
        formal: left_semi && right_semi,
        left_semi,
        right_semi,
        semiconcept: left_semi || right_semi,
        protoconcept: k.down(&k.up(a)) == k.down(b),
        property_concept: ConceptKind::Property.is_concept(k, a, b),
        object_concept: obj_left && obj_right,
        object_semiconcept: obj_left || obj_right,
        object_protoconcept: k.poss_p(&k.nec_o(a)) == k.poss_p(b),
    }
}

/// A dBa of concept-like pairs; element `i` of the algebra is `pairs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextAlgebra {
    pub algebra: FiniteAlgebra,
    pub pairs: Vec<(BitSet, BitSet)>,
}

impl ContextAlgebra {
    pub fn index_of(&self, a: &BitSet, b: &BitSet) -> Option<usize> {
        self.pairs
            .binary_search_by(|(x, y)| (x, y).cmp(&(a, b)))
            .ok()
    }
}

/// Largest universe for which algebras over subsets are built.
pub const ALGEBRA_LIMIT: usize = 16;

fn check_algebra_size(k: &FormalContext) -> Result<()> {
    if k.n_objects() > ALGEBRA_LIMIT || k.n_attributes() > ALGEBRA_LIMIT {
        return Err(Error::Unsupported(format!(
            "algebras over more than {ALGEBRA_LIMIT} objects or attributes"
        )));
    }
    Ok(())
}

fn pair_name(k: &FormalContext, a: &BitSet, b: &BitSet) -> String {
    let ids = |names: &[String], s: &BitSet| {
        s.iter()
            .map(|i| names[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "({{{}}},{{{}}})",
        ids(k.objects(), a),
        ids(k.attributes(), b)
    )
}

/// Operations: `(A,B)⊓(A′,B′) = (A∩A′, (A∩A′)⁺)`, `(A,B)⊔(A′,B′) = ((B∩B′)⁻, B∩B′)`,
/// `¬̄(A,B) = (G∖A, (G∖A)⁺)`, `⌟(A,B) = ((M∖B)⁻, M∖B)`, `⊥ = (∅, M)`, `⊤ = (G, ∅)`.
fn algebra_over(k: &FormalContext, mut pairs: Vec<(BitSet, BitSet)>) -> ContextAlgebra {
    pairs.sort();
    pairs.dedup();
    let ix: HashMap<(BitSet, BitSet), usize> = pairs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let left = |a: BitSet| ix[&(a.clone(), k.up(&a))];
    let right = |b: BitSet| ix[&(k.down(&b), b)];
    let n_g = k.n_objects();
    let n_m = k.n_attributes();
    let names = pairs.iter().map(|(a, b)| pair_name(k, a, b)).collect();
    let algebra = FiniteAlgebra::from_fns(
        names,
        |x, y| left(pairs[x].0.intersection(&pairs[y].0)),
        |x, y| right(pairs[x].1.intersection(&pairs[y].1)),
        |x| left(pairs[x].0.complement()),
        |x| right(pairs[x].1.complement()),
        right(BitSet::new(n_m)),
        left(BitSet::new(n_g)),
    );
    ContextAlgebra { algebra, pairs }
}

/// Carrier: all left semiconcepts `(A, A⁺)` and right semiconcepts `(B⁻, B)`.
pub fn semiconcept_algebra(k: &FormalContext) -> Result<ContextAlgebra> {
    check_algebra_size(k)?;
    let (g, m) = (k.n_objects(), k.n_attributes());
    let mut pairs: Vec<(BitSet, BitSet)> = (0..1u64 << g)
        .map(|mask| {
            let a = BitSet::from_mask(g, mask);
            let b = k.up(&a);
            (a, b)
        })
        .collect();
    pairs.extend((0..1u64 << m).map(|mask| {
        let b = BitSet::from_mask(m, mask);
        (k.down(&b), b)
    }));
    Ok(algebra_over(k, pairs))
}

/// Every pair with `A⁺⁻ = B⁻`.
pub fn protoconcepts(k: &FormalContext) -> Result<Vec<(BitSet, BitSet)>> {
    check_algebra_size(k)?;
    let (g, m) = (k.n_objects(), k.n_attributes());
    let mut by_extent: HashMap<BitSet, Vec<BitSet>> = HashMap::new();
    for mask in 0..1u64 << m {
        let b = BitSet::from_mask(m, mask);
        by_extent.entry(k.down(&b)).or_default().push(b);
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << g {
        let a = BitSet::from_mask(g, mask);
        for b in &by_extent[&k.down(&k.up(&a))] {
            out.push((a.clone(), b.clone()));
        }
    }
    out.sort();
    Ok(out)
}

pub fn protoconcept_algebra(k: &FormalContext) -> Result<ContextAlgebra> {
    Ok(algebra_over(k, protoconcepts(k)?))
}

/// Maps through `B = P(G)` and `B′ = P(M)` read upside down (join′ = ∩,
/// 0′ = M): `r` keeps the extent, `e(A) = (A, A⁺)`, `r′` keeps the intent,
/// `e′(B) = (B⁻, B)`. Works for both the semiconcept and protoconcept carrier.
pub fn semiconcept_maps(k: &FormalContext, alg: &ContextAlgebra) -> Result<AdjointMaps> {
    check_algebra_size(k)?;
    let (g, m) = (k.n_objects(), k.n_attributes());
    let find = |a: BitSet, b: BitSet| {
        alg.index_of(&a, &b)
            .ok_or_else(|| Error::Malformed("carrier is missing a semiconcept".into()))
    };
    let e = (0..1u64 << g)
        .map(|mask| {
            let a = BitSet::from_mask(g, mask);
            let b = k.up(&a);
            find(a, b)
        })
        .collect::<Result<_>>()?;
    let e2 = (0..1u64 << m)
        .map(|mask| {
            let b = BitSet::from_mask(m, mask);
            find(k.down(&b), b)
        })
        .collect::<Result<_>>()?;
    let maps = AdjointMaps {
        names: alg.algebra.names.clone(),
        b: BooleanAlgebra::powerset(g),
        b2: BooleanAlgebra::powerset(m).dual(),
        r: alg
            .pairs
            .iter()
            .map(|(a, _)| a.to_mask() as usize)
            .collect(),
        e,
        r2: alg
            .pairs
            .iter()
            .map(|(_, b)| b.to_mask() as usize)
            .collect(),
        e2,
    };
    maps.validate()?;
    Ok(maps)
}

/// Kinds of logical (formula-pair) concepts over a single context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LogicalKind {
    Formal,
    /// `φ ↔ □pψ` and `◇oφ ↔ ψ`.
    PropertyKb,
    /// `φ ↔ ◇pψ` and `□oφ ↔ ψ`.
    ObjectKb,
    /// As `PropertyKb` with overlined modalities.
    PropertyBm,
    ObjectBm,
    Semiconcept,
    PropertySemiconcept,
    ObjectSemiconcept,
    Protoconcept,
    PropertyProtoconcept,
    ObjectProtoconcept,
}

fn m(dir: Dir, base: Base, boxed: bool) -> Modality {
    let mo = if boxed {
        Modality::boxm(dir)
    } else {
        Modality::diamond(dir)
    };
    Modality { base, ..mo }
}

fn ap(mo: Modality, f: Formula) -> Formula {
    Formula::modal(mo, f)
}

/// The frame validities defining `kind`; the pair qualifies when all
/// formulas of some inner list are valid.
pub fn logical_conditions(phi: &Formula, psi: &Formula, kind: LogicalKind) -> Vec<Vec<Formula>> {
    let (p, s) = (phi.clone(), psi.clone());
    let win = Modality::window;
    let two = |base: Base, ext_box: bool| {
        // φ ↔ Xpψ and Yoφ ↔ ψ, with X = □ and Y = ◇ for property, swapped for object.
        vec![
            p.clone().iff(ap(m(Dir::P, base, ext_box), s.clone())),
            ap(m(Dir::O, base, !ext_box), p.clone()).iff(s.clone()),
        ]
    };
    let split = |v: Vec<Formula>| v.into_iter().map(|f| vec![f]).collect();
    let ov = Base::Complement;
    match kind {
        LogicalKind::Formal => vec![vec![
            p.clone().iff(ap(win(Dir::P), s.clone())),
            ap(win(Dir::O), p).iff(s),
        ]],
        LogicalKind::PropertyKb => vec![two(Base::I, true)],
        LogicalKind::ObjectKb => vec![two(Base::I, false)],
        LogicalKind::PropertyBm => vec![two(ov, true)],
        LogicalKind::ObjectBm => vec![two(ov, false)],
        LogicalKind::Semiconcept => {
            split(logical_conditions(phi, psi, LogicalKind::Formal).remove(0))
        }
        LogicalKind::PropertySemiconcept => split(two(ov, true)),
        LogicalKind::ObjectSemiconcept => split(two(ov, false)),
        LogicalKind::Protoconcept => vec![vec![
            ap(win(Dir::O), p).iff(ap(win(Dir::O), ap(win(Dir::P), s)))
        ]],
        LogicalKind::PropertyProtoconcept => {
            let d_o = m(Dir::O, ov, false);
            vec![vec![ap(d_o, p).iff(ap(d_o, ap(m(Dir::P, ov, true), s)))]]
        }
        LogicalKind::ObjectProtoconcept => {
            let d_p = m(Dir::P, ov, false);
            vec![vec![ap(d_p, ap(m(Dir::O, ov, true), p)).iff(ap(d_p, s))]]
        }
    }
}

/// Decides the kind's defining validities on `k` by brute force.
pub fn logical_concept_check(
    k: &FormalContext,
    phi: &Formula,
    psi: &Formula,
    kind: LogicalKind,
    budget: u64,
) -> Result<bool> {
    let (sp, ss) = (phi.sort()?, psi.sort()?);
    if sp != crate::context::Sort::S1 || ss != crate::context::Sort::S2 {
        return Err(Error::SortMismatch {
            expected: crate::context::Sort::S1,
            found: sp,
        });
    }
    for alt in logical_conditions(phi, psi, kind) {
        let mut all = true;
        for f in &alt {
            if !frame_valid(k, f, budget)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `(φ, ψ)` pairs are equivalent when their extent formulas are.
pub fn logically_equivalent(
    k: &FormalContext,
    a: &(Formula, Formula),
    b: &(Formula, Formula),
    budget: u64,
) -> Result<bool> {
    frame_valid(k, &a.0.clone().iff(b.0.clone()), budget)
}

/// Syntactic meet and join of two logical concepts of a lattice kind.
pub fn logical_lattice_ops(
    a: &(Formula, Formula),
    b: &(Formula, Formula),
    kind: LogicalKind,
) -> Result<((Formula, Formula), (Formula, Formula))> {
    let ((p1, s1), (p2, s2)) = (a.clone(), b.clone());
    let win = Modality::window;
    let (base, shape) = match kind {
        LogicalKind::Formal => {
            let pm = p1.and(p2);
            let sj = s1.and(s2);
            return Ok((
                (pm.clone(), ap(win(Dir::O), pm)),
                (ap(win(Dir::P), sj.clone()), sj),
            ));
        }
        LogicalKind::PropertyKb => (Base::I, ConceptKind::Property),
        LogicalKind::ObjectKb => (Base::I, ConceptKind::Object),
        LogicalKind::PropertyBm => (Base::Complement, ConceptKind::Property),
        LogicalKind::ObjectBm => (Base::Complement, ConceptKind::Object),
        _ => {
            return Err(Error::Unsupported(format!(
                "{kind:?} pairs do not form a lattice"
            )))
        }
    };
    Ok(match shape {
        ConceptKind::Property => {
            let pm = p1.and(p2);
            let sj = s1.or(s2);
            (
                (pm.clone(), ap(m(Dir::O, base, false), pm)),
                (ap(m(Dir::P, base, true), sj.clone()), sj),
            )
        }
        _ => {
            let sm = s1.and(s2);
            let pj = p1.or(p2);
            (
                (ap(m(Dir::P, base, false), sm.clone()), sm),
                (pj.clone(), ap(m(Dir::O, base, true), pj)),
            )
        }
    })
}
