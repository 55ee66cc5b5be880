//! Model-level constructions: complemented models, the ρ correspondence,
//! the disjoint-copy construction, bounded morphisms and generated submodels.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::{FormalContext, Sort};
use crate::error::{Error, Result};
use crate::formula::{translate_rho, Formula};
use crate::semantics::{truth_set, ContextModel, GeneralizedModel, Model, Valuation};

/// Suffix marking primed copies.
pub const PRIME: char = '\'';

/// Same universes and valuation, incidence complemented.
pub fn complement_model(m: &ContextModel) -> ContextModel {
    ContextModel::new(m.complement_context().clone(), m.valuation().clone())
        .expect("same universes")
}

/// `𝔐 ⊨ φ` and `𝔐̄ ⊨ ρ(φ)` have the same truth set.
pub fn rho_correspondence_check(m: &ContextModel, f: &Formula) -> Result<bool> {
    let lhs = truth_set(m, f)?;
    let rhs = truth_set(&complement_model(m), &translate_rho(f)?)?;
    Ok(lhs == rhs)
}

/// Index maps on objects and attributes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSortedMap {
    pub objects: Vec<usize>,
    pub attributes: Vec<usize>,
}

impl TwoSortedMap {
    pub fn identity(g: usize, m: usize) -> Self {
        TwoSortedMap {
            objects: (0..g).collect(),
            attributes: (0..m).collect(),
        }
    }

    pub fn is_surjective(&self, dst: &FormalContext) -> bool {
        let hit = |img: &[usize], n: usize| BitSet::from_indices(n, img.iter().copied()).is_full();
        hit(&self.objects, dst.n_objects()) && hit(&self.attributes, dst.n_attributes())
    }
}

fn relations(g: &GeneralizedModel) -> [(&'static str, &FormalContext); 2] {
    [("I", g.i()), ("J", g.j())]
}

/// The first failed condition, or `None` for a bounded morphism. Back
/// conditions are checked from both sorts.
pub fn bounded_morphism_violation(
    f: &TwoSortedMap,
    src: &GeneralizedModel,
    dst: &GeneralizedModel,
) -> Result<Option<String>> {
    let (s, d) = (src.i(), dst.i());
    if f.objects.len() != s.n_objects() || f.attributes.len() != s.n_attributes() {
        return Err(Error::Malformed("map is not total on the source".into()));
    }
    if f.objects.iter().any(|&x| x >= d.n_objects())
        || f.attributes.iter().any(|&x| x >= d.n_attributes())
    {
        return Err(Error::Malformed("map points outside the target".into()));
    }
    for sort in [Sort::S1, Sort::S2] {
        let names: BTreeSet<&String> = src
            .valuation()
            .map(sort)
            .keys()
            .chain(dst.valuation().map(sort).keys())
            .collect();
        let (img, ids) = match sort {
            Sort::S1 => (&f.objects, s.objects()),
            Sort::S2 => (&f.attributes, s.attributes()),
        };
        for name in names {
            let has = |m: &GeneralizedModel, w: usize| {
                m.valuation().get(name, sort).is_some_and(|b| b.contains(w))
            };
            if let Some(w) = (0..img.len()).find(|&w| has(src, w) != has(dst, img[w])) {
                return Ok(Some(format!(
                    "atom {name}@{} differs at `{}`",
                    sort.digit(),
                    ids[w]
                )));
            }
        }
    }
    for ((name, r), (_, r2)) in relations(src).into_iter().zip(relations(dst)) {
        for (g, m) in r.pairs() {
            if !r2.incident(f.objects[g], f.attributes[m]) {
                return Ok(Some(format!(
                    "forth fails for {name} at (`{}`, `{}`)",
                    s.objects()[g],
                    s.attributes()[m]
                )));
            }
        }
        for g in 0..s.n_objects() {
            for m2 in r2.row(f.objects[g]).iter() {
                if !r.row(g).iter().any(|m| f.attributes[m] == m2) {
                    return Ok(Some(format!(
                        "back fails for {name} at `{}` towards `{}`",
                        s.objects()[g],
                        d.attributes()[m2]
                    )));
                }
            }
        }
        for m in 0..s.n_attributes() {
            for g2 in r2.col(f.attributes[m]).iter() {
                if !r.col(m).iter().any(|g| f.objects[g] == g2) {
                    return Ok(Some(format!(
                        "back fails for {name} at `{}` towards `{}`",
                        s.attributes()[m],
                        d.objects()[g2]
                    )));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_bounded_morphism(
    f: &TwoSortedMap,
    src: &GeneralizedModel,
    dst: &GeneralizedModel,
) -> Result<bool> {
    Ok(bounded_morphism_violation(f, src, dst)?.is_none())
}

/// Doubles both universes so that `I` and `J` become disjoint. Returns the
/// new model and the fold `x, x′ ↦ x` back onto the input.
pub fn disjointify(g: &GeneralizedModel) -> Result<(GeneralizedModel, TwoSortedMap)> {
    let k = g.i();
    if let Some(id) = k
        .objects()
        .iter()
        .chain(k.attributes())
        .find(|id| id.contains(PRIME))
    {
        return Err(Error::Malformed(format!(
            "id `{id}` contains the reserved marker `{PRIME}`"
        )));
    }
    let (ng, nm) = (k.n_objects(), k.n_attributes());
    let double = |ids: &[String]| {
        ids.iter()
            .cloned()
            .chain(ids.iter().map(|s| format!("{s}{PRIME}")))
            .collect::<Vec<_>>()
    };
    let mut ri = vec![BitSet::new(2 * nm); 2 * ng];
    let mut rj = vec![BitSet::new(2 * nm); 2 * ng];
    for x in 0..ng {
        for y in 0..nm {
            let (xp, yp) = (x + ng, y + nm);
            match (k.incident(x, y), g.j().incident(x, y)) {
                (true, true) => {
                    ri[x].insert(yp);
                    ri[xp].insert(y);
                    rj[x].insert(y);
                    rj[xp].insert(yp);
                }
                (true, false) => {
                    for (a, b) in [(x, y), (x, yp), (xp, y), (xp, yp)] {
                        ri[a].insert(b);
                    }
                }
                (false, true) => {
                    for (a, b) in [(x, y), (x, yp), (xp, y), (xp, yp)] {
                        rj[a].insert(b);
                    }
                }
                (false, false) => {
                    return Err(Error::Malformed(
                        "input is not a generalized model: I ∪ J is not total".into(),
                    ))
                }
            }
        }
    }
    let (objs, attrs) = (double(k.objects()), double(k.attributes()));
    let i2 = FormalContext::from_rows(objs.clone(), attrs.clone(), ri)?;
    let j2 = FormalContext::from_rows(objs, attrs, rj)?;
    let mut v = Valuation::new();
    for sort in [Sort::S1, Sort::S2] {
        let n = k.universe_len(sort);
        for (name, set) in g.valuation().map(sort) {
            let doubled = BitSet::from_indices(2 * n, set.iter().chain(set.iter().map(|x| x + n)));
            v.set(name, sort, doubled);
        }
    }
    let fold = TwoSortedMap {
        objects: (0..2 * ng).map(|x| x % ng).collect(),
        attributes: (0..2 * nm).map(|y| y % nm).collect(),
    };
    Ok((GeneralizedModel::new(i2, j2, v)?, fold))
}

/// Result of restricting a model to the part reachable from one world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodel {
    pub model: GeneralizedModel,
    /// Original indices of the kept objects and attributes, ascending.
    pub objects: Vec<usize>,
    pub attributes: Vec<usize>,
    /// Kept `(object, attribute)` pairs related by neither `I` nor `J`.
    pub totality_violations: Vec<(String, String)>,
}

/// Closure of `w` under zig-zags along `I ∪ J`, restricted relations and
/// valuation. `w` is always kept, even when it has no neighbours.
pub fn generated_submodel(g: &GeneralizedModel, world: &str) -> Result<Submodel> {
    let k = g.i();
    let (sort, w) = k.world(world)?;
    let r = |x: usize| k.row(x).union(g.j().row(x));
    let rc = |y: usize| k.col(y).union(g.j().col(y));
    let mut objs = BitSet::new(k.n_objects());
    let mut attrs = BitSet::new(k.n_attributes());
    let (mut todo_g, mut todo_m) = (Vec::new(), Vec::new());
    match sort {
        Sort::S1 => {
            objs.insert(w);
            todo_g.push(w);
        }
        Sort::S2 => {
            attrs.insert(w);
            todo_m.push(w);
        }
    }
    while !todo_g.is_empty() || !todo_m.is_empty() {
        while let Some(x) = todo_g.pop() {
            for y in r(x).difference(&attrs).iter() {
                attrs.insert(y);
                todo_m.push(y);
            }
        }
        while let Some(y) = todo_m.pop() {
            for x in rc(y).difference(&objs).iter() {
                objs.insert(x);
                todo_g.push(x);
            }
        }
    }
    let (ov, av) = (objs.to_vec(), attrs.to_vec());
    let restrict = |c: &FormalContext| {
        let rows = ov
            .iter()
            .map(|&x| {
                BitSet::from_indices(av.len(), (0..av.len()).filter(|&j| c.incident(x, av[j])))
            })
            .collect();
        let names = |ids: &[String], ix: &[usize]| ix.iter().map(|&i| ids[i].clone()).collect();
        FormalContext::from_rows(names(k.objects(), &ov), names(k.attributes(), &av), rows)
    };
    let (i2, j2) = (restrict(k)?, restrict(g.j())?);
    let mut v = Valuation::new();
    for sort in [Sort::S1, Sort::S2] {
        let keep = if sort == Sort::S1 { &ov } else { &av };
        for (name, set) in g.valuation().map(sort) {
            v.set(
                name,
                sort,
                BitSet::from_indices(
                    keep.len(),
                    (0..keep.len()).filter(|&i| set.contains(keep[i])),
                ),
            );
        }
    }
    let model = GeneralizedModel::new_unchecked(i2, j2, v)?;
    let mut totality_violations = Vec::new();
    for (a, &x) in ov.iter().enumerate() {
        for (b, &y) in av.iter().enumerate() {
            if !model.i().incident(a, b) && !model.j().incident(a, b) {
                totality_violations.push((k.objects()[x].clone(), k.attributes()[y].clone()));
            }
        }
    }
    Ok(Submodel {
        model,
        objects: ov,
        attributes: av,
        totality_violations,
    })
}
