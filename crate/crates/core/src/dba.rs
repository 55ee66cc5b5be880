//! Finite double Boolean algebras: axiom audit, purity and full
//! contextuality, Boolean parts, and the construction of a dBa from two
//! Boolean algebras with retraction/section pairs.

use serde::Serialize;

use crate::error::{Error, Result};

/// Explicit operation tables over the carrier `0..names.len()`.
/// Binary tables are row-major: `meet[x * n + y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub names: Vec<String>,
    pub meet: Vec<usize>,
    pub join: Vec<usize>,
    pub neg: Vec<usize>,
    pub opp: Vec<usize>,
    pub top: usize,
    pub bot: usize,
}

impl FiniteAlgebra {
    /// Tabulates the given operations.
    pub fn from_fns(
        names: Vec<String>,
        meet: impl Fn(usize, usize) -> usize,
        join: impl Fn(usize, usize) -> usize,
        neg: impl Fn(usize) -> usize,
        opp: impl Fn(usize) -> usize,
        top: usize,
        bot: usize,
    ) -> Self {
        let n = names.len();
        let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));
        FiniteAlgebra {
            meet: pairs().map(|(x, y)| meet(x, y)).collect(),
            join: pairs().map(|(x, y)| join(x, y)).collect(),
            neg: (0..n).map(&neg).collect(),
            opp: (0..n).map(&opp).collect(),
            names,
            top,
            bot,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Tables must be total and point into the carrier.
    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        if n == 0 {
            return Err(Error::Malformed("empty carrier".into()));
        }
        if self.meet.len() != n * n
            || self.join.len() != n * n
            || self.neg.len() != n
            || self.opp.len() != n
        {
            return Err(Error::Malformed(
                "operation table has the wrong size".into(),
            ));
        }
        let all = self
            .meet
            .iter()
            .chain(&self.join)
            .chain(&self.neg)
            .chain(&self.opp);
        if all.chain([&self.top, &self.bot]).any(|&v| v >= n) {
            return Err(Error::Malformed(
                "operation table points outside the carrier".into(),
            ));
        }
        Ok(())
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size() + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    pub fn opp(&self, x: usize) -> usize {
        self.opp[x]
    }

    /// `x ∨̄ y = ¬̄(¬̄x ⊓ ¬̄y)`
    pub fn vee(&self, x: usize, y: usize) -> usize {
        self.neg(self.meet(self.neg(x), self.neg(y)))
    }

    /// `x ∧̄ y = ⌟(⌟x ⊔ ⌟y)`
    pub fn wedge(&self, x: usize, y: usize) -> usize {
        self.opp(self.join(self.opp(x), self.opp(y)))
    }

    pub fn is_meet_idempotent(&self, x: usize) -> bool {
        self.meet(x, x) == x
    }

    pub fn is_join_idempotent(&self, x: usize) -> bool {
        self.join(x, x) == x
    }

    /// Single-element algebra.
    pub fn trivial() -> Self {
        Self::from_fns(vec!["0".into()], |_, _| 0, |_, _| 0, |_| 0, |_| 0, 0, 0)
    }
}

type Law = fn(&FiniteAlgebra, usize, usize, usize) -> bool;

const AXIOMS: [(&str, usize, Law); 23] = [
    ("1a", 2, |a, x, y, _| {
        a.meet(a.meet(x, x), y) == a.meet(x, y)
    }),
    ("1b", 2, |a, x, y, _| {
        a.join(a.join(x, x), y) == a.join(x, y)
    }),
    ("2a", 2, |a, x, y, _| a.meet(x, y) == a.meet(y, x)),
    ("2b", 2, |a, x, y, _| a.join(x, y) == a.join(y, x)),
    ("3a", 1, |a, x, _, _| a.neg(a.meet(x, x)) == a.neg(x)),
    ("3b", 1, |a, x, _, _| a.opp(a.join(x, x)) == a.opp(x)),
    ("4a", 2, |a, x, y, _| {
        a.meet(x, a.join(x, y)) == a.meet(x, x)
    }),
    ("4b", 2, |a, x, y, _| {
        a.join(x, a.meet(x, y)) == a.join(x, x)
    }),
    ("5a", 3, |a, x, y, z| {
        a.meet(x, a.vee(y, z)) == a.vee(a.meet(x, y), a.meet(x, z))
    }),
    ("5b", 3, |a, x, y, z| {
        a.join(x, a.wedge(y, z)) == a.wedge(a.join(x, y), a.join(x, z))
    }),
    ("6a", 2, |a, x, y, _| a.meet(x, a.vee(x, y)) == a.meet(x, x)),
    ("6b", 2, |a, x, y, _| {
        a.join(x, a.wedge(x, y)) == a.join(x, x)
    }),
    ("7a", 2, |a, x, y, _| {
        a.neg(a.neg(a.meet(x, y))) == a.meet(x, y)
    }),
    ("7b", 2, |a, x, y, _| {
        a.opp(a.opp(a.join(x, y))) == a.join(x, y)
    }),
    ("8a", 1, |a, x, _, _| a.meet(x, a.neg(x)) == a.bot),
    ("8b", 1, |a, x, _, _| a.join(x, a.opp(x)) == a.top),
    ("9a", 0, |a, _, _, _| a.neg(a.top) == a.bot),
    ("9b", 0, |a, _, _, _| a.opp(a.bot) == a.top),
    ("10a", 3, |a, x, y, z| {
        a.meet(x, a.meet(y, z)) == a.meet(a.meet(x, y), z)
    }),
    ("10b", 3, |a, x, y, z| {
        a.join(x, a.join(y, z)) == a.join(a.join(x, y), z)
    }),
    ("11a", 0, |a, _, _, _| a.neg(a.bot) == a.meet(a.top, a.top)),
    ("11b", 0, |a, _, _, _| a.opp(a.top) == a.join(a.bot, a.bot)),
    ("12", 1, |a, x, _, _| {
        let m = a.meet(x, x);
        let j = a.join(x, x);
        a.join(m, m) == a.meet(j, j)
    }),
];

/// Names of the 23 axioms in audit order.
pub fn axiom_names() -> Vec<&'static str> {
    AXIOMS.iter().map(|(n, _, _)| *n).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    /// First failing assignment of the axiom's variables, in carrier order.
    pub witness: Option<Vec<usize>>,
}

impl AxiomResult {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DbaReport {
    pub axioms: Vec<AxiomResult>,
}

impl DbaReport {
    pub fn passes(&self) -> bool {
        self.axioms.iter().all(AxiomResult::holds)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.axioms
            .iter()
            .filter(|a| !a.holds())
            .map(|a| a.axiom)
            .collect()
    }
}

fn assignments(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(arity as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0; arity];
        for slot in v.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        v
    })
}

/// Audits every axiom; tables must already be valid.
pub fn check_dba(alg: &FiniteAlgebra) -> DbaReport {
    let n = alg.size();
    let axioms = AXIOMS
        .iter()
        .map(|&(name, arity, law)| {
            let witness = assignments(n, arity).find(|v| {
                let at = |i: usize| v.get(i).copied().unwrap_or(0);
                !law(alg, at(0), at(1), at(2))
            });
            AxiomResult {
                axiom: name,
                witness,
            }
        })
        .collect();
    DbaReport { axioms }
}

/// `None` when every element is ⊓- or ⊔-idempotent, else the first that is neither.
pub fn purity_witness(alg: &FiniteAlgebra) -> Option<usize> {
    (0..alg.size()).find(|&x| !alg.is_meet_idempotent(x) && !alg.is_join_idempotent(x))
}

pub fn is_pure(alg: &FiniteAlgebra) -> bool {
    purity_witness(alg).is_none()
}

/// A compatible pair `(y, x)` with `y ∈ D⊓`, `x ∈ D⊔`, `y⊔y = x⊓x` and the
/// number of `z` with `z⊓z = y`, `z⊔z = x` (which should be exactly one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContextualityWitness {
    pub y: usize,
    pub x: usize,
    pub count: usize,
}

pub fn full_contextuality_witness(alg: &FiniteAlgebra) -> Option<ContextualityWitness> {
    let n = alg.size();
    let dm: Vec<usize> = (0..n).filter(|&y| alg.is_meet_idempotent(y)).collect();
    let dj: Vec<usize> = (0..n).filter(|&x| alg.is_join_idempotent(x)).collect();
    for &y in &dm {
        for &x in &dj {
            if alg.join(y, y) != alg.meet(x, x) {
                continue;
            }
            let count = (0..n)
                .filter(|&z| alg.meet(z, z) == y && alg.join(z, z) == x)
                .count();
            if count != 1 {
                return Some(ContextualityWitness { y, x, count });
            }
        }
    }
    None
}

pub fn is_fully_contextual(alg: &FiniteAlgebra) -> bool {
    full_contextuality_witness(alg).is_none()
}

/// A finite Boolean algebra on `0..size` given by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAlgebra {
    pub size: usize,
    pub meet: Vec<usize>,
    pub join: Vec<usize>,
    pub neg: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl BooleanAlgebra {
    pub fn from_fns(
        size: usize,
        meet: impl Fn(usize, usize) -> usize,
        join: impl Fn(usize, usize) -> usize,
        neg: impl Fn(usize) -> usize,
        zero: usize,
        one: usize,
    ) -> Self {
        let pairs = (0..size).flat_map(|x| (0..size).map(move |y| (x, y)));
        let (meet, join) = pairs.map(|(x, y)| (meet(x, y), join(x, y))).unzip();
        BooleanAlgebra {
            size,
            meet,
            join,
            neg: (0..size).map(neg).collect(),
            zero,
            one,
        }
    }

    /// Powerset of an `n`-element set; element `i` is the subset with bitmask `i`.
    pub fn powerset(n: usize) -> Self {
        let full = (1usize << n) - 1;
        Self::from_fns(1 << n, |x, y| x & y, |x, y| x | y, |x| full & !x, 0, full)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    /// The same algebra read upside down: meet and join, zero and one swapped.
    pub fn dual(&self) -> Self {
        BooleanAlgebra {
            size: self.size,
            meet: self.join.clone(),
            join: self.meet.clone(),
            neg: self.neg.clone(),
            zero: self.one,
            one: self.zero,
        }
    }

    /// Boolean-algebra laws, each with its first failing assignment.
    pub fn audit(&self) -> Vec<(&'static str, Option<Vec<usize>>)> {
        type BLaw = fn(&BooleanAlgebra, usize, usize, usize) -> bool;
        const LAWS: [(&str, usize, BLaw); 12] = [
            ("meet_commutative", 2, |b, x, y, _| {
                b.meet(x, y) == b.meet(y, x)
            }),
            ("join_commutative", 2, |b, x, y, _| {
                b.join(x, y) == b.join(y, x)
            }),
            ("meet_associative", 3, |b, x, y, z| {
                b.meet(x, b.meet(y, z)) == b.meet(b.meet(x, y), z)
            }),
            ("join_associative", 3, |b, x, y, z| {
                b.join(x, b.join(y, z)) == b.join(b.join(x, y), z)
            }),
            ("meet_absorption", 2, |b, x, y, _| {
                b.meet(x, b.join(x, y)) == x
            }),
            ("join_absorption", 2, |b, x, y, _| {
                b.join(x, b.meet(x, y)) == x
            }),
            ("meet_distributive", 3, |b, x, y, z| {
                b.meet(x, b.join(y, z)) == b.join(b.meet(x, y), b.meet(x, z))
            }),
            ("join_distributive", 3, |b, x, y, z| {
                b.join(x, b.meet(y, z)) == b.meet(b.join(x, y), b.join(x, z))
            }),
            ("meet_identity", 1, |b, x, _, _| b.meet(x, b.one) == x),
            ("join_identity", 1, |b, x, _, _| b.join(x, b.zero) == x),
            ("meet_complement", 1, |b, x, _, _| {
                b.meet(x, b.neg(x)) == b.zero
            }),
            ("join_complement", 1, |b, x, _, _| {
                b.join(x, b.neg(x)) == b.one
            }),
        ];
        LAWS.iter()
            .map(|&(name, arity, law)| {
                let w = assignments(self.size, arity).find(|v| {
                    let at = |i: usize| v.get(i).copied().unwrap_or(0);
                    !law(self, at(0), at(1), at(2))
                });
                (name, w)
            })
            .collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.audit().iter().all(|(_, w)| w.is_none())
    }
}

/// `D⊓` or `D⊔` as a Boolean algebra over positions in `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanPart {
    /// Elements of the dBa, ascending.
    pub members: Vec<usize>,
    pub algebra: BooleanAlgebra,
}

impl BooleanPart {
    fn extract(
        what: &str,
        members: Vec<usize>,
        meet: impl Fn(usize, usize) -> usize,
        join: impl Fn(usize, usize) -> usize,
        neg: impl Fn(usize) -> usize,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let pos = |x: usize, op: &str| {
            members.binary_search(&x).map_err(|_| {
                Error::Malformed(format!(
                    "{what} is not closed under {op}: element {x} falls outside"
                ))
            })
        };
        let k = members.len();
        let mut mt = Vec::with_capacity(k * k);
        let mut jt = Vec::with_capacity(k * k);
        for &x in &members {
            for &y in &members {
                mt.push(pos(meet(x, y), "meet")?);
                jt.push(pos(join(x, y), "join")?);
            }
        }
        let nt = members
            .iter()
            .map(|&x| pos(neg(x), "negation"))
            .collect::<Result<_>>()?;
        let algebra = BooleanAlgebra {
            size: k,
            meet: mt,
            join: jt,
            neg: nt,
            zero: pos(zero, "zero")?,
            one: pos(one, "one")?,
        };
        Ok(BooleanPart { members, algebra })
    }
}

/// `D⊓ = (D⊓, ⊓, ∨̄, ¬̄, ⊥, ¬̄⊥)` and `D⊔ = (D⊔, ∧̄, ⊔, ⌟, ⌟⊤, ⊤)`.
pub fn boolean_parts(alg: &FiniteAlgebra) -> Result<(BooleanPart, BooleanPart)> {
    let n = alg.size();
    let dm = (0..n).filter(|&x| alg.is_meet_idempotent(x)).collect();
    let dj = (0..n).filter(|&x| alg.is_join_idempotent(x)).collect();
    let left = BooleanPart::extract(
        "D⊓",
        dm,
        |x, y| alg.meet(x, y),
        |x, y| alg.vee(x, y),
        |x| alg.neg(x),
        alg.bot,
        alg.neg(alg.bot),
    )?;
    let right = BooleanPart::extract(
        "D⊔",
        dj,
        |x, y| alg.wedge(x, y),
        |x, y| alg.join(x, y),
        |x| alg.opp(x),
        alg.opp(alg.top),
        alg.top,
    )?;
    Ok((left, right))
}

/// Two Boolean algebras `B`, `B′` and maps `r: A → B`, `e: B → A`,
/// `r′: A → B′`, `e′: B′ → A` over a carrier `A = 0..names.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointMaps {
    pub names: Vec<String>,
    pub b: BooleanAlgebra,
    pub b2: BooleanAlgebra,
    pub r: Vec<usize>,
    pub e: Vec<usize>,
    pub r2: Vec<usize>,
    pub e2: Vec<usize>,
}

impl AdjointMaps {
    pub fn a_size(&self) -> usize {
        self.names.len()
    }

    /// Map shapes, ranges, and `r∘e = id`, `r′∘e′ = id`.
    pub fn validate(&self) -> Result<()> {
        let a = self.a_size();
        let shape = self.r.len() == a
            && self.r2.len() == a
            && self.e.len() == self.b.size
            && self.e2.len() == self.b2.size;
        if !shape {
            return Err(Error::Malformed("map has the wrong domain size".into()));
        }
        let in_range = self.r.iter().all(|&v| v < self.b.size)
            && self.r2.iter().all(|&v| v < self.b2.size)
            && self.e.iter().chain(&self.e2).all(|&v| v < a);
        if !in_range {
            return Err(Error::Malformed("map points outside its codomain".into()));
        }
        if let Some(x) = (0..self.b.size).find(|&x| self.r[self.e[x]] != x) {
            return Err(Error::Malformed(format!("r∘e is not the identity at {x}")));
        }
        if let Some(x) = (0..self.b2.size).find(|&x| self.r2[self.e2[x]] != x) {
            return Err(Error::Malformed(format!(
                "r′∘e′ is not the identity at {x}"
            )));
        }
        Ok(())
    }
}

/// `x⊓y = e(r x ∧ r y)`, `x⊔y = e′(r′x ∨′ r′y)`, `¬̄x = e(−r x)`,
/// `⌟x = e′(−′r′x)`, `⊤ = e′(1′)`, `⊥ = e(0)`.
pub fn build_from_booleans(maps: &AdjointMaps) -> Result<FiniteAlgebra> {
    maps.validate()?;
    let (b, b2) = (&maps.b, &maps.b2);
    let (r, e, r2, e2) = (&maps.r, &maps.e, &maps.r2, &maps.e2);
    Ok(FiniteAlgebra::from_fns(
        maps.names.clone(),
        |x, y| e[b.meet(r[x], r[y])],
        |x, y| e2[b2.join(r2[x], r2[y])],
        |x| e[b.neg(r[x])],
        |x| e2[b2.neg(r2[x])],
        e2[b2.one],
        e[b.zero],
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub witness: Option<Vec<usize>>,
}

impl Condition {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Conditions (a), (b) (two halves), (c) and (d) of the characterization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    pub conditions: Vec<Condition>,
}

impl CharacterizationReport {
    fn get(&self, name: &str) -> bool {
        self.conditions
            .iter()
            .filter(|c| c.name.starts_with(name))
            .all(Condition::holds)
    }

    /// (a)–(c): the built algebra should be a dBa exactly when these hold.
    pub fn dba_conditions(&self) -> bool {
        self.get("a") && self.get("b") && self.get("c")
    }

    /// (a)–(d): the built algebra should be a pure dBa exactly when these hold.
    pub fn pure_conditions(&self) -> bool {
        self.dba_conditions() && self.get("d")
    }
}

pub fn check_characterization(maps: &AdjointMaps) -> Result<CharacterizationReport> {
    maps.validate()?;
    let (b, b2) = (&maps.b, &maps.b2);
    let (r, e, r2, e2) = (&maps.r, &maps.e, &maps.r2, &maps.e2);
    let n = maps.a_size();
    let first1 = |p: &dyn Fn(usize) -> bool| (0..n).find(|&x| !p(x)).map(|x| vec![x]);
    let first2 = |p: &dyn Fn(usize, usize) -> bool| assignments(n, 2).find(|v| !p(v[0], v[1]));
    let a = first1(&|x| e[r[e2[r2[x]]]] == e2[r2[e[r[x]]]]);
    let b_left = first2(&|x, y| e[b.meet(r[x], r[e2[b2.join(r2[x], r2[y])]])] == e[r[x]]);
    let b_right = first2(&|x, y| e2[b2.join(r2[x], r2[e[b.meet(r[x], r[y])]])] == e2[r2[x]]);
    let c_left = (r[e2[b2.one]] != b.one).then(Vec::new);
    let c_right = (r2[e[b.zero]] != b2.zero).then(Vec::new);
    let d = first1(&|x| e[r[x]] == x || e2[r2[x]] == x);
    let conditions = vec![
        Condition {
            name: "a",
            witness: a,
        },
        Condition {
            name: "b.1",
            witness: b_left,
        },
        Condition {
            name: "b.2",
            witness: b_right,
        },
        Condition {
            name: "c.1",
            witness: c_left,
        },
        Condition {
            name: "c.2",
            witness: c_right,
        },
        Condition {
            name: "d",
            witness: d,
        },
    ];
    Ok(CharacterizationReport { conditions })
}

/// `B = D⊓`, `B′ = D⊔`, `r(x) = x⊓x`, `r′(x) = x⊔x`, `e` and `e′` inclusions.
pub fn canonical_maps_from_dba(alg: &FiniteAlgebra) -> Result<AdjointMaps> {
    let (left, right) = boolean_parts(alg)?;
    let pos = |members: &[usize], x: usize| {
        members
            .binary_search(&x)
            .expect("idempotent by (1a)/(2a) or (1b)/(2b)")
    };
    let n = alg.size();
    let r = (0..n).map(|x| pos(&left.members, alg.meet(x, x))).collect();
    let r2 = (0..n)
        .map(|x| pos(&right.members, alg.join(x, x)))
        .collect();
    let maps = AdjointMaps {
        names: alg.names.clone(),
        b: left.algebra,
        b2: right.algebra,
        r,
        e: left.members,
        r2,
        e2: right.members,
    };
    maps.validate()?;
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-element Boolean algebra as a dBa: ⊓ = ∧, ⊔ = ∨, both negations classical.
    fn two() -> FiniteAlgebra {
        FiniteAlgebra::from_fns(
            vec!["0".into(), "1".into()],
            |x, y| x & y,
            |x, y| x | y,
            |x| 1 - x,
            |x| 1 - x,
            1,
            0,
        )
    }

    #[test]
    fn trivial_algebra_passes_everything() {
        let t = FiniteAlgebra::trivial();
        assert!(check_dba(&t).passes());
        assert!(is_pure(&t));
        assert!(is_fully_contextual(&t));
        let maps = canonical_maps_from_dba(&t).unwrap();
        assert_eq!(build_from_booleans(&maps).unwrap(), t);
    }

    #[test]
    fn boolean_algebra_as_dba() {
        let d = two();
        assert!(check_dba(&d).passes());
        let maps = AdjointMaps {
            names: d.names.clone(),
            b: BooleanAlgebra::powerset(1),
            b2: BooleanAlgebra::powerset(1),
            r: vec![0, 1],
            e: vec![0, 1],
            r2: vec![0, 1],
            e2: vec![0, 1],
        };
        assert_eq!(build_from_booleans(&maps).unwrap(), d);
        let rep = check_characterization(&maps).unwrap();
        assert!(rep.pure_conditions(), "{rep:?}");
    }

    #[test]
    fn corrupted_cell_is_caught() {
        let mut d = two();
        d.meet[1] = 1; // 0 ⊓ 1 := 1
        let rep = check_dba(&d);
        assert!(!rep.passes());
        let f = rep.failing();
        assert!(f.contains(&"2a"), "{f:?}");
        let w = rep
            .axioms
            .iter()
            .find(|a| a.axiom == "2a")
            .unwrap()
            .witness
            .clone()
            .unwrap();
        assert_eq!(w, vec![0, 1]);
    }

    #[test]
    fn powerset_is_boolean() {
        for n in 0..4 {
            assert!(BooleanAlgebra::powerset(n).is_boolean());
            assert!(BooleanAlgebra::powerset(n).dual().is_boolean());
        }
        let mut b = BooleanAlgebra::powerset(2);
        b.neg[0] = 0;
        assert!(!b.is_boolean());
    }

    #[test]
    fn validate_rejects_broken_maps() {
        let d = two();
        let mut maps = canonical_maps_from_dba(&d).unwrap();
        maps.r[maps.e[0]] = 1;
        assert!(build_from_booleans(&maps).is_err());
        assert!(d.validate().is_ok());
        let mut bad = d.clone();
        bad.neg[0] = 7;
        assert!(bad.validate().is_err());
    }
}
