//! Seeded random contexts, models and formulas for property tests and sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::context::{FormalContext, Sort};
use crate::formula::{Base, Dir, Formula, Modality, Style, Weight};
use crate::semantics::{ContextModel, GeneralizedModel, Valuation};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Atom names used by the generators: `p q r` for objects, `a b c` for attributes.
pub fn atom_names(sort: Sort) -> &'static [&'static str] {
    match sort {
        Sort::S1 => &["p", "q", "r"],
        Sort::S2 => &["a", "b", "c"],
    }
}

pub fn random_set(rng: &mut impl Rng, len: usize, density: f64) -> BitSet {
    BitSet::from_indices(len, (0..len).filter(|_| rng.gen_bool(density)))
}

pub fn random_context(rng: &mut impl Rng, g: usize, m: usize, density: f64) -> FormalContext {
    let matrix: Vec<Vec<bool>> = (0..g)
        .map(|_| (0..m).map(|_| rng.gen_bool(density)).collect())
        .collect();
    FormalContext::from_matrix(&matrix, m)
}

/// Values for the first `per_sort` atoms of each sort.
pub fn random_valuation(rng: &mut impl Rng, k: &FormalContext, per_sort: usize) -> Valuation {
    let mut v = Valuation::new();
    for sort in [Sort::S1, Sort::S2] {
        for name in &atom_names(sort)[..per_sort] {
            let set = random_set(rng, k.universe_len(sort), 0.5);
            v.set(name, sort, set);
        }
    }
    v
}

/// Random context model with `1..=max_g` objects and `1..=max_m` attributes.
pub fn random_context_model(rng: &mut impl Rng, max_g: usize, max_m: usize) -> ContextModel {
    let g = rng.gen_range(1..=max_g);
    let m = rng.gen_range(1..=max_m);
    let density = rng.gen_range(0.2..0.8);
    let k = random_context(rng, g, m, density);
    let v = random_valuation(rng, &k, 3);
    ContextModel::new(k, v).expect("valuation fits")
}

/// Random generalized model: `J` is `Ī` plus a random overlap with `I`.
pub fn random_generalized_model(
    rng: &mut impl Rng,
    max_g: usize,
    max_m: usize,
) -> GeneralizedModel {
    let g = rng.gen_range(1..=max_g);
    let m = rng.gen_range(1..=max_m);
    let density = rng.gen_range(0.2..0.8);
    let i = random_context(rng, g, m, density);
    let overlap = rng.gen_range(0.0..0.6);
    let rows = (0..g)
        .map(|x| {
            i.row(x)
                .complement()
                .union(&random_set(rng, m, overlap).intersection(i.row(x)))
        })
        .collect();
    let j = FormalContext::from_rows(i.objects().to_vec(), i.attributes().to_vec(), rows)
        .expect("same universes");
    let v = random_valuation(rng, &i, 3);
    GeneralizedModel::new(i, j, v).expect("I ∪ J is total by construction")
}

/// Which modalities the formula generator may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// Windows over `I` only.
    Kf,
    /// Boxes and diamonds over `I` only.
    Kb,
    /// Every ungraded, unweighted modality.
    Bm,
    /// Bm plus grades (including exact counts).
    Graded,
    /// Bm plus weights.
    Weighted,
}

#[derive(Debug, Clone, Copy)]
pub struct FormulaGen {
    pub fragment: Fragment,
    pub max_depth: usize,
    pub atoms_per_sort: usize,
}

const WEIGHTS: [(u64, u64); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

impl FormulaGen {
    pub fn new(fragment: Fragment, max_depth: usize) -> Self {
        FormulaGen {
            fragment,
            max_depth,
            atoms_per_sort: 3,
        }
    }

    pub fn formula(&self, rng: &mut impl Rng, sort: Sort) -> Formula {
        self.gen(rng, sort, self.max_depth)
    }

    fn gen(&self, rng: &mut impl Rng, sort: Sort, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return match rng.gen_range(0..10) {
                0 => Formula::True(sort),
                1 => Formula::False(sort),
                _ => {
                    let names = &atom_names(sort)[..self.atoms_per_sort];
                    Formula::atom(names.choose(rng).expect("non-empty"), sort)
                }
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..9) {
            0 => self.gen(rng, sort, d).not(),
            1 => self.gen(rng, sort, d).and(self.gen(rng, sort, d)),
            2 => self.gen(rng, sort, d).or(self.gen(rng, sort, d)),
            3 => self.gen(rng, sort, d).implies(self.gen(rng, sort, d)),
            4 => self.gen(rng, sort, d).iff(self.gen(rng, sort, d)),
            _ => {
                let dir = if sort == Sort::S2 { Dir::O } else { Dir::P };
                Formula::modal(self.modality(rng, dir), self.gen(rng, dir.input(), d))
            }
        }
    }

    pub fn modality(&self, rng: &mut impl Rng, dir: Dir) -> Modality {
        let styles = [Style::Box, Style::Diamond, Style::Window, Style::WindowDual];
        let mut m = match self.fragment {
            Fragment::Kf => return Modality::window(dir),
            Fragment::Kb => {
                return Modality::new(
                    dir,
                    *[Style::Box, Style::Diamond].choose(rng).expect("non-empty"),
                )
            }
            _ => Modality::new(dir, *styles.choose(rng).expect("non-empty")),
        };
        if rng.gen_bool(0.3) {
            m = m.overline();
        }
        match self.fragment {
            Fragment::Graded if rng.gen_bool(0.6) => {
                if m.style == Style::Diamond && rng.gen_bool(0.3) {
                    m = m.exactly(rng.gen_range(1..=3));
                } else {
                    m = m.graded(rng.gen_range(0..=3));
                }
            }
            Fragment::Weighted if rng.gen_bool(0.6) => {
                let (n, d) = *WEIGHTS.choose(rng).expect("non-empty");
                m = m.weighted(Weight::new(n, d));
            }
            _ => {}
        }
        m
    }
}

/// Seeded batch of plain BM formulas (depth ≤ 4, three atoms per sort), split
/// evenly between the sorts.
pub fn fuzz_suite(seed: u64, count: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    let g = FormulaGen::new(Fragment::Bm, 4);
    (0..count)
        .map(|i| g.formula(&mut r, if i % 2 == 0 { Sort::S1 } else { Sort::S2 }))
        .collect()
}

/// True for every modality of the fragment it was generated from.
pub fn in_fragment(f: &Formula, frag: Fragment) -> bool {
    f.modalities().iter().all(|m| match frag {
        Fragment::Kf => m.is_plain() && m.base == Base::I && m.style == Style::Window,
        Fragment::Kb => {
            m.is_plain() && m.base == Base::I && matches!(m.style, Style::Box | Style::Diamond)
        }
        Fragment::Bm => m.is_plain(),
        Fragment::Graded => m.weight.is_none(),
        Fragment::Weighted => m.grade.is_none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_formulas_are_well_sorted_and_in_fragment() {
        let mut r = rng(7);
        for frag in [
            Fragment::Kf,
            Fragment::Kb,
            Fragment::Bm,
            Fragment::Graded,
            Fragment::Weighted,
        ] {
            let g = FormulaGen::new(frag, 4);
            for i in 0..200 {
                let s = if i % 2 == 0 { Sort::S1 } else { Sort::S2 };
                let f = g.formula(&mut r, s);
                assert_eq!(f.sort().unwrap(), s, "{f}");
                assert!(f.modal_depth() <= 4);
                assert!(in_fragment(&f, frag), "{f}");
            }
        }
    }

    #[test]
    fn fuzz_suite_is_deterministic() {
        assert_eq!(fuzz_suite(3, 50), fuzz_suite(3, 50));
        assert_eq!(fuzz_suite(3, 50).len(), 50);
    }

    #[test]
    fn generalized_models_are_total() {
        let mut r = rng(1);
        for _ in 0..50 {
            let g = random_generalized_model(&mut r, 4, 4);
            assert!(g.totality_gap().is_none());
        }
    }
}
