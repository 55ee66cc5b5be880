//! Formal contexts `(G, M, I)`, the derivation operators and the four
//! approximation operators.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// `S1` is the object sort, `S2` the attribute sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sort {
    S1,
    S2,
}

impl Sort {
    pub fn flip(self) -> Sort {
        match self {
            Sort::S1 => Sort::S2,
            Sort::S2 => Sort::S1,
        }
    }

    pub fn digit(self) -> char {
        match self {
            Sort::S1 => '1',
            Sort::S2 => '2',
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.digit())
    }
}

/// A subset of one of the two universes, tagged with its sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortedSet {
    pub sort: Sort,
    pub members: BitSet,
}

impl SortedSet {
    pub fn new(sort: Sort, members: BitSet) -> Self {
        SortedSet { sort, members }
    }

    pub fn from_ids<S: AsRef<str>>(k: &FormalContext, sort: Sort, ids: &[S]) -> Result<Self> {
        let mut members = BitSet::new(k.universe_len(sort));
        for id in ids {
            members.insert(k.index_of(sort, id.as_ref())?);
        }
        Ok(SortedSet { sort, members })
    }

    pub fn ids<'a>(&self, k: &'a FormalContext) -> Vec<&'a str> {
        let names = k.universe(self.sort);
        self.members.iter().map(|i| names[i].as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxKind {
    PossO,
    NecO,
    PossP,
    NecP,
}

/// A finite formal context. Rows hold `I_{g•}`, columns hold `I_{•m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
    object_ix: HashMap<String, usize>,
    attribute_ix: HashMap<String, usize>,
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut ix = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if ix.insert(n.clone(), i).is_some() {
            return Err(Error::Malformed(format!("duplicate {what} id `{n}`")));
        }
    }
    Ok(ix)
}

impl FormalContext {
    /// Builds a context from per-object rows over the attribute universe.
    pub fn from_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<BitSet>,
    ) -> Result<Self> {
        let object_ix = index_names(&objects, "object")?;
        let attribute_ix = index_names(&attributes, "attribute")?;
        if rows.len() != objects.len() {
            return Err(Error::Malformed(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != attributes.len()) {
            return Err(Error::Malformed(format!(
                "row of width {} for {} attributes",
                r.len(),
                attributes.len()
            )));
        }
        let mut cols = vec![BitSet::new(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.iter() {
                cols[m].insert(g);
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            cols,
            object_ix,
            attribute_ix,
        })
    }

    /// Builds a context from incidence pairs given by id.
    pub fn new<S: AsRef<str>>(objects: &[S], attributes: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let attributes: Vec<String> = attributes.iter().map(|s| s.as_ref().to_string()).collect();
        let oix = index_names(&objects, "object")?;
        let aix = index_names(&attributes, "attribute")?;
        let mut rows = vec![BitSet::new(attributes.len()); objects.len()];
        for (g, m) in pairs {
            let gi = *oix
                .get(g.as_ref())
                .ok_or_else(|| Error::UnknownId(g.as_ref().into()))?;
            let mi = *aix
                .get(m.as_ref())
                .ok_or_else(|| Error::UnknownId(m.as_ref().into()))?;
            rows[gi].insert(mi);
        }
        Self::from_rows(objects, attributes, rows)
    }

    /// Context with generated ids `g1..gn`, `m1..mk` and the given matrix.
    pub fn from_matrix(matrix: &[Vec<bool>], n_attributes: usize) -> Self {
        let objects = (1..=matrix.len()).map(|i| format!("g{i}")).collect();
        let attributes = (1..=n_attributes).map(|i| format!("m{i}")).collect();
        let rows = matrix
            .iter()
            .map(|r| BitSet::from_indices(n_attributes, (0..n_attributes).filter(|&j| r[j])))
            .collect();
        Self::from_rows(objects, attributes, rows).expect("generated ids are distinct")
    }

    /// Context with generated ids whose incidence is bit `g * m_len + m` of `code`.
    /// Enumerating `code` over `0..2^(g_len*m_len)` lists every context of that shape.
    pub fn from_code(g_len: usize, m_len: usize, code: u64) -> Self {
        let matrix: Vec<Vec<bool>> = (0..g_len)
            .map(|g| {
                (0..m_len)
                    .map(|m| code >> (g * m_len + m) & 1 == 1)
                    .collect()
            })
            .collect();
        Self::from_matrix(&matrix, m_len)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn universe(&self, sort: Sort) -> &[String] {
        match sort {
            Sort::S1 => &self.objects,
            Sort::S2 => &self.attributes,
        }
    }

    pub fn universe_len(&self, sort: Sort) -> usize {
        self.universe(sort).len()
    }

    pub fn index_of(&self, sort: Sort, id: &str) -> Result<usize> {
        let ix = match sort {
            Sort::S1 => &self.object_ix,
            Sort::S2 => &self.attribute_ix,
        };
        ix.get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Looks an id up in both universes; objects win if the id is in both.
    pub fn world(&self, id: &str) -> Result<(Sort, usize)> {
        if let Some(&g) = self.object_ix.get(id) {
            Ok((Sort::S1, g))
        } else if let Some(&m) = self.attribute_ix.get(id) {
            Ok((Sort::S2, m))
        } else {
            Err(Error::UnknownId(id.to_string()))
        }
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// `I_{g•}`.
    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    /// `I_{•m}`.
    pub fn col(&self, m: usize) -> &BitSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(g, r)| r.iter().map(move |m| (g, m)))
    }

    pub fn empty_objects(&self) -> BitSet {
        BitSet::new(self.n_objects())
    }

    pub fn empty_attributes(&self) -> BitSet {
        BitSet::new(self.n_attributes())
    }

    /// `A⁺`: attributes shared by every object of `a`.
    pub fn up(&self, a: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_attributes());
        for g in a.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `B⁻`: objects having every attribute of `b`.
    pub fn down(&self, b: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_objects());
        for m in b.iter() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// `A^{◇o}`.
    pub fn poss_o(&self, a: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.n_attributes(),
            (0..self.n_attributes()).filter(|&m| self.cols[m].intersects(a)),
        )
    }

    /// `A^{□o}`.
    pub fn nec_o(&self, a: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.n_attributes(),
            (0..self.n_attributes()).filter(|&m| self.cols[m].is_subset(a)),
        )
    }

    /// `B^{◇p}`.
    pub fn poss_p(&self, b: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.n_objects(),
            (0..self.n_objects()).filter(|&g| self.rows[g].intersects(b)),
        )
    }

    /// `B^{□p}`.
    pub fn nec_p(&self, b: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.n_objects(),
            (0..self.n_objects()).filter(|&g| self.rows[g].is_subset(b)),
        )
    }

    fn check_len(&self, x: &SortedSet) -> Result<()> {
        if x.members.len() != self.universe_len(x.sort) {
            return Err(Error::Malformed(format!(
                "set over {} elements used with a universe of {}",
                x.members.len(),
                self.universe_len(x.sort)
            )));
        }
        Ok(())
    }

    /// `⁺` on sort-s1 input, `⁻` on sort-s2 input.
    pub fn derive(&self, x: &SortedSet) -> Result<SortedSet> {
        self.check_len(x)?;
        Ok(match x.sort {
            Sort::S1 => SortedSet::new(Sort::S2, self.up(&x.members)),
            Sort::S2 => SortedSet::new(Sort::S1, self.down(&x.members)),
        })
    }

    pub fn approx(&self, kind: ApproxKind, x: &SortedSet) -> Result<SortedSet> {
        self.check_len(x)?;
        let want = match kind {
            ApproxKind::PossO | ApproxKind::NecO => Sort::S1,
            ApproxKind::PossP | ApproxKind::NecP => Sort::S2,
        };
        if x.sort != want {
            return Err(Error::SortMismatch {
                expected: want,
                found: x.sort,
            });
        }
        let members = match kind {
            ApproxKind::PossO => self.poss_o(&x.members),
            ApproxKind::NecO => self.nec_o(&x.members),
            ApproxKind::PossP => self.poss_p(&x.members),
            ApproxKind::NecP => self.nec_p(&x.members),
        };
        Ok(SortedSet::new(want.flip(), members))
    }

    /// The complemented context `(G, M, (G×M)∖I)`.
    pub fn complement(&self) -> FormalContext {
        let rows = self.rows.iter().map(|r| r.complement()).collect();
        let cols = self.cols.iter().map(|c| c.complement()).collect();
        FormalContext {
            rows,
            cols,
            ..self.clone()
        }
    }

    /// `I_{g•}` for an object id, `I_{•m}` for an attribute id.
    pub fn neighborhood(&self, id: &str) -> Result<SortedSet> {
        match self.world(id)? {
            (Sort::S1, g) => Ok(SortedSet::new(Sort::S2, self.rows[g].clone())),
            (Sort::S2, m) => Ok(SortedSet::new(Sort::S1, self.cols[m].clone())),
        }
    }
}
