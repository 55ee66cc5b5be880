//! File formats: Burmeister CXT, model and algebra JSON, lattice DOT/JSON,
//! and a directory-backed workspace.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::concepts::ConceptLattice;
use crate::context::{FormalContext, Sort};
use crate::dba::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::formula::proof::{parse_proof, Proof};
use crate::formula::{parse, Formula};
use crate::semantics::{ContextModel, GeneralizedModel, Model, Valuation};

fn line_err(line: usize, message: impl Into<String>) -> Error {
    Error::Line {
        line,
        message: message.into(),
    }
}

/// Reads a Burmeister CXT file. Names are whole lines and may contain spaces.
pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let get = |i: usize| {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| line_err(i + 1, "unexpected end of file"))
    };
    if get(0)?.trim() != "B" {
        return Err(line_err(1, "expected `B`"));
    }
    // Line 2 names the context and may be blank; the sizes follow.
    let size = |i: usize| -> Result<usize> {
        let s = get(i)?.trim();
        s.parse()
            .map_err(|_| line_err(i + 1, format!("expected a count, found `{s}`")))
    };
    let (g, m) = (size(2)?, size(3)?);
    let mut at = 4;
    if lines.get(at).is_some_and(|l| l.trim().is_empty()) {
        at += 1;
    }
    let mut names = Vec::with_capacity(g + m);
    for i in at..at + g + m {
        names.push(get(i)?.to_string());
    }
    at += g + m;
    let mut rows = Vec::with_capacity(g);
    for i in at..at + g {
        let row = get(i)?.trim_end();
        let cells: Vec<char> = row.chars().collect();
        if cells.len() != m {
            return Err(line_err(
                i + 1,
                format!("row has {} cells, expected {m}", cells.len()),
            ));
        }
        let mut bits = BitSet::new(m);
        for (j, ch) in cells.into_iter().enumerate() {
            match ch {
                'X' | 'x' => bits.insert(j),
                '.' => {}
                _ => {
                    return Err(line_err(
                        i + 1,
                        format!("illegal character `{ch}` in column {}", j + 1),
                    ))
                }
            }
        }
        rows.push(bits);
    }
    if let Some(extra) = lines[(at + g).min(lines.len())..]
        .iter()
        .position(|l| !l.trim().is_empty())
    {
        return Err(line_err(
            at + g + extra + 1,
            "trailing content after the incidence rows",
        ));
    }
    let attrs = names.split_off(g);
    FormalContext::from_rows(names, attrs, rows).map_err(|e| line_err(at, e.to_string()))
}

/// Normalized CXT text: `B`, blank, sizes, blank, names, rows, final newline.
pub fn write_cxt(k: &FormalContext) -> String {
    let mut s = format!("B\n\n{}\n{}\n\n", k.n_objects(), k.n_attributes());
    for name in k.objects().iter().chain(k.attributes()) {
        s.push_str(name);
        s.push('\n');
    }
    for g in 0..k.n_objects() {
        s.extend((0..k.n_attributes()).map(|m| if k.incident(g, m) { 'X' } else { '.' }));
        s.push('\n');
    }
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_cxt(path: &Path) -> Result<FormalContext> {
    parse_cxt(&read(path)?)
}

pub fn save_cxt(path: &Path, k: &FormalContext) -> Result<()> {
    fs::write(path, write_cxt(k)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Malformed(format!("JSON: {e}"))
}

/// On-disk model: incidence pairs by id, an optional `J`, and atoms keyed
/// `name@1` / `name@2` (the sort may be left off when the ids decide it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub incidence: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_relation: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModel {
    Context(ContextModel),
    Generalized(GeneralizedModel),
}

impl AnyModel {
    pub fn context(&self) -> &FormalContext {
        match self {
            AnyModel::Context(m) => m.context(),
            AnyModel::Generalized(m) => m.i(),
        }
    }

    pub fn valuation(&self) -> &Valuation {
        match self {
            AnyModel::Context(m) => m.valuation(),
            AnyModel::Generalized(m) => m.valuation(),
        }
    }

    pub fn generalized(&self) -> GeneralizedModel {
        match self {
            AnyModel::Context(m) => GeneralizedModel::from_context_model(m),
            AnyModel::Generalized(m) => m.clone(),
        }
    }
}

fn atom_key(k: &FormalContext, key: &str, ids: &[String]) -> Result<(String, Sort)> {
    if let Some((name, s)) = key.rsplit_once('@') {
        let sort = match s {
            "1" => Sort::S1,
            "2" => Sort::S2,
            _ => {
                return Err(Error::Malformed(format!(
                    "atom `{key}`: sort must be 1 or 2"
                )))
            }
        };
        return Ok((name.to_string(), sort));
    }
    let sorts: Vec<Sort> = ids
        .iter()
        .map(|id| k.world(id).map(|w| w.0))
        .collect::<Result<_>>()?;
    match sorts.first() {
        Some(&s) if sorts.iter().all(|&t| t == s) => Ok((key.to_string(), s)),
        Some(_) => Err(Error::SortMismatch {
            expected: sorts[0],
            found: sorts[0].flip(),
        }),
        None => Err(Error::Malformed(format!(
            "atom `{key}`: write `{key}@1` or `{key}@2` when the set is empty"
        ))),
    }
}

impl ModelFile {
    pub fn into_model(self) -> Result<AnyModel> {
        let k = FormalContext::new(&self.objects, &self.attributes, &self.incidence)?;
        let mut v = Valuation::new();
        for (key, ids) in &self.valuation {
            let (name, sort) = atom_key(&k, key, ids)?;
            let mut set = BitSet::new(k.universe_len(sort));
            for id in ids {
                set.insert(k.index_of(sort, id)?);
            }
            v.set(&name, sort, set);
        }
        match self.j_relation {
            None => Ok(AnyModel::Context(ContextModel::new(k, v)?)),
            Some(j) => {
                let j = FormalContext::new(&self.objects, &self.attributes, &j)?;
                Ok(AnyModel::Generalized(GeneralizedModel::new(k, j, v)?))
            }
        }
    }

    pub fn from_model(m: &AnyModel) -> Self {
        let k = m.context();
        let pairs = |c: &FormalContext| {
            c.pairs()
                .map(|(g, a)| (k.objects()[g].clone(), k.attributes()[a].clone()))
                .collect()
        };
        let mut valuation = BTreeMap::new();
        for sort in [Sort::S1, Sort::S2] {
            for (name, set) in m.valuation().map(sort) {
                valuation.insert(
                    format!("{name}@{}", sort.digit()),
                    set.iter().map(|x| k.universe(sort)[x].clone()).collect(),
                );
            }
        }
        ModelFile {
            objects: k.objects().to_vec(),
            attributes: k.attributes().to_vec(),
            incidence: pairs(k),
            j_relation: match m {
                AnyModel::Context(_) => None,
                AnyModel::Generalized(g) => Some(pairs(g.j())),
            },
            valuation,
        }
    }
}

pub fn parse_model_json(text: &str) -> Result<AnyModel> {
    serde_json::from_str::<ModelFile>(text)
        .map_err(json_err)?
        .into_model()
}

pub fn model_to_json(m: &AnyModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("plain data")
}

pub fn load_model_json(path: &Path) -> Result<AnyModel> {
    parse_model_json(&read(path)?)
}

/// Operation tables by element index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: Vec<String>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub opp: Vec<usize>,
    pub top: usize,
    pub bot: usize,
}

pub fn parse_algebra_json(text: &str) -> Result<FiniteAlgebra> {
    let f: AlgebraFile = serde_json::from_str(text).map_err(json_err)?;
    let n = f.elements.len();
    if f.meet.len() != n || f.join.len() != n || f.meet.iter().chain(&f.join).any(|r| r.len() != n)
    {
        return Err(Error::Malformed(format!(
            "meet and join must be {n}x{n} tables"
        )));
    }
    let alg = FiniteAlgebra {
        names: f.elements,
        meet: f.meet.concat(),
        join: f.join.concat(),
        neg: f.neg,
        opp: f.opp,
        top: f.top,
        bot: f.bot,
    };
    alg.validate()?;
    Ok(alg)
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    let n = a.size();
    let f = AlgebraFile {
        elements: a.names.clone(),
        meet: a.meet.chunks(n).map(<[usize]>::to_vec).collect(),
        join: a.join.chunks(n).map(<[usize]>::to_vec).collect(),
        neg: a.neg.clone(),
        opp: a.opp.clone(),
        top: a.top,
        bot: a.bot,
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

fn names(k: &FormalContext, sort: Sort, set: &BitSet) -> Vec<String> {
    set.iter().map(|i| k.universe(sort)[i].clone()).collect()
}

#[derive(Debug, Serialize)]
struct LatticeJson {
    kind: crate::concepts::ConceptKind,
    concepts: Vec<ConceptJson>,
    covers: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
struct ConceptJson {
    extent: Vec<String>,
    intent: Vec<String>,
}

/// Concepts in lattice order plus the covering pairs `(lower, upper)`.
pub fn lattice_to_json(k: &FormalContext, l: &ConceptLattice) -> String {
    let out = LatticeJson {
        kind: l.kind,
        concepts: l
            .concepts
            .iter()
            .map(|c| ConceptJson {
                extent: names(k, Sort::S1, &c.extent),
                intent: names(k, Sort::S2, &c.intent),
            })
            .collect(),
        covers: l.covers(),
    };
    serde_json::to_string_pretty(&out).expect("plain data")
}

fn record_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        if matches!(ch, '{' | '}' | '|' | '<' | '>' | '"' | '\\') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

/// Hasse diagram: record nodes labelled `extent|intent`, one edge per cover.
pub fn lattice_to_dot(k: &FormalContext, l: &ConceptLattice) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=record];\n");
    for (i, c) in l.concepts.iter().enumerate() {
        let side = |sort, set| {
            names(k, sort, set)
                .iter()
                .map(|n| record_escape(n))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(
            s,
            "  c{i} [label=\"{}|{}\"];",
            side(Sort::S1, &c.extent),
            side(Sort::S2, &c.intent)
        );
    }
    for (lo, hi) in l.covers() {
        let _ = writeln!(s, "  c{lo} -> c{hi};");
    }
    s.push_str("}\n");
    s
}

/// Named objects loaded from disk. Names are unique per kind.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub contexts: BTreeMap<String, FormalContext>,
    pub models: BTreeMap<String, AnyModel>,
    pub formulas: BTreeMap<String, Formula>,
    pub proofs: BTreeMap<String, Proof>,
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, kind: &str, name: &str, value: T) -> Result<()> {
    if map.contains_key(name) {
        return Err(Error::Malformed(format!("duplicate {kind} `{name}`")));
    }
    map.insert(name.to_string(), value);
    Ok(())
}

impl Workspace {
    pub fn add_context(&mut self, name: &str, k: FormalContext) -> Result<()> {
        insert_unique(&mut self.contexts, "context", name, k)
    }

    pub fn add_model(&mut self, name: &str, m: AnyModel) -> Result<()> {
        insert_unique(&mut self.models, "model", name, m)
    }

    pub fn add_formula(&mut self, name: &str, f: Formula) -> Result<()> {
        insert_unique(&mut self.formulas, "formula", name, f)
    }

    pub fn add_proof(&mut self, name: &str, p: Proof) -> Result<()> {
        insert_unique(&mut self.proofs, "proof", name, p)
    }

    /// Loads `*.cxt`, `*.json` models, `*.prf` proofs and `*.fml` files
    /// (`name: formula` per line, `#` comments) by file stem, in name order.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut ws = Workspace::default();
        let mut entries: Vec<_> = fs::read_dir(dir)
            .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for path in entries {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let at = |e: Error| Error::Malformed(format!("{}: {e}", path.display()));
            match path.extension().and_then(|s| s.to_str()) {
                Some("cxt") => ws.add_context(&stem, load_cxt(&path).map_err(at)?)?,
                Some("json") => ws.add_model(&stem, load_model_json(&path).map_err(at)?)?,
                Some("prf") => ws.add_proof(&stem, parse_proof(&read(&path)?).map_err(at)?)?,
                Some("fml") => {
                    for (i, line) in read(&path)?.lines().enumerate() {
                        let line = line.trim();
                        if line.is_empty() || line.starts_with('#') {
                            continue;
                        }
                        let (name, text) = line
                            .split_once(':')
                            .ok_or_else(|| at(line_err(i + 1, "expected `name: formula`")))?;
                        let f =
                            parse(text.trim()).map_err(|e| at(line_err(i + 1, e.to_string())))?;
                        ws.add_formula(name.trim(), f)?;
                    }
                }
                _ => {}
            }
        }
        Ok(ws)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{enumerate_concepts, ConceptKind};
    use crate::context::tests::k2;
    use proptest::prelude::*;

    const DIAG: &str = "B\n\n2\n2\n\ng1\ng2\nm1\nm2\nX.\n.X\n";

    #[test]
    fn cxt_examples() {
        let k = parse_cxt(DIAG).unwrap();
        assert_eq!(k.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert_eq!(write_cxt(&k), DIAG);
        let short = DIAG.replace("X.\n.X", "X.\n.");
        assert!(matches!(
            parse_cxt(&short),
            Err(Error::Line { line: 11, .. })
        ));
        let bad = DIAG.replace("X.\n.X", "X.\n.Y");
        assert!(matches!(parse_cxt(&bad), Err(Error::Line { line: 11, .. })));
        assert!(matches!(parse_cxt("B\n\n2\n"), Err(Error::Line { .. })));
        let named = "B\nmy context\n2\n1\n\nfirst object\ng 2\nm\nX\n.\n";
        let k = parse_cxt(named).unwrap();
        assert_eq!(k.objects()[0], "first object");
    }

    #[test]
    fn cxt_crlf() {
        let k = parse_cxt(&DIAG.replace('\n', "\r\n")).unwrap();
        assert_eq!(write_cxt(&k), DIAG);
    }

    proptest! {
        #[test]
        fn cxt_round_trip(g in 0usize..5, m in 0usize..5, code in any::<u64>()) {
            let k = FormalContext::from_code(g, m, code & ((1u64 << (g * m)) - 1));
            let text = write_cxt(&k);
            let back = parse_cxt(&text).unwrap();
            prop_assert_eq!(&back, &k);
            prop_assert_eq!(write_cxt(&back), text);
        }
    }

    #[test]
    fn model_json() {
        let text = r#"{"objects":["g1","g2"],"attributes":["m1","m2"],"incidence":[["g1","m1"],["g1","m2"],["g2","m2"]],
            "valuation":{"p@1":["g1"],"a":["m2"]}}"#;
        let m = parse_model_json(text).unwrap();
        let AnyModel::Context(cm) = &m else {
            panic!("expected a context model")
        };
        assert_eq!(cm.context(), &k2());
        assert_eq!(cm.valuation().get("a", Sort::S2).unwrap().to_vec(), vec![1]);
        assert_eq!(parse_model_json(&model_to_json(&m)).unwrap(), m);
        let gen = r#"{"objects":["g"],"attributes":["m"],"incidence":[["g","m"]],"j_relation":[["g","m"]],"valuation":{}}"#;
        assert!(matches!(
            parse_model_json(gen).unwrap(),
            AnyModel::Generalized(_)
        ));
        let gap =
            r#"{"objects":["g"],"attributes":["m"],"incidence":[],"j_relation":[],"valuation":{}}"#;
        assert!(parse_model_json(gap).is_err());
        assert!(parse_model_json(
            r#"{"objects":[],"attributes":[],"incidence":[],"valuation":{"p":[]}}"#
        )
        .is_err());
        assert!(
            parse_model_json(r#"{"objects":[],"attributes":[],"incidence":[],"extra":1}"#).is_err()
        );
    }

    #[test]
    fn algebra_json_round_trip() {
        let alg = FiniteAlgebra::trivial();
        let back = parse_algebra_json(&algebra_to_json(&alg)).unwrap();
        assert_eq!(back, alg);
        assert!(parse_algebra_json(
            r#"{"elements":["a"],"meet":[[1]],"join":[[0]],"neg":[0],"opp":[0],"top":0,"bot":0}"#
        )
        .is_err());
    }

    #[test]
    fn lattice_outputs() {
        let k = k2();
        let l = enumerate_concepts(&k, ConceptKind::Formal);
        let dot = lattice_to_dot(&k, &l);
        assert!(dot.contains("c0 [label=\"g1|m1, m2\"]"), "{dot}");
        assert!(dot.contains("c0 -> c1;"));
        let json: serde_json::Value = serde_json::from_str(&lattice_to_json(&k, &l)).unwrap();
        assert_eq!(json["concepts"].as_array().unwrap().len(), 2);
        assert_eq!(record_escape("a|b{c}"), "a\\|b\\{c\\}");
    }

    #[test]
    fn workspace_rejects_duplicates() {
        let mut ws = Workspace::default();
        ws.add_context("k", k2()).unwrap();
        assert!(ws.add_context("k", k2()).is_err());
        ws.add_formula("f", parse("p@1").unwrap()).unwrap();
        assert!(ws.add_formula("f", parse("q@1").unwrap()).is_err());
    }

    #[test]
    fn workspace_from_dir() {
        let dir = std::env::temp_dir().join(format!("ctxlogic-ws-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("diag.cxt"), DIAG).unwrap();
        fs::write(dir.join("f.fml"), "# sample\nup: p@1 -> [[p]][[o]] p@1\n").unwrap();
        fs::write(
            dir.join("ax.prf"),
            "1. [o] (p@1 -> q@1) -> ([o] p@1 -> [o] q@1) ; K_box_o\n",
        )
        .unwrap();
        let ws = Workspace::load_dir(&dir).unwrap();
        fs::remove_dir_all(&dir).unwrap();
        assert_eq!(ws.contexts.len(), 1);
        assert!(ws.formulas.contains_key("up"));
        assert_eq!(ws.proofs["ax"].lines.len(), 1);
    }
}
