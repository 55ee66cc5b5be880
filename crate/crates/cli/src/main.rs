//! `ctxlogic` command-line front end. Results go to stdout as JSON (or DOT),
//! errors to stderr as `{"error": kind, "message": ...}`.
//! Exit codes: 0 ok, 1 domain failure (including negative verdicts), 2 usage.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ctxlogic::concepts::{
    enumerate_concepts, protoconcept_algebra, semiconcept_algebra, ConceptKind,
};
use ctxlogic::dba::{check_dba, full_contextuality_witness, purity_witness, FiniteAlgebra};
use ctxlogic::formula::proof::{check_proof, parse_proof, System};
use ctxlogic::formula::{parse, translate_rho, translate_tau};
use ctxlogic::io::{self, AnyModel, ModelFile};
use ctxlogic::properties::graded_characterization_check;
use ctxlogic::semantics::{frame_countermodel, satisfies, truth_set, Model, DEFAULT_BUDGET};
use ctxlogic::transforms::disjointify;
use ctxlogic::{Error, FormalContext, Formula, Sort, Valuation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "ctxlogic",
    version,
    about = "Formal contexts, concept lattices and two-sorted modal logic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Truth set of a formula in a model, or its value at one world.
    Check {
        model: PathBuf,
        formula: String,
        #[arg(long)]
        world: Option<String>,
    },
    /// Frame validity over a context, with a countermodel when invalid.
    Valid {
        context: PathBuf,
        formula: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Concept lattice as DOT or JSON.
    Lattice {
        context: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Formal)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Out::Json)]
        out: Out,
    },
    /// Double Boolean algebra axioms for a context's algebra or an algebra file.
    DbaVerify {
        input: PathBuf,
        #[arg(long)]
        pure: bool,
        #[arg(long)]
        fully_contextual: bool,
        /// Algebra built from a context; defaults to protoconcepts when
        /// `--fully-contextual` is given, semiconcepts otherwise.
        #[arg(long, value_enum)]
        algebra: Option<AlgebraKind>,
    },
    /// Relation classes against their graded-formula characterizations.
    Props { context: PathBuf },
    /// Check a proof file.
    Proof {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Sys::BM)]
        system: Sys,
    },
    /// Apply the ρ or τ translation.
    Translate {
        formula: String,
        #[arg(long, value_enum)]
        map: Map,
    },
    /// Split overlapping I and J into a disjoint model (printed as model JSON).
    Disjointify { model: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Formal,
    Property,
    Object,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraKind {
    Semiconcept,
    Protoconcept,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Sys {
    KB,
    KF,
    BM,
}

#[derive(Clone, Copy, ValueEnum)]
enum Map {
    Rho,
    Tau,
}

/// What a command produced: text for stdout and whether the verdict was positive.
struct Output {
    text: String,
    ok: bool,
}

fn json_out(v: Value, ok: bool) -> Output {
    Output {
        text: serde_json::to_string_pretty(&v).expect("plain data"),
        ok,
    }
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

/// A `.cxt` file, or the context of a model file.
fn load_context(p: &Path) -> Result<FormalContext, Error> {
    if is_json(p) {
        Ok(io::load_model_json(p)?.context().clone())
    } else {
        io::load_cxt(p)
    }
}

fn load_model(p: &Path) -> Result<AnyModel, Error> {
    if is_json(p) {
        io::load_model_json(p)
    } else {
        Ok(AnyModel::Context(ctxlogic::ContextModel::new(
            io::load_cxt(p)?,
            Valuation::new(),
        )?))
    }
}

fn ids(k: &FormalContext, sort: Sort, set: &ctxlogic::BitSet) -> Vec<String> {
    set.iter().map(|i| k.universe(sort)[i].clone()).collect()
}

fn valuation_json(k: &FormalContext, v: &Valuation) -> Value {
    let mut map = serde_json::Map::new();
    for sort in [Sort::S1, Sort::S2] {
        for (name, set) in v.map(sort) {
            map.insert(format!("{name}@{}", sort.digit()), json!(ids(k, sort, set)));
        }
    }
    Value::Object(map)
}

fn check_in(m: &impl Model, f: &Formula, world: Option<String>) -> Result<Output, Error> {
    let v = match world {
        Some(w) => json!({"formula": f.to_string(), "world": w, "holds": satisfies(m, &w, f)?}),
        None => {
            let t = truth_set(m, f)?;
            json!({"formula": f.to_string(), "sort": t.sort.to_string(), "truth_set": ids(m.context(), t.sort, &t.members)})
        }
    };
    Ok(json_out(v, true))
}

fn run(cmd: Cmd) -> Result<Output, Error> {
    match cmd {
        Cmd::Check {
            model,
            formula,
            world,
        } => {
            let f = parse(&formula)?;
            match load_model(&model)? {
                AnyModel::Context(c) => check_in(&c, &f, world),
                AnyModel::Generalized(g) => check_in(&g, &f, world),
            }
        }
        Cmd::Valid {
            context,
            formula,
            budget,
        } => {
            let k = load_context(&context)?;
            let f = parse(&formula)?;
            match frame_countermodel(&k, &f, budget)? {
                None => Ok(json_out(
                    json!({"formula": f.to_string(), "valid": true}),
                    true,
                )),
                Some(cm) => Ok(json_out(
                    json!({
                        "formula": f.to_string(),
                        "valid": false,
                        "countermodel": {
                            "world": k.universe(cm.sort)[cm.world],
                            "valuation": valuation_json(&k, &cm.valuation),
                        },
                    }),
                    false,
                )),
            }
        }
        Cmd::Lattice { context, kind, out } => {
            let k = load_context(&context)?;
            let kind = match kind {
                Kind::Formal => ConceptKind::Formal,
                Kind::Property => ConceptKind::Property,
                Kind::Object => ConceptKind::Object,
            };
            let l = enumerate_concepts(&k, kind);
            let text = match out {
                Out::Dot => io::lattice_to_dot(&k, &l).trim_end().to_string(),
                Out::Json => io::lattice_to_json(&k, &l),
            };
            Ok(Output { text, ok: true })
        }
        Cmd::DbaVerify {
            input,
            pure,
            fully_contextual,
            algebra,
        } => {
            let (source, alg): (&str, FiniteAlgebra) = if is_json(&input) {
                (
                    "file",
                    io::parse_algebra_json(
                        &std::fs::read_to_string(&input).map_err(|e| Error::Io(e.to_string()))?,
                    )?,
                )
            } else {
                let k = io::load_cxt(&input)?;
                let proto = match algebra {
                    Some(a) => matches!(a, AlgebraKind::Protoconcept),
                    None => fully_contextual,
                };
                if proto {
                    ("protoconcept", protoconcept_algebra(&k)?.algebra)
                } else {
                    ("semiconcept", semiconcept_algebra(&k)?.algebra)
                }
            };
            let name = |x: usize| alg.names[x].clone();
            let rep = check_dba(&alg);
            let mut ok = rep.passes();
            let axioms: Vec<Value> = rep
                .axioms
                .iter()
                .map(|a| {
                    json!({"axiom": a.axiom, "holds": a.holds(),
                           "witness": a.witness.as_ref().map(|w| w.iter().map(|&x| name(x)).collect::<Vec<_>>())})
                })
                .collect();
            let mut v = json!({"algebra": source, "size": alg.size(), "dba": rep.passes(), "axioms": axioms});
            if pure {
                let w = purity_witness(&alg);
                ok &= w.is_none();
                v["pure"] = json!({"holds": w.is_none(), "witness": w.map(name)});
            }
            if fully_contextual {
                let w = full_contextuality_witness(&alg);
                ok &= w.is_none();
                v["fully_contextual"] = json!({
                    "holds": w.is_none(),
                    "witness": w.map(|w| json!({"y": name(w.y), "x": name(w.x), "count": w.count})),
                });
            }
            Ok(json_out(v, ok))
        }
        Cmd::Props { context } => {
            let rep = graded_characterization_check(&load_context(&context)?)?;
            let ok = rep.iter().all(|r| r.agree);
            Ok(json_out(serde_json::to_value(rep).expect("plain data"), ok))
        }
        Cmd::Proof { file, system } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let proof = parse_proof(&text)?;
            let sys = match system {
                Sys::KB => System::KB,
                Sys::KF => System::KF,
                Sys::BM => System::BM,
            };
            let v = check_proof(&proof, sys);
            Ok(json_out(
                json!({"system": v.system, "steps": v.steps, "accepted": v.accepted(), "failures": v.failures}),
                v.accepted(),
            ))
        }
        Cmd::Translate { formula, map } => {
            let f = parse(&formula)?;
            let (name, out) = match map {
                Map::Rho => ("rho", translate_rho(&f)?),
                Map::Tau => ("tau", translate_tau(&f)?),
            };
            Ok(json_out(
                json!({"input": f.to_string(), "map": name, "output": out.to_string()}),
                true,
            ))
        }
        Cmd::Disjointify { model } => {
            let g = io::load_model_json(&model)?.generalized();
            let (d, _) = disjointify(&g)?;
            let file = ModelFile::from_model(&AnyModel::Generalized(d));
            Ok(json_out(
                serde_json::to_value(file).expect("plain data"),
                true,
            ))
        }
    }
}

fn report_error(kind: &str, message: &str) {
    eprintln!("{}", json!({"error": kind, "message": message}));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.render().to_string().trim());
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
    }
}
