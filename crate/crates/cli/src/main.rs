use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use selfsim_homology::input::{int_matrix, matrix_to_json, rat_matrix, Body, InputDocument};
use selfsim_homology::linalg::{cokernel, exterior_power, integer_kernel, smith_normal_form};
use selfsim_homology::pipeline::{check, compute_with};
use selfsim_homology::reference::{closed_form, FamilySpec};
use selfsim_homology::report::{Coefficients, GradedReport};
use selfsim_homology::Error;

/// Homology of ample groupoids and K-theory of C*-algebras of self-similar
/// actions, graphs and related systems.
#[derive(Parser)]
#[command(name = "selfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Highest homological degree to report.
    #[arg(long, global = true, default_value_t = 10)]
    max_degree: usize,
    /// Coefficients: Z, F2, or Fp(p) for a prime p.
    #[arg(long, global = true, default_value = "Z")]
    coefficients: Coefficients,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structural data: orbits, stabiliser, Schreier generators, sections.
    Analyze { input: PathBuf },
    /// Homology (and K-theory where available) of an input document.
    Homology { input: PathBuf },
    /// K-theory of an input document.
    Ktheory { input: PathBuf },
    /// Closed-form answer for a named family, e.g. `builtin ggs 5`.
    Builtin {
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
    /// Matrix utilities on the JSON exchange format.
    Linalg {
        #[arg(value_enum)]
        op: LinalgOp,
        /// Matrix file: an array of rows of integers or "p/q" strings.
        #[arg(long = "in")]
        input: PathBuf,
        /// Degree for `extpow`.
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Run every cross-validation that applies to the input.
    Check {
        input: PathBuf,
        /// Longest strings used for the cocycle identities.
        #[arg(long, default_value_t = 6)]
        word_length: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LinalgOp {
    Snf,
    Coker,
    Ker,
    Extpow,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(err) if !err.is_input_error() => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let c = &cli.common;
    let mut code = ExitCode::SUCCESS;
    let text = match &cli.command {
        Command::Homology { input } => {
            let doc = load(input)?;
            render(&compute_with(&doc, c.max_degree, c.coefficients)?, c.format)
        }
        Command::Ktheory { input } => {
            let doc = load(input)?;
            let mut r = compute_with(&doc, c.max_degree, c.coefficients)?;
            r.homology.clear();
            r.provenance.retain(|(k, _)| k.starts_with('K'));
            if r.k_theory.is_none() {
                return Err(Error::Hypothesis(format!(
                    "no K-theory engine applies to this {} input",
                    doc.body.kind()
                ))
                .into());
            }
            render(&r, c.format)
        }
        Command::Builtin { family, params } => {
            let f = if params.is_empty() {
                family.parse::<FamilySpec>()?
            } else {
                FamilySpec::new(family, params)?
            };
            render(
                &closed_form(&f, c.max_degree)?.with_coefficients(c.coefficients),
                c.format,
            )
        }
        Command::Linalg { op, input, q } => linalg(*op, input, *q, c.format)?,
        Command::Analyze { input } => analyze(&load(input)?, c.format)?,
        Command::Check { input, word_length } => {
            let outcomes = check(&load(input)?, c.max_degree, *word_length)?;
            if outcomes.iter().any(|o| !o.passed) {
                code = ExitCode::from(1);
            }
            match c.format {
                Format::Json => {
                    let v: Vec<Value> = outcomes
                        .iter()
                        .map(|o| json!({"check": o.name, "passed": o.passed, "detail": o.detail}))
                        .collect();
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Table => outcomes
                    .iter()
                    .map(|o| {
                        let mark = if o.passed { "ok  " } else { "FAIL" };
                        if o.detail.is_empty() {
                            format!("{mark} {}\n", o.name)
                        } else {
                            format!("{mark} {} ({})\n", o.name, o.detail)
                        }
                    })
                    .collect(),
            }
        }
    };
    match &c.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn load(path: &Path) -> Result<InputDocument> {
    Ok(InputDocument::from_path(path)?)
}

fn render(r: &GradedReport, format: Format) -> String {
    match format {
        Format::Table => r.to_table(),
        Format::Json => r.to_json_string() + "\n",
    }
}

fn linalg(op: LinalgOp, input: &Path, q: usize, format: Format) -> Result<String> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        what: input.display().to_string(),
        detail: e.to_string(),
    })?;
    let out = match op {
        LinalgOp::Snf => {
            let m = int_matrix(&v)?;
            let s = smith_normal_form(&m);
            json!({
                "diagonal": s.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "rank": s.rank,
                "U": matrix_to_json(&s.u.to_rows(), false),
                "D": matrix_to_json(&s.d.to_rows(), false),
                "V": matrix_to_json(&s.v.to_rows(), false),
            })
        }
        LinalgOp::Coker => json!({"cokernel": cokernel(&int_matrix(&v)?).to_string()}),
        LinalgOp::Ker => {
            let k = integer_kernel(&int_matrix(&v)?);
            let basis: Vec<Vec<String>> = (0..k.cols())
                .map(|j| k.column(j).iter().map(ToString::to_string).collect())
                .collect();
            json!({"rank": k.cols(), "basis": matrix_to_json(&basis, false)})
        }
        LinalgOp::Extpow => {
            let e = exterior_power(&rat_matrix(&v)?, q)?;
            json!({"q": q, "matrix": matrix_to_json(&e.to_rows(), true)})
        }
    };
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&out)? + "\n",
        Format::Table => table_of(&out),
    })
}

fn table_of(v: &Value) -> String {
    let mut s = String::new();
    for (k, x) in v.as_object().into_iter().flatten() {
        let shown = match x {
            Value::String(t) => t.clone(),
            _ => x.to_string(),
        };
        s.push_str(&format!("{k}: {shown}\n"));
    }
    s
}

fn analyze(doc: &InputDocument, format: Format) -> Result<String> {
    let mut out = Map::new();
    out.insert("kind".into(), doc.body.kind().into());
    if let Some(n) = &doc.name {
        out.insert("name".into(), n.clone().into());
    }
    match &doc.body {
        Body::Automaton(a) => {
            let act = &a.action;
            let gens = act.generators();
            let orbits: Vec<Vec<String>> = act
                .orbits()
                .iter()
                .map(|o| o.iter().map(|&x| act.alphabet()[x].clone()).collect())
                .collect();
            out.insert("alphabet_size".into(), act.degree().into());
            out.insert("generators".into(), json!(gens.names()));
            out.insert("orbits".into(), json!(orbits));
            out.insert("transitive".into(), act.is_transitive().into());
            let st = act.stabilizer(0)?;
            out.insert("stabilizer_index".into(), st.orbit.len().into());
            let pairs: Vec<Value> = st
                .schreier
                .iter()
                .zip(&st.sigma)
                .map(|(s, t)| json!({"generator": gens.display(s).to_string(), "section": gens.display(t).to_string()}))
                .collect();
            out.insert("schreier_generators".into(), Value::Array(pairs));
            out.insert(
                "sigma_hits_generators".into(),
                act.sigma_hits_generators(&st).into(),
            );
            let closure = match act.generator_closure(1000) {
                Ok(c) => json!(c
                    .iter()
                    .map(|w| gens.display(w).to_string())
                    .collect::<Vec<_>>()),
                Err(e) => json!(e.to_string()),
            };
            out.insert("section_closure".into(), closure);
        }
        Body::Graph(g) => {
            out.insert("vertices".into(), g.adjacency.rows().into());
            out.insert("regular".into(), json!(g.regular));
        }
        Body::Katsura(k) => {
            out.insert("size".into(), k.a.rows().into());
            out.insert("nonzero_rows".into(), json!(k.nonzero_rows()));
        }
        Body::FreeAbelian { input, .. } => {
            out.insert("rank".into(), input.rank().into());
            out.insert("alphabet_size".into(), input.d.to_string().into());
        }
        Body::Multispinal(m) => {
            out.insert("alphabet_size".into(), m.d.into());
            out.insert("B".into(), format!("(Z/{})^{}", m.modulus, m.rank).into());
            out.insert("automorphism_letters".into(), json!(m.a0()));
        }
    }
    if let Some(f) = &doc.reference {
        out.insert("reference".into(), f.to_string().into());
    }
    let v = Value::Object(out);
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&v)? + "\n",
        Format::Table => table_of(&v),
    })
}
