//! Input documents (schema version 1) and the matrix exchange format.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::engines::{FreeAbelianInput, GraphInput, KatsuraInput, MultispinalInput, PhiEntry};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::reference::FamilySpec;
use crate::selfsim::{Abelianization, Assumptions, Generators, SelfSimilarAction};

pub const SCHEMA_VERSION: u64 = 1;

/// A parsed input document.
#[derive(Clone, Debug)]
pub struct InputDocument {
    pub name: Option<String>,
    /// Named family whose closed form this input should reproduce.
    pub reference: Option<FamilySpec>,
    pub body: Body,
}

#[derive(Clone, Debug)]
pub enum Body {
    Automaton(AutomatonInput),
    Graph(GraphInput),
    Katsura(KatsuraInput),
    FreeAbelian {
        input: FreeAbelianInput,
        checks: bool,
    },
    Multispinal(MultispinalInput),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Automaton(_) => "automaton",
            Body::Graph(_) => "graph",
            Body::Katsura(_) => "katsura",
            Body::FreeAbelian { .. } => "free_abelian",
            Body::Multispinal(_) => "multispinal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutomatonInput {
    pub action: SelfSimilarAction,
    pub abelianization: Option<Abelianization>,
    pub assume: Assumptions,
}

impl InputDocument {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse("input document", e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "input document")?;
        if let Some(ver) = obj.get("schema_version") {
            if ver.as_u64() != Some(SCHEMA_VERSION) {
                return Err(Error::Schema(format!("unsupported schema_version {ver}")));
            }
        }
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema("missing string field \"kind\"".into()))?;
        let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
        let reference = obj.get("reference").map(parse_reference).transpose()?;
        let body = match kind {
            "automaton" => Body::Automaton(parse_automaton(obj)?),
            "graph" => {
                let adjacency = int_matrix(field(obj, "adjacency")?)?;
                let regular = obj.get("regular").map(|r| usize_list(r, "regular")).transpose()?;
                Body::Graph(GraphInput::new(adjacency, regular)?)
            }
            "katsura" => Body::Katsura(KatsuraInput::new(int_matrix(field(obj, "A")?)?, int_matrix(field(obj, "B")?)?)?),
            "free_abelian" => {
                let a = rat_matrix(field(obj, "matrix")?)?;
                let d = int_value(field(obj, "d")?, "d")?;
                let checks = obj.get("checks").and_then(Value::as_bool).unwrap_or(true);
                Body::FreeAbelian {
                    input: FreeAbelianInput::new(a, d)?,
                    checks,
                }
            }
            "multispinal" => Body::Multispinal(parse_multispinal(obj)?),
            other => {
                return Err(Error::Schema(format!(
                    "unknown kind {other:?}; expected automaton, graph, katsura, free_abelian or multispinal"
                )))
            }
        };
        Ok(InputDocument {
            name,
            reference,
            body,
        })
    }
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Schema(format!("{what} must be a JSON object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Schema(format!("missing field {key:?}")))
}

fn int_value(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::parse(what, format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::parse(what, format!("{s:?} is not an integer"))),
        _ => Err(Error::parse(what, format!("{v} is not an integer"))),
    }
}

fn usize_value(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(what, format!("{v} is not a non-negative integer")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::parse(what, "expected an array"))?
        .iter()
        .map(|x| usize_value(x, what))
        .collect()
}

fn rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| Error::parse("rational", s))?;
                    let q: BigInt = q.trim().parse().map_err(|_| Error::parse("rational", s))?;
                    if q == BigInt::from(0) {
                        return Err(Error::parse(
                            "rational",
                            format!("{s:?} has zero denominator"),
                        ));
                    }
                    Ok(BigRational::new(p, q))
                }
                None => Ok(BigRational::from_integer(int_value(v, "rational")?)),
            }
        }
        _ => Ok(BigRational::from_integer(int_value(v, "rational")?)),
    }
}

fn rows_of(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse("matrix", "expected an array of rows"))
}

/// Parse an integer matrix in the exchange format: an array of rows of
/// integers (numbers or decimal strings).
pub fn int_matrix(v: &Value) -> Result<IntMatrix> {
    let rows = rows_of(v)?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::parse("matrix", "each row must be an array"))?
                .iter()
                .map(|x| int_value(x, "matrix entry"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(rows)
}

/// Parse a rational matrix: entries are integers or `"p/q"` strings.
pub fn rat_matrix(v: &Value) -> Result<RatMatrix> {
    let rows = rows_of(v)?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::parse("matrix", "each row must be an array"))?
                .iter()
                .map(rational_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

/// Render a matrix in the exchange format.
pub fn matrix_to_json<T: ToString>(rows: &[Vec<T>], as_strings: bool) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|x| {
                            let s = x.to_string();
                            match (as_strings, s.parse::<i64>()) {
                                (false, Ok(n)) => Value::from(n),
                                _ => Value::String(s),
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn parse_reference(v: &Value) -> Result<FamilySpec> {
    match v {
        Value::String(s) => s.parse(),
        Value::Object(o) => {
            let family = o
                .get("family")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("reference needs a \"family\" string".into()))?;
            let params = match o.get("params") {
                None => Vec::new(),
                Some(p) => p
                    .as_array()
                    .ok_or_else(|| Error::parse("reference params", "expected an array"))?
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| Error::parse("reference params", x.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            FamilySpec::new(family, &params)
        }
        _ => Err(Error::Schema(
            "reference must be a string or an object".into(),
        )),
    }
}

fn parse_automaton(obj: &Map<String, Value>) -> Result<AutomatonInput> {
    let alphabet: Vec<String> = match field(obj, "alphabet")? {
        Value::Number(_) => {
            let k = usize_value(&obj["alphabet"], "alphabet")?;
            (0..k).map(|i| i.to_string()).collect()
        }
        Value::Array(xs) => xs
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::parse("alphabet", x.to_string())),
            })
            .collect::<Result<_>>()?,
        other => {
            return Err(Error::parse(
                "alphabet",
                format!("{other} is neither a size nor a list"),
            ))
        }
    };
    let letter = |x: &Value| -> Result<usize> {
        match x {
            Value::String(s) => alphabet
                .iter()
                .position(|a| a == s)
                .ok_or_else(|| Error::Schema(format!("unknown letter {s:?}"))),
            _ => usize_value(x, "permutation entry"),
        }
    };
    let gens = as_object(field(obj, "generators")?, "generators")?;
    let mut names = Vec::new();
    let mut orders = Vec::new();
    let mut perms = Vec::new();
    for (name, g) in gens {
        let g = as_object(g, &format!("generator {name}"))?;
        names.push(name.clone());
        orders.push(
            g.get("order")
                .map(|o| usize_value(o, "order").map(|x| x as u64))
                .transpose()?,
        );
        let perm = field(g, "perm")?
            .as_array()
            .ok_or_else(|| Error::parse("perm", format!("generator {name}: expected an array")))?
            .iter()
            .map(&letter)
            .collect::<Result<Vec<_>>>()?;
        perms.push(perm);
    }
    let generators = Generators::new(names.clone(), orders)?;
    let mut sections = Vec::new();
    for name in &names {
        let g = gens[name].as_object().expect("checked above");
        let secs = field(g, "sections")?
            .as_array()
            .ok_or_else(|| {
                Error::parse("sections", format!("generator {name}: expected an array"))
            })?
            .iter()
            .map(|w| {
                let s = w.as_str().ok_or_else(|| {
                    Error::parse(
                        "section",
                        format!("generator {name}: {w} is not a word string"),
                    )
                })?;
                generators.parse(s)
            })
            .collect::<Result<Vec<_>>>()?;
        sections.push(secs);
    }
    let action = SelfSimilarAction::new(alphabet, generators, perms, sections)?;

    let abelianization = obj
        .get("abelianization")
        .map(|ab| {
            let ab = as_object(ab, "abelianization")?;
            let invariants = field(ab, "invariants")?
                .as_array()
                .ok_or_else(|| Error::parse("invariants", "expected an array"))?
                .iter()
                .map(|x| int_value(x, "invariant"))
                .collect::<Result<Vec<_>>>()?;
            let images = as_object(field(ab, "images")?, "images")?;
            if let Some(extra) = images.keys().find(|k| !names.contains(k)) {
                return Err(Error::Schema(format!(
                    "image given for unknown generator {extra:?}"
                )));
            }
            let images = names
                .iter()
                .map(|n| {
                    let v = images.get(n).ok_or_else(|| {
                        Error::Schema(format!("no abelianisation image for {n:?}"))
                    })?;
                    v.as_array()
                        .ok_or_else(|| Error::parse("image", format!("{n}: expected an array")))?
                        .iter()
                        .map(|x| int_value(x, "image"))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Abelianization::from_invariants(&invariants, images)
        })
        .transpose()?;

    let mut assume = Assumptions::default();
    if let Some(a) = obj.get("assume") {
        for (k, v) in as_object(a, "assume")? {
            let b = v
                .as_bool()
                .ok_or_else(|| Error::parse("assume", format!("{k} must be a boolean")))?;
            match k.as_str() {
                "h2_vanishes" => assume.h2_vanishes = b,
                "free_group_mode" => assume.free_group_mode = b,
                other => return Err(Error::Schema(format!("unknown assumption {other:?}"))),
            }
        }
    }
    Ok(AutomatonInput {
        action,
        abelianization,
        assume,
    })
}

fn parse_multispinal(obj: &Map<String, Value>) -> Result<MultispinalInput> {
    let d = usize_value(field(obj, "d")?, "d")?;
    let b = as_object(field(obj, "B")?, "B")?;
    let modulus = usize_value(field(b, "modulus")?, "modulus")? as u64;
    let rank = usize_value(field(b, "rank")?, "rank")?;
    let phi = field(obj, "phi")?
        .as_array()
        .ok_or_else(|| Error::parse("phi", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(a, e)| {
            let e = as_object(e, &format!("phi[{a}]"))?;
            match (e.get("aut"), e.get("hom")) {
                (Some(m), None) => Ok(PhiEntry::Aut(int_matrix(m)?)),
                (None, Some(m)) => Ok(PhiEntry::Hom(int_matrix(m)?)),
                _ => Err(Error::Schema(format!(
                    "phi[{a}] needs exactly one of \"aut\" or \"hom\""
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    MultispinalInput::new(d, modulus, rank, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entries() {
        let m = rat_matrix(&serde_json::json!([[0, "1"], ["1/2", "-3/4"]])).unwrap();
        assert_eq!(m[(1, 0)], BigRational::new(1.into(), 2.into()));
        assert!(rat_matrix(&serde_json::json!([["1/0"]])).is_err());
        assert!(int_matrix(&serde_json::json!([[1, 2], [3]])).is_err());
    }

    #[test]
    fn unknown_kind() {
        let e = InputDocument::from_json_str(r#"{"kind": "tree"}"#).unwrap_err();
        assert!(e.is_input_error());
    }

    #[test]
    fn small_automaton() {
        let doc = InputDocument::from_json_str(
            r#"{"kind": "automaton", "alphabet": 2,
                "generators": {"a": {"perm": [1, 0], "sections": ["1", "a"]}},
                "abelianization": {"invariants": [0], "images": {"a": [1]}},
                "reference": {"family": "graph_bouquet", "params": [2]}}"#,
        )
        .unwrap();
        let Body::Automaton(a) = doc.body else {
            panic!()
        };
        assert_eq!(a.action.degree(), 2);
        assert_eq!(doc.reference, Some(FamilySpec::GraphBouquet { d: 2 }));
    }
}
