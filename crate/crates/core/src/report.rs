//! Graded homology and K-theory reports, with table and JSON renderings.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::abgroup::{ExtensionResult, FinGenAbGroup};
use crate::error::{Error, Result};
use crate::linalg::is_prime;

/// One graded piece of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Group(FinGenAbGroup),
    /// A short exact sequence with both ends known but the middle not.
    Extension {
        sub: FinGenAbGroup,
        quot: FinGenAbGroup,
    },
    Unknown(String),
}

impl Entry {
    pub fn group(&self) -> Option<&FinGenAbGroup> {
        match self {
            Entry::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn direct_sum(&self, other: &Entry) -> Entry {
        match (self, other) {
            (Entry::Group(a), Entry::Group(b)) => Entry::Group(a.direct_sum(b)),
            (Entry::Unknown(r), _) | (_, Entry::Unknown(r)) => Entry::Unknown(r.clone()),
            _ => Entry::Unknown("sum involving an undetermined extension".into()),
        }
    }
}

impl From<FinGenAbGroup> for Entry {
    fn from(g: FinGenAbGroup) -> Self {
        Entry::Group(g)
    }
}

impl From<ExtensionResult> for Entry {
    fn from(e: ExtensionResult) -> Self {
        match e.resolved {
            Some(g) => Entry::Group(g),
            None => Entry::Extension {
                sub: e.sub,
                quot: e.quot,
            },
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Group(g) => write!(f, "{g}"),
            Entry::Extension { sub, quot } => {
                write!(f, "extension of {quot} by {sub} (undetermined)")
            }
            Entry::Unknown(reason) if reason.is_empty() => write!(f, "unknown"),
            Entry::Unknown(reason) => write!(f, "unknown ({reason})"),
        }
    }
}

impl std::str::FromStr for Entry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "unknown" {
            return Ok(Entry::Unknown(String::new()));
        }
        if let Some(r) = s
            .strip_prefix("unknown (")
            .and_then(|r| r.strip_suffix(')'))
        {
            return Ok(Entry::Unknown(r.to_string()));
        }
        if let Some(body) = s
            .strip_prefix("extension of ")
            .and_then(|r| r.strip_suffix(" (undetermined)"))
        {
            let (q, sub) = body
                .split_once(" by ")
                .ok_or_else(|| Error::parse("extension", s))?;
            return Ok(Entry::Extension {
                sub: sub.parse()?,
                quot: q.parse()?,
            });
        }
        Ok(Entry::Group(s.parse()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheory {
    pub k0: Entry,
    pub k1: Entry,
    /// Coordinates of the class of the unit in `k0`, aligned with its
    /// rendered summands.
    pub unit_class: Option<String>,
}

/// Coefficients for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Coefficients {
    #[default]
    Integers,
    Prime(u64),
}

impl std::str::FromStr for Coefficients {
    type Err = Error;

    /// `Z`, `F2`, `F3`, ..., or `Fp(7)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(Coefficients::Integers);
        }
        let digits = s
            .strip_prefix("Fp(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::parse("coefficients", s))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::parse("coefficients", s))?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Coefficients::Prime(p))
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedReport {
    pub homology: BTreeMap<usize, Entry>,
    pub k_theory: Option<KTheory>,
    pub flags: Vec<String>,
    /// How each entry was obtained, keyed `H0`, `H1`, ..., `K0`, `K1`.
    pub provenance: Vec<(String, String)>,
}

impl GradedReport {
    pub fn set_h(&mut self, n: usize, e: impl Into<Entry>, how: &str) {
        self.homology.insert(n, e.into());
        self.note(format!("H{n}"), how);
    }

    pub fn set_k(
        &mut self,
        k0: impl Into<Entry>,
        k1: impl Into<Entry>,
        unit: Option<String>,
        how: &str,
    ) {
        self.k_theory = Some(KTheory {
            k0: k0.into(),
            k1: k1.into(),
            unit_class: unit,
        });
        self.note("K0".into(), how);
        self.note("K1".into(), how);
    }

    fn note(&mut self, key: String, how: &str) {
        if let Some(slot) = self.provenance.iter_mut().find(|(k, _)| *k == key) {
            slot.1 = how.to_string();
        } else {
            self.provenance.push((key, how.to_string()));
            self.provenance.sort_by_key(|(k, _)| provenance_order(k));
        }
    }

    pub fn flag(&mut self, f: impl Into<String>) {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    pub fn h(&self, n: usize) -> Option<&Entry> {
        self.homology.get(&n)
    }

    pub fn h_group(&self, n: usize) -> Option<&FinGenAbGroup> {
        self.h(n).and_then(Entry::group)
    }

    /// Change coefficients with the universal coefficient theorem:
    /// `H_n(F_p) = H_n (x) F_p + Tor(H_{n-1}, F_p)`, and likewise for the
    /// two-periodic K-groups.
    pub fn with_coefficients(&self, c: Coefficients) -> GradedReport {
        let Coefficients::Prime(p) = c else {
            return self.clone();
        };
        let mut out = GradedReport {
            flags: self.flags.clone(),
            ..Default::default()
        };
        out.flag(format!("coefficients F{p} via universal coefficients"));
        for (&n, e) in &self.homology {
            let prev = if n == 0 {
                Some(Entry::Group(FinGenAbGroup::trivial()))
            } else {
                self.homology.get(&(n - 1)).cloned()
            };
            let how = self
                .provenance_of(&format!("H{n}"))
                .unwrap_or("unspecified")
                .to_string();
            out.set_h(n, uct(e, prev.as_ref(), p), &how);
        }
        if let Some(k) = &self.k_theory {
            let how = self
                .provenance_of("K0")
                .unwrap_or("unspecified")
                .to_string();
            out.set_k(
                uct(&k.k0, Some(&k.k1), p),
                uct(&k.k1, Some(&k.k0), p),
                None,
                &how,
            );
        }
        out
    }

    pub fn provenance_of(&self, key: &str) -> Option<&str> {
        self.provenance
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_json(&self) -> Value {
        let mut h = Map::new();
        for (n, e) in &self.homology {
            h.insert(n.to_string(), Value::String(e.to_string()));
        }
        let k = match &self.k_theory {
            Some(k) => json!({
                "K0": k.k0.to_string(),
                "K1": k.k1.to_string(),
                "unit_class": k.unit_class,
            }),
            None => Value::Null,
        };
        let mut prov = Map::new();
        for (key, v) in &self.provenance {
            prov.insert(key.clone(), Value::String(v.clone()));
        }
        json!({
            "homology": h,
            "k_theory": k,
            "flags": self.flags,
            "provenance": prov,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serialises")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |d: &str| Error::Schema(format!("report: {d}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let mut r = GradedReport::default();
        let h = obj
            .get("homology")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing homology"))?;
        for (k, e) in h {
            let n: usize = k.parse().map_err(|_| bad("homology key is not a degree"))?;
            let s = e
                .as_str()
                .ok_or_else(|| bad("homology entry is not a string"))?;
            r.homology.insert(n, s.parse()?);
        }
        match obj.get("k_theory") {
            None | Some(Value::Null) => {}
            Some(Value::Object(k)) => {
                let get = |key: &str| -> Result<Entry> {
                    k.get(key)
                        .and_then(Value::as_str)
                        .ok_or_else(|| bad("k_theory entry missing"))?
                        .parse()
                };
                let unit_class = match k.get("unit_class") {
                    None | Some(Value::Null) => None,
                    Some(Value::String(s)) => Some(s.clone()),
                    _ => return Err(bad("unit_class must be a string")),
                };
                r.k_theory = Some(KTheory {
                    k0: get("K0")?,
                    k1: get("K1")?,
                    unit_class,
                });
            }
            _ => return Err(bad("k_theory must be an object")),
        }
        if let Some(f) = obj.get("flags") {
            for x in f.as_array().ok_or_else(|| bad("flags must be a list"))? {
                r.flags.push(
                    x.as_str()
                        .ok_or_else(|| bad("flag is not a string"))?
                        .into(),
                );
            }
        }
        if let Some(p) = obj.get("provenance") {
            for (k, x) in p
                .as_object()
                .ok_or_else(|| bad("provenance must be an object"))?
            {
                let s = x
                    .as_str()
                    .ok_or_else(|| bad("provenance value is not a string"))?;
                r.provenance.push((k.clone(), s.into()));
            }
        }
        Ok(r)
    }

    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String, String)> = Vec::new();
        for (n, e) in &self.homology {
            let key = format!("H{n}");
            let how = self.provenance_of(&key).unwrap_or("").to_string();
            rows.push((format!("H_{n}"), e.to_string(), how));
        }
        if let Some(k) = &self.k_theory {
            let how = self.provenance_of("K0").unwrap_or("").to_string();
            rows.push(("K_0".into(), k.k0.to_string(), how.clone()));
            rows.push(("K_1".into(), k.k1.to_string(), how));
            if let Some(u) = &k.unit_class {
                rows.push(("[1]".into(), u.clone(), String::new()));
            }
        }
        let w = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (a, b, c) in rows {
            if c.is_empty() {
                out.push_str(&format!("{a:<5} {b}\n"));
            } else {
                out.push_str(&format!("{a:<5} {b:<w$}  [{c}]\n"));
            }
        }
        for f in &self.flags {
            out.push_str(&format!("note: {f}\n"));
        }
        out
    }
}

fn provenance_order(k: &str) -> (u8, usize) {
    match k.strip_prefix('H').and_then(|d| d.parse().ok()) {
        Some(n) => (0, n),
        None => (
            1,
            k.strip_prefix('K')
                .and_then(|d| d.parse().ok())
                .unwrap_or(usize::MAX),
        ),
    }
}

fn uct(e: &Entry, prev: Option<&Entry>, p: u64) -> Entry {
    match (e, prev) {
        (Entry::Group(g), Some(Entry::Group(h))) => {
            let dim = g.free_rank() + g.p_rank(p) + h.p_rank(p);
            Entry::Group(FinGenAbGroup::cyclic_power(p, dim))
        }
        (Entry::Group(_), None) => Entry::Unknown("previous degree not computed".into()),
        _ => Entry::Unknown("integral group not determined".into()),
    }
}

/// Render coordinates as a tuple, or a single value when there is one.
pub fn render_class(coords: &[num_bigint::BigInt]) -> String {
    match coords {
        [] => "0".into(),
        [x] => x.to_string(),
        _ => format!(
            "({})",
            coords
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

/// A class in `group` by its coordinates. When `group` is finite cyclic and
/// the class generates it, the generator is chosen so the class reads `1`.
pub fn class_in(group: &FinGenAbGroup, coords: &[num_bigint::BigInt]) -> String {
    use num_integer::Integer;
    if group.is_trivial() {
        return "0".into();
    }
    if let ([n], 0, [x]) = (group.torsion(), group.free_rank(), coords) {
        if x.gcd(n) == num_bigint::BigInt::from(1) {
            return format!("1 in {group}");
        }
    }
    if let ([], 1, [x]) = (group.torsion(), group.free_rank(), coords) {
        return format!("{} in Z", x.magnitude());
    }
    format!("{} in {group}", render_class(coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GradedReport {
        let mut r = GradedReport::default();
        r.set_h(0, FinGenAbGroup::cyclic(2), "engine");
        r.set_h(1, FinGenAbGroup::cyclic_power(2, 3), "engine");
        r.set_h(
            2,
            Entry::Extension {
                sub: FinGenAbGroup::cyclic(2),
                quot: FinGenAbGroup::cyclic(3),
            },
            "scaffold",
        );
        r.set_h(10, Entry::Unknown("no data".into()), "none");
        r.set_k(
            FinGenAbGroup::free(3),
            FinGenAbGroup::free(3),
            Some("0".into()),
            "closed form",
        );
        r.flag("reference-only");
        r
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let r = sample();
        let s = r.to_json_string();
        let back = GradedReport::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json_string(), s);
    }

    #[test]
    fn degrees_in_numeric_order() {
        let s = sample().to_json_string();
        assert!(s.find("\"2\"").unwrap() < s.find("\"10\"").unwrap());
    }

    #[test]
    fn universal_coefficients() {
        let mut r = GradedReport::default();
        r.set_h(0, FinGenAbGroup::cyclic(2), "x");
        r.set_h(1, "Z + Z/4".parse::<FinGenAbGroup>().unwrap(), "x");
        r.set_h(2, FinGenAbGroup::trivial(), "x");
        let f2 = r.with_coefficients(Coefficients::Prime(2));
        assert_eq!(f2.h(0).unwrap().to_string(), "Z/2");
        assert_eq!(f2.h(1).unwrap().to_string(), "(Z/2)^3");
        assert_eq!(f2.h(2).unwrap().to_string(), "Z/2");
        let f3 = r.with_coefficients(Coefficients::Prime(3));
        assert_eq!(f3.h(1).unwrap().to_string(), "Z/3");
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Z".parse::<Coefficients>().unwrap(), Coefficients::Integers);
        assert_eq!(
            "F2".parse::<Coefficients>().unwrap(),
            Coefficients::Prime(2)
        );
        assert_eq!(
            "Fp(7)".parse::<Coefficients>().unwrap(),
            Coefficients::Prime(7)
        );
        assert!("F4".parse::<Coefficients>().is_err());
    }
}
