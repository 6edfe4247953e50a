//! Closed-form answers for named families. These serve the `builtin`
//! command and are the regression targets for the engines.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::abgroup::{splice_extension, FinGenAbGroup};
use crate::error::{Error, Result};
use crate::linalg::is_prime;
use crate::report::{Entry, GradedReport};
use crate::selfsim::unit_in;

/// Flag attached to answers with no engine behind them.
pub const REFERENCE_ONLY: &str = "reference-only";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Grigorchuk,
    GrigorchukErschler,
    /// GGS group over `m` letters.
    Ggs {
        m: u64,
    },
    /// Sunic group `G_{p,f}` for a primitive `f` of degree `deg`.
    SunicPrimitive {
        p: u64,
        deg: u32,
    },
    Hanoi,
    Aleshin,
    /// Lamplighter `A wr Z` for `A` with the given invariant factors.
    Lamplighter {
        invariants: Vec<u64>,
    },
    /// `BS(1, m)` acting on `Z/n`.
    BaumslagSolitar {
        m: u64,
        n: u64,
    },
    /// Sausage automaton on `Z^n`, `n` prime.
    Sausage {
        n: u64,
    },
    /// One vertex with `d` loops.
    GraphBouquet {
        d: u64,
    },
    /// A directed cycle on `n` vertices.
    GraphCycle {
        n: u64,
    },
    /// One vertex, `A = [a]`, `B = [b]`.
    Katsura {
        a: u64,
        b: i64,
    },
}

impl FamilySpec {
    pub const NAMES: [&'static str; 12] = [
        "grigorchuk",
        "grigorchuk_erschler",
        "ggs",
        "sunic_primitive",
        "hanoi",
        "aleshin",
        "lamplighter",
        "baumslag_solitar",
        "sausage",
        "graph_bouquet",
        "graph_cycle",
        "katsura",
    ];

    /// Build from a family name and integer parameters, checking the
    /// parameter domain.
    pub fn new(name: &str, params: &[i64]) -> Result<Self> {
        let arity = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Schema(format!(
                    "{name} takes {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let nat = |i: usize, min: i64| -> Result<u64> {
            let x = params[i];
            if x < min {
                Err(Error::Hypothesis(format!(
                    "{name}: parameter {} = {x} must be at least {min}",
                    i + 1
                )))
            } else {
                Ok(x as u64)
            }
        };
        let f = match name {
            "grigorchuk" => {
                arity(0)?;
                FamilySpec::Grigorchuk
            }
            "grigorchuk_erschler" => {
                arity(0)?;
                FamilySpec::GrigorchukErschler
            }
            "hanoi" => {
                arity(0)?;
                FamilySpec::Hanoi
            }
            "aleshin" => {
                arity(0)?;
                FamilySpec::Aleshin
            }
            "ggs" => {
                arity(1)?;
                FamilySpec::Ggs { m: nat(0, 2)? }
            }
            "sunic_primitive" => {
                arity(2)?;
                let p = nat(0, 2)?;
                if !is_prime(p) {
                    return Err(Error::Hypothesis(format!(
                        "sunic_primitive: p = {p} must be prime"
                    )));
                }
                FamilySpec::SunicPrimitive {
                    p,
                    deg: nat(1, 1)? as u32,
                }
            }
            "lamplighter" => {
                if params.is_empty() {
                    return Err(Error::Schema(
                        "lamplighter needs the invariant factors of A".into(),
                    ));
                }
                let invariants = (0..params.len())
                    .map(|i| nat(i, 2))
                    .collect::<Result<Vec<_>>>()?;
                FamilySpec::Lamplighter { invariants }
            }
            "baumslag_solitar" => {
                arity(2)?;
                let (m, n) = (nat(0, 2)?, nat(1, 2)?);
                if m.gcd(&n) != 1 {
                    return Err(Error::Hypothesis(format!(
                        "baumslag_solitar: n = {n} must be coprime to m = {m}"
                    )));
                }
                FamilySpec::BaumslagSolitar { m, n }
            }
            "sausage" => {
                arity(1)?;
                let n = nat(0, 2)?;
                if !is_prime(n) {
                    return Err(Error::Hypothesis(format!(
                        "sausage: rank n = {n} must be prime"
                    )));
                }
                FamilySpec::Sausage { n }
            }
            "graph_bouquet" => {
                arity(1)?;
                FamilySpec::GraphBouquet { d: nat(0, 1)? }
            }
            "graph_cycle" => {
                arity(1)?;
                FamilySpec::GraphCycle { n: nat(0, 1)? }
            }
            "katsura" => {
                arity(2)?;
                let a = nat(0, 0)?;
                if a == 0 && params[1] != 0 {
                    return Err(Error::Hypothesis(
                        "katsura: B must vanish where A does".into(),
                    ));
                }
                FamilySpec::Katsura { a, b: params[1] }
            }
            _ => {
                return Err(Error::Schema(format!(
                    "unknown family {name}; known: {}",
                    FamilySpec::NAMES.join(", ")
                )))
            }
        };
        Ok(f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Grigorchuk => "grigorchuk",
            FamilySpec::GrigorchukErschler => "grigorchuk_erschler",
            FamilySpec::Ggs { .. } => "ggs",
            FamilySpec::SunicPrimitive { .. } => "sunic_primitive",
            FamilySpec::Hanoi => "hanoi",
            FamilySpec::Aleshin => "aleshin",
            FamilySpec::Lamplighter { .. } => "lamplighter",
            FamilySpec::BaumslagSolitar { .. } => "baumslag_solitar",
            FamilySpec::Sausage { .. } => "sausage",
            FamilySpec::GraphBouquet { .. } => "graph_bouquet",
            FamilySpec::GraphCycle { .. } => "graph_cycle",
            FamilySpec::Katsura { .. } => "katsura",
        }
    }

    fn params(&self) -> Vec<i64> {
        match self {
            FamilySpec::Ggs { m } => vec![*m as i64],
            FamilySpec::SunicPrimitive { p, deg } => vec![*p as i64, i64::from(*deg)],
            FamilySpec::Lamplighter { invariants } => {
                invariants.iter().map(|&x| x as i64).collect()
            }
            FamilySpec::BaumslagSolitar { m, n } => vec![*m as i64, *n as i64],
            FamilySpec::Sausage { n } | FamilySpec::GraphCycle { n } => vec![*n as i64],
            FamilySpec::GraphBouquet { d } => vec![*d as i64],
            FamilySpec::Katsura { a, b } => vec![*a as i64, *b],
            _ => vec![],
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        if p.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let p: Vec<String> = p.iter().map(ToString::to_string).collect();
            write!(f, "{}({})", self.name(), p.join(","))
        }
    }
}

/// Parses `name` or `name(p1,p2,...)`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once('(') {
            None => (s, Vec::new()),
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse("family", format!("missing ')' in {s:?}")))?;
                let params = inner
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::parse("family parameter", format!("{t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (name.trim(), params)
            }
        };
        FamilySpec::new(name, &params)
    }
}

fn z2(k: u64) -> FinGenAbGroup {
    FinGenAbGroup::cyclic_power(2, k as usize)
}

fn cyc(n: u64) -> FinGenAbGroup {
    FinGenAbGroup::cyclic(n)
}

/// `coker(1 - x)` and `ker(1 - x)` for an integer `x`.
fn scalar_pieces(x: i64) -> (FinGenAbGroup, FinGenAbGroup) {
    let c = FinGenAbGroup::cyclic(BigInt::from(1 - x));
    let k = if x == 1 {
        FinGenAbGroup::free(1)
    } else {
        FinGenAbGroup::trivial()
    };
    (c, k)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The closed-form answer in degrees `0..=max_degree`.
pub fn closed_form(f: &FamilySpec, max_degree: usize) -> Result<GradedReport> {
    let mut r = GradedReport::default();
    let how = format!("reference: {} closed form", f.name());
    let set_all = |r: &mut GradedReport, h: &dyn Fn(u64) -> Entry| {
        for n in 0..=max_degree {
            r.set_h(n, h(n as u64), &how);
        }
    };
    match f {
        FamilySpec::Grigorchuk => {
            set_all(&mut r, &|n| {
                let k = match n {
                    0 => 0,
                    _ if n % 3 == 0 => n / 3 + 1,
                    _ if n % 3 == 1 => (n - 1) / 3,
                    _ => (n + 1) / 3,
                };
                z2(k).into()
            });
            r.set_k(
                FinGenAbGroup::free(1),
                FinGenAbGroup::free(1),
                Some("0".into()),
                &how,
            );
        }
        FamilySpec::GrigorchukErschler => {
            set_all(&mut r, &|n| {
                match n {
                    0 => FinGenAbGroup::trivial(),
                    _ if n % 2 == 0 => z2(n / 2 + 1),
                    _ if n % 4 == 1 => z2(n.div_ceil(2)),
                    _ => z2((n - 1) / 2).direct_sum(&cyc(4)),
                }
                .into()
            });
            r.set_k(
                FinGenAbGroup::free(2),
                FinGenAbGroup::free(2),
                Some("0".into()),
                &how,
            );
            r.flag(format!(
                "{REFERENCE_ONLY}: integral homology in degrees >= 1"
            ));
        }
        FamilySpec::Ggs { m } => {
            let m = *m;
            set_all(&mut r, &|n| if n == 0 { cyc(m - 1) } else { cyc(m) }.into());
            let h0 = cyc(m - 1);
            let k1 = FinGenAbGroup::free(m as usize - 1);
            r.set_k(h0.direct_sum(&k1), k1, Some(unit_in(&h0)), &how);
        }
        FamilySpec::SunicPrimitive { p, .. } => {
            let p = *p;
            set_all(&mut r, &|n| {
                if n == 0 {
                    cyc(p - 1).into()
                } else {
                    Entry::Unknown("finite, no closed form".into())
                }
            });
            let h0 = cyc(p - 1);
            r.set_k(
                h0.direct_sum(&FinGenAbGroup::free(1)),
                FinGenAbGroup::free(1),
                Some(unit_in(&h0)),
                &how,
            );
        }
        FamilySpec::Hanoi => {
            set_all(&mut r, &|n| if n == 0 { cyc(2) } else { z2(3) }.into());
            r.set_k(
                FinGenAbGroup::free(3),
                FinGenAbGroup::free(3),
                Some("0".into()),
                &how,
            );
            r.flag(format!(
                "{REFERENCE_ONLY}: homology in degrees >= 1 and K-theory"
            ));
        }
        FamilySpec::Aleshin => {
            set_all(&mut r, &|n| {
                if n == 1 {
                    cyc(2)
                } else {
                    FinGenAbGroup::trivial()
                }
                .into()
            });
            r.set_k(FinGenAbGroup::trivial(), cyc(2), Some("0".into()), &how);
        }
        FamilySpec::Lamplighter { invariants } => {
            let order: u64 = invariants.iter().product();
            set_all(&mut r, &|n| {
                if n <= 1 {
                    cyc(order - 1)
                } else {
                    FinGenAbGroup::trivial()
                }
                .into()
            });
            r.flag(format!("{REFERENCE_ONLY}: homology in degrees >= 2"));
            r.flag("K-theory not given in closed form");
        }
        FamilySpec::BaumslagSolitar { m, n } => {
            let (m, n) = (*m, *n);
            set_all(&mut r, &|q| {
                match q {
                    0 => cyc(n - 1),
                    1 => cyc(m - 1).direct_sum(&cyc(n - 1)),
                    2 => cyc(m - 1),
                    _ => FinGenAbGroup::trivial(),
                }
                .into()
            });
            let k0 = splice_extension(&cyc(n - 1), &cyc(m - 1));
            if k0.resolved.is_none() {
                r.flag("K0: extension undetermined");
            }
            r.set_k(k0, cyc(m - 1).direct_sum(&cyc(n - 1)), None, &how);
            r.flag(format!("{REFERENCE_ONLY}: K-theory"));
        }
        FamilySpec::Sausage { n } => {
            let n = *n;
            let h = |q: u64| -> FinGenAbGroup {
                match q {
                    0 => FinGenAbGroup::trivial(),
                    _ if q < n => FinGenAbGroup::cyclic_power(
                        (1u64 << (n - q)) - 1,
                        (binomial(n, q) / n) as usize,
                    ),
                    _ if q == n => FinGenAbGroup::cyclic(if n % 2 == 0 { 2 } else { 0 }),
                    _ if q == n + 1 => FinGenAbGroup::free(if n % 2 == 1 { 1 } else { 0 }),
                    _ => FinGenAbGroup::trivial(),
                }
            };
            set_all(&mut r, &|q| h(q).into());
            let sum = |start: u64| {
                (start..=n + 1)
                    .step_by(2)
                    .fold(FinGenAbGroup::trivial(), |acc, q| acc.direct_sum(&h(q)))
            };
            r.set_k(sum(0), sum(1), Some("0".into()), &how);
        }
        FamilySpec::GraphBouquet { d } => {
            let (c, k) = scalar_pieces(*d as i64);
            let unit = if *d == 1 {
                "1 in Z".to_string()
            } else {
                unit_in(&c)
            };
            graph_like(&mut r, c, k, unit, max_degree, &how);
        }
        FamilySpec::GraphCycle { n } => {
            // id minus a cyclic permutation: coker is Z by the coordinate
            // sum, so the all-ones vector maps to n.
            let z = FinGenAbGroup::free(1);
            graph_like(&mut r, z.clone(), z, format!("{n} in Z"), max_degree, &how);
        }
        FamilySpec::Katsura { a, b } => {
            let (ca, ka, cb, kb) = if *a == 0 {
                (
                    FinGenAbGroup::free(1),
                    FinGenAbGroup::trivial(),
                    FinGenAbGroup::free(1),
                    FinGenAbGroup::trivial(),
                )
            } else {
                let (ca, ka) = scalar_pieces(*a as i64);
                let (cb, kb) = scalar_pieces(*b);
                (ca, ka, cb, kb)
            };
            set_all(&mut r, &|n| {
                match n {
                    0 => ca.clone(),
                    1 => ka.direct_sum(&cb),
                    2 => kb.clone(),
                    _ => FinGenAbGroup::trivial(),
                }
                .into()
            });
            r.set_k(ca.direct_sum(&kb), ka.direct_sum(&cb), None, &how);
        }
    }
    Ok(r)
}

fn graph_like(
    r: &mut GradedReport,
    h0: FinGenAbGroup,
    h1: FinGenAbGroup,
    unit: String,
    max_degree: usize,
    how: &str,
) {
    for n in 0..=max_degree {
        let g = match n {
            0 => h0.clone(),
            1 => h1.clone(),
            _ => FinGenAbGroup::trivial(),
        };
        r.set_h(n, g, how);
    }
    r.set_k(h0, h1, Some(unit), how);
}
