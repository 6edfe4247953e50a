//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `Z^free_rank + Z/t_1 + ... + Z/t_k` with `1 < t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FinGenAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinGenAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FinGenAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_invariants([n.into()], 0)
    }

    /// `(Z/n)^k`.
    pub fn cyclic_power(n: impl Into<BigInt>, k: usize) -> Self {
        let n = n.into();
        Self::from_invariants(std::iter::repeat_n(n, k), 0)
    }

    /// Normalise an arbitrary list of cyclic orders plus a free rank.
    /// Signs are ignored, zeros add to the free rank, ones are dropped, and the
    /// rest is regrouped into a divisibility chain.
    pub fn from_invariants(orders: impl IntoIterator<Item = BigInt>, free_rank: usize) -> Self {
        let mut free = free_rank;
        let mut finite = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                free += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        FinGenAbGroup {
            free_rank: free,
            torsion: invariant_chain(finite),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Invariant factors, each greater than one, in divisibility order.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// The order, or None when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|t| t.is_multiple_of(&p)).count()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_invariants(
            self.torsion.iter().chain(&other.torsion).cloned(),
            self.free_rank + other.free_rank,
        )
    }

    /// Number of summands in the rendered form, used for coordinates.
    pub fn num_summands(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

/// Regroup finite cyclic orders into invariant factors by splitting into
/// prime powers and recombining.
fn invariant_chain(orders: Vec<BigInt>) -> Vec<BigInt> {
    if orders.is_empty() {
        return orders;
    }
    // Refine into pairwise coprime bases, then read off valuations.
    let k = orders.len();
    let mut parts: Vec<(BigInt, Vec<u32>)> = Vec::new();
    for b in coprime_base(orders.clone()) {
        let vals: Vec<u32> = orders
            .iter()
            .map(|n| {
                let mut n = n.clone();
                let mut e = 0;
                while n.is_multiple_of(&b) {
                    n /= &b;
                    e += 1;
                }
                e
            })
            .collect();
        parts.push((b, vals));
    }
    // For each base, sort exponents descending; the i-th largest invariant
    // factor collects the i-th largest power of every base.
    let mut factors = vec![BigInt::one(); k];
    for (b, mut vals) in parts {
        vals.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in vals.into_iter().enumerate() {
            factors[i] *= num_traits::pow(b.clone(), e as usize);
        }
    }
    factors.retain(|f| !f.is_one());
    factors.reverse();
    factors
}

/// A set of pairwise coprime integers generating the same multiplicative
/// structure as the input (every input is a product of powers of them).
fn coprime_base(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    loop {
        xs.retain(|x| !x.is_one());
        xs.sort();
        xs.dedup();
        let mut changed = false;
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let g = xs[i].gcd(&xs[j]);
                if !g.is_one() {
                    let (a, b) = (xs[i].clone(), xs[j].clone());
                    xs.remove(j);
                    xs.remove(i);
                    xs.push(g.clone());
                    xs.push(strip(&a, &g));
                    xs.push(strip(&b, &g));
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return xs;
        }
    }
}

fn strip(a: &BigInt, g: &BigInt) -> BigInt {
    let mut a = a.clone();
    while a.is_multiple_of(g) {
        a /= g;
    }
    a
}

impl fmt::Display for FinGenAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".into()),
            r => terms.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == t {
                j += 1;
            }
            let mult = j - i;
            if mult == 1 {
                terms.push(format!("Z/{t}"));
            } else {
                terms.push(format!("(Z/{t})^{mult}"));
            }
            i = j;
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FromStr for FinGenAbGroup {
    type Err = Error;

    /// Accepts the rendered form, e.g. `Z^2 + Z/2 + (Z/4)^3`, as well as
    /// `Z/0`, `Z/1` and `0`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |d: &str| Error::parse("group", format!("{d} in {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut g = Self::trivial();
        for term in s.split('+') {
            let term = term.trim();
            let (base, mult) = match term.rsplit_once('^') {
                Some((b, e)) if !b.ends_with('/') => {
                    let e: usize = e.trim().parse().map_err(|_| bad("bad exponent"))?;
                    (b.trim(), e)
                }
                _ => (term, 1),
            };
            let base = base
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .unwrap_or(base);
            let piece = if base == "Z" {
                Self::free(mult)
            } else if base == "0" {
                Self::trivial()
            } else if let Some(n) = base.strip_prefix("Z/") {
                let n: BigInt = n.trim().parse().map_err(|_| bad("bad modulus"))?;
                Self::cyclic_power(n, mult)
            } else {
                return Err(bad("unknown term"));
            };
            g = g.direct_sum(&piece);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FinGenAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        let x = FinGenAbGroup::from_invariants([2, 3, 0, 4, 1, 0].map(BigInt::from), 0);
        assert_eq!(x.to_string(), "Z^2 + Z/2 + Z/12");
        assert_eq!(FinGenAbGroup::cyclic(0).to_string(), "Z");
        assert_eq!(FinGenAbGroup::cyclic(1).to_string(), "0");
        assert_eq!(FinGenAbGroup::cyclic(-6).to_string(), "Z/6");
        assert_eq!(FinGenAbGroup::cyclic_power(2, 3).to_string(), "(Z/2)^3");
    }

    #[test]
    fn chain_regrouping() {
        assert_eq!(g("Z/4 + Z/6").to_string(), "Z/2 + Z/12");
        assert_eq!(g("Z/2 + Z/3").to_string(), "Z/6");
        assert_eq!(g("Z/12 + Z/18 + Z/8").to_string(), "Z/2 + Z/12 + Z/72");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "0",
            "Z",
            "Z^3",
            "Z/2",
            "(Z/2)^2",
            "Z^2 + Z/2 + Z/12",
            "Z + (Z/3)^2 + Z/9",
        ] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("Z/1").to_string(), "0");
        assert_eq!(g("Z/0").to_string(), "Z");
        assert!("Q/2".parse::<FinGenAbGroup>().is_err());
    }

    #[test]
    fn orders_and_ranks() {
        let x = g("(Z/2)^2 + Z/4");
        assert_eq!(x.order(), Some(BigInt::from(16)));
        assert_eq!(x.p_rank(2), 3);
        assert_eq!(x.p_rank(3), 0);
        assert_eq!(g("Z + Z/2").order(), None);
    }
}
