//! Group words over a finite generating set, in normal form.
//!
//! Generators may carry a finite order, in which case words are normal
//! forms in the free product of the corresponding cyclic groups; otherwise
//! they are freely reduced words.

use std::fmt;

use crate::error::{Error, Result};

/// Names and (optional) orders of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    names: Vec<String>,
    orders: Vec<Option<u64>>,
}

impl Generators {
    pub fn new(names: Vec<String>, orders: Vec<Option<u64>>) -> Result<Self> {
        if names.len() != orders.len() {
            return Err(Error::Schema("one order per generator".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || c == '^') {
                return Err(Error::Schema(format!("bad generator name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Schema(format!("duplicate generator {n:?}")));
            }
        }
        if let Some(o) = orders.iter().flatten().find(|&&o| o < 2) {
            return Err(Error::Schema(format!(
                "generator order {o} must be at least 2"
            )));
        }
        Ok(Generators { names, orders })
    }

    pub fn free(names: &[&str]) -> Self {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![None; names.len()],
        )
        .expect("valid names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self, g: usize) -> Option<u64> {
        self.orders[g]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parse `a b^-1 c^2`; `1`, `e` (unless a generator is called that) and
    /// the empty string denote the identity.
    pub fn parse(&self, s: &str) -> Result<Word> {
        let mut w = Word::identity();
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::parse("word", format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            match self.index(name) {
                Some(g) => w.syllables.push((g, exp)),
                None if matches!(name, "1" | "e" | "ε") => {}
                None => {
                    return Err(Error::parse(
                        "word",
                        format!("unknown generator {name:?} in {s:?}"),
                    ))
                }
            }
        }
        Ok(self.normalize(w))
    }

    pub fn letter(&self, g: usize) -> Word {
        self.normalize(Word {
            syllables: vec![(g, 1)],
        })
    }

    /// Bring a word into normal form: merge neighbours, reduce exponents of
    /// finite-order generators into `1..order`, drop zero exponents.
    pub fn normalize(&self, w: Word) -> Word {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(w.syllables.len());
        for (g, e) in w.syllables {
            let e = self.reduce_exp(g, e);
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    let merged = self.reduce_exp(g, *f + e);
                    if merged == 0 {
                        out.pop();
                    } else {
                        *f = merged;
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { syllables: out }
    }

    fn reduce_exp(&self, g: usize, e: i64) -> i64 {
        match self.orders[g] {
            Some(k) => e.rem_euclid(k as i64),
            None => e,
        }
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut s = a.syllables.clone();
        s.extend_from_slice(&b.syllables);
        self.normalize(Word { syllables: s })
    }

    pub fn product<'a>(&self, ws: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut s = Vec::new();
        for w in ws {
            s.extend_from_slice(&w.syllables);
        }
        self.normalize(Word { syllables: s })
    }

    pub fn inverse(&self, w: &Word) -> Word {
        self.normalize(Word {
            syllables: w.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        })
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> WordDisplay<'a> {
        WordDisplay {
            gens: self,
            word: w,
        }
    }
}

/// A word as a list of syllables `(generator, exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    /// Total number of letters counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &(g, e) in &self.syllables {
            v[g] += e;
        }
        v
    }

    /// Key used to order words: by length, then lexicographically.
    pub fn sort_key(&self) -> (u64, &[(usize, i64)]) {
        (self.len(), &self.syllables)
    }
}

pub struct WordDisplay<'a> {
    gens: &'a Generators,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.gens.name(g))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let g = Generators::free(&["a", "b"]);
        let w = g.parse("a b b^-1 a^-1 b").unwrap();
        assert_eq!(g.display(&w).to_string(), "b");
        let w = g.parse("a a b^2 b^-3").unwrap();
        assert_eq!(g.display(&w).to_string(), "a^2 b^-1");
        assert!(g.parse("").unwrap().is_identity());
        assert!(g.parse("1").unwrap().is_identity());
        assert!(g.parse("c").is_err());
    }

    #[test]
    fn finite_orders() {
        let g = Generators::new(vec!["a".into(), "b".into()], vec![Some(2), Some(3)]).unwrap();
        assert_eq!(g.parse("a^-1").unwrap(), g.parse("a").unwrap());
        assert_eq!(g.display(&g.parse("b^-1").unwrap()).to_string(), "b^2");
        assert!(g.parse("a b a a b^-1 a").unwrap().is_identity());
    }

    #[test]
    fn inverse_cancels() {
        let g = Generators::free(&["x", "y"]);
        let w = g.parse("x y^2 x^-1 y").unwrap();
        assert!(g.mul(&w, &g.inverse(&w)).is_identity());
        assert_eq!(w.exponent_sums(2), vec![0, 3]);
    }
}
