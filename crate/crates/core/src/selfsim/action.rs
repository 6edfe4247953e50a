//! Self-similar actions on the tree of finite strings over an alphabet.

use crate::error::{Error, Result};

use super::word::{Generators, Word};

/// A self-similar action given by its generators: each generator permutes
/// the alphabet and has a section at every letter, so that
/// `g(x w) = g(x) (g|_x)(w)`.
#[derive(Clone, Debug)]
pub struct SelfSimilarAction {
    alphabet: Vec<String>,
    gens: Generators,
    perms: Vec<Vec<usize>>,
    inverse_perms: Vec<Vec<usize>>,
    sections: Vec<Vec<Word>>,
    inverse_sections: Vec<Vec<Word>>,
}

impl SelfSimilarAction {
    /// `perms[g][x]` is the image of letter `x` under generator `g`, and
    /// `sections[g][x]` the section of `g` at `x`.
    pub fn new(
        alphabet: Vec<String>,
        gens: Generators,
        perms: Vec<Vec<usize>>,
        sections: Vec<Vec<Word>>,
    ) -> Result<Self> {
        let d = alphabet.len();
        if d == 0 {
            return Err(Error::Schema("alphabet is empty".into()));
        }
        if perms.len() != gens.len() || sections.len() != gens.len() {
            return Err(Error::Schema(
                "one permutation and section list per generator".into(),
            ));
        }
        let mut inverse_perms = Vec::with_capacity(perms.len());
        for (g, p) in perms.iter().enumerate() {
            if p.len() != d {
                return Err(Error::Schema(format!(
                    "permutation of {} has {} entries, alphabet has {d}",
                    gens.name(g),
                    p.len()
                )));
            }
            let mut inv = vec![usize::MAX; d];
            for (x, &y) in p.iter().enumerate() {
                if y >= d || inv[y] != usize::MAX {
                    return Err(Error::Schema(format!(
                        "{} does not permute the alphabet",
                        gens.name(g)
                    )));
                }
                inv[y] = x;
            }
            inverse_perms.push(inv);
        }
        for (g, s) in sections.iter().enumerate() {
            if s.len() != d {
                return Err(Error::Schema(format!(
                    "{} has {} sections, alphabet has {d}",
                    gens.name(g),
                    s.len()
                )));
            }
            if let Some(bad) = s
                .iter()
                .flat_map(|w| w.syllables())
                .find(|(h, _)| *h >= gens.len())
            {
                return Err(Error::Schema(format!(
                    "section uses unknown generator index {}",
                    bad.0
                )));
            }
        }
        let inverse_sections = (0..gens.len())
            .map(|g| {
                (0..d)
                    .map(|y| gens.inverse(&sections[g][inverse_perms[g][y]]))
                    .collect()
            })
            .collect();
        let a = SelfSimilarAction {
            alphabet,
            gens,
            perms,
            inverse_perms,
            sections,
            inverse_sections,
        };
        a.check_orders()?;
        Ok(a)
    }

    /// A generator declared to have order `k` must act trivially with
    /// trivial sections after `k` steps, otherwise the relation is not
    /// compatible with the action.
    fn check_orders(&self) -> Result<()> {
        for g in 0..self.gens.len() {
            let Some(k) = self.gens.order(g) else {
                continue;
            };
            for x in 0..self.degree() {
                let mut y = x;
                let mut pieces = Vec::new();
                for _ in 0..k {
                    pieces.push(self.sections[g][y].clone());
                    y = self.perms[g][y];
                }
                pieces.reverse();
                let sec = self.gens.product(pieces.iter());
                if y != x || !sec.is_identity() {
                    return Err(Error::Schema(format!(
                        "{} is declared of order {k} but its {k}-th power is not trivial at letter {}",
                        self.gens.name(g),
                        self.alphabet[x]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn section_table(&self, g: usize) -> &[Word] {
        &self.sections[g]
    }

    /// Apply a single signed letter to a letter of the alphabet, returning
    /// the image and the section there.
    fn letter_step(&self, g: usize, inverse: bool, x: usize) -> (usize, &Word) {
        if inverse {
            (self.inverse_perms[g][x], &self.inverse_sections[g][x])
        } else {
            (self.perms[g][x], &self.sections[g][x])
        }
    }

    /// Image of the letter `x` under `w`, and the section `w|_x`.
    pub fn act_letter(&self, w: &Word, x: usize) -> (usize, Word) {
        let mut y = x;
        let mut pieces: Vec<&Word> = Vec::new();
        // The rightmost letter acts first.
        for &(g, e) in w.syllables().iter().rev() {
            for _ in 0..e.unsigned_abs() {
                let (z, s) = self.letter_step(g, e < 0, y);
                pieces.push(s);
                y = z;
            }
        }
        pieces.reverse();
        (y, self.gens.product(pieces))
    }

    /// Image of a string under `w`, and the section of `w` at that string.
    pub fn act(&self, w: &Word, s: &[usize]) -> (Vec<usize>, Word) {
        let mut cur = w.clone();
        let mut out = Vec::with_capacity(s.len());
        for &x in s {
            let (y, sec) = self.act_letter(&cur, x);
            out.push(y);
            cur = sec;
        }
        (out, cur)
    }

    pub fn section(&self, w: &Word, s: &[usize]) -> Word {
        self.act(w, s).1
    }

    /// Orbits of the group on the alphabet, each sorted, ordered by their
    /// smallest letter.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut comp = vec![usize::MAX; d];
        let mut orbits = Vec::new();
        for start in 0..d {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = vec![start];
            while let Some(x) = stack.pop() {
                for p in &self.perms {
                    let y = p[x];
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The adding machine: a swaps letters, a|_0 = 1, a|_1 = a.
    fn odometer() -> SelfSimilarAction {
        let gens = Generators::free(&["a"]);
        let a = gens.parse("a").unwrap();
        SelfSimilarAction::new(
            vec!["0".into(), "1".into()],
            gens,
            vec![vec![1, 0]],
            vec![vec![Word::identity(), a]],
        )
        .unwrap()
    }

    #[test]
    fn odometer_adds_one() {
        let t = odometer();
        let a = t.generators().parse("a").unwrap();
        // little-endian binary: 1 1 0 = 3 -> 0 0 1 = 4
        assert_eq!(t.act(&a, &[1, 1, 0]).0, vec![0, 0, 1]);
        let a_inv = t.generators().parse("a^-1").unwrap();
        assert_eq!(t.act(&a_inv, &[0, 0, 1]).0, vec![1, 1, 0]);
        let a5 = t.generators().parse("a^5").unwrap();
        assert_eq!(t.act(&a5, &[0, 0, 0]).0, vec![1, 0, 1]);
        assert!(t.is_transitive());
    }

    #[test]
    fn bad_permutation() {
        let gens = Generators::free(&["a"]);
        let r = SelfSimilarAction::new(
            vec!["0".into(), "1".into()],
            gens,
            vec![vec![0, 0]],
            vec![vec![Word::identity(), Word::identity()]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn order_must_be_compatible() {
        let gens = Generators::new(vec!["a".into()], vec![Some(2)]).unwrap();
        let a = gens.parse("a").unwrap();
        let r = SelfSimilarAction::new(
            vec!["0".into(), "1".into()],
            gens,
            vec![vec![1, 0]],
            vec![vec![Word::identity(), a]],
        );
        assert!(r.is_err(), "the odometer has infinite order");
    }
}
