//! Stabilisers, Schreier generators and section closures.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

use super::action::SelfSimilarAction;
use super::word::Word;

/// The stabiliser of a letter, described by a transversal of its orbit and
/// the Schreier generators `t_{g(e)}^-1 g t_e`.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub basepoint: usize,
    /// The orbit of the basepoint, in discovery order.
    pub orbit: Vec<usize>,
    /// `transversal[e]` maps the basepoint to `e`, for `e` in the orbit.
    pub transversal: Vec<Option<Word>>,
    /// Nontrivial Schreier generators, without repetition.
    pub schreier: Vec<Word>,
    /// `sigma[i]` is the section of `schreier[i]` at the basepoint.
    pub sigma: Vec<Word>,
}

impl SelfSimilarAction {
    /// Transversal by breadth-first search, then Schreier generators.
    pub fn stabilizer(&self, x: usize) -> Result<Stabilizer> {
        if x >= self.degree() {
            return Err(Error::Schema(format!("basepoint {x} is not a letter")));
        }
        let gens = self.generators();
        let mut transversal: Vec<Option<Word>> = vec![None; self.degree()];
        transversal[x] = Some(Word::identity());
        let mut orbit = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(e) = queue.pop_front() {
            for g in 0..self.num_generators() {
                let y = self.perm(g)[e];
                if transversal[y].is_none() {
                    let t = gens.mul(&gens.letter(g), transversal[e].as_ref().expect("visited"));
                    transversal[y] = Some(t);
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut schreier = Vec::new();
        for &e in &orbit {
            for g in 0..self.num_generators() {
                let s = self.schreier_element(&transversal, e, g);
                if !s.is_identity() && seen.insert(s.clone()) {
                    schreier.push(s);
                }
            }
        }
        let sigma = schreier.iter().map(|s| self.section(s, &[x])).collect();
        Ok(Stabilizer {
            basepoint: x,
            orbit,
            transversal,
            schreier,
            sigma,
        })
    }

    /// `t_{g(e)}^-1 g t_e`, possibly trivial.
    pub(crate) fn schreier_element(
        &self,
        transversal: &[Option<Word>],
        e: usize,
        g: usize,
    ) -> Word {
        let gens = self.generators();
        let t_e = transversal[e].as_ref().expect("e lies in the orbit");
        let t_ge = transversal[self.perm(g)[e]]
            .as_ref()
            .expect("orbit is closed");
        gens.product([&gens.inverse(t_ge), &gens.letter(g), t_e])
    }

    /// Close `seed`, its inverses and the identity under taking sections at
    /// letters. Fails once more than `bound` elements have been found.
    pub fn section_closure(&self, seed: &[Word], bound: usize) -> Result<Vec<Word>> {
        let gens = self.generators();
        let mut set: BTreeSet<Word> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = std::iter::once(Word::identity())
            .chain(seed.iter().cloned())
            .chain(seed.iter().map(|w| gens.inverse(w)));
        for w in start {
            if set.insert(w.clone()) {
                queue.push_back(w);
            }
        }
        while let Some(w) = queue.pop_front() {
            if set.len() > bound {
                return Err(Error::BoundExceeded { bound });
            }
            for x in 0..self.degree() {
                let (_, s) = self.act_letter(&w, x);
                if set.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        if set.len() > bound {
            return Err(Error::BoundExceeded { bound });
        }
        let mut v: Vec<Word> = set.into_iter().collect();
        v.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(v)
    }

    /// The closure of the generating set.
    pub fn generator_closure(&self, bound: usize) -> Result<Vec<Word>> {
        let seed: Vec<Word> = (0..self.num_generators())
            .map(|g| self.generators().letter(g))
            .collect();
        self.section_closure(&seed, bound)
    }

    /// Whether every generator occurs among the sections at the basepoint of
    /// the stabiliser's generators.
    pub fn sigma_hits_generators(&self, st: &Stabilizer) -> bool {
        (0..self.num_generators()).all(|g| {
            let l = self.generators().letter(g);
            st.sigma.contains(&l)
        })
    }
}
