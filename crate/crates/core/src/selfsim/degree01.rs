//! The map induced on abelianisations and low-degree homology.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abgroup::{AbMap, AbPresentation, FinGenAbGroup};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, solve_with, IntMatrix};
use crate::report::{Entry, GradedReport};

use super::action::SelfSimilarAction;
use super::word::Word;

/// The abelianisation of the acting group: a presentation together with
/// the image of every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub presentation: AbPresentation,
    /// `images[g]` has one coordinate per generator of the presentation.
    pub images: Vec<Vec<BigInt>>,
}

impl Abelianization {
    /// `Z/n_1 + ... + Z/n_k` with `n_i = 0` for a free summand.
    pub fn from_invariants(invariants: &[BigInt], images: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = invariants.len();
        if let Some(bad) = images.iter().position(|v| v.len() != k) {
            return Err(Error::Schema(format!(
                "abelianisation image {bad} has the wrong length (expected {k})"
            )));
        }
        Ok(Abelianization {
            presentation: AbPresentation::from_orders(invariants),
            images,
        })
    }

    pub fn group(&self) -> FinGenAbGroup {
        self.presentation.group()
    }

    /// Image of a word.
    pub fn image(&self, w: &Word) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.presentation.generators()];
        for &(g, e) in w.syllables() {
            for (vi, gi) in v.iter_mut().zip(&self.images[g]) {
                *vi += gi * BigInt::from(e);
            }
        }
        v
    }

    fn image_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.images, self.presentation.generators())
            .expect("lengths checked")
    }
}

/// Assumptions supplied with the input that the engine cannot check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Assumptions {
    /// Homology of the acting group vanishes from degree two on.
    pub h2_vanishes: bool,
    /// The acting group is free.
    pub free_group_mode: bool,
}

impl Assumptions {
    pub fn higher_homology_vanishes(&self) -> bool {
        self.h2_vanishes || self.free_group_mode
    }
}

/// Degree zero and one (and two, under assumptions) of the groupoid homology.
#[derive(Clone, Debug)]
pub struct Degree01 {
    pub h0: FinGenAbGroup,
    pub h1: FinGenAbGroup,
    /// Present only when higher group homology is assumed to vanish.
    pub h2: Option<FinGenAbGroup>,
    pub phi1: AbMap,
}

impl SelfSimilarAction {
    /// The map on abelianisations sending the class of `g` to the sum of
    /// the classes of its sections.
    pub fn phi1(&self, ab: &Abelianization) -> Result<AbMap> {
        let q: Vec<Vec<BigInt>> = (0..self.num_generators())
            .map(|g| sum_images(ab, self.section_table(g)))
            .collect();
        induced_map(ab, &q)
    }

    /// The same map computed as transfer to the stabiliser of `x` followed by
    /// the section map at `x`, summing over Schreier elements one coset at a
    /// time. Needs a transitive action.
    pub fn phi1_via_transfer(&self, ab: &Abelianization, x: usize) -> Result<AbMap> {
        let st = self.stabilizer(x)?;
        if st.orbit.len() != self.degree() {
            return Err(Error::NotTransitive {
                orbits: self.orbits().len(),
            });
        }
        let q: Vec<Vec<BigInt>> = (0..self.num_generators())
            .map(|g| {
                let secs: Vec<Word> = st
                    .orbit
                    .iter()
                    .map(|&e| {
                        let s = self.schreier_element(&st.transversal, e, g);
                        self.section(&s, &[x])
                    })
                    .collect();
                sum_images(ab, &secs)
            })
            .collect();
        induced_map(ab, &q)
    }

    /// `H_0 = Z/(|X| - 1)` and `H_1 = coker(id - phi1)`; with vanishing
    /// higher group homology also `H_2 = ker(id - phi1)`.
    pub fn degree01(&self, ab: &Abelianization, assume: Assumptions) -> Result<Degree01> {
        if !self.is_transitive() {
            return Err(Error::NotTransitive {
                orbits: self.orbits().len(),
            });
        }
        let phi1 = self.phi1(ab)?;
        let d = phi1.identity_minus()?;
        Ok(Degree01 {
            h0: FinGenAbGroup::cyclic(self.degree() as i64 - 1),
            h1: d.cokernel(),
            h2: assume.higher_homology_vanishes().then(|| d.kernel()),
            phi1,
        })
    }

    /// Homology report up to `max_degree`.
    pub fn degree01_homology(
        &self,
        ab: &Abelianization,
        assume: Assumptions,
        max_degree: usize,
    ) -> Result<GradedReport> {
        let r = self.degree01(ab, assume)?;
        let mut rep = GradedReport::default();
        rep.set_h(0, r.h0, "automaton: Z/(|X|-1)");
        if max_degree >= 1 {
            rep.set_h(1, r.h1, "automaton: coker(id - phi1)");
        }
        match r.h2 {
            Some(h2) => {
                if max_degree >= 2 {
                    rep.set_h(
                        2,
                        h2,
                        "automaton: ker(id - phi1), assuming H_n(G) = 0 for n >= 2",
                    );
                }
                for n in 3..=max_degree {
                    rep.set_h(
                        n,
                        FinGenAbGroup::trivial(),
                        "automaton: assuming H_n(G) = 0 for n >= 2",
                    );
                }
                rep.flag("uses assumption: group homology vanishes in degrees >= 2");
            }
            None => {
                for n in 2..=max_degree {
                    rep.set_h(
                        n,
                        Entry::Unknown("degree >= 2 needs h2_vanishes".into()),
                        "automaton: not computed",
                    );
                }
            }
        }
        Ok(rep)
    }

    /// K-theory for an action of a free group with free abelianisation:
    /// `K_0 = Z/(|X|-1) + ker(id - phi1)` and `K_1 = coker(id - phi1)`.
    pub fn degree01_ktheory_free_group(
        &self,
        ab: &Abelianization,
        assume: Assumptions,
    ) -> Result<GradedReport> {
        if !assume.free_group_mode {
            return Err(Error::Hypothesis(
                "K-theory from an automaton needs free_group_mode".into(),
            ));
        }
        if !ab.group().is_free() {
            return Err(Error::Hypothesis(format!(
                "free_group_mode needs a free abelianisation, got {}",
                ab.group()
            )));
        }
        let r = self.degree01(ab, assume)?;
        let d = r.phi1.identity_minus()?;
        let k0 = r.h0.direct_sum(&d.kernel());
        let k1 = d.cokernel();
        let mut rep = GradedReport::default();
        rep.set_k(
            k0,
            k1,
            Some(unit_in(&r.h0)),
            "automaton: free group exact sequence",
        );
        rep.flag("uses assumption: acting group is free");
        Ok(rep)
    }
}

/// `1 in Z/n`, or `0` when that summand is trivial.
pub(crate) fn unit_in(h0: &FinGenAbGroup) -> String {
    if h0.is_trivial() {
        "0".into()
    } else {
        format!("1 in {h0}")
    }
}

fn sum_images(ab: &Abelianization, words: &[Word]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); ab.presentation.generators()];
    for w in words {
        for (a, b) in acc.iter_mut().zip(ab.image(w)) {
            *a += b;
        }
    }
    acc
}

/// Given the images `q[g]` of generators, find the endomorphism `M` of the
/// abelianisation with `M p_g = q_g` where `p_g` is the image of `g`.
fn induced_map(ab: &Abelianization, q: &[Vec<BigInt>]) -> Result<AbMap> {
    let pres = &ab.presentation;
    let k = pres.generators();
    let p = ab.image_matrix();
    let q = IntMatrix::from_columns(q, k)?;
    // Express each basis vector through generator images modulo relations.
    let aug = p.hstack(pres.relations())?;
    let snf = smith_normal_form(&aug);
    let mut s_cols = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = vec![BigInt::zero(); k];
        e[i] = 1.into();
        let sol = solve_with(&snf, &e).ok_or_else(|| {
            Error::Schema("abelianisation images do not generate the abelianisation".into())
        })?;
        s_cols.push(sol[..p.cols()].to_vec());
    }
    let s = IntMatrix::from_columns(&s_cols, p.cols())?;
    let m = &q * &s;
    // M must reproduce every generator image modulo relations.
    let rel_snf = smith_normal_form(pres.relations());
    let diff = (&m * &p).try_sub(&q)?;
    for j in 0..diff.cols() {
        if solve_with(&rel_snf, &diff.column(j)).is_none() {
            return Err(Error::Hypothesis(format!(
                "sections are incompatible with the abelianisation at generator {j}"
            )));
        }
    }
    AbMap::new(pres.clone(), pres.clone(), m)
}
