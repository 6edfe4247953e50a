use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{
    cokernel, determinant, exterior_power, integer_kernel_rank, inverse,
    scale_and_certify_integral, spectral_radius_probe, IntMatrix, RatMatrix, SpectralProbe,
};
use crate::report::{Entry, GradedReport};
use crate::selfsim::unit_in;

use super::{per_degree, Evaluation};

/// A self-similar action of `Z^n` on `d` letters, given by the rational
/// matrix `A` of the virtual endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAbelianInput {
    pub a: RatMatrix,
    pub d: BigInt,
}

impl FreeAbelianInput {
    pub fn new(a: RatMatrix, d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if !a.is_square() {
            return Err(Error::Dimension("A must be square".into()));
        }
        if d < BigInt::from(2) {
            return Err(Error::Schema(format!(
                "alphabet size {d} must be at least 2"
            )));
        }
        Ok(FreeAbelianInput { a, d })
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    /// `T_q = d * Lambda^q(A)`, certified integral.
    pub fn t(&self, q: usize) -> Result<IntMatrix> {
        scale_and_certify_integral(&exterior_power(&self.a, q)?, &self.d)
    }
}

/// The matrix of the sausage automaton on `n` generators: ones on the
/// superdiagonal and `1/2` in the bottom-left corner.
pub fn sausage_matrix(n: usize) -> RatMatrix {
    let mut a = RatMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = BigRational::one();
    }
    if n > 0 {
        a[(n - 1, 0)] += BigRational::new(1.into(), 2.into());
    }
    a
}

/// What the optional contracting/self-replicating checks found.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfReplicatingChecks {
    pub inverse_integral: bool,
    pub probe: SpectralProbe,
    /// True when both hypotheses appear to hold and the assertions ran.
    pub applied: bool,
}

/// `H_q = ker(id - T_{q-1}) + coker(id - T_q)` for `q = 0..=n+1`, and the
/// K-groups as the even and odd sums.
pub fn free_abelian_engine(
    f: &FreeAbelianInput,
    with_checks: bool,
    max_degree: usize,
    mode: Evaluation,
) -> Result<(GradedReport, Option<SelfReplicatingChecks>)> {
    let n = f.rank();
    // (coker(id - T_q), ker(id - T_q)) for q = 0..=n.
    let pieces: Vec<Result<(FinGenAbGroup, FinGenAbGroup, IntMatrix)>> = per_degree(n, mode, |q| {
        let d = f.t(q)?.identity_minus()?;
        Ok((
            cokernel(&d),
            FinGenAbGroup::free(integer_kernel_rank(&d)),
            d,
        ))
    });
    let pieces: Vec<(FinGenAbGroup, FinGenAbGroup, IntMatrix)> =
        pieces.into_iter().collect::<Result<_>>()?;

    let h: Vec<FinGenAbGroup> = (0..=n + 1)
        .map(|q| {
            let ker_prev = if q == 0 {
                FinGenAbGroup::trivial()
            } else {
                pieces[q - 1].1.clone()
            };
            let coker = pieces
                .get(q)
                .map_or_else(FinGenAbGroup::trivial, |p| p.0.clone());
            ker_prev.direct_sum(&coker)
        })
        .collect();

    let mut r = GradedReport::default();
    for (q, g) in h.iter().enumerate().take(max_degree + 1) {
        r.set_h(
            q,
            g.clone(),
            "free abelian: ker(id - d L^{q-1}A) + coker(id - d L^q A)",
        );
    }
    for q in n + 2..=max_degree {
        r.set_h(
            q,
            FinGenAbGroup::trivial(),
            "free abelian: vanishes above rank + 1",
        );
    }
    let even = h
        .iter()
        .step_by(2)
        .fold(FinGenAbGroup::trivial(), |acc, g| acc.direct_sum(g));
    let odd = h
        .iter()
        .skip(1)
        .step_by(2)
        .fold(FinGenAbGroup::trivial(), |acc, g| acc.direct_sum(g));
    let unit = unit_in(&pieces[0].0);
    r.set_k(
        Entry::Group(even),
        Entry::Group(odd),
        Some(unit),
        "free abelian: even/odd sums of homology",
    );

    let checks = if with_checks {
        let c = run_checks(f, &pieces)?;
        if c.applied {
            r.flag(format!(
                "contracting and self-replicating (advisory spectral radius estimate {:.6}); nondegeneracy checks passed",
                c.probe.estimate
            ));
        }
        Some(c)
    } else {
        None
    };
    Ok((r, checks))
}

fn run_checks(
    f: &FreeAbelianInput,
    pieces: &[(FinGenAbGroup, FinGenAbGroup, IntMatrix)],
) -> Result<SelfReplicatingChecks> {
    let n = f.rank();
    let inverse_integral = match inverse(&f.a)? {
        Some(inv) => inv.to_integer().is_some(),
        None => false,
    };
    let probe = spectral_radius_probe(&f.a, 1e-9);
    let applied = inverse_integral && probe.converged && probe.estimate < 1.0;
    if applied {
        let fail = |what: String| {
            Err(Error::Hypothesis(format!(
                "contracting self-replicating action but {what}"
            )))
        };
        if BigInt::one() - &f.d >= BigInt::zero() {
            return fail("1 - d >= 0".into());
        }
        for (q, p) in pieces.iter().enumerate().take(n).skip(1) {
            if determinant(&p.2)?.is_zero() {
                return fail(format!("det(id - T_{q}) = 0"));
            }
        }
        if n > 0 {
            let top = &pieces[n].2;
            let v = top[(0, 0)].clone();
            let det_a = determinant(&f.a)?;
            let want = if det_a.is_positive() {
                BigInt::zero()
            } else {
                BigInt::from(2)
            };
            if v != want {
                return fail(format!("1 - T_n = {v}, expected {want}"));
            }
        }
    }
    Ok(SelfReplicatingChecks {
        inverse_integral,
        probe,
        applied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(r: &GradedReport, upto: usize) -> Vec<String> {
        (0..=upto).map(|n| r.h(n).unwrap().to_string()).collect()
    }

    #[test]
    fn odometer() {
        let f = FreeAbelianInput::new(RatMatrix::from_fractions(&[[(1, 2)]]), 2).unwrap();
        let (r, c) = free_abelian_engine(&f, true, 3, Evaluation::Sequential).unwrap();
        assert_eq!(hs(&r, 3), ["0", "Z", "Z", "0"]);
        assert!(c.unwrap().applied);
    }

    #[test]
    fn sausage_three() {
        let f = FreeAbelianInput::new(sausage_matrix(3), 2).unwrap();
        let (r, c) = free_abelian_engine(&f, true, 5, Evaluation::Sequential).unwrap();
        assert_eq!(hs(&r, 5), ["0", "Z/3", "0", "Z", "Z", "0"]);
        assert!(c.unwrap().applied);
        let k = r.k_theory.unwrap();
        assert_eq!(k.k0.to_string(), "Z");
        assert_eq!(k.k1.to_string(), "Z + Z/3");
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = FreeAbelianInput::new(sausage_matrix(5), 2).unwrap();
        let a = free_abelian_engine(&f, false, 8, Evaluation::Sequential)
            .unwrap()
            .0;
        let b = free_abelian_engine(&f, false, 8, Evaluation::Parallel)
            .unwrap()
            .0;
        assert_eq!(a, b);
    }

    #[test]
    fn non_integral_scaling_rejected() {
        let f = FreeAbelianInput::new(RatMatrix::from_fractions(&[[(1, 3)]]), 2).unwrap();
        let e = free_abelian_engine(&f, false, 2, Evaluation::Sequential).unwrap_err();
        assert!(matches!(e, Error::NotIntegral { row: 0, col: 0, .. }));
    }

    #[test]
    fn degree_zero_is_cyclic() {
        let f = FreeAbelianInput::new(
            RatMatrix::from_fractions(&[[(1, 1), (0, 1)], [(0, 1), (1, 5)]]),
            5,
        )
        .unwrap();
        let (r, _) = free_abelian_engine(&f, false, 0, Evaluation::Sequential).unwrap();
        assert_eq!(r.h(0).unwrap().to_string(), "Z/4");
    }
}
