use num_traits::{Signed, Zero};

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, integer_kernel_rank, IntMatrix};
use crate::report::GradedReport;

use super::graph::boundary;

/// The data of an Exel-Pardo-Katsura groupoid: matrices `A >= 0` and `B` of
/// the same shape with `B` supported inside the support of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatsuraInput {
    pub a: IntMatrix,
    pub b: IntMatrix,
}

impl KatsuraInput {
    pub fn new(a: IntMatrix, b: IntMatrix) -> Result<Self> {
        if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Dimension(
                "A and B must be square of the same size".into(),
            ));
        }
        if a.entries().iter().any(Signed::is_negative) {
            return Err(Error::Schema("entries of A must be non-negative".into()));
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if a[(i, j)].is_zero() && !b[(i, j)].is_zero() {
                    return Err(Error::Hypothesis(format!(
                        "B[{i}][{j}] = {} is nonzero where A[{i}][{j}] = 0",
                        b[(i, j)]
                    )));
                }
            }
        }
        Ok(KatsuraInput { a, b })
    }

    /// Indices of the nonzero rows of `A`.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.a.rows())
            .filter(|&i| self.a.row(i).iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// `inc - (A')^T` and `inc - (B')^T` after removing the zero rows of `A`.
    pub fn boundaries(&self) -> (IntMatrix, IntMatrix) {
        let keep = self.nonzero_rows();
        (boundary(&self.a, &keep), boundary(&self.b, &keep))
    }
}

pub fn katsura_engine(k: &KatsuraInput, max_degree: usize) -> Result<GradedReport> {
    let (da, db) = k.boundaries();
    let coker_a = cokernel(&da);
    let ker_a = FinGenAbGroup::free(integer_kernel_rank(&da));
    let coker_b = cokernel(&db);
    let ker_b = FinGenAbGroup::free(integer_kernel_rank(&db));

    let mut r = GradedReport::default();
    r.set_h(0, coker_a.clone(), "katsura: coker(id - A'^T)");
    let hs = [
        (
            1,
            ker_a.direct_sum(&coker_b),
            "katsura: ker(id - A'^T) + coker(id - B'^T)",
        ),
        (2, ker_b.clone(), "katsura: ker(id - B'^T)"),
    ];
    for (n, g, how) in hs {
        if n <= max_degree {
            r.set_h(n, g, how);
        }
    }
    for n in 3..=max_degree {
        r.set_h(
            n,
            FinGenAbGroup::trivial(),
            "katsura: vanishes above degree 2",
        );
    }
    r.set_k(
        coker_a.direct_sum(&ker_b),
        ker_a.direct_sum(&coker_b),
        None,
        "katsura: six-term sequence with free kernels",
    );
    Ok(r)
}
