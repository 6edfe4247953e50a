use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, cokernel_class, integer_kernel_rank, IntMatrix};
use crate::report::{class_in, GradedReport};

/// A finite directed graph by its adjacency matrix, `A[v][w]` counting
/// edges from `w` to `v`, and the set of regular vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInput {
    pub adjacency: IntMatrix,
    pub regular: Vec<usize>,
}

impl GraphInput {
    /// With `regular = None`, every vertex receiving an edge is regular.
    pub fn new(adjacency: IntMatrix, regular: Option<Vec<usize>>) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::Dimension("adjacency matrix must be square".into()));
        }
        if adjacency.entries().iter().any(Signed::is_negative) {
            return Err(Error::Schema(
                "adjacency entries must be non-negative".into(),
            ));
        }
        let n = adjacency.rows();
        let receiving: Vec<usize> = (0..n)
            .filter(|&v| adjacency.row(v).iter().any(|x| !x.is_zero()))
            .collect();
        let regular = match regular {
            None => receiving,
            Some(mut r) => {
                r.sort_unstable();
                r.dedup();
                if let Some(&v) = r.iter().find(|v| !receiving.contains(v)) {
                    return Err(Error::Schema(format!(
                        "vertex {v} is marked regular but receives no edges"
                    )));
                }
                r
            }
        };
        Ok(GraphInput { adjacency, regular })
    }

    /// `inc - (A')^T`, with `inc` the inclusion of the regular vertices.
    pub fn boundary(&self) -> IntMatrix {
        boundary(&self.adjacency, &self.regular)
    }
}

pub(crate) fn boundary(a: &IntMatrix, rows: &[usize]) -> IntMatrix {
    let n = a.rows();
    let restricted = a.restrict_rows(rows);
    &IntMatrix::inclusion(n, rows) - &restricted.transpose()
}

impl IntMatrix {
    pub(crate) fn restrict_rows(&self, rows: &[usize]) -> IntMatrix {
        let cols: Vec<usize> = (0..self.cols()).collect();
        self.select(rows, &cols)
    }
}

/// `H_0 = K_0 = coker(inc - (A')^T)`, `H_1 = K_1 = ker(inc - (A')^T)`, and
/// nothing above degree one.
pub fn graph_engine(g: &GraphInput, max_degree: usize) -> Result<GradedReport> {
    let m = g.boundary();
    let h0 = cokernel(&m);
    let h1 = FinGenAbGroup::free(integer_kernel_rank(&m));
    let mut r = GradedReport::default();
    r.set_h(0, h0.clone(), "graph: coker(id - A'^T)");
    if max_degree >= 1 {
        r.set_h(1, h1.clone(), "graph: ker(id - A'^T)");
    }
    for n in 2..=max_degree {
        r.set_h(
            n,
            FinGenAbGroup::trivial(),
            "graph: vanishes above degree 1",
        );
    }
    let ones = vec![BigInt::from(1); m.rows()];
    let (_, coords) = cokernel_class(&m, &ones);
    let unit = class_in(&h0, &coords);
    r.set_k(h0, h1, Some(unit), "graph: K_0 = H_0, K_1 = H_1");
    Ok(r)
}
