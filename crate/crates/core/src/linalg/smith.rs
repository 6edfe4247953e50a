//! Smith normal form with transforms, and what falls out of it: cokernels,
//! integer kernels, and integer solutions of linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fingen::FinGenAbGroup;
use super::matrix::IntMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next and all of them non-negative.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// The number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// The diagonal of `d`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    // row[target] -= q * row[src]
    for j in 0..m.cols() {
        let s = &m[(src, j)];
        if s.is_zero() {
            continue;
        }
        let delta = q * s;
        m[(target, j)] -= delta;
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let s = &m[(i, src)];
        if s.is_zero() {
            continue;
        }
        let delta = q * s;
        m[(i, target)] -= delta;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let x = std::mem::take(&mut m[(i, j)]);
        m[(i, j)] = -x;
    }
}

/// Smith normal form by repeated minimal-pivot elimination.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut rank = 0;

    for t in 0..r.min(c) {
        loop {
            // Smallest nonzero entry in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, rank);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = &a[(i, t)] / &a[(t, t)];
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = &a[(t, j)] / &a[(t, t)];
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Pivot must divide everything that remains.
            let p = a[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
        rank += 1;
    }
    finish(a, u, v, rank)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, rank: usize) -> SmithDecomposition {
    SmithDecomposition { u, d, v, rank }
}

/// `Z^rows / colspan(m)`.
pub fn cokernel(m: &IntMatrix) -> FinGenAbGroup {
    let snf = smith_normal_form(m);
    let mut factors = snf.diagonal();
    factors.truncate(snf.rank);
    FinGenAbGroup::from_invariants(factors, m.rows() - snf.rank)
}

/// A basis of the integer kernel `{x in Z^cols : m x = 0}`, as columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let keep: Vec<usize> = (snf.rank..m.cols()).collect();
    let rows: Vec<usize> = (0..m.cols()).collect();
    snf.v.select(&rows, &keep)
}

/// The rank of the integer kernel, equal to `cols - rank`.
pub fn integer_kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - smith_normal_form(m).rank
}

/// Some integer solution of `m x = b`, or None if there is none.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&smith_normal_form(m), b)
}

/// As [`solve_integer`], reusing a precomputed decomposition of `m`.
pub fn solve_with(snf: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(
        b.len(),
        snf.u.cols(),
        "right-hand side has the wrong length"
    );
    let ub = snf.u.mul_vec(b);
    let cols = snf.v.rows();
    let mut y = vec![BigInt::zero(); cols];
    for (i, x) in ub.iter().enumerate() {
        if i < snf.rank {
            let (q, rem) = x.div_rem(&snf.d[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Coordinates of the class of `v` in `cokernel(m)`, listed in the same
/// order as the summands of the canonical group: free coordinates first,
/// then one residue per torsion factor.
pub fn cokernel_class(m: &IntMatrix, v: &[BigInt]) -> (FinGenAbGroup, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let uv = snf.u.mul_vec(v);
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for (i, x) in uv.into_iter().enumerate() {
        if i < snf.rank {
            let d = &snf.d[(i, i)];
            if !d.is_one() {
                torsion.push(x.mod_floor(d));
            }
        } else {
            free.push(x);
        }
    }
    free.extend(torsion);
    (cokernel(m), free)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn check_contract(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() || !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]) || w[1].is_zero(), "{diag:?}");
            }
        }
    }

    #[test]
    fn diagonal_example() {
        let m = IntMatrix::from_i64(&[[6, 0], [0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), big(&[2, 12]));
        check_contract(&m);
    }

    #[test]
    fn aleshin_identity_minus_phi() {
        let m = IntMatrix::from_i64(&[[1, 0, -2], [-1, 0, 0], [-1, -1, 1]]);
        assert_eq!(smith_normal_form(&m).diagonal(), big(&[1, 1, 2]));
        assert_eq!(cokernel(&m).to_string(), "Z/2");
        assert_eq!(integer_kernel_rank(&m), 0);
    }

    #[test]
    fn empty_matrices() {
        let m = IntMatrix::zeros(2, 0);
        assert_eq!(cokernel(&m).to_string(), "Z^2");
        assert_eq!(integer_kernel(&m).cols(), 0);
        let m = IntMatrix::zeros(0, 3);
        assert_eq!(cokernel(&m).to_string(), "0");
        assert_eq!(integer_kernel_rank(&m), 3);
        check_contract(&IntMatrix::zeros(0, 0));
    }

    #[test]
    fn kernel_columns_are_annihilated() {
        let m = IntMatrix::from_i64(&[[2, 4, 6], [1, 2, 3]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_detects_non_integral() {
        let m = IntMatrix::from_i64(&[[2, 0], [0, 3]]);
        assert_eq!(solve_integer(&m, &big(&[4, 9])), Some(big(&[2, 3])));
        assert_eq!(solve_integer(&m, &big(&[1, 0])), None);
    }

    #[test]
    fn class_in_cokernel() {
        // Z / 4Z, class of 1
        let m = IntMatrix::from_i64(&[[4]]);
        let (g, c) = cokernel_class(&m, &big(&[5]));
        assert_eq!(g.to_string(), "Z/4");
        assert_eq!(c, big(&[1]));
    }

    #[test]
    fn non_coprime_blocks() {
        let m = IntMatrix::from_i64(&[[2, 1, 0], [0, 2, 1], [1, 0, 2]]);
        check_contract(&m);
        assert_eq!(cokernel(&m).to_string(), "Z/9");
    }
}
