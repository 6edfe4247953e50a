//! Linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Anything that can be viewed as a rational matrix.
pub trait AsRational {
    fn as_rational(&self) -> RatMatrix;
}

impl AsRational for IntMatrix {
    fn as_rational(&self) -> RatMatrix {
        self.to_rational()
    }
}

impl AsRational for RatMatrix {
    fn as_rational(&self) -> RatMatrix {
        self.clone()
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            let x = &m[(r, j)] * &inv;
            m[(r, j)] = x;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let delta = &f * &m[(r, j)];
                m[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &impl AsRational) -> usize {
    rref(&mut m.as_rational()).len()
}

/// Dimension of the rational kernel, `cols - rank`.
pub fn kernel_rank(m: &impl AsRational) -> usize {
    let r = m.as_rational();
    r.cols() - rank(&r)
}

/// A basis of the rational kernel, one vector per free column.
pub fn kernel_basis(m: &impl AsRational) -> Vec<Vec<BigRational>> {
    let mut r = m.as_rational();
    let cols = r.cols();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

/// Determinant by Gaussian elimination.
pub fn determinant(m: &impl AsRational) -> Result<BigRational> {
    let mut a = m.as_rational();
    if !a.is_square() {
        return Err(Error::Dimension(
            "determinant of a non-square matrix".into(),
        ));
    }
    let n = a.rows();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != c {
            a.swap_rows(c, p);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let delta = &f * &a[(c, j)];
                a[(i, j)] -= delta;
            }
        }
    }
    Ok(det)
}

/// Inverse over the rationals, None if singular.
pub fn inverse(m: &impl AsRational) -> Result<Option<RatMatrix>> {
    let a = m.as_rational();
    if !a.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut aug = a.hstack(&RatMatrix::identity(n))?;
    let pivots = rref(&mut aug);
    if pivots.iter().filter(|&&c| c < n).count() < n {
        return Ok(None);
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(Some(aug.select(&rows, &cols)))
}

/// All `q`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(q);
    fn rec(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < q - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    rec(0, n, q, &mut cur, &mut out);
    out
}

/// The `q`-th exterior power in the basis of increasing wedges
/// `e_I = e_{i_1} ^ ... ^ e_{i_q}`, subsets ordered lexicographically:
/// entry `(I, J)` is the minor on rows `I` and columns `J`.
pub fn exterior_power(m: &RatMatrix, q: usize) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "exterior power of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    if q > n {
        return Err(Error::ExteriorDegree { q, n });
    }
    let subs = subsets(n, q);
    let mut out = RatMatrix::zeros(subs.len(), subs.len());
    for (a, rows) in subs.iter().enumerate() {
        for (b, cols) in subs.iter().enumerate() {
            out[(a, b)] = determinant(&m.select(rows, cols))?;
        }
    }
    Ok(out)
}

/// `d * m` as an integer matrix, or an error naming the first entry that
/// fails to be integral.
pub fn scale_and_certify_integral(m: &RatMatrix, d: &BigInt) -> Result<IntMatrix> {
    let d = BigRational::from_integer(d.clone());
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let x = &m[(i, j)] * &d;
            if !x.is_integer() {
                return Err(Error::NotIntegral {
                    row: i,
                    col: j,
                    value: x.to_string(),
                });
            }
            out[(i, j)] = x.to_integer();
        }
    }
    Ok(out)
}

/// `(i, j) -> (-1)^i * C(n - i, j)`, of size `(n+1) x (n+1)`.
pub fn binomial_sign_matrix(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        // Row i holds C(n-i, 0..), built incrementally.
        let k = n - i;
        let mut c = BigInt::one();
        for j in 0..=k {
            m[(i, j)] = if i % 2 == 0 { c.clone() } else { -c.clone() };
            c = c * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    m
}

/// Multiplicity of the eigenvalue 1, i.e. `dim ker(M - I)` over Q.
pub fn eigenvalue_one_multiplicity(m: &impl AsRational) -> Result<usize> {
    let r = m.as_rational();
    Ok(kernel_rank(&r.identity_minus()?))
}

/// Result of the floating-point spectral radius estimate. Only ever used as
/// an advisory signal, never to decide an exact answer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralProbe {
    pub estimate: f64,
    pub converged: bool,
}

/// Estimate the spectral radius as `||A^k||^(1/k)` for `k = 2^j`, squaring
/// a rescaled copy of `A` until successive estimates agree to `tol`.
pub fn spectral_radius_probe(m: &RatMatrix, tol: f64) -> SpectralProbe {
    let n = m.rows();
    let mut b: Vec<f64> = m
        .entries()
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    // log of the factor dropped from b so far, so A^k = exp(log_scale) * b.
    let mut log_scale = 0.0;
    let mut k = 1.0f64;
    let mut prev = f64::INFINITY;
    for _ in 0..64 {
        let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return SpectralProbe {
                estimate: if norm == 0.0 { 0.0 } else { f64::NAN },
                converged: norm == 0.0,
            };
        }
        let est = ((norm.ln() + log_scale) / k).exp();
        if (est - prev).abs() < tol {
            return SpectralProbe {
                estimate: est,
                converged: true,
            };
        }
        prev = est;
        for v in &mut b {
            *v /= norm;
        }
        log_scale = 2.0 * (log_scale + norm.ln());
        k *= 2.0;
        b = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                (0..n).map(|t| b[i * n + t] * b[t * n + j]).sum()
            })
            .collect();
    }
    SpectralProbe {
        estimate: prev,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn exterior_square_example() {
        let a = RatMatrix::from_fractions(&[
            [(0, 1), (1, 1), (0, 1)],
            [(0, 1), (0, 1), (1, 1)],
            [(1, 2), (0, 1), (0, 1)],
        ]);
        let l2 = exterior_power(&a, 2).unwrap();
        let want = RatMatrix::from_fractions(&[
            [(0, 1), (0, 1), (1, 1)],
            [(-1, 2), (0, 1), (0, 1)],
            [(0, 1), (-1, 2), (0, 1)],
        ]);
        assert_eq!(l2, want);
        assert_eq!(exterior_power(&a, 0).unwrap(), RatMatrix::identity(1));
        assert_eq!(exterior_power(&a, 3).unwrap()[(0, 0)], q(1, 2));
        assert!(matches!(
            exterior_power(&a, 4),
            Err(Error::ExteriorDegree { q: 4, n: 3 })
        ));
    }

    #[test]
    fn certify_names_entry() {
        let a = RatMatrix::from_fractions(&[[(1, 3), (1, 2)]]);
        match scale_and_certify_integral(&a, &BigInt::from(2)) {
            Err(Error::NotIntegral {
                row: 0,
                col: 0,
                value,
            }) => assert_eq!(value, "2/3"),
            other => panic!("unexpected {other:?}"),
        }
        let ok = scale_and_certify_integral(&a, &BigInt::from(6)).unwrap();
        assert_eq!(ok, IntMatrix::from_i64(&[[2, 3]]));
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial_sign_matrix(0), IntMatrix::from_i64(&[[1]]));
        assert_eq!(
            binomial_sign_matrix(1),
            IntMatrix::from_i64(&[[1, 1], [-1, 0]])
        );
        assert_eq!(
            binomial_sign_matrix(2),
            IntMatrix::from_i64(&[[1, 2, 1], [-1, -1, 0], [1, 0, 0]])
        );
    }

    #[test]
    fn eigen_one_small_cases() {
        let m = binomial_sign_matrix(2).pow(4).unwrap();
        assert_eq!(eigenvalue_one_multiplicity(&m).unwrap(), 1);
        let m = binomial_sign_matrix(3).pow(4).unwrap();
        assert_eq!(eigenvalue_one_multiplicity(&m).unwrap(), 2);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = IntMatrix::from_i64(&[[1, 2], [2, 4]]);
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![q(-2, 1), q(1, 1)]]);
        assert!(inverse(&m).unwrap().is_none());
        let m = IntMatrix::from_i64(&[[2, 1], [1, 1]]);
        let inv = inverse(&m).unwrap().unwrap();
        assert_eq!(
            inv.to_integer().unwrap(),
            IntMatrix::from_i64(&[[1, -1], [-1, 2]])
        );
        assert_eq!(determinant(&m).unwrap(), q(1, 1));
    }

    #[test]
    fn probe_sees_contraction() {
        let a = RatMatrix::from_fractions(&[[(0, 1), (1, 1)], [(1, 2), (0, 1)]]);
        let p = spectral_radius_probe(&a, 1e-9);
        assert!((p.estimate - 0.5f64.sqrt()).abs() < 1e-6, "{p:?}");
    }
}
