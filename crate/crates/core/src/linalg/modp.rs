//! Matrices over the prime field F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d <= p / d {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over F_p with entries stored in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ModpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        Ok(m)
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has the wrong length")));
            }
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x % p;
            }
        }
        Ok(m)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.p;
    }

    /// Add `x` to entry `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, x: u64) {
        let c = &mut self.data[i * self.cols + j];
        *c = ((*c as u128 + (x % self.p) as u128) % self.p as u128) as u64;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.p != rhs.p || self.cols != rhs.rows {
            return Err(Error::Dimension("incompatible F_p matrices".into()));
        }
        let mut out = Self::zeros(self.p, self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = ((out.get(i, j) as u128 + a as u128 * rhs.get(k, j) as u128)
                        % self.p as u128) as u64;
                    out.data[i * rhs.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("id - M needs a square matrix".into()));
        }
        let mut out = Self::identity(self.p, self.rows)?;
        for (o, &x) in out.data.iter_mut().zip(&self.data) {
            *o = ((*o as u128 + self.p as u128 - x as u128) % self.p as u128) as u64;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
            let inv = inverse_mod(a[r * cols + c], p);
            for j in c..cols {
                a[r * cols + j] = (a[r * cols + j] as u128 * inv as u128 % p as u128) as u64;
            }
            for i in r + 1..rows {
                let f = a[i * cols + c];
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = (f as u128 * a[r * cols + j] as u128 % p as u128) as u64;
                    a[i * cols + j] = (a[i * cols + j] + p - sub) % p;
                }
            }
            r += 1;
        }
        r
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) works; p is small enough for u128 products.
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Reduce an integer matrix modulo a prime.
pub fn mod_p_reduce(m: &IntMatrix, p: u64) -> Result<ModpMatrix> {
    let mut out = ModpMatrix::zeros(p, m.rows(), m.cols())?;
    let bp = BigInt::from(p);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let r = m[(i, j)].mod_floor(&bp);
            out.set(i, j, r.to_u64().expect("residue fits"));
        }
    }
    Ok(out)
}

pub fn mod_p_rank(m: &IntMatrix, p: u64) -> Result<usize> {
    Ok(mod_p_reduce(m, p)?.rank())
}

pub fn mod_p_nullity(m: &IntMatrix, p: u64) -> Result<usize> {
    Ok(mod_p_reduce(m, p)?.nullity())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite() {
        let m = IntMatrix::from_i64(&[[1]]);
        assert!(matches!(mod_p_rank(&m, 4), Err(Error::NotPrime(4))));
        assert!(matches!(mod_p_rank(&m, 1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn rank_drops_mod_p() {
        let m = IntMatrix::from_i64(&[[2, 0], [0, 3]]);
        assert_eq!(mod_p_rank(&m, 2).unwrap(), 1);
        assert_eq!(mod_p_rank(&m, 3).unwrap(), 1);
        assert_eq!(mod_p_rank(&m, 5).unwrap(), 2);
        assert_eq!(
            mod_p_nullity(&IntMatrix::from_i64(&[[-1, 1]]), 7).unwrap(),
            1
        );
    }

    #[test]
    fn identity_minus_and_product() {
        let m = ModpMatrix::from_rows(2, &[vec![0, 1], vec![1, 1]]).unwrap();
        let m3 = m.mul(&m).unwrap().mul(&m).unwrap();
        assert_eq!(m3, ModpMatrix::identity(2, 2).unwrap());
        assert_eq!(m.identity_minus().unwrap().nullity(), 0);
    }
}
