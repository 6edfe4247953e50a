//! Mod-2 homology of automorphisms of the Klein four-group, via the
//! Eilenberg-Zilber shuffle map and the Alexander-Whitney splitting on
//! `RP^inf x RP^inf`, and the Grigorchuk computation built on it.

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{binomial_sign_matrix, eigenvalue_one_multiplicity, ModpMatrix};

/// A 2x2 matrix over F_2. Column `j` is the image of basis vector `j`,
/// where `(1,0)` stands for `(b,1)` and `(0,1)` for `(1,c)`.
pub type F2Matrix2 = [[u8; 2]; 2];

/// Largest degree for which the shuffle pipeline is run by
/// [`grigorchuk_homology`].
pub fn shuffle_limit() -> usize {
    20
}

fn image(phi: &F2Matrix2, col: usize) -> (bool, bool) {
    (phi[0][col] & 1 == 1, phi[1][col] & 1 == 1)
}

/// The matrix of `H_n(phi, F_2)` on the basis `e_i (x) e_{n-i}`,
/// `i = 0..=n`: entry `(i, j)` is the coefficient of `e_i (x) e_{n-i}` in
/// the image of `e_j (x) e_{n-j}`.
///
/// Each basis element is expanded into its shuffles, `phi` is applied letter
/// by letter, and the Alexander-Whitney split after `i` letters survives
/// exactly when no letter in either retained factor is the identity.
pub fn klein_mod2(phi: &F2Matrix2, n: usize) -> Result<ModpMatrix> {
    if n > 62 {
        return Err(Error::Schema(format!(
            "degree {n} is too large for the shuffle expansion"
        )));
    }
    let (va, vb) = (image(phi, 0), image(phi, 1));
    let mut out = ModpMatrix::zeros(2, n + 1, n + 1)?;
    let full: u64 = (1u64 << n) - 1;
    for j in 0..=n {
        // Bit t of `s` set means letter t of the shuffle is (b,1).
        for s in subsets_of_size(n, j) {
            // First and second coordinates of phi applied to each letter.
            let first = (if va.0 { s } else { 0 }) | (if vb.0 { !s & full } else { 0 });
            let second = (if va.1 { s } else { 0 }) | (if vb.1 { !s & full } else { 0 });
            // Longest prefix with nontrivial first coordinates, longest
            // suffix with nontrivial second coordinates.
            let lead = (!first & full).trailing_zeros().min(n as u32) as usize;
            let trail = if n == 0 {
                0
            } else {
                ((!second & full) << (64 - n)).leading_zeros().min(n as u32) as usize
            };
            let lo = n - trail;
            for i in lo..=lead.min(n) {
                out.add_at(i, j, 1);
            }
        }
    }
    Ok(out)
}

/// All `n`-bit masks with `k` bits set, in increasing order (Gosper).
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u64 = 1u64 << n;
    let first: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur)
    })
}

/// Companion matrix over F_2 of the monic polynomial with coefficients
/// `f[0] + f[1] x + x^2`.
pub fn companion_matrix(f: [u8; 3]) -> Result<F2Matrix2> {
    if f[2] & 1 != 1 {
        return Err(Error::Schema("polynomial must be monic of degree 2".into()));
    }
    if f[0] & 1 != 1 {
        return Err(Error::Hypothesis(
            "constant term must be nonzero for an automorphism".into(),
        ));
    }
    Ok([[0, f[0] & 1], [1, f[1] & 1]])
}

/// Multiplicative order of an invertible 2x2 matrix over F_2.
pub fn f2_matrix_order(m: &F2Matrix2) -> Result<usize> {
    let mul = |a: &F2Matrix2, b: &F2Matrix2| -> F2Matrix2 {
        let mut c = [[0u8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (a[i][0] & b[0][j]) ^ (a[i][1] & b[1][j]);
            }
        }
        c
    };
    let det = (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0]);
    if det & 1 == 0 {
        return Err(Error::Hypothesis(
            "matrix is not invertible over F_2".into(),
        ));
    }
    let id = [[1, 0], [0, 1]];
    let mut p = *m;
    for k in 1..=6 {
        if p == id {
            return Ok(k);
        }
        p = mul(&p, m);
    }
    unreachable!("GL_2(F_2) has exponent 6")
}

/// `dim H_n` of the groupoid of the Sunic group for a degree-2 polynomial
/// `f` over F_2, as `dim ker(id - H_n(C_f, F_2))`. Needs `C_f` of odd order.
pub fn sunic_mod2_homology(f: [u8; 3], n: usize) -> Result<usize> {
    let c = companion_matrix(f)?;
    let ord = f2_matrix_order(&c)?;
    if ord % 2 == 0 {
        return Err(Error::Hypothesis(format!(
            "C_f has order {ord}, which is divisible by 2; use the reference tables (grigorchuk_erschler)"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    Ok(klein_mod2(&c, n)?.identity_minus()?.nullity())
}

/// One degree of the Grigorchuk groupoid homology with the evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrigorchukDegree {
    pub group: FinGenAbGroup,
    /// From the shuffle pipeline, when `n <= shuffle_limit()`.
    pub shuffle_dim: Option<usize>,
    /// From the eigenvalue-one multiplicity of the fourth power of the
    /// binomial sign matrix.
    pub brauer_dim: usize,
}

/// `H_n` for the Grigorchuk group, computed by the rational Brauer route
/// and, in low degrees, by the shuffle pipeline; the two must agree.
pub fn grigorchuk_homology(n: usize) -> Result<GrigorchukDegree> {
    if n == 0 {
        return Ok(GrigorchukDegree {
            group: FinGenAbGroup::trivial(),
            shuffle_dim: Some(0),
            brauer_dim: 0,
        });
    }
    let a4 = binomial_sign_matrix(n).pow(4)?;
    let brauer_dim = eigenvalue_one_multiplicity(&a4)?;
    let shuffle_dim = if n <= shuffle_limit() {
        Some(sunic_mod2_homology([1, 1, 1], n)?)
    } else {
        None
    };
    if let Some(s) = shuffle_dim {
        if s != brauer_dim {
            return Err(Error::Hypothesis(format!(
                "degree {n}: shuffle pipeline gives {s}, Brauer route gives {brauer_dim}"
            )));
        }
    }
    Ok(GrigorchukDegree {
        group: FinGenAbGroup::cyclic_power(2, brauer_dim),
        shuffle_dim,
        brauer_dim,
    })
}
