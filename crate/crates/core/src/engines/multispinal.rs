//! Multispinal groups with homocyclic `B = (Z/m)^k`: the character
//! permutation engine for K-theory and the degree-wise homology scaffold.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::abgroup::{splice_extension, AbMap, AbPresentation, ExtensionResult, FinGenAbGroup};
use crate::error::{Error, Result};
use crate::linalg::{cokernel, determinant, integer_kernel_rank, IntMatrix, ModpMatrix};
use crate::report::{Entry, GradedReport, KTheory};
use crate::selfsim::unit_in;

use super::mod2::{f2_matrix_order, klein_mod2, F2Matrix2};

/// Largest number of nontrivial characters the K-theory engine accepts.
const CHARACTER_LIMIT: usize = 729;

/// The value of `Phi` at one letter of `A = Z/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiEntry {
    /// A `k x k` matrix, invertible mod `m`, acting on column vectors.
    Aut(IntMatrix),
    /// A `1 x k` matrix `B -> Z/d`.
    Hom(IntMatrix),
}

/// A multispinal group: `A = Z/d` permuting `d` letters cyclically,
/// `B = (Z/m)^k`, and `phi[a]` for each letter. The separation condition
/// is not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultispinalInput {
    pub d: usize,
    pub modulus: u64,
    pub rank: usize,
    pub phi: Vec<PhiEntry>,
}

impl MultispinalInput {
    pub fn new(d: usize, modulus: u64, rank: usize, phi: Vec<PhiEntry>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Schema(format!("|A| = {d} must be at least 2")));
        }
        if modulus < 2 {
            return Err(Error::Schema(format!(
                "modulus {modulus} must be at least 2"
            )));
        }
        if rank == 0 {
            return Err(Error::Schema("B must be nontrivial".into()));
        }
        if phi.len() != d {
            return Err(Error::Dimension(format!(
                "{} phi entries for |A| = {d}",
                phi.len()
            )));
        }
        let m = BigInt::from(modulus);
        let mut phi = phi;
        for (a, entry) in phi.iter_mut().enumerate() {
            match entry {
                PhiEntry::Aut(mat) => {
                    if mat.rows() != rank || mat.cols() != rank {
                        return Err(Error::Dimension(format!("phi[{a}] must be {rank}x{rank}")));
                    }
                    *mat = mat.map(|x| x.mod_floor(&m));
                    let det = determinant(mat)?.to_integer();
                    if !det.gcd(&m).is_one_int() {
                        return Err(Error::Hypothesis(format!(
                            "phi[{a}] is not invertible mod {modulus}"
                        )));
                    }
                }
                PhiEntry::Hom(mat) => {
                    if mat.rows() != 1 || mat.cols() != rank {
                        return Err(Error::Dimension(format!("phi[{a}] must be 1x{rank}")));
                    }
                    let dd = BigInt::from(d);
                    *mat = mat.map(|x| x.mod_floor(&dd));
                    if mat
                        .entries()
                        .iter()
                        .any(|x| !(x * &m).mod_floor(&dd).is_zero())
                    {
                        return Err(Error::Hypothesis(format!(
                            "phi[{a}] is not a homomorphism (Z/{modulus})^{rank} -> Z/{d}"
                        )));
                    }
                }
            }
        }
        let out = MultispinalInput {
            d,
            modulus,
            rank,
            phi,
        };
        if out.a0().is_empty() {
            return Err(Error::Hypothesis(
                "no letter carries an automorphism of B".into(),
            ));
        }
        Ok(out)
    }

    /// The Sunic group for prime `p` and the monic polynomial with
    /// coefficients `f` (constant term first): `C_f` at letter `p - 1`,
    /// the last coordinate at letter 0, trivial maps in between.
    pub fn sunic(p: u64, f: &[u64]) -> Result<Self> {
        let k = f
            .len()
            .checked_sub(1)
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::Schema("polynomial must have positive degree".into()))?;
        if f[k] % p != 1 {
            return Err(Error::Schema("polynomial must be monic".into()));
        }
        if p > 64 {
            return Err(Error::Schema(format!("p = {p} is too large")));
        }
        let mut c = IntMatrix::zeros(k, k);
        for i in 1..k {
            c[(i, i - 1)] = BigInt::from(1);
        }
        for (i, &fi) in f[..k].iter().enumerate() {
            c[(i, k - 1)] = BigInt::from((p - fi % p) % p);
        }
        let mut last = IntMatrix::zeros(1, k);
        last[(0, k - 1)] = BigInt::from(1);
        let d = p as usize;
        let mut phi: Vec<PhiEntry> = (0..d)
            .map(|_| PhiEntry::Hom(IntMatrix::zeros(1, k)))
            .collect();
        phi[0] = PhiEntry::Hom(last);
        phi[d - 1] = PhiEntry::Aut(c);
        MultispinalInput::new(d, p, k, phi)
    }

    /// The GGS group on `m` letters with defining vector `e`:
    /// `b = (a^{e_0}, ..., a^{e_{m-2}}, b)`.
    pub fn ggs(m: usize, e: &[i64]) -> Result<Self> {
        if e.len() + 1 != m {
            return Err(Error::Dimension(format!(
                "GGS over {m} letters needs {} exponents",
                m - 1
            )));
        }
        let mut phi: Vec<PhiEntry> = e
            .iter()
            .map(|&x| PhiEntry::Hom(IntMatrix::from_i64(&[[x]])))
            .collect();
        phi.push(PhiEntry::Aut(IntMatrix::from_i64(&[[1]])));
        MultispinalInput::new(m, m as u64, 1, phi)
    }

    /// Letters carrying an automorphism.
    pub fn a0(&self) -> Vec<usize> {
        (0..self.d)
            .filter(|&a| matches!(self.phi[a], PhiEntry::Aut(_)))
            .collect()
    }

    pub fn automorphisms(&self) -> Vec<&IntMatrix> {
        self.phi
            .iter()
            .filter_map(|e| match e {
                PhiEntry::Aut(m) => Some(m),
                PhiEntry::Hom(_) => None,
            })
            .collect()
    }

    /// `m^k`, or an error when that is beyond the character limit.
    fn group_order(&self) -> Result<usize> {
        (self.modulus as usize)
            .checked_pow(self.rank as u32)
            .filter(|&n| n - 1 <= CHARACTER_LIMIT)
            .ok_or(Error::BoundExceeded {
                bound: CHARACTER_LIMIT,
            })
    }

    fn decode(&self, mut idx: usize) -> Vec<u64> {
        let m = self.modulus as usize;
        (0..self.rank)
            .map(|_| {
                let c = idx % m;
                idx /= m;
                c as u64
            })
            .collect()
    }

    fn encode(&self, v: &[u64]) -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.modulus as usize + c as usize)
    }

    /// `mat * v mod m`, reading `mat` transposed when asked.
    fn apply(&self, mat: &IntMatrix, v: &[u64], transpose: bool) -> Vec<u64> {
        let m = self.modulus;
        (0..self.rank)
            .map(|i| {
                let s: u64 = (0..self.rank)
                    .map(|j| {
                        let x = if transpose {
                            &mat[(j, i)]
                        } else {
                            &mat[(i, j)]
                        };
                        x.to_u64().expect("reduced entry") * v[j] % m
                    })
                    .sum();
                s % m
            })
            .collect()
    }

    /// The permutation of `B` (or of its characters) induced by `mat`.
    fn permutation(&self, mat: &IntMatrix, on_characters: bool) -> Result<Vec<usize>> {
        let n = self.group_order()?;
        let mut perm: Vec<usize> = (0..n)
            .map(|x| self.encode(&self.apply(mat, &self.decode(x), on_characters)))
            .collect();
        if on_characters {
            // Characters transform by the inverse transpose: chi_c o M^{-1}
            // is chi_{c'} with M^T c' = c.
            let mut inv = vec![0; n];
            for (x, &y) in perm.iter().enumerate() {
                inv[y] = x;
            }
            perm = inv;
        }
        Ok(perm)
    }

    /// `T = sum over A_0 of the character permutation matrices`, on the
    /// nontrivial characters in mixed-radix order.
    pub fn character_matrix(&self) -> Result<IntMatrix> {
        let n = self.group_order()? - 1;
        let mut t = IntMatrix::zeros(n, n);
        for mat in self.automorphisms() {
            let perm = self.permutation(mat, true)?;
            for c in 1..=n {
                t[(perm[c] - 1, c - 1)] += 1;
            }
        }
        Ok(t)
    }
}

trait IsOne {
    fn is_one_int(&self) -> bool;
}

impl IsOne for BigInt {
    fn is_one_int(&self) -> bool {
        *self == BigInt::from(1)
    }
}

/// `K_0 = Z/(d-1) + coker(id - T)`, `K_1 = ker(id - T)`, with the unit the
/// generator of the first summand.
pub fn multispinal_k_engine(m: &MultispinalInput) -> Result<KTheory> {
    let id_minus_t = m.character_matrix()?.identity_minus()?;
    let h0 = FinGenAbGroup::cyclic(m.d - 1);
    let k0 = h0.direct_sum(&cokernel(&id_minus_t));
    let k1 = FinGenAbGroup::free(integer_kernel_rank(&id_minus_t));
    Ok(KTheory {
        k0: k0.into(),
        k1: k1.into(),
        unit_class: Some(unit_in(&h0)),
    })
}

/// Number of orbits of the single automorphism on `B \ {0}`.
pub fn sunic_orbit_count(m: &MultispinalInput) -> Result<usize> {
    let auts = m.automorphisms();
    if auts.len() != 1 {
        return Err(Error::Hypothesis(format!(
            "orbit count needs exactly one automorphism, found {}",
            auts.len()
        )));
    }
    let perm = m.permutation(auts[0], false)?;
    let mut seen = vec![false; perm.len()];
    let mut orbits = 0;
    for start in 1..perm.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
        }
    }
    Ok(orbits)
}

/// `H_n(Z/m)`: `Z` in degree 0, `Z/m` in odd degrees, 0 otherwise.
pub fn cyclic_group_homology(m: u64, n: usize) -> FinGenAbGroup {
    match n {
        0 => FinGenAbGroup::free(1),
        _ if n % 2 == 1 => FinGenAbGroup::cyclic(m),
        _ => FinGenAbGroup::trivial(),
    }
}

/// The two pieces around `H_n` of the groupoid and their splice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaffoldPieces {
    /// `coker(id - sum of H_n(Phi_a))`.
    pub coker: FinGenAbGroup,
    /// `ker(id - sum of H_{n-1}(Phi_a))`, zero for `n = 1`.
    pub ker: FinGenAbGroup,
    pub extension: ExtensionResult,
}

fn sum_maps(maps: &[AbMap], degree: usize) -> Result<AbMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::Dimension(format!("no maps given in degree {degree}")))?;
    rest.iter().try_fold(first.clone(), |acc, f| {
        if f.source != acc.source || f.target != acc.target {
            return Err(Error::Dimension(format!(
                "maps in degree {degree} use different presentations"
            )));
        }
        acc.add(f)
    })
}

/// `maps[q]` lists `H_q(Phi_a)` for the automorphism letters `a`, all on
/// one presentation of `H_q(B)`. Needs `n >= 1`; `H_0` is `Z/(d-1)`.
pub fn multispinal_h_scaffold(maps: &[Vec<AbMap>], n: usize) -> Result<ScaffoldPieces> {
    if n == 0 {
        return Err(Error::Schema(
            "degree 0 is Z/(d-1) and has no scaffold".into(),
        ));
    }
    let top = maps
        .get(n)
        .ok_or_else(|| Error::Dimension(format!("no maps for degree {n}")))?;
    let sum = sum_maps(top, n)?;
    if sum.source != sum.target {
        return Err(Error::Dimension(format!(
            "degree {n} maps are not endomorphisms"
        )));
    }
    let coker = sum.identity_minus()?.cokernel();
    let ker = if n >= 2 {
        let below = sum_maps(&maps[n - 1], n - 1)?;
        if below.source != below.target {
            return Err(Error::Dimension(format!(
                "degree {} maps are not endomorphisms",
                n - 1
            )));
        }
        below.identity_minus()?.kernel()
    } else {
        FinGenAbGroup::trivial()
    };
    let extension = splice_extension(&coker, &ker);
    Ok(ScaffoldPieces {
        coker,
        ker,
        extension,
    })
}

/// `H_q(u)` on `H_q(Z/m)` for each unit `u`: multiplication by `u^i` in
/// degree `2i - 1`.
fn cyclic_maps(m: u64, units: &[BigInt], q: usize) -> Result<Vec<AbMap>> {
    let pres = if q == 0 {
        AbPresentation::free(1)
    } else if q % 2 == 1 {
        AbPresentation::cyclic(m)
    } else {
        AbPresentation::free(0)
    };
    let modulus = BigInt::from(m);
    units
        .iter()
        .map(|u| {
            let mat = match q {
                0 => IntMatrix::identity(1),
                _ if q % 2 == 1 => {
                    let i = (q as u32).div_ceil(2);
                    IntMatrix::from_rows(vec![vec![u.modpow(&BigInt::from(i), &modulus)]])?
                }
                _ => IntMatrix::zeros(0, 0),
            };
            AbMap::new(pres.clone(), pres.clone(), mat)
        })
        .collect()
}

/// The single automorphism of a Sunic-type input over `(Z/2)^2` with `d = 2`,
/// when its order is odd.
fn odd_klein_automorphism(m: &MultispinalInput) -> Option<F2Matrix2> {
    if m.d != 2 || m.modulus != 2 || m.rank != 2 {
        return None;
    }
    let auts = m.automorphisms();
    let phi = klein_matrix(auts.first()?);
    (auts.len() == 1 && f2_matrix_order(&phi).ok()? % 2 == 1).then_some(phi)
}

fn klein_matrix(mat: &IntMatrix) -> F2Matrix2 {
    let bit = |i, j| (mat[(i, j)].to_u64().unwrap_or(0) & 1) as u8;
    [[bit(0, 0), bit(0, 1)], [bit(1, 0), bit(1, 1)]]
}

/// Homology in degrees `0..=max_degree` and K-theory.
///
/// Cyclic `B` goes through the scaffold. For `d = 2` and `B = (Z/2)^2` with
/// one automorphism of odd order, `H_n` is the F_2-vector space of
/// dimension `dim ker(id - H_n(C, F_2))`. Other inputs get H_0 and K only.
pub fn multispinal_homology(m: &MultispinalInput, max_degree: usize) -> Result<GradedReport> {
    let mut r = GradedReport::default();
    r.set_h(
        0,
        FinGenAbGroup::cyclic(m.d - 1),
        "multispinal: H_0 = Z/(d - 1)",
    );
    if m.rank == 1 {
        let units: Vec<BigInt> = m
            .automorphisms()
            .iter()
            .map(|a| a[(0, 0)].clone())
            .collect();
        let maps = (0..=max_degree)
            .map(|q| cyclic_maps(m.modulus, &units, q))
            .collect::<Result<Vec<_>>>()?;
        for n in 1..=max_degree {
            let pieces = multispinal_h_scaffold(&maps, n)?;
            if pieces.extension.resolved.is_none() {
                r.flag(format!("H{n}: extension undetermined"));
            }
            r.set_h(
                n,
                pieces.extension,
                "multispinal: coker(id - sum H_n(Phi_a)) and ker(id - sum H_{n-1}(Phi_a))",
            );
        }
    } else if let Some(phi) = odd_klein_automorphism(m) {
        for n in 1..=max_degree {
            let dim = klein_mod2(&phi, n)?.identity_minus()?.nullity();
            r.set_h(
                n,
                FinGenAbGroup::cyclic_power(2, dim),
                "multispinal: (Z/2)^dim ker(id - H_n(C, F_2))",
            );
        }
    } else {
        for n in 1..=max_degree {
            r.set_h(
                n,
                Entry::Unknown("no engine for this B; see the reference tables".into()),
                "multispinal: not computed",
            );
        }
        r.flag("higher homology not computed for this multispinal input");
    }
    let k = multispinal_k_engine(m)?;
    r.set_k(
        k.k0,
        k.k1,
        k.unit_class,
        "multispinal: characters, coker and ker of id - T",
    );
    Ok(r)
}

/// Mod-2 homology for `B = (Z/2)^2`: `dim H_n = null(id - X_n) +
/// null(id - X_{n-1})` for `n >= 2`, `null(id - X_1)` for `n = 1`, where
/// `X_n` is the sum over `A_0` of `H_n(Phi_a, F_2)`.
pub fn multispinal_mod2_homology(m: &MultispinalInput, max_degree: usize) -> Result<GradedReport> {
    if m.modulus != 2 || m.rank != 2 {
        return Err(Error::Hypothesis("mod-2 engine needs B = (Z/2)^2".into()));
    }
    let phis: Vec<F2Matrix2> = m.automorphisms().into_iter().map(klein_matrix).collect();
    let nullity = |n: usize| -> Result<usize> {
        let mut x = ModpMatrix::zeros(2, n + 1, n + 1)?;
        for phi in &phis {
            let k = klein_mod2(phi, n)?;
            for i in 0..=n {
                for j in 0..=n {
                    x.add_at(i, j, k.get(i, j));
                }
            }
        }
        Ok(x.identity_minus()?.nullity())
    };
    let mut r = GradedReport::default();
    r.flag("coefficients F2");
    let h0 = if m.d % 2 == 1 { 1 } else { 0 };
    r.set_h(
        0,
        FinGenAbGroup::cyclic_power(2, h0),
        "multispinal: F_2 / (d - 1)",
    );
    let mut prev = None;
    for n in 1..=max_degree {
        let here = nullity(n)?;
        let dim = here + if n >= 2 { prev.unwrap_or(0) } else { 0 };
        r.set_h(
            n,
            FinGenAbGroup::cyclic_power(2, dim),
            "multispinal: ker and coker of id - sum H_n(Phi_a, F_2)",
        );
        prev = Some(here);
    }
    Ok(r)
}
