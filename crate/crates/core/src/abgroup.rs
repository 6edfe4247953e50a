//! Presented abelian groups and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
pub use crate::linalg::FinGenAbGroup;
use crate::linalg::{cokernel, integer_kernel, smith_normal_form, solve_with, IntMatrix};

/// `Z^generators / colspan(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbPresentation {
    generators: usize,
    relations: IntMatrix,
}

impl AbPresentation {
    pub fn new(relations: IntMatrix) -> Self {
        AbPresentation {
            generators: relations.rows(),
            relations,
        }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(IntMatrix::zeros(generators, 0))
    }

    /// `Z/n_1 + ... + Z/n_k` presented on `k` generators; a zero gives a
    /// free summand.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        Self::new(IntMatrix::diagonal(orders))
    }

    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_orders(&[n.into()])
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn group(&self) -> FinGenAbGroup {
        cokernel(&self.relations)
    }

    /// Whether `v` lies in the relation lattice.
    pub fn is_relation(&self, v: &[BigInt]) -> bool {
        solve_with(&smith_normal_form(&self.relations), v).is_some()
    }
}

/// A homomorphism of presented groups, given on generators: column `j` is
/// the image of source generator `j` in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbMap {
    pub source: AbPresentation,
    pub target: AbPresentation,
    pub matrix: IntMatrix,
}

impl AbMap {
    /// Build and check well-definedness.
    pub fn new(source: AbPresentation, target: AbPresentation, matrix: IntMatrix) -> Result<Self> {
        let m = AbMap {
            source,
            target,
            matrix,
        };
        m.check()?;
        Ok(m)
    }

    /// The identity on a presentation.
    pub fn identity(p: &AbPresentation) -> Self {
        AbMap {
            source: p.clone(),
            target: p.clone(),
            matrix: IntMatrix::identity(p.generators()),
        }
    }

    /// Every source relation must land in the target relation lattice.
    pub fn check(&self) -> Result<()> {
        if self.matrix.rows() != self.target.generators
            || self.matrix.cols() != self.source.generators
        {
            return Err(Error::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                self.matrix.rows(),
                self.matrix.cols(),
                self.target.generators,
                self.source.generators
            )));
        }
        let image = &self.matrix * &self.source.relations;
        let snf = smith_normal_form(&self.target.relations);
        for j in 0..image.cols() {
            if solve_with(&snf, &image.column(j)).is_none() {
                return Err(Error::IllDefinedMap { relation: j });
            }
        }
        Ok(())
    }

    /// Pointwise sum of two maps with the same source and target.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension(
                "sum of maps with different domains".into(),
            ));
        }
        Ok(AbMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.try_add(&other.matrix)?,
        })
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension(
                "difference of maps with different domains".into(),
            ));
        }
        Ok(AbMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.try_sub(&other.matrix)?,
        })
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        Ok(AbMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.try_mul(&first.matrix)?,
        })
    }

    /// `id - self` for an endomorphism.
    pub fn identity_minus(&self) -> Result<Self> {
        if self.source != self.target {
            return Err(Error::Dimension("id - f needs an endomorphism".into()));
        }
        AbMap::identity(&self.source).sub(self)
    }

    pub fn cokernel(&self) -> FinGenAbGroup {
        let stacked = self
            .matrix
            .hstack(&self.target.relations)
            .expect("shapes checked at construction");
        cokernel(&stacked)
    }

    /// `{x : f(x) = 0} / relations`. The preimage lattice of the target
    /// relations is computed first, then the source relations are expressed
    /// in a basis of it.
    pub fn kernel(&self) -> FinGenAbGroup {
        let g = self.source.generators;
        let neg_rel = self.target.relations.map(|x| -x.clone());
        let stacked = self
            .matrix
            .hstack(&neg_rel)
            .expect("shapes checked at construction");
        let k = integer_kernel(&stacked);
        let top: Vec<usize> = (0..g).collect();
        let all_cols: Vec<usize> = (0..k.cols()).collect();
        let spanning = k.select(&top, &all_cols);

        // A basis of colspan(spanning): the first `rank` columns of spanning * V.
        let snf = smith_normal_form(&spanning);
        let kv = &spanning * &snf.v;
        let basis_cols: Vec<usize> = (0..snf.rank).collect();
        let basis = kv.select(&top, &basis_cols);

        let bsnf = smith_normal_form(&basis);
        let mut coords = Vec::with_capacity(self.source.relations.cols());
        for j in 0..self.source.relations.cols() {
            let c = solve_with(&bsnf, &self.source.relations.column(j))
                .expect("source relations lie in the kernel of a well-defined map");
            coords.push(c);
        }
        let rel = IntMatrix::from_columns(&coords, basis.cols()).expect("consistent lengths");
        cokernel(&rel)
    }
}

/// `0 -> sub -> E -> quot -> 0` where `E` is only known up to extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionResult {
    pub sub: FinGenAbGroup,
    pub quot: FinGenAbGroup,
    pub resolved: Option<FinGenAbGroup>,
}

impl fmt::Display for ExtensionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.resolved {
            Some(g) => write!(f, "{g}"),
            None => write!(
                f,
                "extension of {} by {} (undetermined)",
                self.quot, self.sub
            ),
        }
    }
}

/// The extension resolves to the direct sum when the quotient is free or
/// either end is trivial; otherwise it is left undetermined.
pub fn splice_extension(sub: &FinGenAbGroup, quot: &FinGenAbGroup) -> ExtensionResult {
    let resolved = (quot.is_free() || sub.is_trivial()).then(|| sub.direct_sum(quot));
    ExtensionResult {
        sub: sub.clone(),
        quot: quot.clone(),
        resolved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(orders: &[i64]) -> AbPresentation {
        AbPresentation::from_orders(&orders.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn well_definedness() {
        // Z/4 -> Z/2, 1 -> 1 is fine; Z/2 -> Z/4, 1 -> 1 is not.
        assert!(AbMap::new(pres(&[4]), pres(&[2]), IntMatrix::from_i64(&[[1]])).is_ok());
        assert!(matches!(
            AbMap::new(pres(&[2]), pres(&[4]), IntMatrix::from_i64(&[[1]])),
            Err(Error::IllDefinedMap { relation: 0 })
        ));
        assert!(AbMap::new(pres(&[2]), pres(&[4]), IntMatrix::from_i64(&[[2]])).is_ok());
    }

    #[test]
    fn kernel_and_cokernel() {
        let f = AbMap::new(pres(&[4]), pres(&[2]), IntMatrix::from_i64(&[[1]])).unwrap();
        assert_eq!(f.kernel().to_string(), "Z/2");
        assert_eq!(f.cokernel().to_string(), "0");
        let f = AbMap::new(pres(&[2]), pres(&[4]), IntMatrix::from_i64(&[[2]])).unwrap();
        assert_eq!(f.kernel().to_string(), "0");
        assert_eq!(f.cokernel().to_string(), "Z/2");
        // multiplication by 2 on Z
        let f = AbMap::new(pres(&[0]), pres(&[0]), IntMatrix::from_i64(&[[2]])).unwrap();
        assert_eq!(f.kernel().to_string(), "0");
        assert_eq!(f.cokernel().to_string(), "Z/2");
        // zero map Z + Z/6 -> Z/3
        let f = AbMap::new(pres(&[0, 6]), pres(&[3]), IntMatrix::from_i64(&[[0, 0]])).unwrap();
        assert_eq!(f.kernel().to_string(), "Z + Z/6");
    }

    #[test]
    fn identity_minus_on_grigorchuk_quotient() {
        // (Z/2)^3 with a -> 0, b -> a + c, c -> a + b + c
        let v = pres(&[2, 2, 2]);
        let phi = AbMap::new(
            v.clone(),
            v.clone(),
            IntMatrix::from_i64(&[[0, 1, 1], [0, 0, 1], [0, 1, 1]]),
        )
        .unwrap();
        let d = phi.identity_minus().unwrap();
        assert_eq!(d.cokernel().to_string(), "0");
        assert_eq!(d.kernel().to_string(), "0");
    }

    #[test]
    fn splicing_rules() {
        let z2 = FinGenAbGroup::cyclic(2);
        let z = FinGenAbGroup::free(1);
        assert_eq!(splice_extension(&z2, &z).to_string(), "Z + Z/2");
        assert_eq!(
            splice_extension(&FinGenAbGroup::trivial(), &z2).to_string(),
            "Z/2"
        );
        assert_eq!(
            splice_extension(&z2, &FinGenAbGroup::trivial()).to_string(),
            "Z/2"
        );
        let open = splice_extension(&z2, &FinGenAbGroup::cyclic(3));
        assert!(open.resolved.is_none());
        assert_eq!(open.to_string(), "extension of Z/3 by Z/2 (undetermined)");
    }
}
