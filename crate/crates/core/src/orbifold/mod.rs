//! Flat orbifolds `Σ\Rᵈ`: descriptions, validation, singular strata and the
//! builtin catalog.

mod catalog;
mod census;
mod subtorus;

pub use catalog::{BuiltinCatalog, Catalog};
pub use census::{singular_strata, ComponentCount, IsotropyType, SingularStratum, StrataCensus};
pub use subtorus::{solve_mod_one, Subtorus};

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::isometry::{group_closure, AffineIsometry, DEFAULT_MAX_ORDER};
use crate::lattice::Lattice;
use crate::linalg::{IntMatrix, RatMatrix, Rational};
use crate::surd::Surd;

/// A generator `γ ∘ L_a` as written by hand: point matrix `M` and shift `a`,
/// both in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGenerator {
    pub matrix: IntMatrix,
    pub a: Vec<Rational>,
}

/// Lattice plus closed holonomy coset representatives (identity first).
#[derive(Clone, Debug, PartialEq)]
pub struct FlatOrbifoldSpec {
    name: String,
    lattice: Lattice,
    generators: Vec<RawGenerator>,
    holonomy: Vec<AffineIsometry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientability {
    Global,
    LocalOnly,
    NotLocal,
}

impl FlatOrbifoldSpec {
    /// Builds the orbifold, closing the generators into the holonomy group.
    pub fn validate(name: impl Into<String>, gram: RatMatrix, generators: Vec<RawGenerator>) -> Result<Self> {
        Self::validate_with_limit(name, gram, generators, DEFAULT_MAX_ORDER)
    }

    pub fn validate_with_limit(
        name: impl Into<String>,
        gram: RatMatrix,
        generators: Vec<RawGenerator>,
        max_order: usize,
    ) -> Result<Self> {
        let lattice = Lattice::new(gram)?;
        let g = lattice.gram().clone();
        let mut isos = Vec::with_capacity(generators.len());
        for (index, raw) in generators.iter().enumerate() {
            let iso = AffineIsometry::from_point_and_shift(raw.matrix.clone(), &raw.a, g.clone())
                .map_err(|e| match e {
                    Error::NotOrthogonal { .. } => Error::NotOrthogonal { index },
                    other => other,
                })?;
            isos.push(iso);
        }
        let holonomy = group_closure(&g, &isos, max_order)?;
        Ok(FlatOrbifoldSpec { name: name.into(), lattice, generators, holonomy })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn gram(&self) -> &Arc<RatMatrix> {
        self.lattice.gram()
    }

    pub fn generators(&self) -> &[RawGenerator] {
        &self.generators
    }

    /// Coset representatives of `F`, identity first.
    pub fn holonomy(&self) -> &[AffineIsometry] {
        &self.holonomy
    }

    pub fn holonomy_order(&self) -> usize {
        self.holonomy.len()
    }

    /// `vol(O) = vol(Rᵈ/Λ)/|F|`.
    pub fn volume(&self) -> Surd {
        self.lattice.covolume().scale(&Rational::new(1.into(), (self.holonomy.len() as i64).into()))
    }

    /// Same orbifold in the lattice basis given by the columns of the unimodular `p`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<Self> {
        let pr = p.to_rational();
        let p_inv = pr.inverse()?;
        if !p_inv.entries().iter().all(crate::linalg::is_integer) {
            return Err(Error::InvalidParameters("basis change is not unimodular".into()));
        }
        let p_inv_int = p_inv.map(|x| x.to_integer());
        let gram = pr.transpose().mul_checked(self.gram())?.mul_checked(&pr)?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                Ok(RawGenerator {
                    matrix: p_inv_int.mul_checked(&g.matrix)?.mul_checked(p)?,
                    a: p_inv.mul_vec(&g.a),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::validate(self.name.clone(), gram, generators)
    }

    /// Global orientability needs every holonomy element orientation preserving;
    /// local orientability only the isotropy groups.
    pub fn orientability(&self) -> Orientability {
        if self.holonomy.iter().all(AffineIsometry::is_orientation_preserving) {
            return Orientability::Global;
        }
        let census = singular_strata(self);
        if census.strata().iter().all(|s| s.orientation_preserving_isotropy) {
            Orientability::LocalOnly
        } else {
            Orientability::NotLocal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use alloc::vec;

    fn gen(m: &[&[i64]], a: &[Rational]) -> RawGenerator {
        RawGenerator { matrix: IntMatrix::from_i64(m), a: a.to_vec() }
    }

    #[test]
    fn validation_examples() {
        let torus = FlatOrbifoldSpec::validate("t", RatMatrix::identity(2), vec![]).unwrap();
        assert_eq!(torus.holonomy_order(), 1);
        let glide1 = gen(&[&[1, 0], &[0, -1]], &[rat(1, 2), rat(0, 1)]);
        let glide2 = gen(&[&[-1, 0], &[0, 1]], &[rat(0, 1), rat(1, 2)]);
        let rp2 = FlatOrbifoldSpec::validate("rp2", RatMatrix::identity(2), vec![glide1, glide2]).unwrap();
        assert_eq!(rp2.holonomy_order(), 4);
        assert_eq!(rp2.volume(), Surd::rational(rat(1, 4)));
    }

    #[test]
    fn generator_errors() {
        let shear = gen(&[&[1, 1], &[0, 1]], &[rat(0, 1), rat(0, 1)]);
        let ok = gen(&[&[-1, 0], &[0, 1]], &[rat(0, 1), rat(0, 1)]);
        let err = FlatOrbifoldSpec::validate("x", RatMatrix::identity(2), vec![ok, shear]).unwrap_err();
        assert_eq!(err, Error::NotOrthogonal { index: 1 });
        let shift = gen(&[&[1, 0], &[0, 1]], &[rat(1, 2), rat(0, 1)]);
        assert_eq!(
            FlatOrbifoldSpec::validate("x", RatMatrix::identity(2), vec![shift]).unwrap_err(),
            Error::NonIntegralIdentityTranslation
        );
    }

    #[test]
    fn basis_change_preserves_group_order() {
        let spec = BuiltinCatalog.lookup("disk_2star22").unwrap();
        let p = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let moved = spec.change_basis(&p).unwrap();
        assert_eq!(moved.holonomy_order(), 4);
        assert_eq!(moved.volume(), spec.volume());
        assert!(spec.change_basis(&IntMatrix::diagonal(&[int(2), int(1)])).is_err());
    }

    #[test]
    fn orientability_examples() {
        let cat = BuiltinCatalog;
        assert_eq!(cat.lookup("torus(3)").unwrap().orientability(), Orientability::Global);
        assert_eq!(cat.lookup("O(4,2)").unwrap().orientability(), Orientability::Global);
        assert_eq!(cat.lookup("O(3,1)").unwrap().orientability(), Orientability::NotLocal);
        assert_eq!(cat.lookup("square_2222").unwrap().orientability(), Orientability::NotLocal);
        assert_eq!(cat.lookup("rp2_22x").unwrap().orientability(), Orientability::LocalOnly);
        assert_eq!(cat.lookup("klein_bottle").unwrap().orientability(), Orientability::LocalOnly);
    }
}
