use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::group::{invariants_of_cokernel, PresentedGroup};
use super::matrix::IntMatrix;
use super::snf::{snf_parts, Track};
use crate::error::{Error, Result};

/// Solves `R c = v` over the integers for a fixed `R` and many right-hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    rows: usize,
    cols: usize,
    u: IntMatrix,
    v: IntMatrix,
    diagonal: Vec<BigInt>,
}

impl IntegerSolver {
    pub fn new(r: &IntMatrix) -> Self {
        let parts = snf_parts(
            r,
            Track {
                left: true,
                right: true,
                right_inverse: false,
            },
        );
        IntegerSolver {
            rows: r.rows(),
            cols: r.cols(),
            u: parts.u.expect("tracked"),
            v: parts.v.expect("tracked"),
            diagonal: parts.diagonal.into_iter().take_while(|d| !d.is_zero()).collect(),
        }
    }

    /// Some integer solution, or `None` when `v` is outside the column lattice.
    pub fn solve(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                v.len(),
                self.rows
            )));
        }
        let y = self.u.mul_vec(v)?;
        let rank = self.diagonal.len();
        let mut z = vec![BigInt::zero(); self.cols];
        for (k, d) in self.diagonal.iter().enumerate() {
            let (q, r) = y[k].div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            z[k] = q;
        }
        if y[rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(self.v.mul_vec(&z)?))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }
}

/// Columns form a basis of a sublattice of `Z^ambient_dim`.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    ambient_dim: usize,
    basis: IntMatrix,
    solver: OnceLock<IntegerSolver>,
}

impl PartialEq for LatticeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis == other.basis
    }
}

impl LatticeBasis {
    pub fn new(basis: IntMatrix) -> Result<Self> {
        let solver = IntegerSolver::new(&basis);
        if solver.diagonal.len() != basis.cols() {
            return Err(Error::LinearlyDependent);
        }
        Ok(LatticeBasis {
            ambient_dim: basis.rows(),
            basis,
            solver: OnceLock::from(solver),
        })
    }

    /// Caller guarantees independent columns.
    pub(crate) fn from_independent(basis: IntMatrix) -> Self {
        LatticeBasis {
            ambient_dim: basis.rows(),
            basis,
            solver: OnceLock::new(),
        }
    }

    pub fn standard(dim: usize) -> Self {
        Self::from_independent(IntMatrix::identity(dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    fn solver(&self) -> &IntegerSolver {
        self.solver.get_or_init(|| IntegerSolver::new(&self.basis))
    }

    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.solver().solve(v)?.ok_or(Error::NotInLattice)
    }
}

/// `c` with `K c = v`, or `NotInLattice`.
pub fn coordinates_in_lattice(v: &[BigInt], k: &LatticeBasis) -> Result<Vec<BigInt>> {
    k.coordinates(v)
}

/// Whether the map of generators `f` induces an isomorphism `source → target`.
/// Both groups must be finite.
pub fn presented_map_is_iso(
    f: &IntMatrix,
    source: &PresentedGroup,
    target: &PresentedGroup,
) -> Result<bool> {
    if f.rows() != target.gens || f.cols() != source.gens {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, expected {}x{}",
            f.rows(),
            f.cols(),
            target.gens,
            source.gens
        )));
    }
    let source_inv = source.invariants();
    let target_inv = target.invariants();
    if !source_inv.is_finite() || !target_inv.is_finite() {
        return Err(Error::InfiniteGroupUnsupported);
    }
    check_well_defined(f, source, target)?;
    let surjective = invariants_of_cokernel(&f.hstack(&target.relations)?).is_trivial();
    Ok(surjective && source_inv == target_inv)
}

/// Every source relation maps into the span of the target relations.
pub fn check_well_defined(
    f: &IntMatrix,
    source: &PresentedGroup,
    target: &PresentedGroup,
) -> Result<()> {
    let images = f.mul(&source.relations)?;
    if images.is_zero() {
        return Ok(());
    }
    let solver = IntegerSolver::new(&target.relations);
    for j in 0..images.cols() {
        let col = images.column(j);
        if col.iter().all(Zero::is_zero) {
            continue;
        }
        if !solver.contains(&col)? {
            return Err(Error::NotWellDefined(j));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn coordinates_examples() {
        let k = LatticeBasis::standard(3);
        assert_eq!(coordinates_in_lattice(&v(&[0, 0, 0]), &k).unwrap(), v(&[0, 0, 0]));
        assert_eq!(coordinates_in_lattice(&v(&[4, -1, 7]), &k).unwrap(), v(&[4, -1, 7]));
        let k = LatticeBasis::new(IntMatrix::from_rows(&[vec![2], vec![4]])).unwrap();
        assert_eq!(coordinates_in_lattice(&v(&[6, 12]), &k).unwrap(), v(&[3]));
        assert_eq!(
            coordinates_in_lattice(&v(&[1, 2]), &k),
            Err(Error::NotInLattice)
        );
        assert_eq!(
            coordinates_in_lattice(&v(&[1, 1]), &k),
            Err(Error::NotInLattice)
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![1, 2]]);
        assert_eq!(LatticeBasis::new(m), Err(Error::LinearlyDependent));
    }

    #[test]
    fn iso_examples() {
        let z2 = PresentedGroup::cyclic_sum(&v(&[2]));
        assert!(presented_map_is_iso(&IntMatrix::identity(1), &z2, &z2).unwrap());
        assert!(!presented_map_is_iso(&IntMatrix::zeros(1, 1), &z2, &z2).unwrap());
        let z4 = PresentedGroup::cyclic_sum(&v(&[4]));
        assert!(!presented_map_is_iso(&IntMatrix::identity(1), &z4, &z2).unwrap());
        // Z/2 → Z/4 by 1 ↦ 1 is not well defined
        assert_eq!(
            presented_map_is_iso(&IntMatrix::identity(1), &z2, &z4),
            Err(Error::NotWellDefined(0))
        );
        // Z/2 ⊕ Z/3 → Z/6
        let src = PresentedGroup::cyclic_sum(&v(&[2, 3]));
        let z6 = PresentedGroup::cyclic_sum(&v(&[6]));
        let f = IntMatrix::from_rows(&[vec![3, 2]]);
        assert!(presented_map_is_iso(&f, &src, &z6).unwrap());
        let free = PresentedGroup::free(1);
        assert_eq!(
            presented_map_is_iso(&IntMatrix::identity(1), &free, &free),
            Err(Error::InfiniteGroupUnsupported)
        );
    }
}
