use super::group::{GroupInvariants, PresentedGroup};
use super::lattice::LatticeBasis;
use super::matrix::IntMatrix;
use super::snf::{invariant_factors, snf_parts, Track};
use crate::error::{Error, Result};

fn check_pair(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<()> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "incoming map lands in rank {} but outgoing map starts from rank {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    Ok(())
}

/// Invariants of `ker(d_out) / im(d_in)`.
///
/// Uses `rank H = dim − rank d_out − rank d_in` and the invariant factors of `d_in`;
/// the kernel of `d_out` is saturated so the torsion of the quotient is that of
/// `coker d_in`.
pub fn homology_invariants(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<GroupInvariants> {
    check_pair(d_in, d_out)?;
    let rank_out = invariant_factors(d_out).len();
    let factors = invariant_factors(d_in);
    let free = d_in.rows() - rank_out - factors.len();
    Ok(GroupInvariants::new(free, factors))
}

/// A basis `K` of `ker(d_out)` and the presentation of `ker(d_out) / im(d_in)`
/// in `K`-coordinates.
pub fn homology_presentation(
    d_in: &IntMatrix,
    d_out: &IntMatrix,
) -> Result<(PresentedGroup, LatticeBasis)> {
    check_pair(d_in, d_out)?;
    let parts = snf_parts(
        d_out,
        Track {
            left: false,
            right: true,
            right_inverse: true,
        },
    );
    let rank = parts.rank();
    let v = parts.v.expect("tracked");
    let v_inv = parts.v_inv.expect("tracked");
    let kernel = LatticeBasis::from_independent(v.right_columns(rank));
    let relations = v_inv.bottom_rows(rank).mul(d_in)?;
    Ok((PresentedGroup::new(kernel.rank(), relations)?, kernel))
}
