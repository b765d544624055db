//! Linear algebra over the prime field `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::numtheory::is_prime;

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // p is prime, Fermat
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u64
}

/// Row-reduces `rows` in place over `F_p` and returns the pivot column of each
/// nonzero row, in order.
pub(crate) fn echelon(rows: &mut [Vec<u64>], width: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = inverse_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if *y != 0 {
                    *x = ((*x as u128 + (p - f) as u128 * *y as u128) % p as u128) as u64;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn reduced_rows(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| reduce(x, p)).collect())
        .collect()
}

pub fn fp_rank(m: &IntMatrix, p: u64) -> Result<usize> {
    check_prime(p)?;
    let mut rows = reduced_rows(m, p);
    Ok(echelon(&mut rows, m.cols(), p).len())
}

/// Standard basis vectors whose classes form a basis of `F_p^rows / im(m)`.
pub fn fp_cokernel_basis(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    check_prime(p)?;
    let mut columns = reduced_rows(&m.transpose(), p);
    let pivots = echelon(&mut columns, m.rows(), p);
    let mut reps = Vec::new();
    let mut next = pivots.iter().peekable();
    for i in 0..m.rows() {
        if next.peek() == Some(&&i) {
            next.next();
            continue;
        }
        let mut e = vec![0u64; m.rows()];
        e[i] = 1;
        reps.push(e);
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        for p in [2, 3, 5, 7] {
            assert_eq!(fp_rank(&IntMatrix::identity(4), p).unwrap(), 4);
            assert!(fp_cokernel_basis(&IntMatrix::identity(4), p).unwrap().is_empty());
        }
    }

    #[test]
    fn p_vanishes_mod_p() {
        for p in [2u64, 3, 5] {
            let m = IntMatrix::from_rows(&[vec![p as i64]]);
            assert_eq!(fp_rank(&m, p).unwrap(), 0);
            assert_eq!(fp_cokernel_basis(&m, p).unwrap(), vec![vec![1]]);
        }
    }

    #[test]
    fn all_ones_mod_two() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(fp_rank(&m, 2).unwrap(), 1);
        let coker = fp_cokernel_basis(&m, 2).unwrap();
        assert_eq!(coker.len(), 1);
        // the representative is not in the image span{(1,1)}
        assert_ne!(coker[0], vec![1, 1]);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(fp_rank(&m, 3).unwrap(), 1);
        assert_eq!(fp_rank(&m, 5).unwrap(), 2);
        let m = IntMatrix::from_rows(&[vec![-1, 4]]);
        assert_eq!(fp_rank(&m, 2).unwrap(), 1);
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(fp_rank(&IntMatrix::identity(1), 4), Err(Error::NotPrime(4)));
        assert_eq!(
            fp_cokernel_basis(&IntMatrix::identity(1), 1),
            Err(Error::NotPrime(1))
        );
    }
}
