//! Projector onto the symmetric subspace of `(C^d)^⊗n`.
//!
//! The dense projector is the average of the `n!` permutation operators,
//! enumerated explicitly for `n <= 8`. An orthonormal basis of the subspace
//! (normalized orbit sums over occupation patterns) is kept alongside it; the
//! cloner works through that factor so it never multiplies `d^n`-sized
//! matrices.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::checked_pow;
use super::QuantumError;

/// Largest `d^n` accepted for dense representations.
pub const MAX_DENSE_DIM: usize = 4096;

/// Largest copy count for which permutations are enumerated.
pub const MAX_ENUMERATED_COPIES: usize = 8;

#[derive(Debug, Clone)]
pub struct SymmetricProjector {
    d: usize,
    n: usize,
    matrix: DMatrix<Complex64>,
    isometry: DMatrix<Complex64>,
}

impl SymmetricProjector {
    pub fn new(d: usize, n: usize) -> Result<Self, QuantumError> {
        let isometry = symmetric_isometry(d, n)?;
        let matrix = if n <= MAX_ENUMERATED_COPIES {
            permutation_average(d, n)?
        } else {
            &isometry * isometry.adjoint()
        };
        Ok(SymmetricProjector {
            d,
            n,
            matrix,
            isometry,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    /// `d^n`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Columns form an orthonormal basis of the symmetric subspace, so `V V† = P`.
    pub fn isometry(&self) -> &DMatrix<Complex64> {
        &self.isometry
    }

    pub fn rank(&self) -> usize {
        self.isometry.ncols()
    }
}

/// `binomial(n + d − 1, n)`.
pub fn symmetric_dimension(d: usize, n: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (d as u128 - 1 + k) / k;
    }
    acc as usize
}

fn check_size(d: usize, n: usize) -> Result<usize, QuantumError> {
    if d == 0 {
        return Err(QuantumError::InvalidDimension(d));
    }
    if n == 0 {
        return Err(QuantumError::InvalidCopies(n));
    }
    let total = checked_pow(d, n)?;
    if total > MAX_DENSE_DIM {
        return Err(QuantumError::TooLarge { d, n });
    }
    Ok(total)
}

fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

fn undigits(ds: impl IntoIterator<Item = usize>, d: usize) -> usize {
    ds.into_iter().fold(0, |acc, x| acc * d + x)
}

/// `(1/n!) Σ_π P_π` with every permutation enumerated.
pub(crate) fn permutation_average(d: usize, n: usize) -> Result<DMatrix<Complex64>, QuantumError> {
    let total = check_size(d, n)?;
    if n > MAX_ENUMERATED_COPIES {
        return Err(QuantumError::InvalidCopies(n));
    }
    let basis: Vec<Vec<usize>> = (0..total).map(|i| digits(i, d, n)).collect();
    let mut counts = DMatrix::<f64>::zeros(total, total);
    let mut perms = 0usize;
    for perm in (0..n).permutations(n) {
        perms += 1;
        for (i, ds) in basis.iter().enumerate() {
            let j = undigits(perm.iter().map(|&p| ds[p]), d);
            counts[(j, i)] += 1.0;
        }
    }
    Ok(counts.map(|c| Complex64::new(c / perms as f64, 0.0)))
}

/// Orthonormal basis of the symmetric subspace, one column per occupation pattern.
pub(crate) fn symmetric_isometry(d: usize, n: usize) -> Result<DMatrix<Complex64>, QuantumError> {
    let total = check_size(d, n)?;
    let mut orbits: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for idx in 0..total {
        let mut occupation = vec![0usize; d];
        for digit in digits(idx, d, n) {
            occupation[digit] += 1;
        }
        orbits.entry(occupation).or_default().push(idx);
    }
    let mut v = DMatrix::zeros(total, orbits.len());
    for (col, members) in orbits.values().enumerate() {
        let amp = Complex64::new(1.0 / (members.len() as f64).sqrt(), 0.0);
        for &idx in members {
            v[(idx, col)] = amp;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::hermitian_eigenvalues;

    #[test]
    fn dimension_formula() {
        assert_eq!(symmetric_dimension(2, 2), 3);
        assert_eq!(symmetric_dimension(3, 2), 6);
        assert_eq!(symmetric_dimension(2, 8), 9);
        assert_eq!(symmetric_dimension(4, 3), 20);
        assert_eq!(symmetric_dimension(5, 1), 5);
    }

    #[test]
    fn projector_is_idempotent_with_binomial_rank() {
        for d in 2usize..=4 {
            for n in 1..=4 {
                if d.pow(n as u32) > 256 {
                    continue;
                }
                let p = SymmetricProjector::new(d, n).unwrap();
                let m = p.matrix();
                assert!((m * m - m).camax() < 1e-10, "d={d} n={n}");
                let rank = hermitian_eigenvalues(m)
                    .iter()
                    .filter(|l| **l > 0.5)
                    .count();
                assert_eq!(rank, symmetric_dimension(d, n), "d={d} n={n}");
                assert_eq!(p.rank(), rank);
            }
        }
    }

    #[test]
    fn permutation_sum_matches_orbit_basis() {
        for (d, n) in [(2, 1), (2, 3), (3, 3), (2, 6), (3, 4)] {
            let v = symmetric_isometry(d, n).unwrap();
            let from_basis = &v * v.adjoint();
            let from_perms = permutation_average(d, n).unwrap();
            assert!((from_basis - from_perms).camax() < 1e-12, "d={d} n={n}");
            let gram = v.adjoint() * &v;
            assert!((gram - DMatrix::identity(v.ncols(), v.ncols())).camax() < 1e-12);
        }
    }

    #[test]
    fn large_copy_counts_fall_back_to_orbit_basis() {
        let p = SymmetricProjector::new(2, 10).unwrap();
        assert_eq!(p.rank(), 11);
        assert_eq!(p.dim(), 1024);
    }

    #[test]
    fn size_cap_enforced() {
        assert!(matches!(
            SymmetricProjector::new(2, 13),
            Err(QuantumError::TooLarge { .. })
        ));
        assert!(matches!(
            SymmetricProjector::new(5, 6),
            Err(QuantumError::TooLarge { .. })
        ));
        assert!(SymmetricProjector::new(2, 0).is_err());
        assert!(permutation_average(2, 9).is_err());
    }
}
