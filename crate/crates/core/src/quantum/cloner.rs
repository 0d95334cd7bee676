//! Symmetric universal `1 → n` cloning of qudits.
//!
//! The cloner maps `ρ` to `P_sym (ρ ⊗ I^⊗(n−1)) P_sym`, renormalized. Because the
//! partial trace of `P_sym` over all but one factor is proportional to the
//! identity, the normalization is the constant `d / rank(P_sym)` and the map
//! is linear. The single-clone reductions are therefore fixed linear maps on
//! `d × d` matrices, computed once at construction from the projector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{join_index, reduce_to_factor};
use super::symmetric::SymmetricProjector;
use super::{DensityMatrix, QuantumError};

#[derive(Debug, Clone)]
pub struct UniversalCloner {
    d: usize,
    n: usize,
    projector: SymmetricProjector,
    /// One `d² × d²` matrix per output factor, acting on row-major `vec(ρ)`.
    marginal_maps: Vec<DMatrix<Complex64>>,
}

impl UniversalCloner {
    pub fn new(d: usize, n: usize) -> Result<Self, QuantumError> {
        if d < 2 {
            return Err(QuantumError::InvalidDimension(d));
        }
        if n == 0 {
            return Err(QuantumError::InvalidCopies(n));
        }
        let projector = SymmetricProjector::new(d, n)?;
        let mut cloner = UniversalCloner {
            d,
            n,
            projector,
            marginal_maps: Vec::new(),
        };
        cloner.marginal_maps = (0..n).map(|k| cloner.build_marginal_map(k)).collect();
        Ok(cloner)
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    pub fn projector(&self) -> &SymmetricProjector {
        &self.projector
    }

    fn normalization(&self) -> Complex64 {
        Complex64::from(self.d as f64 / self.projector.rank() as f64)
    }

    /// `V† (X ⊗ I) V` for an arbitrary `d × d` operator `X`.
    fn compressed(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = self.projector.isometry();
        let stride = v.nrows() / self.d;
        let mut xv = DMatrix::zeros(v.nrows(), v.ncols());
        for c in 0..v.ncols() {
            for a in 0..self.d {
                for rest in 0..stride {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..self.d {
                        acc += x[(a, b)] * v[(b * stride + rest, c)];
                    }
                    xv[(a * stride + rest, c)] = acc;
                }
            }
        }
        v.adjoint() * xv
    }

    fn build_marginal_map(&self, k: usize) -> DMatrix<Complex64> {
        let (d, n) = (self.d, self.n);
        let v = self.projector.isometry();
        let r = v.ncols();
        let rest_len = v.nrows() / d;
        // Tr_{¬k} |v_c⟩⟨v_c'| for every pair of basis columns.
        let mut blocks = vec![DMatrix::<Complex64>::zeros(d, d); r * r];
        for c in 0..r {
            for cp in 0..r {
                let block = &mut blocks[c * r + cp];
                for a in 0..d {
                    for b in 0..d {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for rest in 0..rest_len {
                            acc += v[(join_index(a, rest, d, n, k), c)]
                                * v[(join_index(b, rest, d, n, k), cp)].conj();
                        }
                        block[(a, b)] = acc;
                    }
                }
            }
        }
        let norm = self.normalization();
        let mut map = DMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let mut e = DMatrix::zeros(d, d);
                e[(a, b)] = Complex64::new(1.0, 0.0);
                let compressed = self.compressed(&e);
                let mut out = DMatrix::<Complex64>::zeros(d, d);
                for c in 0..r {
                    for cp in 0..r {
                        let w = compressed[(c, cp)];
                        if w != Complex64::new(0.0, 0.0) {
                            out += &blocks[c * r + cp] * w;
                        }
                    }
                }
                out *= norm;
                for i in 0..d {
                    for j in 0..d {
                        map[(i * d + j, a * d + b)] = out[(i, j)];
                    }
                }
            }
        }
        map
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<(), QuantumError> {
        if rho.dim() != self.d {
            return Err(QuantumError::DimensionMismatch(self.d, rho.dim()));
        }
        Ok(())
    }

    /// Full `n`-clone output state on `(C^d)^⊗n`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, QuantumError> {
        self.check_input(rho)?;
        let v = self.projector.isometry();
        let joint = v * self.compressed(rho.matrix()) * v.adjoint() * self.normalization();
        Ok(DensityMatrix::from_matrix_unchecked(joint))
    }

    /// Reduced state of clone `k`.
    pub fn marginal(&self, rho: &DensityMatrix, k: usize) -> Result<DensityMatrix, QuantumError> {
        self.check_input(rho)?;
        let map = self
            .marginal_maps
            .get(k)
            .ok_or(QuantumError::IndexOutOfRange {
                index: k,
                len: self.n,
            })?;
        let d = self.d;
        let vec_in = DVector::from_iterator(d * d, rho.matrix().transpose().iter().copied());
        let vec_out = map * vec_in;
        Ok(DensityMatrix::from_matrix_unchecked(
            DMatrix::from_row_slice(d, d, vec_out.as_slice()),
        ))
    }

    pub fn marginals(&self, rho: &DensityMatrix) -> Result<Vec<DensityMatrix>, QuantumError> {
        (0..self.n).map(|k| self.marginal(rho, k)).collect()
    }

    /// Reduced state of clone `k`, by explicit partial trace of [`apply`](Self::apply).
    pub fn marginal_by_partial_trace(
        &self,
        rho: &DensityMatrix,
        k: usize,
    ) -> Result<DensityMatrix, QuantumError> {
        if k >= self.n {
            return Err(QuantumError::IndexOutOfRange {
                index: k,
                len: self.n,
            });
        }
        let joint = self.apply(rho)?;
        Ok(DensityMatrix::from_matrix_unchecked(reduce_to_factor(
            joint.matrix(),
            self.d,
            self.n,
            k,
        )))
    }

    /// Exact Haar-average fidelity of clone `k` to the input, from the entanglement
    /// fidelity of its reduced channel: `(d·F_e + 1)/(d + 1)`.
    pub fn average_marginal_fidelity(&self, k: usize) -> Result<f64, QuantumError> {
        let map = self
            .marginal_maps
            .get(k)
            .ok_or(QuantumError::IndexOutOfRange {
                index: k,
                len: self.n,
            })?;
        let d = self.d as f64;
        let fe = map.trace().re / (d * d);
        Ok((d * fe + 1.0) / (d + 1.0))
    }
}

pub fn universal_cloner(d: usize, n: usize) -> Result<UniversalCloner, QuantumError> {
    UniversalCloner::new(d, n)
}

/// Haar-average single-clone fidelity of the optimal symmetric `1 → n` cloner,
/// `(2n + d − 1) / (n (d + 1))`.
pub fn cloning_fidelity(d: usize, n: usize) -> Result<f64, QuantumError> {
    if d < 2 {
        return Err(QuantumError::InvalidDimension(d));
    }
    if n == 0 {
        return Err(QuantumError::InvalidCopies(n));
    }
    let (d, n) = (d as f64, n as f64);
    Ok((2.0 * n + d - 1.0) / (n * (d + 1.0)))
}
