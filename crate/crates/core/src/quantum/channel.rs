use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DensityMatrix, QuantumError};

const COMPLETENESS_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<DMatrix<Complex64>>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    /// Validates shapes and `Σ K†K = I` within 1e-10.
    pub fn new(ops: Vec<DMatrix<Complex64>>) -> Result<Self, QuantumError> {
        let first = ops.first().ok_or(QuantumError::EmptyChannel)?;
        let (d_out, d_in) = first.shape();
        if ops.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(QuantumError::InconsistentKraus);
        }
        let sum = ops
            .iter()
            .fold(DMatrix::<Complex64>::zeros(d_in, d_in), |acc, k| {
                acc + k.adjoint() * k
            });
        let dev = (sum - DMatrix::identity(d_in, d_in)).camax();
        if dev > COMPLETENESS_TOL {
            return Err(QuantumError::NotTracePreserving(dev));
        }
        Ok(KrausChannel { ops, d_in, d_out })
    }

    pub fn identity(d: usize) -> Result<Self, QuantumError> {
        Self::new(vec![DMatrix::identity(d, d)])
    }

    /// Replaces any input with `I/d`, using the `d²` Weyl operators `XᵃZᵇ/d`.
    pub fn fully_depolarizing(d: usize) -> Result<Self, QuantumError> {
        if d == 0 {
            return Err(QuantumError::InvalidDimension(0));
        }
        let omega = 2.0 * std::f64::consts::PI / d as f64;
        let mut ops = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let mut k = DMatrix::zeros(d, d);
                for j in 0..d {
                    let phase = Complex64::from_polar(1.0 / d as f64, omega * (b * j) as f64);
                    k[((j + a) % d, j)] = phase;
                }
                ops.push(k);
            }
        }
        Self::new(ops)
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    pub fn kraus_operators(&self) -> &[DMatrix<Complex64>] {
        &self.ops
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, QuantumError> {
        if rho.dim() != self.d_in {
            return Err(QuantumError::DimensionMismatch(self.d_in, rho.dim()));
        }
        let out = self
            .ops
            .iter()
            .fold(DMatrix::zeros(self.d_out, self.d_out), |acc, k| {
                acc + k * rho.matrix() * k.adjoint()
            });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

pub fn apply_channel(
    ch: &KrausChannel,
    rho: &DensityMatrix,
) -> Result<DensityMatrix, QuantumError> {
    ch.apply(rho)
}
