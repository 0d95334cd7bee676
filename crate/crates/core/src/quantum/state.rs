use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::QuantumError;

pub(crate) const NORM_TOL: f64 = 1e-12;
pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-12;
pub(crate) const PSD_TOL: f64 = 1e-10;

/// Normalized vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already unit-norm (within 1e-12).
    pub fn new(amps: DVector<Complex64>) -> Result<Self, QuantumError> {
        if amps.is_empty() {
            return Err(QuantumError::InvalidDimension(0));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(PureState { amps })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amps: DVector<Complex64>) -> Result<Self, QuantumError> {
        if amps.is_empty() {
            return Err(QuantumError::InvalidDimension(0));
        }
        let norm = amps.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(PureState {
            amps: amps / Complex64::from(norm),
        })
    }

    pub fn basis(d: usize, k: usize) -> Result<Self, QuantumError> {
        if d == 0 {
            return Err(QuantumError::InvalidDimension(d));
        }
        if k >= d {
            return Err(QuantumError::IndexOutOfRange { index: k, len: d });
        }
        let mut amps = DVector::zeros(d);
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(PureState { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64, QuantumError> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            m: &self.amps * self.amps.adjoint(),
        }
    }
}

/// A `d × d` density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks every density-matrix invariant before wrapping `m`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let rho = DensityMatrix { m };
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        DensityMatrix { m }
    }

    pub fn maximally_mixed(d: usize) -> Result<Self, QuantumError> {
        if d == 0 {
            return Err(QuantumError::InvalidDimension(0));
        }
        Ok(DensityMatrix {
            m: DMatrix::identity(d, d) / Complex64::from(d as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Hermitian part's eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            m: self.m.kronecker(&other.m),
        }
    }

    /// Verifies the Hermitian, trace and positivity invariants.
    pub fn check(&self) -> Result<(), QuantumError> {
        let (r, c) = self.m.shape();
        if r != c || r == 0 {
            return Err(QuantumError::NotSquare(r, c));
        }
        if self
            .m
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QuantumError::NonFinite);
        }
        let herm = (&self.m - self.m.adjoint()).camax();
        if herm > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian(herm));
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QuantumError::BadTrace(tr.re));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(QuantumError::NotPositive(min));
        }
        Ok(())
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64, QuantumError> {
        check_dim(self.dim(), other.dim())?;
        let diff = &self.m - &other.m;
        Ok(0.5
            * hermitian_eigenvalues(&diff)
                .iter()
                .map(|l| l.abs())
                .sum::<f64>())
    }
}

/// A state handed over or delivered: either a pure vector or a general mixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(p) => p.dim(),
            QuantumState::Mixed(m) => m.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(p) => p.projector(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    /// Pass probability of the projective test onto `target`.
    pub fn fidelity_to(&self, target: &PureState) -> Result<f64, QuantumError> {
        match self {
            QuantumState::Pure(p) => pure_fidelity(target, p),
            QuantumState::Mixed(m) => fidelity(target, m),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        QuantumState::Mixed(m)
    }
}

fn check_dim(a: usize, b: usize) -> Result<(), QuantumError> {
    if a != b {
        return Err(QuantumError::DimensionMismatch(a, b));
    }
    Ok(())
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::from(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `Tr(ρ |ψ⟩⟨ψ|) = ⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(target: &PureState, delivered: &DensityMatrix) -> Result<f64, QuantumError> {
    check_dim(target.dim(), delivered.dim())?;
    let v = target.amplitudes();
    let f = v.dotc(&(delivered.matrix() * v)).re;
    Ok(f.clamp(0.0, 1.0))
}

/// `|⟨ψ|φ⟩|² / (⟨ψ|ψ⟩⟨φ|φ⟩)`; exactly 1 when both vectors are bit-identical.
pub fn pure_fidelity(target: &PureState, delivered: &PureState) -> Result<f64, QuantumError> {
    let overlap = target.inner(delivered)?.norm_sqr();
    let norms = target.amplitudes().norm_squared() * delivered.amplitudes().norm_squared();
    Ok((overlap / norms).clamp(0.0, 1.0))
}

/// Reduced state of factor `keep` of a state on `(C^d)^⊗n`.
pub fn partial_trace(
    state: &DensityMatrix,
    d: usize,
    n: usize,
    keep: usize,
) -> Result<DensityMatrix, QuantumError> {
    if d == 0 || n == 0 {
        return Err(QuantumError::InvalidDimension(d));
    }
    let total = checked_pow(d, n)?;
    check_dim(state.dim(), total)?;
    if keep >= n {
        return Err(QuantumError::IndexOutOfRange {
            index: keep,
            len: n,
        });
    }
    Ok(DensityMatrix {
        m: reduce_to_factor(state.matrix(), d, n, keep),
    })
}

pub(crate) fn checked_pow(d: usize, n: usize) -> Result<usize, QuantumError> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or(QuantumError::TooLarge { d, n })
}

/// Splits a flat index into (digit of factor `k`, index of the remaining factors).
#[cfg(test)]
pub(crate) fn split_index(idx: usize, d: usize, n: usize, k: usize) -> (usize, usize) {
    let stride = d.pow((n - 1 - k) as u32);
    let hi = idx / (stride * d);
    let digit = (idx / stride) % d;
    let lo = idx % stride;
    (digit, hi * stride + lo)
}

#[inline]
pub(crate) fn join_index(digit: usize, rest: usize, d: usize, n: usize, k: usize) -> usize {
    let stride = d.pow((n - 1 - k) as u32);
    let hi = rest / stride;
    let lo = rest % stride;
    (hi * d + digit) * stride + lo
}

/// Partial trace over every factor except `keep`, for any square operator.
pub(crate) fn reduce_to_factor(
    m: &DMatrix<Complex64>,
    d: usize,
    n: usize,
    keep: usize,
) -> DMatrix<Complex64> {
    let rest = m.nrows() / d;
    let mut out = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rest {
                acc += m[(join_index(a, r, d, n, keep), join_index(b, r, d, n, keep))];
            }
            out[(a, b)] = acc;
        }
    }
    out
}
