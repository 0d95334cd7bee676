//! Unitarily invariant sampling of states and bases, and the measure-and-prepare map.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, PureState, QuantumError};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state in `C^d`: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_sample<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState, QuantumError> {
    match d {
        0 => Err(QuantumError::InvalidDimension(0)),
        1 => PureState::basis(1, 0),
        _ => {
            let v = DVector::from_fn(d, |_, _| complex_gaussian(rng));
            PureState::normalized(v)
        }
    }
}

/// Haar-random `d × d` unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `R`'s diagonal folded into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> Result<DMatrix<Complex64>, QuantumError> {
    if d == 0 {
        return Err(QuantumError::InvalidDimension(0));
    }
    let g = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Measurement in a fixed orthonormal basis followed by re-preparation of the outcome.
#[derive(Debug, Clone)]
pub struct MeasurePrepare {
    basis: DMatrix<Complex64>,
}

impl MeasurePrepare {
    /// Draws the measurement basis from the Haar measure.
    pub fn sample<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self, QuantumError> {
        if d < 2 {
            return Err(QuantumError::InvalidDimension(d));
        }
        Ok(MeasurePrepare {
            basis: haar_unitary(d, rng)?,
        })
    }

    /// Uses the columns of `basis` as the measurement basis.
    pub fn with_basis(basis: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let (r, c) = basis.shape();
        if r != c || r < 2 {
            return Err(QuantumError::NotSquare(r, c));
        }
        let dev = (basis.adjoint() * &basis - DMatrix::identity(r, r)).camax();
        if dev > 1e-10 {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(MeasurePrepare { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis_state(&self, k: usize) -> PureState {
        PureState::normalized(self.basis.column(k).into_owned())
            .expect("basis columns are unit vectors")
    }

    /// Born-rule probabilities of each outcome.
    pub fn probabilities(&self, input: &PureState) -> Result<Vec<f64>, QuantumError> {
        if input.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch(self.dim(), input.dim()));
        }
        Ok((0..self.dim())
            .map(|k| self.basis.column(k).dotc(input.amplitudes()).norm_sqr())
            .collect())
    }

    /// Samples a measurement outcome.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        input: &PureState,
        rng: &mut R,
    ) -> Result<usize, QuantumError> {
        let probs = self.probabilities(input)?;
        let total: f64 = probs.iter().sum();
        let mut u = rng.random::<f64>() * total;
        for (k, p) in probs.iter().enumerate() {
            if u < *p {
                return Ok(k);
            }
            u -= p;
        }
        Ok(probs
            .iter()
            .rposition(|p| *p > 0.0)
            .unwrap_or(probs.len() - 1))
    }

    /// Measures and re-prepares, returning the prepared basis state.
    pub fn apply<R: Rng + ?Sized>(
        &self,
        input: &PureState,
        rng: &mut R,
    ) -> Result<PureState, QuantumError> {
        Ok(self.basis_state(self.measure(input, rng)?))
    }

    /// Outcome-averaged output `Σ_k p_k |b_k⟩⟨b_k|`.
    pub fn average_output(&self, input: &PureState) -> Result<DensityMatrix, QuantumError> {
        let probs = self.probabilities(input)?;
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (k, p) in probs.iter().enumerate() {
            let b = self.basis.column(k);
            m += b * b.adjoint() * Complex64::from(*p);
        }
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }
}

pub fn measure_prepare<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> Result<MeasurePrepare, QuantumError> {
    MeasurePrepare::sample(d, rng)
}

/// Haar-average fidelity of measure-and-prepare in dimension `d`, `2/(d+1)`.
pub fn measure_prepare_fidelity(d: usize) -> Result<f64, QuantumError> {
    if d < 2 {
        return Err(QuantumError::InvalidDimension(d));
    }
    Ok(2.0 / (d as f64 + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{fidelity, pure_fidelity};
    use crate::rng::SimRng;
    use rand::SeedableRng;

    #[test]
    fn samples_are_normalized() {
        let mut rng = SimRng::seed_from_u64(1);
        for d in 1..6 {
            for _ in 0..20 {
                let psi = haar_sample(d, &mut rng).unwrap();
                assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(haar_sample(0, &mut rng).is_err());
        assert_eq!(
            haar_sample(1, &mut rng).unwrap(),
            PureState::basis(1, 0).unwrap()
        );
    }

    #[test]
    fn haar_overlap_moment_is_one_over_d() {
        let mut rng = SimRng::seed_from_u64(2024);
        let trials = 100_000;
        let mean = (0..trials)
            .map(|_| {
                let a = haar_sample(2, &mut rng).unwrap();
                let b = haar_sample(2, &mut rng).unwrap();
                pure_fidelity(&a, &b).unwrap()
            })
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean overlap {mean}");
    }

    #[test]
    fn sampled_unitaries_are_unitary() {
        let mut rng = SimRng::seed_from_u64(9);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng).unwrap();
            let dev = (u.adjoint() * &u - DMatrix::identity(d, d)).camax();
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn basis_eigenstate_is_reprepared_exactly() {
        let mut rng = SimRng::seed_from_u64(4);
        let mp = measure_prepare(3, &mut rng).unwrap();
        for k in 0..3 {
            let b = mp.basis_state(k);
            for _ in 0..10 {
                let out = mp.apply(&b, &mut rng).unwrap();
                assert!(pure_fidelity(&b, &out).unwrap() > 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn average_output_is_a_density_matrix() {
        let mut rng = SimRng::seed_from_u64(8);
        let mp = measure_prepare(4, &mut rng).unwrap();
        let psi = haar_sample(4, &mut rng).unwrap();
        let avg = mp.average_output(&psi).unwrap();
        avg.check().unwrap();
        let p: f64 = mp.probabilities(&psi).unwrap().iter().map(|p| p * p).sum();
        assert!((fidelity(&psi, &avg).unwrap() - p).abs() < 1e-12);
    }

    #[test]
    fn invalid_dimensions_rejected() {
        let mut rng = SimRng::seed_from_u64(0);
        assert!(measure_prepare(1, &mut rng).is_err());
        assert!(measure_prepare_fidelity(1).is_err());
        assert!(MeasurePrepare::with_basis(DMatrix::identity(2, 3)).is_err());
    }
}
