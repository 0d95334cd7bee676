//! Finite-dimensional quantum states and channels.

mod channel;
mod cloner;
mod haar;
mod state;
mod symmetric;

use thiserror::Error;

pub use channel::{apply_channel, KrausChannel};
pub use cloner::{cloning_fidelity, universal_cloner, UniversalCloner};
pub use haar::{
    haar_sample, haar_unitary, measure_prepare, measure_prepare_fidelity, MeasurePrepare,
};
pub use state::{fidelity, partial_trace, pure_fidelity, DensityMatrix, PureState, QuantumState};
pub use symmetric::{
    symmetric_dimension, SymmetricProjector, MAX_DENSE_DIM, MAX_ENUMERATED_COPIES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid Hilbert space dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid copy count {0}")]
    InvalidCopies(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dense dimension {d}^{n} exceeds the cap of {MAX_DENSE_DIM}")]
    TooLarge { d: usize, n: usize },
    #[error("index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("state vector norm {0} is not 1")]
    NotNormalized(f64),
    #[error("matrix is not square and nonempty: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} is not 1")]
    BadTrace(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("basis matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("channel has no Kraus operators")]
    EmptyChannel,
    #[error("Kraus operators have inconsistent shapes")]
    InconsistentKraus,
    #[error("Kraus operators violate completeness (deviation {0:e})")]
    NotTracePreserving(f64),
}
