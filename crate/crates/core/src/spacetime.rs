//! Causal geometry of Galilean and Minkowski spacetime.
//!
//! Units are chosen with `c = 1`. The lightlike boundary is treated as causal,
//! so "causally precedes" means membership of the closed future cone `J⁺`.
//! Classification near the cone uses an absolute tolerance on the interval
//! value `s² = Δt² − |Δx|²`, [`DEFAULT_TOLERANCE`] unless configured through
//! [`Causality`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `s²` (and on time ordering) used by the free functions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest supported number of spatial dimensions.
pub const MAX_SPATIAL_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("spatial dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("spatial dimension {0} outside 1..=3")]
    UnsupportedDimension(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("events are not timelike separated with the second in the future (s2 = {s2})")]
    NotTimelike { s2: f64 },
    #[error("boost speed {0} is not below the speed of light")]
    Superluminal(f64),
    #[error("invalid sphere parameters: {0}")]
    InvalidSphere(String),
    #[error("event is at proper time {actual} from the origin, expected {expected}")]
    ProperTimeMismatch { expected: f64, actual: f64 },
    #[error("invalid duration: {0}")]
    InvalidDuration(String),
}

/// A spacetime point: time coordinate and spatial position in the scenario frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub t: f64,
    pub x: Vec<f64>,
}

impl Event {
    pub fn new(t: f64, x: impl Into<Vec<f64>>) -> Self {
        Event { t, x: x.into() }
    }

    /// The spatial origin of an `n`-dimensional frame at time `t`.
    pub fn at_origin(t: f64, n: usize) -> Self {
        Event { t, x: vec![0.0; n] }
    }

    pub fn spatial_dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|c| c.is_finite())
    }

    /// Euclidean distance between the spatial positions of two events.
    pub fn spatial_distance(&self, other: &Event) -> Result<f64, SpacetimeError> {
        same_dim(self, other)?;
        Ok(self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt())
    }

    /// The same place, `dt` later.
    pub fn delayed(&self, dt: f64) -> Event {
        Event {
            t: self.t + dt,
            x: self.x.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacetime {
    Galilean,
    Minkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Physics {
    Classical,
    Quantum,
}

/// One of the four combinations of background spacetime and physical theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    pub spacetime: Spacetime,
    pub physics: Physics,
}

impl Regime {
    pub const MINKOWSKI_QUANTUM: Regime = Regime {
        spacetime: Spacetime::Minkowski,
        physics: Physics::Quantum,
    };

    pub fn new(spacetime: Spacetime, physics: Physics) -> Self {
        Regime { spacetime, physics }
    }

    pub fn is_minkowski_quantum(&self) -> bool {
        *self == Self::MINKOWSKI_QUANTUM
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let st = match self.spacetime {
            Spacetime::Galilean => "galilean",
            Spacetime::Minkowski => "minkowski",
        };
        let ph = match self.physics {
            Physics::Classical => "classical",
            Physics::Quantum => "quantum",
        };
        write!(f, "{st}-{ph}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Timelike,
    Lightlike,
    Spacelike,
}

/// Invariant interval value together with its causal class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalClass {
    pub s2: f64,
    pub class: CausalClass,
}

/// Causal-structure queries at a chosen tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Causality {
    pub tol: f64,
}

impl Default for Causality {
    fn default() -> Self {
        Causality {
            tol: DEFAULT_TOLERANCE,
        }
    }
}

impl Causality {
    pub fn new(tol: f64) -> Self {
        Causality { tol }
    }

    pub fn classify_s2(&self, s2: f64) -> CausalClass {
        if s2 > self.tol {
            CausalClass::Timelike
        } else if s2 < -self.tol {
            CausalClass::Spacelike
        } else {
            CausalClass::Lightlike
        }
    }

    pub fn interval(&self, a: &Event, b: &Event) -> Result<IntervalClass, SpacetimeError> {
        let s2 = interval_value(a, b)?;
        Ok(IntervalClass {
            s2,
            class: self.classify_s2(s2),
        })
    }

    /// Whether `b` lies in the closed causal future of `a` under `regime`.
    ///
    /// Galilean spacetime admits instantaneous signals, so only time order matters.
    pub fn causally_precedes(
        &self,
        a: &Event,
        b: &Event,
        regime: Regime,
    ) -> Result<bool, SpacetimeError> {
        same_dim(a, b)?;
        let forward = b.t - a.t >= -self.tol;
        match regime.spacetime {
            Spacetime::Galilean => Ok(forward),
            Spacetime::Minkowski => {
                Ok(forward && self.interval(a, b)?.class != CausalClass::Spacelike)
            }
        }
    }

    pub fn proper_time(&self, a: &Event, b: &Event) -> Result<f64, SpacetimeError> {
        let iv = self.interval(a, b)?;
        if iv.class != CausalClass::Timelike || b.t <= a.t {
            return Err(SpacetimeError::NotTimelike { s2: iv.s2 });
        }
        Ok(iv.s2.sqrt())
    }
}

fn same_dim(a: &Event, b: &Event) -> Result<(), SpacetimeError> {
    if a.x.len() != b.x.len() {
        return Err(SpacetimeError::DimensionMismatch(a.x.len(), b.x.len()));
    }
    Ok(())
}

fn interval_value(a: &Event, b: &Event) -> Result<f64, SpacetimeError> {
    same_dim(a, b)?;
    let dt = b.t - a.t;
    let dx2: f64 = a.x.iter().zip(&b.x).map(|(p, q)| (q - p) * (q - p)).sum();
    Ok(dt * dt - dx2)
}

pub fn interval(a: &Event, b: &Event) -> Result<IntervalClass, SpacetimeError> {
    Causality::default().interval(a, b)
}

pub fn causally_precedes(a: &Event, b: &Event, regime: Regime) -> Result<bool, SpacetimeError> {
    Causality::default().causally_precedes(a, b, regime)
}

pub fn proper_time(a: &Event, b: &Event) -> Result<f64, SpacetimeError> {
    Causality::default().proper_time(a, b)
}

/// A pure Lorentz boost with velocity `v`, `|v| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Boost {
    v: Vec<f64>,
}

impl Boost {
    pub fn new(v: impl Into<Vec<f64>>) -> Result<Self, SpacetimeError> {
        let v = v.into();
        if v.iter().any(|c| !c.is_finite()) {
            return Err(SpacetimeError::NonFinite);
        }
        let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if speed >= 1.0 {
            return Err(SpacetimeError::Superluminal(speed));
        }
        Ok(Boost { v })
    }

    pub fn velocity(&self) -> &[f64] {
        &self.v
    }

    pub fn gamma(&self) -> f64 {
        let v2: f64 = self.v.iter().map(|c| c * c).sum();
        1.0 / (1.0 - v2).sqrt()
    }

    /// Coordinates of `e` in the frame moving with velocity `v`.
    pub fn apply(&self, e: &Event) -> Result<Event, SpacetimeError> {
        if e.x.len() != self.v.len() {
            return Err(SpacetimeError::DimensionMismatch(e.x.len(), self.v.len()));
        }
        let v2: f64 = self.v.iter().map(|c| c * c).sum();
        if v2 == 0.0 {
            return Ok(e.clone());
        }
        let gamma = self.gamma();
        let vx: f64 = self.v.iter().zip(&e.x).map(|(a, b)| a * b).sum();
        let t = gamma * (e.t - vx);
        let along = (gamma - 1.0) * vx / v2 - gamma * e.t;
        let x =
            e.x.iter()
                .zip(&self.v)
                .map(|(xi, vi)| xi + along * vi)
                .collect();
        Ok(Event { t, x })
    }
}

pub fn boost(e: &Event, v: &Boost) -> Result<Event, SpacetimeError> {
    v.apply(e)
}

/// Candidate summoning points at time `P.t + t` and proper time `t_prime`
/// from `P`, i.e. on the sphere of radius `sqrt(t² − t_prime²)` about `P.x`.
///
/// Placement is deterministic: the two antipodes in one dimension, evenly
/// spaced angles from 0 in two, a Fibonacci lattice in three.
pub fn candidate_sphere(
    p: &Event,
    t: f64,
    t_prime: f64,
    count: usize,
) -> Result<Vec<Event>, SpacetimeError> {
    if !p.is_finite() || !t.is_finite() || !t_prime.is_finite() {
        return Err(SpacetimeError::NonFinite);
    }
    if t <= 0.0 {
        return Err(SpacetimeError::InvalidSphere(format!(
            "t = {t} must be positive"
        )));
    }
    if t_prime < 0.0 || t_prime >= t {
        return Err(SpacetimeError::InvalidSphere(format!(
            "t_prime = {t_prime} must satisfy 0 <= t_prime < t = {t}"
        )));
    }
    if count < 2 {
        return Err(SpacetimeError::InvalidSphere(format!(
            "count = {count} must be at least 2"
        )));
    }
    let n = p.spatial_dim();
    let r = (t * t - t_prime * t_prime).sqrt();
    let tq = p.t + t;
    let directions: Vec<Vec<f64>> = match n {
        1 => {
            if count != 2 {
                return Err(SpacetimeError::InvalidSphere(format!(
                    "a one-dimensional sphere has exactly 2 points, got count = {count}"
                )));
            }
            vec![vec![1.0], vec![-1.0]]
        }
        2 => (0..count)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![angle.cos(), angle.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    vec![rho * phi.cos(), rho * phi.sin(), z]
                })
                .collect()
        }
        other => return Err(SpacetimeError::UnsupportedDimension(other)),
    };
    Ok(directions
        .into_iter()
        .map(|dir| Event {
            t: tq,
            x: p.x.iter().zip(dir).map(|(c, u)| c + r * u).collect(),
        })
        .collect())
}

/// Return point on the ray from `p` through `q`, at proper time `t_prime + delta` from `p`.
pub fn colinear_return(
    p: &Event,
    q: &Event,
    t_prime: f64,
    delta: f64,
) -> Result<Event, SpacetimeError> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(SpacetimeError::InvalidDuration(format!(
            "delta = {delta} must be finite and non-negative"
        )));
    }
    if t_prime.is_nan() || t_prime <= 0.0 {
        return Err(SpacetimeError::InvalidDuration(format!(
            "t_prime = {t_prime} must be positive"
        )));
    }
    let tau = proper_time(p, q)?;
    if (tau - t_prime).abs() > DEFAULT_TOLERANCE {
        return Err(SpacetimeError::ProperTimeMismatch {
            expected: t_prime,
            actual: tau,
        });
    }
    if delta == 0.0 {
        return Ok(q.clone());
    }
    let scale = (t_prime + delta) / t_prime;
    Ok(Event {
        t: p.t + scale * (q.t - p.t),
        x: p.x
            .iter()
            .zip(&q.x)
            .map(|(a, b)| a + scale * (b - a))
            .collect(),
    })
}
