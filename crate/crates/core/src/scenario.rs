//! Declarative summoning scenarios, their validation and the built-in demos.
//!
//! The unknown state is Haar-distributed in dimension `d` and the summoning
//! point is uniform over the candidate list; neither distribution is
//! configurable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spacetime::{
    candidate_sphere, causally_precedes, colinear_return, proper_time, Boost, Event, Physics,
    Regime, Spacetime, SpacetimeError, DEFAULT_TOLERANCE, MAX_SPATIAL_DIM,
};

/// Ratio of response delay to the candidate scale above which validation warns.
pub const DELTA_RATIO_WARNING: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario is invalid: {}", summarize(.0))]
    Invalid(Vec<Finding>),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error("unknown demo {name:?}; available: {}", demo_list())]
    UnknownDemo { name: String },
    #[error("malformed scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn demo_list() -> String {
    DemoName::ALL.map(|d| d.as_str()).join(", ")
}

fn summarize(findings: &[Finding]) -> String {
    findings
        .iter()
        .filter(|f| f.severity == Severity::Error)
        .map(|f| f.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Candidates on one time slice of the scenario frame; `R_i = Q_i + (delta, 0)`.
    FrameSlice,
    /// Candidates at proper time `t_prime` from `P`; `R_i` colinear with `P` and `Q_i`.
    LorentzInvariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub regime: Regime,
    /// Hilbert-space dimension of the summoned system.
    pub d: usize,
    /// Number of spatial dimensions.
    pub n: usize,
    pub variant: Variant,
    /// Hand-over point.
    #[serde(rename = "P")]
    pub p: Event,
    pub candidates: Vec<Event>,
    pub t_prime: f64,
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingCode {
    UnsupportedSpatialDimension,
    DimensionMismatch,
    NonFiniteCoordinate,
    InvalidHilbertDimension,
    NoCandidates,
    NegativeDelta,
    NegativeTPrime,
    CandidateNotInCausalFuture,
    MarginNotRespected,
    NotOnCommonSlice,
    LorentzVariantRequiresMinkowski,
    ProperTimeMismatch,
    DeltaRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: FindingCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub candidate: Option<usize>,
}

impl Finding {
    fn error(code: FindingCode, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Error,
            code,
            message: message.into(),
            candidate: None,
        }
    }

    fn warning(code: FindingCode, message: impl Into<String>) -> Self {
        Finding {
            severity: Severity::Warning,
            ..Finding::error(code, message)
        }
    }

    fn at(mut self, candidate: usize) -> Self {
        self.candidate = Some(candidate);
        self
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: {}", self.message)
    }
}

/// Where Bob must hand the state back if summoned at candidate `candidate_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnPoint {
    pub candidate_index: usize,
    #[serde(rename = "R")]
    pub r: Event,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization is infallible")
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_valid(&self) -> bool {
        !has_errors(&self.validate())
    }

    /// Errors with the full finding list unless the scenario is valid.
    pub fn ensure_valid(&self) -> Result<(), ScenarioError> {
        let findings = self.validate();
        if has_errors(&findings) {
            return Err(ScenarioError::Invalid(findings));
        }
        Ok(())
    }

    /// Common time offset `t = Q_i.t − P.t` when every candidate shares one time slice.
    pub fn slice_offset(&self) -> Option<f64> {
        let first = self.candidates.first()?;
        let t0 = first.t - self.p.t;
        self.candidates
            .iter()
            .all(|q| ((q.t - self.p.t) - t0).abs() <= DEFAULT_TOLERANCE)
            .then_some(t0)
    }

    /// Invariant violations as errors, soft concerns as warnings. Never fails.
    pub fn validate(&self) -> Vec<Finding> {
        use FindingCode::*;
        let mut out = Vec::new();

        if self.n == 0 || self.n > MAX_SPATIAL_DIM {
            out.push(Finding::error(
                UnsupportedSpatialDimension,
                format!("spatial dimension n = {} outside 1..=3", self.n),
            ));
        }
        let min_d = match self.regime.physics {
            Physics::Quantum => 2,
            Physics::Classical => 1,
        };
        if self.d < min_d {
            out.push(Finding::error(
                InvalidHilbertDimension,
                format!("d = {} but this regime needs d >= {min_d}", self.d),
            ));
        }
        if self.candidates.is_empty() {
            out.push(Finding::error(
                NoCandidates,
                "no candidate summoning points",
            ));
        }
        if !self.delta.is_finite() || self.delta < 0.0 {
            out.push(Finding::error(
                NegativeDelta,
                format!("delta = {} must be finite and non-negative", self.delta),
            ));
        }
        if !self.t_prime.is_finite() || self.t_prime < 0.0 {
            out.push(Finding::error(
                NegativeTPrime,
                format!("t_prime = {} must be finite and non-negative", self.t_prime),
            ));
        }

        let mut geometry_ok = true;
        if self.p.spatial_dim() != self.n {
            geometry_ok = false;
            out.push(Finding::error(
                DimensionMismatch,
                format!(
                    "P has {} spatial coordinates, expected n = {}",
                    self.p.spatial_dim(),
                    self.n
                ),
            ));
        }
        if !self.p.is_finite() {
            geometry_ok = false;
            out.push(Finding::error(
                NonFiniteCoordinate,
                "P has a non-finite coordinate",
            ));
        }
        for (i, q) in self.candidates.iter().enumerate() {
            if q.spatial_dim() != self.n {
                geometry_ok = false;
                out.push(
                    Finding::error(
                        DimensionMismatch,
                        format!(
                            "candidate {i} has {} spatial coordinates, expected n = {}",
                            q.spatial_dim(),
                            self.n
                        ),
                    )
                    .at(i),
                );
            }
            if !q.is_finite() {
                geometry_ok = false;
                out.push(
                    Finding::error(
                        NonFiniteCoordinate,
                        format!("candidate {i} has a non-finite coordinate"),
                    )
                    .at(i),
                );
            }
        }
        if !geometry_ok {
            return out;
        }

        for (i, q) in self.candidates.iter().enumerate() {
            if !causally_precedes(&self.p, q, self.regime).unwrap_or(false) {
                out.push(
                    Finding::error(
                        CandidateNotInCausalFuture,
                        format!(
                            "candidate {i} not in causal future of P under {}",
                            self.regime
                        ),
                    )
                    .at(i),
                );
            }
        }

        match self.variant {
            Variant::FrameSlice => self.validate_frame_slice(&mut out),
            Variant::LorentzInvariant => self.validate_lorentz(&mut out),
        }
        out
    }

    fn validate_frame_slice(&self, out: &mut Vec<Finding>) {
        use FindingCode::*;
        for (i, q) in self.candidates.iter().enumerate() {
            let offset = q.t - self.p.t;
            if offset <= self.t_prime {
                out.push(
                    Finding::error(
                        MarginNotRespected,
                        format!(
                            "candidate {i} is {offset} after P, not beyond the margin t_prime = {}",
                            self.t_prime
                        ),
                    )
                    .at(i),
                );
            }
        }
        match self.slice_offset() {
            Some(t) if t > self.t_prime && self.t_prime >= 0.0 => {
                let r = (t * t - self.t_prime * self.t_prime).sqrt();
                let ratio = self.delta / r;
                if ratio > DELTA_RATIO_WARNING {
                    out.push(Finding::warning(
                        DeltaRatio,
                        format!(
                            "delta/r = {ratio} exceeds {DELTA_RATIO_WARNING} (delta = {}, r = {r})",
                            self.delta
                        ),
                    ));
                }
            }
            Some(_) => {}
            None if self.candidates.len() > 1 => out.push(Finding::warning(
                NotOnCommonSlice,
                "candidates do not share one time slice; the slice-disjointness test does not apply",
            )),
            None => {}
        }
    }

    fn validate_lorentz(&self, out: &mut Vec<Finding>) {
        use FindingCode::*;
        if self.regime.spacetime != Spacetime::Minkowski {
            out.push(Finding::error(
                LorentzVariantRequiresMinkowski,
                "the lorentz_invariant variant needs Minkowski spacetime",
            ));
            return;
        }
        if self.t_prime.is_nan() || self.t_prime <= 0.0 {
            out.push(Finding::error(
                NegativeTPrime,
                format!(
                    "lorentz_invariant variant needs t_prime > 0, got {}",
                    self.t_prime
                ),
            ));
            return;
        }
        for (i, q) in self.candidates.iter().enumerate() {
            match proper_time(&self.p, q) {
                Ok(tau) if (tau - self.t_prime).abs() <= DEFAULT_TOLERANCE => {}
                Ok(tau) => out.push(
                    Finding::error(
                        ProperTimeMismatch,
                        format!(
                            "candidate {i} at proper time {tau} from P, expected t_prime = {}",
                            self.t_prime
                        ),
                    )
                    .at(i),
                ),
                Err(_) => out.push(
                    Finding::error(
                        ProperTimeMismatch,
                        format!("candidate {i} is not timelike to the future of P"),
                    )
                    .at(i),
                ),
            }
        }
        let ratio = self.delta / self.t_prime;
        if ratio > DELTA_RATIO_WARNING {
            out.push(Finding::warning(
                DeltaRatio,
                format!("delta/t_prime = {ratio} exceeds {DELTA_RATIO_WARNING}"),
            ));
        }
    }

    /// Return point for each candidate, in candidate order.
    pub fn return_points(&self) -> Result<Vec<ReturnPoint>, ScenarioError> {
        self.candidates
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let r = match self.variant {
                    Variant::FrameSlice => q.delayed(self.delta),
                    Variant::LorentzInvariant => {
                        colinear_return(&self.p, q, self.t_prime, self.delta)?
                    }
                };
                Ok(ReturnPoint {
                    candidate_index: i,
                    r,
                })
            })
            .collect()
    }

    /// The same scenario with every event expressed in a boosted frame.
    pub fn boosted(&self, b: &Boost) -> Result<Scenario, ScenarioError> {
        Ok(Scenario {
            p: b.apply(&self.p)?,
            candidates: self
                .candidates
                .iter()
                .map(|q| b.apply(q))
                .collect::<Result<_, _>>()?,
            ..self.clone()
        })
    }

    /// The same scenario with candidates reordered: new candidate `k` is old `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Scenario {
        Scenario {
            candidates: order.iter().map(|&i| self.candidates[i].clone()).collect(),
            ..self.clone()
        }
    }
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Error)
}

pub fn validate(s: &Scenario) -> Vec<Finding> {
    s.validate()
}

pub fn return_points(s: &Scenario) -> Result<Vec<ReturnPoint>, ScenarioError> {
    s.return_points()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemoName {
    AntipodalPair,
    Sphere,
    TimelikeChain,
    Galilean,
    Classical,
}

impl DemoName {
    pub const ALL: [DemoName; 5] = [
        DemoName::AntipodalPair,
        DemoName::Sphere,
        DemoName::TimelikeChain,
        DemoName::Galilean,
        DemoName::Classical,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DemoName::AntipodalPair => "antipodal_pair",
            DemoName::Sphere => "sphere",
            DemoName::TimelikeChain => "timelike_chain",
            DemoName::Galilean => "galilean",
            DemoName::Classical => "classical",
        }
    }
}

impl fmt::Display for DemoName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemoName {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DemoName::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| ScenarioError::UnknownDemo {
                name: s.to_string(),
            })
    }
}

/// The fixed demo scenarios.
///
/// * `antipodal_pair`: Minkowski, quantum, `d = 2`, one spatial dimension, the
///   two lightlike points at `t = 1`, no delay.
/// * `sphere`: eight points at `t = 5`, radius 4 (`t_prime = 3`), `delta = 0.1`, in 3D.
/// * `timelike_chain`: four points on the worldline of `P` at `t = 1..4`.
/// * `galilean`, `classical`: the antipodal geometry in the two regimes where
///   summoning succeeds.
pub fn make_demo(name: DemoName) -> Scenario {
    let mq = Regime::MINKOWSKI_QUANTUM;
    let antipodal = |regime| {
        let p = Event::at_origin(0.0, 1);
        Scenario {
            regime,
            d: 2,
            n: 1,
            variant: Variant::FrameSlice,
            candidates: candidate_sphere(&p, 1.0, 0.0, 2).expect("fixed demo geometry"),
            p,
            t_prime: 0.0,
            delta: 0.0,
            seed: 0,
        }
    };
    match name {
        DemoName::AntipodalPair => antipodal(mq),
        DemoName::Galilean => antipodal(Regime::new(Spacetime::Galilean, Physics::Quantum)),
        DemoName::Classical => antipodal(Regime::new(Spacetime::Minkowski, Physics::Classical)),
        DemoName::Sphere => {
            let p = Event::at_origin(0.0, 3);
            Scenario {
                regime: mq,
                d: 2,
                n: 3,
                variant: Variant::FrameSlice,
                candidates: candidate_sphere(&p, 5.0, 3.0, 8).expect("fixed demo geometry"),
                p,
                t_prime: 3.0,
                delta: 0.1,
                seed: 0,
            }
        }
        DemoName::TimelikeChain => Scenario {
            regime: mq,
            d: 2,
            n: 1,
            variant: Variant::FrameSlice,
            p: Event::at_origin(0.0, 1),
            candidates: (1..=4).map(|t| Event::new(t as f64, vec![0.0])).collect(),
            t_prime: 0.0,
            delta: 0.0,
            seed: 0,
        },
    }
}
