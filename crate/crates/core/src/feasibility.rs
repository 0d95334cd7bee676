//! Feasibility classification and p-compliance bounds.
//!
//! Two sufficient conditions are decided: candidates forming a causal chain
//! (the state can be carried along it, so summoning succeeds) and a pair of
//! candidates whose return points draw on disjoint regions of the common time
//! slice (each would need its own perfect copy, so summoning fails).
//! Everything in between is reported as undetermined.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{cloning_fidelity, measure_prepare_fidelity, QuantumError};
use crate::scenario::{Finding, Scenario, ScenarioError, Variant};
use crate::spacetime::{
    causally_precedes, interval, CausalClass, Physics, Regime, Spacetime, SpacetimeError,
    DEFAULT_TOLERANCE,
};

/// Exact clique search is limited to this many candidates.
pub const MAX_CLIQUE_CANDIDATES: usize = 16;

#[derive(Debug, Error)]
pub enum FeasibilityError {
    #[error("scenario is invalid: {}", .0.iter().map(|f| f.message.as_str()).collect::<Vec<_>>().join("; "))]
    InvalidScenario(Vec<Finding>),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("compliance bounds need a minkowski-quantum scenario, got {0}")]
    RegimeMismatch(Regime),
    #[error("{0} candidates exceeds the exact-search limit of {MAX_CLIQUE_CANDIDATES}")]
    TooManyCandidates(usize),
    #[error("candidate index {index} out of range for {len} candidates")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Scenario(ScenarioError),
}

impl From<ScenarioError> for FeasibilityError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Invalid(findings) => FeasibilityError::InvalidScenario(findings),
            other => FeasibilityError::Scenario(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    Infeasible,
    Undetermined,
}

/// Why a scenario is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibleBasis {
    /// Classical states can be measured and broadcast to every candidate.
    ClassicalBroadcast,
    /// Instantaneous signalling lets the intact state reach any candidate.
    GalileanRouting,
    /// Candidates are totally ordered in the causal future of `P`.
    CausalChain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Feasible {
        basis: FeasibleBasis,
        /// Candidate indices in routing order; a causal order when `basis` is `causal_chain`.
        chain: Vec<usize>,
    },
    Infeasible {
        pair: [usize; 2],
    },
    Undetermined,
}

impl Verdict {
    pub fn status(&self) -> Status {
        match self {
            Verdict::Feasible { .. } => Status::Feasible,
            Verdict::Infeasible { .. } => Status::Infeasible,
            Verdict::Undetermined => Status::Undetermined,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Feasible { chain, .. } => {
                let items: Vec<String> = chain.iter().map(|i| i.to_string()).collect();
                write!(f, "FEASIBLE chain=[{}]", items.join(","))
            }
            Verdict::Infeasible { pair } => write!(f, "INFEASIBLE pair=({},{})", pair[0], pair[1]),
            Verdict::Undetermined => write!(f, "UNDETERMINED"),
        }
    }
}

/// Achievable and impossible compliance levels for a Minkowski-quantum scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceBounds {
    /// Worst-candidate Haar-average fidelity guaranteed by the best built-in strategy.
    pub p_lower: f64,
    /// Ceiling from the symmetric-cloning argument over the largest set of
    /// pairwise-disjoint candidates.
    pub p_upper: f64,
    pub clique_size: usize,
    pub clique: Vec<usize>,
    /// Built-in strategy attaining `p_lower`.
    pub lower_bound_strategy: String,
}

fn check_index(s: &Scenario, i: usize) -> Result<(), FeasibilityError> {
    if i >= s.candidates.len() {
        return Err(FeasibilityError::IndexOutOfRange {
            index: i,
            len: s.candidates.len(),
        });
    }
    Ok(())
}

/// Whether the pasts of the return points of candidates `i` and `j` are disjoint
/// on the candidates' time slice: `|x_i − x_j| > 2·delta`.
///
/// Lorentz-invariant scenarios are handled only when `delta = 0`, where the test
/// is spacelike separation of the two candidates.
pub fn disjoint_pair(s: &Scenario, i: usize, j: usize) -> Result<bool, FeasibilityError> {
    check_index(s, i)?;
    check_index(s, j)?;
    if !s.regime.is_minkowski_quantum() {
        return Err(FeasibilityError::NotApplicable(format!(
            "disjointness is only meaningful for minkowski-quantum, got {}",
            s.regime
        )));
    }
    let (qi, qj) = (&s.candidates[i], &s.candidates[j]);
    match s.variant {
        Variant::FrameSlice => {
            if s.slice_offset().is_none() {
                return Err(FeasibilityError::NotApplicable(
                    "candidates do not share a time slice".into(),
                ));
            }
            Ok(qi.spatial_distance(qj)? > 2.0 * s.delta + DEFAULT_TOLERANCE)
        }
        Variant::LorentzInvariant if s.delta == 0.0 => {
            Ok(interval(qi, qj)?.class == CausalClass::Spacelike)
        }
        Variant::LorentzInvariant => Err(FeasibilityError::NotApplicable(
            "lorentz_invariant scenarios with delta > 0 have no slice to test on".into(),
        )),
    }
}

/// Candidate indices ordered as a causal chain starting in the future of `P`,
/// with every return point in the future of its candidate; `None` if no such
/// total order exists.
pub fn causal_chain(s: &Scenario) -> Result<Option<Vec<usize>>, FeasibilityError> {
    let mut order: Vec<usize> = (0..s.candidates.len()).collect();
    order.sort_by(|&a, &b| {
        s.candidates[a]
            .t
            .total_cmp(&s.candidates[b].t)
            .then(a.cmp(&b))
    });
    let Some(&first) = order.first() else {
        return Ok(None);
    };
    if !causally_precedes(&s.p, &s.candidates[first], s.regime)? {
        return Ok(None);
    }
    for w in order.windows(2) {
        if !causally_precedes(&s.candidates[w[0]], &s.candidates[w[1]], s.regime)? {
            return Ok(None);
        }
    }
    for rp in s.return_points()? {
        if !causally_precedes(&s.candidates[rp.candidate_index], &rp.r, s.regime)? {
            return Ok(None);
        }
    }
    Ok(Some(order))
}

pub fn classify(s: &Scenario) -> Result<Verdict, FeasibilityError> {
    s.ensure_valid()?;
    let everyone: Vec<usize> = (0..s.candidates.len()).collect();
    if s.regime.physics == Physics::Classical {
        return Ok(Verdict::Feasible {
            basis: FeasibleBasis::ClassicalBroadcast,
            chain: everyone,
        });
    }
    if s.regime.spacetime == Spacetime::Galilean {
        return Ok(Verdict::Feasible {
            basis: FeasibleBasis::GalileanRouting,
            chain: everyone,
        });
    }
    if let Some(chain) = causal_chain(s)? {
        return Ok(Verdict::Feasible {
            basis: FeasibleBasis::CausalChain,
            chain,
        });
    }
    for i in 0..s.candidates.len() {
        for j in i + 1..s.candidates.len() {
            match disjoint_pair(s, i, j) {
                Ok(true) => return Ok(Verdict::Infeasible { pair: [i, j] }),
                Ok(false) | Err(FeasibilityError::NotApplicable(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Verdict::Undetermined)
}

/// Adjacency bitmasks of the disjoint-pair graph.
fn disjointness_graph(s: &Scenario) -> Result<Vec<u32>, FeasibilityError> {
    let n = s.candidates.len();
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in i + 1..n {
            let edge = match disjoint_pair(s, i, j) {
                Ok(e) => e,
                Err(FeasibilityError::NotApplicable(_)) => false,
                Err(e) => return Err(e),
            };
            if edge {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Ok(adj)
}

/// Largest clique by branch and bound; ties go to the lexicographically first.
pub(crate) fn max_clique(adj: &[u32]) -> Vec<usize> {
    fn expand(adj: &[u32], current: &mut Vec<usize>, mut candidates: u32, best: &mut Vec<usize>) {
        if candidates == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        while candidates != 0 {
            if current.len() + candidates.count_ones() as usize <= best.len() {
                return;
            }
            let v = candidates.trailing_zeros() as usize;
            candidates &= !(1 << v);
            current.push(v);
            expand(adj, current, candidates & adj[v], best);
            current.pop();
        }
        if current.len() > best.len() {
            *best = current.clone();
        }
    }
    assert!(adj.len() <= 32);
    let all = if adj.len() == 32 {
        u32::MAX
    } else {
        (1u32 << adj.len()) - 1
    };
    let mut best = Vec::new();
    expand(adj, &mut Vec::new(), all, &mut best);
    best
}

pub fn compliance_bounds(s: &Scenario) -> Result<ComplianceBounds, FeasibilityError> {
    if !s.regime.is_minkowski_quantum() {
        return Err(FeasibilityError::RegimeMismatch(s.regime));
    }
    s.ensure_valid()?;
    let n = s.candidates.len();
    if n > MAX_CLIQUE_CANDIDATES {
        return Err(FeasibilityError::TooManyCandidates(n));
    }
    let clique = max_clique(&disjointness_graph(s)?);
    let m = clique.len();
    if let Verdict::Feasible { .. } = classify(s)? {
        return Ok(ComplianceBounds {
            p_lower: 1.0,
            p_upper: 1.0,
            clique_size: m,
            clique,
            lower_bound_strategy: "route_chain".into(),
        });
    }
    let p_upper = if m <= 1 {
        1.0
    } else {
        cloning_fidelity(s.d, m)?
    };
    let hold_worst = if n <= 1 { 1.0 } else { 1.0 / s.d as f64 };
    let options = [
        ("clone_distribute", cloning_fidelity(s.d, n)?),
        ("measure_broadcast", measure_prepare_fidelity(s.d)?),
        ("hold_at:0", hold_worst),
    ];
    let (name, p_lower) =
        options.into_iter().fold(
            ("", f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    Ok(ComplianceBounds {
        p_lower,
        p_upper,
        clique_size: m,
        clique,
        lower_bound_strategy: name.into(),
    })
}
