//! Bob's strategies and the Monte Carlo harness that scores them.
//!
//! A strategy acts in two phases. At `P`, before any summons exists, it plans:
//! from the input state it prepares one [`Slot`] per candidate, all derived
//! from that single input. When the summons arrives at candidate `i`, it
//! responds, and the response receives slot `i` by value and nothing else.
//! A response therefore cannot read resources positioned for other
//! candidates, and the plan cannot depend on where the summons will arrive.

mod builtin;
mod sim;

use std::sync::Arc;

use thiserror::Error;

use crate::quantum::{DensityMatrix, PureState, QuantumError, QuantumState};
use crate::rng::SimRng;
use crate::scenario::{Scenario, ScenarioError};
use crate::spacetime::{causally_precedes, Regime, SpacetimeError};

pub use builtin::{builtin, Builtin};
pub use sim::{
    no_signalling_check, no_signalling_check_observed, simulate, simulate_with, SimOptions,
    SimReport,
};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("strategy {strategy} does not apply to the {regime} regime: {reason}")]
    RegimeMismatch {
        strategy: String,
        regime: Regime,
        reason: String,
    },
    #[error("strategy {strategy} is not applicable: {reason}")]
    Inapplicable { strategy: String, reason: String },
    #[error("causality violation: resources for candidate {candidate} cannot be positioned at its return point from P")]
    CausalityViolation { candidate: usize },
    #[error("plan produced {got} slots for {expected} candidates")]
    SlotCount { expected: usize, got: usize },
    #[error("unknown strategy {0:?}; available: route_chain, clone_distribute, measure_broadcast, galilean_route, classical_broadcast, hold_at:k")]
    UnknownStrategy(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
}

/// A classical description of a state, freely copyable.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalRecord {
    pub description: PureState,
}

/// What Bob keeps ready for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Quantum(QuantumState),
    Classical(ClassicalRecord),
}

impl Slot {
    /// The state handed over if this slot is used as-is: quantum contents
    /// directly, classical records by preparing the described state.
    pub fn into_state(self) -> QuantumState {
        match self {
            Slot::Quantum(q) => q,
            Slot::Classical(rec) => QuantumState::Pure(rec.description),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Slot::Quantum(q) => q.dim(),
            Slot::Classical(rec) => rec.description.dim(),
        }
    }
}

/// One slot per candidate, positioned inside the causal past of each return point.
#[derive(Debug, Clone)]
pub struct PositionedResources {
    slots: Vec<Slot>,
}

impl PositionedResources {
    /// Checks the slot count and that every return point is reachable from `P`.
    pub fn place(layout: &Layout, slots: Vec<Slot>) -> Result<Self, StrategyError> {
        if slots.len() != layout.reachable.len() {
            return Err(StrategyError::SlotCount {
                expected: layout.reachable.len(),
                got: slots.len(),
            });
        }
        if let Some(candidate) = layout.reachable.iter().position(|r| !r) {
            return Err(StrategyError::CausalityViolation { candidate });
        }
        Ok(PositionedResources { slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Hands over the slot of the summoned candidate; the rest are discarded.
    pub fn into_slot(mut self, candidate: usize) -> Slot {
        self.slots.swap_remove(candidate)
    }
}

/// Which return points can be reached from `P` under the scenario's regime.
#[derive(Debug, Clone)]
pub struct Layout {
    reachable: Vec<bool>,
}

impl Layout {
    pub fn new(s: &Scenario) -> Result<Self, StrategyError> {
        let reachable = s
            .return_points()?
            .iter()
            .map(|rp| causally_precedes(&s.p, &rp.r, s.regime))
            .collect::<Result<_, _>>()?;
        Ok(Layout { reachable })
    }
}

/// A strategy specialized to one scenario.
pub trait BoundStrategy: Send + Sync {
    /// Runs at `P`: one slot per candidate, prepared from `input` alone.
    fn plan(&self, input: &PureState, rng: &mut SimRng) -> Result<Vec<Slot>, StrategyError>;

    /// Runs at the summoned candidate with that candidate's slot only.
    fn respond(&self, slot: Slot) -> Result<QuantumState, StrategyError> {
        Ok(slot.into_state())
    }
}

pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    /// Checks applicability to `scenario` and builds any per-scenario machinery.
    fn bind(&self, scenario: &Scenario) -> Result<Arc<dyn BoundStrategy>, StrategyError>;
}

/// State delivered at candidate `i` if that slot is used, as a density matrix.
pub(crate) fn delivered_density(
    bound: &dyn BoundStrategy,
    slot: Slot,
) -> Result<DensityMatrix, StrategyError> {
    Ok(bound.respond(slot)?.to_density())
}
