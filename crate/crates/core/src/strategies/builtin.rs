use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::feasibility::causal_chain;
use crate::quantum::{DensityMatrix, MeasurePrepare, PureState, QuantumState, UniversalCloner};
use crate::rng::SimRng;
use crate::scenario::Scenario;
use crate::spacetime::{Physics, Spacetime};

use super::{BoundStrategy, ClassicalRecord, Slot, Strategy, StrategyError};

/// The strategies shipped with the simulator, named by their CLI identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Carry the intact state along a causal chain through every candidate.
    RouteAlongChain,
    /// Universal `1 → N` cloning at `P`, clone `i` sent to candidate `i`.
    CloneAndDistribute,
    /// Measure in a random basis at `P` and broadcast the outcome.
    MeasureAndBroadcast,
    /// Galilean spacetime only: fetch the intact state instantaneously.
    GalileanInstantRoute,
    /// Classical physics only: read the state perfectly and broadcast it.
    ClassicalBroadcast,
    /// Commit to one candidate in advance; the others get `I/d`.
    HoldAtOnePoint(usize),
}

pub fn builtin(name: &str) -> Result<Builtin, StrategyError> {
    name.parse()
}

impl Builtin {
    /// Every built-in applicable in principle to a scenario with `candidates` points.
    pub fn all(candidates: usize) -> Vec<Builtin> {
        let mut out = vec![
            Builtin::RouteAlongChain,
            Builtin::CloneAndDistribute,
            Builtin::MeasureAndBroadcast,
            Builtin::GalileanInstantRoute,
            Builtin::ClassicalBroadcast,
        ];
        out.extend((0..candidates).map(Builtin::HoldAtOnePoint));
        out
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::RouteAlongChain => f.write_str("route_chain"),
            Builtin::CloneAndDistribute => f.write_str("clone_distribute"),
            Builtin::MeasureAndBroadcast => f.write_str("measure_broadcast"),
            Builtin::GalileanInstantRoute => f.write_str("galilean_route"),
            Builtin::ClassicalBroadcast => f.write_str("classical_broadcast"),
            Builtin::HoldAtOnePoint(k) => write!(f, "hold_at:{k}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "route_chain" => Builtin::RouteAlongChain,
            "clone_distribute" => Builtin::CloneAndDistribute,
            "measure_broadcast" => Builtin::MeasureAndBroadcast,
            "galilean_route" => Builtin::GalileanInstantRoute,
            "classical_broadcast" => Builtin::ClassicalBroadcast,
            other => match other.strip_prefix("hold_at:").map(str::parse) {
                Some(Ok(k)) => Builtin::HoldAtOnePoint(k),
                _ => return Err(StrategyError::UnknownStrategy(other.to_string())),
            },
        })
    }
}

impl Strategy for Builtin {
    fn name(&self) -> String {
        self.to_string()
    }

    fn bind(&self, s: &Scenario) -> Result<Arc<dyn BoundStrategy>, StrategyError> {
        let n = s.candidates.len();
        let inapplicable = |reason: &str| StrategyError::Inapplicable {
            strategy: self.name(),
            reason: reason.to_string(),
        };
        let wrong_regime = |reason: &str| StrategyError::RegimeMismatch {
            strategy: self.name(),
            regime: s.regime,
            reason: reason.to_string(),
        };
        Ok(match *self {
            Builtin::RouteAlongChain => {
                let chain = causal_chain(s).map_err(|e| inapplicable(&e.to_string()))?;
                if chain.is_none() {
                    return Err(inapplicable(
                        "the candidates do not form a causal chain from P (no chain witness)",
                    ));
                }
                Arc::new(Intact { n })
            }
            Builtin::GalileanInstantRoute => {
                if s.regime.spacetime != Spacetime::Galilean {
                    return Err(wrong_regime(
                        "instantaneous signalling exists only in Galilean spacetime",
                    ));
                }
                Arc::new(Intact { n })
            }
            Builtin::ClassicalBroadcast => {
                if s.regime.physics != Physics::Classical {
                    return Err(wrong_regime(
                        "perfect readout and copying exists only for classical states",
                    ));
                }
                Arc::new(Broadcast { n })
            }
            Builtin::CloneAndDistribute => Arc::new(CloneAll {
                cloner: UniversalCloner::new(s.d, n)?,
            }),
            Builtin::MeasureAndBroadcast => {
                if s.d < 2 {
                    return Err(inapplicable("measure-and-prepare needs d >= 2"));
                }
                Arc::new(MeasureBroadcast { n, d: s.d })
            }
            Builtin::HoldAtOnePoint(k) => {
                if k >= n {
                    return Err(inapplicable(&format!(
                        "hold_at:{k} but there are only {n} candidates"
                    )));
                }
                Arc::new(Hold {
                    n,
                    k,
                    junk: DensityMatrix::maximally_mixed(s.d)?,
                })
            }
        })
    }
}

/// The intact system is deliverable at every candidate.
struct Intact {
    n: usize,
}

impl BoundStrategy for Intact {
    fn plan(&self, input: &PureState, _: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        Ok(vec![
            Slot::Quantum(QuantumState::Pure(input.clone()));
            self.n
        ])
    }
}

struct Broadcast {
    n: usize,
}

impl BoundStrategy for Broadcast {
    fn plan(&self, input: &PureState, _: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        let record = ClassicalRecord {
            description: input.clone(),
        };
        Ok(vec![Slot::Classical(record); self.n])
    }
}

struct CloneAll {
    cloner: UniversalCloner,
}

impl BoundStrategy for CloneAll {
    fn plan(&self, input: &PureState, _: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        Ok(self
            .cloner
            .marginals(&input.projector())?
            .into_iter()
            .map(|m| Slot::Quantum(QuantumState::Mixed(m)))
            .collect())
    }
}

struct MeasureBroadcast {
    n: usize,
    d: usize,
}

impl BoundStrategy for MeasureBroadcast {
    fn plan(&self, input: &PureState, rng: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        let mp = MeasurePrepare::sample(self.d, rng)?;
        let record = ClassicalRecord {
            description: mp.apply(input, rng)?,
        };
        Ok(vec![Slot::Classical(record); self.n])
    }
}

struct Hold {
    n: usize,
    k: usize,
    junk: DensityMatrix,
}

impl BoundStrategy for Hold {
    fn plan(&self, input: &PureState, _: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        Ok((0..self.n)
            .map(|i| {
                if i == self.k {
                    Slot::Quantum(QuantumState::Pure(input.clone()))
                } else {
                    Slot::Quantum(QuantumState::Mixed(self.junk.clone()))
                }
            })
            .collect())
    }
}
