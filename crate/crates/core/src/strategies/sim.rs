use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quantum::{haar_sample, DensityMatrix};
use crate::rng::{derive_seed, sub_rng, SimRng};
use crate::scenario::Scenario;

use super::{
    delivered_density, BoundStrategy, Layout, PositionedResources, Strategy, StrategyError,
};

const STREAM_TRIALS: u64 = 1;
const STREAM_NO_SIGNALLING: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub trials: usize,
    pub seed: u64,
    /// Score each trial by a single `{|ψ⟩⟨ψ|, I − |ψ⟩⟨ψ|}` measurement
    /// instead of the exact fidelity.
    pub binary_verification: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimReport {
    pub strategy: String,
    pub trials: usize,
    pub seed: u64,
    pub binary_verification: bool,
    pub per_candidate_trials: Vec<usize>,
    /// `None` for candidates never summoned.
    pub per_candidate_mean_fidelity: Vec<Option<f64>>,
    pub standard_errors: Vec<Option<f64>>,
    pub worst_candidate: usize,
    pub worst_candidate_mean: f64,
    pub worst_candidate_standard_error: f64,
    pub overall_mean: f64,
    pub overall_standard_error: f64,
}

pub fn simulate(
    s: &Scenario,
    strategy: &dyn Strategy,
    trials: usize,
    seed: u64,
) -> Result<SimReport, StrategyError> {
    simulate_with(
        s,
        strategy,
        SimOptions {
            trials,
            seed,
            binary_verification: false,
        },
    )
}

/// Monte Carlo estimate of the strategy's success probability.
///
/// Trial `t` draws its input and summons from a generator derived from
/// `(seed, t)` alone, so the report does not depend on the thread count.
pub fn simulate_with(
    s: &Scenario,
    strategy: &dyn Strategy,
    opts: SimOptions,
) -> Result<SimReport, StrategyError> {
    if opts.trials == 0 {
        return Err(StrategyError::NoTrials);
    }
    s.ensure_valid()?;
    let bound = strategy.bind(s)?;
    let layout = Layout::new(s)?;
    let n = s.candidates.len();

    let outcomes = (0..opts.trials)
        .into_par_iter()
        .map(|t| run_trial(s, bound.as_ref(), &layout, opts, t as u64))
        .collect::<Result<Vec<_>, _>>()?;

    let mut per = vec![Welford::default(); n];
    let mut all = Welford::default();
    for (target, score) in outcomes {
        per[target].push(score);
        all.push(score);
    }

    let per_candidate_mean_fidelity: Vec<Option<f64>> = per.iter().map(|w| w.mean()).collect();
    let standard_errors: Vec<Option<f64>> = per.iter().map(|w| w.standard_error()).collect();
    let (worst_candidate, worst_candidate_mean) = per_candidate_mean_fidelity
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|m| (i, m)))
        .fold(
            (0, f64::INFINITY),
            |best, (i, m)| if m < best.1 { (i, m) } else { best },
        );

    Ok(SimReport {
        strategy: strategy.name(),
        trials: opts.trials,
        seed: opts.seed,
        binary_verification: opts.binary_verification,
        per_candidate_trials: per.iter().map(|w| w.n).collect(),
        worst_candidate,
        worst_candidate_mean,
        worst_candidate_standard_error: standard_errors[worst_candidate].unwrap_or(0.0),
        per_candidate_mean_fidelity,
        standard_errors,
        overall_mean: all.mean().unwrap_or(0.0),
        overall_standard_error: all.standard_error().unwrap_or(0.0),
    })
}

fn run_trial(
    s: &Scenario,
    bound: &dyn BoundStrategy,
    layout: &Layout,
    opts: SimOptions,
    t: u64,
) -> Result<(usize, f64), StrategyError> {
    let mut rng = sub_rng(opts.seed, STREAM_TRIALS, t);
    let input = haar_sample(s.d, &mut rng)?;
    let target = rng.random_range(0..s.candidates.len());
    let mut plan_rng = SimRng::seed_from_u64(rng.random());
    let slots = bound.plan(&input, &mut plan_rng)?;
    let resources = PositionedResources::place(layout, slots)?;
    let delivered = bound.respond(resources.into_slot(target))?;
    let f = delivered.fidelity_to(&input)?;
    let score = if opts.binary_verification {
        if rng.random::<f64>() < f {
            1.0
        } else {
            0.0
        }
    } else {
        f
    };
    Ok((target, score))
}

pub fn no_signalling_check(
    s: &Scenario,
    strategy: &dyn Strategy,
    trials: usize,
    seed: u64,
) -> Result<f64, StrategyError> {
    no_signalling_check_observed(s, strategy, trials, seed, &|_| {})
}

/// Largest trace distance, over inputs, candidates `i` and summons targets
/// `j ≠ k`, between what candidate `i` would deliver when the summons goes to
/// `j` and when it goes to `k`. A strategy that respects causality scores 0.
///
/// `on_summons` is called with the target before each plan runs. It lets
/// tests model an environment that leaks the summons to Bob early.
pub fn no_signalling_check_observed(
    s: &Scenario,
    strategy: &dyn Strategy,
    trials: usize,
    seed: u64,
    on_summons: &(dyn Fn(usize) + Sync),
) -> Result<f64, StrategyError> {
    if trials == 0 {
        return Err(StrategyError::NoTrials);
    }
    s.ensure_valid()?;
    let bound = strategy.bind(s)?;
    let layout = Layout::new(s)?;
    let n = s.candidates.len();

    let mut worst = 0.0f64;
    for t in 0..trials as u64 {
        let mut rng = sub_rng(seed, STREAM_NO_SIGNALLING, t);
        let input = haar_sample(s.d, &mut rng)?;
        let plan_seed = derive_seed(seed, STREAM_NO_SIGNALLING, t ^ (1 << 63));
        // deliveries[target][i]: state at candidate i when the summons went to target.
        let mut deliveries: Vec<Vec<DensityMatrix>> = Vec::with_capacity(n);
        for target in 0..n {
            on_summons(target);
            let mut plan_rng = SimRng::seed_from_u64(plan_seed);
            let slots = bound.plan(&input, &mut plan_rng)?;
            let resources = PositionedResources::place(&layout, slots)?;
            let row = (0..n)
                .map(|i| delivered_density(bound.as_ref(), resources.clone().into_slot(i)))
                .collect::<Result<Vec<_>, _>>()?;
            deliveries.push(row);
        }
        for (j, row_j) in deliveries.iter().enumerate() {
            for row_k in &deliveries[j + 1..] {
                for (a, b) in row_j.iter().zip(row_k) {
                    worst = worst.max(a.trace_distance(b)?);
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn mean(&self) -> Option<f64> {
        (self.n > 0).then_some(self.mean)
    }

    fn standard_error(&self) -> Option<f64> {
        match self.n {
            0 => None,
            1 => Some(0.0),
            n => Some((self.m2 / (n - 1) as f64 / n as f64).sqrt()),
        }
    }
}
