//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};

use summoner::feasibility::{classify, compliance_bounds, Status};
use summoner::quantum::{
    cloning_fidelity, measure_prepare_fidelity, DensityMatrix, PureState, QuantumState,
    UniversalCloner,
};
use summoner::rng::SimRng;
use summoner::scenario::{make_demo, DemoName, Scenario, Variant};
use summoner::spacetime::{
    candidate_sphere, colinear_return, interval, proper_time, Boost, Event, Regime,
};
use summoner::strategies::{
    no_signalling_check, no_signalling_check_observed, simulate, BoundStrategy, Builtin, Slot,
    Strategy, StrategyError,
};
use summoner_cli::cmd_simulate;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.2?}, budget {budget:?}")
    })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn regime_table() -> Check {
    let start = Instant::now();
    let cases = [
        (DemoName::Classical, Builtin::ClassicalBroadcast),
        (DemoName::Galilean, Builtin::GalileanInstantRoute),
        (DemoName::TimelikeChain, Builtin::RouteAlongChain),
    ];
    let mut notes = Vec::new();
    for (demo, strategy) in cases {
        let r = simulate(&make_demo(demo), &strategy, 10_000, 0).map_err(err)?;
        ensure(r.worst_candidate_mean == 1.0, || {
            format!("{demo} + {strategy}: worst mean {}", r.worst_candidate_mean)
        })?;
        notes.push(format!("{demo}+{strategy}=1"));
    }
    within_budget(start, Duration::from_secs(5))?;
    Ok(notes.join(", "))
}

fn no_summoning_ceiling() -> Check {
    let start = Instant::now();
    let s = make_demo(DemoName::AntipodalPair);
    let five_sixths = 5.0 / 6.0;
    let optimum = oracle::optimal_clone_fidelity(2, 2);
    ensure((optimum - five_sixths).abs() < 1e-6, || {
        format!("oracle optimum {optimum}")
    })?;

    let b = compliance_bounds(&s).map_err(err)?;
    ensure(
        (b.p_lower - five_sixths).abs() < 1e-12 && (b.p_upper - five_sixths).abs() < 1e-12,
        || format!("bounds ({}, {})", b.p_lower, b.p_upper),
    )?;

    let r = simulate(&s, &Builtin::CloneAndDistribute, 100_000, 42).map_err(err)?;
    ensure((r.overall_mean - five_sixths).abs() <= 0.005, || {
        format!("clone_distribute mean {}", r.overall_mean)
    })?;

    let mut checked = 0;
    for strategy in Builtin::all(s.candidates.len()) {
        if strategy.bind(&s).is_err() {
            continue;
        }
        let r = simulate(&s, &strategy, 20_000, 7).map_err(err)?;
        ensure(
            r.worst_candidate_mean <= five_sixths + 3.0 * r.worst_candidate_standard_error,
            || format!("{strategy} worst mean {}", r.worst_candidate_mean),
        )?;
        checked += 1;
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!(
        "oracle {optimum:.9}, bounds=(5/6,5/6), clone MC {:.5}, {checked} strategies under ceiling",
        r.overall_mean
    ))
}

fn scaling_in_n_and_d() -> Check {
    let start = Instant::now();
    let sphere = make_demo(DemoName::Sphere);
    let bound = compliance_bounds(&sphere).map_err(err)?.p_upper;
    let analytic = UniversalCloner::new(2, 8)
        .and_then(|c| c.average_marginal_fidelity(0))
        .map_err(err)?;
    ensure((bound - 17.0 / 24.0).abs() < 1e-12, || {
        format!("sphere bound {bound}")
    })?;
    ensure((bound - analytic).abs() < 1e-12, || {
        format!("sphere bound {bound} vs cloner marginal {analytic}")
    })?;

    let qutrit = Scenario {
        d: 3,
        ..make_demo(DemoName::AntipodalPair)
    };
    let bound3 = compliance_bounds(&qutrit).map_err(err)?.p_upper;
    ensure((bound3 - 0.75).abs() < 1e-12, || {
        format!("d=3 bound {bound3}")
    })?;

    let mc8 = simulate(&sphere, &Builtin::CloneAndDistribute, 100_000, 3).map_err(err)?;
    ensure((mc8.overall_mean - bound).abs() <= 0.005, || {
        format!("sphere clone MC {}", mc8.overall_mean)
    })?;
    let mc3 = simulate(&qutrit, &Builtin::CloneAndDistribute, 100_000, 3).map_err(err)?;
    ensure((mc3.overall_mean - 0.75).abs() <= 0.005, || {
        format!("d=3 clone MC {}", mc3.overall_mean)
    })?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!(
        "N=8 bound {bound:.12} (MC {:.5}), d=3 bound {bound3} (MC {:.5})",
        mc8.overall_mean, mc3.overall_mean
    ))
}

fn measure_prepare_limit() -> Check {
    let mut notes = Vec::new();
    for d in [2usize, 4] {
        let s = Scenario {
            d,
            ..make_demo(DemoName::AntipodalPair)
        };
        let r = simulate(&s, &Builtin::MeasureAndBroadcast, 100_000, 11).map_err(err)?;
        let expected = 2.0 / (d as f64 + 1.0);
        ensure((r.overall_mean - expected).abs() <= 0.005, || {
            format!("d={d}: MC {} vs {expected}", r.overall_mean)
        })?;
        ensure(
            measure_prepare_fidelity(d).map_err(err)? == expected,
            || format!("d={d}: measure_prepare_fidelity"),
        )?;
        notes.push(format!("d={d} MC {:.5}", r.overall_mean));
    }
    let f64_ = cloning_fidelity(2, 64).map_err(err)?;
    ensure((f64_ - 2.0 / 3.0).abs() < 0.01, || {
        format!("cloning_fidelity(2,64) = {f64_}")
    })?;
    notes.push(format!("F(2,64) = {f64_:.5}"));
    Ok(notes.join(", "))
}

struct Peeking {
    target: Arc<AtomicUsize>,
}

struct PeekingBound {
    target: Arc<AtomicUsize>,
    n: usize,
    junk: DensityMatrix,
}

impl Strategy for Peeking {
    fn name(&self) -> String {
        "peeking_double".into()
    }

    fn bind(&self, s: &Scenario) -> Result<Arc<dyn BoundStrategy>, StrategyError> {
        Ok(Arc::new(PeekingBound {
            target: self.target.clone(),
            n: s.candidates.len(),
            junk: DensityMatrix::maximally_mixed(s.d)?,
        }))
    }
}

impl BoundStrategy for PeekingBound {
    fn plan(&self, input: &PureState, _: &mut SimRng) -> Result<Vec<Slot>, StrategyError> {
        let k = self.target.load(Ordering::SeqCst);
        Ok((0..self.n)
            .map(|i| {
                Slot::Quantum(if i == k {
                    QuantumState::Pure(input.clone())
                } else {
                    QuantumState::Mixed(self.junk.clone())
                })
            })
            .collect())
    }
}

fn no_signalling_suite() -> Check {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for demo in DemoName::ALL {
        let s = make_demo(demo);
        for strategy in Builtin::all(s.candidates.len()) {
            if strategy.bind(&s).is_err() {
                continue;
            }
            let dev = no_signalling_check(&s, &strategy, 10, 1).map_err(err)?;
            ensure(dev < 1e-9, || {
                format!("{demo} + {strategy}: deviation {dev:e}")
            })?;
            worst = worst.max(dev);
            checked += 1;
        }
    }
    let target = Arc::new(AtomicUsize::new(0));
    let peek = Peeking {
        target: target.clone(),
    };
    let tap = move |k: usize| target.store(k, Ordering::SeqCst);
    let s = make_demo(DemoName::AntipodalPair);
    let flagged = no_signalling_check_observed(&s, &peek, 10, 1, &tap).map_err(err)?;
    ensure(flagged > 0.1, || {
        format!("peeking double deviation {flagged}")
    })?;
    Ok(format!(
        "{checked} strategy/demo pairs, max deviation {worst:e}; double flagged at {flagged:.3}"
    ))
}

fn random_event(rng: &mut SimRng, n: usize) -> Event {
    Event::new(
        rng.random_range(-5.0..5.0),
        (0..n)
            .map(|_| rng.random_range(-5.0..5.0))
            .collect::<Vec<f64>>(),
    )
}

fn random_boost(rng: &mut SimRng, n: usize) -> Boost {
    let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
    let speed = rng.random_range(0.0..=0.99);
    Boost::new(dir.iter().map(|c| c / norm * speed).collect::<Vec<_>>()).expect("subluminal")
}

fn geometry_suite() -> Check {
    let mut rng = SimRng::seed_from_u64(2024);
    let mut worst_s2 = 0.0f64;
    for k in 0..10_000 {
        let n = 1 + k % 3;
        let (a, b) = (random_event(&mut rng, n), random_event(&mut rng, n));
        let boost = random_boost(&mut rng, n);
        let before = interval(&a, &b).map_err(err)?;
        let after = interval(
            &boost.apply(&a).map_err(err)?,
            &boost.apply(&b).map_err(err)?,
        )
        .map_err(err)?;
        let dev = (before.s2 - after.s2).abs();
        worst_s2 = worst_s2.max(dev);
        ensure(dev <= 1e-9, || format!("pair {k}: s2 moved by {dev:e}"))?;
        ensure(before.class == after.class, || {
            format!("pair {k}: class changed")
        })?;
    }
    for k in 0..1_000 {
        let n = 1 + k % 3;
        let p = random_event(&mut rng, n);
        let t: f64 = rng.random_range(0.1..10.0);
        let t_prime = rng.random_range(0.05..0.95) * t;
        let count = if n == 1 { 2 } else { rng.random_range(2..17) };
        let r = (t * t - t_prime * t_prime).sqrt();
        for q in candidate_sphere(&p, t, t_prime, count).map_err(err)? {
            let dist = p.spatial_distance(&q).map_err(err)?;
            ensure((dist - r).abs() <= 1e-9, || {
                format!("sphere {k}: radius {dist} vs {r}")
            })?;
            let delta = rng.random_range(0.0..2.0);
            let ret = colinear_return(&p, &q, t_prime, delta).map_err(err)?;
            let tau = proper_time(&p, &ret).map_err(err)?;
            ensure((tau - (t_prime + delta)).abs() <= 1e-9, || {
                format!("return {k}: proper time {tau} vs {}", t_prime + delta)
            })?;
        }
    }
    Ok(format!(
        "10^4 boosted pairs, max |Δs2| {worst_s2:e}; 10^3 spheres with returns"
    ))
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn lorentz_scenarios() -> Vec<Scenario> {
    let on_hyperboloid = |eta: f64, dir: [f64; 3]| {
        Event::new(
            eta.cosh(),
            dir.iter().map(|c| eta.sinh() * c).collect::<Vec<_>>(),
        )
    };
    let base = |candidates: Vec<Event>, delta: f64| Scenario {
        regime: Regime::MINKOWSKI_QUANTUM,
        d: 2,
        n: 3,
        variant: Variant::LorentzInvariant,
        p: Event::at_origin(0.0, 3),
        candidates,
        t_prime: 1.0,
        delta,
        seed: 0,
    };
    let spread = vec![
        on_hyperboloid(0.8, [1.0, 0.0, 0.0]),
        on_hyperboloid(0.8, [-1.0, 0.0, 0.0]),
        on_hyperboloid(0.5, [0.0, 0.6, 0.8]),
        on_hyperboloid(0.0, [0.0, 0.0, 1.0]),
    ];
    vec![base(spread.clone(), 0.0), base(spread, 0.2)]
}

fn classifier_invariance() -> Check {
    let mut rng = SimRng::seed_from_u64(77);
    let mut perms_checked = 0;
    for demo in DemoName::ALL {
        let s = make_demo(demo);
        let status = classify(&s).map_err(err)?.status();
        let n = s.candidates.len();
        let orders: Vec<Vec<usize>> = if n <= 6 {
            all_permutations(n)
        } else {
            (0..200)
                .map(|_| {
                    let mut o: Vec<usize> = (0..n).collect();
                    rand::seq::SliceRandom::shuffle(o.as_mut_slice(), &mut rng);
                    o
                })
                .collect()
        };
        for order in orders {
            let got = classify(&s.permuted(&order)).map_err(err)?.status();
            ensure(got == status, || {
                format!("{demo} permuted {order:?}: {got:?} vs {status:?}")
            })?;
            perms_checked += 1;
        }
    }
    let mut statuses = Vec::new();
    for s in lorentz_scenarios() {
        let status = classify(&s).map_err(err)?.status();
        for k in 0..100 {
            let boosted = s.boosted(&random_boost(&mut rng, 3)).map_err(err)?;
            let got = classify(&boosted).map_err(err)?.status();
            ensure(got == status, || {
                format!("boost {k}: {got:?} vs {status:?}")
            })?;
        }
        statuses.push(status);
    }
    ensure(
        statuses.contains(&Status::Infeasible) && statuses.contains(&Status::Undetermined),
        || format!("lorentz fixtures cover {statuses:?}"),
    )?;
    Ok(format!(
        "{perms_checked} permutations across demos; 2 lorentz scenarios x 100 boosts ({statuses:?})"
    ))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("summoner-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let path = dir.join("sphere.json");
    std::fs::write(&path, make_demo(DemoName::Sphere).to_json_pretty()).map_err(err)?;
    let run = || {
        let outcome = cmd_simulate(&path, "measure_broadcast", 20_000, Some(42), false);
        outcome
            .report
            .map(|r| r.to_json())
            .ok_or_else(|| "no report".to_string())
    };
    let (a, b) = (run()?, run()?);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("{} byte report reproduced", a.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("regime table reproduction", regime_table),
        ("no-summoning quantitative ceiling", no_summoning_ceiling),
        ("scaling in N and d", scaling_in_n_and_d),
        ("measure-and-prepare limit", measure_prepare_limit),
        ("no-signalling suite", no_signalling_suite),
        ("geometry suite", geometry_suite),
        ("classifier invariance", classifier_invariance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS [{}] {title}: {detail} ({took:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {title}: {detail} ({took:.2?})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
