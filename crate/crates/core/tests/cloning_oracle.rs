mod oracle;

use oracle::optimal_clone_fidelity as oracle;
use summoner::quantum::{cloning_fidelity, UniversalCloner};

#[test]
fn qubit_two_copies_is_five_sixths() {
    let f = oracle(2, 2);
    assert!((f - 5.0 / 6.0).abs() < 1e-6, "oracle {f}");
    assert!((cloning_fidelity(2, 2).unwrap() - f).abs() < 1e-6);
    let built = UniversalCloner::new(2, 2).unwrap();
    assert!((built.average_marginal_fidelity(0).unwrap() - f).abs() < 1e-6);
}

#[test]
fn qutrit_two_copies_is_three_quarters() {
    let f = oracle(3, 2);
    assert!((f - 0.75).abs() < 1e-6, "oracle {f}");
    assert!((cloning_fidelity(3, 2).unwrap() - f).abs() < 1e-6);
}

#[test]
fn qubit_three_copies_matches_closed_form() {
    let f = oracle(2, 3);
    let closed = cloning_fidelity(2, 3).unwrap();
    assert!((closed - 7.0 / 9.0).abs() < 1e-15);
    assert!((f - closed).abs() < 1e-6, "oracle {f} vs {closed}");
}
