//! Random certified-function suites.

use sharp_ineq_core::oracle::*;
use sharp_ineq_core::*;

fn suite_space(t: TheoremId) -> (Space, Vec<f64>) {
    match t {
        TheoremId::Hypersingular => (Space::continuum(1, 0).unwrap(), vec![0.5, 1.0]),
        TheoremId::MixedAdditive | TheoremId::MixedMultiplicative => (Space::continuum(1, 1).unwrap(), vec![0.5, 1.0]),
        _ => (Space::lattice(2, 0).unwrap(), vec![1.5, 2.5]),
    }
}

#[test]
fn no_violations() {
    for t in TheoremId::ALL {
        let (s, hs) = suite_space(t);
        let trials = if t == TheoremId::Hypersingular { 40 } else { 200 };
        let r = random_suite(&SuiteConfig::new(t, s, Modulus::power(0.5).unwrap(), hs, trials, 1)).unwrap();
        assert_eq!(r.violations, 0, "{t}: {:?}", r.worst_case);
        assert_eq!(r.trials, trials);
        let worst = r.worst_case.unwrap();
        assert_eq!(worst.report.gap, r.min_gap);
    }
}

#[test]
fn table_moduli_on_lattices() {
    let w = Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)]).unwrap();
    for t in [TheoremId::Lemma1, TheoremId::Nagy, TheoremId::NagyL1, TheoremId::Sobolev, TheoremId::Charge] {
        for (d, m) in [(1, 0), (1, 1), (2, 1)] {
            let r =
                random_suite(&SuiteConfig::new(t, Space::lattice(d, m).unwrap(), w.clone(), vec![1.5, 3.5], 100, 3))
                    .unwrap();
            assert_eq!(r.violations, 0, "{t} {d} {m}: {:?}", r.worst_case);
        }
    }
}

#[test]
fn continuum_trials() {
    let w = Modulus::identity();
    for t in [TheoremId::Lemma1, TheoremId::Nagy, TheoremId::NagyL1, TheoremId::Sobolev, TheoremId::Charge] {
        let r = random_suite(&SuiteConfig::new(t, Space::continuum(1, 0).unwrap(), w.clone(), vec![0.5, 2.0], 30, 4))
            .unwrap();
        assert_eq!(r.violations, 0, "{t}: {:?}", r.worst_case);
    }
}

#[test]
fn suites_are_deterministic() {
    let cfg = SuiteConfig::new(TheoremId::Nagy, Space::lattice(2, 0).unwrap(), Modulus::identity(), vec![1.5], 50, 9);
    assert_eq!(random_suite(&cfg).unwrap(), random_suite(&cfg).unwrap());
    let spec = trial_spec(TheoremId::Nagy, &cfg.space, &cfg.omega, 9, 17);
    assert_eq!(spec, trial_spec(TheoremId::Nagy, &cfg.space, &cfg.omega, 9, 17));
}

#[test]
fn zero_trials_is_an_error() {
    let cfg = SuiteConfig::new(TheoremId::Nagy, Space::lattice(2, 0).unwrap(), Modulus::identity(), vec![1.5], 0, 1);
    assert!(random_suite(&cfg).is_err());
}
