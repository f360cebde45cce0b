mod common;

use common::*;
use matroid_mcmc::batch::{run_batch, run_batch_sequential};
use matroid_mcmc::exact::{mask_of, BruteRank};
use matroid_mcmc::{ChainConfig, Fields, MatroidSpec, PolarizedChain, RandomClusterChain, Sampler};
use proptest::prelude::*;

fn checked(seed: u64) -> ChainConfig {
    ChainConfig { seed, check_invariants: true, ..ChainConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn polarized_states_stay_valid((spec, f) in arb_spec_with_fields(10), seed in any::<u64>()) {
        let brute = BruteRank::new(&spec).unwrap();
        let n = spec.ground_size();
        let mut chain = PolarizedChain::new(&spec, f, checked(seed)).unwrap();
        for _ in 0..200 {
            chain.step();
            let a = chain.sample();
            prop_assert!(brute.is_independent(mask_of(&a)));
            prop_assert_eq!(a.len() + chain.y_count(), n);
        }
        let s = chain.stats();
        prop_assert_eq!(s.steps, 200);
        prop_assert!(s.proposals >= s.steps && s.rejections == s.proposals - s.steps);
    }

    #[test]
    fn cluster_states_stay_valid(
        (spec, f) in arb_spec_with_fields(10),
        q in prop_oneof![Just(0.0), Just(1.0), 0.0f64..1.0],
        seed in any::<u64>(),
    ) {
        let brute = BruteRank::new(&spec).unwrap();
        let n = spec.ground_size();
        let top = brute.full_rank();
        let mut chain = RandomClusterChain::new(&spec, f, q, checked(seed)).unwrap();
        let mut rank = brute.rank(mask_of(&chain.sample()));
        if q == 0.0 {
            prop_assert_eq!(rank, top);
        }
        for _ in 0..200 {
            chain.step();
            let a = chain.sample();
            prop_assert_eq!(a.len() + chain.y_count(), n);
            let r = brute.rank(mask_of(&a));
            if q == 0.0 {
                prop_assert!(r >= rank, "rank fell from {} to {} at q = 0", rank, r);
            }
            rank = r;
        }
        if q == 1.0 {
            prop_assert_eq!(chain.stats().rejections, 0);
        }
    }

    #[test]
    fn restart_equals_a_fresh_chain((spec, f) in arb_spec_with_fields(8), a in any::<u64>(), b in any::<u64>()) {
        let cfg = ChainConfig { step_override: Some(60), ..ChainConfig::default() };
        let mut reused = PolarizedChain::new(&spec, f.clone(), cfg.with_seed(a)).unwrap();
        reused.run();
        reused.restart(b);
        let mut fresh = PolarizedChain::new(&spec, f.clone(), cfg.with_seed(b)).unwrap();
        prop_assert_eq!(reused.run(), fresh.run());
        prop_assert_eq!(reused.stats(), fresh.stats());

        let mut reused = RandomClusterChain::new(&spec, f.clone(), 0.3, cfg.with_seed(a)).unwrap();
        reused.run();
        Sampler::restart(&mut reused, b);
        let mut fresh = RandomClusterChain::new(&spec, f, 0.3, cfg.with_seed(b)).unwrap();
        prop_assert_eq!(reused.run(), fresh.run());
    }
}

#[test]
fn step_count_formula() {
    let cfg = ChainConfig::default();
    assert_eq!(cfg.steps(3), (4.0 * 3.0 * (3.0f64 / 0.05).ln()).ceil() as u64);
    assert_eq!(cfg.steps(100), 3041);
    let custom = ChainConfig { mix_constant: 1.5, epsilon: 0.01, ..cfg.clone() };
    assert_eq!(custom.steps(10), (1.5 * 10.0 * 1000f64.ln()).ceil() as u64);
    assert_eq!(ChainConfig { step_override: Some(7), ..cfg }.steps(100), 7);
}

#[test]
fn invalid_configurations() {
    let spec = MatroidSpec::free(3);
    let f = Fields::constant(3, 1.0).unwrap();
    for bad in [
        ChainConfig { epsilon: 0.0, ..ChainConfig::default() },
        ChainConfig { epsilon: 1.0, ..ChainConfig::default() },
        ChainConfig { mix_constant: -1.0, ..ChainConfig::default() },
    ] {
        assert!(PolarizedChain::new(&spec, f.clone(), bad).is_err());
    }
    assert!(RandomClusterChain::new(&spec, f.clone(), 1.5, ChainConfig::default()).is_err());
    assert!(RandomClusterChain::new(&spec, f, -0.1, ChainConfig::default()).is_err());
    assert!(Fields::new(vec![1.0, 0.0]).is_err());
}

#[test]
fn set_state_rejects_dependent_sets() {
    let spec = MatroidSpec::graphic(&triangle());
    let mut c = PolarizedChain::new(&spec, Fields::constant(3, 1.0).unwrap(), ChainConfig::default()).unwrap();
    assert!(c.set_state(&[0, 1, 2]).is_err());
    c.set_state(&[0, 2]).unwrap();
    assert_eq!(c.sample(), vec![0, 2]);
    assert_eq!(c.y_count(), 1);
    let mut rc = RandomClusterChain::new(&spec, Fields::constant(3, 1.0).unwrap(), 0.0, ChainConfig::default()).unwrap();
    let start = rc.sample();
    assert!(rc.set_state(&[1]).is_err(), "q = 0 keeps full rank");
    assert_eq!(rc.sample(), start);
}

/// Up-step rejection rate of the polarized walk against `λmax / (1 + λmax)`.
#[test]
fn up_step_rejection_bound() {
    let cases = [
        (MatroidSpec::cographic(&k4()), vec![1.0; 6]),
        (MatroidSpec::graphic(&k4()), vec![3.0, 1.0, 2.0, 3.0, 0.5, 1.0]),
        (MatroidSpec::Uniform { n: 8, k: 2 }, vec![3.0; 8]),
    ];
    for (spec, l) in cases {
        let lmax = l.iter().cloned().fold(0.0, f64::max);
        let cfg = ChainConfig { step_override: Some(30_000), seed: 3, ..ChainConfig::default() };
        let mut c = PolarizedChain::new(&spec, Fields::new(l).unwrap(), cfg).unwrap();
        c.run();
        let rate = c.stats().rejection_rate();
        assert!(rate <= lmax / (1.0 + lmax) + 0.02, "{spec:?}: {rate}");
    }
}

#[test]
fn batches_do_not_depend_on_scheduling() {
    let spec = MatroidSpec::cographic(&k4());
    let f = Fields::new(vec![0.5, 1.0, 2.0, 1.0, 0.25, 3.0]).unwrap();
    let make = || PolarizedChain::new(&spec, f.clone(), ChainConfig::default());
    let par = run_batch(64, 11, make).unwrap();
    let seq = run_batch_sequential(64, 11, make).unwrap();
    assert_eq!(par, seq);
    assert_eq!(par.samples.len(), 64);
    let make_rc = || RandomClusterChain::new(&MatroidSpec::graphic(&k4()), f.clone(), 0.5, ChainConfig::default());
    assert_eq!(run_batch(16, 2, make_rc).unwrap(), run_batch_sequential(16, 2, make_rc).unwrap());
}
