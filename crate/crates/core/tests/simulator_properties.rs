mod support;

use stcm_core::simulator::pooled_standard_error;
use stcm_core::{
    simulate_ber, ArrayGeometry, DipoleArraySpec, SelectionStyle, SimConfig, Simulator,
};
use support::{reference_uncoupled_ber, Q_SQRT2};

fn config(m: usize, d: f64, snr: Vec<f64>, coupling: bool, trials: u64) -> SimConfig {
    let mut c = SimConfig::new(
        ArrayGeometry::Explicit(DipoleArraySpec::matched(m, d).unwrap()),
        snr,
    );
    c.coupling_enabled = coupling;
    c.n_trials = trials;
    c.master_seed = 99;
    c
}

#[test]
fn identical_for_any_worker_count() {
    let mut c = config(24, 0.3, vec![0.0, 6.0], true, 3000);
    c.n_users = 2;
    c.workers = Some(1);
    let a = simulate_ber(&c).unwrap();
    c.workers = Some(3);
    let b = simulate_ber(&c).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, simulate_ber(&c).unwrap());
}

#[test]
fn split_trials_pool_exactly() {
    let sim = Simulator::new(config(20, 0.25, vec![3.0], true, 4000)).unwrap();
    let full = sim.count_errors(0, 0..4000);
    let halves = sim.count_errors(0, 0..1700) + sim.count_errors(0, 1700..4000);
    assert_eq!(full, halves);
    assert_eq!(full, sim.run().points[0].bit_errors);
}

#[test]
fn ber_non_increasing_in_snr() {
    let r = simulate_ber(&config(
        40,
        0.3,
        vec![-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0],
        true,
        5000,
    ))
    .unwrap();
    for w in r.points.windows(2) {
        let slack = 3.0 * pooled_standard_error(&w[0], &w[1]);
        assert!(w[1].ber <= w[0].ber + slack, "{:?} -> {:?}", w[0], w[1]);
    }
}

#[test]
fn hardening_limit_and_reference_resimulation() {
    let r = simulate_ber(&config(200, 0.5, vec![0.0], false, 20_000)).unwrap();
    let ber = r.points[0].ber;
    let reference = reference_uncoupled_ber(200, 0.0, 20_000, 7);
    assert!((ber - Q_SQRT2).abs() < 0.01, "engine {ber}");
    assert!((reference - Q_SQRT2).abs() < 0.01, "reference {reference}");
    assert!((ber - reference).abs() < 0.01);
}

#[test]
fn noise_dominated_regime_is_a_coin_flip() {
    let r = simulate_ber(&config(16, 0.5, vec![-40.0], true, 5000)).unwrap();
    assert!((r.points[0].ber - 0.5).abs() < 0.02, "{:?}", r.points[0]);
}

#[test]
fn noiseless_uncoupled_is_error_free() {
    let mut c = config(100, 0.5, vec![0.0, -10.0], false, 5000);
    c.noiseless = true;
    assert!(simulate_ber(&c)
        .unwrap()
        .points
        .iter()
        .all(|p| p.bit_errors == 0));
}

#[test]
fn styles_indistinguishable_without_coupling() {
    let mut c = config(60, 0.3, vec![0.0, 4.0], false, 10_000);
    let a = simulate_ber(&c).unwrap();
    c.style = SelectionStyle::Interleaved;
    let b = simulate_ber(&c).unwrap();
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!(
            (p.ber - q.ber).abs() <= 3.0 * pooled_standard_error(p, q),
            "{p:?} {q:?}"
        );
    }
}

#[test]
fn close_spacing_degrades_ber_at_10_db() {
    let on = simulate_ber(&config(100, 0.2, vec![10.0], true, 20_000)).unwrap();
    let off = simulate_ber(&config(100, 0.2, vec![10.0], false, 20_000)).unwrap();
    let (p, q) = (&on.points[0], &off.points[0]);
    assert!(
        p.ber - q.ber > 3.0 * pooled_standard_error(p, q),
        "coupled {p:?} vs uncoupled {q:?}"
    );
}

#[test]
fn coupled_combiner_option_runs() {
    let mut c = config(20, 0.2, vec![5.0], true, 2000);
    c.combiner = stcm_core::CombinerKnowledge::Coupled;
    let r = simulate_ber(&c).unwrap();
    assert!(r.points[0].ber < 0.5);
}
