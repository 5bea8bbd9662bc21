use stcm_core::optimizer::{candidate_objective, search, SearchSpec};
use stcm_core::{simulate_ber, ArrayGeometry, DipoleArraySpec, SimConfig};

fn spec(
    lower: usize,
    upper: usize,
    step: usize,
    total_length: f64,
    snr: Vec<f64>,
    trials: u64,
) -> SearchSpec {
    let mut template = SimConfig::new(
        ArrayGeometry::Explicit(DipoleArraySpec::matched(2, 0.5).unwrap()),
        vec![0.0],
    );
    template.n_trials = trials;
    template.master_seed = 5;
    SearchSpec {
        lower,
        upper,
        step,
        total_length,
        snr_db_list: snr,
        template,
    }
}

#[test]
fn trace_invariants() {
    let s = spec(10, 60, 10, 6.0, vec![0.0, 4.0], 1500);
    let trace = search(&s).unwrap();
    for e in &trace.entries {
        assert_eq!(e.candidate_m % 2, 0);
        assert!((10..=60).contains(&e.candidate_m));
        assert!((e.spacing_wavelengths - 6.0 / e.candidate_m as f64).abs() < 1e-15);
    }
    assert!(trace.entry(trace.optimum).is_some());
    let bound = s.initial_candidates().len() as f64 + 2.0 * (50f64).log2() + 4.0;
    assert!(
        (trace.entries.len() as f64) <= bound,
        "{} evaluations",
        trace.entries.len()
    );

    // Local optimality over the recorded neighbors in the final bracket.
    let best = trace.objective(trace.optimum).unwrap();
    for nb in [trace.final_bracket.0, trace.final_bracket.1] {
        if let Some(v) = trace.objective(nb) {
            assert!(best <= v);
        }
    }
    assert_eq!(trace, search(&s).unwrap());
}

#[test]
fn objective_matches_direct_composition() {
    let s = spec(50, 250, 50, 30.0, vec![5.0, 10.0], 2000);
    let obj = candidate_objective(100, &s).unwrap();
    let mut direct = s.template.clone();
    direct.array = ArrayGeometry::Explicit(DipoleArraySpec::matched(100, 0.3).unwrap());
    direct.snr_db_list = vec![5.0, 10.0];
    let r = simulate_ber(&direct).unwrap();
    assert_eq!(obj, (r.points[0].ber + r.points[1].ber) / 2.0);
}

#[test]
fn single_snr_objective_is_that_ber() {
    let s = spec(10, 20, 2, 5.0, vec![3.0], 1000);
    let mut direct = s.template.clone();
    direct.array = ArrayGeometry::Aperture {
        total_length: 5.0,
        element_count: 12,
    };
    direct.snr_db_list = vec![3.0];
    assert_eq!(
        candidate_objective(12, &s).unwrap(),
        simulate_ber(&direct).unwrap().points[0].ber
    );
}

#[test]
fn degenerate_interval() {
    let trace = search(&spec(80, 82, 50, 30.0, vec![10.0], 200)).unwrap();
    assert_eq!(trace.optimum, 80);
    assert_eq!(trace.entries.len(), 1);
}
