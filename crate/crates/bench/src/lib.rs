//! Shared fixtures for the criterion benchmarks.

use stcm_core::{ArrayGeometry, DipoleArraySpec, SimConfig};

/// Matched array over a 30-wavelength aperture.
pub fn aperture_array(element_count: usize) -> DipoleArraySpec {
    DipoleArraySpec::from_aperture(element_count, 30.0).expect("valid aperture array")
}

/// Small coupled QPSK run at 10 dB.
pub fn bench_config(element_count: usize, n_trials: u64) -> SimConfig {
    let mut cfg = SimConfig::new(
        ArrayGeometry::Aperture {
            total_length: 30.0,
            element_count,
        },
        vec![10.0],
    );
    cfg.n_trials = n_trials;
    cfg
}
