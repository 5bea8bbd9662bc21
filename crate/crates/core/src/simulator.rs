//! Monte-Carlo BER engine.
//!
//! Each trial draws the desired user's block-fading channel, any interfering
//! users' channels, two symbols and two noise samples from its own substream,
//! then sends one Alamouti pair. Bit errors are reduced as integers, so the
//! result is identical for any worker count.

use std::ops::Range;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{
    complex_gaussian, draw_channel, partition, SelectionStyle, SubArrayAssignment,
};
use crate::coupling::{CouplingMatrix, DipoleArraySpec};
use crate::error::{Error, Result};
use crate::rng::StreamFactory;
use crate::stcm::{
    combine, detect, inner, norm_sqr, precoding_weights, receive_with_gains, ModulationScheme,
    SlotGains,
};

pub const DEFAULT_TRIALS: u64 = 20_000;

/// Two-sided 95% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Array geometry, either explicit or spread over a fixed aperture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrayGeometry {
    Explicit(DipoleArraySpec),
    /// Matched half-wave dipoles with spacing `total_length / element_count`.
    Aperture {
        total_length: f64,
        element_count: usize,
    },
}

impl ArrayGeometry {
    pub fn resolve(&self) -> Result<DipoleArraySpec> {
        match *self {
            ArrayGeometry::Explicit(spec) => {
                spec.validate()?;
                Ok(spec)
            }
            ArrayGeometry::Aperture {
                total_length,
                element_count,
            } => DipoleArraySpec::from_aperture(element_count, total_length),
        }
    }
}

/// Which branch energies the receiver uses in the combiner and detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombinerKnowledge {
    /// `‖h₀‖², ‖h₁‖²` of the coupling-free channel.
    #[default]
    Nominal,
    /// `‖ĥ₀‖², ‖ĥ₁‖²` of the coupled channel.
    Coupled,
}

impl std::str::FromStr for CombinerKnowledge {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nominal" => Ok(Self::Nominal),
            "coupled" => Ok(Self::Coupled),
            other => Err(format!(
                "unknown combiner '{other}' (expected nominal|coupled)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub array: ArrayGeometry,
    pub coupling_enabled: bool,
    pub style: SelectionStyle,
    pub scheme: ModulationScheme,
    pub snr_db_list: Vec<f64>,
    pub n_trials: u64,
    pub n_users: usize,
    pub master_seed: u64,
    pub combiner: CombinerKnowledge,
    /// Test hook: zero noise regardless of SNR.
    pub noiseless: bool,
    /// Worker threads; `None` uses the global pool. Not part of the fingerprint.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl SimConfig {
    /// Single-user QPSK with coupling on, contiguous selection and
    /// 20000 trials per SNR point.
    pub fn new(array: ArrayGeometry, snr_db_list: Vec<f64>) -> Self {
        Self {
            array,
            coupling_enabled: true,
            style: SelectionStyle::Contiguous,
            scheme: ModulationScheme::qpsk(),
            snr_db_list,
            n_trials: DEFAULT_TRIALS,
            n_users: 1,
            master_seed: 0,
            combiner: CombinerKnowledge::Nominal,
            noiseless: false,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<DipoleArraySpec> {
        let spec = self.array.resolve()?;
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be at least 1"));
        }
        if self.snr_db_list.is_empty() {
            return Err(Error::config("snr_db_list", "must not be empty"));
        }
        if let Some(bad) = self.snr_db_list.iter().find(|s| !s.is_finite()) {
            return Err(Error::config("snr_db_list", format!("{bad} is not finite")));
        }
        if self.n_users == 0 {
            return Err(Error::config("n_users", "must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        Ok(spec)
    }

    /// Short stable hash of every field that affects the result.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn bits_per_trial(&self) -> u64 {
        2 * self.scheme.bits_per_symbol() as u64
    }
}

/// Noise standard deviation `σ` with `σ² = 10^(−snr_db/10)` for unit-energy symbols.
pub fn noise_sigma(snr_db: f64) -> f64 {
    noise_variance(snr_db).sqrt()
}

pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// 95% Wilson score interval for a bit-error proportion.
pub fn ber_confidence(bit_errors: u64, bits_total: u64) -> (f64, f64) {
    assert!(bits_total > 0, "bits_total must be positive");
    let n = bits_total as f64;
    let p = bit_errors as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The bounds are exactly 0 and 1 at the extremes; avoid rounding residue there.
    let low = if bit_errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let high = if bit_errors == bits_total {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub ber: f64,
}

impl BerPoint {
    pub fn new(snr_db: f64, bit_errors: u64, bits_total: u64) -> Self {
        Self {
            snr_db,
            bit_errors,
            bits_total,
            ber: bit_errors as f64 / bits_total as f64,
        }
    }

    /// Binomial standard error `√(p(1−p)/n)`.
    pub fn standard_error(&self) -> f64 {
        (self.ber * (1.0 - self.ber) / self.bits_total as f64).sqrt()
    }

    pub fn confidence(&self) -> (f64, f64) {
        ber_confidence(self.bit_errors, self.bits_total)
    }
}

/// `√(se_a² + se_b²)` for comparing two independent estimates.
pub fn pooled_standard_error(a: &BerPoint, b: &BerPoint) -> f64 {
    a.standard_error().hypot(b.standard_error())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BerResult {
    pub points: Vec<BerPoint>,
    pub fingerprint: String,
    #[serde(skip)]
    pub duration: Duration,
}

impl PartialEq for BerResult {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.fingerprint == other.fingerprint
    }
}

impl BerResult {
    pub fn mean_ber(&self) -> f64 {
        self.points.iter().map(|p| p.ber).sum::<f64>() / self.points.len() as f64
    }

    pub fn point(&self, snr_db: f64) -> Option<&BerPoint> {
        self.points.iter().find(|p| p.snr_db == snr_db)
    }
}

/// A validated configuration with its coupling matrix built once.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    spec: DipoleArraySpec,
    assignment: SubArrayAssignment,
    coupling: Option<CouplingMatrix>,
    streams: StreamFactory,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        let spec = config.validate()?;
        let coupling = if config.coupling_enabled {
            Some(CouplingMatrix::new(&spec)?)
        } else {
            None
        };
        Self::with_coupling(config, coupling)
    }

    /// Uses a caller-supplied coupling matrix (or none) instead of building one.
    pub fn with_coupling(config: SimConfig, coupling: Option<CouplingMatrix>) -> Result<Self> {
        let spec = config.validate()?;
        if let Some(c) = &coupling {
            if c.dim() != spec.element_count {
                return Err(Error::DimensionMismatch {
                    expected: spec.element_count,
                    found: c.dim(),
                });
            }
        }
        let assignment = SubArrayAssignment::new(config.style, spec.element_count)?;
        let streams = StreamFactory::new(config.master_seed);
        Ok(Self {
            config,
            spec,
            assignment,
            coupling,
            streams,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn array(&self) -> &DipoleArraySpec {
        &self.spec
    }

    pub fn coupling(&self) -> Option<&CouplingMatrix> {
        self.coupling.as_ref()
    }

    /// Bit errors of user 0 over `trials` at SNR point `snr_index`.
    pub fn count_errors(&self, snr_index: usize, trials: Range<u64>) -> u64 {
        let snr_db = self.config.snr_db_list[snr_index];
        let sigma = if self.config.noiseless {
            0.0
        } else {
            noise_sigma(snr_db)
        };
        let streams = self.streams.for_snr(snr_db);
        trials
            .into_par_iter()
            .map(|t| {
                let mut rng = streams.trial(t);
                self.run_trial(&mut rng, sigma) as u64
            })
            .sum()
    }

    fn run_trial<R: Rng + ?Sized>(&self, rng: &mut R, sigma: f64) -> u32 {
        let m = self.spec.element_count;
        let n = self.assignment.branch_size();
        let scheme = &self.config.scheme;

        let h = draw_channel(rng, m);
        let coupled = match &self.coupling {
            Some(c) => c.entries().mul_vec(&h).expect("dimension checked"),
            None => h.clone(),
        };
        let (h0, h1) = partition(&h, &self.assignment).expect("dimension checked");
        let (e0, e1) = partition(&coupled, &self.assignment).expect("dimension checked");

        let gains = SlotGains {
            branch0: inner(&precoding_weights(&h0), &e0),
            branch1: inner(&precoding_weights(&h1), &e1),
        };

        let mut interference = Vec::with_capacity(self.config.n_users - 1);
        for _ in 1..self.config.n_users {
            let g = draw_channel(rng, m);
            let (g0, g1) = partition(&g, &self.assignment).expect("dimension checked");
            let s_even = scheme.point(rng.random_range(0..scheme.order()));
            let s_odd = scheme.point(rng.random_range(0..scheme.order()));
            interference.push((
                inner(&precoding_weights(&g0), &e0),
                inner(&precoding_weights(&g1), &e1),
                s_even,
                s_odd,
            ));
        }

        let tx0 = rng.random_range(0..scheme.order());
        let tx1 = rng.random_range(0..scheme.order());
        let noise = [complex_gaussian(rng) * sigma, complex_gaussian(rng) * sigma];

        let received = receive_with_gains(
            [scheme.point(tx0), scheme.point(tx1)],
            gains,
            &interference,
            noise,
        );
        let (g0, g1) = match self.config.combiner {
            CombinerKnowledge::Nominal => (norm_sqr(&h0), norm_sqr(&h1)),
            CombinerKnowledge::Coupled => (norm_sqr(&e0), norm_sqr(&e1)),
        };
        let (rx0, rx1) = detect(combine(received, g0, g1), g0, g1, n, scheme);
        ((tx0 ^ rx0).count_ones()) + ((tx1 ^ rx1).count_ones())
    }

    pub fn run(&self) -> BerResult {
        let start = Instant::now();
        let bits_total = self.config.n_trials * self.config.bits_per_trial();
        let work = || {
            self.config
                .snr_db_list
                .iter()
                .enumerate()
                .map(|(i, &snr)| {
                    BerPoint::new(
                        snr,
                        self.count_errors(i, 0..self.config.n_trials),
                        bits_total,
                    )
                })
                .collect::<Vec<_>>()
        };
        let points = match self.config.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("thread pool")
                .install(work),
            None => work(),
        };
        BerResult {
            points,
            fingerprint: self.config.fingerprint(),
            duration: start.elapsed(),
        }
    }
}

/// Builds the coupling matrix once and runs every SNR point of `config`.
pub fn simulate_ber(config: &SimConfig) -> Result<BerResult> {
    Ok(Simulator::new(config.clone())?.run())
}
