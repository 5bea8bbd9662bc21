//! Interval-refinement search for the antenna count that minimizes the
//! average BER of an array with a fixed aperture.
//!
//! The search sweeps the even counts `2⌈(n₁ + k·step)/2⌉` inside the interval,
//! then repeatedly halves the gaps around the current best count until one of
//! them is at most 2. Every candidate shares the template's master seed, so
//! all objectives are evaluated with common random numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{simulate_ber, ArrayGeometry, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    /// Smallest antenna count considered (`n₁`).
    pub lower: usize,
    /// Largest antenna count considered (`n_m`).
    pub upper: usize,
    pub step: usize,
    /// Fixed array aperture in wavelengths.
    pub total_length: f64,
    pub snr_db_list: Vec<f64>,
    /// Everything else about the simulation; its array and SNR list are replaced per candidate.
    pub template: SimConfig,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lower < 2 || !self.lower.is_multiple_of(2) {
            return Err(Error::config(
                "interval",
                format!("lower bound {} must be even and >= 2", self.lower),
            ));
        }
        if !self.upper.is_multiple_of(2) || self.upper <= self.lower {
            return Err(Error::config(
                "interval",
                format!(
                    "upper bound {} must be even and > {}",
                    self.upper, self.lower
                ),
            ));
        }
        if self.step < 2 {
            return Err(Error::config("step", format!("{} must be >= 2", self.step)));
        }
        if !(self.total_length.is_finite() && self.total_length > 0.0) {
            return Err(Error::config(
                "total_length",
                format!("{} must be finite and > 0", self.total_length),
            ));
        }
        if self.snr_db_list.is_empty() {
            return Err(Error::config("snr_db_list", "must not be empty"));
        }
        Ok(())
    }

    /// Initial sweep `2⌈(n₁ + k·step)/2⌉` restricted to the interval.
    pub fn initial_candidates(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..)
            .map(|k| even_ceil(self.lower + k * self.step))
            .take_while(|&n| n <= self.upper)
            .collect();
        out.dedup();
        out
    }

    /// Simulation config for `element_count` antennas over the fixed aperture.
    pub fn candidate_config(&self, element_count: usize) -> SimConfig {
        let mut cfg = self.template.clone();
        cfg.array = ArrayGeometry::Aperture {
            total_length: self.total_length,
            element_count,
        };
        cfg.snr_db_list = self.snr_db_list.clone();
        cfg
    }
}

/// `2⌈x/2⌉`.
fn even_ceil(x: usize) -> usize {
    x.div_ceil(2) * 2
}

/// `2⌈(a + b)/4⌉`, the even count nearest the midpoint from above.
fn even_midpoint(a: usize, b: usize) -> usize {
    2 * (a + b).div_ceil(4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// 0 for the initial sweep, then one per refinement round.
    pub iteration: usize,
    pub candidate_m: usize,
    pub spacing_wavelengths: f64,
    pub avg_ber: f64,
    pub per_snr_ber: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub entries: Vec<TraceEntry>,
    pub optimum: usize,
    /// Refinement rounds after the initial sweep.
    pub rounds: usize,
    /// Neighbors of the optimum when the loop stopped (interval endpoints if none).
    pub final_bracket: (usize, usize),
}

impl SearchTrace {
    pub fn entry(&self, m: usize) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.candidate_m == m)
    }

    pub fn objective(&self, m: usize) -> Option<f64> {
        self.entry(m).map(|e| e.avg_ber)
    }
}

fn evaluate(m: usize, spec: &SearchSpec, iteration: usize) -> Result<TraceEntry> {
    let result = simulate_ber(&spec.candidate_config(m))?;
    let per_snr_ber: Vec<f64> = result.points.iter().map(|p| p.ber).collect();
    Ok(TraceEntry {
        iteration,
        candidate_m: m,
        spacing_wavelengths: spec.total_length / m as f64,
        avg_ber: result.mean_ber(),
        per_snr_ber,
    })
}

/// Mean BER over the search's SNR list for `m` antennas.
pub fn candidate_objective(m: usize, spec: &SearchSpec) -> Result<f64> {
    spec.validate()?;
    Ok(evaluate(m, spec, 0)?.avg_ber)
}

/// Runs the search and returns the full audit trail.
pub fn search(spec: &SearchSpec) -> Result<SearchTrace> {
    spec.validate()?;
    let initial = spec.initial_candidates();
    if initial.is_empty() {
        return Err(Error::config(
            "step",
            "no candidate counts fall inside the interval",
        ));
    }

    let mut objective: BTreeMap<usize, f64> = BTreeMap::new();
    let mut entries = Vec::new();
    for &m in &initial {
        let e = evaluate(m, spec, 0)?;
        objective.insert(m, e.avg_ber);
        entries.push(e);
    }

    let mut rounds = 0;
    loop {
        // BTreeMap iterates ascending, so the strict comparison keeps the smaller count on ties.
        let (best, _) = objective
            .iter()
            .fold((0usize, f64::INFINITY), |acc, (&m, &v)| {
                if v < acc.1 {
                    (m, v)
                } else {
                    acc
                }
            });
        let left = objective
            .range(..best)
            .next_back()
            .map_or(spec.lower, |(&m, _)| m);
        let right = objective
            .range(best + 1..)
            .next()
            .map_or(spec.upper, |(&m, _)| m);
        if (best - left).min(right - best) <= 2 {
            return Ok(SearchTrace {
                entries,
                optimum: best,
                rounds,
                final_bracket: (left, right),
            });
        }
        rounds += 1;
        for m in [even_midpoint(left, best), even_midpoint(best, right)] {
            if objective.contains_key(&m) || m < spec.lower || m > spec.upper {
                continue;
            }
            let e = evaluate(m, spec, rounds)?;
            objective.insert(m, e.avg_ber);
            entries.push(e);
        }
    }
}

/// Antenna count minimizing the average BER.
pub fn optimal_antenna_count(spec: &SearchSpec) -> Result<usize> {
    Ok(search(spec)?.optimum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::DipoleArraySpec;

    fn spec(lower: usize, upper: usize, step: usize) -> SearchSpec {
        let mut template = SimConfig::new(
            ArrayGeometry::Explicit(DipoleArraySpec::matched(2, 0.5).unwrap()),
            vec![0.0],
        );
        template.n_trials = 200;
        SearchSpec {
            lower,
            upper,
            step,
            total_length: 10.0,
            snr_db_list: vec![0.0],
            template,
        }
    }

    #[test]
    fn candidate_generation() {
        assert_eq!(
            spec(50, 250, 50).initial_candidates(),
            vec![50, 100, 150, 200, 250]
        );
        assert_eq!(
            spec(20, 40, 4).initial_candidates(),
            vec![20, 24, 28, 32, 36, 40]
        );
        // Odd steps are rounded up to even counts.
        assert_eq!(spec(10, 20, 3).initial_candidates(), vec![10, 14, 16, 20]);
        assert_eq!(spec(80, 82, 50).initial_candidates(), vec![80]);
    }

    #[test]
    fn midpoints() {
        assert_eq!(even_midpoint(50, 100), 38 * 2);
        assert_eq!(even_midpoint(0, 4), 2);
        assert_eq!(even_midpoint(96, 100), 50 * 2 - 2);
        assert_eq!(even_ceil(51), 52);
    }

    #[test]
    fn validation() {
        assert!(spec(3, 10, 2).validate().is_err());
        assert!(spec(10, 10, 2).validate().is_err());
        assert!(spec(10, 11, 2).validate().is_err());
        assert!(spec(10, 20, 1).validate().is_err());
        let mut s = spec(10, 20, 2);
        s.total_length = 0.0;
        assert!(s.validate().is_err());
        let mut s = spec(10, 20, 2);
        s.snr_db_list.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn degenerate_interval_returns_only_candidate() {
        let trace = search(&spec(80, 82, 50)).unwrap();
        assert_eq!(trace.optimum, 80);
        assert_eq!(trace.rounds, 0);
        assert_eq!(trace.entries.len(), 1);
    }

    #[test]
    fn objective_is_mean_over_snr() {
        let s = spec(10, 20, 2);
        let one = candidate_objective(10, &s).unwrap();
        let mut twice = s.clone();
        twice.snr_db_list = vec![0.0, 0.0];
        assert_eq!(candidate_objective(10, &twice).unwrap(), one);
    }
}
