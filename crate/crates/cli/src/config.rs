//! Experiment configuration files.
//!
//! A TOML file with one table per concern:
//!
//! ```toml
//! [array]
//! element_count = 100
//! spacing = 0.2              # wavelengths; or spacing_m with frequency_hz
//! antenna_impedance = [73.0, 42.0]
//!
//! [simulation]
//! snr_db = [0, 5, 10, 15, 20]
//! trials = 20000
//! seed = 1
//!
//! [sweep]
//! axis = "spacing"
//! values = [0.2, 0.4, 0.6]
//!
//! [search]
//! interval = [50, 250]
//! step = 50
//! total_length = 30.0
//! ```
//!
//! Command-line flags override file values, which override defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use stcm_core::coupling::{HALF_WAVE, NOMINAL_ANTENNA_IMPEDANCE};
use stcm_core::{
    ArrayGeometry, CombinerKnowledge, Complex64, DipoleArraySpec, ModulationKind, ModulationScheme,
    SelectionStyle, SimConfig,
};

use crate::error::{CliError, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const DEFAULT_CARRIER_HZ: f64 = 2.0e9;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub array: ArraySection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub element_count: Option<usize>,
    pub spacing: Option<f64>,
    pub spacing_m: Option<f64>,
    pub total_length: Option<f64>,
    pub total_length_m: Option<f64>,
    pub dipole_length: Option<f64>,
    pub antenna_impedance: Option<[f64; 2]>,
    pub load_impedance: Option<[f64; 2]>,
    pub frequency_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub snr_db: Option<Vec<f64>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub users: Option<usize>,
    pub coupling: Option<bool>,
    pub style: Option<String>,
    pub combiner: Option<String>,
    pub modulation: Option<String>,
    pub modulation_order: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub interval: Option<[usize; 2]>,
    pub step: Option<usize>,
    pub total_length: Option<f64>,
    pub total_length_m: Option<f64>,
    pub snr_db: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub gnuplot: Option<bool>,
}

/// Values given on the command line; each one wins over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub no_coupling: bool,
    pub style: Option<SelectionStyle>,
    pub element_count: Option<usize>,
    pub spacing: Option<f64>,
    pub total_length: Option<f64>,
    pub snr_db: Option<Vec<f64>>,
    pub gnuplot: bool,
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Applies command-line overrides in place.
    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_some() {
            self.simulation.seed = o.seed;
        }
        if o.trials.is_some() {
            self.simulation.trials = o.trials;
        }
        if o.no_coupling {
            self.simulation.coupling = Some(false);
        }
        if let Some(style) = o.style {
            self.simulation.style = Some(style.to_string());
        }
        if o.element_count.is_some() {
            self.array.element_count = o.element_count;
        }
        if o.spacing.is_some() {
            self.array.spacing = o.spacing;
            self.array.spacing_m = None;
        }
        if o.total_length.is_some() {
            self.array.total_length = o.total_length;
            self.array.total_length_m = None;
            self.search.total_length = o.total_length;
            self.search.total_length_m = None;
        }
        if o.snr_db.is_some() {
            self.simulation.snr_db = o.snr_db.clone();
            self.search.snr_db = o.snr_db.clone();
        }
        if o.out_dir.is_some() {
            self.output.dir = o.out_dir.clone();
        }
        if o.gnuplot {
            self.output.gnuplot = Some(true);
        }
    }

    pub fn wavelength_m(&self) -> Result<f64> {
        let f = self.array.frequency_hz.unwrap_or(DEFAULT_CARRIER_HZ);
        if !(f.is_finite() && f > 0.0) {
            return Err(CliError::config(format!(
                "[array] frequency_hz = {f}: must be finite and > 0"
            )));
        }
        Ok(SPEED_OF_LIGHT / f)
    }

    fn to_wavelengths(
        &self,
        field: &str,
        wl: Option<f64>,
        meters: Option<f64>,
    ) -> Result<Option<f64>> {
        match (wl, meters) {
            (Some(_), Some(_)) => Err(CliError::config(format!(
                "[array] {field} and {field}_m are mutually exclusive"
            ))),
            (Some(v), None) => Ok(Some(v)),
            (None, Some(m)) => Ok(Some(m / self.wavelength_m()?)),
            (None, None) => Ok(None),
        }
    }

    pub fn spacing(&self) -> Result<Option<f64>> {
        self.to_wavelengths("spacing", self.array.spacing, self.array.spacing_m)
    }

    pub fn total_length(&self) -> Result<Option<f64>> {
        self.to_wavelengths(
            "total_length",
            self.array.total_length,
            self.array.total_length_m,
        )
    }

    pub fn element_count(&self) -> Result<usize> {
        let m = self
            .array
            .element_count
            .ok_or_else(|| CliError::config("[array] element_count: required"))?;
        if m < 2 || m % 2 != 0 {
            return Err(CliError::config(format!(
                "[array] element_count = {m}: must be an even number >= 2 (two equal sub-arrays)"
            )));
        }
        Ok(m)
    }

    fn impedance(field: &str, v: Option<[f64; 2]>) -> Result<Option<Complex64>> {
        match v {
            None => Ok(None),
            Some([re, im]) if re.is_finite() && im.is_finite() => Ok(Some(Complex64::new(re, im))),
            Some(_) => Err(CliError::config(format!(
                "[array] {field}: entries must be finite"
            ))),
        }
    }

    /// Array with `element_count` elements at `spacing` wavelengths.
    pub fn array_spec(&self, element_count: usize, spacing: f64) -> Result<DipoleArraySpec> {
        if element_count < 2 || !element_count.is_multiple_of(2) {
            return Err(CliError::config(format!(
                "[array] element_count = {element_count}: must be an even number >= 2 (two equal sub-arrays)"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(CliError::config(format!(
                "[array] spacing = {spacing}: must be finite and > 0"
            )));
        }
        let length = self.array.dipole_length.unwrap_or(HALF_WAVE);
        if (length - HALF_WAVE).abs() > 1e-12 {
            return Err(CliError::config(format!(
                "[array] dipole_length = {length}: only half-wave dipoles (0.5) are supported"
            )));
        }
        let za = Self::impedance("antenna_impedance", self.array.antenna_impedance)?
            .unwrap_or(NOMINAL_ANTENNA_IMPEDANCE);
        let zl = Self::impedance("load_impedance", self.array.load_impedance)?.unwrap_or(za.conj());
        Ok(DipoleArraySpec::new(
            element_count,
            spacing,
            length,
            za,
            zl,
        )?)
    }

    /// Array from `[array]`: explicit spacing, or aperture divided by count.
    pub fn base_array(&self) -> Result<DipoleArraySpec> {
        let m = self.element_count()?;
        let spacing = match (self.spacing()?, self.total_length()?) {
            (Some(d), _) => d,
            (None, Some(total)) => total / m as f64,
            (None, None) => {
                return Err(CliError::config(
                    "[array] spacing: required (or give total_length)",
                ))
            }
        };
        self.array_spec(m, spacing)
    }

    pub fn scheme(&self) -> Result<ModulationScheme> {
        let name = self
            .simulation
            .modulation
            .as_deref()
            .unwrap_or("qpsk")
            .to_ascii_lowercase();
        let (kind, default_order) = match name.as_str() {
            "qpsk" => (ModulationKind::Qpsk, 4),
            "psk" => (ModulationKind::Psk, 8),
            "qam" => (ModulationKind::Qam, 16),
            other => {
                return Err(CliError::config(format!(
                    "[simulation] modulation = \"{other}\": expected qpsk, psk or qam"
                )))
            }
        };
        let order = self.simulation.modulation_order.unwrap_or(default_order);
        ModulationScheme::new(kind, order)
            .map_err(|e| CliError::config(format!("[simulation] modulation_order = {order}: {e}")))
    }

    pub fn snr_list(&self) -> Result<Vec<f64>> {
        let list = self
            .simulation
            .snr_db
            .clone()
            .unwrap_or_else(|| vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        check_snr("[simulation] snr_db", &list)?;
        Ok(list)
    }

    /// Simulation template with every `[simulation]` field resolved.
    pub fn sim_config(&self, array: DipoleArraySpec, workers: Option<usize>) -> Result<SimConfig> {
        let mut cfg = SimConfig::new(ArrayGeometry::Explicit(array), self.snr_list()?);
        let s = &self.simulation;
        if let Some(t) = s.trials {
            if t == 0 {
                return Err(CliError::config(
                    "[simulation] trials = 0: must be at least 1",
                ));
            }
            cfg.n_trials = t;
        }
        if let Some(k) = s.users {
            if k == 0 {
                return Err(CliError::config(
                    "[simulation] users = 0: must be at least 1",
                ));
            }
            cfg.n_users = k;
        }
        cfg.master_seed = s.seed.unwrap_or(0);
        cfg.coupling_enabled = s.coupling.unwrap_or(true);
        if let Some(style) = &s.style {
            cfg.style = style
                .parse()
                .map_err(|e| CliError::config(format!("[simulation] style: {e}")))?;
        }
        if let Some(comb) = &s.combiner {
            cfg.combiner = comb
                .parse::<CombinerKnowledge>()
                .map_err(|e| CliError::config(format!("[simulation] combiner: {e}")))?;
        }
        cfg.scheme = self.scheme()?;
        if workers == Some(0) {
            return Err(CliError::config("--workers: must be at least 1"));
        }
        cfg.workers = workers;
        Ok(cfg)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .or_else(|| std::env::var_os("STCM_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn gnuplot(&self) -> bool {
        self.output.gnuplot.unwrap_or(false)
    }
}

pub fn check_snr(field: &str, list: &[f64]) -> Result<()> {
    if list.is_empty() {
        return Err(CliError::config(format!("{field}: must not be empty")));
    }
    if let Some(bad) = list.iter().find(|v| !v.is_finite()) {
        return Err(CliError::config(format!("{field}: {bad} is not finite")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_defaults() {
        let cfg = ExperimentConfig::parse(
            r#"
[array]
element_count = 100
spacing = 0.2

[simulation]
snr_db = [0, 10]
trials = 500
seed = 3
style = "interleaved"
"#,
            "test",
        )
        .unwrap();
        let spec = cfg.base_array().unwrap();
        assert_eq!(spec.element_count, 100);
        assert_eq!(spec.load_impedance, Complex64::new(73.0, -42.0));
        let sim = cfg.sim_config(spec, None).unwrap();
        assert_eq!(sim.n_trials, 500);
        assert_eq!(sim.master_seed, 3);
        assert_eq!(sim.style, SelectionStyle::Interleaved);
        assert!(sim.coupling_enabled);
    }

    #[test]
    fn unknown_keys_report_location() {
        let err = ExperimentConfig::parse("[array]\nelement_cnt = 4\n", "exp.toml").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("exp.toml") && msg.contains("element_cnt"),
            "{msg}"
        );
        assert!(msg.contains("line 2"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn odd_count_names_constraint() {
        let cfg =
            ExperimentConfig::parse("[array]\nelement_count = 7\nspacing = 0.5\n", "t").unwrap();
        let msg = cfg.base_array().unwrap_err().to_string();
        assert!(
            msg.contains("element_count") && msg.contains("even"),
            "{msg}"
        );
    }

    #[test]
    fn meters_convert_through_carrier() {
        let cfg = ExperimentConfig::parse(
            "[array]\nelement_count = 4\nspacing_m = 0.0749481145\n",
            "t",
        )
        .unwrap();
        // λ = c / 2 GHz ≈ 0.1499 m
        assert!((cfg.spacing().unwrap().unwrap() - 0.5).abs() < 1e-9);
        let both =
            ExperimentConfig::parse("[array]\nspacing = 0.5\nspacing_m = 0.1\n", "t").unwrap();
        assert!(both.spacing().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = ExperimentConfig::parse(
            "[simulation]\nseed = 1\ntrials = 10\ncoupling = true\n",
            "t",
        )
        .unwrap();
        cfg.apply(&Overrides {
            seed: Some(9),
            no_coupling: true,
            style: Some(SelectionStyle::Interleaved),
            ..Default::default()
        });
        assert_eq!(cfg.simulation.seed, Some(9));
        assert_eq!(cfg.simulation.trials, Some(10));
        assert_eq!(cfg.simulation.coupling, Some(false));
        assert_eq!(cfg.simulation.style.as_deref(), Some("interleaved"));
    }

    #[test]
    fn rejects_other_dipole_lengths() {
        let cfg = ExperimentConfig::parse(
            "[array]\nelement_count = 4\nspacing = 0.5\ndipole_length = 0.25\n",
            "t",
        )
        .unwrap();
        assert!(cfg.base_array().is_err());
    }
}
