//! The four experiment commands. Each reads a resolved [`ExperimentConfig`],
//! writes its CSVs into the output directory and returns what it wrote.

use std::path::{Path, PathBuf};

use stcm_core::{
    coupling::coupling_matrix, search, simulate_ber, BerResult, CouplingMatrix, DipoleArraySpec,
    SearchSpec, SearchTrace, SelectionStyle,
};

use crate::config::{check_snr, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::report::{self, BerRow, CompareRow, Curve, SweepRow, TraceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Spacing,
    Elements,
    Snr,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "spacing" => Ok(Self::Spacing),
            "elements" | "element_count" => Ok(Self::Elements),
            "snr" => Ok(Self::Snr),
            other => Err(format!(
                "unknown sweep axis '{other}' (expected spacing|elements|snr)"
            )),
        }
    }
}

impl SweepAxis {
    fn name(self) -> &'static str {
        match self {
            Self::Spacing => "spacing",
            Self::Elements => "elements",
            Self::Snr => "snr",
        }
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

#[derive(Debug, Clone)]
pub struct MatrixOutcome {
    pub path: PathBuf,
    pub coupling: CouplingMatrix,
}

pub fn cmd_coupling_matrix(cfg: &ExperimentConfig) -> Result<MatrixOutcome> {
    let spec = cfg.base_array()?;
    let coupling = coupling_matrix(&spec)?;
    let dir = cfg.out_dir();
    prepare_dir(&dir)?;
    let path = dir.join("coupling_matrix.csv");
    report::write_csv(&path, &report::matrix_rows(&coupling))?;
    Ok(MatrixOutcome { path, coupling })
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub path: PathBuf,
    pub result: BerResult,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub combined: PathBuf,
    pub points: Vec<SweepPoint>,
}

fn label(v: f64) -> String {
    format!("{v}")
}

/// Runs one simulation per sweep value.
///
/// `elements` keeps the configured spacing, or spreads the elements over
/// `total_length` when no spacing is given. `snr` runs the configured array
/// once per listed SNR.
pub fn cmd_ber_sweep(
    cfg: &ExperimentConfig,
    axis: SweepAxis,
    workers: Option<usize>,
) -> Result<SweepOutcome> {
    let values = cfg
        .sweep
        .values
        .clone()
        .ok_or_else(|| CliError::config("[sweep] values: required"))?;
    check_snr("[sweep] values", &values)?;

    let mut runs = Vec::with_capacity(values.len());
    for &v in &values {
        let (array, snr) = match axis {
            SweepAxis::Spacing => (cfg.array_spec(cfg.element_count()?, v)?, None),
            SweepAxis::Elements => {
                if v.fract() != 0.0 || v < 0.0 {
                    return Err(CliError::config(format!(
                        "[sweep] values: {v} is not an element count"
                    )));
                }
                let m = v as usize;
                let d = match (cfg.spacing()?, cfg.total_length()?) {
                    (Some(d), _) => d,
                    (None, Some(total)) => total / m as f64,
                    (None, None) => {
                        return Err(CliError::config(
                            "[array] spacing or total_length: required for an element sweep",
                        ))
                    }
                };
                (cfg.array_spec(m, d)?, None)
            }
            SweepAxis::Snr => (cfg.base_array()?, Some(vec![v])),
        };
        let mut sim = cfg.sim_config(array, workers)?;
        if let Some(list) = snr {
            sim.snr_db_list = list;
        }
        runs.push((v, sim));
    }

    let dir = cfg.out_dir();
    prepare_dir(&dir)?;
    let mut points = Vec::with_capacity(runs.len());
    let mut combined_rows = Vec::new();
    for (v, sim) in runs {
        let result = simulate_ber(&sim)?;
        let path = dir.join(format!("ber_{}_{}.csv", axis.name(), label(v)));
        let rows: Vec<BerRow> = result.points.iter().map(BerRow::from).collect();
        report::write_csv(&path, &rows)?;
        combined_rows.extend(result.points.iter().map(|p| SweepRow::new(v, p)));
        points.push(SweepPoint {
            value: v,
            path,
            result,
        });
    }
    let combined = dir.join(format!("ber_sweep_{}.csv", axis.name()));
    report::write_csv(&combined, &combined_rows)?;

    if cfg.gnuplot() {
        let curves: Vec<Curve> = if axis == SweepAxis::Snr {
            vec![Curve {
                file: file_name(&combined),
                x: "sweep_value",
                y: "ber",
                title: "BER".into(),
            }]
        } else {
            points
                .iter()
                .map(|p| Curve {
                    file: file_name(&p.path),
                    x: "snr_db",
                    y: "ber",
                    title: format!("{} = {}", axis.name(), label(p.value)),
                })
                .collect()
        };
        report::write_gnuplot(
            &dir,
            &format!("ber_sweep_{}", axis.name()),
            "SNR (dB)",
            &curves,
        )?;
    }
    Ok(SweepOutcome { combined, points })
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn search_spec(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<SearchSpec> {
    let s = &cfg.search;
    let [lower, upper] = s.interval.unwrap_or([50, 250]);
    let step = s.step.unwrap_or(50);
    let total_length = match (s.total_length, s.total_length_m, cfg.total_length()?) {
        (Some(_), Some(_), _) => {
            return Err(CliError::config(
                "[search] total_length and total_length_m are mutually exclusive",
            ))
        }
        (Some(t), None, _) => t,
        (None, Some(m), _) => m / cfg.wavelength_m()?,
        (None, None, Some(t)) => t,
        (None, None, None) => return Err(CliError::config("[search] total_length: required")),
    };
    let snr_db_list = match (&s.snr_db, &cfg.simulation.snr_db) {
        (Some(l), _) | (None, Some(l)) => l.clone(),
        (None, None) => vec![10.0],
    };
    check_snr("[search] snr_db", &snr_db_list)?;
    if !(total_length.is_finite() && total_length > 0.0) {
        return Err(CliError::config(format!(
            "[search] total_length = {total_length}: must be finite and > 0"
        )));
    }
    // The template array is replaced per candidate; it only has to be valid.
    let placeholder = DipoleArraySpec::from_aperture(2, total_length)?;
    let mut template = cfg.sim_config(placeholder, workers)?;
    template.snr_db_list = snr_db_list.clone();
    let spec = SearchSpec {
        lower,
        upper,
        step,
        total_length,
        snr_db_list,
        template,
    };
    spec.validate()
        .map_err(|e| CliError::config(format!("[search] {e}")))?;
    Ok(spec)
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub path: PathBuf,
    pub trace: SearchTrace,
}

pub fn cmd_optimize(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<OptimizeOutcome> {
    let spec = search_spec(cfg, workers)?;
    let dir = cfg.out_dir();
    prepare_dir(&dir)?;
    let trace = search(&spec)?;
    let path = dir.join("optimize_trace.csv");
    let rows: Vec<TraceRow> = trace.entries.iter().map(TraceRow::from).collect();
    report::write_csv(&path, &rows)?;
    Ok(OptimizeOutcome { path, trace })
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub path: PathBuf,
    pub contiguous: BerResult,
    pub interleaved: BerResult,
}

pub fn cmd_selection_compare(
    cfg: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<CompareOutcome> {
    let base = cfg.sim_config(cfg.base_array()?, workers)?;
    let run = |style: SelectionStyle| {
        let mut sim = base.clone();
        sim.style = style;
        simulate_ber(&sim)
    };
    let contiguous = run(SelectionStyle::Contiguous)?;
    let interleaved = run(SelectionStyle::Interleaved)?;
    let rows: Vec<CompareRow> = contiguous
        .points
        .iter()
        .zip(&interleaved.points)
        .map(|(a, b)| CompareRow::new(a, b))
        .collect();

    let dir = cfg.out_dir();
    prepare_dir(&dir)?;
    let path = dir.join("selection_compare.csv");
    report::write_csv(&path, &rows)?;
    if cfg.gnuplot() {
        let curve = |y: &'static str, title: &str| Curve {
            file: file_name(&path),
            x: "snr_db",
            y,
            title: title.into(),
        };
        report::write_gnuplot(
            &dir,
            "selection_compare",
            "SNR (dB)",
            &[
                curve("ber_style1", "contiguous"),
                curve("ber_style2", "interleaved"),
            ],
        )?;
    }
    Ok(CompareOutcome {
        path,
        contiguous,
        interleaved,
    })
}
