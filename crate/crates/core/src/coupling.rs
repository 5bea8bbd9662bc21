//! Dipole-array impedance matrix and the transmit mutual coupling matrix.
//!
//! All lengths are in wavelengths, so the wave number is `β = 2π`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::specfun::{sici, EULER_GAMMA};

/// Intrinsic impedance of free space, η₀ ≈ 120π Ω.
pub const FREE_SPACE_IMPEDANCE: f64 = 120.0 * PI;

/// Half-wave dipole length in wavelengths. The only geometry modeled.
pub const HALF_WAVE: f64 = 0.5;

/// Nominal half-wave dipole impedance used by the reference experiments.
pub const NOMINAL_ANTENNA_IMPEDANCE: Complex64 = Complex64::new(73.0, 42.0);

const WAVE_NUMBER: f64 = TAU;
const CONDITION_LIMIT: f64 = 1e12;

/// Physical description of the transmit uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleArraySpec {
    pub element_count: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    /// Dipole length in wavelengths.
    pub dipole_length: f64,
    pub antenna_impedance: Complex64,
    pub load_impedance: Complex64,
}

impl DipoleArraySpec {
    pub fn new(
        element_count: usize,
        spacing: f64,
        dipole_length: f64,
        antenna_impedance: Complex64,
        load_impedance: Complex64,
    ) -> Result<Self> {
        let spec = Self {
            element_count,
            spacing,
            dipole_length,
            antenna_impedance,
            load_impedance,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Half-wave dipoles with `Z_A = 73 + j42` and a conjugate-matched load.
    pub fn matched(element_count: usize, spacing: f64) -> Result<Self> {
        Self::new(
            element_count,
            spacing,
            HALF_WAVE,
            NOMINAL_ANTENNA_IMPEDANCE,
            NOMINAL_ANTENNA_IMPEDANCE.conj(),
        )
    }

    /// Array of `element_count` elements spread over a fixed aperture.
    pub fn from_aperture(element_count: usize, total_length: f64) -> Result<Self> {
        if !(total_length.is_finite() && total_length > 0.0) {
            return Err(Error::config(
                "total_length",
                format!("{total_length} must be finite and > 0"),
            ));
        }
        if element_count == 0 {
            return Err(Error::config("element_count", "must be positive"));
        }
        Self::matched(element_count, total_length / element_count as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.element_count < 2 || !self.element_count.is_multiple_of(2) {
            return Err(Error::config(
                "element_count",
                format!(
                    "{} must be an even number >= 2 (two equal sub-arrays)",
                    self.element_count
                ),
            ));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::config(
                "spacing",
                format!("{} must be finite and > 0", self.spacing),
            ));
        }
        if !(self.dipole_length.is_finite() && self.dipole_length > 0.0) {
            return Err(Error::config(
                "dipole_length",
                format!("{} must be finite and > 0", self.dipole_length),
            ));
        }
        for (field, z) in [
            ("antenna_impedance", self.antenna_impedance),
            ("load_impedance", self.load_impedance),
        ] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::config(field, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn sub_array_size(&self) -> usize {
        self.element_count / 2
    }

    /// The scalar `Z_A + Z_L` in front of the inverse.
    pub fn termination_sum(&self) -> Complex64 {
        self.antenna_impedance + self.load_impedance
    }
}

fn check_half_wave(length: f64) -> Result<()> {
    if (length - HALF_WAVE).abs() > 1e-12 {
        return Err(Error::UnsupportedGeometry(length));
    }
    Ok(())
}

/// Self impedance of a half-wave dipole.
pub fn self_impedance(dipole_length: f64) -> Result<Complex64> {
    check_half_wave(dipole_length)?;
    let (si, ci) = sici(TAU)?;
    let scale = FREE_SPACE_IMPEDANCE / (4.0 * PI);
    Ok(scale * Complex64::new(EULER_GAMMA + TAU.ln() - ci, si))
}

/// Mutual impedance between two parallel side-by-side half-wave dipoles.
pub fn mutual_impedance(separation: f64, dipole_length: f64) -> Result<Complex64> {
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::Domain {
            function: "mutual_impedance",
            value: separation,
            constraint: "finite, separation > 0",
        });
    }
    check_half_wave(dipole_length)?;
    let l = dipole_length;
    let hyp = separation.hypot(l);
    let u1 = hyp + l;
    // hyp - l loses digits when separation << l; use d²/(hyp + l) instead.
    let u2 = separation * separation / (hyp + l);

    let (si_d, ci_d) = sici(WAVE_NUMBER * separation)?;
    let (si_1, ci_1) = sici(WAVE_NUMBER * u1)?;
    let (si_2, ci_2) = sici(WAVE_NUMBER * u2)?;
    let re = 2.0 * ci_d - ci_1 - ci_2;
    let im = -(2.0 * si_d - si_1 - si_2);
    Ok(FREE_SPACE_IMPEDANCE / (4.0 * PI) * Complex64::new(re, im))
}

/// Impedance matrix of a ULA with any element count (including 1).
///
/// Entry `(m, n)` is the self impedance on the diagonal and the mutual
/// impedance at separation `|m − n|·spacing` elsewhere, so the result is
/// symmetric Toeplitz.
pub fn ula_impedance_matrix(
    element_count: usize,
    spacing: f64,
    dipole_length: f64,
) -> Result<ComplexMatrix> {
    let mut lags = Vec::with_capacity(element_count);
    if element_count > 0 {
        lags.push(self_impedance(dipole_length)?);
    }
    for k in 1..element_count {
        lags.push(mutual_impedance(k as f64 * spacing, dipole_length)?);
    }
    Ok(ComplexMatrix::from_fn(element_count, |m, n| {
        lags[m.abs_diff(n)]
    }))
}

pub fn impedance_matrix(spec: &DipoleArraySpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    ula_impedance_matrix(spec.element_count, spec.spacing, spec.dipole_length)
}

/// Transmit mutual coupling matrix `C = (Z_A + Z_L)(Z + Z_L I)⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    entries: ComplexMatrix,
    source_spec: DipoleArraySpec,
    condition: f64,
}

impl CouplingMatrix {
    /// Builds `C` from the array description.
    pub fn new(spec: &DipoleArraySpec) -> Result<Self> {
        let z = impedance_matrix(spec)?;
        Self::from_impedance(spec, &z)
    }

    /// Builds `C` from an explicitly supplied impedance matrix.
    pub fn from_impedance(spec: &DipoleArraySpec, impedance: &ComplexMatrix) -> Result<Self> {
        spec.validate()?;
        if impedance.dim() != spec.element_count {
            return Err(Error::DimensionMismatch {
                expected: spec.element_count,
                found: impedance.dim(),
            });
        }
        let scale = spec.termination_sum();
        if scale.norm() == 0.0 {
            return Err(Error::config("load_impedance", "Z_A + Z_L must be nonzero"));
        }

        let mut system = impedance.clone();
        system.add_diagonal(spec.load_impedance);
        let inverse = system.solve(&ComplexMatrix::identity(spec.element_count))?;
        let condition = system.norm_one() * inverse.norm_one();
        if !condition.is_finite() || condition > CONDITION_LIMIT {
            return Err(Error::Singular { condition });
        }
        let mut entries = inverse;
        entries.scale(scale);
        if !entries.is_finite() {
            return Err(Error::Singular { condition });
        }
        Ok(Self {
            entries,
            source_spec: *spec,
            condition,
        })
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn source_spec(&self) -> &DipoleArraySpec {
        &self.source_spec
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// 1-norm condition number of `Z + Z_L I`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    /// `‖C − I‖∞`, a scalar summary of coupling strength.
    pub fn distance_from_identity(&self) -> f64 {
        let mut diff = self.entries.clone();
        diff.add_diagonal(Complex64::new(-1.0, 0.0));
        diff.norm_inf()
    }
}

/// Builds the coupling matrix for `spec`.
pub fn coupling_matrix(spec: &DipoleArraySpec) -> Result<CouplingMatrix> {
    CouplingMatrix::new(spec)
}
