//! Rayleigh channel draws, coupling, and sub-array partitioning.
//!
//! Channel vectors are always kept in physical element order. Coupling is
//! applied in that order and branch extraction happens afterwards, so the two
//! selection styles differ only in the gather pattern.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingMatrix;
use crate::error::{Error, Result};

/// How physical elements are assigned to the two Alamouti branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionStyle {
    /// Branch 0 takes the first half of the array, branch 1 the second.
    #[default]
    Contiguous,
    /// Branch 0 takes even positions, branch 1 odd positions.
    Interleaved,
}

impl std::str::FromStr for SelectionStyle {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "contiguous" | "style1" => Ok(SelectionStyle::Contiguous),
            "interleaved" | "style2" => Ok(SelectionStyle::Interleaved),
            other => Err(format!(
                "unknown selection style '{other}' (expected contiguous|interleaved)"
            )),
        }
    }
}

impl std::fmt::Display for SelectionStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectionStyle::Contiguous => "contiguous",
            SelectionStyle::Interleaved => "interleaved",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubArrayAssignment {
    style: SelectionStyle,
    element_count: usize,
}

impl SubArrayAssignment {
    pub fn new(style: SelectionStyle, element_count: usize) -> Result<Self> {
        if element_count < 2 || !element_count.is_multiple_of(2) {
            return Err(Error::config(
                "element_count",
                format!("{element_count} must be an even number >= 2"),
            ));
        }
        Ok(Self {
            style,
            element_count,
        })
    }

    pub fn style(&self) -> SelectionStyle {
        self.style
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn branch_size(&self) -> usize {
        self.element_count / 2
    }

    /// Physical index of the `k`-th element of `branch` (0 or 1).
    pub fn physical_index(&self, branch: usize, k: usize) -> usize {
        debug_assert!(branch < 2 && k < self.branch_size());
        match self.style {
            SelectionStyle::Contiguous => branch * self.branch_size() + k,
            SelectionStyle::Interleaved => 2 * k + branch,
        }
    }

    pub fn branch_indices(&self, branch: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.branch_size()).map(move |k| self.physical_index(branch, k))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.element_count {
            return Err(Error::DimensionMismatch {
                expected: self.element_count,
                found: len,
            });
        }
        Ok(())
    }
}

/// Draws `count` i.i.d. CN(0, 1) coefficients.
pub fn draw_channel<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Complex64> {
    (0..count).map(|_| complex_gaussian(rng)).collect()
}

/// One circularly-symmetric unit-variance complex Gaussian sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Coupled channel `C·h`.
pub fn apply_coupling(coupling: &CouplingMatrix, h: &[Complex64]) -> Result<Vec<Complex64>> {
    coupling.entries().mul_vec(h)
}

/// Gathers the two branch vectors from a physical-order channel vector.
pub fn partition(
    h: &[Complex64],
    assignment: &SubArrayAssignment,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    assignment.check_len(h.len())?;
    let gather = |b| assignment.branch_indices(b).map(|i| h[i]).collect();
    Ok((gather(0), gather(1)))
}

/// Inverse of [`partition`].
pub fn scatter(
    h0: &[Complex64],
    h1: &[Complex64],
    assignment: &SubArrayAssignment,
) -> Result<Vec<Complex64>> {
    let n = assignment.branch_size();
    for len in [h0.len(), h1.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); assignment.element_count()];
    for (branch, src) in [h0, h1].into_iter().enumerate() {
        for (k, &v) in src.iter().enumerate() {
            out[assignment.physical_index(branch, k)] = v;
        }
    }
    Ok(out)
}

/// One block-fading draw of the desired user's channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_physical: Vec<Complex64>,
    pub h_coupled: Vec<Complex64>,
    pub assignment: SubArrayAssignment,
}

impl ChannelRealization {
    /// Draws a fresh channel and its coupled image. `coupling = None` means
    /// the coupled image equals the physical channel.
    pub fn draw<R: Rng + ?Sized>(
        rng: &mut R,
        assignment: SubArrayAssignment,
        coupling: Option<&CouplingMatrix>,
    ) -> Result<Self> {
        let h_physical = draw_channel(rng, assignment.element_count());
        Self::from_physical(h_physical, assignment, coupling)
    }

    pub fn from_physical(
        h_physical: Vec<Complex64>,
        assignment: SubArrayAssignment,
        coupling: Option<&CouplingMatrix>,
    ) -> Result<Self> {
        assignment.check_len(h_physical.len())?;
        let h_coupled = match coupling {
            Some(c) => apply_coupling(c, &h_physical)?,
            None => h_physical.clone(),
        };
        Ok(Self {
            h_physical,
            h_coupled,
            assignment,
        })
    }

    /// Nominal branch vectors `(h₀, h₁)`.
    pub fn nominal_branches(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        partition(&self.h_physical, &self.assignment).expect("length checked at construction")
    }

    /// Effective branch vectors `(ĥ₀, ĥ₁)`.
    pub fn coupled_branches(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        partition(&self.h_coupled, &self.assignment).expect("length checked at construction")
    }
}
