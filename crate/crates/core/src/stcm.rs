//! STCM-MIMO transceiver: modulation, Hermitian precoding, two-slot Alamouti
//! transmission, branch combining and hard detection.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulationKind {
    Qpsk,
    Psk,
    Qam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct SchemeDesc {
    kind: ModulationKind,
    order: usize,
}

/// Gray-mapped constellation with unit average symbol energy.
///
/// Symbol index `v` carries the bits of `v` written MSB first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeDesc", into = "SchemeDesc")]
pub struct ModulationScheme {
    kind: ModulationKind,
    order: usize,
    bits_per_symbol: usize,
    points: Vec<Complex64>,
}

impl From<ModulationScheme> for SchemeDesc {
    fn from(s: ModulationScheme) -> Self {
        SchemeDesc {
            kind: s.kind,
            order: s.order,
        }
    }
}

impl TryFrom<SchemeDesc> for ModulationScheme {
    type Error = Error;

    fn try_from(d: SchemeDesc) -> Result<Self> {
        ModulationScheme::new(d.kind, d.order)
    }
}

impl Default for ModulationScheme {
    fn default() -> Self {
        Self::qpsk()
    }
}

fn gray(p: usize) -> usize {
    p ^ (p >> 1)
}

impl ModulationScheme {
    pub fn new(kind: ModulationKind, order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::config(
                "modulation.order",
                format!("{order} must be a power of two >= 2"),
            ));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let mut points = vec![Complex64::new(0.0, 0.0); order];
        match kind {
            ModulationKind::Qpsk => {
                if order != 4 {
                    return Err(Error::config("modulation.order", "QPSK has order 4"));
                }
                for (v, pt) in points.iter_mut().enumerate() {
                    let re = if v & 0b10 == 0 { 1.0 } else { -1.0 };
                    let im = if v & 0b01 == 0 { 1.0 } else { -1.0 };
                    *pt = Complex64::new(re, im) * FRAC_1_SQRT_2;
                }
            }
            ModulationKind::Psk => {
                for p in 0..order {
                    points[gray(p)] = Complex64::from_polar(1.0, TAU * p as f64 / order as f64);
                }
            }
            ModulationKind::Qam => {
                if !bits_per_symbol.is_multiple_of(2) {
                    return Err(Error::config(
                        "modulation.order",
                        format!("{order} is not a square QAM order"),
                    ));
                }
                let half = bits_per_symbol / 2;
                let side = 1usize << half;
                let norm = (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
                let level = |p: usize| (2 * p) as f64 - (side as f64 - 1.0);
                for pi in 0..side {
                    for pq in 0..side {
                        let v = (gray(pi) << half) | gray(pq);
                        points[v] = Complex64::new(level(pi), level(pq)) / norm;
                    }
                }
            }
        }
        Ok(Self {
            kind,
            order,
            bits_per_symbol,
            points,
        })
    }

    pub fn qpsk() -> Self {
        Self::new(ModulationKind::Qpsk, 4).expect("valid QPSK")
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// Index of the nearest constellation point; ties go to the lower index.
    pub fn nearest(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_dist {
                best = i;
                best_dist = d;
            }
        }
        best
    }

    pub fn index_from_bits(&self, bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn bits_of(&self, index: usize) -> impl Iterator<Item = bool> + '_ {
        (0..self.bits_per_symbol)
            .rev()
            .map(move |k| (index >> k) & 1 == 1)
    }
}

/// Maps a bit sequence onto symbols, `bits_per_symbol` bits at a time.
pub fn modulate(bits: &[bool], scheme: &ModulationScheme) -> Result<Vec<Complex64>> {
    let k = scheme.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::config(
            "bits",
            format!("length {} is not a multiple of {k}", bits.len()),
        ));
    }
    Ok(bits
        .chunks(k)
        .map(|c| scheme.point(scheme.index_from_bits(c)))
        .collect())
}

/// Hard nearest-point demapping back to bits.
pub fn demodulate(symbols: &[Complex64], scheme: &ModulationScheme) -> Vec<bool> {
    symbols
        .iter()
        .flat_map(|&z| scheme.bits_of(scheme.nearest(z)))
        .collect()
}

/// Hermitian (matched-filter) precoder `w = h / N`.
pub fn precoding_weights(h: &[Complex64]) -> Vec<Complex64> {
    let n = h.len().max(1) as f64;
    h.iter().map(|z| z / n).collect()
}

/// `wᴴ h`.
pub fn inner(w: &[Complex64], h: &[Complex64]) -> Complex64 {
    w.iter().zip(h).map(|(a, b)| a.conj() * b).sum()
}

/// Squared Euclidean norm.
pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceivedPair {
    /// Slot `t`.
    pub r0: Complex64,
    /// Slot `t + T`.
    pub r1: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedPair {
    pub s0_stat: Complex64,
    pub s1_stat: Complex64,
}

/// Another user's Alamouti pair sharing the array.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererSignal {
    /// Precoders `(w₂ⱼ, w₂ⱼ₊₁)` built from that user's own branch channels.
    pub weights: [Vec<Complex64>; 2],
    /// Symbols `(s₂ⱼ, s₂ⱼ₊₁)`.
    pub symbols: [Complex64; 2],
}

impl InterfererSignal {
    pub fn from_channel(h0: &[Complex64], h1: &[Complex64], symbols: [Complex64; 2]) -> Self {
        Self {
            weights: [precoding_weights(h0), precoding_weights(h1)],
            symbols,
        }
    }
}

/// Effective scalar gains seen by the desired receiver in one slot pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotGains {
    /// `w₀ᴴ ĥ₀`
    pub branch0: Complex64,
    /// `w₁ᴴ ĥ₁`
    pub branch1: Complex64,
}

/// Received samples from precomputed gains. `interference` holds
/// `(w₂ⱼᴴĥ₀, w₂ⱼ₊₁ᴴĥ₁, s₂ⱼ, s₂ⱼ₊₁)` per interfering user.
pub fn receive_with_gains(
    symbols: [Complex64; 2],
    gains: SlotGains,
    interference: &[(Complex64, Complex64, Complex64, Complex64)],
    noise: [Complex64; 2],
) -> ReceivedPair {
    let [s0, s1] = symbols;
    let mut r0 = gains.branch0 * s0 + gains.branch1 * s1 + noise[0];
    let mut r1 = -gains.branch0 * s1.conj() + gains.branch1 * s0.conj() + noise[1];
    for &(g_even, g_odd, s_even, s_odd) in interference {
        r0 += g_even * s_even + g_odd * s_odd;
        r1 += -g_even * s_odd.conj() + g_odd * s_even.conj();
    }
    ReceivedPair { r0, r1 }
}

/// Two-slot Alamouti transmission over the (possibly coupled) channel.
///
/// `nominal` holds `(h₀, h₁)`, from which the desired precoders are built;
/// `effective` holds `(ĥ₀, ĥ₁)`, the channel the signal actually traverses.
pub fn transmit_pair(
    symbols: [Complex64; 2],
    nominal: [&[Complex64]; 2],
    effective: [&[Complex64]; 2],
    interferers: &[InterfererSignal],
    noise: [Complex64; 2],
) -> Result<ReceivedPair> {
    let n = nominal[0].len();
    for v in nominal.iter().chain(effective.iter()) {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    for i in interferers {
        for w in &i.weights {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
    }
    let w0 = precoding_weights(nominal[0]);
    let w1 = precoding_weights(nominal[1]);
    let gains = SlotGains {
        branch0: inner(&w0, effective[0]),
        branch1: inner(&w1, effective[1]),
    };
    let interference: Vec<_> = interferers
        .iter()
        .map(|i| {
            (
                inner(&i.weights[0], effective[0]),
                inner(&i.weights[1], effective[1]),
                i.symbols[0],
                i.symbols[1],
            )
        })
        .collect();
    Ok(receive_with_gains(symbols, gains, &interference, noise))
}

/// Two-branch Alamouti combiner weighted by the branch energies `g0`, `g1`.
pub fn combine(r: ReceivedPair, g0: f64, g1: f64) -> CombinedPair {
    CombinedPair {
        s0_stat: g0 * r.r0 + g1 * r.r1.conj(),
        s1_stat: g1 * r.r0 - g0 * r.r1.conj(),
    }
}

/// Nominal combined gain `(g0² + g1²) / N`.
pub fn combined_gain(g0: f64, g1: f64, n: usize) -> f64 {
    (g0 * g0 + g1 * g1) / n as f64
}

/// Normalizes both statistics by the combined gain and picks the nearest
/// constellation points.
pub fn detect(
    c: CombinedPair,
    g0: f64,
    g1: f64,
    n: usize,
    scheme: &ModulationScheme,
) -> (usize, usize) {
    let gain = combined_gain(g0, g1, n);
    (
        scheme.nearest(c.s0_stat / gain),
        scheme.nearest(c.s1_stat / gain),
    )
}
