//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GAMMA: f64 = 0.577_215_664_901_532_9;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature with bisection.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth + 1) + rec(f, m, b, tol / 2.0, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Integral split into unit-width panels so oscillations stay resolved.
fn panel_integrate(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let panels = x.ceil().max(1.0) as usize;
    let w = x / panels as f64;
    (0..panels)
        .map(|k| integrate(f, k as f64 * w, (k + 1) as f64 * w, 1e-15))
        .sum()
}

pub fn si_oracle(x: f64) -> f64 {
    panel_integrate(&|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }, x)
}

pub fn ci_oracle(x: f64) -> f64 {
    // (cos t − 1)/t = −2 sin²(t/2)/t avoids cancellation near 0.
    GAMMA
        + x.ln()
        + panel_integrate(
            &|t: f64| {
                if t == 0.0 {
                    0.0
                } else {
                    -2.0 * (t / 2.0).sin().powi(2) / t
                }
            },
            x,
        )
}

/// Q(√2), the QPSK bit error probability at an effective SNR of 2.
pub const Q_SQRT2: f64 = 0.078_649_603_525_142_58;

/// Straightforward coupling-free STCM-MIMO simulation written directly from
/// the signal model: contiguous halves, w = h/N, two-slot Alamouti,
/// energy-weighted combining and quadrant decisions. Returns the BER.
pub fn reference_uncoupled_ber(m: usize, snr_db: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = m / 2;
    let sigma2 = 10f64.powf(-snr_db / 10.0);
    let gauss = |rng: &mut StdRng, var: f64| {
        // Box–Muller, independent of the engine's sampler.
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = std::f64::consts::TAU * u2;
        Complex64::new(r * th.cos(), r * th.sin()) * (var / 2.0).sqrt()
    };
    let mut errors = 0usize;
    for _ in 0..trials {
        let h: Vec<Complex64> = (0..m).map(|_| gauss(&mut rng, 1.0)).collect();
        let (h0, h1) = h.split_at(n);
        let e0: f64 = h0.iter().map(|z| z.norm_sqr()).sum();
        let e1: f64 = h1.iter().map(|z| z.norm_sqr()).sum();
        // w_jᴴ h_j = ‖h_j‖² / N
        let a0 = e0 / n as f64;
        let a1 = e1 / n as f64;
        let bits: [bool; 4] = [rng.random(), rng.random(), rng.random(), rng.random()];
        let sym = |b0: bool, b1: bool| {
            Complex64::new(if b0 { -1.0 } else { 1.0 }, if b1 { -1.0 } else { 1.0 }) / 2f64.sqrt()
        };
        let s0 = sym(bits[0], bits[1]);
        let s1 = sym(bits[2], bits[3]);
        let r0 = a0 * s0 + a1 * s1 + gauss(&mut rng, sigma2);
        let r1 = -a0 * s1.conj() + a1 * s0.conj() + gauss(&mut rng, sigma2);
        let t0 = e0 * r0 + e1 * r1.conj();
        let t1 = e1 * r0 - e0 * r1.conj();
        let decided = [t0.re < 0.0, t0.im < 0.0, t1.re < 0.0, t1.im < 0.0];
        errors += decided.iter().zip(&bits).filter(|(a, b)| a != b).count();
    }
    errors as f64 / (4 * trials) as f64
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
