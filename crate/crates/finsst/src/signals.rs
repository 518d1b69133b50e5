//! Test-signal generators, bounded noise, component ground truth, and the
//! ideal time-varying power spectrum.
//!
//! Phase functions are kept in bin units: a component oscillates as
//! `A(n) cos(2 pi phi(n) / N)` (or `e^{2 pi i phi(n) / N}` for complex
//! models), so `phi'(n)` is directly an instantaneous frequency in bins.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::TAU;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::spectral::{reduce, ComplexSignal};
use crate::squeeze::round_half_down;
use crate::stft::{TfKind, TfMatrix};

/// Closed-form phase family; carries exact first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "name", rename_all = "snake_case"))]
pub enum PhaseLaw {
    /// `phi(n) = a + b n + c n^2`
    Quadratic { a: f64, b: f64, c: f64 },
    /// `phi(n) = base n + amp cos(n / scale)`
    CosineFm { base: f64, amp: f64, scale: f64 },
}

impl PhaseLaw {
    pub fn phase(&self, n: f64) -> f64 {
        match *self {
            PhaseLaw::Quadratic { a, b, c } => a + b * n + c * n * n,
            PhaseLaw::CosineFm { base, amp, scale } => base * n + amp * (n / scale).cos(),
        }
    }

    /// Instantaneous frequency `phi'(n)` in bins.
    pub fn deriv(&self, n: f64) -> f64 {
        match *self {
            PhaseLaw::Quadratic { b, c, .. } => b + 2.0 * c * n,
            PhaseLaw::CosineFm { base, amp, scale } => base - amp / scale * (n / scale).sin(),
        }
    }

    /// Sup of `|phi''|` over all n (closed-form, conservative).
    pub fn second_deriv_sup(&self) -> f64 {
        match *self {
            PhaseLaw::Quadratic { c, .. } => 2.0 * c.abs(),
            PhaseLaw::CosineFm { amp, scale, .. } => (amp / (scale * scale)).abs(),
        }
    }
}

/// One oscillatory component: constant amplitude plus a phase law.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Component {
    pub amplitude: f64,
    pub phase: PhaseLaw,
}

impl Component {
    /// `A_k'(n)`; constant for all in-scope signals, so `A' = 0`.
    pub fn amplitude_at(&self, _n: f64) -> f64 {
        self.amplitude
    }
}

/// Ground-truth model for a multicomponent signal (class `A_d` / `B_d`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentModel {
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub k: usize,
    pub d: usize,
    pub real_valued: bool,
    pub components: Vec<Component>,
}

impl ComponentModel {
    pub fn new(components: Vec<Component>, d: usize, real_valued: bool) -> Self {
        assert!(!components.is_empty());
        for c in &components {
            assert!(c.amplitude >= 0.0, "amplitudes must be non-negative");
        }
        Self { k: components.len(), d, real_valued, components }
    }

    /// Evaluates the model as a length-N signal.
    pub fn eval(&self, n_len: usize) -> ComplexSignal {
        let big_n = n_len as f64;
        ComplexSignal::new(
            (0..n_len)
                .map(|n| {
                    let t = n as f64;
                    self.components
                        .iter()
                        .map(|c| {
                            let theta = TAU * c.phase.phase(t) / big_n;
                            if self.real_valued {
                                Complex64::new(c.amplitude_at(t) * theta.cos(), 0.0)
                            } else {
                                Complex64::from_polar(c.amplitude_at(t), theta)
                            }
                        })
                        .sum()
                })
                .collect(),
        )
    }

    /// Time indices where some consecutive pair of instantaneous
    /// frequencies is not separated by more than `d` (Definition 1 check;
    /// crossing signals report their violations here instead of failing).
    pub fn separation_violations(&self, n_len: usize) -> Vec<usize> {
        if self.k < 2 {
            return Vec::new();
        }
        (0..n_len)
            .filter(|&n| {
                let t = n as f64;
                self.components.windows(2).any(|pair| {
                    (pair[0].phase.deriv(t) - pair[1].phase.deriv(t)).abs() <= self.d as f64
                })
            })
            .collect()
    }

    /// Smallest epsilon satisfying the error bounds' smoothness hypotheses
    /// `||phi''|| <= eps ||phi'||` and `||A'|| <= eps ||phi'||` over `[0, N)`.
    /// Amplitudes are constant here, so only the phase term contributes.
    pub fn epsilon(&self, n_len: usize) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let sup1 = (0..n_len)
                    .map(|n| c.phase.deriv(n as f64).abs())
                    .fold(0.0, f64::max);
                if sup1 == 0.0 {
                    0.0
                } else {
                    c.phase.second_deriv_sup() / sup1
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Single-component chirp: `x(n) = cos(2 pi (n/20 + 0.05 (n/20)^2))`,
/// phase `phi(n) = 10 n + n^2/40`, frequency `phi'(n) = 10 + n/20`.
pub fn gen_chirp(n_len: usize) -> (ComplexSignal, ComponentModel) {
    let model = ComponentModel::new(
        vec![Component {
            amplitude: 1.0,
            phase: PhaseLaw::Quadratic { a: 0.0, b: 10.0, c: 1.0 / 40.0 },
        }],
        20,
        true,
    );
    (model.eval(n_len), model)
}

/// Two-component signal: `phi_1 = 40 n + 4 cos(n/10)`, `phi_2 = 60 n + 0.04 n^2`.
pub fn gen_two_component(n_len: usize) -> (ComplexSignal, ComponentModel) {
    let model = ComponentModel::new(
        vec![
            Component {
                amplitude: 1.0,
                phase: PhaseLaw::CosineFm { base: 40.0, amp: 4.0, scale: 10.0 },
            },
            Component {
                amplitude: 1.0,
                phase: PhaseLaw::Quadratic { a: 0.0, b: 60.0, c: 0.04 },
            },
        ],
        20,
        true,
    );
    (model.eval(n_len), model)
}

/// Interlacing signal: `phi_1 = 50 n` and `phi_2 = 20 n + n^2/10`; the
/// ridges cross at n = 150, so the model deliberately violates the
/// separation hypothesis (reported by `separation_violations`).
pub fn gen_interlacing(n_len: usize) -> (ComplexSignal, ComponentModel) {
    let model = ComponentModel::new(
        vec![
            Component {
                amplitude: 1.0,
                phase: PhaseLaw::Quadratic { a: 0.0, b: 50.0, c: 0.0 },
            },
            Component {
                amplitude: 1.0,
                phase: PhaseLaw::Quadratic { a: 0.0, b: 20.0, c: 0.1 },
            },
        ],
        20,
        true,
    );
    (model.eval(n_len), model)
}

/// Adds deterministic real-valued bounded noise: per-sample uniform on
/// `[-level, level]`, rescaled so that `||e||_inf = level` exactly.
pub fn add_noise(x: &ComplexSignal, level: f64, seed: u64) -> ComplexSignal {
    assert!(level >= 0.0);
    if level == 0.0 {
        return x.clone();
    }
    let n = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e: Vec<f64> = (0..n)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64; // [0,1)
            2.0 * u - 1.0
        })
        .collect();
    let max = e.iter().map(|v| v.abs()).fold(0.0, f64::max);
    // max > 0 almost surely for N >= 2; rescale so the sup norm is exact
    for v in e.iter_mut() {
        *v = (*v / max) * level;
    }
    ComplexSignal::new(
        x.samples()
            .iter()
            .zip(e.iter())
            .map(|(s, v)| s + Complex64::new(*v, 0.0))
            .collect(),
    )
}

/// Ideal time-varying power spectrum: `P[n][xi] = sum_k A_k(n)^2` at
/// `xi = round(phi'_k(n)) mod N`, zero elsewhere.
pub fn itvps(model: &ComponentModel, n_len: usize) -> TfMatrix {
    let mut out = TfMatrix::zeros(n_len, TfKind::Itvps);
    for n in 0..n_len {
        let t = n as f64;
        for c in &model.components {
            let xi = reduce(round_half_down(c.phase.deriv(t)), n_len);
            let a = c.amplitude_at(t);
            let prev = out.at(n, xi);
            out.set(n, xi, prev + Complex64::new(a * a, 0.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chirp_matches_printed_formula() {
        let (x, model) = gen_chirp(200);
        assert!((x.at(0).re - 1.0).abs() <= 1e-12);
        assert_eq!(x.at(0).im, 0.0);
        let c = &model.components[0];
        assert_eq!(c.phase.deriv(0.0), 10.0);
        assert_eq!(c.phase.deriv(100.0), 15.0);
        // x(10) = cos(2 pi (0.5 + 0.05 * 0.25)) = cos(1.025 pi)
        let expect = (1.025 * core::f64::consts::PI).cos();
        assert!((x.at(10).re - expect).abs() <= 1e-12);
        // agreement with the printed closed form at every n
        for n in 0..200 {
            let t = n as f64;
            let direct = (TAU * (t / 20.0 + 0.05 * (t / 20.0) * (t / 20.0))).cos();
            assert!((x.at(n as isize).re - direct).abs() <= 1e-9, "n={n}");
        }
    }

    #[test]
    fn two_component_frequencies_and_separation() {
        let (x, model) = gen_two_component(200);
        let f1 = &model.components[0].phase;
        let f2 = &model.components[1].phase;
        assert_eq!(f1.deriv(0.0), 40.0);
        assert_eq!(f2.deriv(0.0), 60.0);
        let min_sep = (0..200)
            .map(|n| f2.deriv(n as f64) - f1.deriv(n as f64))
            .fold(f64::INFINITY, f64::min);
        assert!(min_sep >= 19.6, "min separation {min_sep}");
        assert_eq!(model.d, 20);
        // signal agrees with direct evaluation of the phase functions
        for n in 0..200 {
            let t = n as f64;
            let direct = (TAU * (40.0 * t + 4.0 * (t / 10.0).cos()) / 200.0).cos()
                + (TAU * (60.0 * t + 0.04 * t * t) / 200.0).cos();
            assert!((x.at(n as isize).re - direct).abs() <= 1e-9, "n={n}");
        }
    }

    #[test]
    fn interlacing_crosses_at_150() {
        let (x, model) = gen_interlacing(200);
        let f1 = &model.components[0].phase;
        let f2 = &model.components[1].phase;
        for n in 0..200 {
            assert_eq!(f1.deriv(n as f64), 50.0);
        }
        assert_eq!(f2.deriv(150.0), 50.0);
        assert!((x.at(0).re - 2.0).abs() <= 1e-12);
        // deliberately violates Definition 1 near the crossing
        let violations = model.separation_violations(200);
        assert!(violations.contains(&150));
        // well-separated model reports no violations
        let (_, two) = gen_two_component(200);
        // separation is exactly 20 = d at n = 0, which the strict check flags
        assert!(two.separation_violations(200).contains(&0));
        assert!(!two.separation_violations(200).contains(&100));
    }

    #[test]
    fn noise_is_deterministic_and_exactly_bounded() {
        let (x, _) = gen_chirp(200);
        let y0 = add_noise(&x, 0.0, 7);
        assert_eq!(y0, x);
        let y = add_noise(&x, 0.4, 7);
        let max = (0..200)
            .map(|n| (y.at(n) - x.at(n)).norm())
            .fold(0.0, f64::max);
        assert_eq!(max, 0.4);
        // noise is real-valued
        for n in 0..200 {
            assert_eq!((y.at(n) - x.at(n)).im, 0.0);
        }
        assert_eq!(add_noise(&x, 0.4, 7), y);
        assert_ne!(add_noise(&x, 0.4, 8), y);
    }

    #[test]
    fn itvps_places_delta_masses() {
        let (_, chirp) = gen_chirp(200);
        let p = itvps(&chirp, 200);
        assert_eq!(p.at(0, 10), Complex64::new(1.0, 0.0));
        let nonzero = (0..200).filter(|&xi| p.at(0, xi).norm() > 0.0).count();
        assert_eq!(nonzero, 1);

        let (_, two) = gen_two_component(200);
        let p2 = itvps(&two, 200);
        assert_eq!(p2.at(0, 40), Complex64::new(1.0, 0.0));
        assert_eq!(p2.at(0, 60), Complex64::new(1.0, 0.0));
        for n in 0..200 {
            let k = (0..200).filter(|&xi| p2.at(n, xi).norm() > 0.0).count();
            assert!(k <= 2);
        }

        let zero_model = ComponentModel::new(
            vec![Component { amplitude: 0.0, phase: PhaseLaw::Quadratic { a: 0.0, b: 5.0, c: 0.0 } }],
            4,
            true,
        );
        assert_eq!(itvps(&zero_model, 32).energy(), 0.0);
    }
}
