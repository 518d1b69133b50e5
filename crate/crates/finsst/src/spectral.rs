//! Fourier analysis primitives on `C^N`: DFT pair, cyclic translation,
//! modulation, and time-frequency shifts.
//!
//! The DFT is a direct `O(N^2)` kernel over a precomputed twiddle table;
//! desk-scale N keeps this fast and exactly comparable with naive oracles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Length-N sequence of complex samples indexed by `Z_N`.
///
/// Index access is cyclic: `at(k)` resolves `k mod N` for any integer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
}

impl ComplexSignal {
    /// Wraps samples; requires `N >= 2`.
    pub fn new(samples: Vec<Complex64>) -> Self {
        assert!(samples.len() >= 2, "signal length must be >= 2");
        Self { samples }
    }

    /// Real-valued signal (imaginary parts zero).
    pub fn from_real(samples: &[f64]) -> Self {
        Self::new(samples.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 2 by construction
    }

    /// Cyclic sample access: index is reduced mod N.
    pub fn at(&self, k: isize) -> Complex64 {
        self.samples[reduce(k, self.samples.len())]
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// `sum_n |x(n)|^2`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `sum_n |x(n)|` (the l1 norm used by the noise bound).
    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).sum()
    }

    /// `max_n |x(n)|`.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Inner product `<x, y> = sum_n x(n) conj(y(n))`.
    pub fn inner(&self, other: &ComplexSignal) -> Complex64 {
        self.samples
            .iter()
            .zip(other.samples.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

/// Length-N DFT bins of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(bins: Vec<Complex64>) -> Self {
        assert!(bins.len() >= 2, "spectrum length must be >= 2");
        Self { bins }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cyclic bin access.
    pub fn at(&self, m: isize) -> Complex64 {
        self.bins[reduce(m, self.bins.len())]
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn bins_mut(&mut self) -> &mut [Complex64] {
        &mut self.bins
    }

    pub fn inner(&self, other: &Spectrum) -> Complex64 {
        self.bins
            .iter()
            .zip(other.bins.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

/// Reduces any integer index into `[0, n)`.
pub fn reduce(k: isize, n: usize) -> usize {
    let n = n as isize;
    (((k % n) + n) % n) as usize
}

/// Cyclic distance `min(|a-b|, N-|a-b|)` between bins of `Z_N`.
pub fn cyclic_distance(a: isize, b: isize, n: usize) -> usize {
    let d = reduce(a - b, n);
    d.min(n - d)
}

/// Cyclic distance on the frequency circle for real-valued positions
/// (e.g. an integer bin vs. an analytic `phi'(n)`).
pub fn cyclic_distance_f(a: f64, b: f64, n: usize) -> f64 {
    let n = n as f64;
    let mut d = (a - b) % n;
    if d < 0.0 {
        d += n;
    }
    d.min(n - d)
}

/// Roots of unity `e^{-2 pi i k / N}` for `k = 0..N`.
fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / n as f64))
        .collect()
}

/// `x_hat(m) = sum_n x(n) e^{-2 pi i m n / N}`.
pub fn dft(x: &ComplexSignal) -> Spectrum {
    let n = x.len();
    let tw = twiddles(n);
    let bins = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| x.samples[k] * tw[(m * k) % n])
                .sum::<Complex64>()
        })
        .collect();
    Spectrum::new(bins)
}

/// `x(n) = (1/N) sum_m X(m) e^{2 pi i m n / N}`.
pub fn idft(spec: &Spectrum) -> ComplexSignal {
    let n = spec.len();
    let tw = twiddles(n);
    let scale = 1.0 / n as f64;
    let samples = (0..n)
        .map(|k| {
            (0..n)
                .map(|m| spec.bins[m] * tw[(m * k) % n].conj())
                .sum::<Complex64>()
                * scale
        })
        .collect();
    ComplexSignal::new(samples)
}

/// Cyclic translation `(T_k x)(n) = x(n - k mod N)`.
pub fn translate(x: &ComplexSignal, k: isize) -> ComplexSignal {
    let n = x.len();
    ComplexSignal::new((0..n).map(|i| x.at(i as isize - k)).collect())
}

/// Modulation `(M_l x)(n) = e^{-2 pi i l n / N} x(n)`.
pub fn modulate(x: &ComplexSignal, l: isize) -> ComplexSignal {
    let n = x.len();
    let tw = twiddles(n);
    let l = reduce(l, n);
    ComplexSignal::new(
        (0..n)
            .map(|i| x.samples[i] * tw[(l * i) % n])
            .collect(),
    )
}

/// Time-frequency shift `pi(k, l) x = M_l T_k x`.
pub fn tf_shift(x: &ComplexSignal, k: isize, l: isize) -> ComplexSignal {
    modulate(&translate(x, k), l)
}
