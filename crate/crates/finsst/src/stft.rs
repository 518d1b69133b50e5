//! Standard and modified finite STFT as dense N x N time-frequency matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::spectral::{dft, ComplexSignal};
use crate::window::WindowSpec;
use crate::{Error, Result};

/// Which transform a time-frequency matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfKind {
    Stft,
    ModifiedStft,
    Sst,
    Itvps,
}

/// Dense N x N complex matrix over (time n, frequency l).
#[derive(Debug, Clone, PartialEq)]
pub struct TfMatrix {
    entries: Vec<Complex64>, // row-major in n
    n: usize,
    kind: TfKind,
}

impl TfMatrix {
    pub fn zeros(n: usize, kind: TfKind) -> Self {
        Self { entries: vec![Complex64::new(0.0, 0.0); n * n], n, kind }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> TfKind {
        self.kind
    }

    pub fn at(&self, n: usize, l: usize) -> Complex64 {
        self.entries[n * self.n + l]
    }

    pub fn set(&mut self, n: usize, l: usize, v: Complex64) {
        let w = self.n;
        self.entries[n * w + l] = v;
    }

    /// Row for time index `n` (all frequency bins).
    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.entries[n * self.n..(n + 1) * self.n]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Standard STFT: `entries[k][l] = <x, pi(k,l) g> = sum_n x(n) conj(g(n-k)) e^{-2 pi i l n / N}`.
pub fn stft(x: &ComplexSignal, w: &WindowSpec) -> Result<TfMatrix> {
    let n = x.len();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let mut out = TfMatrix::zeros(n, TfKind::Stft);
    for k in 0..n {
        // row k is the DFT of n |-> x(n) conj(g(n-k))
        let windowed = ComplexSignal::new(
            (0..n)
                .map(|i| x.at(i as isize) * w.g_at(i as isize - k as isize).conj())
                .collect(),
        );
        let spec = dft(&windowed);
        for l in 0..n {
            out.set(k, l, spec.at(l as isize));
        }
    }
    Ok(out)
}

/// Modified STFT: `entries[n][l] = <x, T_n M_l g> = sum_k x(k) conj(g(k-n)) e^{-2 pi i l (k-n) / N}`.
///
/// Equals the standard STFT times the phase `e^{2 pi i l n / N}`.
pub fn modified_stft(x: &ComplexSignal, w: &WindowSpec) -> Result<TfMatrix> {
    let n = x.len();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let tw: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, core::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let mut out = TfMatrix::zeros(n, TfKind::ModifiedStft);
    for t in 0..n {
        let windowed = ComplexSignal::new(
            (0..n)
                .map(|i| x.at(i as isize) * w.g_at(i as isize - t as isize).conj())
                .collect(),
        );
        let spec = dft(&windowed);
        for l in 0..n {
            out.set(t, l, spec.at(l as isize) * tw[(l * t) % n]);
        }
    }
    Ok(out)
}
