//! Analysis windows with compact frequency support.
//!
//! Every separation guarantee assumes `|supp(g_hat)| < d/2`, so windows are
//! built in the frequency domain (exact zeros outside the support) and
//! inverted to time, never sampled in time.

use alloc::vec;

use core::f64::consts::TAU;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{idft, reduce, ComplexSignal, Spectrum};
use crate::{Error, Result};

/// Window `g` together with its spectrum and declared frequency support.
///
/// Invariants (by construction): `g = idft(g_hat)`; `g_hat` is real,
/// non-negative, and exactly zero outside a cyclic interval of
/// `support_width` bins around bin 0; `g(0) != 0`.
///
/// For even `support_width` the interval `{-W/2, ..., W/2-1}` is
/// asymmetric by one bin, so `g_hat` is even only up to the unmatched
/// edge bin; odd widths are exactly even.
#[derive(Debug, Clone)]
pub struct WindowSpec {
    g: ComplexSignal,
    g_hat: Spectrum,
    support_width: usize,
    n: usize,
}

impl WindowSpec {
    /// Window whose spectrum is a Hann taper over `support_width` bins
    /// centered at bin 0, normalized so `sum_xi g_hat(xi) = 1`
    /// (hence `g(0) = 1/N` and the reconstruction constant is 1).
    ///
    /// The taper is `0.5 (1 + cos(2 pi j / (W+1)))`; the `W+1` denominator
    /// keeps all W support bins strictly nonzero.
    pub fn hann_freq(n: usize, support_width: usize) -> Result<Self> {
        if support_width == 0 || support_width >= n {
            return Err(Error::InvalidSupport { support: support_width, n });
        }
        let w = support_width as isize;
        let lo = -(w / 2);
        let hi = (w + 1) / 2; // exclusive
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        let mut sum = 0.0;
        for j in lo..hi {
            let v = 0.5 * (1.0 + (TAU * j as f64 / (w + 1) as f64).cos());
            bins[reduce(j, n)] = Complex64::new(v, 0.0);
            sum += v;
        }
        for b in bins.iter_mut() {
            *b /= sum;
        }
        let g_hat = Spectrum::new(bins);
        let g = idft(&g_hat);
        Ok(Self { g, g_hat, support_width, n })
    }

    /// Builds a spec from raw frequency-domain bins (support declared by
    /// the caller). Used for test windows; no normalization applied.
    pub fn from_spectrum(g_hat: Spectrum, support_width: usize) -> Self {
        let n = g_hat.len();
        let g = idft(&g_hat);
        Self { g, g_hat, support_width, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn support_width(&self) -> usize {
        self.support_width
    }

    pub fn g(&self) -> &ComplexSignal {
        &self.g
    }

    pub fn g_hat(&self) -> &Spectrum {
        &self.g_hat
    }

    /// Cyclic time-domain access `g(k)`.
    pub fn g_at(&self, k: isize) -> Complex64 {
        self.g.at(k)
    }

    /// True iff the support satisfies the separation hypothesis `W < d/2`.
    pub fn validate_separation(&self, d: usize) -> bool {
        (self.support_width as f64) < d as f64 / 2.0
    }

    /// Reconstruction constant `C_g = N conj(g(0)) = sum_xi conj(g_hat(xi))`.
    pub fn recon_constant(&self) -> Result<Complex64> {
        let g0 = self.g.at(0);
        if g0.norm() < 1e-14 {
            return Err(Error::DegenerateWindow);
        }
        Ok(self.n as f64 * g0.conj())
    }

    /// `||g||_1`, the constant in the noise stability bounds.
    pub fn l1_norm(&self) -> f64 {
        self.g.l1_norm()
    }
}
