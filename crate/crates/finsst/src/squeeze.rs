//! Instantaneous-frequency information, synchrosqueezing reassignment,
//! band-sum component reconstruction, and the computable error/stability
//! bound constants.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::signals::ComponentModel;
use crate::spectral::{cyclic_distance, reduce, ComplexSignal};
use crate::stft::{TfKind, TfMatrix};
use crate::window::WindowSpec;
use crate::{Error, Result};

/// Relative magnitude below which a transform entry is treated as zero
/// and masked. Exact zeros rarely occur in floating point.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;

/// Rounding with halves down: `[v]` if `v <= [v] + 0.5`, else `[v] + 1`,
/// with `[v] = floor(v)` so the rule is translation-consistent on
/// negative inputs too (3.5 -> 3, -7.2 -> -7, -7.9 -> -8).
pub fn round_half_down(v: f64) -> isize {
    let ip = v.floor();
    if v <= ip + 0.5 {
        ip as isize
    } else {
        ip as isize + 1
    }
}

/// Instantaneous-frequency information map `omega_x(n, l)` with the mask
/// of entries where the log ratio was actually defined.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaMatrix {
    entries: Vec<usize>, // row-major in n, values in [0, N)
    mask: Vec<bool>,
    n: usize,
}

impl OmegaMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `omega(n, l)`; 0 when masked.
    pub fn at(&self, n: usize, l: usize) -> usize {
        self.entries[n * self.n + l]
    }

    /// True where `V(n,l)` and `V(n+1,l)` were both above threshold.
    pub fn defined(&self, n: usize, l: usize) -> bool {
        self.mask[n * self.n + l]
    }
}

/// `omega(n,l) = round(real((N / 2 pi i) ln(V(n+1,l) / V(n,l))))` reduced
/// mod N; entries whose numerator or denominator falls at or below
/// `zero_threshold * max|V|` are masked and set to 0.
pub fn inst_freq_info(v: &TfMatrix, zero_threshold: f64) -> OmegaMatrix {
    assert_eq!(v.kind(), TfKind::ModifiedStft, "omega is defined on the modified STFT");
    assert!(zero_threshold >= 0.0);
    let n = v.len();
    let thr = zero_threshold * v.max_abs();
    let mut entries = vec![0usize; n * n];
    let mut mask = vec![false; n * n];
    for t in 0..n {
        let next = (t + 1) % n;
        for l in 0..n {
            let num = v.at(next, l);
            let den = v.at(t, l);
            if den.norm() <= thr || num.norm() <= thr {
                continue;
            }
            // real((N / 2 pi i) ln z) = N arg(z) / 2 pi, principal branch,
            // so the unrounded value lies in (-N/2, N/2]
            let val = n as f64 * (num / den).arg() / (2.0 * PI);
            entries[t * n + l] = reduce(round_half_down(val), n);
            mask[t * n + l] = true;
        }
    }
    OmegaMatrix { entries, mask, n }
}

/// Synchrosqueezing: scatter-add each unmasked `V(n,l)` onto the row bin
/// `xi = omega(n,l)`. Masked entries are dropped, not reassigned.
pub fn sst(v: &TfMatrix, omega: &OmegaMatrix) -> TfMatrix {
    assert_eq!(v.kind(), TfKind::ModifiedStft);
    assert_eq!(v.len(), omega.len());
    let n = v.len();
    let mut out = TfMatrix::zeros(n, TfKind::Sst);
    for t in 0..n {
        for l in 0..n {
            if omega.defined(t, l) {
                let xi = omega.at(t, l);
                let prev = out.at(t, xi);
                out.set(t, xi, prev + v.at(t, l));
            }
        }
    }
    out
}

/// A candidate instantaneous-frequency curve plus a band half-width:
/// bins `xi` with cyclic distance at most `half_width` from `center(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeBand {
    centers: Vec<usize>,
    half_width: usize,
}

impl RidgeBand {
    pub fn new(centers: Vec<usize>, half_width: usize) -> Self {
        Self { centers, half_width }
    }

    /// Band tracking `round(phi'_k(n))` for model component `k`.
    pub fn from_model(model: &ComponentModel, k: usize, n_len: usize, half_width: usize) -> Result<Self> {
        if k >= model.k {
            return Err(Error::ComponentOutOfRange { index: k, k: model.k });
        }
        let centers = (0..n_len)
            .map(|n| reduce(round_half_down(model.components[k].phase.deriv(n as f64)), n_len))
            .collect();
        Ok(Self { centers, half_width })
    }

    /// Covers every bin (the CLI's `--band -1` sentinel).
    pub fn full(n_len: usize) -> Self {
        Self { centers: vec![0; n_len], half_width: n_len }
    }

    pub fn center(&self, n: usize) -> usize {
        self.centers[n]
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn contains(&self, n: usize, xi: usize, n_len: usize) -> bool {
        cyclic_distance(xi as isize, self.centers[n] as isize, n_len) <= self.half_width
    }
}

fn band_sum(s: &TfMatrix, band: &RidgeBand, n: usize) -> Complex64 {
    let n_len = s.len();
    (0..n_len)
        .filter(|&xi| band.contains(n, xi, n_len))
        .map(|xi| s.at(n, xi))
        .sum()
}

/// Band reconstruction: `out(n) = (1 / C_g) sum_{xi in band(n)} S(n, xi)`.
pub fn reconstruct_component(s: &TfMatrix, band: &RidgeBand, w: &WindowSpec) -> Result<ComplexSignal> {
    assert_eq!(s.kind(), TfKind::Sst);
    let c_g = w.recon_constant()?;
    let n_len = s.len();
    Ok(ComplexSignal::new(
        (0..n_len).map(|n| band_sum(s, band, n) / c_g).collect(),
    ))
}

/// Real-signal band reconstruction around a positive-frequency ridge:
/// the one-sided band carries `(A/2) e^{i theta}`, so doubling the real
/// part restores `A cos(theta)`.
pub fn reconstruct_real_component(s: &TfMatrix, band: &RidgeBand, w: &WindowSpec) -> Result<Vec<f64>> {
    let complex = reconstruct_component(s, band, w)?;
    Ok(complex.samples().iter().map(|c| 2.0 * c.re).collect())
}

/// Computable constants of the instantaneous-frequency error bounds,
/// including the noisy extension, at one time index.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundReport {
    /// `I_1^1 = sum_k |g(k-n)| cyc(k-n)`
    pub i11: f64,
    /// `I_2^1 = sum_k |g(k-n)| cyc(k-n)^2`
    pub i21: f64,
    /// `I_1^2 = sum_k |g(k-n-1)| cyc(k-n)`
    pub i12: f64,
    /// `I_2^2 = sum_k |g(k-n-1)| cyc(k-n)^2`
    pub i22: f64,
    /// `I_3^1 = sum_k |g(k-n)| (k+1)` (real-signal term)
    pub i31: f64,
    /// `I_3^2 = sum_k |g(k-n-1)| (k+1)`
    pub i32: f64,
    /// Smallest above-threshold `|V|`.
    pub delta: f64,
    /// `max(1, max |V(n,l)| / |V(n+1,l)|)` over jointly unmasked pairs.
    pub m: f64,
    /// Lipschitz constant of `ln` on the observed annulus: `1 / delta`.
    pub m_prime: f64,
    /// Smoothness parameter of the bound hypotheses.
    pub eps: f64,
    /// The full bound including the additive rounding term `+ 0.5`.
    pub eps_tilde: f64,
    /// Noise term `||e||_inf ||g||_1` supplied by the caller.
    pub eps_prime: f64,
    /// Right-hand side of the off-ridge smallness bound for `|V(n,l)|`.
    pub off_ridge_rhs_1: f64,
    /// Right-hand side of the off-ridge smallness bound for `|V(n+1,l)|`.
    pub off_ridge_rhs_2: f64,
    /// Signal length, kept for the noisy bound.
    pub n_len: usize,
    /// Time index the `I` sums were evaluated at.
    pub time_index: usize,
}

impl ErrorBoundReport {
    /// Total noisy bound `eps_tilde + N M' eps' / pi`.
    pub fn noisy_omega_bound(&self) -> f64 {
        self.eps_tilde + self.n_len as f64 * self.m_prime * self.eps_prime / PI
    }
}

/// Evaluates the bound constants at time index `n`.
///
/// "Nonzero" entries for `delta` and `M` are those above
/// `DEFAULT_ZERO_THRESHOLD * max|V|`, matching the masking convention of
/// `inst_freq_info`. `|k - n|` uses cyclic distance; `|k + 1|` in the
/// real-signal terms is linear, exactly as written.
pub fn error_bound(
    model: &ComponentModel,
    w: &WindowSpec,
    v: &TfMatrix,
    n: usize,
    eps: f64,
    real_signal: bool,
    eps_prime: f64,
) -> Result<ErrorBoundReport> {
    assert!(eps >= 0.0 && eps_prime >= 0.0);
    let n_len = v.len();
    let thr = DEFAULT_ZERO_THRESHOLD * v.max_abs();

    let mut delta = f64::INFINITY;
    let mut m: f64 = 1.0;
    for t in 0..n_len {
        let next = (t + 1) % n_len;
        for l in 0..n_len {
            let cur = v.at(t, l).norm();
            if cur > thr {
                delta = delta.min(cur);
                let nxt = v.at(next, l).norm();
                if nxt > thr {
                    m = m.max(cur / nxt);
                }
            }
        }
    }
    if !delta.is_finite() {
        return Err(Error::AllZeroTransform);
    }

    let i_sum = |shift: usize, power: u32| -> f64 {
        (0..n_len)
            .map(|k| {
                let gk = w.g_at(k as isize - n as isize - shift as isize).norm();
                let dist = cyclic_distance(k as isize, n as isize, n_len) as f64;
                gk * dist.powi(power as i32)
            })
            .sum()
    };
    let i3_sum = |shift: usize| -> f64 {
        (0..n_len)
            .map(|k| {
                let gk = w.g_at(k as isize - n as isize - shift as isize).norm();
                gk * (k + 1) as f64
            })
            .sum()
    };
    let (i11, i21) = (i_sum(0, 1), i_sum(0, 2));
    let (i12, i22) = (i_sum(1, 1), i_sum(1, 2));
    let (i31, i32) = (i3_sum(0), i3_sum(1));

    let t = n as f64;
    let mut inner = 0.0;
    let mut rhs1 = 0.0;
    let mut rhs2 = 0.0;
    for c in &model.components {
        let phi1_sup = (0..n_len)
            .map(|j| c.phase.deriv(j as f64).abs())
            .fold(0.0, f64::max);
        let a = c.amplitude_at(t).abs();
        let extra1 = if real_signal { i31 } else { 0.0 };
        let extra2 = if real_signal { i32 } else { 0.0 };
        inner += phi1_sup * (i11 + PI * a * i21 + extra1 + i12 + PI * a * i22 + extra2);
        rhs1 += eps * phi1_sup * (i11 + PI * a * i21 + extra1);
        rhs2 += eps * phi1_sup * (i12 + PI * a * i22 + extra2);
    }
    let eps_tilde = n_len as f64 * m * eps / (2.0 * PI * delta) * inner + 0.5;

    Ok(ErrorBoundReport {
        i11,
        i21,
        i12,
        i22,
        i31,
        i32,
        delta,
        m,
        m_prime: 1.0 / delta,
        eps,
        eps_tilde,
        eps_prime,
        off_ridge_rhs_1: rhs1,
        off_ridge_rhs_2: rhs2,
        n_len,
        time_index: n,
    })
}
