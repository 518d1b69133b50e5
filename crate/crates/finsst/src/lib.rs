//! Finite STFT synchrosqueezing on length-N cyclic signals.
//!
//! Everything here operates on `C^N` indexed by the cyclic group `Z_N`:
//! DFT primitives, compactly frequency-supported analysis windows, the
//! modified STFT, instantaneous-frequency reassignment (synchrosqueezing),
//! band-sum component reconstruction, computable error/stability bounds,
//! test-signal generators, and ridge/concentration metrics.
//!
//! The crate is `no_std` (with `alloc`); file formats and the CLI live in
//! the companion `finsst-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod signals;
pub mod spectral;
pub mod squeeze;
pub mod stft;
pub mod window;

pub use analysis::{concentration, extract_ridges, positive_half, ridge_error, RidgeSet};
pub use signals::{add_noise, gen_chirp, gen_interlacing, gen_two_component, itvps, Component, ComponentModel, PhaseLaw};
pub use spectral::{cyclic_distance, cyclic_distance_f, dft, idft, modulate, tf_shift, translate, ComplexSignal, Spectrum};
pub use squeeze::{
    error_bound, inst_freq_info, reconstruct_component, reconstruct_real_component,
    round_half_down, sst,
    ErrorBoundReport, OmegaMatrix, RidgeBand, DEFAULT_ZERO_THRESHOLD,
};
pub use stft::{modified_stft, stft, TfKind, TfMatrix};
pub use window::WindowSpec;

use core::fmt;

/// Errors surfaced by the library kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Signal/window/matrix lengths disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// Window frequency support outside `1..N`.
    InvalidSupport { support: usize, n: usize },
    /// `|g(0)|` is numerically zero; the reconstruction constant is undefined.
    DegenerateWindow,
    /// Every transform entry is zero; `delta` (and the bounds) are undefined.
    AllZeroTransform,
    /// Requested component index outside the model's `0..K`.
    ComponentOutOfRange { index: usize, k: usize },
    /// Metric over a matrix with no energy.
    ZeroEnergy,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidSupport { support, n } => {
                write!(f, "window support {support} invalid for N={n} (need 1 <= W < N)")
            }
            Error::DegenerateWindow => write!(f, "degenerate window: g(0) is numerically zero"),
            Error::AllZeroTransform => write!(f, "transform is identically zero"),
            Error::ComponentOutOfRange { index, k } => {
                write!(f, "component index {index} out of range (valid: 0..{k})")
            }
            Error::ZeroEnergy => write!(f, "matrix has zero energy"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
