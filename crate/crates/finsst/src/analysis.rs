//! Ridge extraction from time-frequency matrices and quantitative
//! STFT-vs-SST comparison metrics against itvPS ground truth.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::signals::ComponentModel;
use crate::spectral::{cyclic_distance, reduce};
use crate::squeeze::round_half_down;
use crate::stft::TfMatrix;
use crate::{Error, Result};

/// K frequency curves over time, the empirical counterpart of the
/// `phi'_k` ridges. Columns where fewer than K peaks were found are
/// flagged (their missing bins are filled with 0).
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSet {
    curves: Vec<Vec<usize>>, // [k][n]
    flagged: Vec<bool>,      // per time index
}

impl RidgeSet {
    pub fn new(curves: Vec<Vec<usize>>, flagged: Vec<bool>) -> Self {
        assert!(!curves.is_empty());
        let n = curves[0].len();
        assert!(curves.iter().all(|c| c.len() == n) && flagged.len() == n);
        Self { curves, flagged }
    }

    /// Ground-truth curves `round(phi'_k(n)) mod N` from a model.
    pub fn from_model(model: &ComponentModel, n_len: usize) -> Self {
        let curves = model
            .components
            .iter()
            .map(|c| {
                (0..n_len)
                    .map(|n| reduce(round_half_down(c.phase.deriv(n as f64)), n_len))
                    .collect()
            })
            .collect();
        Self { curves, flagged: vec![false; n_len] }
    }

    pub fn k(&self) -> usize {
        self.curves.len()
    }

    pub fn n_len(&self) -> usize {
        self.curves[0].len()
    }

    pub fn curve(&self, k: usize) -> &[usize] {
        &self.curves[k]
    }

    pub fn flagged(&self, n: usize) -> bool {
        self.flagged[n]
    }

    pub fn any_flagged(&self) -> bool {
        self.flagged.iter().any(|&f| f)
    }
}

/// Per time index, the K largest `|T|^2` local peaks (cyclic neighbors,
/// strictly positive energy), greedily by magnitude subject to pairwise
/// cyclic separation >= `min_sep`; ties break toward the smaller bin.
pub fn extract_ridges(t: &TfMatrix, k: usize, min_sep: usize) -> RidgeSet {
    assert!(k >= 1);
    let n_len = t.len();
    let mut curves = vec![vec![0usize; n_len]; k];
    let mut flagged = vec![false; n_len];
    for n in 0..n_len {
        let row = t.row(n);
        let mag = |xi: usize| row[xi].norm_sqr();
        let mut candidates: Vec<usize> = (0..n_len)
            .filter(|&xi| {
                let m = mag(xi);
                m > 0.0 && m >= mag((xi + 1) % n_len) && m >= mag((xi + n_len - 1) % n_len)
            })
            .collect();
        // descending magnitude, smaller bin first on ties
        candidates.sort_by(|&a, &b| mag(b).partial_cmp(&mag(a)).unwrap().then(a.cmp(&b)));
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        for xi in candidates {
            if chosen.len() == k {
                break;
            }
            if chosen
                .iter()
                .all(|&c| cyclic_distance(c as isize, xi as isize, n_len) >= min_sep)
            {
                chosen.push(xi);
            }
        }
        if chosen.len() < k {
            flagged[n] = true;
        }
        for (i, curve) in curves.iter_mut().enumerate() {
            curve[n] = chosen.get(i).copied().unwrap_or(0);
        }
    }
    RidgeSet::new(curves, flagged)
}

/// Share of the matrix energy lying within cyclic distance `band` of any
/// truth curve, in `[0, 1]`.
pub fn concentration(t: &TfMatrix, truth: &RidgeSet, band: usize) -> Result<f64> {
    let n_len = t.len();
    let total = t.energy();
    if total == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let mut near = 0.0;
    for n in 0..n_len {
        for xi in 0..n_len {
            let close = (0..truth.k()).any(|k| {
                cyclic_distance(xi as isize, truth.curve(k)[n] as isize, n_len) <= band
            });
            if close {
                near += t.at(n, xi).norm_sqr();
            }
        }
    }
    Ok(near / total)
}

/// Per-curve error statistics from greedy per-column matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveError {
    pub mean: f64,
    pub max: usize,
}

/// Matches estimated to truth bins greedily per column (closest pair
/// first) and accumulates cyclic bin distances per truth curve.
pub fn ridge_error(est: &RidgeSet, truth: &RidgeSet) -> Result<Vec<CurveError>> {
    if est.k() != truth.k() || est.n_len() != truth.n_len() {
        return Err(Error::DimensionMismatch { expected: truth.k() * truth.n_len(), got: est.k() * est.n_len() });
    }
    let k = truth.k();
    let n_len = truth.n_len();
    let mut sums = vec![0.0f64; k];
    let mut maxes = vec![0usize; k];
    for n in 0..n_len {
        let mut pairs: Vec<(usize, usize, usize)> = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let d = cyclic_distance(est.curve(i)[n] as isize, truth.curve(j)[n] as isize, n_len);
                pairs.push((d, i, j));
            }
        }
        pairs.sort();
        let mut est_used = vec![false; k];
        let mut truth_used = vec![false; k];
        for (d, i, j) in pairs {
            if !est_used[i] && !truth_used[j] {
                est_used[i] = true;
                truth_used[j] = true;
                sums[j] += d as f64;
                maxes[j] = maxes[j].max(d);
            }
        }
    }
    Ok((0..k)
        .map(|j| CurveError { mean: sums[j] / n_len as f64, max: maxes[j] })
        .collect())
}

/// Copy with the negative-frequency half zeroed (bins `xi > N/2`).
///
/// Real signals carry mirror-image ridges at `N - phi'` with equal
/// magnitude; one-sided analysis compares against the positive ridges.
pub fn positive_half(t: &TfMatrix) -> TfMatrix {
    let n_len = t.len();
    let mut out = TfMatrix::zeros(n_len, t.kind());
    for n in 0..n_len {
        for xi in 0..=n_len / 2 {
            out.set(n, xi, t.at(n, xi));
        }
    }
    out
}
