//! File formats: signal/matrix CSV, model and metrics JSON, PGM heatmaps.
//!
//! Floats are written with 17 significant decimal digits so every file
//! round-trips bit-exactly and reruns are byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use finsst::{ComplexSignal, ComponentModel, TfKind, TfMatrix};

use crate::commands::CliError;

fn fmt_f(v: f64) -> String {
    format!("{:.16e}", v)
}

fn parse_f(s: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Parse {
        path: path.display().to_string(),
        line,
        what: format!("bad float {s:?}"),
    })
}

fn parse_u(s: &str, path: &Path, line: usize) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::Parse {
        path: path.display().to_string(),
        line,
        what: format!("bad index {s:?}"),
    })
}

/// Signal CSV: header `n,re,im`, one row per sample.
pub fn write_signal(path: &Path, x: &ComplexSignal) -> Result<(), CliError> {
    let mut out = String::from("n,re,im\n");
    for (n, s) in x.samples().iter().enumerate() {
        out.push_str(&format!("{n},{},{}\n", fmt_f(s.re), fmt_f(s.im)));
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

pub fn read_signal(path: &Path) -> Result<ComplexSignal, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "n,re,im" => {}
        _ => {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: 1,
                what: "expected header n,re,im".into(),
            })
        }
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                what: format!("expected 3 columns, got {}", cols.len()),
            });
        }
        let n = parse_u(cols[0], path, i + 1)?;
        if n != samples.len() {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                what: format!("rows out of order: expected n={}, got {n}", samples.len()),
            });
        }
        samples.push(Complex64::new(
            parse_f(cols[1], path, i + 1)?,
            parse_f(cols[2], path, i + 1)?,
        ));
    }
    if samples.len() < 2 {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            what: "signal needs at least 2 samples".into(),
        });
    }
    Ok(ComplexSignal::new(samples))
}

/// Matrix CSV: `n,l,re,im` (complex transforms) or `n,xi,power` (itvPS),
/// N^2 rows, row-major in n.
pub fn write_matrix(path: &Path, t: &TfMatrix) -> Result<(), CliError> {
    let n_len = t.len();
    let mut out = String::new();
    if t.kind() == TfKind::Itvps {
        out.push_str("n,xi,power\n");
        for n in 0..n_len {
            for xi in 0..n_len {
                out.push_str(&format!("{n},{xi},{}\n", fmt_f(t.at(n, xi).re)));
            }
        }
    } else {
        out.push_str("n,l,re,im\n");
        for n in 0..n_len {
            for l in 0..n_len {
                let v = t.at(n, l);
                out.push_str(&format!("{n},{l},{},{}\n", fmt_f(v.re), fmt_f(v.im)));
            }
        }
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Reads a matrix CSV; the header decides complex vs. power layout and
/// `kind` tags the result (power headers force `TfKind::Itvps`).
pub fn read_matrix(path: &Path, kind: TfKind) -> Result<TfMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let complex = match lines.next() {
        Some((_, h)) if h.trim() == "n,l,re,im" => true,
        Some((_, h)) if h.trim() == "n,xi,power" => false,
        _ => {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: 1,
                what: "expected header n,l,re,im or n,xi,power".into(),
            })
        }
    };
    let kind = if complex { kind } else { TfKind::Itvps };
    let mut rows: Vec<(usize, usize, Complex64)> = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let want = if complex { 4 } else { 3 };
        if cols.len() != want {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                what: format!("expected {want} columns, got {}", cols.len()),
            });
        }
        let n = parse_u(cols[0], path, i + 1)?;
        let l = parse_u(cols[1], path, i + 1)?;
        let v = if complex {
            Complex64::new(parse_f(cols[2], path, i + 1)?, parse_f(cols[3], path, i + 1)?)
        } else {
            Complex64::new(parse_f(cols[2], path, i + 1)?, 0.0)
        };
        rows.push((n, l, v));
    }
    let n_entries = rows.len();
    let n_len = (n_entries as f64).sqrt().round() as usize;
    if n_len * n_len != n_entries || n_len < 2 {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            what: format!("expected N^2 data rows, got {n_entries}"),
        });
    }
    let mut t = TfMatrix::zeros(n_len, kind);
    for (n, l, v) in rows {
        if n >= n_len || l >= n_len {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: 1,
                what: format!("index ({n},{l}) out of range for N={n_len}"),
            });
        }
        t.set(n, l, v);
    }
    Ok(t)
}

pub fn write_model(path: &Path, model: &ComponentModel) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(model).expect("model serializes");
    json.push('\n');
    fs::write(path, json).map_err(|e| CliError::io(path, e))
}

pub fn read_model(path: &Path) -> Result<ComponentModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        what: e.to_string(),
    })
}

/// Binary PGM (P5, maxval 255): width N (time, left to right), height N
/// (frequency, bin N-1 at the top row). Pixels are `|.|^2` magnitudes,
/// linear or `log10(1 + .)`, normalized to 0..=255.
pub fn write_pgm(path: &Path, t: &TfMatrix, log_scale: bool) -> Result<(), CliError> {
    let n_len = t.len();
    let value = |n: usize, xi: usize| {
        let p = t.at(n, xi).norm_sqr();
        if log_scale {
            (1.0 + p).log10()
        } else {
            p
        }
    };
    let mut vmax = 0.0f64;
    for n in 0..n_len {
        for xi in 0..n_len {
            vmax = vmax.max(value(n, xi));
        }
    }
    let mut bytes = Vec::with_capacity(n_len * n_len + 32);
    bytes.extend_from_slice(format!("P5\n{n_len} {n_len}\n255\n").as_bytes());
    for row in 0..n_len {
        let xi = n_len - 1 - row;
        for n in 0..n_len {
            let px = if vmax > 0.0 {
                (value(n, xi) / vmax * 255.0).round() as u8
            } else {
                0
            };
            bytes.push(px);
        }
    }
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(&bytes).map_err(|e| CliError::io(path, e))
}
