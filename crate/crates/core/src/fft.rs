//! Real 3-D transforms built on rustfft.
//!
//! The forward transform is real-to-complex along x1 followed by complex
//! transforms along x2 and x3, producing the half-spectrum layout with
//! (n1/2 + 1) bins along the first axis. The forward direction is
//! unnormalized; the inverse divides by n1*n2*n3, so a round trip is the
//! identity up to rounding.

use crate::grid::Grid3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().expect("fft planner poisoned");
    if forward {
        p.plan_fft_forward(len)
    } else {
        p.plan_fft_inverse(len)
    }
}

/// Forward transform of one scalar component, physical -> half-spectrum.
pub fn forward_scalar(grid: &Grid3, values: &[f64]) -> Vec<Complex64> {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    assert_eq!(values.len(), grid.len());

    let fft1 = plan(n1, true);
    let fft2 = plan(n2, true);
    let fft3 = plan(n3, true);

    let mut out = vec![Complex64::new(0.0, 0.0); m1 * n2 * n3];

    // x1 lines: real input, keep the non-redundant half.
    let mut line = vec![Complex64::new(0.0, 0.0); n1];
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            let src = (i3 * n2 + i2) * n1;
            for i1 in 0..n1 {
                line[i1] = Complex64::new(values[src + i1], 0.0);
            }
            fft1.process(&mut line);
            let dst = (i3 * n2 + i2) * m1;
            out[dst..dst + m1].copy_from_slice(&line[..m1]);
        }
    }

    // x2 lines (stride m1).
    let mut line = vec![Complex64::new(0.0, 0.0); n2];
    for i3 in 0..n3 {
        for k1 in 0..m1 {
            for i2 in 0..n2 {
                line[i2] = out[(i3 * n2 + i2) * m1 + k1];
            }
            fft2.process(&mut line);
            for i2 in 0..n2 {
                out[(i3 * n2 + i2) * m1 + k1] = line[i2];
            }
        }
    }

    // x3 lines (stride m1*n2).
    let mut line = vec![Complex64::new(0.0, 0.0); n3];
    for i2 in 0..n2 {
        for k1 in 0..m1 {
            for i3 in 0..n3 {
                line[i3] = out[(i3 * n2 + i2) * m1 + k1];
            }
            fft3.process(&mut line);
            for i3 in 0..n3 {
                out[(i3 * n2 + i2) * m1 + k1] = line[i3];
            }
        }
    }

    out
}

/// Inverse transform of one scalar component, half-spectrum -> physical.
pub fn inverse_scalar(grid: &Grid3, coeffs: &[Complex64]) -> Vec<f64> {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    assert_eq!(coeffs.len(), grid.spectral_len());

    let fft1 = plan(n1, false);
    let fft2 = plan(n2, false);
    let fft3 = plan(n3, false);

    let mut work = coeffs.to_vec();

    let mut line = vec![Complex64::new(0.0, 0.0); n3];
    for i2 in 0..n2 {
        for k1 in 0..m1 {
            for i3 in 0..n3 {
                line[i3] = work[(i3 * n2 + i2) * m1 + k1];
            }
            fft3.process(&mut line);
            for i3 in 0..n3 {
                work[(i3 * n2 + i2) * m1 + k1] = line[i3];
            }
        }
    }

    let mut line = vec![Complex64::new(0.0, 0.0); n2];
    for i3 in 0..n3 {
        for k1 in 0..m1 {
            for i2 in 0..n2 {
                line[i2] = work[(i3 * n2 + i2) * m1 + k1];
            }
            fft2.process(&mut line);
            for i2 in 0..n2 {
                work[(i3 * n2 + i2) * m1 + k1] = line[i2];
            }
        }
    }

    // Reconstruct full lines along x1 from conjugate symmetry, then invert.
    let scale = 1.0 / grid.len() as f64;
    let mut out = vec![0.0; grid.len()];
    let mut full = vec![Complex64::new(0.0, 0.0); n1];
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            let src = (i3 * n2 + i2) * m1;
            full[..m1].copy_from_slice(&work[src..src + m1]);
            for k1 in m1..n1 {
                full[k1] = work[src + (n1 - k1)].conj();
            }
            fft1.process(&mut full);
            let dst = (i3 * n2 + i2) * n1;
            for i1 in 0..n1 {
                out[dst + i1] = full[i1].re * scale;
            }
        }
    }

    out
}

/// Fixes the conjugate symmetry that the r2c layout cannot encode, needed
/// when a half-spectrum is synthesized directly rather than produced by
/// `forward_scalar`. On the k1 = 0 and k1 = n1/2 planes the bins at
/// (k2, k3) and (-k2, -k3) must be complex conjugates; this averages each
/// such pair into a consistent value and makes the axis Nyquist bins real.
pub fn enforce_hermitian(grid: &Grid3, coeffs: &mut [Complex64]) {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    assert_eq!(coeffs.len(), grid.spectral_len());

    for k1 in [0, n1 / 2] {
        for k3 in 0..n3 {
            let k3m = (n3 - k3) % n3;
            for k2 in 0..n2 {
                let k2m = (n2 - k2) % n2;
                let a = (k3 * n2 + k2) * m1 + k1;
                let b = (k3m * n2 + k2m) * m1 + k1;
                if a < b {
                    let v = 0.5 * (coeffs[a] + coeffs[b].conj());
                    coeffs[a] = v;
                    coeffs[b] = v.conj();
                } else if a == b {
                    coeffs[a] = Complex64::new(coeffs[a].re, 0.0);
                }
            }
        }
    }
}
