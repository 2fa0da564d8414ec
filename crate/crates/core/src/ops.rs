//! Spectral vector calculus on periodic fields: derivatives, divergence,
//! Leray projection and 2/3-rule dealiasing.
//!
//! Differentiation multiplies by i*k with the Nyquist coefficient of the
//! differentiated axis zeroed, which is exact for band-limited fields.
//! The Leray projector removes the gradient part of a vector field,
//! I - k k^T / |k|^2, leaving the zero wavenumber untouched.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{Axis, Grid3};
use num_complex::Complex64;

fn require_scalar(f: &Field, op: &str) -> Result<()> {
    if f.is_scalar() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{op} expects a scalar field")))
    }
}

fn require_vector(f: &Field, op: &str) -> Result<()> {
    if f.components() == 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{op} expects a 3-component field"
        )))
    }
}

/// Multiplies one half-spectrum in place by i*k along the given axis.
pub(crate) fn differentiate_spectrum(grid: &Grid3, coeffs: &mut [Complex64], axis: Axis) {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    for i3 in 0..n3 {
        let k3 = grid.wavenumber(Axis::X3, i3);
        for i2 in 0..n2 {
            let k2 = grid.wavenumber(Axis::X2, i2);
            for i1 in 0..m1 {
                let k = match axis {
                    Axis::X1 => grid.wavenumber(Axis::X1, i1),
                    Axis::X2 => k2,
                    Axis::X3 => k3,
                };
                let idx = (i3 * n2 + i2) * m1 + i1;
                let c = coeffs[idx];
                coeffs[idx] = Complex64::new(-k * c.im, k * c.re);
            }
        }
    }
}

/// Partial derivative of a scalar field along one axis.
pub fn spectral_derivative(f: &Field, axis: Axis) -> Result<Field> {
    require_scalar(f, "spectral_derivative")?;
    let mut coeffs = f.component_spectrum(0);
    differentiate_spectrum(f.grid(), &mut coeffs, axis);
    let out = Field::from_spectral(*f.grid(), 1, coeffs)?.physical();
    out.check_finite()?;
    Ok(out)
}

/// Divergence of a vector field, sum of the three axis derivatives.
pub fn divergence(u: &Field) -> Result<Field> {
    require_vector(u, "divergence")?;
    let grid = *u.grid();
    let m = grid.spectral_len();
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    for (c, axis) in [Axis::X1, Axis::X2, Axis::X3].into_iter().enumerate() {
        let mut comp = u.component_spectrum(c);
        differentiate_spectrum(&grid, &mut comp, axis);
        for (a, b) in acc.iter_mut().zip(&comp) {
            *a += b;
        }
    }
    let out = Field::from_spectral(grid, 1, acc)?.physical();
    out.check_finite()?;
    Ok(out)
}

/// Applies the Leray projector to a vector half-spectrum in place.
pub(crate) fn project_spectrum(grid: &Grid3, comps: &mut [Vec<Complex64>; 3]) {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    for i3 in 0..n3 {
        let k3 = grid.wavenumber(Axis::X3, i3);
        for i2 in 0..n2 {
            let k2 = grid.wavenumber(Axis::X2, i2);
            for i1 in 0..m1 {
                let k1 = grid.wavenumber(Axis::X1, i1);
                let ksq = k1 * k1 + k2 * k2 + k3 * k3;
                if ksq == 0.0 {
                    continue;
                }
                let idx = (i3 * n2 + i2) * m1 + i1;
                let dot = k1 * comps[0][idx] + k2 * comps[1][idx] + k3 * comps[2][idx];
                let f = dot / ksq;
                comps[0][idx] -= k1 * f;
                comps[1][idx] -= k2 * f;
                comps[2][idx] -= k3 * f;
            }
        }
    }
}

/// Divergence-free part of a vector field.
pub fn leray_project(u: &Field) -> Result<Field> {
    require_vector(u, "leray_project")?;
    let grid = *u.grid();
    let mut comps = [
        u.component_spectrum(0),
        u.component_spectrum(1),
        u.component_spectrum(2),
    ];
    project_spectrum(&grid, &mut comps);
    let mut all = Vec::with_capacity(3 * grid.spectral_len());
    for c in comps {
        all.extend_from_slice(&c);
    }
    let out = Field::from_spectral(grid, 3, all)?.physical();
    out.check_finite()?;
    Ok(out)
}

/// Zeroes one half-spectrum outside the 2/3-rule band in place.
pub(crate) fn dealias_spectrum(grid: &Grid3, coeffs: &mut [Complex64]) {
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    let cap = [
        grid.dealias_cap(Axis::X1) as i64,
        grid.dealias_cap(Axis::X2) as i64,
        grid.dealias_cap(Axis::X3) as i64,
    ];
    for i3 in 0..n3 {
        let m3 = Grid3::signed_mode(n3, i3).abs();
        for i2 in 0..n2 {
            let m2 = Grid3::signed_mode(n2, i2).abs();
            for i1 in 0..m1 {
                if i1 as i64 > cap[0] || m2 > cap[1] || m3 > cap[2] {
                    coeffs[(i3 * n2 + i2) * m1 + i1] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}

/// Sharp 2/3-rule dealiasing mask applied to every component.
pub fn dealias(f: &Field) -> Result<Field> {
    let grid = *f.grid();
    let mut all = Vec::with_capacity(f.components() * grid.spectral_len());
    for c in 0..f.components() {
        let mut comp = f.component_spectrum(c);
        dealias_spectrum(&grid, &mut comp);
        all.extend_from_slice(&comp);
    }
    Ok(Field::from_spectral(grid, f.components(), all)?.physical())
}

/// Laplacian of a scalar field.
pub fn laplacian(f: &Field) -> Result<Field> {
    require_scalar(f, "laplacian")?;
    let grid = *f.grid();
    let [n1, n2, n3] = grid.n();
    let m1 = n1 / 2 + 1;
    let mut coeffs = f.component_spectrum(0);
    for i3 in 0..n3 {
        let k3 = grid.wavenumber(Axis::X3, i3);
        for i2 in 0..n2 {
            let k2 = grid.wavenumber(Axis::X2, i2);
            for i1 in 0..m1 {
                let k1 = grid.wavenumber(Axis::X1, i1);
                coeffs[(i3 * n2 + i2) * m1 + i1] *= -(k1 * k1 + k2 * k2 + k3 * k3);
            }
        }
    }
    Ok(Field::from_spectral(grid, 1, coeffs)?.physical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid3;

    fn max_diff(a: &Field, b: &Field) -> f64 {
        let av = a.component_values(0);
        let bv = b.component_values(0);
        av.iter()
            .zip(&bv)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max)
    }

    #[test]
    fn derivative_of_single_mode() {
        let grid = Grid3::cubic(16).unwrap();
        let f = Field::scalar_from_fn(grid, |_, _, x3| x3.sin()).unwrap();
        let df = spectral_derivative(&f, Axis::X3).unwrap();
        let expect = Field::scalar_from_fn(grid, |_, _, x3| x3.cos()).unwrap();
        assert!(max_diff(&df, &expect) < 1e-12);
    }

    #[test]
    fn derivative_of_zero_is_zero() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::zeros(grid, 1).unwrap();
        for axis in [Axis::X1, Axis::X2, Axis::X3] {
            assert_eq!(spectral_derivative(&f, axis).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn derivative_of_cos_2x1() {
        let grid = Grid3::cubic(16).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, _, _| (2.0 * x1).cos()).unwrap();
        let df = spectral_derivative(&f, Axis::X1).unwrap();
        let expect = Field::scalar_from_fn(grid, |x1, _, _| -2.0 * (2.0 * x1).sin()).unwrap();
        assert!(max_diff(&df, &expect) < 1e-12);
    }

    #[test]
    fn derivative_rejects_vector_input() {
        let grid = Grid3::cubic(8).unwrap();
        let u = Field::zeros(grid, 3).unwrap();
        assert!(spectral_derivative(&u, Axis::X1).is_err());
    }

    #[test]
    fn taylor_vortex_is_divergence_free() {
        let grid = Grid3::cubic(16).unwrap();
        let u = Field::vector_from_fn(grid, |x1, x2, _| {
            [x1.sin() * x2.cos(), -x1.cos() * x2.sin(), 0.0]
        })
        .unwrap();
        let div = divergence(&u).unwrap();
        assert!(div.max_abs() < 1e-12);
    }

    #[test]
    fn divergence_of_single_term() {
        let grid = Grid3::cubic(16).unwrap();
        let u = Field::vector_from_fn(grid, |x1, _, _| [x1.sin(), 0.0, 0.0]).unwrap();
        let div = divergence(&u).unwrap();
        let expect = Field::scalar_from_fn(grid, |x1, _, _| x1.cos()).unwrap();
        assert!(max_diff(&div, &expect) < 1e-12);
        assert!(divergence(&expect).is_err());
    }

    #[test]
    fn projection_annihilates_gradients() {
        let grid = Grid3::cubic(16).unwrap();
        let grad = Field::vector_from_fn(grid, |x1, _, _| [x1.cos(), 0.0, 0.0]).unwrap();
        let p = leray_project(&grad).unwrap();
        assert!(p.max_abs() < 1e-12);
    }

    #[test]
    fn projection_fixes_divergence_free_fields_and_is_idempotent() {
        let grid = Grid3::cubic(16).unwrap();
        let u = Field::vector_from_fn(grid, |x1, x2, x3| {
            [
                x1.sin() * x2.cos(),
                -x1.cos() * x2.sin(),
                (2.0 * x3).cos() * 0.0,
            ]
        })
        .unwrap();
        let p1 = leray_project(&u).unwrap();
        let d = u
            .physical_slice()
            .unwrap()
            .iter()
            .zip(p1.physical_slice().unwrap())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(d < 1e-12, "divergence-free field changed by {d}");

        let v = Field::vector_from_fn(grid, |x1, x2, x3| {
            [(x1 + x2).sin(), (x2 * 2.0).cos() * x3.sin(), x1.cos()]
        })
        .unwrap();
        let q1 = leray_project(&v).unwrap();
        let q2 = leray_project(&q1).unwrap();
        let dd = q1
            .physical_slice()
            .unwrap()
            .iter()
            .zip(q2.physical_slice().unwrap())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(dd < 1e-12, "projection not idempotent: {dd}");
        assert!(divergence(&q1).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn operations_are_linear() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, x2, x3| (x1 + 2.0 * x2).sin() * x3.cos()).unwrap();
        let g = Field::scalar_from_fn(grid, |x1, _, x3| (x1 - x3).cos()).unwrap();
        let lhs = spectral_derivative(&f.scale(2.5).add(&g).unwrap(), Axis::X2).unwrap();
        let rhs = spectral_derivative(&f, Axis::X2)
            .unwrap()
            .scale(2.5)
            .add(&spectral_derivative(&g, Axis::X2).unwrap())
            .unwrap();
        assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn dealias_zeroes_high_modes() {
        let grid = Grid3::cubic(12).unwrap(); // cap = 4
        let f = Field::scalar_from_fn(grid, |x1, _, _| (5.0 * x1).cos() + x1.sin()).unwrap();
        let d = dealias(&f).unwrap();
        let expect = Field::scalar_from_fn(grid, |x1, _, _| x1.sin()).unwrap();
        assert!(max_diff(&d, &expect) < 1e-12);
    }

    #[test]
    fn laplacian_of_mode() {
        let grid = Grid3::cubic(16).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, x2, _| x1.sin() * x2.cos()).unwrap();
        let lap = laplacian(&f).unwrap();
        let expect = Field::scalar_from_fn(grid, |x1, x2, _| -2.0 * x1.sin() * x2.cos()).unwrap();
        assert!(max_diff(&lap, &expect) < 1e-12);
    }
}
