//! Isotropic and anisotropic Lebesgue norms on grid fields, plus
//! time-Lebesgue aggregation of scalar series.
//!
//! The anisotropic mixed norm takes the 1-D norm along x3 of every
//! (x1, x2) column first and then the 2-D norm of that column function
//! over the horizontal plane. Spatial quadrature is the midpoint rule on
//! the uniform grid, which has spectral accuracy for smooth periodic
//! integrands; an infinite exponent means the grid maximum, a lower bound
//! of the essential supremum for rough fields.

use crate::error::{Error, Result};
use crate::field::Field;
use std::fmt;

/// Checks a Lebesgue exponent: any real in [1, inf].
pub fn validate_exponent(p: f64, what: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::invalid(format!("{what} = {p} must be >= 1 (inf allowed)")))
    } else {
        Ok(())
    }
}

/// Formats an exponent, printing `inf` for the infinite one.
pub fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// Reciprocal with the 1/inf = 0 convention.
pub fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Exponent pair of the anisotropic norm: inner along x3, outer in (x1, x2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl MixedNormSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        validate_exponent(alpha, "alpha")?;
        validate_exponent(beta, "beta")?;
        Ok(MixedNormSpec { alpha, beta })
    }
}

impl fmt::Display for MixedNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, beta={})", fmt_exponent(self.alpha), fmt_exponent(self.beta))
    }
}

fn require_scalar(f: &Field, op: &str) -> Result<()> {
    if f.is_scalar() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{op} expects a scalar field")))
    }
}

/// Isotropic L^p norm over the box.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    require_scalar(f, "lp_norm")?;
    validate_exponent(p, "p")?;
    let v = f.component_values(0);
    if p.is_infinite() {
        return Ok(v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    }
    let vol = f.grid().cell_volume();
    let sum: f64 = v.iter().map(|x| x.abs().powf(p)).sum();
    Ok((sum * vol).powf(1.0 / p))
}

/// Anisotropic mixed norm: inner L^alpha along x3, outer L^beta in (x1, x2).
pub fn mixed_norm(f: &Field, spec: &MixedNormSpec) -> Result<f64> {
    require_scalar(f, "mixed_norm")?;
    let v = f.component_values(0);
    let grid = f.grid();
    let [n1, n2, n3] = grid.n();
    let [l1, l2, l3] = grid.lengths();
    let h3 = l3 / n3 as f64;
    let plane = n1 * n2;

    let mut columns = vec![0.0f64; plane];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            let base = i2 * n1 + i1;
            let col = if spec.alpha.is_infinite() {
                (0..n3).fold(0.0f64, |m, i3| m.max(v[i3 * plane + base].abs()))
            } else {
                let s: f64 = (0..n3)
                    .map(|i3| v[i3 * plane + base].abs().powf(spec.alpha))
                    .sum();
                (s * h3).powf(1.0 / spec.alpha)
            };
            columns[base] = col;
        }
    }

    if spec.beta.is_infinite() {
        Ok(columns.iter().fold(0.0f64, |m, x| m.max(*x)))
    } else {
        let da = (l1 / n1 as f64) * (l2 / n2 as f64);
        let s: f64 = columns.iter().map(|x| x.powf(spec.beta)).sum();
        Ok((s * da).powf(1.0 / spec.beta))
    }
}

/// Nonnegative scalar samples at strictly increasing instants.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl ScalarSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "series lengths differ: {} times, {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("series times must be strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("series values must be finite and nonnegative"));
        }
        Ok(ScalarSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(*v))
    }

    /// Running trapezoid integral, one value per instant (first is 0).
    pub fn cumulative_trapezoid(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.len());
        let mut total = 0.0;
        acc.push(0.0);
        for i in 1..self.len() {
            total += 0.5
                * (self.values[i] + self.values[i - 1])
                * (self.times[i] - self.times[i - 1]);
            acc.push(total);
        }
        acc
    }
}

/// Time-Lebesgue aggregate (integral of the p-th power by the trapezoid
/// rule, then the 1/p root); the maximum value for p = inf.
pub fn time_lebesgue(series: &ScalarSeries, p: f64) -> Result<f64> {
    validate_exponent(p, "p")?;
    if p.is_infinite() {
        return Ok(series.max());
    }
    if series.len() < 2 {
        return Err(Error::invalid(
            "time_lebesgue with finite exponent needs at least 2 samples",
        ));
    }
    let mut integral = 0.0;
    for i in 1..series.len() {
        let a = series.values[i - 1].powf(p);
        let b = series.values[i].powf(p);
        integral += 0.5 * (a + b) * (series.times[i] - series.times[i - 1]);
    }
    Ok(integral.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid3;
    use std::f64::consts::PI;

    #[test]
    fn constant_field_lp() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::scalar_from_fn(grid, |_, _, _| 2.0).unwrap();
        // (8 * (2 pi)^3)^(1/3) = 4 pi
        let got = lp_norm(&f, 3.0).unwrap();
        assert!((got - 4.0 * PI).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn zero_field_any_p() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::zeros(grid, 1).unwrap();
        for p in [1.0, 2.0, 3.4, f64::INFINITY] {
            assert_eq!(lp_norm(&f, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn sine_l2_closed_form() {
        // ||sin x3||_2 over the (2 pi)^3 box: integral of sin^2 is
        // pi * (2 pi)^2 = 4 pi^3, so the norm is 2 pi^(3/2).
        let grid = Grid3::cubic(16).unwrap();
        let f = Field::scalar_from_fn(grid, |_, _, x3| x3.sin()).unwrap();
        let got = lp_norm(&f, 2.0).unwrap();
        let expect = 2.0 * PI.powf(1.5);
        assert!((got - expect).abs() / expect < 1e-13, "got {got}");
    }

    #[test]
    fn lp_rejects_bad_exponent() {
        let grid = Grid3::cubic(4).unwrap();
        let f = Field::zeros(grid, 1).unwrap();
        assert!(lp_norm(&f, 0.5).is_err());
        assert!(lp_norm(&Field::zeros(grid, 3).unwrap(), 2.0).is_err());
    }

    #[test]
    fn mixed_norm_of_sine_column() {
        // Inner L^2 norm of sin(x3) along a 2 pi period is sqrt(pi),
        // constant over the plane; outer L^4 norm multiplies by the plane
        // area (4 pi^2) to the 1/4, giving pi * sqrt(2).
        let grid = Grid3::cubic(16).unwrap();
        let f = Field::scalar_from_fn(grid, |_, _, x3| x3.sin()).unwrap();
        let spec = MixedNormSpec::new(2.0, 4.0).unwrap();
        let got = mixed_norm(&f, &spec).unwrap();
        let expect = PI * 2.0f64.sqrt();
        assert!((got - expect).abs() / expect < 1e-13, "got {got}");
    }

    #[test]
    fn mixed_norm_collapses_to_lp() {
        let grid = Grid3::new([8, 12, 16], [1.0, 2.0, 0.7]).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, x2, x3| {
            (3.0 * x1).sin() + (x2 * x3).cos() * 0.5
        })
        .unwrap();
        for p in [1.0, 2.0, 3.0, 17.0 / 5.0, f64::INFINITY] {
            let spec = MixedNormSpec::new(p, p).unwrap();
            let a = mixed_norm(&f, &spec).unwrap();
            let b = lp_norm(&f, p).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn mixed_norm_zero_field() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::zeros(grid, 1).unwrap();
        for (a, b) in [(1.0, 1.0), (2.0, 4.0), (f64::INFINITY, 2.0)] {
            let spec = MixedNormSpec::new(a, b).unwrap();
            assert_eq!(mixed_norm(&f, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn mixed_norm_homogeneity() {
        let grid = Grid3::cubic(8).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, x2, x3| (x1 + x2).cos() * (2.0 * x3).sin())
            .unwrap();
        for (a, b) in [(1.5, 3.0), (2.0, f64::INFINITY), (f64::INFINITY, 2.5)] {
            let spec = MixedNormSpec::new(a, b).unwrap();
            let base = mixed_norm(&f, &spec).unwrap();
            for c in [-3.0, 0.25, 7.5] {
                let scaled = mixed_norm(&f.scale(c), &spec).unwrap();
                let expect = c.abs() * base;
                assert!(
                    (scaled - expect).abs() <= 1e-12 * expect.max(1e-300),
                    "c = {c}: {scaled} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        assert!(MixedNormSpec::new(0.9, 2.0).is_err());
        assert!(MixedNormSpec::new(2.0, f64::NAN).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(ScalarSeries::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(ScalarSeries::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(ScalarSeries::new(vec![0.0, 1.0], vec![1.0, -2.0]).is_err());
        assert!(ScalarSeries::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn constant_series_l2() {
        let s = ScalarSeries::new(vec![0.0, 1.0, 2.0], vec![3.0, 3.0, 3.0]).unwrap();
        let got = time_lebesgue(&s, 2.0).unwrap();
        let expect = 3.0 * 2.0f64.sqrt();
        assert!((got - expect).abs() < 1e-12);
        assert_eq!(time_lebesgue(&s, f64::INFINITY).unwrap(), 3.0);
    }

    #[test]
    fn linear_series_l1() {
        let n = 1001;
        let times: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let values = times.clone();
        let s = ScalarSeries::new(times, values).unwrap();
        let got = time_lebesgue(&s, 1.0).unwrap();
        assert!((got - 0.5).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn series_needs_two_samples() {
        let s = ScalarSeries::new(vec![0.0], vec![1.0]).unwrap();
        assert!(time_lebesgue(&s, 2.0).is_err());
        assert_eq!(time_lebesgue(&s, f64::INFINITY).unwrap(), 1.0);
    }
}
