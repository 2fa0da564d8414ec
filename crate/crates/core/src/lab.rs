//! Numerical exercise of the anisotropic inequalities behind the
//! criteria: the column oscillation bound, the 1-D interpolation step,
//! the full trilinear estimate and the anisotropic Ladyzhenskaya
//! inequality, each reported as a left/right ratio on seeded ensembles
//! of smooth test functions.
//!
//! The analysis assumes compactly supported functions; on the torus that
//! role is played by a smooth x3-window, and the oscillation form of the
//! column bound (max - min instead of max) is valid without any support
//! assumption. The unnamed constants of the estimates are calibrated
//! empirically on a fixed seeded ensemble and recorded in a calibration
//! file; tests check stability of the ratios, not absolute values.

use crate::criteria::{gn_condition_residual, LemmaParams};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{Axis, Grid3};
use crate::norms::{lp_norm, mixed_norm, MixedNormSpec};
use crate::ops::spectral_derivative;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Deterministic generator of a smooth, real, mean-zero test function.
///
/// The recipe fixes a band-limited random mode sum independent of any
/// grid, so realizations at different resolutions sample the same
/// continuous function. With `window` set, the field is multiplied by a
/// smooth bump in x3 vanishing near the box faces x3 = 0 and x3 = L3.
#[derive(Debug, Clone, Copy)]
pub struct TestFunctionRecipe {
    pub seed: u64,
    pub mode_cap: usize,
    pub window: bool,
}

/// Smooth transition 0 -> 1 on [0, 1] built from exp(-1/t); identically
/// 0 for t <= 0 and 1 for t >= 1.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// C-infinity bump in x3/L: zero on [0, 0.05] and [0.95, 1], one on
/// [0.30, 0.70].
pub fn window_profile(x3_over_l: f64) -> f64 {
    let up = smooth_step((x3_over_l - 0.05) / 0.25);
    let down = smooth_step((0.95 - x3_over_l) / 0.25);
    up * down
}

impl TestFunctionRecipe {
    pub fn new(seed: u64, mode_cap: usize, window: bool) -> Self {
        TestFunctionRecipe {
            seed,
            mode_cap,
            window,
        }
    }

    /// Samples the recipe on a grid. The mode cap must stay inside the
    /// dealiased band of the grid.
    pub fn realize(&self, grid: &Grid3) -> Result<Field> {
        if self.mode_cap == 0 {
            return Err(Error::invalid("mode_cap must be at least 1"));
        }
        let cap = self.mode_cap as i64;
        for axis in [Axis::X1, Axis::X2, Axis::X3] {
            if self.mode_cap > grid.dealias_cap(axis) {
                return Err(Error::invalid(format!(
                    "mode_cap {} exceeds the dealiased band n/3 = {} of the grid",
                    self.mode_cap,
                    grid.dealias_cap(axis)
                )));
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let [n1, n2, n3] = grid.n();
        let m1 = n1 / 2 + 1;
        let half_n = grid.len() as f64 / 2.0;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.spectral_len()];

        // One representative per conjugate pair, drawn in a fixed order so
        // realizations are grid independent. Zero mode excluded: fields
        // are mean-zero by construction.
        for k1 in 0..=cap {
            for k2 in -cap..=cap {
                for k3 in -cap..=cap {
                    let leading = k1 > 0 || (k1 == 0 && (k2 > 0 || (k2 == 0 && k3 > 0)));
                    if !leading {
                        continue;
                    }
                    let ksq = (k1 * k1 + k2 * k2 + k3 * k3) as f64;
                    let amp = rng.gen_range(-1.0..1.0) / (1.0 + ksq);
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    let c = half_n * amp * Complex64::new(phase.cos(), phase.sin());
                    let i2 = k2.rem_euclid(n2 as i64) as usize;
                    let i3 = k3.rem_euclid(n3 as i64) as usize;
                    coeffs[(i3 * n2 + i2) * m1 + k1 as usize] += c;
                    if k1 == 0 {
                        // The r2c layout stores this pair's mirror explicitly.
                        let j2 = (-k2).rem_euclid(n2 as i64) as usize;
                        let j3 = (-k3).rem_euclid(n3 as i64) as usize;
                        coeffs[(j3 * n2 + j2) * m1] += c.conj();
                    }
                }
            }
        }

        let mut field = Field::from_spectral(*grid, 1, coeffs)?.physical();
        if self.window {
            let l3 = grid.lengths()[2];
            let mut values = field.component_values(0);
            let plane = n1 * n2;
            for i3 in 0..n3 {
                let w = window_profile(grid.coords(0, 0, i3)[2] / l3);
                for v in &mut values[i3 * plane..(i3 + 1) * plane] {
                    *v *= w;
                }
            }
            field = Field::from_values(*grid, 1, values)?;
        }
        if field.max_abs() == 0.0 {
            return Err(Error::Consistency(
                "recipe realized to the zero field".to_string(),
            ));
        }
        Ok(field)
    }
}

/// Left/right sides and their ratio for one inequality evaluation.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Grid indices (i1, i2) of the worst column for the column-wise ops.
    pub worst_column: Option<(usize, usize)>,
    /// The exponents the evaluation used, as name/value pairs.
    pub params: Vec<(String, f64)>,
}

fn ratio_of(lhs: f64, rhs: f64) -> Result<f64> {
    if rhs > 0.0 {
        Ok(lhs / rhs)
    } else if lhs == 0.0 {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!(
            "zero right-hand side with nonzero left-hand side {lhs}"
        )))
    }
}

fn require_physical_scalar(f: &Field, op: &str) -> Result<Vec<f64>> {
    if !f.is_scalar() {
        return Err(Error::invalid(format!("{op} expects a scalar field")));
    }
    Ok(f.component_values(0))
}

fn require_windowed(f: &Field, op: &str) -> Result<()> {
    // A windowed function vanishes on the x3 = 0 plane.
    let v = f.component_values(0);
    let grid = f.grid();
    let plane = grid.n1() * grid.n2();
    let boundary = v[..plane].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if boundary > 1e-10 * f.max_abs().max(1e-300) {
        return Err(Error::precondition(format!(
            "{op} needs an x3-windowed field (boundary plane max {boundary:e})"
        )));
    }
    Ok(())
}

/// Column oscillation bound: on every (x1, x2) column,
/// max |phi|^r - min |phi|^r <= r * integral of |phi|^(r-1) |d3 phi| dx3.
///
/// The right-hand side is evaluated as the discrete total variation of
/// the sampled |phi|^r around the column loop, the exact discrete
/// counterpart of the integral via the chain rule; the bound then holds
/// with constant exactly 1 for any field. Returns the worst column.
pub fn ftc_column_bound(phi: &Field, r: f64) -> Result<RatioReport> {
    if !(r > 2.0) {
        return Err(Error::invalid(format!("r = {r} must be > 2")));
    }
    let v = require_physical_scalar(phi, "ftc_column_bound")?;
    let grid = phi.grid();
    let [n1, n2, n3] = grid.n();
    let plane = n1 * n2;

    let mut worst = RatioReport {
        lhs: 0.0,
        rhs: 0.0,
        ratio: 0.0,
        worst_column: Some((0, 0)),
        params: vec![("r".to_string(), r)],
    };
    let mut powers = vec![0.0f64; n3];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            let base = i2 * n1 + i1;
            for i3 in 0..n3 {
                powers[i3] = v[i3 * plane + base].abs().powf(r);
            }
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            let mut tv = 0.0;
            for i3 in 0..n3 {
                let a = powers[i3];
                lo = lo.min(a);
                hi = hi.max(a);
                tv += (powers[(i3 + 1) % n3] - a).abs();
            }
            let lhs = hi - lo;
            let ratio = ratio_of(lhs, tv)?;
            if ratio > worst.ratio || (worst.rhs == 0.0 && tv > 0.0) {
                worst.lhs = lhs;
                worst.rhs = tv;
                worst.ratio = ratio;
                worst.worst_column = Some((i1, i2));
            }
        }
    }
    Ok(worst)
}

/// One-dimensional interpolation check along x3: per column the ratio
/// ||phi||_m / (||d3 phi||_alpha^theta ||phi||_s^(1-theta)) with
/// m = alpha (r-1)/(alpha-1), under the balance condition relating
/// (alpha, s, theta, r). Reports the worst column ratio.
pub fn gn1d_check(phi: &Field, alpha: f64, s: f64, theta: f64, r: f64) -> Result<RatioReport> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::precondition(format!(
            "alpha = {alpha} must be finite and > 1"
        )));
    }
    let residual = gn_condition_residual(alpha, s, theta, r);
    if !(residual <= 1e-10) {
        return Err(Error::precondition(format!(
            "interpolation balance condition residual {residual:e} exceeds 1e-10"
        )));
    }
    require_windowed(phi, "gn1d_check")?;
    let v = require_physical_scalar(phi, "gn1d_check")?;
    let d3 = spectral_derivative(phi, Axis::X3)?;
    let dv = d3.component_values(0);

    let grid = phi.grid();
    let [n1, n2, n3] = grid.n();
    let plane = n1 * n2;
    let h3 = grid.lengths()[2] / n3 as f64;
    let m = alpha * (r - 1.0) / (alpha - 1.0);

    let mut worst = RatioReport {
        lhs: 0.0,
        rhs: 0.0,
        ratio: 0.0,
        worst_column: Some((0, 0)),
        params: vec![
            ("alpha".to_string(), alpha),
            ("s".to_string(), s),
            ("theta".to_string(), theta),
            ("r".to_string(), r),
            ("m".to_string(), m),
        ],
    };
    let norm_1d = |vals: &[f64], base: usize, p: f64| -> f64 {
        let sum: f64 = (0..n3).map(|i3| vals[i3 * plane + base].abs().powf(p)).sum();
        (sum * h3).powf(1.0 / p)
    };
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            let base = i2 * n1 + i1;
            let num = norm_1d(&v, base, m);
            let den =
                norm_1d(&dv, base, alpha).powf(theta) * norm_1d(&v, base, s).powf(1.0 - theta);
            let ratio = ratio_of(num, den)?;
            if ratio > worst.ratio {
                worst.lhs = num;
                worst.rhs = den;
                worst.ratio = ratio;
                worst.worst_column = Some((i1, i2));
            }
        }
    }
    Ok(worst)
}

/// Full trilinear estimate: |integral of phi f g| against the product of
/// two mixed norms of d3 phi, one mixed norm of phi and the four L^2
/// factors of f and g. The factor with exponent theta (r-1)/r is absent
/// on the degenerate theta = 0 branch (0^0 := 1).
pub fn lemma22_ratio(
    phi: &Field,
    f: &Field,
    g: &Field,
    alpha: f64,
    beta: f64,
    s: f64,
    params: &LemmaParams,
) -> Result<RatioReport> {
    for (name, h) in [("phi", phi), ("f", f), ("g", g)] {
        if !h.is_scalar() {
            return Err(Error::invalid(format!("{name} must be a scalar field")));
        }
        if h.grid() != phi.grid() {
            return Err(Error::invalid("all fields must share one grid".to_string()));
        }
    }
    let LemmaParams { r, theta, a, t, .. } = *params;

    let pv = phi.component_values(0);
    let fv = f.component_values(0);
    let gv = g.component_values(0);
    let grid = phi.grid();
    let vol = grid.cell_volume();
    let zero = pv.iter().all(|x| *x == 0.0);
    if !zero {
        require_windowed(phi, "lemma22_ratio")?;
    }

    let lhs = pv
        .iter()
        .zip(&fv)
        .zip(&gv)
        .map(|((p, f), g)| p * f * g)
        .sum::<f64>()
        .abs()
        * vol;

    let d3phi = spectral_derivative(phi, Axis::X3)?;
    let fac_a = mixed_norm(&d3phi, &MixedNormSpec::new(alpha, beta)?)?.powf(1.0 / r);
    let fac_b = if theta > 0.0 {
        let outer = theta * (r - 1.0) * t;
        mixed_norm(&d3phi, &MixedNormSpec::new(alpha, outer)?)?.powf(theta * (r - 1.0) / r)
    } else {
        1.0
    };
    let outer_c = (1.0 - theta) * (r - 1.0) * a;
    let fac_c =
        mixed_norm(phi, &MixedNormSpec::new(s, outer_c)?)?.powf((1.0 - theta) * (r - 1.0) / r);

    let f_l2 = lp_norm(f, 2.0)?;
    let d1f = lp_norm(&spectral_derivative(f, Axis::X1)?, 2.0)?;
    let d2f = lp_norm(&spectral_derivative(f, Axis::X2)?, 2.0)?;
    let g_l2 = lp_norm(g, 2.0)?;

    let rhs = fac_a
        * fac_b
        * fac_c
        * f_l2.powf((r - 2.0) / r)
        * d1f.powf(1.0 / r)
        * d2f.powf(1.0 / r)
        * g_l2;
    let ratio = ratio_of(lhs, rhs)?;
    Ok(RatioReport {
        lhs,
        rhs,
        ratio,
        worst_column: None,
        params: vec![
            ("alpha".to_string(), alpha),
            ("beta".to_string(), beta),
            ("s".to_string(), s),
            ("r".to_string(), r),
            ("theta".to_string(), theta),
            ("a".to_string(), a),
            ("t".to_string(), t),
        ],
    })
}

/// Anisotropic Ladyzhenskaya ratio: ||u||_r against
/// ||u||_2^((6-r)/2r) ||d1 u||_2^((r-2)/2r) ||d2 u||_2^((r-2)/2r)
/// ||d3 u||_2^((r-2)/2r) for mean-zero u and r in (2, 6].
pub fn ladyzhenskaya_ratio(u: &Field, r: f64) -> Result<RatioReport> {
    if !(r > 2.0 && r <= 6.0) {
        return Err(Error::invalid(format!("r = {r} must lie in (2, 6]")));
    }
    if !u.is_scalar() {
        return Err(Error::invalid(
            "ladyzhenskaya_ratio expects a scalar field".to_string(),
        ));
    }
    let mean = u.mean(0);
    if mean.abs() > 1e-10 * (1.0 + u.max_abs()) {
        return Err(Error::precondition(format!(
            "field must be mean-zero over the box (mean = {mean:e})"
        )));
    }
    let lhs = lp_norm(u, r)?;
    let u2 = lp_norm(u, 2.0)?;
    let d = [
        lp_norm(&spectral_derivative(u, Axis::X1)?, 2.0)?,
        lp_norm(&spectral_derivative(u, Axis::X2)?, 2.0)?,
        lp_norm(&spectral_derivative(u, Axis::X3)?, 2.0)?,
    ];
    let e = (r - 2.0) / (2.0 * r);
    let rhs = u2.powf((6.0 - r) / (2.0 * r)) * d[0].powf(e) * d[1].powf(e) * d[2].powf(e);
    let ratio = ratio_of(lhs, rhs)?;
    Ok(RatioReport {
        lhs,
        rhs,
        ratio,
        worst_column: None,
        params: vec![("r".to_string(), r)],
    })
}

// ---------------------------------------------------------------------
// Seeded ensembles and the calibration file.
// ---------------------------------------------------------------------

/// Ensemble geometry and seeding shared by the trial runners.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleConfig {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub mode_cap: usize,
}

impl EnsembleConfig {
    pub fn grid(&self) -> Result<Grid3> {
        Grid3::cubic(self.n)
    }
}

/// One inequality evaluation of an ensemble.
#[derive(Debug, Clone)]
pub struct TrialRow {
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial, per-role seed; trials are independent and order-free.
pub fn trial_seed(base: u64, trial: usize, role: u64) -> u64 {
    splitmix64(base ^ splitmix64(trial as u64 ^ splitmix64(role)))
}

pub fn ftc_ensemble(cfg: &EnsembleConfig, r: f64) -> Result<Vec<TrialRow>> {
    let grid = cfg.grid()?;
    let mut rows = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let recipe = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 1), cfg.mode_cap, true);
        let phi = recipe.realize(&grid)?;
        let rep = ftc_column_bound(&phi, r)?;
        rows.push(TrialRow {
            trial,
            lhs: rep.lhs,
            rhs: rep.rhs,
            ratio: rep.ratio,
        });
    }
    Ok(rows)
}

pub fn gn_ensemble(
    cfg: &EnsembleConfig,
    alpha: f64,
    s: f64,
    theta: f64,
    r: f64,
) -> Result<Vec<TrialRow>> {
    let grid = cfg.grid()?;
    let mut rows = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let recipe = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 2), cfg.mode_cap, true);
        let phi = recipe.realize(&grid)?;
        let rep = gn1d_check(&phi, alpha, s, theta, r)?;
        rows.push(TrialRow {
            trial,
            lhs: rep.lhs,
            rhs: rep.rhs,
            ratio: rep.ratio,
        });
    }
    Ok(rows)
}

/// Trilinear ensemble at one exponent tuple; `s` and `params` must come
/// from the same proof context.
pub fn lemma22_ensemble(
    cfg: &EnsembleConfig,
    alpha: f64,
    beta: f64,
    s: f64,
    params: &LemmaParams,
) -> Result<Vec<TrialRow>> {
    let grid = cfg.grid()?;
    let mut rows = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let phi = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 3), cfg.mode_cap, true)
            .realize(&grid)?;
        let f = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 4), cfg.mode_cap, false)
            .realize(&grid)?;
        let g = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 5), cfg.mode_cap, false)
            .realize(&grid)?;
        let rep = lemma22_ratio(&phi, &f, &g, alpha, beta, s, params)?;
        rows.push(TrialRow {
            trial,
            lhs: rep.lhs,
            rhs: rep.rhs,
            ratio: rep.ratio,
        });
    }
    Ok(rows)
}

pub fn ladyzhenskaya_ensemble(cfg: &EnsembleConfig, r: f64) -> Result<Vec<TrialRow>> {
    let grid = cfg.grid()?;
    let mut rows = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let u = TestFunctionRecipe::new(trial_seed(cfg.seed, trial, 6), cfg.mode_cap, false)
            .realize(&grid)?;
        let rep = ladyzhenskaya_ratio(&u, r)?;
        rows.push(TrialRow {
            trial,
            lhs: rep.lhs,
            rhs: rep.rhs,
            ratio: rep.ratio,
        });
    }
    Ok(rows)
}

pub fn max_ratio(rows: &[TrialRow]) -> f64 {
    rows.iter().fold(0.0f64, |m, r| m.max(r.ratio))
}

/// Trial report CSV with a descriptive comment header.
pub fn trials_csv(op: &str, cfg: &EnsembleConfig, extra: &str, rows: &[TrialRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", crate::DOMAIN_NOTICE);
    let _ = writeln!(
        out,
        "# op={op} grid={} seed={} trials={} mode_cap={}{}",
        cfg.n,
        cfg.seed,
        cfg.trials,
        cfg.mode_cap,
        if extra.is_empty() {
            String::new()
        } else {
            format!(" {extra}")
        }
    );
    out.push_str("trial,lhs,rhs,ratio\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.trial, r.lhs, r.rhs, r.ratio);
    }
    out
}

/// One record of the calibration file.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationEntry {
    pub name: String,
    pub grid: usize,
    pub seed: u64,
    pub value: f64,
}

/// Calibrated inequality constants, persisted as textual key=value lines.
#[derive(Debug, Clone, Default)]
pub struct Calibration {
    pub entries: Vec<CalibrationEntry>,
}

impl Calibration {
    pub fn lookup(&self, name: &str, grid: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.name == name && e.grid == grid)
            .map(|e| e.value)
    }

    pub fn upsert(&mut self, entry: CalibrationEntry) {
        if let Some(e) = self
            .entries
            .iter_mut()
            .find(|e| e.name == entry.name && e.grid == entry.grid)
        {
            *e = entry;
        } else {
            self.entries.push(entry);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# nsreg calibration v1\n");
        let _ = writeln!(out, "# {}", crate::DOMAIN_NOTICE);
        for e in &self.entries {
            let _ = writeln!(
                out,
                "name={} grid={} seed={} value={}",
                e.name, e.grid, e.seed, e.value
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut name = None;
            let mut grid = None;
            let mut seed = None;
            let mut value = None;
            for token in line.split_whitespace() {
                let (k, v) = token.split_once('=').ok_or_else(|| {
                    Error::format(
                        "calibration",
                        format!("line {}: token '{token}' is not key=value", lineno + 1),
                    )
                })?;
                match k {
                    "name" => name = Some(v.to_string()),
                    "grid" => grid = v.parse::<usize>().ok(),
                    "seed" => seed = v.parse::<u64>().ok(),
                    "value" => value = v.parse::<f64>().ok(),
                    other => {
                        return Err(Error::format(
                            "calibration",
                            format!("line {}: unknown key '{other}'", lineno + 1),
                        ))
                    }
                }
            }
            match (name, grid, seed, value) {
                (Some(name), Some(grid), Some(seed), Some(value)) => {
                    entries.push(CalibrationEntry {
                        name,
                        grid,
                        seed,
                        value,
                    });
                }
                _ => {
                    return Err(Error::format(
                        "calibration",
                        format!("line {}: missing name/grid/seed/value", lineno + 1),
                    ))
                }
            }
        }
        Ok(Calibration { entries })
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::io(path.display().to_string(), e))
    }
}

/// Key of the interpolation-step constant for one exponent tuple.
pub fn gn_constant_name(alpha: f64, s: f64, theta: f64, r: f64) -> String {
    format!("c_gn[alpha={alpha},s={s},theta={theta},r={r}]")
}

/// Key of the trilinear-estimate constant for one exponent tuple.
pub fn lemma22_constant_name(alpha: f64, beta: f64, s: f64) -> String {
    format!("c_22[alpha={alpha},beta={beta},s={s}]")
}

/// Key of the Ladyzhenskaya constant for one exponent.
pub fn ladyzhenskaya_constant_name(r: f64) -> String {
    format!("c_lad[r={r}]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{derive_lemma_params, LemmaContext};

    #[test]
    fn ftc_sine_quarter_ratio() {
        // osc(|sin|^4) = 1; the column total variation is exactly 4
        // (four monotone quarters of unit swing), matching the closed
        // form r * integral |sin|^(r-1) |cos| = r * 4/r = 4.
        let grid = Grid3::cubic(64).unwrap();
        let phi = Field::scalar_from_fn(grid, |_, _, x3| x3.sin()).unwrap();
        let rep = ftc_column_bound(&phi, 4.0).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!((rep.rhs - 4.0).abs() < 1e-10);
        assert!((rep.ratio - 0.25).abs() < 1e-8, "ratio {}", rep.ratio);
    }

    #[test]
    fn ftc_constant_field() {
        let grid = Grid3::cubic(8).unwrap();
        let phi = Field::scalar_from_fn(grid, |_, _, _| 3.0).unwrap();
        let rep = ftc_column_bound(&phi, 3.0).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert_eq!(rep.ratio, 0.0);
        assert!(ftc_column_bound(&phi, 2.0).is_err());
    }

    #[test]
    fn ftc_random_fields_bounded_by_one() {
        let grid = Grid3::cubic(32).unwrap();
        for seed in 0..10 {
            let phi = TestFunctionRecipe::new(seed, 3, true)
                .realize(&grid)
                .unwrap();
            for r in [2.5, 3.0, 6.0] {
                let rep = ftc_column_bound(&phi, r).unwrap();
                assert!(rep.ratio <= 1.0 + 1e-8, "seed {seed} r {r}: {}", rep.ratio);
            }
        }
    }

    #[test]
    fn gn_balance_condition_gate() {
        let grid = Grid3::cubic(16).unwrap();
        let phi = TestFunctionRecipe::new(5, 3, true).realize(&grid).unwrap();
        // The sup-in-time example tuple: both sides of the balance are 3/10.
        let rep = gn1d_check(&phi, 2.0, 2.0, 0.2, 8.0 / 3.0).unwrap();
        assert!(rep.ratio.is_finite() && rep.ratio > 0.0);
        // Perturbed theta violates the balance condition.
        assert!(gn1d_check(&phi, 2.0, 2.0, 0.21, 8.0 / 3.0).is_err());
        // Unwindowed fields are rejected.
        let raw = TestFunctionRecipe::new(5, 3, false).realize(&grid).unwrap();
        assert!(gn1d_check(&raw, 2.0, 2.0, 0.2, 8.0 / 3.0).is_err());
    }

    #[test]
    fn gn_ratio_scale_invariant() {
        let grid = Grid3::cubic(16).unwrap();
        let phi = TestFunctionRecipe::new(9, 2, true).realize(&grid).unwrap();
        let base = gn1d_check(&phi, 2.0, 2.0, 0.2, 8.0 / 3.0).unwrap();
        let scaled = gn1d_check(&phi.scale(57.25), 2.0, 2.0, 0.2, 8.0 / 3.0).unwrap();
        assert!(
            (base.ratio - scaled.ratio).abs() <= 1e-12 * base.ratio,
            "{} vs {}",
            base.ratio,
            scaled.ratio
        );
    }

    #[test]
    fn lemma22_zero_fields() {
        let grid = Grid3::cubic(8).unwrap();
        let z = Field::zeros(grid, 1).unwrap();
        let params = derive_lemma_params(LemmaContext::T11i, 2.0, 4.0, 2.0).unwrap();
        let rep = lemma22_ratio(&z, &z, &z, 2.0, 4.0, 2.0, &params).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn lemma22_amplitude_invariance() {
        let grid = Grid3::cubic(16).unwrap();
        let phi = TestFunctionRecipe::new(1, 2, true).realize(&grid).unwrap();
        let f = TestFunctionRecipe::new(2, 2, false).realize(&grid).unwrap();
        let g = TestFunctionRecipe::new(3, 2, false).realize(&grid).unwrap();
        let params = derive_lemma_params(LemmaContext::T11i, 2.0, 4.0, 2.0).unwrap();
        let base = lemma22_ratio(&phi, &f, &g, 2.0, 4.0, 2.0, &params).unwrap();
        let scaled = lemma22_ratio(
            &phi.scale(3.0),
            &f.scale(-0.2),
            &g.scale(11.0),
            2.0,
            4.0,
            2.0,
            &params,
        )
        .unwrap();
        let abc = (3.0f64 * 0.2 * 11.0).abs();
        assert!((scaled.lhs - abc * base.lhs).abs() <= 1e-10 * scaled.lhs.max(1e-300));
        assert!((scaled.rhs - abc * base.rhs).abs() <= 1e-9 * scaled.rhs.max(1e-300));
        assert!(
            (scaled.ratio - base.ratio).abs() <= 1e-10 * base.ratio.max(1e-300),
            "{} vs {}",
            base.ratio,
            scaled.ratio
        );
    }

    #[test]
    fn ladyzhenskaya_scale_invariance_and_gates() {
        let grid = Grid3::cubic(16).unwrap();
        let u = Field::scalar_from_fn(grid, |x1, x2, x3| x1.sin() + x2.sin() + x3.sin()).unwrap();
        let rep = ladyzhenskaya_ratio(&u, 4.0).unwrap();
        assert!(rep.ratio.is_finite() && rep.ratio > 0.0);
        let scaled = ladyzhenskaya_ratio(&u.scale(123.0), 4.0).unwrap();
        assert!((rep.ratio - scaled.ratio).abs() <= 1e-12 * rep.ratio);

        assert!(ladyzhenskaya_ratio(&u, 2.0).is_err());
        assert!(ladyzhenskaya_ratio(&u, 6.5).is_err());
        let biased = Field::scalar_from_fn(grid, |x1, _, _| x1.sin() + 1.0).unwrap();
        assert!(ladyzhenskaya_ratio(&biased, 4.0).is_err());
    }

    #[test]
    fn recipe_is_grid_independent() {
        let r = TestFunctionRecipe::new(42, 3, false);
        let coarse = r.realize(&Grid3::cubic(16).unwrap()).unwrap();
        let fine = r.realize(&Grid3::cubic(32).unwrap()).unwrap();
        // Band-limited: both grids sample the same continuous function,
        // so the L2 norms agree to rounding.
        let a = lp_norm(&coarse, 2.0).unwrap();
        let b = lp_norm(&fine, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-10 * a, "{a} vs {b}");
        // And coincident sample points carry identical values.
        let cv = coarse.component_values(0);
        let fv = fine.component_values(0);
        let cg = coarse.grid();
        let fg = fine.grid();
        let err = (0..16usize)
            .map(|i| (cv[cg.index(i, 0, 0)] - fv[fg.index(2 * i, 0, 0)]).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-12, "sample mismatch {err}");
    }

    #[test]
    fn recipe_rejects_oversized_cap() {
        let grid = Grid3::cubic(8).unwrap(); // dealias cap 2
        assert!(TestFunctionRecipe::new(1, 3, false).realize(&grid).is_err());
        assert!(TestFunctionRecipe::new(1, 0, false).realize(&grid).is_err());
    }

    #[test]
    fn calibration_round_trip() {
        let mut cal = Calibration::default();
        cal.upsert(CalibrationEntry {
            name: gn_constant_name(2.0, 2.0, 0.2, 8.0 / 3.0),
            grid: 64,
            seed: 7,
            value: 1.2345,
        });
        cal.upsert(CalibrationEntry {
            name: ladyzhenskaya_constant_name(4.0),
            grid: 32,
            seed: 7,
            value: 0.9,
        });
        let text = cal.to_text();
        let back = Calibration::parse(&text).unwrap();
        assert_eq!(back.entries, cal.entries);
        assert_eq!(
            back.lookup(&ladyzhenskaya_constant_name(4.0), 32),
            Some(0.9)
        );
        assert_eq!(back.lookup("nope", 32), None);
        assert!(Calibration::parse("name=x grid=64").is_err());
        assert!(Calibration::parse("what is this").is_err());
    }

    #[test]
    fn ensembles_are_deterministic() {
        let cfg = EnsembleConfig {
            n: 16,
            seed: 7,
            trials: 3,
            mode_cap: 3,
        };
        let a = ladyzhenskaya_ensemble(&cfg, 4.0).unwrap();
        let b = ladyzhenskaya_ensemble(&cfg, 4.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.ratio.to_bits(), y.ratio.to_bits());
        }
        let csv1 = trials_csv("ladyzhenskaya", &cfg, "r=4", &a);
        let csv2 = trials_csv("ladyzhenskaya", &cfg, "r=4", &b);
        assert_eq!(csv1, csv2);
    }
}
