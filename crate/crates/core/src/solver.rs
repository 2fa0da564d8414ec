//! Desk-scale pseudo-spectral solver for the incompressible momentum
//! equations on the periodic box.
//!
//! State lives in spectral space as three half-spectra. One step is
//! classical four-stage Runge-Kutta on
//!     d/dt u_hat = -P[(u . grad) u]_hat - nu |k|^2 u_hat,
//! with the convective product formed pseudo-spectrally under 2/3-rule
//! dealiasing and re-projected, so pressure never appears. Runs are
//! deterministic for a fixed configuration: identical reruns produce
//! bit-identical diagnostics.

use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::grid::{Axis, Grid3};
use crate::lab::TestFunctionRecipe;
use crate::norms::ScalarSeries;
use crate::ops;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Initial data selector.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// The decaying vortex e^(-2 nu t) (sin x1 cos x2, -cos x1 sin x2, 0).
    Taylor,
    /// Band-limited divergence-free random field with prescribed L2 norm.
    Random {
        seed: u64,
        mode_cap: usize,
        amplitude: f64,
    },
    /// A 3-component field file in the binary snapshot format.
    File(PathBuf),
}

/// Full configuration of one run.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid: Grid3,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub init: InitialCondition,
    pub snapshot_every: usize,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::invalid(format!("nu = {} must be positive", self.nu)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::invalid(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        let steps = (self.t_end / self.dt).round();
        if steps < 1.0 || ((steps * self.dt - self.t_end) / self.t_end).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "t_end = {} must be an integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.snapshot_every == 0 {
            return Err(Error::invalid("snapshot_every must be positive"));
        }
        if let InitialCondition::Random {
            mode_cap,
            amplitude,
            ..
        } = self.init
        {
            if mode_cap == 0 || mode_cap > self.grid.dealias_cap(Axis::X1) {
                return Err(Error::invalid(format!(
                    "init.mode_cap = {mode_cap} must lie in the dealiased band"
                )));
            }
            if !(amplitude.is_finite() && amplitude > 0.0) {
                return Err(Error::invalid("init.amplitude must be positive"));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Scalar diagnostics recorded after every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub time: f64,
    /// ||u||_2^2
    pub energy: f64,
    /// ||grad u||_2^2
    pub grad_sq: f64,
    /// ||grad_h u||_2^2 (horizontal derivatives only)
    pub gradh_sq: f64,
    /// ||Delta u||_2^2
    pub lap_sq: f64,
    /// max norm of the divergence
    pub max_div: f64,
}

/// Time-ordered snapshots plus the per-step diagnostics of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub nu: f64,
    pub snapshots: Vec<(f64, Field)>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    /// Builds a trajectory from existing snapshots, recomputing the
    /// diagnostics at the snapshot instants (used for synthetic
    /// trajectories and for runs read back from disk).
    pub fn from_snapshots(nu: f64, snapshots: Vec<(f64, Field)>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::invalid("a trajectory needs at least one snapshot"));
        }
        if snapshots[0].0 != 0.0 {
            return Err(Error::invalid("the first snapshot must sit at t = 0"));
        }
        if snapshots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid("snapshot times must be strictly increasing"));
        }
        let mut diagnostics = Vec::with_capacity(snapshots.len());
        for (step, (time, field)) in snapshots.iter().enumerate() {
            if field.components() != 3 {
                return Err(Error::invalid("snapshots must be 3-component fields"));
            }
            let state = SpectralState::from_field(field)?;
            diagnostics.push(state.diagnostics(step, *time));
        }
        Ok(Trajectory {
            nu,
            snapshots,
            diagnostics,
        })
    }

    pub fn grid(&self) -> &Grid3 {
        self.snapshots[0].1.grid()
    }

    pub fn final_state(&self) -> &Field {
        &self.snapshots.last().unwrap().1
    }

    /// Diagnostics column as a time series.
    pub fn series(&self, pick: impl Fn(&StepDiagnostics) -> f64) -> Result<ScalarSeries> {
        ScalarSeries::new(
            self.diagnostics.iter().map(|d| d.time).collect(),
            self.diagnostics.iter().map(pick).collect(),
        )
    }

    /// Largest violation of the energy balance
    /// ||u(t)||_2^2 + 2 nu int_0^t ||grad u||_2^2 - ||u_0||_2^2
    /// over the recorded steps (trapezoid in time). Nonpositive up to
    /// quadrature error for a well-behaved run.
    pub fn energy_overshoot(&self) -> f64 {
        let grad = self
            .series(|d| d.grad_sq)
            .expect("diagnostics form a valid series");
        let cumulative = grad.cumulative_trapezoid();
        let e0 = self.diagnostics[0].energy;
        self.diagnostics
            .iter()
            .zip(&cumulative)
            .map(|(d, int_grad)| d.energy + 2.0 * self.nu * int_grad - e0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_snapshot_divergence(&self) -> f64 {
        self.snapshots
            .iter()
            .map(|(_, f)| {
                ops::divergence(f)
                    .map(|d| d.max_abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0f64, f64::max)
    }

    /// Diagnostics CSV: step,time,energy,grad_sq,gradh_sq,lap_sq,max_div.
    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", crate::DOMAIN_NOTICE);
        out.push_str("step,time,energy,grad_sq,gradh_sq,lap_sq,max_div\n");
        for d in &self.diagnostics {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                d.step, d.time, d.energy, d.grad_sq, d.gradh_sq, d.lap_sq, d.max_div
            );
        }
        out
    }
}

/// The exact decaying-vortex solution on the (2 pi)^3 box; its nonlinear
/// term is a pure gradient absorbed by the pressure, so it solves the
/// system for every nu.
pub fn taylor_vortex(grid: Grid3, nu: f64, t: f64) -> Result<Field> {
    for l in grid.lengths() {
        if (l - TAU).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "taylor vortex needs the 2*pi box, got length {l}"
            )));
        }
    }
    let decay = (-2.0 * nu * t).exp();
    Field::vector_from_fn(grid, |x1, x2, _| {
        [
            decay * x1.sin() * x2.cos(),
            -decay * x1.cos() * x2.sin(),
            0.0,
        ]
    })
}

/// Spectral three-component state.
struct SpectralState {
    grid: Grid3,
    comps: [Vec<Complex64>; 3],
}

impl SpectralState {
    fn from_field(u: &Field) -> Result<Self> {
        if u.components() != 3 {
            return Err(Error::invalid("state must have 3 components"));
        }
        Ok(SpectralState {
            grid: *u.grid(),
            comps: [
                u.component_spectrum(0),
                u.component_spectrum(1),
                u.component_spectrum(2),
            ],
        })
    }

    fn to_field(&self) -> Result<Field> {
        let mut all = Vec::with_capacity(3 * self.grid.spectral_len());
        for c in &self.comps {
            all.extend_from_slice(c);
        }
        Ok(Field::from_spectral(self.grid, 3, all)?.physical())
    }

    /// Parseval sum of a spectral weight over one component:
    /// integral of w(k) |u_hat(k)|^2 with the half-spectrum multiplicity.
    fn weighted_l2_sq(&self, comp: usize, weight: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let [n1, n2, n3] = self.grid.n();
        let m1 = n1 / 2 + 1;
        let mut sum = 0.0;
        for i3 in 0..n3 {
            let k3 = self.grid.wavenumber(Axis::X3, i3);
            for i2 in 0..n2 {
                let k2 = self.grid.wavenumber(Axis::X2, i2);
                for i1 in 0..m1 {
                    let k1 = self.grid.wavenumber(Axis::X1, i1);
                    let mult = if i1 == 0 || i1 == n1 / 2 { 1.0 } else { 2.0 };
                    let c = self.comps[comp][(i3 * n2 + i2) * m1 + i1];
                    sum += mult * weight(k1, k2, k3) * c.norm_sqr();
                }
            }
        }
        sum * self.grid.volume() / (self.grid.len() as f64).powi(2)
    }

    fn diagnostics(&self, step: usize, time: f64) -> StepDiagnostics {
        let mut energy = 0.0;
        let mut grad_sq = 0.0;
        let mut gradh_sq = 0.0;
        let mut lap_sq = 0.0;
        for c in 0..3 {
            energy += self.weighted_l2_sq(c, |_, _, _| 1.0);
            grad_sq += self.weighted_l2_sq(c, |k1, k2, k3| k1 * k1 + k2 * k2 + k3 * k3);
            gradh_sq += self.weighted_l2_sq(c, |k1, k2, _| k1 * k1 + k2 * k2);
            lap_sq += self.weighted_l2_sq(c, |k1, k2, k3| (k1 * k1 + k2 * k2 + k3 * k3).powi(2));
        }
        StepDiagnostics {
            step,
            time,
            energy,
            grad_sq,
            gradh_sq,
            lap_sq,
            max_div: self.max_divergence(),
        }
    }

    fn max_divergence(&self) -> f64 {
        let [n1, n2, n3] = self.grid.n();
        let m1 = n1 / 2 + 1;
        let mut div = vec![Complex64::new(0.0, 0.0); self.grid.spectral_len()];
        for i3 in 0..n3 {
            let k3 = self.grid.wavenumber(Axis::X3, i3);
            for i2 in 0..n2 {
                let k2 = self.grid.wavenumber(Axis::X2, i2);
                for i1 in 0..m1 {
                    let k1 = self.grid.wavenumber(Axis::X1, i1);
                    let idx = (i3 * n2 + i2) * m1 + i1;
                    let d = k1 * self.comps[0][idx]
                        + k2 * self.comps[1][idx]
                        + k3 * self.comps[2][idx];
                    div[idx] = Complex64::new(-d.im, d.re);
                }
            }
        }
        fft::inverse_scalar(&self.grid, &div)
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn physical_components(&self) -> [Vec<f64>; 3] {
        [
            fft::inverse_scalar(&self.grid, &self.comps[0]),
            fft::inverse_scalar(&self.grid, &self.comps[1]),
            fft::inverse_scalar(&self.grid, &self.comps[2]),
        ]
    }

    /// Right-hand side: minus the dealiased, projected convective term
    /// plus the viscous decay. Also returns max |u| for the CFL guard.
    fn rhs(&self, nu: f64) -> ([Vec<Complex64>; 3], f64) {
        let grid = &self.grid;
        let [n1, n2, n3] = grid.n();
        let m1 = n1 / 2 + 1;
        let u_phys = self.physical_components();
        let max_u = u_phys
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()));

        // Convective term (u . grad) u_i, formed pseudo-spectrally.
        let mut conv_hat: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::new());
        for (i, hat) in conv_hat.iter_mut().enumerate() {
            let mut conv = vec![0.0f64; grid.len()];
            for (j, axis) in [Axis::X1, Axis::X2, Axis::X3].into_iter().enumerate() {
                let mut dj_ui = self.comps[i].clone();
                ops::differentiate_spectrum(grid, &mut dj_ui, axis);
                let dj_ui = fft::inverse_scalar(grid, &dj_ui);
                for (c, (uj, d)) in u_phys[j].iter().zip(&dj_ui).enumerate() {
                    conv[c] += uj * d;
                }
            }
            let mut h = fft::forward_scalar(grid, &conv);
            ops::dealias_spectrum(grid, &mut h);
            *hat = h;
        }
        ops::project_spectrum(grid, &mut conv_hat);

        // rhs = -conv_hat - nu |k|^2 u_hat
        let mut out = conv_hat;
        for i3 in 0..n3 {
            let k3 = grid.wavenumber(Axis::X3, i3);
            for i2 in 0..n2 {
                let k2 = grid.wavenumber(Axis::X2, i2);
                for i1 in 0..m1 {
                    let k1 = grid.wavenumber(Axis::X1, i1);
                    let ksq = k1 * k1 + k2 * k2 + k3 * k3;
                    let idx = (i3 * n2 + i2) * m1 + i1;
                    for (c, comp) in out.iter_mut().enumerate() {
                        comp[idx] = -comp[idx] - nu * ksq * self.comps[c][idx];
                    }
                }
            }
        }
        (out, max_u)
    }

    fn axpy(&self, coeff: f64, inc: &[Vec<Complex64>; 3]) -> SpectralState {
        let comps = std::array::from_fn(|c| {
            self.comps[c]
                .iter()
                .zip(&inc[c])
                .map(|(a, b)| a + coeff * b)
                .collect()
        });
        SpectralState {
            grid: self.grid,
            comps,
        }
    }

    /// One classical RK4 step with the CFL guard on the entry state.
    fn rk4_step(&mut self, nu: f64, dt: f64) -> Result<()> {
        let (k1, max_u) = self.rhs(nu);
        let limit = cfl_limit(&self.grid, max_u);
        if dt > limit {
            return Err(Error::CflViolation { dt, limit, max_u });
        }
        let (k2, _) = self.axpy(0.5 * dt, &k1).rhs(nu);
        let (k3, _) = self.axpy(0.5 * dt, &k2).rhs(nu);
        let (k4, _) = self.axpy(dt, &k3).rhs(nu);
        for c in 0..3 {
            for (idx, v) in self.comps[c].iter_mut().enumerate() {
                *v += dt / 6.0 * (k1[c][idx] + 2.0 * k2[c][idx] + 2.0 * k3[c][idx] + k4[c][idx]);
            }
        }
        Ok(())
    }
}

/// Advective CFL limit 0.5 * min(L_i / n_i) / max|u|.
pub fn cfl_limit(grid: &Grid3, max_u: f64) -> f64 {
    let h = [
        grid.spacing(Axis::X1),
        grid.spacing(Axis::X2),
        grid.spacing(Axis::X3),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if max_u > 0.0 {
        0.5 * h / max_u
    } else {
        f64::INFINITY
    }
}

/// One explicit step of the semi-discrete system. The input must be
/// divergence-free; the dealiasing mask is applied to the state before
/// stepping, and the output is physical, divergence-free and dealiased.
pub fn step(u: &Field, nu: f64, dt: f64) -> Result<Field> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid(format!("nu = {nu} must be positive")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("dt = {dt} must be positive")));
    }
    if u.components() != 3 {
        return Err(Error::invalid("step expects a 3-component field"));
    }
    let div = ops::divergence(u)?.max_abs();
    if div > 1e-10 {
        return Err(Error::precondition(format!(
            "input divergence {div:e} exceeds 1e-10"
        )));
    }
    let dealiased = ops::dealias(u)?;
    let mut state = SpectralState::from_field(&dealiased)?;
    state.rk4_step(nu, dt)?;
    let out = state.to_field()?;
    out.check_finite()?;
    Ok(out)
}

fn build_initial(config: &SolverConfig) -> Result<Field> {
    let raw = match &config.init {
        InitialCondition::Taylor => taylor_vortex(config.grid, config.nu, 0.0)?,
        InitialCondition::Random {
            seed,
            mode_cap,
            amplitude,
        } => {
            let comps: Vec<Field> = (0..3u64)
                .map(|c| {
                    TestFunctionRecipe::new(
                        crate::lab::trial_seed(*seed, c as usize, 100 + c),
                        *mode_cap,
                        false,
                    )
                    .realize(&config.grid)
                })
                .collect::<Result<_>>()?;
            let len = config.grid.len();
            let mut values = Vec::with_capacity(3 * len);
            for c in &comps {
                values.extend_from_slice(&c.component_values(0));
            }
            let u = Field::from_values(config.grid, 3, values)?;
            let projected = ops::leray_project(&u)?;
            let norm = vector_l2(&projected);
            if norm == 0.0 {
                return Err(Error::Consistency(
                    "random initial field projected to zero".to_string(),
                ));
            }
            projected.scale(amplitude / norm)
        }
        InitialCondition::File(path) => {
            let f = Field::read_ansf(path)?;
            if f.components() != 3 {
                return Err(Error::invalid(format!(
                    "initial field file {} must have 3 components",
                    path.display()
                )));
            }
            if f.grid() != &config.grid {
                return Err(Error::invalid(format!(
                    "initial field grid {:?} does not match the configured grid",
                    f.grid().n()
                )));
            }
            f
        }
    };
    // Establish the solver invariants on any input.
    let dealiased = ops::dealias(&raw)?;
    ops::leray_project(&dealiased)
}

/// L2 norm of a vector field over the box.
pub fn vector_l2(u: &Field) -> f64 {
    let vol = u.grid().cell_volume();
    let mut sum = 0.0;
    for c in 0..u.components() {
        sum += u.component_values(c).iter().map(|x| x * x).sum::<f64>();
    }
    (sum * vol).sqrt()
}

/// Integrates the configuration to t_end, recording diagnostics every
/// step and snapshots every `snapshot_every` steps (plus the final one).
pub fn simulate(config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let u0 = build_initial(config)?;
    let mut state = SpectralState::from_field(&u0)?;
    let n_steps = config.steps();

    // CFL guard on the initial data.
    let max_u0 = u0.max_abs();
    let limit = cfl_limit(&config.grid, max_u0);
    if config.dt > limit {
        return Err(Error::CflViolation {
            dt: config.dt,
            limit,
            max_u: max_u0,
        });
    }

    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::with_capacity(n_steps + 1);
    diagnostics.push(state.diagnostics(0, 0.0));
    snapshots.push((0.0, state.to_field()?));

    for step_idx in 1..=n_steps {
        state.rk4_step(config.nu, config.dt)?;
        let time = step_idx as f64 * config.dt;
        let diag = state.diagnostics(step_idx, time);
        if !diag.energy.is_finite() {
            return Err(Error::Consistency(format!(
                "solution lost finiteness at step {step_idx}"
            )));
        }
        diagnostics.push(diag);
        if step_idx % config.snapshot_every == 0 || step_idx == n_steps {
            if diag.max_div > 1e-10 {
                return Err(Error::Consistency(format!(
                    "snapshot divergence {:e} exceeds 1e-10 at step {step_idx}",
                    diag.max_div
                )));
            }
            snapshots.push((time, state.to_field()?));
        }
    }

    Ok(Trajectory {
        nu: config.nu,
        snapshots,
        diagnostics,
    })
}
