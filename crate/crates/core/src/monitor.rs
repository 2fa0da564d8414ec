//! Criterion quantities along trajectories: the component norms and
//! anisotropic mixed norms demanded by each hypothesis set, their
//! time-Lebesgue aggregates, and the H^1 budget the theorems control.
//!
//! The monitor reports computed values, not verdicts: the bound M in the
//! hypotheses is an arbitrary finite constant, so interpreting a margin
//! is the caller's choice (the CLI exposes a threshold flag). For the
//! classical full-velocity class the monitor reports the time-Lebesgue
//! aggregate of the third component and leaves the mixed-norm quantity
//! at zero, since that hypothesis set places no condition on d3 u3.

use crate::criteria::{check_spec, AdmissibilityReport, CriterionSpec, Theorem};
use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::norms::{lp_norm, mixed_norm, time_lebesgue, MixedNormSpec, ScalarSeries};
use crate::ops::spectral_derivative;
use crate::solver::Trajectory;
use std::fmt::Write as _;

/// Per-snapshot values feeding the aggregates.
#[derive(Debug, Clone, Copy)]
pub struct SnapshotRow {
    pub time: f64,
    pub u3_norm: f64,
    pub d3u3_mixed_norm: f64,
    pub grad_sq: f64,
    pub budget: f64,
}

/// Everything the monitor computes for one trajectory and one
/// validated hypothesis set.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub admissibility: AdmissibilityReport,
    pub nu: f64,
    /// Time aggregate of ||u3||_{L^s} with the spec's time exponent.
    pub quantity_u3: f64,
    /// Time aggregate of the mixed norm of d3 u3 with the spec's time
    /// exponent; zero when the hypothesis set has no such condition.
    pub quantity_d3u3: f64,
    /// Max over snapshots of ||grad u||_2^2.
    pub h1_max: f64,
    /// The budget series ||grad u(t)||_2^2 + nu int_0^t ||Delta u||_2^2.
    pub h1_budget: ScalarSeries,
    pub rows: Vec<SnapshotRow>,
}

/// The controlled quantity of the strong-solution extension argument:
/// t -> ||grad u(t)||_2^2 + nu * int_0^t ||Delta u||_2^2 dtau,
/// cumulative trapezoid over the recorded diagnostics.
pub fn h1_budget(traj: &Trajectory, nu: f64) -> Result<ScalarSeries> {
    if traj.diagnostics.is_empty() {
        return Err(Error::invalid("trajectory has no diagnostics"));
    }
    let lap = traj.series(|d| d.lap_sq)?;
    let cumulative = lap.cumulative_trapezoid();
    let values = traj
        .diagnostics
        .iter()
        .zip(&cumulative)
        .map(|(d, int_lap)| d.grad_sq + nu * int_lap)
        .collect();
    ScalarSeries::new(traj.diagnostics.iter().map(|d| d.time).collect(), values)
}

/// Exponents the monitor applies for a validated spec: the spatial
/// exponent on u3, the time exponent on u3, the mixed pair on d3 u3
/// (None when the theorem has no such hypothesis) and its time exponent.
fn monitored_exponents(
    rep: &AdmissibilityReport,
) -> Result<(f64, f64, Option<MixedNormSpec>, f64)> {
    let spec = &rep.spec;
    let inf = f64::INFINITY;
    Ok(match spec.theorem {
        Theorem::T11i => (
            2.0,
            inf,
            Some(MixedNormSpec::new(spec.alpha.unwrap(), spec.beta.unwrap())?),
            inf,
        ),
        Theorem::T11ii => (
            3.0,
            inf,
            Some(MixedNormSpec::new(spec.alpha.unwrap(), spec.beta.unwrap())?),
            inf,
        ),
        Theorem::T13 => {
            let beta = rep.derived_beta.ok_or_else(|| {
                Error::Consistency("validated t13 spec lacks a derived beta".to_string())
            })?;
            let p = rep.derived_p.ok_or_else(|| {
                Error::Consistency("validated t13 spec lacks a derived p".to_string())
            })?;
            (
                spec.s.unwrap(),
                inf,
                Some(MixedNormSpec::new(spec.alpha.unwrap(), beta)?),
                p,
            )
        }
        Theorem::T14 => {
            let p = rep.derived_p.ok_or_else(|| {
                Error::Consistency("validated t14 spec lacks a derived p".to_string())
            })?;
            (
                spec.s.unwrap(),
                spec.q.unwrap(),
                Some(MixedNormSpec::new(spec.alpha.unwrap(), spec.beta.unwrap())?),
                p,
            )
        }
        Theorem::T15 => (
            spec.s.unwrap(),
            rep.derived_q.unwrap_or(inf),
            Some(MixedNormSpec::new(spec.alpha.unwrap(), spec.beta.unwrap())?),
            spec.p.unwrap(),
        ),
        Theorem::Ps => (spec.s.unwrap(), spec.q.unwrap(), None, inf),
    })
}

/// Evaluates the criterion quantities of a validated spec on every
/// snapshot and aggregates them in time with the spec's exponents.
pub fn evaluate_criterion(traj: &Trajectory, spec: &CriterionSpec) -> Result<CriterionReport> {
    let admissibility = check_spec(spec);
    if !admissibility.admissible {
        return Err(Error::precondition(format!(
            "spec is inadmissible, violated: {}",
            admissibility.violated.join(", ")
        )));
    }
    if traj.snapshots.len() < 2 {
        return Err(Error::invalid(
            "criterion evaluation needs at least 2 snapshots",
        ));
    }

    let (s_exp, u3_time, mixed_spec, d3_time) = monitored_exponents(&admissibility)?;
    let budget = h1_budget(traj, traj.nu)?;

    // Budget and grad_sq looked up at the snapshot instants.
    let diag_value = |time: f64, pick: &dyn Fn(usize) -> f64| -> Result<f64> {
        let tol = 1e-9 * time.abs().max(1.0);
        traj.diagnostics
            .iter()
            .position(|d| (d.time - time).abs() <= tol)
            .map(pick)
            .ok_or_else(|| {
                Error::Consistency(format!("no diagnostics entry at snapshot time {time}"))
            })
    };

    let mut rows = Vec::with_capacity(traj.snapshots.len());
    for (time, field) in &traj.snapshots {
        let u3 = field.component(2)?;
        let u3_norm = lp_norm(&u3, s_exp)?;
        let d3u3_mixed_norm = match &mixed_spec {
            Some(ms) => mixed_norm(&spectral_derivative(&u3, Axis::X3)?, ms)?,
            None => 0.0,
        };
        rows.push(SnapshotRow {
            time: *time,
            u3_norm,
            d3u3_mixed_norm,
            grad_sq: diag_value(*time, &|i| traj.diagnostics[i].grad_sq)?,
            budget: diag_value(*time, &|i| budget.values()[i])?,
        });
    }

    let times: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let u3_series = ScalarSeries::new(times.clone(), rows.iter().map(|r| r.u3_norm).collect())?;
    let d3_series = ScalarSeries::new(times, rows.iter().map(|r| r.d3u3_mixed_norm).collect())?;
    let quantity_u3 = time_lebesgue(&u3_series, u3_time)?;
    let quantity_d3u3 = if mixed_spec.is_some() {
        time_lebesgue(&d3_series, d3_time)?
    } else {
        0.0
    };
    let h1_max = rows.iter().fold(0.0f64, |m, r| m.max(r.grad_sq));

    for (name, v) in [("u3", quantity_u3), ("d3u3", quantity_d3u3)] {
        if !v.is_finite() {
            return Err(Error::Consistency(format!(
                "criterion quantity {name} is not finite"
            )));
        }
    }

    Ok(CriterionReport {
        admissibility,
        nu: traj.nu,
        quantity_u3,
        quantity_d3u3,
        h1_max,
        h1_budget: budget,
        rows,
    })
}

impl CriterionReport {
    /// Report CSV: one row per snapshot plus an aggregate footer row.
    /// The header records the validated spec and the domain notice; an
    /// optional threshold adds a margin line per quantity.
    pub fn to_csv(&self, threshold: Option<f64>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", crate::DOMAIN_NOTICE);
        let _ = writeln!(out, "# spec: {}", self.admissibility.spec);
        if let Some(beta) = self.admissibility.derived_beta {
            let _ = writeln!(out, "# derived beta={}", crate::norms::fmt_exponent(beta));
        }
        if let Some(p) = self.admissibility.derived_p {
            let _ = writeln!(out, "# derived p={}", crate::norms::fmt_exponent(p));
        }
        if let Some(q) = self.admissibility.derived_q {
            let _ = writeln!(out, "# derived q={}", crate::norms::fmt_exponent(q));
        }
        for note in &self.admissibility.notes {
            let _ = writeln!(out, "# note: {note}");
        }
        let _ = writeln!(out, "# nu={}", self.nu);
        out.push_str("time,u3_norm,d3u3_mixed_norm,grad_sq,budget\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.time, r.u3_norm, r.d3u3_mixed_norm, r.grad_sq, r.budget
            );
        }
        let budget_max = self.h1_budget.max();
        let _ = writeln!(
            out,
            "aggregate,{},{},{},{}",
            self.quantity_u3, self.quantity_d3u3, self.h1_max, budget_max
        );
        if let Some(m) = threshold {
            let _ = writeln!(
                out,
                "# threshold M={m}: u3 within: {}; d3u3 within: {}",
                self.quantity_u3 <= m,
                self.quantity_d3u3 <= m
            );
        }
        out
    }
}
