//! Exponent algebra of the regularity criteria: admissibility checks for
//! each hypothesis set, derivation of the dependent exponents, the
//! interpolation-lemma parameter selections with their identity residuals,
//! and the epsilon-indexed families used near the critical boundary.
//!
//! Everything here is implemented twice: in floating point (this module)
//! and in exact rational arithmetic ([`exact`]). The two paths must agree
//! on admissibility for rational inputs; the float path is what the
//! monitor and the samplers use, the exact path backs the CLI and the
//! oracle tests.

pub mod exact;
pub mod region;

use crate::error::{Error, Result};
use crate::norms::{fmt_exponent, recip, validate_exponent};
use std::fmt;

/// Hypothesis sets covered by the checker. `Ps` is the classical
/// scaling-critical class 2/t + 3/s = 1 on the full velocity; the others
/// are the one-component criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Ps,
    T11i,
    T11ii,
    T13,
    T14,
    T15,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ps" => Ok(Theorem::Ps),
            "t11i" => Ok(Theorem::T11i),
            "t11ii" => Ok(Theorem::T11ii),
            "t13" => Ok(Theorem::T13),
            "t14" => Ok(Theorem::T14),
            "t15" => Ok(Theorem::T15),
            _ => Err(Error::invalid(format!(
                "unknown theorem '{s}' (expected ps, t11i, t11ii, t13, t14 or t15)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Ps => "ps",
            Theorem::T11i => "t11i",
            Theorem::T11ii => "t11ii",
            Theorem::T13 => "t13",
            Theorem::T14 => "t14",
            Theorem::T15 => "t15",
        }
    }
}

/// Proof context selecting one closed-form parameter family for the
/// interpolation lemma. T14 and T15 share a family (`T145`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaContext {
    T11i,
    T11ii,
    T13,
    T145,
}

impl LemmaContext {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t11i" => Ok(LemmaContext::T11i),
            "t11ii" => Ok(LemmaContext::T11ii),
            "t13" => Ok(LemmaContext::T13),
            "t145" | "t14" | "t15" => Ok(LemmaContext::T145),
            _ => Err(Error::invalid(format!(
                "unknown lemma context '{s}' (expected t11i, t11ii, t13 or t145)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LemmaContext::T11i => "t11i",
            LemmaContext::T11ii => "t11ii",
            LemmaContext::T13 => "t13",
            LemmaContext::T145 => "t145",
        }
    }

    /// The vertical integrability exponent this context fixes, if any.
    pub fn fixed_s(self) -> Option<f64> {
        match self {
            LemmaContext::T11i => Some(2.0),
            LemmaContext::T11ii => Some(3.0),
            _ => None,
        }
    }
}

/// A hypothesis set together with its exponents. Fields irrelevant to the
/// chosen theorem stay `None`. Extended reals: `f64::INFINITY` encodes the
/// infinite exponent, reciprocals of infinity are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSpec {
    pub theorem: Theorem,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub s: Option<f64>,
    pub q: Option<f64>,
    pub p: Option<f64>,
}

impl CriterionSpec {
    pub fn t11i(alpha: f64, beta: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::T11i,
            alpha: Some(alpha),
            beta: Some(beta),
            s: None,
            q: None,
            p: None,
        }
    }

    pub fn t11ii(alpha: f64, beta: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::T11ii,
            alpha: Some(alpha),
            beta: Some(beta),
            s: None,
            q: None,
            p: None,
        }
    }

    pub fn t13(alpha: f64, s: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::T13,
            alpha: Some(alpha),
            beta: None,
            s: Some(s),
            q: None,
            p: None,
        }
    }

    pub fn t14(alpha: f64, beta: f64, s: f64, q: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::T14,
            alpha: Some(alpha),
            beta: Some(beta),
            s: Some(s),
            q: Some(q),
            p: None,
        }
    }

    pub fn t15(alpha: f64, beta: f64, p: f64, s: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::T15,
            alpha: Some(alpha),
            beta: Some(beta),
            s: Some(s),
            q: None,
            p: Some(p),
        }
    }

    /// The classical pair: spatial exponent s and time exponent t (carried
    /// in the q field).
    pub fn prodi_serrin(s: f64, t: f64) -> Self {
        CriterionSpec {
            theorem: Theorem::Ps,
            alpha: None,
            beta: None,
            s: Some(s),
            q: Some(t),
            p: None,
        }
    }
}

impl fmt::Display for CriterionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theorem={}", self.theorem.name())?;
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("s", self.s),
            ("q", self.q),
            ("p", self.p),
        ] {
            if let Some(v) = v {
                write!(f, " {name}={}", fmt_exponent(v))?;
            }
        }
        Ok(())
    }
}

/// The derived exponent tuple (r, theta, a, t) of the interpolation lemma.
/// `t` is infinite on the degenerate theta = 0 branch (alpha = beta),
/// where the outer Hoelder factor disappears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaParams {
    pub r: f64,
    pub theta: f64,
    pub a: f64,
    pub t: f64,
    pub context: LemmaContext,
}

impl fmt::Display for LemmaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} theta={} a={} t={}",
            self.r,
            self.theta,
            self.a,
            fmt_exponent(self.t)
        )
    }
}

/// Outcome of an admissibility check, including anything derivable from
/// the validated exponents.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub spec: CriterionSpec,
    pub admissible: bool,
    pub violated: Vec<String>,
    /// Exponent derived by the theorem's closed forms, where it has one.
    pub derived_beta: Option<f64>,
    pub derived_p: Option<f64>,
    pub derived_q: Option<f64>,
    pub lemma: Option<LemmaParams>,
    /// 1/alpha + 2/beta + 2/p whenever all three exponents exist.
    pub scaling_sum: Option<f64>,
    /// Boundary cases the hypothesis set leaves ambiguous.
    pub notes: Vec<String>,
}

// Condition labels shared with the exact-arithmetic path so the two
// implementations report identical violations.
pub(crate) mod cond {
    pub const ALPHA_GT_1: &str = "1<alpha";
    pub const ALPHA_LE_BETA: &str = "alpha<=beta";
    pub const BETA_GT_2: &str = "2<beta";
    pub const BETA_LE_2: &str = "beta<=2";
    pub const BETA_LT_2: &str = "beta<2";
    pub const BETA_GT_3_2: &str = "3/2<beta";
    pub const BETA_GE_3_2: &str = "3/2<=beta";
    pub const SCALING_LT_2: &str = "1/alpha+2/beta<2";
    pub const SCALING_FULL_LT_2: &str = "1/alpha+2/beta+2/p<2";
    pub const ALPHA_FINITE: &str = "alpha<+inf";
    pub const S_GT_LOWER_T13: &str = "max{(11a-12)/(3(a-1)),3}<s";
    pub const S_LE_UPPER_T13: &str = "s<=(11a-10)/(3(a-1))";
    pub const QUASI_PS_U3: &str = "3/s+2/q<1";
    pub const ALPHA_GT_LOWER: &str = "beta/(2beta-2)<alpha";
    pub const S_GE_LOWER_T14: &str = "(11ab-10b-2a)/(3(a-1)b)<=s";
    pub const S_GE_3: &str = "3<=s";
    pub const S_LE_UPPER_T15: &str = "s<=(9ab-6b-6a)/((a-1)b)";
    pub const PS_IDENTITY: &str = "2/t+3/s=1";
    pub const S_GT_3: &str = "3<s";
    pub const MISSING: &str = "missing exponent";
    pub const EXP_RANGE: &str = "exponent>=1";
}

/// The scaling exponent 1/alpha + 2/beta + 2/p of the mixed-time norm.
/// Equals 2 exactly on the critical manifold.
pub fn scaling_sum(alpha: f64, beta: f64, p: f64) -> Result<f64> {
    validate_exponent(alpha, "alpha")?;
    validate_exponent(beta, "beta")?;
    validate_exponent(p, "p")?;
    Ok(recip(alpha) + 2.0 * recip(beta) + 2.0 * recip(p))
}

fn require(spec_field: Option<f64>, violated: &mut Vec<String>) -> Option<f64> {
    match spec_field {
        Some(v) if v.is_nan() || v < 1.0 => {
            violated.push(cond::EXP_RANGE.to_string());
            None
        }
        Some(v) => Some(v),
        None => {
            violated.push(cond::MISSING.to_string());
            None
        }
    }
}

/// Evaluates every inequality of the named theorem's hypothesis set and
/// derives the dependent exponents and lemma parameters where defined.
/// Inadmissible specs yield `admissible = false`, never an error.
pub fn check_spec(spec: &CriterionSpec) -> AdmissibilityReport {
    let mut violated = Vec::new();
    let mut notes = Vec::new();
    let mut derived_beta = None;
    let mut derived_p = None;
    let mut derived_q = None;
    let mut lemma = None;
    let mut sum = None;

    match spec.theorem {
        Theorem::Ps => {
            let s = require(spec.s, &mut violated);
            let t = require(spec.q, &mut violated);
            if let (Some(s), Some(t)) = (s, t) {
                if !(s > 3.0) {
                    violated.push(cond::S_GT_3.to_string());
                }
                if ((2.0 * recip(t) + 3.0 * recip(s)) - 1.0).abs() > 1e-12 {
                    violated.push(cond::PS_IDENTITY.to_string());
                }
            }
        }
        Theorem::T11i => {
            let alpha = require(spec.alpha, &mut violated);
            let beta = require(spec.beta, &mut violated);
            if let (Some(alpha), Some(beta)) = (alpha, beta) {
                // 1 <= alpha is already part of the exponent range check.
                if !(alpha <= beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !(beta > 2.0) {
                    violated.push(cond::BETA_GT_2.to_string());
                }
                if violated.is_empty() && alpha.is_finite() && beta.is_finite() {
                    lemma = derive_lemma_params(LemmaContext::T11i, alpha, beta, 2.0).ok();
                }
            }
        }
        Theorem::T11ii => {
            let alpha = require(spec.alpha, &mut violated);
            let beta = require(spec.beta, &mut violated);
            if let (Some(alpha), Some(beta)) = (alpha, beta) {
                if !(recip(alpha) + 2.0 * recip(beta) < 2.0) {
                    violated.push(cond::SCALING_LT_2.to_string());
                }
                if !(alpha > 1.0) {
                    violated.push(cond::ALPHA_GT_1.to_string());
                }
                if !(alpha <= beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !(beta > 1.5) {
                    violated.push(cond::BETA_GT_3_2.to_string());
                }
                if !(beta <= 2.0) {
                    violated.push(cond::BETA_LE_2.to_string());
                }
                if violated.is_empty() {
                    lemma = derive_lemma_params(LemmaContext::T11ii, alpha, beta, 3.0).ok();
                }
            }
        }
        Theorem::T13 => {
            let alpha = require(spec.alpha, &mut violated);
            let s = require(spec.s, &mut violated);
            if let (Some(alpha), Some(s)) = (alpha, s) {
                if !(alpha > 1.0) {
                    violated.push(cond::ALPHA_GT_1.to_string());
                }
                if !alpha.is_finite() {
                    violated.push(cond::ALPHA_FINITE.to_string());
                }
                if violated.is_empty() {
                    let lower = ((11.0 * alpha - 12.0) / (3.0 * (alpha - 1.0))).max(3.0);
                    let upper = (11.0 * alpha - 10.0) / (3.0 * (alpha - 1.0));
                    if !(s > lower) {
                        violated.push(cond::S_GT_LOWER_T13.to_string());
                    }
                    if !(s <= upper) {
                        violated.push(cond::S_LE_UPPER_T13.to_string());
                    }
                }
                if violated.is_empty() {
                    let (beta, p) = t13_derived(alpha, s);
                    derived_beta = Some(beta);
                    derived_p = Some(p);
                    sum = scaling_sum(alpha, beta, p).ok();
                    if beta.is_finite() {
                        lemma = derive_lemma_params(LemmaContext::T13, alpha, beta, s).ok();
                    } else {
                        notes.push("s at the right endpoint: beta=inf, lemma parameters degenerate".to_string());
                    }
                }
            }
        }
        Theorem::T14 => {
            let alpha = require(spec.alpha, &mut violated);
            let beta = require(spec.beta, &mut violated);
            let s = require(spec.s, &mut violated);
            let q = require(spec.q, &mut violated);
            if let (Some(alpha), Some(beta), Some(s), Some(q)) = (alpha, beta, s, q) {
                if !(3.0 * recip(s) + 2.0 * recip(q) < 1.0) {
                    violated.push(cond::QUASI_PS_U3.to_string());
                }
                if !(beta > 1.5) {
                    violated.push(cond::BETA_GT_3_2.to_string());
                }
                if !(beta < 2.0) {
                    violated.push(cond::BETA_LT_2.to_string());
                }
                if beta.is_finite() && beta > 1.0 {
                    if !(alpha > beta / (2.0 * beta - 2.0)) {
                        violated.push(cond::ALPHA_GT_LOWER.to_string());
                    }
                    if !(alpha <= beta) {
                        violated.push(cond::ALPHA_LE_BETA.to_string());
                    }
                    if alpha.is_finite() && alpha > 1.0 {
                        let s_lo = (11.0 * alpha * beta - 10.0 * beta - 2.0 * alpha)
                            / (3.0 * (alpha - 1.0) * beta);
                        if !(s >= s_lo) {
                            violated.push(cond::S_GE_LOWER_T14.to_string());
                        }
                    }
                }
                if s.is_infinite() {
                    notes.push(
                        "boundary: s=inf admitted although the companion condition 3/s+2/q<1 is strict"
                            .to_string(),
                    );
                }
                if violated.is_empty() {
                    let partial = recip(alpha) + 2.0 * recip(beta);
                    if partial < 2.0 {
                        let p = 2.0 / (2.0 - partial);
                        derived_p = Some(p);
                        sum = scaling_sum(alpha, beta, p).ok();
                    }
                    if alpha.is_finite() && s.is_finite() {
                        lemma = derive_lemma_params(LemmaContext::T145, alpha, beta, s).ok();
                    }
                }
            }
        }
        Theorem::T15 => {
            let alpha = require(spec.alpha, &mut violated);
            let beta = require(spec.beta, &mut violated);
            let p = require(spec.p, &mut violated);
            let s = require(spec.s, &mut violated);
            if let (Some(alpha), Some(beta), Some(p), Some(s)) = (alpha, beta, p, s) {
                if !(recip(alpha) + 2.0 * recip(beta) + 2.0 * recip(p) < 2.0) {
                    violated.push(cond::SCALING_FULL_LT_2.to_string());
                }
                if !(beta >= 1.5) {
                    violated.push(cond::BETA_GE_3_2.to_string());
                }
                if !(beta <= 2.0) {
                    violated.push(cond::BETA_LE_2.to_string());
                }
                if !(alpha > beta / (2.0 * beta - 2.0)) {
                    violated.push(cond::ALPHA_GT_LOWER.to_string());
                }
                if !(alpha <= beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !(s >= 3.0) {
                    violated.push(cond::S_GE_3.to_string());
                }
                if alpha.is_finite() && alpha > 1.0 && s.is_finite() {
                    let s_hi = (9.0 * alpha * beta - 6.0 * beta - 6.0 * alpha)
                        / ((alpha - 1.0) * beta);
                    if !(s <= s_hi) {
                        violated.push(cond::S_LE_UPPER_T15.to_string());
                    }
                } else if s.is_infinite() {
                    violated.push(cond::S_LE_UPPER_T15.to_string());
                }
                if violated.is_empty() {
                    derived_q = Some(if s > 3.0 {
                        2.0 * s / (s - 3.0)
                    } else {
                        f64::INFINITY
                    });
                    sum = scaling_sum(alpha, beta, p).ok();
                    if alpha.is_finite() && s.is_finite() {
                        lemma = derive_lemma_params(LemmaContext::T145, alpha, beta, s).ok();
                    }
                }
            }
        }
    }

    AdmissibilityReport {
        spec: spec.clone(),
        admissible: violated.is_empty(),
        violated,
        derived_beta,
        derived_p,
        derived_q,
        lemma,
        scaling_sum: sum,
        notes,
    }
}

/// Dependent exponents of the quasi-critical theorem: the horizontal
/// exponent and the time exponent as closed forms of (alpha, s).
pub fn t13_derived(alpha: f64, s: f64) -> (f64, f64) {
    let denom = (11.0 * alpha - 10.0) - 3.0 * s * (alpha - 1.0);
    let beta = if denom <= 0.0 {
        f64::INFINITY
    } else {
        2.0 * alpha / denom
    };
    let p = 2.0 * alpha / (3.0 * (alpha - 1.0) * (s - 3.0));
    (beta, p)
}

fn precondition(label: &str) -> Error {
    Error::precondition(format!("violated: {label}"))
}

/// Closed-form lemma parameters (r, theta, a, t) for one proof context.
/// Inputs must be finite and admissible for the context; errors name the
/// first violated inequality.
pub fn derive_lemma_params(
    context: LemmaContext,
    alpha: f64,
    beta: f64,
    s: f64,
) -> Result<LemmaParams> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("s", s)] {
        if !v.is_finite() || v < 1.0 {
            return Err(Error::precondition(format!(
                "{name} = {v} must be finite and >= 1 for lemma parameter derivation"
            )));
        }
    }
    if let Some(fixed) = context.fixed_s() {
        if s != fixed {
            return Err(Error::precondition(format!(
                "context {} fixes s = {fixed}, got {s}",
                context.name()
            )));
        }
    }

    let (r, theta, a, t) = match context {
        LemmaContext::T11i => {
            if !(alpha <= beta) {
                return Err(precondition(cond::ALPHA_LE_BETA));
            }
            if !(beta > 2.0) {
                return Err(precondition(cond::BETA_GT_2));
            }
            let r = beta * (3.0 * alpha - 2.0) / (alpha * (beta + 1.0) - beta);
            let (theta, t) = if alpha == beta {
                (0.0, f64::INFINITY)
            } else {
                (
                    (beta - alpha) / (2.0 * alpha * beta - alpha - beta),
                    beta * (alpha * beta + alpha - beta) / (beta - alpha),
                )
            };
            let a = (alpha * beta + alpha - beta) / (alpha * beta - beta);
            (r, theta, a, t)
        }
        LemmaContext::T11ii => {
            if !(recip(alpha) + 2.0 * recip(beta) < 2.0) {
                return Err(precondition(cond::SCALING_LT_2));
            }
            if !(alpha > 1.0) {
                return Err(precondition(cond::ALPHA_GT_1));
            }
            if !(alpha <= beta) {
                return Err(precondition(cond::ALPHA_LE_BETA));
            }
            if !(beta > 1.5) {
                return Err(precondition(cond::BETA_GT_3_2));
            }
            if !(beta <= 2.0) {
                return Err(precondition(cond::BETA_LE_2));
            }
            let r = beta * (4.0 * alpha - 3.0) / (alpha * (beta + 1.0) - beta);
            let (theta, t) = if alpha == beta {
                (0.0, f64::INFINITY)
            } else {
                (
                    (beta - alpha) / (3.0 * alpha * beta - alpha - 2.0 * beta),
                    beta * (alpha * beta + alpha - beta) / (beta - alpha),
                )
            };
            let a = (alpha * beta + alpha - beta) / (alpha * beta - beta);
            (r, theta, a, t)
        }
        LemmaContext::T13 => {
            if !(alpha > 1.0) {
                return Err(precondition(cond::ALPHA_GT_1));
            }
            let lower = ((11.0 * alpha - 12.0) / (3.0 * (alpha - 1.0))).max(3.0);
            let upper = (11.0 * alpha - 10.0) / (3.0 * (alpha - 1.0));
            if !(s > lower) {
                return Err(precondition(cond::S_GT_LOWER_T13));
            }
            if !(s <= upper) {
                return Err(precondition(cond::S_LE_UPPER_T13));
            }
            let (beta_derived, _) = t13_derived(alpha, s);
            if !beta_derived.is_finite() {
                return Err(Error::precondition(
                    "s at the right endpoint gives beta=inf; lemma parameters degenerate"
                        .to_string(),
                ));
            }
            if (beta - beta_derived).abs() > 1e-9 * beta_derived.max(1.0) {
                return Err(Error::precondition(format!(
                    "beta = {beta} is not the derived value {beta_derived}"
                )));
            }
            let u = 3.0 * s * (alpha - 1.0);
            let r = (2.0 * s * (alpha - 1.0) + 2.0 * alpha) / ((13.0 * alpha - 12.0) - u);
            let theta = (u - 11.0 * alpha + 12.0) / (5.0 * s * (alpha - 1.0) - 11.0 * alpha + 12.0);
            let a = ((13.0 * alpha - 12.0) - u) / (2.0 * (alpha - 1.0));
            let t = 2.0 * alpha * ((13.0 * alpha - 12.0) - u)
                / (((11.0 * alpha - 10.0) - u) * (u - 11.0 * alpha + 12.0));
            (r, theta, a, t)
        }
        LemmaContext::T145 => {
            if !(beta >= 1.5) {
                return Err(precondition(cond::BETA_GE_3_2));
            }
            if !(beta <= 2.0) {
                return Err(precondition(cond::BETA_LE_2));
            }
            if !(alpha > beta / (2.0 * beta - 2.0)) {
                return Err(precondition(cond::ALPHA_GT_LOWER));
            }
            if !(alpha <= beta) {
                return Err(precondition(cond::ALPHA_LE_BETA));
            }
            if !(s >= 3.0) {
                return Err(precondition(cond::S_GE_3));
            }
            let r = (s * alpha + alpha - s) * beta / (alpha * beta + alpha - beta);
            let (theta, t) = if alpha == beta {
                (0.0, f64::INFINITY)
            } else {
                (
                    (beta - alpha) / (s * alpha * beta - s * beta - alpha + beta),
                    (alpha * beta + alpha - beta) * beta / (beta - alpha),
                )
            };
            let a = (alpha * beta + alpha - beta) / ((alpha - 1.0) * beta);
            (r, theta, a, t)
        }
    };

    let params = LemmaParams {
        r,
        theta,
        a,
        t,
        context,
    };
    // The lemma hypotheses must hold for the selection to make sense.
    if !(r > 2.0) {
        return Err(Error::precondition(format!("derived r = {r} fails 2<r")));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::precondition(format!(
            "derived theta = {theta} fails 0<=theta<1"
        )));
    }
    if !(a >= 1.0) {
        return Err(Error::precondition(format!("derived a = {a} fails 1<=a")));
    }
    if !(t >= 1.0) {
        return Err(Error::precondition(format!("derived t = {t} fails 1<=t")));
    }
    Ok(params)
}

/// Absolute residuals of the four parameter identities:
///   theta (r-1) t = beta,
///   (1-theta)(r-1) a = s,
///   1/a + 1/t = (beta-1)/beta,
///   (1-theta)/s + theta (1-alpha)/alpha = (alpha-1)/(alpha (r-1)).
/// On the theta = 0 branch the first identity is vacuous and reports 0.
pub fn lemma_identity_residuals(params: &LemmaParams, alpha: f64, beta: f64, s: f64) -> [f64; 4] {
    let LemmaParams { r, theta, a, t, .. } = *params;
    let id1 = if theta == 0.0 {
        0.0
    } else if t.is_infinite() || beta.is_infinite() {
        if t.is_infinite() && beta.is_infinite() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (theta * (r - 1.0) * t - beta).abs()
    };
    let id2 = ((1.0 - theta) * (r - 1.0) * a - s).abs();
    let id3 = (1.0 / a + recip(t) - (1.0 - recip(beta))).abs();
    let id4 = ((1.0 - theta) / s + theta * (1.0 - alpha) / alpha
        - (alpha - 1.0) / (alpha * (r - 1.0)))
        .abs();
    [id1, id2, id3, id4]
}

/// Residual of the interpolation balance condition
/// 1/((r-1) alpha) + theta/alpha = (1-theta)/(s (alpha-1)),
/// the hypothesis under which the 1-D interpolation step applies.
pub fn gn_condition_residual(alpha: f64, s: f64, theta: f64, r: f64) -> f64 {
    (1.0 / ((r - 1.0) * alpha) + theta / alpha - (1.0 - theta) / (s * (alpha - 1.0))).abs()
}

/// One epsilon-indexed admissible family near the critical boundary.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    pub theorem: Theorem,
    pub beta: f64,
    pub epsilon: f64,
    /// Open lower endpoint of the admissible alpha interval.
    pub alpha_lo: f64,
    /// Closed upper endpoint (already intersected with alpha <= beta).
    pub alpha_hi: f64,
    /// False when the closed-form upper bound falls at or below the lower
    /// bound; the pair is then flagged rather than clamped.
    pub nonempty: bool,
    pub alpha_mid: f64,
    pub s_mid: f64,
    /// Residuals of the slack identity at lo, mid and hi.
    pub slack_residuals: [f64; 3],
}

impl EpsilonFamily {
    /// The s selection of the family at a given alpha.
    pub fn s_at(&self, alpha: f64) -> f64 {
        epsilon_s(self.theorem, self.beta, self.epsilon, alpha)
    }
}

fn epsilon_s(theorem: Theorem, beta: f64, eps: f64, alpha: f64) -> f64 {
    match theorem {
        Theorem::T14 => {
            (alpha * beta - 2.0 * beta + 2.0 * alpha) / ((1.0 - eps) * (alpha - 1.0) * beta)
        }
        Theorem::T15 => {
            ((1.0 + eps) * alpha * beta - 2.0 * beta + 2.0 * alpha) / ((alpha - 1.0) * beta)
        }
        _ => f64::NAN,
    }
}

/// Residual of the slack identity that encodes how far the family sits
/// from criticality: eps/4 below the critical value.
pub fn epsilon_slack_residual(theorem: Theorem, beta: f64, eps: f64, alpha: f64) -> f64 {
    let s = epsilon_s(theorem, beta, eps, alpha);
    match theorem {
        Theorem::T14 => {
            let lhs = 3.0 / s
                + (3.0 * alpha * beta * s - 11.0 * alpha * beta - 3.0 * beta * s
                    + 10.0 * beta
                    + 2.0 * alpha)
                    / (4.0 * (alpha - 1.0) * beta * s);
            (lhs - (1.0 - eps / 4.0)).abs()
        }
        Theorem::T15 => {
            let lhs = 1.0 / alpha
                + 2.0 / beta
                + (9.0 * alpha * beta - alpha * beta * s + beta * s - 6.0 * beta - 6.0 * alpha)
                    / (4.0 * alpha * beta);
            (lhs - (2.0 - eps / 4.0)).abs()
        }
        _ => f64::NAN,
    }
}

/// Admissible alpha interval and s selection of the epsilon family for
/// the time-integral theorems.
pub fn epsilon_family(theorem: Theorem, beta: f64, eps: f64) -> Result<EpsilonFamily> {
    let (lo, hi) = match theorem {
        Theorem::T14 => {
            if !(beta > 1.5 && beta < 2.0) {
                return Err(Error::invalid(format!(
                    "t14 epsilon family needs 3/2 < beta < 2, got {beta}"
                )));
            }
            let eps_max = (0.4f64).min((8.0 * beta - 12.0) / (11.0 * beta - 12.0));
            if !(eps > 0.0 && eps < eps_max) {
                return Err(Error::invalid(format!(
                    "epsilon = {eps} outside (0, {eps_max})"
                )));
            }
            let lo = beta / (2.0 * beta - 2.0);
            let hi = (4.0 - 10.0 * eps) * beta / ((8.0 - 11.0 * eps) * beta + 2.0 * eps - 8.0);
            (lo, hi.min(beta))
        }
        Theorem::T15 => {
            if !(1.5..=2.0).contains(&beta) {
                return Err(Error::invalid(format!(
                    "t15 epsilon family needs 3/2 <= beta <= 2, got {beta}"
                )));
            }
            let eps_max = (2.0 / 9.0f64).min((2.0 * beta - 2.0) / beta);
            if !(eps > 0.0 && eps < eps_max) {
                return Err(Error::invalid(format!(
                    "epsilon = {eps} outside (0, {eps_max})"
                )));
            }
            let lo = 4.0 * beta / ((8.0 - eps) * beta - 8.0);
            let hi = beta / ((2.0 - eps) * beta - 2.0);
            (lo, hi.min(beta))
        }
        _ => {
            return Err(Error::invalid(
                "epsilon_family applies to t14 and t15 only".to_string(),
            ))
        }
    };

    let nonempty = hi > lo;
    let mid = 0.5 * (lo + hi);
    let s_mid = epsilon_s(theorem, beta, eps, mid);
    let slack = [
        epsilon_slack_residual(theorem, beta, eps, lo),
        epsilon_slack_residual(theorem, beta, eps, mid),
        epsilon_slack_residual(theorem, beta, eps, hi),
    ];
    Ok(EpsilonFamily {
        theorem,
        beta,
        epsilon: eps,
        alpha_lo: lo,
        alpha_hi: hi,
        nonempty,
        alpha_mid: mid,
        s_mid,
        slack_residuals: slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_sum_values() {
        // 1/2 + 3/4 + 3/4 = 2 (rational oracle in criteria::exact tests).
        assert_eq!(scaling_sum(2.0, 8.0 / 3.0, 8.0 / 3.0).unwrap(), 2.0);
        assert_eq!(
            scaling_sum(f64::INFINITY, f64::INFINITY, f64::INFINITY).unwrap(),
            0.0
        );
        assert_eq!(scaling_sum(1.0, 2.0, 2.0).unwrap(), 3.0);
        assert!(scaling_sum(0.5, 2.0, 2.0).is_err());
    }

    #[test]
    fn t11i_diagonal_is_admissible() {
        let rep = check_spec(&CriterionSpec::t11i(3.0, 3.0));
        assert!(rep.admissible, "violations: {:?}", rep.violated);
        let lemma = rep.lemma.unwrap();
        assert_eq!(lemma.theta, 0.0);
        assert!(lemma.t.is_infinite());
    }

    #[test]
    fn t11i_infinite_beta_admissible_without_lemma() {
        let rep = check_spec(&CriterionSpec::t11i(2.0, f64::INFINITY));
        assert!(rep.admissible);
        assert!(rep.lemma.is_none());
    }

    #[test]
    fn t13_worked_example() {
        let rep = check_spec(&CriterionSpec::t13(2.0, 3.5));
        assert!(rep.admissible, "violations: {:?}", rep.violated);
        let beta = rep.derived_beta.unwrap();
        let p = rep.derived_p.unwrap();
        assert!((beta - 8.0 / 3.0).abs() < 1e-14);
        assert!((p - 8.0 / 3.0).abs() < 1e-14);
        assert!((rep.scaling_sum.unwrap() - 2.0).abs() < 1e-14);
        let lemma = rep.lemma.unwrap();
        assert!((lemma.r - 22.0 / 7.0).abs() < 1e-13);
        assert!((lemma.theta - 1.0 / 15.0).abs() < 1e-14);
        assert!((lemma.a - 7.0 / 4.0).abs() < 1e-14);
        assert!((lemma.t - 56.0 / 3.0).abs() < 1e-12);
        // 1/a + 1/t = 4/7 + 3/56 = 5/8 = (beta-1)/beta.
        assert!((1.0 / lemma.a + 1.0 / lemma.t - 5.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn t11ii_ordering_violation() {
        let rep = check_spec(&CriterionSpec::t11ii(3.0, 2.0));
        assert!(!rep.admissible);
        assert!(rep.violated.iter().any(|v| v == cond::ALPHA_LE_BETA));
    }

    #[test]
    fn t11i_example_params() {
        let p = derive_lemma_params(LemmaContext::T11i, 2.0, 4.0, 2.0).unwrap();
        assert!((p.r - 8.0 / 3.0).abs() < 1e-14);
        assert!((p.theta - 0.2).abs() < 1e-14);
        assert!((p.a - 1.5).abs() < 1e-14);
        assert!((p.t - 12.0).abs() < 1e-12);
        let res = lemma_identity_residuals(&p, 2.0, 4.0, 2.0);
        assert!(res.iter().all(|r| *r < 1e-12), "residuals {res:?}");
        // Fourth identity: both sides are 3/10.
        let lhs = (1.0 - p.theta) / 2.0 + p.theta * (1.0 - 2.0) / 2.0;
        assert!((lhs - 0.3).abs() < 1e-14);
    }

    #[test]
    fn t11ii_degenerate_example() {
        let p = derive_lemma_params(LemmaContext::T11ii, 2.0, 2.0, 3.0).unwrap();
        assert!((p.r - 2.5).abs() < 1e-14);
        assert_eq!(p.theta, 0.0);
        assert!((p.a - 2.0).abs() < 1e-14);
        assert!(p.t.is_infinite());
        let res = lemma_identity_residuals(&p, 2.0, 2.0, 3.0);
        assert!(res.iter().all(|r| *r < 1e-12), "residuals {res:?}");
    }

    #[test]
    fn residuals_detect_corruption() {
        let p = derive_lemma_params(LemmaContext::T13, 2.0, 8.0 / 3.0, 3.5).unwrap();
        let base = lemma_identity_residuals(&p, 2.0, 8.0 / 3.0, 3.5);
        assert!(base.iter().all(|r| *r < 1e-12));
        let corrupted = LemmaParams { r: p.r + 1e-3, ..p };
        let res = lemma_identity_residuals(&corrupted, 2.0, 8.0 / 3.0, 3.5);
        assert!(res[0] > 1e-4, "first residual {:?}", res);
    }

    #[test]
    fn derive_rejects_inadmissible() {
        let err = derive_lemma_params(LemmaContext::T11i, 3.0, 2.5, 2.0).unwrap_err();
        assert!(err.to_string().contains(cond::ALPHA_LE_BETA));
        assert!(derive_lemma_params(LemmaContext::T11i, 2.0, 4.0, 3.0).is_err());
        assert!(derive_lemma_params(LemmaContext::T13, 2.0, 1.0, 3.5).is_err());
    }

    #[test]
    fn balance_condition_agrees_with_fourth_identity() {
        // The interpolation balance condition and the fourth parameter
        // identity are the same relation up to the factor (alpha - 1):
        // parameters passing one pass the other.
        let cases = [
            (LemmaContext::T11i, 2.0, 4.0, 2.0),
            (LemmaContext::T11ii, 1.7, 1.9, 3.0),
            (LemmaContext::T13, 2.0, 8.0 / 3.0, 3.5),
            (LemmaContext::T145, 1.7, 1.8, 4.0),
        ];
        for (ctx, alpha, beta, s) in cases {
            let p = derive_lemma_params(ctx, alpha, beta, s).unwrap();
            let balance = gn_condition_residual(alpha, s, p.theta, p.r);
            let id4 = lemma_identity_residuals(&p, alpha, beta, s)[3];
            assert!(balance <= 1e-10 && id4 <= 1e-10, "{ctx:?}: {balance} {id4}");
            // Corrupting theta breaks both together.
            let bad = LemmaParams { theta: p.theta + 1e-3, ..p };
            let balance = gn_condition_residual(alpha, s, bad.theta, bad.r);
            let id4 = lemma_identity_residuals(&bad, alpha, beta, s)[3];
            assert!(balance > 1e-6 && id4 > 1e-6, "{ctx:?}: {balance} {id4}");
        }
    }

    #[test]
    fn epsilon_family_t15_closed_beta_endpoints() {
        // At beta = 3/2 the alpha window (beta/(2 beta - 2), beta]
        // collapses to the empty interval (1.5, 1.5]; the family flags
        // the pair rather than clamping. The upper endpoint beta = 2
        // admits a genuine interval.
        let degenerate = epsilon_family(Theorem::T15, 1.5, 0.1).unwrap();
        assert!(!degenerate.nonempty);
        let fam = epsilon_family(Theorem::T15, 2.0, 0.1).unwrap();
        assert!(fam.nonempty);
        assert!(fam.slack_residuals.iter().all(|r| *r < 1e-10));
    }

    #[test]
    fn epsilon_family_t14() {
        let fam = epsilon_family(Theorem::T14, 1.8, 0.1).unwrap();
        assert!((fam.alpha_lo - 1.8 / 1.6).abs() < 1e-14);
        let hi = (4.0 - 1.0) * 1.8 / ((8.0 - 1.1) * 1.8 + 0.2 - 8.0);
        assert!((fam.alpha_hi - hi).abs() < 1e-14);
        assert!(fam.nonempty);
        assert!(fam.slack_residuals.iter().all(|r| *r < 1e-10));
        // s must sit in the admissible window of the theorem.
        let s_lo = (11.0 * fam.alpha_mid * 1.8 - 10.0 * 1.8 - 2.0 * fam.alpha_mid)
            / (3.0 * (fam.alpha_mid - 1.0) * 1.8);
        assert!(fam.s_mid >= s_lo - 1e-12 && fam.s_mid > 3.0);
    }

    #[test]
    fn epsilon_family_t15() {
        let fam = epsilon_family(Theorem::T15, 2.0, 0.1).unwrap();
        assert!((fam.alpha_lo - 8.0 / 7.8).abs() < 1e-14);
        assert!((fam.alpha_hi - 2.0 / 1.8).abs() < 1e-14);
        assert!(fam.nonempty);
        assert!(fam.slack_residuals.iter().all(|r| *r < 1e-10));
    }

    #[test]
    fn epsilon_families_land_in_the_admissible_sets() {
        // Tuples produced by the epsilon construction must pass the
        // corresponding theorem's own admissibility check.
        for beta in [1.6, 1.75, 1.9] {
            for eps in [0.02, 0.1, 0.2] {
                // Some (beta, eps) pairs fall outside the construction's
                // own epsilon window; those are rejected, not sampled.
                let Ok(fam) = epsilon_family(Theorem::T14, beta, eps) else {
                    continue;
                };
                if !fam.nonempty {
                    continue;
                }
                let alpha = fam.alpha_mid;
                let s = fam.s_mid;
                // Any q with 3/s + 2/q < 1 completes the tuple.
                let q = 2.0 / (1.0 - 3.0 / s) + 1.0;
                let rep = check_spec(&CriterionSpec::t14(alpha, beta, s, q));
                assert!(
                    rep.admissible,
                    "t14 beta={beta} eps={eps}: {:?}",
                    rep.violated
                );
            }
        }
        for beta in [1.6, 1.8, 2.0] {
            for eps in [0.02, 0.1, 0.2] {
                let Ok(fam) = epsilon_family(Theorem::T15, beta, eps) else {
                    continue;
                };
                if !fam.nonempty {
                    continue;
                }
                let alpha = fam.alpha_mid;
                let s = fam.s_mid;
                // The strict scaling slack of the construction leaves room
                // for a finite p; eps/4 of slack means any p above
                // 8/eps works.
                let p = 8.0 / eps + 1.0;
                let rep = check_spec(&CriterionSpec::t15(alpha, beta, p, s));
                assert!(
                    rep.admissible,
                    "t15 beta={beta} eps={eps}: {:?}",
                    rep.violated
                );
            }
        }
    }

    #[test]
    fn epsilon_out_of_range() {
        assert!(epsilon_family(Theorem::T14, 1.8, 0.5).is_err());
        assert!(epsilon_family(Theorem::T15, 2.0, 0.3).is_err());
        assert!(epsilon_family(Theorem::T14, 2.0, 0.1).is_err());
        assert!(epsilon_family(Theorem::T11i, 1.8, 0.1).is_err());
    }

    #[test]
    fn ps_checks() {
        assert!(check_spec(&CriterionSpec::prodi_serrin(f64::INFINITY, 2.0)).admissible);
        assert!(check_spec(&CriterionSpec::prodi_serrin(5.0, 5.0)).admissible);
        let bad = check_spec(&CriterionSpec::prodi_serrin(3.0, f64::INFINITY));
        assert!(!bad.admissible);
        let off = check_spec(&CriterionSpec::prodi_serrin(5.0, 4.0));
        assert!(off.violated.iter().any(|v| v == cond::PS_IDENTITY));
    }

    #[test]
    fn t14_derives_p_and_flags_infinite_s() {
        let rep = check_spec(&CriterionSpec::t14(1.7, 1.8, 20.0, 10.0));
        assert!(rep.admissible, "violations: {:?}", rep.violated);
        let p = rep.derived_p.unwrap();
        assert!((rep.scaling_sum.unwrap() - 2.0).abs() < 1e-14);
        assert!(p >= 1.0);

        let inf_s = check_spec(&CriterionSpec::t14(1.7, 1.8, f64::INFINITY, 3.0));
        assert!(inf_s.admissible, "violations: {:?}", inf_s.violated);
        assert!(inf_s.notes.iter().any(|n| n.contains("boundary: s=inf")));
    }

    #[test]
    fn t15_derives_q() {
        let rep = check_spec(&CriterionSpec::t15(1.6, 1.8, 50.0, 3.5));
        assert!(rep.admissible, "violations: {:?}", rep.violated);
        let q = rep.derived_q.unwrap();
        assert!((3.0 / 3.5 + 2.0 / q - 1.0).abs() < 1e-14);
        assert!(rep.scaling_sum.unwrap() < 2.0);
        let rep3 = check_spec(&CriterionSpec::t15(1.6, 1.8, 50.0, 3.0));
        assert!(rep3.admissible);
        assert!(rep3.derived_q.unwrap().is_infinite());
    }
}
