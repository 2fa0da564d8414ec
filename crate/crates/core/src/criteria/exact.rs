//! Exact rational-arithmetic mirror of the exponent algebra.
//!
//! Every admissibility check, derived exponent and identity residual of
//! the float path is reimplemented here over arbitrary-precision
//! rationals with an explicit point at infinity. On rational inputs the
//! two implementations must agree; the identity residuals here are exact
//! zeros, not small floats.

use super::{cond, LemmaContext, Theorem};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Extended rational: a finite rational or +infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum XR {
    Fin(BigRational),
    Inf,
}

impl XR {
    pub fn from_int(n: i64) -> Self {
        XR::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        XR::Fin(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XR::Fin(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            XR::Fin(r) => Some(r),
            XR::Inf => None,
        }
    }

    /// Reciprocal with 1/inf = 0; only valid for positive values.
    pub fn recip(&self) -> BigRational {
        match self {
            XR::Fin(r) => {
                assert!(r.is_positive(), "recip of a non-positive exponent");
                r.recip()
            }
            XR::Inf => BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            XR::Fin(r) => r.to_f64().unwrap_or(f64::NAN),
            XR::Inf => f64::INFINITY,
        }
    }

    /// Parses "inf", a fraction "n/d" or a decimal literal, all exact.
    pub fn parse(text: &str) -> Result<XR> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(XR::Inf);
        }
        if let Some((n, d)) = t.split_once('/') {
            let num: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad numerator in '{text}'")))?;
            let den: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad denominator in '{text}'")))?;
            if den.is_zero() {
                return Err(Error::invalid(format!("zero denominator in '{text}'")));
            }
            return Ok(XR::Fin(BigRational::new(num, den)));
        }
        // Decimal literal: mantissa / 10^k, exact.
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, t),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::invalid(format!("cannot parse '{text}' as a rational")));
        }
        let digits = format!("{int_part}{frac_part}");
        let mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits
                .parse()
                .map_err(|_| Error::invalid(format!("cannot parse '{text}' as a rational")))?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(XR::Fin(BigRational::new(BigInt::from(sign) * mantissa, den)))
    }
}

impl fmt::Display for XR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XR::Fin(r) => write!(f, "{r}"),
            XR::Inf => write!(f, "inf"),
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ge_one(x: &XR) -> bool {
    match x {
        XR::Fin(r) => *r >= rat(1),
        XR::Inf => true,
    }
}

/// x <= y on the extended positive rationals.
fn le(x: &XR, y: &XR) -> bool {
    match (x, y) {
        (XR::Fin(a), XR::Fin(b)) => a <= b,
        (_, XR::Inf) => true,
        (XR::Inf, XR::Fin(_)) => false,
    }
}

fn lt(x: &XR, y: &XR) -> bool {
    le(x, y) && x != y
}

/// Mirror of the criterion spec with exact exponents.
#[derive(Debug, Clone)]
pub struct ExactSpec {
    pub theorem: Theorem,
    pub alpha: Option<XR>,
    pub beta: Option<XR>,
    pub s: Option<XR>,
    pub q: Option<XR>,
    pub p: Option<XR>,
}

/// Exact admissibility outcome with the derived exponents.
#[derive(Debug, Clone)]
pub struct ExactReport {
    pub admissible: bool,
    pub violated: Vec<String>,
    pub derived_beta: Option<XR>,
    pub derived_p: Option<XR>,
    pub derived_q: Option<XR>,
    pub lemma: Option<ExactLemmaParams>,
    pub scaling_sum: Option<BigRational>,
}

/// Exact lemma parameter tuple; t is infinite on the theta = 0 branch.
#[derive(Debug, Clone)]
pub struct ExactLemmaParams {
    pub r: BigRational,
    pub theta: BigRational,
    pub a: BigRational,
    pub t: XR,
    pub context: LemmaContext,
}

/// 1/alpha + 2/beta + 2/p with exact reciprocals.
pub fn scaling_sum_exact(alpha: &XR, beta: &XR, p: &XR) -> BigRational {
    alpha.recip() + rat(2) * beta.recip() + rat(2) * p.recip()
}

/// Derived (beta, p) of the quasi-critical theorem.
pub fn t13_derived_exact(alpha: &BigRational, s: &BigRational) -> (XR, XR) {
    let denom = (rat(11) * alpha - rat(10)) - rat(3) * s * (alpha - rat(1));
    let beta = if denom.is_zero() || denom.is_negative() {
        XR::Inf
    } else {
        XR::Fin(rat(2) * alpha / denom)
    };
    let pd = rat(3) * (alpha - rat(1)) * (s - rat(3));
    let p = if pd.is_zero() {
        XR::Inf
    } else {
        XR::Fin(rat(2) * alpha / pd)
    };
    (beta, p)
}

/// Exact admissibility check mirroring the float `check_spec`.
pub fn check_spec_exact(spec: &ExactSpec) -> ExactReport {
    let mut violated = Vec::new();
    let mut derived_beta = None;
    let mut derived_p = None;
    let mut derived_q = None;
    let mut lemma = None;
    let mut sum = None;

    let need = |x: &Option<XR>, violated: &mut Vec<String>| -> Option<XR> {
        match x {
            Some(v) if ge_one(v) => Some(v.clone()),
            Some(_) => {
                violated.push(cond::EXP_RANGE.to_string());
                None
            }
            None => {
                violated.push(cond::MISSING.to_string());
                None
            }
        }
    };

    match spec.theorem {
        Theorem::Ps => {
            let s = need(&spec.s, &mut violated);
            let t = need(&spec.q, &mut violated);
            if let (Some(s), Some(t)) = (s, t) {
                if !lt(&XR::from_int(3), &s) {
                    violated.push(cond::S_GT_3.to_string());
                }
                if rat(2) * t.recip() + rat(3) * s.recip() != rat(1) {
                    violated.push(cond::PS_IDENTITY.to_string());
                }
            }
        }
        Theorem::T11i => {
            let alpha = need(&spec.alpha, &mut violated);
            let beta = need(&spec.beta, &mut violated);
            if let (Some(alpha), Some(beta)) = (alpha, beta) {
                if !le(&alpha, &beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !lt(&XR::from_int(2), &beta) {
                    violated.push(cond::BETA_GT_2.to_string());
                }
                if violated.is_empty() {
                    if let (XR::Fin(a), XR::Fin(b)) = (&alpha, &beta) {
                        lemma = derive_lemma_params_exact(LemmaContext::T11i, a, b, &rat(2)).ok();
                    }
                }
            }
        }
        Theorem::T11ii => {
            let alpha = need(&spec.alpha, &mut violated);
            let beta = need(&spec.beta, &mut violated);
            if let (Some(alpha), Some(beta)) = (alpha, beta) {
                if alpha.recip() + rat(2) * beta.recip() >= rat(2) {
                    violated.push(cond::SCALING_LT_2.to_string());
                }
                if !lt(&XR::from_int(1), &alpha) {
                    violated.push(cond::ALPHA_GT_1.to_string());
                }
                if !le(&alpha, &beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !lt(&XR::ratio(3, 2), &beta) {
                    violated.push(cond::BETA_GT_3_2.to_string());
                }
                if !le(&beta, &XR::from_int(2)) {
                    violated.push(cond::BETA_LE_2.to_string());
                }
                if violated.is_empty() {
                    if let (XR::Fin(a), XR::Fin(b)) = (&alpha, &beta) {
                        lemma = derive_lemma_params_exact(LemmaContext::T11ii, a, b, &rat(3)).ok();
                    }
                }
            }
        }
        Theorem::T13 => {
            let alpha = need(&spec.alpha, &mut violated);
            let s = need(&spec.s, &mut violated);
            if let (Some(alpha), Some(s)) = (alpha, s) {
                if !lt(&XR::from_int(1), &alpha) {
                    violated.push(cond::ALPHA_GT_1.to_string());
                }
                if !alpha.is_finite() {
                    violated.push(cond::ALPHA_FINITE.to_string());
                }
                if violated.is_empty() {
                    let a = alpha.finite().unwrap();
                    let lower_raw = (rat(11) * a - rat(12)) / (rat(3) * (a - rat(1)));
                    let lower = if lower_raw > rat(3) { lower_raw } else { rat(3) };
                    let upper = (rat(11) * a - rat(10)) / (rat(3) * (a - rat(1)));
                    if !lt(&XR::Fin(lower), &s) {
                        violated.push(cond::S_GT_LOWER_T13.to_string());
                    }
                    if !le(&s, &XR::Fin(upper)) {
                        violated.push(cond::S_LE_UPPER_T13.to_string());
                    }
                }
                if violated.is_empty() {
                    let a = alpha.finite().unwrap();
                    let sv = s.finite().unwrap();
                    let (beta, p) = t13_derived_exact(a, sv);
                    sum = Some(scaling_sum_exact(&alpha, &beta, &p));
                    if let XR::Fin(b) = &beta {
                        lemma = derive_lemma_params_exact(LemmaContext::T13, a, b, sv).ok();
                    }
                    derived_beta = Some(beta);
                    derived_p = Some(p);
                }
            }
        }
        Theorem::T14 => {
            let alpha = need(&spec.alpha, &mut violated);
            let beta = need(&spec.beta, &mut violated);
            let s = need(&spec.s, &mut violated);
            let q = need(&spec.q, &mut violated);
            if let (Some(alpha), Some(beta), Some(s), Some(q)) = (alpha, beta, s, q) {
                if rat(3) * s.recip() + rat(2) * q.recip() >= rat(1) {
                    violated.push(cond::QUASI_PS_U3.to_string());
                }
                if !lt(&XR::ratio(3, 2), &beta) {
                    violated.push(cond::BETA_GT_3_2.to_string());
                }
                if !lt(&beta, &XR::from_int(2)) {
                    violated.push(cond::BETA_LT_2.to_string());
                }
                if let XR::Fin(b) = &beta {
                    if *b > rat(1) {
                        let lower = b / (rat(2) * b - rat(2));
                        if !lt(&XR::Fin(lower), &alpha) {
                            violated.push(cond::ALPHA_GT_LOWER.to_string());
                        }
                        if !le(&alpha, &beta) {
                            violated.push(cond::ALPHA_LE_BETA.to_string());
                        }
                        if let XR::Fin(a) = &alpha {
                            if *a > rat(1) {
                                let s_lo = (rat(11) * a * b - rat(10) * b - rat(2) * a)
                                    / (rat(3) * (a - rat(1)) * b);
                                if !le(&XR::Fin(s_lo), &s) {
                                    violated.push(cond::S_GE_LOWER_T14.to_string());
                                }
                            }
                        }
                    }
                }
                if violated.is_empty() {
                    let partial = alpha.recip() + rat(2) * beta.recip();
                    if partial < rat(2) {
                        let p = XR::Fin(rat(2) / (rat(2) - partial));
                        sum = Some(scaling_sum_exact(&alpha, &beta, &p));
                        derived_p = Some(p);
                    }
                    if let (XR::Fin(a), XR::Fin(b), XR::Fin(sv)) = (&alpha, &beta, &s) {
                        lemma = derive_lemma_params_exact(LemmaContext::T145, a, b, sv).ok();
                    }
                }
            }
        }
        Theorem::T15 => {
            let alpha = need(&spec.alpha, &mut violated);
            let beta = need(&spec.beta, &mut violated);
            let p = need(&spec.p, &mut violated);
            let s = need(&spec.s, &mut violated);
            if let (Some(alpha), Some(beta), Some(p), Some(s)) = (alpha, beta, p, s) {
                if alpha.recip() + rat(2) * beta.recip() + rat(2) * p.recip() >= rat(2) {
                    violated.push(cond::SCALING_FULL_LT_2.to_string());
                }
                if !le(&XR::ratio(3, 2), &beta) {
                    violated.push(cond::BETA_GE_3_2.to_string());
                }
                if !le(&beta, &XR::from_int(2)) {
                    violated.push(cond::BETA_LE_2.to_string());
                }
                if let XR::Fin(b) = &beta {
                    if *b > rat(1) {
                        let lower = b / (rat(2) * b - rat(2));
                        if !lt(&XR::Fin(lower), &alpha) {
                            violated.push(cond::ALPHA_GT_LOWER.to_string());
                        }
                    }
                }
                if !le(&alpha, &beta) {
                    violated.push(cond::ALPHA_LE_BETA.to_string());
                }
                if !le(&XR::from_int(3), &s) {
                    violated.push(cond::S_GE_3.to_string());
                }
                match (&alpha, &s) {
                    (XR::Fin(a), XR::Fin(sv)) if *a > rat(1) => {
                        if let XR::Fin(b) = &beta {
                            let s_hi = (rat(9) * a * b - rat(6) * b - rat(6) * a)
                                / ((a - rat(1)) * b);
                            if !(*sv <= s_hi) {
                                violated.push(cond::S_LE_UPPER_T15.to_string());
                            }
                        }
                    }
                    (_, XR::Inf) => violated.push(cond::S_LE_UPPER_T15.to_string()),
                    _ => {}
                }
                if violated.is_empty() {
                    let sv = s.finite().unwrap();
                    derived_q = Some(if *sv > rat(3) {
                        XR::Fin(rat(2) * sv / (sv - rat(3)))
                    } else {
                        XR::Inf
                    });
                    sum = Some(scaling_sum_exact(&alpha, &beta, &p));
                    if let (XR::Fin(a), XR::Fin(b)) = (&alpha, &beta) {
                        lemma = derive_lemma_params_exact(LemmaContext::T145, a, b, sv).ok();
                    }
                }
            }
        }
    }

    ExactReport {
        admissible: violated.is_empty(),
        violated,
        derived_beta,
        derived_p,
        derived_q,
        lemma,
        scaling_sum: sum,
    }
}

/// Exact closed-form lemma parameters for one proof context.
pub fn derive_lemma_params_exact(
    context: LemmaContext,
    alpha: &BigRational,
    beta: &BigRational,
    s: &BigRational,
) -> Result<ExactLemmaParams> {
    let one = rat(1);
    let (r, theta, a, t) = match context {
        LemmaContext::T11i => {
            if *s != rat(2) {
                return Err(Error::precondition("context t11i fixes s = 2"));
            }
            let r = beta * (rat(3) * alpha - rat(2)) / (alpha * (beta + &one) - beta);
            let a = (alpha * beta + alpha - beta) / (alpha * beta - beta);
            if alpha == beta {
                (r, BigRational::zero(), a, XR::Inf)
            } else {
                let theta = (beta - alpha) / (rat(2) * alpha * beta - alpha - beta);
                let t = beta * (alpha * beta + alpha - beta) / (beta - alpha);
                (r, theta, a, XR::Fin(t))
            }
        }
        LemmaContext::T11ii => {
            if *s != rat(3) {
                return Err(Error::precondition("context t11ii fixes s = 3"));
            }
            let r = beta * (rat(4) * alpha - rat(3)) / (alpha * (beta + &one) - beta);
            let a = (alpha * beta + alpha - beta) / (alpha * beta - beta);
            if alpha == beta {
                (r, BigRational::zero(), a, XR::Inf)
            } else {
                let theta = (beta - alpha) / (rat(3) * alpha * beta - alpha - rat(2) * beta);
                let t = beta * (alpha * beta + alpha - beta) / (beta - alpha);
                (r, theta, a, XR::Fin(t))
            }
        }
        LemmaContext::T13 => {
            let u = rat(3) * s * (alpha - &one);
            let d13 = rat(13) * alpha - rat(12) - &u;
            let d11 = rat(11) * alpha - rat(10) - &u;
            let d12 = &u - (rat(11) * alpha - rat(12));
            if d11.is_zero() {
                return Err(Error::precondition(
                    "s at the right endpoint gives beta=inf",
                ));
            }
            let r = (rat(2) * s * (alpha - &one) + rat(2) * alpha) / &d13;
            let theta = &d12 / (rat(5) * s * (alpha - &one) - rat(11) * alpha + rat(12));
            let a = &d13 / (rat(2) * (alpha - &one));
            let t = rat(2) * alpha * &d13 / (&d11 * &d12);
            (r, theta, a, XR::Fin(t))
        }
        LemmaContext::T145 => {
            let r = (s * alpha + alpha - s) * beta / (alpha * beta + alpha - beta);
            let a = (alpha * beta + alpha - beta) / ((alpha - &one) * beta);
            if alpha == beta {
                (r, BigRational::zero(), a, XR::Inf)
            } else {
                let theta = (beta - alpha) / (s * alpha * beta - s * beta - alpha + beta);
                let t = (alpha * beta + alpha - beta) * beta / (beta - alpha);
                (r, theta, a, XR::Fin(t))
            }
        }
    };

    if r <= rat(2) {
        return Err(Error::precondition(format!("derived r = {r} fails 2<r")));
    }
    if theta.is_negative() || theta >= one {
        return Err(Error::precondition(format!(
            "derived theta = {theta} fails 0<=theta<1"
        )));
    }
    if a < one {
        return Err(Error::precondition(format!("derived a = {a} fails 1<=a")));
    }
    if let XR::Fin(tv) = &t {
        if *tv < one {
            return Err(Error::precondition(format!("derived t = {tv} fails 1<=t")));
        }
    }
    Ok(ExactLemmaParams {
        r,
        theta,
        a,
        t,
        context,
    })
}

/// Exact residuals of the four parameter identities; `None` marks the
/// vacuous first identity on the theta = 0 branch.
pub fn lemma_identity_residuals_exact(
    params: &ExactLemmaParams,
    alpha: &BigRational,
    beta: &BigRational,
    s: &BigRational,
) -> [Option<BigRational>; 4] {
    let one = rat(1);
    let r = &params.r;
    let theta = &params.theta;
    let a = &params.a;
    let rm1 = r - &one;

    let id1 = match &params.t {
        XR::Fin(t) => Some(theta * &rm1 * t - beta),
        XR::Inf => None,
    };
    let id2 = Some((&one - theta) * &rm1 * a - s);
    let t_recip = match &params.t {
        XR::Fin(t) => t.recip(),
        XR::Inf => BigRational::zero(),
    };
    let id3 = Some(a.recip() + t_recip - (beta - &one) / beta);
    let id4 = Some(
        (&one - theta) / s + theta * (&one - alpha) / alpha - (alpha - &one) / (alpha * &rm1),
    );
    [id1, id2, id3, id4]
}

/// Exact residual of the slack identity of the epsilon families.
pub fn epsilon_slack_exact(
    theorem: Theorem,
    beta: &BigRational,
    eps: &BigRational,
    alpha: &BigRational,
) -> BigRational {
    let one = rat(1);
    match theorem {
        Theorem::T14 => {
            let s = (alpha * beta - rat(2) * beta + rat(2) * alpha)
                / ((&one - eps) * (alpha - &one) * beta);
            let lhs = rat(3) / &s
                + (rat(3) * alpha * beta * &s - rat(11) * alpha * beta - rat(3) * beta * &s
                    + rat(10) * beta
                    + rat(2) * alpha)
                    / (rat(4) * (alpha - &one) * beta * &s);
            lhs - (&one - eps / rat(4))
        }
        Theorem::T15 => {
            let s = ((&one + eps) * alpha * beta - rat(2) * beta + rat(2) * alpha)
                / ((alpha - &one) * beta);
            let lhs = one.clone() / alpha
                + rat(2) / beta
                + (rat(9) * alpha * beta - alpha * beta * &s + beta * &s
                    - rat(6) * beta
                    - rat(6) * alpha)
                    / (rat(4) * alpha * beta);
            lhs - (rat(2) - eps / rat(4))
        }
        _ => panic!("epsilon slack applies to t14 and t15 only"),
    }
}
