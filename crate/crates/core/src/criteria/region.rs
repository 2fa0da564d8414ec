//! Admissibility-region sampling over the (alpha, beta) plane, with CSV
//! and SVG export of the two one-component domains.

use super::{check_spec, CriterionSpec, Theorem};
use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Membership lattice over [1, alpha_max] x [1, beta_max].
#[derive(Debug, Clone)]
pub struct RegionSample {
    pub theorem: Theorem,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Row-major over beta: member[j * alphas.len() + i] for (alpha_i, beta_j).
    pub member: Vec<bool>,
}

/// Classifies a lattice of (alpha, beta) points via the admissibility
/// checker. The lattice starts at 1 on both axes with the given step.
pub fn region_sample(
    theorem: Theorem,
    alpha_max: f64,
    beta_max: f64,
    step: f64,
) -> Result<RegionSample> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step = {step} must be positive and finite")));
    }
    if !(alpha_max.is_finite() && beta_max.is_finite() && alpha_max >= 1.0 && beta_max >= 1.0) {
        return Err(Error::invalid("bounds must be finite and >= 1".to_string()));
    }
    if !matches!(theorem, Theorem::T11i | Theorem::T11ii) {
        return Err(Error::invalid(
            "region sampling covers the sup-in-time theorems t11i and t11ii".to_string(),
        ));
    }

    let axis = |max: f64| -> Vec<f64> {
        let count = ((max - 1.0) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| 1.0 + i as f64 * step).collect()
    };
    let alphas = axis(alpha_max);
    let betas = axis(beta_max);

    let mut member = Vec::with_capacity(alphas.len() * betas.len());
    for &beta in &betas {
        for &alpha in &alphas {
            let spec = match theorem {
                Theorem::T11i => CriterionSpec::t11i(alpha, beta),
                Theorem::T11ii => CriterionSpec::t11ii(alpha, beta),
                _ => unreachable!(),
            };
            member.push(check_spec(&spec).admissible);
        }
    }

    Ok(RegionSample {
        theorem,
        alphas,
        betas,
        member,
    })
}

impl RegionSample {
    /// Membership of the lattice point nearest to (alpha, beta), if one
    /// lies within half a step.
    pub fn membership(&self, alpha: f64, beta: f64) -> Option<bool> {
        let find = |axis: &[f64], x: f64| -> Option<usize> {
            let step = if axis.len() > 1 { axis[1] - axis[0] } else { 1.0 };
            let i = ((x - axis[0]) / step).round();
            if i < 0.0 || i as usize >= axis.len() {
                return None;
            }
            let i = i as usize;
            ((axis[i] - x).abs() <= 0.5 * step).then_some(i)
        };
        let i = find(&self.alphas, alpha)?;
        let j = find(&self.betas, beta)?;
        Some(self.member[j * self.alphas.len() + i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# admissible region of theorem {} on the periodic-box toolkit",
            self.theorem.name()
        );
        out.push_str("alpha,beta,member\n");
        for (j, &beta) in self.betas.iter().enumerate() {
            for (i, &alpha) in self.alphas.iter().enumerate() {
                let m = u8::from(self.member[j * self.alphas.len() + i]);
                let _ = writeln!(out, "{alpha},{beta},{m}");
            }
        }
        out
    }

    /// Unit-square SVG with axis labels, the shaded admissible cells and
    /// polyline segments along the membership boundary.
    pub fn to_svg(&self) -> String {
        let na = self.alphas.len();
        let nb = self.betas.len();
        let a_min = self.alphas[0];
        let a_max = *self.alphas.last().unwrap();
        let b_min = self.betas[0];
        let b_max = *self.betas.last().unwrap();
        // Plot area inside the unit square, y growing upward.
        let (x0, x1, y0, y1) = (0.12, 0.96, 0.90, 0.08);
        let fx = |a: f64| x0 + (a - a_min) / (a_max - a_min).max(1e-12) * (x1 - x0);
        let fy = |b: f64| y0 + (b - b_min) / (b_max - b_min).max(1e-12) * (y1 - y0);
        let at = |i: usize, j: usize| self.member[j * na + i];

        let mut svg = String::new();
        svg.push_str(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" \
             preserveAspectRatio=\"xMidYMid meet\">\n",
        );
        let _ = writeln!(
            svg,
            "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>"
        );

        // Shaded admissible cells.
        svg.push_str("<g fill=\"#7aa6d6\" fill-opacity=\"0.55\" stroke=\"none\">\n");
        let ha = if na > 1 { self.alphas[1] - self.alphas[0] } else { 1.0 };
        let hb = if nb > 1 { self.betas[1] - self.betas[0] } else { 1.0 };
        for j in 0..nb {
            for i in 0..na {
                if at(i, j) {
                    let xa = fx(self.alphas[i] - 0.5 * ha);
                    let xb = fx(self.alphas[i] + 0.5 * ha);
                    let ya = fy(self.betas[j] + 0.5 * hb);
                    let yb = fy(self.betas[j] - 0.5 * hb);
                    let _ = writeln!(
                        svg,
                        "<rect x=\"{:.5}\" y=\"{:.5}\" width=\"{:.5}\" height=\"{:.5}\"/>",
                        xa.min(xb),
                        ya.min(yb),
                        (xb - xa).abs(),
                        (yb - ya).abs()
                    );
                }
            }
        }
        svg.push_str("</g>\n");

        // Boundary polyline segments between member and non-member cells.
        svg.push_str("<g stroke=\"#1f4e79\" stroke-width=\"0.004\" fill=\"none\">\n");
        let mut seg = |xa: f64, ya: f64, xb: f64, yb: f64| {
            let _ = writeln!(
                svg,
                "<line x1=\"{xa:.5}\" y1=\"{ya:.5}\" x2=\"{xb:.5}\" y2=\"{yb:.5}\"/>"
            );
        };
        for j in 0..nb {
            for i in 0..na {
                if !at(i, j) {
                    continue;
                }
                let (a, b) = (self.alphas[i], self.betas[j]);
                // Vertical edges.
                if i + 1 >= na || !at(i + 1, j) {
                    seg(
                        fx(a + 0.5 * ha),
                        fy(b - 0.5 * hb),
                        fx(a + 0.5 * ha),
                        fy(b + 0.5 * hb),
                    );
                }
                if i == 0 || !at(i - 1, j) {
                    seg(
                        fx(a - 0.5 * ha),
                        fy(b - 0.5 * hb),
                        fx(a - 0.5 * ha),
                        fy(b + 0.5 * hb),
                    );
                }
                // Horizontal edges.
                if j + 1 >= nb || !at(i, j + 1) {
                    seg(
                        fx(a - 0.5 * ha),
                        fy(b + 0.5 * hb),
                        fx(a + 0.5 * ha),
                        fy(b + 0.5 * hb),
                    );
                }
                if j == 0 || !at(i, j - 1) {
                    seg(
                        fx(a - 0.5 * ha),
                        fy(b - 0.5 * hb),
                        fx(a + 0.5 * ha),
                        fy(b - 0.5 * hb),
                    );
                }
            }
        }
        svg.push_str("</g>\n");

        // Axes and labels.
        svg.push_str("<g stroke=\"black\" stroke-width=\"0.003\">\n");
        let _ = writeln!(svg, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\"/>");
        let _ = writeln!(svg, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/>");
        svg.push_str("</g>\n");
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.045\">\u{03b1}</text>",
            0.5 * (x0 + x1),
            y0 + 0.07
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.045\">\u{03b2}</text>",
            x0 - 0.08,
            0.5 * (y0 + y1)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.03\">{} ({} x {} lattice)</text>",
            x0,
            y1 - 0.03,
            self.theorem.name(),
            na,
            nb
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.03\">{}</text>",
            x0 - 0.01,
            y0 + 0.04,
            a_min
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.03\">{}</text>",
            x1 - 0.02,
            y0 + 0.04,
            a_max
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"0.03\">{}</text>",
            x0 - 0.08,
            y1 + 0.01,
            b_max
        );
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_reference_points() {
        let r1 = region_sample(Theorem::T11i, 6.0, 6.0, 0.05).unwrap();
        assert_eq!(r1.membership(1.0, 3.0), Some(true));
        assert_eq!(r1.membership(3.0, 3.0), Some(true));
        assert_eq!(r1.membership(3.0, 2.0), Some(false));

        let r2 = region_sample(Theorem::T11ii, 6.0, 6.0, 0.05).unwrap();
        assert_eq!(r2.membership(1.5, 1.8), Some(true));
        assert_eq!(r2.membership(1.2, 1.4), Some(false));
    }

    #[test]
    fn refinement_agrees_on_shared_points() {
        let coarse = region_sample(Theorem::T11ii, 3.0, 3.0, 0.1).unwrap();
        let fine = region_sample(Theorem::T11ii, 3.0, 3.0, 0.05).unwrap();
        for (j, &beta) in coarse.betas.iter().enumerate() {
            for (i, &alpha) in coarse.alphas.iter().enumerate() {
                let c = coarse.member[j * coarse.alphas.len() + i];
                assert_eq!(
                    fine.membership(alpha, beta),
                    Some(c),
                    "disagreement at ({alpha}, {beta})"
                );
            }
        }
    }

    #[test]
    fn csv_and_svg_render() {
        let r = region_sample(Theorem::T11i, 4.0, 4.0, 0.5).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("# admissible region"));
        assert!(csv.contains("alpha,beta,member"));
        assert_eq!(csv.lines().count(), 2 + r.alphas.len() * r.betas.len());
        let svg = r.to_svg();
        assert!(svg.contains("<svg"));
        assert!(svg.contains("\u{3b1}"));
        assert!(svg.contains("<line"));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(region_sample(Theorem::T11i, 6.0, 6.0, 0.0).is_err());
        assert!(region_sample(Theorem::T13, 6.0, 6.0, 0.1).is_err());
        assert!(region_sample(Theorem::T11i, f64::INFINITY, 6.0, 0.1).is_err());
    }
}
