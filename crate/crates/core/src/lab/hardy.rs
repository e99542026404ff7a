use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{argument, Result};
use crate::fields::CutoffWindow;
use crate::measure::{ball_volume, sphere_area};
use crate::quadrature::{composite, radial_edges, QuadratureSpec};

/// `((m-1)^{1/m} + (m-1)^{-(m-1)/m}) ω_m^{1/m}`: the factor in
/// `‖f/|·|‖_{1,∞} <= coeff·‖f‖_{m/(m-1),∞}`.
pub fn hardy_coefficient(m: usize) -> f64 {
    let k = m as f64 - 1.0;
    let mf = m as f64;
    (k.powf(1.0 / mf) + k.powf(-k / mf)) * ball_volume(m).powf(1.0 / mf)
}

/// The same coefficient written as `√π m / (Γ((m+2)/2)^{1/m} (m-1)^{1-1/m})`.
pub fn hardy_coefficient_closed_form(m: usize) -> f64 {
    let mf = m as f64;
    std::f64::consts::PI.sqrt() * mf
        / (gamma((mf + 2.0) / 2.0).powf(1.0 / mf) * (mf - 1.0).powf(1.0 - 1.0 / mf))
}

/// One term `amplitude·χ(r/scale)` of a [`RadialBump`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpTerm {
    pub amplitude: f64,
    pub window: CutoffWindow,
    pub scale: f64,
}

/// A smooth, compactly supported radial function on `R^m` built from cutoff
/// windows. Signed amplitudes give non-monotone profiles.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RadialBump {
    pub terms: Vec<BumpTerm>,
}

impl RadialBump {
    pub fn new(terms: Vec<BumpTerm>) -> Result<Self> {
        if terms
            .iter()
            .any(|t| !(t.scale > 0.0) || !t.amplitude.is_finite())
        {
            return Err(argument(
                "bump terms need a positive scale and finite amplitude",
            ));
        }
        Ok(Self { terms })
    }

    /// The single window `χ_n`.
    pub fn cutoff(n: f64) -> Result<Self> {
        Self::new(vec![BumpTerm {
            amplitude: 1.0,
            window: CutoffWindow::new(n)?,
            scale: 1.0,
        }])
    }

    pub fn value(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * t.window.value(r / t.scale))
            .sum()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * t.window.derivative(r / t.scale) / t.scale)
            .sum()
    }

    pub fn support(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.scale * t.window.outer())
            .fold(0.0, f64::max)
    }

    /// `u(·/λ)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.terms
                .iter()
                .map(|t| BumpTerm {
                    scale: t.scale * lambda,
                    ..*t
                })
                .collect(),
        )
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.terms
            .iter()
            .flat_map(|t| [t.scale * t.window.inner, t.scale * t.window.outer()])
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardyL1Report {
    pub m: usize,
    /// `∫ |u|/|x|`
    pub lhs: f64,
    /// `(m-1)^{-1} ∫ |∇u|`
    pub rhs: f64,
    /// `rhs - lhs`
    pub margin: f64,
}

/// Both sides of the `L¹` Hardy inequality `∫|u|/|x| <= (m-1)^{-1} ∫|∇u|`
/// for a radial bump, by radial quadrature. Radially decreasing bumps give
/// equality.
pub fn hardy_l1_check(m: usize, u: &RadialBump, quad: &QuadratureSpec) -> Result<HardyL1Report> {
    if m < 2 {
        return Err(argument("the L¹ Hardy inequality needs m >= 2"));
    }
    quad.validate()?;
    let support = u.support();
    if support == 0.0 {
        return Ok(HardyL1Report {
            m,
            lhs: 0.0,
            rhs: 0.0,
            margin: 0.0,
        });
    }
    let edges = radial_edges(support, quad.panels, &u.breakpoints());
    let k = m as i32;
    let s = sphere_area(m);
    let lhs = s * composite(|r| u.value(r).abs() * r.powi(k - 2), &edges);
    let rhs = s / (m as f64 - 1.0) * composite(|r| u.derivative(r).abs() * r.powi(k - 1), &edges);
    Ok(HardyL1Report {
        m,
        lhs,
        rhs,
        margin: rhs - lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_in_three_dimensions() {
        let c = hardy_coefficient(3);
        assert!((c - (9.0 * std::f64::consts::PI).powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn coefficient_forms_agree() {
        for m in 3..=8 {
            let (a, b) = (hardy_coefficient(m), hardy_coefficient_closed_form(m));
            assert!((a - b).abs() < 1e-12 * a, "m = {m}");
        }
    }

    #[test]
    fn decreasing_bump_is_an_equality_case() {
        let r = hardy_l1_check(
            3,
            &RadialBump::cutoff(10.0).unwrap(),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(r.margin.abs() < 1e-10 * r.rhs, "{r:?}");
        // ∫|u|/|x| over R³ for χ_10: 4π(50 + ∫_10^12 χ r dr)
        assert!(r.lhs > 4.0 * std::f64::consts::PI * 50.0);
    }

    #[test]
    fn zero_bump() {
        let r = hardy_l1_check(3, &RadialBump::default(), &QuadratureSpec::default()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.margin), (0.0, 0.0, 0.0));
    }

    #[test]
    fn dilation_scales_both_sides() {
        let quad = QuadratureSpec::default();
        let u = RadialBump::new(vec![
            BumpTerm {
                amplitude: 1.0,
                window: CutoffWindow::new(4.0).unwrap(),
                scale: 1.0,
            },
            BumpTerm {
                amplitude: -0.7,
                window: CutoffWindow::new(1.0).unwrap(),
                scale: 0.5,
            },
        ])
        .unwrap();
        let a = hardy_l1_check(4, &u, &quad).unwrap();
        let b = hardy_l1_check(4, &u.dilate(3.0).unwrap(), &quad).unwrap();
        let f = 3f64.powi(3);
        assert!((b.lhs - f * a.lhs).abs() < 1e-9 * b.lhs);
        assert!((b.rhs - f * a.rhs).abs() < 1e-9 * b.rhs);
        assert!(a.margin > 0.0 && b.margin > 0.0);
    }
}
