use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::loss_yau;
use crate::measure::lp_norm;
use crate::quadrature::QuadratureSpec;

fn check_domain(p: f64) -> Result<()> {
    if p > 1.0 && p < 3.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            p,
            lo: 1.0,
            hi: 3.0,
        })
    }
}

/// `p* = 3p/(3-p)`.
fn sobolev_exponent(p: f64) -> f64 {
    3.0 * p / (3.0 - p)
}

/// Closed-form lower bound on the optimal Dirac–Sobolev constant `C(p)` in
/// `R³`, obtained from the Loss–Yau mode by weakening both integrals:
///
/// `π^{-1/3} 2^{-2-1/p} 3^{-1/3-1/p} p^{-1/3} (4p-3)^{1/p} / (p-1)^{1/p-1/3}`.
///
/// It blows up as `p ↓ 1`.
pub fn copt_lower_bound_closed_form(p: f64) -> Result<f64> {
    check_domain(p)?;
    let ip = 1.0 / p;
    Ok(PI.powf(-1.0 / 3.0)
        * 2f64.powf(-2.0 - ip)
        * 3f64.powf(-1.0 / 3.0 - ip)
        * p.powf(-1.0 / 3.0)
        * (4.0 * p - 3.0).powf(ip)
        / (p - 1.0).powf(ip - 1.0 / 3.0))
}

/// `4π 2^{-p*} (2p) / (9(p-1))`, a lower bound for `‖ψ‖_{p*}^{p*}`.
pub fn zero_mode_lp_norm_lower_bound(p: f64) -> Result<f64> {
    check_domain(p)?;
    let ps = sobolev_exponent(p);
    Ok(4.0 * PI * 2f64.powf(-ps) * 2.0 * p / (9.0 * (p - 1.0)))
}

/// `16π 3^{p-1} p/(4p-3)`, an upper bound for `‖(σ·p)ψ‖_p^p`.
pub fn dirac_lp_norm_upper_bound(p: f64) -> Result<f64> {
    check_domain(p)?;
    Ok(16.0 * PI * 3f64.powf(p - 1.0) * p / (4.0 * p - 3.0))
}

/// `‖ψ‖_{p*} / ‖(σ·p)ψ‖_p` for the Loss–Yau mode in `R³`, both integrals by
/// radial quadrature.
pub fn strong_sobolev_ratio(p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_domain(p)?;
    let psi = loss_yau(3)?;
    let num = lp_norm(&psi, sobolev_exponent(p), quad)?;
    let den = lp_norm(&psi.dirac_image().expect("analytic"), p, quad)?;
    Ok(num / den)
}

/// Optimal constant `C̃(p)` of the classical Sobolev inequality in `R³`:
///
/// `π^{-1/2} 3^{-1/p} ((p-1)/(3-p))^{(p-1)/p} {Γ(5/2)Γ(3) / (Γ(3/p)Γ(4-3/p))}^{1/3}`.
pub fn sobolev_optimal_constant(p: f64) -> Result<f64> {
    check_domain(p)?;
    let ratio = gamma(2.5) * gamma(3.0) / (gamma(3.0 / p) * gamma(4.0 - 3.0 / p));
    Ok(PI.powf(-0.5)
        * 3f64.powf(-1.0 / p)
        * ((p - 1.0) / (3.0 - p)).powf((p - 1.0) / p)
        * ratio.powf(1.0 / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub p: f64,
    pub p_star: f64,
    /// Closed-form lower bound on `C(p)`.
    pub lower_bound: f64,
    /// Quadrature value of the Loss–Yau ratio; never below `lower_bound`.
    pub ratio: f64,
    /// Classical Sobolev constant `C̃(p)`.
    pub sobolev: f64,
    /// `lower_bound / sobolev`
    pub contrast: f64,
    pub dominates: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub rows: Vec<ConstantRow>,
    /// Every row has `ratio >= lower_bound`.
    pub all_dominate: bool,
    /// Lower bound and contrast both strictly increase as `p` decreases
    /// across the grid.
    pub blowup_toward_one: bool,
}

pub fn constant_report(p_grid: &[f64], quad: &QuadratureSpec) -> Result<ConstantReport> {
    let rows: Vec<ConstantRow> = p_grid
        .par_iter()
        .map(|&p| {
            let lower_bound = copt_lower_bound_closed_form(p)?;
            let ratio = strong_sobolev_ratio(p, quad)?;
            let sobolev = sobolev_optimal_constant(p)?;
            Ok(ConstantRow {
                p,
                p_star: sobolev_exponent(p),
                lower_bound,
                ratio,
                sobolev,
                contrast: lower_bound / sobolev,
                dominates: ratio >= lower_bound,
            })
        })
        .collect::<Result<_>>()?;
    let mut by_p: Vec<&ConstantRow> = rows.iter().collect();
    by_p.sort_by(|a, b| a.p.total_cmp(&b.p));
    let blowup_toward_one = by_p.len() >= 2
        && by_p
            .windows(2)
            .all(|w| w[0].lower_bound > w[1].lower_bound && w[0].contrast > w[1].contrast);
    Ok(ConstantReport {
        all_dominate: rows.iter().all(|r| r.dominates),
        blowup_toward_one,
        rows,
    })
}
