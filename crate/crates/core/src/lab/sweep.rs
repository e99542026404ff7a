use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hardy::hardy_coefficient;
use super::linear_fit;
use crate::error::{argument, Error, Result};
use crate::fields::{apply_cutoff, loss_yau, CutoffWindow, SpinorField};
use crate::measure::{lp_norm, sphere_area, weak_norm};
use crate::quadrature::QuadratureSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: f64,
    /// `‖ψ_n‖_{m/(m-1)}`
    pub lhs: f64,
    /// `‖(γ·p)ψ_n‖_1`
    pub rhs: f64,
    pub ratio: f64,
    /// Set when the row could not be computed; the numbers are then NaN.
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub m: usize,
    pub rows: Vec<SweepRow>,
    /// `lhs^{m/(m-1)}` against `ln n` over rows with `n >= n_max/1000`.
    pub fit: Option<LinearFit>,
    /// Largest `rhs` seen: the empirical envelope for the constant that would
    /// have to bound the strong inequality.
    pub max_rhs: f64,
}

/// `ψ_n = χ_n ψ` for the Loss–Yau mode on `R^m`.
pub fn cutoff_zero_mode(m: usize, n: f64) -> Result<SpinorField> {
    apply_cutoff(&loss_yau(m)?, CutoffWindow::new(n)?)
}

/// `‖(γ·p)ψ‖_1 + 2·S_m·15/16`: the bulk term plus a bound on the cutoff
/// shell, where `|χ'| <= 15/16` on a shell of width 2 and `|ψ| r^{m-1} <= 1`.
pub fn rhs_envelope_bound(m: usize, quad: &QuadratureSpec) -> Result<f64> {
    let bulk = lp_norm(&loss_yau(m)?.dirac_image().expect("analytic"), 1.0, quad)?;
    Ok(bulk + CutoffWindow::WIDTH * sphere_area(m) * CutoffWindow::MAX_SLOPE)
}

fn sweep_row(m: usize, n: f64, quad: &QuadratureSpec) -> Result<SweepRow> {
    let psi = cutoff_zero_mode(m, n)?;
    let lhs = lp_norm(&psi, m as f64 / (m as f64 - 1.0), quad)?;
    let rhs = lp_norm(&psi.dirac_image().expect("analytic"), 1.0, quad)?;
    if !(lhs.is_finite() && rhs.is_finite() && lhs > 0.0 && rhs > 0.0) {
        return Err(Error::Quadrature {
            achieved: lhs.max(rhs),
            requested: f64::MAX,
        });
    }
    Ok(SweepRow {
        n,
        lhs,
        rhs,
        ratio: lhs / rhs,
        note: None,
    })
}

/// Strong `L^{m/(m-1)}` norm of `ψ_n` against the `L¹` norm of its Dirac
/// image for each cutoff radius in `n_list`.
pub fn counterexample_sweep(
    m: usize,
    n_list: &[f64],
    quad: &QuadratureSpec,
) -> Result<SweepReport> {
    loss_yau(m)?;
    quad.validate()?;
    if n_list.is_empty() {
        return Err(argument("the sweep needs at least one cutoff radius"));
    }
    if n_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(argument("cutoff radii must be strictly increasing"));
    }
    if !(n_list[0] >= 4.0) {
        return Err(argument(format!(
            "cutoff radii must be >= 4, got {}",
            n_list[0]
        )));
    }
    let rows: Vec<SweepRow> = n_list
        .par_iter()
        .map(|&n| {
            sweep_row(m, n, quad).unwrap_or_else(|e| SweepRow {
                n,
                lhs: f64::NAN,
                rhs: f64::NAN,
                ratio: f64::NAN,
                note: Some(e.to_string()),
            })
        })
        .collect();
    let n_max = *n_list.last().unwrap();
    let power = m as f64 / (m as f64 - 1.0);
    let window: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.note.is_none() && r.n >= n_max / 1000.0)
        .map(|r| (r.n.ln(), r.lhs.powf(power)))
        .collect();
    let fit = linear_fit(&window).ok();
    let max_rhs = rows
        .iter()
        .filter(|r| r.note.is_none())
        .map(|r| r.rhs)
        .fold(0.0, f64::max);
    Ok(SweepReport {
        m,
        rows,
        fit,
        max_rhs,
    })
}

fn check_field(m: usize, f: &SpinorField) -> Result<SpinorField> {
    if f.dim() != m {
        return Err(argument(format!(
            "field lives in R^{} but the check is for R^{m}",
            f.dim()
        )));
    }
    f.dirac_image().ok_or_else(|| {
        Error::UnsupportedField("the weak inequalities need an analytic Dirac image".into())
    })
}

/// `‖f‖_{m/(m-1),∞} / ‖(γ·p)f‖_1` for each field; `None` marks a field whose
/// Dirac image is not integrable.
pub fn weak_sobolev_ratios(
    m: usize,
    fields: &[SpinorField],
    quad: &QuadratureSpec,
) -> Result<Vec<Option<f64>>> {
    let q = m as f64 / (m as f64 - 1.0);
    fields
        .par_iter()
        .map(|f| {
            let d = check_field(m, f)?;
            let rhs = lp_norm(&d, 1.0, quad)?;
            if !rhs.is_finite() {
                return Ok(None);
            }
            Ok(Some(weak_norm(f, q, quad)?.value / rhs))
        })
        .collect()
}

/// Largest weak Dirac–Sobolev ratio over `fields`: an empirical lower bound
/// on the optimal constant.
pub fn weak_sobolev_ratio(m: usize, fields: &[SpinorField], quad: &QuadratureSpec) -> Result<f64> {
    weak_sobolev_ratios(m, fields, quad)?
        .into_iter()
        .flatten()
        .reduce(f64::max)
        .ok_or_else(|| argument("no field with an integrable Dirac image"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakHardyReport {
    pub m: usize,
    /// `‖f/|·|‖_{1,∞}`
    pub lhs: f64,
    /// `‖(γ·p)f‖_1`
    pub rhs: f64,
    /// `‖f‖_{m/(m-1),∞}`
    pub weak: f64,
    /// Coefficient of the chain `lhs <= coeff·weak`.
    pub coeff: f64,
    /// `coeff·weak - lhs`
    pub slack: f64,
}

pub fn weak_hardy_check(
    m: usize,
    f: &SpinorField,
    quad: &QuadratureSpec,
) -> Result<WeakHardyReport> {
    let d = check_field(m, f)?;
    let q = m as f64 / (m as f64 - 1.0);
    let lhs = weak_norm(&f.over_radius(), 1.0, quad)?.value;
    let weak = weak_norm(f, q, quad)?.value;
    let rhs = lp_norm(&d, 1.0, quad)?;
    let coeff = hardy_coefficient(m);
    Ok(WeakHardyReport {
        m,
        lhs,
        rhs,
        weak,
        coeff,
        slack: coeff * weak - lhs,
    })
}
