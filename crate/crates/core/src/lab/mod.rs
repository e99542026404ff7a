//! Experiments: the `L¹` counterexample sweep, weak Dirac–Sobolev and
//! Dirac–Hardy checks, constant estimates for `1 < p < 3`, the classical
//! Hardy inequality in `L¹`, and a fuzz suite for the weak Hölder inequality.
//!
//! Independent rows, grid points and trials run on rayon; reports are
//! assembled by index so their contents never depend on scheduling.

mod constants;
mod hardy;
mod holder;
mod sweep;

pub use constants::{
    constant_report, copt_lower_bound_closed_form, dirac_lp_norm_upper_bound,
    sobolev_optimal_constant, strong_sobolev_ratio, zero_mode_lp_norm_lower_bound, ConstantReport,
    ConstantRow,
};
pub use hardy::{
    hardy_coefficient, hardy_coefficient_closed_form, hardy_l1_check, BumpTerm, HardyL1Report,
    RadialBump,
};
pub use holder::{
    holder_epsilon_minimizer, weak_holder_bound, weak_holder_fuzz, FuzzCounterexample,
    HolderFuzzReport, HolderTrial,
};
pub use sweep::{
    counterexample_sweep, cutoff_zero_mode, rhs_envelope_bound, weak_hardy_check,
    weak_sobolev_ratio, weak_sobolev_ratios, LinearFit, SweepReport, SweepRow, WeakHardyReport,
};

use crate::error::{argument, Result};

/// Least-squares line through `(x, y)` pairs.
pub(crate) fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(argument("a linear fit needs at least two points"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(argument("a linear fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        points: points.len(),
    })
}
