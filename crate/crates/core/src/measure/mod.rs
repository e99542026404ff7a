//! Strong `L^p` norms, distribution functions, weak-`L^q` quasi-norms and
//! the Riesz / inverse-Dirac convolutions.
//!
//! Fields carrying a radial magnitude profile go through exact 1-D radial
//! reductions; everything else falls back to Monte Carlo with the heavy-tailed
//! importance density `(1+|x|)^{-(m+1)}/ω_m`.

mod convolution;
mod simple;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::fields::{magnitude, RadialProfile, SpinorField};
use crate::quadrature::{
    composite, geometric_edges, radial_edges, substream, ImportanceSampler, QuadratureSpec,
    VectorNorm, TAIL_DECADES,
};

pub use convolution::{
    dirac_inverse_apply, inverse_dirac_constant, riesz_i1, ScalarField, ScalarQuadrature,
    SpinorQuadrature,
};
pub use simple::{Cell, SimpleFunction};

/// Surface area of the unit sphere in `R^m`, `2π^{m/2}/Γ(m/2)`.
pub fn sphere_area(m: usize) -> f64 {
    m as f64 * ball_volume(m)
}

/// Volume of the unit ball in `R^m`, `π^{m/2}/Γ((m+2)/2)`.
///
/// Evaluated by the recurrence `ω_m = 2π/m · ω_{m-2}`, which is exact up to
/// rounding for every integer `m`.
pub fn ball_volume(m: usize) -> f64 {
    let mut v = if m.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakMethod {
    RadialExact,
    Empirical,
}

/// A value of `‖f‖_{q,∞} = sup_t t·μ{|f| > t}^{1/q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakNormEstimate {
    pub value: f64,
    pub q: f64,
    pub method: WeakMethod,
    /// Bracket width of the radial optimiser, or one Monte Carlo standard
    /// error; `None` when the supremum could not be certified.
    pub error_bound: Option<f64>,
}

/// Monte Carlo value with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

const MC_CHUNK: usize = 4096;

/// Draws `n` importance samples and returns `(point, 1/density)` in a fixed
/// order. Chunks use independent substreams, so the result does not depend
/// on how rayon schedules them.
fn importance_draws<T: Send>(
    dim: usize,
    n: usize,
    seed: u64,
    f: impl Fn(&[f64]) -> T + Sync,
) -> Vec<(T, f64)> {
    let sampler = ImportanceSampler::new(dim);
    let chunks = n.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c as u64);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            (0..len)
                .map(|_| {
                    let s = sampler.sample(&mut rng);
                    (f(&s.point), 1.0 / s.density)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `S_m ∫_0^∞ profile(r)^p r^{m-1} dr`; `+∞` when the tail or the origin
/// singularity makes it diverge.
pub fn radial_power_integral(
    profile: &RadialProfile,
    m: usize,
    p: f64,
    quad: &QuadratureSpec,
) -> f64 {
    let mf = m as f64;
    if let Some(o) = profile.origin() {
        if p * o.exponent >= mf {
            return f64::INFINITY;
        }
    }
    let infinite = !profile.support().is_finite();
    if infinite {
        if let Some(t) = profile.tail() {
            if p * t.exponent <= mf {
                return f64::INFINITY;
            }
        }
    }
    let integrand = |r: f64| profile.eval(r).powf(p) * r.powi(m as i32 - 1);
    let upper = if infinite {
        quad.r_max
    } else {
        profile.support()
    };
    let mut total = composite(
        integrand,
        &radial_edges(upper, quad.panels, profile.breakpoints()),
    );
    if infinite {
        total += composite(
            integrand,
            &geometric_edges(quad.r_max, TAIL_DECADES, quad.panels),
        );
        if let Some(t) = profile.tail() {
            let far = quad.r_max * 10f64.powi(TAIL_DECADES as i32);
            let e = p * t.exponent - mf;
            total += t.coeff.powf(p) * far.powf(-e) / e;
        }
    }
    sphere_area(m) * total
}

/// `(∫ |f(x)|_ν^p dx)^{1/p}` with `ν = quad.vector_norm`.
///
/// Divergent integrals come back as `+∞`.
pub fn lp_norm(f: &SpinorField, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(argument(format!("lp_norm needs p >= 1, got {p}")));
    }
    quad.validate()?;
    if let Some(profile) = f.profile() {
        let s = radial_power_integral(profile, f.dim(), p, quad);
        if s.is_infinite() || quad.vector_norm == VectorNorm::L2 {
            return Ok(s.powf(1.0 / p));
        }
    }
    Ok(lp_norm_monte_carlo(f, p, quad)?.value)
}

/// Importance-sampled `‖f‖_p` regardless of profile; the standard error is
/// propagated through the `1/p` power.
pub fn lp_norm_monte_carlo(f: &SpinorField, p: f64, quad: &QuadratureSpec) -> Result<McEstimate> {
    if !(p >= 1.0) {
        return Err(argument(format!("lp_norm needs p >= 1, got {p}")));
    }
    if quad.mc_samples == 0 {
        return Err(argument("Monte Carlo path needs mc_samples > 0"));
    }
    let norm = quad.vector_norm;
    let draws = importance_draws(f.dim(), quad.mc_samples, quad.seed, |x| {
        magnitude(&f.evaluate(x), norm).powf(p)
    });
    let (mean, se) = mean_and_error(draws.iter().map(|(v, w)| v * w), draws.len());
    let value = mean.powf(1.0 / p);
    let std_error = if mean > 0.0 {
        value * se / (p * mean)
    } else {
        se
    };
    Ok(McEstimate { value, std_error })
}

fn mean_and_error(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = values.clone().sum::<f64>() / nf;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0).max(1.0);
    (mean, (var / nf).sqrt())
}

/// Root of `profile(r) = t` for a decreasing profile; `None` if the level is
/// never crossed (infinite measure).
fn level_radius(profile: &RadialProfile, t: f64) -> Option<f64> {
    if profile.eval(0.0) <= t {
        return Some(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while profile.eval(hi) > t {
        if hi >= profile.support() {
            return Some(profile.support());
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return None;
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if profile.eval(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `μ{x : |f(x)| > t}`.
pub fn distribution_measure(f: &SpinorField, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(t > 0.0) {
        return Err(argument(format!("level must be positive, got {t}")));
    }
    if let Some(profile) = radial_monotone(f, quad) {
        return Ok(match level_radius(profile, t) {
            Some(r) => ball_volume(f.dim()) * r.powi(f.dim() as i32),
            None => f64::INFINITY,
        });
    }
    if quad.mc_samples == 0 {
        return Err(argument("Monte Carlo path needs mc_samples > 0"));
    }
    let norm = quad.vector_norm;
    let draws = importance_draws(f.dim(), quad.mc_samples, quad.seed, |x| {
        magnitude(&f.evaluate(x), norm)
    });
    let n = draws.len();
    Ok(draws
        .iter()
        .filter(|(v, _)| *v > t)
        .map(|(_, w)| w)
        .sum::<f64>()
        / n as f64)
}

fn radial_monotone<'a>(f: &'a SpinorField, quad: &QuadratureSpec) -> Option<&'a RadialProfile> {
    f.profile().filter(|p| {
        p.is_monotone_decreasing() && (quad.vector_norm == VectorNorm::L2 || f.spinor_dim() == 1)
    })
}

const GRID_PER_DECADE: usize = 20;
const GRID_LO: f64 = 1e-8;
const LIMIT_TOL: f64 = 1e-9;

/// `‖f‖_{q,∞}`.
///
/// For decreasing radial profiles the supremum over levels becomes a
/// supremum over radii of `profile(r)·(ω_m r^m)^{1/q}`, found on a log grid
/// and refined by golden section. Suprema approached as `r → ∞` or `r → 0`
/// are resolved from the declared power laws. Other fields use the empirical
/// Monte Carlo path.
pub fn weak_norm(f: &SpinorField, q: f64, quad: &QuadratureSpec) -> Result<WeakNormEstimate> {
    if !(q > 0.0) {
        return Err(argument(format!("weak norm needs q > 0, got {q}")));
    }
    quad.validate()?;
    if let Some(profile) = radial_monotone(f, quad) {
        return Ok(weak_norm_radial(profile, f.dim(), q, quad));
    }
    let norm = quad.vector_norm;
    weak_norm_empirical(f.dim(), |x| magnitude(&f.evaluate(x), norm), q, quad)
}

pub fn weak_norm_radial(
    profile: &RadialProfile,
    m: usize,
    q: f64,
    quad: &QuadratureSpec,
) -> WeakNormEstimate {
    let mf = m as f64;
    let omega = ball_volume(m);
    let objective = |r: f64| profile.eval(r) * (omega * r.powi(m as i32)).powf(1.0 / q);
    let done = |value: f64, error_bound: Option<f64>| WeakNormEstimate {
        value,
        q,
        method: WeakMethod::RadialExact,
        error_bound,
    };

    let infinite = !profile.support().is_finite();
    let hi = if infinite {
        quad.r_max * 10f64.powi(TAIL_DECADES as i32)
    } else {
        profile.support()
    };
    let decades = (hi / GRID_LO).log10();
    let n = (decades * GRID_PER_DECADE as f64).ceil() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|k| GRID_LO * (hi / GRID_LO).powf(k as f64 / n as f64))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&r| objective(r)).collect();
    let (k, &best) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");

    let last_decade = &vals[n.saturating_sub(GRID_PER_DECADE)..];
    if k == n && infinite && last_decade.windows(2).all(|w| w[1] >= w[0]) {
        return match profile.tail() {
            Some(t) => {
                let e = mf / q - t.exponent;
                if e > LIMIT_TOL {
                    done(f64::INFINITY, Some(0.0))
                } else {
                    let limit = t.coeff * omega.powf(1.0 / q);
                    done(limit.max(best), Some(f64::EPSILON * limit))
                }
            }
            None => done(best, None),
        };
    }
    if k == 0 {
        if let Some(o) = profile.origin() {
            let e = mf / q - o.exponent;
            if e < -LIMIT_TOL {
                return done(f64::INFINITY, Some(0.0));
            }
            if e.abs() <= LIMIT_TOL {
                let limit = o.coeff * omega.powf(1.0 / q);
                // the objective is flat in r; the grid value is already exact
                return done(limit.max(best), Some((limit - best).abs()));
            }
        }
    }
    if k == n {
        return done(best, if infinite { None } else { Some(0.0) });
    }
    let lo = grid[k.saturating_sub(1)];
    let up = grid[(k + 1).min(n)];
    let (value, width) = golden_max(objective, lo, up);
    done(value.max(best), Some(width))
}

/// Golden-section maximisation on `[a, b]`; returns the best value and the
/// spread of the objective over the final bracket.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= 1e-13 * b.abs() {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let ends = [f(a), f(b), fc, fd];
    let best = ends.iter().copied().fold(f64::MIN, f64::max);
    let worst = ends.iter().copied().fold(f64::MAX, f64::min);
    (best, best - worst)
}

/// Empirical `‖·‖_{q,∞}` of a magnitude function: sort the sampled values and
/// take `max_k v_k·M_k^{1/q}` where `M_k` is the importance-weighted measure of
/// `{|f| >= v_k}`.
pub fn weak_norm_empirical(
    dim: usize,
    magnitude_at: impl Fn(&[f64]) -> f64 + Sync,
    q: f64,
    quad: &QuadratureSpec,
) -> Result<WeakNormEstimate> {
    if !(q > 0.0) {
        return Err(argument(format!("weak norm needs q > 0, got {q}")));
    }
    if quad.mc_samples == 0 {
        return Err(argument("Monte Carlo path needs mc_samples > 0"));
    }
    let mut draws = importance_draws(dim, quad.mc_samples, quad.seed, magnitude_at);
    let n = draws.len() as f64;
    draws.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    let mut best = (0.0, 0.0, 0.0);
    for (v, w) in &draws {
        if *v <= 0.0 {
            break;
        }
        acc += w;
        acc_sq += w * w;
        let measure = acc / n;
        let val = v * measure.powf(1.0 / q);
        if val > best.0 {
            best = (val, measure, acc_sq);
        }
    }
    let (value, measure, sq) = best;
    let error_bound = if measure > 0.0 {
        let var = (sq / n - measure * measure).max(0.0);
        let se = (var / n).sqrt();
        Some(value * se / (q * measure))
    } else {
        Some(0.0)
    };
    Ok(WeakNormEstimate {
        value,
        q,
        method: WeakMethod::Empirical,
        error_bound,
    })
}
