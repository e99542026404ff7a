use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::C64;
use crate::error::{argument, Error, Result};
use crate::measure::{Cell, SimpleFunction};
use crate::quadrature::substream;

/// `(q/p)^{1/q} + (p/q)^{1/p}` for conjugate exponents.
pub fn weak_holder_bound(p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0 && q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::NonConjugate { p, q });
    }
    Ok((q / p).powf(1.0 / q) + (p / q).powf(1.0 / p))
}

/// Minimiser of `F(ε) = ε^p a + ε^{-q} b` over `ε > 0` and the minimum,
/// `ε* = (q b / (p a))^{1/(pq)}`.
pub fn holder_epsilon_minimizer(p: f64, q: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    weak_holder_bound(p, q)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(argument("the ε-split needs positive weights"));
    }
    let eps = (q * b / (p * a)).powf(1.0 / (p * q));
    Ok((eps, eps.powf(p) * a + eps.powf(-q) * b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderTrial {
    pub p: f64,
    pub q: f64,
    /// `‖fg‖_{1,∞}`
    pub lhs: f64,
    /// `coeff·‖f‖_{p,∞}·‖g‖_{q,∞}`
    pub rhs: f64,
}

/// A trial that broke the inequality, with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzCounterexample {
    pub trial: u64,
    pub f: SimpleFunction,
    pub g: SimpleFunction,
    pub result: HolderTrial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderFuzzReport {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub annulus_trials: u64,
    pub box_trials: u64,
    /// Largest `lhs/rhs` over all trials.
    pub max_ratio: f64,
    pub violations: Vec<FuzzCounterexample>,
    /// Trials whose ε-split was checked on a grid.
    pub epsilon_checks: u64,
    /// Largest `(grid min - closed-form min) / allowance` over those trials;
    /// at most 1 when the minimiser agrees within grid resolution.
    pub epsilon_worst_gap: f64,
    pub epsilon_failures: u64,
}

const EPS_CHECKS: u64 = 100;
const EPS_GRID: usize = 4001;
const EPS_LOG_RANGE: f64 = 60.0;
const SLACK: f64 = 1e-12;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn random_value(rng: &mut ChaCha8Rng) -> C64 {
    let modulus = log_uniform(rng, 1e-3, 1e3);
    C64::from_polar(modulus, rng.random::<f64>() * std::f64::consts::TAU)
}

fn random_annuli(rng: &mut ChaCha8Rng, dim: usize) -> Result<SimpleFunction> {
    let cells = rng.random_range(1..=4);
    let mut radii: Vec<f64> = (0..2 * cells)
        .map(|_| log_uniform(rng, 1e-2, 1e2))
        .collect();
    radii.sort_by(f64::total_cmp);
    if rng.random_bool(0.3) {
        radii[0] = 0.0;
    }
    let cells = radii
        .chunks(2)
        .filter(|c| c[0] < c[1])
        .map(|c| {
            (
                Cell::Annulus {
                    inner: c[0],
                    outer: c[1],
                },
                random_value(rng),
            )
        })
        .collect();
    SimpleFunction::new(dim, cells)
}

fn random_grid(rng: &mut ChaCha8Rng, dim: usize) -> Result<SimpleFunction> {
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|_| {
            let k = rng.random_range(2..=4);
            let mut v: Vec<f64> = (0..k)
                .map(|_| {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    sign * log_uniform(rng, 1e-2, 1e2)
                })
                .collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let shape: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
    let total: usize = shape.iter().product();
    let mut cells = Vec::new();
    for flat in 0..total {
        let last_chance = flat + 1 == total && cells.is_empty();
        if !last_chance && rng.random_bool(0.3) {
            continue;
        }
        let mut rest = flat;
        let (mut lo, mut hi) = (Vec::with_capacity(dim), Vec::with_capacity(dim));
        for (axis, &len) in axes.iter().zip(&shape) {
            let i = rest % len;
            rest /= len;
            lo.push(axis[i]);
            hi.push(axis[i + 1]);
        }
        cells.push((Cell::Box { lo, hi }, random_value(rng)));
    }
    SimpleFunction::new(dim, cells)
}

fn draw_exponents(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let inv_p = 0.05 + 0.9 * rng.random::<f64>();
    (1.0 / inv_p, 1.0 / (1.0 - inv_p))
}

/// `(F_grid - F*) / allowance` where `F(ε) = ε^p a + ε^{-q} b` is sampled on a
/// fixed log grid. Writing `ε = ε* e^s`, `F/F* = (q e^{ps} + p e^{-qs})/(p+q)`,
/// so a grid of log-spacing `h` is within `F*·(max_{|s|<=h/2} F/F* - 1)`.
fn epsilon_gap(p: f64, q: f64, a: f64, b: f64) -> Result<f64> {
    let (_, closed) = holder_epsilon_minimizer(p, q, a, b)?;
    let h = 2.0 * EPS_LOG_RANGE / (EPS_GRID - 1) as f64;
    let grid_min = (0..EPS_GRID)
        .map(|k| {
            let eps = (-EPS_LOG_RANGE + h * k as f64).exp();
            eps.powf(p) * a + eps.powf(-q) * b
        })
        .fold(f64::INFINITY, f64::min);
    let g = |s: f64| (q * (p * s).exp() + p * (-q * s).exp()) / (p + q);
    let allowance = closed * (g(h / 2.0).max(g(-h / 2.0)) - 1.0) * (1.0 + 1e-9);
    if grid_min < closed * (1.0 - SLACK) {
        // The closed form is not the minimum at all.
        return Ok(f64::INFINITY);
    }
    Ok(((grid_min - closed) / allowance).max(0.0))
}

struct TrialOutcome {
    annulus: bool,
    result: HolderTrial,
    violation: Option<FuzzCounterexample>,
    eps_gap: Option<f64>,
}

fn run_trial(dim: usize, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = substream(seed, trial);
    let annulus = rng.random_bool(0.5);
    let (f, g) = if annulus {
        (random_annuli(&mut rng, dim)?, random_annuli(&mut rng, dim)?)
    } else {
        (random_grid(&mut rng, dim)?, random_grid(&mut rng, dim)?)
    };
    let (p, q) = draw_exponents(&mut rng);
    let coeff = weak_holder_bound(p, q)?;
    let nf = f.weak_norm(p)?;
    let ng = g.weak_norm(q)?;
    let lhs = f.product(&g)?.weak_norm(1.0)?;
    let rhs = coeff * nf * ng;
    let result = HolderTrial { p, q, lhs, rhs };
    let violation = (lhs > rhs * (1.0 + SLACK)).then(|| FuzzCounterexample {
        trial,
        f: f.clone(),
        g: g.clone(),
        result: result.clone(),
    });
    let eps_gap = if trial < EPS_CHECKS && nf > 0.0 && ng > 0.0 {
        Some(epsilon_gap(p, q, nf.powf(p), ng.powf(q))?)
    } else {
        None
    };
    Ok(TrialOutcome {
        annulus,
        result,
        violation,
        eps_gap,
    })
}

/// Random simple-function pairs `(f, g)` on `R^d` with random conjugate
/// exponents, checking `‖fg‖_{1,∞} <= coeff·‖f‖_{p,∞}‖g‖_{q,∞}` exactly.
/// The first 100 trials also compare the closed-form ε-split with a grid
/// search. Trial `k` draws from substream `k` of `seed`.
pub fn weak_holder_fuzz(dim: usize, trials: u64, seed: u64) -> Result<HolderFuzzReport> {
    if !(1..=3).contains(&dim) {
        return Err(argument(format!(
            "fuzz dimension must be 1, 2 or 3, got {dim}"
        )));
    }
    if trials == 0 {
        return Err(argument("fuzz needs at least one trial"));
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(dim, seed, t))
        .collect::<Result<_>>()?;
    let annulus_trials = outcomes.iter().filter(|o| o.annulus).count() as u64;
    let max_ratio = outcomes
        .iter()
        .filter(|o| o.result.rhs > 0.0)
        .map(|o| o.result.lhs / o.result.rhs)
        .fold(0.0, f64::max);
    let gaps: Vec<f64> = outcomes.iter().filter_map(|o| o.eps_gap).collect();
    Ok(HolderFuzzReport {
        dim,
        trials,
        seed,
        annulus_trials,
        box_trials: trials - annulus_trials,
        max_ratio,
        epsilon_checks: gaps.len() as u64,
        epsilon_worst_gap: gaps.iter().copied().fold(0.0, f64::max),
        epsilon_failures: gaps.iter().filter(|g| **g > 1.0).count() as u64,
        violations: outcomes.into_iter().filter_map(|o| o.violation).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ball_volume;

    #[test]
    fn bound_values() {
        assert_eq!(weak_holder_bound(2.0, 2.0).unwrap(), 2.0);
        let v = weak_holder_bound(1.5, 3.0).unwrap();
        assert!((v - 3.0 * 2f64.powf(-2.0 / 3.0)).abs() < 1e-15);
        assert!(matches!(
            weak_holder_bound(2.0, 3.0),
            Err(Error::NonConjugate { .. })
        ));
        assert!(weak_holder_bound(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn symmetric_minimizer() {
        let (eps, v) = holder_epsilon_minimizer(2.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!((eps, v), (1.0, 2.0));
    }

    #[test]
    fn minimum_equals_coefficient() {
        let (p, q) = (1.25, 5.0);
        let (a, b) = (3.0f64, 0.2f64);
        let (_, v) = holder_epsilon_minimizer(p, q, a.powf(p), b.powf(q)).unwrap();
        assert!((v - weak_holder_bound(p, q).unwrap() * a * b).abs() < 1e-13);
    }

    #[test]
    fn unit_ball_indicators() {
        for d in 1..=3 {
            let ball = || {
                SimpleFunction::new(
                    d,
                    vec![(
                        Cell::Annulus {
                            inner: 0.0,
                            outer: 1.0,
                        },
                        C64::new(1.0, 0.0),
                    )],
                )
                .unwrap()
            };
            let (f, g) = (ball(), ball());
            let lhs = f.product(&g).unwrap().weak_norm(1.0).unwrap();
            let rhs = 2.0 * f.weak_norm(2.0).unwrap() * g.weak_norm(2.0).unwrap();
            let w = ball_volume(d);
            assert!((lhs - w).abs() < 1e-14 * w);
            assert!((rhs - 2.0 * w).abs() < 1e-14 * w);
        }
    }

    #[test]
    fn small_fuzz_is_clean_and_deterministic() {
        let a = weak_holder_fuzz(2, 300, 7).unwrap();
        assert!(a.violations.is_empty());
        assert_eq!(a.epsilon_checks, 100);
        assert_eq!(a.epsilon_failures, 0, "{}", a.epsilon_worst_gap);
        assert!(a.annulus_trials > 0 && a.box_trials > 0);
        let b = weak_holder_fuzz(2, 300, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn fuzz_arguments() {
        assert!(weak_holder_fuzz(4, 10, 1).is_err());
        assert!(weak_holder_fuzz(1, 0, 1).is_err());
    }
}
