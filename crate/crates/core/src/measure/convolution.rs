//! Convolutions with kernels singular at the evaluation point, computed in
//! spherical coordinates centred there. The Jacobian `ρ^{m-1}` cancels the
//! `|x-y|^{1-m}` singularity, so each radial integrand is bounded.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lp_norm, sphere_area};
use crate::clifford::{GammaSet, Spinor, C64};
use crate::error::{argument, Error, Result};
use crate::fields::{magnitude, radius, SpinorField};
use crate::quadrature::{composite_rule, QuadratureSpec, SphereRule, VectorNorm};

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A nonnegative scalar function on `R^m`.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: ScalarFn,
    support_radius: f64,
    /// Radii (about the origin) where the function is not smooth.
    breakpoints: Vec<f64>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("support_radius", &self.support_radius)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new(dim: usize, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
            support_radius: f64::INFINITY,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = radius;
        self
    }

    pub fn with_breakpoints(mut self, bps: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(bps);
        self
    }

    /// Indicator of the ball of the given radius.
    pub fn ball_indicator(dim: usize, r: f64) -> Self {
        Self::new(dim, move |x| if radius(x) < r { 1.0 } else { 0.0 })
            .with_support(r)
            .with_breakpoints([r])
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, |_| 0.0).with_support(0.0)
    }

    /// `|f|_ν` of a spinor field.
    pub fn magnitude_of(f: &SpinorField, norm: VectorNorm) -> Self {
        let g = f.clone();
        let bps = g
            .profile()
            .map(|p| p.breakpoints().to_vec())
            .unwrap_or_default();
        Self {
            dim: f.dim(),
            eval: Arc::new(move |x| magnitude(&g.evaluate(x), norm)),
            support_radius: f.support_radius(),
            breakpoints: bps,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}

/// A scalar integral with the difference between two quadrature levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarQuadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// A spinor-valued integral with the (ℓ²) difference between two quadrature
/// levels.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorQuadrature {
    pub value: Spinor,
    pub error_estimate: f64,
}

/// Constant of the inverse of `γ·p`: `f = (i/S_m) ∫ γ·(x-y)/|x-y|^m (γ·p)f(y) dy`.
///
/// `(γ·p)` of the fundamental solution `Γ((m-2)/2)/(4π^{m/2}) |x|^{2-m}` of
/// `-Δ` carries a factor `(m-2)` from the gradient, which gives `1/S_m`.
pub fn inverse_dirac_constant(m: usize) -> f64 {
    1.0 / sphere_area(m)
}

struct CentredRule {
    sphere: SphereRule,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CentredRule {
    fn new(
        dim: usize,
        x: &[f64],
        support: f64,
        breakpoints: &[f64],
        panels: usize,
        order: usize,
        r_max: f64,
    ) -> Self {
        let rx = radius(x);
        let reach = rx + support.min(r_max);
        let mut edges: Vec<f64> = (0..=panels)
            .map(|k| reach * k as f64 / panels as f64)
            .collect();
        // source breakpoints are radii about the origin; they only line up
        // with ρ when the evaluation point is the origin
        if rx == 0.0 {
            edges.extend(
                breakpoints
                    .iter()
                    .copied()
                    .filter(|b| *b > 0.0 && *b < reach),
            );
            edges.sort_by(f64::total_cmp);
            edges.dedup();
        }
        let (nodes, weights) = composite_rule(&edges);
        let mut sphere = SphereRule::new(dim, order);
        if rx > 0.0 {
            // Reflect the rule so its pole (e₀) points along x. For radial
            // sources the ray integrals then vary mostly with the polar
            // angle, which Gauss–Legendre resolves; the rest is a low-degree
            // trigonometric polynomial that the azimuthal rule integrates
            // exactly.
            let mut v: Vec<f64> = x.iter().map(|xi| -xi / rx).collect();
            v[0] += 1.0;
            let vv: f64 = v.iter().map(|a| a * a).sum();
            if vv > 1e-24 {
                for d in &mut sphere.directions {
                    let c = 2.0 * v.iter().zip(d.iter()).map(|(a, b)| a * b).sum::<f64>() / vv;
                    for (di, vi) in d.iter_mut().zip(&v) {
                        *di -= c * vi;
                    }
                }
            }
        }
        Self {
            sphere,
            nodes,
            weights,
        }
    }

    /// Runs `along(ω, w_ω, ray)` for every direction in parallel, where
    /// `ray(acc)` feeds `(weight, g(x + ρω))` for every radial node. Results
    /// come back in direction order.
    fn map_rays<T, R>(
        &self,
        x: &[f64],
        g: impl Fn(&[f64]) -> T + Sync,
        along: impl Fn(&[f64], f64, &mut dyn FnMut(&mut dyn FnMut(f64, T))) -> R + Sync,
    ) -> Vec<R>
    where
        R: Send,
    {
        self.sphere
            .directions
            .par_iter()
            .zip(self.sphere.weights.par_iter())
            .map(|(dir, &w)| {
                let mut ray = |acc: &mut dyn FnMut(f64, T)| {
                    let mut y = vec![0.0; x.len()];
                    for (&rho, &rw) in self.nodes.iter().zip(&self.weights) {
                        for ((yi, xi), di) in y.iter_mut().zip(x).zip(dir) {
                            *yi = xi + rho * di;
                        }
                        acc(rw, g(&y));
                    }
                };
                along(dir, w, &mut ray)
            })
            .collect()
    }
}

fn check_point(dim: usize, x: &[f64]) -> Result<()> {
    if x.len() != dim {
        return Err(argument(format!(
            "point has {} coordinates, field lives in R^{dim}",
            x.len()
        )));
    }
    Ok(())
}

/// `I₁g(x) = ∫ |x-y|^{-(m-1)} g(y) dy`.
pub fn riesz_i1(g: &ScalarField, x: &[f64], quad: &QuadratureSpec) -> Result<ScalarQuadrature> {
    quad.validate()?;
    check_point(g.dim, x)?;
    if g.support_radius == 0.0 {
        return Ok(ScalarQuadrature {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let level = |panels: usize, order: usize| {
        let rule = CentredRule::new(
            g.dim,
            x,
            g.support_radius,
            &g.breakpoints,
            panels,
            order,
            quad.r_max,
        );
        let parts = rule.map_rays(
            x,
            |y| g.eval(y),
            |_, w, ray| {
                let mut acc = 0.0;
                ray(&mut |rw, v| acc += rw * v);
                w * acc
            },
        );
        parts.into_iter().sum::<f64>()
    };
    let (coarse_panels, coarse_order) = coarser(quad);
    let fine = level(quad.panels, quad.angular_order);
    let coarse = level(coarse_panels, coarse_order);
    Ok(ScalarQuadrature {
        value: fine,
        error_estimate: (fine - coarse).abs(),
    })
}

fn coarser(quad: &QuadratureSpec) -> (usize, usize) {
    (
        (quad.panels / 2).max(1),
        (quad.angular_order * 3 / 4).max(2),
    )
}

/// Solves `(γ·p)f = g` at `x` through the convolution
/// `f(x) = (i/S_m) ∫ γ·(x-y)/|x-y|^m g(y) dy`.
///
/// In centred coordinates `y = x + ρω` the integrand becomes
/// `-(i/S_m)(γ·ω) g(x+ρω)`, so the ρ-integral is taken first and the gamma
/// contraction applied once per direction.
pub fn dirac_inverse_apply(
    gs: &GammaSet,
    g: &SpinorField,
    x: &[f64],
    quad: &QuadratureSpec,
) -> Result<SpinorQuadrature> {
    quad.validate()?;
    let m = gs.dimension();
    if m < 3 {
        return Err(Error::DimensionRange { m, min: 3 });
    }
    check_point(m, x)?;
    if g.dim() != m || g.spinor_dim() != gs.spinor_dim() {
        return Err(argument("field does not match the gamma set"));
    }
    if g.profile().is_some() {
        let l1 = lp_norm(
            g,
            1.0,
            &QuadratureSpec {
                vector_norm: VectorNorm::L2,
                ..quad.clone()
            },
        )?;
        if !l1.is_finite() {
            return Err(Error::UnsupportedField(
                "source is not integrable; the convolution diverges".into(),
            ));
        }
    }
    let ell = gs.spinor_dim();
    let breakpoints: Vec<f64> = g
        .profile()
        .map(|p| p.breakpoints().to_vec())
        .unwrap_or_default();
    let c = C64::new(0.0, -inverse_dirac_constant(m));
    let level = |panels: usize, order: usize| {
        let rule = CentredRule::new(
            m,
            x,
            g.support_radius(),
            &breakpoints,
            panels,
            order,
            quad.r_max,
        );
        let parts = rule.map_rays(
            x,
            |y| g.evaluate(y),
            |dir, w, ray| {
                let mut acc = Spinor::zeros(ell);
                ray(&mut |rw, v| acc.axpy(C64::new(rw, 0.0), &v, C64::new(1.0, 0.0)));
                gs.contract_apply(dir, &acc) * (c * w)
            },
        );
        parts.into_iter().fold(Spinor::zeros(ell), |a, b| a + b)
    };
    let (coarse_panels, coarse_order) = coarser(quad);
    let fine = level(quad.panels, quad.angular_order);
    let coarse = level(coarse_panels, coarse_order);
    let error_estimate = (&fine - coarse).norm();
    Ok(SpinorQuadrature {
        value: fine,
        error_estimate,
    })
}
