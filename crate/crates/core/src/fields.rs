//! Spinor-valued test functions on `R^m`: the Loss–Yau zero mode, its smooth
//! cutoffs, Gaussians, and radial scalars such as `1/|x|`.
//!
//! Fields are closed-form descriptors. Integrals never sample them on a grid
//! directly; [`crate::measure`] decides between the exact radial reduction
//! (through [`RadialProfile`]) and Monte Carlo.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::clifford::{build_gamma_set, GammaSet, Spinor, C64};
use crate::error::{argument, Error, Result};
use crate::quadrature::VectorNorm;

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type PointFn = Arc<dyn Fn(&[f64]) -> Spinor + Send + Sync>;

/// `coeff · r^(-exponent)`, used for large-`r` tails and small-`r`
/// singularities of radial profiles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
}

/// The magnitude `|f(x)|₂` of a field whose magnitude only depends on
/// `r = |x|`.
#[derive(Clone)]
pub struct RadialProfile {
    eval: RadialFn,
    monotone_decreasing: bool,
    /// As `r → ∞`, `profile(r) ~ coeff·r^-α` and `profile(r) <= coeff·r^-α`
    /// beyond the quadrature cut.
    tail: Option<PowerLaw>,
    /// As `r → 0`, `profile(r) ~ coeff·r^-β`.
    origin: Option<PowerLaw>,
    breakpoints: Vec<f64>,
    support: f64,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("monotone_decreasing", &self.monotone_decreasing)
            .field("tail", &self.tail)
            .field("origin", &self.origin)
            .field("breakpoints", &self.breakpoints)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            monotone_decreasing: false,
            tail: None,
            origin: None,
            breakpoints: Vec::new(),
            support: f64::INFINITY,
        }
    }

    pub fn decreasing(mut self) -> Self {
        self.monotone_decreasing = true;
        self
    }

    pub fn with_tail(mut self, coeff: f64, exponent: f64) -> Self {
        self.tail = Some(PowerLaw { coeff, exponent });
        self
    }

    pub fn with_origin(mut self, coeff: f64, exponent: f64) -> Self {
        self.origin = Some(PowerLaw { coeff, exponent });
        self
    }

    pub fn with_breakpoints(mut self, bps: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(bps);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support = radius;
        if radius.is_finite() {
            self.tail = None;
        }
        self
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        if r > self.support {
            0.0
        } else {
            (self.eval)(r)
        }
    }

    pub fn is_monotone_decreasing(&self) -> bool {
        self.monotone_decreasing
    }

    pub fn tail(&self) -> Option<PowerLaw> {
        self.tail
    }

    pub fn origin(&self) -> Option<PowerLaw> {
        self.origin
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    fn map(&self, g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |r| g(r, inner(r))),
            ..self.clone()
        }
    }
}

/// Smooth radial window: `1` on `[0, n]`, `0` on `[n + 2, ∞)`, with the quintic
/// smoothstep `6t⁵ - 15t⁴ + 10t³` (`t = (r - n)/2`) in between. It is C², and
/// `|χ'| <= 15/16`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffWindow {
    pub inner: f64,
}

impl CutoffWindow {
    pub const WIDTH: f64 = 2.0;
    pub const MAX_SLOPE: f64 = 15.0 / 16.0;

    pub fn new(inner: f64) -> Result<Self> {
        if !(inner > 0.0) || !inner.is_finite() {
            return Err(argument(format!(
                "cutoff radius must be positive, got {inner}"
            )));
        }
        Ok(Self { inner })
    }

    pub fn outer(&self) -> f64 {
        self.inner + Self::WIDTH
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer() {
            0.0
        } else {
            let t = (r - self.inner) / Self::WIDTH;
            1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
        }
    }

    #[inline]
    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.inner || r >= self.outer() {
            0.0
        } else {
            let t = (r - self.inner) / Self::WIDTH;
            let s = t * (1.0 - t);
            -30.0 * s * s / Self::WIDTH
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    LossYau,
    CutoffLossYau,
    Gaussian,
    Custom,
}

// How the analytic Dirac image relates to the field itself; used to derive
// the magnitude of the image after a cutoff.
#[derive(Clone)]
enum DiracForm {
    /// `(γ·p)f = λ(r) f`, `λ` real.
    Eigen(RadialFn),
    /// `(γ·p)f = -i s(r) (γ·x/r) f`, `s` real.
    Clifford(RadialFn),
    Unknown,
}

/// A map `R^m → C^ℓ` with optional analytic Dirac image `(γ·p)f` and radial
/// magnitude profile.
#[derive(Clone)]
pub struct SpinorField {
    dim: usize,
    spinor_dim: usize,
    kind: FieldKind,
    gammas: Option<Arc<GammaSet>>,
    evaluate: PointFn,
    dirac: Option<PointFn>,
    profile: Option<RadialProfile>,
    dirac_profile: Option<RadialProfile>,
    support_radius: f64,
    form: DiracForm,
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinorField")
            .field("dim", &self.dim)
            .field("spinor_dim", &self.spinor_dim)
            .field("kind", &self.kind)
            .field("has_dirac", &self.dirac.is_some())
            .field("profile", &self.profile)
            .field("support_radius", &self.support_radius)
            .finish_non_exhaustive()
    }
}

#[inline]
pub fn radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Pointwise norm of a spinor.
pub fn magnitude(v: &Spinor, norm: VectorNorm) -> f64 {
    match norm {
        VectorNorm::L2 => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        VectorNorm::L1 => v.iter().map(|z| z.norm()).sum(),
    }
}

impl SpinorField {
    /// A field built from closures. `dirac`, when given, must be the exact
    /// image under `γ·p = -i Σ γ_j ∂_j` for the supplied gamma set.
    pub fn custom(
        gammas: Arc<GammaSet>,
        evaluate: impl Fn(&[f64]) -> Spinor + Send + Sync + 'static,
        dirac: Option<PointFn>,
    ) -> Self {
        Self {
            dim: gammas.dimension(),
            spinor_dim: gammas.spinor_dim(),
            kind: FieldKind::Custom,
            gammas: Some(gammas),
            evaluate: Arc::new(evaluate),
            dirac,
            profile: None,
            dirac_profile: None,
            support_radius: f64::INFINITY,
            form: DiracForm::Unknown,
        }
    }

    /// A scalar (`ℓ = 1`) field `x ↦ profile(|x|)` with no Dirac structure.
    pub fn radial_scalar(dim: usize, profile: RadialProfile) -> Self {
        let p = profile.clone();
        Self {
            dim,
            spinor_dim: 1,
            kind: FieldKind::Custom,
            gammas: None,
            evaluate: Arc::new(move |x| Spinor::from_element(1, C64::new(p.eval(radius(x)), 0.0))),
            dirac: None,
            support_radius: profile.support(),
            profile: Some(profile),
            dirac_profile: None,
            form: DiracForm::Unknown,
        }
    }

    /// `x ↦ 1/|x|` on `R^m`.
    pub fn inverse_radius(dim: usize) -> Self {
        let profile = RadialProfile::new(|r| 1.0 / r)
            .decreasing()
            .with_tail(1.0, 1.0)
            .with_origin(1.0, 1.0);
        Self::radial_scalar(dim, profile)
    }

    /// Attaches a radial magnitude profile to a custom field.
    pub fn with_profile(mut self, profile: RadialProfile) -> Self {
        self.support_radius = self.support_radius.min(profile.support());
        self.profile = Some(profile);
        self
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = radius;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn gammas(&self) -> Option<&Arc<GammaSet>> {
        self.gammas.as_ref()
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn profile(&self) -> Option<&RadialProfile> {
        self.profile.as_ref()
    }

    /// Magnitude profile of the analytic Dirac image, when it is radial.
    pub fn dirac_profile(&self) -> Option<&RadialProfile> {
        self.dirac_profile.as_ref()
    }

    pub fn has_analytic_dirac(&self) -> bool {
        self.dirac.is_some()
    }

    pub fn evaluate(&self, x: &[f64]) -> Spinor {
        if radius(x) > self.support_radius {
            return Spinor::zeros(self.spinor_dim);
        }
        (self.evaluate)(x)
    }

    pub fn analytic_dirac(&self, x: &[f64]) -> Option<Spinor> {
        let d = self.dirac.as_ref()?;
        if radius(x) > self.support_radius {
            return Some(Spinor::zeros(self.spinor_dim));
        }
        Some(d(x))
    }

    /// The analytic Dirac image as a field of its own.
    pub fn dirac_image(&self) -> Option<SpinorField> {
        let dirac = self.dirac.clone()?;
        Some(SpinorField {
            dim: self.dim,
            spinor_dim: self.spinor_dim,
            kind: FieldKind::Custom,
            gammas: self.gammas.clone(),
            evaluate: dirac,
            dirac: None,
            profile: self.dirac_profile.clone(),
            dirac_profile: None,
            support_radius: self.support_radius,
            form: DiracForm::Unknown,
        })
    }

    /// `x ↦ f(x)/|x|`.
    pub fn over_radius(&self) -> SpinorField {
        let inner = self.evaluate.clone();
        let profile = self.profile.as_ref().map(|p| {
            let at_zero = p.eval(0.0);
            let mut q = p.map(|r, v| v / r);
            q.origin = p
                .origin
                .map(|o| PowerLaw {
                    coeff: o.coeff,
                    exponent: o.exponent + 1.0,
                })
                .or(Some(PowerLaw {
                    coeff: at_zero,
                    exponent: 1.0,
                }));
            q.tail = p.tail.map(|t| PowerLaw {
                coeff: t.coeff,
                exponent: t.exponent + 1.0,
            });
            q
        });
        SpinorField {
            evaluate: Arc::new(move |x| inner(x) / C64::new(radius(x), 0.0)),
            dirac: None,
            profile,
            dirac_profile: None,
            kind: FieldKind::Custom,
            form: DiracForm::Unknown,
            ..self.clone()
        }
    }

    /// `x ↦ f(x/λ)`.
    pub fn dilate(&self, lambda: f64) -> Result<SpinorField> {
        if !(lambda > 0.0) {
            return Err(argument("dilation factor must be positive"));
        }
        let scale = |p: &RadialProfile, amp: f64| {
            let inner = p.eval.clone();
            RadialProfile {
                eval: Arc::new(move |r| amp * inner(r / lambda)),
                monotone_decreasing: p.monotone_decreasing,
                tail: p.tail.map(|t| PowerLaw {
                    coeff: amp * t.coeff * lambda.powf(t.exponent),
                    exponent: t.exponent,
                }),
                origin: p.origin.map(|o| PowerLaw {
                    coeff: amp * o.coeff * lambda.powf(o.exponent),
                    exponent: o.exponent,
                }),
                breakpoints: p.breakpoints.iter().map(|b| b * lambda).collect(),
                support: p.support * lambda,
            }
        };
        let eval = self.evaluate.clone();
        let dirac = self.dirac.clone().map(|d| -> PointFn {
            Arc::new(move |x: &[f64]| {
                let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
                d(&y) / C64::new(lambda, 0.0)
            })
        });
        Ok(SpinorField {
            evaluate: Arc::new(move |x| {
                let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
                eval(&y)
            }),
            dirac,
            profile: self.profile.as_ref().map(|p| scale(p, 1.0)),
            dirac_profile: self.dirac_profile.as_ref().map(|p| scale(p, 1.0 / lambda)),
            support_radius: self.support_radius * lambda,
            form: DiracForm::Unknown,
            ..self.clone()
        })
    }
}

/// The Loss–Yau mode `ψ(x) = (1+r²)^{-m/2} (I + i x·γ) φ₀` on `R^m`.
///
/// `(γ·p)ψ = m/(1+r²) ψ` and `|ψ(x)|₂ = (1+r²)^{-(m-1)/2}`.
pub fn loss_yau(m: usize) -> Result<SpinorField> {
    let gs = Arc::new(build_gamma_set(m)?);
    let mf = m as f64;
    let phi0 = gs.first_basis_spinor();
    let g = gs.clone();
    let evaluate: PointFn = Arc::new(move |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let mut s = g.contract_apply(x, &phi0) * C64::new(0.0, 1.0);
        s[0] += C64::new(1.0, 0.0);
        s * C64::new((1.0 + r2).powf(-0.5 * mf), 0.0)
    });
    let ev = evaluate.clone();
    let dirac: PointFn = Arc::new(move |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        ev(x) * C64::new(mf / (1.0 + r2), 0.0)
    });
    let profile = RadialProfile::new(move |r| (1.0 + r * r).powf(-0.5 * (mf - 1.0)))
        .decreasing()
        .with_tail(1.0, mf - 1.0);
    let dirac_profile = RadialProfile::new(move |r| mf * (1.0 + r * r).powf(-0.5 * (mf + 1.0)))
        .decreasing()
        .with_tail(mf, mf + 1.0);
    Ok(SpinorField {
        dim: m,
        spinor_dim: gs.spinor_dim(),
        kind: FieldKind::LossYau,
        gammas: Some(gs),
        evaluate,
        dirac: Some(dirac),
        profile: Some(profile),
        dirac_profile: Some(dirac_profile),
        support_radius: f64::INFINITY,
        form: DiracForm::Eigen(Arc::new(move |r| mf / (1.0 + r * r))),
    })
}

/// `f(x) = e^{-a r²} φ₀` with `(γ·p)f = 2ia e^{-a r²} (γ·x) φ₀`.
pub fn gaussian_spinor(m: usize, a: f64) -> Result<SpinorField> {
    if !(a > 0.0) {
        return Err(argument(format!(
            "gaussian width parameter must be positive, got {a}"
        )));
    }
    let gs = Arc::new(build_gamma_set(m)?);
    let phi0 = gs.first_basis_spinor();
    let p0 = phi0.clone();
    let evaluate: PointFn = Arc::new(move |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        &p0 * C64::new((-a * r2).exp(), 0.0)
    });
    let g = gs.clone();
    let dirac: PointFn = Arc::new(move |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        g.contract_apply(x, &phi0) * C64::new(0.0, 2.0 * a * (-a * r2).exp())
    });
    let profile = RadialProfile::new(move |r| (-a * r * r).exp()).decreasing();
    let dirac_profile = RadialProfile::new(move |r| 2.0 * a * r * (-a * r * r).exp());
    Ok(SpinorField {
        dim: m,
        spinor_dim: gs.spinor_dim(),
        kind: FieldKind::Gaussian,
        gammas: Some(gs),
        evaluate,
        dirac: Some(dirac),
        profile: Some(profile),
        dirac_profile: Some(dirac_profile),
        support_radius: f64::INFINITY,
        form: DiracForm::Clifford(Arc::new(move |r| -2.0 * a * r)),
    })
}

/// `χ_n f`, with the product-rule Dirac image
/// `χ (γ·p)f - i χ'(r) (γ·x/r) f`.
pub fn apply_cutoff(f: &SpinorField, w: CutoffWindow) -> Result<SpinorField> {
    let (Some(dirac), Some(gs)) = (f.dirac.clone(), f.gammas.clone()) else {
        return Err(Error::UnsupportedField(
            "cutoff needs a field with an analytic Dirac image".into(),
        ));
    };
    let ell = gs.spinor_dim();
    let inner_eval = f.evaluate.clone();
    let evaluate: PointFn = Arc::new(move |x: &[f64]| {
        let chi = w.value(radius(x));
        if chi == 0.0 {
            return Spinor::zeros(ell);
        }
        inner_eval(x) * C64::new(chi, 0.0)
    });
    let inner_eval = f.evaluate.clone();
    let g = gs.clone();
    let cut_dirac: PointFn = Arc::new(move |x: &[f64]| {
        let r = radius(x);
        let chi = w.value(r);
        let dchi = w.derivative(r);
        let mut out = if chi == 0.0 {
            Spinor::zeros(g.spinor_dim())
        } else {
            dirac(x) * C64::new(chi, 0.0)
        };
        if dchi != 0.0 {
            let fx = inner_eval(x);
            let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
            out -= g.contract_apply(&unit, &fx) * C64::new(0.0, dchi);
        }
        out
    });
    let support = w.outer().min(f.support_radius);
    let profile = f.profile.as_ref().map(|p| {
        p.map(move |r, v| w.value(r) * v)
            .with_breakpoints([w.inner, w.outer()])
            .with_support(support)
    });
    let dirac_profile = match (&f.form, &f.profile) {
        (DiracForm::Eigen(lambda), Some(p)) => {
            let lambda = lambda.clone();
            Some(p.map(move |r, v| {
                let a = w.value(r) * lambda(r);
                let b = w.derivative(r);
                (a * a + b * b).sqrt() * v
            }))
        }
        (DiracForm::Clifford(s), Some(p)) => {
            let s = s.clone();
            Some(p.map(move |r, v| (w.value(r) * s(r) + w.derivative(r)).abs() * v))
        }
        _ => None,
    }
    .map(|p| {
        let mut p = p
            .with_breakpoints([w.inner, w.outer()])
            .with_support(support);
        p.monotone_decreasing = false;
        p
    });
    Ok(SpinorField {
        dim: f.dim,
        spinor_dim: f.spinor_dim,
        kind: if f.kind == FieldKind::LossYau {
            FieldKind::CutoffLossYau
        } else {
            FieldKind::Custom
        },
        gammas: f.gammas.clone(),
        evaluate,
        dirac: Some(cut_dirac),
        profile,
        dirac_profile,
        support_radius: support,
        form: DiracForm::Unknown,
    })
}

/// Central-difference `-i Σ_j γ_j (f(x+h e_j) - f(x-h e_j)) / 2h`.
pub fn dirac_fd(gs: &GammaSet, f: &SpinorField, x: &[f64], h: f64) -> Result<Spinor> {
    if !(h > 0.0) {
        return Err(argument(format!("step must be positive, got {h}")));
    }
    if x.len() != gs.dimension() || f.dim != gs.dimension() {
        return Err(argument("point, field and gamma set dimensions differ"));
    }
    if f.spinor_dim != gs.spinor_dim() {
        return Err(argument(
            "field spinor dimension does not match the gamma set",
        ));
    }
    let mut out = Spinor::zeros(gs.spinor_dim());
    let mut y = x.to_vec();
    for (j, g) in gs.generators().iter().enumerate() {
        y[j] = x[j] + h;
        let plus = f.evaluate(&y);
        y[j] = x[j] - h;
        let minus = f.evaluate(&y);
        y[j] = x[j];
        let diff = (plus - minus) / C64::new(2.0 * h, 0.0);
        out += g * diff;
    }
    Ok(out * C64::new(0.0, -1.0))
}
