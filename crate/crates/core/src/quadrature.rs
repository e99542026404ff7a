//! Quadrature building blocks: Gauss–Legendre panels, radial edge grids,
//! product rules on `S^{m-1}`, Halton points and the heavy-tailed importance
//! sampler used by the Monte Carlo paths.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Nodes per Gauss–Legendre panel.
pub const GL_ORDER: usize = 16;

/// Decades integrated numerically past `r_max` before the analytic tail
/// takes over.
pub const TAIL_DECADES: u32 = 8;

/// Pointwise norm on `C^ℓ` used inside integrals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorNorm {
    L1,
    #[default]
    L2,
}

/// Parameters shared by every integral in [`crate::measure`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre panels on `[0, 1]` and per decade beyond it.
    pub panels: usize,
    /// Radius where the numerical radial integral hands over to tail
    /// handling; also bounds convolution radii.
    pub r_max: f64,
    /// Gauss–Legendre nodes per polar angle on spheres (the azimuth uses
    /// twice as many trapezoid nodes).
    pub angular_order: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub vector_norm: VectorNorm,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 64,
            r_max: 50.0,
            angular_order: 8,
            mc_samples: 100_000,
            seed: 1,
            vector_norm: VectorNorm::L2,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> crate::Result<()> {
        if self.panels == 0 {
            return Err(crate::error::argument("panel count must be >= 1"));
        }
        if !(self.r_max > 0.0) {
            return Err(crate::error::argument("r_max must be positive"));
        }
        if self.angular_order == 0 {
            return Err(crate::error::argument("angular order must be >= 1"));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// `∫_a^b f` with one 16-point Gauss–Legendre panel.
pub fn gl_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Composite rule over consecutive `edges`.
pub fn composite(mut f: impl FnMut(f64) -> f64, edges: &[f64]) -> f64 {
    edges.windows(2).map(|w| gl_panel(&mut f, w[0], w[1])).sum()
}

/// Nodes and weights of the composite rule over `edges`.
pub fn composite_rule(edges: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gl16();
    let mut nodes = Vec::with_capacity(GL_ORDER * edges.len());
    let mut weights = Vec::with_capacity(GL_ORDER * edges.len());
    for pair in edges.windows(2) {
        let half = 0.5 * (pair[1] - pair[0]);
        let mid = 0.5 * (pair[0] + pair[1]);
        for (xi, wi) in x.iter().zip(w) {
            nodes.push(mid + half * xi);
            weights.push(wi * half);
        }
    }
    (nodes, weights)
}

/// Panel edges on `[0, upper]`: `panels` uniform panels on `[0, 1]`, then
/// `panels` geometric panels per decade, split at each breakpoint. Short
/// intervals between breakpoints get four panels so that smooth transition
/// layers are resolved.
pub fn radial_edges(upper: f64, panels: usize, breakpoints: &[f64]) -> Vec<f64> {
    let mut edges = Vec::new();
    let head = upper.min(1.0);
    for k in 0..=panels {
        edges.push(head * k as f64 / panels as f64);
    }
    if upper > 1.0 {
        for k in 1.. {
            let r = 10f64.powf(k as f64 / panels as f64);
            if r >= upper * (1.0 - 1e-14) {
                break;
            }
            edges.push(r);
        }
        edges.push(upper);
    }
    let mut bps: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > 0.0 && *b < upper)
        .collect();
    bps.sort_by(f64::total_cmp);
    for pair in bps.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        for k in 1..4 {
            edges.push(a + (b - a) * k as f64 / 4.0);
        }
    }
    // Near-coincident edges collapse onto the breakpoint so it stays exact.
    edges.retain(|e| !bps.iter().any(|b| (e - b).abs() <= 1e-12 * b));
    edges.extend(bps);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges
}

/// Geometric edges from `lo` to `lo·10^decades`.
pub fn geometric_edges(lo: f64, decades: u32, panels: usize) -> Vec<f64> {
    let n = decades as usize * panels;
    let ratio = 10f64.powf(1.0 / panels as f64);
    let mut edges = Vec::with_capacity(n + 1);
    let mut r = lo;
    edges.push(r);
    for _ in 0..n {
        r *= ratio;
        edges.push(r);
    }
    edges
}

/// Product quadrature on the unit sphere `S^{m-1}` in hyperspherical
/// coordinates: Gauss–Legendre in each polar angle (with the `sin^k` Jacobian
/// folded into the weights) and the trapezoid rule in the azimuth.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(dim: usize, order: usize) -> Self {
        assert!(dim >= 2, "sphere rule needs dim >= 2");
        let (x, w) = gauss_legendre(order);
        let polar: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| (0.5 * PI * (xi + 1.0), 0.5 * PI * wi))
            .collect();
        let n_az = 2 * order;
        let az_w = 2.0 * PI / n_az as f64;

        let mut directions = Vec::new();
        let mut weights = Vec::new();
        let n_polar = dim - 2;
        let mut idx = vec![0usize; n_polar];
        loop {
            let mut dir = vec![0.0; dim];
            let mut prefix = 1.0;
            let mut weight = az_w;
            for (k, &i) in idx.iter().enumerate() {
                let (theta, wt) = polar[i];
                dir[k] = prefix * theta.cos();
                weight *= wt * theta.sin().powi((dim - 2 - k) as i32);
                prefix *= theta.sin();
            }
            for a in 0..n_az {
                let phi = (a as f64 + 0.5) * az_w;
                let mut d = dir.clone();
                d[dim - 2] = prefix * phi.cos();
                d[dim - 1] = prefix * phi.sin();
                directions.push(d);
                weights.push(weight);
            }
            // odometer over the polar indices
            let mut k = 0;
            loop {
                if k == n_polar {
                    return Self {
                        dim,
                        directions,
                        weights,
                    };
                }
                idx[k] += 1;
                if idx[k] < order {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// The `index`-th point of the Halton sequence in `[0, 1)^dim`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    assert!(dim <= PRIMES.len(), "halton supports up to 16 dimensions");
    PRIMES[..dim]
        .iter()
        .map(|&b| {
            let mut i = index;
            let mut f = 1.0;
            let mut r = 0.0;
            while i > 0 {
                f /= b as f64;
                r += f * (i % b) as f64;
                i /= b;
            }
            r
        })
        .collect()
}

/// A point drawn from the density `(1+|x|)^{-(m+1)} / ω_m` on `R^m`, together
/// with that density.
#[derive(Clone, Debug)]
pub struct ImportanceSample {
    pub point: Vec<f64>,
    pub radius: f64,
    pub density: f64,
}

/// Samples the heavy-tailed importance density. The radial CDF is
/// `(r/(1+r))^m`, inverted in closed form; directions come from normalised
/// Gaussians.
#[derive(Clone, Debug)]
pub struct ImportanceSampler {
    dim: usize,
    inv_ball_volume: f64,
}

impl ImportanceSampler {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            inv_ball_volume: 1.0 / crate::measure::ball_volume(dim),
        }
    }

    pub fn density(&self, r: f64) -> f64 {
        self.inv_ball_volume * (1.0 + r).powi(-(self.dim as i32 + 1))
    }

    pub fn sample(&self, rng: &mut impl Rng) -> ImportanceSample {
        let u: f64 = rng.random();
        let s = u.powf(1.0 / self.dim as f64);
        let radius = s / (1.0 - s);
        let mut dir: Vec<f64> = (0..self.dim).map(|_| standard_normal(rng)).collect();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        for d in &mut dir {
            *d *= radius / norm;
        }
        ImportanceSample {
            point: dir,
            radius,
            density: self.density(radius),
        }
    }
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box–Muller; the open interval avoids ln(0).
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Independent, reproducible stream number `stream` derived from `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
