use serde::{Deserialize, Serialize};

use super::ball_volume;
use crate::clifford::C64;
use crate::error::{argument, Result};

/// A measurable cell with an exactly known volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    /// `{x : inner <= |x| < outer}`
    Annulus { inner: f64, outer: f64 },
    /// `Π [lo_i, hi_i)`
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Cell {
    pub fn volume(&self, dim: usize) -> f64 {
        match self {
            Cell::Annulus { inner, outer } => {
                ball_volume(dim) * (outer.powi(dim as i32) - inner.powi(dim as i32))
            }
            Cell::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Cell::Annulus { inner, outer } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                *inner <= r && r < *outer
            }
            Cell::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| a <= v && v < b),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Cell::Annulus { inner, outer } => inner >= outer,
            Cell::Box { lo, hi } => lo.iter().zip(hi).any(|(a, b)| a >= b),
        }
    }

    // Closest and farthest distance from the origin.
    fn radial_range(&self) -> (f64, f64) {
        match self {
            Cell::Annulus { inner, outer } => (*inner, *outer),
            Cell::Box { lo, hi } => {
                let (mut near, mut far) = (0.0, 0.0);
                for (a, b) in lo.iter().zip(hi) {
                    let n = if *a > 0.0 {
                        *a
                    } else if *b < 0.0 {
                        -*b
                    } else {
                        0.0
                    };
                    let f = a.abs().max(b.abs());
                    near += n * n;
                    far += f * f;
                }
                (near.sqrt(), far.sqrt())
            }
        }
    }

    /// Intersection of two cells of the same shape. Mixed shapes are not
    /// representable as a single cell.
    pub fn intersect(&self, other: &Cell) -> Result<Option<Cell>> {
        let cell = match (self, other) {
            (
                Cell::Annulus {
                    inner: a0,
                    outer: a1,
                },
                Cell::Annulus {
                    inner: b0,
                    outer: b1,
                },
            ) => Cell::Annulus {
                inner: a0.max(*b0),
                outer: a1.min(*b1),
            },
            (Cell::Box { lo: al, hi: ah }, Cell::Box { lo: bl, hi: bh }) => Cell::Box {
                lo: al.iter().zip(bl).map(|(a, b)| a.max(*b)).collect(),
                hi: ah.iter().zip(bh).map(|(a, b)| a.min(*b)).collect(),
            },
            _ => {
                let (n0, f0) = self.radial_range();
                let (n1, f1) = other.radial_range();
                if f0 <= n1 || f1 <= n0 {
                    return Ok(None);
                }
                return Err(argument("cannot intersect an annulus with a box"));
            }
        };
        Ok((!cell.is_empty()).then_some(cell))
    }

    fn disjoint_from(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Annulus { .. }, Cell::Annulus { .. }) | (Cell::Box { .. }, Cell::Box { .. }) => {
                matches!(self.intersect(other), Ok(None))
            }
            _ => {
                let (n0, f0) = self.radial_range();
                let (n1, f1) = other.radial_range();
                f0 <= n1 || f1 <= n0
            }
        }
    }
}

/// A finitely-valued function on pairwise-disjoint cells, zero elsewhere.
/// Its distribution function and weak quasi-norms are exact finite sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleFunction {
    dim: usize,
    cells: Vec<(Cell, C64)>,
}

impl SimpleFunction {
    /// Validates shapes and pairwise disjointness. Mixed annulus/box pairs are
    /// accepted only when their radial ranges are separated.
    pub fn new(dim: usize, cells: Vec<(Cell, C64)>) -> Result<Self> {
        for (cell, _) in &cells {
            match cell {
                Cell::Annulus { inner, outer } => {
                    if !(*inner >= 0.0 && inner < outer) {
                        return Err(argument("annulus needs 0 <= inner < outer"));
                    }
                }
                Cell::Box { lo, hi } => {
                    if lo.len() != dim || hi.len() != dim {
                        return Err(argument("box corner has the wrong dimension"));
                    }
                    if lo.iter().zip(hi).any(|(a, b)| a >= b) {
                        return Err(argument("box needs lo < hi on every axis"));
                    }
                }
            }
        }
        for (i, (a, _)) in cells.iter().enumerate() {
            for (b, _) in &cells[i + 1..] {
                if !a.disjoint_from(b) {
                    return Err(argument("cells overlap"));
                }
            }
        }
        Ok(Self { dim, cells })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[(Cell, C64)] {
        &self.cells
    }

    pub fn value_at(&self, x: &[f64]) -> C64 {
        self.cells
            .iter()
            .find(|(c, _)| c.contains(x))
            .map(|(_, v)| *v)
            .unwrap_or_default()
    }

    /// `μ{|f| > t}`.
    pub fn distribution(&self, t: f64) -> f64 {
        self.cells
            .iter()
            .filter(|(_, v)| v.norm() > t)
            .map(|(c, _)| c.volume(self.dim))
            .sum()
    }

    /// Pointwise product, supported on the pairwise intersections of cells.
    pub fn product(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        if self.dim != other.dim {
            return Err(argument("simple functions live in different dimensions"));
        }
        let mut cells = Vec::new();
        for (a, va) in &self.cells {
            for (b, vb) in &other.cells {
                if let Some(c) = a.intersect(b)? {
                    cells.push((c, va * vb));
                }
            }
        }
        Ok(SimpleFunction {
            dim: self.dim,
            cells,
        })
    }

    /// Exact `‖f‖_{q,∞}`: on `[t_{k+1}, t_k)` the level set is constant, so the
    /// supremum is `max_k t_k·μ{|f| >= t_k}^{1/q}`.
    pub fn weak_norm(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return Err(argument(format!("weak norm needs q > 0, got {q}")));
        }
        let mut levels: Vec<(f64, f64)> = self
            .cells
            .iter()
            .map(|(c, v)| (v.norm(), c.volume(self.dim)))
            .filter(|(t, _)| *t > 0.0)
            .collect();
        levels.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut best: f64 = 0.0;
        let mut measure = 0.0;
        let mut i = 0;
        while i < levels.len() {
            let t = levels[i].0;
            while i < levels.len() && levels[i].0 == t {
                measure += levels[i].1;
                i += 1;
            }
            best = best.max(t * measure.powf(1.0 / q));
        }
        Ok(best)
    }
}
