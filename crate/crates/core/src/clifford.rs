//! Hermitian generators of a Clifford algebra on `C^ℓ`, `ℓ = 2^(m-2)`.
//!
//! The construction starts from the Pauli matrices at `m = 3` and doubles the
//! spinor dimension at each step:
//!
//! ```text
//! γ_j^(m+1)     = [[0, γ_j^(m)], [γ_j^(m), 0]]     j = 1..m
//! γ_{m+1}^(m+1) = [[I, 0], [0, -I]]
//! ```
//!
//! Every entry stays in `{0, ±1, ±i}`, so products and sums of generators are
//! exact in floating point and [`verify_clifford`] can be run with `tol = 0`.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type Spinor = DVector<C64>;

const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
const ONE: C64 = Complex { re: 1.0, im: 0.0 };
const I: C64 = Complex { re: 0.0, im: 1.0 };

/// The `m` generators of a Clifford algebra representation on `C^ℓ`.
///
/// Values are immutable once built; share them behind an `Arc` when several
/// fields need the same set.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSet {
    m: usize,
    ell: usize,
    generators: Vec<CMatrix>,
}

/// The three Pauli matrices, in the usual order.
pub fn pauli() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Builds the recursive gamma set for dimension `m >= 3`.
pub fn build_gamma_set(m: usize) -> Result<GammaSet> {
    if m < 3 {
        return Err(Error::DimensionRange { m, min: 3 });
    }
    let mut generators: Vec<CMatrix> = pauli().into();
    let mut ell = 2;
    for _ in 3..m {
        let mut next = Vec::with_capacity(generators.len() + 1);
        for g in &generators {
            let mut block = CMatrix::zeros(2 * ell, 2 * ell);
            block.view_mut((0, ell), (ell, ell)).copy_from(g);
            block.view_mut((ell, 0), (ell, ell)).copy_from(g);
            next.push(block);
        }
        let mut last = CMatrix::identity(2 * ell, 2 * ell);
        for k in ell..2 * ell {
            last[(k, k)] = -ONE;
        }
        next.push(last);
        generators = next;
        ell *= 2;
    }
    Ok(GammaSet { m, ell, generators })
}

impl GammaSet {
    /// Wraps externally supplied generators. Only shapes are checked here;
    /// run [`verify_clifford`] to check the algebra.
    pub fn from_generators(generators: Vec<CMatrix>) -> Result<Self> {
        let m = generators.len();
        let ell = generators.first().map(|g| g.nrows()).unwrap_or(0);
        if ell == 0 {
            return Err(argument("gamma set needs at least one non-empty generator"));
        }
        if generators
            .iter()
            .any(|g| g.nrows() != ell || g.ncols() != ell)
        {
            return Err(argument("generators must all be square with the same size"));
        }
        Ok(Self { m, ell, generators })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn spinor_dim(&self) -> usize {
        self.ell
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// `φ₀ = (1, 0, …, 0)`.
    pub fn first_basis_spinor(&self) -> Spinor {
        let mut v = Spinor::zeros(self.ell);
        v[0] = ONE;
        v
    }

    /// `Σ_j v_j γ_j` applied to `s`, without forming the contracted matrix.
    pub fn contract_apply(&self, v: &[f64], s: &Spinor) -> Spinor {
        debug_assert_eq!(v.len(), self.m);
        let mut out = Spinor::zeros(self.ell);
        for (g, &vj) in self.generators.iter().zip(v) {
            if vj == 0.0 {
                continue;
            }
            for (k, sk) in s.iter().enumerate() {
                if *sk == ZERO {
                    continue;
                }
                for i in 0..self.ell {
                    let gik = g[(i, k)];
                    if gik != ZERO {
                        out[i] += gik * *sk * vj;
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&GammaSetDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GammaSetDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// `Σ_j v_j γ_j`.
pub fn contract(gs: &GammaSet, v: &[f64]) -> Result<CMatrix> {
    if v.len() != gs.m {
        return Err(argument(format!(
            "vector has length {}, gamma set has dimension {}",
            v.len(),
            gs.m
        )));
    }
    let mut out = CMatrix::zeros(gs.ell, gs.ell);
    for (g, &vj) in gs.generators.iter().zip(v) {
        out += g * C64::new(vj, 0.0);
    }
    Ok(out)
}

/// Outcome of [`verify_clifford`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CliffordReport {
    pub m: usize,
    pub ell: usize,
    /// `max_j max_{ik} |γ_j - γ_j^*|`
    pub hermiticity_defect: f64,
    /// `max_{j,k} max_{ik} |γ_jγ_k + γ_kγ_j - 2δ_{jk}I|`
    pub anticommutator_defect: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Measures the Hermiticity and anti-commutation defects of a gamma set.
/// Passes iff both defects are `<= tol`.
pub fn verify_clifford(gs: &GammaSet, tol: f64) -> CliffordReport {
    let ell = gs.ell;
    let mut herm: f64 = 0.0;
    for g in &gs.generators {
        for i in 0..ell {
            for k in 0..ell {
                herm = herm.max((g[(i, k)] - g[(k, i)].conj()).norm());
            }
        }
    }
    let mut anti: f64 = 0.0;
    for j in 0..gs.m {
        for k in j..gs.m {
            let mut s = sparse_product(&gs.generators[j], &gs.generators[k]);
            s += sparse_product(&gs.generators[k], &gs.generators[j]);
            if j == k {
                for d in 0..ell {
                    s[(d, d)] -= C64::new(2.0, 0.0);
                }
            }
            anti = s.iter().fold(anti, |acc, z| acc.max(z.norm()));
        }
    }
    CliffordReport {
        m: gs.m,
        ell,
        hermiticity_defect: herm,
        anticommutator_defect: anti,
        tol,
        pass: herm <= tol && anti <= tol,
    }
}

// The recursive generators have one non-zero per row; skipping zeros keeps
// the m = 10 check (ℓ = 256) at O(ℓ²) per product.
fn sparse_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, b.ncols());
    for i in 0..n {
        for k in 0..a.ncols() {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.ncols() {
                let bkj = b[(k, j)];
                if bkj != ZERO {
                    out[(i, j)] += aik * bkj;
                }
            }
        }
    }
    out
}

/// On-disk layout: `{"m", "ell", "generators": [[[re, im], ...], ...]}`, each
/// generator flattened row-major.
#[derive(Serialize, Deserialize)]
struct GammaSetDoc {
    m: usize,
    ell: usize,
    generators: Vec<Vec<[f64; 2]>>,
}

impl From<&GammaSet> for GammaSetDoc {
    fn from(gs: &GammaSet) -> Self {
        let generators = gs
            .generators
            .iter()
            .map(|g| {
                (0..gs.ell)
                    .flat_map(|i| (0..gs.ell).map(move |k| (i, k)))
                    .map(|(i, k)| [g[(i, k)].re, g[(i, k)].im])
                    .collect()
            })
            .collect();
        Self {
            m: gs.m,
            ell: gs.ell,
            generators,
        }
    }
}

impl TryFrom<GammaSetDoc> for GammaSet {
    type Error = Error;

    fn try_from(doc: GammaSetDoc) -> Result<Self> {
        if doc.generators.len() != doc.m {
            return Err(argument(format!(
                "document declares m = {} but holds {} generators",
                doc.m,
                doc.generators.len()
            )));
        }
        let mut generators = Vec::with_capacity(doc.m);
        for flat in &doc.generators {
            if flat.len() != doc.ell * doc.ell {
                return Err(argument("generator entry count does not match ell²"));
            }
            let entries: Vec<C64> = flat.iter().map(|[re, im]| C64::new(*re, *im)).collect();
            generators.push(CMatrix::from_row_slice(doc.ell, doc.ell, &entries));
        }
        GammaSet::from_generators(generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_is_pauli() {
        let gs = build_gamma_set(3).unwrap();
        assert_eq!(gs.spinor_dim(), 2);
        assert_eq!(gs.generators(), &pauli()[..]);
    }

    #[test]
    fn rejects_low_dimensions() {
        for m in 0..3 {
            assert!(matches!(
                build_gamma_set(m),
                Err(Error::DimensionRange { .. })
            ));
        }
    }

    #[test]
    fn last_generator_of_m4_is_diag() {
        let gs = build_gamma_set(4).unwrap();
        assert_eq!(gs.spinor_dim(), 4);
        let g4 = &gs.generators()[3];
        let diag: Vec<f64> = (0..4).map(|k| g4[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(g4.iter().filter(|z| **z != ZERO).count(), 4);
    }

    #[test]
    fn distinct_pairs_anticommute_m5() {
        let gs = build_gamma_set(5).unwrap();
        let mut pairs = 0;
        for j in 0..5 {
            for k in j + 1..5 {
                let a = &gs.generators()[j];
                let b = &gs.generators()[k];
                let s = a * b + b * a;
                assert!(s.iter().all(|z| *z == ZERO), "pair ({j},{k})");
                pairs += 1;
            }
        }
        assert_eq!(pairs, 10);
    }

    #[test]
    fn contraction_of_unit_vector() {
        let gs = build_gamma_set(3).unwrap();
        assert_eq!(contract(&gs, &[0.0, 0.0, 1.0]).unwrap(), pauli()[2]);
        assert_eq!(contract(&gs, &[0.0; 3]).unwrap(), CMatrix::zeros(2, 2));
        assert!(contract(&gs, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn exact_for_m8() {
        let report = verify_clifford(&build_gamma_set(8).unwrap(), 0.0);
        assert!(report.pass);
        assert_eq!(report.anticommutator_defect, 0.0);
        assert_eq!(report.hermiticity_defect, 0.0);
    }

    #[test]
    fn perturbed_entry_is_detected() {
        let mut gens = build_gamma_set(3).unwrap().generators().to_vec();
        gens[0][(0, 0)] += C64::new(1e-3, 0.0);
        let gs = GammaSet::from_generators(gens).unwrap();
        let report = verify_clifford(&gs, 1e-6);
        assert!(!report.pass);
        // {γ₁+δE, γ₁+δE} - 2I = 2δ(E₀₁ + E₁₀) + 2δ²E₀₀
        assert!((report.anticommutator_defect - 2e-3).abs() < 1e-12);
        assert_eq!(report.hermiticity_defect, 0.0);
    }

    #[test]
    fn contract_apply_matches_matrix() {
        let gs = build_gamma_set(5).unwrap();
        let v = [0.3, -1.2, 0.5, 2.0, -0.7];
        let s = Spinor::from_fn(8, |i, _| C64::new(i as f64, 1.0 - i as f64));
        let direct = contract(&gs, &v).unwrap() * &s;
        let fast = gs.contract_apply(&v, &s);
        assert!((direct - fast).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let gs = build_gamma_set(4).unwrap();
        let text = gs.to_json().unwrap();
        assert!(text.starts_with(r#"{"m":4,"ell":4,"generators":[[[0.0,0.0],"#));
        assert_eq!(GammaSet::from_json(&text).unwrap(), gs);
        assert!(GammaSet::from_json(r#"{"m":2,"ell":2,"generators":[]}"#).is_err());
    }
}
