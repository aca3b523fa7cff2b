//! Galerkin systems, their square and least-squares solves, the oblique
//! projection and the iterative approximation-projection algorithm.

mod iterate;
mod projector;

pub use iterate::{iterate_ap, iterate_coefficients, IterationReport};
pub use projector::{apply_projector, apply_projector_to, build_projector, ObliqueProjector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ShiftedFamily;
use crate::sampling::{SampleRecord, SamplingSet};
use nalgebra::{DMatrix, DVector};

/// `A_{Φ,Φ̃,Γ}` with entry `(i + L, j + L̃) = Σ_n w_n φ₀(γ_n − i − θ_i) φ̃₀(γ_n − j − θ̃_j)`
/// and right-hand side `rhs[j + L̃] = Σ_n w_n f(γ_n) φ̃₀(γ_n − j − θ̃_j)`.
///
/// The Galerkin equations sum over `i` for each `j`, so the coefficients
/// solve `Aᵀ c = rhs`.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub half_width: usize,
    pub test_half_width: usize,
    pub set: SamplingSet,
}

/// `(Φ_s)_{n, i} = φ₀(γ_n − i − θ_i)` for `|i| ≤ l`.
pub fn sample_matrix(family: &ShiftedFamily, l: usize, abscissae: &[f64]) -> DMatrix<f64> {
    let li = l as i64;
    DMatrix::from_fn(abscissae.len(), 2 * l + 1, |n, c| {
        family.basis(c as i64 - li, abscissae[n])
    })
}

pub fn assemble_system(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    rec: &SampleRecord,
    l: usize,
    lt: usize,
) -> Result<GalerkinSystem> {
    if rec.set.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    trial.require_window(l, "trial family")?;
    test.require_window(lt, "test family")?;
    let gammas = rec.set.abscissae();
    let mut phi = sample_matrix(trial, l, gammas);
    let psi = sample_matrix(test, lt, gammas);
    let w = DVector::from_column_slice(rec.set.weights());
    let wf = w.component_mul(&DVector::from_column_slice(&rec.values));
    let rhs = psi.tr_mul(&wf);
    for (mut row, wn) in phi.row_iter_mut().zip(w.iter()) {
        row *= *wn;
    }
    let matrix = phi.tr_mul(&psi);
    Ok(GalerkinSystem {
        matrix,
        rhs,
        half_width: l,
        test_half_width: lt,
        set: rec.set.clone(),
    })
}

impl GalerkinSystem {
    pub fn is_square(&self) -> bool {
        self.half_width == self.test_half_width
    }

    /// Spectral condition number of the system matrix.
    pub fn condition(&self) -> Result<f64> {
        linalg::condition_number(&self.matrix)
    }
}

/// Solves the square Galerkin equations `Aᵀ c = rhs` by LU with partial
/// pivoting.
pub fn solve_galerkin(sys: &GalerkinSystem) -> Result<Vec<f64>> {
    if !sys.is_square() {
        return Err(Error::InvalidArgument(format!(
            "square solve needs L = L̃, got {} and {}",
            sys.half_width, sys.test_half_width
        )));
    }
    let at = sys.matrix.transpose();
    let cond = linalg::condition_number(&at).unwrap_or(f64::INFINITY);
    if !(cond <= linalg::SINGULAR_CONDITION) {
        return Err(Error::SingularSystem { cond });
    }
    let c = at.clone().lu().solve(&sys.rhs).ok_or(Error::SingularSystem { cond })?;
    let residual = (&at * &c - &sys.rhs).norm();
    let scale = linalg::spectral_norm(&at) * c.norm() + sys.rhs.norm();
    if residual > 1e-10 * scale {
        return Err(Error::SingularSystem { cond });
    }
    Ok(c.as_slice().to_vec())
}

/// Least-squares solution of `Aᵀ c ≈ rhs` for `L̃ ≥ L` (sub-Galerkin).
pub fn solve_subgalerkin_lsq(sys: &GalerkinSystem) -> Result<Vec<f64>> {
    if sys.test_half_width < sys.half_width {
        return Err(Error::InvalidArgument(format!(
            "least squares needs L̃ ≥ L, got L̃ = {} < L = {}",
            sys.test_half_width, sys.half_width
        )));
    }
    let at = sys.matrix.transpose();
    let svd = at.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if !(ratio >= 1e-12) {
        return Err(Error::RankDeficient { ratio });
    }
    let c = svd.solve(&sys.rhs, 0.0).map_err(|_| Error::RankDeficient { ratio })?;
    Ok(c.as_slice().to_vec())
}
