use super::{assemble_system, ObliqueProjector};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ShiftedFamily;
use crate::sampling::SampleRecord;
use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;

/// Consecutive growing increments after which the iteration is abandoned.
const DIVERGENCE_RUN: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// `‖c_{m+1} − c_m‖₂` for `m = 0, 1, …`.
    pub increment_norms: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
    /// Geometric mean of the measured increment ratios.
    pub contraction_estimate: f64,
    /// `ρ = ‖A_Γ A_L⁻¹ − I‖₂`.
    pub certified_bound: f64,
    /// The same matrix in the induced ∞-norm.
    pub certified_bound_inf: f64,
    /// `ρ^{m+1}/(1 − ρ) ‖c₀‖₂`, infinite when `ρ ≥ 1`.
    pub tail_bound: f64,
}

impl IterationReport {
    pub fn contractive(&self) -> bool {
        self.certified_bound < 1.0
    }

    /// `step,increment_norm` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,increment_norm\n");
        for (k, v) in self.increment_norms.iter().enumerate() {
            let _ = writeln!(out, "{},{v:.16e}", k + 1);
        }
        out
    }
}

/// Runs `c_{m+1} = c_m − Mᵀ c_m + c₀` with `M = A_Γ B`, `B = A_L⁻¹` and
/// `c₀ = Bᵀ rhs`. The recursion is carried on the increments,
/// `d_{m+1} = (I − Mᵀ) d_m`, so that small increments keep full relative
/// accuracy.
pub fn iterate_coefficients(
    a_gamma: &DMatrix<f64>,
    rhs: &DVector<f64>,
    inverse_block: &DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterationReport)> {
    let n = a_gamma.nrows();
    if a_gamma.ncols() != n || inverse_block.shape() != (n, n) || rhs.len() != n {
        return Err(Error::InvalidArgument(
            "iteration needs square blocks of one size".into(),
        ));
    }
    let m = a_gamma * inverse_block;
    let step = DMatrix::<f64>::identity(n, n) - m.transpose();
    let rho = linalg::spectral_norm(&step);
    let rho_inf = linalg::inf_norm(&(&m - DMatrix::<f64>::identity(n, n)));
    let c0 = inverse_block.tr_mul(rhs);

    let mut c = c0.clone();
    let mut d = &step * &c0;
    let mut norms = Vec::new();
    let mut converged = false;
    let mut growing = 0;
    for _ in 0..max_iter {
        c += &d;
        let norm = d.norm();
        if !norm.is_finite() {
            return Err(Error::DivergenceDetected {
                steps: norms.len() + 1,
                rho,
            });
        }
        if norms.last().is_some_and(|&prev| norm > prev) {
            growing += 1;
        } else {
            growing = 0;
        }
        norms.push(norm);
        if norm <= tol {
            converged = true;
            break;
        }
        if growing >= DIVERGENCE_RUN {
            return Err(Error::DivergenceDetected {
                steps: norms.len(),
                rho,
            });
        }
        d = &step * &d;
    }

    let steps = norms.len();
    let contraction_estimate = match (norms.first(), norms.last()) {
        (Some(&first), Some(&last)) if steps > 1 && first > 0.0 && last > 0.0 => {
            (last / first).powf(1.0 / (steps - 1) as f64)
        }
        _ => 0.0,
    };
    let tail_bound = if rho < 1.0 {
        rho.powi(steps as i32 + 1) / (1.0 - rho) * c0.norm()
    } else {
        f64::INFINITY
    };
    let report = IterationReport {
        increment_norms: norms,
        converged,
        steps,
        contraction_estimate,
        certified_bound: rho,
        certified_bound_inf: rho_inf,
        tail_bound,
    };
    Ok((c.as_slice().to_vec(), report))
}

/// Approximation-projection iteration for the samples in `rec`, started at
/// `g₀ = P S f`.
pub fn iterate_ap(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    rec: &SampleRecord,
    l: usize,
    projector: &ObliqueProjector,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterationReport)> {
    if projector.half_width != l {
        return Err(Error::WindowMismatch(format!(
            "projector window {} differs from L = {l}",
            projector.half_width
        )));
    }
    let sys = assemble_system(trial, test, rec, l, l)?;
    iterate_coefficients(&sys.matrix, &sys.rhs, &projector.inverse_block, tol, max_iter)
}
