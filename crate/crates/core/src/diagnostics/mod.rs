//! Best approximations, error metrics, stability bounds and admissibility
//! constants.
//!
//! At `p = 2` on a finite window every sup/inf constant reduces to an
//! extremal eigenvalue of a symmetric-definite pencil whose right-hand side
//! is the Gram matrix of the trial basis, so `xᵀ G x = ‖f‖₂²` for
//! `f = Σ x_i φ_i`.

mod admissibility;

pub use admissibility::{admissibility_report, AdmissibilityReport, GridOptions};

use crate::error::{Error, Result};
use crate::kernels::{integrate_with_breakpoints, Domain, QuadratureSpec};
use crate::linalg;
use crate::model::{cross_gram, gram, l2_distance, Evaluable, FriSignal, ShiftedFamily};
use crate::reconstruct::sample_matrix;
use crate::sampling::SamplingSet;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

pub use crate::linalg::condition_number;

/// Orthogonal projection of a signal onto `V_{2,L}(Φ)`.
#[derive(Debug, Clone)]
pub struct BestApproximation {
    pub signal: FriSignal,
    /// `‖x − y‖₂`.
    pub error: f64,
}

impl BestApproximation {
    pub fn coefficients(&self) -> &[f64] {
        self.signal.coefficients()
    }
}

fn solve_gram(g: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let cond = linalg::condition_number(g).map_err(|_| Error::SingularGram)?;
    if cond > linalg::SINGULAR_CONDITION {
        return Err(Error::SingularGram);
    }
    let chol = linalg::symmetrize(g).cholesky().ok_or(Error::SingularGram)?;
    Ok(chol.solve(b))
}

fn finish(trial: &ShiftedFamily, g: &DMatrix<f64>, b: &DVector<f64>, norm_sq: f64) -> Result<BestApproximation> {
    let c = solve_gram(g, b)?;
    let err_sq = norm_sq - 2.0 * c.dot(b) + c.dot(&(g * &c));
    let signal = FriSignal::new(trial.clone(), c.as_slice().to_vec())?;
    Ok(BestApproximation {
        signal,
        error: err_sq.max(0.0).sqrt(),
    })
}

/// Solves `G c = b`, `b_i = ⟨x, φ_i⟩`; the error is
/// `√(‖x‖² − 2cᵀb + cᵀGc)` clamped at zero.
pub fn best_approximation(
    x: &FriSignal,
    trial: &ShiftedFamily,
    l: usize,
    spec: &QuadratureSpec,
) -> Result<BestApproximation> {
    let g = gram(trial, l, spec)?;
    let cx = DVector::from_column_slice(x.coefficients());
    let b = cross_gram(trial, l, x.family(), x.half_width(), spec)? * &cx;
    let gx = gram(x.family(), x.half_width(), spec)?;
    let norm_sq = cx.dot(&(gx * &cx));
    finish(trial, &g, &b, norm_sq)
}

/// Best approximation of a general signal supported (numerically) in
/// `window`; inner products by quadrature with unit breakpoints.
pub fn best_approximation_of<E: Evaluable>(
    x: &E,
    window: (f64, f64),
    trial: &ShiftedFamily,
    l: usize,
    spec: &QuadratureSpec,
) -> Result<BestApproximation> {
    let (a, b) = window;
    let knots = unit_knots(a, b);
    let g = gram(trial, l, spec)?;
    let li = l as i64;
    let bv: Vec<f64> = (-li..=li)
        .into_par_iter()
        .map(|i| {
            integrate_with_breakpoints(|t| x.eval(t) * trial.basis(i, t), Domain::Interval(a, b), &knots, spec)
                .map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    let norm_sq = integrate_with_breakpoints(|t| x.eval(t).powi(2), Domain::Interval(a, b), &knots, spec)?.value;
    finish(trial, &g, &DVector::from_vec(bv), norm_sq)
}

fn unit_knots(a: f64, b: f64) -> Vec<f64> {
    let first = a.floor() as i64 + 1;
    let last = b.ceil() as i64 - 1;
    (first..=last).map(|k| k as f64).collect()
}

/// Quasi-optimality figures of a reconstruction `z` of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    /// `e = ‖x − y‖`, `y` the best approximation.
    pub e: f64,
    /// `ε = ‖z − y‖`.
    pub epsilon: f64,
    /// `1 + ε/e`, an upper bound for `‖z − x‖/‖y − x‖`.
    pub ratio_bound: f64,
    /// `‖z − x‖`.
    pub reconstruction_error: f64,
}

pub fn quasi_optimality(
    x: &FriSignal,
    best: &BestApproximation,
    z: &FriSignal,
    spec: &QuadratureSpec,
) -> Result<ErrorMetrics> {
    let epsilon = l2_distance(z, &best.signal, spec)?;
    let e = best.error;
    Ok(ErrorMetrics {
        e,
        epsilon,
        ratio_bound: 1.0 + epsilon / e,
        reconstruction_error: l2_distance(z, x, spec)?,
    })
}

/// `‖x − z_k‖₂` for every candidate.
pub fn error_metrics(x: &FriSignal, candidates: &[FriSignal], spec: &QuadratureSpec) -> Result<Vec<f64>> {
    candidates.iter().map(|z| l2_distance(x, z, spec)).collect()
}

/// Weighted `ℓ²` stability bounds `C₁ ‖f‖ ≤ (Σ w_n |f(γ_n)|²)^{1/2} ≤ C₂ ‖f‖`
/// on `V_{2,L}(Φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub c1: f64,
    pub c2: f64,
    pub ratio: f64,
    pub stable: bool,
}

/// Sampled quadratic form `Φ_sᵀ W Φ_s` of the trial basis.
pub fn sampling_form(trial: &ShiftedFamily, l: usize, set: &SamplingSet) -> DMatrix<f64> {
    let phi = sample_matrix(trial, l, set.abscissae());
    let mut weighted = phi.clone();
    for (mut row, w) in weighted.row_iter_mut().zip(set.weights()) {
        row *= *w;
    }
    phi.tr_mul(&weighted)
}

/// `C₁², C₂²` are the extremal eigenvalues of the pencil `(Φ_sᵀ W Φ_s, G)`.
pub fn stability_bounds(
    trial: &ShiftedFamily,
    l: usize,
    set: &SamplingSet,
    spec: &QuadratureSpec,
) -> Result<StabilityReport> {
    if set.is_empty() {
        return Ok(StabilityReport {
            c1: 0.0,
            c2: 0.0,
            ratio: f64::INFINITY,
            stable: false,
        });
    }
    let g = gram(trial, l, spec)?;
    let ev = linalg::pencil_eigenvalues(&sampling_form(trial, l, set), &g)?;
    let c1 = ev[0].max(0.0).sqrt();
    let c2 = ev[ev.len() - 1].max(0.0).sqrt();
    let ratio = if c1 > 0.0 { c2 / c1 } else { f64::INFINITY };
    Ok(StabilityReport {
        c1,
        c2,
        ratio,
        stable: c1 > 1e-8 * c2,
    })
}

/// Sorted union of closed intervals.
pub fn merge_intervals(intervals: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = intervals.iter().copied().filter(|(a, b)| b > a).collect();
    v.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// `(∫_F φ_i φ_j)_{|i|,|j| ≤ L}`.
fn restricted_gram(trial: &ShiftedFamily, l: usize, set: &[(f64, f64)], spec: &QuadratureSpec) -> Result<DMatrix<f64>> {
    let g = *trial.generator();
    let li = l as i64;
    let reach = |i: i64| match g.support() {
        Some((lo, hi)) => (trial.center(i) + lo, trial.center(i) + hi),
        None if g.decay_halfwidth.is_finite() => {
            (trial.center(i) - g.decay_halfwidth, trial.center(i) + g.decay_halfwidth)
        }
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let rows: Vec<Vec<f64>> = (-li..=li)
        .into_par_iter()
        .map(|i| {
            (i..=li)
                .map(|j| {
                    let (ri, rj) = (reach(i), reach(j));
                    let (lo, hi) = (ri.0.max(rj.0), ri.1.min(rj.1));
                    let mut total = 0.0;
                    for &(a, b) in set {
                        let (a, b) = (a.max(lo), b.min(hi));
                        if b <= a {
                            continue;
                        }
                        let mut knots = unit_knots(a, b);
                        for k in g.knots() {
                            knots.push(k + trial.center(i));
                            knots.push(k + trial.center(j));
                        }
                        let f = |t: f64| trial.basis(i, t) * trial.basis(j, t);
                        total += integrate_with_breakpoints(f, Domain::Interval(a, b), &knots, spec)?.value;
                    }
                    Ok(total)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let n = 2 * l + 1;
    Ok(DMatrix::from_fn(n, n, |r, c| {
        if c >= r {
            rows[r][c - r]
        } else {
            rows[c][r - c]
        }
    }))
}

/// Residue `E(U, F) = sup_{f ∈ U} ‖f‖_{L²(ℝ∖F)} / ‖f‖₂` for `U = V_{2,L}(Φ)`
/// and `F` a union of intervals: `E² = λ_max(G − G_F, G)`, clamped to `[0, 1]`.
pub fn residue(trial: &ShiftedFamily, l: usize, f: &[(f64, f64)], spec: &QuadratureSpec) -> Result<f64> {
    let g = gram(trial, l, spec)?;
    let merged = merge_intervals(f);
    let gf = restricted_gram(trial, l, &merged, spec)?;
    let ev = linalg::pencil_eigenvalues(&(&g - gf), &g)?;
    Ok(ev[ev.len() - 1].clamp(0.0, 1.0).sqrt())
}

/// `B(Γ, δ) = ⋃_n [γ_n − δ, γ_n + δ]`.
pub fn neighbourhood(set: &SamplingSet, delta: f64) -> Vec<(f64, f64)> {
    merge_intervals(
        &set.abscissae()
            .iter()
            .map(|&g| (g - delta, g + delta))
            .collect::<Vec<_>>(),
    )
}

/// `name,value,flag` rows.
pub fn report_csv(rows: &[(&str, f64, &str)]) -> String {
    let mut out = String::from("name,value,flag\n");
    for (name, value, flag) in rows {
        out.push_str(&format!("{name},{value:.16e},{flag}\n"));
    }
    out
}
