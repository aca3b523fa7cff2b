use super::{gram, neighbourhood, report_csv, residue};
use crate::error::{Error, Result};
use crate::kernels::QuadratureSpec;
use crate::linalg;
use crate::model::{cross_gram, ShiftedFamily, TruncatedKernel};
use crate::reconstruct::sample_matrix;
use crate::sampling::SamplingSet;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Grid resolutions of the kernel-norm estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Step of the `(x, y)` grid for `‖K‖_W` and `‖ω_δ(K)‖_W`.
    pub kernel_step: f64,
    /// The perturbations `x′, y′` run over `[−δ, δ]` in steps of
    /// `δ / perturbation_divisions`.
    pub perturbation_divisions: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            kernel_step: 0.05,
            perturbation_divisions: 8,
        }
    }
}

impl GridOptions {
    pub fn halved(self) -> Self {
        Self {
            kernel_step: self.kernel_step / 2.0,
            perturbation_divisions: 2 * self.perturbation_divisions,
        }
    }
}

/// Grid estimates of the admissibility constants. Every value is
/// approximate; `r0 < 1` is a numerical indication, not a certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    pub d1: f64,
    pub d2: f64,
    pub d4: f64,
    pub r0: f64,
    pub residue: f64,
    pub kw: f64,
    pub omega_delta: f64,
    /// Covering radius, `max gap / 2` by convention.
    pub delta: f64,
    pub approximate: bool,
}

impl AdmissibilityReport {
    pub fn values(&self) -> [(&'static str, f64); 8] {
        [
            ("D1", self.d1),
            ("D2", self.d2),
            ("D4", self.d4),
            ("r0", self.r0),
            ("residue", self.residue),
            ("kW", self.kw),
            ("omega_delta", self.omega_delta),
            ("delta", self.delta),
        ]
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<(&str, f64, &str)> = self
            .values()
            .into_iter()
            .map(|(name, v)| (name, v, if name == "delta" { "convention" } else { "approximate" }))
            .collect();
        report_csv(&rows)
    }
}

/// `G̃⁻¹` through a Cholesky factorisation.
fn inverse_gram(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = linalg::symmetrize(g).cholesky().ok_or(Error::SingularGram)?;
    Ok(chol.inverse())
}

/// Extremal eigenvalues of `(C G̃⁻¹ Cᵀ, G)`.
fn pairing_bounds(c: &DMatrix<f64>, gt_inv: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<(f64, f64)> {
    let form = c * gt_inv * c.transpose();
    let ev = linalg::pencil_eigenvalues(&form, g)?;
    Ok((ev[0].max(0.0), ev[ev.len() - 1].max(0.0)))
}

/// `(φ(x_p)ᵀ Bᵀ)_p` and `φ̃(y_p)` rows for the kernel `K(x, y) = u(x)·φ̃(y)`.
struct KernelRows {
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

fn kernel_rows(kernel: &TruncatedKernel, points: &[f64], dx: f64, dy: f64) -> KernelRows {
    let w = kernel.window();
    let n = 2 * w + 1;
    let li = w as i64;
    let phi = DMatrix::from_fn(points.len(), n, |p, c| {
        kernel.trial.basis(c as i64 - li, points[p] + dx)
    });
    let v = DMatrix::from_fn(points.len(), n, |p, c| kernel.test.basis(c as i64 - li, points[p] + dy));
    KernelRows {
        u: phi * kernel.inverse_correlation.transpose(),
        v,
    }
}

/// `max(sup_x Σ_y |M(x, y)| h, sup_y Σ_x |M(x, y)| h)`.
fn amalgam_norm(m: &DMatrix<f64>, h: f64) -> f64 {
    let rows = m
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let cols = m
        .column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    rows.max(cols) * h
}

fn kernel_grid(kernel: &TruncatedKernel, step: f64) -> Vec<f64> {
    let r = kernel
        .trial
        .generator()
        .effective_radius()
        .max(kernel.test.generator().effective_radius());
    let reach = kernel.window() as f64 + 0.5 + r;
    let n = (2.0 * reach / step).ceil() as usize;
    (0..=n).map(|k| -reach + step * k as f64).collect()
}

/// `‖K‖_W` on a grid of the given step.
pub fn kernel_norm(kernel: &TruncatedKernel, step: f64) -> f64 {
    let pts = kernel_grid(kernel, step);
    let rows = kernel_rows(kernel, &pts, 0.0, 0.0);
    amalgam_norm(&(&rows.u * rows.v.transpose()), step)
}

/// `‖ω_δ(K)‖_W`, `ω_δ(K)(x, y) = sup_{|x′|, |y′| ≤ δ} |K(x + x′, y + y′) − K(x, y)|`,
/// with the perturbations on a grid of `2·divisions + 1` points per axis.
pub fn modulus_norm(kernel: &TruncatedKernel, delta: f64, step: f64, divisions: usize) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let pts = kernel_grid(kernel, step);
    let offsets: Vec<f64> = (0..=2 * divisions)
        .map(|k| -delta + delta * k as f64 / divisions as f64)
        .collect();
    let base = {
        let r = kernel_rows(kernel, &pts, 0.0, 0.0);
        &r.u * r.v.transpose()
    };
    let vs: Vec<DMatrix<f64>> = offsets.iter().map(|&dy| kernel_rows(kernel, &pts, 0.0, dy).v).collect();
    let omega = offsets
        .par_iter()
        .map(|&dx| {
            let u = kernel_rows(kernel, &pts, dx, 0.0).u;
            let mut acc = DMatrix::<f64>::zeros(pts.len(), pts.len());
            for v in &vs {
                let k = &u * v.transpose();
                acc.zip_zip_apply(&k, &base, |a, k, b| *a = a.max((k - b).abs()));
            }
            acc
        })
        .reduce(
            || DMatrix::<f64>::zeros(pts.len(), pts.len()),
            |mut a, b| {
                a.zip_apply(&b, |x, y| *x = x.max(y));
                a
            },
        );
    amalgam_norm(&omega, step)
}

/// Grid estimates of `D₁, D₂, D₄, r₀` and their ingredients for the
/// pre-reconstruction operator of `set` and `kernel`.
///
/// * `D₄² = λ_min(C G̃⁻¹ Cᵀ, G)` with `C = A_{Φ,Φ̃,L}`;
/// * `D₁² = λ_min(A_Γ G̃⁻¹ A_Γᵀ, G)` on `U = V_{2,L}(Φ)`, since
///   `⟨S f, φ̃_j⟩ = Σ_n w_n f(γ_n) φ̃_j(γ_n)`;
/// * `D₂²` is the largest eigenvalue of the same form on the padded trial
///   window of the kernel;
/// * `r₀ = D₄⁻¹ (E ‖K‖_W + ‖ω_δ‖_W (1 + ‖K‖_W + ‖ω_δ‖_W))`, `E = E(U, B(Γ, δ))`.
pub fn admissibility_report(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    l: usize,
    set: &SamplingSet,
    kernel: &TruncatedKernel,
    spec: &QuadratureSpec,
    grid: GridOptions,
) -> Result<AdmissibilityReport> {
    if set.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let w = kernel.window();
    let g = gram(trial, l, spec)?;
    let gt_inv = inverse_gram(&gram(test, l, spec)?)?;
    let c = cross_gram(trial, l, test, l, spec)?;
    let d4 = pairing_bounds(&c, &gt_inv, &g)?.0.sqrt();

    let weighted = |fam: &ShiftedFamily, half: usize| {
        let mut m = sample_matrix(fam, half, set.abscissae());
        for (mut row, wn) in m.row_iter_mut().zip(set.weights()) {
            row *= *wn;
        }
        m
    };
    let psi = sample_matrix(test, l, set.abscissae());
    let a_u = weighted(trial, l).tr_mul(&psi);
    let d1 = pairing_bounds(&a_u, &gt_inv, &g)?.0.sqrt();
    let a_v = weighted(trial, w).tr_mul(&psi);
    let d2 = pairing_bounds(&a_v, &gt_inv, &gram(trial, w, spec)?)?.1.sqrt();

    let delta = set.delta();
    let e = residue(trial, l, &neighbourhood(set, delta), spec)?;
    let kw = kernel_norm(kernel, grid.kernel_step);
    let omega = modulus_norm(kernel, delta, grid.kernel_step, grid.perturbation_divisions);
    let r0 = if d4 > 0.0 {
        (e * kw + omega * (1.0 + kw + omega)) / d4
    } else {
        f64::INFINITY
    };
    Ok(AdmissibilityReport {
        d1,
        d2,
        d4,
        r0,
        residue: e,
        kw,
        omega_delta: omega,
        delta,
        approximate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Generator;
    use crate::model::{build_truncated_kernel, ShiftMode};

    #[test]
    fn orthonormal_pair_has_unit_d4() {
        let spec = QuadratureSpec::default();
        let f = ShiftedFamily::unshifted(Generator::sinc(), 12);
        let k = build_truncated_kernel(&f, &f, 5, 2, &spec).unwrap();
        let set = SamplingSet::uniform(-7.0, 7.0, 0.5).unwrap();
        let r = admissibility_report(&f, &f, 5, &set, &k, &spec, GridOptions::default()).unwrap();
        assert!((r.d4 - 1.0).abs() < 5e-2, "{r:?}");
        assert!(r.d1 <= r.d2);
        assert!(r.to_csv().contains("\ndelta,2.5000000000000000e-1,convention\n"));
    }

    #[test]
    fn modulus_vanishes_without_perturbation() {
        let spec = QuadratureSpec::default();
        let f = ShiftedFamily::build(Generator::gauss(), ShiftMode::UniformRandom(0.2), 6, 1).unwrap();
        let k = build_truncated_kernel(&f, &f, 3, 3, &spec).unwrap();
        assert_eq!(modulus_norm(&k, 0.0, 0.05, 8), 0.0);
        let small = modulus_norm(&k, 0.05, 0.05, 8);
        let large = modulus_norm(&k, 0.2, 0.05, 8);
        assert!(0.0 < small && small < large);
    }

    fn gauss_report(test: Generator, gap: f64) -> AdmissibilityReport {
        let spec = QuadratureSpec::default();
        let trial = ShiftedFamily::unshifted(Generator::gauss(), 10);
        let test = ShiftedFamily::unshifted(test, 10);
        let k = build_truncated_kernel(&trial, &test, 3, 3, &spec).unwrap();
        let set = SamplingSet::uniform(-5.0, 5.0, gap).unwrap();
        admissibility_report(&trial, &test, 3, &set, &k, &spec, GridOptions::default()).unwrap()
    }

    #[test]
    fn dense_samples_with_smooth_test_functions_are_admissible() {
        let r = gauss_report(Generator::gauss(), 0.05);
        assert!(r.r0 < 1.0, "{r:?}");
    }

    #[test]
    fn indicator_jumps_keep_the_modulus_large() {
        let coarse = gauss_report(Generator::indicator(), 0.2);
        let dense = gauss_report(Generator::indicator(), 0.05);
        assert!(dense.omega_delta > 0.5 * coarse.omega_delta);
        assert!(dense.r0 > 1.0);
    }

    #[test]
    fn sparse_samples_degrade_admissibility_and_stability() {
        let spec = QuadratureSpec::default();
        let f = ShiftedFamily::unshifted(Generator::sinc(), 12);
        let k = build_truncated_kernel(&f, &f, 5, 2, &spec).unwrap();
        let dense = SamplingSet::uniform(-7.0, 7.0, 0.5).unwrap();
        let sparse = SamplingSet::uniform(-7.0, 7.0, 3.5).unwrap();
        let r = admissibility_report(&f, &f, 5, &sparse, &k, &spec, GridOptions::default()).unwrap();
        assert!(r.r0 >= 1.0);
        let good = crate::diagnostics::stability_bounds(&f, 5, &dense, &spec).unwrap();
        let bad = crate::diagnostics::stability_bounds(&f, 5, &sparse, &spec).unwrap();
        assert!(bad.ratio > 10.0 * good.ratio, "{good:?} {bad:?}");
    }
}
