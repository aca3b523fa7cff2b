use super::family::ShiftedFamily;
use super::signal::FriSignal;
use crate::error::{Error, Result};
use crate::kernels::{correlation, QuadratureSpec};
use crate::linalg;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// `A_{Φ,Φ̃,L} = (⟨φ_i(· − i − θ_i), φ̃_j(· − j − θ̃_j)⟩)_{|i|,|j| ≤ L}`, stored
/// with row `i + L` and column `j + L`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub entries: DMatrix<f64>,
    pub trial: ShiftedFamily,
    pub test: ShiftedFamily,
    pub half_width: usize,
}

pub fn assemble_correlation(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    half_width: usize,
    spec: &QuadratureSpec,
) -> Result<CorrelationMatrix> {
    let entries = cross_gram(trial, half_width, test, half_width, spec)?;
    Ok(CorrelationMatrix {
        entries,
        trial: trial.clone(),
        test: test.clone(),
        half_width,
    })
}

/// `(⟨a_i, b_j⟩)` for `|i| ≤ la`, `|j| ≤ lb`; row `i + la`, column `j + lb`.
pub fn cross_gram(
    a: &ShiftedFamily,
    la: usize,
    b: &ShiftedFamily,
    lb: usize,
    spec: &QuadratureSpec,
) -> Result<DMatrix<f64>> {
    a.require_window(la, "trial family")?;
    b.require_window(lb, "test family")?;
    let symmetric = a == b && la == lb;
    let (la_i, lb_i) = (la as i64, lb as i64);
    let rows: Vec<Vec<f64>> = (-la_i..=la_i)
        .into_par_iter()
        .map(|i| {
            let first = if symmetric { i } else { -lb_i };
            (first..=lb_i)
                .map(|j| correlation(a.generator(), b.generator(), a.center(i), b.center(j), spec))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let (m, n) = (2 * la + 1, 2 * lb + 1);
    Ok(if symmetric {
        DMatrix::from_fn(m, n, |r, c| if c >= r { rows[r][c - r] } else { rows[c][r - c] })
    } else {
        DMatrix::from_fn(m, n, |r, c| rows[r][c])
    })
}

/// Gram matrix of `family` on the window `|i| ≤ l`.
pub fn gram(family: &ShiftedFamily, l: usize, spec: &QuadratureSpec) -> Result<DMatrix<f64>> {
    cross_gram(family, l, family, l, spec)
}

/// `⟨f, g⟩` through the Gram matrix of the two coefficient families.
pub fn inner_product(f: &FriSignal, g: &FriSignal, spec: &QuadratureSpec) -> Result<f64> {
    let m = cross_gram(f.family(), f.half_width(), g.family(), g.half_width(), spec)?;
    let cf = DVector::from_column_slice(f.coefficients());
    let cg = DVector::from_column_slice(g.coefficients());
    Ok(cf.dot(&(m * cg)))
}

/// `‖f − g‖₂`. Signals over one family are compared coefficientwise, which
/// keeps the distance of identical signals exactly zero.
pub fn l2_distance(f: &FriSignal, g: &FriSignal, spec: &QuadratureSpec) -> Result<f64> {
    if f.family() == g.family() {
        let l = f.half_width().max(g.half_width());
        let d: Vec<f64> = f
            .coefficients_on(l)
            .iter()
            .zip(g.coefficients_on(l))
            .map(|(a, b)| a - b)
            .collect();
        let d = FriSignal::new(f.family().clone(), d)?;
        return Ok(inner_product(&d, &d, spec)?.max(0.0).sqrt());
    }
    let sq = inner_product(f, f, spec)? + inner_product(g, g, spec)? - 2.0 * inner_product(f, g, spec)?;
    Ok(sq.max(0.0).sqrt())
}

/// Reproducing kernel `K(x, y) = Σ_{i,j} φ_i(x − i) b_{ji} φ̃_j(y − j)` with
/// `(b_ij)` the inverse of the correlation matrix on the padded window
/// `|i|, |j| ≤ L + M`.
#[derive(Debug, Clone)]
pub struct TruncatedKernel {
    pub trial: ShiftedFamily,
    pub test: ShiftedFamily,
    pub half_width: usize,
    pub padding: usize,
    pub inverse_correlation: DMatrix<f64>,
    pub condition: f64,
}

pub fn build_truncated_kernel(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    half_width: usize,
    padding: usize,
    spec: &QuadratureSpec,
) -> Result<TruncatedKernel> {
    let w = half_width + padding;
    let a = assemble_correlation(trial, test, w, spec)?;
    let (inverse_correlation, condition) =
        linalg::checked_inverse(&a.entries).map_err(|cond| Error::SingularCorrelation { cond })?;
    Ok(TruncatedKernel {
        trial: trial.clone(),
        test: test.clone(),
        half_width,
        padding,
        inverse_correlation,
        condition,
    })
}

impl TruncatedKernel {
    /// Half-width `L + M` of the padded index window.
    pub fn window(&self) -> usize {
        self.half_width + self.padding
    }

    pub fn trial_values(&self, x: f64) -> DVector<f64> {
        DVector::from_vec(self.trial.basis_values(self.window(), x))
    }

    pub fn test_values(&self, y: f64) -> DVector<f64> {
        DVector::from_vec(self.test.basis_values(self.window(), y))
    }

    /// `K(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // φ(x)ᵀ Bᵀ φ̃(y) with B = A⁻¹, i.e. Σ_{i,j} φ_i(x) B[j, i] φ̃_j(y)
        let u = &self.inverse_correlation * self.trial_values(x);
        u.dot(&self.test_values(y))
    }

    /// Coefficients (over the padded window) of `Σ_n a_n K(·, y_n)`, which
    /// lies in the trial span: `Bᵀ Σ_n a_n φ̃(y_n)`.
    pub fn section_coefficients(&self, points: &[f64], amplitudes: &[f64]) -> DVector<f64> {
        let n = 2 * self.window() + 1;
        let mut d = DVector::zeros(n);
        for (&y, &a) in points.iter().zip(amplitudes) {
            if a != 0.0 {
                d.axpy(a, &self.test_values(y), 1.0);
            }
        }
        self.inverse_correlation.transpose() * d
    }

    /// Interval outside which `K(·, y)` is negligible in `y`.
    pub fn test_reach(&self) -> (f64, f64) {
        let w = self.window() as f64 + 0.5;
        let r = self.test.generator().effective_radius();
        (-w - r, w + r)
    }
}

/// Uniform grid `start + k · step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    /// Smallest grid with the given step starting at `lo` and reaching `hi`.
    pub fn covering(lo: f64, hi: f64, step: f64) -> Self {
        let len = ((hi - lo) / step - 1e-9).ceil() as usize + 1;
        Self { start: lo, step, len }
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }

    pub fn end(&self) -> f64 {
        self.point(self.len.saturating_sub(1))
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.len];
        if let Some(first) = w.first_mut() {
            *first *= 0.5;
        }
        if let Some(last) = w.last_mut() {
            *last *= 0.5;
        }
        w
    }
}

/// Trapezoid discretisation of `T₀f(x) = ∫ K(x, y) f(y) dy` on `grid`, where
/// `values[k] = f(grid.point(k))`.
pub fn apply_integral_operator(kernel: &TruncatedKernel, values: &[f64], grid: &UniformGrid) -> Result<Vec<f64>> {
    if grid.step > 0.05 {
        return Err(Error::GridTooCoarse(grid.step));
    }
    if values.len() != grid.len {
        return Err(Error::InvalidArgument(format!(
            "{} values for a grid of {} points",
            values.len(),
            grid.len
        )));
    }
    let (lo, hi) = kernel.test_reach();
    if grid.start > lo || grid.end() < hi {
        return Err(Error::WindowMismatch(format!(
            "grid [{}, {}] does not cover the kernel window [{lo}, {hi}]",
            grid.start,
            grid.end()
        )));
    }
    let points = grid.points();
    let amplitudes: Vec<f64> = grid
        .trapezoid_weights()
        .iter()
        .zip(values)
        .map(|(w, f)| w * f)
        .collect();
    let coef = kernel.section_coefficients(&points, &amplitudes);
    Ok(points.iter().map(|&x| kernel.trial_values(x).dot(&coef)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{sinc, special::sine_integral, Generator};
    use crate::model::{make_test_signal, CoefficientLaw, ShiftMode};
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn sinc_correlation_is_identity() {
        let f = ShiftedFamily::unshifted(Generator::sinc(), 40);
        let a = assemble_correlation(&f, &f, 40, &spec()).unwrap();
        let err = (&a.entries - DMatrix::<f64>::identity(81, 81)).amax();
        assert!(err < 1e-8);
    }

    #[test]
    fn sinc_indicator_is_toeplitz_sine_integral() {
        let f = ShiftedFamily::unshifted(Generator::sinc(), 6);
        let t = ShiftedFamily::unshifted(Generator::indicator(), 6);
        let a = assemble_correlation(&f, &t, 6, &spec()).unwrap();
        for i in -6..=6_i64 {
            for j in -6..=6_i64 {
                let d = (j - i) as f64;
                let want = (sine_integral(PI * (d + 0.5)) - sine_integral(PI * (d - 0.5))) / PI;
                assert!((a.entries[((i + 6) as usize, (j + 6) as usize)] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn smallest_window() {
        let f = ShiftedFamily::build(Generator::gauss(), ShiftMode::UniformRandom(0.2), 3, 4).unwrap();
        let a = assemble_correlation(&f, &f, 0, &spec()).unwrap();
        assert_eq!(a.entries.shape(), (1, 1));
        assert!((a.entries[(0, 0)] - (PI / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn symmetric_generators_give_symmetric_matrices() {
        for g in [Generator::sinc(), Generator::gauss(), Generator::spline()] {
            let f = ShiftedFamily::build(g, ShiftMode::UniformRandom(0.2), 8, 21).unwrap();
            let a = assemble_correlation(&f, &f, 8, &spec()).unwrap();
            assert!((&a.entries - a.entries.transpose()).amax() < 1e-10);
        }
    }

    #[test]
    fn gram_distances() {
        let f = ShiftedFamily::build(Generator::spline(), ShiftMode::UniformRandom(0.2), 8, 2).unwrap();
        let a = make_test_signal(&f, CoefficientLaw::RandomDecay, 6, 1).unwrap();
        let b = make_test_signal(&f, CoefficientLaw::CosineDecay, 8, 0).unwrap();
        assert_eq!(l2_distance(&a, &a, &spec()).unwrap(), 0.0);
        let grid = UniformGrid::covering(-12.0, 12.0, 1e-3);
        let w = grid.trapezoid_weights();
        let quad: f64 = grid
            .points()
            .iter()
            .zip(&w)
            .map(|(&t, w)| w * (a.eval(t) - b.eval(t)).powi(2))
            .sum();
        assert!((l2_distance(&a, &b, &spec()).unwrap().powi(2) - quad).abs() < 1e-6);
        let g = gram(&f, 8, &spec()).unwrap();
        let shifted = ShiftedFamily::from_shifts(*f.generator(), f.shifts().to_vec(), 99).unwrap();
        let direct = cross_gram(&f, 8, &shifted, 8, &spec()).unwrap();
        assert!((g - direct).amax() < 1e-14);
    }

    #[test]
    fn orthonormal_kernel() {
        let f = ShiftedFamily::unshifted(Generator::sinc(), 12);
        let k = build_truncated_kernel(&f, &f, 8, 4, &spec()).unwrap();
        assert!((&k.inverse_correlation - DMatrix::<f64>::identity(25, 25)).amax() < 1e-8);
        for (x, y) in [(0.3, -1.2), (2.5, 2.5), (-4.1, 3.7)] {
            let want: f64 = (-12..=12).map(|i| sinc(x - i as f64) * sinc(y - i as f64)).sum();
            assert!((k.eval(x, y) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_window_must_fit_family() {
        let f = ShiftedFamily::unshifted(Generator::sinc(), 10);
        let e = build_truncated_kernel(&f, &f, 8, 4, &spec()).unwrap_err();
        assert_eq!(e.name(), "WindowMismatch");
    }

    #[test]
    fn singular_correlation_is_rejected() {
        // Indicator shifted by exactly 1/2 against a spline: the matrix is fine,
        // but two identical indicator trial functions make it singular.
        let trial = ShiftedFamily::from_shifts(Generator::indicator(), vec![0.5, -0.5, 0.0], 0).unwrap();
        let test = ShiftedFamily::unshifted(Generator::indicator(), 1);
        let e = build_truncated_kernel(&trial, &test, 1, 0, &spec()).unwrap_err();
        assert_eq!(e.name(), "SingularCorrelation");
    }

    #[test]
    fn integral_operator_reproduces_trial_signals() {
        let g = Generator::gauss();
        let trial = ShiftedFamily::build(g, ShiftMode::UniformRandom(0.2), 15, 3).unwrap();
        let test = ShiftedFamily::unshifted(g, 15);
        let k = build_truncated_kernel(&trial, &test, 5, 10, &spec()).unwrap();
        let h = make_test_signal(&trial, CoefficientLaw::RandomDecay, 5, 8).unwrap();
        let grid = UniformGrid::covering(-21.0, 21.0, 0.01);
        let values: Vec<f64> = grid.points().iter().map(|&t| h.eval(t)).collect();
        let out = apply_integral_operator(&k, &values, &grid).unwrap();
        let mut worst = 0.0_f64;
        for (kx, &x) in grid.points().iter().enumerate() {
            if x.abs() <= 5.0 {
                worst = worst.max((out[kx] - values[kx]).abs());
            }
        }
        assert!(worst < 2e-3, "{worst}");

        let zero = apply_integral_operator(&k, &vec![0.0; grid.len], &grid).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        let coarse = UniformGrid::covering(-21.0, 21.0, 0.1);
        assert_eq!(
            apply_integral_operator(&k, &vec![0.0; coarse.len], &coarse)
                .unwrap_err()
                .name(),
            "GridTooCoarse"
        );
    }
}
