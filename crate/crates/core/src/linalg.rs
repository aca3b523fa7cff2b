//! Dense linear-algebra helpers shared by the solvers and diagnostics.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Threshold separating genuine singularity from round-off.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Spectral condition number `σ_max / σ_min`.
pub fn condition_number(m: &DMatrix<f64>) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!(
            "condition number of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    let cond = max / min;
    if min <= 0.0 || !cond.is_finite() {
        return Err(Error::SingularMatrix);
    }
    Ok(cond)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m)[0]
}

/// Induced ∞-norm (maximum absolute row sum).
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of a square matrix whose condition number is below
/// [`SINGULAR_CONDITION`]; returns the inverse and the condition number.
/// The `None` case carries the condition number for the caller's error.
pub fn checked_inverse(m: &DMatrix<f64>) -> std::result::Result<(DMatrix<f64>, f64), f64> {
    let cond = match condition_number(m) {
        Ok(c) => c,
        Err(_) => return Err(f64::INFINITY),
    };
    if cond > SINGULAR_CONDITION {
        return Err(cond);
    }
    match m.clone().lu().try_inverse() {
        Some(inv) => Ok((inv, cond)),
        None => Err(f64::INFINITY),
    }
}

/// Eigenvalues (ascending) of the symmetric-definite pencil `(a, b)`, i.e.
/// the stationary values of `xᵀ a x / xᵀ b x`. `b` must be positive
/// definite.
pub fn pencil_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = b.nrows();
    if a.nrows() != n || a.ncols() != n || b.ncols() != n {
        return Err(Error::InvalidArgument("pencil dimensions differ".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let bs = symmetrize(b);
    let chol = bs.cholesky().ok_or(Error::SingularGram)?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ
    let linv_a = l.solve_lower_triangular(&symmetrize(a)).ok_or(Error::SingularGram)?;
    let c = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or(Error::SingularGram)?;
    let c = symmetrize(&c);
    let mut ev: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `‖x‖₂` of a slice.
pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖x − y‖₂ / ‖y‖₂` (absolute difference when `y = 0`).
pub fn relative_l2(x: &[f64], y: &[f64]) -> f64 {
    let diff: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let n = norm2(y);
    if n == 0.0 {
        diff
    } else {
        diff / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        assert!((condition_number(&DMatrix::identity(5, 5)).unwrap() - 1.0).abs() < 1e-14);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0]));
        assert!((condition_number(&d).unwrap() - 2.0).abs() < 1e-14);
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(condition_number(&z).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn pencil_matches_diagonal_case() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 9.0, 4.0]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 3.0, 4.0]));
        let ev = pencil_eigenvalues(&a, &b).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 2.0).abs() < 1e-14);
        assert!((ev[2] - 3.0).abs() < 1e-14);
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, 1.0]));
        assert_eq!(pencil_eigenvalues(&a, &bad).unwrap_err(), Error::SingularGram);
    }
}
