use crate::error::{Error, Result};
use crate::kernels::{integrate_with_breakpoints, Domain, QuadratureSpec};
use crate::linalg;
use crate::model::{assemble_correlation, cross_gram, Evaluable, FriSignal, ShiftedFamily};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// `P f = Σ_{i,j} ⟨f, φ̃_i⟩ b̃_{ij} φ_j` with `(b̃_{ij}) = A_{Φ,Φ̃,L}⁻¹`.
#[derive(Debug, Clone)]
pub struct ObliqueProjector {
    pub trial: ShiftedFamily,
    pub test: ShiftedFamily,
    pub half_width: usize,
    pub correlation: DMatrix<f64>,
    pub inverse_block: DMatrix<f64>,
    pub condition: f64,
}

pub fn build_projector(
    trial: &ShiftedFamily,
    test: &ShiftedFamily,
    half_width: usize,
    spec: &QuadratureSpec,
) -> Result<ObliqueProjector> {
    let a = assemble_correlation(trial, test, half_width, spec)?;
    let (inverse_block, condition) =
        linalg::checked_inverse(&a.entries).map_err(|cond| Error::SingularCorrelation { cond })?;
    Ok(ObliqueProjector {
        trial: trial.clone(),
        test: test.clone(),
        half_width,
        correlation: a.entries,
        inverse_block,
        condition,
    })
}

impl ObliqueProjector {
    /// Coefficients `Bᵀ v` of the projection from the pairings
    /// `v_i = ⟨f, φ̃_i⟩`.
    pub fn coefficients_from_pairings(&self, v: &DVector<f64>) -> Vec<f64> {
        self.inverse_block.tr_mul(v).as_slice().to_vec()
    }

    /// `P f` as a signal over the trial family.
    pub fn project(&self, f: &FriSignal, spec: &QuadratureSpec) -> Result<FriSignal> {
        FriSignal::new(self.trial.clone(), apply_projector(self, f, spec)?)
    }
}

/// Coefficients of `P f`, with `⟨f, φ̃_i⟩` from the correlation closed forms.
pub fn apply_projector(p: &ObliqueProjector, f: &FriSignal, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let m = cross_gram(f.family(), f.half_width(), &p.test, p.half_width, spec)?;
    let v = m.tr_mul(&DVector::from_column_slice(f.coefficients()));
    Ok(p.coefficients_from_pairings(&v))
}

/// Coefficients of `P f` for a general signal, with `⟨f, φ̃_i⟩` by adaptive
/// quadrature over the support (or decay window) of `φ̃_i`.
pub fn apply_projector_to<E: Evaluable>(p: &ObliqueProjector, f: &E, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let l = p.half_width as i64;
    let g = *p.test.generator();
    let v: Vec<f64> = (-l..=l)
        .into_par_iter()
        .map(|i| {
            let c = p.test.center(i);
            let (domain, knots): (Domain, Vec<f64>) = match g.support() {
                Some((lo, hi)) => (
                    Domain::Interval(c + lo, c + hi),
                    g.knots().iter().map(|k| k + c).collect(),
                ),
                None => (Domain::WholeLine { center: c }, Vec::new()),
            };
            integrate_with_breakpoints(|t| f.eval(t) * g.eval(t - c), domain, &knots, spec).map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    Ok(p.coefficients_from_pairings(&DVector::from_vec(v)))
}
