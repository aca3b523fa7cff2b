//! The numerical protocol behind the quasi-optimality and stability tables
//! and the figure grids.
//!
//! A cell draws everything from one seed: the shifts `θ_i` (laws 2 and 3),
//! the reference signal on `|i| ≤ L + margin`, and the sampling set. The
//! trial space is the reference family restricted to `|i| ≤ L`; the test
//! space is spanned by unshifted indicators.

use crate::diagnostics::{
    admissibility_report, best_approximation, quasi_optimality, stability_bounds, AdmissibilityReport, ErrorMetrics,
    GridOptions, StabilityReport,
};
use crate::error::{Error, Result};
use crate::kernels::{Generator, GeneratorKind, QuadratureSpec};
use crate::linalg;
use crate::model::{build_truncated_kernel, make_test_signal, CoefficientLaw, FriSignal, ShiftMode, ShiftedFamily};
use crate::reconstruct::{
    assemble_system, build_projector, iterate_ap, solve_galerkin, solve_subgalerkin_lsq, IterationReport,
};
use crate::sampling::{
    capture, make_ctem, make_jittered, make_nonuniform_covering, pre_reconstruct, SampleRecord, SamplingKind,
    SamplingSet,
};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Tunable protocol constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    /// `L_sig − L` for the reference signal.
    pub signal_margin: usize,
    /// Bound of the random shifts of `Θ_I`.
    pub shift_bound: f64,
    pub gap_range: (f64, f64),
    pub jitter: f64,
    pub ctem_grid_step: f64,
    pub ctem_root_tol: f64,
    /// Padding `M` of the truncated kernel.
    pub padding: usize,
    /// Redraw budget for nonuniform sets leaving a test cell empty.
    pub cover_attempts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub spec: QuadratureSpec,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            signal_margin: 20,
            shift_bound: 0.2,
            gap_range: (0.9, 1.1),
            jitter: 0.1,
            ctem_grid_step: 1e-3,
            ctem_root_tol: 1e-10,
            padding: 10,
            cover_attempts: 1000,
            tol: 1e-12,
            max_iter: 10_000,
            spec: QuadratureSpec::default(),
        }
    }
}

/// Shift set of a family: `Θ_O = {0}` or random `Θ_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShiftSet {
    Zero,
    Random,
}

impl ShiftSet {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Random => "random",
        }
    }
}

impl fmt::Display for ShiftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShiftSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Self::Zero),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidArgument(format!("unknown shift mode `{other}`"))),
        }
    }
}

/// Signal laws `l = 0..=3`: random or cosine coefficients over `Θ_O`
/// (0, 1) or `Θ_I` (2, 3).
pub fn law_parts(law: u8) -> Result<(CoefficientLaw, ShiftSet)> {
    match law {
        0 => Ok((CoefficientLaw::RandomDecay, ShiftSet::Zero)),
        1 => Ok((CoefficientLaw::CosineDecay, ShiftSet::Zero)),
        2 => Ok((CoefficientLaw::RandomDecay, ShiftSet::Random)),
        3 => Ok((CoefficientLaw::CosineDecay, ShiftSet::Random)),
        other => Err(Error::InvalidArgument(format!("signal law {other} outside 0..=3"))),
    }
}

impl Protocol {
    pub fn shift_mode(&self, set: ShiftSet) -> ShiftMode {
        match set {
            ShiftSet::Zero => ShiftMode::Zero,
            ShiftSet::Random => ShiftMode::UniformRandom(self.shift_bound),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        let (lo, hi) = self.gap_range;
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::InvalidGapRange { lo, hi });
        }
        if self.jitter >= 0.5 {
            return Err(Error::JitterTooLarge(self.jitter));
        }
        if self.padding > self.signal_margin {
            return Err(Error::InvalidArgument(format!(
                "padding {} exceeds the signal margin {}",
                self.padding, self.signal_margin
            )));
        }
        Ok(())
    }
}

/// Families and reference signal of one protocol cell.
#[derive(Debug, Clone)]
pub struct Setup {
    pub trial: ShiftedFamily,
    pub test: ShiftedFamily,
    pub signal: FriSignal,
    pub half_width: usize,
    pub seed: u64,
}

pub fn setup(generator: GeneratorKind, law: u8, l: usize, seed: u64, p: &Protocol) -> Result<Setup> {
    let (coeff_law, shifts) = law_parts(law)?;
    setup_with(generator, coeff_law, shifts, l, seed, p)
}

/// Like [`setup`], with the coefficient law and shift set chosen separately.
pub fn setup_with(
    generator: GeneratorKind,
    coeff_law: CoefficientLaw,
    shifts: ShiftSet,
    l: usize,
    seed: u64,
    p: &Protocol,
) -> Result<Setup> {
    if l < 1 {
        return Err(Error::InvalidWindow(l as i64));
    }
    let window = l + p.signal_margin;
    let trial = ShiftedFamily::build(Generator::new(generator), p.shift_mode(shifts), window, seed)?;
    let test = ShiftedFamily::unshifted(Generator::indicator(), window);
    let signal = make_test_signal(&trial, coeff_law, window, seed)?;
    Ok(Setup {
        trial,
        test,
        signal,
        half_width: l,
        seed,
    })
}

/// Setup around a given signal; its family is the trial family.
pub fn setup_from_signal(signal: FriSignal, l: usize, p: &Protocol) -> Result<Setup> {
    if l < 1 {
        return Err(Error::InvalidWindow(l as i64));
    }
    let trial = signal.family().clone();
    trial.require_window(l + p.padding, "signal family")?;
    let test = ShiftedFamily::unshifted(Generator::indicator(), trial.half_width());
    let seed = signal.seed();
    Ok(Setup {
        trial,
        test,
        signal,
        half_width: l,
        seed,
    })
}

impl Setup {
    /// Sampling set of the requested kind over `[−L − 2, L + 2]`.
    pub fn sampling(&self, kind: SamplingKind, p: &Protocol) -> Result<SamplingSet> {
        let l = self.half_width;
        match kind {
            SamplingKind::Nonuniform => {
                make_nonuniform_covering(l, p.gap_range.0, p.gap_range.1, l, self.seed, p.cover_attempts)
            }
            SamplingKind::Jittered => make_jittered(l, p.jitter, self.seed),
            SamplingKind::Ctem => {
                let b = l as f64 + 2.0;
                make_ctem(&self.signal, (-b, b), p.ctem_grid_step, p.ctem_root_tol)
            }
            SamplingKind::Uniform => Err(Error::InvalidArgument("the protocol has no uniform sampling".into())),
        }
    }

    pub fn capture(&self, set: &SamplingSet) -> SampleRecord {
        capture(&self.signal, set)
    }

    /// Galerkin reconstruction with `L̃ = L`.
    pub fn galerkin(&self, rec: &SampleRecord) -> Result<FriSignal> {
        let l = self.half_width;
        let c = solve_galerkin(&assemble_system(&self.trial, &self.test, rec, l, l)?)?;
        FriSignal::new(self.trial.clone(), c)
    }

    /// Least-squares reconstruction against `L̃ ≥ L` test functions.
    pub fn subgalerkin(&self, rec: &SampleRecord, lt: usize) -> Result<FriSignal> {
        let l = self.half_width;
        let c = solve_subgalerkin_lsq(&assemble_system(&self.trial, &self.test, rec, l, lt)?)?;
        FriSignal::new(self.trial.clone(), c)
    }
}

/// One row of the quasi-optimality table.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiOptimalityCell {
    pub metrics: ErrorMetrics,
    pub cond: f64,
    pub samples: usize,
}

pub fn quasi_optimality_cell(
    generator: GeneratorKind,
    law: u8,
    sampling: SamplingKind,
    l: usize,
    seed: u64,
    p: &Protocol,
) -> Result<QuasiOptimalityCell> {
    quasi_optimality_for(&setup(generator, law, l, seed, p)?, sampling, p)
}

pub fn quasi_optimality_for(s: &Setup, sampling: SamplingKind, p: &Protocol) -> Result<QuasiOptimalityCell> {
    let l = s.half_width;
    let set = s.sampling(sampling, p)?;
    let rec = s.capture(&set);
    let sys = assemble_system(&s.trial, &s.test, &rec, l, l)?;
    let cond = sys.condition().unwrap_or(f64::INFINITY);
    let z = FriSignal::new(s.trial.clone(), solve_galerkin(&sys)?)?;
    let best = best_approximation(&s.signal, &s.trial, l, &p.spec)?;
    let metrics = quasi_optimality(&s.signal, &best, &z, &p.spec)?;
    Ok(QuasiOptimalityCell {
        metrics,
        cond,
        samples: set.len(),
    })
}

/// Condition number of the square Galerkin matrix for a family with the
/// given shift set; matched `Zero`/`Random` cells share the sampling draw.
pub fn condition_cell(
    generator: GeneratorKind,
    shifts: ShiftSet,
    sampling: SamplingKind,
    l: usize,
    seed: u64,
    p: &Protocol,
) -> Result<f64> {
    condition_for(
        &setup_with(generator, CoefficientLaw::RandomDecay, shifts, l, seed, p)?,
        sampling,
        p,
    )
}

pub fn condition_for(s: &Setup, sampling: SamplingKind, p: &Protocol) -> Result<f64> {
    if sampling == SamplingKind::Ctem {
        return Err(Error::InvalidArgument(
            "condition cells use nonuniform or jittered sampling".into(),
        ));
    }
    let l = s.half_width;
    let set = s.sampling(sampling, p)?;
    let rec = SampleRecord::new(set.clone(), vec![0.0; set.len()])?;
    assemble_system(&s.trial, &s.test, &rec, l, l)?.condition()
}

/// Key ordering rows of the experiment tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub generator: GeneratorKind,
    /// Signal law for the quasi-optimality table, shift set index for the
    /// stability table.
    pub variant: u8,
    pub sampling: SamplingKind,
    pub half_width: usize,
    pub seed: u64,
}

/// Runs `f` over all keys concurrently; the output follows the key order.
pub fn run_cells<T: Send>(keys: &[CellKey], f: impl Fn(&CellKey) -> Result<T> + Sync) -> Vec<(CellKey, Result<T>)> {
    let mut keys = keys.to_vec();
    keys.sort();
    keys.dedup();
    keys.into_par_iter().map(|k| (k, f(&k))).collect()
}

/// `t, x(t), x − Sx, x − z, y − z` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureGrids {
    pub t: Vec<f64>,
    pub original: Vec<f64>,
    pub pre_reconstruction_diff: Vec<f64>,
    pub galerkin_diff: Vec<f64>,
    pub best_approximation_diff: Vec<f64>,
}

impl FigureGrids {
    /// `sup |values|` over `lo ≤ |t| ≤ hi`.
    pub fn sup_between(&self, values: &[f64], lo: f64, hi: f64) -> f64 {
        self.t
            .iter()
            .zip(values)
            .filter(|(t, _)| (lo..=hi).contains(&t.abs()))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }
}

/// Figure grids over `[−L − 2, L + 2]` with the given step.
pub fn figure_grids(
    generator: GeneratorKind,
    law: u8,
    sampling: SamplingKind,
    l: usize,
    seed: u64,
    step: f64,
    p: &Protocol,
) -> Result<FigureGrids> {
    let s = setup(generator, law, l, seed, p)?;
    figure_grids_for(&s, sampling, step, p)
}

/// Figure grids for an existing setup (which may carry a user signal).
pub fn figure_grids_for(s: &Setup, sampling: SamplingKind, step: f64, p: &Protocol) -> Result<FigureGrids> {
    let l = s.half_width;
    let b = l as f64 + 2.0;
    let n = (2.0 * b / step).round() as usize;
    let t: Vec<f64> = (0..=n).map(|k| -b + step * k as f64).collect();
    let original = s.signal.eval_many(&t);
    if s.signal.is_zero() {
        let zeros = vec![0.0; t.len()];
        return Ok(FigureGrids {
            t,
            original,
            pre_reconstruction_diff: zeros.clone(),
            galerkin_diff: zeros.clone(),
            best_approximation_diff: zeros,
        });
    }
    let set = s.sampling(sampling, p)?;
    let rec = s.capture(&set);
    let kernel = build_truncated_kernel(&s.trial, &s.test, l, p.padding, &p.spec)?;
    let pre = pre_reconstruct(&rec, &kernel)?.eval_many(&t);
    let z = s.galerkin(&rec)?.eval_many(&t);
    let y = best_approximation(&s.signal, &s.trial, l, &p.spec)?
        .signal
        .eval_many(&t);
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u - v).collect::<Vec<f64>>();
    Ok(FigureGrids {
        pre_reconstruction_diff: diff(&original, &pre),
        galerkin_diff: diff(&original, &z),
        best_approximation_diff: diff(&y, &z),
        t,
        original,
    })
}

/// Everything the `diagnose` command reports for one cell.
#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub admissibility: AdmissibilityReport,
    pub stability: StabilityReport,
    pub cond: f64,
    pub iteration: std::result::Result<IterationReport, Error>,
    /// Relative `ℓ²` gap between the iterative and direct solutions.
    pub iterative_vs_direct: Option<f64>,
}

pub fn diagnose(s: &Setup, sampling: SamplingKind, grid: GridOptions, p: &Protocol) -> Result<Diagnosis> {
    let l = s.half_width;
    let set = s.sampling(sampling, p)?;
    let rec = s.capture(&set);
    let kernel = build_truncated_kernel(&s.trial, &s.test, l, p.padding, &p.spec)?;
    let admissibility = admissibility_report(&s.trial, &s.test, l, &set, &kernel, &p.spec, grid)?;
    let stability = stability_bounds(&s.trial, l, &set, &p.spec)?;
    let sys = assemble_system(&s.trial, &s.test, &rec, l, l)?;
    let cond = sys.condition().unwrap_or(f64::INFINITY);
    let projector = build_projector(&s.trial, &s.test, l, &p.spec)?;
    let iteration = iterate_ap(&s.trial, &s.test, &rec, l, &projector, p.tol, p.max_iter);
    let iterative_vs_direct = match (&iteration, solve_galerkin(&sys)) {
        (Ok((c, _)), Ok(direct)) => Some(linalg::relative_l2(c, &direct)),
        _ => None,
    };
    Ok(Diagnosis {
        admissibility,
        stability,
        cond,
        iteration: iteration.map(|(_, r)| r),
        iterative_vs_direct,
    })
}
