//! Sampling sets, sampled data and the pre-reconstruction operator.

mod ctem;
pub mod io;

pub use ctem::make_ctem;

use crate::error::{Error, Result};
use crate::model::{FriSignal, TruncatedKernel};
use crate::rng::{self, Stream};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplingKind {
    Nonuniform,
    Jittered,
    Ctem,
    /// Equispaced or user-supplied abscissae.
    Uniform,
}

impl SamplingKind {
    pub const PROTOCOL: [SamplingKind; 3] = [Self::Nonuniform, Self::Jittered, Self::Ctem];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nonuniform => "nonuniform",
            Self::Jittered => "jittered",
            Self::Ctem => "ctem",
            Self::Uniform => "uniform",
        }
    }
}

impl fmt::Display for SamplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonuniform" => Ok(Self::Nonuniform),
            "jittered" => Ok(Self::Jittered),
            "ctem" => Ok(Self::Ctem),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::InvalidArgument(format!("unknown sampling kind `{other}`"))),
        }
    }
}

/// Strictly increasing abscissae `γ_1 < … < γ_N` with trapezoid weights
/// `w_n = (γ_{n+1} − γ_{n−1})/2`, `γ_0 = γ_1`, `γ_{N+1} = γ_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    abscissae: Vec<f64>,
    weights: Vec<f64>,
    kind: SamplingKind,
    interval: (f64, f64),
    seed: u64,
    /// C-TEM threshold `M` used to produce the set.
    threshold: Option<f64>,
    /// Indices of abscissae emitted as tangential (non sign-changing) crossings.
    tangencies: Vec<usize>,
}

/// `(γ_{n+1} − γ_{n−1})/2` with the endpoint convention.
pub fn trapezoid_weights(abscissae: &[f64]) -> Vec<f64> {
    let n = abscissae.len();
    (0..n)
        .map(|k| {
            let prev = abscissae[k.saturating_sub(1)];
            let next = abscissae[(k + 1).min(n - 1)];
            (next - prev) / 2.0
        })
        .collect()
}

impl SamplingSet {
    /// Set over `interval` from strictly increasing abscissae.
    pub fn from_abscissae(kind: SamplingKind, abscissae: Vec<f64>, interval: (f64, f64), seed: u64) -> Result<Self> {
        if let Some(k) = abscissae.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::NonMonotoneAbscissae(k + 1));
        }
        if abscissae.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidArgument("non-finite abscissa".into()));
        }
        let weights = trapezoid_weights(&abscissae);
        Ok(Self {
            abscissae,
            weights,
            kind,
            interval,
            seed,
            threshold: None,
            tangencies: Vec::new(),
        })
    }

    /// Equispaced abscissae `a, a + step, …` up to `b`.
    pub fn uniform(a: f64, b: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(b >= a) {
            return Err(Error::InvalidArgument(format!(
                "uniform grid [{a}, {b}] with step {step}"
            )));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        let pts = (0..=n).map(|k| a + step * k as f64).collect();
        Self::from_abscissae(SamplingKind::Uniform, pts, (a, b), 0)
    }

    /// Arbitrary abscissae with explicit nonnegative weights.
    pub fn with_weights(abscissae: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != abscissae.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} abscissae",
                weights.len(),
                abscissae.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidArgument("negative weight".into()));
        }
        let interval = match (abscissae.first(), abscissae.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 0.0),
        };
        let mut set = Self::from_abscissae(SamplingKind::Uniform, abscissae, interval, 0)?;
        set.weights = weights;
        Ok(set)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> SamplingKind {
        self.kind
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn tangencies(&self) -> &[usize] {
        &self.tangencies
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    pub fn max_gap(&self) -> f64 {
        self.abscissae.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Covering radius `δ = max gap / 2`, a convention rather than a value
    /// fixed by the theory.
    pub fn delta(&self) -> f64 {
        self.max_gap() / 2.0
    }

    /// Whether every cell `[j − 1/2, j + 1/2)`, `|j| ≤ l`, holds a sample.
    pub fn covers_cells(&self, l: usize) -> bool {
        let l = l as i64;
        let mut hit = vec![false; (2 * l + 1) as usize];
        for &g in &self.abscissae {
            let j = (g + 0.5).floor() as i64;
            if j.abs() <= l {
                hit[(j + l) as usize] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

fn draw_nonuniform(l: usize, lo: f64, hi: f64, r: &mut ChaCha8Rng) -> Vec<f64> {
    let n = 2 * l + 5;
    let mut pts = Vec::with_capacity(n);
    let mut g = -(l as f64) - 2.0;
    pts.push(g);
    for _ in 1..n {
        g += if lo == hi { lo } else { rng::uniform(r, lo, hi) };
        pts.push(g);
    }
    pts
}

fn check_gaps(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidGapRange { lo, hi });
    }
    Ok(())
}

/// `Γ_N`: `2L + 5` points from `−L − 2` with i.i.d. gaps uniform on
/// `[lo, hi]`.
pub fn make_nonuniform(l: usize, lo: f64, hi: f64, seed: u64) -> Result<SamplingSet> {
    check_gaps(lo, hi)?;
    let pts = draw_nonuniform(l, lo, hi, &mut rng::stream(seed, Stream::Sampling));
    let end = *pts.last().expect("at least five points");
    SamplingSet::from_abscissae(SamplingKind::Nonuniform, pts, (-(l as f64) - 2.0, end), seed)
}

/// `Γ_N` conditioned on every cell `[j − 1/2, j + 1/2)`, `|j| ≤ cells`,
/// holding a sample. The first draw is [`make_nonuniform`]'s; later draws
/// use independent sub-streams of the seed.
pub fn make_nonuniform_covering(
    l: usize,
    lo: f64,
    hi: f64,
    cells: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<SamplingSet> {
    check_gaps(lo, hi)?;
    for attempt in 0..max_attempts {
        let mut r = match attempt {
            0 => rng::stream(seed, Stream::Sampling),
            k => rng::substream(seed, Stream::Sampling, k as u64 - 1),
        };
        let pts = draw_nonuniform(l, lo, hi, &mut r);
        let end = *pts.last().expect("at least five points");
        let set = SamplingSet::from_abscissae(SamplingKind::Nonuniform, pts, (-(l as f64) - 2.0, end), seed)?;
        if set.covers_cells(cells) {
            return Ok(set);
        }
    }
    Err(Error::CoverageNotReached { attempts: max_attempts })
}

/// `Γ_J`: `γ_k = k + δ_k`, `|k| ≤ L + 2`, `δ_k` uniform on `[−jitter, jitter]`.
pub fn make_jittered(l: usize, jitter: f64, seed: u64) -> Result<SamplingSet> {
    if jitter >= 0.5 {
        return Err(Error::JitterTooLarge(jitter));
    }
    if !(jitter >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative jitter {jitter}")));
    }
    let mut r = rng::stream(seed, Stream::Sampling);
    let m = l as i64 + 2;
    let pts = (-m..=m)
        .map(|k| {
            let d = if jitter == 0.0 {
                0.0
            } else {
                rng::uniform(&mut r, -jitter, jitter)
            };
            k as f64 + d
        })
        .collect();
    SamplingSet::from_abscissae(SamplingKind::Jittered, pts, (-m as f64, m as f64), seed)
}

/// Sample values `f(γ_n)` together with their sampling set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub set: SamplingSet,
    pub values: Vec<f64>,
    /// `M = ‖x‖_∞` used by a C-TEM capture.
    pub source_norm_inf: Option<f64>,
}

impl SampleRecord {
    pub fn new(set: SamplingSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != set.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} abscissae",
                values.len(),
                set.len()
            )));
        }
        let source_norm_inf = set.threshold();
        Ok(Self {
            set,
            values,
            source_norm_inf,
        })
    }
}

pub fn capture(x: &FriSignal, set: &SamplingSet) -> SampleRecord {
    SampleRecord {
        set: set.clone(),
        values: x.eval_many(set.abscissae()),
        source_norm_inf: set.threshold(),
    }
}

/// `S f = Σ_n w_n f(γ_n) K(·, γ_n)`, returned as an element of the trial
/// span over the kernel's padded window.
pub fn pre_reconstruct(rec: &SampleRecord, kernel: &TruncatedKernel) -> Result<FriSignal> {
    let reach = kernel.window() as f64 + 0.5;
    if let Some(&g) = rec.set.abscissae().iter().find(|g| g.abs() > reach) {
        return Err(Error::WindowMismatch(format!(
            "sample at {g} outside the kernel window [-{reach}, {reach}]"
        )));
    }
    let amplitudes: Vec<f64> = rec.set.weights().iter().zip(&rec.values).map(|(w, f)| w * f).collect();
    let coef = kernel.section_coefficients(rec.set.abscissae(), &amplitudes);
    FriSignal::new(kernel.trial.clone(), coef.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Generator, QuadratureSpec};
    use crate::model::{build_truncated_kernel, make_test_signal, CoefficientLaw, ShiftMode, ShiftedFamily};

    #[test]
    fn weights_follow_endpoint_convention() {
        assert_eq!(trapezoid_weights(&[0.0, 1.0, 2.5]), vec![0.5, 1.25, 0.75]);
        let s = make_nonuniform(10, 0.9, 1.1, 3).unwrap();
        let total: f64 = s.weights().iter().sum();
        let span = s.abscissae()[s.len() - 1] - s.abscissae()[0];
        assert!((total - span).abs() < 1e-12);
        assert!(s.weights()[1..s.len() - 1].iter().all(|&w| w > 0.0));
    }

    #[test]
    fn nonuniform_properties() {
        let s = make_nonuniform(4, 1.0, 1.0, 0).unwrap();
        assert_eq!(
            s.abscissae(),
            &[-6.0, -5.0, -4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        );
        let s = make_nonuniform(30, 0.9, 1.1, 17).unwrap();
        assert_eq!(s.len(), 65);
        assert_eq!(s.abscissae()[0], -32.0);
        for w in s.abscissae().windows(2) {
            let gap = w[1] - w[0];
            assert!((0.9 - 1e-12..=1.1 + 1e-12).contains(&gap));
        }
        assert_eq!(s, make_nonuniform(30, 0.9, 1.1, 17).unwrap());
        assert_eq!(make_nonuniform(3, 1.2, 1.1, 0).unwrap_err().name(), "InvalidGapRange");
    }

    #[test]
    fn covering_draw_covers() {
        for seed in 0..20 {
            let s = make_nonuniform_covering(30, 0.9, 1.1, 30, seed, 1000).unwrap();
            assert!(s.covers_cells(30));
            let first = make_nonuniform(30, 0.9, 1.1, seed).unwrap();
            if first.covers_cells(30) {
                assert_eq!(s, first);
            }
        }
    }

    #[test]
    fn jittered_properties() {
        let s = make_jittered(5, 0.0, 9).unwrap();
        assert_eq!(s.abscissae(), (-7..=7).map(|k| k as f64).collect::<Vec<_>>().as_slice());
        assert!(s.weights()[1..14].iter().all(|&w| w == 1.0));
        let s = make_jittered(20, 0.1, 4).unwrap();
        for (k, g) in (-22..=22).zip(s.abscissae()) {
            assert!((g - k as f64).abs() <= 0.1);
        }
        assert_eq!(make_jittered(5, 0.6, 0).unwrap_err().name(), "JitterTooLarge");
        assert_eq!(make_jittered(5, 0.5, 0).unwrap_err().name(), "JitterTooLarge");
    }

    #[test]
    fn monotonicity_is_enforced() {
        let e = SamplingSet::from_abscissae(SamplingKind::Uniform, vec![0.0, 1.0, 1.0], (0.0, 1.0), 0);
        assert_eq!(e.unwrap_err(), Error::NonMonotoneAbscissae(2));
    }

    #[test]
    fn capture_cardinal_sinc() {
        let f = ShiftedFamily::unshifted(Generator::sinc(), 10);
        let mut c = vec![0.0; 21];
        c[10] = 1.0;
        let x = FriSignal::new(f, c).unwrap();
        let rec = capture(&x, &make_jittered(5, 0.0, 0).unwrap());
        for (g, v) in rec.set.abscissae().iter().zip(&rec.values) {
            assert_eq!(*v, if *g == 0.0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn pre_reconstruction_of_dense_samples() {
        let g = Generator::gauss();
        let trial = ShiftedFamily::build(g, ShiftMode::UniformRandom(0.2), 20, 5).unwrap();
        let test = ShiftedFamily::unshifted(g, 20);
        let k = build_truncated_kernel(&trial, &test, 8, 10, &QuadratureSpec::default()).unwrap();
        let h = make_test_signal(&trial, CoefficientLaw::CosineDecay, 8, 0).unwrap();
        let set = SamplingSet::uniform(-18.0, 18.0, 0.1).unwrap();
        let rec = capture(&h, &set);
        let s = pre_reconstruct(&rec, &k).unwrap();
        let worst = (0..=160)
            .map(|k| -8.0 + 0.1 * k as f64)
            .map(|t| (s.eval(t) - h.eval(t)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 5e-2, "{worst}");

        let zero = SampleRecord::new(set.clone(), vec![0.0; set.len()]).unwrap();
        assert!(pre_reconstruct(&zero, &k).unwrap().is_zero());

        let far = SamplingSet::uniform(-30.0, 30.0, 0.5).unwrap();
        let rec = capture(&h, &far);
        assert_eq!(pre_reconstruct(&rec, &k).unwrap_err().name(), "WindowMismatch");
    }
}
