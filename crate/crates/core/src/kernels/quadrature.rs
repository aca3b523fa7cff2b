//! Adaptive 15-point Gauss–Kronrod quadrature.
//!
//! Global adaptive refinement: the interval with the largest error estimate is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol * |I|)`.
//! Ties are broken by the left endpoint, so the subdivision sequence is a pure
//! function of the inputs.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Tolerances and truncation window for every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Half-width used to truncate whole-line integrals of slowly decaying
    /// integrands.
    pub infinite_window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1 << 20,
            infinite_window: 500.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidQuadratureSpec("tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadratureSpec("max_subdivisions must be positive"));
        }
        if !(self.infinite_window >= 10.0) || !self.infinite_window.is_finite() {
            return Err(Error::InvalidQuadratureSpec("infinite_window must be finite and >= 10"));
        }
        Ok(())
    }

    pub fn with_window(mut self, w: f64) -> Self {
        self.infinite_window = w;
        self
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(f64, f64),
    /// The whole line, truncated to `[center - W, center + W]`.
    WholeLine {
        center: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Piece { a, b, value, error }
}

/// Integrates `f` over `domain`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Domain, spec: &QuadratureSpec) -> Result<f64> {
    integrate_with_breakpoints(f, domain, &[], spec).map(|r| r.value)
}

/// Integrates `f` over `domain`, splitting first at every breakpoint strictly
/// inside the domain (discontinuities and kinks of piecewise integrands).
///
/// Whole-line domains start from unit-length pieces so that oscillatory
/// integrands are resolved before the error estimate is trusted.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    let (lo, hi, unit_split) = match domain {
        Domain::Interval(a, b) => (a, b, false),
        Domain::WholeLine { center } => (center - spec.infinite_window, center + spec.infinite_window, true),
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite bounds [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    if lo > hi {
        let r = integrate_with_breakpoints(f, Domain::Interval(hi, lo), breakpoints, spec)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }

    let mut cuts: Vec<f64> = vec![lo];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > lo && p < hi).collect();
    if unit_split {
        let n = (hi - lo).ceil() as usize;
        let step = (hi - lo) / n as f64;
        inner.extend((1..n).map(|k| lo + step * k as f64));
    }
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);

    let mut heap = BinaryHeap::with_capacity(cuts.len() * 2);
    let mut frozen: Vec<Piece> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in cuts.windows(2) {
        let p = gk15(&f, w[0], w[1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    let mut count = heap.len();

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::SubdivisionLimitExceeded {
                limit: spec.max_subdivisions,
                error: total_err,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(1.0) {
            frozen.push(worst);
            continue;
        }
        if count >= spec.max_subdivisions {
            return Err(Error::SubdivisionLimitExceeded {
                limit: spec.max_subdivisions,
                error: total_err,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        count += 1;
    }

    // Resum in abscissa order to shed the drift of the running totals.
    let mut pieces: Vec<Piece> = heap.into_vec();
    pieces.extend(frozen);
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = pieces.iter().map(|p| p.value).sum();
    let error = pieces.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error,
        intervals: pieces.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let v = integrate(|_| 1.0, Domain::Interval(0.0, 1.0), &QuadratureSpec::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let spec = QuadratureSpec::default();
        let v = integrate(|t| t * t, Domain::Interval(2.0, 0.0), &spec).unwrap();
        assert!((v + 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_square_whole_line() {
        let spec = QuadratureSpec::default().with_window(20.0);
        let v = integrate(|t| (-3.0 * t * t).exp(), Domain::WholeLine { center: 0.0 }, &spec).unwrap();
        let want = (std::f64::consts::PI / 3.0).sqrt();
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn breakpoints_resolve_jumps() {
        let spec = QuadratureSpec::default();
        let f = |t: f64| if (0.3..0.7).contains(&t) { 1.0 } else { 0.0 };
        let r = integrate_with_breakpoints(f, Domain::Interval(0.0, 1.0), &[0.3, 0.7], &spec).unwrap();
        assert!((r.value - 0.4).abs() < 1e-14);
        assert_eq!(r.intervals, 3);
    }

    #[test]
    fn subdivision_limit_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 4,
            ..Default::default()
        };
        let err = integrate(|t| (1.0 / t).sin(), Domain::Interval(1e-3, 1.0), &spec).unwrap_err();
        assert_eq!(err.name(), "SubdivisionLimitExceeded");
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(|_| 1.0, Domain::Interval(0.0, 1.0), &spec).is_err());
        let spec = QuadratureSpec::default().with_window(5.0);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn deterministic() {
        let spec = QuadratureSpec::default();
        let f = |t: f64| (5.0 * t).sin() * (-t * t).exp();
        let a = integrate_with_breakpoints(f, Domain::Interval(-3.0, 4.0), &[], &spec).unwrap();
        let b = integrate_with_breakpoints(f, Domain::Interval(-3.0, 4.0), &[], &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
