//! Generator functions, their correlations, and the quadrature engine.

mod quadrature;
pub mod special;

pub use quadrature::{integrate, integrate_with_breakpoints, Domain, QuadratureResult, QuadratureSpec};

use crate::error::{Error, Result};
use special::{centered_bspline, cubic_bspline, cubic_bspline_antiderivative, sine_integral};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Sinc,
    Gauss,
    CubicBSpline,
    Indicator,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Sinc,
        GeneratorKind::Gauss,
        GeneratorKind::CubicBSpline,
        GeneratorKind::Indicator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Sinc => "sinc",
            GeneratorKind::Gauss => "gauss",
            GeneratorKind::CubicBSpline => "spline",
            GeneratorKind::Indicator => "indicator",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sinc" => Ok(GeneratorKind::Sinc),
            "gauss" | "gaussian" => Ok(GeneratorKind::Gauss),
            "spline" | "cubic-bspline" | "cubicbspline" => Ok(GeneratorKind::CubicBSpline),
            "indicator" | "chi" => Ok(GeneratorKind::Indicator),
            other => Err(Error::InvalidArgument(format!("unknown generator '{other}'"))),
        }
    }
}

/// A real generator function `φ₀` on the line.
///
/// `decay_halfwidth` is the radius beyond which `|φ₀|` is neglected inside
/// integrals. It is infinite for `Sinc`, whose integrals are truncated with
/// [`QuadratureSpec::infinite_window`] instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub decay_halfwidth: f64,
}

impl Generator {
    pub fn new(kind: GeneratorKind) -> Self {
        let decay_halfwidth = match kind {
            GeneratorKind::Sinc => f64::INFINITY,
            // exp(-1.5 * 100) is below 1e-65
            GeneratorKind::Gauss => 10.0,
            GeneratorKind::CubicBSpline => 2.0,
            GeneratorKind::Indicator => 0.5,
        };
        Self { kind, decay_halfwidth }
    }

    pub fn sinc() -> Self {
        Self::new(GeneratorKind::Sinc)
    }

    pub fn gauss() -> Self {
        Self::new(GeneratorKind::Gauss)
    }

    pub fn spline() -> Self {
        Self::new(GeneratorKind::CubicBSpline)
    }

    pub fn indicator() -> Self {
        Self::new(GeneratorKind::Indicator)
    }

    /// Closed support for compactly supported generators.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.kind {
            GeneratorKind::CubicBSpline => Some((-2.0, 2.0)),
            GeneratorKind::Indicator => Some((-0.5, 0.5)),
            _ => None,
        }
    }

    /// Points where the generator or its low derivatives jump.
    pub fn knots(&self) -> &'static [f64] {
        match self.kind {
            GeneratorKind::CubicBSpline => &[-2.0, -1.0, 0.0, 1.0, 2.0],
            GeneratorKind::Indicator => &[-0.5, 0.5],
            _ => &[],
        }
    }

    /// Radius outside which the generator is treated as zero when a finite
    /// evaluation window is needed (kernel grids, best-approximation tails).
    pub fn effective_radius(&self) -> f64 {
        match self.kind {
            GeneratorKind::Sinc => 4.0,
            GeneratorKind::Gauss => 5.0,
            GeneratorKind::CubicBSpline => 2.0,
            GeneratorKind::Indicator => 0.5,
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self.kind, GeneratorKind::Indicator)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        eval_generator(self.kind, t)
    }
}

/// `φ₀(t)` for each built-in generator.
#[inline]
pub fn eval_generator(kind: GeneratorKind, t: f64) -> f64 {
    match kind {
        GeneratorKind::Sinc => sinc(t),
        GeneratorKind::Gauss => (-1.5 * t * t).exp(),
        GeneratorKind::CubicBSpline => cubic_bspline(t),
        GeneratorKind::Indicator => {
            if (-0.5..0.5).contains(&t) {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// `sin(πt)/(πt)`, exactly 1 at the origin and exactly 0 at nonzero integers.
#[inline]
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else if t.fract() == 0.0 {
        0.0
    } else {
        let x = PI * t;
        x.sin() / x
    }
}

/// `⟨g(· − a), g̃(· − b)⟩ = ∫ g(t − a) g̃(t − b) dt`.
///
/// Closed forms are used for sinc–sinc, gauss–gauss, sinc–indicator,
/// spline–indicator, spline–spline and indicator–indicator (either order);
/// everything else goes through [`correlation_by_quadrature`].
pub fn correlation(g: &Generator, gt: &Generator, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    match closed_form_correlation(g.kind, gt.kind, a, b) {
        Some(v) => Ok(v),
        None => correlation_by_quadrature(g, gt, a, b, spec),
    }
}

/// Closed-form correlation, when one exists for the pair.
pub fn closed_form_correlation(g: GeneratorKind, gt: GeneratorKind, a: f64, b: f64) -> Option<f64> {
    use GeneratorKind::*;
    let v = match (g, gt) {
        (Sinc, Sinc) => sinc(a - b),
        (Gauss, Gauss) => {
            let d = a - b;
            (PI / 3.0).sqrt() * (-0.75 * d * d).exp()
        }
        (Sinc, Indicator) => sinc_box(b - a),
        (Indicator, Sinc) => sinc_box(a - b),
        (CubicBSpline, Indicator) => spline_box(b - a),
        (Indicator, CubicBSpline) => spline_box(a - b),
        (CubicBSpline, CubicBSpline) => centered_bspline(7, a - b),
        (Indicator, Indicator) => (1.0 - (a - b).abs()).max(0.0),
        _ => return None,
    };
    Some(v)
}

/// `∫_{c-1/2}^{c+1/2} sinc(t) dt`.
fn sinc_box(c: f64) -> f64 {
    (sine_integral(PI * (c + 0.5)) - sine_integral(PI * (c - 0.5))) / PI
}

/// `∫_{c-1/2}^{c+1/2} B(t) dt` for the cubic B-spline.
fn spline_box(c: f64) -> f64 {
    cubic_bspline_antiderivative(c + 0.5) - cubic_bspline_antiderivative(c - 0.5)
}

/// Correlation by adaptive quadrature, ignoring any closed form.
///
/// The domain is the intersection of the supports when either factor is
/// compactly supported; a Gaussian factor limits the window to its decay
/// radius; sinc–sinc uses the whole-line window centred between the shifts.
pub fn correlation_by_quadrature(g: &Generator, gt: &Generator, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = match product_window(g, gt, a, b, spec) {
        Some(w) => w,
        None => return Ok(0.0),
    };
    let mut breaks: Vec<f64> = g.knots().iter().map(|k| k + a).collect();
    breaks.extend(gt.knots().iter().map(|k| k + b));
    let whole_line = g.kind == GeneratorKind::Sinc && gt.kind == GeneratorKind::Sinc;
    let domain = if whole_line {
        Domain::WholeLine { center: 0.5 * (a + b) }
    } else {
        Domain::Interval(lo, hi)
    };
    let f = |t: f64| g.eval(t - a) * gt.eval(t - b);
    integrate_with_breakpoints(f, domain, &breaks, spec).map(|r| r.value)
}

/// Window carrying the product `g(t − a) g̃(t − b)`; `None` when the supports
/// do not overlap.
fn product_window(g: &Generator, gt: &Generator, a: f64, b: f64, spec: &QuadratureSpec) -> Option<(f64, f64)> {
    let reach = |gen: &Generator, s: f64| -> (f64, f64) {
        match gen.support() {
            Some((lo, hi)) => (s + lo, s + hi),
            None if gen.decay_halfwidth.is_finite() => (s - gen.decay_halfwidth, s + gen.decay_halfwidth),
            None => (f64::NEG_INFINITY, f64::INFINITY),
        }
    };
    let (l1, h1) = reach(g, a);
    let (l2, h2) = reach(gt, b);
    let (lo, hi) = (l1.max(l2), h1.min(h2));
    if lo.is_infinite() || hi.is_infinite() {
        let c = 0.5 * (a + b);
        return Some((c - spec.infinite_window, c + spec.infinite_window));
    }
    if hi <= lo {
        None
    } else {
        Some((lo, hi))
    }
}
