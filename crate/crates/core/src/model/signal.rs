use super::family::ShiftedFamily;
use super::Evaluable;
use crate::error::{Error, Result};
use crate::kernels::GeneratorKind;
use crate::rng::{self, Stream};
use std::f64::consts::PI;

/// Coefficient laws of the test signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientLaw {
    /// `c_i = α_i` with `(1 + |i|) α_i` uniform on `[-1, 1]`.
    RandomDecay,
    /// `c_i = (1 + |i|)⁻¹ cos(π i / 8)`.
    CosineDecay,
}

/// `Σ_{|i| ≤ L_sig} c_i φ₀(t − i − θ_i)`, an element of `V_{2,L_sig}(Φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FriSignal {
    family: ShiftedFamily,
    coeffs: Vec<f64>,
    half_width: usize,
    seed: u64,
}

impl FriSignal {
    /// Signal with coefficients listed for `i = -L_sig..=L_sig`.
    pub fn new(family: ShiftedFamily, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "coefficient list of even length {}",
                coeffs.len()
            )));
        }
        let half_width = (coeffs.len() - 1) / 2;
        family.require_window(half_width, "signal")?;
        Ok(Self {
            family,
            coeffs,
            half_width,
            seed: 0,
        })
    }

    pub fn zero(family: ShiftedFamily, half_width: usize) -> Result<Self> {
        Self::new(family, vec![0.0; 2 * half_width + 1])
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn family(&self) -> &ShiftedFamily {
        &self.family
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `c_i`, zero outside the coefficient window.
    pub fn coefficient(&self, i: i64) -> f64 {
        if i.unsigned_abs() as usize <= self.half_width {
            self.coeffs[(i + self.half_width as i64) as usize]
        } else {
            0.0
        }
    }

    /// Coefficients re-indexed onto the window `|i| ≤ l` (zero-padded or
    /// truncated).
    pub fn coefficients_on(&self, l: usize) -> Vec<f64> {
        let l = l as i64;
        (-l..=l).map(|i| self.coefficient(i)).collect()
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        let l = self.half_width as i64;
        -l..=l
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Index range whose basis functions can be nonzero at `t`.
    fn active_range(&self, t: f64) -> (i64, i64) {
        let l = self.half_width as i64;
        match self.family.generator().support() {
            Some((lo, hi)) => {
                // |θ| ≤ 1/2 widens the reach by one half.
                let first = (t - hi - 0.5).floor() as i64;
                let last = (t - lo + 0.5).ceil() as i64;
                (first.max(-l), last.min(l))
            }
            None => (-l, l),
        }
    }

    /// `f(t) = Σ_i c_i φ₀(t − i − θ_i)`.
    pub fn eval(&self, t: f64) -> f64 {
        let (first, last) = self.active_range(t);
        let mut sum = 0.0;
        for i in first..=last {
            let c = self.coeffs[(i + self.half_width as i64) as usize];
            if c != 0.0 {
                sum += c * self.family.basis(i, t);
            }
        }
        sum
    }

    /// Evaluates on many abscissae; sinc signals use one `sin`/`cos` pair per
    /// abscissa instead of one `sin` per term.
    pub fn eval_many(&self, ts: &[f64]) -> Vec<f64> {
        if self.family.generator().kind != GeneratorKind::Sinc {
            return ts.iter().map(|&t| self.eval(t)).collect();
        }
        let terms: Vec<(f64, f64, f64, f64)> = self
            .indices()
            .filter_map(|i| {
                let c = self.coefficient(i);
                if c == 0.0 {
                    return None;
                }
                let centre = self.family.center(i);
                let (s, co) = sin_cos_pi(centre);
                Some((c, centre, s, co))
            })
            .collect();
        ts.iter()
            .map(|&t| {
                let (st, ct) = sin_cos_pi(t);
                let mut sum = 0.0;
                for &(c, centre, sc, cc) in &terms {
                    let d = t - centre;
                    if d.abs() < 0.5 {
                        sum += c * crate::kernels::sinc(d);
                    } else {
                        // sin(π(t − c)) = sin πt cos πc − cos πt sin πc
                        sum += c * (st * cc - ct * sc) / (PI * d);
                    }
                }
                sum
            })
            .collect()
    }
}

impl Evaluable for FriSignal {
    fn eval(&self, t: f64) -> f64 {
        FriSignal::eval(self, t)
    }
}

/// `(sin πx, cos πx)`, exact at the integers.
pub(crate) fn sin_cos_pi(x: f64) -> (f64, f64) {
    let n = x.round();
    let (s, c) = (PI * (x - n)).sin_cos();
    if n.rem_euclid(2.0) == 0.0 {
        (s, c)
    } else {
        (-s, -c)
    }
}

/// `cos(π i / 8)`, exact at the zeros and extrema.
fn cos_pi_over_8(i: i64) -> f64 {
    const C1: f64 = 0.923_879_532_511_286_7; // cos(π/8)
    const C2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const C3: f64 = 0.382_683_432_365_089_8; // cos(3π/8)
    const TABLE: [f64; 16] = [
        1.0, C1, C2, C3, 0.0, -C3, -C2, -C1, -1.0, -C1, -C2, -C3, 0.0, C3, C2, C1,
    ];
    TABLE[i.rem_euclid(16) as usize]
}

/// Draws a test signal on the window `|i| ≤ L_sig` of `family`.
pub fn make_test_signal(
    family: &ShiftedFamily,
    law: CoefficientLaw,
    half_width: usize,
    seed: u64,
) -> Result<FriSignal> {
    if half_width < 1 {
        return Err(Error::InvalidWindow(half_width as i64));
    }
    family.require_window(half_width, "test signal")?;
    let l = half_width as i64;
    let coeffs = match law {
        CoefficientLaw::RandomDecay => {
            let mut r = rng::stream(seed, Stream::Coefficients);
            (-l..=l)
                .map(|i| rng::uniform(&mut r, -1.0, 1.0) / (1.0 + i.abs() as f64))
                .collect()
        }
        CoefficientLaw::CosineDecay => (-l..=l).map(|i| cos_pi_over_8(i) / (1.0 + i.abs() as f64)).collect(),
    };
    Ok(FriSignal::new(family.clone(), coeffs)?.with_seed(seed))
}
