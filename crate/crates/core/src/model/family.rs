use crate::error::{Error, Result};
use crate::kernels::Generator;
use crate::rng::{self, Stream};
use std::ops::RangeInclusive;

/// How the per-index shifts `θ_i` are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftMode {
    /// `θ_i = 0` for every index.
    Zero,
    /// `θ_i` i.i.d. uniform on `[-bound, bound]`, `bound ∈ (0, 1/2]`.
    UniformRandom(f64),
}

/// Shifted generator family `{φ₀(· − i − θ_i) : |i| ≤ L_model}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedFamily {
    generator: Generator,
    shifts: Vec<f64>,
    half_width: usize,
    seed: u64,
}

impl ShiftedFamily {
    /// Draws a family from `mode`; random shifts come from the seed's shift
    /// stream in increasing index order.
    pub fn build(generator: Generator, mode: ShiftMode, half_width: usize, seed: u64) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidWindow(half_width as i64));
        }
        let n = 2 * half_width + 1;
        let shifts = match mode {
            ShiftMode::Zero => vec![0.0; n],
            ShiftMode::UniformRandom(bound) => {
                if !(bound > 0.0 && bound <= 0.5) {
                    return Err(Error::InvalidBound(bound));
                }
                let mut r = rng::stream(seed, Stream::Shifts);
                (0..n).map(|_| rng::uniform(&mut r, -bound, bound)).collect()
            }
        };
        Ok(Self {
            generator,
            shifts,
            half_width,
            seed,
        })
    }

    /// Family with every shift zero; `half_width` may be 0 here.
    pub fn unshifted(generator: Generator, half_width: usize) -> Self {
        Self {
            generator,
            shifts: vec![0.0; 2 * half_width + 1],
            half_width,
            seed: 0,
        }
    }

    /// Family from explicit shifts listed for `i = -L..=L`.
    pub fn from_shifts(generator: Generator, shifts: Vec<f64>, seed: u64) -> Result<Self> {
        if shifts.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "shift list of even length {}",
                shifts.len()
            )));
        }
        if let Some(&bad) = shifts.iter().find(|s| !(s.abs() <= 0.5)) {
            return Err(Error::InvalidBound(bad));
        }
        let half_width = (shifts.len() - 1) / 2;
        Ok(Self {
            generator,
            shifts,
            half_width,
            seed,
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn indices(&self) -> RangeInclusive<i64> {
        let l = self.half_width as i64;
        -l..=l
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn contains(&self, i: i64) -> bool {
        i.unsigned_abs() as usize <= self.half_width
    }

    /// `θ_i`; zero outside the window.
    pub fn shift(&self, i: i64) -> f64 {
        if self.contains(i) {
            self.shifts[(i + self.half_width as i64) as usize]
        } else {
            0.0
        }
    }

    /// Centre `i + θ_i` of the `i`-th basis function.
    pub fn center(&self, i: i64) -> f64 {
        i as f64 + self.shift(i)
    }

    /// `φ₀(t − i − θ_i)`.
    #[inline]
    pub fn basis(&self, i: i64, t: f64) -> f64 {
        self.generator.eval(t - self.center(i))
    }

    /// Values of the basis functions `|i| ≤ l` at `t`, in index order.
    pub fn basis_values(&self, l: usize, t: f64) -> Vec<f64> {
        let l = l as i64;
        (-l..=l).map(|i| self.basis(i, t)).collect()
    }

    pub fn require_window(&self, l: usize, what: &str) -> Result<()> {
        if l > self.half_width {
            return Err(Error::WindowMismatch(format!(
                "{what}: window {l} exceeds family half-width {}",
                self.half_width
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_has_zero_shifts() {
        let f = ShiftedFamily::build(Generator::sinc(), ShiftMode::Zero, 30, 99).unwrap();
        assert_eq!(f.shifts().len(), 61);
        assert!(f.shifts().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn random_shifts_are_bounded_and_reproducible() {
        let a = ShiftedFamily::build(Generator::sinc(), ShiftMode::UniformRandom(0.2), 30, 1).unwrap();
        let b = ShiftedFamily::build(Generator::sinc(), ShiftMode::UniformRandom(0.2), 30, 1).unwrap();
        assert!(a.shifts().iter().all(|s| s.abs() <= 0.2));
        assert!(a.shifts().iter().any(|s| s.abs() > 0.01));
        let bits = |f: &ShiftedFamily| f.shifts().iter().map(|s| s.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let c = ShiftedFamily::build(Generator::sinc(), ShiftMode::UniformRandom(0.2), 30, 2).unwrap();
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn invalid_inputs() {
        for bound in [0.0, -0.1, 0.51] {
            let e = ShiftedFamily::build(Generator::gauss(), ShiftMode::UniformRandom(bound), 5, 0);
            assert_eq!(e.unwrap_err().name(), "InvalidBound");
        }
        let e = ShiftedFamily::build(Generator::gauss(), ShiftMode::Zero, 0, 0);
        assert_eq!(e.unwrap_err().name(), "InvalidWindow");
        assert!(ShiftedFamily::from_shifts(Generator::gauss(), vec![0.0, 0.6, 0.0], 0).is_err());
    }

    #[test]
    fn basis_uses_shifted_centres() {
        let f = ShiftedFamily::from_shifts(Generator::spline(), vec![0.1, -0.2, 0.3], 0).unwrap();
        assert!((f.center(-1) + 0.9).abs() < 1e-15);
        assert_eq!(f.basis(1, 1.3), 2.0 / 3.0);
        assert_eq!(f.shift(4), 0.0);
    }
}
