//! Special functions behind the closed-form correlations.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt`.
///
/// Power series for `|x| <= 2`, otherwise the continued fraction for
/// `E1(ix)` evaluated with the modified Lentz method.
pub fn sine_integral(x: f64) -> f64 {
    let t = x.abs();
    let si = if t < 1e-300 {
        t
    } else if t > 2.0 {
        si_continued_fraction(t)
    } else {
        si_series(t)
    };
    si.copysign(x)
}

fn si_series(t: f64) -> f64 {
    // Σ (-1)^k t^(2k+1) / ((2k+1) (2k+1)!)
    let t2 = t * t;
    let mut term = t; // t^(2k+1) / (2k+1)!
    let mut sum = t;
    for k in 1..40 {
        let n = (2 * k) as f64;
        term *= -t2 / (n * (n + 1.0));
        let contrib = term / (n + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn si_continued_fraction(t: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..1000 {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += Complex64::new(2.0, 0.0);
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(t.cos(), -t.sin());
    FRAC_PI_2 + h.im
}

/// Centered cardinal cubic B-spline, support `[-2, 2]`, `B(0) = 2/3`.
pub fn cubic_bspline(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        2.0 / 3.0 - a * a + 0.5 * a * a * a
    } else if a < 2.0 {
        let r = 2.0 - a;
        r * r * r / 6.0
    } else {
        0.0
    }
}

/// `∫_{-2}^{x} B(s) ds` for the centered cubic B-spline.
pub fn cubic_bspline_antiderivative(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else if x <= -1.0 {
        let r = 2.0 + x;
        r * r * r * r / 24.0
    } else if x <= 0.0 {
        0.5 + x * (2.0 / 3.0 + x * x * (-1.0 / 3.0 - x / 8.0))
    } else {
        1.0 - cubic_bspline_antiderivative(-x)
    }
}

/// Centered cardinal B-spline of degree `n`, support `[-(n+1)/2, (n+1)/2]`.
///
/// Evaluated with the cardinal recursion
/// `N_m(y) = (y N_{m-1}(y) + (m + 1 - y) N_{m-1}(y - 1)) / m`.
pub fn centered_bspline(degree: usize, x: f64) -> f64 {
    let y = x + (degree as f64 + 1.0) / 2.0;
    if y <= 0.0 || y >= degree as f64 + 1.0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..=degree)
        .map(|k| {
            let s = y - k as f64;
            if (0.0..1.0).contains(&s) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for m in 1..=degree {
        let mf = m as f64;
        for k in 0..=(degree - m) {
            let s = y - k as f64;
            v[k] = (s * v[k] + (mf + 1.0 - s) * v[k + 1]) / mf;
        }
    }
    v[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath reference values, 30 digits.
    const SI_TABLE: [(f64, f64); 12] = [
        (0.5, 0.493107418043066689161626707573),
        (1.0, 0.946083070367183014941353313823),
        (1.5, 1.32468353117211968037047284688),
        (2.0, 1.6054129768026948485767201482),
        (2.5, 1.77852017344382664210031198174),
        (3.0, 1.84865252799946825639773025111),
        (5.0, 1.54993124494467413727440840073),
        (7.5, 1.51068153094338587819732766902),
        (10.0, 1.65834759421887404933097187939),
        (20.0, 1.54824170104343984016364334213),
        (50.0, 1.55161707248593589472798559486),
        (100.0, 1.5622254668890562933523451388),
    ];

    #[test]
    fn sine_integral_matches_reference() {
        for (x, want) in SI_TABLE {
            let got = sine_integral(x);
            assert!((got - want).abs() < 2e-15, "Si({x}) = {got}, want {want}");
            assert_eq!(sine_integral(-x), -got);
        }
        assert_eq!(sine_integral(0.0), 0.0);
    }

    #[test]
    fn cubic_bspline_values() {
        assert_eq!(cubic_bspline(0.0), 2.0 / 3.0);
        assert!((cubic_bspline(1.0) - 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(cubic_bspline(2.0), 0.0);
        assert_eq!(cubic_bspline(-2.5), 0.0);
        assert_eq!(centered_bspline(3, 0.0), 2.0 / 3.0);
        for k in -40..=40 {
            let x = k as f64 * 0.061;
            assert!((centered_bspline(3, x) - cubic_bspline(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn antiderivative_is_consistent() {
        assert_eq!(cubic_bspline_antiderivative(0.0), 0.5);
        assert!((cubic_bspline_antiderivative(-1.0) - 1.0 / 24.0).abs() < 1e-16);
        // derivative check by central differences
        for k in -19..=19 {
            let x = k as f64 * 0.1 + 0.013;
            let h = 1e-5;
            let d = (cubic_bspline_antiderivative(x + h) - cubic_bspline_antiderivative(x - h)) / (2.0 * h);
            assert!((d - cubic_bspline(x)).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn degree_seven_matches_autocorrelation_quadrature() {
        // ∫ B3(t) B3(t - s) dt, mpmath quadrature.
        let table = [
            (0.0, 0.479365079365079365079365079365),
            (0.5, 0.402596416170634920634920634921),
            (1.0, 0.23630952380952380952380952381),
            (1.7, 0.0575971933928571496074116578589),
            (3.0, 0.000198412698412698412698412698413),
            (3.9, 1.98412698412699646279551170812e-11),
        ];
        for (s, want) in table {
            assert!((centered_bspline(7, s) - want).abs() < 1e-15, "s = {s}");
            assert!((centered_bspline(7, -s) - want).abs() < 1e-15);
        }
    }
}
