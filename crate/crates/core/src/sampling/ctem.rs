use super::{SamplingKind, SamplingSet};
use crate::error::{Error, Result};
use crate::model::FriSignal;
use rayon::prelude::*;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn sin_pi(t: f64) -> f64 {
    crate::model::sin_cos_pi(t).0
}

/// Minimises `f` on `[a, b]` by golden-section search; returns the argmin.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Root of `r` in `[a, b]` with `r(a) r(b) < 0`; stops once the bracket is
/// below `tol` and the residual below `res_tol`.
fn bisect(r: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64, res_tol: f64) -> f64 {
    let mut ra = r(a);
    let mut best = if ra.abs() <= r(b).abs() { a } else { b };
    let mut best_res = r(best).abs();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let rm = r(m);
        if rm.abs() < best_res {
            best = m;
            best_res = rm.abs();
        }
        if rm == 0.0 || (b - a <= tol && best_res <= res_tol) {
            break;
        }
        if (rm < 0.0) == (ra < 0.0) {
            a = m;
            ra = rm;
        } else {
            b = m;
        }
    }
    best
}

enum Crossing {
    Root(f64),
    Tangent(f64),
}

/// Crossing-time encoding: the abscissae where `x(t) = M sin(πt)` on
/// `[a, b]`, with `M` the grid supremum of `|x|` polished by golden-section
/// search around the grid argmax.
pub fn make_ctem(x: &FriSignal, interval: (f64, f64), grid_step: f64, root_tol: f64) -> Result<SamplingSet> {
    let (a, b) = interval;
    if !(b > a) || !(grid_step > 0.0) || !(root_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "C-TEM on [{a}, {b}] with grid step {grid_step} and tolerance {root_tol}"
        )));
    }
    let n = ((b - a) / grid_step - 1e-9).ceil() as usize;
    let h = (b - a) / n as f64;
    let ts: Vec<f64> = (0..=n).map(|k| if k == n { b } else { a + h * k as f64 }).collect();
    let xs = x.eval_many(&ts);

    let (kmax, grid_sup) = xs
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.abs()))
        .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let lo = ts[kmax.saturating_sub(1)];
    let hi = ts[(kmax + 1).min(n)];
    let t_star = golden_min(|t| -x.eval(t).abs(), lo, hi, 1e-12);
    let m = grid_sup.max(x.eval(t_star).abs());
    if m <= 1e-14 {
        return Err(Error::ZeroSignal(m));
    }

    let r = |t: f64| x.eval(t) - m * sin_pi(t);
    let rs: Vec<f64> = ts.iter().zip(&xs).map(|(&t, &v)| v - m * sin_pi(t)).collect();
    let res_tol = 1e-10 * m;

    let mut found: Vec<Crossing> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            if rs[k] == 0.0 {
                out.push(Crossing::Root(ts[k]));
            }
            if k < n && rs[k] * rs[k + 1] < 0.0 {
                out.push(Crossing::Root(bisect(&r, ts[k], ts[k + 1], root_tol, res_tol)));
            }
            // Local minimum of |r| without a sign change: two close roots or
            // a tangency may hide inside the neighbouring cells.
            if k > 0 && k < n && rs[k] != 0.0 && rs[k - 1] * rs[k] > 0.0 && rs[k] * rs[k + 1] > 0.0 {
                let s = rs[k].signum();
                if s * rs[k] < s * rs[k - 1] && s * rs[k] <= s * rs[k + 1] {
                    let t_min = golden_min(|t| s * r(t), ts[k - 1], ts[k + 1], 1e-13);
                    let r_min = r(t_min);
                    if s * r_min < 0.0 {
                        out.push(Crossing::Root(bisect(&r, ts[k - 1], t_min, root_tol, res_tol)));
                        out.push(Crossing::Root(bisect(&r, t_min, ts[k + 1], root_tol, res_tol)));
                    } else if r_min.abs() <= root_tol {
                        out.push(Crossing::Tangent(t_min));
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by(|p, q| pos(p).total_cmp(&pos(q)));

    let mut abscissae: Vec<f64> = Vec::with_capacity(found.len());
    let mut tangencies = Vec::new();
    for c in found {
        let t = pos(&c);
        if abscissae.last().is_some_and(|&prev| t - prev <= root_tol) {
            continue;
        }
        if matches!(c, Crossing::Tangent(_)) {
            tangencies.push(abscissae.len());
        }
        abscissae.push(t);
    }
    if abscissae.is_empty() {
        return Err(Error::NoCrossings);
    }
    let mut set = SamplingSet::from_abscissae(SamplingKind::Ctem, abscissae, interval, x.seed())?;
    set.threshold = Some(m);
    set.tangencies = tangencies;
    Ok(set)
}

fn pos(c: &Crossing) -> f64 {
    match *c {
        Crossing::Root(t) | Crossing::Tangent(t) => t,
    }
}
