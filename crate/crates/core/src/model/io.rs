//! Line-oriented text format for families and signals.
//!
//! ```text
//! generator=sinc
//! L=3
//! seed=7
//! -3 1.2345678901234567e-01 -2.5000000000000000e-01
//! ...
//! ```

use super::family::ShiftedFamily;
use super::signal::FriSignal;
use crate::error::{Error, Result};
use crate::kernels::{Generator, GeneratorKind};
use std::fmt::Write as _;

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_signal(signal: &FriSignal) -> String {
    let family = signal.family();
    let mut out = String::new();
    let _ = writeln!(out, "generator={}", family.generator().kind);
    let _ = writeln!(out, "L={}", signal.half_width());
    let _ = writeln!(out, "seed={}", signal.seed());
    for i in signal.indices() {
        let _ = writeln!(
            out,
            "{i} {} {}",
            fmt_f64(family.shift(i)),
            fmt_f64(signal.coefficient(i))
        );
    }
    out
}

/// Writes the family with every coefficient zero.
pub fn write_family(family: &ShiftedFamily) -> String {
    let signal = FriSignal::zero(family.clone(), family.half_width())
        .expect("window equals the family window")
        .with_seed(family.seed());
    write_signal(&signal)
}

pub fn read_signal(text: &str) -> Result<FriSignal> {
    let mut kind: Option<GeneratorKind> = None;
    let mut half_width: Option<usize> = None;
    let mut seed: Option<u64> = None;
    let mut shifts = Vec::new();
    let mut coeffs = Vec::new();
    let mut expected = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = n + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "generator" => kind = Some(value.parse().map_err(|_| err(format!("unknown generator `{value}`")))?),
                "L" => half_width = Some(value.parse().map_err(|_| err(format!("bad window `{value}`")))?),
                "seed" => seed = Some(value.parse().map_err(|_| err(format!("bad seed `{value}`")))?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
            continue;
        }
        let l = half_width.ok_or_else(|| err("data line before `L=`".into()))? as i64;
        let next = *expected.get_or_insert(-l);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `i theta c`, got {} fields", fields.len())));
        }
        let i: i64 = fields[0]
            .parse()
            .map_err(|_| err(format!("bad index `{}`", fields[0])))?;
        if i != next {
            return Err(err(format!("expected index {next}, got {i}")));
        }
        let theta: f64 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad shift `{}`", fields[1])))?;
        let c: f64 = fields[2]
            .parse()
            .map_err(|_| err(format!("bad coefficient `{}`", fields[2])))?;
        shifts.push(theta);
        coeffs.push(c);
        expected = Some(next + 1);
    }
    let missing = |what: &str| Error::Parse {
        line: text.lines().count(),
        message: format!("missing `{what}=`"),
    };
    let kind = kind.ok_or_else(|| missing("generator"))?;
    let l = half_width.ok_or_else(|| missing("L"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    if coeffs.len() != 2 * l + 1 {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {} data lines, got {}", 2 * l + 1, coeffs.len()),
        });
    }
    let family = ShiftedFamily::from_shifts(Generator::new(kind), shifts, seed)?;
    Ok(FriSignal::new(family, coeffs)?.with_seed(seed))
}

pub fn read_family(text: &str) -> Result<ShiftedFamily> {
    read_signal(text).map(|s| s.family().clone())
}
