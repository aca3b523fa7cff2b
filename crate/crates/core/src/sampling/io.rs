//! Text format for sampling sets: `kind=`, `seed=`, `interval=a,b` headers,
//! then one `gamma_n w_n` pair per line.

use super::{SamplingKind, SamplingSet};
use crate::error::{Error, Result};
use crate::model::io::fmt_f64;
use std::fmt::Write as _;

pub fn write_sampling_set(set: &SamplingSet) -> String {
    let mut out = String::new();
    let (a, b) = set.interval();
    let _ = writeln!(out, "kind={}", set.kind());
    let _ = writeln!(out, "seed={}", set.seed());
    let _ = writeln!(out, "interval={},{}", fmt_f64(a), fmt_f64(b));
    for (g, w) in set.abscissae().iter().zip(set.weights()) {
        let _ = writeln!(out, "{} {}", fmt_f64(*g), fmt_f64(*w));
    }
    out
}

pub fn read_sampling_set(text: &str) -> Result<SamplingSet> {
    let mut kind = None;
    let mut seed = None;
    let mut interval = None;
    let mut gammas = Vec::new();
    let mut weights = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| Error::Parse { line: n + 1, message };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "kind" => kind = Some(value.parse::<SamplingKind>().map_err(|e| err(e.to_string()))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| err(format!("bad seed `{value}`")))?),
                "interval" => {
                    let (a, b) = value
                        .split_once(',')
                        .ok_or_else(|| err("expected `interval=a,b`".into()))?;
                    let a: f64 = a.trim().parse().map_err(|_| err(format!("bad bound `{a}`")))?;
                    let b: f64 = b.trim().parse().map_err(|_| err(format!("bad bound `{b}`")))?;
                    interval = Some((a, b));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected `gamma w`, got {} fields", fields.len())));
        }
        gammas.push(
            fields[0]
                .parse::<f64>()
                .map_err(|_| err(format!("bad abscissa `{}`", fields[0])))?,
        );
        weights.push(
            fields[1]
                .parse::<f64>()
                .map_err(|_| err(format!("bad weight `{}`", fields[1])))?,
        );
    }
    let last = text.lines().count();
    let missing = |what: &str| Error::Parse {
        line: last,
        message: format!("missing `{what}=`"),
    };
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let interval = interval.ok_or_else(|| missing("interval"))?;
    let mut set = SamplingSet::from_abscissae(kind, gammas, interval, seed)?;
    set.weights = weights;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::make_nonuniform;

    #[test]
    fn round_trip() {
        let s = make_nonuniform(4, 0.9, 1.1, 8).unwrap();
        let text = write_sampling_set(&s);
        assert!(text.starts_with("kind=nonuniform\nseed=8\ninterval=-6.0000000000000000e0,"));
        let back = read_sampling_set(&text).unwrap();
        assert_eq!(back.abscissae(), s.abscissae());
        assert_eq!(back.weights(), s.weights());
        assert_eq!(write_sampling_set(&back), text);
    }

    #[test]
    fn rejects_unsorted() {
        let e = read_sampling_set("kind=uniform\nseed=0\ninterval=0,1\n1 0.5\n0 0.5\n").unwrap_err();
        assert_eq!(e.name(), "NonMonotoneAbscissae");
    }
}
