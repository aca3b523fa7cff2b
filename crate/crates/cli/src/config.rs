use crate::CliError;
use clap::Args;
use galerkin_rks::experiment::{Protocol, ShiftSet};
use galerkin_rks::kernels::GeneratorKind;
use galerkin_rks::sampling::SamplingKind;
use galerkin_rks::Error;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Experiment parameters shared by every subcommand. Any of them may also
/// come from the `--config` file; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// Trial generator: sinc, gauss or spline, or a comma list
    #[arg(long)]
    #[serde(default, deserialize_with = "text_list")]
    pub generator: Option<String>,
    /// Test generator (only indicator)
    #[arg(long)]
    pub testgen: Option<String>,
    /// Signal law 0..=3
    #[arg(long)]
    pub law: Option<u8>,
    /// Half-width L, or a comma list
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L", default, deserialize_with = "number_list")]
    pub l: Option<String>,
    /// Test half-width for least-squares (sub-Galerkin) solves
    #[arg(long = "Ltilde", value_name = "LTILDE")]
    #[serde(rename = "Ltilde")]
    pub ltilde: Option<usize>,
    /// nonuniform, jittered or ctem, or a comma list
    #[arg(long)]
    #[serde(default, deserialize_with = "text_list")]
    pub sampling: Option<String>,
    /// zero or random; overrides the shift set implied by the law
    #[arg(long)]
    pub shift_mode: Option<String>,
    #[arg(long)]
    pub shift_bound: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma list of seeds
    #[arg(long)]
    #[serde(default, deserialize_with = "number_list")]
    pub seeds: Option<String>,
    /// Increment tolerance of the iteration
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Signal file to use instead of a generated reference signal
    #[arg(long)]
    pub signal: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ListValue<T> {
    One(T),
    Many(Vec<T>),
    Text(String),
}

fn flatten<T: ToString>(v: Option<ListValue<T>>) -> Option<String> {
    v.map(|v| match v {
        ListValue::One(x) => x.to_string(),
        ListValue::Many(xs) => xs.iter().map(T::to_string).collect::<Vec<_>>().join(","),
        ListValue::Text(s) => s,
    })
}

/// Accepts `10`, `[10, 20]` or `"10,20"`.
fn number_list<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Option::<ListValue<u64>>::deserialize(d).map(flatten)
}

/// Accepts `"a"`, `["a", "b"]` or `"a,b"`.
fn text_list<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Option::<ListValue<String>>::deserialize(d).map(flatten)
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Params {
    pub fn merged_with_file(mut self, path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(self) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        let file: Params = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
        merge_fields!(
            self,
            file,
            generator,
            testgen,
            law,
            l,
            ltilde,
            sampling,
            shift_mode,
            shift_bound,
            seed,
            seeds,
            tol,
            jitter,
            out,
            signal
        );
        Ok(self)
    }
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub generators: Option<Vec<GeneratorKind>>,
    pub law: Option<u8>,
    pub ls: Option<Vec<usize>>,
    pub ltilde: Option<usize>,
    pub samplings: Option<Vec<SamplingKind>>,
    pub shift_mode: Option<ShiftSet>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub signal: Option<PathBuf>,
    pub protocol: Protocol,
}

fn list<T>(text: &str, parse: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Error> {
    let items: Vec<T> = text.split(',').map(|s| parse(s.trim())).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(Error::InvalidArgument(format!("empty list `{text}`")));
    }
    Ok(items)
}

fn parse_number<T: std::str::FromStr>(s: &str) -> Result<T, Error> {
    s.parse()
        .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a valid number")))
}

impl Config {
    pub fn resolve(p: Params) -> Result<Self, CliError> {
        let generators = p.generator.as_deref().map(|g| list(g, |s| s.parse())).transpose()?;
        if let Some(gs) = &generators {
            if let Some(g) = gs.iter().find(|g| **g == GeneratorKind::Indicator) {
                return Err(Error::InvalidArgument(format!("trial generator `{g}` is not supported")).into());
            }
        }
        if let Some(t) = &p.testgen {
            if t.parse::<GeneratorKind>()? != GeneratorKind::Indicator {
                return Err(Error::InvalidArgument(format!("test generator `{t}` is not supported")).into());
            }
        }
        if let Some(law) = p.law {
            galerkin_rks::experiment::law_parts(law)?;
        }
        let ls = p.l.as_deref().map(|l| list(l, parse_number)).transpose()?;
        if let Some(l) = ls.iter().flatten().find(|&&l| l < 1) {
            return Err(Error::InvalidWindow(*l as i64).into());
        }
        if let (Some(lt), Some(ls)) = (p.ltilde, &ls) {
            if let Some(l) = ls.iter().find(|&&l| lt < l) {
                return Err(Error::InvalidArgument(format!("Ltilde {lt} is smaller than L {l}")).into());
            }
        }
        let samplings = p.sampling.as_deref().map(|s| list(s, |k| k.parse())).transpose()?;
        let shift_mode = p.shift_mode.as_deref().map(str::parse).transpose()?;
        let seeds = match (&p.seeds, p.seed) {
            (Some(s), _) => list(s, parse_number)?,
            (None, Some(s)) => vec![s],
            (None, None) => vec![1],
        };
        let mut protocol = Protocol::default();
        if let Some(b) = p.shift_bound {
            if !(0.0..0.5).contains(&b) {
                return Err(Error::InvalidBound(b).into());
            }
            protocol.shift_bound = b;
        }
        if let Some(t) = p.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance {t} must be positive")).into());
            }
            protocol.tol = t;
        }
        if let Some(j) = p.jitter {
            protocol.jitter = j;
        }
        protocol.validate()?;
        if protocol.jitter < 0.0 {
            return Err(Error::InvalidArgument(format!("jitter {} must be nonnegative", protocol.jitter)).into());
        }
        let ltilde_margin = ls
            .iter()
            .flatten()
            .map(|l| p.ltilde.unwrap_or(*l).saturating_sub(*l))
            .max()
            .unwrap_or(0);
        protocol.signal_margin = protocol.signal_margin.max(ltilde_margin);
        Ok(Self {
            generators,
            law: p.law,
            ls,
            ltilde: p.ltilde,
            samplings,
            shift_mode,
            seeds,
            out: p.out.unwrap_or_else(|| PathBuf::from("out")),
            signal: p.signal,
            protocol,
        })
    }

    /// `key=value` pairs describing the whole configuration.
    pub fn describe(&self) -> String {
        fn join<T: ToString>(v: &Option<Vec<T>>) -> String {
            match v {
                Some(v) => v.iter().map(T::to_string).collect::<Vec<_>>().join(","),
                None => "default".into(),
            }
        }
        let opt = |v: Option<String>| v.unwrap_or_else(|| "default".into());
        let p = &self.protocol;
        format!(
            "generator={} testgen=indicator law={} L={} Ltilde={} sampling={} shift-mode={} shift-bound={} \
             seeds={} tol={:e} jitter={} gap={},{} padding={} signal-margin={} signal={}",
            join(&self.generators),
            opt(self.law.map(|l| l.to_string())),
            join(&self.ls),
            opt(self.ltilde.map(|l| l.to_string())),
            join(&self.samplings),
            opt(self.shift_mode.map(|s| s.to_string())),
            p.shift_bound,
            self.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            p.tol,
            p.jitter,
            p.gap_range.0,
            p.gap_range.1,
            p.padding,
            p.signal_margin,
            opt(self.signal.as_ref().map(|s| s.display().to_string())),
        )
    }

    pub fn single_l(&self, default: usize) -> Result<usize, CliError> {
        match self.ls.as_deref() {
            None => Ok(default),
            Some([l]) => Ok(*l),
            Some(_) => Err(Error::InvalidArgument("this command takes a single --L".into()).into()),
        }
    }

    pub fn single_sampling(&self) -> Result<SamplingKind, CliError> {
        match self.samplings.as_deref() {
            None => Ok(SamplingKind::Nonuniform),
            Some([s]) => Ok(*s),
            Some(_) => Err(Error::InvalidArgument("this command takes a single --sampling".into()).into()),
        }
    }

    pub fn single_generator(&self) -> Result<GeneratorKind, CliError> {
        match self.generators.as_deref() {
            None => Ok(GeneratorKind::Sinc),
            Some([g]) => Ok(*g),
            Some(_) => Err(Error::InvalidArgument("this command takes a single --generator".into()).into()),
        }
    }
}
