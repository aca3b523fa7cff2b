use crate::config::Config;
use crate::output::{num, write_file, Csv};
use crate::CliError;
use galerkin_rks::diagnostics::{best_approximation, quasi_optimality, GridOptions};
use galerkin_rks::experiment::{
    condition_for, diagnose, figure_grids_for, law_parts, quasi_optimality_for, run_cells, setup_from_signal,
    setup_with, CellKey, Setup, ShiftSet,
};
use galerkin_rks::kernels::GeneratorKind;
use galerkin_rks::model::io::{read_signal, write_signal};
use galerkin_rks::model::FriSignal;
use galerkin_rks::reconstruct::{assemble_system, solve_galerkin, solve_subgalerkin_lsq};
use galerkin_rks::sampling::io::write_sampling_set;
use galerkin_rks::sampling::SamplingKind;
use galerkin_rks::{Error, Result};

const TABLE_L: [usize; 5] = [10, 15, 20, 25, 30];
const ALL_GENERATORS: [GeneratorKind; 3] = [GeneratorKind::Sinc, GeneratorKind::Gauss, GeneratorKind::CubicBSpline];

fn make_setup(cfg: &Config, generator: GeneratorKind, law: u8, l: usize, seed: u64) -> Result<Setup> {
    if let Some(path) = &cfg.signal {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        return setup_from_signal(read_signal(&text)?, l, &cfg.protocol);
    }
    let (coeff_law, shifts) = law_parts(law)?;
    let shifts = cfg.shift_mode.unwrap_or(shifts);
    setup_with(generator, coeff_law, shifts, l, seed, &cfg.protocol)
}

fn reject(cfg: &Config, command: &str) -> Result<()> {
    if cfg.ltilde.is_some() {
        return Err(Error::InvalidArgument(format!("--Ltilde is not used by {command}")));
    }
    Ok(())
}

fn status<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.name().into(),
    }
}

pub fn reconstruct(cfg: &Config) -> std::result::Result<(), CliError> {
    let generator = cfg.single_generator()?;
    let law = cfg.law.unwrap_or(0);
    let l = cfg.single_l(30)?;
    let lt = cfg.ltilde.unwrap_or(l);
    let sampling = cfg.single_sampling()?;
    let p = &cfg.protocol;
    for &seed in &cfg.seeds {
        let s = make_setup(cfg, generator, law, l, seed)?;
        let set = s.sampling(sampling, p)?;
        let rec = s.capture(&set);
        let sys = assemble_system(&s.trial, &s.test, &rec, l, lt)?;
        let coef = if lt == l {
            solve_galerkin(&sys)?
        } else {
            solve_subgalerkin_lsq(&sys)?
        };
        let cond = sys.condition().unwrap_or(f64::INFINITY);
        let z = FriSignal::new(s.trial.clone(), coef)?.with_seed(seed);
        let best = best_approximation(&s.signal, &s.trial, l, &p.spec)?;
        let m = quasi_optimality(&s.signal, &best, &z, &p.spec)?;

        let stem = |name: &str, ext: &str| cfg.out.join(format!("{name}-seed{seed}.{ext}"));
        write_file(&stem("signal", "txt"), &write_signal(&s.signal))?;
        write_file(&stem("sampling", "txt"), &write_sampling_set(&set))?;
        write_file(&stem("solution", "txt"), &write_signal(&z))?;
        let mut csv = Csv::new(
            "reconstruct",
            &format!("{} seed={seed}", cfg.describe()),
            &["name", "value", "flag"],
        );
        for (name, v) in [
            ("e", m.e),
            ("epsilon", m.epsilon),
            ("ratio_bound", m.ratio_bound),
            ("reconstruction_error", m.reconstruction_error),
            ("cond", cond),
            ("samples", set.len() as f64),
        ] {
            csv.row(&[name.into(), num(v), "ok".into()]);
        }
        csv.write(&stem("metrics", "csv"))?;
    }
    Ok(())
}

fn table1_cells(cfg: &Config) -> Vec<(GeneratorKind, u8)> {
    match (&cfg.generators, cfg.law) {
        (None, None) => {
            let mut cells: Vec<(GeneratorKind, u8)> = (0..4).map(|law| (GeneratorKind::Sinc, law)).collect();
            cells.push((GeneratorKind::Gauss, 0));
            cells.push((GeneratorKind::CubicBSpline, 0));
            cells
        }
        (gens, law) => {
            let gens = gens.clone().unwrap_or_else(|| ALL_GENERATORS.to_vec());
            gens.into_iter().map(|g| (g, law.unwrap_or(0))).collect()
        }
    }
}

fn keys(cells: &[(GeneratorKind, u8)], samplings: &[SamplingKind], ls: &[usize], seeds: &[u64]) -> Vec<CellKey> {
    let mut out = Vec::new();
    for &(generator, variant) in cells {
        for &sampling in samplings {
            for &half_width in ls {
                for &seed in seeds {
                    out.push(CellKey {
                        generator,
                        variant,
                        sampling,
                        half_width,
                        seed,
                    });
                }
            }
        }
    }
    out
}

fn require_generated(cfg: &Config, command: &str) -> Result<()> {
    if cfg.signal.is_some() {
        return Err(Error::InvalidArgument(format!("--signal is not used by {command}")));
    }
    reject(cfg, command)
}

pub fn table1(cfg: &Config) -> std::result::Result<(), CliError> {
    require_generated(cfg, "table1")?;
    let samplings = cfg
        .samplings
        .clone()
        .unwrap_or_else(|| vec![SamplingKind::Nonuniform, SamplingKind::Jittered, SamplingKind::Ctem]);
    let ls = cfg.ls.clone().unwrap_or_else(|| TABLE_L.to_vec());
    let p = &cfg.protocol;
    let rows = run_cells(&keys(&table1_cells(cfg), &samplings, &ls, &cfg.seeds), |k| {
        let s = make_setup(cfg, k.generator, k.variant, k.half_width, k.seed)?;
        quasi_optimality_for(&s, k.sampling, p)
    });
    let mut csv = Csv::new(
        "table1",
        &cfg.describe(),
        &[
            "generator",
            "law",
            "sampling",
            "L",
            "seed",
            "e",
            "epsilon",
            "ratio_bound",
            "status",
        ],
    );
    for (k, r) in &rows {
        let (e, eps, ratio) = match r {
            Ok(c) => (num(c.metrics.e), num(c.metrics.epsilon), num(c.metrics.ratio_bound)),
            Err(_) => (String::new(), String::new(), String::new()),
        };
        csv.row(&[
            k.generator.to_string(),
            k.variant.to_string(),
            k.sampling.to_string(),
            k.half_width.to_string(),
            k.seed.to_string(),
            e,
            eps,
            ratio,
            status(r),
        ]);
    }
    csv.write(&cfg.out.join("table1.csv"))
}

pub fn table2(cfg: &Config) -> std::result::Result<(), CliError> {
    require_generated(cfg, "table2")?;
    let gens = cfg.generators.clone().unwrap_or_else(|| ALL_GENERATORS.to_vec());
    let shifts = match cfg.shift_mode {
        Some(s) => vec![s],
        None => vec![ShiftSet::Zero, ShiftSet::Random],
    };
    let cells: Vec<(GeneratorKind, u8)> = gens
        .iter()
        .flat_map(|&g| {
            shifts
                .iter()
                .map(move |&s| (g, if s == ShiftSet::Zero { 0 } else { 1 }))
        })
        .collect();
    let samplings = cfg
        .samplings
        .clone()
        .unwrap_or_else(|| vec![SamplingKind::Nonuniform, SamplingKind::Jittered]);
    let ls = cfg.ls.clone().unwrap_or_else(|| TABLE_L.to_vec());
    let p = &cfg.protocol;
    let shift_of = |v: u8| if v == 0 { ShiftSet::Zero } else { ShiftSet::Random };
    let rows = run_cells(&keys(&cells, &samplings, &ls, &cfg.seeds), |k| {
        let s = setup_with(
            k.generator,
            galerkin_rks::model::CoefficientLaw::RandomDecay,
            shift_of(k.variant),
            k.half_width,
            k.seed,
            p,
        )?;
        condition_for(&s, k.sampling, p)
    });
    let mut csv = Csv::new(
        "table2",
        &cfg.describe(),
        &["generator", "shift_mode", "sampling", "L", "seed", "cond", "status"],
    );
    for (k, r) in &rows {
        csv.row(&[
            k.generator.to_string(),
            shift_of(k.variant).to_string(),
            k.sampling.to_string(),
            k.half_width.to_string(),
            k.seed.to_string(),
            r.as_ref().map(|c| num(*c)).unwrap_or_default(),
            status(r),
        ]);
    }
    csv.write(&cfg.out.join("table2.csv"))
}

pub fn figures(cfg: &Config) -> std::result::Result<(), CliError> {
    reject(cfg, "figures")?;
    let generator = cfg.single_generator()?;
    let law = cfg.law.unwrap_or(0);
    let l = cfg.single_l(30)?;
    let samplings = cfg
        .samplings
        .clone()
        .unwrap_or_else(|| vec![SamplingKind::Nonuniform, SamplingKind::Jittered, SamplingKind::Ctem]);
    for &seed in &cfg.seeds {
        let s = make_setup(cfg, generator, law, l, seed)?;
        for &sampling in &samplings {
            let f = figure_grids_for(&s, sampling, 0.01, &cfg.protocol)?;
            let config = format!("{} seed={seed} sampling={sampling} step=0.01", cfg.describe());
            for (name, values) in [
                ("original", &f.original),
                ("prereconstruction-diff", &f.pre_reconstruction_diff),
                ("galerkin-diff", &f.galerkin_diff),
                ("best-approximation-diff", &f.best_approximation_diff),
            ] {
                let mut csv = Csv::new("figures", &config, &["t", "value"]);
                for (t, v) in f.t.iter().zip(values) {
                    csv.row(&[num(*t), num(*v)]);
                }
                csv.write(
                    &cfg.out
                        .join("figures")
                        .join(format!("{name}-{sampling}-seed{seed}.csv")),
                )?;
            }
        }
    }
    Ok(())
}

pub fn diagnose_cmd(cfg: &Config) -> std::result::Result<(), CliError> {
    reject(cfg, "diagnose")?;
    let generator = cfg.single_generator()?;
    let law = cfg.law.unwrap_or(0);
    let l = cfg.single_l(10)?;
    let sampling = cfg.single_sampling()?;
    for &seed in &cfg.seeds {
        let s = make_setup(cfg, generator, law, l, seed)?;
        let d = diagnose(&s, sampling, GridOptions::default(), &cfg.protocol)?;
        let config = format!("{} seed={seed}", cfg.describe());
        let mut csv = Csv::new("diagnose", &config, &["name", "value", "flag"]);
        for (name, v) in d.admissibility.values() {
            csv.row(&[
                name.into(),
                num(v),
                if name == "delta" { "convention" } else { "approximate" }.into(),
            ]);
        }
        csv.row(&["C1".into(), num(d.stability.c1), "ok".into()]);
        csv.row(&["C2".into(), num(d.stability.c2), "ok".into()]);
        csv.row(&["stability_ratio".into(), num(d.stability.ratio), "ok".into()]);
        csv.row(&["cond".into(), num(d.cond), "ok".into()]);
        match &d.iteration {
            Ok(rep) => {
                let flag = if rep.contractive() { "ok" } else { "NotContractive" };
                csv.row(&["rho".into(), num(rep.certified_bound), flag.into()]);
                csv.row(&["rho_inf".into(), num(rep.certified_bound_inf), "ok".into()]);
                csv.row(&["iterations".into(), num(rep.steps as f64), "ok".into()]);
                csv.row(&["tail_bound".into(), num(rep.tail_bound), "ok".into()]);
                let conv = if rep.converged { "ok" } else { "NotConverged" };
                csv.row(&[
                    "iterative_vs_direct".into(),
                    num(d.iterative_vs_direct.unwrap_or(f64::NAN)),
                    conv.into(),
                ]);
                let mut it = Csv::new("diagnose", &config, &["step", "increment_norm"]);
                for (k, v) in rep.increment_norms.iter().enumerate() {
                    it.row(&[(k + 1).to_string(), num(*v)]);
                }
                it.write(&cfg.out.join(format!("iteration-seed{seed}.csv")))?;
            }
            Err(e) => {
                let rho = match e {
                    Error::DivergenceDetected { rho, .. } => *rho,
                    _ => f64::NAN,
                };
                csv.row(&["rho".into(), num(rho), e.name().into()]);
            }
        }
        csv.write(&cfg.out.join(format!("diagnose-seed{seed}.csv")))?;
    }
    Ok(())
}
