use galerkin_rks::experiment::{quasi_optimality_cell, Protocol};
use galerkin_rks::kernels::{Generator, GeneratorKind};
use galerkin_rks::model::io::{fmt_f64, read_signal, write_family};
use galerkin_rks::model::ShiftedFamily;
use galerkin_rks::sampling::SamplingKind;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galerkin-rks"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn reconstruct_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "reconstruct",
            "--generator",
            "sinc",
            "--law",
            "0",
            "--L",
            "30",
            "--sampling",
            "nonuniform",
            "--seed",
            "7",
            "--out",
            "r",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cell = quasi_optimality_cell(
        GeneratorKind::Sinc,
        0,
        SamplingKind::Nonuniform,
        30,
        7,
        &Protocol::default(),
    )
    .unwrap();
    let metrics = read(dir.path().join("r/metrics-seed7.csv"));
    assert!(metrics.starts_with("# galerkin-rks reconstruct\n# generator=sinc"));
    assert!(metrics.contains(&format!("\ne,{},ok\n", fmt_f64(cell.metrics.e))));
    assert!(metrics.contains(&format!("\nratio_bound,{},ok\n", fmt_f64(cell.metrics.ratio_bound))));
    let z = read_signal(&read(dir.path().join("r/solution-seed7.txt"))).unwrap();
    assert_eq!(z.half_width(), 30);
    assert!(dir.path().join("r/sampling-seed7.txt").exists());
}

#[test]
fn validation_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["reconstruct", "--jitter", "0.6", "--sampling", "jittered"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("JitterTooLarge"));

    std::fs::write(
        dir.path().join("zero.txt"),
        write_family(&ShiftedFamily::unshifted(Generator::sinc(), 30)),
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["reconstruct", "--signal", "zero.txt", "--sampling", "ctem", "--L", "10"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("ZeroSignal"));

    let out = run(dir.path(), &["table1", "--law", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("InvalidArgument"));
}

#[test]
fn table1_is_sorted_bounded_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "table1",
        "--generator",
        "sinc,gauss",
        "--L",
        "10,20",
        "--seeds",
        "3,1",
        "--sampling",
        "jittered,nonuniform",
    ];
    for out in ["a", "b"] {
        let mut a = args.to_vec();
        a.extend(["--out", out]);
        assert!(run(dir.path(), &a).status.success());
    }
    let a = read(dir.path().join("a/table1.csv"));
    assert_eq!(a, read(dir.path().join("b/table1.csv")));
    assert!(a.contains("\ngenerator,law,sampling,L,seed,e,epsilon,ratio_bound,status\n"));
    let rows = data_rows(&a);
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0][..5], ["sinc", "0", "nonuniform", "10", "1"]);
    assert_eq!(rows[1][4], "3");
    assert_eq!(rows[15][..3], ["gauss", "0", "jittered"]);
    for r in &rows {
        assert_eq!(r[8], "ok");
        assert!(r[7].parse::<f64>().unwrap() <= 1.5);
    }
}

#[test]
fn table2_records_failing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "table2",
            "--generator",
            "sinc",
            "--L",
            "10",
            "--sampling",
            "nonuniform,ctem",
            "--shift-mode",
            "zero",
            "--out",
            "t",
        ],
    );
    assert!(out.status.success());
    let rows = data_rows(&read(dir.path().join("t/table2.csv")));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][..2], ["sinc", "zero"]);
    assert!(rows[0][5].parse::<f64>().unwrap() <= 3.0);
    assert_eq!(rows[1][2], "ctem");
    assert_eq!(rows[1][5], "");
    assert_eq!(rows[1][6], "InvalidArgument");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "generator = \"spline\"\nL = [10, 15]\nseeds = 2\nsampling = \"jittered\"\nout = \"from-file\"\n",
    )
    .unwrap();
    let out = run(dir.path(), &["--config", "run.toml", "table2", "--L", "12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path().join("from-file/table2.csv"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[0] == "spline" && r[3] == "12" && r[4] == "2"));

    std::fs::write(dir.path().join("bad.toml"), "colour = 3\n").unwrap();
    let out = run(dir.path(), &["--config", "bad.toml", "table2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("InvalidConfig"));
}

#[test]
fn figures_write_plottable_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "figures",
            "--L",
            "10",
            "--sampling",
            "jittered",
            "--seed",
            "4",
            "--out",
            "f",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sup = |name: &str| {
        data_rows(&read(dir.path().join(format!("f/figures/{name}-jittered-seed4.csv"))))
            .iter()
            .filter(|r| r[0].parse::<f64>().unwrap().abs() <= 5.0)
            .map(|r| r[1].parse::<f64>().unwrap().abs())
            .fold(0.0, f64::max)
    };
    assert!(sup("galerkin-diff") * 5.0 <= sup("prereconstruction-diff"));
    assert!(sup("original") > 0.0);
    let rows = data_rows(&read(dir.path().join("f/figures/original-jittered-seed4.csv")));
    assert_eq!(rows.len(), 2401);
    assert_eq!(rows[0][0], fmt_f64(-12.0));
}

#[test]
fn diagnose_reports_every_quantity() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "diagnose",
            "--generator",
            "gauss",
            "--L",
            "5",
            "--sampling",
            "jittered",
            "--out",
            "d",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path().join("d/diagnose-seed1.csv"));
    let names: Vec<String> = data_rows(&csv).into_iter().map(|r| r[0].clone()).collect();
    for n in [
        "D1",
        "D2",
        "D4",
        "r0",
        "residue",
        "kW",
        "omega_delta",
        "delta",
        "C1",
        "C2",
        "cond",
        "rho",
        "rho_inf",
    ] {
        assert!(names.iter().any(|m| m == n), "{n} missing");
    }
    assert!(read(dir.path().join("d/iteration-seed1.csv")).contains("\nstep,increment_norm\n1,"));
}
