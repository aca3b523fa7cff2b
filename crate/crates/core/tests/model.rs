use galerkin_rks::kernels::{integrate_with_breakpoints, Domain, Generator, QuadratureSpec};
use galerkin_rks::model::io::{read_signal, write_signal};
use galerkin_rks::model::{
    assemble_correlation, build_truncated_kernel, make_test_signal, CoefficientLaw, ShiftMode, ShiftedFamily,
};
use nalgebra::DMatrix;

#[test]
fn self_correlation_is_symmetric() {
    let spec = QuadratureSpec::default();
    for g in [
        Generator::sinc(),
        Generator::gauss(),
        Generator::spline(),
        Generator::indicator(),
    ] {
        let f = ShiftedFamily::build(g, ShiftMode::UniformRandom(0.2), 8, 4).unwrap();
        let a = assemble_correlation(&f, &f, 8, &spec).unwrap().entries;
        assert!((&a - a.transpose()).amax() <= 1e-10);
    }
}

#[test]
fn sinc_correlation_is_the_identity() {
    let f = ShiftedFamily::unshifted(Generator::sinc(), 40);
    let a = assemble_correlation(&f, &f, 40, &QuadratureSpec::default())
        .unwrap()
        .entries;
    assert!((a - DMatrix::<f64>::identity(81, 81)).amax() <= 1e-8);
}

#[test]
fn kernel_sections_are_biorthogonal_to_the_test_basis() {
    let spec = QuadratureSpec::default();
    let trial = ShiftedFamily::build(Generator::gauss(), ShiftMode::UniformRandom(0.2), 20, 2).unwrap();
    let test = ShiftedFamily::unshifted(Generator::indicator(), 20);
    let k = build_truncated_kernel(&trial, &test, 4, 8, &spec).unwrap();
    for y0 in [-1.3, 0.2, 2.45] {
        for j in -2_i64..=2 {
            let c = j as f64;
            let v = integrate_with_breakpoints(|t| k.eval(t, y0), Domain::Interval(c - 0.5, c + 0.5), &[], &spec)
                .unwrap()
                .value;
            let expected = test.basis(j, y0);
            assert!((v - expected).abs() <= 1e-5, "y0 {y0}, j {j}: {v} vs {expected}");
        }
    }
}

#[test]
fn seeds_determine_families_and_signals() {
    let make = || {
        let f = ShiftedFamily::build(Generator::spline(), ShiftMode::UniformRandom(0.2), 12, 77).unwrap();
        make_test_signal(&f, CoefficientLaw::RandomDecay, 12, 77).unwrap()
    };
    let (a, b) = (make(), make());
    assert_eq!(write_signal(&a), write_signal(&b));
    let back = read_signal(&write_signal(&a)).unwrap();
    assert_eq!(back.coefficients(), a.coefficients());
    assert_eq!(back.family().shifts(), a.family().shifts());
}
