use galerkin_rks::diagnostics::{condition_number, residue, stability_bounds};
use galerkin_rks::kernels::{Generator, QuadratureSpec};
use galerkin_rks::linalg::{pencil_eigenvalues, spectral_norm};
use galerkin_rks::model::{ShiftMode, ShiftedFamily};
use galerkin_rks::sampling::make_jittered;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn condition_number_matches_explicit_inverse(entries in prop::collection::vec(-1.0..1.0_f64, 400)) {
        let m = DMatrix::from_vec(20, 20, entries) + DMatrix::<f64>::identity(20, 20) * 8.0;
        let inv = m.clone().try_inverse().unwrap();
        let c = condition_number(&m).unwrap();
        prop_assert!(c >= 1.0);
        let explicit = spectral_norm(&m) * spectral_norm(&inv);
        prop_assert!((c - explicit).abs() <= 1e-6 * explicit);
    }

    #[test]
    fn pencils_ignore_common_scaling(entries in prop::collection::vec(-1.0..1.0_f64, 36), s in 0.01..100.0_f64) {
        let r = DMatrix::from_vec(6, 6, entries);
        let a = r.transpose() * &r;
        let b = DMatrix::<f64>::identity(6, 6) * 2.0 + &a * 0.5;
        let base = pencil_eigenvalues(&a, &b).unwrap();
        let scaled = pencil_eigenvalues(&(&a * s), &(&b * s)).unwrap();
        for (x, y) in base.iter().zip(&scaled) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn residue_shrinks_on_larger_sets(c in -4.0..4.0_f64, r1 in 0.5..5.0_f64, dr in 0.0..4.0_f64) {
        let spec = QuadratureSpec::default();
        let f = ShiftedFamily::build(Generator::spline(), ShiftMode::UniformRandom(0.2), 8, 1).unwrap();
        let small = residue(&f, 4, &[(c - r1, c + r1)], &spec).unwrap();
        let large = residue(&f, 4, &[(c - r1 - dr, c + r1 + dr)], &spec).unwrap();
        prop_assert!(small >= large - 1e-8);
    }
}

#[test]
fn stability_bounds_are_ordered() {
    let spec = QuadratureSpec::default();
    for g in [Generator::sinc(), Generator::gauss(), Generator::spline()] {
        let f = ShiftedFamily::build(g, ShiftMode::UniformRandom(0.2), 30, 9).unwrap();
        let r = stability_bounds(&f, 10, &make_jittered(10, 0.1, 9).unwrap(), &spec).unwrap();
        assert!(0.0 < r.c1 && r.c1 <= r.c2 && r.ratio <= 10.0, "{r:?}");
    }
}
