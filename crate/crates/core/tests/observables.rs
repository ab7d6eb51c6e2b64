use gaugedeform::jet_forms::{position, JetLayout, JetScalar, LieForm, ETA};
use gaugedeform::observables::*;
use gaugedeform::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn constant_form(p: usize, entries: &[(u8, f64)]) -> LieForm {
    let lay = JetLayout::get(0).unwrap();
    let mut f = LieForm::zero(p, 1, lay);
    for &(mask, v) in entries {
        *f.comp_mut(0, position(mask)) = JetScalar::constant(lay, v);
    }
    f
}

fn id(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

#[test]
fn spin_zero_energy_and_trace() {
    // *Q = q dx^1 with q = 2
    let t = stress_energy_q(&constant_form(1, &[(0b0010, 2.0)]), &id(1)).unwrap();
    assert_eq!(t.get(0, 0).at_origin(), 1.0);
    assert_eq!(t.trace().at_origin(), -2.0);
    assert_eq!(t.get(1, 1).at_origin(), 1.0);
    assert_eq!(t.asymmetry(), 0.0);
}

#[test]
fn spin_one_matches_maxwell_energy() {
    // X_{01} = e, X_{23} = b: energy (e^2 + b^2) / 2, Poynting flux zero
    let (e, b) = (1.5, -0.5);
    let t = stress_energy_p(&constant_form(2, &[(0b0011, e), (0b1100, b)]), &id(1)).unwrap().at_origin();
    assert!((t[0][0] - 0.5 * (e * e + b * b)).abs() < 1e-15);
    for i in 1..4 {
        assert_eq!(t[0][i], 0.0);
    }
    // both fields lie along x: tension -(e^2 + b^2)/2 along x, pressure across
    assert!((t[1][1] + 0.5 * (e * e + b * b)).abs() < 1e-15);
    assert!((t[2][2] - 0.5 * (e * e + b * b)).abs() < 1e-15);
}

#[test]
fn spin_one_part_is_traceless_and_symmetric() {
    let samples = random_strength_samples(3, 200, 2, 1, 1.0).unwrap();
    let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    for s in &samples {
        let t = stress_energy_p(&s.star_p, &g).unwrap();
        assert!(t.trace().at_origin().abs() < 1e-12);
        assert!(t.asymmetry() < 1e-15);
    }
}

#[test]
fn total_is_sum_of_sectors() {
    let s = &random_strength_samples(4, 1, 2, 2, 1.0).unwrap()[0];
    let t = stress_energy(s, &id(2), &id(2)).unwrap();
    let sum = stress_energy_p(&s.star_p, &id(2)).unwrap().add(&stress_energy_q(&s.star_q, &id(2)).unwrap());
    assert_eq!(t, sum);
}

#[test]
fn causality_holds_for_definite_metrics() {
    let samples = random_strength_samples(1, 1000, 3, 3, 1.0).unwrap();
    let r = energy_causality_check(&samples, &id(3), &id(3), 2).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.samples, 1000);
    assert!(r.min_energy >= 0.0);
    assert!(r.max_flux_norm <= CAUSALITY_TOL);
}

#[test]
fn causality_refuses_indefinite_metric() {
    let samples = random_strength_samples(1, 10, 3, 3, 1.0).unwrap();
    let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0]));
    assert!(matches!(energy_causality_check(&samples, &bad, &id(3), 2), Err(Error::Precondition { .. })));
    assert!(matches!(energy_causality_check(&samples, &id(3), &bad, 2), Err(Error::Precondition { .. })));
}

#[test]
fn wrong_sign_sector_violates_energy_positivity() {
    // flipping the metric of one sector by hand makes the energy negative
    let samples = random_strength_samples(5, 50, 1, 1, 1.0).unwrap();
    let neg = -id(1);
    let worst = samples
        .iter()
        .map(|s| stress_energy_q(&s.star_q, &neg).unwrap().get(0, 0).at_origin())
        .fold(f64::INFINITY, f64::min);
    assert!(worst < 0.0);
}

#[test]
fn coulomb_charges() {
    let c = BuiltinSampler::Coulomb { charges: vec![1.0, -0.5] };
    for r in [0.5, 2.0, 7.0] {
        let e = charge_surface(&c, ChargeKind::Electric, r, 64, 128).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-6 && (e.values[1] + 0.5).abs() < 1e-6, "{e:?}");
        let m = charge_surface(&c, ChargeKind::Magnetic, r, 64, 128).unwrap();
        assert!(m.values.iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn magnetic_monopole_charge() {
    let m = BuiltinSampler::RadialMagnetic { strengths: vec![0.7] };
    let r = charge_surface(&m, ChargeKind::Magnetic, 1.5, 64, 128).unwrap();
    // outward normals: a positive source gives a positive charge
    assert!((r.values[0] - 0.7).abs() < 1e-6, "{r:?}");
    let e = charge_surface(&m, ChargeKind::Electric, 1.5, 64, 128).unwrap();
    assert!(e.values[0].abs() < 1e-12);
}

#[test]
fn line_charge() {
    let s = BuiltinSampler::UniformScalar { strengths: vec![1.3, -2.0] };
    for r in [0.3, 1.5] {
        let c = charge_line(&s, r, 64).unwrap();
        assert!((c.values[0] - 1.3).abs() < 1e-12 && (c.values[1] + 2.0).abs() < 1e-12, "{c:?}");
    }
}

#[test]
fn charge_grids_are_validated() {
    let c = BuiltinSampler::Coulomb { charges: vec![1.0] };
    assert!(charge_surface(&c, ChargeKind::Electric, 1.0, 1, 8).is_err());
    assert!(charge_line(&c, 1.0, 1).is_err());
    assert!(matches!(charge_surface(&c, ChargeKind::Electric, 0.0, 4, 8), Err(Error::NonFinite(_))));
}

#[test]
fn gauss_legendre_five_points() {
    let (x, w) = gauss_legendre(5);
    let a = (245.0 - 14.0 * 70f64.sqrt()).sqrt() / 21.0;
    let b = (245.0 + 14.0 * 70f64.sqrt()).sqrt() / 21.0;
    let want_x = [-b, -a, 0.0, a, b];
    let wa = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
    let want_w = [wb, wa, 128.0 / 225.0, wa, wb];
    for i in 0..5 {
        assert!((x[i] - want_x[i]).abs() < 1e-15, "{x:?}");
        assert!((w[i] - want_w[i]).abs() < 1e-15, "{w:?}");
    }
}

#[test]
fn minkowski_trace_uses_signature() {
    let t = stress_energy_q(&constant_form(1, &[(0b0001, 1.0)]), &id(1)).unwrap();
    let tr: f64 = (0..4).map(|m| ETA[m] * t.get(m, m).at_origin()).sum();
    assert_eq!(t.trace().at_origin(), tr);
}

proptest! {
    #[test]
    fn gauss_legendre_exact_for_polynomials(n in 1usize..20, k in 0usize..10) {
        let deg = (2 * n - 1).min(k);
        let (x, w) = gauss_legendre(n);
        let quad: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
        let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
        prop_assert!((quad - exact).abs() < 1e-13);
    }

    #[test]
    fn energy_positive_for_any_seed(seed in any::<u64>()) {
        let samples = random_strength_samples(seed, 20, 2, 2, 1.0).unwrap();
        prop_assert!(energy_causality_check(&samples, &id(2), &id(2), seed).unwrap().pass);
    }
}
