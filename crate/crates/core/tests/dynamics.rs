mod common;

use common::{config, dyadic_e, variants};
use gaugedeform::deform_coeffs::*;
use gaugedeform::dynamics::*;
use gaugedeform::lie_core::*;
use gaugedeform::strengths::compute_strengths;
use nalgebra::DMatrix;

fn quick() -> SuiteParams {
    SuiteParams::default().with_seeds(0..3)
}

/// su(2) massive set with the Chern-Simons side coupling `lambda` left free.
fn su2_massive_with(lambda: f64) -> DeformationSet {
    let eps = Tensor3::from_fn([3, 3, 3], eps3);
    DeformationSet::new(
        eps.clone(),
        eps.scale(lambda),
        eps.clone(),
        eps.scale(lambda),
        Tensor3::zeros([3, 3, 3]),
        MassTensor::new(DMatrix::identity(3, 3) * 2.0),
        InternalSpace::euclidean(3),
        InternalSpace::euclidean(3),
    )
    .unwrap()
}

#[test]
fn identity_suite_passes_for_every_variant() {
    for (name, v) in variants() {
        let r = run_identity_suite(&v, &quick()).unwrap();
        for i in &r.identities {
            assert!(i.pass, "{name}: {} = {:.3e}", i.name, i.residual);
        }
        assert_eq!(r.identities.len(), 20, "{name}");
    }
}

#[test]
fn linear_theories_are_exact() {
    for (name, v) in variants().into_iter().filter(|(_, v)| v.kind() == VariantKind::LinearAbelian) {
        let r = run_identity_suite(&v, &quick()).unwrap();
        assert_eq!(r.max_residual(), 0.0, "{name}");
    }
}

#[test]
fn e_only_gauge_invariance_is_exact() {
    let v = TheoryVariant::e_only(family_e_only(dyadic_e()).unwrap()).unwrap();
    let r = check_gauge_invariance(&v, &SuiteParams::default()).unwrap();
    assert_eq!(r.residual("gauge_xi"), Some(0.0));
    assert_eq!(r.residual("gauge_chi"), Some(0.0));
}

#[test]
fn e_only_has_no_boundary_or_trivial_terms() {
    let v = TheoryVariant::e_only(family_e_only(dyadic_e()).unwrap()).unwrap();
    let cfg = config(3, 2, 1, 0.1, 2);
    let s = compute_strengths(&cfg, v.set(), v.curl()).unwrap();
    let g = GaugeParam::random(1, 1, 1.0, 2, 3, 2).unwrap();
    let (tx, tc) = boundary_forms(&v, &cfg, &s, &g).unwrap();
    assert_eq!(tx.max_abs_valid() + tc.max_abs_valid(), 0.0);
    let (ea, eb) = field_equations(&v, &cfg).unwrap();
    let (da, db) = trivial_variation(&v, &cfg, &ea, &eb, &g, &g).unwrap();
    assert_eq!(da.max_abs_valid() + db.max_abs_valid(), 0.0);
}

#[test]
fn wrong_side_coupling_breaks_gauge_invariance() {
    assert!(family_su2(2.0, 0.3).is_err());
    let v = TheoryVariant::general(su2_massive_with(0.3)).unwrap();
    let r = check_gauge_invariance(&v, &quick()).unwrap();
    assert!(!r.pass);
    assert!(r.max_residual() > 1e-3, "{}", r.max_residual());
    let ok = TheoryVariant::general(su2_massive_with(0.5)).unwrap();
    assert!(check_gauge_invariance(&ok, &quick()).unwrap().pass);
}

#[test]
fn wrong_chern_simons_coupling_breaks_gauge_invariance() {
    let v = TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap().with_cs_coupling(0.3);
    let r = check_gauge_invariance(&v, &quick()).unwrap();
    assert!(r.max_residual() > 1e-3, "{}", r.max_residual());
}

#[test]
fn perturbed_coefficients_break_the_suite() {
    let base = family_su2(0.0, 0.7).unwrap();
    for which in 0..4 {
        let mut ds = base.clone();
        let t = match which {
            0 => &mut ds.a,
            1 => &mut ds.b,
            2 => &mut ds.j,
            _ => &mut ds.k,
        };
        t.set(0, 0, 1, 0.1);
        let v = TheoryVariant::general(ds).unwrap();
        let r = run_identity_suite(&v, &SuiteParams::default().with_seeds(0..2)).unwrap();
        assert!(!r.pass, "perturbation {which} went unnoticed");
    }
}

/// Relative gap between the exact trivial symmetry and `sign` times the
/// leading-order form, for one commutator ordering.
fn trivial_gap(v: &TheoryVariant, amp: f64, pick: usize, sign: f64) -> f64 {
    let cfg = config(3, 3, 6, amp, 3);
    let (ea, eb) = field_equations(v, &cfg).unwrap();
    let p1 = GaugeParam::random(6, 1, 1.0, 3, 3, 3).unwrap();
    let p2 = GaugeParam::random(6, 2, 1.0, 3, 3, 3).unwrap();
    let (g1, g2) = match pick {
        0 => (p1.only_xi(), p2.only_xi()),
        1 => (p1.only_xi(), p2.only_chi()),
        _ => (p1.only_chi(), p2.only_chi()),
    };
    let (xa, xb) = trivial_variation(v, &cfg, &ea, &eb, &g1, &g2).unwrap();
    let (la, lb) = trivial_variation_leading(v, &ea, &eb, &g1, &g2).unwrap();
    let diff = xa.sub(&la.scale(sign)).unwrap().max_abs_valid().max(xb.sub(&lb.scale(sign)).unwrap().max_abs_valid());
    diff / xa.max_abs_valid().max(xb.max_abs_valid())
}

#[test]
fn exact_trivial_symmetry_agrees_with_leading_order() {
    // the gap shrinks linearly with the field amplitude
    let v = TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap();
    for pick in 0..2 {
        let (big, small) = (trivial_gap(&v, 0.1, pick, 1.0), trivial_gap(&v, 0.01, pick, 1.0));
        assert!(big < 0.2, "{pick}: {big}");
        assert!(small < 0.2 * big, "{pick}: {small} vs {big}");
    }
}

#[test]
fn chi_chi_leading_terms_enter_with_opposite_sign() {
    let v = TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap();
    assert!(trivial_gap(&v, 0.01, 2, 1.0) > 1.9);
    let (big, small) = (trivial_gap(&v, 0.1, 2, -1.0), trivial_gap(&v, 0.01, 2, -1.0));
    assert!(small < 0.02 && small < 0.2 * big, "{small} vs {big}");
}

#[test]
fn closure_parameters() {
    let v = TheoryVariant::general(family_su2(0.0, 0.7).unwrap()).unwrap();
    let g1 = GaugeParam::random(3, 1, 1.0, 2, 3, 3).unwrap();
    let g2 = GaugeParam::random(3, 2, 1.0, 2, 3, 3).unwrap();
    let g12 = closure_params(&v, &g1, &g2).unwrap();
    let g21 = closure_params(&v, &g2, &g1).unwrap();
    assert_eq!(g12.xi.add(&g21.xi).unwrap().max_abs_valid(), 0.0);
    assert_eq!(g12.chi.add(&g21.chi).unwrap().max_abs_valid(), 0.0);
    let only = closure_params(&v, &g1.only_chi(), &g2.only_chi()).unwrap();
    assert_eq!(only.xi.max_abs_valid() + only.chi.max_abs_valid(), 0.0);
}

#[test]
fn gauge_parameters_are_deterministic() {
    let a = GaugeParam::random(9, 1, 1.0, 3, 3, 2).unwrap();
    assert_eq!(a, GaugeParam::random(9, 1, 1.0, 3, 3, 2).unwrap());
    assert_ne!(a, GaugeParam::random(9, 2, 1.0, 3, 3, 2).unwrap());
}

#[test]
fn variant_preconditions() {
    let mut ds = family_su2(0.0, 0.7).unwrap();
    ds.e = Tensor3::from_fn([3, 3, 3], |a, b, c| if b == c { a as f64 } else { 0.0 });
    assert!(TheoryVariant::general(ds.clone()).is_err());
    assert!(TheoryVariant::e_only(ds).is_err());
    let mut massive = family_e_only(Tensor3::from_fn([1, 1, 1], |_, _, _| 1.0)).unwrap();
    massive.mass = MassTensor::new(DMatrix::identity(1, 1));
    assert!(TheoryVariant::e_only(massive).is_err());
}

#[test]
fn linearized_variant_keeps_spaces_and_mass() {
    let v = TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap();
    let l = v.linearized().unwrap();
    assert_eq!(l.kind(), VariantKind::LinearAbelian);
    assert_eq!(l.set().mass, v.set().mass);
    assert_eq!((l.n(), l.n_prime()), (3, 3));
}
