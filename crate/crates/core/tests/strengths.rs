mod common;

use common::{config, variants};
use gaugedeform::deform_coeffs::family_su2;
use gaugedeform::jet_forms::*;
use gaugedeform::lie_core::{eps3, StructureConstants, Tensor3};
use gaugedeform::strengths::*;
use gaugedeform::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn su2_eps() -> Tensor3 {
    Tensor3::from_fn([3, 3, 3], eps3)
}

#[test]
fn curvature_of_constant_potential() {
    let lay = JetLayout::get(2).unwrap();
    let (c1, c2) = (0.75, -1.5);
    let mut a = LieForm::zero(1, 3, lay);
    *a.comp_mut(0, position(0b0010)) = JetScalar::constant(lay, c1);
    *a.comp_mut(1, position(0b0100)) = JetScalar::constant(lay, c2);
    let f = curvature_f(&a, &su2_eps()).unwrap();
    for k in 0..3 {
        for &m in basis(2) {
            let want = if k == 2 && m == 0b0110 { c1 * c2 } else { 0.0 };
            assert_eq!(f.comp_mask(k, m).at_origin(), want);
        }
    }
    let r = connection_curvature(&a, &StructureConstants::su2()).unwrap();
    assert_eq!(r, f);
}

#[test]
fn abelian_curvature_is_exterior_derivative() {
    let (a, _) = random_field_config(4, 0.5, 3, 2, 1).unwrap();
    let f = curvature_f(&a, &Tensor3::zeros([2, 2, 2])).unwrap();
    assert_eq!(f, a.d().unwrap());
}

#[test]
fn bianchi_identity_holds() {
    // dF + a(A, F) = 0
    let (a, _) = random_field_config(5, 0.3, 4, 3, 1).unwrap();
    let eps = su2_eps();
    let f = curvature_f(&a, &eps).unwrap();
    let df = f.d().unwrap();
    let r = df.add(&a.wedge(&f, &eps).unwrap()).unwrap();
    assert!(r.max_abs_valid() < 1e-15, "{}", r.max_abs_valid());
}

#[test]
fn strengths_reduce_to_curls_without_b_and_k() {
    for (name, v) in variants() {
        let ds = v.set();
        if !(ds.b.is_zero() && ds.k.is_zero()) {
            continue;
        }
        let cfg = config(v.n(), v.n_prime(), 1, 0.3, 3);
        let s = compute_strengths(&cfg, ds, v.curl()).unwrap();
        assert_eq!(s.p.sub(&s.f).unwrap().max_abs_valid(), 0.0, "{name}");
        assert_eq!(s.q.sub(&s.h).unwrap().max_abs_valid(), 0.0, "{name}");
    }
}

#[test]
fn matrix_and_form_routes_of_y_agree() {
    for (name, v) in variants() {
        let cfg = config(v.n(), v.n_prime(), 2, 0.3, 3);
        let cp = Couplings::new(v.set());
        let y = assemble_y_with(&cfg, &cp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_form(&mut rng, 2, v.n(), cfg.layout(), 1.0);
        let q = random_form(&mut rng, 3, v.n_prime(), cfg.layout(), 1.0);
        let (yp, yq) = apply_y(&cfg, &cp, &p, &q).unwrap();
        let via_matrix = y.apply(&pack(&p, &q));
        let via_forms = pack(&yp, &yq);
        let diff = via_matrix.iter().zip(&via_forms).map(|(a, b)| (a - b).max_abs_valid()).fold(0.0, f64::max);
        assert!(diff < 1e-14, "{name}: {diff}");
    }
}

#[test]
fn y_is_symmetric_for_the_block_metric() {
    for (name, v) in variants() {
        let cfg = config(v.n(), v.n_prime(), 3, 0.3, 2);
        let cp = Couplings::new(v.set());
        let y = assemble_y_with(&cfg, &cp).unwrap();
        let gm = block_metric(&cp);
        for slot in &y.slots {
            let gy = &gm * slot;
            let asym = (&gy - gy.transpose()).amax();
            assert!(asym < 1e-14, "{name}: {asym}");
        }
    }
}

#[test]
fn inverse_round_trip() {
    for (name, v) in variants() {
        let cfg = config(v.n(), v.n_prime(), 4, 0.3, 3);
        let y = assemble_y(&cfg, v.set()).unwrap();
        let inv = invert_y(&y).unwrap();
        assert!(inv.round_trip_residual() < 1e-12, "{name}: {}", inv.round_trip_residual());
        assert!(inv.det().abs() > SINGULAR_DET);
    }
}

#[test]
fn defining_relations_hold() {
    for (name, v) in variants() {
        for seed in 0..3 {
            let cfg = config(v.n(), v.n_prime(), seed, 0.3, 3);
            let cp = Couplings::new(v.set());
            let s = compute_strengths_with(&cfg, &cp, v.curl()).unwrap();
            let (rp, rq) = defining_residuals(&cfg, &cp, &s).unwrap();
            assert!(rp.max(rq) < 1e-13, "{name} seed {seed}: {rp:.2e} {rq:.2e}");
        }
    }
}

#[test]
fn large_amplitude_makes_y_singular() {
    let ds = family_su2(2.0, 0.5).unwrap();
    let ok = config(3, 3, 0, 0.1, 2);
    assert!(compute_strengths(&ok, &ds, Curl::Covariant).is_ok());
    let mut hit = None;
    'scan: for amp in [1.0, 2.0, 4.0, 8.0, 16.0] {
        for seed in 0..8 {
            let cfg = config(3, 3, seed, amp, 2);
            if let Err(e) = compute_strengths(&cfg, &ds, Curl::Covariant) {
                hit = Some(e);
                break 'scan;
            }
        }
    }
    match hit {
        Some(Error::SingularY { det }) => assert!(det.abs() < SINGULAR_DET),
        other => panic!("expected a singular Y, got {other:?}"),
    }
}

#[test]
fn pack_unpack_round_trip() {
    let lay = JetLayout::get(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let p = random_form(&mut rng, 2, 2, lay, 1.0);
    let q = random_form(&mut rng, 3, 3, lay, 1.0);
    let v = pack(&p, &q);
    assert_eq!(v.len(), packed_len(2, 3));
    assert_eq!(unpack(&v, 2, 3).unwrap(), (p, q));
    assert!(unpack(&v, 3, 2).is_err());
}

proptest! {
    #[test]
    fn defining_relations_for_random_su2_configs(seed in any::<u64>(), amp in 0.01f64..0.3) {
        let ds = family_su2(2.0, 0.5).unwrap();
        let cfg = config(3, 3, seed, amp, 2);
        let cp = Couplings::new(&ds);
        let s = compute_strengths_with(&cfg, &cp, Curl::Covariant).unwrap();
        let (rp, rq) = defining_residuals(&cfg, &cp, &s).unwrap();
        prop_assert!(rp.max(rq) < 1e-13);
    }
}
