use gaugedeform::jet_forms::*;
use gaugedeform::lie_core::{eps3, Tensor3};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar_tensor() -> Tensor3 {
    Tensor3::from_vec([1, 1, 1], vec![1.0]).unwrap()
}

/// Scalar basis form dx^I with constant unit coefficient.
fn basis_form(p: usize, mask: u8, lay: &'static JetLayout) -> LieForm {
    let mut f = LieForm::zero(p, 1, lay);
    *f.comp_mut(0, position(mask)) = JetScalar::constant(lay, 1.0);
    f
}

fn rand_form(seed: u64, p: usize, dim: usize, degree: usize) -> LieForm {
    let lay = JetLayout::get(degree).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form(&mut rng, p, dim, lay, 1.0)
}

/// Antisymmetric component f_{mu nu} of a 2-form at the origin.
fn comp2(f: &LieForm, a: usize, mu: usize, nu: usize) -> f64 {
    if mu == nu {
        return 0.0;
    }
    let (lo, hi, s) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    s * f.comp_mask(a, (1 << lo) | (1 << hi)).at_origin()
}

#[test]
fn d_of_coordinate_one_form() {
    let lay = JetLayout::get(3).unwrap();
    let mut f = LieForm::zero(1, 1, lay);
    *f.comp_mut(0, position(0b0010)) = JetScalar::coordinate(lay, 0);
    let df = f.d().unwrap();
    assert_eq!(df.degree(), 2);
    for (i, &m) in basis(2).iter().enumerate() {
        let want = if m == 0b0011 { 1.0 } else { 0.0 };
        assert_eq!(df.comp(0, i).coeffs()[0], want);
        assert!(df.comp(0, i).coeffs()[1..].iter().all(|&c| c == 0.0));
    }
}

#[test]
fn d_squared_vanishes() {
    for p in 0..3 {
        let f = rand_form(11 + p as u64, p, 2, 4);
        let dd = f.d().unwrap().d().unwrap();
        assert_eq!(dd.max_abs_valid(), 0.0, "p = {p}");
    }
}

#[test]
fn leibniz_rule() {
    let t = scalar_tensor();
    for (p, q) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
        let a = rand_form(3, p, 1, 4);
        let b = rand_form(4, q, 1, 4);
        let lhs = a.wedge(&b, &t).unwrap().d().unwrap();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let mut rhs = a.d().unwrap().wedge(&b, &t).unwrap();
        rhs.axpy(sign, &a.wedge(&b.d().unwrap(), &t).unwrap()).unwrap();
        let diff = lhs.sub(&rhs).unwrap().max_abs_valid();
        assert!(diff < 1e-13, "({p}, {q}): {diff}");
    }
}

#[test]
fn wedge_graded_commutativity() {
    let t = scalar_tensor();
    for (p, q) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
        let a = rand_form(5, p, 1, 3);
        let b = rand_form(6, q, 1, 3);
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a.wedge(&b, &t).unwrap();
        let ba = b.wedge(&a, &t).unwrap().scale(sign);
        assert_eq!(ab.sub(&ba).unwrap().max_abs_valid(), 0.0);
    }
}

#[test]
fn self_bracket_matches_component_oracle() {
    let a = rand_form(7, 1, 3, 2);
    let eps = Tensor3::from_fn([3, 3, 3], eps3);
    let half = a.wedge(&a, &eps).unwrap().scale(0.5);
    for k in 0..3 {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut want = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        let ai = |m: usize| a.comp_mask(i, 1 << m).at_origin();
                        let aj = |m: usize| a.comp_mask(j, 1 << m).at_origin();
                        want += eps3(k, i, j) * ai(mu) * aj(nu);
                    }
                }
                let got = comp2(&half, k, mu, nu);
                assert!((got - want).abs() < 1e-14, "({k}, {mu}, {nu}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn hodge_of_time_one_form() {
    let lay = JetLayout::get(0).unwrap();
    let s = basis_form(1, 0b0001, lay).hodge();
    assert_eq!(s, basis_form(3, 0b1110, lay).scale(-1.0));
    let s = basis_form(1, 0b0010, lay).hodge();
    assert_eq!(s, basis_form(3, 0b1101, lay).scale(-1.0));
    let s = basis_form(2, 0b0011, lay).hodge();
    assert_eq!(s, basis_form(2, 0b1100, lay).scale(-1.0));
    let s = basis_form(2, 0b0110, lay).hodge();
    assert_eq!(s, basis_form(2, 0b1001, lay));
}

#[test]
fn hodge_reproduces_metric_pairing() {
    // dx^I ∧ *dx^J = eta^{II} delta^{IJ} vol
    let lay = JetLayout::get(0).unwrap();
    let g = DMatrix::identity(1, 1);
    for p in 0..=4 {
        for &mi in basis(p) {
            let eta: f64 = indices(mi).iter().map(|&i| ETA[i]).product();
            for &mj in basis(p) {
                let v = basis_form(p, mi, lay).pair(&basis_form(p, mj, lay).hodge(), &g).unwrap().top().unwrap();
                let want = if mi == mj { eta } else { 0.0 };
                assert_eq!(v.at_origin(), want, "p = {p}, I = {mi:04b}, J = {mj:04b}");
            }
        }
    }
}

#[test]
fn hodge_square_signs() {
    for p in 0..=4 {
        let f = rand_form(8, p, 2, 1);
        let ss = f.hodge().hodge();
        assert_eq!(ss, f.scale(HODGE_SQUARE_SIGN[p]), "p = {p}");
    }
}

#[test]
fn epsilon_dual_on_two_forms() {
    let f = rand_form(9, 2, 1, 0);
    let e = f.epsilon_dual().unwrap();
    // brute force over every ordered index pair
    for rho in 0..4 {
        for sig in rho + 1..4 {
            let mut want = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    want += levi_civita([rho, sig, mu, nu]) * ETA[mu] * ETA[nu] * comp2(&f, 0, mu, nu);
                }
            }
            let got = comp2(&e, 0, rho, sig);
            assert!((got - want).abs() < 1e-14);
        }
    }
    let ratio = e.sub(&f.hodge().scale(EPS_DUAL_2)).unwrap().max_abs_valid();
    assert_eq!(ratio, 0.0);
}

#[test]
fn epsilon_dual_on_three_forms() {
    let f = rand_form(10, 3, 2, 0);
    let e = f.epsilon_dual().unwrap();
    assert_eq!(e.degree(), 1);
    for a in 0..2 {
        for rho in 0..4 {
            let mut want = 0.0;
            for &m in basis(3) {
                let idx = indices(m);
                // 3! orderings of the same index set give the same signed term
                let raise: f64 = idx.iter().map(|&i| ETA[i]).product();
                want += 6.0 * levi_civita([rho, idx[0], idx[1], idx[2]]) * raise * f.comp_mask(a, m).at_origin();
            }
            assert!((e.comp_mask(a, 1 << rho).at_origin() - want).abs() < 1e-14);
        }
    }
    let diff = e.sub(&f.hodge().scale(EPS_DUAL_3)).unwrap().max_abs_valid();
    assert_eq!(diff, 0.0);
    assert!(rand_form(1, 1, 1, 0).epsilon_dual().is_err());
}

#[test]
fn random_configs_are_deterministic() {
    let (a1, b1) = random_field_config(42, 0.5, 3, 3, 2).unwrap();
    let (a2, b2) = random_field_config(42, 0.5, 3, 3, 2).unwrap();
    let (a3, _) = random_field_config(43, 0.5, 3, 3, 2).unwrap();
    assert_eq!(a1, a2);
    assert_eq!(b1, b2);
    assert_ne!(a1, a3);
    assert_eq!((a1.degree(), a1.dim(), b1.degree(), b1.dim()), (1, 3, 2, 2));
}

#[test]
fn zero_amplitude_gives_zero_fields() {
    let (a, b) = random_field_config(5, 0.0, 2, 3, 3).unwrap();
    assert_eq!(a.max_abs_valid(), 0.0);
    assert_eq!(b.max_abs_valid(), 0.0);
}

#[test]
fn random_coefficients_sit_on_dyadic_grid() {
    let lay = JetLayout::get(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for amp in [1.0f64, 0.3, 5.0] {
        let step = 2f64.powi(amp.log2().floor() as i32 - GRID_BITS);
        let j = random_jet(&mut rng, lay, amp);
        for &c in j.coeffs() {
            assert!(c.abs() <= amp);
            assert_eq!((c / step).fract(), 0.0);
        }
    }
}

#[test]
fn excessive_degree_rejected() {
    assert!(JetLayout::get(MAX_DEGREE + 1).is_err());
    assert!(random_field_config(0, 1.0, MAX_DEGREE + 1, 1, 1).is_err());
}

#[test]
fn jet_product_matches_pointwise_product() {
    let lay = JetLayout::get(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // degree-2 polynomials multiply without truncation at degree 4
    let low = |rng: &mut ChaCha8Rng| {
        let mut j = random_jet(rng, lay, 1.0);
        for i in 0..lay.len() {
            if lay.total_degree(i) > 2 {
                j.coeffs_mut()[i] = 0.0;
            }
        }
        j
    };
    let x = low(&mut rng);
    let y = low(&mut rng);
    let xy = &x * &y;
    for pt in [[0.1, -0.2, 0.3, 0.05], [0.5, 0.5, -0.5, 0.25]] {
        assert!((xy.eval(pt) - x.eval(pt) * y.eval(pt)).abs() < 1e-13);
    }
}

proptest! {
    #[test]
    fn d_squared_vanishes_for_any_seed(seed in any::<u64>(), p in 0usize..3) {
        let f = rand_form(seed, p, 1, 3);
        prop_assert_eq!(f.d().unwrap().d().unwrap().max_abs_valid(), 0.0);
    }

    #[test]
    fn hodge_is_invertible(seed in any::<u64>(), p in 0usize..5) {
        let f = rand_form(seed, p, 1, 1);
        prop_assert_eq!(f.hodge().hodge().scale(HODGE_SQUARE_SIGN[p]), f);
    }
}
