#![allow(dead_code)]

use gaugedeform::deform_coeffs::*;
use gaugedeform::dynamics::TheoryVariant;
use gaugedeform::jet_forms::random_field_config;
use gaugedeform::lie_core::*;
use gaugedeform::strengths::FieldConfig;
use nalgebra::DMatrix;

/// Dyadic symmetric e with n = 3, n' = 2.
pub fn dyadic_e() -> Tensor3 {
    Tensor3::from_fn([2, 3, 3], |a, b, c| if b == c { 0.25 + a as f64 } else { 0.125 * (a + b + c) as f64 })
}

pub fn variants() -> Vec<(&'static str, TheoryVariant)> {
    let euc = InternalSpace::euclidean;
    vec![
        ("linear_massless", TheoryVariant::linear_abelian(euc(3), euc(3), MassTensor::zero(3, 3)).unwrap()),
        (
            "linear_massive",
            TheoryVariant::linear_abelian(euc(3), euc(3), MassTensor::new(DMatrix::identity(3, 3) * 2.0)).unwrap(),
        ),
        ("su2_massless", TheoryVariant::general(family_su2(0.0, 0.7).unwrap()).unwrap()),
        ("su2_massive", TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap()),
        (
            "solvable",
            TheoryVariant::general(family_solvable([1.0, 0.0, 0.0], [0.3, -0.2, 0.5], [[0.0; 3]; 3]).unwrap()).unwrap(),
        ),
        ("general", {
            let spec = GeneralFamilySpec {
                massive: StructureConstants::su2(),
                mass_block: DMatrix::from_row_slice(3, 3, &[0.6, 0.8, 0.0, -0.8, 0.6, 0.0, 0.0, 0.0, 1.0]) * 2.0,
                massless: StructureConstants::su2(),
                massless_prime: StructureConstants::su2(),
                h0: DMatrix::identity(3, 3),
            };
            TheoryVariant::general(family_general(&spec).unwrap().0).unwrap()
        }),
        ("e_only", TheoryVariant::e_only(family_e_only(dyadic_e()).unwrap()).unwrap()),
    ]
}

pub fn config(n: usize, n_prime: usize, seed: u64, amplitude: f64, degree: usize) -> FieldConfig {
    let (a, b) = random_field_config(seed, amplitude, degree, n, n_prime).unwrap();
    FieldConfig::new(a, b).unwrap()
}
