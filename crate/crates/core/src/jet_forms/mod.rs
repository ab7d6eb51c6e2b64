//! Jet arithmetic and vector-valued differential forms on 4D Minkowski space.

mod form;
mod jet;

pub use form::{
    basis, basis_len, indices, levi_civita, merge_sign, position, LieForm, EPS_DUAL_2, EPS_DUAL_3, ETA,
    HODGE_SQUARE_SIGN,
};
pub use jet::{JetLayout, JetScalar, MAX_DEGREE};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

/// Sign and normalization conventions, exported into reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MinkowskiConvention {
    pub signature: [f64; 4],
    pub levi_civita_0123: f64,
    pub hodge_square_sign: [f64; 5],
    pub eps_dual_2form: f64,
    pub eps_dual_3form: f64,
}

impl Default for MinkowskiConvention {
    fn default() -> Self {
        MinkowskiConvention {
            signature: ETA,
            levi_civita_0123: 1.0,
            hodge_square_sign: HODGE_SQUARE_SIGN,
            eps_dual_2form: EPS_DUAL_2,
            eps_dual_3form: EPS_DUAL_3,
        }
    }
}

/// Bits of resolution below the amplitude on the sampling grid.
pub const GRID_BITS: i32 = 14;

/// Deterministic random jet with coefficients uniform on a dyadic grid in
/// [-amplitude, amplitude]. Grid values carry at most 16 significant bits, so
/// short chains of products and sums of them are exact in f64.
pub fn random_jet(rng: &mut impl Rng, lay: &'static JetLayout, amplitude: f64) -> JetScalar {
    let c = if amplitude > 0.0 && amplitude.is_finite() {
        let step = (2.0f64).powi(amplitude.log2().floor() as i32 - GRID_BITS);
        let levels = (amplitude / step).floor() as i64;
        (0..lay.len()).map(|_| rng.gen_range(-levels..=levels) as f64 * step).collect()
    } else {
        vec![0.0; lay.len()]
    };
    JetScalar::from_coeffs(lay, c).expect("layout length")
}

pub fn random_form(rng: &mut impl Rng, p: usize, dim: usize, lay: &'static JetLayout, amplitude: f64) -> LieForm {
    LieForm::from_fn(p, dim, |_, _| random_jet(rng, lay, amplitude))
}

/// Reproducible random potentials (A, B) of degrees 1 and 2.
pub fn random_field_config(
    seed: u64,
    amplitude: f64,
    degree: usize,
    n: usize,
    n_prime: usize,
) -> Result<(LieForm, LieForm)> {
    let lay = JetLayout::get(degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_form(&mut rng, 1, n, lay, amplitude);
    let b = random_form(&mut rng, 2, n_prime, lay, amplitude);
    Ok((a, b))
}
