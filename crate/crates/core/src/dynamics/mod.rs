//! Lagrangians, field equations, gauge variations and the identity suite.
//!
//! Field equations are covector valued: `E_A` is a 3-form with a lowered A
//! index and `E_B` a 2-form with a lowered A' index, normalized so that
//! `δL = δA^a ∧ E_{A,a} + δB^{a'} ∧ E_{B,a'} + dΓ`.

mod checks;
mod el;
mod equations;
mod identities;
mod lagrangian;
mod symmetry;
mod tensors;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deform_coeffs::{check_e_mass_obstruction, DeformationSet, RELATION_TOL};
use crate::error::{Error, Result};
use crate::jet_forms::{random_form, JetLayout, LieForm};
use crate::lie_core::{InternalSpace, MassTensor, Tensor3};
use crate::strengths::Curl;

pub use checks::{
    check_commutators, check_cross_representation, check_euler_lagrange_consistency, check_gauge_invariance,
    check_linearization, check_noether_identities, check_strength_identities, check_strength_transformation,
    run_identity_suite, SuiteParams, Tolerances,
};
pub use el::{euler_lagrange, ElPieces};
pub use equations::{field_equations, field_equations_with, linear_equations, tower_equations};
pub use identities::{noether_forms, strength_identity_forms, substitution_form, substitution_map};
pub use lagrangian::{lagrangian, lagrangian_block_form, lagrangian_from_parts, tower_lagrangian};
pub use symmetry::{
    boundary_forms, closure_params, gauge_variation, strength_homogeneous, strength_remainder, trivial_variation,
    trivial_variation_leading, GaugeVariation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    LinearAbelian,
    GeneralParityEven,
    EOnly,
}

/// A theory: its kind, coefficient set and the coupling of the
/// Chern-Simons cubic term (1/2 in the invariant theory).
#[derive(Clone, Debug)]
pub struct TheoryVariant {
    kind: VariantKind,
    set: DeformationSet,
    cs_coupling: f64,
    coeffs: tensors::Coeffs,
    curl: Curl,
}

impl TheoryVariant {
    /// Quadratic theory on the given spaces with mass tensor `mass`.
    pub fn linear_abelian(space: InternalSpace, space_prime: InternalSpace, mass: MassTensor) -> Result<Self> {
        let (n, np) = (space.dim, space_prime.dim);
        let ds = DeformationSet::new(
            Tensor3::zeros([n, n, n]),
            Tensor3::zeros([n, np, n]),
            Tensor3::zeros([np, n, np]),
            Tensor3::zeros([np, np, np]),
            Tensor3::zeros([np, n, n]),
            mass,
            space,
            space_prime,
        )?;
        Ok(Self::build(VariantKind::LinearAbelian, ds))
    }

    /// Parity-even theory built from (a, b, j, k, m). Requires e = 0.
    pub fn general(ds: DeformationSet) -> Result<Self> {
        if !ds.e.is_zero() {
            return Err(Error::Precondition { condition: "parity-even theory".into(), detail: "e must vanish".into() });
        }
        Ok(Self::build(VariantKind::GeneralParityEven, ds))
    }

    /// Parity-odd theory built from e alone. Requires a = b = j = k = 0 and no mass.
    pub fn e_only(ds: DeformationSet) -> Result<Self> {
        if !(ds.a.is_zero() && ds.b.is_zero() && ds.j.is_zero() && ds.k.is_zero()) {
            return Err(Error::Precondition {
                condition: "e-only theory".into(),
                detail: "a, b, j, k must vanish".into(),
            });
        }
        if !ds.mass.is_zero() || !check_e_mass_obstruction(&ds, RELATION_TOL) {
            return Err(Error::Precondition {
                condition: "e-mass obstruction".into(),
                detail: "e-type terms are incompatible with a nonzero mass tensor".into(),
            });
        }
        Ok(Self::build(VariantKind::EOnly, ds))
    }

    fn build(kind: VariantKind, set: DeformationSet) -> Self {
        let coeffs = tensors::Coeffs::new(&set);
        let curl = Curl::for_set(&set);
        TheoryVariant { kind, set, cs_coupling: 0.5, coeffs, curl }
    }

    /// Override the cubic Chern-Simons coupling (negative controls).
    pub fn with_cs_coupling(mut self, lambda: f64) -> Self {
        self.cs_coupling = lambda;
        self
    }

    pub fn kind(&self) -> VariantKind {
        self.kind
    }

    pub fn set(&self) -> &DeformationSet {
        &self.set
    }

    pub fn cs_coupling(&self) -> f64 {
        self.cs_coupling
    }

    pub fn curl(&self) -> Curl {
        self.curl
    }

    pub fn n(&self) -> usize {
        self.coeffs.n
    }

    pub fn n_prime(&self) -> usize {
        self.coeffs.np
    }

    /// The quadratic theory with the same spaces and mass.
    pub fn linearized(&self) -> Result<TheoryVariant> {
        TheoryVariant::linear_abelian(self.set.space.clone(), self.set.space_prime.clone(), self.set.mass.clone())
    }

    pub(crate) fn coeffs(&self) -> &tensors::Coeffs {
        &self.coeffs
    }
}

/// Gauge parameters: a function xi on A and a 1-form chi on A'.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeParam {
    pub xi: LieForm,
    pub chi: LieForm,
}

impl GaugeParam {
    pub fn new(xi: LieForm, chi: LieForm) -> Result<Self> {
        if xi.degree() != 0 || chi.degree() != 1 {
            return Err(Error::Invalid(format!("gauge parameters of degree {} and {}", xi.degree(), chi.degree())));
        }
        Ok(GaugeParam { xi, chi })
    }

    /// Reproducible random parameters drawn from stream `stream` of `seed`.
    pub fn random(seed: u64, stream: u64, amplitude: f64, degree: usize, n: usize, n_prime: usize) -> Result<Self> {
        let lay = JetLayout::get(degree)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let _: u32 = rng.gen();
        let xi = random_form(&mut rng, 0, n, lay, amplitude);
        let chi = random_form(&mut rng, 1, n_prime, lay, amplitude);
        Ok(GaugeParam { xi, chi })
    }

    pub fn only_xi(&self) -> GaugeParam {
        GaugeParam { xi: self.xi.clone(), chi: self.chi.scale(0.0) }
    }

    pub fn only_chi(&self) -> GaugeParam {
        GaugeParam { xi: self.xi.scale(0.0), chi: self.chi.clone() }
    }
}

/// One identity: worst residual over the seeds it was evaluated on.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityReport {
    pub identities: Vec<IdentityResult>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(identities: Vec<IdentityResult>) -> Self {
        let pass = identities.iter().all(|r| r.pass);
        IdentityReport { identities, pass }
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|r| r.name == name)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.get(name).map(|r| r.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.identities.iter().map(|r| r.residual).fold(0.0, nan_max)
    }

    /// Concatenate reports, keeping the order of `parts`.
    pub fn merge(parts: Vec<IdentityReport>) -> Self {
        IdentityReport::new(parts.into_iter().flat_map(|r| r.identities).collect())
    }
}

/// max that propagates NaN.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
