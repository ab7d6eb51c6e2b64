//! Identity checks evaluated as jet identities over a batch of seeds.
//!
//! Every check draws its fields from `random_field_config(seed, ..)` and its
//! gauge parameters from `GaugeParam::random(seed, stream, ..)`, so a report
//! depends only on the variant and the parameters. Seeds are evaluated in
//! parallel when the `parallel` feature is on; the merge is order-preserving.

use serde::{Deserialize, Serialize};

use super::el::euler_lagrange;
use super::equations::{field_equations_with, linear_equations, tower_equations};
use super::identities::{noether_forms, strength_identity_forms, substitution_form};
use super::lagrangian::{lagrangian, lagrangian_block_form, lagrangian_from_parts, tower_lagrangian};
use super::symmetry::{
    boundary_forms, closure_params, gauge_variation, strength_homogeneous, strength_remainder, trivial_variation,
};
use super::tensors::{dot, sum_forms, top};
use super::{nan_max, GaugeParam, IdentityReport, IdentityResult, TheoryVariant, VariantKind};
use crate::error::Result;
use crate::jet_forms::{random_field_config, JetScalar, LieForm};
use crate::par;
use crate::strengths::{apply_y, compute_strengths_with, FieldConfig, StrengthPair};

/// Per-family tolerances on the max-abs jet residual.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub gauge: f64,
    pub noether: f64,
    pub strength: f64,
    pub substitution: f64,
    pub commutator: f64,
    pub linearization: f64,
    pub euler_lagrange: f64,
    pub tower: f64,
    pub strength_transformation: f64,
    pub cross_representation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gauge: 1e-8,
            noether: 1e-9,
            strength: 1e-9,
            substitution: 1e-9,
            commutator: 1e-9,
            linearization: 1e-12,
            euler_lagrange: 1e-9,
            tower: 1e-10,
            strength_transformation: 1e-8,
            cross_representation: 1e-11,
        }
    }
}

impl Tolerances {
    /// The same tolerance for every family.
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            gauge: tol,
            noether: tol,
            strength: tol,
            substitution: tol,
            commutator: tol,
            linearization: tol,
            euler_lagrange: tol,
            tower: tol,
            strength_transformation: tol,
            cross_representation: tol,
        }
    }
}

/// Seeds, jet degree and amplitudes shared by all checks.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    pub seeds: Vec<u64>,
    /// Polynomial degree of the field jets.
    pub degree: usize,
    /// Amplitude of the random potentials.
    pub amplitude: f64,
    /// Amplitude of the random gauge parameters.
    pub gauge_amplitude: f64,
    pub tolerances: Tolerances,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seeds: (0..20).collect(),
            degree: 3,
            amplitude: 0.1,
            gauge_amplitude: 1.0,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteParams {
    pub fn with_seeds(mut self, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.seeds = seeds.into_iter().collect();
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }
}

/// Everything a check needs at one seed.
struct Sample {
    cfg: FieldConfig,
    s: StrengthPair,
    g1: GaugeParam,
    g2: GaugeParam,
}

impl Sample {
    fn new(v: &TheoryVariant, p: &SuiteParams, seed: u64) -> Result<Sample> {
        let (a, b) = random_field_config(seed, p.amplitude, p.degree, v.n(), v.n_prime())?;
        let cfg = FieldConfig::new(a, b)?;
        let s = strengths(v, &cfg)?;
        let g1 = GaugeParam::random(seed, 1, p.gauge_amplitude, p.degree, v.n(), v.n_prime())?;
        let g2 = GaugeParam::random(seed, 2, p.gauge_amplitude, p.degree, v.n(), v.n_prime())?;
        Ok(Sample { cfg, s, g1, g2 })
    }
}

fn strengths(v: &TheoryVariant, cfg: &FieldConfig) -> Result<StrengthPair> {
    compute_strengths_with(cfg, &v.coeffs().cp, v.curl())
}

fn res(f: &LieForm) -> f64 {
    f.max_abs_valid()
}

fn res_scalar(x: &JetScalar) -> f64 {
    x.max_abs_valid()
}

/// Run `per_seed` on every seed and keep the worst residual per identity.
fn over_seeds<F>(v: &TheoryVariant, p: &SuiteParams, names: &[(&str, f64)], per_seed: F) -> Result<IdentityReport>
where
    F: Fn(&Sample) -> Result<Vec<f64>> + Sync + Send,
{
    let rows = par::map_ordered(&p.seeds, |&seed| Sample::new(v, p, seed).and_then(|smp| per_seed(&smp)));
    let mut worst = vec![0.0; names.len()];
    for row in rows {
        for (w, r) in worst.iter_mut().zip(row?) {
            *w = nan_max(*w, r);
        }
    }
    Ok(IdentityReport::new(
        names
            .iter()
            .zip(worst)
            .map(|(&(name, tol), residual)| IdentityResult {
                name: name.to_string(),
                residual,
                tolerance: tol,
                pass: residual <= tol,
                seeds: p.seeds.clone(),
            })
            .collect(),
    ))
}

/// δL - dΘ for δ_ξ and δ_χ, δL taken as the eps-coefficient of L along the
/// variation.
pub fn check_gauge_invariance(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.gauge;
    over_seeds(v, p, &[("gauge_xi", tol), ("gauge_chi", tol)], |smp| {
        let gv = gauge_variation(v, &smp.cfg, &smp.s, &smp.g1)?;
        let (th_xi, th_chi) = boundary_forms(v, &smp.cfg, &smp.s, &smp.g1)?;
        let mut out = Vec::new();
        for (da, db, th) in [(&gv.xi_a, &gv.xi_b, &th_xi), (&gv.chi_a, &gv.chi_b, &th_chi)] {
            let moved = smp.cfg.perturbed(da, db)?;
            let dl = lagrangian(v, &moved, &strengths(v, &moved)?)?.tangent();
            let mut r = dl;
            r -= &th.d()?.top()?;
            out.push(res_scalar(&r));
        }
        Ok(out)
    })
}

pub fn check_noether_identities(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.noether;
    over_seeds(v, p, &[("noether_a", tol), ("noether_b", tol)], |smp| {
        let (ea, eb) = field_equations_with(v, &smp.cfg, &smp.s)?;
        let (na, nb) = noether_forms(v, &smp.cfg, &smp.s, &ea, &eb)?;
        Ok(vec![res(&na), res(&nb)])
    })
}

/// Bianchi identity, the P and Q strength identities and the substitution
/// form of P.
pub fn check_strength_identities(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let t = &p.tolerances;
    let names = [
        ("bianchi", t.strength),
        ("strength_p", t.strength),
        ("strength_q", t.strength),
        ("substitution", t.substitution),
    ];
    over_seeds(v, p, &names, |smp| {
        let (ea, eb) = field_equations_with(v, &smp.cfg, &smp.s)?;
        let (bi, pid, qid) = strength_identity_forms(v, &smp.cfg, &smp.s, &ea, &eb)?;
        let sub = substitution_form(v, &smp.cfg, &smp.s)?;
        Ok(vec![res(&bi), res(&pid), res(&qid), res(&sub)])
    })
}

/// Full variation (δ_ξ + δ_χ) of the potentials at `cfg`.
fn total_variation(v: &TheoryVariant, cfg: &FieldConfig, g: &GaugeParam) -> Result<(LieForm, LieForm)> {
    gauge_variation(v, cfg, &strengths(v, cfg)?, g)?.total()
}

/// [δ_1, δ_2] - δ_3 - δ_E on (A, B) with δ_1 acting on the field dependence
/// of δ_2 through the eps tangent.
fn commutator_residual(v: &TheoryVariant, smp: &Sample, g1: &GaugeParam, g2: &GaugeParam) -> Result<f64> {
    let cfg = &smp.cfg;
    let (a1, b1) = total_variation(v, cfg, g1)?;
    let (a2, b2) = total_variation(v, cfg, g2)?;
    let (a12, b12) = total_variation(v, &cfg.perturbed(&a1, &b1)?, g2)?;
    let (a21, b21) = total_variation(v, &cfg.perturbed(&a2, &b2)?, g1)?;
    let g3 = closure_params(v, g1, g2)?;
    let (a3, b3) = total_variation(v, cfg, &g3)?;
    let (ea, eb) = field_equations_with(v, cfg, &smp.s)?;
    let (ta, tb) = trivial_variation(v, cfg, &ea, &eb, g1, g2)?;
    let ra = sum_forms(&[a12.tangent(), a21.tangent().scale(-1.0), a3.scale(-1.0), ta.scale(-1.0)])?;
    let rb = sum_forms(&[b12.tangent(), b21.tangent().scale(-1.0), b3.scale(-1.0), tb.scale(-1.0)])?;
    Ok(res(&ra).max(res(&rb)))
}

pub fn check_commutators(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.commutator;
    let names = [("commutator_xi_xi", tol), ("commutator_xi_chi", tol), ("commutator_chi_chi", tol)];
    over_seeds(v, p, &names, |smp| {
        let (g1, g2) = (&smp.g1, &smp.g2);
        Ok(vec![
            commutator_residual(v, smp, &g1.only_xi(), &g2.only_xi())?,
            commutator_residual(v, smp, &g1.only_xi(), &g2.only_chi())?,
            commutator_residual(v, smp, &g1.only_chi(), &g2.only_chi())?,
        ])
    })
}

/// Order-eps part of the field equations at eps·(A, B) against the linear
/// equations at (A, B).
pub fn check_linearization(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.linearization;
    over_seeds(v, p, &[("linearization", tol)], |smp| {
        let cfg = &smp.cfg;
        let scaled = cfg.scale(0.0).perturbed(&cfg.a, &cfg.b)?;
        let s = strengths(v, &scaled)?;
        let (ea, eb) = field_equations_with(v, &scaled, &s)?;
        let (la, lb) = linear_equations(v, cfg)?;
        Ok(vec![res(&ea.tangent().sub(&la)?).max(res(&eb.tangent().sub(&lb)?))])
    })
}

/// `(k+1) L_{k+1} - A∧E_A - B∧E_B - dΓ` for the tower, Γ the boundary
/// potential of the generic variational derivative.
fn homogeneity_residual(v: &TheoryVariant, cfg: &FieldConfig, k: usize) -> Result<f64> {
    let ds = v.set();
    let lag = |a: &LieForm, b: &LieForm, u: &LieForm, w: &LieForm| tower_lagrangian(ds, k + 1, a, b, u, w);
    let el = euler_lagrange(cfg, lag)?;
    let (ea, eb) = tower_equations(ds, k, cfg)?;
    let l = lag(&cfg.a, &cfg.b, &cfg.a.d()?, &cfg.b.d()?)?;
    let gamma = sum_forms(&[dot(&cfg.a, &el.g_u)?, dot(&cfg.b, &el.g_v)?])?;
    let mut r = l.scale((k + 1) as f64);
    r -= &top(&dot(&cfg.a, &ea)?)?;
    r -= &top(&dot(&cfg.b, &eb)?)?;
    r -= &gamma.d()?.top()?;
    Ok(res_scalar(&r))
}

/// Generic variational derivative against the hand-written equations, for
/// the variant and for both tower orders, plus the homogeneity relation.
pub fn check_euler_lagrange_consistency(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let t = &p.tolerances;
    let names = [
        ("euler_lagrange", t.euler_lagrange),
        ("tower_quadratic", t.tower),
        ("tower_cubic", t.tower),
        ("homogeneity_k1", t.tower),
        ("homogeneity_k2", t.tower),
    ];
    over_seeds(v, p, &names, |smp| {
        let cfg = &smp.cfg;
        let ds = v.set();
        let el = euler_lagrange(cfg, |a, b, u, w| lagrangian_from_parts(v, a, b, u, w))?;
        let (ea, eb) = field_equations_with(v, cfg, &smp.s)?;
        let mut out = vec![res(&el.e_a.sub(&ea)?).max(res(&el.e_b.sub(&eb)?))];
        for k in [1, 2] {
            let el = euler_lagrange(cfg, |a, b, u, w| tower_lagrangian(ds, k + 1, a, b, u, w))?;
            let (ta, tb) = tower_equations(ds, k, cfg)?;
            out.push(res(&el.e_a.sub(&ta)?).max(res(&el.e_b.sub(&tb)?)));
        }
        out.push(homogeneity_residual(v, cfg, 1)?);
        out.push(homogeneity_residual(v, cfg, 2)?);
        Ok(out)
    })
}

/// Parity-even: `Y(δP - hom, δQ) - g·E` for δ_ξ and δ_χ. E-only: the
/// variations of F and H - e(F, A), both invariant.
pub fn check_strength_transformation(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.strength_transformation;
    over_seeds(v, p, &[("strength_transformation_xi", tol), ("strength_transformation_chi", tol)], |smp| {
        let cfg = &smp.cfg;
        let cp = &v.coeffs().cp;
        let (ea, eb) = field_equations_with(v, cfg, &smp.s)?;
        let mut out = Vec::new();
        for g in [smp.g1.only_xi(), smp.g1.only_chi()] {
            let (da, db) = total_variation(v, cfg, &g)?;
            let moved = cfg.perturbed(&da, &db)?;
            let sm = strengths(v, &moved)?;
            if v.kind() == VariantKind::EOnly {
                let ht = sm.h.sub(&sm.f.wedge(&moved.a, &cp.e)?)?;
                out.push(res(&sm.f.tangent()).max(res(&ht.tangent())));
                continue;
            }
            let (hp, hq) = strength_homogeneous(v, &smp.s, &g)?;
            let (yp, yq) = apply_y(cfg, cp, &sm.p.tangent().sub(&hp)?, &sm.q.tangent().sub(&hq)?)?;
            let (rp, rq) = strength_remainder(v, &ea, &eb, &g)?;
            out.push(res(&yp.sub(&rp)?).max(res(&yq.sub(&rq)?)));
        }
        Ok(out)
    })
}

/// L against the block form `1/2 <M, Y^-1 M>` (+ mass term).
pub fn check_cross_representation(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    let tol = p.tolerances.cross_representation;
    over_seeds(v, p, &[("cross_representation", tol)], |smp| {
        let mut r = lagrangian(v, &smp.cfg, &smp.s)?;
        r -= &lagrangian_block_form(v, &smp.cfg, &smp.s)?;
        Ok(vec![res_scalar(&r)])
    })
}

/// All checks in a fixed order.
pub fn run_identity_suite(v: &TheoryVariant, p: &SuiteParams) -> Result<IdentityReport> {
    Ok(IdentityReport::merge(vec![
        check_gauge_invariance(v, p)?,
        check_noether_identities(v, p)?,
        check_strength_identities(v, p)?,
        check_commutators(v, p)?,
        check_linearization(v, p)?,
        check_euler_lagrange_consistency(v, p)?,
        check_strength_transformation(v, p)?,
        check_cross_representation(v, p)?,
    ]))
}
