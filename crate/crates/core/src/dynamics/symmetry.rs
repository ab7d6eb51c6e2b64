//! Gauge variations, boundary 3-forms, closure data and the trivial
//! (equation-proportional) symmetries appearing in commutators.

use super::tensors::{contract, dot, outer, sum_forms, triple};
use super::{GaugeParam, TheoryVariant, VariantKind};
use crate::error::Result;
use crate::jet_forms::LieForm;
use crate::strengths::{solve_strengths, FieldConfig, StrengthPair};

/// δ_ξ and δ_χ of the potentials for one gauge parameter.
#[derive(Clone, Debug)]
pub struct GaugeVariation {
    pub xi_a: LieForm,
    pub xi_b: LieForm,
    pub chi_a: LieForm,
    pub chi_b: LieForm,
}

impl GaugeVariation {
    /// δ_ξ + δ_χ.
    pub fn total(&self) -> Result<(LieForm, LieForm)> {
        Ok((self.xi_a.add(&self.chi_a)?, self.xi_b.add(&self.chi_b)?))
    }
}

/// Parity-even:
///   δ_ξ A = dξ + a(A, ξ) + b(*Q, ξ),   δ_ξ B = -j^{a'}_{cb'} ξ^c B^{b'} - bT(*P, ξ)
///   δ_χ A = 0,                          δ_χ B = dχ + j(A, χ) + k(*Q, χ)
/// E-only: δ_ξ A = dξ, δ_ξ B = e(F, ξ), δ_χ A = 0, δ_χ B = dχ.
pub fn gauge_variation(
    v: &TheoryVariant,
    cfg: &FieldConfig,
    s: &StrengthPair,
    g: &GaugeParam,
) -> Result<GaugeVariation> {
    let cp = &v.coeffs().cp;
    let lay = cfg.layout();
    let chi_a = LieForm::zero(1, v.n(), lay);
    match v.kind() {
        VariantKind::LinearAbelian | VariantKind::GeneralParityEven => {
            let xi_a = sum_forms(&[g.xi.d()?, cfg.a.wedge(&g.xi, &cp.a)?, s.star_q.wedge(&g.xi, &cp.b)?])?;
            let xi_b =
                sum_forms(&[g.xi.wedge(&cfg.b, &cp.j)?.scale(-1.0), s.star_p.wedge(&g.xi, &cp.bt)?.scale(-1.0)])?;
            let chi_b = sum_forms(&[g.chi.d()?, cfg.a.wedge(&g.chi, &cp.j)?, s.star_q.wedge(&g.chi, &cp.k)?])?;
            Ok(GaugeVariation { xi_a, xi_b, chi_a, chi_b })
        }
        VariantKind::EOnly => {
            Ok(GaugeVariation { xi_a: g.xi.d()?, xi_b: s.f.wedge(&g.xi, &cp.e)?, chi_a, chi_b: g.chi.d()? })
        }
    }
}

/// Boundary 3-forms (Θ_ξ, Θ_χ) with δ_ξ L vol = dΘ_ξ and δ_χ L vol = dΘ_χ:
///   Θ_ξ = (b_{ba'c} *P^b + m_{bb'} b^b_{a'c} B^{b'}) ∧ *Q^{a'} ξ^c
///   Θ_χ = (m_{ac'} F^a - 1/2 k_{a'b'c'} *Q^{a'} ∧ *Q^{b'}) ∧ χ^{c'}
/// Both vanish for the e-only theory.
pub fn boundary_forms(
    v: &TheoryVariant,
    cfg: &FieldConfig,
    s: &StrengthPair,
    g: &GaugeParam,
) -> Result<(LieForm, LieForm)> {
    let co = v.coeffs();
    let cp = &co.cp;
    let (n, np) = (co.n, co.np);
    let lay = cfg.layout();
    if v.kind() == VariantKind::EOnly {
        return Ok((LieForm::zero(3, 1, lay), LieForm::zero(3, 1, lay)));
    }
    let w1 = contract(&s.star_q, &g.xi, n, |b, ap, c| co.b_low.get(b, ap, c))?;
    let w2 = contract(&s.star_q, &g.xi, np, |bp, ap, c| co.mb.get(bp, ap, c))?;
    let theta_xi = sum_forms(&[dot(&s.star_p, &w1)?, dot(&cfg.b, &w2)?])?;
    let w3 = contract(&s.star_q, &g.chi, np, |ap, bp, c| -0.5 * co.k_low.get(ap, bp, c))?;
    let theta_chi = sum_forms(&[dot(&s.star_q, &w3)?, s.f.pair(&g.chi, &cp.m)?])?;
    Ok((theta_xi, theta_chi))
}

/// Closure data of the commutator [δ_1, δ_2] = δ_3:
/// ξ3 = a(ξ1, ξ2), χ3 = j(ξ1, χ2) - j(ξ2, χ1).
pub fn closure_params(v: &TheoryVariant, g1: &GaugeParam, g2: &GaugeParam) -> Result<GaugeParam> {
    let cp = &v.coeffs().cp;
    let chi = g1.xi.wedge(&g2.chi, &cp.j)?.sub(&g2.xi.wedge(&g1.chi, &cp.j)?)?;
    GaugeParam::new(g1.xi.wedge(&g2.xi, &cp.a)?, chi)
}

/// Homogeneous part of the strength variation: `(a(P, ξ) - b(m^T P, ξ), 0)`
/// with the index of `m^T P` raised. The P part vanishes when the mass
/// tensor intertwines a and b; nothing survives under χ.
pub fn strength_homogeneous(v: &TheoryVariant, s: &StrengthPair, g: &GaugeParam) -> Result<(LieForm, LieForm)> {
    let cp = &v.coeffs().cp;
    let mp = s.p.map(&cp.m.transpose())?.map(&cp.gp_inv)?;
    let hp = s.p.wedge(&g.xi, &cp.a)?.sub(&mp.wedge(&g.xi, &cp.b)?)?;
    Ok((hp, LieForm::zero(3, v.n_prime(), s.q.layout())))
}

/// Field-equation remainder `g·E` of the strength variation, before Y^-1:
///   (b(E_B, ξ), -bT(E_A, ξ) + k_[b'c'](E_B, χ))
/// with the equation indices raised.
pub fn strength_remainder(v: &TheoryVariant, ea: &LieForm, eb: &LieForm, g: &GaugeParam) -> Result<(LieForm, LieForm)> {
    let co = v.coeffs();
    let cp = &co.cp;
    let ea_up = ea.map(&cp.g_inv)?;
    let eb_up = eb.map(&cp.gp_inv)?;
    let rp = eb_up.wedge(&g.xi, &cp.b)?;
    let rq = sum_forms(&[ea_up.wedge(&g.xi, &cp.bt)?.scale(-1.0), eb_up.wedge(&g.chi, &co.k_anti)?])?;
    Ok((rp, rq))
}

/// Exact trivial symmetry closing [δ_1, δ_2] off shell. With
/// `(R_P, R_Q)(g) = Y^-1 (g·E)` the remainder of the strength variation,
///   δ_E A = b(*R_Q(g1), ξ2) - (1 <-> 2)
///   δ_E B = -bT(*R_P(g1), ξ2) + k(*R_Q(g1), χ2) - (1 <-> 2)
/// Vanishes for the e-only theory.
pub fn trivial_variation(
    v: &TheoryVariant,
    cfg: &FieldConfig,
    ea: &LieForm,
    eb: &LieForm,
    g1: &GaugeParam,
    g2: &GaugeParam,
) -> Result<(LieForm, LieForm)> {
    let cp = &v.coeffs().cp;
    let lay = cfg.layout();
    if v.kind() == VariantKind::EOnly {
        return Ok((LieForm::zero(1, v.n(), lay), LieForm::zero(2, v.n_prime(), lay)));
    }
    let half = |ga: &GaugeParam, gb: &GaugeParam| -> Result<(LieForm, LieForm)> {
        let (rp, rq) = strength_remainder(v, ea, eb, ga)?;
        let r = solve_strengths(cfg, cp, rp, rq)?;
        let da = r.star_q.wedge(&gb.xi, &cp.b)?;
        let db = sum_forms(&[r.star_p.wedge(&gb.xi, &cp.bt)?.scale(-1.0), r.star_q.wedge(&gb.chi, &cp.k)?])?;
        Ok((da, db))
    };
    let (a12, b12) = half(g1, g2)?;
    let (a21, b21) = half(g2, g1)?;
    Ok((a12.sub(&a21)?, b12.sub(&b21)?))
}

/// Lowest-order form of the trivial symmetry (Y^-1 replaced by the identity),
/// written for the orderings (ξ1, ξ2), (ξ1, χ2), (χ1, χ2):
///   δ_E A^a  = 2 b^{ab'}_{[c} b_{|db'|e]} ξ1^c ξ2^e *E_A^d
///              - b^{ab'}_c k_{b'd'e'} ξ1^c *(χ2^{e'} E_B^{d'})
///   δ_E B^{a'} = 2 b^{a'b}_{[c} b_{|bd'|e]} ξ1^c ξ2^e *E_B^{d'}
///              + k^{a'b'}_{e'} b_{db'c} ξ1^c χ2^{e'} *E_A^d
///              - k^{a'b'}_{c'} k_{b'd'e'} χ1^{c'} *(χ2^{e'} E_B^{d'})
///              + k^{a'b'}_{e'} k_{b'd'c'} χ2^{e'} *(χ1^{c'} E_B^{d'})
/// The (χ1, χ2) terms as written are minus the leading part of
/// `trivial_variation`. The e-only theory has no trivial part.
pub fn trivial_variation_leading(
    v: &TheoryVariant,
    ea: &LieForm,
    eb: &LieForm,
    g1: &GaugeParam,
    g2: &GaugeParam,
) -> Result<(LieForm, LieForm)> {
    let co = v.coeffs();
    let cp = &co.cp;
    let (n, np) = (co.n, co.np);
    let lay = ea.layout();
    if v.kind() == VariantKind::EOnly {
        return Ok((LieForm::zero(1, n, lay), LieForm::zero(2, np, lay)));
    }
    let sea = ea.map(&cp.g_inv)?.hodge();
    let seb = eb.map(&cp.gp_inv)?.hodge();
    let eb_up = eb.map(&cp.gp_inv)?;
    // *(χ^{e'} ∧ E_B^{d'}) indexed (e', d')
    let star_chi_eb = |chi: &LieForm| -> Result<LieForm> { Ok(outer(chi, &eb_up)?.hodge()) };
    let bb = |a: usize, d: usize, c: usize, e: usize| -> f64 {
        (0..np).map(|bp| co.b_raised.get(a, bp, c) * co.b_low.get(d, bp, e)).sum()
    };
    let bbt = |ap: usize, dp: usize, c: usize, e: usize| -> f64 {
        (0..n).map(|b| co.bt_raised.get(ap, b, c) * co.b_low.get(b, dp, e)).sum()
    };
    let s2 = star_chi_eb(&g2.chi)?;
    let s1 = star_chi_eb(&g1.chi)?;
    let da = sum_forms(&[
        triple(&g1.xi, &g2.xi, &sea, n, |a, c, e, d| bb(a, d, c, e) - bb(a, d, e, c))?,
        contract(&g1.xi, &s2, n, |a, c, ed| {
            let (e, d) = (ed / np, ed % np);
            -(0..np).map(|bp| co.b_raised.get(a, bp, c) * co.k_low.get(bp, d, e)).sum::<f64>()
        })?,
    ])?;
    let db = sum_forms(&[
        triple(&g1.xi, &g2.xi, &seb, np, |ap, c, e, dp| bbt(ap, dp, c, e) - bbt(ap, dp, e, c))?,
        triple(&g1.xi, &g2.chi, &sea, np, |ap, c, e, d| {
            (0..np).map(|bp| co.k_raised.get(ap, bp, e) * co.b_low.get(d, bp, c)).sum()
        })?,
        contract(&g1.chi, &s2, np, |ap, c, ed| {
            let (e, d) = (ed / np, ed % np);
            -(0..np).map(|bp| co.k_raised.get(ap, bp, c) * co.k_low.get(bp, d, e)).sum::<f64>()
        })?,
        contract(&g2.chi, &s1, np, |ap, e, cd| {
            let (c, d) = (cd / np, cd % np);
            (0..np).map(|bp| co.k_raised.get(ap, bp, e) * co.k_low.get(bp, d, c)).sum::<f64>()
        })?,
    ])?;
    Ok((da, db))
}
