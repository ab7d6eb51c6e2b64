//! Off-shell identity forms: Noether identities on the field equations,
//! strength identities and the substitution form of P. Each function returns
//! forms that vanish identically when the coefficients satisfy the
//! deformation constraints.

use nalgebra::{DMatrix, DVector};

use super::tensors::{contract, sum_forms};
use super::{TheoryVariant, VariantKind};
use crate::error::Result;
use crate::jet_forms::LieForm;
use crate::lie_core::Tensor3;
use crate::strengths::{curvature_f, FieldConfig, StrengthPair};

/// Noether identities (N_A, N_B), both identically zero:
///   N_A,c  = -dE_A,c + a^a_{dc} A^d E_A,a + b^a_{b'c} *Q^{b'} E_A,a
///            - j^{a'}_{cb'} B^{b'} E_B,a' - bT^{a'}_{bc} *P^b E_B,a'
///   N_B,c' = dE_B,c' - j^{a'}_{bc'} A^b E_B,a' - k^{a'}_{b'c'} *Q^{b'} E_B,a'
/// E-only: N_A = -dE_A + e^{a'}_{bc} F^b E_B,a', N_B = dE_B.
pub fn noether_forms(
    v: &TheoryVariant,
    cfg: &FieldConfig,
    s: &StrengthPair,
    ea: &LieForm,
    eb: &LieForm,
) -> Result<(LieForm, LieForm)> {
    let cp = &v.coeffs().cp;
    let (n, np) = (v.n(), v.n_prime());
    if v.kind() == VariantKind::EOnly {
        let na = sum_forms(&[ea.d()?.scale(-1.0), contract(&s.f, eb, n, |c, b, ap| cp.e.get(ap, b, c))?])?;
        return Ok((na, eb.d()?));
    }
    let na = sum_forms(&[
        ea.d()?.scale(-1.0),
        contract(&cfg.a, ea, n, |c, d, a| cp.a.get(a, d, c))?,
        contract(&s.star_q, ea, n, |c, bp, a| cp.b.get(a, bp, c))?,
        contract(&cfg.b, eb, n, |c, bp, ap| -cp.j.get(ap, c, bp))?,
        contract(&s.star_p, eb, n, |c, b, ap| -cp.bt.get(ap, b, c))?,
    ])?;
    let nb = sum_forms(&[
        eb.d()?,
        contract(&cfg.a, eb, np, |c, b, ap| -cp.j.get(ap, b, c))?,
        contract(&s.star_q, eb, np, |c, bp, ap| -cp.k.get(ap, bp, c))?,
    ])?;
    Ok((na, nb))
}

/// Strength identity forms, all identically zero:
///   Bianchi:  dF + a(A, F)
///   P:        dP + a(A, P) + b(m^T P, A) + b(*Q, P) - b(E_B, A)
///   Q:        dQ - bT(E_A, A) - k_[b'c'](E_B, B)
/// with `m^T P` and the equations carried to upper indices. For the e-only
/// theory P = F and Q = H, so the P and Q forms reduce to dF and dH.
pub fn strength_identity_forms(
    v: &TheoryVariant,
    cfg: &FieldConfig,
    s: &StrengthPair,
    ea: &LieForm,
    eb: &LieForm,
) -> Result<(LieForm, LieForm, LieForm)> {
    let co = v.coeffs();
    let cp = &co.cp;
    let bianchi = sum_forms(&[s.f.d()?, cfg.a.wedge(&s.f, &cp.a)?])?;
    let ea_up = ea.map(&cp.g_inv)?;
    let eb_up = eb.map(&cp.gp_inv)?;
    let mp = s.p.map(&cp.m.transpose())?.map(&cp.gp_inv)?;
    let pid = sum_forms(&[
        s.p.d()?,
        cfg.a.wedge(&s.p, &cp.a)?,
        mp.wedge(&cfg.a, &cp.b)?,
        s.star_q.wedge(&s.p, &cp.b)?,
        eb_up.wedge(&cfg.a, &cp.b)?.scale(-1.0),
    ])?;
    let qid =
        sum_forms(&[s.q.d()?, ea_up.wedge(&cfg.a, &cp.bt)?.scale(-1.0), eb_up.wedge(&cfg.b, &co.k_anti)?.scale(-1.0)])?;
    Ok((bianchi, pid, qid))
}

/// Least-squares `h^d_{b'}` with `b^a_{b'c} = a^a_{dc} h^d_{b'}`, and the
/// max residual of that factorization.
pub fn substitution_map(a: &Tensor3, b: &Tensor3) -> (DMatrix<f64>, f64) {
    let [n, np, _] = b.dims();
    let rows = n * n;
    let design = DMatrix::from_fn(rows, n, |r, d| a.get(r / n, d, r % n));
    let svd = design.clone().svd(true, true);
    let mut h = DMatrix::zeros(n, np);
    let mut worst: f64 = 0.0;
    for bp in 0..np {
        let rhs = DVector::from_fn(rows, |r, _| b.get(r / n, bp, r % n));
        let col = svd.solve(&rhs, 1e-12).unwrap_or_else(|_| DVector::zeros(n));
        worst = worst.max((&design * &col - &rhs).amax());
        h.set_column(bp, &col);
    }
    (h, worst)
}

/// P - (R(A + h*Q) - R(h*Q)) with R(ω) = dω + 1/2 a(ω, ω) and h from
/// [`substitution_map`]. Zero exactly when b factors through a.
pub fn substitution_form(v: &TheoryVariant, cfg: &FieldConfig, s: &StrengthPair) -> Result<LieForm> {
    let ds = v.set();
    let (h, _) = substitution_map(&ds.a, &ds.b);
    let hq = s.star_q.map(&h)?;
    let r_full = curvature_f(&cfg.a.add(&hq)?, &ds.a)?;
    let r_q = curvature_f(&hq, &ds.a)?;
    s.p.sub(&r_full.sub(&r_q)?)
}
