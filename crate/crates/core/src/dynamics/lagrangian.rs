//! Lagrangian densities (coefficients of the volume form).

use nalgebra::DMatrix;

use super::tensors::{contract, top, Coeffs};
use super::{TheoryVariant, VariantKind};
use crate::deform_coeffs::DeformationSet;
use crate::error::{Error, Result};
use crate::jet_forms::{JetScalar, LieForm};
use crate::strengths::{block_metric, pack, solve_strengths, Curl, FieldConfig, StrengthPair};

fn check_shapes(v: &TheoryVariant, cfg: &FieldConfig, s: &StrengthPair) -> Result<()> {
    let ok = cfg.a.dim() == v.n()
        && cfg.b.dim() == v.n_prime()
        && s.p.dim() == v.n()
        && s.q.dim() == v.n_prime()
        && s.p.degree() == 2
        && s.q.degree() == 3;
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension("strengths do not match the variant".into()))
    }
}

/// L with `L vol` the Lagrangian 4-form.
///
/// Parity-even: `1/2 *P∧F + 1/2 *Q∧H + m F_cs∧B` with `F_cs = dA + λ a(A, A)`.
/// E-only: `1/2 *F∧F + 1/2 *H̃∧H̃` with `H̃ = H - e(F, A)`.
pub fn lagrangian(v: &TheoryVariant, cfg: &FieldConfig, s: &StrengthPair) -> Result<JetScalar> {
    check_shapes(v, cfg, s)?;
    let cp = &v.coeffs().cp;
    match v.kind() {
        VariantKind::LinearAbelian | VariantKind::GeneralParityEven => {
            let t1 = top(&s.star_p.pair(&s.f, &cp.g)?)?;
            let t2 = top(&s.star_q.pair(&s.h, &cp.gp)?)?;
            let mut fcs = s.f.clone();
            let aa = cfg.a.wedge(&cfg.a, &cp.a)?;
            fcs.axpy(v.cs_coupling() - 0.5, &aa)?;
            let t3 = top(&fcs.pair(&cfg.b, &cp.m)?)?;
            let mut l = t1.scale(0.5);
            l.axpy(0.5, &t2);
            l.axpy(1.0, &t3);
            Ok(l)
        }
        VariantKind::EOnly => {
            let ht = s.h.sub(&s.f.wedge(&cfg.a, &cp.e)?)?;
            let mut l = top(&s.f.hodge().pair(&s.f, &cp.g)?)?.scale(0.5);
            l.axpy(0.5, &top(&ht.hodge().pair(&ht, &cp.gp)?)?);
            Ok(l)
        }
    }
}

/// L as a function of (A, B) and independent slots `u`, `v` standing for dA
/// and dB. Used by the generic variational derivative.
pub fn lagrangian_from_parts(
    th: &TheoryVariant,
    a: &LieForm,
    b: &LieForm,
    u: &LieForm,
    v: &LieForm,
) -> Result<JetScalar> {
    let cp = &th.coeffs().cp;
    let cfg = FieldConfig::new(a.clone(), b.clone())?;
    let mut f = u.clone();
    let order = f.valid().min(a.valid());
    f.axpy(0.5, &a.wedge(a, &cp.a)?)?;
    f.set_valid(order);
    let mut h = v.clone();
    if th.curl() == Curl::Covariant {
        let order = h.valid().min(a.valid());
        h.axpy(1.0, &a.wedge(b, &cp.j)?)?;
        h.set_valid(order);
    }
    let s = match th.kind() {
        VariantKind::EOnly => StrengthPair::from_pq(f.clone(), h.clone(), f, h),
        _ => solve_strengths(&cfg, cp, f, h)?,
    };
    lagrangian(th, &cfg, &s)
}

/// The block form `1/2 <M, Y^-1 M> + m F∧B` with `M = (F, H)`, evaluated by
/// explicit metric contraction of the packed components. For the e-only
/// theory `M = (F, H - e(F, A))` paired with itself and no mass term.
pub fn lagrangian_block_form(v: &TheoryVariant, cfg: &FieldConfig, s: &StrengthPair) -> Result<JetScalar> {
    check_shapes(v, cfg, s)?;
    let cp = &v.coeffs().cp;
    let gm = block_metric(cp);
    let (m, n) = if v.kind() == VariantKind::EOnly {
        let ht = s.h.sub(&s.f.wedge(&cfg.a, &cp.e)?)?;
        let m = pack(&s.f, &ht);
        (m.clone(), m)
    } else {
        (pack(&s.f, &s.h), pack(&s.p, &s.q))
    };
    let lay = cfg.layout();
    let mut l = JetScalar::zero(lay);
    for i in 0..m.len() {
        for j in 0..n.len() {
            let w = gm[(i, j)];
            if w != 0.0 {
                l.add_product(0.5 * w, &m[i], &n[j]);
            }
        }
    }
    if v.kind() != VariantKind::EOnly {
        let mut fcs = s.f.clone();
        fcs.axpy(v.cs_coupling() - 0.5, &cfg.a.wedge(&cfg.a, &cp.a)?)?;
        l.axpy(1.0, &top(&fcs.pair(&cfg.b, &cp.m)?)?);
    }
    l.set_valid(s.p.valid().min(s.q.valid()));
    Ok(l)
}

/// Homogeneous pieces of the perturbative Lagrangian: `order` 2 is the
/// quadratic theory, `order` 3 the cubic deformation built from all of
/// (a, b, j, k, e, m). `u`, `v` stand for dA, dB.
pub fn tower_lagrangian(
    ds: &DeformationSet,
    order: usize,
    a: &LieForm,
    b: &LieForm,
    u: &LieForm,
    v: &LieForm,
) -> Result<JetScalar> {
    let co = Coeffs::new(ds);
    let cp = &co.cp;
    let (n, np) = (co.n, co.np);
    let su = u.hodge();
    let sv = v.hodge();
    match order {
        2 => {
            let mut l = top(&su.pair(u, &cp.g)?)?.scale(0.5);
            l.axpy(0.5, &top(&sv.pair(v, &cp.gp)?)?);
            l.axpy(1.0, &top(&u.pair(b, &cp.m)?)?);
            Ok(l)
        }
        3 => {
            let id_n = DMatrix::identity(n, n);
            let id_np = DMatrix::identity(np, np);
            // 1/2 a_{abc} *U^a A^b A^c
            let w1 = contract(a, a, n, |x, y, z| 0.5 * co.a_low.get(x, y, z))?;
            let mut l = top(&su.pair(&w1, &id_n)?)?;
            // j_{a'bc'} *V^{a'} A^b B^{c'}
            let w2 = contract(a, b, np, |x, y, z| co.j_low.get(x, y, z))?;
            l.axpy(1.0, &top(&sv.pair(&w2, &id_np)?)?);
            // b_{ab'c} *U^a *V^{b'} A^c
            let w3 = contract(&sv, a, n, |x, y, z| co.b_low.get(x, y, z))?;
            l.axpy(1.0, &top(&su.pair(&w3, &id_n)?)?);
            // -1/2 k_{a'b'c'} *V^{a'} *V^{b'} B^{c'}
            let w4 = contract(&sv, b, np, |x, y, z| co.k_low.get(x, y, z))?;
            l.axpy(-0.5, &top(&sv.pair(&w4, &id_np)?)?);
            // -e_{a'bc} *V^{a'} U^b A^c
            let el = ds.space_prime.lower_first(&ds.e);
            let w5 = contract(u, a, np, |x, y, z| el.get(x, y, z))?;
            l.axpy(-1.0, &top(&sv.pair(&w5, &id_np)?)?);
            // 1/2 m_{aa'} a^a_{bc} B^{a'} A^b A^c
            let w6 = contract(a, a, np, |x, y, z| 0.5 * co.mu.get(x, y, z))?;
            l.axpy(1.0, &top(&b.pair(&w6, &id_np)?)?);
            Ok(l)
        }
        k => Err(Error::Invalid(format!("no tower Lagrangian of order {k}"))),
    }
}
