//! Hand-written field equations for each variant and for the perturbative tower.

use super::tensors::{contract, sum_forms, Coeffs};
use super::{TheoryVariant, VariantKind};
use crate::deform_coeffs::DeformationSet;
use crate::error::{Error, Result};
use crate::jet_forms::LieForm;
use crate::strengths::{compute_strengths_with, FieldConfig, StrengthPair};

/// (E_A, E_B) at `cfg`; solves for the strengths first.
pub fn field_equations(v: &TheoryVariant, cfg: &FieldConfig) -> Result<(LieForm, LieForm)> {
    let s = compute_strengths_with(cfg, &v.coeffs().cp, v.curl())?;
    field_equations_with(v, cfg, &s)
}

/// (E_A, E_B) from precomputed strengths.
///
/// Parity-even:
///   E_A,c  = d*P_c - a_{abc} *P^a A^b - b_{ab'c} *P^a *Q^{b'}
///            + m_{cb'} Q^{b'} - m_{cb'} bT^{b'}_{de} *P^d A^e
///   E_B,c' = d*Q_{c'} + j_{a'bc'} *Q^{a'} A^b + 1/2 k_{a'b'c'} *Q^{a'} *Q^{b'}
///            + m_{ac'} P^a - m_{ac'} b^a_{b'd} *Q^{b'} A^d
/// E-only, with H~ = H - e(F, A):
///   E_A,c  = d*F_c + (e^{a'}_{bc} + e^{a'}_{cb}) *H~_{a'} F^b - e^{a'}_{cb} d*H~_{a'} A^b
///   E_B,a' = d*H~_{a'}
pub fn field_equations_with(v: &TheoryVariant, cfg: &FieldConfig, s: &StrengthPair) -> Result<(LieForm, LieForm)> {
    let co = v.coeffs();
    let cp = &co.cp;
    let (n, np) = (co.n, co.np);
    match v.kind() {
        VariantKind::LinearAbelian | VariantKind::GeneralParityEven => {
            let mt = cp.m.transpose();
            let ea = sum_forms(&[
                s.star_p.map(&cp.g)?.d()?,
                contract(&s.star_p, &cfg.a, n, |c, a, b| -co.a_low.get(a, b, c))?,
                contract(&s.star_p, &s.star_q, n, |c, a, bp| -co.b_low.get(a, bp, c))?,
                s.q.map(&cp.m)?,
                s.star_p.wedge(&cfg.a, &cp.bt)?.map(&cp.m)?.scale(-1.0),
            ])?;
            let eb = sum_forms(&[
                s.star_q.map(&cp.gp)?.d()?,
                contract(&s.star_q, &cfg.a, np, |c, ap, b| co.j_low.get(ap, b, c))?,
                contract(&s.star_q, &s.star_q, np, |c, ap, bp| 0.5 * co.k_low.get(ap, bp, c))?,
                s.p.map(&mt)?,
                s.star_q.wedge(&cfg.a, &cp.b)?.map(&mt)?.scale(-1.0),
            ])?;
            Ok((ea, eb))
        }
        VariantKind::EOnly => {
            let e = &cp.e;
            let x = s.f.wedge(&cfg.a, e)?;
            let ht = s.h.sub(&x)?;
            let sht = ht.hodge().map(&cp.gp)?;
            let dsht = sht.d()?;
            let ea = sum_forms(&[
                s.f.hodge().map(&cp.g)?.d()?,
                contract(&sht, &s.f, n, |c, ap, b| e.get(ap, b, c) + e.get(ap, c, b))?,
                contract(&dsht, &cfg.a, n, |c, ap, b| -e.get(ap, c, b))?,
            ])?;
            Ok((ea, dsht))
        }
    }
}

/// Equations of the quadratic theory: `E_A = d*F + m H`, `E_B = d*H + m^T F`
/// with F = dA, H = dB and the space metrics lowering the index.
pub fn linear_equations(v: &TheoryVariant, cfg: &FieldConfig) -> Result<(LieForm, LieForm)> {
    tower_equations(v.set(), 1, cfg)
}

/// Homogeneous field equations of the tower: `order` 1 from the quadratic
/// Lagrangian, `order` 2 from the cubic one.
pub fn tower_equations(ds: &DeformationSet, order: usize, cfg: &FieldConfig) -> Result<(LieForm, LieForm)> {
    let co = Coeffs::new(ds);
    let cp = &co.cp;
    let (n, np) = (co.n, co.np);
    let (a, b) = (&cfg.a, &cfg.b);
    let u = a.d()?;
    let v = b.d()?;
    let su = u.hodge();
    let sv = v.hodge();
    match order {
        1 => {
            let ea = sum_forms(&[su.map(&cp.g)?.d()?, v.map(&cp.m)?])?;
            let eb = sum_forms(&[sv.map(&cp.gp)?.d()?, u.map(&cp.m.transpose())?])?;
            Ok((ea, eb))
        }
        2 => {
            let el = ds.space_prime.lower_first(&ds.e);
            let hodge_d = |f: LieForm| -> Result<LieForm> { f.hodge().d() };
            let ea = sum_forms(&[
                // d*(1/2 a_{abc} A^b A^c)
                hodge_d(contract(a, a, n, |x, y, z| 0.5 * co.a_low.get(x, y, z))?)?,
                // a_{dac} A^c *U^d
                contract(a, &su, n, |x, c, d| co.a_low.get(d, x, c))?,
                // -j_{a'ac'} *V^{a'} B^{c'}
                contract(&sv, b, n, |x, ap, cp_| -co.j_low.get(ap, x, cp_))?,
                // d*(b_{ab'c} *V^{b'} A^c)
                hodge_d(contract(&sv, a, n, |x, bp, c| co.b_low.get(x, bp, c))?)?,
                // -b_{db'a} *U^d *V^{b'}
                contract(&su, &sv, n, |x, d, bp| -co.b_low.get(d, bp, x))?,
                // (2 e_{a'ab} *V^{a'} U^b - e_{a'ab} d*V^{a'} A^b), e symmetric in (a, b)
                contract(&sv, &u, n, |x, ap, y| el.get(ap, y, x) + el.get(ap, x, y))?,
                contract(&sv.d()?, a, n, |x, ap, y| -el.get(ap, x, y))?,
                // m_{xa'} a^x_{ac} B^{a'} A^c
                contract(b, a, n, |x, ap, c| co.mu.get(ap, x, c))?,
            ])?;
            let eb = sum_forms(&[
                // d*(j_{a'bc'} A^b B^{c'})
                hodge_d(contract(a, b, np, |x, y, z| co.j_low.get(x, y, z))?)?,
                // j_{b'ba'} *V^{b'} A^b
                contract(&sv, a, np, |x, bp, y| co.j_low.get(bp, y, x))?,
                // d*(b_{ba'c} *U^b A^c)
                hodge_d(contract(&su, a, np, |x, y, c| co.b_low.get(y, x, c))?)?,
                // -d*(k_{a'b'c'} *V^{b'} B^{c'})
                hodge_d(contract(&sv, b, np, |x, y, z| -co.k_low.get(x, y, z))?)?,
                // -1/2 k_{b'c'a'} *V^{b'} *V^{c'}
                contract(&sv, &sv, np, |x, y, z| -0.5 * co.k_low.get(y, z, x))?,
                // -d*(e_{a'bc} U^b A^c)
                hodge_d(contract(&u, a, np, |x, y, z| -el.get(x, y, z))?)?,
                // 1/2 m_{aa'} a^a_{bc} A^b A^c
                contract(a, a, np, |x, y, z| 0.5 * co.mu.get(x, y, z))?,
            ])?;
            Ok((ea, eb))
        }
        k => Err(Error::Invalid(format!("no tower equations of order {k}"))),
    }
}
