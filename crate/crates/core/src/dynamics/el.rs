//! Generic variational derivative of a first-order Lagrangian density.
//!
//! The density is treated as a pointwise function of the jet coordinates
//! (A, B, U, V) with U, V standing for dA, dB. Each partial derivative is the
//! eps-coefficient after seeding one coordinate with a unit tangent. Then
//! `E_A = ∂L/∂A + d G_U` and `E_B = ∂L/∂B - d G_V`, where G_X is the form
//! dual to ∂L/∂X, and the boundary term of a variation δ is
//! `δA ∧ G_U + δB ∧ G_V`.

use crate::error::Result;
use crate::jet_forms::{basis, merge_sign, position, JetScalar, LieForm};
use crate::strengths::FieldConfig;

use super::tensors::sum_forms;

/// Euler-Lagrange forms together with the boundary potentials.
#[derive(Clone, Debug)]
pub struct ElPieces {
    pub e_a: LieForm,
    pub e_b: LieForm,
    /// Dual of ∂L/∂(dA): a covector-valued 2-form.
    pub g_u: LieForm,
    /// Dual of ∂L/∂(dB): a covector-valued 1-form.
    pub g_v: LieForm,
}

/// Form of degree 4-p whose wedge with `dx^I` returns `∂L/∂X_I vol`.
fn dual_partials(x: &LieForm, mut eval: impl FnMut(&LieForm) -> Result<JetScalar>) -> Result<LieForm> {
    let p = x.degree();
    let lay = x.layout();
    let mut out = LieForm::zero(4 - p, x.dim(), lay);
    let mut order = i32::MAX;
    for a in 0..x.dim() {
        for (i, &mask) in basis(p).iter().enumerate() {
            let mut t = LieForm::zero(p, x.dim(), lay);
            *t.comp_mut(a, i) = JetScalar::constant(lay, 1.0);
            let seeded = LieForm::with_tangent(x, &t)?;
            let d = eval(&seeded)?.tangent();
            order = order.min(d.valid());
            let comp = 0b1111 ^ mask;
            let s = merge_sign(mask, comp).expect("complementary masks");
            *out.comp_mut(a, position(comp)) = d.scale(s);
        }
    }
    out.set_valid(order);
    Ok(out)
}

/// Variational derivative of `lag(A, B, U, V)` at `cfg`.
pub fn euler_lagrange<F>(cfg: &FieldConfig, lag: F) -> Result<ElPieces>
where
    F: Fn(&LieForm, &LieForm, &LieForm, &LieForm) -> Result<JetScalar>,
{
    let (a, b) = (&cfg.a, &cfg.b);
    let u = a.d()?;
    let v = b.d()?;
    let s_a = dual_partials(a, |x| lag(x, b, &u, &v))?;
    let s_b = dual_partials(b, |x| lag(a, x, &u, &v))?;
    let g_u = dual_partials(&u, |x| lag(a, b, x, &v))?;
    let g_v = dual_partials(&v, |x| lag(a, b, &u, x))?;
    let e_a = sum_forms(&[s_a, g_u.d()?])?;
    let e_b = sum_forms(&[s_b, g_v.d()?.scale(-1.0)])?;
    Ok(ElPieces { e_a, e_b, g_u, g_v })
}
