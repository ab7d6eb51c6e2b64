//! Coefficient tensors in the index placements the dynamics consume, plus
//! small contraction helpers on vector-valued forms.

use nalgebra::DMatrix;

use crate::deform_coeffs::DeformationSet;
use crate::error::Result;
use crate::jet_forms::{JetScalar, LieForm};
use crate::lie_core::Tensor3;
use crate::strengths::Couplings;

#[derive(Clone, Debug)]
pub(crate) struct Coeffs {
    pub cp: Couplings,
    pub n: usize,
    pub np: usize,
    /// `a_{abc}`.
    pub a_low: Tensor3,
    /// `b_{ab'c}`.
    pub b_low: Tensor3,
    /// `b^{ab'}_c`.
    pub b_raised: Tensor3,
    /// `b_b{}^{a'}{}_c` with `b` raised, as `[a'][b][c]`.
    pub bt_raised: Tensor3,
    /// `j_{a'bc'}`.
    pub j_low: Tensor3,
    /// `k_{a'b'c'}`.
    pub k_low: Tensor3,
    /// `k^{a'b'}_{c'}` as `[a'][b'][c']`.
    pub k_raised: Tensor3,
    /// `m_{aa'} a^a_{bc}` as `[a'][b][c]`.
    pub mu: Tensor3,
    /// `m_{bb'} b^b_{a'c}` as `[b'][a'][c]`.
    pub mb: Tensor3,
    /// `1/2 (k^{a'}_{b'c'} - k^{a'}_{c'b'})`.
    pub k_anti: Tensor3,
}

impl Coeffs {
    pub fn new(ds: &DeformationSet) -> Self {
        let cp = Couplings::new(ds);
        let (n, np) = (cp.n, cp.n_prime);
        let l = ds.lowered();
        let gi = &cp.g_inv;
        let gpi = &cp.gp_inv;
        let bt_raised = Tensor3::from_fn([np, n, n], |ap, b, c| (0..n).map(|f| gi[(b, f)] * cp.bt.get(ap, f, c)).sum());
        let k_raised =
            Tensor3::from_fn([np, np, np], |ap, bp, cp_| (0..np).map(|f| cp.k.get(ap, f, cp_) * gpi[(f, bp)]).sum());
        let mu = Tensor3::from_fn([np, n, n], |ap, b, c| (0..n).map(|a| cp.m[(a, ap)] * cp.a.get(a, b, c)).sum());
        let mb = Tensor3::from_fn([np, np, n], |bp, ap, c| (0..n).map(|b| cp.m[(b, bp)] * cp.b.get(b, ap, c)).sum());
        let k_anti = Tensor3::from_fn([np, np, np], |ap, bp, c| 0.5 * (cp.k.get(ap, bp, c) - cp.k.get(ap, c, bp)));
        Coeffs {
            k_anti,
            n,
            np,
            a_low: l.a,
            b_low: l.b,
            b_raised: l.b_raised,
            bt_raised,
            j_low: l.j,
            k_low: l.k,
            k_raised,
            mu,
            mb,
            cp,
        }
    }
}

/// out^o = sum f(o, i, j) x^i ∧ y^j.
pub(crate) fn contract(
    x: &LieForm,
    y: &LieForm,
    out: usize,
    f: impl FnMut(usize, usize, usize) -> f64,
) -> Result<LieForm> {
    x.wedge(y, &Tensor3::from_fn([out, x.dim(), y.dim()], f))
}

/// out^o = sum f(o, i, j, k) x^i ∧ y^j ∧ z^k.
pub(crate) fn triple(
    x: &LieForm,
    y: &LieForm,
    z: &LieForm,
    out: usize,
    mut f: impl FnMut(usize, usize, usize, usize) -> f64,
) -> Result<LieForm> {
    let xy = outer(x, y)?;
    let ny = y.dim();
    contract(&xy, z, out, |o, ij, k| f(o, ij / ny, ij % ny, k))
}

/// Tensor product of values: out^{(i, j)} = x^i ∧ y^j, flattened row-major.
pub(crate) fn outer(x: &LieForm, y: &LieForm) -> Result<LieForm> {
    let ny = y.dim();
    contract(x, y, x.dim() * ny, |o, i, j| if o == i * ny + j { 1.0 } else { 0.0 })
}

/// sum_i x^i ∧ y_i for a covector-valued `y`; returns the scalar form.
pub(crate) fn dot(x: &LieForm, y: &LieForm) -> Result<LieForm> {
    x.pair(y, &DMatrix::identity(x.dim(), y.dim()))
}

/// Volume coefficient of a scalar 4-form.
pub(crate) fn top(f: &LieForm) -> Result<JetScalar> {
    f.top()
}

pub(crate) fn sum_forms(parts: &[LieForm]) -> Result<LieForm> {
    let mut out = parts[0].clone();
    let mut order = out.valid();
    for p in &parts[1..] {
        order = order.min(p.valid());
        out.axpy(1.0, p)?;
    }
    out.set_valid(order);
    Ok(out)
}
