//! Vector-valued differential forms on Minkowski space with jet components.

use nalgebra::DMatrix;
use once_cell::sync::Lazy;

use super::jet::{JetLayout, JetScalar};
use crate::error::{Error, Result};
use crate::lie_core::Tensor3;

/// Minkowski metric diagonal, signature (-,+,+,+).
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Sign of `**` on p-forms for the chosen signature and orientation.
pub const HODGE_SQUARE_SIGN: [f64; 5] = [-1.0, 1.0, -1.0, 1.0, -1.0];

/// Literal epsilon contraction divided by the Hodge dual, on 2-forms.
pub const EPS_DUAL_2: f64 = 2.0;
/// Literal epsilon contraction divided by the Hodge dual, on 3-forms.
pub const EPS_DUAL_3: f64 = -6.0;

struct BasisTables {
    /// Canonical index sets (bitmasks) for each degree, lexicographic.
    masks: [Vec<u8>; 5],
    /// Position of a mask within its degree.
    pos: [usize; 16],
}

static TABLES: Lazy<BasisTables> = Lazy::new(|| {
    let mut masks: [Vec<u8>; 5] = Default::default();
    let mut all: Vec<Vec<usize>> = Vec::new();
    fn rec(start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..4 {
            cur.push(i);
            rec(i + 1, cur, out);
            cur.pop();
        }
    }
    rec(0, &mut Vec::new(), &mut all);
    all.sort();
    let mut pos = [0usize; 16];
    for idx in all {
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        let p = idx.len();
        pos[mask as usize] = masks[p].len();
        masks[p].push(mask);
    }
    BasisTables { masks, pos }
});

/// Number of basis elements of p-forms.
pub fn basis_len(p: usize) -> usize {
    [1, 4, 6, 4, 1][p]
}

/// Canonical basis index sets of degree p, as bitmasks.
pub fn basis(p: usize) -> &'static [u8] {
    &TABLES.masks[p]
}

pub fn position(mask: u8) -> usize {
    TABLES.pos[mask as usize]
}

/// Increasing list of indices in a mask.
pub fn indices(mask: u8) -> Vec<usize> {
    (0..4).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of dx^I ∧ dx^J relative to the canonical ordering of I ∪ J, or None.
pub fn merge_sign(i: u8, j: u8) -> Option<f64> {
    if i & j != 0 {
        return None;
    }
    let mut inv = 0;
    for a in indices(i) {
        for b in indices(j) {
            if a > b {
                inv += 1;
            }
        }
    }
    Some(if inv % 2 == 0 { 1.0 } else { -1.0 })
}

/// Levi-Civita symbol with all indices down, eps_{0123} = +1.
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut seen = [false; 4];
    for &i in &idx {
        if seen[i] {
            return 0.0;
        }
        seen[i] = true;
    }
    let mut inv = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if idx[a] > idx[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Form of degree p with values in a `dim`-dimensional vector space.
#[derive(Clone, Debug, PartialEq)]
pub struct LieForm {
    p: usize,
    dim: usize,
    comps: Vec<JetScalar>,
}

impl LieForm {
    pub fn zero(p: usize, dim: usize, lay: &'static JetLayout) -> Self {
        LieForm { p, dim, comps: vec![JetScalar::zero(lay); dim * basis_len(p)] }
    }

    /// Build from a component function `(a, basis position) -> jet`.
    pub fn from_fn(p: usize, dim: usize, mut f: impl FnMut(usize, usize) -> JetScalar) -> Self {
        let nb = basis_len(p);
        let mut comps = Vec::with_capacity(dim * nb);
        for a in 0..dim {
            for i in 0..nb {
                comps.push(f(a, i));
            }
        }
        LieForm { p, dim, comps }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layout(&self) -> &'static JetLayout {
        self.comps[0].layout()
    }

    pub fn comp(&self, a: usize, i: usize) -> &JetScalar {
        &self.comps[a * basis_len(self.p) + i]
    }

    pub fn comp_mut(&mut self, a: usize, i: usize) -> &mut JetScalar {
        let nb = basis_len(self.p);
        &mut self.comps[a * nb + i]
    }

    /// Component on the index set `mask` (must have popcount p).
    pub fn comp_mask(&self, a: usize, mask: u8) -> &JetScalar {
        self.comp(a, position(mask))
    }

    pub fn comps(&self) -> &[JetScalar] {
        &self.comps
    }

    /// Lowest valid jet order among components.
    pub fn valid(&self) -> i32 {
        self.comps.iter().map(|c| c.valid()).min().unwrap_or(i32::MAX)
    }

    pub fn max_abs_valid(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs_valid()).fold(0.0, f64::max)
    }

    /// Same as `max_abs_valid` but measured at the given common order.
    pub fn max_abs_at(&self, order: i32) -> f64 {
        self.comps
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.set_valid(order.min(c.valid()));
                c.max_abs_valid()
            })
            .fold(0.0, f64::max)
    }

    pub fn set_valid(&mut self, v: i32) {
        for c in &mut self.comps {
            c.set_valid(v);
        }
    }

    /// Restrict to one internal component, as a scalar-valued form.
    pub fn component(&self, a: usize) -> LieForm {
        let nb = basis_len(self.p);
        LieForm { p: self.p, dim: 1, comps: self.comps[a * nb..(a + 1) * nb].to_vec() }
    }

    /// Stack scalar-valued forms of equal degree into one vector-valued form.
    pub fn stack(parts: &[LieForm]) -> Result<LieForm> {
        let p = parts.first().ok_or_else(|| Error::Invalid("empty stack".into()))?.p;
        let mut comps = Vec::new();
        for f in parts {
            if f.p != p || f.dim != 1 {
                return Err(Error::Dimension("stacking requires scalar forms of equal degree".into()));
            }
            comps.extend(f.comps.iter().cloned());
        }
        Ok(LieForm { p, dim: parts.len(), comps })
    }

    fn check_same(&self, o: &LieForm) -> Result<()> {
        if self.p != o.p || self.dim != o.dim {
            return Err(Error::Dimension(format!("form ({}, {}) vs ({}, {})", self.p, self.dim, o.p, o.dim)));
        }
        Ok(())
    }

    pub fn add(&self, o: &LieForm) -> Result<LieForm> {
        let mut r = self.clone();
        r.axpy(1.0, o)?;
        Ok(r)
    }

    pub fn sub(&self, o: &LieForm) -> Result<LieForm> {
        let mut r = self.clone();
        r.axpy(-1.0, o)?;
        Ok(r)
    }

    pub fn axpy(&mut self, s: f64, o: &LieForm) -> Result<()> {
        self.check_same(o)?;
        for (x, y) in self.comps.iter_mut().zip(o.comps.iter()) {
            x.axpy(s, y);
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> LieForm {
        LieForm { p: self.p, dim: self.dim, comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    /// Multiply every component by a scalar jet.
    pub fn times(&self, f: &JetScalar) -> LieForm {
        LieForm { p: self.p, dim: self.dim, comps: self.comps.iter().map(|c| c * f).collect() }
    }

    pub fn base(&self) -> LieForm {
        LieForm { p: self.p, dim: self.dim, comps: self.comps.iter().map(|c| c.base()).collect() }
    }

    pub fn tangent(&self) -> LieForm {
        LieForm { p: self.p, dim: self.dim, comps: self.comps.iter().map(|c| c.tangent()).collect() }
    }

    /// `base + eps * tangent`.
    pub fn with_tangent(base: &LieForm, tangent: &LieForm) -> Result<LieForm> {
        base.check_same(tangent)?;
        Ok(LieForm {
            p: base.p,
            dim: base.dim,
            comps: base.comps.iter().zip(tangent.comps.iter()).map(|(b, t)| JetScalar::with_tangent(b, t)).collect(),
        })
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<LieForm> {
        if self.p >= 4 {
            return Err(Error::FormDegree(self.p, 1));
        }
        let lay = self.layout();
        let mut out = LieForm::zero(self.p + 1, self.dim, lay);
        let mut order = i32::MAX;
        for a in 0..self.dim {
            for (ii, &mask) in basis(self.p).iter().enumerate() {
                let c = self.comp(a, ii);
                order = order.min(c.valid() - 1);
                if c.is_zero() {
                    continue;
                }
                for mu in 0..4 {
                    let m = 1u8 << mu;
                    if let Some(s) = merge_sign(m, mask) {
                        let dc = c.partial(mu)?;
                        out.comp_mut(a, position(m | mask)).axpy(s, &dc);
                    }
                }
            }
        }
        if order < 0 {
            return Err(Error::JetOrderExhausted);
        }
        out.set_valid(order);
        Ok(out)
    }

    /// Bilinear wedge: out^k = T[k][i][j] self^i ∧ other^j.
    pub fn wedge(&self, other: &LieForm, t: &Tensor3) -> Result<LieForm> {
        if self.p + other.p > 4 {
            return Err(Error::FormDegree(self.p, other.p));
        }
        let [n0, n1, n2] = t.dims();
        if n1 != self.dim || n2 != other.dim {
            return Err(Error::Dimension(format!(
                "wedge tensor {:?} with form dims {} and {}",
                t.dims(),
                self.dim,
                other.dim
            )));
        }
        let lay = self.layout();
        let q = self.p + other.p;
        let mut out = LieForm::zero(q, n0, lay);
        let order = self.valid().min(other.valid());
        let mut nz: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n1 * n2];
        for k in 0..n0 {
            for i in 0..n1 {
                for j in 0..n2 {
                    let v = t.get(k, i, j);
                    if v != 0.0 {
                        nz[i * n2 + j].push((k, v));
                    }
                }
            }
        }
        for (ii, &mi) in basis(self.p).iter().enumerate() {
            for (jj, &mj) in basis(other.p).iter().enumerate() {
                let Some(s) = merge_sign(mi, mj) else { continue };
                let kk = position(mi | mj);
                for i in 0..n1 {
                    let x = self.comp(i, ii);
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..n2 {
                        let entries = &nz[i * n2 + j];
                        if entries.is_empty() {
                            continue;
                        }
                        let y = other.comp(j, jj);
                        if y.is_zero() {
                            continue;
                        }
                        for &(k, v) in entries {
                            out.comp_mut(k, kk).add_product(s * v, x, y);
                        }
                    }
                }
            }
        }
        out.set_valid(order);
        Ok(out)
    }

    /// Scalar pairing g_{ij} self^i ∧ other^j.
    pub fn pair(&self, other: &LieForm, g: &DMatrix<f64>) -> Result<LieForm> {
        let t = Tensor3::from_fn([1, g.nrows(), g.ncols()], |_, i, j| g[(i, j)]);
        self.wedge(other, &t)
    }

    /// Linear action on the values: out^a = m[a][b] self^b.
    pub fn map(&self, m: &DMatrix<f64>) -> Result<LieForm> {
        if m.ncols() != self.dim {
            return Err(Error::Dimension(format!("map {}x{} on dim {}", m.nrows(), m.ncols(), self.dim)));
        }
        let lay = self.layout();
        let nb = basis_len(self.p);
        let mut out = LieForm::zero(self.p, m.nrows(), lay);
        for a in 0..m.nrows() {
            for b in 0..self.dim {
                let v = m[(a, b)];
                if v == 0.0 {
                    continue;
                }
                for i in 0..nb {
                    out.comp_mut(a, i).axpy(v, self.comp(b, i));
                }
            }
        }
        out.set_valid(self.valid());
        Ok(out)
    }

    /// Hodge dual: *(dx^I) = eta^{II} eps_{IJ} dx^J, J the complement of I.
    pub fn hodge(&self) -> LieForm {
        let lay = self.layout();
        let q = 4 - self.p;
        let mut out = LieForm::zero(q, self.dim, lay);
        for (ii, &mi) in basis(self.p).iter().enumerate() {
            let mj = 0b1111 ^ mi;
            let eta: f64 = indices(mi).iter().map(|&i| ETA[i]).product();
            let s = eta * merge_sign(mi, mj).unwrap_or(0.0);
            let jj = position(mj);
            for a in 0..self.dim {
                *out.comp_mut(a, jj) = self.comp(a, ii).scale(s);
            }
        }
        out
    }

    /// Literal epsilon contraction dual on 2- and 3-forms:
    /// (eps f)_{J} = sum over ordered I of eps_{J}^{I} f_{I}.
    pub fn epsilon_dual(&self) -> Result<LieForm> {
        if self.p != 2 && self.p != 3 {
            return Err(Error::Invalid(format!("epsilon dual of a {}-form", self.p)));
        }
        let lay = self.layout();
        let q = 4 - self.p;
        let perms: f64 = if self.p == 2 { 2.0 } else { 6.0 };
        let mut out = LieForm::zero(q, self.dim, lay);
        for (jj, &mj) in basis(q).iter().enumerate() {
            for (ii, &mi) in basis(self.p).iter().enumerate() {
                let mut idx = [0usize; 4];
                let jv = indices(mj);
                let iv = indices(mi);
                for (k, &x) in jv.iter().chain(iv.iter()).enumerate() {
                    if k < 4 {
                        idx[k] = x;
                    }
                }
                if jv.len() + iv.len() != 4 {
                    continue;
                }
                let e = levi_civita(idx);
                if e == 0.0 {
                    continue;
                }
                let raise: f64 = iv.iter().map(|&i| ETA[i]).product();
                // every ordering of I contributes the same signed term
                let s = perms * e * raise;
                for a in 0..self.dim {
                    let c = self.comp(a, ii).clone();
                    out.comp_mut(a, jj).axpy(s, &c);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of the volume form of a scalar 4-form.
    pub fn top(&self) -> Result<JetScalar> {
        if self.p != 4 || self.dim != 1 {
            return Err(Error::Invalid(format!("top component of ({}, {})", self.p, self.dim)));
        }
        Ok(self.comps[0].clone())
    }

    /// Metric inner product g_{ab} <self^a, other^b>_eta on canonical components.
    pub fn inner(&self, other: &LieForm, g: &DMatrix<f64>) -> Result<JetScalar> {
        self.check_same(other)?;
        let lay = self.layout();
        let mut r = JetScalar::zero(lay);
        for (ii, &mi) in basis(self.p).iter().enumerate() {
            let eta: f64 = indices(mi).iter().map(|&i| ETA[i]).product();
            for a in 0..self.dim {
                for b in 0..self.dim {
                    let v = g[(a, b)];
                    if v != 0.0 {
                        r.add_product(eta * v, self.comp(a, ii), other.comp(b, ii));
                    }
                }
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lay() -> &'static JetLayout {
        JetLayout::get(2).unwrap()
    }

    fn basis_form(p: usize, mask: u8) -> LieForm {
        let mut f = LieForm::zero(p, 1, lay());
        *f.comp_mut(0, position(mask)) = JetScalar::constant(lay(), 1.0);
        f
    }

    #[test]
    fn basis_counts() {
        for p in 0..5 {
            assert_eq!(basis(p).len(), basis_len(p));
        }
        assert_eq!(indices(basis(2)[0]), vec![0, 1]);
        assert_eq!(indices(basis(2)[5]), vec![2, 3]);
    }

    #[test]
    fn hodge_table() {
        let v = basis_form(0, 0).hodge();
        assert_eq!(v.comp(0, 0).at_origin(), 1.0);
        let h = basis_form(1, 0b0001).hodge();
        assert_eq!(h.comp_mask(0, 0b1110).at_origin(), -1.0);
        let h = basis_form(2, 0b0011).hodge();
        assert_eq!(h.comp_mask(0, 0b1100).at_origin(), -1.0);
    }

    #[test]
    fn hodge_square_signs() {
        for p in 0..5 {
            for &m in basis(p) {
                let f = basis_form(p, m);
                let ff = f.hodge().hodge();
                assert_eq!(ff, f.scale(HODGE_SQUARE_SIGN[p]));
            }
        }
    }
}
