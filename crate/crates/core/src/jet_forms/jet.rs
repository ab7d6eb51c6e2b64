//! Truncated Taylor polynomials in the four spacetime coordinates.
//!
//! Coefficients are stored densely in graded-lexicographic monomial order.
//! An optional nilpotent parameter `eps` (eps^2 = 0) doubles the storage and
//! is used for exact first-order variations.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};

/// Highest supported truncation degree.
pub const MAX_DEGREE: usize = 6;

/// Monomial layout and product/derivative tables for one truncation degree.
#[derive(Debug)]
pub struct JetLayout {
    degree: usize,
    monos: Vec<[u8; 4]>,
    total: Vec<u8>,
    index: HashMap<[u8; 4], usize>,
    /// (i, j, k): monomial i times monomial j is monomial k.
    mul: Vec<(u16, u16, u16)>,
    /// Per coordinate: (source, target, factor) for the partial derivative.
    deriv: [Vec<(u16, u16, f64)>; 4],
}

static LAYOUTS: [OnceCell<JetLayout>; MAX_DEGREE + 1] = [
    OnceCell::new(),
    OnceCell::new(),
    OnceCell::new(),
    OnceCell::new(),
    OnceCell::new(),
    OnceCell::new(),
    OnceCell::new(),
];

impl JetLayout {
    /// Shared layout for truncation degree `degree`.
    pub fn get(degree: usize) -> Result<&'static JetLayout> {
        if degree > MAX_DEGREE {
            return Err(Error::Degree(degree));
        }
        Ok(LAYOUTS[degree].get_or_init(|| JetLayout::build(degree)))
    }

    fn build(degree: usize) -> JetLayout {
        let mut monos = Vec::new();
        for d in 0..=degree {
            let mut level = Vec::new();
            for e0 in (0..=d).rev() {
                for e1 in (0..=d - e0).rev() {
                    for e2 in (0..=d - e0 - e1).rev() {
                        let e3 = d - e0 - e1 - e2;
                        level.push([e0 as u8, e1 as u8, e2 as u8, e3 as u8]);
                    }
                }
            }
            monos.extend(level);
        }
        let total: Vec<u8> = monos.iter().map(|m| m.iter().sum()).collect();
        let index: HashMap<[u8; 4], usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mul = Vec::new();
        for (i, mi) in monos.iter().enumerate() {
            for (j, mj) in monos.iter().enumerate() {
                if (total[i] + total[j]) as usize > degree {
                    continue;
                }
                let k = index[&[mi[0] + mj[0], mi[1] + mj[1], mi[2] + mj[2], mi[3] + mj[3]]];
                mul.push((i as u16, j as u16, k as u16));
            }
        }
        let deriv = std::array::from_fn(|mu| {
            let mut v = Vec::new();
            for (i, m) in monos.iter().enumerate() {
                if m[mu] == 0 {
                    continue;
                }
                let mut t = *m;
                t[mu] -= 1;
                v.push((i as u16, index[&t] as u16, m[mu] as f64));
            }
            v
        });
        JetLayout { degree, monos, total, index, mul, deriv }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of monomials up to the truncation degree.
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, i: usize) -> [u8; 4] {
        self.monos[i]
    }

    pub fn total_degree(&self, i: usize) -> usize {
        self.total[i] as usize
    }

    pub fn index_of(&self, exps: [u8; 4]) -> Option<usize> {
        self.index.get(&exps).copied()
    }

    /// Product table entries (i, j, k).
    pub fn products(&self) -> &[(u16, u16, u16)] {
        &self.mul
    }

    /// Number of monomials of total degree at most `order`.
    pub fn count_upto(&self, order: i32) -> usize {
        if order < 0 {
            return 0;
        }
        let o = (order as usize).min(self.degree) as u8;
        self.total.iter().take_while(|&&t| t <= o).count()
    }
}

/// Truncated Taylor polynomial, optionally with a nilpotent `eps` part.
#[derive(Clone, Debug)]
pub struct JetScalar {
    lay: &'static JetLayout,
    c: Vec<f64>,
    valid: i32,
}

impl PartialEq for JetScalar {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.lay, other.lay) && self.valid == other.valid && self.c == other.c
    }
}

impl JetScalar {
    pub fn zero(lay: &'static JetLayout) -> Self {
        JetScalar { lay, c: vec![0.0; lay.len()], valid: lay.degree as i32 }
    }

    pub fn constant(lay: &'static JetLayout, v: f64) -> Self {
        let mut z = Self::zero(lay);
        z.c[0] = v;
        z
    }

    /// The coordinate function x^mu.
    pub fn coordinate(lay: &'static JetLayout, mu: usize) -> Self {
        let mut z = Self::zero(lay);
        if lay.degree >= 1 {
            let mut e = [0u8; 4];
            e[mu] = 1;
            z.c[lay.index[&e]] = 1.0;
        }
        z
    }

    /// Build from plain Taylor coefficients (length must match the layout).
    pub fn from_coeffs(lay: &'static JetLayout, c: Vec<f64>) -> Result<Self> {
        if c.len() != lay.len() && c.len() != 2 * lay.len() {
            return Err(Error::Dimension(format!("jet coefficient length {} for layout of {}", c.len(), lay.len())));
        }
        Ok(JetScalar { lay, c, valid: lay.degree as i32 })
    }

    /// `base + eps * tangent`.
    pub fn with_tangent(base: &JetScalar, tangent: &JetScalar) -> Self {
        let n = base.lay.len();
        let mut c = Vec::with_capacity(2 * n);
        c.extend_from_slice(&base.c[..n]);
        if tangent.has_eps() {
            c.extend_from_slice(&tangent.c[..n]);
        } else {
            c.extend_from_slice(&tangent.c);
        }
        JetScalar { lay: base.lay, c, valid: base.valid.min(tangent.valid) }
    }

    pub fn layout(&self) -> &'static JetLayout {
        self.lay
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.c
    }

    pub fn valid(&self) -> i32 {
        self.valid
    }

    pub fn set_valid(&mut self, v: i32) {
        self.valid = v;
    }

    pub fn has_eps(&self) -> bool {
        self.c.len() > self.lay.len()
    }

    /// Value at the origin (eps-free part).
    pub fn at_origin(&self) -> f64 {
        self.c[0]
    }

    /// Part independent of eps.
    pub fn base(&self) -> JetScalar {
        let n = self.lay.len();
        JetScalar { lay: self.lay, c: self.c[..n].to_vec(), valid: self.valid }
    }

    /// Coefficient of eps (zero when absent).
    pub fn tangent(&self) -> JetScalar {
        let n = self.lay.len();
        if self.has_eps() {
            JetScalar { lay: self.lay, c: self.c[n..].to_vec(), valid: self.valid }
        } else {
            JetScalar { lay: self.lay, c: vec![0.0; n], valid: self.valid }
        }
    }

    fn widen(&mut self) {
        if !self.has_eps() {
            self.c.resize(2 * self.lay.len(), 0.0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// Largest coefficient magnitude among monomials within the valid order.
    pub fn max_abs_valid(&self) -> f64 {
        let n = self.lay.len();
        let m = self.lay.count_upto(self.valid);
        let mut r = 0.0f64;
        for k in 0..m {
            r = r.max(self.c[k].abs());
            if self.has_eps() {
                r = r.max(self.c[n + k].abs());
            }
        }
        r
    }

    pub fn scale(&self, s: f64) -> JetScalar {
        JetScalar { lay: self.lay, c: self.c.iter().map(|x| x * s).collect(), valid: self.valid }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &JetScalar) {
        if s == 0.0 {
            return;
        }
        if other.has_eps() {
            self.widen();
        }
        for (a, b) in self.c.iter_mut().zip(other.c.iter()) {
            *a += s * b;
        }
        self.valid = self.valid.min(other.valid);
    }

    /// `self += s * x * y` without allocating the product.
    pub fn add_product(&mut self, s: f64, x: &JetScalar, y: &JetScalar) {
        if s == 0.0 {
            return;
        }
        let n = self.lay.len();
        let xe = x.has_eps();
        let ye = y.has_eps();
        if xe || ye {
            self.widen();
        }
        let (lo, hi) = self.c.split_at_mut(n);
        for &(i, j, k) in &self.lay.mul {
            let (i, j, k) = (i as usize, j as usize, k as usize);
            let xi = x.c[i];
            let yj = y.c[j];
            lo[k] += s * xi * yj;
            if xe {
                hi[k] += s * x.c[n + i] * yj;
            }
            if ye {
                hi[k] += s * xi * y.c[n + j];
            }
        }
        self.valid = self.valid.min(x.valid).min(y.valid);
    }

    /// Partial derivative along x^mu; lowers the valid order by one.
    pub fn partial(&self, mu: usize) -> Result<JetScalar> {
        if self.valid < 1 {
            return Err(Error::JetOrderExhausted);
        }
        let n = self.lay.len();
        let mut c = vec![0.0; self.c.len()];
        for &(src, dst, f) in &self.lay.deriv[mu] {
            c[dst as usize] += f * self.c[src as usize];
            if self.has_eps() {
                c[n + dst as usize] += f * self.c[n + src as usize];
            }
        }
        Ok(JetScalar { lay: self.lay, c, valid: self.valid - 1 })
    }

    /// Evaluate the eps-free part at a point by Horner-free direct summation.
    pub fn eval(&self, x: [f64; 4]) -> f64 {
        let mut s = 0.0;
        for (i, m) in self.lay.monos.iter().enumerate() {
            let mut t = self.c[i];
            for mu in 0..4 {
                t *= x[mu].powi(m[mu] as i32);
            }
            s += t;
        }
        s
    }
}

impl Add for &JetScalar {
    type Output = JetScalar;
    fn add(self, rhs: &JetScalar) -> JetScalar {
        let mut r = self.clone();
        r.axpy(1.0, rhs);
        r
    }
}

impl Sub for &JetScalar {
    type Output = JetScalar;
    fn sub(self, rhs: &JetScalar) -> JetScalar {
        let mut r = self.clone();
        r.axpy(-1.0, rhs);
        r
    }
}

impl Mul for &JetScalar {
    type Output = JetScalar;
    fn mul(self, rhs: &JetScalar) -> JetScalar {
        let mut r = JetScalar::zero(self.lay);
        r.add_product(1.0, self, rhs);
        r
    }
}

impl Neg for &JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        self.scale(-1.0)
    }
}

impl AddAssign<&JetScalar> for JetScalar {
    fn add_assign(&mut self, rhs: &JetScalar) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&JetScalar> for JetScalar {
    fn sub_assign(&mut self, rhs: &JetScalar) {
        self.axpy(-1.0, rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_sizes() {
        assert_eq!(JetLayout::get(0).unwrap().len(), 1);
        assert_eq!(JetLayout::get(3).unwrap().len(), 35);
        assert_eq!(JetLayout::get(4).unwrap().len(), 70);
        assert!(JetLayout::get(MAX_DEGREE + 1).is_err());
    }

    #[test]
    fn graded_order() {
        let l = JetLayout::get(3).unwrap();
        for i in 1..l.len() {
            assert!(l.total_degree(i) >= l.total_degree(i - 1));
        }
        assert_eq!(l.monomial(1), [1, 0, 0, 0]);
    }

    #[test]
    fn product_truncates() {
        let l = JetLayout::get(2).unwrap();
        let x = JetScalar::coordinate(l, 0);
        let y = JetScalar::coordinate(l, 1);
        let xy = &x * &y;
        assert_eq!(xy.c[l.index_of([1, 1, 0, 0]).unwrap()], 1.0);
        let xxy = &xy * &x;
        assert!(xxy.is_zero());
    }

    #[test]
    fn eps_is_nilpotent() {
        let l = JetLayout::get(2).unwrap();
        let one = JetScalar::constant(l, 1.0);
        let e = JetScalar::with_tangent(&JetScalar::zero(l), &one);
        let ee = &e * &e;
        assert!(ee.is_zero());
        let t = (&e * &one).tangent();
        assert_eq!(t.at_origin(), 1.0);
    }

    #[test]
    fn partial_lowers_order() {
        let l = JetLayout::get(1).unwrap();
        let x = JetScalar::coordinate(l, 2);
        let dx = x.partial(2).unwrap();
        assert_eq!(dx.at_origin(), 1.0);
        assert_eq!(dx.valid(), 0);
        assert!(matches!(dx.partial(0), Err(Error::JetOrderExhausted)));
    }
}
