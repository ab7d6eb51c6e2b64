//! Curvatures, the Y operator on (2-form, 3-form) pairs, its inversion over
//! the truncated jet ring, and the nonlinear field strengths (P, Q).

use nalgebra::{DMatrix, DVector};

use crate::deform_coeffs::DeformationSet;
use crate::error::{Error, Result};
use crate::jet_forms::{basis, basis_len, indices, JetLayout, JetScalar, LieForm, ETA};
use crate::lie_core::{StructureConstants, Tensor3};

/// Threshold on the normalized determinant of the constant block of Y.
pub const SINGULAR_DET: f64 = 1e-8;

/// Potentials A (1-form on A) and B (2-form on A').
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    pub a: LieForm,
    pub b: LieForm,
}

impl FieldConfig {
    pub fn new(a: LieForm, b: LieForm) -> Result<Self> {
        if a.degree() != 1 || b.degree() != 2 {
            return Err(Error::Invalid(format!("potentials of degree {} and {}", a.degree(), b.degree())));
        }
        Ok(FieldConfig { a, b })
    }

    pub fn layout(&self) -> &'static JetLayout {
        self.a.layout()
    }

    pub fn scale(&self, s: f64) -> FieldConfig {
        FieldConfig { a: self.a.scale(s), b: self.b.scale(s) }
    }

    pub fn base(&self) -> FieldConfig {
        FieldConfig { a: self.a.base(), b: self.b.base() }
    }

    /// `self + eps * (da, db)`.
    pub fn perturbed(&self, da: &LieForm, db: &LieForm) -> Result<FieldConfig> {
        Ok(FieldConfig { a: LieForm::with_tangent(&self.a, da)?, b: LieForm::with_tangent(&self.b, db)? })
    }
}

/// Which curl of B enters the strengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curl {
    /// H = dB.
    Plain,
    /// H = dB + j(A, B).
    Covariant,
}

impl Curl {
    /// Covariant whenever the set carries a mass or a nonzero j.
    pub fn for_set(ds: &DeformationSet) -> Curl {
        if ds.mass.is_zero() && ds.j.is_zero() {
            Curl::Plain
        } else {
            Curl::Covariant
        }
    }
}

/// Coefficient tensors in the shapes the form operations consume.
#[derive(Clone, Debug)]
pub struct Couplings {
    pub n: usize,
    pub n_prime: usize,
    /// `a^a_{bc}`.
    pub a: Tensor3,
    /// `b^a_{b'c}`.
    pub b: Tensor3,
    /// `b_b{}^{a'}{}_c` as `[a'][b][c]`.
    pub bt: Tensor3,
    /// `j^{a'}_{bc'}`.
    pub j: Tensor3,
    /// `k^{a'}_{b'c'}`.
    pub k: Tensor3,
    /// `e^{a'}_{bc}`.
    pub e: Tensor3,
    /// `m_{aa'}`.
    pub m: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub gp: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub gp_inv: DMatrix<f64>,
}

impl Couplings {
    pub fn new(ds: &DeformationSet) -> Self {
        let l = ds.lowered();
        Couplings {
            n: ds.n(),
            n_prime: ds.n_prime(),
            a: ds.a.clone(),
            b: ds.b.clone(),
            bt: l.b_t,
            j: ds.j.clone(),
            k: ds.k.clone(),
            e: ds.e.clone(),
            m: ds.mass.m.clone(),
            g: ds.space.inner_product.clone(),
            gp: ds.space_prime.inner_product.clone(),
            g_inv: ds.space.inverse().clone(),
            gp_inv: ds.space_prime.inverse().clone(),
        }
    }
}

/// F = dA + 1/2 a(A, A).
pub fn curvature_f(a: &LieForm, a_tensor: &Tensor3) -> Result<LieForm> {
    let mut f = a.d()?;
    let aa = a.wedge(a, a_tensor)?;
    let order = f.valid();
    f.axpy(0.5, &aa)?;
    f.set_valid(order);
    Ok(f)
}

/// H = dB + j(A, B).
pub fn covariant_curl_h(a: &LieForm, b: &LieForm, j_tensor: &Tensor3) -> Result<LieForm> {
    let mut h = b.d()?;
    let order = h.valid();
    h.axpy(1.0, &a.wedge(b, j_tensor)?)?;
    h.set_valid(order.min(a.valid()));
    Ok(h)
}

/// R = d omega + 1/2 [omega, omega].
pub fn connection_curvature(omega: &LieForm, c: &StructureConstants) -> Result<LieForm> {
    curvature_f(omega, &c.c)
}

/// Strength-side curl selected by `curl`.
pub fn curl_h(cfg: &FieldConfig, cp: &Couplings, curl: Curl) -> Result<LieForm> {
    match curl {
        Curl::Plain => cfg.b.d(),
        Curl::Covariant => covariant_curl_h(&cfg.a, &cfg.b, &cp.j),
    }
}

/// Y(P, Q) = (P - b(*Q, A), Q - bT(*P, A) - k(*Q, B)).
pub fn apply_y(cfg: &FieldConfig, cp: &Couplings, p: &LieForm, q: &LieForm) -> Result<(LieForm, LieForm)> {
    let sq = q.hodge();
    let sp = p.hodge();
    let mut yp = p.clone();
    yp.axpy(-1.0, &sq.wedge(&cfg.a, &cp.b)?)?;
    let mut yq = q.clone();
    yq.axpy(-1.0, &sp.wedge(&cfg.a, &cp.bt)?)?;
    yq.axpy(-1.0, &sq.wedge(&cfg.b, &cp.k)?)?;
    Ok((yp, yq))
}

/// Stack (P, Q) into one component vector: P first, then Q.
pub fn pack(p: &LieForm, q: &LieForm) -> Vec<JetScalar> {
    p.comps().iter().chain(q.comps().iter()).cloned().collect()
}

pub fn unpack(v: &[JetScalar], n: usize, n_prime: usize) -> Result<(LieForm, LieForm)> {
    let np = 6 * n;
    if v.len() != np + 4 * n_prime {
        return Err(Error::Dimension(format!("packed vector of length {}", v.len())));
    }
    let p = LieForm::from_fn(2, n, |a, i| v[a * 6 + i].clone());
    let q = LieForm::from_fn(3, n_prime, |a, i| v[np + a * 4 + i].clone());
    Ok((p, q))
}

/// Metric of the block pairing <P,P'>_g - <Q,Q'>_g' on packed vectors.
pub fn block_metric(cp: &Couplings) -> DMatrix<f64> {
    let dim = 6 * cp.n + 4 * cp.n_prime;
    let mut gm = DMatrix::zeros(dim, dim);
    for a in 0..cp.n {
        for b in 0..cp.n {
            for (i, &mask) in basis(2).iter().enumerate() {
                let eta: f64 = indices(mask).iter().map(|&x| ETA[x]).product();
                gm[(a * 6 + i, b * 6 + i)] = cp.g[(a, b)] * eta;
            }
        }
    }
    let off = 6 * cp.n;
    for a in 0..cp.n_prime {
        for b in 0..cp.n_prime {
            for (i, &mask) in basis(3).iter().enumerate() {
                let eta: f64 = indices(mask).iter().map(|&x| ETA[x]).product();
                gm[(off + a * 4 + i, off + b * 4 + i)] = -cp.gp[(a, b)] * eta;
            }
        }
    }
    gm
}

/// Y as a matrix-valued jet: one real matrix per Taylor slot.
#[derive(Clone, Debug)]
pub struct YOperator {
    pub dim: usize,
    pub n: usize,
    pub n_prime: usize,
    lay: &'static JetLayout,
    /// Matrices for monomials (eps-free part).
    pub slots: Vec<DMatrix<f64>>,
    /// Matrices for the eps part, if any field carries one.
    pub eps_slots: Option<Vec<DMatrix<f64>>>,
    pub valid: i32,
}

/// Build Y by applying it to constant unit vectors.
pub fn assemble_y(cfg: &FieldConfig, ds: &DeformationSet) -> Result<YOperator> {
    assemble_y_with(cfg, &Couplings::new(ds))
}

pub fn assemble_y_with(cfg: &FieldConfig, cp: &Couplings) -> Result<YOperator> {
    let lay = cfg.layout();
    let dim = 6 * cp.n + 4 * cp.n_prime;
    let nm = lay.len();
    let has_eps = cfg.a.comps().iter().chain(cfg.b.comps()).any(|c| c.has_eps());
    let mut slots = vec![DMatrix::zeros(dim, dim); nm];
    let mut eps_slots = if has_eps { Some(vec![DMatrix::zeros(dim, dim); nm]) } else { None };
    let zero = JetScalar::zero(lay);
    let one = JetScalar::constant(lay, 1.0);
    for col in 0..dim {
        let mut v = vec![zero.clone(); dim];
        v[col] = one.clone();
        let (p, q) = unpack(&v, cp.n, cp.n_prime)?;
        let (yp, yq) = apply_y(cfg, cp, &p, &q)?;
        for (row, jet) in pack(&yp, &yq).iter().enumerate() {
            let c = jet.coeffs();
            for s in 0..nm {
                slots[s][(row, col)] = c[s];
            }
            if let Some(es) = eps_slots.as_mut() {
                if jet.has_eps() {
                    for s in 0..nm {
                        es[s][(row, col)] = c[nm + s];
                    }
                }
            }
        }
    }
    let valid = cfg.a.valid().min(cfg.b.valid());
    Ok(YOperator { dim, n: cp.n, n_prime: cp.n_prime, lay, slots, eps_slots, valid })
}

impl YOperator {
    /// Determinant of the constant block with every row scaled to unit length.
    pub fn normalized_det(&self) -> f64 {
        let mut y0 = self.slots[0].clone();
        for mut row in y0.row_iter_mut() {
            let nrm = row.norm();
            if nrm > 0.0 {
                row /= nrm;
            }
        }
        y0.determinant()
    }

    /// Apply Y to a packed jet vector.
    pub fn apply(&self, x: &[JetScalar]) -> Vec<JetScalar> {
        let nm = self.lay.len();
        let x_has_eps = x.iter().any(|c| c.has_eps());
        let out_eps = x_has_eps || self.eps_slots.is_some();
        let xa = slot_vectors(x, nm, false);
        let xe = if x_has_eps { Some(slot_vectors(x, nm, true)) } else { None };
        let mut ra = vec![DVector::zeros(self.dim); nm];
        let mut re = vec![DVector::zeros(self.dim); nm];
        for &(i, j, k) in self.lay.products() {
            let (i, j, k) = (i as usize, j as usize, k as usize);
            ra[k] += &self.slots[i] * &xa[j];
            if let Some(xe) = &xe {
                re[k] += &self.slots[i] * &xe[j];
            }
            if let Some(es) = &self.eps_slots {
                re[k] += &es[i] * &xa[j];
            }
        }
        let valid = x.iter().map(|c| c.valid()).min().unwrap_or(i32::MAX).min(self.valid);
        from_slots(self.lay, &ra, if out_eps { Some(&re) } else { None }, valid)
    }
}

fn slot_vectors(x: &[JetScalar], nm: usize, eps: bool) -> Vec<DVector<f64>> {
    (0..nm)
        .map(|s| {
            DVector::from_iterator(
                x.len(),
                x.iter().map(|c| {
                    if eps {
                        if c.has_eps() {
                            c.coeffs()[nm + s]
                        } else {
                            0.0
                        }
                    } else {
                        c.coeffs()[s]
                    }
                }),
            )
        })
        .collect()
}

fn from_slots(
    lay: &'static JetLayout,
    ra: &[DVector<f64>],
    re: Option<&Vec<DVector<f64>>>,
    valid: i32,
) -> Vec<JetScalar> {
    let nm = lay.len();
    let dim = ra[0].len();
    (0..dim)
        .map(|r| {
            let mut c: Vec<f64> = (0..nm).map(|s| ra[s][r]).collect();
            if let Some(re) = re {
                c.extend((0..nm).map(|s| re[s][r]));
            }
            let mut j = JetScalar::from_coeffs(lay, c).expect("slot length");
            j.set_valid(valid);
            j
        })
        .collect()
}

/// Inverse of Y over the truncated ring: LU of the constant block plus
/// order-by-order recursion on the higher Taylor slots.
pub struct YInverse {
    y: YOperator,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    det: f64,
    /// For each target slot k: pairs (i, j) with slot_i * slot_j = slot_k.
    pairs: Vec<Vec<(usize, usize)>>,
}

pub fn invert_y(y: &YOperator) -> Result<YInverse> {
    let det = y.normalized_det();
    if det.is_nan() || det.abs() < SINGULAR_DET {
        return Err(Error::SingularY { det });
    }
    let lu = y.slots[0].clone().lu();
    let nm = y.lay.len();
    let mut pairs = vec![Vec::new(); nm];
    for &(i, j, k) in y.lay.products() {
        pairs[k as usize].push((i as usize, j as usize));
    }
    Ok(YInverse { y: y.clone(), lu, det, pairs })
}

impl YInverse {
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn operator(&self) -> &YOperator {
        &self.y
    }

    fn solve_slots(&self, rhs: &[DVector<f64>], known: Option<&[DVector<f64>]>) -> Vec<DVector<f64>> {
        // known: base solution feeding the eps-slot correction
        let nm = rhs.len();
        let mut x: Vec<DVector<f64>> = Vec::with_capacity(nm);
        for k in 0..nm {
            let mut r = rhs[k].clone();
            for &(i, j) in &self.pairs[k] {
                if i != 0 {
                    r -= &self.y.slots[i] * &x[j];
                }
                if let (Some(base), Some(es)) = (known, &self.y.eps_slots) {
                    r -= &es[i] * &base[j];
                }
            }
            x.push(self.lu.solve(&r).expect("LU of nonsingular block"));
        }
        x
    }

    /// Solve Y x = rhs.
    pub fn apply(&self, rhs: &[JetScalar]) -> Vec<JetScalar> {
        let nm = self.y.lay.len();
        let has_eps = rhs.iter().any(|c| c.has_eps()) || self.y.eps_slots.is_some();
        let ra = slot_vectors(rhs, nm, false);
        let xa = self.solve_slots(&ra, None);
        let xe = if has_eps {
            let re = slot_vectors(rhs, nm, true);
            Some(self.solve_slots(&re, Some(&xa)))
        } else {
            None
        };
        let valid = rhs.iter().map(|c| c.valid()).min().unwrap_or(i32::MAX).min(self.y.valid);
        from_slots(self.y.lay, &xa, xe.as_ref(), valid)
    }

    /// Max over unit vectors of |Y^{-1} Y e - e| and |Y Y^{-1} e - e| at valid order.
    pub fn round_trip_residual(&self) -> f64 {
        let lay = self.y.lay;
        let dim = self.y.dim;
        let mut worst = 0.0f64;
        for col in 0..dim {
            let mut e = vec![JetScalar::zero(lay); dim];
            e[col] = JetScalar::constant(lay, 1.0);
            let left = self.apply(&self.y.apply(&e));
            let right = self.y.apply(&self.apply(&e));
            for r in 0..dim {
                worst = worst.max((&left[r] - &e[r]).max_abs_valid());
                worst = worst.max((&right[r] - &e[r]).max_abs_valid());
            }
        }
        worst
    }
}

/// Nonlinear field strengths and their Hodge duals.
#[derive(Clone, Debug)]
pub struct StrengthPair {
    pub p: LieForm,
    pub q: LieForm,
    pub star_p: LieForm,
    pub star_q: LieForm,
    /// Curvature and curl the strengths were solved from.
    pub f: LieForm,
    pub h: LieForm,
}

impl StrengthPair {
    pub fn from_pq(p: LieForm, q: LieForm, f: LieForm, h: LieForm) -> Self {
        let star_p = p.hodge();
        let star_q = q.hodge();
        StrengthPair { p, q, star_p, star_q, f, h }
    }
}

pub fn compute_strengths(cfg: &FieldConfig, ds: &DeformationSet, curl: Curl) -> Result<StrengthPair> {
    compute_strengths_with(cfg, &Couplings::new(ds), curl)
}

pub fn compute_strengths_with(cfg: &FieldConfig, cp: &Couplings, curl: Curl) -> Result<StrengthPair> {
    let f = curvature_f(&cfg.a, &cp.a)?;
    let h = curl_h(cfg, cp, curl)?;
    solve_strengths(cfg, cp, f, h)
}

/// Solve Y(A, B)(P, Q) = (f, h) for given right-hand sides.
pub fn solve_strengths(cfg: &FieldConfig, cp: &Couplings, f: LieForm, h: LieForm) -> Result<StrengthPair> {
    let order = f.valid().min(h.valid());
    let y = assemble_y_with(cfg, cp)?;
    let inv = invert_y(&y)?;
    let x = inv.apply(&pack(&f, &h));
    let (mut p, mut q) = unpack(&x, cp.n, cp.n_prime)?;
    p.set_valid(order);
    q.set_valid(order);
    Ok(StrengthPair::from_pq(p, q, f, h))
}

/// Residuals of the defining relations Y(P, Q) = (F, H).
pub fn defining_residuals(cfg: &FieldConfig, cp: &Couplings, s: &StrengthPair) -> Result<(f64, f64)> {
    let (yp, yq) = apply_y(cfg, cp, &s.p, &s.q)?;
    Ok((yp.sub(&s.f)?.max_abs_valid(), yq.sub(&s.h)?.max_abs_valid()))
}

/// Number of components of a packed (P, Q) vector.
pub fn packed_len(n: usize, n_prime: usize) -> usize {
    basis_len(2) * n + basis_len(3) * n_prime
}
