//! Internal vector spaces, Lie brackets, inner products, mass tensors and the
//! adjoint-map family built on them. Everything is explicit basis components.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nondegeneracy threshold for inner products, relative to the entry scale.
pub const NONDEGENERATE_TOL: f64 = 1e-10;

/// Dense rank-3 array `t[i][j][k]`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 { dims, data: vec![0.0; dims[0] * dims[1] * dims[2]] }
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(dims);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn from_vec(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::Dimension(format!(
                "tensor of dims {:?} needs {} entries, got {}",
                dims,
                dims[0] * dims[1] * dims[2],
                data.len()
            )));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dims;
        self.data[(i * d[1] + j) * d[2] + k] = v;
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        Tensor3 { dims: self.dims, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, o: &Tensor3) -> Result<Tensor3> {
        if self.dims != o.dims {
            return Err(Error::Dimension(format!("{:?} + {:?}", self.dims, o.dims)));
        }
        Ok(Tensor3 { dims: self.dims, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// `out^i = t[i][j][k] u^j v^k`.
    pub fn contract(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[0]];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, uj) in u.iter().enumerate() {
                if *uj == 0.0 {
                    continue;
                }
                for (k, vk) in v.iter().enumerate() {
                    *o += self.get(i, j, k) * uj * vk;
                }
            }
        }
        out
    }

    /// Permute slots: `out[p(i,j,k)] = self[i][j][k]` where `perm[s]` names the
    /// output slot receiving input slot `s`.
    pub fn permuted(&self, perm: [usize; 3]) -> Tensor3 {
        let mut dims = [0; 3];
        for s in 0..3 {
            dims[perm[s]] = self.dims[s];
        }
        let mut out = Tensor3::zeros(dims);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let mut idx = [0; 3];
                    idx[perm[0]] = i;
                    idx[perm[1]] = j;
                    idx[perm[2]] = k;
                    out.set(idx[0], idx[1], idx[2], self.get(i, j, k));
                }
            }
        }
        out
    }

    /// Apply a matrix on the first slot: `out[a][j][k] = m[a][i] t[i][j][k]`.
    pub fn map_first(&self, m: &DMatrix<f64>) -> Tensor3 {
        let mut out = Tensor3::zeros([m.nrows(), self.dims[1], self.dims[2]]);
        for a in 0..m.nrows() {
            for i in 0..self.dims[0] {
                let w = m[(a, i)];
                if w == 0.0 {
                    continue;
                }
                for j in 0..self.dims[1] {
                    for k in 0..self.dims[2] {
                        let v = out.get(a, j, k) + w * self.get(i, j, k);
                        out.set(a, j, k, v);
                    }
                }
            }
        }
        out
    }
}

/// Levi-Civita symbol on three indices.
pub fn eps3(a: usize, b: usize, c: usize) -> f64 {
    if a == b || b == c || a == c {
        return 0.0;
    }
    let perm = [a, b, c];
    let mut inv = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
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

/// An internal vector space with a nondegenerate symmetric inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalSpace {
    pub dim: usize,
    pub inner_product: DMatrix<f64>,
    pub positive_definite: bool,
    inverse: DMatrix<f64>,
}

impl InternalSpace {
    pub fn new(inner_product: DMatrix<f64>) -> Result<Self> {
        let n = inner_product.nrows();
        if inner_product.ncols() != n {
            return Err(Error::Dimension("inner product must be square".into()));
        }
        if n == 0 {
            return Ok(InternalSpace {
                dim: 0,
                inverse: inner_product.clone(),
                inner_product,
                positive_definite: true,
            });
        }
        let asym = (&inner_product - inner_product.transpose()).amax();
        if asym > 1e-14 * inner_product.amax().max(1.0) {
            return Err(Error::Invalid("inner product not symmetric".into()));
        }
        let scale = inner_product.amax().max(1e-300);
        let det = inner_product.determinant();
        if det.abs() <= NONDEGENERATE_TOL * scale.powi(n as i32) {
            return Err(Error::Invalid(format!("degenerate inner product (det {det:.3e})")));
        }
        let inverse =
            inner_product.clone().try_inverse().ok_or_else(|| Error::Invalid("inner product not invertible".into()))?;
        let positive_definite = inner_product.clone().symmetric_eigenvalues().iter().all(|&l| l > 0.0);
        Ok(InternalSpace { dim: n, inner_product, positive_definite, inverse })
    }

    /// Space with the identity inner product.
    pub fn euclidean(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is nondegenerate")
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    /// Lower the first index: `out_{a..} = g_{ab} t^b..`.
    pub fn lower_first(&self, t: &Tensor3) -> Tensor3 {
        t.map_first(&self.inner_product)
    }

    /// Raise the first index.
    pub fn raise_first(&self, t: &Tensor3) -> Tensor3 {
        t.map_first(&self.inverse)
    }
}

/// Lie bracket components, `[e_b, e_c] = c^a_{bc} e_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub c: Tensor3,
}

impl StructureConstants {
    pub fn new(c: Tensor3) -> Result<Self> {
        let [n0, n1, n2] = c.dims();
        if n0 != n1 || n1 != n2 {
            return Err(Error::Dimension(format!("structure constants of dims {:?}", c.dims())));
        }
        for a in 0..n0 {
            for b in 0..n0 {
                for d in 0..n0 {
                    if (c.get(a, b, d) + c.get(a, d, b)).abs() > 1e-14 {
                        return Err(Error::Invalid(format!("structure constants not antisymmetric at ({a},{b},{d})")));
                    }
                }
            }
        }
        Ok(StructureConstants { c })
    }

    pub fn dim(&self) -> usize {
        self.c.dims()[0]
    }

    pub fn su2() -> Self {
        StructureConstants { c: Tensor3::from_fn([3, 3, 3], eps3) }
    }

    /// su(1,1) with [e1,e2] = -e3, [e2,e3] = e1, [e3,e1] = e2.
    pub fn su11() -> Self {
        let mut c = Tensor3::from_fn([3, 3, 3], eps3);
        for (b, d) in [(0, 1), (1, 0)] {
            c.set(2, b, d, -c.get(2, b, d));
        }
        StructureConstants { c }
    }

    pub fn abelian(n: usize) -> Self {
        StructureConstants { c: Tensor3::zeros([n, n, n]) }
    }

    pub fn scaled(&self, s: f64) -> Self {
        StructureConstants { c: self.c.scale(s) }
    }

    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        self.c.contract(u, v)
    }

    /// Matrix of `ad(v) = [v, .]`.
    pub fn ad(&self, v: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |a, c| (0..n).map(|b| self.c.get(a, b, c) * v[b]).sum())
    }
}

/// Maximum over all free indices of the cyclic Jacobi sum
/// `c^e_{bc} c^a_{ed} + c^e_{cd} c^a_{eb} + c^e_{db} c^a_{ec}`.
pub fn jacobi_residual(c: &StructureConstants) -> Result<f64> {
    let n = c.dim();
    let t = &c.c;
    let mut r = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let mut s = 0.0;
                    for e in 0..n {
                        s += t.get(e, b, cc) * t.get(a, e, d)
                            + t.get(e, cc, d) * t.get(a, e, b)
                            + t.get(e, d, b) * t.get(a, e, cc);
                    }
                    r = r.max(s.abs());
                }
            }
        }
    }
    Ok(r)
}

/// `k_{ab} = -c^c_{ad} c^d_{bc}`.
pub fn killing_metric(c: &StructureConstants) -> DMatrix<f64> {
    let n = c.dim();
    let t = &c.c;
    let mut k = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mut s = 0.0;
            for cc in 0..n {
                for d in 0..n {
                    s -= t.get(cc, a, d) * t.get(d, b, cc);
                }
            }
            k[(a, b)] = s;
            k[(b, a)] = s;
        }
    }
    k
}

/// Mass tensor `m_{aa'}` with its induced maps between the two spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct MassTensor {
    pub m: DMatrix<f64>,
}

impl MassTensor {
    pub fn new(m: DMatrix<f64>) -> Self {
        MassTensor { m }
    }

    pub fn zero(n: usize, n_prime: usize) -> Self {
        MassTensor { m: DMatrix::zeros(n, n_prime) }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|&x| x == 0.0)
    }

    /// `m_A : A -> A'`, components `m^{a'}_b = g'^{a'c'} m_{b c'}`.
    pub fn m_a(&self, sp: &InternalSpace) -> DMatrix<f64> {
        sp.inverse() * self.m.transpose()
    }

    /// `m_A' : A' -> A`, components `m^a_{b'} = g^{ac} m_{c b'}`.
    pub fn m_a_prime(&self, s: &InternalSpace) -> DMatrix<f64> {
        s.inverse() * &self.m
    }
}

/// Projectors for the massless/massive decomposition of both spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSplit {
    pub p0: DMatrix<f64>,
    pub pm: DMatrix<f64>,
    pub p0_prime: DMatrix<f64>,
    pub pm_prime: DMatrix<f64>,
    pub massive_dim: usize,
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-10 * smax.max(1.0)).count()
}

/// Orthonormal (Euclidean) bases for the column space and kernel of `m`.
fn range_and_kernel(m: &DMatrix<f64>) -> (Vec<nalgebra::DVector<f64>>, Vec<nalgebra::DVector<f64>>) {
    let split = |sym: DMatrix<f64>| {
        let eig = sym.symmetric_eigen();
        let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let mut big = Vec::new();
        let mut small = Vec::new();
        for i in 0..eig.eigenvalues.len() {
            let v = eig.eigenvectors.column(i).into_owned();
            if eig.eigenvalues[i] > 1e-20 * lmax.max(1.0) {
                big.push(v);
            } else {
                small.push(v);
            }
        }
        (big, small)
    };
    let (range, _) = split(m * m.transpose());
    let (_, kernel) = split(m.transpose() * m);
    (range, kernel)
}

fn oblique_projector(
    dim: usize,
    onto: &[nalgebra::DVector<f64>],
    along: &[nalgebra::DVector<f64>],
) -> Result<DMatrix<f64>> {
    if dim == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if onto.len() + along.len() != dim {
        return Err(Error::Invalid("mass subspaces do not span the space".into()));
    }
    let mut basis = DMatrix::zeros(dim, dim);
    for (i, v) in onto.iter().chain(along).enumerate() {
        basis.set_column(i, v);
    }
    let inv = basis.clone().try_inverse().ok_or_else(|| Error::Invalid("mass subspaces overlap".into()))?;
    let mut sel = DMatrix::zeros(dim, dim);
    for i in 0..onto.len() {
        sel[(i, i)] = 1.0;
    }
    Ok(&basis * sel * inv)
}

/// Split A = ker(m_A) + im(m_A') and A' = ker(m_A') + im(m_A).
pub fn decompose_mass_subspaces(m: &MassTensor, s: &InternalSpace, sp: &InternalSpace) -> Result<SubspaceSplit> {
    let (n, np) = (s.dim, sp.dim);
    if m.m.shape() != (n, np) {
        return Err(Error::Dimension(format!("mass tensor {:?} for spaces ({n}, {np})", m.m.shape())));
    }
    let ma = m.m_a(sp);
    let map = m.m_a_prime(s);
    let k = numerical_rank(&ma);
    if numerical_rank(&map) != k {
        return Err(Error::Invalid("mass maps have different ranks".into()));
    }
    let (range_map, _) = range_and_kernel(&map);
    let (_, ker_ma) = range_and_kernel(&ma);
    let (range_ma, _) = range_and_kernel(&ma);
    let (_, ker_map) = range_and_kernel(&map);
    let pm = oblique_projector(n, &range_map, &ker_ma)?;
    let pm_prime = oblique_projector(np, &range_ma, &ker_map)?;
    let p0 = DMatrix::identity(n, n) - &pm;
    let p0_prime = DMatrix::identity(np, np) - &pm_prime;
    Ok(SubspaceSplit { p0, pm, p0_prime, pm_prime, massive_dim: k })
}

/// Linear map `h : A' -> A` (an n x n' matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapH {
    pub h: DMatrix<f64>,
}

impl LinearMapH {
    pub fn new(h: DMatrix<f64>) -> Self {
        LinearMapH { h }
    }

    /// Adjoint `h^T : A -> A'` with respect to the two inner products.
    pub fn transpose(&self, s: &InternalSpace, sp: &InternalSpace) -> DMatrix<f64> {
        sp.inverse() * self.h.transpose() * &s.inner_product
    }

    /// Max-abs of `(h u', v)_A - (u', h^T v)_A'` over basis pairs.
    pub fn adjoint_residual(&self, s: &InternalSpace, sp: &InternalSpace) -> f64 {
        let ht = self.transpose(s, sp);
        let lhs = self.h.transpose() * &s.inner_product;
        let rhs = &sp.inner_product * &ht;
        (lhs - rhs).amax()
    }
}

/// Max-abs of `[h u', h v']_A - h([u', v']_A')` over basis pairs.
pub fn homomorphism_residual(h: &LinearMapH, c_prime: &StructureConstants, c: &StructureConstants) -> Result<f64> {
    let (n, np) = h.h.shape();
    if c.dim() != n || c_prime.dim() != np {
        return Err(Error::Dimension(format!("h is {n}x{np}, algebras have dims {} and {}", c.dim(), c_prime.dim())));
    }
    let mut r = 0.0f64;
    for u in 0..np {
        for v in 0..np {
            let hu: Vec<f64> = h.h.column(u).iter().cloned().collect();
            let hv: Vec<f64> = h.h.column(v).iter().cloned().collect();
            let lhs = c.bracket(&hu, &hv);
            let br: Vec<f64> = (0..np).map(|a| c_prime.c.get(a, u, v)).collect();
            for a in 0..n {
                let rhs: f64 = (0..np).map(|b| h.h[(a, b)] * br[b]).sum();
                r = r.max((lhs[a] - rhs).abs());
            }
        }
    }
    Ok(r)
}

/// Max-abs of `rho(w)[u,v] - [rho(w)u, v] - [u, rho(w)v]` over basis triples.
/// `rho[w]` is the endomorphism attached to basis vector `w`.
pub fn derivation_residual(rho: &[DMatrix<f64>], c: &StructureConstants) -> Result<f64> {
    let n = c.dim();
    let mut r = 0.0f64;
    for m in rho {
        if m.shape() != (n, n) {
            return Err(Error::Dimension(format!("rho matrix {:?} on dim {n}", m.shape())));
        }
        for u in 0..n {
            for v in 0..n {
                let br: Vec<f64> = (0..n).map(|a| c.c.get(a, u, v)).collect();
                for a in 0..n {
                    let mut s: f64 = (0..n).map(|b| m[(a, b)] * br[b]).sum();
                    for b in 0..n {
                        // [rho u, v] + [u, rho v]
                        s -= c.c.get(a, b, v) * m[(b, u)] + c.c.get(a, u, b) * m[(b, v)];
                    }
                    r = r.max(s.abs());
                }
            }
        }
    }
    Ok(r)
}

/// Adjoint maps of both algebras and of the map h, with their metric adjoints.
#[derive(Clone, Debug)]
pub struct AdjointSuite {
    pub c: StructureConstants,
    pub c_prime: StructureConstants,
    pub space: InternalSpace,
    pub space_prime: InternalSpace,
    pub h: LinearMapH,
}

impl AdjointSuite {
    pub fn new(
        c: StructureConstants,
        c_prime: StructureConstants,
        space: InternalSpace,
        space_prime: InternalSpace,
        h: LinearMapH,
    ) -> Result<Self> {
        if c.dim() != space.dim || c_prime.dim() != space_prime.dim || h.h.shape() != (space.dim, space_prime.dim) {
            return Err(Error::Dimension("adjoint suite inputs".into()));
        }
        Ok(AdjointSuite { c, c_prime, space, space_prime, h })
    }

    fn metric_adjoint(m: &DMatrix<f64>, g_out: &InternalSpace, g_in: &InternalSpace) -> DMatrix<f64> {
        // m : in -> out; adjoint : out -> in
        g_in.inverse() * m.transpose() * &g_out.inner_product
    }

    pub fn ad(&self, v: &[f64]) -> DMatrix<f64> {
        self.c.ad(v)
    }

    pub fn ad_prime(&self, v: &[f64]) -> DMatrix<f64> {
        self.c_prime.ad(v)
    }

    pub fn ad_t(&self, v: &[f64]) -> DMatrix<f64> {
        Self::metric_adjoint(&self.ad(v), &self.space, &self.space)
    }

    pub fn ad_prime_t(&self, v: &[f64]) -> DMatrix<f64> {
        Self::metric_adjoint(&self.ad_prime(v), &self.space_prime, &self.space_prime)
    }

    /// `ad*(v) u = ad^T(u) v`.
    pub fn ad_star(&self, v: &[f64]) -> DMatrix<f64> {
        let n = self.space.dim;
        let mut out = DMatrix::zeros(n, n);
        for u in 0..n {
            let e = unit(n, u);
            out.set_column(u, &(self.ad_t(&e) * nalgebra::DVector::from_column_slice(v)));
        }
        out
    }

    pub fn ad_prime_star(&self, v: &[f64]) -> DMatrix<f64> {
        let n = self.space_prime.dim;
        let mut out = DMatrix::zeros(n, n);
        for u in 0..n {
            let e = unit(n, u);
            out.set_column(u, &(self.ad_prime_t(&e) * nalgebra::DVector::from_column_slice(v)));
        }
        out
    }

    /// `ad_{h,A}(v) u' = [v, h(u')]`, a map A' -> A.
    pub fn ad_h(&self, v: &[f64]) -> DMatrix<f64> {
        self.ad(v) * &self.h.h
    }

    /// `ad_{h,A'}(v') u = [v', h^T(u)]'`, a map A -> A'.
    pub fn ad_h_prime(&self, v: &[f64]) -> DMatrix<f64> {
        self.ad_prime(v) * self.h.transpose(&self.space, &self.space_prime)
    }

    /// `ad*_{h,A}(u) v = -h^T(ad*(u) v)`, a map A -> A'.
    pub fn ad_h_star(&self, u: &[f64]) -> DMatrix<f64> {
        -(self.h.transpose(&self.space, &self.space_prime) * self.ad_star(u))
    }

    /// `ad*_{h,A'}(u') v' = -h(ad'*(u') v')`, a map A' -> A.
    pub fn ad_h_prime_star(&self, u: &[f64]) -> DMatrix<f64> {
        -(&self.h.h * self.ad_prime_star(u))
    }

    /// Max-abs of `ad*_{h,A}(u) h + ad'*(h^T u)` over basis vectors u.
    pub fn adrelation_residual(&self) -> f64 {
        let n = self.space.dim;
        let ht = self.h.transpose(&self.space, &self.space_prime);
        let mut r = 0.0f64;
        for u in 0..n {
            let e = unit(n, u);
            let htu: Vec<f64> = (&ht * nalgebra::DVector::from_column_slice(&e)).iter().cloned().collect();
            let lhs = self.ad_h_star(&e) * &self.h.h;
            let rhs = -self.ad_prime_star(&htu);
            r = r.max((lhs - rhs).amax());
        }
        r
    }

    /// Max-abs of `ad*(v) - ad(v)` over basis vectors; zero iff the inner product is invariant.
    pub fn invariance_residual(&self) -> f64 {
        let n = self.space.dim;
        (0..n)
            .map(|v| {
                let e = unit(n, v);
                (self.ad_star(&e) - self.ad(&e)).amax()
            })
            .fold(0.0, f64::max)
    }
}

pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps3_values() {
        assert_eq!(eps3(0, 1, 2), 1.0);
        assert_eq!(eps3(1, 0, 2), -1.0);
        assert_eq!(eps3(2, 0, 1), 1.0);
        assert_eq!(eps3(0, 0, 1), 0.0);
    }

    #[test]
    fn su11_is_lie() {
        assert!(jacobi_residual(&StructureConstants::su11()).unwrap() < 1e-15);
    }

    #[test]
    fn permuted_roundtrip() {
        let t = Tensor3::from_fn([2, 3, 4], |i, j, k| (i * 100 + j * 10 + k) as f64);
        let p = t.permuted([2, 0, 1]);
        assert_eq!(p.dims(), [3, 4, 2]);
        assert_eq!(p.get(1, 3, 0), t.get(0, 1, 3));
    }
}
