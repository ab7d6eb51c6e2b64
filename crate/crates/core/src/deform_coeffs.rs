//! First-order deformation coefficients (a, b, j, k, e, m), their algebraic
//! consistency relations, and constructors for the named families.
//!
//! Storage: `a[a][b][c] = a^a_{bc}`, `b[a][b'][c] = b^a_{b'c}`,
//! `j[a'][b][c'] = j^{a'}_{bc'}`, `k[a'][b'][c'] = k^{a'}_{b'c'}`,
//! `e[a'][b][c] = e^{a'}_{bc}`, `mass.m[a][a'] = m_{aa'}`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{
    decompose_mass_subspaces, eps3, homomorphism_residual, killing_metric, InternalSpace, LinearMapH, MassTensor,
    StructureConstants, SubspaceSplit, Tensor3,
};

/// Default absolute tolerance for relation residuals.
pub const RELATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationSet {
    pub a: Tensor3,
    pub b: Tensor3,
    pub j: Tensor3,
    pub k: Tensor3,
    pub e: Tensor3,
    pub mass: MassTensor,
    pub space: InternalSpace,
    pub space_prime: InternalSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RelationResidual {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConstraintReport {
    pub relations: Vec<RelationResidual>,
    pub pass: bool,
    pub tolerance: f64,
}

impl ConstraintReport {
    fn from_pairs(pairs: Vec<(&str, f64)>, tol: f64) -> Self {
        let relations: Vec<RelationResidual> = pairs
            .into_iter()
            .map(|(n, r)| RelationResidual { name: n.to_string(), residual: r, pass: r < tol })
            .collect();
        let pass = relations.iter().all(|r| r.pass);
        ConstraintReport { relations, pass, tolerance: tol }
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Max-abs of a closure over a 4-index box.
fn max4(d: [usize; 4], mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> f64 {
    let mut r = 0.0f64;
    for i in 0..d[0] {
        for j in 0..d[1] {
            for k in 0..d[2] {
                for l in 0..d[3] {
                    r = r.max(f(i, j, k, l).abs());
                }
            }
        }
    }
    r
}

fn max3(d: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> f64 {
    max4([d[0], d[1], d[2], 1], |i, j, k, _| f(i, j, k))
}

/// Lowered and mixed-index versions of the coefficient tensors.
#[derive(Clone, Debug)]
pub struct Lowered {
    pub a: Tensor3,
    pub b: Tensor3,
    pub j: Tensor3,
    pub k: Tensor3,
    pub e: Tensor3,
    /// `m_a^{a'}` as `[a][a']`.
    pub m_up_prime: DMatrix<f64>,
    /// `m_{a'}^a` as `[a'][a]`.
    pub m_up: DMatrix<f64>,
    /// `b^{a b'}_c` as `[a][b'][c]`.
    pub b_raised: Tensor3,
    /// `b_b{}^{a'}{}_c` as `[a'][b][c]`, the transposed coupling.
    pub b_t: Tensor3,
}

impl DeformationSet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: Tensor3,
        b: Tensor3,
        j: Tensor3,
        k: Tensor3,
        e: Tensor3,
        mass: MassTensor,
        space: InternalSpace,
        space_prime: InternalSpace,
    ) -> Result<Self> {
        let (n, np) = (space.dim, space_prime.dim);
        let want = [
            ("a", a.dims(), [n, n, n]),
            ("b", b.dims(), [n, np, n]),
            ("j", j.dims(), [np, n, np]),
            ("k", k.dims(), [np, np, np]),
            ("e", e.dims(), [np, n, n]),
        ];
        for (name, got, exp) in want {
            if got != exp {
                return Err(Error::Dimension(format!("{name} has dims {got:?}, expected {exp:?}")));
            }
        }
        if mass.m.shape() != (n, np) {
            return Err(Error::Dimension(format!("mass tensor {:?}, expected ({n}, {np})", mass.m.shape())));
        }
        let ds = DeformationSet { a, b, j, k, e, mass, space, space_prime };
        let low = ds.lowered();
        let asym = max3([n, n, n], |x, y, z| low.a.get(x, y, z) + low.a.get(x, z, y));
        if asym > 1e-12 {
            return Err(Error::Invalid(format!("a not antisymmetric in its lower indices ({asym:.3e})")));
        }
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.space.dim
    }

    pub fn n_prime(&self) -> usize {
        self.space_prime.dim
    }

    pub fn lowered(&self) -> Lowered {
        let (n, np) = (self.n(), self.n_prime());
        let gpi = self.space_prime.inverse();
        let m = &self.mass.m;
        let m_up_prime = m * gpi; // [a][a'] = m_{a x'} g'^{x' a'}
        let m_up = (self.space.inverse() * m).transpose(); // [a'][a]
        let b_raised =
            Tensor3::from_fn([n, np, n], |a, bp, c| (0..np).map(|y| gpi[(bp, y)] * self.b.get(a, y, c)).sum());
        let b_low = self.space.lower_first(&self.b);
        // b_b^{a'}_c = g'^{a'e'} b_{b e' c}
        let b_t = Tensor3::from_fn([np, n, n], |ap, bb, c| (0..np).map(|x| gpi[(ap, x)] * b_low.get(bb, x, c)).sum());
        Lowered {
            a: self.space.lower_first(&self.a),
            b: b_low,
            j: self.space_prime.lower_first(&self.j),
            k: self.space_prime.lower_first(&self.k),
            e: self.space_prime.lower_first(&self.e),
            m_up_prime,
            m_up,
            b_raised,
            b_t,
        }
    }
}

fn tensor_su2(s: f64) -> Tensor3 {
    Tensor3::from_fn([3, 3, 3], |a, b, c| s * eps3(a, b, c))
}

/// su(2) family with a = eps, b = k = lambda eps, mass = m I.
///
/// In the massive case j = eps and lambda must equal 1/m. In the massless case
/// the linear relation between k and j forces j = 0.
pub fn family_su2(mass_m: f64, lambda: f64) -> Result<DeformationSet> {
    if mass_m != 0.0 && (lambda - 1.0 / mass_m).abs() > 1e-12 {
        return Err(Error::Precondition {
            condition: "massive coupling".into(),
            detail: format!("lambda = {lambda} but 1/m = {}", 1.0 / mass_m),
        });
    }
    let j = if mass_m != 0.0 { tensor_su2(1.0) } else { Tensor3::zeros([3, 3, 3]) };
    DeformationSet::new(
        tensor_su2(1.0),
        tensor_su2(lambda),
        j,
        tensor_su2(lambda),
        Tensor3::zeros([3, 3, 3]),
        MassTensor::new(DMatrix::identity(3, 3) * mass_m),
        InternalSpace::euclidean(3),
        InternalSpace::euclidean(3),
    )
}

/// su(2) coupled to the solvable algebra U(1) x| U(1)^2 on A'.
pub fn family_solvable(v: [f64; 3], w: [f64; 3], cmap: [[f64; 3]; 3]) -> Result<DeformationSet> {
    for b in 0..3 {
        let left: f64 = (0..3).map(|a| cmap[a][b] * v[a]).sum();
        let right: f64 = (0..3).map(|bb| cmap[b][bb] * v[bb]).sum();
        if left.abs() > 1e-14 || right.abs() > 1e-14 {
            return Err(Error::Precondition {
                condition: "solvable map annihilates v".into(),
                detail: format!("c^a_b v_a = {left}, c^b_c v^c = {right} at index {b}"),
            });
        }
    }
    let k = Tensor3::from_fn([3, 3, 3], |a, b, c| 0.5 * (cmap[a][b] * v[c] - cmap[a][c] * v[b]));
    let b = Tensor3::from_fn([3, 3, 3], |a, bp, c| (0..3).map(|d| eps3(a, d, c) * w[d]).sum::<f64>() * v[bp]);
    DeformationSet::new(
        tensor_su2(1.0),
        b,
        Tensor3::zeros([3, 3, 3]),
        k,
        Tensor3::zeros([3, 3, 3]),
        MassTensor::zero(3, 3),
        InternalSpace::euclidean(3),
        InternalSpace::euclidean(3),
    )
}

/// Parity-odd family with only e nonzero.
pub fn family_e_only(e: Tensor3) -> Result<DeformationSet> {
    let [np, n, n2] = e.dims();
    if n != n2 {
        return Err(Error::Dimension(format!("e has dims {:?}", e.dims())));
    }
    let asym = max3([np, n, n], |a, b, c| e.get(a, b, c) - e.get(a, c, b));
    if asym > 1e-14 {
        return Err(Error::Invalid(format!("e not symmetric in its A-indices ({asym:.3e})")));
    }
    DeformationSet::new(
        Tensor3::zeros([n, n, n]),
        Tensor3::zeros([n, np, n]),
        Tensor3::zeros([np, n, np]),
        Tensor3::zeros([np, np, np]),
        e,
        MassTensor::zero(n, np),
        InternalSpace::euclidean(n),
        InternalSpace::euclidean(np),
    )
}

/// Input for the general massive/massless family.
///
/// A = A_m + A_0 and A' = A'_m + A'_0, massive blocks first. The A'_m bracket
/// is transported from A_m through the mass map.
#[derive(Clone, Debug)]
pub struct GeneralFamilySpec {
    /// Bracket on the massive part A_m.
    pub massive: StructureConstants,
    /// Mass block m_{aa'} on A_m x A'_m (invertible, square).
    pub mass_block: DMatrix<f64>,
    /// Bracket on the massless part A_0.
    pub massless: StructureConstants,
    /// Bracket on the massless part A'_0.
    pub massless_prime: StructureConstants,
    /// Homomorphism A'_0 -> A_0.
    pub h0: DMatrix<f64>,
}

fn precondition(condition: &str, detail: String) -> Error {
    Error::Precondition { condition: condition.into(), detail }
}

fn block_sum(x: &StructureConstants, y: &StructureConstants) -> Tensor3 {
    let (kx, ky) = (x.dim(), y.dim());
    let n = kx + ky;
    Tensor3::from_fn([n, n, n], |a, b, c| {
        if a < kx && b < kx && c < kx {
            x.c.get(a, b, c)
        } else if a >= kx && b >= kx && c >= kx {
            y.c.get(a - kx, b - kx, c - kx)
        } else {
            0.0
        }
    })
}

/// Assemble the general family and its mass split. Identity inner products.
pub fn family_general(spec: &GeneralFamilySpec) -> Result<(DeformationSet, SubspaceSplit)> {
    let km = spec.massive.dim();
    let n0 = spec.massless.dim();
    let n0p = spec.massless_prime.dim();
    if spec.mass_block.shape() != (km, km) {
        return Err(Error::Dimension(format!("mass block {:?} for massive dim {km}", spec.mass_block.shape())));
    }
    if spec.h0.shape() != (n0, n0p) {
        return Err(Error::Dimension(format!("h0 {:?}, expected ({n0}, {n0p})", spec.h0.shape())));
    }
    if km > 0 && spec.mass_block.determinant().abs() < 1e-10 {
        return Err(precondition("massive isomorphism", "mass block is singular".into()));
    }
    if km > 0 {
        // identity metrics on both sides: the transported bracket stays
        // metric-compatible only for a conformal mass block
        let mmt = &spec.mass_block * spec.mass_block.transpose();
        let s2 = mmt.trace() / km as f64;
        let dev = (mmt - DMatrix::identity(km, km) * s2).amax();
        if dev > 1e-12 * s2.max(1.0) {
            return Err(precondition(
                "massive isomorphism",
                format!("mass block is not conformal (deviation {dev:.3e})"),
            ));
        }
    }
    for (name, c) in [("massless A", &spec.massless), ("massless A'", &spec.massless_prime)] {
        if c.dim() > 0 && killing_metric(c).determinant().abs() < 1e-10 {
            return Err(precondition("massless semisimple", format!("{name} has degenerate Killing form")));
        }
    }
    let hom = homomorphism_residual(&LinearMapH::new(spec.h0.clone()), &spec.massless_prime, &spec.massless)?;
    if hom > 1e-12 {
        return Err(precondition("massless homomorphism", format!("residual {hom:.3e}")));
    }
    // m_A on the massive block, identity metrics: components m^{a'}_a = m_{a a'}
    let ma = spec.mass_block.transpose();
    let ma_inv = ma.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(km, km));
    let massive_prime = Tensor3::from_fn([km, km, km], |ap, bp, cp| {
        let mut s = 0.0;
        for x in 0..km {
            for y in 0..km {
                for z in 0..km {
                    s += ma[(ap, x)] * spec.massive.c.get(x, y, z) * ma_inv[(y, bp)] * ma_inv[(z, cp)];
                }
            }
        }
        s
    });
    let massive_prime = StructureConstants::new(massive_prime)?;
    let n = km + n0;
    let np = km + n0p;
    let a = block_sum(&spec.massive, &spec.massless);
    let k = block_sum(&massive_prime, &spec.massless_prime);
    let mut m = DMatrix::zeros(n, np);
    m.view_mut((0, 0), (km, km)).copy_from(&spec.mass_block);
    let mut ma_full = DMatrix::zeros(np, n);
    ma_full.view_mut((0, 0), (km, km)).copy_from(&ma);
    let mut h = DMatrix::zeros(n, np);
    h.view_mut((0, 0), (km, km)).copy_from(&ma_inv);
    h.view_mut((km, km), (n0, n0p)).copy_from(&spec.h0);
    // rho'(u) v' = [m_A u, v']', rho(w') v = [h w', v]
    let j = Tensor3::from_fn([np, n, np], |ap, b, cp| (0..np).map(|x| ma_full[(x, b)] * k.get(ap, x, cp)).sum());
    let b = Tensor3::from_fn([n, np, n], |aa, bp, c| (0..n).map(|x| h[(x, bp)] * a.get(aa, x, c)).sum());
    let ds = DeformationSet::new(
        a,
        b,
        j,
        k,
        Tensor3::zeros([np, n, n]),
        MassTensor::new(m),
        InternalSpace::euclidean(n),
        InternalSpace::euclidean(np),
    )?;
    let split = decompose_mass_subspaces(&ds.mass, &ds.space, &ds.space_prime)?;
    Ok((ds, split))
}

/// Linear relations among the coefficients, one residual each.
pub fn check_linear_relations(ds: &DeformationSet, tol: f64) -> ConstraintReport {
    let (n, np) = (ds.n(), ds.n_prime());
    let l = ds.lowered();
    let elin = max3([np, n, n], |ap, b, c| 0.5 * (l.e.get(ap, b, c) - l.e.get(ap, c, b)));
    let mja = max3([n, n, np], |a, c, bp| {
        let lhs: f64 = (0..np).map(|x| ds.mass.m[(a, x)] * ds.j.get(x, c, bp)).sum();
        let rhs: f64 = (0..n).map(|x| ds.mass.m[(x, bp)] * ds.a.get(x, a, c)).sum();
        lhs - rhs
    });
    let absym = max3([n, n, n], |a, b, c| {
        let asym = 0.5 * (l.a.get(a, b, c) + l.a.get(b, a, c));
        let bsym: f64 = (0..np)
            .map(|bp| 0.5 * (l.m_up_prime[(b, bp)] * l.b.get(a, bp, c) + l.m_up_prime[(a, bp)] * l.b.get(b, bp, c)))
            .sum();
        asym - bsym
    });
    let jbsym = max3([np, n, np], |ap, c, bp| {
        let jsym = 0.5 * (l.j.get(ap, c, bp) + l.j.get(bp, c, ap));
        let bsym: f64 =
            (0..n).map(|a| 0.5 * (l.m_up[(ap, a)] * l.b.get(a, bp, c) + l.m_up[(bp, a)] * l.b.get(a, ap, c))).sum();
        jsym - bsym
    });
    let ksym = max3([np, np, np], |a, b, c| 0.5 * (l.k.get(a, b, c) + l.k.get(b, a, c)));
    let kj = max3([n, np, np], |a, bp, cp| {
        let mk: f64 = (0..np).map(|x| ds.mass.m[(a, x)] * ds.k.get(x, bp, cp)).sum();
        mk + l.j.get(bp, a, cp)
    });
    let em = max3([n, n, n], |a, b, c| {
        let mut s = 0.0;
        for ap in 0..np {
            s += 0.5 * (l.m_up_prime[(a, ap)] * l.e.get(ap, b, c) + l.m_up_prime[(c, ap)] * l.e.get(ap, b, a));
            s += l.m_up_prime[(b, ap)] * l.e.get(ap, a, c);
        }
        s
    });
    ConstraintReport::from_pairs(
        vec![
            ("e_symmetric", elin),
            ("j_a_mass", mja),
            ("a_b_mass_symmetric", absym),
            ("j_b_mass_symmetric", jbsym),
            ("k_antisymmetric", ksym),
            ("k_j_mass", kj),
            ("e_mass", em),
        ],
        tol,
    )
}

/// Quadratic relations, one residual each (max-abs over free indices).
pub fn check_quadratic_relations(ds: &DeformationSet, tol: f64) -> ConstraintReport {
    let (n, np) = (ds.n(), ds.n_prime());
    let l = ds.lowered();
    let (a, b, j, k) = (&ds.a, &ds.b, &ds.j, &ds.k);
    let m = &ds.mass.m;
    let gpi = ds.space_prime.inverse();

    let aa = max4([n, n, n, n], |x, d, ee, c| {
        let mut s = 0.0;
        for y in 0..n {
            s += l.a.get(x, d, y) * a.get(y, ee, c);
            s -= l.a.get(x, y, c) * a.get(y, d, ee) - l.a.get(x, y, ee) * a.get(y, d, c);
        }
        s
    });

    let ab = max4([n, np, n, n], |x, dp, c, ee| {
        let mut s = 0.0;
        for y in 0..n {
            s += l.a.get(x, y, c) * b.get(y, dp, ee) - l.a.get(x, y, ee) * b.get(y, dp, c);
            s -= l.b.get(x, dp, y) * a.get(y, ee, c);
        }
        for yp in 0..np {
            for d in 0..n {
                s += m[(d, dp)]
                    * (l.b.get(x, yp, c) * l.b_raised.get(d, yp, ee) - l.b.get(x, yp, ee) * l.b_raised.get(d, yp, c));
            }
            s -= l.b.get(x, yp, c) * j.get(yp, ee, dp) - l.b.get(x, yp, ee) * j.get(yp, c, dp);
        }
        s
    });

    let aj = max4([np, n, n, np], |ap, d, c, ep| {
        let mut s = 0.0;
        for y in 0..n {
            s += l.j.get(ap, y, ep) * a.get(y, d, c);
        }
        for yp in 0..np {
            s -= l.j.get(ap, d, yp) * j.get(yp, c, ep) - l.j.get(ap, c, yp) * j.get(yp, d, ep);
        }
        s
    });

    let kk = max4([np, np, np, np], |ap, bp, dp, ep| {
        let x = |p: usize, q: usize, r: usize| -> f64 { (0..np).map(|cp| l.k.get(p, q, cp) * k.get(cp, r, ep)).sum() };
        (x(ap, bp, dp) - x(bp, ap, dp) + x(bp, dp, ap) - x(dp, bp, ap) + x(dp, ap, bp) - x(ap, dp, bp)) / 6.0
    });

    let bk = max4([n, np, np, n], |x, dp, ep, c| {
        let mut s = 0.0;
        for yp in 0..np {
            s += l.b.get(x, yp, c) * k.get(yp, dp, ep);
        }
        for y in 0..n {
            s -= l.b.get(x, dp, y) * b.get(y, ep, c) - l.b.get(x, ep, y) * b.get(y, dp, c);
        }
        s
    });

    let ae = max4([np, n, n, n], |ap, bb, d, ee| {
        let mut s = 0.0;
        for c in 0..n {
            s += l.e.get(ap, bb, c) * a.get(c, d, ee) + l.e.get(ap, d, c) * a.get(c, bb, ee);
        }
        for cp in 0..np {
            s -= l.e.get(cp, bb, d) * j.get(cp, ee, ap);
        }
        for c in 0..n {
            for bp in 0..np {
                s -= l.e.get(ap, c, d) * m[(bb, bp)] * l.b_raised.get(c, bp, ee)
                    + l.e.get(ap, c, bb) * m[(d, bp)] * l.b_raised.get(c, bp, ee);
            }
        }
        s
    });

    // k^{d'e'}_{c'} = g'^{e'y} k^{d'}_{y c'}
    let ek = max4([np, np, n, n], |dp, ep, x, bb| {
        let mut s = 0.0;
        for cp in 0..np {
            let kup: f64 = (0..np).map(|y| gpi[(ep, y)] * k.get(dp, y, cp)).sum();
            s += kup * l.e.get(cp, x, bb);
        }
        for c in 0..n {
            s -= l.e.get(dp, c, x) * b.get(c, ep, bb) - l.e.get(ep, c, x) * b.get(c, dp, bb);
            s -= l.e.get(dp, c, bb) * b.get(c, ep, x) - l.e.get(ep, c, bb) * b.get(c, dp, x);
        }
        s
    });

    ConstraintReport::from_pairs(
        vec![
            ("a_jacobi", aa),
            ("a_b_compatibility", ab),
            ("a_j_compatibility", aj),
            ("k_jacobi", kk),
            ("b_k_representation", bk),
            ("a_e_compatibility", ae),
            ("e_k_compatibility", ek),
        ],
        tol,
    )
}

/// True iff `m^{a'}_a e_{a'bc}` vanishes: e-type terms need zero mass.
pub fn check_e_mass_obstruction(ds: &DeformationSet, tol: f64) -> bool {
    e_mass_residual(ds) < tol
}

pub fn e_mass_residual(ds: &DeformationSet) -> f64 {
    let (n, np) = (ds.n(), ds.n_prime());
    max3([n, n, n], |a, b, c| (0..np).map(|x| ds.mass.m[(a, x)] * ds.e.get(x, b, c)).sum())
}

pub fn parity_grade(ds: &DeformationSet) -> Parity {
    let even_zero = ds.a.is_zero() && ds.b.is_zero() && ds.j.is_zero() && ds.k.is_zero() && ds.mass.is_zero();
    if ds.e.is_zero() {
        Parity::Even
    } else if even_zero {
        Parity::Odd
    } else {
        Parity::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_rejects_wrong_coupling() {
        assert!(matches!(family_su2(2.0, 0.3), Err(Error::Precondition { .. })));
    }

    #[test]
    fn e_only_rejects_asymmetric() {
        let mut e = Tensor3::zeros([1, 2, 2]);
        e.set(0, 0, 1, 1.0);
        assert!(family_e_only(e).is_err());
    }
}
