//! Stress-energy tensor of the dual strengths, energy positivity and
//! causality sampling, and charge integrals over spheres and circles.
//!
//! Orientation: sphere normals point outward; the circle of the line charge
//! lies in the plane z = 0 with unit normal +z and is traversed
//! counterclockwise about +z.

use std::array;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet_forms::{merge_sign, position, random_form, JetLayout, JetScalar, LieForm, ETA};
use crate::par;
use crate::strengths::StrengthPair;

/// Component X_{i0 i1 ..} of a form, any index order.
fn component<'f>(f: &'f LieForm, a: usize, idx: &[usize]) -> Option<(f64, &'f JetScalar)> {
    let mut mask = 0u8;
    let mut sign = 1.0;
    for &i in idx {
        let bit = 1u8 << i;
        sign *= merge_sign(mask, bit)?;
        mask |= bit;
    }
    Some((sign, f.comp(a, position(mask))))
}

/// Symmetric 4x4 table of jets T_{μν}.
#[derive(Clone, Debug, PartialEq)]
pub struct StressEnergy {
    t: [[JetScalar; 4]; 4],
}

impl StressEnergy {
    pub fn get(&self, mu: usize, nu: usize) -> &JetScalar {
        &self.t[mu][nu]
    }

    /// Values at the base point.
    pub fn at_origin(&self) -> [[f64; 4]; 4] {
        array::from_fn(|m| array::from_fn(|n| self.t[m][n].at_origin()))
    }

    /// η^{μν} T_{μν}.
    pub fn trace(&self) -> JetScalar {
        let mut tr = JetScalar::zero(self.t[0][0].layout());
        for (mu, eta) in ETA.iter().enumerate() {
            tr.axpy(*eta, &self.t[mu][mu]);
        }
        tr
    }

    /// Largest |T_{μν} - T_{νμ}| over the coefficients.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let d = self.t[mu][nu].coeffs().iter().zip(self.t[nu][mu].coeffs()).map(|(x, y)| (x - y).abs());
                worst = d.fold(worst, f64::max);
            }
        }
        worst
    }

    pub fn add(&self, o: &StressEnergy) -> StressEnergy {
        StressEnergy {
            t: array::from_fn(|m| {
                array::from_fn(|n| {
                    let mut x = self.t[m][n].clone();
                    x.axpy(1.0, &o.t[m][n]);
                    x
                })
            }),
        }
    }
}

/// Spin-one part: g_ab (X^a_{μσ} X^b_ν^σ - 1/4 η_{μν} X^a_{στ} X^{b στ}) for
/// the 2-form X = *P.
pub fn stress_energy_p(star_p: &LieForm, g: &DMatrix<f64>) -> Result<StressEnergy> {
    check_metric_dim(star_p, g, 2)?;
    let lay = star_p.layout();
    let x = |a: usize, m: usize, n: usize| component(star_p, a, &[m, n]);
    let mut t: [[JetScalar; 4]; 4] = array::from_fn(|_| array::from_fn(|_| JetScalar::zero(lay)));
    let mut norm = JetScalar::zero(lay);
    for a in 0..star_p.dim() {
        for b in 0..star_p.dim() {
            let gab = g[(a, b)];
            if gab == 0.0 {
                continue;
            }
            for mu in 0..4 {
                for nu in mu..4 {
                    for s in 0..4 {
                        if let (Some((s1, u)), Some((s2, w))) = (x(a, mu, s), x(b, nu, s)) {
                            t[mu][nu].add_product(gab * s1 * s2 * ETA[s], u, w);
                        }
                    }
                }
            }
            for s in 0..4 {
                for r in 0..4 {
                    if let (Some((s1, u)), Some((s2, w))) = (x(a, s, r), x(b, s, r)) {
                        norm.add_product(gab * s1 * s2 * ETA[s] * ETA[r], u, w);
                    }
                }
            }
        }
    }
    Ok(finish(t, &norm, 0.25))
}

/// Spin-zero part: g'_ab (1/2 Y^a_μ Y^b_ν - 1/4 η_{μν} Y^a_σ Y^{bσ}) for the
/// 1-form Y = *Q.
pub fn stress_energy_q(star_q: &LieForm, gp: &DMatrix<f64>) -> Result<StressEnergy> {
    check_metric_dim(star_q, gp, 1)?;
    let lay = star_q.layout();
    let y = |a: usize, m: usize| star_q.comp(a, position(1 << m));
    let mut t: [[JetScalar; 4]; 4] = array::from_fn(|_| array::from_fn(|_| JetScalar::zero(lay)));
    let mut norm = JetScalar::zero(lay);
    for a in 0..star_q.dim() {
        for b in 0..star_q.dim() {
            let gab = gp[(a, b)];
            if gab == 0.0 {
                continue;
            }
            for mu in 0..4 {
                for nu in mu..4 {
                    t[mu][nu].add_product(0.5 * gab, y(a, mu), y(b, nu));
                }
                norm.add_product(gab * ETA[mu], y(a, mu), y(b, mu));
            }
        }
    }
    Ok(finish(t, &norm, 0.25))
}

fn check_metric_dim(f: &LieForm, g: &DMatrix<f64>, p: usize) -> Result<()> {
    if f.degree() != p || g.nrows() != f.dim() || g.ncols() != f.dim() {
        return Err(Error::Dimension(format!(
            "{}-form of dim {} against a {}x{} metric",
            f.degree(),
            f.dim(),
            g.nrows(),
            g.ncols()
        )));
    }
    Ok(())
}

/// Subtract `c η_{μν} norm` on the diagonal and mirror the upper triangle.
fn finish(mut t: [[JetScalar; 4]; 4], norm: &JetScalar, c: f64) -> StressEnergy {
    for (mu, eta) in ETA.iter().enumerate() {
        t[mu][mu].axpy(-c * eta, norm);
    }
    for mu in 0..4 {
        for nu in 0..mu {
            t[mu][nu] = t[nu][mu].clone();
        }
    }
    StressEnergy { t }
}

/// T_{μν} from both dual strengths, `g` and `gp` the inner products on A, A'.
pub fn stress_energy(s: &StrengthPair, g: &DMatrix<f64>, gp: &DMatrix<f64>) -> Result<StressEnergy> {
    Ok(stress_energy_p(&s.star_p, g)?.add(&stress_energy_q(&s.star_q, gp)?))
}

/// Outcome of the sampled energy and flux test.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CausalityReport {
    pub samples: usize,
    /// Smallest t^μ t^ν T_{μν} seen.
    pub min_energy: f64,
    /// Largest η-norm of the flux t^μ T_{μν} seen (must not be positive).
    pub max_flux_norm: f64,
    pub pass: bool,
}

/// Positivity slack for the energy and flux tests.
pub const CAUSALITY_TOL: f64 = 1e-12;

fn require_positive_definite(g: &DMatrix<f64>, which: &str) -> Result<()> {
    let sym = (g - g.transpose()).amax();
    if sym > 1e-12 || g.clone().cholesky().is_none() {
        return Err(Error::Precondition {
            condition: "positive-definite inner products".into(),
            detail: format!("the {which} inner product is not positive definite, so neither energy positivity nor causality is expected"),
        });
    }
    Ok(())
}

/// Random constant dual strengths (degree-0 jets), coefficients uniform in
/// [-amplitude, amplitude].
pub fn random_strength_samples(
    seed: u64,
    count: usize,
    n: usize,
    n_prime: usize,
    amplitude: f64,
) -> Result<Vec<StrengthPair>> {
    let lay = JetLayout::get(0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let p = random_form(&mut rng, 2, n, lay, amplitude);
            let q = random_form(&mut rng, 3, n_prime, lay, amplitude);
            StrengthPair::from_pq(p.clone(), q.clone(), p, q)
        })
        .collect())
}

/// Random future unit timelike vector with rapidity below 2.
fn random_observer(rng: &mut impl Rng) -> [f64; 4] {
    let beta: f64 = rng.gen_range(0.0..2.0);
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    let sh = beta.sinh();
    [beta.cosh(), sh * r * phi.cos(), sh * r * phi.sin(), sh * z]
}

/// For each sample and a random unit timelike t: t^μ t^ν T_{μν} ≥ -tol and
/// the flux t^μ T_{μν} is timelike or null. Refuses indefinite inner products.
pub fn energy_causality_check(
    samples: &[StrengthPair],
    g: &DMatrix<f64>,
    gp: &DMatrix<f64>,
    seed: u64,
) -> Result<CausalityReport> {
    require_positive_definite(g, "A")?;
    require_positive_definite(gp, "A'")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observers: Vec<[f64; 4]> = (0..samples.len()).map(|_| random_observer(&mut rng)).collect();
    let idx: Vec<usize> = (0..samples.len()).collect();
    let rows = par::map_ordered(&idx, |&i| -> Result<(f64, f64)> {
        let t = stress_energy(&samples[i], g, gp)?.at_origin();
        let u = observers[i];
        let flux: [f64; 4] = array::from_fn(|nu| (0..4).map(|mu| u[mu] * t[mu][nu]).sum());
        let energy: f64 = (0..4).map(|nu| u[nu] * flux[nu]).sum();
        let norm: f64 = (0..4).map(|nu| ETA[nu] * flux[nu] * flux[nu]).sum();
        Ok((energy, norm))
    });
    let mut min_energy = f64::INFINITY;
    let mut max_flux_norm = f64::NEG_INFINITY;
    for r in rows {
        let (e, n) = r?;
        min_energy = min_energy.min(e);
        max_flux_norm = max_flux_norm.max(n);
    }
    if samples.is_empty() {
        min_energy = 0.0;
        max_flux_norm = 0.0;
    }
    let pass = min_energy >= -CAUSALITY_TOL && max_flux_norm <= CAUSALITY_TOL;
    Ok(CausalityReport { samples: samples.len(), min_energy, max_flux_norm, pass })
}

/// Closed-form strengths (P, Q) at a spacetime point, as constant forms.
pub trait StrengthSampler: Sync {
    fn n(&self) -> usize;
    fn n_prime(&self) -> usize;
    fn sample(&self, x: [f64; 4]) -> (LieForm, LieForm);
}

/// Analytic configurations for the charge integrals; each carries one
/// strength per internal index.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BuiltinSampler {
    /// P^a_{0i} = q^a x_i / r^3.
    Coulomb { charges: Vec<f64> },
    /// P^a = g^a (x dy∧dz + y dz∧dx + z dx∧dy) / r^3.
    RadialMagnetic { strengths: Vec<f64> },
    /// Q^a_{z0i} = s^a φ_i / ρ with φ the unit azimuthal vector, ρ the
    /// cylindrical radius.
    UniformScalar { strengths: Vec<f64> },
}

impl BuiltinSampler {
    fn values(&self) -> &[f64] {
        match self {
            BuiltinSampler::Coulomb { charges } => charges,
            BuiltinSampler::RadialMagnetic { strengths } | BuiltinSampler::UniformScalar { strengths } => strengths,
        }
    }
}

fn set_component(f: &mut LieForm, a: usize, idx: &[usize], v: f64) {
    let lay = f.layout();
    let mut mask = 0u8;
    let mut sign = 1.0;
    for &i in idx {
        let bit = 1u8 << i;
        sign *= merge_sign(mask, bit).expect("distinct indices");
        mask |= bit;
    }
    *f.comp_mut(a, position(mask)) = JetScalar::constant(lay, sign * v);
}

impl StrengthSampler for BuiltinSampler {
    fn n(&self) -> usize {
        self.values().len()
    }

    fn n_prime(&self) -> usize {
        self.values().len()
    }

    fn sample(&self, x: [f64; 4]) -> (LieForm, LieForm) {
        let lay = JetLayout::get(0).expect("degree 0 layout");
        let k = self.values().len();
        let mut p = LieForm::zero(2, k, lay);
        let mut q = LieForm::zero(3, k, lay);
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        for (a, &v) in self.values().iter().enumerate() {
            match self {
                BuiltinSampler::Coulomb { .. } => {
                    for i in 1..4 {
                        set_component(&mut p, a, &[0, i], v * x[i] / r.powi(3));
                    }
                }
                BuiltinSampler::RadialMagnetic { .. } => {
                    let c = v / r.powi(3);
                    set_component(&mut p, a, &[2, 3], c * x[1]);
                    set_component(&mut p, a, &[3, 1], c * x[2]);
                    set_component(&mut p, a, &[1, 2], c * x[3]);
                }
                BuiltinSampler::UniformScalar { .. } => {
                    let rho2 = x[1] * x[1] + x[2] * x[2];
                    set_component(&mut q, a, &[3, 0, 1], -v * x[2] / rho2);
                    set_component(&mut q, a, &[3, 0, 2], v * x[1] / rho2);
                }
            }
        }
        (p, q)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ChargeKind {
    /// Flux of P.
    Electric,
    /// Flux of *P.
    Magnetic,
}

/// Charges per internal index, with the change against a half-size grid as
/// the error estimate.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChargeResult {
    pub values: Vec<f64>,
    pub grid: Vec<usize>,
    pub error_estimate: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn finite(v: &[f64], at: [f64; 4]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{at:?}")))
    }
}

fn surface_sum(
    sampler: &dyn StrengthSampler,
    kind: ChargeKind,
    radius: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>> {
    let (us, ws) = gauss_legendre(n_theta);
    let k = sampler.n();
    let rows: Vec<usize> = (0..n_theta).collect();
    let parts = par::map_ordered(&rows, |&i| -> Result<Vec<f64>> {
        let (u, wu) = (us[i], ws[i]);
        let st = (1.0 - u * u).sqrt();
        let mut acc = vec![0.0; k];
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let nrm = [0.0, st * phi.cos(), st * phi.sin(), u];
            let x = [0.0, radius * nrm[1], radius * nrm[2], radius * nrm[3]];
            let (p, _) = sampler.sample(x);
            let f = match kind {
                ChargeKind::Electric => p,
                ChargeKind::Magnetic => p.hodge(),
            };
            let mut vals = vec![0.0; k];
            for (a, val) in vals.iter_mut().enumerate() {
                for (m, nm) in nrm.iter().enumerate().skip(1) {
                    if let Some((s, c)) = component(&f, a, &[0, m]) {
                        *val += s * c.at_origin() * nm;
                    }
                }
            }
            finite(&vals, x)?;
            for (acc, v) in acc.iter_mut().zip(vals) {
                *acc += wu * v * radius * radius * (2.0 * PI / n_phi as f64);
            }
        }
        Ok(acc)
    });
    let mut total = vec![0.0; k];
    for part in parts {
        for (t, v) in total.iter_mut().zip(part?) {
            *t += v;
        }
    }
    Ok(total.into_iter().map(|v| v / (4.0 * PI)).collect())
}

/// (1/4π) ∮ X_{0μ} dS^μ over the sphere of `radius` at t = 0, X = P for
/// electric and *P for magnetic charges. Product rule: Gauss-Legendre in
/// cos θ times trapezoid in φ.
pub fn charge_surface(
    sampler: &dyn StrengthSampler,
    kind: ChargeKind,
    radius: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<ChargeResult> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::Invalid(format!("sphere grid {n_theta}x{n_phi} too small")));
    }
    let values = surface_sum(sampler, kind, radius, n_theta, n_phi)?;
    let coarse = surface_sum(sampler, kind, radius, n_theta / 2, n_phi / 2)?;
    let error_estimate = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    Ok(ChargeResult { values, grid: vec![n_theta, n_phi], error_estimate })
}

fn line_sum(sampler: &dyn StrengthSampler, radius: f64, n: usize) -> Result<Vec<f64>> {
    let k = sampler.n_prime();
    let mut acc = vec![0.0; k];
    for j in 0..n {
        let phi = 2.0 * PI * j as f64 / n as f64;
        let (c, s) = (phi.cos(), phi.sin());
        let x = [0.0, radius * c, radius * s, 0.0];
        let tangent = [0.0, -s, c, 0.0];
        let (_, q) = sampler.sample(x);
        let mut vals = vec![0.0; k];
        for (a, val) in vals.iter_mut().enumerate() {
            for m in 1..3 {
                if let Some((sg, cq)) = component(&q, a, &[3, 0, m]) {
                    *val += sg * cq.at_origin() * tangent[m];
                }
            }
        }
        finite(&vals, x)?;
        for (acc, v) in acc.iter_mut().zip(vals) {
            *acc += v * radius * 2.0 * PI / n as f64;
        }
    }
    Ok(acc.into_iter().map(|v| v / (2.0 * PI)).collect())
}

/// (1/2π) ∮ Q_{σνμ} n^σ t^ν ds^μ over the circle of `radius` in z = 0,
/// n = +z, by the trapezoid rule.
pub fn charge_line(sampler: &dyn StrengthSampler, radius: f64, n_points: usize) -> Result<ChargeResult> {
    if n_points < 2 {
        return Err(Error::Invalid(format!("{n_points} points on the circle")));
    }
    let values = line_sum(sampler, radius, n_points)?;
    let coarse = line_sum(sampler, radius, n_points / 2)?;
    let error_estimate = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    Ok(ChargeResult { values, grid: vec![n_points], error_estimate })
}
