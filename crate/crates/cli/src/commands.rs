//! The four subcommands. Each appends check entries to the report and
//! returns an error only when it cannot finish.

use std::time::Instant;

use gaugedeform::deform_coeffs::{
    check_linear_relations, check_quadratic_relations, e_mass_residual, parity_grade, ConstraintReport, DeformationSet,
};
use gaugedeform::dynamics::{
    check_commutators, check_cross_representation, check_euler_lagrange_consistency, check_gauge_invariance,
    check_linearization, check_noether_identities, check_strength_identities, check_strength_transformation,
    IdentityReport, SuiteParams, TheoryVariant,
};
use gaugedeform::lie_core::{
    decompose_mass_subspaces, homomorphism_residual, jacobi_residual, killing_metric, AdjointSuite, InternalSpace,
    LinearMapH, MassTensor, StructureConstants,
};
use gaugedeform::observables::{
    charge_line, charge_surface, energy_causality_check, random_strength_samples, stress_energy_p,
};
use gaugedeform::par;
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::json;

use crate::config::{AlgebraSpec, CheckName, DeformationSection, IntegralSpec, RunConfig};
use crate::report::{CheckEntry, RunReport};
use crate::CliError;

fn residual_entry(name: &str, residual: f64, tol: f64, extra: serde_json::Value) -> CheckEntry {
    let pass = residual < tol;
    let mut v = json!({ "residual": residual, "tolerance": tol });
    if let (Some(m), serde_json::Value::Object(x)) = (v.as_object_mut(), extra) {
        m.extend(x);
    }
    CheckEntry::new(name, pass, Some(residual), v)
}

fn metric_invariance_residual(c: &StructureConstants, s: &InternalSpace) -> Result<f64, CliError> {
    let n = c.dim();
    let suite =
        AdjointSuite::new(c.clone(), c.clone(), s.clone(), s.clone(), LinearMapH::new(DMatrix::identity(n, n)))?;
    Ok(suite.invariance_residual())
}

fn signature(m: &DMatrix<f64>) -> [usize; 3] {
    let mut sig = [0usize; 3];
    let scale = m.amax().max(1e-300);
    for &l in m.clone().symmetric_eigenvalues().iter() {
        if l > 1e-10 * scale {
            sig[0] += 1;
        } else if l < -1e-10 * scale {
            sig[1] += 1;
        } else {
            sig[2] += 1;
        }
    }
    sig
}

fn algebra_checks(
    label: &str,
    spec: &AlgebraSpec,
    tol: f64,
    report: &mut RunReport,
) -> Result<(StructureConstants, InternalSpace), CliError> {
    let c = spec.structure.build(label)?;
    let space = spec.inner_product.build(label, Some(&c), c.dim())?;
    report.push(residual_entry(&format!("{label}.jacobi"), jacobi_residual(&c)?, tol, json!({})));
    let k = killing_metric(&c);
    report.push(CheckEntry::new(
        &format!("{label}.killing"),
        true,
        None,
        json!({
            "metric": k.transpose().as_slice(),
            "signature": { "positive": signature(&k)[0], "negative": signature(&k)[1], "null": signature(&k)[2] },
        }),
    ));
    report.push(residual_entry(
        &format!("{label}.metric_invariance"),
        metric_invariance_residual(&c, &space)?,
        tol,
        json!({ "positive_definite": space.positive_definite }),
    ));
    Ok((c, space))
}

pub fn verify_algebra(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let sec =
        cfg.algebra.as_ref().ok_or_else(|| CliError::Schema("verify-algebra needs an `algebra` section".into()))?;
    let tol = cfg.tolerances.algebra;
    let t = Instant::now();
    let (c, s) = algebra_checks("algebra", &sec.algebra, tol, report)?;
    let prime = match &sec.algebra_prime {
        Some(p) => Some(algebra_checks("algebra_prime", p, tol, report)?),
        None => None,
    };
    if let Some(m) = &sec.mass {
        let (n, np) = (c.dim(), prime.as_ref().map(|p| p.0.dim()).unwrap_or(c.dim()));
        let sp = prime.as_ref().map(|p| p.1.clone()).unwrap_or_else(|| s.clone());
        let m = m.build("mass")?;
        if m.shape() != (n, np) {
            return Err(CliError::Schema(format!("mass: shape {:?}, expected ({n}, {np})", m.shape())));
        }
        let entry = match decompose_mass_subspaces(&MassTensor::new(m), &s, &sp) {
            Ok(split) => {
                let idem = (&split.pm * &split.pm - &split.pm)
                    .amax()
                    .max((&split.pm_prime * &split.pm_prime - &split.pm_prime).amax());
                residual_entry(
                    "mass_decomposition",
                    idem,
                    tol.max(1e-10),
                    json!({
                        "massive_dim": split.massive_dim,
                        "massless_dim": n - split.massive_dim,
                        "massless_dim_prime": np - split.massive_dim,
                    }),
                )
            }
            Err(e) => CheckEntry::new("mass_decomposition", false, None, json!({ "error": e.to_string() })),
        };
        report.push(entry);
    }
    if let Some(h) = &sec.homomorphism {
        let cp = prime.as_ref().map(|p| p.0.clone()).unwrap_or_else(|| c.clone());
        let h = h.build("homomorphism")?;
        if h.shape() != (c.dim(), cp.dim()) {
            return Err(CliError::Schema(format!(
                "homomorphism: shape {:?}, expected ({}, {})",
                h.shape(),
                c.dim(),
                cp.dim()
            )));
        }
        let r = homomorphism_residual(&LinearMapH::new(h), &cp, &c)?;
        report.push(residual_entry("homomorphism", r, tol, json!({})));
    }
    if let Some(last) = report.checks.last_mut() {
        last.seconds = t.elapsed().as_secs_f64();
    }
    Ok(())
}

fn constraint_entry(name: &str, r: ConstraintReport) -> CheckEntry {
    CheckEntry::new(name, r.pass, Some(r.max_residual()), &r)
}

/// Relation checks shared by verify-deformation and the verify-theory gate.
fn deformation_checks(sec: &DeformationSection, tol: f64, report: &mut RunReport) -> Result<DeformationSet, CliError> {
    let t = Instant::now();
    let ds = sec.build_set()?;
    report
        .push(constraint_entry("linear_relations", check_linear_relations(&ds, tol)).timed(t.elapsed().as_secs_f64()));
    let t = Instant::now();
    report.push(
        constraint_entry("quadratic_relations", check_quadratic_relations(&ds, tol)).timed(t.elapsed().as_secs_f64()),
    );
    let em = e_mass_residual(&ds);
    let mut entry = residual_entry("e_mass_obstruction", em, tol, json!({}));
    if !entry.pass {
        entry.result["explanation"] = json!("e-type terms are incompatible with a nonzero mass tensor");
    }
    report.push(entry);
    report.push(CheckEntry::new("parity", true, None, json!({ "grade": parity_grade(&ds) })));
    Ok(ds)
}

pub fn verify_deformation(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let sec = deformation_section(cfg)?;
    deformation_checks(sec, cfg.tolerances.relations, report)?;
    Ok(())
}

fn deformation_section(cfg: &RunConfig) -> Result<&DeformationSection, CliError> {
    cfg.deformation.as_ref().ok_or_else(|| CliError::Schema("missing `deformation` section".into()))
}

pub fn suite_params(cfg: &RunConfig) -> SuiteParams {
    SuiteParams {
        seeds: cfg.jet.seeds.clone(),
        degree: cfg.jet.degree,
        amplitude: cfg.jet.amplitude,
        gauge_amplitude: cfg.jet.gauge_amplitude,
        tolerances: cfg.tolerances.identities.clone(),
    }
}

fn run_check(name: CheckName, v: &TheoryVariant, p: &SuiteParams) -> gaugedeform::Result<IdentityReport> {
    match name {
        CheckName::Gauge => check_gauge_invariance(v, p),
        CheckName::Noether => check_noether_identities(v, p),
        CheckName::Strength => check_strength_identities(v, p),
        CheckName::Commutators => check_commutators(v, p),
        CheckName::Linearization => check_linearization(v, p),
        CheckName::EulerLagrange => check_euler_lagrange_consistency(v, p),
        CheckName::StrengthTransformation => check_strength_transformation(v, p),
        CheckName::CrossRepresentation => check_cross_representation(v, p),
    }
}

pub fn verify_theory(cfg: &RunConfig, force: bool, report: &mut RunReport) -> Result<(), CliError> {
    let sec = deformation_section(cfg)?;
    let ds = deformation_checks(sec, cfg.tolerances.relations, report)?;
    if !report.pass && !force {
        return Err(CliError::Gate(
            "the deformation fails its relations; rerun with --force to check the theory anyway".into(),
        ));
    }
    let v = sec.build_variant(ds)?;
    let p = suite_params(cfg);
    let results = par::map_ordered(&cfg.checks, |&name| {
        let t = Instant::now();
        let r = run_check(name, &v, &p);
        (name, r, t.elapsed().as_secs_f64())
    });
    for (name, r, secs) in results {
        let r = r?;
        report.push(CheckEntry::new(name.as_str(), r.pass, Some(r.max_residual()), &r).timed(secs));
    }
    Ok(())
}

#[derive(Serialize)]
struct CausalityEntry {
    #[serde(flatten)]
    report: gaugedeform::observables::CausalityReport,
    seed: u64,
    max_p_trace: f64,
    max_asymmetry: f64,
}

pub fn observables(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let sec = cfg
        .observables
        .as_ref()
        .ok_or_else(|| CliError::Schema("observables needs an `observables` section".into()))?;
    let tol = &cfg.tolerances;
    for (i, run) in sec.charges.iter().enumerate() {
        let t = Instant::now();
        let (label, res) = match &run.integral {
            IntegralSpec::Surface { charge, radius, n_theta, n_phi } => {
                ("surface", charge_surface(&run.sampler, *charge, *radius, *n_theta, *n_phi)?)
            }
            IntegralSpec::Line { radius, n_points } => ("line", charge_line(&run.sampler, *radius, *n_points)?),
        };
        let (pass, dev) = match &run.expected {
            Some(exp) => {
                if exp.len() != res.values.len() {
                    return Err(CliError::Schema(format!(
                        "charges[{i}].expected has {} entries for {} charges",
                        exp.len(),
                        res.values.len()
                    )));
                }
                let dev = exp.iter().zip(&res.values).map(|(e, v)| (e - v).abs()).fold(0.0, f64::max);
                (dev < tol.charges, Some(dev))
            }
            None => (res.values.iter().all(|v| v.is_finite()), None),
        };
        let name = format!("charge[{i}].{label}");
        report.push(
            CheckEntry::new(&name, pass, dev, json!({ "charge": res, "expected": run.expected }))
                .timed(t.elapsed().as_secs_f64()),
        );
    }
    if let Some(c) = &sec.causality {
        let t = Instant::now();
        let g = c.inner_product.build("inner_product")?;
        let gp = c.inner_product_prime.build("inner_product_prime")?;
        if !g.is_square() || !gp.is_square() {
            return Err(CliError::Schema("inner products must be square".into()));
        }
        let seed = cfg.jet.seeds.first().copied().unwrap_or(0);
        let samples = random_strength_samples(seed, c.samples, g.nrows(), gp.nrows(), c.amplitude)?;
        let causal = energy_causality_check(&samples, &g, &gp, seed.wrapping_add(1))?;
        let mut max_p_trace = 0.0f64;
        let mut max_asymmetry = 0.0f64;
        for s in &samples {
            let tp = stress_energy_p(&s.star_p, &g)?;
            max_p_trace = max_p_trace.max(tp.trace().at_origin().abs());
            max_asymmetry = max_asymmetry.max(tp.asymmetry());
        }
        report.push(
            CheckEntry::new(
                "energy_causality",
                causal.pass,
                None,
                CausalityEntry { report: causal, seed, max_p_trace, max_asymmetry },
            )
            .timed(t.elapsed().as_secs_f64()),
        );
        report.push(residual_entry("p_sector_trace", max_p_trace, tol.trace, json!({ "samples": c.samples })));
    }
    Ok(())
}
