//! Run configuration: JSON schema and conversion into library objects.

use std::path::PathBuf;

use gaugedeform::deform_coeffs::{
    family_e_only, family_general, family_solvable, family_su2, DeformationSet, GeneralFamilySpec, RELATION_TOL,
};
use gaugedeform::dynamics::{SuiteParams, TheoryVariant, Tolerances};
use gaugedeform::lie_core::{killing_metric, InternalSpace, MassTensor, StructureConstants, Tensor3};
use gaugedeform::observables::{BuiltinSampler, ChargeKind};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationSection>,
    #[serde(default)]
    pub jet: JetSection,
    #[serde(default = "all_checks")]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<ObservablesSection>,
}

/// Row-major tensor with explicit dims.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub dims: [usize; 3],
    pub data: Vec<f64>,
}

impl TensorSpec {
    pub fn build(&self, what: &str) -> Result<Tensor3, CliError> {
        let want: usize = self.dims.iter().product();
        if self.data.len() != want {
            return Err(CliError::Schema(format!(
                "{what}: {} entries for dims {:?} (expected {want})",
                self.data.len(),
                self.dims
            )));
        }
        Ok(Tensor3::from_vec(self.dims, self.data.clone())?)
    }
}

/// Row-major matrix with explicit shape.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixSpec {
    pub fn build(&self, what: &str) -> Result<DMatrix<f64>, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Schema(format!(
                "{what}: {} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }

    fn expect_shape(&self, what: &str, rows: usize, cols: usize) -> Result<DMatrix<f64>, CliError> {
        if (self.rows, self.cols) != (rows, cols) {
            return Err(CliError::Schema(format!("{what}: shape {}x{}, expected {rows}x{cols}", self.rows, self.cols)));
        }
        self.build(what)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureSpec {
    Su2,
    Su11,
    Abelian { dim: usize },
    Explicit { dims: [usize; 3], data: Vec<f64> },
}

impl StructureSpec {
    pub fn build(&self, what: &str) -> Result<StructureConstants, CliError> {
        Ok(match self {
            StructureSpec::Su2 => StructureConstants::su2(),
            StructureSpec::Su11 => StructureConstants::su11(),
            StructureSpec::Abelian { dim } => StructureConstants::abelian(*dim),
            StructureSpec::Explicit { dims, data } => {
                let t = TensorSpec { dims: *dims, data: data.clone() }.build(what)?;
                StructureConstants::new(t)?
            }
        })
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    #[default]
    Identity,
    /// Killing metric, positive for compact algebras.
    Killing,
    Explicit {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    },
}

impl MetricSpec {
    pub fn build(&self, what: &str, c: Option<&StructureConstants>, dim: usize) -> Result<InternalSpace, CliError> {
        let g = match self {
            MetricSpec::Identity => DMatrix::identity(dim, dim),
            MetricSpec::Killing => {
                let c =
                    c.ok_or_else(|| CliError::Schema(format!("{what}: killing metric needs structure constants")))?;
                killing_metric(c)
            }
            MetricSpec::Explicit { rows, cols, data } => {
                MatrixSpec { rows: *rows, cols: *cols, data: data.clone() }.expect_shape(what, dim, dim)?
            }
        };
        Ok(InternalSpace::new(g)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub structure: StructureSpec,
    #[serde(default)]
    pub inner_product: MetricSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra_prime: Option<AlgebraSpec>,
    /// m_{aa'} as an n x n' matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<MatrixSpec>,
    /// Homomorphism h : A' -> A as an n x n' matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homomorphism: Option<MatrixSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    LinearAbelian {
        n: usize,
        n_prime: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<MatrixSpec>,
    },
    Su2 {
        mass: f64,
        lambda: f64,
    },
    Solvable {
        v: [f64; 3],
        w: [f64; 3],
        #[serde(default)]
        cmap: [[f64; 3]; 3],
    },
    EOnly {
        e: TensorSpec,
        /// Only for exercising the mass obstruction.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<MatrixSpec>,
    },
    General {
        massive: StructureSpec,
        mass_block: MatrixSpec,
        massless: StructureSpec,
        massless_prime: StructureSpec,
        h0: MatrixSpec,
    },
    Explicit {
        a: TensorSpec,
        b: TensorSpec,
        j: TensorSpec,
        k: TensorSpec,
        e: TensorSpec,
        mass: MatrixSpec,
        #[serde(default)]
        inner_product: MetricSpec,
        #[serde(default)]
        inner_product_prime: MetricSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DeformationSection {
    pub family: FamilySpec,
    /// Coupling of the cubic Chern-Simons term; 1/2 unless overridden.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs_coupling: Option<f64>,
}

impl DeformationSection {
    pub fn build_set(&self) -> Result<DeformationSet, CliError> {
        Ok(match &self.family {
            FamilySpec::LinearAbelian { n, n_prime, mass } => {
                let m = match mass {
                    Some(m) => m.expect_shape("mass", *n, *n_prime)?,
                    None => DMatrix::zeros(*n, *n_prime),
                };
                DeformationSet::new(
                    Tensor3::zeros([*n, *n, *n]),
                    Tensor3::zeros([*n, *n_prime, *n]),
                    Tensor3::zeros([*n_prime, *n, *n_prime]),
                    Tensor3::zeros([*n_prime, *n_prime, *n_prime]),
                    Tensor3::zeros([*n_prime, *n, *n]),
                    MassTensor::new(m),
                    InternalSpace::euclidean(*n),
                    InternalSpace::euclidean(*n_prime),
                )?
            }
            FamilySpec::Su2 { mass, lambda } => family_su2(*mass, *lambda)?,
            FamilySpec::Solvable { v, w, cmap } => family_solvable(*v, *w, *cmap)?,
            FamilySpec::EOnly { e, mass } => {
                let mut ds = family_e_only(e.build("e")?)?;
                if let Some(m) = mass {
                    ds.mass = MassTensor::new(m.expect_shape("mass", ds.n(), ds.n_prime())?);
                }
                ds
            }
            FamilySpec::General { massive, mass_block, massless, massless_prime, h0 } => {
                let spec = GeneralFamilySpec {
                    massive: massive.build("massive")?,
                    mass_block: mass_block.build("mass_block")?,
                    massless: massless.build("massless")?,
                    massless_prime: massless_prime.build("massless_prime")?,
                    h0: h0.build("h0")?,
                };
                family_general(&spec)?.0
            }
            FamilySpec::Explicit { a, b, j, k, e, mass, inner_product, inner_product_prime } => {
                let a = a.build("a")?;
                let n = a.dims()[0];
                let k = k.build("k")?;
                let np = k.dims()[0];
                DeformationSet::new(
                    a,
                    b.build("b")?,
                    j.build("j")?,
                    k,
                    e.build("e")?,
                    MassTensor::new(mass.expect_shape("mass", n, np)?),
                    inner_product.build("inner_product", None, n)?,
                    inner_product_prime.build("inner_product_prime", None, np)?,
                )?
            }
        })
    }

    /// The theory for a coefficient set: quadratic when every coupling
    /// vanishes, e-only when only e survives, parity-even otherwise.
    pub fn build_variant(&self, ds: DeformationSet) -> Result<TheoryVariant, CliError> {
        let even_zero = ds.a.is_zero() && ds.b.is_zero() && ds.j.is_zero() && ds.k.is_zero();
        let v = if even_zero && ds.e.is_zero() {
            TheoryVariant::linear_abelian(ds.space, ds.space_prime, ds.mass)?
        } else if even_zero {
            TheoryVariant::e_only(ds)?
        } else {
            TheoryVariant::general(ds)?
        };
        Ok(match self.cs_coupling {
            Some(l) => v.with_cs_coupling(l),
            None => v,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct JetSection {
    pub degree: usize,
    pub seeds: Vec<u64>,
    pub amplitude: f64,
    pub gauge_amplitude: f64,
}

impl Default for JetSection {
    fn default() -> Self {
        let p = SuiteParams::default();
        JetSection { degree: p.degree, seeds: p.seeds, amplitude: p.amplitude, gauge_amplitude: p.gauge_amplitude }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Gauge,
    Noether,
    Strength,
    Commutators,
    Linearization,
    EulerLagrange,
    StrengthTransformation,
    CrossRepresentation,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::Gauge,
        CheckName::Noether,
        CheckName::Strength,
        CheckName::Commutators,
        CheckName::Linearization,
        CheckName::EulerLagrange,
        CheckName::StrengthTransformation,
        CheckName::CrossRepresentation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Gauge => "gauge",
            CheckName::Noether => "noether",
            CheckName::Strength => "strength",
            CheckName::Commutators => "commutators",
            CheckName::Linearization => "linearization",
            CheckName::EulerLagrange => "euler_lagrange",
            CheckName::StrengthTransformation => "strength_transformation",
            CheckName::CrossRepresentation => "cross_representation",
        }
    }
}

fn all_checks() -> Vec<CheckName> {
    CheckName::ALL.to_vec()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    /// Jacobi, metric invariance and homomorphism residuals.
    pub algebra: f64,
    /// Linear and quadratic coefficient relations.
    pub relations: f64,
    pub identities: Tolerances,
    /// Charge integrals against their expected values.
    pub charges: f64,
    /// Trace of the P-sector stress tensor.
    pub trace: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            algebra: 1e-12,
            relations: RELATION_TOL,
            identities: Tolerances::default(),
            charges: 1e-6,
            trace: 1e-12,
        }
    }
}

impl ToleranceSection {
    pub fn uniform(tol: f64) -> Self {
        ToleranceSection {
            algebra: tol,
            relations: tol,
            identities: Tolerances::uniform(tol),
            charges: tol,
            trace: tol,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegralSpec {
    Surface {
        charge: ChargeKind,
        radius: f64,
        #[serde(default = "default_n_theta")]
        n_theta: usize,
        #[serde(default = "default_n_phi")]
        n_phi: usize,
    },
    Line {
        radius: f64,
        #[serde(default = "default_n_points")]
        n_points: usize,
    },
}

fn default_n_theta() -> usize {
    64
}

fn default_n_phi() -> usize {
    128
}

fn default_n_points() -> usize {
    64
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChargeRun {
    pub sampler: BuiltinSampler,
    pub integral: IntegralSpec,
    /// Expected charges per internal index; compared at the charge tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CausalitySection {
    pub samples: usize,
    #[serde(default = "default_sample_amplitude")]
    pub amplitude: f64,
    /// Metric on A (size fixes n).
    pub inner_product: MatrixSpec,
    pub inner_product_prime: MatrixSpec,
}

fn default_sample_amplitude() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObservablesSection {
    #[serde(default)]
    pub charges: Vec<ChargeRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causality: Option<CausalitySection>,
}
