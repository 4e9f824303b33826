//! Experiment configuration files.

use std::path::Path;

use serde::Deserialize;
use sharp_ineq_core::extremals::ExtremalFamily;
use sharp_ineq_core::oracle::CrossCheck;
use sharp_ineq_core::{Kernel, Method, Modulus, QuadratureSpec, Space, TheoremId};

use crate::error::CliError;

/// One value or a list of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKindDesc {
    Continuum,
    Lattice,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub kind: SpaceKindDesc,
    pub d: usize,
    #[serde(default)]
    pub m: usize,
}

impl SpaceDesc {
    pub fn build(&self) -> Result<Space, CliError> {
        Ok(match self.kind {
            SpaceKindDesc::Continuum => Space::continuum(self.d, self.m)?,
            SpaceKindDesc::Lattice => Space::lattice(self.d, self.m)?,
        })
    }
}

/// `{"kind": "power", "alpha": a}` or `{"kind": "table", "points": [[t, ω], …]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusDesc {
    Power { alpha: f64 },
    Table { points: Vec<(f64, f64)> },
}

impl ModulusDesc {
    pub fn build(&self) -> Result<Modulus, CliError> {
        Ok(match self {
            ModulusDesc::Power { alpha } => Modulus::power(*alpha)?,
            ModulusDesc::Table { points } => Modulus::table(points.clone())?,
        })
    }
}

/// `{"kind": "power_law", "beta": b}` or `{"kind": "table", "points": [[t, P], …]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelDesc {
    PowerLaw { beta: f64 },
    Table { points: Vec<(f64, f64)> },
}

impl KernelDesc {
    pub fn build(&self) -> Result<Kernel, CliError> {
        Ok(match self {
            KernelDesc::PowerLaw { beta } => Kernel::power_law(*beta)?,
            KernelDesc::Table { points } => Kernel::table(points.clone())?,
        })
    }
}

/// `{"family": "f_eh" | "f_omega" | "f_e_omega" | "g_eh" | "G_eh", …}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum ExtremalDesc {
    #[serde(rename = "f_eh")]
    FEh,
    #[serde(rename = "f_omega")]
    FOmega {
        #[serde(default)]
        c: f64,
        #[serde(default = "plus")]
        sign: i8,
    },
    #[serde(rename = "f_e_omega")]
    FEOmega,
    #[serde(rename = "g_eh")]
    GEh,
    #[serde(rename = "G_eh")]
    BigGEh,
}

fn plus() -> i8 {
    1
}

impl ExtremalDesc {
    pub fn family(&self) -> ExtremalFamily {
        match self {
            ExtremalDesc::FEh => ExtremalFamily::FEh,
            ExtremalDesc::FOmega { c, sign } => ExtremalFamily::FOmega { c: *c, sign: *sign },
            ExtremalDesc::FEOmega => ExtremalFamily::FEOmega,
            ExtremalDesc::GEh => ExtremalFamily::GEh,
            ExtremalDesc::BigGEh => ExtremalFamily::BigGEh,
        }
    }
}

/// One random suite of the `oracle` command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteDesc {
    pub theorem: String,
    pub space: SpaceDesc,
    pub modulus: ModulusDesc,
    pub h: Vec<f64>,
    pub kernel: Option<KernelDesc>,
    pub trials: Option<usize>,
    pub seeds: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum CrossCheckDesc {
    BallIntegral { space: SpaceDesc, modulus: ModulusDesc, h: f64, samples: usize },
    KernelBallMass { space: SpaceDesc, modulus: ModulusDesc, kernel: KernelDesc, h: f64, samples: usize },
    KernelTailMass { space: SpaceDesc, kernel: KernelDesc, h: f64, samples: usize },
    SplitPoint { modulus: ModulusDesc, h: f64, d: usize, samples: usize },
}

impl CrossCheckDesc {
    pub fn build(&self) -> Result<(CrossCheck, usize), CliError> {
        Ok(match self {
            CrossCheckDesc::BallIntegral { space, modulus, h, samples } => {
                (CrossCheck::BallIntegral { space: space.build()?, omega: modulus.build()?, h: *h }, *samples)
            }
            CrossCheckDesc::KernelBallMass { space, modulus, kernel, h, samples } => (
                CrossCheck::KernelBallMass {
                    space: space.build()?,
                    omega: modulus.build()?,
                    kernel: kernel.build()?,
                    h: *h,
                },
                *samples,
            ),
            CrossCheckDesc::KernelTailMass { space, kernel, h, samples } => {
                (CrossCheck::KernelTailMass { space: space.build()?, kernel: kernel.build()?, h: *h }, *samples)
            }
            CrossCheckDesc::SplitPoint { modulus, h, d, samples } => {
                (CrossCheck::SplitPoint { omega: modulus.build()?, h: *h, d: *d }, *samples)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodDesc {
    ClosedForm,
    #[serde(rename = "radial_1d")]
    Radial1D,
    MonteCarlo,
    LatticeExact,
}

/// Overrides applied on top of the automatic choice for each space and
/// modulus.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureDesc {
    pub method: Option<MethodDesc>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl QuadratureDesc {
    pub fn build(&self, space: &Space, omega: &Modulus) -> Result<QuadratureSpec, CliError> {
        let mut q = QuadratureSpec::auto(space, omega);
        if let Some(m) = self.method {
            q.method = match m {
                MethodDesc::ClosedForm => Method::ClosedForm,
                MethodDesc::Radial1D => Method::Radial1D,
                MethodDesc::MonteCarlo => Method::MonteCarlo,
                MethodDesc::LatticeExact => Method::LatticeExact,
            };
        }
        q = q.with_tol(self.abs_tol.unwrap_or(q.tol.abs), self.rel_tol.unwrap_or(q.tol.rel));
        q = q.with_samples(self.mc_samples.unwrap_or(q.mc_samples), self.seed.unwrap_or(q.seed));
        q.validate()?;
        Ok(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDesc {
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// Everything a run needs. Which fields are required depends on the command.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: Option<OneOrMany<SpaceDesc>>,
    pub modulus: Option<OneOrMany<ModulusDesc>>,
    pub h: Option<Vec<f64>>,
    /// Operator norms for `stechkin`.
    pub n: Option<Vec<f64>>,
    pub theorem: Option<OneOrMany<String>>,
    pub extremal: Option<ExtremalDesc>,
    pub kernel: Option<KernelDesc>,
    pub suites: Option<Vec<SuiteDesc>>,
    pub cross_checks: Option<Vec<CrossCheckDesc>>,
    pub trials: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub quadrature: QuadratureDesc,
    #[serde(default)]
    pub output: OutputDesc,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn spaces(&self) -> Result<Vec<Space>, CliError> {
        let list = self.space.as_ref().ok_or_else(|| missing("space"))?.to_vec();
        if list.is_empty() {
            return Err(CliError::Config("space list is empty".into()));
        }
        list.iter().map(SpaceDesc::build).collect()
    }

    pub fn moduli(&self) -> Result<Vec<Modulus>, CliError> {
        let list = self.modulus.as_ref().ok_or_else(|| missing("modulus"))?.to_vec();
        if list.is_empty() {
            return Err(CliError::Config("modulus list is empty".into()));
        }
        list.iter().map(ModulusDesc::build).collect()
    }

    pub fn radii(&self) -> Result<Vec<f64>, CliError> {
        nonempty(self.h.clone(), "h")
    }

    pub fn norms(&self) -> Result<Vec<f64>, CliError> {
        nonempty(self.n.clone(), "n")
    }

    pub fn theorems(&self) -> Result<Vec<TheoremId>, CliError> {
        let list = self.theorem.as_ref().ok_or_else(|| missing("theorem"))?.to_vec();
        if list.is_empty() {
            return Err(CliError::Config("theorem list is empty".into()));
        }
        list.iter().map(|t| parse_theorem(t)).collect()
    }
}

pub fn parse_theorem(t: &str) -> Result<TheoremId, CliError> {
    t.parse().map_err(|_| CliError::Config(format!("unknown theorem id {t:?}")))
}

fn missing(field: &str) -> CliError {
    CliError::Config(format!("missing field {field:?}"))
}

fn nonempty(v: Option<Vec<f64>>, field: &str) -> Result<Vec<f64>, CliError> {
    let v = v.ok_or_else(|| missing(field))?;
    if v.is_empty() {
        return Err(CliError::Config(format!("{field:?} list is empty")));
    }
    Ok(v)
}
