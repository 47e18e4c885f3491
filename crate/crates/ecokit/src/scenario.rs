//! Scenario files.
//!
//! A scenario is a TOML document with three top-level keys:
//!
//! ```toml
//! schema_version = "1"
//! kind = "hub"
//!
//! [body]
//! v_p = 0.0
//! t_p = 3.0
//! v_c = 10.0
//! t_c = 1.0
//! i_c = 20.0
//! n = 10
//! ```
//!
//! `kind` selects the layout of `body`. Unknown keys anywhere are rejected.

use std::fs;
use std::path::Path;

use ecokit_core::extensions::{ComparisonParams, FederatorTerms};
use ecokit_core::hub::{DerivativeMode, HubAverages, HubParams, ParametricHubModel};
use ecokit_core::response::Family;
use ecokit_core::viability::{AverageProfile, ViabilityParams};
use ecokit_core::{Ecosystem, Edge, Participant, TransactionTerms};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema_version {found:?} is not supported (expected {SCHEMA_VERSION:?})")]
    SchemaMismatch { found: String },
    #[error("unknown field {0}")]
    UnknownField(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Ecosystem,
    Hub,
    ParametricHub,
    Viability,
    Compare,
    Federator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub schema_version: String,
    pub body: Body,
}

impl Scenario {
    pub fn kind(&self) -> Kind {
        match self.body {
            Body::Ecosystem(_) => Kind::Ecosystem,
            Body::Hub(_) => Kind::Hub,
            Body::ParametricHub(_) => Kind::ParametricHub,
            Body::Viability(_) => Kind::Viability,
            Body::Compare(_) => Kind::Compare,
            Body::Federator(_) => Kind::Federator,
        }
    }

    pub fn to_toml_string(&self) -> Result<String, ScenarioError> {
        let body = match &self.body {
            Body::Ecosystem(b) => toml::Value::try_from(b),
            Body::Hub(b) => toml::Value::try_from(b),
            Body::ParametricHub(b) => toml::Value::try_from(b),
            Body::Viability(b) => toml::Value::try_from(b),
            Body::Compare(b) => toml::Value::try_from(b),
            Body::Federator(b) => toml::Value::try_from(b),
        }
        .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        let raw = RawScenario {
            schema_version: self.schema_version.clone(),
            kind: self.kind(),
            body,
        };
        toml::to_string(&raw).map_err(|e| ScenarioError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Ecosystem(EcosystemBody),
    Hub(HubBody),
    ParametricHub(ParametricHubBody),
    Viability(ViabilityBody),
    Compare(CompareBody),
    Federator(FederatorBody),
}

#[derive(Debug, Serialize, Deserialize)]
struct RawScenario {
    schema_version: String,
    kind: Kind,
    body: toml::Value,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantSpec {
    pub id: String,
    #[serde(default)]
    pub investment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub provider: String,
    pub consumer: String,
    pub v_p: f64,
    pub v_c: f64,
    pub t_p: f64,
    pub t_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcosystemBody {
    #[serde(default)]
    pub time_window: String,
    /// Subtract consumer investments from the total margin.
    #[serde(default = "yes")]
    pub include_investments: bool,
    /// Whether per-edge values are known to the analyst (`classify`).
    #[serde(default = "yes")]
    pub value_visible: bool,
    #[serde(default)]
    pub participants: Vec<ParticipantSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

impl EcosystemBody {
    pub fn to_ecosystem(&self) -> Ecosystem {
        let participants = self
            .participants
            .iter()
            .map(|p| Participant::new(p.id.clone(), p.investment))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let terms = TransactionTerms {
                    v_p: e.v_p,
                    v_c: e.v_c,
                    t_p: e.t_p,
                    t_c: e.t_c,
                    x: e.x,
                };
                Edge::new(e.provider.clone(), e.consumer.clone(), terms)
            })
            .collect();
        let mut eco = Ecosystem::new(participants, edges);
        eco.time_window = self.time_window.clone();
        eco
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubBody {
    pub v_p: f64,
    pub t_p: f64,
    pub v_c: f64,
    pub t_c: f64,
    pub i_c: f64,
    pub n: u64,
}

impl HubBody {
    pub fn params(&self) -> HubParams {
        HubParams {
            v_p: self.v_p,
            t_p: self.t_p,
            v_c: self.v_c,
            t_c: self.t_c,
            i_c: self.i_c,
            n: self.n,
        }
    }

    pub fn averages(&self) -> HubAverages {
        HubAverages {
            v_c: self.v_c,
            t_c: self.t_c,
            t_p: self.t_p,
            i_c: self.i_c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    /// `[a, b]`: `a + b·x`
    Linear,
    /// `[v, q]`: `v·n - q·n²`
    QuadraticValue,
    /// `[c]`: `c·(1 - 1/(n + 1))`
    Saturating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub family: FamilyName,
    pub coefficients: Vec<f64>,
}

impl FunctionSpec {
    pub fn to_family(&self) -> Result<Family, ScenarioError> {
        let c = &self.coefficients;
        let want = match self.family {
            FamilyName::Linear | FamilyName::QuadraticValue => 2,
            FamilyName::Saturating => 1,
        };
        if c.len() != want {
            return Err(ScenarioError::Invalid(format!(
                "{:?} takes {want} coefficients, got {}",
                self.family,
                c.len()
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(ScenarioError::Invalid("coefficients must be finite".into()));
        }
        Ok(match self.family {
            FamilyName::Linear => Family::Linear {
                intercept: c[0],
                slope: c[1],
            },
            FamilyName::QuadraticValue => Family::QuadraticValue {
                linear: c[0],
                quadratic: c[1],
            },
            FamilyName::Saturating => Family::Saturating { scale: c[0] },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSpec {
    #[default]
    Analytic,
    CentralDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricHubBody {
    pub n_of_x: FunctionSpec,
    pub v_c_of_n: FunctionSpec,
    pub t_c_of_n: FunctionSpec,
    pub v_p: f64,
    pub t_p: f64,
    #[serde(default)]
    pub derivative: DerivativeSpec,
    /// Search bracket `[low, high]` for both optimal fees.
    pub bracket: [f64; 2],
}

pub type FamilyModel = ParametricHubModel<Family, Family, Family>;

impl ParametricHubBody {
    pub fn model(&self) -> Result<FamilyModel, ScenarioError> {
        Ok(ParametricHubModel {
            n_of_x: self.n_of_x.to_family()?,
            v_c_of_n: self.v_c_of_n.to_family()?,
            t_c_of_n: self.t_c_of_n.to_family()?,
            v_p: self.v_p,
            t_p: self.t_p,
            derivative_mode: match self.derivative {
                DerivativeSpec::Analytic => DerivativeMode::Analytic,
                DerivativeSpec::CentralDifference => DerivativeMode::CentralDifference,
            },
        })
    }
}

fn default_grid_extent() -> u64 {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViabilityBody {
    pub v_c: f64,
    pub t_c: f64,
    pub i_c: f64,
    pub t_p: f64,
    /// Consumer and provider counts evaluated by `check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default = "default_grid_extent")]
    pub n_max: u64,
    #[serde(default = "default_grid_extent")]
    pub m_max: u64,
}

impl ViabilityBody {
    pub fn params(&self) -> ViabilityParams {
        ViabilityParams {
            v_c: self.v_c,
            t_c: self.t_c,
            i_c: self.i_c,
            t_p: self.t_p,
        }
    }

    pub fn profile(&self) -> Option<AverageProfile> {
        Some(AverageProfile {
            n: self.n?,
            m: self.m?,
            averages: self.params(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareBody {
    pub delta_v: f64,
    pub t_p_g: f64,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_d: Option<f64>,
}

impl CompareBody {
    pub fn params(&self) -> ComparisonParams {
        ComparisonParams {
            delta_v: self.delta_v,
            t_p_g: self.t_p_g,
            alpha: self.alpha,
            beta: self.beta,
            t_d: self.t_d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FederatorBody {
    pub v_p: f64,
    pub v_c: f64,
    pub t_p: f64,
    pub t_c: f64,
    pub f_p: f64,
    pub f_c: f64,
    pub t_f: f64,
}

impl FederatorBody {
    pub fn terms(&self) -> TransactionTerms {
        TransactionTerms::new(self.v_p, self.v_c, self.t_p, self.t_c)
    }

    pub fn federator(&self) -> FederatorTerms {
        FederatorTerms {
            f_p: self.f_p,
            f_c: self.f_c,
            t_f: self.t_f,
        }
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    parse_scenario(&fs::read_to_string(path)?)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut unknown = Vec::new();
    let raw: RawScenario = serde_ignored::deserialize(toml::Deserializer::new(text), |path| {
        unknown.push(path.to_string())
    })
    .map_err(|e| ScenarioError::Parse(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::SchemaMismatch {
            found: raw.schema_version,
        });
    }
    if let Some(field) = unknown.into_iter().next() {
        return Err(ScenarioError::UnknownField(field));
    }
    let body = match raw.kind {
        Kind::Ecosystem => Body::Ecosystem(strict_body(raw.body)?),
        Kind::Hub => Body::Hub(strict_body(raw.body)?),
        Kind::ParametricHub => {
            let b: ParametricHubBody = strict_body(raw.body)?;
            b.model()?;
            Body::ParametricHub(b)
        }
        Kind::Viability => Body::Viability(strict_body(raw.body)?),
        Kind::Compare => Body::Compare(strict_body(raw.body)?),
        Kind::Federator => Body::Federator(strict_body(raw.body)?),
    };
    Ok(Scenario {
        schema_version: raw.schema_version,
        body,
    })
}

fn strict_body<T: DeserializeOwned>(value: toml::Value) -> Result<T, ScenarioError> {
    let mut unknown = Vec::new();
    let body = serde_ignored::deserialize(value, |path| unknown.push(format!("body.{path}")))
        .map_err(|e| ScenarioError::Parse(format!("body: {e}")))?;
    match unknown.into_iter().next() {
        Some(field) => Err(ScenarioError::UnknownField(field)),
        None => Ok(body),
    }
}
