use std::fmt;

use cluster_crystal::cartan::{CartanError, WordError};
use cluster_crystal::crystal_x::CrystalError;
use cluster_crystal::oracle::OracleError;
use cluster_crystal::seed::SeedError;
use cluster_crystal::semifield::EvalError;
use cluster_crystal::tori::ToriError;
use serde_json::json;

/// Usage errors exit with 2, domain errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage { kind: &'static str, detail: String },
    Domain { kind: &'static str, detail: String },
}

impl CliError {
    pub fn usage(detail: impl Into<String>) -> CliError {
        CliError::Usage { kind: "usage", detail: detail.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, detail) = match self {
            CliError::Usage { kind, detail } | CliError::Domain { kind, detail } => (kind, detail),
        };
        json!({ "error": { "kind": kind, "detail": detail } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json().to_string())
    }
}

fn domain(kind: &'static str, e: impl fmt::Display) -> CliError {
    CliError::Domain { kind, detail: e.to_string() }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> CliError {
        domain("invalid_cartan", e)
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> CliError {
        match e {
            WordError::NotReduced(_) => domain("non_reduced_word", e),
            _ => domain("invalid_word", e),
        }
    }
}

impl From<SeedError> for CliError {
    fn from(e: SeedError) -> CliError {
        match e {
            SeedError::Word(w) => w.into(),
            SeedError::UnknownIndex(_) => domain("unknown_index", e),
            SeedError::MutationAtFrozen(_) => domain("frozen_mutation", e),
            SeedError::Malformed(_) => domain("malformed_seed", e),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        domain("evaluation", e)
    }
}

impl From<ToriError> for CliError {
    fn from(e: ToriError) -> CliError {
        match e {
            ToriError::Seed(s) => s.into(),
            ToriError::ChartBoundary(_) => domain("chart_boundary", e),
            ToriError::ZeroCoordinate(_) => domain("zero_coordinate", e),
            ToriError::LengthMismatch { .. } | ToriError::MissingCoordinate(_) => domain("malformed_point", e),
            ToriError::Eval(ev) => ev.into(),
        }
    }
}

impl From<CrystalError> for CliError {
    fn from(e: CrystalError) -> CliError {
        match e {
            CrystalError::Tori(t) => t.into(),
            CrystalError::DomainViolation => domain("chart_boundary", e),
            _ => domain("crystal", e),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::Tori(t) => t.into(),
            _ => domain("oracle", e),
        }
    }
}
