//! Bounded-exploration checkers relating a choreography to its amendment
//! and to its endpoint projection, and checkers for function
//! implementation.
//!
//! Every check returns a [`Report`]. A `Counterexample` verdict always
//! carries a [`Witness`] whose trace can be replayed with
//! [`crate::lts::replay`] from the initial configuration of the named
//! [`System`].

mod amendment;
mod epp;
mod implements;
mod multiset;

use std::fmt;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

pub use amendment::{
    check_amend_complete, check_amend_sound, check_intermediate_formulation,
    check_naive_correspondence,
};
pub use epp::check_epp_correspondence;
pub use implements::{check_implements, check_sp_implements, FnTable, TableError};

use crate::cc::{ChorConfig, WfError};
use crate::label::{show_trace, TransitionLabel};
use crate::lts::ExecError;
use crate::projection::EppError;
use crate::sp::NetConfig;

/// Exploration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Length of the traces being checked.
    pub depth: usize,
    /// Extra steps allowed when searching for a matching continuation.
    pub search: usize,
    /// Maximum number of explored search nodes before giving up.
    pub budget: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            depth: 6,
            search: 6,
            budget: 1_000_000,
        }
    }
}

impl Bounds {
    pub fn new(depth: usize, search: usize) -> Bounds {
        Bounds {
            depth,
            search,
            ..Bounds::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsWithinBound,
    Counterexample,
    ResourceExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsWithinBound => "holds-within-bound",
            Verdict::Counterexample => "counterexample",
            Verdict::ResourceExhausted => "resource-exhausted",
        })
    }
}

/// Which program a witness trace runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// The checked choreographic program.
    Original,
    /// Its amendment.
    Amended,
    /// Its endpoint projection.
    Network,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessConfig {
    Chor(ChorConfig),
    Net(NetConfig),
}

impl fmt::Display for WitnessConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessConfig::Chor(c) => c.fmt(f),
            WitnessConfig::Net(n) => n.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub system: System,
    /// Label sequence from the system's initial configuration.
    pub trace: Vec<TransitionLabel>,
    /// The configuration the trace reaches.
    pub reached: WitnessConfig,
    pub explanation: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub explored: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: &'static str,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Report {
    pub(crate) fn holds(check: &'static str, stats: Stats) -> Report {
        Report {
            check,
            verdict: Verdict::HoldsWithinBound,
            witness: None,
            stats,
        }
    }

    pub(crate) fn exhausted(check: &'static str, stats: Stats) -> Report {
        Report {
            check,
            verdict: Verdict::ResourceExhausted,
            witness: None,
            stats,
        }
    }

    pub(crate) fn counterexample(check: &'static str, witness: Witness, stats: Stats) -> Report {
        Report {
            check,
            verdict: Verdict::Counterexample,
            witness: Some(witness),
            stats,
        }
    }

    pub fn holds_within_bound(&self) -> bool {
        self.verdict == Verdict::HoldsWithinBound
    }

    pub fn is_counterexample(&self) -> bool {
        self.verdict == Verdict::Counterexample
    }

    /// Machine-readable form: one record with verdict, witness and stats.
    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "system": w.system,
                "trace": w.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "labels": w.trace,
                "reached": w.reached.to_string(),
                "explanation": w.explanation,
            })
        });
        json!({
            "check": self.check,
            "verdict": self.verdict,
            "witness": witness,
            "stats": self.stats,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(w) = &self.witness {
            let system = match w.system {
                System::Original => "original",
                System::Amended => "amended",
                System::Network => "network",
            };
            writeln!(f, "witness ({system}): {}", show_trace(&w.trace))?;
            writeln!(f, "reached: {}", w.reached)?;
            writeln!(f, "why: {}", w.explanation)?;
        }
        write!(
            f,
            "explored: {} nodes, max depth {}",
            self.stats.explored, self.stats.max_depth
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("program is not well-formed: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<WfError>),
    #[error(transparent)]
    NotProjectable(#[from] EppError),
    #[error("network is not well-formed: process `{0}` addresses itself")]
    NetworkIllFormed(crate::ident::Pid),
    #[error("table has arity {table} but {inputs} input processes were given")]
    ArityMismatch { table: usize, inputs: usize },
    #[error(transparent)]
    Exec(#[from] ExecError),
}
