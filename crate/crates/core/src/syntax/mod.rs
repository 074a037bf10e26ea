//! Surface syntax for choreographic programs, plus state and function-table
//! files.
//!
//! ```text
//! program := def* "main" "=" chor
//! def     := "def" NAME "(" pid ("," pid)* ")" "=" chor
//! chor    := eta ";" chor
//!          | "if" pid "." bexpr "then" "{" chor "}" "else" "{" chor "}"
//!          | "call" NAME | "end"
//! eta     := pid "." expr "->" pid "." var | pid "->" pid "[" ("left"|"right") "]"
//! expr    := NAT | var | "succ" "(" expr ")"
//! bexpr   := "true" | "false" | expr "==" expr | expr "<=" expr
//! ```
//!
//! `-->` is accepted as a synonym for `->`, and `//` starts a line comment.

mod files;
mod lexer;
mod parser;
mod render;

use std::fmt;

use serde::Serialize;

pub use files::{parse_state, parse_table};
pub use parser::{parse_program, parse_source};
pub use render::{
    render_behaviour, render_chor, render_network, render_program, render_sp_program,
};

use crate::cc::{ChorProgram, Choreography, Procedure};
use crate::ident::{Pid, RecVar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A 1-based line/column position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub start: Pos,
    pub end: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn error(start: Pos, end: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            start,
            end,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.start, self.message)
    }
}

/// Renders a list of diagnostics, one per line.
pub fn show_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: RecVar,
    pub pids: Vec<Pid>,
    pub body: Choreography,
}

/// A parsed source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceUnit {
    pub definitions: Vec<Definition>,
    pub main: Choreography,
}

impl SourceUnit {
    pub fn into_program(self) -> ChorProgram {
        ChorProgram {
            procedures: self
                .definitions
                .into_iter()
                .map(|d| {
                    (
                        d.name,
                        Procedure {
                            pids: d.pids,
                            body: d.body,
                        },
                    )
                })
                .collect(),
            main: self.main,
        }
    }
}

impl From<&ChorProgram> for SourceUnit {
    fn from(p: &ChorProgram) -> Self {
        SourceUnit {
            definitions: p
                .procedures
                .iter()
                .map(|(name, d)| Definition {
                    name: name.clone(),
                    pids: d.pids.clone(),
                    body: d.body.clone(),
                })
                .collect(),
            main: p.main.clone(),
        }
    }
}
