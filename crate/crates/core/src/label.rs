//! Observable transition labels shared by both transition systems.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ident::{Label, Pid};

/// What a single transition shows to an observer of the network.
///
/// The derived ordering is the canonical order used whenever transitions
/// are enumerated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TransitionLabel {
    /// `p` sent value `value` to `q`.
    Com { from: Pid, value: u64, to: Pid },
    /// `p` sent selection label `label` to `q`.
    Sel { from: Pid, to: Pid, label: Label },
    /// Internal action of `p`.
    Tau { at: Pid },
}

impl TransitionLabel {
    pub fn com(from: &str, value: u64, to: &str) -> Self {
        TransitionLabel::Com {
            from: Pid::new(from),
            value,
            to: Pid::new(to),
        }
    }

    pub fn sel(from: &str, to: &str, label: Label) -> Self {
        TransitionLabel::Sel {
            from: Pid::new(from),
            to: Pid::new(to),
            label,
        }
    }

    pub fn tau(at: &str) -> Self {
        TransitionLabel::Tau { at: Pid::new(at) }
    }

    pub fn is_selection(&self) -> bool {
        matches!(self, TransitionLabel::Sel { .. })
    }

    /// Processes mentioned by the label: `{p, q}` or `{p}`.
    pub fn processes(&self) -> Vec<&Pid> {
        match self {
            TransitionLabel::Com { from, to, .. } | TransitionLabel::Sel { from, to, .. } => {
                vec![from, to]
            }
            TransitionLabel::Tau { at } => vec![at],
        }
    }

    pub fn mentions(&self, p: &Pid) -> bool {
        self.processes().into_iter().any(|q| q == p)
    }
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Com { from, value, to } => write!(f, "com({from},{value},{to})"),
            TransitionLabel::Sel { from, to, label } => write!(f, "sel({from},{to},{label})"),
            TransitionLabel::Tau { at } => write!(f, "tau({at})"),
        }
    }
}

/// Renders a label sequence as `[l1, l2, ...]`.
pub fn show_trace(trace: &[TransitionLabel]) -> String {
    let items: Vec<String> = trace.iter().map(|t| t.to_string()).collect();
    format!("[{}]", items.join(", "))
}
