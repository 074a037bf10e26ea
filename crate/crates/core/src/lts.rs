//! Generic labelled-transition-system plumbing shared by both languages.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::ident::RecVar;
use crate::label::TransitionLabel;

/// Runtime failure while stepping a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("call to undefined procedure `{0}`")]
    UndefinedProcedure(RecVar),
}

/// A labelled transition system over configurations.
pub trait TransitionSystem: Sync {
    type Config: Clone + Ord + Hash + Debug + Send + Sync;

    /// All transitions of `config`, in canonical order.
    fn successors(
        &self,
        config: &Self::Config,
    ) -> Result<Vec<(TransitionLabel, Self::Config)>, ExecError>;

    /// True when `config` has successfully finished (as opposed to being stuck).
    fn is_terminated(&self, config: &Self::Config) -> bool;
}

/// A label sequence together with the configuration it reaches.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace<C> {
    pub labels: Vec<TransitionLabel>,
    pub config: C,
}

/// Every `(trace, configuration)` pair reachable in at most `depth` steps,
/// including the empty trace.
pub fn traces<S: TransitionSystem>(
    sys: &S,
    init: &S::Config,
    depth: usize,
) -> Result<Vec<Trace<S::Config>>, ExecError> {
    let mut all = BTreeSet::new();
    let mut frontier = vec![Trace {
        labels: Vec::new(),
        config: init.clone(),
    }];
    all.insert(frontier[0].clone());
    for _ in 0..depth {
        let mut next = Vec::new();
        for tr in &frontier {
            for (label, config) in sys.successors(&tr.config)? {
                let mut labels = tr.labels.clone();
                labels.push(label);
                let t = Trace { labels, config };
                if all.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

/// Traces of at most `depth` steps that cannot be extended.
pub fn maximal_traces<S: TransitionSystem>(
    sys: &S,
    init: &S::Config,
    depth: usize,
) -> Result<Vec<Trace<S::Config>>, ExecError> {
    let mut out = Vec::new();
    for t in traces(sys, init, depth)? {
        if sys.successors(&t.config)?.is_empty() {
            out.push(t);
        }
    }
    Ok(out)
}

/// Configurations reached from `init` by exactly the label sequence `trace`.
pub fn replay<S: TransitionSystem>(
    sys: &S,
    init: &S::Config,
    trace: &[TransitionLabel],
) -> Result<BTreeSet<S::Config>, ExecError> {
    let mut current = BTreeSet::from([init.clone()]);
    for label in trace {
        let mut next = BTreeSet::new();
        for c in &current {
            for (l, c2) in sys.successors(c)? {
                if &l == label {
                    next.insert(c2);
                }
            }
        }
        current = next;
    }
    Ok(current)
}
