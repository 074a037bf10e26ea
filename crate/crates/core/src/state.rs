//! Memory states: per-process variable stores with default value 0.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ident::{Pid, Var};

/// A finite map `(process, variable) -> value`. Absent keys read 0 and
/// zero entries are never stored, so structural equality is extensional
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct State {
    cells: BTreeMap<(Pid, Var), u64>,
}

impl State {
    pub fn new() -> State {
        State::default()
    }

    pub fn get(&self, p: &Pid, x: &Var) -> u64 {
        self.cells
            .get(&(p.clone(), x.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// `s[[p,x => v]]`.
    pub fn update(&self, p: &Pid, x: &Var, v: u64) -> State {
        let mut next = self.clone();
        next.set(p.clone(), x.clone(), v);
        next
    }

    pub fn set(&mut self, p: Pid, x: Var, v: u64) {
        if v == 0 {
            self.cells.remove(&(p, x));
        } else {
            self.cells.insert((p, x), v);
        }
    }

    /// Builds a canonical state from arbitrary entries; later entries win.
    pub fn from_entries<I>(entries: I) -> State
    where
        I: IntoIterator<Item = (Pid, Var, u64)>,
    {
        let mut s = State::new();
        for (p, x, v) in entries {
            s.set(p, x, v);
        }
        s
    }

    /// Nonzero entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&Pid, &Var, u64)> {
        self.cells.iter().map(|((p, x), v)| (p, x, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, x, v)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}.{x} = {v}")?;
        }
        f.write_str("}")
    }
}
