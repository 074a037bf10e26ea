//! Stateful Processes: behaviours, networks and the labelled transition
//! semantics of network configurations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{BExpr, Expr};
use crate::ident::{Label, Pid, RecVar, Var};
use crate::label::TransitionLabel;
use crate::lts::{self, ExecError, Trace, TransitionSystem};
use crate::state::State;

/// The local program of a single process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Behaviour {
    /// `to!expr; cont`
    Send {
        to: Pid,
        expr: Expr,
        cont: Box<Behaviour>,
    },
    /// `from?var; cont`
    Recv {
        from: Pid,
        var: Var,
        cont: Box<Behaviour>,
    },
    /// `to+label; cont`
    Choose {
        to: Pid,
        label: Label,
        cont: Box<Behaviour>,
    },
    /// `from & left // right`, where an absent option refuses that label.
    Branch {
        from: Pid,
        left: Option<Box<Behaviour>>,
        right: Option<Box<Behaviour>>,
    },
    Cond {
        guard: BExpr,
        then_branch: Box<Behaviour>,
        else_branch: Box<Behaviour>,
    },
    Call(RecVar),
    End,
}

impl Behaviour {
    pub fn send(to: &str, expr: Expr, cont: Behaviour) -> Behaviour {
        Behaviour::Send {
            to: Pid::new(to),
            expr,
            cont: Box::new(cont),
        }
    }

    pub fn recv(from: &str, var: &str, cont: Behaviour) -> Behaviour {
        Behaviour::Recv {
            from: Pid::new(from),
            var: Var::new(var),
            cont: Box::new(cont),
        }
    }

    pub fn choose(to: &str, label: Label, cont: Behaviour) -> Behaviour {
        Behaviour::Choose {
            to: Pid::new(to),
            label,
            cont: Box::new(cont),
        }
    }

    pub fn branch(from: &str, left: Option<Behaviour>, right: Option<Behaviour>) -> Behaviour {
        Behaviour::Branch {
            from: Pid::new(from),
            left: left.map(Box::new),
            right: right.map(Box::new),
        }
    }

    pub fn cond(guard: BExpr, then_b: Behaviour, else_b: Behaviour) -> Behaviour {
        Behaviour::Cond {
            guard,
            then_branch: Box::new(then_b),
            else_branch: Box::new(else_b),
        }
    }

    pub fn call(name: &str) -> Behaviour {
        Behaviour::Call(RecVar::new(name))
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Behaviour::End)
    }

    /// Whether some action of the behaviour is addressed to `me`.
    pub fn addresses(&self, me: &Pid) -> bool {
        match self {
            Behaviour::Send { to: peer, cont, .. }
            | Behaviour::Recv {
                from: peer, cont, ..
            }
            | Behaviour::Choose { to: peer, cont, .. } => peer == me || cont.addresses(me),
            Behaviour::Branch { from, left, right } => {
                from == me
                    || left.as_ref().is_some_and(|b| b.addresses(me))
                    || right.as_ref().is_some_and(|b| b.addresses(me))
            }
            Behaviour::Cond {
                then_branch,
                else_branch,
                ..
            } => then_branch.addresses(me) || else_branch.addresses(me),
            Behaviour::Call(_) | Behaviour::End => false,
        }
    }

    /// Rewrites every `Call X` into `Call f(X)`.
    pub fn rename_calls(&self, f: &impl Fn(&RecVar) -> RecVar) -> Behaviour {
        let go = |b: &Behaviour| Box::new(b.rename_calls(f));
        match self {
            Behaviour::Send { to, expr, cont } => Behaviour::Send {
                to: to.clone(),
                expr: expr.clone(),
                cont: go(cont),
            },
            Behaviour::Recv { from, var, cont } => Behaviour::Recv {
                from: from.clone(),
                var: var.clone(),
                cont: go(cont),
            },
            Behaviour::Choose { to, label, cont } => Behaviour::Choose {
                to: to.clone(),
                label: *label,
                cont: go(cont),
            },
            Behaviour::Branch { from, left, right } => Behaviour::Branch {
                from: from.clone(),
                left: left.as_deref().map(go),
                right: right.as_deref().map(go),
            },
            Behaviour::Cond {
                guard,
                then_branch,
                else_branch,
            } => Behaviour::Cond {
                guard: guard.clone(),
                then_branch: go(then_branch),
                else_branch: go(else_branch),
            },
            Behaviour::Call(x) => Behaviour::Call(f(x)),
            Behaviour::End => Behaviour::End,
        }
    }
}

/// A map from processes to behaviours; unmapped processes behave as `End`.
/// `End` entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Network {
    procs: BTreeMap<Pid, Behaviour>,
}

impl Network {
    pub fn new() -> Network {
        Network::default()
    }

    /// `p[B]`
    pub fn singleton(p: Pid, b: Behaviour) -> Network {
        let mut n = Network::new();
        n.set(p, b);
        n
    }

    pub fn get(&self, p: &Pid) -> &Behaviour {
        const END: &Behaviour = &Behaviour::End;
        self.procs.get(p).unwrap_or(END)
    }

    pub fn set(&mut self, p: Pid, b: Behaviour) {
        if b.is_end() {
            self.procs.remove(&p);
        } else {
            self.procs.insert(p, b);
        }
    }

    /// `N | N'`: the left network wins wherever it is not `End`.
    pub fn compose(&self, other: &Network) -> Network {
        let mut out = other.clone();
        for (p, b) in &self.procs {
            out.procs.insert(p.clone(), b.clone());
        }
        out
    }

    /// `N \\ p`
    pub fn remove(&self, p: &Pid) -> Network {
        let mut out = self.clone();
        out.procs.remove(p);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pid, &Behaviour)> {
        self.procs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.procs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.procs.len()
    }
}

impl FromIterator<(Pid, Behaviour)> for Network {
    fn from_iter<I: IntoIterator<Item = (Pid, Behaviour)>>(iter: I) -> Self {
        let mut n = Network::new();
        for (p, b) in iter {
            n.set(p, b);
        }
        n
    }
}

pub fn network_singleton(p: &Pid, b: &Behaviour) -> Network {
    Network::singleton(p.clone(), b.clone())
}

pub fn network_compose(n: &Network, m: &Network) -> Network {
    n.compose(m)
}

pub fn network_remove(n: &Network, p: &Pid) -> Network {
    n.remove(p)
}

/// No behaviour addresses an action to its own process.
pub fn network_wf(n: &Network) -> bool {
    n.iter().all(|(p, b)| !b.addresses(p))
}

/// SP procedure definitions.
pub type DefSetB = BTreeMap<RecVar, Behaviour>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpProgram {
    pub procedures: DefSetB,
    pub network: Network,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpError {
    #[error("process `{0}` addresses an action to itself")]
    IllFormed(Pid),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

/// `(D, N, s) --[label]--> (D, network, state)`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpTransition {
    pub label: TransitionLabel,
    pub network: Network,
    pub state: State,
}

fn replace2(n: &Network, p: &Pid, b: &Behaviour, q: &Pid, b2: &Behaviour) -> Network {
    let mut out = n.clone();
    out.set(p.clone(), b.clone());
    out.set(q.clone(), b2.clone());
    out
}

/// Transitions of a network configuration, in canonical order.
pub fn transitions(defs: &DefSetB, n: &Network, s: &State) -> Result<Vec<SpTransition>, ExecError> {
    let mut out = Vec::new();
    for (p, b) in n.iter() {
        match b {
            Behaviour::Send { to: q, expr, cont } => {
                if let Behaviour::Recv {
                    from,
                    var,
                    cont: cont2,
                } = n.get(q)
                {
                    if from == p && q != p {
                        let v = expr.eval(s, p);
                        out.push(SpTransition {
                            label: TransitionLabel::Com {
                                from: p.clone(),
                                value: v,
                                to: q.clone(),
                            },
                            network: replace2(n, p, cont, q, cont2),
                            state: s.update(q, var, v),
                        });
                    }
                }
            }
            Behaviour::Choose { to: q, label, cont } => {
                if let Behaviour::Branch { from, left, right } = n.get(q) {
                    let offered = match label {
                        Label::Left => left,
                        Label::Right => right,
                    };
                    if let (true, Some(cont2)) = (from == p && q != p, offered) {
                        out.push(SpTransition {
                            label: TransitionLabel::Sel {
                                from: p.clone(),
                                to: q.clone(),
                                label: *label,
                            },
                            network: replace2(n, p, cont, q, cont2),
                            state: s.clone(),
                        });
                    }
                }
            }
            Behaviour::Cond {
                guard,
                then_branch,
                else_branch,
            } => {
                let taken = if guard.eval(s, p) {
                    then_branch
                } else {
                    else_branch
                };
                let mut next = n.clone();
                next.set(p.clone(), (**taken).clone());
                out.push(SpTransition {
                    label: TransitionLabel::Tau { at: p.clone() },
                    network: next,
                    state: s.clone(),
                });
            }
            Behaviour::Call(x) => {
                let body = defs
                    .get(x)
                    .ok_or_else(|| ExecError::UndefinedProcedure(x.clone()))?;
                let mut next = n.clone();
                next.set(p.clone(), body.clone());
                out.push(SpTransition {
                    label: TransitionLabel::Tau { at: p.clone() },
                    network: next,
                    state: s.clone(),
                });
            }
            Behaviour::Recv { .. } | Behaviour::Branch { .. } | Behaviour::End => {}
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn require_wf(n: &Network) -> Result<(), SpError> {
    match n.iter().find(|(p, b)| b.addresses(p)) {
        Some((p, _)) => Err(SpError::IllFormed(p.clone())),
        None => Ok(()),
    }
}

pub fn sp_enabled(defs: &DefSetB, n: &Network, s: &State) -> Result<Vec<SpTransition>, SpError> {
    require_wf(n)?;
    Ok(transitions(defs, n, s)?)
}

pub fn sp_traces(
    defs: &DefSetB,
    n: &Network,
    s: &State,
    depth: usize,
) -> Result<Vec<Trace<NetConfig>>, SpError> {
    require_wf(n)?;
    let init = NetConfig {
        network: n.clone(),
        state: s.clone(),
    };
    Ok(lts::traces(&SpSystem::new(defs), &init, depth)?)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetConfig {
    pub network: Network,
    pub state: State,
}

impl NetConfig {
    pub fn new(network: Network, state: State) -> NetConfig {
        NetConfig { network, state }
    }
}

impl fmt::Display for NetConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.network, self.state)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SpSystem<'a> {
    pub defs: &'a DefSetB,
}

impl<'a> SpSystem<'a> {
    pub fn new(defs: &'a DefSetB) -> Self {
        SpSystem { defs }
    }
}

impl TransitionSystem for SpSystem<'_> {
    type Config = NetConfig;

    fn successors(&self, c: &NetConfig) -> Result<Vec<(TransitionLabel, NetConfig)>, ExecError> {
        Ok(transitions(self.defs, &c.network, &c.state)?
            .into_iter()
            .map(|t| {
                (
                    t.label,
                    NetConfig {
                        network: t.network,
                        state: t.state,
                    },
                )
            })
            .collect())
    }

    fn is_terminated(&self, c: &NetConfig) -> bool {
        c.network.is_empty()
    }
}
