//! Merging, behaviour projection and endpoint projection (EPP).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cc::{ChorProgram, Choreography, DefSet, Eta};
use crate::ident::{Label, Pid, RecVar};
use crate::sp::{Behaviour, DefSetB, Network, SpProgram};

/// Partial merge of two behaviours: structural equality everywhere except
/// in branchings on the same partner, which combine option-wise.
pub fn merge(b1: &Behaviour, b2: &Behaviour) -> Option<Behaviour> {
    use Behaviour::*;
    match (b1, b2) {
        (End, End) => Some(End),
        (
            Send {
                to: t1,
                expr: e1,
                cont: k1,
            },
            Send {
                to: t2,
                expr: e2,
                cont: k2,
            },
        ) if t1 == t2 && e1 == e2 => Some(Send {
            to: t1.clone(),
            expr: e1.clone(),
            cont: Box::new(merge(k1, k2)?),
        }),
        (
            Recv {
                from: f1,
                var: x1,
                cont: k1,
            },
            Recv {
                from: f2,
                var: x2,
                cont: k2,
            },
        ) if f1 == f2 && x1 == x2 => Some(Recv {
            from: f1.clone(),
            var: x1.clone(),
            cont: Box::new(merge(k1, k2)?),
        }),
        (
            Choose {
                to: t1,
                label: l1,
                cont: k1,
            },
            Choose {
                to: t2,
                label: l2,
                cont: k2,
            },
        ) if t1 == t2 && l1 == l2 => Some(Choose {
            to: t1.clone(),
            label: *l1,
            cont: Box::new(merge(k1, k2)?),
        }),
        (
            Cond {
                guard: g1,
                then_branch: t1,
                else_branch: e1,
            },
            Cond {
                guard: g2,
                then_branch: t2,
                else_branch: e2,
            },
        ) if g1 == g2 => Some(Cond {
            guard: g1.clone(),
            then_branch: Box::new(merge(t1, t2)?),
            else_branch: Box::new(merge(e1, e2)?),
        }),
        (
            Branch {
                from: f1,
                left: l1,
                right: r1,
            },
            Branch {
                from: f2,
                left: l2,
                right: r2,
            },
        ) if f1 == f2 => Some(Branch {
            from: f1.clone(),
            left: merge_option(l1, l2)?,
            right: merge_option(r1, r2)?,
        }),
        (Call(x1), Call(x2)) if x1 == x2 => Some(Call(x1.clone())),
        _ => None,
    }
}

/// Slot-wise merge of branch options. The outer `None` means undefined.
fn merge_option(
    a: &Option<Box<Behaviour>>,
    b: &Option<Box<Behaviour>>,
) -> Option<Option<Box<Behaviour>>> {
    match (a, b) {
        (None, None) => Some(None),
        (Some(x), None) | (None, Some(x)) => Some(Some(x.clone())),
        (Some(x), Some(y)) => Some(Some(Box::new(merge(x, y)?))),
    }
}

/// Why a projection is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlameKind {
    /// The branches of this conditional project to unmergeable behaviours.
    Conditional(Choreography),
    /// A call to a procedure that is not defined.
    UndefinedProcedure(RecVar),
}

/// A failed projection: the offending term and the process it was projected on.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Blame {
    pub process: Pid,
    pub kind: BlameKind,
    /// Set when the failure is inside a procedure body.
    pub procedure: Option<RecVar>,
}

impl fmt::Display for Blame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BlameKind::Conditional(c) => {
                let head = match c {
                    Choreography::Cond { at, guard, .. } => format!("if {at}.{guard}"),
                    other => other.to_string(),
                };
                write!(
                    f,
                    "conditional `{head}` cannot be projected on `{}`",
                    self.process
                )?
            }
            BlameKind::UndefinedProcedure(x) => write!(
                f,
                "call to undefined procedure `{x}` while projecting on `{}`",
                self.process
            )?,
        }
        if let Some(x) = &self.procedure {
            write!(f, " (in procedure `{x}`)")?;
        }
        Ok(())
    }
}

/// Behaviour projection with the reason for failure. Calls project to the
/// callee's name unchanged; see [`epp`] for per-process instances.
pub fn project(defs: &DefSet, c: &Choreography, r: &Pid) -> Result<Behaviour, Blame> {
    let blame = |kind| Blame {
        process: r.clone(),
        kind,
        procedure: None,
    };
    Ok(match c {
        Choreography::Prefix(
            Eta::Com {
                from,
                expr,
                to,
                var,
            },
            k,
        ) => {
            let cont = project(defs, k, r)?;
            if r == from {
                Behaviour::Send {
                    to: to.clone(),
                    expr: expr.clone(),
                    cont: Box::new(cont),
                }
            } else if r == to {
                Behaviour::Recv {
                    from: from.clone(),
                    var: var.clone(),
                    cont: Box::new(cont),
                }
            } else {
                cont
            }
        }
        Choreography::Prefix(Eta::Sel { from, to, label }, k) => {
            let cont = project(defs, k, r)?;
            if r == from {
                Behaviour::Choose {
                    to: to.clone(),
                    label: *label,
                    cont: Box::new(cont),
                }
            } else if r == to {
                let cont = Some(Box::new(cont));
                match label {
                    Label::Left => Behaviour::Branch {
                        from: from.clone(),
                        left: cont,
                        right: None,
                    },
                    Label::Right => Behaviour::Branch {
                        from: from.clone(),
                        left: None,
                        right: cont,
                    },
                }
            } else {
                cont
            }
        }
        Choreography::Cond {
            at,
            guard,
            then_branch,
            else_branch,
        } => {
            let b1 = project(defs, then_branch, r)?;
            let b2 = project(defs, else_branch, r)?;
            if r == at {
                Behaviour::Cond {
                    guard: guard.clone(),
                    then_branch: Box::new(b1),
                    else_branch: Box::new(b2),
                }
            } else {
                merge(&b1, &b2).ok_or_else(|| blame(BlameKind::Conditional(c.clone())))?
            }
        }
        Choreography::Call(x) => {
            let proc_ = defs
                .get(x)
                .ok_or_else(|| blame(BlameKind::UndefinedProcedure(x.clone())))?;
            if proc_.pids.contains(r) {
                Behaviour::Call(x.clone())
            } else {
                Behaviour::End
            }
        }
        Choreography::RtCall {
            name,
            pending,
            body,
        } => {
            if pending.contains(r) {
                Behaviour::Call(name.clone())
            } else {
                project(defs, body, r)?
            }
        }
        Choreography::End => Behaviour::End,
    })
}

/// `[[D, C | r]]`, if defined.
pub fn bproj(defs: &DefSet, c: &Choreography, r: &Pid) -> Option<Behaviour> {
    project(defs, c, r).ok()
}

pub fn projectable_dec(defs: &DefSet, c: &Choreography, p: &Pid) -> bool {
    project(defs, c, p).is_ok()
}

pub fn projectable_list<'a>(
    defs: &DefSet,
    c: &Choreography,
    ps: impl IntoIterator<Item = &'a Pid>,
) -> bool {
    ps.into_iter().all(|p| projectable_dec(defs, c, p))
}

/// Name of the SP procedure implementing `name`'s part for process `p`.
pub fn instance_name(name: &RecVar, p: &Pid) -> RecVar {
    RecVar::new(format!("{name}@{p}"))
}

/// All projection failures of a program, main first, then procedures in name order.
pub fn projection_failures(prog: &ChorProgram) -> Vec<Blame> {
    let mut out = Vec::new();
    for p in prog.processes() {
        if let Err(b) = project(&prog.procedures, &prog.main, &p) {
            out.push(b);
        }
    }
    for (name, proc_) in &prog.procedures {
        for p in &proc_.pids {
            if let Err(mut b) = project(&prog.procedures, &proc_.body, p) {
                b.procedure = Some(name.clone());
                out.push(b);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("program is not projectable: {}", .failures.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("; "))]
pub struct EppError {
    pub failures: Vec<Blame>,
}

pub fn projectable_program(prog: &ChorProgram) -> bool {
    projection_failures(prog).is_empty()
}

/// Endpoint projection of a whole program. Procedure `X` becomes one SP
/// procedure `X@p` per declared participant `p`.
pub fn epp(prog: &ChorProgram) -> Result<SpProgram, EppError> {
    let failures = projection_failures(prog);
    if !failures.is_empty() {
        return Err(EppError { failures });
    }
    let instantiate = |b: Behaviour, p: &Pid| b.rename_calls(&|x| instance_name(x, p));
    let network: Network = prog
        .processes()
        .into_iter()
        .map(|p| {
            let b = project(&prog.procedures, &prog.main, &p).expect("checked above");
            let b = instantiate(b, &p);
            (p, b)
        })
        .collect();
    let mut procedures = DefSetB::new();
    for (name, proc_) in &prog.procedures {
        for p in &proc_.pids {
            let b = project(&prog.procedures, &proc_.body, p).expect("checked above");
            procedures.insert(instance_name(name, p), instantiate(b, p));
        }
    }
    Ok(SpProgram {
        procedures,
        network,
    })
}

/// Processes on which `c` is not projectable.
pub fn unprojectable_on<'a>(
    defs: &DefSet,
    c: &Choreography,
    ps: impl IntoIterator<Item = &'a Pid>,
) -> BTreeSet<Pid> {
    ps.into_iter()
        .filter(|p| !projectable_dec(defs, c, p))
        .cloned()
        .collect()
}
