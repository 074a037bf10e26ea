//! Amendment: repairing unprojectable choreographies by inserting
//! selections, and the selection-expansion relation on label sequences.

use std::collections::BTreeMap;

use crate::cc::{ChorProgram, Choreography, DefSet, Eta, Procedure};
use crate::expr::BExpr;
use crate::ident::{Label, Pid};
use crate::label::TransitionLabel;
use crate::projection::projectable_dec;

/// Processes of `ps` (in order) that cannot project `if p.b then c1 else c2`.
/// The evaluator `p` is never included.
pub fn up_list(
    defs: &DefSet,
    p: &Pid,
    b: &BExpr,
    ps: &[Pid],
    c1: &Choreography,
    c2: &Choreography,
) -> Vec<Pid> {
    let cond = Choreography::Cond {
        at: p.clone(),
        guard: b.clone(),
        then_branch: Box::new(c1.clone()),
        else_branch: Box::new(c2.clone()),
    };
    ps.iter()
        .filter(|r| *r != p && !projectable_dec(defs, &cond, r))
        .cloned()
        .collect()
}

/// Prefixes `c` with `p -> r[l]` for every `r` in `ps`, in list order.
pub fn add_sels(p: &Pid, l: Label, ps: &[Pid], c: Choreography) -> Choreography {
    ps.iter().rev().fold(c, |acc, r| {
        Choreography::Prefix(
            Eta::Sel {
                from: p.clone(),
                to: r.clone(),
                label: l,
            },
            Box::new(acc),
        )
    })
}

/// Inserts, at the top of both branches of every conditional, selections
/// from the evaluator to each process of `ps` that could not otherwise
/// project it.
pub fn amend(defs: &DefSet, ps: &[Pid], c: &Choreography) -> Choreography {
    match c {
        Choreography::Prefix(eta, k) => {
            Choreography::Prefix(eta.clone(), Box::new(amend(defs, ps, k)))
        }
        Choreography::Cond {
            at,
            guard,
            then_branch,
            else_branch,
        } => {
            let c1 = amend(defs, ps, then_branch);
            let c2 = amend(defs, ps, else_branch);
            let informed = up_list(defs, at, guard, ps, &c1, &c2);
            Choreography::Cond {
                at: at.clone(),
                guard: guard.clone(),
                then_branch: Box::new(add_sels(at, Label::Left, &informed, c1)),
                else_branch: Box::new(add_sels(at, Label::Right, &informed, c2)),
            }
        }
        Choreography::RtCall {
            name,
            pending,
            body,
        } => Choreography::RtCall {
            name: name.clone(),
            pending: pending.clone(),
            body: Box::new(amend(defs, ps, body)),
        },
        Choreography::Call(_) | Choreography::End => c.clone(),
    }
}

/// Amends every procedure body against the original definitions.
pub fn amend_defs(defs: &DefSet, ps: &[Pid]) -> DefSet {
    defs.iter()
        .map(|(name, proc_)| {
            let body = amend(defs, ps, &proc_.body);
            (
                name.clone(),
                Procedure {
                    pids: proc_.pids.clone(),
                    body,
                },
            )
        })
        .collect()
}

/// Amends a whole program for all of its processes (in name order).
pub fn amend_program(prog: &ChorProgram) -> ChorProgram {
    let ps: Vec<Pid> = prog.processes().into_iter().collect();
    ChorProgram {
        procedures: amend_defs(&prog.procedures, &ps),
        main: amend(&prog.procedures, &ps, &prog.main),
    }
}

fn counts(labels: &[TransitionLabel]) -> BTreeMap<&TransitionLabel, isize> {
    let mut m = BTreeMap::new();
    for l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

/// `sel_exp tl expanded`: `expanded` is a permutation of `tl` with zero or
/// more extra selections.
pub fn sel_exp_check(tl: &[TransitionLabel], expanded: &[TransitionLabel]) -> bool {
    let mut diff = counts(expanded);
    for (l, n) in counts(tl) {
        *diff.entry(l).or_insert(0) -= n;
    }
    diff.iter()
        .all(|(l, n)| *n == 0 || (*n > 0 && l.is_selection()))
}
