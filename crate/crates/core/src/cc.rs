//! Core choreographies: syntax, well-formedness and the labelled
//! transition semantics of choreographic configurations, including
//! out-of-order execution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{BExpr, Expr};
use crate::ident::{Label, Pid, RecVar, Var};
use crate::label::TransitionLabel;
use crate::lts::{self, ExecError, Trace, TransitionSystem};
use crate::state::State;

/// A single interaction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Eta {
    /// `from.expr -> to.var`
    Com {
        from: Pid,
        expr: Expr,
        to: Pid,
        var: Var,
    },
    /// `from -> to[label]`
    Sel { from: Pid, to: Pid, label: Label },
}

impl Eta {
    pub fn com(from: &str, expr: Expr, to: &str, var: &str) -> Eta {
        Eta::Com {
            from: Pid::new(from),
            expr,
            to: Pid::new(to),
            var: Var::new(var),
        }
    }

    pub fn sel(from: &str, to: &str, label: Label) -> Eta {
        Eta::Sel {
            from: Pid::new(from),
            to: Pid::new(to),
            label,
        }
    }

    pub fn sender(&self) -> &Pid {
        match self {
            Eta::Com { from, .. } | Eta::Sel { from, .. } => from,
        }
    }

    pub fn receiver(&self) -> &Pid {
        match self {
            Eta::Com { to, .. } | Eta::Sel { to, .. } => to,
        }
    }

    fn disjoint_from(&self, t: &TransitionLabel) -> bool {
        !t.mentions(self.sender()) && !t.mentions(self.receiver())
    }
}

/// Global program terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Choreography {
    Prefix(Eta, Box<Choreography>),
    Cond {
        at: Pid,
        guard: BExpr,
        then_branch: Box<Choreography>,
        else_branch: Box<Choreography>,
    },
    Call(RecVar),
    /// A procedure call that some of its participants (`pending`) have not
    /// entered yet. Only produced at runtime.
    RtCall {
        name: RecVar,
        pending: Vec<Pid>,
        body: Box<Choreography>,
    },
    #[default]
    End,
}

impl Choreography {
    pub fn prefix(eta: Eta, cont: Choreography) -> Choreography {
        Choreography::Prefix(eta, Box::new(cont))
    }

    pub fn cond(
        at: &str,
        guard: BExpr,
        then_c: Choreography,
        else_c: Choreography,
    ) -> Choreography {
        Choreography::Cond {
            at: Pid::new(at),
            guard,
            then_branch: Box::new(then_c),
            else_branch: Box::new(else_c),
        }
    }

    pub fn call(name: &str) -> Choreography {
        Choreography::Call(RecVar::new(name))
    }

    /// Builds `eta1; eta2; ...; cont`.
    pub fn seq(etas: impl IntoIterator<Item = Eta>, cont: Choreography) -> Choreography {
        let etas: Vec<Eta> = etas.into_iter().collect();
        etas.into_iter()
            .rev()
            .fold(cont, |acc, e| Choreography::prefix(e, acc))
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Choreography::End)
    }

    /// Number of non-`End` constructors.
    pub fn size(&self) -> usize {
        match self {
            Choreography::Prefix(_, k) => 1 + k.size(),
            Choreography::Cond {
                then_branch,
                else_branch,
                ..
            } => 1 + then_branch.size() + else_branch.size(),
            Choreography::Call(_) => 1,
            Choreography::RtCall { body, .. } => 1 + body.size(),
            Choreography::End => 0,
        }
    }

    /// Whether the term contains any selection.
    pub fn selection_count(&self) -> usize {
        match self {
            Choreography::Prefix(Eta::Sel { .. }, k) => 1 + k.selection_count(),
            Choreography::Prefix(_, k) => k.selection_count(),
            Choreography::Cond {
                then_branch,
                else_branch,
                ..
            } => then_branch.selection_count() + else_branch.selection_count(),
            Choreography::RtCall { body, .. } => body.selection_count(),
            Choreography::Call(_) | Choreography::End => 0,
        }
    }

    /// Processes occurring in the term; calls contribute the declared
    /// participants of the callee.
    pub fn processes(&self, defs: &DefSet) -> BTreeSet<Pid> {
        let mut out = BTreeSet::new();
        self.collect_processes(defs, &mut out);
        out
    }

    fn collect_processes(&self, defs: &DefSet, out: &mut BTreeSet<Pid>) {
        match self {
            Choreography::Prefix(eta, k) => {
                out.insert(eta.sender().clone());
                out.insert(eta.receiver().clone());
                k.collect_processes(defs, out);
            }
            Choreography::Cond {
                at,
                then_branch,
                else_branch,
                ..
            } => {
                out.insert(at.clone());
                then_branch.collect_processes(defs, out);
                else_branch.collect_processes(defs, out);
            }
            Choreography::Call(x) => {
                if let Some(proc_) = defs.get(x) {
                    out.extend(proc_.pids.iter().cloned());
                }
            }
            Choreography::RtCall { pending, body, .. } => {
                out.extend(pending.iter().cloned());
                body.collect_processes(defs, out);
            }
            Choreography::End => {}
        }
    }

    fn collect_calls(&self, out: &mut BTreeSet<RecVar>) {
        match self {
            Choreography::Prefix(_, k) => k.collect_calls(out),
            Choreography::Cond {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.collect_calls(out);
                else_branch.collect_calls(out);
            }
            Choreography::Call(x) => {
                out.insert(x.clone());
            }
            Choreography::RtCall { name, body, .. } => {
                out.insert(name.clone());
                body.collect_calls(out);
            }
            Choreography::End => {}
        }
    }
}

/// A procedure: its participants and its body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Procedure {
    pub pids: Vec<Pid>,
    pub body: Choreography,
}

impl Procedure {
    pub fn new(pids: &[&str], body: Choreography) -> Procedure {
        Procedure {
            pids: pids.iter().map(Pid::new).collect(),
            body,
        }
    }
}

/// Procedure definitions of a choreographic program.
pub type DefSet = BTreeMap<RecVar, Procedure>;

/// A choreographic program: procedures plus the main choreography.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChorProgram {
    pub procedures: DefSet,
    pub main: Choreography,
}

impl ChorProgram {
    pub fn new(main: Choreography) -> ChorProgram {
        ChorProgram {
            procedures: DefSet::new(),
            main,
        }
    }

    pub fn with_procedure(mut self, name: &str, procedure: Procedure) -> ChorProgram {
        self.procedures.insert(RecVar::new(name), procedure);
        self
    }

    /// All processes used by the program: those of `main` and the declared
    /// participants of every procedure.
    pub fn processes(&self) -> BTreeSet<Pid> {
        let mut out = self.main.processes(&self.procedures);
        for proc_ in self.procedures.values() {
            out.extend(proc_.pids.iter().cloned());
        }
        out
    }

    pub fn check(&self) -> Result<(), Vec<WfError>> {
        let mut errors = Vec::new();
        wf_errors(&self.main, None, &mut errors);
        check_calls(&self.main, &self.procedures, None, &mut errors);
        for (name, proc_) in &self.procedures {
            let mut seen = BTreeSet::new();
            if proc_.pids.is_empty() {
                errors.push(WfError::NoParticipants(name.clone()));
            }
            for p in &proc_.pids {
                if !seen.insert(p) {
                    errors.push(WfError::DuplicateParticipant(name.clone(), p.clone()));
                }
            }
            wf_errors(&proc_.body, Some(name), &mut errors);
            check_calls(&proc_.body, &self.procedures, Some(name), &mut errors);
            for p in proc_.body.processes(&self.procedures) {
                if !seen.contains(&p) {
                    errors.push(WfError::UndeclaredProcess {
                        procedure: name.clone(),
                        process: p,
                    });
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.check().is_ok()
    }
}

/// Well-formedness violations.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WfError {
    #[error("process `{process}` communicates with itself{}", in_proc(.procedure))]
    SelfCommunication {
        process: Pid,
        procedure: Option<RecVar>,
    },
    #[error("runtime call of `{name}` lists process `{process}` twice")]
    DuplicatePending { name: RecVar, process: Pid },
    #[error("call to undefined procedure `{name}`{}", in_proc(.procedure))]
    UndefinedProcedure {
        name: RecVar,
        procedure: Option<RecVar>,
    },
    #[error("procedure `{0}` declares no participants")]
    NoParticipants(RecVar),
    #[error("procedure `{0}` declares participant `{1}` twice")]
    DuplicateParticipant(RecVar, Pid),
    #[error("procedure `{procedure}` uses undeclared process `{process}`")]
    UndeclaredProcess { procedure: RecVar, process: Pid },
}

fn in_proc(p: &Option<RecVar>) -> String {
    match p {
        Some(x) => format!(" in procedure `{x}`"),
        None => String::new(),
    }
}

fn wf_errors(c: &Choreography, in_procedure: Option<&RecVar>, out: &mut Vec<WfError>) {
    match c {
        Choreography::Prefix(eta, k) => {
            if eta.sender() == eta.receiver() {
                out.push(WfError::SelfCommunication {
                    process: eta.sender().clone(),
                    procedure: in_procedure.cloned(),
                });
            }
            wf_errors(k, in_procedure, out);
        }
        Choreography::Cond {
            then_branch,
            else_branch,
            ..
        } => {
            wf_errors(then_branch, in_procedure, out);
            wf_errors(else_branch, in_procedure, out);
        }
        Choreography::RtCall {
            name,
            pending,
            body,
        } => {
            let mut seen = BTreeSet::new();
            for p in pending {
                if !seen.insert(p) {
                    out.push(WfError::DuplicatePending {
                        name: name.clone(),
                        process: p.clone(),
                    });
                }
            }
            wf_errors(body, in_procedure, out);
        }
        Choreography::Call(_) | Choreography::End => {}
    }
}

fn check_calls(
    c: &Choreography,
    defs: &DefSet,
    in_procedure: Option<&RecVar>,
    out: &mut Vec<WfError>,
) {
    let mut calls = BTreeSet::new();
    c.collect_calls(&mut calls);
    for name in calls {
        if !defs.contains_key(&name) {
            out.push(WfError::UndefinedProcedure {
                name,
                procedure: in_procedure.cloned(),
            });
        }
    }
}

/// No process communicates with itself and runtime calls have no duplicate
/// pending participants.
pub fn cc_wf(c: &Choreography) -> bool {
    let mut errors = Vec::new();
    wf_errors(c, None, &mut errors);
    errors.is_empty()
}

pub fn program_wf(p: &ChorProgram) -> bool {
    p.is_well_formed()
}

pub fn cc_pn(p: &ChorProgram) -> BTreeSet<Pid> {
    p.processes()
}

/// `(D, C, s) --[label]--> (D, chor, state)`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CcTransition {
    pub label: TransitionLabel,
    pub chor: Choreography,
    pub state: State,
}

/// Errors of the checked entry points.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CcError {
    #[error("program is not well-formed: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<WfError>),
}

fn enter(name: &RecVar, pending: Vec<Pid>, body: &Choreography) -> Choreography {
    if pending.is_empty() {
        body.clone()
    } else {
        Choreography::RtCall {
            name: name.clone(),
            pending,
            body: Box::new(body.clone()),
        }
    }
}

fn without(ps: &[Pid], p: &Pid) -> Vec<Pid> {
    ps.iter().filter(|q| *q != p).cloned().collect()
}

fn push_steps(defs: &DefSet, c: &Choreography, s: &State, out: &mut Vec<CcTransition>) {
    match c {
        Choreography::Prefix(eta, k) => {
            match eta {
                Eta::Com {
                    from,
                    expr,
                    to,
                    var,
                } => {
                    let v = expr.eval(s, from);
                    out.push(CcTransition {
                        label: TransitionLabel::Com {
                            from: from.clone(),
                            value: v,
                            to: to.clone(),
                        },
                        chor: (**k).clone(),
                        state: s.update(to, var, v),
                    });
                }
                Eta::Sel { from, to, label } => out.push(CcTransition {
                    label: TransitionLabel::Sel {
                        from: from.clone(),
                        to: to.clone(),
                        label: *label,
                    },
                    chor: (**k).clone(),
                    state: s.clone(),
                }),
            }
            // CC_Delay_Eta
            let mut inner = Vec::new();
            push_steps(defs, k, s, &mut inner);
            for t in inner {
                if eta.disjoint_from(&t.label) {
                    out.push(CcTransition {
                        label: t.label,
                        chor: Choreography::Prefix(eta.clone(), Box::new(t.chor)),
                        state: t.state,
                    });
                }
            }
        }
        Choreography::Cond {
            at,
            guard,
            then_branch,
            else_branch,
        } => {
            let taken = if guard.eval(s, at) {
                then_branch
            } else {
                else_branch
            };
            out.push(CcTransition {
                label: TransitionLabel::Tau { at: at.clone() },
                chor: (**taken).clone(),
                state: s.clone(),
            });
            // CC_Delay_Cond: both branches must make the same move.
            let mut left = Vec::new();
            push_steps(defs, then_branch, s, &mut left);
            left.retain(|t| !t.label.mentions(at));
            if left.is_empty() {
                return;
            }
            let mut right = Vec::new();
            push_steps(defs, else_branch, s, &mut right);
            for l in &left {
                for r in &right {
                    if l.label == r.label && l.state == r.state {
                        out.push(CcTransition {
                            label: l.label.clone(),
                            chor: Choreography::Cond {
                                at: at.clone(),
                                guard: guard.clone(),
                                then_branch: Box::new(l.chor.clone()),
                                else_branch: Box::new(r.chor.clone()),
                            },
                            state: l.state.clone(),
                        });
                    }
                }
            }
        }
        Choreography::Call(name) => {
            if let Some(proc_) = defs.get(name) {
                for p in &proc_.pids {
                    out.push(CcTransition {
                        label: TransitionLabel::Tau { at: p.clone() },
                        chor: enter(name, without(&proc_.pids, p), &proc_.body),
                        state: s.clone(),
                    });
                }
            }
        }
        Choreography::RtCall {
            name,
            pending,
            body,
        } => {
            for p in pending {
                out.push(CcTransition {
                    label: TransitionLabel::Tau { at: p.clone() },
                    chor: enter(name, without(pending, p), body),
                    state: s.clone(),
                });
            }
            let mut inner = Vec::new();
            push_steps(defs, body, s, &mut inner);
            for t in inner {
                if pending.iter().all(|p| !t.label.mentions(p)) {
                    out.push(CcTransition {
                        label: t.label,
                        chor: Choreography::RtCall {
                            name: name.clone(),
                            pending: pending.clone(),
                            body: Box::new(t.chor),
                        },
                        state: t.state,
                    });
                }
            }
        }
        Choreography::End => {}
    }
}

/// Transitions of `(defs, c, s)` without checking well-formedness. Calls to
/// undefined procedures have no transitions.
pub fn transitions(defs: &DefSet, c: &Choreography, s: &State) -> Vec<CcTransition> {
    let mut out = Vec::new();
    push_steps(defs, c, s, &mut out);
    out.sort();
    out.dedup();
    out
}

fn require_wf(defs: &DefSet, c: &Choreography) -> Result<(), CcError> {
    let prog = ChorProgram {
        procedures: defs.clone(),
        main: c.clone(),
    };
    prog.check().map_err(CcError::IllFormed)
}

/// All transitions enabled in a well-formed configuration, in canonical order.
pub fn cc_enabled(
    defs: &DefSet,
    c: &Choreography,
    s: &State,
) -> Result<Vec<CcTransition>, CcError> {
    require_wf(defs, c)?;
    Ok(transitions(defs, c, s))
}

/// Every `(trace, choreography, state)` reachable within `depth` steps.
pub fn cc_traces(
    defs: &DefSet,
    c: &Choreography,
    s: &State,
    depth: usize,
) -> Result<Vec<Trace<ChorConfig>>, CcError> {
    require_wf(defs, c)?;
    let sys = CcSystem::new(defs);
    let init = ChorConfig {
        chor: c.clone(),
        state: s.clone(),
    };
    Ok(lts::traces(&sys, &init, depth).expect("choreography steps are infallible"))
}

/// A choreographic configuration (the procedure map lives in the system).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChorConfig {
    pub chor: Choreography,
    pub state: State,
}

impl ChorConfig {
    pub fn new(chor: Choreography, state: State) -> ChorConfig {
        ChorConfig { chor, state }
    }
}

impl fmt::Display for ChorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.chor, self.state)
    }
}

/// The transition system of a choreographic program's procedure map.
#[derive(Clone, Copy, Debug)]
pub struct CcSystem<'a> {
    pub defs: &'a DefSet,
}

impl<'a> CcSystem<'a> {
    pub fn new(defs: &'a DefSet) -> Self {
        CcSystem { defs }
    }
}

impl TransitionSystem for CcSystem<'_> {
    type Config = ChorConfig;

    fn successors(&self, c: &ChorConfig) -> Result<Vec<(TransitionLabel, ChorConfig)>, ExecError> {
        Ok(transitions(self.defs, &c.chor, &c.state)
            .into_iter()
            .map(|t| {
                (
                    t.label,
                    ChorConfig {
                        chor: t.chor,
                        state: t.state,
                    },
                )
            })
            .collect())
    }

    fn is_terminated(&self, c: &ChorConfig) -> bool {
        c.chor.is_end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn pid(s: &str) -> Pid {
        Pid::new(s)
    }

    #[test]
    fn buyer_seller_programs_are_well_formed() {
        assert!(cc_wf(&corpus::buyer_seller().main));
        assert!(program_wf(&corpus::buyer_seller_selections()));
        assert!(cc_wf(&Choreography::End));
    }

    #[test]
    fn self_communication_is_ill_formed() {
        let c = Choreography::prefix(Eta::com("p", Expr::var("e"), "p", "x"), Choreography::End);
        assert!(!cc_wf(&c));
    }

    #[test]
    fn undefined_call_is_ill_formed() {
        let p = ChorProgram::new(Choreography::call("X"));
        assert!(!program_wf(&p));
        assert!(matches!(
            p.check().unwrap_err()[0],
            WfError::UndefinedProcedure { .. }
        ));
    }

    #[test]
    fn body_outside_declared_pids_is_ill_formed() {
        let body = Choreography::prefix(Eta::com("q", Expr::var("e"), "r", "x"), Choreography::End);
        let p =
            ChorProgram::new(Choreography::End).with_procedure("X", Procedure::new(&["p"], body));
        assert!(!program_wf(&p));
    }

    #[test]
    fn duplicate_pending_is_ill_formed() {
        let c = Choreography::RtCall {
            name: RecVar::new("X"),
            pending: vec![pid("p"), pid("p")],
            body: Box::new(Choreography::End),
        };
        assert!(!cc_wf(&c));
    }

    #[test]
    fn process_sets() {
        assert_eq!(
            cc_pn(&corpus::buyer_seller()),
            BTreeSet::from([pid("buyer"), pid("seller")])
        );
        assert!(cc_pn(&ChorProgram::new(Choreography::End)).is_empty());
        let p = ChorProgram::new(Choreography::End)
            .with_procedure("X", Procedure::new(&["p", "q"], Choreography::End));
        assert_eq!(cc_pn(&p), BTreeSet::from([pid("p"), pid("q")]));
    }

    #[test]
    fn parallel_orders_run_in_either_order() {
        let l3 = corpus::two_orders();
        let steps = cc_enabled(&l3.procedures, &l3.main, &State::new()).unwrap();
        let labels: Vec<_> = steps.iter().map(|t| t.label.clone()).collect();
        assert_eq!(
            labels,
            vec![
                TransitionLabel::com("o", 0, "p"),
                TransitionLabel::com("o'", 0, "p'")
            ]
        );
    }

    #[test]
    fn tautological_guard_takes_then() {
        let x = Expr::var("x");
        let c1 = Choreography::prefix(Eta::sel("p", "q", Label::Left), Choreography::End);
        let c = Choreography::cond("p", BExpr::Eq(x.clone(), x), c1.clone(), Choreography::End);
        let steps = cc_enabled(&DefSet::new(), &c, &State::new()).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].label, TransitionLabel::tau("p"));
        assert_eq!(steps[0].chor, c1);
    }

    #[test]
    fn conditional_can_run_under_a_prefix() {
        let c = corpus::amend_counterexample();
        let steps = cc_enabled(&c.procedures, &c.main, &State::new()).unwrap();
        let labels: Vec<_> = steps.iter().map(|t| t.label.clone()).collect();
        assert!(labels.contains(&TransitionLabel::tau("r")));
        assert!(labels.contains(&TransitionLabel::com("p", 0, "q")));
        let after = steps
            .iter()
            .find(|t| t.label == TransitionLabel::tau("r"))
            .unwrap();
        assert_eq!(after.chor, corpus::amend_counterexample_step());
    }

    #[test]
    fn delayed_conditional_needs_both_branches() {
        let c = corpus::minimal_counterexample();
        let steps = cc_enabled(&c.procedures, &c.main, &State::new()).unwrap();
        let labels: Vec<_> = steps.iter().map(|t| t.label.clone()).collect();
        assert_eq!(
            labels,
            vec![TransitionLabel::com("q", 0, "r"), TransitionLabel::tau("p")]
        );

        // Different receiving variables give different states: no delay.
        let c = Choreography::cond(
            "p",
            BExpr::True,
            Choreography::prefix(Eta::com("q", Expr::Lit(1), "r", "x"), Choreography::End),
            Choreography::prefix(Eta::com("q", Expr::Lit(1), "r", "y"), Choreography::End),
        );
        let steps = transitions(&DefSet::new(), &c, &State::new());
        assert_eq!(steps.len(), 1);
    }

    #[test]
    fn procedure_entry_is_per_process() {
        let body = Choreography::prefix(Eta::com("p", Expr::Lit(1), "q", "x"), Choreography::End);
        let prog = ChorProgram::new(Choreography::call("X"))
            .with_procedure("X", Procedure::new(&["p", "q"], body.clone()));
        let s = State::new();
        let steps = cc_enabled(&prog.procedures, &prog.main, &s).unwrap();
        assert_eq!(steps.len(), 2);
        let rt = &steps[0].chor;
        assert_eq!(
            rt,
            &Choreography::RtCall {
                name: RecVar::new("X"),
                pending: vec![pid("q")],
                body: Box::new(body.clone())
            }
        );
        // The communication needs q, which has not entered yet.
        let next = transitions(&prog.procedures, rt, &s);
        assert_eq!(next.len(), 1);
        assert_eq!(next[0].label, TransitionLabel::tau("q"));
        assert_eq!(next[0].chor, body);
    }

    #[test]
    fn rejects_ill_formed_configuration() {
        let c = Choreography::prefix(Eta::com("p", Expr::Lit(0), "p", "x"), Choreography::End);
        assert!(cc_enabled(&DefSet::new(), &c, &State::new()).is_err());
    }

    #[test]
    fn traces_base_cases() {
        let l3 = corpus::two_orders();
        let t = cc_traces(&l3.procedures, &l3.main, &State::new(), 0).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].labels.is_empty());
        let t = cc_traces(&DefSet::new(), &Choreography::End, &State::new(), 5).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn two_orders_maximal_traces() {
        let l3 = corpus::two_orders();
        let sys = CcSystem::new(&l3.procedures);
        let s = State::from_entries([
            (pid("o"), Var::new("order"), 4),
            (pid("o'"), Var::new("order'"), 7),
        ]);
        let max = lts::maximal_traces(&sys, &ChorConfig::new(l3.main.clone(), s), 2).unwrap();
        assert_eq!(max.len(), 2);
        assert_eq!(
            max[0].labels,
            vec![
                TransitionLabel::com("o", 4, "p"),
                TransitionLabel::com("o'", 7, "p'")
            ]
        );
        assert_eq!(
            max[1].labels,
            vec![
                TransitionLabel::com("o'", 7, "p'"),
                TransitionLabel::com("o", 4, "p")
            ]
        );
        assert!(max.iter().all(|t| t.config.chor.is_end()));
        assert_eq!(max[0].config.state, max[1].config.state);
        assert_eq!(max[0].config.state.get(&pid("p'"), &Var::new("y")), 7);
    }
}
