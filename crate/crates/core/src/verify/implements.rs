//! Checking that a program computes a given partial function.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Report, Stats, System, VerifyError, Witness, WitnessConfig};
use crate::cc::{CcSystem, ChorConfig, ChorProgram};
use crate::ident::{Pid, Var};
use crate::label::TransitionLabel;
use crate::lts::TransitionSystem;
use crate::sp::{network_wf, NetConfig, SpProgram, SpSystem};
use crate::state::State;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("row {row:?} has {got} inputs, expected {expected}")]
    Arity {
        row: Vec<u64>,
        got: usize,
        expected: usize,
    },
    #[error("row {0:?} is given twice")]
    Duplicate(Vec<u64>),
}

/// A finite partial function `N^arity -> N`, listed row by row. `None`
/// marks inputs on which the function is undefined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FnTable {
    pub arity: usize,
    pub entries: BTreeMap<Vec<u64>, Option<u64>>,
}

impl FnTable {
    pub fn new(arity: usize) -> FnTable {
        FnTable {
            arity,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, args: Vec<u64>, value: Option<u64>) -> Result<(), TableError> {
        if args.len() != self.arity {
            return Err(TableError::Arity {
                got: args.len(),
                expected: self.arity,
                row: args,
            });
        }
        if self.entries.contains_key(&args) {
            return Err(TableError::Duplicate(args));
        }
        self.entries.insert(args, value);
        Ok(())
    }

    /// Tabulates `f` on every argument tuple with components in `0..=max`.
    pub fn tabulate(arity: usize, max: u64, f: impl Fn(&[u64]) -> Option<u64>) -> FnTable {
        let mut table = FnTable::new(arity);
        let mut args = vec![0; arity];
        loop {
            table.entries.insert(args.clone(), f(&args));
            let Some(i) = args.iter().rposition(|&a| a < max) else {
                break;
            };
            args[i] += 1;
            for a in &mut args[i + 1..] {
                *a = 0;
            }
        }
        table
    }
}

fn input_state(inputs: &[Pid], args: &[u64]) -> State {
    let x = Var::new("x");
    State::from_entries(
        inputs
            .iter()
            .zip(args)
            .map(|(p, &n)| (p.clone(), x.clone(), n)),
    )
}

enum Outcome<C> {
    Holds,
    Exhausted,
    Counterexample(Vec<TransitionLabel>, C, String),
}

/// Explores every execution from `init` for at most `bound` steps and
/// checks it against `expected`.
fn check_entry<S: TransitionSystem>(
    sys: &S,
    init: S::Config,
    state_of: &impl Fn(&S::Config) -> &State,
    output: &Pid,
    expected: Option<u64>,
    bound: usize,
    stats: &mut Stats,
) -> Result<Outcome<S::Config>, VerifyError> {
    let x = Var::new("x");
    let mut info: HashMap<S::Config, (usize, Vec<TransitionLabel>)> = HashMap::new();
    let mut edges: HashMap<S::Config, Vec<S::Config>> = HashMap::new();
    let mut order = vec![init.clone()];
    info.insert(init, (0, Vec::new()));
    let mut cut = false;
    let mut i = 0;
    while i < order.len() {
        let c = order[i].clone();
        i += 1;
        let (depth, trace) = info[&c].clone();
        stats.max_depth = stats.max_depth.max(depth);
        let succs = sys.successors(&c)?;
        if succs.is_empty() {
            let terminated = sys.is_terminated(&c);
            let out = state_of(&c).get(output, &x);
            match expected {
                Some(n) if !terminated => {
                    return Ok(Outcome::Counterexample(
                        trace,
                        c,
                        format!("execution is stuck; expected output {n}"),
                    ));
                }
                Some(n) if out != n => {
                    return Ok(Outcome::Counterexample(
                        trace,
                        c,
                        format!("execution terminates with {output}.x = {out}; expected {n}"),
                    ));
                }
                None if terminated => {
                    return Ok(Outcome::Counterexample(
                        trace,
                        c,
                        format!(
                            "execution terminates with {output}.x = {out} on an undefined input"
                        ),
                    ));
                }
                _ => {}
            }
            continue;
        }
        if depth == bound {
            cut = true;
            continue;
        }
        let mut targets = Vec::with_capacity(succs.len());
        for (l, c2) in succs {
            if !info.contains_key(&c2) {
                let mut tr = trace.clone();
                tr.push(l);
                info.insert(c2.clone(), (depth + 1, tr));
                order.push(c2.clone());
            }
            targets.push(c2);
        }
        edges.insert(c, targets);
    }
    stats.explored += order.len();
    if expected.is_none() {
        return Ok(Outcome::Holds);
    }
    if cut {
        return Ok(Outcome::Exhausted);
    }
    // Everything was explored; a cycle means some execution never ends.
    if let Some(c) = find_cycle(&order[0], &edges) {
        let trace = info[&c].1.clone();
        let n = expected.unwrap_or_default();
        return Ok(Outcome::Counterexample(
            trace,
            c,
            format!("execution can loop forever; expected output {n}"),
        ));
    }
    Ok(Outcome::Holds)
}

/// A configuration lying on a cycle reachable from `root`, if any.
fn find_cycle<C: Clone + Eq + std::hash::Hash>(root: &C, edges: &HashMap<C, Vec<C>>) -> Option<C> {
    #[derive(PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<C, Mark> = HashMap::new();
    let mut stack: Vec<(C, usize)> = vec![(root.clone(), 0)];
    marks.insert(root.clone(), Mark::Open);
    while let Some((c, i)) = stack.pop() {
        let out = edges.get(&c).map(Vec::as_slice).unwrap_or(&[]);
        if i < out.len() {
            stack.push((c, i + 1));
            let d = &out[i];
            match marks.get(d) {
                Some(Mark::Open) => return Some(d.clone()),
                Some(Mark::Done) => {}
                None => {
                    marks.insert(d.clone(), Mark::Open);
                    stack.push((d.clone(), 0));
                }
            }
        } else {
            marks.insert(c, Mark::Done);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn check_table<S: TransitionSystem>(
    check: &'static str,
    system: System,
    sys: &S,
    init: impl Fn(State) -> S::Config,
    state_of: impl Fn(&S::Config) -> &State,
    wrap: impl Fn(S::Config) -> WitnessConfig,
    table: &FnTable,
    inputs: &[Pid],
    output: &Pid,
    bound: usize,
) -> Result<Report, VerifyError> {
    if table.arity != inputs.len() {
        return Err(VerifyError::ArityMismatch {
            table: table.arity,
            inputs: inputs.len(),
        });
    }
    let mut stats = Stats::default();
    let mut exhausted = false;
    for (args, expected) in &table.entries {
        let start = init(input_state(inputs, args));
        match check_entry(sys, start, &state_of, output, *expected, bound, &mut stats)? {
            Outcome::Holds => {}
            Outcome::Exhausted => exhausted = true,
            Outcome::Counterexample(trace, c, why) => {
                let args: Vec<String> = args.iter().map(u64::to_string).collect();
                let witness = Witness {
                    system,
                    trace,
                    reached: wrap(c),
                    explanation: format!("on input ({}): {why}", args.join(", ")),
                };
                return Ok(Report::counterexample(check, witness, stats));
            }
        }
    }
    if exhausted {
        return Ok(Report::exhausted(check, stats));
    }
    Ok(Report::holds(check, stats))
}

/// The program computes `table`: with the `i`-th argument stored in
/// variable `x` of `inputs[i]`, every execution of a defined entry ends
/// within `bound` steps at `end` with the result in `output.x`, and no
/// execution of an undefined entry reaches `end` within `bound` steps.
pub fn check_implements(
    prog: &ChorProgram,
    table: &FnTable,
    inputs: &[Pid],
    output: &Pid,
    bound: usize,
) -> Result<Report, VerifyError> {
    prog.check().map_err(VerifyError::IllFormed)?;
    let main = prog.main.clone();
    check_table(
        "implements",
        System::Original,
        &CcSystem::new(&prog.procedures),
        |s| ChorConfig::new(main.clone(), s),
        |c: &ChorConfig| &c.state,
        WitnessConfig::Chor,
        table,
        inputs,
        output,
        bound,
    )
}

/// As [`check_implements`], for a process network; termination means every
/// process has finished.
pub fn check_sp_implements(
    prog: &SpProgram,
    table: &FnTable,
    inputs: &[Pid],
    output: &Pid,
    bound: usize,
) -> Result<Report, VerifyError> {
    if let Some((p, _)) = prog.network.iter().find(|(p, b)| b.addresses(p)) {
        return Err(VerifyError::NetworkIllFormed(p.clone()));
    }
    debug_assert!(network_wf(&prog.network));
    let network = prog.network.clone();
    check_table(
        "sp-implements",
        System::Network,
        &SpSystem::new(&prog.procedures),
        |s| NetConfig::new(network.clone(), s),
        |c: &NetConfig| &c.state,
        WitnessConfig::Net,
        table,
        inputs,
        output,
        bound,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amend::amend_program;
    use crate::corpus;
    use crate::projection::epp;

    fn pids(names: &[&str]) -> Vec<Pid> {
        names.iter().map(Pid::new).collect()
    }

    #[test]
    fn tabulate_covers_every_tuple() {
        let t = FnTable::tabulate(2, 3, |a| Some(a[0] + a[1]));
        assert_eq!(t.entries.len(), 16);
        assert_eq!(t.entries[&vec![3, 2]], Some(5));
    }

    #[test]
    fn insert_rejects_bad_rows() {
        let mut t = FnTable::new(1);
        t.insert(vec![1], Some(2)).unwrap();
        assert!(matches!(
            t.insert(vec![1, 2], None),
            Err(TableError::Arity { .. })
        ));
        assert!(matches!(
            t.insert(vec![1], None),
            Err(TableError::Duplicate(_))
        ));
    }

    #[test]
    fn successor_program_implements_successor() {
        let prog = corpus::successor();
        let t = FnTable::tabulate(1, 3, |a| Some(a[0] + 1));
        let r = check_implements(&prog, &t, &pids(&["p"]), &Pid::new("q"), 10).unwrap();
        assert!(r.holds_within_bound(), "{r}");

        let wrong = FnTable::tabulate(1, 3, |a| Some(a[0]));
        let r = check_implements(&prog, &wrong, &pids(&["p"]), &Pid::new("q"), 10).unwrap();
        assert!(r.is_counterexample());
    }

    #[test]
    fn equality_test_implements_the_test_through_amendment_and_projection() {
        let prog = corpus::equality_test();
        let t = FnTable::tabulate(2, 3, |a| Some(u64::from(a[0] == a[1])));
        let ins = pids(&["p", "q"]);
        let out = Pid::new("r");
        assert!(check_implements(&prog, &t, &ins, &out, 10)
            .unwrap()
            .holds_within_bound());
        let amended = amend_program(&prog);
        let extra = amended.main.selection_count();
        assert!(check_implements(&amended, &t, &ins, &out, 10 + extra)
            .unwrap()
            .holds_within_bound());
        let net = epp(&amended).unwrap();
        assert!(check_sp_implements(&net, &t, &ins, &out, 10 + extra)
            .unwrap()
            .holds_within_bound());
    }

    #[test]
    fn looping_program_implements_the_empty_function() {
        let prog = corpus::ping_loop();
        let t = FnTable::tabulate(1, 2, |_| None);
        let r = check_implements(&prog, &t, &pids(&["p"]), &Pid::new("q"), 50).unwrap();
        assert!(r.holds_within_bound(), "{r}");
        let defined = FnTable::tabulate(1, 0, |_| Some(0));
        let r = check_implements(&prog, &defined, &pids(&["p"]), &Pid::new("q"), 50).unwrap();
        assert!(r.is_counterexample(), "{r}");
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let t = FnTable::new(2);
        let r = check_implements(&corpus::successor(), &t, &pids(&["p"]), &Pid::new("q"), 5);
        assert!(matches!(r, Err(VerifyError::ArityMismatch { .. })));
    }
}
