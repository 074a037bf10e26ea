//! Checks relating a program to its amendment.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::multiset::{self, Split};
use super::{Bounds, Report, Stats, System, VerifyError, Witness, WitnessConfig};
use crate::amend::{amend, amend_program};
use crate::cc::{CcSystem, ChorConfig, ChorProgram, Choreography};
use crate::ident::Pid;
use crate::label::{show_trace, TransitionLabel};
use crate::lts::TransitionSystem;
use crate::state::State;

struct Pair {
    original: ChorProgram,
    amended: ChorProgram,
    ps: Vec<Pid>,
}

impl Pair {
    fn new(prog: &ChorProgram) -> Result<Pair, VerifyError> {
        prog.check().map_err(VerifyError::IllFormed)?;
        Ok(Pair {
            original: prog.clone(),
            amended: amend_program(prog),
            ps: prog.processes().into_iter().collect(),
        })
    }

    fn amend(&self, c: &Choreography) -> Choreography {
        amend(&self.original.procedures, &self.ps, c)
    }
}

fn succ(sys: &CcSystem<'_>, c: &ChorConfig) -> Vec<(TransitionLabel, ChorConfig)> {
    sys.successors(c)
        .expect("choreography steps are infallible")
}

/// Configurations reachable in at most `depth` steps, in breadth-first order,
/// each with a shortest trace reaching it.
fn reachable(
    sys: &CcSystem<'_>,
    init: &ChorConfig,
    depth: usize,
    budget: usize,
) -> (Vec<(ChorConfig, Vec<TransitionLabel>)>, bool) {
    let mut seen = HashSet::from([init.clone()]);
    let mut out = vec![(init.clone(), Vec::new())];
    let mut start = 0;
    for _ in 0..depth {
        let end = out.len();
        for i in start..end {
            for (l, c) in succ(sys, &out[i].0.clone()) {
                if seen.insert(c.clone()) {
                    let mut tr = out[i].1.clone();
                    tr.push(l);
                    out.push((c, tr));
                    if out.len() > budget {
                        return (out, true);
                    }
                }
            }
        }
        if out.len() == end {
            break;
        }
        start = end;
    }
    (out, false)
}

/// Every configuration reachable in the original program by a trace of at
/// most `depth` steps must, once amended, be reachable in the amended
/// program by a trace with the same non-selection labels. The search bound
/// is not used: the non-selection budget already bounds the target side.
pub fn check_naive_correspondence(
    prog: &ChorProgram,
    s: &State,
    bounds: Bounds,
) -> Result<Report, VerifyError> {
    const CHECK: &str = "naive";
    let pair = Pair::new(prog)?;
    let osys = CcSystem::new(&pair.original.procedures);
    let asys = CcSystem::new(&pair.amended.procedures);
    let identity = |c: &Choreography| c.clone();
    let (index, target_nodes, target_cut) = target_index(
        &asys,
        &ChorConfig::new(pair.amended.main.clone(), s.clone()),
        &identity,
        bounds.depth,
        bounds.budget,
    );

    let init = ChorConfig::new(prog.main.clone(), s.clone());
    let mut seen = HashSet::from([(init.clone(), Split::default())]);
    let mut queue = VecDeque::from([(init, Split::default(), Vec::<TransitionLabel>::new())]);
    let mut source_cut = false;
    let mut missing = None;
    while let Some((c, ms, tr)) = queue.pop_front() {
        let key = (pair.amend(&c.chor), c.state.clone(), ms.other.clone());
        if !index.contains_key(&key) {
            missing = Some((c, tr));
            break;
        }
        if tr.len() == bounds.depth {
            continue;
        }
        for (l, c2) in succ(&osys, &c) {
            let ms2 = ms.push(&l);
            if seen.insert((c2.clone(), ms2.clone())) {
                if seen.len() > bounds.budget {
                    source_cut = true;
                    break;
                }
                let mut tr2 = tr.clone();
                tr2.push(l);
                queue.push_back((c2, ms2, tr2));
            }
        }
    }
    let stats = Stats {
        explored: seen.len() + target_nodes,
        max_depth: bounds.depth,
    };
    if let Some((c, tr)) = missing {
        if target_cut {
            return Ok(Report::exhausted(CHECK, stats));
        }
        let witness = Witness {
            system: System::Original,
            trace: tr,
            reached: WitnessConfig::Chor(c),
            explanation: "no trace of the amended program with the same non-selection labels reaches the amendment of this configuration".to_string(),
        };
        return Ok(Report::counterexample(CHECK, witness, stats));
    }
    if source_cut || target_cut {
        return Ok(Report::exhausted(CHECK, stats));
    }
    Ok(Report::holds(CHECK, stats))
}

type Key = (Choreography, State, multiset::Multiset);

/// Index of the configurations reachable in `sys` with at most `cap`
/// non-selection labels, keyed by the (re-keyed) configuration and the
/// non-selection multiset, listing every selection multiset seen there.
fn target_index(
    sys: &CcSystem<'_>,
    init: &ChorConfig,
    key: &(dyn Fn(&Choreography) -> Choreography + Sync),
    cap: usize,
    budget: usize,
) -> (HashMap<Key, Vec<multiset::Multiset>>, usize, bool) {
    let mut seen = HashSet::new();
    let mut index: HashMap<Key, Vec<multiset::Multiset>> = HashMap::new();
    let mut queue = VecDeque::from([(init.clone(), Split::default())]);
    seen.insert((init.clone(), Split::default()));
    while let Some((c, ms)) = queue.pop_front() {
        index
            .entry((key(&c.chor), c.state.clone(), ms.other.clone()))
            .or_default()
            .push(ms.sels.clone());
        for (l, c2) in succ(sys, &c) {
            let ms2 = ms.push(&l);
            if ms2.other.len() > cap {
                continue;
            }
            if seen.insert((c2.clone(), ms2.clone())) {
                if seen.len() > budget {
                    return (index, seen.len(), true);
                }
                queue.push_back((c2, ms2));
            }
        }
    }
    (index, seen.len(), false)
}

/// Outcome of searching for a matching continuation.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Search {
    Matched,
    /// Every continuation was explored without a match.
    Failed,
    /// The search bound stopped the search first.
    Cut,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Target selections must include the source's.
    TargetExpands,
    /// Source selections must include the target's.
    SourceExpands,
}

struct Side<'a> {
    system: System,
    sys: CcSystem<'a>,
    init: ChorConfig,
    key: &'a (dyn Fn(&Choreography) -> Choreography + Sync),
}

/// For every trace of at most `depth` steps on the source side there is an
/// extension of at most `search` steps and a target trace ending in the
/// same configuration (after re-keying) whose labels relate as `dir` says.
fn correspondence(
    check: &'static str,
    source: Side<'_>,
    target: Side<'_>,
    dir: Direction,
    bounds: Bounds,
) -> Report {
    let (index, target_nodes, target_cut) = target_index(
        &target.sys,
        &target.init,
        target.key,
        bounds.depth + bounds.search,
        bounds.budget,
    );

    // Source nodes: (configuration, label multiset) with one witness trace.
    let mut seen = HashSet::from([(source.init.clone(), Split::default())]);
    let mut nodes = vec![(
        source.init.clone(),
        Split::default(),
        Vec::<TransitionLabel>::new(),
    )];
    let mut start = 0;
    let mut source_cut = false;
    'levels: for _ in 0..bounds.depth {
        let end = nodes.len();
        for i in start..end {
            let (c, ms, tr) = nodes[i].clone();
            for (l, c2) in succ(&source.sys, &c) {
                let ms2 = ms.push(&l);
                if seen.insert((c2.clone(), ms2.clone())) {
                    let mut tr2 = tr.clone();
                    tr2.push(l);
                    nodes.push((c2, ms2, tr2));
                    if nodes.len() > bounds.budget {
                        source_cut = true;
                        break 'levels;
                    }
                }
            }
        }
        if nodes.len() == end {
            break;
        }
        start = end;
    }

    let explored = AtomicUsize::new(target_nodes + nodes.len());
    let matches = |c: &ChorConfig, ms: &Split| -> bool {
        let k = ((source.key)(&c.chor), c.state.clone(), ms.other.clone());
        index.get(&k).is_some_and(|sels| {
            sels.iter().any(|t| match dir {
                Direction::TargetExpands => multiset::is_sub(&ms.sels, t),
                Direction::SourceExpands => multiset::is_sub(t, &ms.sels),
            })
        })
    };
    let results: Vec<Search> = nodes
        .par_iter()
        .map(|(c, ms, _)| {
            let mut seen = HashSet::from([(c.clone(), ms.clone())]);
            let mut frontier = vec![(c.clone(), ms.clone())];
            let mut outcome = Search::Failed;
            for step in 0..=bounds.search {
                for (c, ms) in &frontier {
                    if matches(c, ms) {
                        explored.fetch_add(seen.len(), Ordering::Relaxed);
                        return Search::Matched;
                    }
                }
                if step == bounds.search {
                    if frontier
                        .iter()
                        .any(|(c, _)| !succ(&source.sys, c).is_empty())
                    {
                        outcome = Search::Cut;
                    }
                    break;
                }
                let mut next = Vec::new();
                for (c, ms) in &frontier {
                    for (l, c2) in succ(&source.sys, c) {
                        let ms2 = ms.push(&l);
                        if seen.insert((c2.clone(), ms2.clone())) {
                            next.push((c2, ms2));
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                frontier = next;
            }
            explored.fetch_add(seen.len(), Ordering::Relaxed);
            outcome
        })
        .collect();

    let stats = Stats {
        explored: explored.load(Ordering::Relaxed),
        max_depth: bounds.depth + bounds.search,
    };
    if let Some(i) = results.iter().position(|r| *r == Search::Failed) {
        if target_cut {
            return Report::exhausted(check, stats);
        }
        let (c, _, tr) = &nodes[i];
        let other = match target.system {
            System::Original => "original",
            System::Amended => "amended",
            System::Network => "network",
        };
        let witness = Witness {
            system: source.system,
            trace: tr.clone(),
            reached: WitnessConfig::Chor(c.clone()),
            explanation: format!(
                "no extension of {} is matched by a trace of the {other} program",
                show_trace(tr)
            ),
        };
        return Report::counterexample(check, witness, stats);
    }
    if source_cut || target_cut || results.contains(&Search::Cut) {
        return Report::exhausted(check, stats);
    }
    Report::holds(check, stats)
}

/// Every behaviour of the original program is matched by the amended
/// program, up to inserted selections.
pub fn check_amend_complete(
    prog: &ChorProgram,
    s: &State,
    bounds: Bounds,
) -> Result<Report, VerifyError> {
    let pair = Pair::new(prog)?;
    let amend_key = |c: &Choreography| pair.amend(c);
    let identity = |c: &Choreography| c.clone();
    let source = Side {
        system: System::Original,
        sys: CcSystem::new(&pair.original.procedures),
        init: ChorConfig::new(pair.original.main.clone(), s.clone()),
        key: &amend_key,
    };
    let target = Side {
        system: System::Amended,
        sys: CcSystem::new(&pair.amended.procedures),
        init: ChorConfig::new(pair.amended.main.clone(), s.clone()),
        key: &identity,
    };
    Ok(correspondence(
        "amend-complete",
        source,
        target,
        Direction::TargetExpands,
        bounds,
    ))
}

/// Every behaviour of the amended program is matched by the original
/// program once the inserted selections are dropped.
pub fn check_amend_sound(
    prog: &ChorProgram,
    s: &State,
    bounds: Bounds,
) -> Result<Report, VerifyError> {
    let pair = Pair::new(prog)?;
    let amend_key = |c: &Choreography| pair.amend(c);
    let identity = |c: &Choreography| c.clone();
    let source = Side {
        system: System::Amended,
        sys: CcSystem::new(&pair.amended.procedures),
        init: ChorConfig::new(pair.amended.main.clone(), s.clone()),
        key: &identity,
    };
    let target = Side {
        system: System::Original,
        sys: CcSystem::new(&pair.original.procedures),
        init: ChorConfig::new(pair.original.main.clone(), s.clone()),
        key: &amend_key,
    };
    Ok(correspondence(
        "amend-sound",
        source,
        target,
        Direction::SourceExpands,
        bounds,
    ))
}

/// Stepwise form: whenever a reachable `C0` makes a transition `t` to `C'`,
/// `amend(C0)` makes the same `t`, and there are continuations
/// `C' --tl--> C''` and `A --tl'--> amend(C'')` where `tl` is `tl'` with
/// some selections removed.
pub fn check_intermediate_formulation(
    prog: &ChorProgram,
    s: &State,
    bounds: Bounds,
) -> Result<Report, VerifyError> {
    const CHECK: &str = "intermediate";
    let pair = Pair::new(prog)?;
    let osys = CcSystem::new(&pair.original.procedures);
    let asys = CcSystem::new(&pair.amended.procedures);
    let init = ChorConfig::new(prog.main.clone(), s.clone());
    let (sources, cut) = reachable(&osys, &init, bounds.depth.saturating_sub(1), bounds.budget);

    let mut steps = Vec::new();
    for (c0, tr) in &sources {
        for (t, c1) in succ(&osys, c0) {
            steps.push((c0.clone(), tr.clone(), t, c1));
        }
    }
    let explored = AtomicUsize::new(sources.len());
    let results: Vec<Search> = steps
        .par_iter()
        .map(|(c0, _, t, c1)| {
            let a0 = ChorConfig::new(pair.amend(&c0.chor), c0.state.clone());
            let starts: Vec<ChorConfig> = succ(&asys, &a0)
                .into_iter()
                .filter(|(l, _)| l == t)
                .map(|(_, a)| a)
                .collect();
            // Joint search: both sides take equal labels, or the amended side
            // takes a selection alone. Solo moves go to the front so pairs
            // are visited in order of matched steps.
            let mut seen: HashSet<(ChorConfig, ChorConfig)> = HashSet::new();
            let mut queue = VecDeque::new();
            for a1 in starts {
                if seen.insert((c1.clone(), a1.clone())) {
                    queue.push_back((c1.clone(), a1, 0usize));
                }
            }
            let mut outcome = Search::Failed;
            while let Some((c, a, n)) = queue.pop_front() {
                if a.state == c.state && a.chor == pair.amend(&c.chor) {
                    explored.fetch_add(seen.len(), Ordering::Relaxed);
                    return Search::Matched;
                }
                if seen.len() > bounds.budget {
                    outcome = Search::Cut;
                    break;
                }
                let amended_moves = succ(&asys, &a);
                for (l, a2) in &amended_moves {
                    if l.is_selection() && seen.insert((c.clone(), a2.clone())) {
                        queue.push_front((c.clone(), a2.clone(), n));
                    }
                }
                for (l, c2) in succ(&osys, &c) {
                    for (l2, a2) in &amended_moves {
                        if *l2 != l {
                            continue;
                        }
                        if n == bounds.search {
                            outcome = Search::Cut;
                        } else if seen.insert((c2.clone(), a2.clone())) {
                            queue.push_back((c2.clone(), a2.clone(), n + 1));
                        }
                    }
                }
            }
            explored.fetch_add(seen.len(), Ordering::Relaxed);
            outcome
        })
        .collect();

    let stats = Stats {
        explored: explored.load(Ordering::Relaxed),
        max_depth: bounds.depth + bounds.search,
    };
    if let Some(i) = results.iter().position(|r| *r == Search::Failed) {
        let (_, tr, t, c1) = &steps[i];
        let mut trace = tr.clone();
        trace.push(t.clone());
        let witness = Witness {
            system: System::Original,
            trace,
            reached: WitnessConfig::Chor(c1.clone()),
            explanation: format!(
                "the amended program cannot match the last step `{t}` and then catch up"
            ),
        };
        return Ok(Report::counterexample(CHECK, witness, stats));
    }
    if cut || results.contains(&Search::Cut) {
        return Ok(Report::exhausted(CHECK, stats));
    }
    Ok(Report::holds(CHECK, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lts::replay;

    fn small() -> Bounds {
        Bounds::new(4, 4)
    }

    #[test]
    fn naive_correspondence_fails_on_minimal_counterexample() {
        let prog = corpus::minimal_counterexample();
        let r = check_naive_correspondence(&prog, &State::new(), small()).unwrap();
        assert!(r.is_counterexample(), "{r}");
        let w = r.witness.unwrap();
        assert_eq!(w.system, System::Original);
        let init = ChorConfig::new(prog.main.clone(), State::new());
        let reached = replay(&CcSystem::new(&prog.procedures), &init, &w.trace).unwrap();
        let WitnessConfig::Chor(c) = w.reached else {
            panic!()
        };
        assert!(reached.contains(&c));
    }

    #[test]
    fn amendment_correspondence_holds_on_corpus() {
        for (name, prog) in corpus::named_programs() {
            let s = State::new();
            let complete = check_amend_complete(&prog, &s, small()).unwrap();
            assert!(complete.holds_within_bound(), "{name}: {complete}");
            let sound = check_amend_sound(&prog, &s, small()).unwrap();
            assert!(sound.holds_within_bound(), "{name}: {sound}");
            let inter = check_intermediate_formulation(&prog, &s, small()).unwrap();
            if name == "minimal-counterexample" {
                assert!(inter.is_counterexample(), "{name}: {inter}");
            } else {
                assert!(inter.holds_within_bound(), "{name}: {inter}");
            }
        }
    }

    #[test]
    fn naive_counterexample_on_the_delayed_communication_example() {
        let prog = corpus::amend_counterexample();
        let r = check_naive_correspondence(&prog, &State::new(), Bounds::new(2, 6)).unwrap();
        assert!(r.is_counterexample(), "{r}");
        let r = check_intermediate_formulation(&prog, &State::new(), Bounds::new(4, 4)).unwrap();
        assert!(r.holds_within_bound(), "{r}");
    }

    #[test]
    fn minimal_counterexample_needs_the_conditional_first() {
        let prog = corpus::minimal_counterexample();
        let r = check_intermediate_formulation(&prog, &State::new(), Bounds::new(1, 4)).unwrap();
        let w = r.witness.expect("counterexample");
        assert_eq!(w.trace, vec![TransitionLabel::com("q", 0, "r")]);
    }

    #[test]
    fn a_wrong_amendment_is_caught() {
        // Swap the orientation of the inserted selections.
        let prog = corpus::amend_counterexample();
        let pair = Pair::new(&prog).unwrap();
        let wrong = corpus::amend_counterexample_amended().main;
        let Choreography::Prefix(eta, rest) = wrong else {
            panic!()
        };
        let Choreography::Cond {
            at,
            guard,
            then_branch,
            else_branch,
        } = *rest
        else {
            panic!()
        };
        let wrong = Choreography::Prefix(
            eta,
            Box::new(Choreography::Cond {
                at,
                guard,
                then_branch: else_branch,
                else_branch: then_branch,
            }),
        );
        let amend_key = |c: &Choreography| pair.amend(c);
        let identity = |c: &Choreography| c.clone();
        let source = Side {
            system: System::Original,
            sys: CcSystem::new(&pair.original.procedures),
            init: ChorConfig::new(prog.main.clone(), State::new()),
            key: &amend_key,
        };
        let target = Side {
            system: System::Amended,
            sys: CcSystem::new(&pair.amended.procedures),
            init: ChorConfig::new(wrong, State::new()),
            key: &identity,
        };
        let r = correspondence(
            "amend-complete",
            source,
            target,
            Direction::TargetExpands,
            small(),
        );
        assert!(r.is_counterexample(), "{r}");
    }

    #[test]
    fn ill_formed_programs_are_rejected() {
        let bad = ChorProgram::new(Choreography::call("Nope"));
        assert!(matches!(
            check_amend_complete(&bad, &State::new(), small()),
            Err(VerifyError::IllFormed(_))
        ));
    }
}
