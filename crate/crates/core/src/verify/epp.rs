//! Trace correspondence between a choreography and its projection.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{Bounds, Report, Stats, System, VerifyError, Witness, WitnessConfig};
use crate::cc::{CcSystem, ChorConfig, ChorProgram};
use crate::label::TransitionLabel;
use crate::lts::TransitionSystem;
use crate::projection::epp;
use crate::sp::{NetConfig, SpSystem};
use crate::state::State;

type Moves<C> = BTreeMap<TransitionLabel, BTreeSet<C>>;

fn moves<S: TransitionSystem>(
    sys: &S,
    configs: &BTreeSet<S::Config>,
) -> Result<Moves<S::Config>, VerifyError> {
    let mut out: Moves<S::Config> = BTreeMap::new();
    for c in configs {
        for (l, c2) in sys.successors(c)? {
            out.entry(l).or_default().insert(c2);
        }
    }
    Ok(out)
}

/// The program and its projection have the same traces up to `depth`.
///
/// Both sides are determinised, so a label enabled in some configuration on
/// one side but in none on the other is reported with the trace leading to it.
pub fn check_epp_correspondence(
    prog: &ChorProgram,
    s: &State,
    bounds: Bounds,
) -> Result<Report, VerifyError> {
    const CHECK: &str = "epp";
    prog.check().map_err(VerifyError::IllFormed)?;
    let net = epp(prog)?;
    let csys = CcSystem::new(&prog.procedures);
    let nsys = SpSystem::new(&net.procedures);

    let init = (
        BTreeSet::from([ChorConfig::new(prog.main.clone(), s.clone())]),
        BTreeSet::from([NetConfig::new(net.network.clone(), s.clone())]),
    );
    let mut seen = HashSet::from([init.clone()]);
    let mut frontier = vec![(init, Vec::<TransitionLabel>::new())];
    let mut explored = 1;
    let mut max_depth = 0;
    for depth in 0..bounds.depth {
        let mut next = Vec::new();
        for ((cs, ns), trace) in &frontier {
            let cm = moves(&csys, cs)?;
            let nm = moves(&nsys, ns)?;
            for (l, targets) in &cm {
                if !nm.contains_key(l) {
                    let mut trace = trace.clone();
                    trace.push(l.clone());
                    let reached = targets.iter().next().cloned().expect("non-empty move set");
                    let witness = Witness {
                        system: System::Original,
                        trace,
                        reached: WitnessConfig::Chor(reached),
                        explanation: format!(
                            "the choreography can do `{l}` but the network cannot"
                        ),
                    };
                    return Ok(Report::counterexample(
                        CHECK,
                        witness,
                        Stats {
                            explored,
                            max_depth: depth + 1,
                        },
                    ));
                }
            }
            for (l, targets) in &nm {
                if !cm.contains_key(l) {
                    let mut trace = trace.clone();
                    trace.push(l.clone());
                    let reached = targets.iter().next().cloned().expect("non-empty move set");
                    let witness = Witness {
                        system: System::Network,
                        trace,
                        reached: WitnessConfig::Net(reached),
                        explanation: format!(
                            "the network can do `{l}` but the choreography cannot"
                        ),
                    };
                    return Ok(Report::counterexample(
                        CHECK,
                        witness,
                        Stats {
                            explored,
                            max_depth: depth + 1,
                        },
                    ));
                }
            }
            for (l, ctargets) in cm {
                let pair = (ctargets, nm[&l].clone());
                if seen.insert(pair.clone()) {
                    let mut trace = trace.clone();
                    trace.push(l);
                    next.push((pair, trace));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        explored += next.len();
        if explored > bounds.budget {
            return Ok(Report::exhausted(
                CHECK,
                Stats {
                    explored,
                    max_depth,
                },
            ));
        }
        max_depth = depth + 1;
        frontier = next;
    }
    Ok(Report::holds(
        CHECK,
        Stats {
            explored,
            max_depth,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amend::amend_program;
    use crate::corpus;
    use crate::projection::projectable_program;

    #[test]
    fn projectable_corpus_programs_correspond() {
        for (name, prog) in corpus::named_programs() {
            let prog = if projectable_program(&prog) {
                prog
            } else {
                amend_program(&prog)
            };
            let r = check_epp_correspondence(&prog, &State::new(), Bounds::new(5, 0)).unwrap();
            assert!(r.holds_within_bound(), "{name}: {r}");
        }
    }

    #[test]
    fn unprojectable_program_is_an_error() {
        let r = check_epp_correspondence(&corpus::buyer_seller(), &State::new(), Bounds::default());
        assert!(matches!(r, Err(VerifyError::NotProjectable(_))));
    }
}
