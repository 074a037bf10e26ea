//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use choramend::amend::{amend_program, sel_exp_check};
use choramend::cc::{cc_wf, program_wf, CcSystem, ChorConfig, ChorProgram, DefSet};
use choramend::corpus::{self, GenLimits};
use choramend::ident::{Label, Pid};
use choramend::label::TransitionLabel;
use choramend::lts::{maximal_traces, replay};
use choramend::projection::{
    epp, projectable_dec, projectable_list, projectable_program, BlameKind,
};
use choramend::state::State;
use choramend::syntax::render_network;
use choramend::verify::{
    check_amend_complete, check_amend_sound, check_epp_correspondence, check_implements,
    check_intermediate_formulation, check_naive_correspondence, check_sp_implements, Bounds,
    FnTable, Verdict, WitnessConfig,
};
use choramend::Choreography;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The hand-written programs plus the fixed random sample.
fn corpus() -> Vec<(String, ChorProgram)> {
    let mut all: Vec<(String, ChorProgram)> = corpus::named_programs()
        .into_iter()
        .map(|(n, p)| (n.to_string(), p))
        .collect();
    for (i, p) in corpus::random_corpus(2024, 50, GenLimits::default())
        .into_iter()
        .enumerate()
    {
        all.push((format!("random-{i}"), p));
    }
    all
}

fn unprojectable_buyer_seller() -> Outcome {
    let prog = corpus::buyer_seller();
    let buyer = Pid::new("buyer");
    ensure(!projectable_dec(&DefSet::new(), &prog.main, &buyer), || {
        "buyer-seller projects on buyer".into()
    })?;
    let err = epp(&prog).err().ok_or("epp of buyer-seller is defined")?;
    let blamed = err
        .failures
        .iter()
        .any(|b| b.process == buyer && matches!(&b.kind, BlameKind::Conditional(c) if matches!(c, Choreography::Cond { at, .. } if at.as_str() == "seller")));
    ensure(blamed, || format!("unexpected blame: {err}"))?;
    Ok(err.to_string())
}

fn epp_golden() -> Outcome {
    let net = epp(&corpus::buyer_seller_selections()).map_err(|e| e.to_string())?;
    ensure(net.network == corpus::buyer_seller_network(), || {
        format!("got {}", net.network)
    })?;
    let expected = "buyer[ seller!offer; seller & Some(seller?y; end) // Some(end) ] |\n\
                    seller[ buyer?x; if x <= 100 then { buyer+left; buyer!product; end } else { buyer+right; end } ]\n";
    let got = render_network(&net.network);
    ensure(got == expected, || format!("rendered:\n{got}"))?;
    Ok("network matches".into())
}

fn amendment_golden() -> Outcome {
    let cases = [
        (
            "buyer-seller",
            corpus::buyer_seller(),
            corpus::buyer_seller_selections(),
        ),
        (
            "delayed-communication example",
            corpus::amend_counterexample(),
            corpus::amend_counterexample_amended(),
        ),
        ("proxy", corpus::proxy(), corpus::proxy_amended()),
        (
            "minimal example",
            corpus::minimal_counterexample(),
            corpus::minimal_counterexample_amended(),
        ),
    ];
    for (name, prog, expected) in cases {
        let got = amend_program(&prog);
        ensure(got == expected, || format!("{name}: got {}", got.main))?;
    }
    Ok("4 programs".into())
}

fn naive_counterexample() -> Outcome {
    let prog = corpus::amend_counterexample();
    let start = Instant::now();
    let report = check_naive_correspondence(&prog, &State::new(), Bounds::new(2, 6))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.verdict == Verdict::Counterexample, || {
        format!("verdict {}", report.verdict)
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    let w = report.witness.ok_or("no witness")?;
    let WitnessConfig::Chor(reached) = &w.reached else {
        return Err("witness is not a choreography".into());
    };
    let init = ChorConfig::new(prog.main.clone(), State::new());
    let replayed =
        replay(&CcSystem::new(&prog.procedures), &init, &w.trace).map_err(|e| e.to_string())?;
    ensure(replayed.contains(reached), || {
        "witness does not replay".into()
    })?;
    Ok(format!(
        "{} in {elapsed:.2?}",
        choramend::label::show_trace(&w.trace)
    ))
}

fn intermediate_counterexample() -> Outcome {
    let prog = corpus::minimal_counterexample();
    let s = State::new();
    let inter =
        check_intermediate_formulation(&prog, &s, Bounds::default()).map_err(|e| e.to_string())?;
    ensure(inter.verdict == Verdict::Counterexample, || {
        format!("intermediate: {}", inter.verdict)
    })?;
    let complete = check_amend_complete(&prog, &s, Bounds::default()).map_err(|e| e.to_string())?;
    ensure(complete.holds_within_bound(), || {
        format!("amend-complete: {}", complete.verdict)
    })?;
    let trace = inter
        .witness
        .map(|w| choramend::label::show_trace(&w.trace))
        .unwrap_or_default();
    Ok(format!(
        "intermediate fails after {trace}, amend-complete holds"
    ))
}

fn amendment_correspondence() -> Outcome {
    let start = Instant::now();
    let programs = corpus();
    let bounds = Bounds::new(6, 6);
    let mut explored = 0;
    for (name, prog) in &programs {
        for check in [check_amend_complete, check_amend_sound] {
            let r = check(prog, &State::new(), bounds).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.holds_within_bound(), || format!("{name}: {r}"))?;
            explored += r.stats.explored;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} programs, {explored} nodes, {elapsed:.1?}",
        programs.len()
    ))
}

fn amendment_syntax() -> Outcome {
    let programs = corpus();
    for (name, prog) in &programs {
        let amended = amend_program(prog);
        ensure(program_wf(&amended) && cc_wf(&amended.main), || {
            format!("{name}: amended program ill-formed")
        })?;
        let ps: Vec<Pid> = prog.processes().into_iter().collect();
        ensure(
            projectable_list(&amended.procedures, &amended.main, &ps),
            || format!("{name}: amended main not projectable"),
        )?;
        ensure(projectable_program(&amended), || {
            format!("{name}: amended procedures not projectable")
        })?;
        if projectable_program(prog) {
            ensure(&amended == prog, || {
                format!("{name}: amendment changed a projectable program")
            })?;
        }
        ensure(amend_program(&amended) == amended, || {
            format!("{name}: amendment not idempotent")
        })?;
    }
    Ok(format!("{} programs", programs.len()))
}

fn alphabet() -> [TransitionLabel; 3] {
    [
        TransitionLabel::com("p", 0, "q"),
        TransitionLabel::sel("p", "q", Label::Left),
        TransitionLabel::tau("p"),
    ]
}

fn sequences(max_len: usize) -> Vec<Vec<TransitionLabel>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for l in alphabet() {
                let mut t: Vec<TransitionLabel> = s.clone();
                t.push(l);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn permutations(xs: &[TransitionLabel]) -> BTreeSet<Vec<TransitionLabel>> {
    if xs.is_empty() {
        return BTreeSet::from([Vec::new()]);
    }
    let mut out = BTreeSet::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.insert(p);
        }
    }
    out
}

/// Every sequence of length at most `max_len` derivable from `tl` by the
/// two inference rules: a permutation, or a derivable sequence with one more
/// selection in front, permuted.
fn derivable(tl: &[TransitionLabel], max_len: usize) -> BTreeSet<Vec<TransitionLabel>> {
    let sel = alphabet()[1].clone();
    let mut found = permutations(tl);
    let mut frontier: Vec<Vec<TransitionLabel>> = found.iter().cloned().collect();
    while let Some(t) = frontier.pop() {
        if t.len() >= max_len {
            continue;
        }
        let mut extended = vec![sel.clone()];
        extended.extend(t);
        for p in permutations(&extended) {
            if found.insert(p.clone()) {
                frontier.push(p);
            }
        }
    }
    found
}

fn sel_exp_oracle() -> Outcome {
    let seqs = sequences(4);
    let mut pairs = 0;
    for tl in &seqs {
        let reachable = derivable(tl, 4);
        for target in &seqs {
            pairs += 1;
            let expected = reachable.contains(target);
            ensure(sel_exp_check(tl, target) == expected, || {
                format!(
                    "disagreement on {} / {}: oracle says {expected}",
                    choramend::label::show_trace(tl),
                    choramend::label::show_trace(target)
                )
            })?;
        }
    }
    Ok(format!("{pairs} pairs agree"))
}

fn out_of_order() -> Outcome {
    let prog = corpus::two_orders();
    let init = ChorConfig::new(prog.main.clone(), State::new());
    let sys = CcSystem::new(&prog.procedures);
    let traces = maximal_traces(&sys, &init, 10).map_err(|e| e.to_string())?;
    ensure(traces.len() == 2, || {
        format!("{} maximal traces", traces.len())
    })?;
    ensure(traces.iter().all(|t| t.config.chor.is_end()), || {
        "a trace does not end in end".into()
    })?;
    ensure(traces[0].config.state == traces[1].config.state, || {
        "final states differ".into()
    })?;
    ensure(traces[0].labels != traces[1].labels, || {
        "traces are identical".into()
    })?;
    Ok(format!(
        "{} and {}",
        choramend::label::show_trace(&traces[0].labels),
        choramend::label::show_trace(&traces[1].labels)
    ))
}

fn implements_chain() -> Outcome {
    let pids = |ns: &[&str]| ns.iter().map(Pid::new).collect::<Vec<_>>();
    let cases = [
        (
            "successor",
            corpus::successor(),
            FnTable::tabulate(1, 3, |a| Some(a[0] + 1)),
            pids(&["p"]),
            Pid::new("q"),
        ),
        (
            "equality-test",
            corpus::equality_test(),
            FnTable::tabulate(2, 3, |a| Some(u64::from(a[0] == a[1]))),
            pids(&["p", "q"]),
            Pid::new("r"),
        ),
    ];
    let bound = 10;
    for (name, prog, table, inputs, output) in &cases {
        let r = check_implements(prog, table, inputs, output, bound).map_err(|e| e.to_string())?;
        ensure(r.holds_within_bound(), || format!("{name}: {r}"))?;
        let amended = amend_program(prog);
        let extra = amended.main.selection_count();
        let r = check_implements(&amended, table, inputs, output, bound + extra)
            .map_err(|e| e.to_string())?;
        ensure(r.holds_within_bound(), || format!("{name} amended: {r}"))?;
        let net = epp(&amended).map_err(|e| e.to_string())?;
        let r = check_sp_implements(&net, table, inputs, output, bound + extra)
            .map_err(|e| e.to_string())?;
        ensure(r.holds_within_bound(), || format!("{name} projected: {r}"))?;
    }
    let looping = corpus::ping_loop();
    let undefined = FnTable::tabulate(1, 3, |_| None);
    let r = check_implements(&looping, &undefined, &pids(&["p"]), &Pid::new("q"), 50)
        .map_err(|e| e.to_string())?;
    ensure(r.holds_within_bound(), || format!("loop: {r}"))?;
    let net = epp(&looping).map_err(|e| e.to_string())?;
    let r = check_sp_implements(&net, &undefined, &pids(&["p"]), &Pid::new("q"), 50)
        .map_err(|e| e.to_string())?;
    ensure(r.holds_within_bound(), || format!("loop projected: {r}"))?;
    Ok("successor, equality-test, loop".into())
}

fn epp_correspondence() -> Outcome {
    let mut checked = 0;
    for (name, prog) in corpus() {
        let mut candidates = vec![(format!("{name} amended"), amend_program(&prog))];
        if projectable_program(&prog) {
            candidates.push((name, prog));
        }
        for (name, prog) in candidates {
            let r = check_epp_correspondence(&prog, &State::new(), Bounds::new(5, 0))
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(r.holds_within_bound(), || format!("{name}: {r}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} programs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "unprojectability of buyer-seller",
            unprojectable_buyer_seller,
        ),
        ("epp golden", epp_golden),
        ("amendment golden", amendment_golden),
        ("naive correspondence counterexample", naive_counterexample),
        (
            "intermediate formulation counterexample",
            intermediate_counterexample,
        ),
        (
            "amendment completeness and soundness",
            amendment_correspondence,
        ),
        ("amendment syntactic properties", amendment_syntax),
        ("selection expansion oracle", sel_exp_oracle),
        ("out-of-order execution", out_of_order),
        ("implements chain", implements_chain),
        ("epp trace correspondence", epp_correspondence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
