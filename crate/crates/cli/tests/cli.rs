use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use choramend::amend::amend_program;
use choramend::cc::{CcSystem, ChorConfig};
use choramend::label::TransitionLabel;
use choramend::lts::replay;
use choramend::projection::projectable_program;
use choramend::state::State;
use choramend::syntax::{parse_program, render_program};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choramend"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn chor_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(data(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "chor"))
        .collect();
    files.sort();
    files
}

#[test]
fn check_buyer_seller_blames_the_conditional_at_buyer() {
    let out = run(&["check", data("buyer-seller.chor").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("conditional `if seller.x <= 100` cannot be projected on `buyer`"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn check_buyer_seller_selections_succeeds() {
    let out = run(&[
        "check",
        data("buyer-seller-selections.chor").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "ok: well-formed and projectable on buyer, seller\n"
    );
}

#[test]
fn amend_buyer_seller_adds_selections() {
    let out = run(&["amend", data("buyer-seller.chor").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        fs::read_to_string(data("buyer-seller-selections.chor")).unwrap()
    );
}

#[test]
fn amend_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.chor");
    let out = run(&[
        "amend",
        data("proxy.chor").to_str().unwrap(),
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read_to_string(target).unwrap(),
        fs::read_to_string(data("proxy-amended.chor")).unwrap()
    );
}

#[test]
fn project_prints_network_and_single_processes() {
    let file = data("buyer-seller-selections.chor");
    let out = run(&["project", file.to_str().unwrap(), "--process", "buyer"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "seller!offer; seller & Some(seller?y; end) // Some(end)\n"
    );
    let out = run(&["project", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).starts_with("buyer[ seller!offer;"),
        "{}",
        stdout(&out)
    );

    let out = run(&[
        "project",
        data("buyer-seller.chor").to_str().unwrap(),
        "--process",
        "buyer",
    ]);
    assert_eq!(code(&out), 1);
    let out = run(&[
        "project",
        data("buyer-seller.chor").to_str().unwrap(),
        "--process",
        "seller",
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["project", file.to_str().unwrap(), "--process", "nobody"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_naive_reports_a_replayable_witness() {
    let file = data("amend-counterexample.chor");
    let out = run(&[
        "verify",
        "naive",
        file.to_str().unwrap(),
        "--depth",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "counterexample");
    assert_eq!(doc["witness"]["system"], "original");
    let labels: Vec<TransitionLabel> =
        serde_json::from_value(doc["witness"]["labels"].clone()).unwrap();

    let prog = parse_program(&fs::read_to_string(&file).unwrap()).unwrap();
    let init = ChorConfig::new(prog.main.clone(), State::new());
    let reached = replay(&CcSystem::new(&prog.procedures), &init, &labels).unwrap();
    let shown: Vec<String> = reached.iter().map(|c| c.to_string()).collect();
    assert!(shown.contains(&doc["witness"]["reached"].as_str().unwrap().to_string()));
}

#[test]
fn verify_exit_codes() {
    let minimal = data("minimal-counterexample.chor");
    let out = run(&["verify", "intermediate", minimal.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: counterexample"));
    for check in ["amend-complete", "amend-sound"] {
        let out = run(&["verify", check, minimal.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{check}: {}", stdout(&out));
        assert!(stdout(&out).contains("verdict: holds-within-bound"));
    }
    let out = run(&[
        "verify",
        "epp",
        data("buyer-seller-selections.chor").to_str().unwrap(),
        "--depth",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["verify", "epp", data("buyer-seller.chor").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn run_lists_both_orders_of_two_orders() {
    let out = run(&["run", data("two-orders.chor").to_str().unwrap(), "--all"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("[com(o,0,p), com(o',0,p')]"));
    assert!(text.contains("[com(o',0,p'), com(o,0,p)]"));
    assert!(text.ends_with("2 execution(s)\n"));
}

#[test]
fn run_with_seed_is_deterministic_and_uses_the_state_file() {
    let args = [
        "run".to_string(),
        data("buyer-seller-selections.chor")
            .to_str()
            .unwrap()
            .to_string(),
        "--state".into(),
        data("expensive.state").to_str().unwrap().to_string(),
        "--seed".into(),
        "7".into(),
    ];
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let first = stdout(&run(&args));
    assert_eq!(first, stdout(&run(&args)));
    assert!(first.contains("com(buyer,120,seller)"), "{first}");
    assert!(first.contains("sel(seller,buyer,right)"), "{first}");
    assert!(
        first.trim_end().ends_with(
            "terminated: (end, {buyer.offer = 120, seller.product = 7, seller.x = 120})"
        ),
        "{first}"
    );
}

#[test]
fn implements_tables() {
    let args = |file: &str, table: &str, inputs: &str, output: &str, target: &str| {
        let f = data(file);
        let t = data(table);
        code(&run(&[
            "implements",
            f.to_str().unwrap(),
            "--table",
            t.to_str().unwrap(),
            "--inputs",
            inputs,
            "--output",
            output,
            "--bound",
            "20",
            "--target",
            target,
        ]))
    };
    for target in ["original", "amended", "network"] {
        assert_eq!(
            args("successor.chor", "successor.table", "p", "q", target),
            0
        );
        assert_eq!(
            args(
                "equality-test.chor",
                "equality-test.table",
                "p,q",
                "r",
                target
            ),
            0
        );
        assert_eq!(
            args("ping-loop.chor", "ping-loop.table", "p", "q", target),
            0
        );
    }
    assert_eq!(
        args(
            "successor.chor",
            "equality-test.table",
            "p,q",
            "q",
            "original"
        ),
        1
    );
    assert_eq!(
        args("successor.chor", "successor.table", "p,q", "q", "original"),
        2
    );
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let out = run(&["check", data("bad-label.chor").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error at 3:"), "{}", stderr(&out));
    assert_eq!(code(&run(&["check", "/nonexistent.chor"])), 2);
    assert_eq!(
        code(&run(&[
            "verify",
            "bogus",
            data("buyer-seller.chor").to_str().unwrap()
        ])),
        2
    );
    assert_eq!(
        code(&run(&["run", data("buyer-seller.chor").to_str().unwrap()])),
        2
    );
}

#[test]
fn ill_formed_program_exits_1() {
    let out = run(&["check", data("self-communication.chor").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("communicates with itself"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn every_corpus_file_round_trips_and_meets_the_exit_code_contract() {
    for path in chor_files() {
        let text = fs::read_to_string(&path).unwrap();
        let Ok(prog) = parse_program(&text) else {
            assert_eq!(
                code(&run(&["check", path.to_str().unwrap()])),
                2,
                "{}",
                path.display()
            );
            continue;
        };
        assert_eq!(
            parse_program(&render_program(&prog)).unwrap(),
            prog,
            "{}",
            path.display()
        );
        let expected = if !prog.is_well_formed() || !projectable_program(&prog) {
            1
        } else {
            0
        };
        assert_eq!(
            code(&run(&["check", path.to_str().unwrap()])),
            expected,
            "{}",
            path.display()
        );
        if prog.is_well_formed() {
            let out = run(&["amend", path.to_str().unwrap()]);
            assert_eq!(code(&out), 0);
            assert_eq!(parse_program(&stdout(&out)).unwrap(), amend_program(&prog));
        }
    }
}
