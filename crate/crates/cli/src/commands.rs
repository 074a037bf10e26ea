use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use choramend::amend::amend_program;
use choramend::cc::{CcSystem, ChorConfig, ChorProgram};
use choramend::ident::Pid;
use choramend::label::show_trace;
use choramend::lts::{traces, TransitionSystem};
use choramend::projection::{epp, project, projection_failures};
use choramend::state::State;
use choramend::syntax::{
    parse_program, parse_state, parse_table, render_behaviour, render_program, render_sp_program,
    Diagnostic,
};
use choramend::verify::{self, Bounds, Report, Verdict};

use crate::{CheckKind, Command, Target, VerifyOpts};

pub enum CliError {
    Io(String),
    Parse {
        file: String,
        diagnostics: Vec<Diagnostic>,
    },
    Usage(String),
    /// The program is rejected (ill-formed or unprojectable).
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Rejected(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Usage(m) | CliError::Rejected(m) => f.write_str(m),
            CliError::Parse { file, diagnostics } => {
                let lines: Vec<String> =
                    diagnostics.iter().map(|d| format!("{file}: {d}")).collect();
                f.write_str(&lines.join("\n"))
            }
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn parse_with<T>(
    path: &Path,
    parse: impl Fn(&str) -> std::result::Result<T, Vec<Diagnostic>>,
) -> Result<T> {
    parse(&read(path)?).map_err(|diagnostics| CliError::Parse {
        file: path.display().to_string(),
        diagnostics,
    })
}

fn load_program(path: &Path) -> Result<ChorProgram> {
    parse_with(path, parse_program)
}

fn load_well_formed(path: &Path) -> Result<ChorProgram> {
    let prog = load_program(path)?;
    prog.check().map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("error: {e}")).collect();
        CliError::Rejected(lines.join("\n"))
    })?;
    Ok(prog)
}

fn load_state(path: Option<&Path>) -> Result<State> {
    match path {
        Some(p) => parse_with(p, parse_state),
        None => Ok(State::new()),
    }
}

fn verify_error(e: verify::VerifyError) -> CliError {
    match e {
        verify::VerifyError::ArityMismatch { .. } => CliError::Usage(format!("error: {e}")),
        e => CliError::Rejected(format!("error: {e}")),
    }
}

pub fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check { file } => check(&file),
        Command::Project { file, process } => project_cmd(&file, process.as_deref()),
        Command::Amend { file, output } => amend_cmd(&file, output.as_deref()),
        Command::Run {
            file,
            state,
            all,
            seed,
            steps,
        } => run(&file, state.as_deref(), all, seed, steps),
        Command::Verify { check, file, opts } => verify_cmd(check, &file, &opts),
        Command::Implements {
            file,
            table,
            inputs,
            output,
            bound,
            target,
            json,
        } => implements(&file, &table, &inputs, &output, bound, target, json),
    }
}

fn check(file: &Path) -> Result<ExitCode> {
    let prog = load_well_formed(file)?;
    let failures = projection_failures(&prog);
    if !failures.is_empty() {
        let mut lines = vec!["well-formed, but not projectable:".to_string()];
        for b in &failures {
            lines.push(format!("  {b}"));
        }
        return Err(CliError::Rejected(lines.join("\n")));
    }
    let ps: Vec<String> = prog.processes().iter().map(|p| p.to_string()).collect();
    println!("ok: well-formed and projectable on {}", ps.join(", "));
    Ok(ExitCode::SUCCESS)
}

fn project_cmd(file: &Path, process: Option<&str>) -> Result<ExitCode> {
    let prog = load_well_formed(file)?;
    match process {
        Some(p) => {
            let p = Pid::new(p);
            if !prog.processes().contains(&p) {
                return Err(CliError::Usage(format!(
                    "error: process `{p}` does not occur in the program"
                )));
            }
            let b = project(&prog.procedures, &prog.main, &p)
                .map_err(|b| CliError::Rejected(format!("error: {b}")))?;
            println!("{}", render_behaviour(&b));
        }
        None => {
            let net = epp(&prog).map_err(|e| CliError::Rejected(format!("error: {e}")))?;
            print!("{}", render_sp_program(&net));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn amend_cmd(file: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let prog = load_well_formed(file)?;
    let text = render_program(&amend_program(&prog));
    match output {
        Some(out) => fs::write(out, format!("{text}\n"))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn describe_end(sys: &CcSystem<'_>, c: &ChorConfig, more: bool) -> &'static str {
    if more {
        "step limit reached"
    } else if sys.is_terminated(c) {
        "terminated"
    } else {
        "stuck"
    }
}

fn run(
    file: &Path,
    state: Option<&Path>,
    all: bool,
    seed: Option<u64>,
    steps: usize,
) -> Result<ExitCode> {
    let prog = load_well_formed(file)?;
    let s = load_state(state)?;
    let sys = CcSystem::new(&prog.procedures);
    let init = ChorConfig::new(prog.main.clone(), s);
    let successors = |c: &ChorConfig| {
        sys.successors(c)
            .expect("choreography steps are infallible")
    };
    if all {
        let ends: Vec<_> = traces(&sys, &init, steps)
            .expect("choreography steps are infallible")
            .into_iter()
            .filter(|t| t.labels.len() == steps || successors(&t.config).is_empty())
            .collect();
        for t in &ends {
            let more = !successors(&t.config).is_empty();
            println!("{}", show_trace(&t.labels));
            println!("  {}: {}", describe_end(&sys, &t.config, more), t.config);
        }
        println!("{} execution(s)", ends.len());
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.expect("clap requires --all or --seed"));
        let mut c = init;
        let mut taken = 0;
        while taken < steps {
            let next = successors(&c);
            let Some((l, c2)) = next.choose(&mut rng) else {
                break;
            };
            println!("{l}");
            c = c2.clone();
            taken += 1;
        }
        let more = !successors(&c).is_empty();
        println!("{}: {c}", describe_end(&sys, &c, more));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{:#}", report.to_json());
    } else {
        println!("{report}");
    }
    match report.verdict {
        Verdict::HoldsWithinBound => ExitCode::SUCCESS,
        Verdict::Counterexample | Verdict::ResourceExhausted => ExitCode::from(1),
    }
}

fn verify_cmd(kind: CheckKind, file: &Path, opts: &VerifyOpts) -> Result<ExitCode> {
    let prog = load_program(file)?;
    let s = load_state(opts.state.as_deref())?;
    let bounds = Bounds {
        depth: opts.depth,
        search: opts.bound,
        budget: opts.budget,
    };
    let check = match kind {
        CheckKind::Naive => verify::check_naive_correspondence,
        CheckKind::AmendComplete => verify::check_amend_complete,
        CheckKind::AmendSound => verify::check_amend_sound,
        CheckKind::Intermediate => verify::check_intermediate_formulation,
        CheckKind::Epp => verify::check_epp_correspondence,
    };
    let report = check(&prog, &s, bounds).map_err(verify_error)?;
    Ok(print_report(&report, opts.json))
}

fn implements(
    file: &Path,
    table: &Path,
    inputs: &[String],
    output: &str,
    bound: usize,
    target: Target,
    json: bool,
) -> Result<ExitCode> {
    let prog = load_well_formed(file)?;
    let table = parse_with(table, parse_table)?;
    let inputs: Vec<Pid> = inputs.iter().map(|p| Pid::new(p.trim())).collect();
    let output = Pid::new(output);
    let report = match target {
        Target::Original => verify::check_implements(&prog, &table, &inputs, &output, bound),
        Target::Amended => {
            verify::check_implements(&amend_program(&prog), &table, &inputs, &output, bound)
        }
        Target::Network => {
            let net = epp(&amend_program(&prog))
                .map_err(|e| CliError::Rejected(format!("error: {e}")))?;
            verify::check_sp_implements(&net, &table, &inputs, &output, bound)
        }
    }
    .map_err(verify_error)?;
    Ok(print_report(&report, json))
}
