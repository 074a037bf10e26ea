//! Line-based state and function-table files.
//!
//! A state file has one `pid.var = n` assignment per line; a table file has
//! one `n1, n2 -> n` or `n1, n2 -> undef` row per line. `#` starts a comment.

use super::{Diagnostic, Pos};
use crate::ident::{Pid, Var};
use crate::state::State;
use crate::verify::FnTable;

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn whole_line(line: usize, text: &str, message: String) -> Diagnostic {
    Diagnostic::error(
        Pos { line, col: 1 },
        Pos {
            line,
            col: text.len() + 1,
        },
        message,
    )
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn number(s: &str) -> Option<u64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a state file. Later assignments to the same cell win.
pub fn parse_state(text: &str) -> Result<State, Vec<Diagnostic>> {
    let mut state = State::new();
    let mut errors = Vec::new();
    for (n, line) in lines(text) {
        let parsed = line.split_once('=').and_then(|(lhs, rhs)| {
            let (p, x) = lhs.trim().split_once('.')?;
            let (p, x) = (p.trim(), x.trim());
            (is_name(p) && is_name(x)).then_some(())?;
            Some((Pid::new(p), Var::new(x), number(rhs)?))
        });
        match parsed {
            Some((p, x, v)) => state.set(p, x, v),
            None => errors.push(whole_line(
                n,
                line,
                format!("expected `process.variable = number`, found `{line}`"),
            )),
        }
    }
    if errors.is_empty() {
        Ok(state)
    } else {
        Err(errors)
    }
}

/// Parses a function table; the arity is taken from the first row.
pub fn parse_table(text: &str) -> Result<FnTable, Vec<Diagnostic>> {
    let mut table: Option<FnTable> = None;
    let mut errors = Vec::new();
    for (n, line) in lines(text) {
        let Some((lhs, rhs)) = line.split_once("->") else {
            errors.push(whole_line(
                n,
                line,
                format!("expected `inputs -> output`, found `{line}`"),
            ));
            continue;
        };
        let lhs = lhs.trim();
        let args: Option<Vec<u64>> = if lhs.is_empty() {
            Some(Vec::new())
        } else {
            lhs.split(',').map(number).collect()
        };
        let Some(args) = args else {
            errors.push(whole_line(
                n,
                line,
                format!("inputs must be comma-separated numbers, found `{lhs}`"),
            ));
            continue;
        };
        let value = match rhs.trim() {
            "undef" => None,
            r => match number(r) {
                Some(v) => Some(v),
                None => {
                    errors.push(whole_line(
                        n,
                        line,
                        format!("output must be a number or `undef`, found `{r}`"),
                    ));
                    continue;
                }
            },
        };
        let table = table.get_or_insert_with(|| FnTable::new(args.len()));
        if let Err(e) = table.insert(args, value) {
            errors.push(whole_line(n, line, e.to_string()));
        }
    }
    if errors.is_empty() {
        Ok(table.unwrap_or_default())
    } else {
        Err(errors)
    }
}
