//! Deterministic pretty-printing. `Display` gives single-line forms; the
//! `render_*` functions give the indented multi-line file format.

use std::fmt::{self, Write};

use crate::cc::{ChorProgram, Choreography, Eta};
use crate::sp::{Behaviour, Network, SpProgram};

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Com {
                from,
                expr,
                to,
                var,
            } => write!(f, "{from}.{expr} -> {to}.{var}"),
            Eta::Sel { from, to, label } => write!(f, "{from} -> {to}[{label}]"),
        }
    }
}

impl fmt::Display for Choreography {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Choreography::Prefix(eta, k) => write!(f, "{eta}; {k}"),
            Choreography::Cond {
                at,
                guard,
                then_branch,
                else_branch,
            } => {
                write!(
                    f,
                    "if {at}.{guard} then {{ {then_branch} }} else {{ {else_branch} }}"
                )
            }
            Choreography::Call(x) => write!(f, "call {x}"),
            Choreography::RtCall {
                name,
                pending,
                body,
            } => {
                let ps: Vec<&str> = pending.iter().map(|p| p.as_str()).collect();
                write!(f, "rtcall {name}({}) {{ {body} }}", ps.join(", "))
            }
            Choreography::End => f.write_str("end"),
        }
    }
}

fn write_chor(out: &mut String, c: &Choreography, indent: usize) {
    let pad = "  ".repeat(indent);
    match c {
        Choreography::Prefix(eta, k) => {
            let _ = writeln!(out, "{pad}{eta};");
            write_chor(out, k, indent);
        }
        Choreography::Cond {
            at,
            guard,
            then_branch,
            else_branch,
        } => {
            let _ = writeln!(out, "{pad}if {at}.{guard} then {{");
            write_chor(out, then_branch, indent + 1);
            let _ = writeln!(out, "{pad}}} else {{");
            write_chor(out, else_branch, indent + 1);
            let _ = writeln!(out, "{pad}}}");
        }
        Choreography::RtCall {
            name,
            pending,
            body,
        } => {
            let ps: Vec<&str> = pending.iter().map(|p| p.as_str()).collect();
            let _ = writeln!(out, "{pad}rtcall {name}({}) {{", ps.join(", "));
            write_chor(out, body, indent + 1);
            let _ = writeln!(out, "{pad}}}");
        }
        Choreography::Call(_) | Choreography::End => {
            let _ = writeln!(out, "{pad}{c}");
        }
    }
}

/// Multi-line rendering of a choreography.
pub fn render_chor(c: &Choreography) -> String {
    let mut out = String::new();
    write_chor(&mut out, c, 0);
    out
}

/// Renders a program in source syntax; parsing the result gives back the
/// same program.
pub fn render_program(p: &ChorProgram) -> String {
    let mut out = String::new();
    for (name, d) in &p.procedures {
        let ps: Vec<&str> = d.pids.iter().map(|p| p.as_str()).collect();
        let _ = writeln!(out, "def {name}({}) =", ps.join(", "));
        write_chor(&mut out, &d.body, 1);
        out.push('\n');
    }
    out.push_str("main =\n");
    write_chor(&mut out, &p.main, 1);
    out
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |b: &Option<Box<Behaviour>>| match b {
            Some(b) => format!("Some({b})"),
            None => "None".to_string(),
        };
        match self {
            Behaviour::Send { to, expr, cont } => write!(f, "{to}!{expr}; {cont}"),
            Behaviour::Recv { from, var, cont } => write!(f, "{from}?{var}; {cont}"),
            Behaviour::Choose { to, label, cont } => write!(f, "{to}+{label}; {cont}"),
            Behaviour::Branch { from, left, right } => {
                write!(f, "{from} & {} // {}", opt(left), opt(right))
            }
            Behaviour::Cond {
                guard,
                then_branch,
                else_branch,
            } => {
                write!(
                    f,
                    "if {guard} then {{ {then_branch} }} else {{ {else_branch} }}"
                )
            }
            Behaviour::Call(x) => write!(f, "call {x}"),
            Behaviour::End => f.write_str("end"),
        }
    }
}

pub fn render_behaviour(b: &Behaviour) -> String {
    b.to_string()
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{p}[ {b} ]")?;
        }
        Ok(())
    }
}

/// One process block per line, in process-name order.
pub fn render_network(n: &Network) -> String {
    if n.is_empty() {
        return "0\n".to_string();
    }
    let blocks: Vec<String> = n.iter().map(|(p, b)| format!("{p}[ {b} ]")).collect();
    format!("{}\n", blocks.join(" |\n"))
}

pub fn render_sp_program(p: &SpProgram) -> String {
    let mut out = String::new();
    for (name, b) in &p.procedures {
        let _ = writeln!(out, "def {name} = {b}");
    }
    if !p.procedures.is_empty() {
        out.push('\n');
    }
    out.push_str(&render_network(&p.network));
    out
}
