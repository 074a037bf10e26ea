//! Local expressions evaluated by a single process.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ident::{Pid, Var};
use crate::state::State;

/// Natural-number expressions: literals, variables and successor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Expr {
    Lit(u64),
    Var(Var),
    Succ(Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(Var::new(name))
    }

    pub fn succ(e: Expr) -> Expr {
        Expr::Succ(Box::new(e))
    }

    /// Evaluates at process `p`. Unset variables read 0; successor saturates.
    pub fn eval(&self, s: &State, p: &Pid) -> u64 {
        match self {
            Expr::Lit(n) => *n,
            Expr::Var(x) => s.get(p, x),
            Expr::Succ(e) => e.eval(s, p).saturating_add(1),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(n) => write!(f, "{n}"),
            Expr::Var(x) => write!(f, "{x}"),
            Expr::Succ(e) => write!(f, "succ({e})"),
        }
    }
}

/// Boolean guards.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BExpr {
    True,
    False,
    Eq(Expr, Expr),
    Le(Expr, Expr),
}

impl BExpr {
    pub fn eval(&self, s: &State, p: &Pid) -> bool {
        match self {
            BExpr::True => true,
            BExpr::False => false,
            BExpr::Eq(a, b) => a.eval(s, p) == b.eval(s, p),
            BExpr::Le(a, b) => a.eval(s, p) <= b.eval(s, p),
        }
    }
}

impl fmt::Display for BExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BExpr::True => f.write_str("true"),
            BExpr::False => f.write_str("false"),
            BExpr::Eq(a, b) => write!(f, "{a} == {b}"),
            BExpr::Le(a, b) => write!(f, "{a} <= {b}"),
        }
    }
}

/// Free-function form of [`Expr::eval`].
pub fn eval(e: &Expr, s: &State, p: &Pid) -> u64 {
    e.eval(s, p)
}

/// Free-function form of [`BExpr::eval`].
pub fn beval(b: &BExpr, s: &State, p: &Pid) -> bool {
    b.eval(s, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Pid {
        Pid::new("p")
    }

    #[test]
    fn literal_evaluates_to_itself() {
        let s = State::new().update(&p(), &Var::new("x"), 9);
        assert_eq!(eval(&Expr::Lit(0), &s, &p()), 0);
    }

    #[test]
    fn unset_variable_reads_default() {
        assert_eq!(eval(&Expr::var("y"), &State::new(), &p()), 0);
    }

    #[test]
    fn successor_adds_one() {
        let s = State::new().update(&p(), &Var::new("x"), 2);
        assert_eq!(eval(&Expr::succ(Expr::var("x")), &s, &p()), 3);
    }

    #[test]
    fn variables_are_per_process() {
        let s = State::new().update(&Pid::new("q"), &Var::new("x"), 2);
        assert_eq!(eval(&Expr::var("x"), &s, &p()), 0);
    }

    #[test]
    fn guards() {
        let x = Var::new("x");
        let y = Var::new("y");
        let eq = BExpr::Eq(Expr::Var(x.clone()), Expr::Var(y.clone()));
        assert!(beval(&BExpr::True, &State::new(), &p()));
        assert!(!beval(&BExpr::False, &State::new(), &p()));

        let s = State::new().update(&p(), &x, 2).update(&p(), &y, 2);
        assert!(beval(&eq, &s, &p()));
        let s = State::new().update(&p(), &x, 2);
        assert!(!beval(&eq, &s, &p()));

        let le = BExpr::Le(Expr::Var(x.clone()), Expr::Lit(1));
        assert!(!beval(&le, &s, &p()));
        assert!(beval(&le, &State::new(), &p()));
    }
}
