use std::collections::BTreeMap;

use super::lexer::{tokenize, Tok, Token};
use super::{Definition, Diagnostic, Pos, SourceUnit};
use crate::cc::{ChorProgram, Choreography, Eta};
use crate::expr::{BExpr, Expr};
use crate::ident::{Label, Pid, RecVar, Var};

const KEYWORDS: &[&str] = &[
    "def", "main", "if", "then", "else", "call", "end", "succ", "true", "false",
];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            t.start,
            t.end,
            format!("expected {what}, found {}", t.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek_tok() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek_tok(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self, what: &str) -> PResult<(String, Token)> {
        match self.peek_tok().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok((s, self.bump())),
            _ => Err(self.unexpected(what)),
        }
    }

    fn pid(&mut self) -> PResult<Pid> {
        Ok(Pid::new(self.name("a process name")?.0))
    }

    fn program(&mut self) -> PResult<SourceUnit> {
        let mut definitions = Vec::new();
        let mut seen: BTreeMap<String, Pos> = BTreeMap::new();
        while self.is_keyword("def") {
            self.bump();
            let (name, tok) = self.name("a procedure name")?;
            if let Some(prev) = seen.get(&name) {
                return Err(Diagnostic::error(
                    tok.start,
                    tok.end,
                    format!("duplicate definition of `{name}` (first defined at {prev})"),
                ));
            }
            seen.insert(name.clone(), tok.start);
            self.expect(Tok::LParen)?;
            let mut pids = vec![self.pid()?];
            while *self.peek_tok() == Tok::Comma {
                self.bump();
                pids.push(self.pid()?);
            }
            self.expect(Tok::RParen)?;
            self.expect(Tok::Assign)?;
            let body = self.chor()?;
            definitions.push(Definition {
                name: RecVar::new(name),
                pids,
                body,
            });
        }
        self.keyword("main")?;
        self.expect(Tok::Assign)?;
        let main = self.chor()?;
        if *self.peek_tok() != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(SourceUnit { definitions, main })
    }

    fn block(&mut self) -> PResult<Choreography> {
        self.expect(Tok::LBrace)?;
        let c = self.chor()?;
        self.expect(Tok::RBrace)?;
        Ok(c)
    }

    fn chor(&mut self) -> PResult<Choreography> {
        if self.is_keyword("end") {
            self.bump();
            return Ok(Choreography::End);
        }
        if self.is_keyword("call") {
            self.bump();
            let (name, _) = self.name("a procedure name")?;
            return Ok(Choreography::Call(RecVar::new(name)));
        }
        if self.is_keyword("if") {
            self.bump();
            let at = self.pid()?;
            self.expect(Tok::Dot)?;
            let guard = self.bexpr()?;
            self.keyword("then")?;
            let then_c = self.block()?;
            self.keyword("else")?;
            let else_c = self.block()?;
            return Ok(Choreography::Cond {
                at,
                guard,
                then_branch: Box::new(then_c),
                else_branch: Box::new(else_c),
            });
        }
        let eta = self.eta()?;
        self.expect(Tok::Semi)?;
        let cont = self.chor()?;
        Ok(Choreography::Prefix(eta, Box::new(cont)))
    }

    fn eta(&mut self) -> PResult<Eta> {
        let from = match self.peek_tok() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => self.pid()?,
            _ => return Err(self.unexpected("a choreography")),
        };
        match self.peek_tok() {
            Tok::Dot => {
                self.bump();
                let expr = self.expr()?;
                self.expect(Tok::Arrow)?;
                let to = self.pid()?;
                self.expect(Tok::Dot)?;
                let var = Var::new(self.name("a variable name")?.0);
                Ok(Eta::Com {
                    from,
                    expr,
                    to,
                    var,
                })
            }
            Tok::Arrow => {
                self.bump();
                let to = self.pid()?;
                self.expect(Tok::LBracket)?;
                let (text, tok) = match self.peek_tok().clone() {
                    Tok::Ident(s) => (s, self.bump()),
                    _ => return Err(self.unexpected("a selection label")),
                };
                let label = Label::parse(&text).ok_or_else(|| {
                    Diagnostic::error(
                        tok.start,
                        tok.end,
                        format!("unknown label `{text}` (expected `left` or `right`)"),
                    )
                })?;
                self.expect(Tok::RBracket)?;
                Ok(Eta::Sel { from, to, label })
            }
            _ => Err(self.unexpected("`.` or `->`")),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        match self.peek_tok().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(Expr::Lit(n))
            }
            Tok::Ident(s) if s == "succ" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Succ(Box::new(e)))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Expr::Var(Var::new(s)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn bexpr(&mut self) -> PResult<BExpr> {
        if self.is_keyword("true") {
            self.bump();
            return Ok(BExpr::True);
        }
        if self.is_keyword("false") {
            self.bump();
            return Ok(BExpr::False);
        }
        if *self.peek_tok() == Tok::LParen {
            self.bump();
            let b = self.bexpr()?;
            self.expect(Tok::RParen)?;
            return Ok(b);
        }
        let lhs = self.expr()?;
        match self.peek_tok() {
            Tok::EqEq => {
                self.bump();
                Ok(BExpr::Eq(lhs, self.expr()?))
            }
            Tok::Le => {
                self.bump();
                Ok(BExpr::Le(lhs, self.expr()?))
            }
            _ => Err(self.unexpected("`==` or `<=`")),
        }
    }
}

/// Parses a source file into its definitions and main choreography.
pub fn parse_source(text: &str) -> Result<SourceUnit, Vec<Diagnostic>> {
    let toks = tokenize(text).map_err(|d| vec![d])?;
    Parser { toks, at: 0 }.program().map_err(|d| vec![d])
}

pub fn parse_program(text: &str) -> Result<ChorProgram, Vec<Diagnostic>> {
    parse_source(text).map(SourceUnit::into_program)
}
