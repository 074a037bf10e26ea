use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(u64),
    Arrow,
    Dot,
    Semi,
    Comma,
    Assign,
    EqEq,
    Le,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Le => "`<=`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: Pos,
    pub end: Pos,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = Pos { line, col };
        let advance = |n: usize, col: &mut usize, i: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut col, &mut i);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest = |k: usize| chars.get(i + k).copied();
        let (tok, len) = match c {
            '-' if rest(1) == Some('-') && rest(2) == Some('>') => (Tok::Arrow, 3),
            '-' if rest(1) == Some('>') => (Tok::Arrow, 2),
            '=' if rest(1) == Some('=') => (Tok::EqEq, 2),
            '<' if rest(1) == Some('=') => (Tok::Le, 2),
            '=' => (Tok::Assign, 1),
            '.' => (Tok::Dot, 1),
            ';' => (Tok::Semi, 1),
            ',' => (Tok::Comma, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n = text.parse::<u64>().map_err(|_| {
                    Diagnostic::error(
                        start,
                        Pos {
                            line,
                            col: col + (j - i),
                        },
                        format!("number `{text}` is too large"),
                    )
                })?;
                (Tok::Nat(n), j - i)
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                (Tok::Ident(chars[i..j].iter().collect()), j - i)
            }
            other => {
                return Err(Diagnostic::error(
                    start,
                    Pos { line, col: col + 1 },
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        advance(len, &mut col, &mut i);
        out.push(Token {
            tok,
            start,
            end: Pos { line, col },
        });
    }
    let eof = Pos { line, col };
    out.push(Token {
        tok: Tok::Eof,
        start: eof,
        end: eof,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_and_primes() {
        let toks: Vec<Tok> = tokenize("o'.order' --> p.x; a -> b")
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect();
        assert_eq!(toks[0], Tok::Ident("o'".into()));
        assert_eq!(toks[3], Tok::Arrow);
        assert_eq!(toks[9], Tok::Arrow);
    }

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("// hi\n  end").unwrap();
        assert_eq!(toks[0].start, Pos { line: 2, col: 3 });
        let err = tokenize("p ! q").unwrap_err();
        assert_eq!(err.start, Pos { line: 1, col: 3 });
    }
}
