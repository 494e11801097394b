//! LL(1) parser for functor expressions and `D = ...` equations.
//!
//! ```text
//! expr := term ('+' term)*
//! term := 'D' | 'unit' | '(' expr ')'
//!       | 'lift' '(' expr ')' | 'const' '(' NAME ')'
//!       | ('sum' | 'prod' | 'fun') '(' expr ',' expr ')'
//! ```

use super::{named_constant, FunctorExpr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l, column: col });
        } else if "()+,=".contains(c) {
            chars.next();
            column += 1;
            out.push(Token { tok: Tok::Sym(c), line: l, column: col });
        } else {
            return Err(Error::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

/// Recursive-descent parser with one token of lookahead.
pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::Eof => "end of input".into(),
        };
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: format!("{}, found {found}", message.into()),
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    pub fn expect_eof(&mut self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.error("expected end of input")
        }
    }

    /// `VAR '='`, returning the variable name.
    pub fn binder(&mut self) -> Result<String> {
        let name = match &self.peek().tok {
            Tok::Ident(s) if s == "D" => s.clone(),
            _ => return self.error("expected variable 'D'"),
        };
        self.bump();
        self.expect_sym('=')?;
        Ok(name)
    }

    pub fn expr(&mut self) -> Result<FunctorExpr> {
        let mut e = self.term()?;
        while self.peek().tok == Tok::Sym('+') {
            self.bump();
            e = FunctorExpr::sum(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<FunctorExpr> {
        let word = match &self.peek().tok {
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                return Ok(e);
            }
            Tok::Ident(s) => s.clone(),
            _ => return self.error("expected an expression"),
        };
        let at = self.peek().clone();
        self.bump();
        match word.as_str() {
            "D" => Ok(FunctorExpr::Id),
            "unit" => Ok(FunctorExpr::Const(named_constant("1").expect("builtin"))),
            "lift" => {
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(FunctorExpr::lift(e))
            }
            "const" => {
                self.expect_sym('(')?;
                let name = match &self.peek().tok {
                    Tok::Ident(s) => s.clone(),
                    _ => return self.error("expected a poset name"),
                };
                let c = match named_constant(&name) {
                    Some(c) => c,
                    None => return self.error("unknown poset name"),
                };
                self.bump();
                self.expect_sym(')')?;
                Ok(FunctorExpr::Const(c))
            }
            "sum" | "prod" | "fun" => {
                self.expect_sym('(')?;
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(')')?;
                Ok(match word.as_str() {
                    "sum" => FunctorExpr::sum(a, b),
                    "prod" => FunctorExpr::prod(a, b),
                    _ => FunctorExpr::fun(a, b),
                })
            }
            other => Err(Error::Syntax {
                line: at.line,
                column: at.column,
                message: format!("unknown combinator {other:?}"),
            }),
        }
    }
}

/// Parses a bare functor expression such as `lift(unit + D)`.
pub fn parse_functor(src: &str) -> Result<FunctorExpr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl std::str::FromStr for FunctorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_functor(s)
    }
}
