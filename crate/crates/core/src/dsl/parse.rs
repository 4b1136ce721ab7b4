use std::fmt;

use super::{Expr, VAR_SIGMA, VAR_T};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, column: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = col;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, line, col: start });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[begin..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| err(line, start, &["number"], format!("`{text}`")))?;
            out.push(Spanned { tok: Tok::Num(v), line, col: start });
            col += i - begin;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[begin..i].iter().collect();
            out.push(Spanned { tok: Tok::Ident(text), line, col: start });
            col += i - begin;
            continue;
        }
        return Err(err(line, start, &["expression"], format!("character `{c}`")));
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const ATOM_START: &[&str] = &["number", "identifier", "`(`", "`-`"];

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        err(t.line, t.col, expected, t.tok.describe())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            base = Expr::Pow(Box::new(base), self.exponent()?);
        }
        Ok(if negate { Expr::Neg(Box::new(base)) } else { base })
    }

    /// `('-')? number ('^' exponent)?`, folded right to left.
    fn exponent(&mut self) -> Result<f64, ParseError> {
        let sign = if self.peek().tok == Tok::Minus {
            self.bump();
            -1.0
        } else {
            1.0
        };
        let v = match self.peek().tok {
            Tok::Num(v) => {
                self.bump();
                v
            }
            _ => return Err(self.fail(&["number"])),
        };
        let v = if self.peek().tok == Tok::Caret {
            self.bump();
            v.powf(self.exponent()?)
        } else {
            v
        };
        let e = sign * v;
        if !e.is_finite() {
            let t = self.peek();
            return Err(err(t.line, t.col, &["finite exponent"], format!("{e}")));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Ident(ref name) => {
                self.bump();
                let func: Option<fn(Box<Expr>) -> Expr> = match name.as_str() {
                    "exp" => Some(Expr::Exp),
                    "ln" => Some(Expr::Ln),
                    "sin" => Some(Expr::Sin),
                    "cos" => Some(Expr::Cos),
                    _ => None,
                };
                if let Some(make) = func {
                    if self.peek().tok != Tok::LParen {
                        return Err(self.fail(&["`(`"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.close()?;
                    return Ok(make(Box::new(arg)));
                }
                let var = match name.as_str() {
                    "x0" => 0,
                    "x1" => 1,
                    "x2" => 2,
                    "x3" => 3,
                    "t" => VAR_T,
                    "sigma" => VAR_SIGMA,
                    _ => {
                        return Err(err(
                            t.line,
                            t.col,
                            &["x0", "x1", "x2", "x3", "t", "sigma", "exp", "ln", "sin", "cos"],
                            format!("identifier `{name}`"),
                        ))
                    }
                };
                Ok(Expr::Var(var))
            }
            _ => Err(self.fail(ATOM_START)),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&["`)`", "operator"]))
        }
    }
}

/// Parse an expression. Errors carry the 1-based line and column of the
/// offending token and the set of tokens that would have been accepted.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.fail(&["operator", "end of input"]));
    }
    Ok(e)
}
