//! The loop DSL.
//!
//! ```text
//! # count down
//! vars x, y;
//! while x > 0 && x >= y do
//!   x := x - 1;
//!   y := 2*y + (x - 3)
//! end
//! ```
//!
//! Comparisons between affine forms are normalized to `g(x) > 0` using
//! integrality of the state. Assignments are simultaneous; variables without
//! an assignment keep their value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::types::{AffineUpdate, Guard, LoopProgram};
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Comma,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Gt,
    Ge,
    Lt,
    Le,
    And,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Assign => write!(f, "`:=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Ge => write!(f, "`>=`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Le => write!(f, "`<=`"),
            Tok::And => write!(f, "`&&`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ':' if chars.get(i + 1) == Some(&'=') => push(Tok::Assign, 2, &mut i, &mut col),
            '&' if chars.get(i + 1) == Some(&'&') => push(Tok::And, 2, &mut i, &mut col),
            '>' if chars.get(i + 1) == Some(&'=') => push(Tok::Ge, 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Le, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '/' => return Err(err(tl, tc, "non-affine expression: division is not supported")),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                    return Err(err(tl, tc, "non-integer literal"));
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token {
                    tok: Tok::Int(text.parse().expect("digits")),
                    line: tl,
                    column: tc,
                });
            }
            '.' if chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()) => {
                return Err(err(tl, tc, "non-integer literal"));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token {
                    tok: Tok::Ident(text),
                    line: tl,
                    column: tc,
                });
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// Affine form over the declared variables.
#[derive(Clone, Debug)]
struct Affine {
    coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl Affine {
    fn constant(d: usize, c: BigInt) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); d],
            constant: c,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn add(mut self, o: &Affine, sign: i64) -> Self {
        let s = BigInt::from(sign);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += &s * b;
        }
        self.constant += &s * &o.constant;
        self
    }

    fn scale(mut self, k: &BigInt) -> Self {
        for a in self.coeffs.iter_mut() {
            *a *= k;
        }
        self.constant *= k;
        self
    }
}

const KEYWORDS: [&str; 5] = ["vars", "while", "do", "end", "and"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        err(t.line, t.column, format!("expected {what}, found {}", t.tok))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                Ok((s, self.next()))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn var_index(&self, name: &str, at: &Token) -> Result<usize, ParseError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| err(at.line, at.column, format!("undeclared variable `{name}`")))
    }

    fn program(&mut self) -> Result<LoopProgram, ParseError> {
        self.keyword("vars")?;
        loop {
            let (name, at) = self.ident()?;
            if self.vars.contains(&name) {
                return Err(err(at.line, at.column, format!("variable `{name}` declared twice")));
            }
            self.vars.push(name);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::Semi, "`;` after the variable list")?;
        let d = self.vars.len();
        self.keyword("while")?;
        let mut guards = vec![self.condition()?];
        while self.peek().tok == Tok::And || self.is_keyword("and") {
            self.next();
            guards.push(self.condition()?);
        }
        self.keyword("do")?;
        let mut update = AffineUpdate::identity(d);
        let mut assigned = vec![false; d];
        while !self.is_keyword("end") {
            let (name, at) = self.ident()?;
            let idx = self.var_index(&name, &at)?;
            if assigned[idx] {
                return Err(err(at.line, at.column, format!("variable `{name}` assigned twice")));
            }
            assigned[idx] = true;
            self.expect(Tok::Assign, "`:=`")?;
            let rhs = self.expr()?;
            update.matrix[idx] = rhs.coeffs;
            update.offset[idx] = rhs.constant;
            if self.peek().tok == Tok::Semi {
                self.next();
            } else if !self.is_keyword("end") {
                return Err(self.unexpected("`;` or `end`"));
            }
        }
        self.keyword("end")?;
        if self.peek().tok != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        LoopProgram::new(guards, update, self.vars.clone()).map_err(|e| err(1, 1, e.to_string()))
    }

    fn condition(&mut self) -> Result<Guard, ParseError> {
        let lhs = self.expr()?;
        let op = self.next();
        let rhs = self.expr()?;
        let one = BigInt::one();
        let g = match op.tok {
            Tok::Gt => lhs.add(&rhs, -1),
            Tok::Ge => {
                let mut g = lhs.add(&rhs, -1);
                g.constant += &one;
                g
            }
            Tok::Lt => rhs.add(&lhs, -1),
            Tok::Le => {
                let mut g = rhs.add(&lhs, -1);
                g.constant += &one;
                g
            }
            other => {
                return Err(err(
                    op.line,
                    op.column,
                    format!("expected a comparison (`>`, `>=`, `<`, `<=`), found {other}"),
                ))
            }
        };
        Ok(Guard::new(g.coeffs, g.constant))
    }

    fn expr(&mut self) -> Result<Affine, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.next();
            let t = self.term()?;
            acc = acc.add(&t, sign);
        }
    }

    fn term(&mut self) -> Result<Affine, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            let star = self.next();
            let rhs = self.unary()?;
            acc = if acc.is_constant() {
                rhs.scale(&acc.constant)
            } else if rhs.is_constant() {
                acc.scale(&rhs.constant)
            } else {
                return Err(err(
                    star.line,
                    star.column,
                    "non-affine expression: product of two variables",
                ));
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Affine, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(self.unary()?.scale(&BigInt::from(-1)))
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Affine, ParseError> {
        let d = self.vars.len();
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Affine::constant(d, n))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let at = self.next();
                let idx = self.var_index(&name, &at)?;
                let mut a = Affine::constant(d, BigInt::zero());
                a.coeffs[idx] = BigInt::one();
                Ok(a)
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected("an integer, a variable or `(`")),
        }
    }
}

/// Parse and normalize a loop program.
pub fn parse_loop(source: &str) -> Result<LoopProgram, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: Vec::new(),
    };
    p.program()
}

/// Render an affine form `Σ c_i x_i + c` in DSL syntax.
pub fn format_affine(coeffs: &[BigInt], constant: &BigInt, names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        return constant.to_string();
    }
    if !constant.is_zero() {
        out.push_str(if constant.is_negative() { " - " } else { " + " });
        out.push_str(&constant.abs().to_string());
    }
    out
}

impl fmt::Display for LoopProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {};", self.var_names.join(", "))?;
        let conds: Vec<String> = self
            .guards
            .iter()
            .map(|g| format!("{} > 0", format_affine(&g.normal, &g.constant, &self.var_names)))
            .collect();
        writeln!(f, "while {} do", conds.join(" && "))?;
        for (i, name) in self.var_names.iter().enumerate() {
            let rhs = format_affine(&self.update.matrix[i], &self.update.offset[i], &self.var_names);
            writeln!(f, "  {name} := {rhs};")?;
        }
        writeln!(f, "end")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn countdown() {
        let p = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
        assert_eq!(p, LoopProgram::from_i64(&[&[1]], &[-1], &[(&[1], 0)]).unwrap());
    }

    #[test]
    fn ge_rewrites_to_strict() {
        let p = parse_loop("vars x,y; while x >= y do x := x; y := y + 1 end").unwrap();
        assert_eq!(p.guards, vec![Guard::from_i64(&[1, -1], 1)]);
        let p = parse_loop("vars x; while x < 3 do x := x + 1 end").unwrap();
        assert_eq!(p.guards, vec![Guard::from_i64(&[-1], 3)]);
        let p = parse_loop("vars x; while x <= 3 do x := x + 1 end").unwrap();
        assert_eq!(p.guards, vec![Guard::from_i64(&[-1], 4)]);
    }

    #[test]
    fn rejects_products_of_variables() {
        let e = parse_loop("vars x; while x*x > 0 do x := x end").unwrap_err();
        assert!(e.message.contains("non-affine"));
        assert_eq!((e.line, e.column), (1, 16));
    }

    #[test]
    fn rejects_non_integer_literals() {
        let e = parse_loop("vars x;\nwhile x > 0.5 do x := x end").unwrap_err();
        assert!(e.message.contains("non-integer"));
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rejects_unknown_and_duplicate_variables() {
        assert!(parse_loop("vars x; while y > 0 do x := x end")
            .unwrap_err()
            .message
            .contains("undeclared"));
        assert!(parse_loop("vars x; while x > 0 do x := 1; x := 2 end")
            .unwrap_err()
            .message
            .contains("twice"));
    }

    #[test]
    fn comments_parentheses_and_scaling() {
        let src = "# demo\nvars x, y; # two vars\nwhile 2*(x - y) > -3 && x > 0 do\n  x := -(y - 2*x) * 3;\n  y := x\nend\n";
        let p = parse_loop(src).unwrap();
        assert_eq!(p.guards[0], Guard::from_i64(&[2, -2], 3));
        assert_eq!(p.update.matrix[0], vec![BigInt::from(6), BigInt::from(-3)]);
        assert_eq!(p.update.matrix[1], vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn pretty_print_round_trips() {
        let src = "vars a, b; while 3*a - b + 2 > 0 && -a > -7 do a := b - 4; b := -2*a end";
        let p = parse_loop(src).unwrap();
        let printed = p.to_string();
        assert_eq!(parse_loop(&printed).unwrap(), p);
    }
}
