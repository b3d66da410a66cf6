//! Payoff expressions for continuous games.
//!
//! Grammar (whitespace insignificant, binary operators left-associative):
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | atom ("^" INT)?
//! atom   := NUMBER | IDENT | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
//! FUNC   := "min" | "max" | "abs" | "ite"
//! IDENT  := "x" INT | "b" INT
//! ```
//!
//! `ite(lhs CMP rhs, then, else)` takes a comparison (`<`, `<=`, `>`, `>=`,
//! `==`) as its first argument. `xN` is player N's strategy and `bN` the N-th
//! family parameter, both one-based.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// Strategy of player `i` (one-based).
    X(u32),
    /// Family parameter `i` (one-based).
    B(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }

    fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Min,
    Max,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

/// Parsed expression. Literals are never negative; a leading minus is `Neg`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
    Ite(Box<Condition>, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Largest `x` and `b` indices referenced (0 when none).
    pub fn max_indices(&self) -> (u32, u32) {
        let mut out = (0, 0);
        self.visit_vars(&mut |v| match v {
            Var::X(i) => out.0 = out.0.max(i),
            Var::B(i) => out.1 = out.1.max(i),
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Neg(e) | Expr::Pow(e, _) => e.visit_vars(f),
            Expr::Bin(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
            Expr::Ite(c, a, b) => {
                c.lhs.visit_vars(f);
                c.rhs.visit_vars(f);
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    pub fn eval(&self, env: &Bindings<'_>) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(v) => env.get(*v)?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Eval("division by zero".into()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(e, n) => e.eval(env)?.powi(*n as i32),
            Expr::Call(func, args) => {
                let values = args.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>>>()?;
                match func {
                    Func::Min => values.into_iter().fold(f64::INFINITY, f64::min),
                    Func::Max => values.into_iter().fold(f64::NEG_INFINITY, f64::max),
                    Func::Abs => values[0].abs(),
                }
            }
            Expr::Ite(cond, then, other) => {
                if cond.op.holds(cond.lhs.eval(env)?, cond.rhs.eval(env)?) {
                    then.eval(env)?
                } else {
                    other.eval(env)?
                }
            }
        })
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_precedence: u8) -> fmt::Result {
        let wrap = self.precedence() < min_precedence;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::Var(Var::X(i)) => write!(f, "x{i}")?,
            Expr::Var(Var::B(i)) => write!(f, "b{i}")?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, 3)?;
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                a.write_at(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.write_at(f, p + 1)?;
            }
            Expr::Pow(e, n) => {
                e.write_at(f, 5)?;
                write!(f, "^{n}")?;
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write_at(f, 0)?;
                }
                f.write_str(")")?;
            }
            Expr::Ite(c, a, b) => {
                f.write_str("ite(")?;
                c.lhs.write_at(f, 0)?;
                write!(f, " {} ", c.op.symbol())?;
                c.rhs.write_at(f, 0)?;
                f.write_str(", ")?;
                a.write_at(f, 0)?;
                f.write_str(", ")?;
                b.write_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with the minimum parentheses needed to parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Values for `x1..` and `b1..`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bindings<'a> {
    pub strategies: &'a [f64],
    pub params: &'a [f64],
}

impl<'a> Bindings<'a> {
    pub fn new(strategies: &'a [f64], params: &'a [f64]) -> Self {
        Bindings { strategies, params }
    }

    fn get(&self, v: Var) -> Result<f64> {
        let (slice, i, name) = match v {
            Var::X(i) => (self.strategies, i, "x"),
            Var::B(i) => (self.params, i, "b"),
        };
        (i as usize)
            .checked_sub(1)
            .and_then(|j| slice.get(j))
            .copied()
            .ok_or_else(|| Error::Eval(format!("unbound variable {name}{i}")))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    let tail = parser.peek();
    if tail.kind != Tok::Eof {
        return Err(tail.error(format!("unexpected {}", tail.kind)));
    }
    Ok(expr)
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Cmp(CmpOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num { value, .. } => write!(f, "number {value}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Cmp(op) => write!(f, "'{}'", op.symbol()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        let at = |message: String| Error::Syntax {
            line: start_line,
            column: start_column,
            message,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut integral = true;
            if i < chars.len() && chars[i] == '.' {
                integral = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value = literal
                .parse::<f64>()
                .map_err(|_| at(format!("malformed number {literal:?}")))?;
            Tok::Num { value, integral }
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let next = chars.get(i + 1).copied();
            let (kind, width) = match (c, next) {
                ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
                ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
                ('=', Some('=')) => (Tok::Cmp(CmpOp::Eq), 2),
                ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
                ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                _ => return Err(at(format!("unexpected character {c:?}"))),
            };
            i += width;
            kind
        };
        column += i - start;
        tokens.push(Token {
            kind,
            line: start_line,
            column: start_column,
        });
    }
    tokens.push(Token {
        kind: Tok::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Tok) -> Result<()> {
        let t = self.next();
        if t.kind == kind {
            Ok(())
        } else {
            Err(t.error(format!("expected {kind}, found {}", t.kind)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().kind {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek().kind == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.peek().kind != Tok::Caret {
            return Ok(atom);
        }
        self.next();
        let t = self.next();
        match t.kind {
            Tok::Num { value, integral: true } if value <= u32::MAX as f64 => {
                Ok(Expr::Pow(Box::new(atom), value as u32))
            }
            ref other => Err(t.error(format!("exponent must be a nonnegative integer literal, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.kind {
            Tok::Num { value, .. } => Ok(Expr::Num(value)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(ref name) => match name.as_str() {
                "min" => self.call(&t, Func::Min),
                "max" => self.call(&t, Func::Max),
                "abs" => self.call(&t, Func::Abs),
                "ite" => self.ite(&t),
                _ => variable(name).ok_or_else(|| t.error(format!("unknown identifier {name:?}"))),
            },
            ref other => Err(t.error(format!("expected a number, variable, function or '(', found {other}"))),
        }
    }

    fn call(&mut self, head: &Token, func: Func) -> Result<Expr> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr()?];
        while self.peek().kind == Tok::Comma {
            self.next();
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen)?;
        if func == Func::Abs && args.len() != 1 {
            return Err(head.error(format!("abs takes 1 argument, got {}", args.len())));
        }
        Ok(Expr::Call(func, args))
    }

    fn ite(&mut self, head: &Token) -> Result<Expr> {
        self.expect(Tok::LParen)?;
        let lhs = self.expr()?;
        let t = self.next();
        let Tok::Cmp(op) = t.kind else {
            return Err(t.error(format!(
                "ite needs a comparison (<, <=, >, >=, ==) as its first argument, found {}",
                t.kind
            )));
        };
        let rhs = self.expr()?;
        let mut branches = Vec::new();
        while self.peek().kind == Tok::Comma {
            self.next();
            branches.push(self.expr()?);
        }
        self.expect(Tok::RParen)?;
        if branches.len() != 2 {
            return Err(head.error(format!(
                "ite takes a condition and 2 branches, got {} branches",
                branches.len()
            )));
        }
        let other = branches.pop().unwrap();
        let then = branches.pop().unwrap();
        Ok(Expr::Ite(
            Box::new(Condition { lhs, op, rhs }),
            Box::new(then),
            Box::new(other),
        ))
    }
}

fn variable(name: &str) -> Option<Expr> {
    let (head, digits) = name.split_at(1);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let index: u32 = digits.parse().ok().filter(|&i| i >= 1)?;
    match head {
        "x" => Some(Expr::Var(Var::X(index))),
        "b" => Some(Expr::Var(Var::B(index))),
        _ => None,
    }
}
