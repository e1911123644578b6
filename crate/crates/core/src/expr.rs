//! Coefficient expressions for metric components.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = [ "-" ] integer
//!          | "(" [ "-" ] integer [ "/" integer ] ")" ;
//! primary  = number
//!          | variable
//!          | function "(" expr { "," expr } ")"
//!          | "(" expr ")" ;
//! variable = "x" integer ;            (* x1, x2, ... *)
//! function = "sin" | "cos" | "exp" | "ln" | "sqrt" | "tanh" ;
//! number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! Binary operators are left-associative. Unary minus binds looser than `^`,
//! so `-x1^2` is `-(x1^2)`. There is no implicit multiplication, and
//! exponents are constants, so `x1^x2` and `x1^2^3` are rejected.

use std::fmt;

use thiserror::Error;

use crate::jets::{Jet, JetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at column {position}")]
    UnknownIdentifier { position: usize, name: String },
    #[error("function `{name}` takes 1 argument, got {got} (column {position})")]
    Arity { position: usize, name: String, got: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::Arity { position, .. } => *position,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("domain error in `{subexpr}`: {source}")]
    Domain { subexpr: String, source: JetError },
    #[error("domain error in `{subexpr}`: argument value {value}")]
    Value { subexpr: String, value: f64 },
    #[error("variable x{index} is not supplied (point has {len} coordinates)")]
    MissingVariable { index: usize, len: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Tanh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
        }
    }
}

/// Expression tree. Variables are stored zero-based (`x1` is `Var(0)`).
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64),
    Var(usize),
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    /// Base raised to the reduced rational `num/den`, `den > 0`.
    Pow(Box<Expression>, i64, i64),
    Call(Func, Box<Expression>),
}

impl Expression {
    /// Number of coordinates the expression needs (highest variable index + 1).
    pub fn arity(&self) -> usize {
        match self {
            Expression::Num(_) => 0,
            Expression::Var(i) => i + 1,
            Expression::Neg(e) | Expression::Pow(e, ..) | Expression::Call(_, e) => e.arity(),
            Expression::Binary(_, l, r) => l.arity().max(r.arity()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        let domain = |value: f64| EvalError::Value { subexpr: self.to_string(), value };
        Ok(match self {
            Expression::Num(v) => *v,
            Expression::Var(i) => *x
                .get(*i)
                .ok_or(EvalError::MissingVariable { index: i + 1, len: x.len() })?,
            Expression::Neg(e) => -e.eval(x)?,
            Expression::Binary(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(domain(b));
                        }
                        a / b
                    }
                }
            }
            Expression::Pow(e, num, den) => {
                let v = e.eval(x)?;
                if *den == 1 {
                    if v == 0.0 && *num < 0 {
                        return Err(domain(v));
                    }
                    v.powi(*num as i32)
                } else {
                    if v <= 0.0 {
                        return Err(domain(v));
                    }
                    v.powf(*num as f64 / *den as f64)
                }
            }
            Expression::Call(f, e) => {
                let v = e.eval(x)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Tanh => v.tanh(),
                    Func::Ln => {
                        if v <= 0.0 {
                            return Err(domain(v));
                        }
                        v.ln()
                    }
                    Func::Sqrt => {
                        if v <= 0.0 {
                            return Err(domain(v));
                        }
                        v.sqrt()
                    }
                }
            }
        })
    }

    /// Jet of the expression composed with the coordinate jets in `point`.
    pub fn eval_jet(&self, point: &[Jet]) -> Result<Jet, EvalError> {
        let domain = |source: JetError| match source {
            JetError::Domain { .. } => EvalError::Domain { subexpr: self.to_string(), source },
            other => EvalError::Jet(other),
        };
        Ok(match self {
            Expression::Num(v) => {
                let first = point
                    .first()
                    .ok_or(EvalError::MissingVariable { index: 1, len: 0 })?;
                first.constant_like(*v)
            }
            Expression::Var(i) => point
                .get(*i)
                .cloned()
                .ok_or(EvalError::MissingVariable { index: i + 1, len: point.len() })?,
            Expression::Neg(e) => -e.eval_jet(point)?,
            Expression::Binary(op, l, r) => {
                let (a, b) = (l.eval_jet(point)?, r.eval_jet(point)?);
                match op {
                    BinOp::Add => a.try_add(&b)?,
                    BinOp::Sub => a.try_sub(&b)?,
                    BinOp::Mul => a.try_mul(&b)?,
                    BinOp::Div => a.try_div(&b).map_err(domain)?,
                }
            }
            Expression::Pow(e, num, den) => e.eval_jet(point)?.pow_rational(*num, *den).map_err(domain)?,
            Expression::Call(f, e) => {
                let v = e.eval_jet(point)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Tanh => v.tanh(),
                    Func::Ln => v.ln().map_err(domain)?,
                    Func::Sqrt => v.sqrt().map_err(domain)?,
                }
            }
        })
    }
}

impl fmt::Display for Expression {
    /// Fully parenthesized form; parsing it back yields an identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Num(v) => write!(f, "{v:?}"),
            Expression::Var(i) => write!(f, "x{}", i + 1),
            Expression::Neg(e) => write!(f, "(-{e})"),
            Expression::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expression::Pow(e, num, 1) => write!(f, "({e}^({num}))"),
            Expression::Pow(e, num, den) => write!(f, "({e}^({num}/{den}))"),
            Expression::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, ParseError> {
        let chars: Vec<char> = src.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                let mut integral = true;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    integral = false;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(v, integral), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
            } else if "+-*/^(),".contains(c) {
                toks.push((Tok::Op(c), i));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::End, chars.len()));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        ParseError::Syntax {
            position: self.at(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.error(&format!("`{op}`")))
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat('-') {
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (num, den) = self.exponent()?;
        Ok(Expression::Pow(Box::new(base), num, den))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        match *self.peek() {
            Tok::Num(v, true) if v <= i32::MAX as f64 => {
                self.bump();
                Ok(v as i64)
            }
            Tok::Num(..) => Err(ParseError::Syntax {
                position: self.at(),
                message: "exponent must be an integer or a ratio of integers".into(),
            }),
            _ => Err(self.error("integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<(i64, i64), ParseError> {
        let paren = self.eat('(');
        let sign = if self.eat('-') { -1 } else { 1 };
        let num = sign * self.integer()?;
        let mut den = 1;
        if paren {
            if self.eat('/') {
                let at = self.at();
                den = self.integer()?;
                if den == 0 {
                    return Err(ParseError::Syntax {
                        position: at,
                        message: "zero denominator in exponent".into(),
                    });
                }
            }
            self.expect(')')?;
        }
        let g = gcd(num.abs(), den);
        Ok((num / g, den / g))
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let at = self.at();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Expression::Num(v))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(func) = Func::from_name(&name) {
                    self.expect('(')?;
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    if args.len() != 1 {
                        return Err(ParseError::Arity { position: at, name, got: args.len() });
                    }
                    return Ok(Expression::Call(func, Box::new(args.pop().unwrap())));
                }
                match variable_index(&name) {
                    Some(i) => Ok(Expression::Var(i)),
                    None => Err(ParseError::UnknownIdentifier { position: at, name }),
                }
            }
            _ => Err(self.error("expression")),
        }
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

pub fn parse(source: &str) -> Result<Expression, ParseError> {
    let mut p = Parser { toks: Lexer::new(source)?.toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

/// [`parse`], additionally rejecting variables beyond `x{dim}`.
pub fn parse_with_dim(source: &str, dim: usize) -> Result<Expression, ParseError> {
    let e = parse(source)?;
    if e.arity() > dim {
        let name = format!("x{}", e.arity());
        let position = source.find(&name).unwrap_or(0);
        return Err(ParseError::UnknownIdentifier { position, name });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::JetSpace;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use Expression::*;

    fn bx(e: Expression) -> Box<Expression> {
        Box::new(e)
    }

    #[test]
    fn parses_sum_of_product() {
        let e = parse("x1*x1 + 2").unwrap();
        assert_eq!(e, Binary(BinOp::Add, bx(Binary(BinOp::Mul, bx(Var(0)), bx(Var(0)))), bx(Num(2.0))));
    }

    #[test]
    fn parses_power_of_call() {
        assert_eq!(parse("sin(x2)^2").unwrap(), Pow(bx(Call(Func::Sin, bx(Var(1)))), 2, 1));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse("-x1^2").unwrap(), Neg(bx(Pow(bx(Var(0)), 2, 1))));
        assert_eq!(parse("x1^(-3/6)").unwrap(), Pow(bx(Var(0)), -1, 2));
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse("x1 +* 2") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x1^x2"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x1^2^3"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x1^0.5"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("2 x1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("(x1"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn identifier_and_arity_errors() {
        assert!(matches!(parse("y1 + 1"), Err(ParseError::UnknownIdentifier { .. })));
        assert!(matches!(parse("x0"), Err(ParseError::UnknownIdentifier { .. })));
        assert!(matches!(parse("sin(x1, x2)"), Err(ParseError::Arity { got: 2, .. })));
        assert!(matches!(parse_with_dim("x3", 2), Err(ParseError::UnknownIdentifier { .. })));
        assert!(parse_with_dim("x2", 2).is_ok());
    }

    #[test]
    fn jet_evaluation_of_square() {
        let s = JetSpace::new(&[(1, 2)]).unwrap();
        let x = s.variable(0, 3.0).unwrap();
        let j = parse("x1*x1").unwrap().eval_jet(&[x]).unwrap();
        assert_eq!(j.value(), 9.0);
        assert_eq!(j.extract(&[1]).unwrap(), 6.0);
        assert_eq!(j.extract(&[2]).unwrap(), 2.0);
    }

    #[test]
    fn jet_evaluation_of_sine_at_zero() {
        let s = JetSpace::new(&[(1, 2)]).unwrap();
        let x = s.variable(0, 0.0).unwrap();
        let j = parse("sin(x1)").unwrap().eval_jet(&[x]).unwrap();
        assert_eq!(j.value(), 0.0);
        assert_eq!(j.extract(&[1]).unwrap(), 1.0);
        assert_eq!(j.extract(&[2]).unwrap(), 0.0);
    }

    #[test]
    fn log_of_negative_names_the_subexpression() {
        let s = JetSpace::new(&[(1, 1)]).unwrap();
        let x = s.variable(0, -1.0).unwrap();
        match parse("1 + ln(x1)").unwrap().eval_jet(&[x]) {
            Err(EvalError::Domain { subexpr, .. }) => assert_eq!(subexpr, "ln(x1)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("ln(x1)").unwrap().eval(&[-1.0]), Err(EvalError::Value { .. })));
        assert!(matches!(parse("1/x1").unwrap().eval(&[0.0]), Err(EvalError::Value { .. })));
    }

    /// Random smooth expressions over x1, x2 that stay defined near the sampling box.
    fn arb_expr() -> impl Strategy<Value = Expression> {
        let leaf = prop_oneof![
            (0usize..2).prop_map(Var),
            (0.1f64..3.0).prop_map(Num),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Binary(BinOp::Add, bx(a), bx(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Binary(BinOp::Sub, bx(a), bx(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Binary(BinOp::Mul, bx(a), bx(b))),
                inner.clone().prop_map(|a| Neg(bx(a))),
                inner.clone().prop_map(|a| Call(Func::Sin, bx(a))),
                inner.clone().prop_map(|a| Call(Func::Cos, bx(a))),
                inner.clone().prop_map(|a| Call(Func::Tanh, bx(a))),
                inner.clone().prop_map(|a| Pow(bx(a), 2, 1)),
                // strictly positive arguments for the partial functions
                inner.clone().prop_map(|a| Call(Func::Exp, bx(Call(Func::Sin, bx(a))))),
                inner.clone().prop_map(|a| Call(
                    Func::Ln,
                    bx(Binary(BinOp::Add, bx(Num(2.0)), bx(Call(Func::Cos, bx(a)))))
                )),
                inner.clone().prop_map(|a| Call(
                    Func::Sqrt,
                    bx(Binary(BinOp::Add, bx(Num(1.5)), bx(Call(Func::Sin, bx(a)))))
                )),
                inner.clone().prop_map(|a| Binary(
                    BinOp::Div,
                    bx(a),
                    bx(Binary(BinOp::Add, bx(Num(2.0)), bx(Call(Func::Sin, bx(Var(0))))))
                )),
                inner.prop_map(|a| Pow(
                    bx(Binary(BinOp::Add, bx(Num(2.0)), bx(Call(Func::Cos, bx(a))))),
                    -3,
                    2
                )),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            prop_assert_eq!(parse(&reparsed.to_string()).unwrap(), reparsed);
        }

        #[test]
        fn jets_agree_with_central_differences(
            e in arb_expr(),
            x1 in -1.0f64..1.0,
            x2 in -1.0f64..1.0,
        ) {
            let s = JetSpace::new(&[(2, 2)]).unwrap();
            let pt = [s.variable(0, x1).unwrap(), s.variable(1, x2).unwrap()];
            let j = e.eval_jet(&pt).unwrap();
            let h = 1e-4;
            let f = |a: f64, b: f64| e.eval(&[a, b]).unwrap();
            prop_assert!((j.value() - f(x1, x2)).abs() <= 1e-12 * (1.0 + f(x1, x2).abs()));
            let fd = [
                (f(x1 + h, x2) - f(x1 - h, x2)) / (2.0 * h),
                (f(x1, x2 + h) - f(x1, x2 - h)) / (2.0 * h),
            ];
            let jd = [j.extract(&[1, 0]).unwrap(), j.extract(&[0, 1]).unwrap()];
            for k in 0..2 {
                prop_assert!(
                    (jd[k] - fd[k]).abs() <= 1e-5 * (1.0 + fd[k].abs()),
                    "d/dx{}: jet {} fd {}", k + 1, jd[k], fd[k]
                );
            }
            let fxy = (f(x1 + h, x2 + h) - f(x1 + h, x2 - h) - f(x1 - h, x2 + h) + f(x1 - h, x2 - h))
                / (4.0 * h * h);
            let jxy = j.extract(&[1, 1]).unwrap();
            let scale = 1.0 + fxy.abs() + 1e-3 * f(x1, x2).abs();
            prop_assert!((jxy - fxy).abs() <= 1e-5 * scale, "mixed: jet {} fd {}", jxy, fxy);
        }
    }

    #[test]
    fn third_order_matches_differences() {
        let e = parse("exp(sin(x1)) * x1^3 / (2 + cos(x1))").unwrap();
        let x0 = 0.37;
        let s = JetSpace::new(&[(1, 3)]).unwrap();
        let j = e.eval_jet(&[s.variable(0, x0).unwrap()]).unwrap();
        let f = |a: f64| e.eval(&[a]).unwrap();
        let h = 1e-3;
        let fd3 = (f(x0 + 2.0 * h) - 2.0 * f(x0 + h) + 2.0 * f(x0 - h) - f(x0 - 2.0 * h)) / (2.0 * h * h * h);
        let d3 = j.extract(&[3]).unwrap();
        assert_relative_eq!(d3, fd3, max_relative = 1e-3);
    }
}
