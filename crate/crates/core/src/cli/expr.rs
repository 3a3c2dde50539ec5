//! The phantom expression language.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-'? power
//! power := atom ('^' INT)?
//! atom  := NUMBER | 'p' | IDENT '(' expr ')' | 'alpha' '(' expr ',' NUMBER ')' | '(' expr ')'
//! ```
//!
//! `p` is the phantom unit. `^` binds tighter than unary minus, so `-2^2`
//! is `-4`. The exponent is an integer literal with an optional sign.

use std::fmt;

use crate::error::{PhantomError, Result};
use crate::ring::Phantom;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Abs,
    Conj,
    Red,
    Inv,
    Alpha(f64),
}

impl Func {
    pub const NAMES: [&'static str; 8] = ["exp", "log", "sqrt", "abs", "conj", "red", "inv", "alpha"];

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Conj => "conj",
            Func::Red => "red",
            Func::Inv => "inv",
            Func::Alpha(_) => "alpha",
        }
    }

    fn unary(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "conj" => Func::Conj,
            "red" => Func::Red,
            "inv" => Func::Inv,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    PhantomUnit,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// Prints the tree, e.g. `PowInt(Add(1, Mul(2, p)), 3)`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(x) => write!(f, "{x}"),
            Expr::PhantomUnit => write!(f, "p"),
            Expr::Neg(a) => write!(f, "Neg({a})"),
            Expr::Add(a, b) => write!(f, "Add({a}, {b})"),
            Expr::Sub(a, b) => write!(f, "Sub({a}, {b})"),
            Expr::Mul(a, b) => write!(f, "Mul({a}, {b})"),
            Expr::Div(a, b) => write!(f, "Div({a}, {b})"),
            Expr::PowInt(a, n) => write!(f, "PowInt({a}, {n})"),
            Expr::Call(Func::Alpha(al), a) => write!(f, "Call(alpha({al}), {a})"),
            Expr::Call(func, a) => write!(f, "Call({}, {a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset of the offending token.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, int: Option<i64> },
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> std::result::Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            i = digits(i);
            let mut int = true;
            if bytes.get(i) == Some(&b'.') {
                int = false;
                i = digits(i + 1);
            }
            if matches!(bytes.get(i), Some(b'e' | b'E')) {
                let mut j = i + 1;
                if matches!(bytes.get(j), Some(b'+' | b'-')) {
                    j += 1;
                }
                if bytes.get(j).is_some_and(u8::is_ascii_digit) {
                    int = false;
                    i = digits(j);
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| SyntaxError {
                offset: start,
                expected: vec!["number"],
                found: text.to_string(),
            })?;
            let int = if int { text.parse::<i64>().ok() } else { None };
            out.push((start, Tok::Num { value, int }));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if b"+-*/^(),".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(SyntaxError {
                offset: i,
                expected: vec!["number", "operator", "identifier"],
                found: format!("{ch:?}"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

const ATOM_START: [&str; 4] = ["number", "'p'", "function", "'('"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn fail<T>(&self, expected: &[&'static str]) -> std::result::Result<T, SyntaxError> {
        let (offset, tok) = &self.toks[self.pos];
        Err(SyntaxError { offset: *offset, expected: expected.to_vec(), found: tok.describe() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, name: &'static str) -> std::result::Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, SyntaxError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.power()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> std::result::Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match *self.peek() {
            Tok::Num { int: Some(k), .. } => {
                let k = if negative { -k } else { k };
                let Ok(k) = i32::try_from(k) else {
                    return self.fail(&["32-bit integer exponent"]);
                };
                self.pos += 1;
                Ok(Expr::PowInt(Box::new(base), k))
            }
            _ => self.fail(&["integer exponent"]),
        }
    }

    fn atom(&mut self) -> std::result::Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.pos += 1;
                Ok(Expr::Literal(value))
            }
            Tok::Ident(name) if name == "p" => {
                self.pos += 1;
                Ok(Expr::PhantomUnit)
            }
            Tok::Ident(name) if name == "alpha" => {
                self.pos += 1;
                self.expect('(', "'('")?;
                let arg = self.expr()?;
                self.expect(',', "','")?;
                let Tok::Num { value, .. } = *self.peek() else {
                    return self.fail(&["number"]);
                };
                self.pos += 1;
                self.expect(')', "')'")?;
                Ok(Expr::Call(Func::Alpha(value), Box::new(arg)))
            }
            Tok::Ident(name) => {
                let Some(func) = Func::unary(&name) else {
                    return self.fail(&ATOM_START);
                };
                self.pos += 1;
                self.expect('(', "'('")?;
                let arg = self.expr()?;
                self.expect(')', "')'")?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')', "')'")?;
                Ok(inner)
            }
            _ => self.fail(&ATOM_START),
        }
    }
}

pub fn parse(src: &str) -> std::result::Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]);
    }
    Ok(e)
}

/// An evaluation result. `red`, `abs`, and `alpha` produce reals, and
/// arithmetic between reals stays real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Phantom(Phantom),
}

impl Value {
    pub fn to_phantom(self) -> Phantom {
        match self {
            Value::Real(x) => Phantom::real(x),
            Value::Phantom(z) => z,
        }
    }
}

fn binary(
    a: Value,
    b: Value,
    real: impl Fn(f64, f64) -> Result<f64>,
    ring: impl Fn(Phantom, Phantom) -> Result<Phantom>,
) -> Result<Value> {
    match (a, b) {
        (Value::Real(x), Value::Real(y)) => real(x, y).map(Value::Real),
        _ => ring(a.to_phantom(), b.to_phantom()).map(Value::Phantom),
    }
}

pub fn eval(e: &Expr) -> Result<Value> {
    Ok(match e {
        Expr::Literal(x) => Value::Real(*x),
        Expr::PhantomUnit => Value::Phantom(Phantom::P),
        Expr::Neg(a) => match eval(a)? {
            Value::Real(x) => Value::Real(-x),
            Value::Phantom(z) => Value::Phantom(-z),
        },
        Expr::Add(a, b) => binary(eval(a)?, eval(b)?, |x, y| Ok(x + y), |x, y| Ok(x + y))?,
        Expr::Sub(a, b) => binary(eval(a)?, eval(b)?, |x, y| Ok(x - y), |x, y| Ok(x - y))?,
        Expr::Mul(a, b) => binary(eval(a)?, eval(b)?, |x, y| Ok(x * y), |x, y| Ok(x * y))?,
        Expr::Div(a, b) => binary(
            eval(a)?,
            eval(b)?,
            |x, y| {
                if y == 0.0 {
                    Err(PhantomError::NotInvertible("division by zero".into()))
                } else {
                    Ok(x / y)
                }
            },
            |x, y| x.div(y),
        )?,
        Expr::PowInt(a, n) => match eval(a)? {
            Value::Real(x) if *n < 0 && x == 0.0 => {
                return Err(PhantomError::NotInvertible("zero to a negative power".into()))
            }
            Value::Real(x) => Value::Real(x.powi(*n)),
            Value::Phantom(z) => Value::Phantom(z.pow_int(*n)?),
        },
        Expr::Call(func, a) => {
            let z = eval(a)?.to_phantom();
            match func {
                Func::Exp => Value::Phantom(z.exp()),
                Func::Log => Value::Phantom(z.ln()?),
                Func::Sqrt => Value::Phantom(z.sqrt()?),
                Func::Abs => Value::Real(z.abs()),
                Func::Conj => Value::Phantom(z.conjugate()),
                Func::Red => Value::Real(z.reduction()),
                Func::Inv => Value::Phantom(z.inverse()?),
                Func::Alpha(al) => Value::Real(z.alpha_value(*al)?),
            }
        }
    })
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// round-trips the rounded value. Magnitudes outside `[1e-6, 1e15)` use
/// exponent notation; negative zero prints as `0`.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        return "0".into();
    }
    let m = rounded.abs();
    if (1e-6..1e15).contains(&m) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Rounds `x` to a multiple of the 12th significant digit of `scale`.
fn round_to_scale(x: f64, scale: f64) -> f64 {
    if !(scale.is_finite() && scale > 0.0 && x.is_finite()) {
        return x;
    }
    let quantum = 10f64.powi(scale.log10().floor() as i32 - 11);
    if quantum == 0.0 || !quantum.is_finite() {
        return x;
    }
    (x / quantum).round() * quantum
}

/// `a + p*b`, `a - p*b`, or `a` alone when the rounded phantom term is 0.
///
/// Both terms are rounded to 12 significant digits of the larger of the
/// two magnitudes, so round-off residue far below the leading digit of the
/// number prints as 0.
pub fn render_phantom(z: Phantom) -> String {
    let scale = z.re.abs().max(z.ph.abs());
    let a = format_real(round_to_scale(z.re, scale));
    let b = format_real(round_to_scale(z.ph, scale));
    if b == "0" {
        a
    } else if let Some(mag) = b.strip_prefix('-') {
        format!("{a} - p*{mag}")
    } else {
        format!("{a} + p*{b}")
    }
}

pub fn render(v: Value) -> String {
    match v {
        Value::Real(x) => format_real(x),
        Value::Phantom(z) => render_phantom(z),
    }
}

/// Parses and evaluates `src` to a phantom number.
pub fn eval_str(src: &str) -> std::result::Result<Value, EvalError> {
    let e = parse(src)?;
    Ok(eval(&e)?)
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Domain(#[from] PhantomError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(src: &str) -> String {
        render(eval_str(src).unwrap())
    }

    #[test]
    fn tree_shapes() {
        assert_eq!(parse("(1+2*p)^3").unwrap().to_string(), "PowInt(Add(1, Mul(2, p)), 3)");
        assert_eq!(parse("red(conj(1+2*p))").unwrap().to_string(), "Call(red, Call(conj, Add(1, Mul(2, p))))");
        assert_eq!(parse("-2^2").unwrap().to_string(), "Neg(PowInt(2, 2))");
        assert_eq!(parse("1-2-3").unwrap().to_string(), "Sub(Sub(1, 2), 3)");
    }

    #[test]
    fn syntax_errors() {
        let e = parse("1 ^ p").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.expected, vec!["integer exponent"]);
        assert_eq!(parse("2^1.5").unwrap_err().offset, 2);
        assert_eq!(parse("(1+2").unwrap_err().expected, vec!["')'"]);
        assert_eq!(parse("foo(1)").unwrap_err().offset, 0);
        assert_eq!(parse("1 2").unwrap_err().offset, 2);
        assert_eq!(parse("1 # 2").unwrap_err().offset, 2);
        assert_eq!(parse("").unwrap_err().offset, 0);
    }

    #[test]
    fn evaluation() {
        assert_eq!(show("(1+2*p)^3"), "1 + p*26");
        assert_eq!(show("inv(2+2*p)"), "0.5 - p*0.25");
        assert!(matches!(eval_str("inv(p)"), Err(EvalError::Domain(PhantomError::NotInvertible(_)))));
        assert_eq!(show("0.1+0.2"), "0.3");
        assert_eq!(show("-2^2"), "-4");
        assert_eq!(show("2^-1"), "0.5");
        assert_eq!(show("red(1+2*p)"), "3");
        assert_eq!(show("alpha(1+2*p, 2)"), "2");
        assert_eq!(show("1e-7*p"), "0 + p*1e-7");
        assert_eq!(show("-0"), "0");
    }

    #[test]
    fn rendered_output_reparses_to_itself() {
        for src in ["(1+2*p)^3", "inv(2+2*p)", "exp(1+p)", "1e-9 - 3e20*p", "sqrt(2)*p"] {
            let once = show(src);
            assert_eq!(show(&once), once, "{src}");
        }
    }
}
