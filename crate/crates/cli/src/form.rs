//! The FormSpec mini-language: rational linear combinations, products and
//! `D`-polynomials applied to named q-series.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor | factor)*
//! factor := number | '(' expr ')' | 'D' ['^' int] ['(' expr ')'] | atom
//! ```
//!
//! Juxtaposition multiplies, so `(D^3+1)G[2,1]` applies the operator
//! `D^3 + 1` to `G[2,1]`. A bare `D^r` must be followed by a parenthesized
//! argument or stand alone inside parentheses.

use std::fmt;

use num_traits::{One, Zero};
use qmf::arith::lcm;
use qmf::characters::character_by_label;
use qmf::detect::{f_kl, g_series, macmahon};
use qmf::eisenstein::EisensteinAtom;
use qmf::exact::parse_rational;
use qmf::newforms::NewformRegistry;
use qmf::qseries::eta_expand;
use qmf::{CycNumber, CycSeries, EtaProduct, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("at position {pos}: {message}")]
    Eval { pos: usize, message: String },
    #[error(transparent)]
    Core(#[from] qmf::Error),
}

fn parse_err<T>(pos: usize, message: impl Into<String>) -> Result<T, FormError> {
    Err(FormError::Parse { pos, message: message.into() })
}

fn eval_err<T>(pos: usize, message: impl Into<String>) -> Result<T, FormError> {
    Err(FormError::Eval { pos, message: message.into() })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Eisenstein { k: u32, u: u64, j: usize, t: u64 },
    E2,
    E2Twist(u64),
    Newform { level: u64, weight: u32, label: String },
    G { k: u32, level: u64 },
    F { k: u32, l: u32, level: u64 },
    U(u32),
    Eta(Vec<(u64, i64)>),
    Delta,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    /// `D^r`, as an operator.
    D(u32),
    Atom(Atom),
    Dilate(u64, Box<Node>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub pos: usize,
    pub expr: Expr,
}

impl Node {
    fn boxed(pos: usize, expr: Expr) -> Box<Node> {
        Box::new(Node { pos, expr })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), FormError> {
        if self.eat(c) {
            Ok(())
        } else {
            parse_err(self.pos, format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Node, FormError> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let mut lhs = if self.eat(b'-') {
            let t = self.term()?;
            Node { pos: start, expr: Expr::Neg(Box::new(t)) }
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            let pos = self.peek().map(|_| self.pos).unwrap_or(self.pos);
            let expr = if self.eat(b'+') {
                Expr::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat(b'-') {
                Expr::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Node { pos, expr };
        }
    }

    fn term(&mut self) -> Result<Node, FormError> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.peek().map(|_| self.pos).unwrap_or(self.pos);
            let expr = if self.eat(b'*') {
                Expr::Mul(Box::new(lhs), Box::new(self.factor()?))
            } else if self.eat(b'/') {
                Expr::Div(Box::new(lhs), Box::new(self.factor()?))
            } else if matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphabetic()) {
                if matches!(lhs.expr, Expr::D(_)) && self.peek() != Some(b'(') {
                    return parse_err(pos, "the argument of D must be parenthesized");
                }
                Expr::Mul(Box::new(lhs), Box::new(self.factor()?))
            } else {
                return Ok(lhs);
            };
            lhs = Node { pos, expr };
        }
    }

    fn factor(&mut self) -> Result<Node, FormError> {
        let pos = match self.peek() {
            Some(_) => self.pos,
            None => return parse_err(self.pos, "unexpected end of input"),
        };
        let c = self.src[pos];
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            let text = self.take_while(|b| b.is_ascii_digit() || b == b'.');
            let q = parse_rational(text).or_else(|_| parse_err(pos, format!("bad number `{text}`")))?;
            return Ok(Node { pos, expr: Expr::Number(q) });
        }
        if !c.is_ascii_alphabetic() {
            return parse_err(pos, format!("unexpected `{}`", c as char));
        }
        let name = self.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
        let expr = match name {
            "D" => {
                let r = if self.eat(b'^') { self.integer()? as u32 } else { 1 };
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    let op = Node::boxed(pos, Expr::D(r));
                    Expr::Mul(op, Box::new(arg))
                } else {
                    Expr::D(r)
                }
            }
            "dilate" => {
                let args = self.bracket_args(1)?;
                let t = self.int_arg(&args[0])?;
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Expr::Dilate(t, Box::new(arg))
            }
            "E2" => Expr::Atom(Atom::E2),
            "Delta" => Expr::Atom(Atom::Delta),
            "E" => {
                let args = self.bracket_args(3)?;
                let (u, j) = args[1]
                    .1
                    .split_once('.')
                    .ok_or(FormError::Parse { pos: args[1].0, message: "character must be `u.j`".into() })?;
                let u = u.trim().parse().or_else(|_| parse_err(args[1].0, "bad character modulus"))?;
                let j = j.trim().parse().or_else(|_| parse_err(args[1].0, "bad character index"))?;
                Expr::Atom(Atom::Eisenstein { k: self.int_arg(&args[0])? as u32, u, j, t: self.int_arg(&args[2])? })
            }
            "E2twist" => {
                let args = self.bracket_args(1)?;
                Expr::Atom(Atom::E2Twist(self.int_arg(&args[0])?))
            }
            "newform" => {
                let args = self.bracket_args(3)?;
                Expr::Atom(Atom::Newform {
                    level: self.int_arg(&args[0])?,
                    weight: self.int_arg(&args[1])? as u32,
                    label: args[2].1.trim().to_string(),
                })
            }
            "G" => {
                let args = self.bracket_args(2)?;
                Expr::Atom(Atom::G { k: self.int_arg(&args[0])? as u32, level: self.int_arg(&args[1])? })
            }
            "F" => {
                let args = self.bracket_args(3)?;
                Expr::Atom(Atom::F {
                    k: self.int_arg(&args[0])? as u32,
                    l: self.int_arg(&args[1])? as u32,
                    level: self.int_arg(&args[2])?,
                })
            }
            "U" => {
                let args = self.bracket_args(1)?;
                Expr::Atom(Atom::U(self.int_arg(&args[0])? as u32))
            }
            "eta" => {
                let args = self.bracket_args(0)?;
                let mut factors = Vec::new();
                for (p, a) in &args {
                    let (d, e) = a.split_once('^').unwrap_or((a, "1"));
                    let d = d.trim().parse().or_else(|_| parse_err(*p, format!("bad eta factor `{a}`")))?;
                    let e = e.trim().parse().or_else(|_| parse_err(*p, format!("bad eta factor `{a}`")))?;
                    factors.push((d, e));
                }
                Expr::Atom(Atom::Eta(factors))
            }
            other => return parse_err(pos, format!("unknown name `{other}`")),
        };
        Ok(Node { pos, expr })
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|&b| f(b)) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII slice")
    }

    fn integer(&mut self) -> Result<u64, FormError> {
        self.skip_ws();
        let pos = self.pos;
        let text = self.take_while(|b| b.is_ascii_digit());
        text.parse().or_else(|_| parse_err(pos, "expected a nonnegative integer"))
    }

    /// Comma-separated raw arguments in `[...]`, with their positions.
    /// `count = 0` accepts any nonzero number.
    fn bracket_args(&mut self, count: usize) -> Result<Vec<(usize, String)>, FormError> {
        self.expect(b'[')?;
        let mut args = Vec::new();
        let mut start = self.pos;
        loop {
            match self.src.get(self.pos) {
                None => return parse_err(self.pos, "unclosed `[`"),
                Some(b']') | Some(b',') => {
                    let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII slice");
                    if text.trim().is_empty() {
                        return parse_err(start, "empty argument");
                    }
                    args.push((start, text.to_string()));
                    self.pos += 1;
                    if self.src[self.pos - 1] == b']' {
                        break;
                    }
                    start = self.pos;
                }
                Some(_) => self.pos += 1,
            }
        }
        if count != 0 && args.len() != count {
            return parse_err(start, format!("expected {count} arguments, found {}", args.len()));
        }
        Ok(args)
    }

    fn int_arg(&self, arg: &(usize, String)) -> Result<u64, FormError> {
        arg.1
            .trim()
            .parse()
            .or_else(|_| parse_err(arg.0, format!("expected a positive integer, found `{}`", arg.1.trim())))
    }
}

pub fn parse(text: &str) -> Result<Node, FormError> {
    if !text.is_ascii() {
        return parse_err(0, "forms are ASCII");
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let node = p.expr()?;
    if p.peek().is_some() {
        return parse_err(p.pos, format!("unexpected `{}`", p.src[p.pos] as char));
    }
    Ok(node)
}

/// A q-series together with the max weight and level of its atoms, when known.
#[derive(Clone, Debug)]
pub struct Form {
    pub series: CycSeries,
    pub weight: Option<u32>,
    pub level: Option<u64>,
}

impl Form {
    fn constant(c: &Rational, precision: usize) -> Form {
        Form {
            series: CycSeries::constant(CycNumber::from_rational(c.clone()), precision),
            weight: Some(0),
            level: Some(1),
        }
    }
}

/// Intermediate values: a polynomial in `D` (constants included) or a form.
enum Value {
    Op(Vec<Rational>),
    Form(Form),
}

fn join_level(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    Some(lcm(a?, b?))
}

fn join_weight(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    Some(a?.max(b?))
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn apply(op: &[Rational], f: &Form) -> Form {
    let mut series = CycSeries::zero(f.series.precision());
    let mut degree = None;
    for (r, c) in op.iter().enumerate() {
        if !c.is_zero() {
            series.add_scaled_assign(&CycNumber::from_rational(c.clone()), &f.series.apply_d(r as u32));
            degree = Some(r as u32);
        }
    }
    let weight = match degree {
        Some(d) => f.weight.map(|w| w + 2 * d),
        None => f.weight,
    };
    Form { series, weight, level: f.level }
}

pub struct Evaluator<'a> {
    pub registry: &'a NewformRegistry,
    pub precision: usize,
}

impl Evaluator<'_> {
    pub fn eval(&self, node: &Node) -> Result<Form, FormError> {
        match self.value(node)? {
            Value::Form(f) => Ok(f),
            Value::Op(p) if p.len() == 1 => Ok(Form::constant(&p[0], self.precision)),
            Value::Op(_) => eval_err(node.pos, "operator D has no argument"),
        }
    }

    fn value(&self, node: &Node) -> Result<Value, FormError> {
        Ok(match &node.expr {
            Expr::Number(q) => Value::Op(vec![q.clone()]),
            Expr::D(r) => {
                let mut op = vec![Rational::zero(); *r as usize + 1];
                op[*r as usize] = Rational::one();
                Value::Op(op)
            }
            Expr::Atom(a) => Value::Form(self.atom(a, node.pos)?),
            Expr::Dilate(t, arg) => {
                if *t == 0 {
                    return eval_err(node.pos, "dilation must be positive");
                }
                let f = self.eval(arg)?;
                Value::Form(Form {
                    series: f.series.dilate(*t as usize, None),
                    weight: f.weight,
                    level: f.level.map(|l| l * t),
                })
            }
            Expr::Neg(a) => self.mul(Value::Op(vec![-Rational::one()]), self.value(a)?, node.pos)?,
            Expr::Add(a, b) => self.add(self.value(a)?, self.value(b)?, false, node.pos)?,
            Expr::Sub(a, b) => self.add(self.value(a)?, self.value(b)?, true, node.pos)?,
            Expr::Mul(a, b) => self.mul(self.value(a)?, self.value(b)?, node.pos)?,
            Expr::Div(a, b) => {
                let d = match self.value(b)? {
                    Value::Op(d) if d.len() == 1 && !d[0].is_zero() => d[0].clone(),
                    _ => return eval_err(node.pos, "can only divide by a nonzero number"),
                };
                self.mul(self.value(a)?, Value::Op(vec![d.recip()]), node.pos)?
            }
        })
        .map(|v| match v {
            Value::Op(o) => Value::Op(trim(o)),
            f => f,
        })
    }

    fn add(&self, a: Value, b: Value, negate: bool, pos: usize) -> Result<Value, FormError> {
        let b = if negate { self.mul(Value::Op(vec![-Rational::one()]), b, pos)? } else { b };
        Ok(match (a, b) {
            (Value::Op(x), Value::Op(y)) => {
                let mut s = vec![Rational::zero(); x.len().max(y.len())];
                for (i, c) in x.into_iter().enumerate() {
                    s[i] += c;
                }
                for (i, c) in y.into_iter().enumerate() {
                    s[i] += c;
                }
                Value::Op(s)
            }
            (Value::Form(f), Value::Form(g)) => Value::Form(Form {
                series: f.series.add(&g.series),
                weight: join_weight(f.weight, g.weight),
                level: join_level(f.level, g.level),
            }),
            (Value::Op(o), Value::Form(f)) | (Value::Form(f), Value::Op(o)) => {
                if o.len() != 1 {
                    return eval_err(pos, "cannot add an operator and a form");
                }
                let c = Form::constant(&o[0], self.precision);
                Value::Form(Form {
                    series: f.series.add(&c.series),
                    weight: join_weight(f.weight, c.weight),
                    level: f.level,
                })
            }
        })
    }

    fn mul(&self, a: Value, b: Value, pos: usize) -> Result<Value, FormError> {
        Ok(match (a, b) {
            (Value::Op(x), Value::Op(y)) => {
                let mut s = vec![Rational::zero(); x.len() + y.len() - 1];
                for (i, c) in x.iter().enumerate() {
                    for (j, d) in y.iter().enumerate() {
                        s[i + j] += c * d;
                    }
                }
                Value::Op(s)
            }
            (Value::Op(o), Value::Form(f)) => Value::Form(apply(&o, &f)),
            (Value::Form(f), Value::Op(o)) => {
                if o.len() != 1 {
                    return eval_err(pos, "operators must stand to the left of their argument");
                }
                Value::Form(apply(&o, &f))
            }
            (Value::Form(f), Value::Form(g)) => Value::Form(Form {
                series: f.series.mul(&g.series),
                weight: f.weight.zip(g.weight).map(|(x, y)| x + y),
                level: join_level(f.level, g.level),
            }),
        })
    }

    fn atom(&self, atom: &Atom, pos: usize) -> Result<Form, FormError> {
        let p = self.precision;
        let cyc = |s: qmf::IntSeries| s.to_cyc();
        let at = |e: qmf::Error| FormError::Eval { pos, message: e.to_string() };
        Ok(match atom {
            Atom::Eisenstein { k, u, j, t } => {
                let chi = character_by_label(*u, *j).map_err(at)?;
                let e = EisensteinAtom::new(*k, chi, *t).map_err(at)?;
                Form { series: e.expand(p), weight: Some(*k), level: Some(e.level_divisor()) }
            }
            Atom::E2 => Form { series: EisensteinAtom::e2().expand(p), weight: Some(2), level: Some(1) },
            Atom::E2Twist(t) => {
                let e = EisensteinAtom::e2_twist(*t).map_err(at)?;
                Form { series: e.expand(p), weight: Some(2), level: Some(*t) }
            }
            Atom::Newform { level, weight, label } => {
                let rec = self.registry.get(*level, *weight, label).map_err(at)?;
                Form { series: rec.expand(p)?, weight: Some(*weight), level: Some(*level) }
            }
            Atom::G { k, level } => {
                Form { series: cyc(g_series(*k, *level, p).map_err(at)?), weight: Some(*k), level: Some(*level) }
            }
            Atom::F { k, l, level } => Form {
                series: cyc(f_kl(*k, *l, *level, p).map_err(at)?),
                weight: Some(k + 1 + 2 * l),
                level: Some(*level),
            },
            Atom::U(a) => Form {
                series: cyc(macmahon(*a, p.max(2)).map_err(at)?.series().truncate(p)),
                weight: Some(2 * a),
                level: Some(1),
            },
            Atom::Eta(factors) => {
                let eta = EtaProduct::new(factors).map_err(at)?;
                let dw = eta.double_weight();
                let weight = (dw >= 0 && dw % 2 == 0).then_some(dw as u32 / 2);
                Form { series: cyc(eta_expand(&eta, p).map_err(at)?), weight, level: None }
            }
            Atom::Delta => {
                let eta = EtaProduct::new(&[(1, 24)]).map_err(at)?;
                Form { series: cyc(eta_expand(&eta, p).map_err(at)?), weight: Some(12), level: Some(1) }
            }
        })
    }
}

/// Parses and evaluates `text` to precision `precision`.
pub fn evaluate(text: &str, registry: &NewformRegistry, precision: usize) -> Result<Form, FormError> {
    let node = parse(text)?;
    Evaluator { registry, precision }.eval(&node)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eisenstein { k, u, j, t } => write!(f, "E[{k},{u}.{j},{t}]"),
            Atom::E2 => write!(f, "E2"),
            Atom::E2Twist(t) => write!(f, "E2twist[{t}]"),
            Atom::Newform { level, weight, label } => write!(f, "newform[{level},{weight},{label}]"),
            Atom::G { k, level } => write!(f, "G[{k},{level}]"),
            Atom::F { k, l, level } => write!(f, "F[{k},{l},{level}]"),
            Atom::U(a) => write!(f, "U[{a}]"),
            Atom::Eta(factors) => {
                let parts: Vec<String> = factors.iter().map(|(d, e)| format!("{d}^{e}")).collect();
                write!(f, "eta[{}]", parts.join(","))
            }
            Atom::Delta => write!(f, "Delta"),
        }
    }
}
