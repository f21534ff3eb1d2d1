//! Expressions `r(θ)` for star-shaped boundaries, evaluated with forward-mode derivatives.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Value and first derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub slope: f64,
}

impl Dual {
    pub fn constant(value: f64) -> Self {
        Dual { value, slope: 0.0 }
    }

    pub fn variable(value: f64) -> Self {
        Dual { value, slope: 1.0 }
    }

    fn chain(self, value: f64, derivative: f64) -> Self {
        Dual {
            value,
            slope: derivative * self.slope,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            value: self.value + o.value,
            slope: self.slope + o.slope,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            value: self.value - o.value,
            slope: self.slope - o.slope,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            value: self.value * o.value,
            slope: self.slope * o.value + self.value * o.slope,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual {
            value: self.value / o.value,
            slope: (self.slope * o.value - self.value * o.slope) / (o.value * o.value),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            value: -self.value,
            slope: -self.slope,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Function {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Function {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Function::Sin,
            "cos" => Function::Cos,
            "tan" => Function::Tan,
            "exp" => Function::Exp,
            "ln" | "log" => Function::Ln,
            "sqrt" => Function::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: Dual) -> Dual {
        let v = x.value;
        match self {
            Function::Sin => x.chain(v.sin(), v.cos()),
            Function::Cos => x.chain(v.cos(), -v.sin()),
            Function::Tan => {
                let t = v.tan();
                x.chain(t, 1.0 + t * t)
            }
            Function::Exp => {
                let e = v.exp();
                x.chain(e, e)
            }
            Function::Ln => x.chain(v.ln(), 1.0 / v),
            Function::Sqrt => {
                let s = v.sqrt();
                x.chain(s, 0.5 / s)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Number(f64),
    Angle,
    Negate(Box<Node>),
    Binary(char, Box<Node>, Box<Node>),
    Call(Function, Box<Node>),
}

impl Node {
    fn eval(&self, theta: Dual) -> Dual {
        match self {
            Node::Number(v) => Dual::constant(*v),
            Node::Angle => theta,
            Node::Negate(a) => -a.eval(theta),
            Node::Call(f, a) => f.apply(a.eval(theta)),
            Node::Binary(op, a, b) => {
                let (x, y) = (a.eval(theta), b.eval(theta));
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    '/' => x / y,
                    _ => power(x, y, b),
                }
            }
        }
    }
}

fn power(base: Dual, exponent: Dual, exponent_node: &Node) -> Dual {
    if let Node::Number(n) = exponent_node {
        let value = base.value.powf(*n);
        let derivative = if *n == 0.0 {
            0.0
        } else {
            n * base.value.powf(n - 1.0)
        };
        return base.chain(value, derivative);
    }
    let value = base.value.powf(exponent.value);
    Dual {
        value,
        slope: value
            * (exponent.slope * base.value.ln() + exponent.value * base.slope / base.value),
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Number(v) => write!(f, "{v}"),
            Node::Angle => write!(f, "t"),
            Node::Negate(a) => write!(f, "(-{a})"),
            Node::Binary(op, a, b) => write!(f, "({a}{op}{b})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A parsed expression in the angle variable (`t`, `theta` or `θ`).
///
/// Grammar: `+ - * / ^`, parentheses, numbers, `pi`, and `sin cos tan exp ln sqrt`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleExpr {
    source: String,
    root: Node,
}

impl AngleExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = tokenize(source)?;
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.sum()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in `{source}`"
            )));
        }
        Ok(AngleExpr {
            source: source.trim().to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.root.eval(Dual::constant(theta)).value
    }

    /// `(r(θ), r'(θ))`.
    pub fn eval_with_derivative(&self, theta: f64) -> (f64, f64) {
        let d = self.root.eval(Dual::variable(theta));
        (d.value, d.slope)
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn tokenize(source: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
            tokens.push(Token::Number(value));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^".contains(c) {
            tokens.push(Token::Op(c));
            i += 1;
        } else if c == '(' {
            tokens.push(Token::Open);
            i += 1;
        } else if c == ')' {
            tokens.push(Token::Close);
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<Node> {
        let mut left = self.product()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let right = self.product()?;
            left = Node::Binary(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn product(&mut self) -> Result<Node> {
        let mut left = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let right = self.unary()?;
            left = Node::Binary(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Negate(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            // right associative, binds tighter than unary minus on the left
            let exponent = self.unary()?;
            return Ok(Node::Binary('^', Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.next() {
            Some(Token::Number(v)) => Ok(Node::Number(v)),
            Some(Token::Open) => {
                let inner = self.sum()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "t" | "theta" | "θ" => Ok(Node::Angle),
                "pi" | "π" => Ok(Node::Number(PI)),
                other => {
                    let func = Function::from_name(other)
                        .ok_or_else(|| Error::Parse(format!("unknown name `{other}`")))?;
                    match self.next() {
                        Some(Token::Open) => {}
                        _ => {
                            return Err(Error::Parse(format!(
                                "`{other}` needs a parenthesised argument"
                            )))
                        }
                    }
                    let arg = self.sum()?;
                    match self.next() {
                        Some(Token::Close) => Ok(Node::Call(func, Box::new(arg))),
                        _ => Err(Error::Parse("missing `)`".into())),
                    }
                }
            },
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
