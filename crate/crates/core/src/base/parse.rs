//! Parser for polynomial and rational literals such as `"t^3+t+1"`,
//! `"(x^3)/(x^2+x)"`, `"g*theta^2"` or `"(pi+T)*T^2"`.

use crate::error::{Error, Result};

use super::field::{Elem, FiniteField};
use super::poly::{Poly, PolyRing};
use super::rational::RationalFunction;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse().map_err(|_| Error::Parse(format!("integer too large: {text}")))?;
            out.push(Tok::Int(n));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in \"{s}\"")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
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

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if self.starts_factor() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(n)) if n <= u32::MAX as i64 => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), n as u32))
                }
                _ => Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{s}\"")));
    }
    Ok(e)
}

/// Variable names accepted for the polynomial variable.
pub const THETA_NAMES: &[&str] = &["θ", "theta", "x", "t"];
pub const PI_NAMES: &[&str] = &["π", "pi"];
pub const T_NAMES: &[&str] = &["T"];

/// Name of the generator of the constant field in literals.
pub const GENERATOR: &str = "g";

fn constant_for(field: &FiniteField, name: &str) -> Option<Elem> {
    (name == GENERATOR).then(|| field.x())
}

/// Evaluate as a polynomial in one variable.
pub fn eval_poly(ring: &PolyRing, e: &Expr, names: &[&str]) -> Result<Poly> {
    let f = ring.field();
    Ok(match e {
        Expr::Int(n) => Poly::constant(f.from_int(*n)),
        Expr::Var(v) if names.contains(&v.as_str()) => ring.x(),
        Expr::Var(v) => match constant_for(f, v) {
            Some(c) => Poly::constant(c),
            None => return Err(Error::Parse(format!("unknown symbol '{v}'"))),
        },
        Expr::Neg(a) => ring.neg(&eval_poly(ring, a, names)?),
        Expr::Add(a, b) => ring.add(&eval_poly(ring, a, names)?, &eval_poly(ring, b, names)?),
        Expr::Sub(a, b) => ring.sub(&eval_poly(ring, a, names)?, &eval_poly(ring, b, names)?),
        Expr::Mul(a, b) => ring.mul(&eval_poly(ring, a, names)?, &eval_poly(ring, b, names)?),
        Expr::Pow(a, k) => ring.pow(&eval_poly(ring, a, names)?, *k as u64),
        Expr::Div(a, b) => {
            let num = eval_poly(ring, a, names)?;
            let den = eval_poly(ring, b, names)?;
            if den.is_zero() {
                return Err(Error::Parse("division by zero".into()));
            }
            ring.div_exact(&num, &den)
                .ok_or_else(|| Error::Parse("non-exact division in polynomial literal".into()))?
        }
    })
}

pub fn eval_rational(ring: &PolyRing, e: &Expr, names: &[&str]) -> Result<RationalFunction> {
    Ok(match e {
        Expr::Div(a, b) => {
            let num = eval_rational(ring, a, names)?;
            let den = eval_rational(ring, b, names)?;
            if den.is_zero() {
                return Err(Error::Parse("division by zero".into()));
            }
            num.div(ring, &den)
        }
        Expr::Neg(a) => eval_rational(ring, a, names)?.neg(ring),
        Expr::Add(a, b) => eval_rational(ring, a, names)?.add(ring, &eval_rational(ring, b, names)?),
        Expr::Sub(a, b) => eval_rational(ring, a, names)?.sub(ring, &eval_rational(ring, b, names)?),
        Expr::Mul(a, b) => eval_rational(ring, a, names)?.mul(ring, &eval_rational(ring, b, names)?),
        Expr::Pow(a, k) => {
            let base = eval_rational(ring, a, names)?;
            (0..*k).fold(RationalFunction::one(), |acc, _| acc.mul(ring, &base))
        }
        Expr::Int(_) | Expr::Var(_) => RationalFunction::from_poly(eval_poly(ring, e, names)?),
    })
}

/// A polynomial in `π` and `T`, stored by `T`-degree.
pub type Bivariate = Vec<Poly>;

fn bi_trim(mut a: Bivariate) -> Bivariate {
    while a.last().map_or(false, |p| p.is_zero()) {
        a.pop();
    }
    a
}

pub fn bi_add(ring: &PolyRing, a: &Bivariate, b: &Bivariate) -> Bivariate {
    let n = a.len().max(b.len());
    let z = Poly::zero();
    bi_trim((0..n).map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

pub fn bi_neg(ring: &PolyRing, a: &Bivariate) -> Bivariate {
    a.iter().map(|p| ring.neg(p)).collect()
}

pub fn bi_mul(ring: &PolyRing, a: &Bivariate, b: &Bivariate) -> Bivariate {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    bi_trim(out)
}

/// Evaluate as an element of `F_q[π][T]`.
pub fn eval_bivariate(ring: &PolyRing, e: &Expr) -> Result<Bivariate> {
    let f = ring.field();
    Ok(match e {
        Expr::Int(n) => bi_trim(vec![Poly::constant(f.from_int(*n))]),
        Expr::Var(v) if PI_NAMES.contains(&v.as_str()) => vec![ring.x()],
        Expr::Var(v) if T_NAMES.contains(&v.as_str()) => vec![Poly::zero(), ring.one()],
        Expr::Var(v) => match constant_for(f, v) {
            Some(c) => bi_trim(vec![Poly::constant(c)]),
            None => return Err(Error::Parse(format!("unknown symbol '{v}'"))),
        },
        Expr::Neg(a) => bi_neg(ring, &eval_bivariate(ring, a)?),
        Expr::Add(a, b) => bi_add(ring, &eval_bivariate(ring, a)?, &eval_bivariate(ring, b)?),
        Expr::Sub(a, b) => {
            bi_add(ring, &eval_bivariate(ring, a)?, &bi_neg(ring, &eval_bivariate(ring, b)?))
        }
        Expr::Mul(a, b) => bi_mul(ring, &eval_bivariate(ring, a)?, &eval_bivariate(ring, b)?),
        Expr::Pow(a, k) => {
            let base = eval_bivariate(ring, a)?;
            (0..*k).fold(vec![ring.one()], |acc, _| bi_mul(ring, &acc, &base))
        }
        Expr::Div(..) => return Err(Error::Parse("division not supported in F_q[π][T]".into())),
    })
}

pub fn parse_poly(ring: &PolyRing, s: &str, names: &[&str]) -> Result<Poly> {
    eval_poly(ring, &parse_expr(s)?, names)
}

pub fn parse_rational(ring: &PolyRing, s: &str, names: &[&str]) -> Result<RationalFunction> {
    eval_rational(ring, &parse_expr(s)?, names)
}

pub fn parse_bivariate(ring: &PolyRing, s: &str) -> Result<Bivariate> {
    eval_bivariate(ring, &parse_expr(s)?)
}

/// Parse a polynomial over `F_p` given as a literal in `x` (or `θ`, `t`) into
/// low-first integer coefficients.
pub fn parse_prime_poly(p: u32, s: &str) -> Result<Vec<u32>> {
    let ring = PolyRing::new(FiniteField::prime(p)?);
    Ok(parse_poly(&ring, s, THETA_NAMES)?.0)
}

pub fn format_bivariate(ring: &PolyRing, a: &Bivariate) -> String {
    let mut terms = Vec::new();
    for (k, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = ring.format(c, "pi");
        let mono = match k {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{k}"),
        };
        terms.push(match (k, ring.is_one(c), c.0.iter().filter(|&&x| x != 0).count() > 1) {
            (0, _, _) => cs,
            (_, true, _) => mono,
            (_, false, true) => format!("({cs})*{mono}"),
            (_, false, false) => format!("{cs}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PolyRing {
        PolyRing::new(FiniteField::prime(2).unwrap())
    }

    #[test]
    fn polynomial_literals() {
        let r = f2();
        assert_eq!(parse_poly(&r, "t^3+t+1", THETA_NAMES).unwrap(), Poly(vec![1, 1, 0, 1]));
        assert_eq!(parse_poly(&r, "theta(theta+1)", THETA_NAMES).unwrap(), Poly(vec![0, 1, 1]));
        assert_eq!(parse_poly(&r, "θ^2 - θ", THETA_NAMES).unwrap(), Poly(vec![0, 1, 1]));
        assert_eq!(parse_poly(&r, "3x", THETA_NAMES).unwrap(), Poly(vec![0, 1]));
        assert!(parse_poly(&r, "y+1", THETA_NAMES).is_err());
        assert!(parse_poly(&r, "(x+1", THETA_NAMES).is_err());
    }

    #[test]
    fn rational_literal_is_reduced() {
        let r = f2();
        let x = parse_rational(&r, "(x^3)/(x^2+x)", THETA_NAMES).unwrap();
        assert_eq!(x.num(), &Poly(vec![0, 0, 1]));
        assert_eq!(x.den(), &Poly(vec![1, 1]));
    }

    #[test]
    fn generator_symbol() {
        let r = PolyRing::new(FiniteField::new(2, 2).unwrap());
        let a = parse_poly(&r, "g*theta + g^2", THETA_NAMES).unwrap();
        let g = r.field().x();
        assert_eq!(a, Poly(vec![r.field().mul(g, g), g]));
    }

    #[test]
    fn bivariate_literals() {
        let r = f2();
        let f = parse_bivariate(&r, "T^2*(pi^2+T)").unwrap();
        assert_eq!(f, vec![Poly::zero(), Poly::zero(), Poly(vec![0, 0, 1]), Poly(vec![1])]);
        assert_eq!(format_bivariate(&r, &f), "pi^2*T^2+T^3");
        let g = parse_bivariate(&r, "(π+T)").unwrap();
        assert_eq!(g, vec![Poly(vec![0, 1]), Poly(vec![1])]);
    }
}
