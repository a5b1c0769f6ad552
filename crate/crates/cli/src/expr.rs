//! Polynomial expressions over `z1, …, zn` with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use radial_jet::{parse_rational, ExactJet, Jet};

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("unexpected {found} at offset {pos} in {input:?}")]
    Unexpected {
        input: String,
        pos: usize,
        found: String,
    },
    #[error("bad number {0:?}")]
    Number(String),
    #[error("variable z{index} outside z1..z{n}")]
    Variable { index: usize, n: usize },
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(BigRational),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Upper bound on the total degree.
    pub fn degree(&self) -> u32 {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(_) => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree().max(b.degree()),
            Expr::Mul(a, b) => a.degree() + b.degree(),
            Expr::Neg(a) => a.degree(),
            Expr::Pow(a, k) => a.degree() * k,
        }
    }

    /// Largest variable index used, 0 for constants.
    pub fn max_variable(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(j) => *j,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.max_variable().max(b.max_variable())
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_variable(),
        }
    }

    /// The polynomial as an exact jet on `n` variables, truncated at `cap`.
    pub fn to_jet(&self, n: usize, cap: u32) -> Result<ExactJet, ExprError> {
        Ok(match self {
            Expr::Const(c) => Jet::constant(n, cap, c.clone()),
            Expr::Var(j) => {
                if *j == 0 || *j > n {
                    return Err(ExprError::Variable { index: *j, n });
                }
                Jet::variable(n, cap, j - 1)
            }
            Expr::Add(a, b) => &a.to_jet(n, cap)? + &b.to_jet(n, cap)?,
            Expr::Sub(a, b) => &a.to_jet(n, cap)? - &b.to_jet(n, cap)?,
            Expr::Mul(a, b) => &a.to_jet(n, cap)? * &b.to_jet(n, cap)?,
            Expr::Neg(a) => -a.to_jet(n, cap)?,
            Expr::Pow(a, k) => a.to_jet(n, cap)?.powu(*k),
        })
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub fn parse(input: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(ExprError::Empty);
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        let found = match self.input[self.pos..].chars().next() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        ExprError::Unexpected {
            input: self.input.to_string(),
            pos: self.pos,
            found,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.unexpected());
            }
            let k: u32 = digits
                .parse()
                .map_err(|_| ExprError::Number(digits.to_string()))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.input[start..self.pos]
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(self.unexpected());
                }
                let j = digits
                    .parse()
                    .map_err(|_| ExprError::Number(digits.to_string()))?;
                Ok(Expr::Var(j))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.unexpected()),
        }
    }

    /// `digits [ "." digits ] [ "/" digits ]` or `"." digits`.
    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        self.digits();
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            self.digits();
        }
        if self.bytes.get(self.pos) == Some(&b'/')
            && self.bytes.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
            self.digits();
        }
        let text = &self.input[start..self.pos];
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (text, None),
        };
        let mut q = parse_rational(num).map_err(|_| ExprError::Number(text.to_string()))?;
        if let Some(den) = den {
            let d: BigInt = den
                .parse()
                .map_err(|_| ExprError::Number(text.to_string()))?;
            if d.is_zero() {
                return Err(ExprError::Number(text.to_string()));
            }
            q /= BigRational::from_integer(d);
        }
        Ok(Expr::Const(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_jet::scalar::rational;
    use radial_jet::MultiIndex;

    /// Parses `input` into a jet with `n` variables (inferred when `None`) whose
    /// cap is at least the expression degree.
    fn parse_polynomial(
        input: &str,
        n: Option<usize>,
        min_cap: u32,
    ) -> Result<ExactJet, ExprError> {
        let e = parse(input)?;
        let n = n.unwrap_or_else(|| e.max_variable().max(1));
        let jet = e.to_jet(n, e.degree().max(min_cap))?;
        let cap = jet.degree().unwrap_or(0).max(min_cap);
        Ok(jet.truncate(cap).expect("cap at most the parse cap"))
    }

    fn coeff(j: &ExactJet, a: &[u32]) -> BigRational {
        j.coeff(&MultiIndex::new(a.to_vec()))
    }

    #[test]
    fn parses_sums_and_products() {
        let j = parse_polynomial("1 + z1", None, 0).unwrap();
        assert_eq!(j.n(), 1);
        assert_eq!(coeff(&j, &[0]), rational(1, 1));
        assert_eq!(coeff(&j, &[1]), rational(1, 1));

        let j = parse_polynomial("3/4*z1*z2^2 - 0.5*z3 + 2", None, 0).unwrap();
        assert_eq!((j.n(), j.cap()), (3, 3));
        assert_eq!(coeff(&j, &[1, 2, 0]), rational(3, 4));
        assert_eq!(coeff(&j, &[0, 0, 1]), rational(-1, 2));
        assert_eq!(coeff(&j, &[0, 0, 0]), rational(2, 1));
    }

    #[test]
    fn powers_and_parentheses() {
        let j = parse_polynomial("(1+z1)^3", Some(2), 0).unwrap();
        assert_eq!(j.n(), 2);
        assert_eq!(coeff(&j, &[2, 0]), rational(3, 1));
        let j = parse_polynomial("-(z1 - z2)^2", None, 0).unwrap();
        assert_eq!(coeff(&j, &[1, 1]), rational(2, 1));
        assert_eq!(coeff(&j, &[2, 0]), rational(-1, 1));
        let j = parse_polynomial("-z1^2", None, 0).unwrap();
        assert_eq!(coeff(&j, &[2]), rational(-1, 1));
    }

    #[test]
    fn cancellation_lowers_cap_but_respects_minimum() {
        let j = parse_polynomial("z1^3 - z1^3 + z1", None, 0).unwrap();
        assert_eq!(j.cap(), 1);
        let j = parse_polynomial("z1", None, 5).unwrap();
        assert_eq!(j.cap(), 5);
        let j = parse_polynomial("z1 - z1", None, 2).unwrap();
        assert!(j.is_zero());
        assert_eq!(j.cap(), 2);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(parse(""), Err(ExprError::Empty));
        assert!(matches!(parse("1 +"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("z"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("(z1"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("z1^"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("2 z1"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("1/0"), Err(ExprError::Number(_))));
        assert!(matches!(
            parse_polynomial("z0", None, 0),
            Err(ExprError::Variable { index: 0, .. })
        ));
        assert!(matches!(
            parse_polynomial("z3", Some(2), 0),
            Err(ExprError::Variable { index: 3, n: 2 })
        ));
    }
}
