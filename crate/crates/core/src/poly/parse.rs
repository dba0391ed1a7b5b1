//! Text form of polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ('^' nat)? | '(' poly ')' ('^' nat)?
//! coeff  := int ('/' nat)?
//! ```
//!
//! Whitespace is ignored. The printer writes terms in descending deglex
//! order, so `print_poly(parse_poly(s))` is a canonical form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::mpoly::MPoly;
use super::rational::{self, Rational};
use super::PolyError;

pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MPoly, PolyError> {
    let owned: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    parse_poly_owned(text, &owned)
}

pub fn parse_poly_owned(text: &str, vars: &[String]) -> Result<MPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let out = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected character"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn zero(&self) -> MPoly {
        MPoly::zero_owned(self.vars.to_vec())
    }

    fn poly(&mut self) -> Result<MPoly, PolyError> {
        let mut sign_negative = false;
        match self.peek() {
            Some(b'-') => {
                sign_negative = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if sign_negative { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                match self.exponent()? {
                    Some(e) => Ok(inner.pow(e)),
                    None => Ok(inner),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let c = self.coeff()?;
                Ok(self.zero().constant_like(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let index = self
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                let v = self.zero().var_like(index);
                match self.exponent()? {
                    Some(e) => Ok(v.pow(e)),
                    None => Ok(v),
                }
            }
            Some(_) => Err(self.syntax("expected a number, variable or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<Option<u32>, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let n = self.nat()?;
        u32::try_from(&n)
            .map(Some)
            .map_err(|_| self.syntax("exponent too large"))
    }

    fn nat(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn coeff(&mut self) -> Result<Rational, PolyError> {
        let num = self.nat()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.nat()?;
            if den.is_zero() {
                return Err(PolyError::ZeroDenominator { pos: at });
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }
}

fn monomial_text(vars: &[String], exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

pub fn print_poly(p: &MPoly) -> String {
    let terms = p.sorted_terms();
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = monomial_text(p.vars(), m.exponents());
        if mono.is_empty() {
            out.push_str(&rational::to_string(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&rational::to_string(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
