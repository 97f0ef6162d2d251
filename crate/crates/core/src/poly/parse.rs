//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (['*'] power)*
//! power   := primary ['^' int]
//! primary := number ['i'] | 'i' | 'x' | 'y' | '(' re ',' im ')' | '(' expr ')'
//!          | 'e' '^' '{' 'i' [number ['/' number]] ['*'] 'pi' ['/' number] '}'
//! int     := ['-'] digits | '(' ['-'] digits ')'
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Exponent, LaurentPolynomial, PolyError};

type Terms = BTreeMap<Exponent, Complex64>;

fn constant(c: Complex64) -> Terms {
    Terms::from([(Exponent::new(0, 0), c)])
}

fn add(mut a: Terms, b: Terms, sign: f64) -> Terms {
    for (e, c) in b {
        *a.entry(e).or_default() += c * sign;
    }
    a
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(Exponent::new(ea.j + eb.j, ea.k + eb.k)).or_default() += ca * cb;
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), PolyError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn eat_pi(&mut self) -> bool {
        self.eat_word("pi") || self.eat_word("π")
    }

    fn number(&mut self) -> Result<f64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        // optional exponent part, only when followed by a digit or sign+digit
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected a number")
            }
        }
    }

    fn signed_number(&mut self) -> Result<f64, PolyError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<i64, PolyError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer exponent");
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PolyError::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })?;
        if paren {
            self.expect(b')')?;
        }
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Terms, PolyError> {
        let mut sign = 1.0;
        if self.eat(b'-') {
            sign = -1.0;
        } else {
            self.eat(b'+');
        }
        let mut acc = add(Terms::new(), self.term()?, sign);
        loop {
            if self.eat(b'+') {
                acc = add(acc, self.term()?, 1.0);
            } else if self.eat(b'-') {
                acc = add(acc, self.term()?, -1.0);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&mut self) -> bool {
        matches!(
            self.peek(),
            Some(b'0'..=b'9' | b'.' | b'(' | b'x' | b'y' | b'i' | b'e')
        )
    }

    fn term(&mut self) -> Result<Terms, PolyError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') || self.starts_primary() {
                let rhs = self.power()?;
                acc = mul(&acc, &rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Terms, PolyError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let n = self.integer()?;
        if n >= 0 {
            let mut acc = constant(Complex64::new(1.0, 0.0));
            for _ in 0..n {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        // negative powers only for monomials
        let nonzero: Vec<_> = base.iter().filter(|(_, c)| c.norm() != 0.0).collect();
        if nonzero.len() != 1 {
            return Err(PolyError::Syntax {
                pos: at,
                msg: "negative powers are only allowed on monomials".into(),
            });
        }
        let (e, c) = nonzero[0];
        let m = -n;
        Ok(Terms::from([(
            Exponent::new(-e.j * m, -e.k * m),
            c.powi(-(m as i32)),
        )]))
    }

    fn phase(&mut self) -> Result<Complex64, PolyError> {
        // after 'e' '^'
        self.expect(b'{')?;
        if !self.eat(b'i') {
            return self.err("expected 'i' in exponential phase");
        }
        self.eat(b'*');
        let mut factor = 1.0;
        if matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'-')) {
            factor = self.signed_number()?;
            if self.eat(b'/') {
                factor /= self.number()?;
            }
            self.eat(b'*');
        }
        if !self.eat_pi() {
            return self.err("expected 'pi' in exponential phase");
        }
        if self.eat(b'/') {
            factor /= self.number()?;
        }
        self.expect(b'}')?;
        Ok(Complex64::from_polar(1.0, factor * PI))
    }

    fn primary(&mut self) -> Result<Terms, PolyError> {
        match self.peek() {
            Some(b'0'..=b'9' | b'.') => {
                let v = self.number()?;
                // decimal immediately followed by i is an imaginary literal
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(constant(Complex64::new(0.0, v)))
                } else {
                    Ok(constant(Complex64::new(v, 0.0)))
                }
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(constant(Complex64::new(0.0, 1.0)))
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Terms::from([(Exponent::new(1, 0), Complex64::new(1.0, 0.0))]))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Terms::from([(Exponent::new(0, 1), Complex64::new(1.0, 0.0))]))
            }
            Some(b'e') => {
                self.pos += 1;
                self.expect(b'^')?;
                Ok(constant(self.phase()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let save = self.pos;
                if let Ok(re) = self.signed_number() {
                    if self.eat(b',') {
                        let im = self.signed_number()?;
                        self.expect(b')')?;
                        return Ok(constant(Complex64::new(re, im)));
                    }
                }
                self.pos = save;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial expression such as `"(1+x)*(1+y) - e^{i 0.25 pi}*x*y^-1"`.
pub fn parse_polynomial(text: &str) -> Result<LaurentPolynomial, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let terms = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    LaurentPolynomial::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn terms(p: &LaurentPolynomial) -> Vec<((i64, i64), Complex64)> {
        p.terms().map(|(e, c)| ((e.j, e.k), c)).collect()
    }

    #[test]
    fn reads_line() {
        let p = parse_polynomial("1+x+y").unwrap();
        assert_eq!(
            terms(&p),
            vec![((0, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0)), ((1, 0), c(1.0, 0.0))]
        );
    }

    #[test]
    fn cancellation_is_empty() {
        assert_eq!(parse_polynomial("x*y - x*y"), Err(PolyError::EmptyPolynomial));
    }

    #[test]
    fn expands_products() {
        let p = parse_polynomial("(1+x)*(1+y)").unwrap();
        assert_eq!(p, parse_polynomial("1+x+y+x*y").unwrap());
        let q = parse_polynomial("(1+x)^2").unwrap();
        assert_eq!(q.coeff(Exponent::new(1, 0)), c(2.0, 0.0));
    }

    #[test]
    fn coefficient_forms() {
        let p = parse_polynomial("2.5 + 3i*x + i*y + (1,-2)*x*y + e^{i 0.25 pi}*x^2").unwrap();
        assert_eq!(p.coeff(Exponent::new(0, 0)), c(2.5, 0.0));
        assert_eq!(p.coeff(Exponent::new(1, 0)), c(0.0, 3.0));
        assert_eq!(p.coeff(Exponent::new(0, 1)), c(0.0, 1.0));
        assert_eq!(p.coeff(Exponent::new(1, 1)), c(1.0, -2.0));
        let w = p.coeff(Exponent::new(2, 0));
        assert!((w - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);

        let q = parse_polynomial("e^{i pi/4}*x*y").unwrap();
        assert!((q.coeff(Exponent::new(1, 1)) - w).norm() < 1e-15);
        let r = parse_polynomial("e^{i*1/4*pi}").unwrap();
        assert!((r.coeff(Exponent::new(0, 0)) - w).norm() < 1e-15);
    }

    #[test]
    fn negative_exponents() {
        let p = parse_polynomial("x^-1 + y^(-2) + 2*x^-1*y").unwrap();
        assert_eq!(p.coeff(Exponent::new(-1, 0)), c(1.0, 0.0));
        assert_eq!(p.coeff(Exponent::new(0, -2)), c(1.0, 0.0));
        assert_eq!(p.coeff(Exponent::new(-1, 1)), c(2.0, 0.0));
        assert!(matches!(
            parse_polynomial("(1+x)^-1"),
            Err(PolyError::Syntax { .. })
        ));
    }

    #[test]
    fn whitespace_and_signs() {
        let p = parse_polynomial("  - 1 -x  + y ").unwrap();
        assert_eq!(p.coeff(Exponent::new(0, 0)), c(-1.0, 0.0));
        assert_eq!(p.coeff(Exponent::new(1, 0)), c(-1.0, 0.0));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_polynomial("1 + x ^ ") {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial("1 + z"), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_polynomial(""), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("(1+x"), Err(PolyError::Syntax { .. })));
    }
}
