//! Text to `CycNum`.
//!
//! Accepts the raw table literal (`3*z{5}^{1}-z{5}^{4}`), the pretty form
//! (`3/2 - 5/2*sqrt5`, `-1/2 + i*sqrt7/2`) and GAP's `E(n)`. Whitespace is ignored.

use super::{sqrt_int, CycNum, ExactError};
use num_bigint::BigInt;
use num_traits::Zero;

pub fn parse_cyc(text: &str) -> Result<CycNum, ExactError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser { s: chars, i: 0 };
    let v = p.expr()?;
    if p.i != p.s.len() {
        return Err(err(p.i, &format!("unexpected '{}'", p.s[p.i])));
    }
    Ok(v)
}

fn err(pos: usize, msg: &str) -> ExactError {
    ExactError::Parse {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser {
    s: Vec<char>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.i, &format!("expected '{c}'")))
        }
    }

    fn starts_with(&self, w: &str) -> bool {
        let n = w.chars().count();
        self.i + n <= self.s.len() && self.s[self.i..self.i + n].iter().copied().eq(w.chars())
    }

    fn expr(&mut self) -> Result<CycNum, ExactError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CycNum, ExactError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.i;
                let d = self.unary()?;
                acc = (&acc / &d).map_err(|_| err(at, "division by zero"))?;
            } else if matches!(self.peek(), Some('z' | 'i' | 's' | 'E' | '(')) {
                // juxtaposition, e.g. `3i` or `i sqrt7`
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<CycNum, ExactError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<CycNum, ExactError> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.i;
            let e = self.braced_int()?;
            return base.pow(e).map_err(|_| err(at, "zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<CycNum, ExactError> {
        let at = self.i;
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(CycNum::from_rat(n.into()))
            }
            Some('z') => {
                self.i += 1;
                let n = self.braced_pos(at)?;
                let e = if self.eat('^') { self.braced_int()? } else { 1 };
                Ok(CycNum::root_of_unity(n, e))
            }
            Some('E') => {
                self.i += 1;
                self.expect('(')?;
                let n = self.small_uint(at)?;
                self.expect(')')?;
                if n == 0 {
                    return Err(err(at, "E(0)"));
                }
                Ok(CycNum::root_of_unity(n, 1))
            }
            Some('s') if self.starts_with("sqrt") => {
                self.i += 4;
                let n = match self.peek() {
                    Some('{') => {
                        self.i += 1;
                        let n = self.small_uint(at)?;
                        self.expect('}')?;
                        n
                    }
                    Some('(') => {
                        self.i += 1;
                        let n = self.small_uint(at)?;
                        self.expect(')')?;
                        n
                    }
                    _ => self.small_uint(at)?,
                };
                sqrt_int(n)
            }
            Some('i') => {
                self.i += 1;
                Ok(CycNum::root_of_unity(4, 1))
            }
            Some(c) => Err(err(at, &format!("unexpected '{c}'"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ExactError> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(err(start, "expected digits"));
        }
        let s: String = self.s[start..self.i].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn small_uint(&mut self, at: usize) -> Result<u64, ExactError> {
        let n = self.uint()?;
        u64::try_from(n)
            .ok()
            .filter(|&n| n < 1 << 20)
            .ok_or_else(|| err(at, "integer too large"))
    }

    fn braced_pos(&mut self, at: usize) -> Result<u64, ExactError> {
        let braced = self.eat('{');
        let n = self.small_uint(at)?;
        if braced {
            self.expect('}')?;
        }
        if n == 0 {
            return Err(err(at, "root of unity of order 0"));
        }
        Ok(n)
    }

    fn braced_int(&mut self) -> Result<i64, ExactError> {
        let braced = self.eat('{');
        let neg = self.eat('-');
        let at = self.i;
        let n = self.uint()?;
        if braced {
            self.expect('}')?;
        }
        let n = i64::try_from(n).map_err(|_| err(at, "exponent too large"))?;
        Ok(if neg { -n } else { n })
    }
}

/// Parse a bare integer if the text is one; a convenience for table columns.
pub fn parse_int(text: &str) -> Option<i64> {
    let v = parse_cyc(text).ok()?;
    let n = v.as_integer()?;
    if n.is_zero() {
        return Some(0);
    }
    i64::try_from(n).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{embed_sqrt, rat};

    #[test]
    fn raw_literals() {
        let a = parse_cyc("z{5}^{1}-3*z{5}^{2}-3*z{5}^{3}+2*z{5}^{4}").unwrap();
        let b = &(&CycNum::root_of_unity(5, 1) + &CycNum::root_of_unity(5, 4).scale(&rat(2, 1)))
            - &(&CycNum::root_of_unity(5, 2) + &CycNum::root_of_unity(5, 3)).scale(&rat(3, 1));
        assert_eq!(a, b);
        assert_eq!(parse_cyc("-7").unwrap(), CycNum::from_int(-7));
        assert_eq!(parse_cyc("E(3)").unwrap(), CycNum::root_of_unity(3, 1));
    }

    #[test]
    fn pretty_forms() {
        let s5 = embed_sqrt(5).unwrap();
        let want = &CycNum::from_frac(3, 2)
            - &s5.scale(&num_rational::BigRational::new(5.into(), 2.into()));
        assert_eq!(parse_cyc("3/2 - 5/2*sqrt5").unwrap(), want);
        assert_eq!(parse_cyc("3/2-5*sqrt{5}/2").unwrap(), want);
        let x = parse_cyc("-1/2 + i*sqrt7/2").unwrap();
        assert_eq!(x, parse_cyc("(-1 + i sqrt(7))/2").unwrap());
        let c = x.to_complex();
        assert!((c.re + 0.5).abs() < 1e-12 && (c.im - 7f64.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(parse_cyc("2^-1").unwrap(), CycNum::from_frac(1, 2));
        assert_eq!(parse_cyc("i^{2}").unwrap(), CycNum::from_int(-1));
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!(
            parse_cyc("1+"),
            Err(ExactError::Parse { pos: 2, .. })
        ));
        assert!(matches!(parse_cyc("z{0}"), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_cyc("1/0"), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_cyc("(1"), Err(ExactError::Parse { .. })));
        assert!(parse_cyc("").is_err());
        assert_eq!(parse_int("  12 "), Some(12));
        assert_eq!(parse_int("sqrt5"), None);
    }
}
