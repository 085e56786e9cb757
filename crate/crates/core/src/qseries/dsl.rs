//! The one-line series language and eta-quotient specs.
//!
//! ```text
//! eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)
//! E4^3/eta^24 - 744
//! ```
//!
//! Atoms: `eta` (η(τ)), `eta(m)` (η(mτ)), `eta[a/p]` (shifted eta, see below),
//! `E4`, `q`, integers, `i`, `sqrtN`, `z{N}^{e}`. Operators: `+ - * /`, `^`
//! with an integer exponent, parentheses.
//!
//! `eta[a/p]` means q^{1/24} ∏ (1 − ζ_p^{an} qⁿ): the literal η(τ + a/p) with
//! its root-of-unity prefactor ζ_{24p}^a removed, so every eta monomial has
//! leading coefficient 1. `EtaQuotientSpec::literal_prefactor` reports what
//! the literal product would carry.

use super::eta::{e4_numeric, e4_to, eta_numeric, eta_scaled_to, eta_shifted_normalized};
use super::{QSeries, SeriesError};
use crate::exact::{sqrt_int, CycNum};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EtaKind {
    /// η(mτ)
    Scaled(u64),
    /// η(τ + a/p), phase-normalised
    Shifted { a: u64, p: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaFactor {
    pub kind: EtaKind,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaQuotientSpec {
    pub factors: Vec<EtaFactor>,
    pub additive_constant: CycNum,
    pub overall: Option<CycNum>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(CycNum),
    Q,
    Eta(EtaKind),
    E4,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

type Monomial = (CycNum, BTreeMap<EtaKind, i64>);

impl Expr {
    pub fn j() -> Expr {
        parse_expr("E4^3/eta^24 - 744").expect("fixed J text")
    }

    /// Exact expansion valid below `trunc`. Working precision is raised until the
    /// propagated truncation reaches the target.
    pub fn series(&self, trunc: i64) -> Result<QSeries, SeriesError> {
        let target = Rational64::from_integer(trunc);
        let mut work = target;
        for _ in 0..32 {
            let s = self.series_at(work)?;
            match s.trunc() {
                None => return Ok(s),
                Some(t) if t >= target => return Ok(s.truncate(target)),
                Some(t) => work += (target - t).ceil() + Rational64::one(),
            }
        }
        Err(SeriesError::Precision)
    }

    fn series_at(&self, w: Rational64) -> Result<QSeries, SeriesError> {
        Ok(match self {
            Expr::Const(c) => QSeries::constant(c.clone()),
            Expr::Q => QSeries::monomial(CycNum::one(), Rational64::one()),
            Expr::Eta(EtaKind::Scaled(m)) => eta_scaled_to(*m, w),
            Expr::Eta(EtaKind::Shifted { a, p }) => eta_shifted_normalized(*a, *p, w),
            Expr::E4 => e4_to(w),
            Expr::Add(a, b) => a.series_at(w)?.add(&b.series_at(w)?),
            Expr::Sub(a, b) => a.series_at(w)?.sub(&b.series_at(w)?),
            Expr::Mul(a, b) => a.series_at(w)?.mul(&b.series_at(w)?),
            Expr::Div(a, b) => a.series_at(w)?.div(&b.series_at(w)?)?,
            Expr::Neg(a) => a.series_at(w)?.neg(),
            Expr::Pow(a, e) => a.series_at(w)?.pow(*e)?,
        })
    }

    /// Numeric value at τ from the defining products.
    pub fn eval(&self, tau: Complex64) -> Result<Complex64, SeriesError> {
        if tau.im <= 0.0 {
            return Err(SeriesError::NotUpperHalfPlane(tau.im));
        }
        Ok(match self {
            Expr::Const(c) => c.to_complex(),
            Expr::Q => (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp(),
            Expr::Eta(EtaKind::Scaled(m)) => eta_numeric(tau * (*m as f64), 0, 1)?,
            Expr::Eta(EtaKind::Shifted { a, p }) => eta_numeric(tau, *a, *p)?,
            Expr::E4 => e4_numeric(tau)?,
            Expr::Add(a, b) => a.eval(tau)? + b.eval(tau)?,
            Expr::Sub(a, b) => a.eval(tau)? - b.eval(tau)?,
            Expr::Mul(a, b) => a.eval(tau)? * b.eval(tau)?,
            Expr::Div(a, b) => a.eval(tau)? / b.eval(tau)?,
            Expr::Neg(a) => -a.eval(tau)?,
            Expr::Pow(a, e) => a.eval(tau)?.powi(*e as i32),
        })
    }

    pub fn galois(&self, k: i64) -> Result<Expr, SeriesError> {
        // only constants carry irrationalities; shifts move by k as well
        let g = |e: &Expr| e.galois(k).map(Box::new);
        Ok(match self {
            Expr::Const(c) => Expr::Const(c.galois(k)?),
            Expr::Eta(EtaKind::Shifted { a, p }) => {
                let a2 = ((*a as i64 * k).rem_euclid(*p as i64)) as u64;
                Expr::Eta(EtaKind::Shifted { a: a2, p: *p })
            }
            Expr::Q | Expr::Eta(_) | Expr::E4 => self.clone(),
            Expr::Add(a, b) => Expr::Add(g(a)?, g(b)?),
            Expr::Sub(a, b) => Expr::Sub(g(a)?, g(b)?),
            Expr::Mul(a, b) => Expr::Mul(g(a)?, g(b)?),
            Expr::Div(a, b) => Expr::Div(g(a)?, g(b)?),
            Expr::Neg(a) => Expr::Neg(g(a)?),
            Expr::Pow(a, e) => Expr::Pow(g(a)?, *e),
        })
    }

    /// Expand into a linear combination of eta monomials, if the expression is one.
    fn monomials(&self) -> Option<Vec<Monomial>> {
        Some(match self {
            Expr::Const(c) => vec![(c.clone(), BTreeMap::new())],
            Expr::Eta(k) => vec![(CycNum::one(), BTreeMap::from([(*k, 1)]))],
            Expr::Q | Expr::E4 => return None,
            Expr::Add(a, b) => [a.monomials()?, b.monomials()?].concat(),
            Expr::Sub(a, b) => {
                let mut v = a.monomials()?;
                v.extend(b.monomials()?.into_iter().map(|(c, m)| (-c, m)));
                v
            }
            Expr::Neg(a) => a.monomials()?.into_iter().map(|(c, m)| (-c, m)).collect(),
            Expr::Mul(a, b) => mono_mul(&a.monomials()?, &b.monomials()?),
            Expr::Div(a, b) => {
                let d = b.monomials()?;
                if d.len() != 1 || d[0].0.is_zero() {
                    return None;
                }
                let inv = (
                    d[0].0.inv().ok()?,
                    d[0].1.iter().map(|(k, e)| (*k, -e)).collect(),
                );
                mono_mul(&a.monomials()?, &[inv])
            }
            Expr::Pow(a, e) => {
                let base = a.monomials()?;
                if base.len() == 1 {
                    let (c, m) = &base[0];
                    vec![(
                        c.pow(*e).ok()?,
                        m.iter().map(|(k, x)| (*k, x * e)).collect(),
                    )]
                } else if (0..=8).contains(e) {
                    let mut acc = vec![(CycNum::one(), BTreeMap::new())];
                    for _ in 0..*e {
                        acc = mono_mul(&acc, &base);
                    }
                    acc
                } else {
                    return None;
                }
            }
        })
    }

    /// The expression as a single eta quotient plus constant, when it has that shape.
    pub fn to_eta_quotient(&self) -> Option<EtaQuotientSpec> {
        let mut constant = CycNum::zero();
        let mut quotient: Option<Monomial> = None;
        for (c, m) in collect_like(self.monomials()?) {
            if m.is_empty() {
                constant = &constant + &c;
            } else if quotient.is_none() {
                quotient = Some((c, m));
            } else {
                return None;
            }
        }
        let (c, m) = quotient?;
        Some(EtaQuotientSpec {
            factors: m
                .into_iter()
                .map(|(kind, exponent)| EtaFactor { kind, exponent })
                .collect(),
            additive_constant: constant,
            overall: if c.is_one() { None } else { Some(c) },
        })
    }
}

fn mono_mul(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::new();
    for (ca, ma) in a {
        for (cb, mb) in b {
            let mut m = ma.clone();
            for (k, e) in mb {
                *m.entry(*k).or_insert(0) += e;
            }
            m.retain(|_, e| *e != 0);
            out.push((ca * cb, m));
        }
    }
    out
}

fn collect_like(v: Vec<Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for (c, m) in v {
        if let Some(slot) = out.iter_mut().find(|(_, mm)| *mm == m) {
            slot.0 = &slot.0 + &c;
        } else {
            out.push((c, m));
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}

impl EtaQuotientSpec {
    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.factors.is_empty() {
            return Err(SeriesError::Invalid(
                "eta quotient needs at least one factor".into(),
            ));
        }
        for f in &self.factors {
            if f.exponent == 0 {
                return Err(SeriesError::Invalid("eta factor with exponent 0".into()));
            }
            match f.kind {
                EtaKind::Scaled(0) => return Err(SeriesError::Invalid("eta(0)".into())),
                EtaKind::Shifted { a, p } if p == 0 || a >= p => {
                    return Err(SeriesError::Invalid(format!(
                        "eta[{a}/{p}] needs 0 <= a < p"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_expr(&self) -> Expr {
        let mut num: Option<Expr> = self.overall.clone().map(Expr::Const);
        let mut den: Option<Expr> = None;
        let push = |slot: &mut Option<Expr>, e: Expr| {
            *slot = Some(match slot.take() {
                None => e,
                Some(x) => Expr::Mul(Box::new(x), Box::new(e)),
            });
        };
        for f in &self.factors {
            let base = Expr::Eta(f.kind);
            let e = f.exponent.abs();
            let t = if e == 1 {
                base
            } else {
                Expr::Pow(Box::new(base), e)
            };
            if f.exponent > 0 {
                push(&mut num, t);
            } else {
                push(&mut den, t);
            }
        }
        let num = num.unwrap_or(Expr::Const(CycNum::one()));
        let q = match den {
            None => num,
            Some(d) => Expr::Div(Box::new(num), Box::new(d)),
        };
        if self.additive_constant.is_zero() {
            q
        } else {
            Expr::Add(
                Box::new(q),
                Box::new(Expr::Const(self.additive_constant.clone())),
            )
        }
    }

    /// The phase a literal product of η(τ + a/p) factors would carry in front: ∏ ζ_{24p}^{a·e}.
    pub fn literal_prefactor(&self) -> CycNum {
        let mut acc = CycNum::one();
        for f in &self.factors {
            if let EtaKind::Shifted { a, p } = f.kind {
                acc = &acc * &CycNum::root_of_unity(24 * p, a as i64 * f.exponent);
            }
        }
        acc
    }

    pub fn series(&self, trunc: i64) -> Result<QSeries, SeriesError> {
        self.validate()?;
        self.to_expr().series(trunc)
    }

    pub fn eval(&self, tau: Complex64) -> Result<Complex64, SeriesError> {
        self.validate()?;
        self.to_expr().eval(tau)
    }

    pub fn parse(text: &str) -> Result<EtaQuotientSpec, SeriesError> {
        let e = parse_expr(text)?;
        let s = e.to_eta_quotient().ok_or_else(|| {
            SeriesError::Invalid("not a single eta quotient plus constant".into())
        })?;
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for EtaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaKind::Scaled(1) => write!(f, "eta"),
            EtaKind::Scaled(m) => write!(f, "eta({m})"),
            EtaKind::Shifted { a, p } => write!(f, "eta[{a}/{p}]"),
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Const(c)
            if !c.is_rational()
                || c.as_rational()
                    .map_or(false, |r| !r.is_integer() || r.is_negative()) =>
        {
            1
        }
        _ => 5,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if prec(e) < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Const(c) => write!(f, "{}", c.pretty()),
            Expr::Q => write!(f, "q"),
            Expr::Eta(k) => write!(f, "{k}"),
            Expr::E4 => write!(f, "E4"),
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " + ")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " - ")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
            Expr::Div(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "/")?;
                wrap(f, b, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            Expr::Pow(a, e) => {
                wrap(f, a, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, SeriesError> {
    let mut p = P {
        s: text.chars().collect(),
        i: 0,
    };
    p.ws();
    if p.i == p.s.len() {
        return Err(perr(0, "empty expression"));
    }
    let e = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(perr(p.i, &format!("unexpected '{}'", p.s[p.i])));
    }
    Ok(e)
}

fn perr(pos: usize, msg: &str) -> SeriesError {
    SeriesError::Parse {
        pos,
        msg: msg.to_string(),
    }
}

struct P {
    s: Vec<char>,
    i: usize,
}

impl P {
    fn ws(&mut self) {
        while self.s.get(self.i).map_or(false, |c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
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

    fn expect(&mut self, c: char) -> Result<(), SeriesError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.i, &format!("expected '{c}'")))
        }
    }

    fn word(&mut self, w: &str) -> bool {
        self.ws();
        let n = w.chars().count();
        if self.i + n <= self.s.len() && self.s[self.i..self.i + n].iter().copied().eq(w.chars()) {
            // keep `eta` from matching a longer identifier
            let next = self.s.get(self.i + n).copied();
            if w.chars().all(|c| c.is_ascii_alphabetic())
                && next.map_or(false, |c| c.is_ascii_alphabetic())
            {
                return false;
            }
            self.i += n;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SeriesError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SeriesError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat('/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SeriesError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SeriesError> {
        let base = self.atom()?;
        if self.eat('^') {
            let braced = self.eat('{');
            let neg = self.eat('-');
            let at = self.i;
            let n = self.uint()?;
            if braced {
                self.expect('}')?;
            }
            let n = i64::try_from(n).map_err(|_| perr(at, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64, SeriesError> {
        self.ws();
        let start = self.i;
        while self.s.get(self.i).map_or(false, |c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(perr(start, "expected a number"));
        }
        let t: String = self.s[start..self.i].iter().collect();
        t.parse().map_err(|_| perr(start, "number too large"))
    }

    fn atom(&mut self) -> Result<Expr, SeriesError> {
        let at = {
            self.ws();
            self.i
        };
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if self.word("eta") {
            if self.s.get(self.i) == Some(&'[') {
                self.i += 1;
                let a = self.uint()?;
                self.expect('/')?;
                let p = self.uint()?;
                self.expect(']')?;
                if p == 0 || a >= p {
                    return Err(perr(at, "eta[a/p] needs 0 <= a < p"));
                }
                return Ok(Expr::Eta(EtaKind::Shifted { a, p }));
            }
            if self.s.get(self.i) == Some(&'(') {
                self.i += 1;
                let m = self.uint()?;
                self.expect(')')?;
                if m == 0 {
                    return Err(perr(at, "eta(0)"));
                }
                return Ok(Expr::Eta(EtaKind::Scaled(m)));
            }
            return Ok(Expr::Eta(EtaKind::Scaled(1)));
        }
        if self.word("E4") {
            return Ok(Expr::E4);
        }
        if self.word("sqrt") {
            let close = match self.s.get(self.i) {
                Some('{') => Some('}'),
                Some('(') => Some(')'),
                _ => None,
            };
            if close.is_some() {
                self.i += 1;
            }
            let n = self.uint()?;
            if let Some(c) = close {
                self.expect(c)?;
            }
            return Ok(Expr::Const(
                sqrt_int(n).map_err(|e| perr(at, &e.to_string()))?,
            ));
        }
        if self.word("z") {
            let braced = self.eat('{');
            let n = self.uint()?;
            if braced {
                self.expect('}')?;
            }
            let mut e = 1i64;
            if self.s.get(self.i) == Some(&'^') {
                self.i += 1;
                let braced = self.eat('{');
                let neg = self.eat('-');
                e = self.uint()? as i64;
                if neg {
                    e = -e;
                }
                if braced {
                    self.expect('}')?;
                }
            }
            if n == 0 {
                return Err(perr(at, "z{0}"));
            }
            return Ok(Expr::Const(CycNum::root_of_unity(n, e)));
        }
        if self.word("i") {
            return Ok(Expr::Const(CycNum::root_of_unity(4, 1)));
        }
        if self.word("q") {
            return Ok(Expr::Q);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let n = i64::try_from(n).map_err(|_| perr(at, "number too large"))?;
                Ok(Expr::Const(CycNum::from_int(n)))
            }
            Some(c) => Err(perr(at, &format!("unexpected '{c}'"))),
            None => Err(perr(at, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_cyc;

    #[test]
    fn parse_and_classify() {
        let s = EtaQuotientSpec::parse(
            "eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)",
        )
        .unwrap();
        assert_eq!(s.factors.len(), 6);
        assert_eq!(s.additive_constant, parse_cyc("1 - sqrt5").unwrap());
        assert!(s.overall.is_none());
        // shift exponents 0+2+3-1-4 = 0, so the literal prefactor is 1
        assert!(s.literal_prefactor().is_one());
        let t = EtaQuotientSpec::parse("eta[0/7]*eta[3/7]*eta[5/7]*eta[6/7]/eta(7)^4").unwrap();
        assert_eq!(t.literal_prefactor(), CycNum::root_of_unity(168, 14));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_expr("eta[5/5]"),
            Err(SeriesError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_expr("eta(2"),
            Err(SeriesError::Parse { pos: 5, .. })
        ));
        assert!(matches!(
            parse_expr("1 + foo"),
            Err(SeriesError::Parse { pos: 4, .. })
        ));
        assert!(parse_expr("").is_err());
        assert!(EtaQuotientSpec::parse("E4").is_err());
        assert!(EtaQuotientSpec::parse("eta + eta(2)").is_err());
    }

    #[test]
    fn display_round_trips() {
        for t in [
            "E4^3/eta^24 - 744",
            "eta[0/5]*eta[2/5]*eta[3/5]/(eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)",
            "-eta(2)^-3*(q + 1/2)",
        ] {
            let e = parse_expr(t).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{t}");
        }
    }

    #[test]
    fn constant_expression() {
        let s = parse_expr("1").unwrap().series(6).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.coeff_int(0), CycNum::one());
        assert_eq!(s.render_pretty(), "1");
    }
}
