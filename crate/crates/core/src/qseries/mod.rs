//! Truncated Laurent series in fractional powers of q with cyclotomic coefficients.
//!
//! A series stores exponents as integers over a common denominator D, so the
//! key n stands for q^{n/D}. Truncated series carry a bound t: every exponent
//! below t is exact and nothing at or above t is known. Exact series (finite
//! sums such as constants) have no bound.

mod dsl;
mod eta;

pub use dsl::{parse_expr, EtaFactor, EtaKind, EtaQuotientSpec, Expr};
pub use eta::{
    build_eta_quotient, e4_numeric, eisenstein_e4, eta_numeric, eta_product_terms, eta_scaled,
    eta_series, eta_shifted, eta_shifted_normalized, j_series, DEFAULT_TRUNC,
};

use crate::exact::{CycNum, ExactError};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("cannot invert a series with no known terms")]
    NoTerms,
    #[error("inverse of a non-monomial exact series needs a truncation")]
    ExactInverse,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("Im(tau) must be positive, got {0}")]
    NotUpperHalfPlane(f64),
    #[error("working precision did not reach the requested truncation")]
    Precision,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    den: i64,
    terms: BTreeMap<i64, CycNum>,
    trunc: Option<Rational64>,
}

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

impl QSeries {
    pub fn zero() -> Self {
        QSeries {
            den: 1,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn constant(c: CycNum) -> Self {
        Self::monomial(c, Rational64::zero())
    }

    pub fn monomial(c: CycNum, exp: Rational64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(*exp.numer(), c);
        }
        Self::from_parts(*exp.denom(), terms, None)
    }

    /// O(q^t): nothing known, valid below t.
    pub fn big_o(t: Rational64) -> Self {
        QSeries {
            den: 1,
            terms: BTreeMap::new(),
            trunc: Some(t),
        }
    }

    /// Build from keys over denominator `den`; drops zeros and anything at or past `trunc`.
    pub fn from_parts(den: i64, terms: BTreeMap<i64, CycNum>, trunc: Option<Rational64>) -> Self {
        assert!(den > 0);
        let mut terms = terms;
        terms.retain(|_, c| !c.is_zero());
        if let Some(t) = trunc {
            terms.retain(|&n, _| ratio(n, den) < t);
        }
        let mut g = den;
        for &n in terms.keys() {
            g = g.gcd(&n);
            if g == 1 {
                break;
            }
        }
        if g > 1 {
            terms = terms.into_iter().map(|(n, c)| (n / g, c)).collect();
        }
        QSeries {
            den: den / g,
            terms,
            trunc,
        }
    }

    pub fn exp_den(&self) -> i64 {
        self.den
    }

    pub fn trunc(&self) -> Option<Rational64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading exponent, or the truncation bound when no term is known.
    pub fn valuation(&self) -> Option<Rational64> {
        match self.terms.keys().next() {
            Some(&n) => Some(ratio(n, self.den)),
            None => self.trunc,
        }
    }

    pub fn coeff(&self, exp: Rational64) -> CycNum {
        if (exp * self.den).is_integer() {
            let n = (exp * self.den).to_integer();
            if let Some(c) = self.terms.get(&n) {
                return c.clone();
            }
        }
        CycNum::zero()
    }

    pub fn coeff_int(&self, n: i64) -> CycNum {
        self.coeff(Rational64::from_integer(n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &CycNum)> + '_ {
        self.terms
            .iter()
            .map(move |(&n, c)| (ratio(n, self.den), c))
    }

    pub fn truncate(&self, t: Rational64) -> Self {
        let nt = match self.trunc {
            Some(s) if s < t => s,
            _ => t,
        };
        Self::from_parts(self.den, self.terms.clone(), Some(nt))
    }

    /// Terms rekeyed onto denominator `d` (a multiple of the own one).
    fn keyed(&self, d: i64) -> impl Iterator<Item = (i64, &CycNum)> + '_ {
        let f = d / self.den;
        self.terms.iter().map(move |(&n, c)| (n * f, c))
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.combine(o, true)
    }

    fn combine(&self, o: &QSeries, negate: bool) -> QSeries {
        let d = self.den.lcm(&o.den);
        let mut terms: BTreeMap<i64, CycNum> = self.keyed(d).map(|(n, c)| (n, c.clone())).collect();
        for (n, c) in o.keyed(d) {
            let e = terms.entry(n).or_default();
            *e = if negate { &*e - c } else { &*e + c };
        }
        let trunc = min_trunc(self.trunc, o.trunc);
        Self::from_parts(d, terms, trunc)
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&n, c)| (n, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &CycNum) -> QSeries {
        if c.is_zero() {
            return match self.trunc {
                None => QSeries::zero(),
                Some(_) => {
                    let t = self.trunc;
                    Self::from_parts(1, BTreeMap::new(), t)
                }
            };
        }
        let terms = self.terms.iter().map(|(&n, x)| (n, c * x)).collect();
        Self::from_parts(self.den, terms, self.trunc)
    }

    /// Product; valid below min(t₁ + v₂, t₂ + v₁).
    pub fn mul(&self, o: &QSeries) -> QSeries {
        let trunc = match (self.trunc, o.trunc) {
            (None, None) => None,
            (Some(t), None) => o.valuation().map(|v| t + v),
            (None, Some(t)) => self.valuation().map(|v| t + v),
            (Some(t1), Some(t2)) => {
                let v1 = self.valuation().unwrap_or(t1);
                let v2 = o.valuation().unwrap_or(t2);
                Some(std::cmp::min(t1 + v2, t2 + v1))
            }
        };
        if (self.is_exact() && self.is_empty()) || (o.is_exact() && o.is_empty()) {
            return QSeries::zero();
        }
        let d = self.den.lcm(&o.den);
        let mut buckets: BTreeMap<i64, Vec<CycNum>> = BTreeMap::new();
        let bound = trunc.map(|t| t * d);
        for (n1, c1) in self.keyed(d) {
            for (n2, c2) in o.keyed(d) {
                let n = n1 + n2;
                if let Some(b) = bound {
                    if Rational64::from_integer(n) >= b {
                        break;
                    }
                }
                buckets.entry(n).or_default().push(c1 * c2);
            }
        }
        let terms = buckets
            .into_iter()
            .map(|(n, v)| (n, CycNum::sum(v.iter())))
            .collect();
        Self::from_parts(d, terms, trunc)
    }

    /// Reciprocal; a truncated input valid below t with leading exponent v gives a result valid below t − 2v.
    pub fn inv(&self) -> Result<QSeries, SeriesError> {
        let (&n0, c0) = self.terms.iter().next().ok_or(SeriesError::NoTerms)?;
        let c0inv = c0.inv()?;
        let Some(t) = self.trunc else {
            if self.terms.len() == 1 {
                let mut terms = BTreeMap::new();
                terms.insert(-n0, c0inv);
                return Ok(Self::from_parts(self.den, terms, None));
            }
            return Err(SeriesError::ExactInverse);
        };
        let v = ratio(n0, self.den);
        let out_trunc = t - v * 2;
        // relative exponents share a step g; work on indices k meaning q^{v + k·g/D}
        let mut g = 0i64;
        for &n in self.terms.keys() {
            g = g.gcd(&(n - n0));
        }
        if g == 0 {
            g = 1;
        }
        let rel: Vec<(usize, &CycNum)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(&n, c)| (((n - n0) / g) as usize, c))
            .collect();
        // need exponents −v + k·g/D < out_trunc
        let span = (out_trunc + v) * self.den / g;
        let kmax = span.ceil().to_integer().max(0) as usize;
        let mut out: Vec<CycNum> = Vec::with_capacity(kmax);
        for k in 0..kmax {
            if k == 0 {
                out.push(c0inv.clone());
                continue;
            }
            let mut parts = Vec::new();
            for &(j, a) in &rel {
                if j > k {
                    break;
                }
                let b = &out[k - j];
                if !b.is_zero() {
                    parts.push(a * b);
                }
            }
            let s = CycNum::sum(parts.iter());
            out.push(-(&s * &c0inv));
        }
        let terms = out
            .into_iter()
            .enumerate()
            .map(|(k, c)| (-n0 + (k as i64) * g, c))
            .collect();
        Ok(Self::from_parts(self.den, terms, Some(out_trunc)))
    }

    pub fn div(&self, o: &QSeries) -> Result<QSeries, SeriesError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<QSeries, SeriesError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = QSeries::constant(CycNum::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// τ → mτ: every exponent and the truncation bound scale by m.
    pub fn rescale(&self, m: i64) -> Result<QSeries, SeriesError> {
        if m <= 0 {
            return Err(SeriesError::Invalid(format!(
                "rescale factor must be positive, got {m}"
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(&n, c)| (n * m, c.clone()))
            .collect();
        Ok(Self::from_parts(self.den, terms, self.trunc.map(|t| t * m)))
    }

    pub fn galois(&self, k: i64) -> Result<QSeries, SeriesError> {
        let mut terms = BTreeMap::new();
        for (&n, c) in &self.terms {
            terms.insert(n, c.galois(k)?);
        }
        Ok(QSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        })
    }

    /// Coefficientwise equality on the common window of validity.
    pub fn agrees_with(&self, o: &QSeries) -> bool {
        let t = min_trunc(self.trunc, o.trunc);
        let a = match t {
            Some(t) => self.truncate(t),
            None => self.clone(),
        };
        let b = match t {
            Some(t) => o.truncate(t),
            None => o.clone(),
        };
        a.terms()
            .map(|(e, c)| (e, c.clone()))
            .eq(b.terms().map(|(e, c)| (e, c.clone())))
    }

    /// Sum of the stored terms at τ.
    pub fn eval(&self, tau: Complex64) -> Result<Complex64, SeriesError> {
        if tau.im <= 0.0 {
            return Err(SeriesError::NotUpperHalfPlane(tau.im));
        }
        let mut s = Complex64::zero();
        for (e, c) in self.terms() {
            let x = *e.numer() as f64 / *e.denom() as f64;
            s += c.to_complex() * (Complex64::i() * 2.0 * PI * tau * x).exp();
        }
        Ok(s)
    }

    /// `q^{-1} + 0 + (3/2 - 5/2*sqrt5)*q - 10*q^2 + ... + O(q^6)`
    pub fn render_pretty(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        let mut shown_const = false;
        let lead = self.valuation();
        let const_in_window = lead.map_or(false, |v| v <= Rational64::zero())
            && self.trunc.map_or(true, |t| t > Rational64::zero());
        for (e, c) in self.terms() {
            if e > Rational64::zero() && !shown_const && const_in_window {
                parts.push((false, "0".into()));
                shown_const = true;
            }
            if e.is_zero() {
                shown_const = true;
            }
            parts.push(term_str(c, e));
        }
        if !shown_const && const_in_window {
            parts.push((false, "0".into()));
        }
        if let Some(t) = self.trunc {
            parts.push((false, format!("O({})", q_pow(t))));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    /// One `EXP n/d COEFF c` line per stored term (c in table literal form), then `TRUNC n/d` if truncated.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            out.push_str(&format!(
                "EXP {}/{} COEFF {}\n",
                e.numer(),
                e.denom(),
                c.raw()
            ));
        }
        if let Some(t) = self.trunc {
            out.push_str(&format!("TRUNC {}/{}\n", t.numer(), t.denom()));
        }
        out
    }
}

fn min_trunc(a: Option<Rational64>, b: Option<Rational64>) -> Option<Rational64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(std::cmp::min(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn q_pow(e: Rational64) -> String {
    if e.is_zero() {
        "1".into()
    } else if e.is_one() {
        "q".into()
    } else if e.is_integer() && e.is_positive() {
        format!("q^{}", e.numer())
    } else {
        format!("q^{{{}}}", e)
    }
}

fn term_str(c: &CycNum, e: Rational64) -> (bool, String) {
    let qp = q_pow(e);
    if let Some(r) = c.as_rational() {
        let neg = r.is_negative();
        let a = r.abs();
        let body = if e.is_zero() {
            if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            }
        } else if a.is_one() {
            qp
        } else if a.is_integer() {
            format!("{}*{qp}", a.numer())
        } else {
            format!("{}/{}*{qp}", a.numer(), a.denom())
        };
        return (neg, body);
    }
    if e.is_zero() {
        (false, format!("({})", c.pretty()))
    } else {
        (false, format!("({})*{qp}", c.pretty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_cyc;

    fn cy(s: &str) -> CycNum {
        parse_cyc(s).unwrap()
    }

    fn poly(cs: &[(i64, i64)], t: i64) -> QSeries {
        let terms = cs.iter().map(|&(n, c)| (n, CycNum::from_int(c))).collect();
        QSeries::from_parts(1, terms, Some(Rational64::from_integer(t)))
    }

    #[test]
    fn multiplication_window() {
        let a = poly(&[(-1, 1), (1, 2)], 3); // valid below 3, leading -1
        let b = poly(&[(1, 1), (2, 5)], 4); // valid below 4, leading 1
        let c = a.mul(&b);
        assert_eq!(c.trunc(), Some(Rational64::from_integer(3))); // min(3+1, 4-1)
        assert_eq!(c.coeff_int(0), CycNum::from_int(1));
        assert_eq!(c.coeff_int(1), CycNum::from_int(5));
        assert_eq!(c.coeff_int(2), CycNum::from_int(2));
    }

    #[test]
    fn identity_and_inverse() {
        let a = poly(&[(0, 1), (1, -1)], 10);
        let one = QSeries::constant(CycNum::one());
        assert_eq!(a.mul(&one), a);
        let inv = a.inv().unwrap();
        for n in 0..10 {
            assert_eq!(inv.coeff_int(n), CycNum::one());
        }
        let back = a.mul(&inv);
        assert!(back.agrees_with(&one));
        let sh = poly(&[(-2, 3), (0, 1)], 4);
        let si = sh.inv().unwrap();
        assert_eq!(si.trunc(), Some(Rational64::from_integer(8)));
        assert_eq!(si.coeff_int(2), CycNum::from_frac(1, 3));
        assert_eq!(si.coeff_int(4), CycNum::from_frac(-1, 9));
    }

    #[test]
    fn fractional_exponents_normalise() {
        let s = QSeries::monomial(CycNum::one(), Rational64::new(2, 24));
        assert_eq!(s.exp_den(), 12);
        let t = s.pow(12).unwrap();
        assert_eq!(t.exp_den(), 1);
        assert_eq!(t.coeff_int(1), CycNum::one());
    }

    #[test]
    fn rescale_identity_and_scaling() {
        let a = poly(&[(-1, 1), (2, 7)], 5);
        assert_eq!(a.rescale(1).unwrap(), a);
        let b = a.rescale(3).unwrap();
        assert_eq!(b.coeff_int(6), CycNum::from_int(7));
        assert_eq!(b.trunc(), Some(Rational64::from_integer(15)));
        assert!(a.rescale(0).is_err());
    }

    #[test]
    fn galois_coefficientwise() {
        let mut t = BTreeMap::new();
        t.insert(1, cy("sqrt5"));
        let s = QSeries::from_parts(1, t, Some(Rational64::from_integer(3)));
        let g = s.galois(2).unwrap();
        assert_eq!(g.coeff_int(1), -cy("sqrt5"));
        assert_eq!(s.galois(1).unwrap(), s);
    }

    #[test]
    fn rendering() {
        let mut t = BTreeMap::new();
        t.insert(-1, CycNum::one());
        t.insert(1, cy("3/2 - 5/2*sqrt5"));
        t.insert(2, CycNum::from_int(-10));
        let s = QSeries::from_parts(1, t, Some(Rational64::from_integer(3)));
        assert_eq!(
            s.render_pretty(),
            "q^{-1} + 0 + (3/2 - 5/2*sqrt5)*q - 10*q^2 + O(q^3)"
        );
        let lines = s.render_lines();
        assert!(lines.starts_with("EXP -1/1 COEFF 1\n"));
        assert!(lines.ends_with("TRUNC 3/1\n"));
        assert_eq!(QSeries::constant(CycNum::one()).render_pretty(), "1");
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(
            QSeries::big_o(Rational64::one()).inv(),
            Err(SeriesError::NoTerms)
        );
        let p = QSeries::constant(CycNum::one())
            .add(&QSeries::monomial(CycNum::one(), Rational64::one()));
        assert_eq!(p.inv(), Err(SeriesError::ExactInverse));
    }
}
