//! Dedekind eta, its shifted and scaled variants, E4 and J, exactly and numerically.

use super::{EtaQuotientSpec, Expr, QSeries, SeriesError};
use crate::exact::CycNum;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Coefficients through q⁵ in the displayed variable.
pub const DEFAULT_TRUNC: i64 = 6;

/// ∏_{n ≥ 1} (1 − ζ_p^{a n} xⁿ) for xⁿ with n < len, as group-ring vectors over ζ_p.
fn shifted_product(a: u64, p: u64, len: usize) -> Vec<Vec<BigInt>> {
    let p = p as usize;
    let mut c = vec![vec![BigInt::zero(); p]; len];
    if len == 0 {
        return c;
    }
    c[0][0] = BigInt::from(1);
    for n in 1..len {
        let r = (a as usize * n) % p;
        for k in (n..len).rev() {
            let (lo, hi) = c.split_at_mut(k);
            let src = &lo[k - n];
            for (j, v) in src.iter().enumerate() {
                if !v.is_zero() {
                    hi[0][(j + r) % p] -= v;
                }
            }
        }
    }
    c
}

/// q^{1/24} ∏ (1 − ζ_p^{an} qⁿ) valid below `trunc`; the literal shifted eta divided by ζ_{24p}^a.
pub fn eta_shifted_normalized(a: u64, p: u64, trunc: Rational64) -> QSeries {
    // need n + 1/24 < trunc
    let len = (trunc - Rational64::new(1, 24)).ceil().to_integer().max(0) as usize;
    let prod = shifted_product(a % p.max(1), p.max(1), len);
    let mut terms = BTreeMap::new();
    for (n, v) in prod.into_iter().enumerate() {
        let c = CycNum::from_exponents(p.max(1), v, BigInt::from(1));
        terms.insert(1 + 24 * n as i64, c);
    }
    QSeries::from_parts(24, terms, Some(trunc))
}

/// η(τ + a/p) = e^{2πi a/(24p)} q^{1/24} ∏ (1 − ζ_p^{an} qⁿ), prefactor kept.
pub fn eta_shifted(a: u64, p: u64, trunc: i64) -> Result<QSeries, SeriesError> {
    if p == 0 || a >= p {
        return Err(SeriesError::Invalid(format!(
            "shift {a}/{p} needs 0 <= a < p"
        )));
    }
    let s = eta_shifted_normalized(a, p, Rational64::from_integer(trunc));
    Ok(s.scale(&CycNum::root_of_unity(24 * p, a as i64)))
}

pub fn eta_series(trunc: i64) -> QSeries {
    eta_scaled_to(1, Rational64::from_integer(trunc))
}

/// η(mτ).
pub fn eta_scaled(m: u64, trunc: i64) -> QSeries {
    eta_scaled_to(m, Rational64::from_integer(trunc))
}

pub(crate) fn eta_scaled_to(m: u64, trunc: Rational64) -> QSeries {
    let m = m.max(1) as i64;
    // m/24 + m·k < trunc
    let lead = Rational64::new(m, 24);
    let len = ((trunc - lead) / m).ceil().to_integer().max(0) as usize;
    let prod = shifted_product(0, 1, len);
    let mut terms = BTreeMap::new();
    for (k, v) in prod.into_iter().enumerate() {
        terms.insert(m + 24 * m * k as i64, CycNum::from_rat(v[0].clone().into()));
    }
    QSeries::from_parts(24, terms, Some(trunc))
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

pub(crate) fn e4_to(trunc: Rational64) -> QSeries {
    let len = trunc.ceil().to_integer().max(0) as u64;
    let mut terms = BTreeMap::new();
    for n in 0..len {
        let c = if n == 0 { 1 } else { 240 * sigma3(n) as i64 };
        terms.insert(n as i64, CycNum::from_int(c));
    }
    QSeries::from_parts(1, terms, Some(trunc))
}

/// 1 + 240 Σ σ₃(n) qⁿ.
pub fn eisenstein_e4(trunc: i64) -> QSeries {
    e4_to(Rational64::from_integer(trunc))
}

/// E4³/η²⁴ − 744.
pub fn j_series(trunc: i64) -> QSeries {
    let e = Expr::j();
    e.series(trunc).expect("J expression is well formed")
}

pub fn build_eta_quotient(spec: &EtaQuotientSpec, trunc: i64) -> Result<QSeries, SeriesError> {
    spec.to_expr().series(trunc)
}

/// Number of product factors used by the numeric eta at this Im τ.
pub fn eta_product_terms(im: f64) -> usize {
    // |q|^N < e^{-40}
    let n = 40.0 / (2.0 * PI * im) + 10.0;
    (n.ceil() as usize).max(40)
}

fn check_tau(tau: Complex64) -> Result<(), SeriesError> {
    if tau.im > 0.0 && tau.im.is_finite() {
        Ok(())
    } else {
        Err(SeriesError::NotUpperHalfPlane(tau.im))
    }
}

/// q^{1/24} ∏ (1 − ζ_p^{an} qⁿ) at τ; with a = 0 this is η(τ). Summed in log form so tiny Im τ stays stable.
pub fn eta_numeric(tau: Complex64, a: u64, p: u64) -> Result<Complex64, SeriesError> {
    check_tau(tau)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let q = (two_pi_i * tau).exp();
    let n_terms = eta_product_terms(tau.im);
    let mut log = two_pi_i * tau / 24.0;
    let mut qn = Complex64::new(1.0, 0.0);
    let p = p.max(1);
    for n in 1..=n_terms as u64 {
        qn *= q;
        let z = if a == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            (two_pi_i * ((a * n % p) as f64 / p as f64)).exp()
        };
        log += (Complex64::new(1.0, 0.0) - z * qn).ln();
    }
    Ok(log.exp())
}

pub fn e4_numeric(tau: Complex64) -> Result<Complex64, SeriesError> {
    check_tau(tau)?;
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    // n³|q|ⁿ must fall below e^{-40}
    let n_terms = ((60.0 / (2.0 * PI * tau.im)) as usize + 20).max(40);
    let mut s = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=n_terms as u64 {
        qn *= q;
        s += qn * (240.0 * sigma3(n).to_f64().unwrap_or(f64::INFINITY));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_signs() {
        let e = eta_series(13);
        let want = [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)];
        for n in 0..12 {
            let c = want.iter().find(|w| w.0 == n).map_or(0, |w| w.1);
            assert_eq!(
                e.coeff(Rational64::new(24 * n + 1, 24)),
                CycNum::from_int(c),
                "n={n}"
            );
        }
        assert_eq!(e.valuation(), Some(Rational64::new(1, 24)));
        assert_eq!(
            e.pow(24).unwrap().valuation(),
            Some(Rational64::from_integer(1))
        );
    }

    #[test]
    fn shifted_prefactor_and_zero_shift() {
        assert_eq!(eta_shifted(0, 5, 6).unwrap(), eta_series(6));
        let s = eta_shifted(2, 5, 6).unwrap();
        assert_eq!(
            s.coeff(Rational64::new(1, 24)),
            CycNum::root_of_unity(120, 2)
        );
        assert!(eta_shifted(5, 5, 6).is_err());
    }

    #[test]
    fn e4_and_j() {
        let e = eisenstein_e4(4);
        assert_eq!(e.coeff_int(0), CycNum::one());
        assert_eq!(e.coeff_int(1), CycNum::from_int(240));
        assert_eq!(e.coeff_int(2), CycNum::from_int(2160));
        let j = j_series(3);
        assert_eq!(j.coeff_int(-1), CycNum::one());
        assert_eq!(j.coeff_int(0), CycNum::zero());
        assert_eq!(j.coeff_int(1), CycNum::from_int(196884));
        assert_eq!(j.coeff_int(2), CycNum::from_int(21493760));
        assert_eq!(j.trunc(), Some(Rational64::from_integer(3)));
    }

    #[test]
    fn eta_at_i() {
        let v = eta_numeric(Complex64::new(0.0, 1.0), 0, 1).unwrap();
        // Γ(1/4) / (2 π^{3/4})
        assert!((v.re - 0.768_225_422_326_056_7).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        assert!(eta_numeric(Complex64::new(0.3, 0.0), 0, 1).is_err());
    }

    #[test]
    fn shifted_normalised_matches_literal_shift() {
        let tau = Complex64::new(0.1, 0.9);
        let lit = eta_numeric(tau + 2.0 / 5.0, 0, 1).unwrap();
        let nor = eta_numeric(tau, 2, 5).unwrap();
        let phase = (Complex64::new(0.0, 2.0 * PI * 2.0 / 120.0)).exp();
        assert!((lit - nor * phase).norm() < 1e-12);
    }
}
