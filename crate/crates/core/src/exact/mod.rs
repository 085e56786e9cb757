//! Exact arithmetic in cyclotomic fields Q(ζ_M).
//!
//! A value is stored at its minimal conductor as integer numerators over one
//! positive common denominator, in the power basis reduced mod Φ_M. Because the
//! conductor is always minimal and M ≢ 2 (mod 4), equal values have identical
//! representations, so `==` and `Hash` are structural.

pub mod cyclo;
mod fmt;
mod parse;

pub use parse::{parse_cyc, parse_int};

use cyclo::{cyclotomic, euler_phi, factorize, inv_mod, lcm, normal_conductor};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("galois exponent {k} is not coprime to conductor {m}")]
    NotCoprime { k: i64, m: u64 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycNum {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum {
            m: 1,
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rat(Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNum {
            m: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        }
    }

    /// ζ_n^e for any n ≥ 1 and integer e.
    pub fn root_of_unity(n: u64, e: i64) -> Self {
        let mut v = vec![BigInt::zero(); n as usize];
        v[e.rem_euclid(n as i64) as usize] = BigInt::one();
        Self::from_exponents(n, v, BigInt::one())
    }

    /// Build from coefficients on ζ_n^0..ζ_n^{n-1} (any n, any length ≤ n).
    pub fn from_exponents(n: u64, coeffs: Vec<BigInt>, den: BigInt) -> Self {
        let (m, v) = to_normal_conductor(n, coeffs);
        let v = reduce(m, v);
        canonical(m, v, den)
    }

    pub fn from_rat_exponents(n: u64, coeffs: &[(i64, Rat)]) -> Self {
        let mut acc = CycNum::zero();
        for (e, c) in coeffs {
            acc = acc + CycNum::root_of_unity(n, *e).scale(c);
        }
        acc
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.m == 1 && self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if !self.is_rational() {
            return None;
        }
        Some(match self.num.first() {
            None => Rat::zero(),
            Some(n) => Rat::new(n.clone(), self.den.clone()),
        })
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Power-basis coordinates at the stored conductor, as (exponent, value) pairs.
    pub fn coords(&self) -> Vec<(usize, Rat)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Rat::new(c.clone(), self.den.clone())))
            .collect()
    }

    /// Is this value ±ζ^e times a rational, i.e. a single nonzero coordinate?
    fn monomial(&self) -> Option<(usize, Rat)> {
        let c = self.coords();
        if c.len() == 1 {
            Some(c.into_iter().next().unwrap())
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        canonical_nodemote(self.m, num, &self.den * r.denom())
    }

    /// Numerators embedded into conductor `m` (a multiple of the own conductor), length φ(m).
    fn embed_num(&self, m: u64) -> Vec<BigInt> {
        let phi = euler_phi(m);
        if m == self.m {
            let mut v = self.num.clone();
            v.resize(phi, BigInt::zero());
            return v;
        }
        let step = (m / self.m) as usize;
        let mut v = vec![BigInt::zero(); m as usize];
        for (e, c) in self.num.iter().enumerate() {
            v[e * step] = c.clone();
        }
        let mut r = reduce(m, v);
        r.resize(phi, BigInt::zero());
        r
    }

    pub fn galois(&self, k: i64) -> Result<Self, ExactError> {
        let m = self.m as i64;
        if m == 1 {
            return Ok(self.clone());
        }
        if k.gcd(&m) != 1 {
            return Err(ExactError::NotCoprime { k, m: self.m });
        }
        let mut v = vec![BigInt::zero(); self.m as usize];
        for (e, c) in self.num.iter().enumerate() {
            let t = ((e as i64) * k).rem_euclid(m) as usize;
            v[t] += c;
        }
        let v = reduce(self.m, v);
        Ok(canonical_nodemote(self.m, v, self.den.clone()))
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit for every conductor")
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some((e, c)) = self.monomial() {
            let ce = CycNum::root_of_unity(self.m, -(e as i64));
            return Ok(ce.scale(&c.recip()));
        }
        Ok(self.inv_by_solve())
    }

    // Solve x·y = 1 with the multiplication-by-x matrix on the power basis.
    fn inv_by_solve(&self) -> Self {
        let m = self.m;
        let phi = euler_phi(m);
        // column j = x·ζ^j reduced
        let mut a = vec![vec![Rat::zero(); phi + 1]; phi];
        for j in 0..phi {
            let mut v = vec![BigInt::zero(); m as usize + phi];
            for (i, c) in self.num.iter().enumerate() {
                v[i + j] += c;
            }
            let col = reduce(m, fold(m, v));
            for (i, row) in a.iter_mut().enumerate() {
                let c = col.get(i).cloned().unwrap_or_default();
                row[j] = Rat::new(c, self.den.clone());
            }
        }
        a[0][phi] = Rat::one();
        // Gauss-Jordan
        for col in 0..phi {
            let piv = (col..phi)
                .find(|&r| !a[r][col].is_zero())
                .expect("nonzero field element is invertible");
            a.swap(col, piv);
            let p = a[col][col].clone();
            for c in col..=phi {
                let v = &a[col][c] / &p;
                a[col][c] = v;
            }
            for r in 0..phi {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=phi {
                        let v = &a[col][c] * &f;
                        a[r][c] -= v;
                    }
                }
            }
        }
        let coeffs: Vec<(i64, Rat)> = (0..phi).map(|i| (i as i64, a[i][phi].clone())).collect();
        CycNum::from_rat_exponents(m, &coeffs)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = CycNum::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut z = Complex64::new(0.0, 0.0);
        for (e, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * e as f64 / self.m as f64;
            z += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, ang);
        }
        z
    }

    /// Sum many values; terms are grouped by conductor and canonicalised once per group.
    pub fn sum<'a, I: IntoIterator<Item = &'a CycNum>>(items: I) -> Self {
        let mut groups: std::collections::BTreeMap<u64, (Vec<BigInt>, BigInt)> = Default::default();
        for x in items {
            if x.is_zero() {
                continue;
            }
            let g = groups
                .entry(x.m)
                .or_insert_with(|| (vec![BigInt::zero(); euler_phi(x.m)], BigInt::one()));
            add_into(g, &x.num, &x.den);
        }
        let mut acc = CycNum::zero();
        for (m, (v, d)) in groups {
            acc = acc + canonical(m, v, d);
        }
        acc
    }
}

fn add_into(acc: &mut (Vec<BigInt>, BigInt), num: &[BigInt], den: &BigInt) {
    if &acc.1 == den {
        for (a, b) in acc.0.iter_mut().zip(num) {
            *a += b;
        }
        return;
    }
    let l = acc.1.lcm(den);
    let fa = &l / &acc.1;
    let fb = &l / den;
    for a in acc.0.iter_mut() {
        *a *= &fa;
    }
    for (a, b) in acc.0.iter_mut().zip(num) {
        *a += b * &fb;
    }
    acc.1 = l;
}

/// Rewrite coefficients given at conductor n ≡ 2 mod 4 onto n/2 via ζ_n = −ζ_{n/2}^{(n/2+1)/2}.
fn to_normal_conductor(n: u64, coeffs: Vec<BigInt>) -> (u64, Vec<BigInt>) {
    let m = normal_conductor(n);
    if m == n {
        return (n, coeffs);
    }
    let h = (m + 1) / 2;
    let mut v = vec![BigInt::zero(); m as usize];
    for (e, c) in coeffs.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = ((e as u64 * h) % m) as usize;
        if e % 2 == 1 {
            v[t] -= c;
        } else {
            v[t] += c;
        }
    }
    (m, v)
}

/// Fold exponents mod m.
fn fold(m: u64, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let m = m as usize;
    if v.len() <= m {
        return v;
    }
    for i in m..v.len() {
        let c = std::mem::take(&mut v[i]);
        if !c.is_zero() {
            v[i % m] += c;
        }
    }
    v.truncate(m);
    v
}

/// Reduce a coefficient vector modulo Φ_m; result has length ≤ φ(m).
fn reduce(m: u64, v: Vec<BigInt>) -> Vec<BigInt> {
    let mut v = fold(m, v);
    let phi = cyclotomic(m);
    let d = phi.len() - 1;
    if v.len() > d {
        for k in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if c.is_zero() {
                continue;
            }
            for (j, &f) in phi.iter().enumerate().take(d) {
                if f != 0 {
                    v[k - d + j] -= &c * f;
                }
            }
        }
        v.truncate(d);
    }
    v
}

fn normalize(mut num: Vec<BigInt>, mut den: BigInt) -> (Vec<BigInt>, BigInt) {
    while num.last().map_or(false, |c| c.is_zero()) {
        num.pop();
    }
    if num.is_empty() {
        return (num, BigInt::one());
    }
    if den.is_negative() {
        den = -den;
        for c in num.iter_mut() {
            *c = -&*c;
        }
    }
    let mut g = den.clone();
    for c in &num {
        if g.is_one() {
            break;
        }
        g = g.gcd(c);
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = &*c / &g;
        }
        den /= &g;
    }
    (num, den)
}

fn canonical_nodemote(m: u64, num: Vec<BigInt>, den: BigInt) -> CycNum {
    let (num, den) = normalize(num, den);
    if num.is_empty() {
        return CycNum::zero();
    }
    CycNum { m, num, den }
}

/// Normalise and demote to the minimal conductor.
fn canonical(m: u64, num: Vec<BigInt>, den: BigInt) -> CycNum {
    let mut x = canonical_nodemote(m, num, den);
    if x.is_zero() {
        return x;
    }
    'outer: loop {
        if x.m == 1 {
            return x;
        }
        if x.num.len() == 1 {
            // rational already
            return CycNum {
                m: 1,
                num: x.num,
                den: x.den,
            };
        }
        for (q, _) in factorize(x.m) {
            let d = normal_conductor(x.m / q);
            if let Some(y) = try_demote(&x, q) {
                debug_assert!(y.m == d || y.m < d);
                x = y;
                continue 'outer;
            }
        }
        return x;
    }
}

/// Project onto Q(ζ_{m/q}) by averaging over Gal(Q(ζ_m)/Q(ζ_{m/q})); accept if the projection is x.
fn try_demote(x: &CycNum, q: u64) -> Option<CycNum> {
    let m = x.m;
    let d = m / q;
    let mut v = vec![BigInt::zero(); d as usize];
    let mut den = x.den.clone();
    if d % q == 0 {
        for (e, c) in x.num.iter().enumerate() {
            if (e as u64) % q == 0 && !c.is_zero() {
                v[e / q as usize] += c;
            }
        }
    } else {
        // ζ_m^e = ζ_q^{e·u} ζ_d^{e·w} with u·d + w·q = 1
        let u = inv_mod(d as i64, q as i64)?;
        let w = inv_mod(q as i64, d as i64).unwrap_or(0);
        let qm1 = BigInt::from(q - 1);
        for (e, c) in x.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = e as i64;
            let j = (e * u).rem_euclid(q as i64);
            let t = if d == 1 {
                0
            } else {
                (e * w).rem_euclid(d as i64) as usize
            };
            if j == 0 {
                v[t] += c * &qm1;
            } else {
                v[t] -= c;
            }
        }
        den *= &qm1;
    }
    let (dm, dv) = to_normal_conductor(d, v);
    let dv = reduce(dm, dv);
    let y = canonical_nodemote(dm, dv, den);
    let back = y.embed_num(m);
    let (bn, bd) = normalize(back, y.den.clone());
    if bn == x.num && bd == x.den {
        if y.is_zero() {
            return None;
        }
        // y may itself be rational or demotable further; the caller loops
        if y.num.len() == 1 {
            return Some(CycNum {
                m: 1,
                num: y.num,
                den: y.den,
            });
        }
        Some(y)
    } else {
        None
    }
}

fn add_impl(a: &CycNum, b: &CycNum, sign: i64) -> CycNum {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if sign > 0 { b.clone() } else { -b };
    }
    let m = lcm(a.m, b.m);
    let va = a.embed_num(m);
    let vb = b.embed_num(m);
    let l = a.den.lcm(&b.den);
    let fa = &l / &a.den;
    let fb = &l / &b.den;
    let v: Vec<BigInt> = va
        .iter()
        .zip(vb.iter())
        .map(|(x, y)| {
            if sign > 0 {
                x * &fa + y * &fb
            } else {
                x * &fa - y * &fb
            }
        })
        .collect();
    canonical(m, v, l)
}

fn mul_impl(a: &CycNum, b: &CycNum, demote: bool) -> CycNum {
    if a.is_zero() || b.is_zero() {
        return CycNum::zero();
    }
    if a.is_rational() {
        return b.scale(&a.as_rational().unwrap());
    }
    if b.is_rational() {
        return a.scale(&b.as_rational().unwrap());
    }
    let m = lcm(a.m, b.m);
    let va = a.embed_num(m);
    let vb = b.embed_num(m);
    let mut v = vec![BigInt::zero(); va.len() + vb.len()];
    for (i, x) in va.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in vb.iter().enumerate() {
            if !y.is_zero() {
                v[i + j] += x * y;
            }
        }
    }
    let v = reduce(m, v);
    if demote {
        canonical(m, v, &a.den * &b.den)
    } else {
        canonical_nodemote(m, v, &a.den * &b.den)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        add_impl(self, o, 1)
    }
}
impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        add_impl(self, o, -1)
    }
}
impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        mul_impl(self, o, true)
    }
}
impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = Result<CycNum, ExactError>;
    fn div(self, o: &CycNum) -> Result<CycNum, ExactError> {
        Ok(self * &o.inv()?)
    }
}
impl Add for CycNum {
    type Output = CycNum;
    fn add(self, o: CycNum) -> CycNum {
        &self + &o
    }
}
impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, o: CycNum) -> CycNum {
        &self - &o
    }
}
impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, o: CycNum) -> CycNum {
        &self * &o
    }
}
impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}
impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// The quadratic Gauss sum Σ (a/p) ζ_p^a: √p for p ≡ 1 (mod 4), i√p for p ≡ 3 (mod 4).
pub fn embed_sqrt(p: u64) -> Result<CycNum, ExactError> {
    if !cyclo::is_prime(p) || p == 2 {
        return Err(ExactError::NotPrime(p));
    }
    let v: Vec<BigInt> = (0..p)
        .map(|a| BigInt::from(legendre(a as i64, p)))
        .collect();
    Ok(CycNum::from_exponents(p, v, BigInt::one()))
}

/// Positive real square root of a nonnegative integer, inside a cyclotomic field.
pub fn sqrt_int(n: u64) -> Result<CycNum, ExactError> {
    let mut out = CycNum::one();
    for (p, e) in factorize(n) {
        let part = CycNum::from_int(p.pow(e / 2) as i64);
        out = &out * &part;
        if e % 2 == 1 {
            let s = match p {
                2 => &CycNum::root_of_unity(8, 1) + &CycNum::root_of_unity(8, 7),
                _ if p % 4 == 1 => embed_sqrt(p)?,
                _ => &embed_sqrt(p)? * &(-CycNum::root_of_unity(4, 1)),
            };
            out = &out * &s;
        }
    }
    Ok(out)
}
