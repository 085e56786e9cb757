//! Dirichlet characters on (Z/p)* and quadratic Gauss sums.

use super::MoonshineError;
use crate::exact::{cyclo, embed_sqrt, CycNum};
use std::fmt;

pub use crate::exact::legendre;

/// Quadratic Gauss sum Σ (a/p) ζ_p^a. Its square is (−1/p)·p.
pub fn gauss_sum(p: u64) -> Result<CycNum, MoonshineError> {
    Ok(embed_sqrt(p)?)
}

/// Smallest primitive root mod p.
pub fn primitive_root(p: u64) -> Result<u64, MoonshineError> {
    if p < 3 || !cyclo::is_prime(p) {
        return Err(MoonshineError::NotPrime(p));
    }
    let qs: Vec<u64> = cyclo::factorize(p - 1)
        .into_iter()
        .map(|(q, _)| q)
        .collect();
    (2..p)
        .find(|&g| qs.iter().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(MoonshineError::NotPrime(p))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletChar {
    p: u64,
    order: u64,
    generator: u64,
    /// values[a] for a = 0..p; values[0] is 0
    values: Vec<CycNum>,
}

/// The character sending the primitive root `m` of p to `image`.
pub fn dirichlet_char(p: u64, n: u64, image: &CycNum) -> Result<DirichletChar, MoonshineError> {
    let m = primitive_root(p)?;
    if n == 0 || (p - 1) % n != 0 {
        return Err(MoonshineError::BadCharacter(format!(
            "order {n} does not divide {}",
            p - 1
        )));
    }
    if !image.pow(n as i64)?.is_one() {
        return Err(MoonshineError::BadCharacter(format!(
            "{image} is not an {n}-th root of unity"
        )));
    }
    for (q, _) in cyclo::factorize(n) {
        if image.pow((n / q) as i64)?.is_one() {
            return Err(MoonshineError::BadCharacter(format!(
                "{image} is not a primitive {n}-th root of unity"
            )));
        }
    }
    let mut values = vec![CycNum::zero(); p as usize];
    let mut x = 1u64;
    let mut v = CycNum::one();
    for _ in 0..p - 1 {
        values[x as usize] = v.clone();
        x = x * m % p;
        v = &v * image;
    }
    Ok(DirichletChar {
        p,
        order: n,
        generator: m,
        values,
    })
}

impl DirichletChar {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn value(&self, a: i64) -> CycNum {
        self.values[a.rem_euclid(self.p as i64) as usize].clone()
    }

    pub fn kernel(&self) -> Vec<u64> {
        (1..self.p)
            .filter(|&a| self.values[a as usize].is_one())
            .collect()
    }

    /// Residues grouped by character value, each block listed in the order
    /// 1, m, m², … restricted to the block; blocks ordered by value exponent.
    pub fn blocks(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![Vec::new(); self.order as usize];
        let mut x = 1u64;
        for k in 0..self.p - 1 {
            out[(k % self.order) as usize].push(x);
            x = x * self.generator % self.p;
        }
        out
    }

    /// Pointwise quotient χ/ψ (same modulus).
    pub fn quotient(&self, o: &DirichletChar) -> Result<Vec<CycNum>, MoonshineError> {
        if self.p != o.p {
            return Err(MoonshineError::BadCharacter("moduli differ".into()));
        }
        let mut out = vec![CycNum::zero()];
        for a in 1..self.p as usize {
            out.push((&self.values[a] / &o.values[a])?);
        }
        Ok(out)
    }

    pub fn is_homomorphism(&self) -> bool {
        (1..self.p).all(|a| {
            (1..self.p).all(|b| {
                self.value((a * b % self.p) as i64)
                    == &self.values[a as usize] * &self.values[b as usize]
            })
        })
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..self.p)
            .map(|a| format!("{a}:{}", self.values[a as usize]))
            .collect();
        write!(f, "chi[p={},N={}] {}", self.p, self.order, parts.join(" "))
    }
}
