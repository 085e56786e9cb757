//! Cyclotomic polynomials and the small number theory the field code leans on.
//!
//! Polynomials are cached per conductor behind a lock; population happens at
//! most once per conductor and reads never block each other.

use num_integer::Integer;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn euler_phi(n: u64) -> usize {
    let mut r = n;
    for (p, _) in factorize(n) {
        r = r / p * (p - 1);
    }
    r as usize
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Conductors congruent to 2 mod 4 describe the same field as their odd half.
pub fn normal_conductor(m: u64) -> u64 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// Modular inverse of `a` mod `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

type Poly = Vec<i64>;

fn cache() -> &'static RwLock<HashMap<u64, Arc<Poly>>> {
    static C: OnceLock<RwLock<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of Φ_m, lowest degree first. Monic of degree φ(m).
pub fn cyclotomic(m: u64) -> Arc<Poly> {
    if let Some(p) = cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let poly = Arc::new(compute(m));
    cache().write().unwrap().entry(m).or_insert(poly).clone()
}

fn compute(m: u64) -> Poly {
    if m == 1 {
        return vec![-1, 1];
    }
    let primes: Vec<u64> = factorize(m).into_iter().map(|(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    // Φ_{np}(x) = Φ_n(x^p) / Φ_n(x) for p not dividing n, built up over the radical
    let mut cur: Poly = vec![-1, 1];
    let mut n = 1u64;
    for &p in &primes {
        let stretched = stretch(&cur, p as usize);
        cur = exact_div(&stretched, &cur);
        n *= p;
    }
    debug_assert_eq!(n, rad);
    stretch(&cur, (m / rad) as usize)
}

fn stretch(p: &Poly, k: usize) -> Poly {
    let mut out = vec![0i64; (p.len() - 1) * k + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

fn exact_div(num: &Poly, den: &Poly) -> Poly {
    let mut r = num.clone();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / lead;
        q[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                r[k + j] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}
