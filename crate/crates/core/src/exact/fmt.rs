//! `CycNum` to text.
//!
//! `raw` is the table literal form and round-trips through the parser at any
//! conductor. `pretty` spells elements of quadratic fields as `a + b*sqrtD`
//! (or `a + b*i*sqrtD`) and falls back to `raw` otherwise.

use super::{CycNum, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
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

impl CycNum {
    /// Table literal form: `c*z{M}^{e}` terms joined by `+`/`-`, no spaces.
    pub fn raw(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.coords().into_iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            let a = rat_str(&c.abs());
            if e == 0 {
                out.push_str(&a);
            } else {
                out.push_str(&format!("{a}*z{{{}}}^{{{e}}}", self.m));
            }
        }
        out
    }

    /// Write as `a + b*sqrtD` when the value lies in a quadratic field.
    pub fn as_quadratic(&self) -> Option<(Rat, Rat, i64)> {
        if let Some(r) = self.as_rational() {
            return Some((r, Rat::zero(), 1));
        }
        let m = self.m as i64;
        let mut other: Option<CycNum> = None;
        for k in 2..m {
            if num_integer::Integer::gcd(&k, &m) != 1 {
                continue;
            }
            let g = self.galois(k).ok()?;
            if &g == self {
                continue;
            }
            match &other {
                None => other = Some(g),
                Some(o) if o == &g => {}
                Some(_) => return None,
            }
        }
        let o = other?;
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let a = (self + &o).as_rational()?.clone() * &half;
        let bsq_el = &(self - &o) * &(self - &o);
        let r = bsq_el.as_rational()? * &half * &half; // b²·D
                                                       // r = s/t = (s·t)/t²; pull squares out of s·t
        let st = r.numer() * r.denom();
        let (sq, d) = square_split(&st)?;
        let b_abs = Rat::new(sq, r.denom().clone());
        // sign: compare the embedding of (x − x')/2 with b_abs·√D
        let diff = (self - &o).to_complex() * 0.5;
        let s = if d < 0 { diff.im } else { diff.re };
        let b = if s < 0.0 { -b_abs } else { b_abs };
        Some((a, b, d))
    }

    pub fn pretty(&self) -> String {
        let Some((a, b, d)) = self.as_quadratic() else {
            return self.raw();
        };
        let mut parts = Vec::new();
        if !a.is_zero() || b.is_zero() {
            parts.push((a.is_negative(), rat_str(&a.abs())));
        }
        if !b.is_zero() {
            let surd = match d {
                -1 => "i".to_string(),
                d if d < 0 => format!("i*sqrt{}", -d),
                d => format!("sqrt{d}"),
            };
            let bb = b.abs();
            let body = if bb.is_one() {
                surd
            } else {
                format!("{}*{surd}", rat_str(&bb))
            };
            parts.push((b.is_negative(), body));
        }
        join_signed(parts)
    }
}

/// n = sq²·d with d squarefree (sign kept on d). Fails on huge inputs.
fn square_split(n: &BigInt) -> Option<(BigInt, i64)> {
    let neg = n.is_negative();
    let mut rest = n.abs();
    let mut sq = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            sq *= &p;
        }
        if (&rest % &p).is_zero() {
            rest /= &p;
            d *= &p;
        }
        p += 1;
        if p > BigInt::from(1u64 << 20) {
            // remaining cofactor: accept only if it is a perfect square or assume squarefree
            let r = rest.sqrt();
            if &r * &r == rest {
                sq *= r;
                rest = BigInt::one();
            }
            break;
        }
    }
    d *= rest;
    let d = i64::try_from(d).ok()?;
    Some((sq, if neg { -d } else { d }))
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_cyc;
    use super::*;

    #[test]
    fn raw_round_trips() {
        for s in [
            "z{5}^{1}-3*z{5}^{2}",
            "3/2",
            "0",
            "-1/2*z{7}^{3}+z{7}^{5}",
            "z{24}^{5}",
        ] {
            let x = parse_cyc(s).unwrap();
            assert_eq!(parse_cyc(&x.raw()).unwrap(), x, "{s}");
        }
        assert_eq!(parse_cyc("-z{11}^{3}").unwrap().raw(), "-1*z{11}^{3}");
    }

    #[test]
    fn quadratic_pretty() {
        let cases = [
            ("3/2 - 5/2*sqrt5", "3/2 - 5/2*sqrt5"),
            ("-3/2 + i*sqrt7/2", "-3/2 + 1/2*i*sqrt7"),
            ("1 - i*sqrt7", "1 - i*sqrt7"),
            ("sqrt20", "2*sqrt5"),
            ("-10", "-10"),
            ("2 + 3i", "2 + 3*i"),
            ("(1 - i*sqrt11)/2", "1/2 - 1/2*i*sqrt11"),
            ("-i*sqrt(3)", "-i*sqrt3"),
            ("sqrt2 + 1", "1 + sqrt2"),
        ];
        for (inp, want) in cases {
            let x = parse_cyc(inp).unwrap();
            assert_eq!(x.pretty(), want, "{inp}");
            assert_eq!(parse_cyc(&x.pretty()).unwrap(), x);
        }
    }

    #[test]
    fn non_quadratic_falls_back_to_raw() {
        let x = CycNum::root_of_unity(7, 1);
        assert_eq!(x.pretty(), x.raw());
    }
}
