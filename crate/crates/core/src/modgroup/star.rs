//! The *k operation on fixing groups: (a, b; c, d) ↦ (a, kb; c/k, d) on coset
//! representatives of Γ(p) with k | c.
//!
//! Representatives are lifted from the mod-p image by CRT rather than by a
//! search: c ≡ c̄ (mod p) and c ≡ 0 (mod k), then d ≡ d̄ with gcd(c, d) = 1,
//! then a, b from an extended gcd and shifted to the right residues.

use super::{GroupElt, GroupError, Psl2pElt};
use crate::exact::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

fn r(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Lift a PSL(2,p) element to an integer det-1 matrix with k | c.
/// `t` and `s` pick among the infinitely many lifts.
pub fn lift_with_divisible_c(x: &Psl2pElt, k: i64, t: i64, s: i64) -> Result<[i64; 4], GroupError> {
    let p = x.p() as i64;
    if k == 0 || k.gcd(&p) != 1 {
        return Err(GroupError::NotCoprime { k, p: p as u64 });
    }
    let [a0, b0, c0, d0] = x.entries().map(|v| v as i64);
    let ka = k.abs();
    let m = p * ka;
    // c ≡ c0 (mod p), c ≡ 0 (mod |k|)
    let inv = ka.extended_gcd(&p).x.rem_euclid(p);
    let mut c = ka * ((c0 * inv).rem_euclid(p));
    c += m * t;
    if c == 0 {
        c = m;
    }
    for step in 0..10_000i64 {
        let d = d0 + p * (s + step);
        if c.gcd(&d) != 1 {
            continue;
        }
        // a·d − b·c = 1
        let e = d.extended_gcd(&c);
        let (mut a, mut b) = (e.x * e.gcd.signum(), -e.y * e.gcd.signum());
        debug_assert_eq!(a * d - b * c, 1);
        // (a + c·u, b + d·u) keeps the determinant
        let u = if c0 != 0 {
            let ci = c.rem_euclid(p).extended_gcd(&p).x;
            ((a0 - a) * ci).rem_euclid(p)
        } else {
            let di = d.rem_euclid(p).extended_gcd(&p).x;
            ((b0 - b) * di).rem_euclid(p)
        };
        a += c * u;
        b += d * u;
        let m = [a, b, c, d];
        debug_assert_eq!(Psl2pElt::from_signed(p as u64, m), *x);
        return Ok(m);
    }
    Err(GroupError::NoRepresentative)
}

fn star_one(
    x: &GroupElt,
    k: i64,
    p: u64,
    pick: impl FnOnce() -> (i64, i64),
) -> Result<GroupElt, GroupError> {
    let tilde = x.reduce_mod_p(p).is_err();
    let base = if tilde {
        x.unconjugate_by_theta(p)
    } else {
        x.clone()
    };
    let e = base.entries();
    let kk = r(k);
    // already a representative with k | c: use it as is
    let direct = base.is_integral() && (e[2].to_integer() % BigInt::from(k)) == BigInt::from(0);
    let lifted = if direct {
        base.clone()
    } else {
        let (t, s) = pick();
        let m = lift_with_divisible_c(&base.reduce_mod_p(p)?, k, t, s)?;
        GroupElt::from_ints(m[0], m[1], m[2], m[3])
    };
    let [a, b, c, d] = lifted.entries().clone();
    let out = GroupElt::new(a, b * &kk, c / &kk, d)?;
    Ok(if tilde {
        out.conjugate_by_theta(p)
    } else {
        out
    })
}

/// Apply *k to generators (either side of θ_p; output on the same side as input).
pub fn star_k(gens: &[GroupElt], k: i64, p: u64) -> Result<Vec<GroupElt>, GroupError> {
    gens.iter().map(|g| star_one(g, k, p, || (0, 0))).collect()
}

/// *k on generators of a θ_p-conjugated group: each is pulled back by θ_p,
/// mapped by *k, and conjugated again. Unlike [`star_k`] this does not guess
/// the side from integrality, which matters for elements like δ̃ that are
/// integral on both sides.
pub fn star_k_conjugated(gens: &[GroupElt], k: i64, p: u64) -> Result<Vec<GroupElt>, GroupError> {
    gens.iter()
        .map(|g| Ok(star_one(&g.unconjugate_by_theta(p), k, p, || (0, 0))?.conjugate_by_theta(p)))
        .collect()
}

/// *k with freshly randomised coset representatives for every generator.
pub fn star_k_randomized<R: Rng>(
    gens: &[GroupElt],
    k: i64,
    p: u64,
    rng: &mut R,
) -> Result<Vec<GroupElt>, GroupError> {
    gens.iter()
        .map(|g| {
            let x = g.reduce_any(p)?;
            let m = lift_with_divisible_c(&x, k, rng.gen_range(-50..50), rng.gen_range(-50..50))?;
            let y = GroupElt::from_ints(m[0], m[1], m[2], m[3]);
            let tilde = g.reduce_mod_p(p).is_err();
            let y = if tilde { y.conjugate_by_theta(p) } else { y };
            star_one(&y, k, p, || {
                (rng.gen_range(-50..50), rng.gen_range(-50..50))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::builtin;
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn lifts_have_divisible_c() {
        let x = builtin("alpha_5i", None).unwrap().reduce_mod_p(5).unwrap();
        for (t, s) in [(0, 0), (3, -2), (-7, 11)] {
            let m = lift_with_divisible_c(&x, 2, t, s).unwrap();
            assert_eq!(m[2] % 2, 0);
            assert_eq!(m[0] * m[3] - m[1] * m[2], 1);
            assert_eq!(Psl2pElt::from_signed(5, m), x);
        }
        assert!(lift_with_divisible_c(&x, 5, 0, 0).is_err());
    }

    #[test]
    fn minus_one_maps_alpha_to_alpha_star() {
        let a = builtin("alpha_7i_tilde", None).unwrap();
        let s = star_k(&[a], -1, 7).unwrap();
        assert_eq!(s[0], builtin("alpha_7ii_tilde", None).unwrap());
        assert_eq!(s[0].to_string(), "[[3,-2/7],[35,-3]]");
    }

    #[test]
    fn mod_p_image_is_diagonal_conjugation() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let x = builtin("alpha_5i", None).unwrap();
        let want = {
            let [a, b, c, d] = x.reduce_mod_p(5).unwrap().entries();
            // (a, kb; c/k, d) with k = 2, 1/2 = 3 mod 5
            Psl2pElt::new(5, [a, 2 * b, 3 * c, d])
        };
        for _ in 0..20 {
            let y = star_k_randomized(&[x.clone()], 2, 5, &mut rng).unwrap();
            assert_eq!(y[0].reduce_mod_p(5).unwrap(), want);
        }
    }
}
