//! 2×2 rational matrices up to scalar, their images in PSL(2,p), and the
//! finite-group computations done there.

mod psl;
mod star;

pub(crate) use psl::inv_mod_u;
pub use psl::{check_relations, orbits_on};
pub use psl::{
    cusp_orbits, cusps, genus, l2p, l2p_order, parse_word, Census, Cusp, GenusData, GroupName,
    Psl2pElt, Psl2pGroup, RelationResult, Word,
};
pub use star::{lift_with_divisible_c, star_k, star_k_conjugated, star_k_randomized};

use crate::exact::Rat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("singular matrix")]
    Singular,
    #[error("matrix {0} is not p-integral for p = {1}; conjugate by theta_p first")]
    NotIntegral(String, u64),
    #[error("matrix {0} does not have determinant 1 up to scalar")]
    NotUnimodular(String),
    #[error("{0} is not a supported prime")]
    BadPrime(u64),
    #[error("unknown matrix name '{0}'")]
    UnknownName(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("undeclared generator '{0}' in relation")]
    UndeclaredGenerator(String),
    #[error("cannot act: c·tau + d vanishes or Im(tau) <= 0")]
    BadTau,
    #[error("k = {k} is not coprime to p = {p}")]
    NotCoprime { k: i64, p: u64 },
    #[error("no coset representative with k | c found")]
    NoRepresentative,
    #[error("genus formula gave a non-integral or negative value ({0}); internal inconsistency")]
    Genus(String),
    #[error("generators belong to different primes")]
    MixedPrimes,
}

/// A matrix in PGL(2,Q). Stored scaled to determinant ±1 when |det| is a rational
/// square, and to coprime integers otherwise.
#[derive(Debug, Clone)]
pub struct GroupElt {
    m: [Rat; 4],
}

fn ri(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let (n, d) = (r.numer(), r.denom());
    if n.is_negative() {
        return None;
    }
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

impl GroupElt {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, GroupError> {
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(GroupError::Singular);
        }
        let mut m = [a, b, c, d];
        if let Some(s) = rat_sqrt(&det.abs()) {
            for x in m.iter_mut() {
                *x = &*x / &s;
            }
        } else {
            // clear denominators, then divide out the content
            let l = m.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = m
                .iter()
                .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                .collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            for (x, n) in m.iter_mut().zip(ints) {
                *x = Rat::new(n, g.clone());
            }
        }
        Ok(GroupElt { m })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(ri(a), ri(b), ri(c), ri(d)).expect("nonsingular literal")
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn entries(&self) -> &[Rat; 4] {
        &self.m
    }

    pub fn det(&self) -> Rat {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn mul(&self, o: &GroupElt) -> GroupElt {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &o.m;
        GroupElt::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of nonsingular matrices")
    }

    pub fn inv(&self) -> GroupElt {
        let [a, b, c, d] = &self.m;
        GroupElt::new(d.clone(), -b, -c, a.clone()).expect("adjugate of nonsingular matrix")
    }

    pub fn pow(&self, e: i64) -> GroupElt {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = GroupElt::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Möbius action τ ↦ (aτ + b)/(cτ + d).
    pub fn act(&self, tau: Complex64) -> Result<Complex64, GroupError> {
        if tau.im <= 0.0 {
            return Err(GroupError::BadTau);
        }
        let f: Vec<f64> = self
            .m
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect();
        let den = tau * f[2] + f[3];
        if den.norm() == 0.0 {
            return Err(GroupError::BadTau);
        }
        Ok((tau * f[0] + f[1]) / den)
    }

    pub fn is_integral(&self) -> bool {
        self.m.iter().all(|x| x.is_integer())
    }

    /// θ_p x θ_p⁻¹ with θ_p = diag(1, p): (a, b/p; pc, d).
    pub fn conjugate_by_theta(&self, p: u64) -> GroupElt {
        let p = ri(p as i64);
        let [a, b, c, d] = &self.m;
        GroupElt::new(a.clone(), b / &p, c * &p, d.clone()).expect("conjugate of nonsingular")
    }

    /// θ_p⁻¹ x θ_p: (a, pb; c/p, d).
    pub fn unconjugate_by_theta(&self, p: u64) -> GroupElt {
        let p = ri(p as i64);
        let [a, b, c, d] = &self.m;
        GroupElt::new(a.clone(), b * &p, c / &p, d.clone()).expect("conjugate of nonsingular")
    }

    /// Image in PSL(2,p). Entries must be p-integral and the determinant 1 after scaling.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Psl2pElt, GroupError> {
        if !psl::is_small_prime(p) {
            return Err(GroupError::BadPrime(p));
        }
        if !self.det().is_one() {
            return Err(GroupError::NotUnimodular(self.to_string()));
        }
        let pb = BigInt::from(p);
        let mut out = [0u64; 4];
        for (o, x) in out.iter_mut().zip(self.m.iter()) {
            if (x.denom() % &pb).is_zero() {
                return Err(GroupError::NotIntegral(self.to_string(), p));
            }
            let n = x.numer().mod_floor(&pb).to_u64().unwrap();
            let d = x.denom().mod_floor(&pb).to_u64().unwrap();
            *o = n * psl::inv_mod_u(d, p) % p;
        }
        Ok(Psl2pElt::new(p, out))
    }

    /// Reduce a tilde-side element: conjugate back by θ_p when needed.
    pub fn reduce_any(&self, p: u64) -> Result<Psl2pElt, GroupError> {
        match self.reduce_mod_p(p) {
            Err(GroupError::NotIntegral(..)) => self.unconjugate_by_theta(p).reduce_mod_p(p),
            r => r,
        }
    }
}

/// Reduce a generator list mod p, deciding the θ_p side once for the whole list:
/// if any element is not p-integral, all of them are pulled back by θ_p first.
/// Per-element guessing goes wrong for elements integral on both sides (δ̃).
pub fn reduce_generators(gens: &[GroupElt], p: u64) -> Result<Vec<Psl2pElt>, GroupError> {
    let plain: Result<Vec<_>, _> = gens.iter().map(|g| g.reduce_mod_p(p)).collect();
    match plain {
        Err(GroupError::NotIntegral(..)) => gens
            .iter()
            .map(|g| g.unconjugate_by_theta(p).reduce_mod_p(p))
            .collect(),
        r => r,
    }
}

impl PartialEq for GroupElt {
    fn eq(&self, o: &Self) -> bool {
        // proportional: all 2×2 minors of the stacked vectors vanish
        for i in 0..4 {
            for j in 0..4 {
                if &self.m[i] * &o.m[j] != &self.m[j] * &o.m[i] {
                    return false;
                }
            }
        }
        true
    }
}

impl Eq for GroupElt {}

fn rat_text(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.m.iter().map(rat_text).collect();
        write!(f, "[[{},{}],[{},{}]]", t[0], t[1], t[2], t[3])
    }
}

/// `[[a,b],[c,d]]` with integer or `n/d` entries.
pub fn parse_matrix(text: &str) -> Result<GroupElt, GroupError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: &str| GroupError::Parse {
        pos,
        msg: msg.into(),
    };
    let inner = s
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| err(0, "expected [[a,b],[c,d]]"))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return Err(err(2, "expected two rows"));
    }
    let mut vals = Vec::new();
    for r in rows {
        for e in r.split(',') {
            let v: Rat = e.parse().map_err(|_| err(0, &format!("bad entry '{e}'")))?;
            vals.push(v);
        }
    }
    if vals.len() != 4 {
        return Err(err(0, "expected four entries"));
    }
    let mut it = vals.into_iter();
    GroupElt::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
}

/// Named matrices. A `_tilde` suffix conjugates by θ_p for the prime in the name
/// (or `ctx_p` when the name has none).
pub fn builtin(name: &str, ctx_p: Option<u64>) -> Result<GroupElt, GroupError> {
    let unknown = || GroupError::UnknownName(name.to_string());
    if let Some(base) = name.strip_suffix("_tilde") {
        let p = name_prime(base).or(ctx_p).ok_or_else(unknown)?;
        return Ok(builtin(base, Some(p))?.conjugate_by_theta(p));
    }
    let m = |a, b, c, d| Ok(GroupElt::from_ints(a, b, c, d));
    match name {
        "I" => return m(1, 0, 0, 1),
        "S" => return m(0, -1, 1, 0),
        "T" => return m(1, 1, 0, 1),
        "delta_5" => return m(2, 5, 5, 13),
        "delta_7" => return m(2, 7, 7, 25),
        "delta_11" => return m(-40, -11, 11, 3),
        "delta_13" => return m(85, 13, 13, 2),
        // α = TSδ₅T
        "alpha_5i" => return m(-3, -11, 2, 7),
        // T^{2/5} W₂₅ T^{2/5} pulled back by θ₅
        "alpha_5ii" => return m(2, 3, 1, 2),
        "alpha_7i" => return m(3, 2, -5, -3),
        "alpha_7ii" => return m(3, -2, 5, -3),
        "alpha_7iii_prime" => return m(-4, 1, -5, 1),
        "alpha_11" => return m(1, 1, -2, -1),
        "alpha_11_prime" => return m(1, 5, -2, -9),
        "Delta_13" => return Ok(builtin("delta_13", None)?.pow(2)),
        _ => {}
    }
    if let Some(r) = name.strip_prefix("alpha_13r") {
        let r: u32 = r.parse().map_err(|_| unknown())?;
        if r > 3 {
            return Err(unknown());
        }
        return m(11, 1 << (3 - r), 92 << r, 67);
    }
    if let Some(n) = name.strip_prefix("W_") {
        let n: i64 = n.parse().map_err(|_| unknown())?;
        if n <= 0 {
            return Err(unknown());
        }
        return m(0, -1, n, 0);
    }
    if let Some(p) = name.strip_prefix("theta_") {
        let p: i64 = p.parse().map_err(|_| unknown())?;
        if p <= 0 {
            return Err(unknown());
        }
        return m(1, 0, 0, p);
    }
    if let Some(frac) = name.strip_prefix("T^{").and_then(|x| x.strip_suffix('}')) {
        let r: Rat = frac.parse().map_err(|_| unknown())?;
        return GroupElt::new(ri(1), r, ri(0), ri(1));
    }
    if name.starts_with("Gamma") && name.ends_with("-image") {
        // Γ(p) maps to the identity mod p
        return m(1, 0, 0, 1);
    }
    Err(unknown())
}

fn name_prime(name: &str) -> Option<u64> {
    let digits: String = name
        .trim_start_matches(|c: char| !c.is_ascii_digit())
        .chars()
        .take_while(|c| c.is_ascii_digit())
        .collect();
    digits.parse().ok().filter(|p| psl::is_small_prime(*p))
}

/// One generator: a literal matrix, a built-in name, or a `*`-product of those.
pub fn parse_generator(text: &str, ctx_p: Option<u64>) -> Result<GroupElt, GroupError> {
    let t = text.trim();
    if t.starts_with("[[") {
        return parse_matrix(t);
    }
    let mut acc = GroupElt::identity();
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes: Vec<char> = t.chars().collect();
    let mut parts = Vec::new();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            '*' if depth == 0 => {
                parts.push(bytes[start..i].iter().collect::<String>());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(bytes[start..].iter().collect::<String>());
    for p in parts {
        let p = p.trim();
        let x = if p.starts_with("[[") {
            parse_matrix(p)?
        } else {
            builtin(p, ctx_p)?
        };
        acc = acc.mul(&x);
    }
    Ok(acc)
}

/// Comma-separated generator list; commas inside brackets do not split.
pub fn parse_generators(text: &str, ctx_p: Option<u64>) -> Result<Vec<GroupElt>, GroupError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(parse_generator(&cur, ctx_p)?);
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(parse_generator(&cur, ctx_p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_identities() {
        let s = builtin("S", None).unwrap();
        assert_eq!(s.mul(&s), GroupElt::identity());
        let w = builtin("W_25", None).unwrap();
        assert_eq!(w.mul(&w), GroupElt::identity());
        assert_eq!(GroupElt::from_ints(-1, 0, 0, -1), GroupElt::identity());
        assert!(GroupElt::new(ri(1), ri(2), ri(2), ri(4)).is_err());
    }

    #[test]
    fn theta_conjugation() {
        let d = builtin("delta_5", None).unwrap();
        assert_eq!(d.conjugate_by_theta(5), GroupElt::from_ints(2, 1, 25, 13));
        let a = builtin("alpha_7i", None).unwrap().conjugate_by_theta(7);
        assert_eq!(a.to_string(), "[[3,2/7],[-35,-3]]");
        assert_eq!(builtin("alpha_7i_tilde", None).unwrap(), a);
        assert_eq!(
            a.unconjugate_by_theta(7),
            builtin("alpha_7i", None).unwrap()
        );
    }

    #[test]
    fn alpha_5_is_tsdt() {
        let w = parse_generator("T*S*delta_5*T", None).unwrap();
        assert_eq!(w, builtin("alpha_5i", None).unwrap());
        // T^{1/5} W₂₅ δ̃₅ T^{1/5} is 5·α̃ and equal projectively
        let lhs = parse_generator("T^{1/5}*W_25*delta_5_tilde*T^{1/5}", None).unwrap();
        assert_eq!(lhs, builtin("alpha_5i_tilde", None).unwrap());
        let rhs = parse_generator("T^{2/5}*W_25*T^{2/5}", None).unwrap();
        assert_eq!(rhs, GroupElt::from_ints(10, 3, 25, 10));
        assert_eq!(
            rhs.unconjugate_by_theta(5),
            builtin("alpha_5ii", None).unwrap()
        );
    }

    #[test]
    fn reductions() {
        let d = builtin("delta_5", None).unwrap().reduce_mod_p(5).unwrap();
        assert_eq!(d, Psl2pElt::new(5, [2, 0, 0, 3]));
        assert_eq!(
            builtin("T", None).unwrap().reduce_mod_p(7).unwrap(),
            Psl2pElt::new(7, [1, 1, 0, 1])
        );
        assert!(GroupElt::from_ints(-1, 0, 0, -1)
            .reduce_mod_p(11)
            .unwrap()
            .is_identity());
        let t = builtin("alpha_7i_tilde", None).unwrap();
        assert!(matches!(
            t.reduce_mod_p(7),
            Err(GroupError::NotIntegral(..))
        ));
        assert_eq!(
            t.reduce_any(7).unwrap(),
            builtin("alpha_7i", None).unwrap().reduce_mod_p(7).unwrap()
        );
        assert!(builtin("W_25", None).unwrap().reduce_mod_p(5).is_err());
    }

    #[test]
    fn literal_parsing() {
        let m = parse_matrix("[[3, 2/7], [-35, -3]]").unwrap();
        assert_eq!(m, builtin("alpha_7i_tilde", None).unwrap());
        let gens = parse_generators("delta_7, [[1,1],[0,1]], alpha_7i", Some(7)).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(parse_matrix("[[1,2],[3]]").is_err());
        assert!(matches!(
            builtin("nope", None),
            Err(GroupError::UnknownName(_))
        ));
    }

    #[test]
    fn thirteen_alphas_are_unimodular() {
        for r in 0..4 {
            let a = builtin(&format!("alpha_13r{r}"), None).unwrap();
            assert!(a.det().is_one() && a.is_integral());
        }
    }

    #[test]
    fn mobius_action() {
        let s = builtin("S", None).unwrap();
        let w = s.act(Complex64::new(0.0, 2.0)).unwrap();
        assert!((w - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(s.act(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn generator_lists_pick_one_side() {
        let tilde = parse_generators("delta_7_tilde,alpha_7i_tilde", Some(7)).unwrap();
        let plain = parse_generators("delta_7,alpha_7i", Some(7)).unwrap();
        assert_eq!(
            reduce_generators(&tilde, 7).unwrap(),
            reduce_generators(&plain, 7).unwrap()
        );
    }
}
