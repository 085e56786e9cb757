//! Fricke labelings of the lines of (Z_p)² and the singular cusps they force.

use super::MoonshineError;
use crate::modgroup::{cusps, inv_mod_u, l2p, Cusp, Psl2pGroup};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A point of P¹(F_p): (1:n) or (0:1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(pub u64, pub u64);

impl Line {
    /// The line through a nonzero vector.
    pub fn through(a: i64, b: i64, p: u64) -> Option<Line> {
        let (a, b) = (a.rem_euclid(p as i64) as u64, b.rem_euclid(p as i64) as u64);
        match (a, b) {
            (0, 0) => None,
            (0, _) => Some(Line(0, 1)),
            _ => Some(Line(1, b * inv_mod_u(a, p) % p)),
        }
    }

    pub fn all(p: u64) -> Vec<Line> {
        std::iter::once(Line(1, 0))
            .chain((1..p).map(|n| Line(1, n)))
            .chain(std::iter::once(Line(0, 1)))
            .collect()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.0, self.1)
    }
}

pub const CASE_IDS: [&str; 10] = [
    "5i", "5ii", "7i", "7ii", "7iii", "11", "13r0", "13r1", "13r2", "13r3",
];

/// g^a h^b ↔ (a,b); `fricke[line]` is true for Fricke type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStructure {
    pub p: u64,
    pub case_id: String,
    pub labels: BTreeMap<Line, bool>,
}

impl ClassStructure {
    pub fn from_fricke_lines(p: u64, case_id: &str, fricke: &[Line]) -> Self {
        let set: BTreeSet<Line> = fricke.iter().copied().collect();
        let labels = Line::all(p)
            .into_iter()
            .map(|l| (l, set.contains(&l)))
            .collect();
        ClassStructure {
            p,
            case_id: case_id.to_string(),
            labels,
        }
    }

    pub fn is_fricke(&self, a: i64, b: i64) -> Option<bool> {
        Line::through(a, b, self.p).map(|l| self.labels[&l])
    }

    pub fn fricke_lines(&self) -> Vec<Line> {
        self.labels
            .iter()
            .filter(|(_, &f)| f)
            .map(|(l, _)| *l)
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.labels.values().all(|f| !f)
    }
}

/// Exponent e of a in base 2 mod 13 (2 is a primitive root).
fn log2_mod13(a: u64) -> u64 {
    let mut x = 1u64;
    for e in 0..12 {
        if x == a % 13 {
            return e;
        }
        x = x * 2 % 13;
    }
    unreachable!("a is a unit mod 13")
}

pub fn build_class_structure(case_id: &str) -> Result<ClassStructure, MoonshineError> {
    let l = |n: u64| Line(1, n);
    let (p, fricke): (u64, Vec<Line>) = match case_id {
        "5i" => (5, vec![l(0), l(1), l(4)]),
        "5ii" => (5, vec![l(0), l(2), l(3)]),
        "7i" => (7, vec![l(0), l(1), l(2), l(4)]),
        "7ii" => (7, vec![l(0), l(3), l(5), l(6)]),
        "7iii" => (7, Line::all(7)),
        "11" => (11, Line::all(11)),
        "13r0" | "13r1" | "13r2" | "13r3" => {
            // S_r: χ(n) = i^e with e = 3, 0, 1, 2 for r = 0..3 (χ(2) = i)
            let r = case_id.as_bytes()[3];
            let want = match r {
                b'0' => 3,
                b'1' => 0,
                b'2' => 1,
                _ => 2,
            };
            let mut v = vec![l(0)];
            v.extend((1..13).filter(|&n| log2_mod13(n) % 4 == want).map(l));
            (13, v)
        }
        _ => return Err(MoonshineError::UnknownCase(case_id.to_string())),
    };
    Ok(ClassStructure::from_fricke_lines(p, case_id, &fricke))
}

/// ±(a,c) is singular iff the line through (a,−c) is Fricke.
pub fn singular_cusps(cs: &ClassStructure) -> Vec<Cusp> {
    cusps(cs.p)
        .into_iter()
        .filter(|c| cs.is_fricke(c.a as i64, -(c.c as i64)) == Some(true))
        .collect()
}

/// Setwise stabilizer of the singular cusps in L₂(p).
pub fn fricke_stabilizer(cs: &ClassStructure) -> Result<Psl2pGroup, MoonshineError> {
    let sing: BTreeSet<Cusp> = singular_cusps(cs).into_iter().collect();
    let all = l2p(cs.p)?;
    Ok(
        Psl2pGroup::from_filter(cs.p, |m| sing.iter().all(|c| sing.contains(&m.act_cusp(c)))).map(
            |g| {
                debug_assert!(g.is_subgroup_of(&all));
                g
            },
        )?,
    )
}
