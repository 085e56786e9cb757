//! Replay of the pair-exclusion arguments: start from every (a,b) ≠ 0 in F_p²
//! and strike out pairs by closed-form rules over the class structure.
//!
//! Coordinates: u is the base twist, (a,b) the candidate pair, and L(v) =
//! v₀·u + v₁·(a,b) is the element with coordinates v in the new basis.

use super::dirichlet::dirichlet_char;
use super::structure::{build_class_structure, ClassStructure};
use super::MoonshineError;
use crate::exact::CycNum;
use std::collections::BTreeSet;

pub type Pair = (u64, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// (a,b) proportional to the base twist
    Phi,
    /// Fricke type of (a,b) must equal that of h
    Type,
    /// a = 0 or b = 0
    Axis,
    /// each L(v) must be nonzero with the type of v
    Shift(Vec<(i64, i64)>),
    /// det(u, (a,b)) must lie in the identity block
    Norm,
    /// L(a,b) a nonzero multiple of e₁ while L(u) has nonzero first coordinate
    Thm2,
    /// (a,b) whose Z* partner is a conjugate of itself
    StarSelf,
    /// closure under (a,b) ~ n(a,b), n in the identity block
    Conj,
    /// closure under the Z* partner map
    StarClose,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Phi => "R-phi",
            Rule::Type => "R-type",
            Rule::Axis => "R-axis",
            Rule::Shift(_) => "R-shift",
            Rule::Norm => "R-norm",
            Rule::Thm2 => "R-thm2",
            Rule::StarSelf => "R-star-self",
            Rule::Conj => "R-conj",
            Rule::StarClose => "R-star",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionConfig {
    pub case_id: String,
    pub base: (i64, i64),
    pub rules: Vec<Rule>,
    /// (a,b) ↦ (s·b, t·a)
    pub partner: Option<(i64, i64)>,
    /// order of the Dirichlet character whose kernel is the identity block
    pub char_order: u64,
}

pub fn exclusion_config(case_id: &str) -> Result<ExclusionConfig, MoonshineError> {
    use Rule::*;
    let cfg = |base, rules, partner, n| ExclusionConfig {
        case_id: case_id.to_string(),
        base,
        rules,
        partner,
        char_order: n,
    };
    Ok(match case_id {
        "5i" => cfg(
            (2, 3),
            vec![Phi, Type, Shift(vec![(1, 1), (4, 1)]), Norm, Conj],
            None,
            2,
        ),
        "7i" => cfg(
            (3, 5),
            vec![Phi, Type, Shift(vec![(1, 1)]), Norm, Conj],
            None,
            2,
        ),
        "7iii" => cfg(
            (3, 5),
            vec![Phi, Axis, Thm2, StarSelf, Norm, Conj, StarClose],
            Some((-1, -2)),
            2,
        ),
        "11" => cfg(
            (1, 2),
            vec![Phi, Axis, Thm2, StarSelf, Norm, Conj, StarClose],
            Some((5, -2)),
            2,
        ),
        "13r1" => cfg(
            (11, 11),
            vec![Phi, Type, Shift(vec![(1, 1), (3, 1), (9, 1)]), Norm, Conj],
            None,
            4,
        ),
        _ => {
            return Err(MoonshineError::UnknownCase(format!(
                "no exclusion argument for case {case_id}"
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionResult {
    pub case_id: String,
    pub pairs: BTreeSet<Pair>,
    /// number of pairs each rule struck out, in rule order
    pub trace: Vec<(&'static str, usize)>,
    pub partner: Option<(i64, i64)>,
    pub p: u64,
}

impl ExclusionResult {
    pub fn partner_of(&self, (a, b): Pair) -> Option<Pair> {
        let (s, t) = self.partner?;
        let p = self.p as i64;
        Some((
            (s * b as i64).rem_euclid(p) as u64,
            (t * a as i64).rem_euclid(p) as u64,
        ))
    }
}

pub fn exclusion_search(
    case_id: &str,
    base: (i64, i64),
) -> Result<ExclusionResult, MoonshineError> {
    let mut cfg = exclusion_config(case_id)?;
    cfg.base = base;
    run_exclusion(&build_class_structure(case_id)?, &cfg)
}

pub fn run_exclusion(
    cs: &ClassStructure,
    cfg: &ExclusionConfig,
) -> Result<ExclusionResult, MoonshineError> {
    let p = cs.p as i64;
    let m = |x: i64| x.rem_euclid(p);
    let omega = CycNum::root_of_unity(cfg.char_order, 1);
    let ident: Vec<i64> = dirichlet_char(cs.p, cfg.char_order, &omega)?
        .kernel()
        .into_iter()
        .map(|x| x as i64)
        .collect();
    let u = cfg.base;
    let h_type = cs.is_fricke(0, 1);
    let partner = |(a, b): (i64, i64)| cfg.partner.map(|(s, t)| (m(s * b), m(t * a)));
    let all: Vec<(i64, i64)> = (0..p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();

    let mut excluded: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut trace = Vec::new();
    for rule in &cfg.rules {
        let before = excluded.len();
        match rule {
            Rule::Conj | Rule::StarClose => {}
            _ => {
                for &(a, b) in &all {
                    if excluded.contains(&(a, b)) {
                        continue;
                    }
                    let l = |v: (i64, i64)| (m(v.0 * u.0 + v.1 * a), m(v.0 * u.1 + v.1 * b));
                    let strike = match rule {
                        Rule::Phi => m(a * u.1 - b * u.0) == 0,
                        Rule::Type => cs.is_fricke(a, b) != h_type,
                        Rule::Axis => a == 0 || b == 0,
                        Rule::Shift(vs) => vs.iter().any(|&v| {
                            let w = l(v);
                            w == (0, 0) || cs.is_fricke(w.0, w.1) != cs.is_fricke(v.0, v.1)
                        }),
                        Rule::Norm => !ident.contains(&m(u.0 * b - u.1 * a)),
                        Rule::Thm2 => {
                            let w = l((a, b));
                            let x = l(u);
                            w.1 == 0 && w.0 != 0 && x.0 != 0
                        }
                        Rule::StarSelf => match partner((a, b)) {
                            Some(q) => ident.iter().any(|n| (m(n * a), m(n * b)) == q),
                            None => false,
                        },
                        Rule::Conj | Rule::StarClose => unreachable!(),
                    };
                    if strike {
                        excluded.insert((a, b));
                    }
                }
            }
        }
        trace.push((rule.tag(), before));
    }
    // closures to a fixed point
    let conj = cfg.rules.contains(&Rule::Conj);
    let star = cfg.rules.contains(&Rule::StarClose);
    loop {
        let mut next = excluded.clone();
        for &(a, b) in &excluded {
            if conj {
                next.extend(ident.iter().map(|n| (m(n * a), m(n * b))));
            }
            if star {
                next.extend(partner((a, b)));
            }
        }
        if next == excluded {
            break;
        }
        excluded = next;
    }
    // turn cumulative counts into per-rule counts; closures get what they added
    let mut counts = Vec::new();
    for (i, (tag, before)) in trace.iter().enumerate() {
        let after = trace.get(i + 1).map_or(excluded.len(), |t| t.1);
        counts.push((*tag, after - before));
    }
    let pairs: BTreeSet<Pair> = all
        .iter()
        .filter(|v| !excluded.contains(v))
        .map(|&(a, b)| (a as u64, b as u64))
        .collect();
    if pairs.is_empty() {
        return Err(MoonshineError::EmptyExclusion(cfg.case_id.clone()));
    }
    Ok(ExclusionResult {
        case_id: cfg.case_id.clone(),
        pairs,
        trace: counts,
        partner: cfg.partner,
        p: cs.p,
    })
}

pub fn format_pairs<'a>(pairs: impl IntoIterator<Item = &'a Pair>) -> String {
    let v: Vec<String> = pairs
        .into_iter()
        .map(|(a, b)| format!("({a},{b})"))
        .collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

/// Parse `(a,b),(c,d)` or `-` (empty).
pub fn parse_pairs(text: &str) -> Option<BTreeSet<Pair>> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "-" {
        return Some(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for chunk in t.split("),") {
        let inner = chunk.trim_start_matches('(').trim_end_matches(')');
        let (a, b) = inner.split_once(',')?;
        out.insert((a.parse().ok()?, b.parse().ok()?));
    }
    Some(out)
}
