//! The enumerated class-structure cases: generators, relations, hauptmoduls.

use super::head::Scheme;
use super::MoonshineError;
use crate::modgroup::{
    check_relations, parse_generator, parse_word, reduce_generators, GroupElt, Psl2pElt,
    Psl2pGroup, RelationResult,
};
use std::collections::BTreeMap;

pub const B25: &str = "eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)";
pub const A25: &str = "eta[0/5]*eta[1/5]*eta[4/5] / (eta[2/5]*eta[3/5]*eta(25)) + (1 + sqrt5)";
pub const A49: &str = "eta[0/7]*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 + (1/2 - i*sqrt7/2)";
pub const B49: &str = "eta[0/7]*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 + i*sqrt7/2)";
pub const Z77: &str = "eta[0/7]*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 \
    + i*sqrt7*eta(49)*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 - i*sqrt7/2)";
pub const Z77_STAR: &str = "eta[0/7]*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 \
    - i*sqrt7*eta(49)*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 + (1/2 + i*sqrt7/2)";

/// A generating set for a fixing group mod Γ(p), with the presentation it should satisfy.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    /// "" for the main set, otherwise a suffix for check ids
    pub label: &'static str,
    pub gens: &'static [&'static str],
    /// short names defined as words over generator names and earlier aliases
    pub aliases: &'static [(&'static str, &'static str)],
    pub relations: &'static [&'static str],
}

#[derive(Debug, Clone)]
pub struct Hauptmodul {
    pub label: &'static str,
    /// eta-quotient DSL; None when only the head-character series is known
    pub dsl: Option<&'static str>,
    /// generators of the θ-conjugated fixing group for the numeric check
    pub invariance: &'static [&'static str],
    pub head: Option<(Scheme, &'static str)>,
    /// (label, k): this series is galois(·, k) of another
    pub galois_of: Option<(&'static str, i64)>,
}

#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub id: &'static str,
    pub p: u64,
    pub generator_sets: Vec<GeneratorSet>,
    pub hauptmoduls: Vec<Hauptmodul>,
    /// (source case, k): this case's group is the *k image of the source's
    pub star_from: Option<(&'static str, i64)>,
}

const REL_5: &[&str] = &["alpha^3", "delta^2", "(alpha*delta)^2"];
const REL_7: &[&str] = &["beta^3", "alpha^2", "(beta*alpha)^3"];
const REL_S4: &[&str] = &[
    "alpha1^2",
    "alpha2^2",
    "alpha3^2",
    "(alpha1*alpha2)^3",
    "(alpha2*alpha3)^3",
    "(alpha3*alpha1)^2",
];
const REL_S4_B: &[&str] = &["beta1^2", "beta2^3", "(beta1*beta2)^4"];
const REL_A5: &[&str] = &[
    "alpha1^2",
    "alpha2^2",
    "alpha3^2",
    "(alpha1*alpha2)^3",
    "(alpha1*alpha3)^2",
    "(alpha2*alpha3)^5",
    "(alpha1*alpha2*alpha3)^5",
];
const REL_13: &[&str] = &["Delta^3", "alpha^2", "(Delta*alpha)^3"];

fn set(
    label: &'static str,
    gens: &'static [&'static str],
    aliases: &'static [(&'static str, &'static str)],
    relations: &'static [&'static str],
) -> GeneratorSet {
    GeneratorSet {
        label,
        gens,
        aliases,
        relations,
    }
}

fn haupt(
    label: &'static str,
    dsl: Option<&'static str>,
    invariance: &'static [&'static str],
    head: Option<(Scheme, &'static str)>,
    galois_of: Option<(&'static str, i64)>,
) -> Hauptmodul {
    Hauptmodul {
        label,
        dsl,
        invariance,
        head,
        galois_of,
    }
}

pub fn case_spec(id: &str) -> Result<CaseSpec, MoonshineError> {
    let c = |id, p, generator_sets, hauptmoduls, star_from| CaseSpec {
        id,
        p,
        generator_sets,
        hauptmoduls,
        star_from,
    };
    Ok(match id {
        "5i" => c(
            "5i",
            5,
            vec![set(
                "",
                &["delta_5", "alpha_5i"],
                &[("alpha", "alpha_5i"), ("delta", "delta_5")],
                REL_5,
            )],
            vec![haupt(
                "25b",
                Some(B25),
                &["delta_5_tilde", "alpha_5i_tilde"],
                Some((Scheme::HN, "5C")),
                None,
            )],
            None,
        ),
        "5ii" => c(
            "5ii",
            5,
            vec![set(
                "",
                &["delta_5", "alpha_5ii"],
                &[("alpha", "alpha_5ii"), ("delta", "delta_5")],
                REL_5,
            )],
            vec![haupt(
                "25a",
                Some(A25),
                &["delta_5_tilde", "alpha_5ii_tilde"],
                Some((Scheme::HN, "5D")),
                Some(("25b", 2)),
            )],
            Some(("5i", 2)),
        ),
        "7i" => c(
            "7i",
            7,
            vec![set(
                "",
                &["delta_7", "alpha_7i"],
                &[
                    ("alpha", "alpha_7i"),
                    ("delta", "delta_7"),
                    ("beta", "delta*alpha^-1"),
                ],
                REL_7,
            )],
            vec![haupt(
                "49a",
                Some(A49),
                &["delta_7_tilde", "alpha_7i_tilde"],
                Some((Scheme::He, "7E")),
                None,
            )],
            None,
        ),
        "7ii" => c(
            "7ii",
            7,
            vec![set(
                "",
                &["delta_7", "alpha_7ii"],
                &[
                    ("alpha", "alpha_7ii"),
                    ("delta", "delta_7"),
                    ("beta", "delta*alpha^-1"),
                ],
                REL_7,
            )],
            vec![haupt(
                "49b",
                Some(B49),
                &["delta_7_tilde", "alpha_7ii_tilde"],
                Some((Scheme::He, "7D")),
                Some(("49a", -1)),
            )],
            Some(("7i", -1)),
        ),
        "7iii" => c(
            "7iii",
            7,
            vec![
                set(
                    "",
                    &["delta_7", "alpha_7i", "S"],
                    &[
                        ("alpha1", "alpha_7i*S"),
                        ("alpha2", "delta_7*S"),
                        ("alpha3", "S"),
                    ],
                    REL_S4,
                ),
                set(
                    "_prime",
                    &["delta_7", "alpha_7iii_prime", "S"],
                    &[("beta1", "S"), ("beta2", "S*alpha_7iii_prime")],
                    REL_S4_B,
                ),
            ],
            vec![
                haupt(
                    "77",
                    Some(Z77),
                    &["delta_7_tilde", "alpha_7i_tilde", "S_tilde"],
                    Some((Scheme::He, "7A")),
                    None,
                ),
                haupt(
                    "77star",
                    Some(Z77_STAR),
                    &["delta_7_tilde", "alpha_7ii_tilde", "S_tilde"],
                    Some((Scheme::He, "7B")),
                    Some(("77", -1)),
                ),
            ],
            None,
        ),
        "11" => c(
            "11",
            11,
            vec![
                set(
                    "",
                    &["delta_11", "alpha_11", "S"],
                    &[
                        ("alpha1", "delta_11*S*alpha_11"),
                        ("alpha2", "S"),
                        ("alpha3", "alpha_11"),
                    ],
                    REL_A5,
                ),
                set(
                    "_prime",
                    &["delta_11", "alpha_11_prime", "S"],
                    // the presentation is stated for α only
                    &[],
                    &[],
                ),
            ],
            vec![
                haupt("11A", None, &[], Some((Scheme::M12, "11A")), None),
                haupt(
                    "11B",
                    None,
                    &[],
                    Some((Scheme::M12, "11B")),
                    Some(("11A", -1)),
                ),
            ],
            None,
        ),
        "13r0" => c(
            "13r0",
            13,
            vec![set(
                "",
                &["Delta_13", "alpha_13r0"],
                &[("Delta", "Delta_13"), ("alpha", "alpha_13r0")],
                REL_13,
            )],
            vec![],
            None,
        ),
        "13r1" => c(
            "13r1",
            13,
            vec![set(
                "",
                &["Delta_13", "alpha_13r1"],
                &[("Delta", "Delta_13"), ("alpha", "alpha_13r1")],
                REL_13,
            )],
            vec![],
            None,
        ),
        "13r2" => c(
            "13r2",
            13,
            vec![set(
                "",
                &["Delta_13", "alpha_13r2"],
                &[("Delta", "Delta_13"), ("alpha", "alpha_13r2")],
                REL_13,
            )],
            vec![],
            None,
        ),
        "13r3" => c(
            "13r3",
            13,
            vec![set(
                "",
                &["Delta_13", "alpha_13r3"],
                &[("Delta", "Delta_13"), ("alpha", "alpha_13r3")],
                REL_13,
            )],
            vec![],
            None,
        ),
        _ => return Err(MoonshineError::UnknownCase(id.to_string())),
    })
}

impl GeneratorSet {
    pub fn elements(&self, p: u64) -> Result<Vec<GroupElt>, MoonshineError> {
        Ok(self
            .gens
            .iter()
            .map(|g| parse_generator(g, Some(p)))
            .collect::<Result<_, _>>()?)
    }

    pub fn reduced(&self, p: u64) -> Result<Vec<Psl2pElt>, MoonshineError> {
        Ok(reduce_generators(&self.elements(p)?, p)?)
    }

    pub fn group(&self, p: u64) -> Result<Psl2pGroup, MoonshineError> {
        Ok(Psl2pGroup::generate(p, &self.reduced(p)?)?)
    }

    /// Name table for the relation words: generators, then aliases in order.
    pub fn names(&self, p: u64) -> Result<BTreeMap<String, Psl2pElt>, MoonshineError> {
        let mut names = BTreeMap::new();
        for (g, x) in self.gens.iter().zip(self.reduced(p)?) {
            names.insert(g.to_string(), x);
        }
        for (alias, word) in self.aliases {
            let x = parse_word(word)?.eval(p, &names)?;
            names.insert(alias.to_string(), x);
        }
        Ok(names)
    }

    pub fn check_relations(&self, p: u64) -> Result<Vec<RelationResult>, MoonshineError> {
        Ok(check_relations(p, &self.names(p)?, self.relations)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{genus, GroupName};
    use crate::moonshine::structure::CASE_IDS;

    #[test]
    fn quotients_and_relations() {
        let want = [
            ("5i", 6, GroupName::Dihedral(3)),
            ("5ii", 6, GroupName::Dihedral(3)),
            ("7i", 12, GroupName::A4),
            ("7ii", 12, GroupName::A4),
            ("7iii", 24, GroupName::S4),
            ("11", 60, GroupName::A5),
            ("13r0", 12, GroupName::A4),
            ("13r3", 12, GroupName::A4),
        ];
        for (id, n, name) in want {
            let spec = case_spec(id).unwrap();
            for s in &spec.generator_sets {
                let g = s.group(spec.p).unwrap();
                assert_eq!(g.order(), n, "{id}{}", s.label);
                assert_eq!(g.identify(), name, "{id}{}", s.label);
                for r in s.check_relations(spec.p).unwrap() {
                    assert!(
                        r.holds,
                        "{id}{}: {} has order {}",
                        s.label, r.relation, r.order
                    );
                }
            }
        }
    }

    #[test]
    fn every_case_has_a_spec() {
        for id in CASE_IDS {
            let spec = case_spec(id).unwrap();
            let g = spec.generator_sets[0].group(spec.p).unwrap();
            let gd = genus(&g).unwrap();
            let want = if id.starts_with("13") { 3 } else { 0 };
            assert_eq!(gd.genus, want, "{id}");
        }
        assert!(case_spec("13rX").is_err());
    }
}
