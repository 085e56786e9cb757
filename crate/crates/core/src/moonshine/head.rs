//! Conjectural head-character expansions: q-coefficients as sums of irreducible
//! characters of the centralizer quotient.

use super::table::CharTable;
use super::MoonshineError;
use crate::exact::CycNum;
use crate::qseries::QSeries;
use num_rational::Rational64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    HN,
    He,
    M12,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Scheme, MoonshineError> {
        match s {
            "HN" => Ok(Scheme::HN),
            "He" => Ok(Scheme::He),
            "M12" => Ok(Scheme::M12),
            _ => Err(MoonshineError::UnknownScheme(s.to_string())),
        }
    }

    pub fn group(&self) -> &'static str {
        match self {
            Scheme::HN => "HN",
            Scheme::He => "He",
            Scheme::M12 => "M12",
        }
    }

    /// (multiplicity, ATLAS character number) for q¹ … q⁵.
    pub fn terms(&self) -> [&'static [(i64, usize)]; 5] {
        match self {
            Scheme::HN => [
                &[(1, 1), (1, 3)],
                &[(1, 4)],
                &[(1, 1), (1, 5)],
                &[(1, 1), (1, 2), (1, 5), (1, 6)],
                &[(1, 1), (1, 2), (1, 4), (1, 5), (1, 11)],
            ],
            Scheme::He => [
                &[(1, 2)],
                &[(1, 3), (1, 4)],
                &[(1, 1), (1, 6)],
                &[(1, 1), (1, 6), (1, 11)],
                &[(1, 1), (1, 2), (1, 3), (1, 6), (1, 14)],
            ],
            Scheme::M12 => [
                &[(1, 1), (1, 4)],
                &[(1, 1), (1, 6)],
                &[(1, 1), (1, 4), (1, 6), (1, 7)],
                &[(1, 1), (2, 5), (1, 6), (1, 7), (1, 13)],
                &[
                    (2, 1),
                    (2, 4),
                    (1, 5),
                    (2, 6),
                    (2, 7),
                    (1, 11),
                    (1, 12),
                    (1, 13),
                ],
            ],
        }
    }
}

/// q⁻¹ + 0 + Σ_{n=1}^{5} a_n q^n + O(q⁶).
pub fn head_char_expansion(
    table: &CharTable,
    class_name: &str,
    scheme: Scheme,
) -> Result<QSeries, MoonshineError> {
    if table.group != scheme.group() {
        return Err(MoonshineError::SchemeMismatch {
            scheme: scheme.group().into(),
            group: table.group.clone(),
        });
    }
    let c = table.class_index(class_name)?;
    let mut terms = BTreeMap::new();
    terms.insert(-1, CycNum::one());
    for (n, line) in scheme.terms().iter().enumerate() {
        let mut acc = CycNum::zero();
        for &(mult, j) in line.iter() {
            acc = &acc + &(table.value(j, c)? * &CycNum::from_int(mult));
        }
        terms.insert(n as i64 + 1, acc);
    }
    Ok(QSeries::from_parts(
        1,
        terms,
        Some(Rational64::from_integer(6)),
    ))
}
