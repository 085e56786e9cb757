//! Class structures, singular cusps, fixing-group verification, character
//! tables and the replay of the pair-exclusion arguments.

pub mod cases;
pub mod dirichlet;
pub mod exclusion;
pub mod head;
pub mod structure;
pub mod table;
pub mod verify;

pub use cases::{case_spec, CaseSpec, GeneratorSet, Hauptmodul};
pub use dirichlet::{dirichlet_char, gauss_sum, legendre, primitive_root, DirichletChar};
pub use exclusion::{
    exclusion_config, exclusion_search, run_exclusion, ExclusionConfig, ExclusionResult, Pair, Rule,
};
pub use head::{head_char_expansion, Scheme};
pub use structure::{
    build_class_structure, fricke_stabilizer, singular_cusps, ClassStructure, Line, CASE_IDS,
};
pub use table::{
    classify_powers, load_char_table, parse_char_table, CharTable, ClassInfo, PowerClasses,
};
pub use verify::{
    default_data_dir, load_tables, verify_all, verify_case, verify_common, Check, Expectations,
    Report, Status, TableSet, VerifyOptions,
};

use crate::exact::ExactError;
use crate::modgroup::GroupError;
use crate::qseries::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoonshineError {
    #[error("unknown case '{0}'")]
    UnknownCase(String),
    #[error("unknown head-character scheme '{0}'")]
    UnknownScheme(String),
    #[error("character table, line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("{group}: characters {i} and {j} are not orthogonal")]
    Orthogonality { group: String, i: usize, j: usize },
    #[error("power map: {0}")]
    PowerMap(String),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("class {class} has order {order}, not an odd prime")]
    NotOrderP { class: String, order: u64 },
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("character: {0}")]
    BadCharacter(String),
    #[error("scheme {scheme} does not apply to group {group}")]
    SchemeMismatch { scheme: String, group: String },
    #[error("exclusion search for {0} left no pairs")]
    EmptyExclusion(String),
    #[error("expectations, line {line}: {msg}")]
    Expectations { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
