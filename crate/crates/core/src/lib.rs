//! Construction, verification, and extension machinery for Steiner triple
//! systems and their bicolorings.
//!
//! The library builds triple systems (Bose, Skolem, and the doubling
//! construction), 1-factorizations of complete and complete bipartite graphs,
//! verifies strict bicolorings, enumerates the solutions of the count
//! equation governing extended bicolorings of doubled systems, filters them
//! with two sound elimination rules, extends colorings constructively or by
//! exhaustive search, and emits re-verifiable JSON certificates, including
//! chains of systems whose lower and upper chromatic numbers provably differ.
//!
//! Everything is deterministic: identical inputs produce byte-identical
//! certificates.

pub mod budget;
pub mod chain;
pub mod coloring;
pub mod design;
pub mod error;
pub mod exact_cover;
pub mod extension;
pub mod factorization;
pub mod fixtures;

pub use budget::Budget;
pub use chain::{advance_chain, seed_certificate, ChainAdvance, ChainRecord, ChiGapCertificate};
pub use coloring::{
    chromatic_bounds, enumerate_bicolorings, independence_number, max_colors_bound, pattern_of,
    verify_bicoloring, BicoloringReport, BicoloringViolation, ChromaticOutcome, Coloring,
    EnumerationResult, IndependenceResult, Pattern,
};
pub use design::{
    bose_construction, double, find_subsystem, skolem_construction, validate_sts,
    DoublingAssociation, StsViolation, SubsystemOutcome, SubsystemWitness, TripleSystem,
    ValidationReport,
};
pub use error::{Error, Result};
pub use extension::{
    counting_filter, enumerate_eq1_solutions, eq1_holds, filter_corollary2, search_extension,
    theorem3_eligible, theorem3_extend, theorem4_extend, trivial_doubling_colorings, CheckRecord,
    Corollary2Outcome, CountingVerdict, DoublingInput, ExtensionCertificate, ExtensionSearch,
    FactorProfile, SolutionVector, TrivialDoublingColorings,
};
pub use factorization::{
    bipartite_factorization, circle_factorization, recursive_split_factorization,
    theorem3_factorization, validate_factorization, FactorizationReport, FactorizationViolation,
    GraphKind, OneFactor, OneFactorization, SplitFactorization,
};
pub use fixtures::{Fixture, Theorem9Row};
