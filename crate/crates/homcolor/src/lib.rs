//! Exact structure-constant kernel for graded (color) Hom-algebras.
//!
//! Presentations store products as sparse structure constants over an
//! exact scalar tower. Every identity is checked by evaluating its defect
//! on all basis tuples and testing the result for zero.

pub mod algebra;
pub mod constructions;
pub mod error;
pub mod format;
pub mod grading;
pub mod identities;
pub mod linalg;
pub mod matched_pair;
pub mod report;
pub mod representations;
pub mod scalar;
pub mod scan;

pub use algebra::{is_morphism, AlgebraPresentation, BilinearProduct, EvenLinearMap, GradedSpace};
pub use error::{Error, Result, ScalarError};
pub use grading::{validate_commutation_factor, AbelianGroupSpec, Bicharacter, GradingContext, GroupElement};
pub use identities::{check_gi_identities, check_identity, run_suite, IdentityId, RoleMap, StructureKind};
pub use linalg::{Matrix, Vector};
pub use matched_pair::MatchedPairData;
pub use report::{CheckReport, Outcome, SuiteReport, Verdict, Witness};
pub use representations::{check_bimodule, pullback_bundle, regular_bundle, ActionBundle, ActionRole, BimoduleKind};
pub use scalar::{Scalar, ScalarContext, Symbol};
pub use scan::CheckOptions;
