//! Finite R₀-algebras, their fated filters, and fuzzy fated filters
//! generalized through the `∈∨q_k` relation between fuzzy points and fuzzy
//! subsets.
//!
//! Everything is decided by exhaustive evaluation over the finite carrier
//! with exact rational grades. Quantifiers over a continuous threshold are
//! reduced to a finite grid of critical values (see
//! [`fuzzy::critical_thresholds`]).

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod crisp;
pub mod error;
pub mod filters;
pub mod fixtures;
pub mod fuzzy;
pub mod grade;
pub mod par;
pub mod report;
pub mod subset;
pub mod suite;
pub mod sweep;

pub use algebra::{ElementId, R0Algebra};
pub use error::{Error, Result};
pub use filters::{Analyzer, Notion};
pub use fuzzy::{FuzzyPoint, FuzzySubset};
pub use grade::{Grade, KParam, Rational};
pub use report::{CheckReport, Verdict, Witness};
pub use subset::CrispSubset;
