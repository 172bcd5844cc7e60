//! Reference algebras and fuzzy subsets shipped with the crate.

use crate::algebra::R0Algebra;
use crate::fuzzy::FuzzySubset;

pub const EXAMPLE34_ALG: &str = include_str!("../fixtures/example34.alg");
pub const BOOLEAN2_ALG: &str = include_str!("../fixtures/boolean2.alg");
pub const MU34_FZ: &str = include_str!("../fixtures/mu34.fz");
pub const NU34_FZ: &str = include_str!("../fixtures/nu34.fz");
pub const MU315_FZ: &str = include_str!("../fixtures/mu315.fz");

/// The six-element chain `0 < a < b < c < d < 1`.
pub fn example34() -> R0Algebra {
    R0Algebra::parse(EXAMPLE34_ALG).expect("bundled fixture parses")
}

pub fn boolean2() -> R0Algebra {
    R0Algebra::parse(BOOLEAN2_ALG).expect("bundled fixture parses")
}

/// Strong at `k = 2/5`.
pub fn mu34(algebra: &R0Algebra) -> FuzzySubset {
    FuzzySubset::parse(algebra, MU34_FZ).expect("bundled fixture parses")
}

/// Plain but not strong at `k = 1/5`.
pub fn nu34(algebra: &R0Algebra) -> FuzzySubset {
    FuzzySubset::parse(algebra, NU34_FZ).expect("bundled fixture parses")
}

/// Passes at `k = 2/5`, fails at `k = 3/10`.
pub fn mu315(algebra: &R0Algebra) -> FuzzySubset {
    FuzzySubset::parse(algebra, MU315_FZ).expect("bundled fixture parses")
}
