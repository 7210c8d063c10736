//! Fixtures shared by the benchmarks in `benches/`.

use finvar_core::constructions::{build_action_algebra, star};
use finvar_core::groups::FiniteGroup;
use finvar_core::FiniteAlgebra;

/// A(S3)* for the natural action on three points.
pub fn s3_star() -> FiniteAlgebra {
    let (g, act) = FiniteGroup::symmetric(3);
    let a = build_action_algebra(&g, &act).expect("S3 action");
    star(&a.algebra).expect("star of A(S3)").algebra
}
