//! The V-filtration at a crossing of two vertical branches, nearby cycles
//! and the Koszul comparison.

pub mod fixture;
pub mod koszul;
pub mod nearby;

pub use fixture::{random_crossing_fixture, CrossingFixture, Summand, SummandKind};
pub use koszul::{
    build_comparison_map, koszul_cohomology, verify_qis, CheckStatus, CohomologyEntry, CohomologyTable,
    ComparisonMap, KoszulComplex, QisReport,
};
pub use nearby::{compare_routes, nearby_cycles, v_generate, GraphModule, NearbyCycles, Route, RouteComparison};
