//! Parabolic Higgs bundles in local charts: levels `E_β`, graded pieces,
//! residues and horizontal weight filtrations.

pub mod chart;
pub mod fixtures;
pub mod lattice;
pub mod monodromy;

pub use chart::{
    constancy_audit, graded_piece, horizontal_weight_filtration, level_representative, BaseDirection,
    ChartComponent, ComponentKind, ConstancyReport, DivisorComponent, DivisorModel, GradedPiece,
    HorizontalFiltration, LineWeights, ParabolicChart,
};
pub use lattice::{Coord, Lattice};
pub use monodromy::{monodromy_from_weight, weight_from_monodromy, MonodromyDatum};
