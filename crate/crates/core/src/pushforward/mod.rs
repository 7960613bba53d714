//! Fiberwise hypercohomology of the `L²` complex on smooth and nodal
//! fibers, higher direct image tables and the Gauss–Manin Higgs field.

pub mod complex;
pub mod curve;
pub mod family;
pub mod fixtures;
pub mod sheaf;
pub mod theta;

pub use curve::{Branch, CurveComponent, Marking, NodalCurve, Node, Point};
pub use sheaf::{curve_cohomology, CurveCohomology, LineSummand, Poly, PolyMatrix, SheafMap, SheafModel, SheafOnNodalCurve};
pub use complex::{connecting_map, fiber_hypercohomology, ConnectingMap, FiberCohomology, SheafComplex, TotalComplex};
pub use family::{
    direct_image_table, duality_audit, fiber_data, log_canonical, periodicity_audit, DualityReport, FamilyFixture,
    FiberComplexData, FiberSample, PeriodicityReport, PushforwardReport, SampleRow,
};
pub use theta::{gauss_manin_theta, GaussManinDatum, GraphCheck};
