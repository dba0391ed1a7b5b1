//! Exact verification routines for birational rigidity of Fano 3-folds.

pub mod poly;
pub mod wps;
pub mod isolating;
pub mod tower;
pub mod dualgraph;
pub mod defect;
pub mod certificates;

pub use poly::{MPoly, PolyError, RatMatrix, Rational};
pub use wps::{FamilyTable, FanoFamily, WeightSystem};
pub use isolating::{IsolatingError, PointKind};
pub use tower::{SigmaTriple, TowerError, TowerGraph};
pub use dualgraph::{DualGraphError, GraphType, Singularity};
pub use defect::{BranchConfig, BranchSingularPoint, DefectError, DefectReport};
pub use certificates::{CertificateError, ConeData, DpInstance, FamilyVerdict, Status};
