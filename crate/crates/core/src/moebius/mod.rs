//! Linear-fractional self-maps of the unit disk.

mod classify;
mod map;
mod membership;
mod structure;

pub use classify::{
    AutomorphismKind, AutomorphismOrder, BoundaryFixedPoint, CanonicalDecomposition, MapClass,
    Tolerances,
};
pub(crate) use map::check_unit;
pub use map::LinearFractionalMap;
pub use membership::{
    essential_norm_lower_bounds, membership, membership_with, Membership, MembershipCertificate,
};
pub use structure::{
    shift_algebra_structure, shift_algebra_structure_with, StructureReport, StructureRow,
};
