//! Five-vectors as differential-algebraic operators, frames, curves and commutators.

mod axioms;
mod commutator;
mod curve;
mod frame;
mod vector;

pub use axioms::{check_five_axioms, check_operator, default_axiom_probes, Axiom, AxiomViolation};
pub use commutator::{
    commutation_constants, commutator, is_coordinate_basis, Clause, CommutationTable, CoordinateWitness, Table,
};
pub use curve::{curve_equivalence, from_curve, ParametrizedCurve, Relation, EQUIVALENCE_TOL};
pub use frame::{change_basis, eta, symmetry_transform, Flavor, Frame, Mat5};
pub use vector::{
    apply, decompose, equivalence_class, FiveVector, FiveVectorField, FourVector, FourVectorField, FIFTH, LABELS,
};
pub(crate) use vector::vector_ops;
