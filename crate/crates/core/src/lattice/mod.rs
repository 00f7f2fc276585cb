//! Finite bounded distributive lattices.

mod dlattice;
mod expr;
mod la;
mod present;

pub use dlattice::{DLattice, LatElem, LatticeHom};
pub use expr::{normalize, parse_expr, parse_query, LatExpr, NormalForm, Query};
pub use la::{build_la, check_la_axioms, induced_hom, Violation, LA};
pub use present::{
    free_lattice, CongruenceQuotient, PresentedLattice, Presentation, PresentationSpec, MAX_CONGRUENCE_GENERATORS,
    MAX_GENERATORS,
};
