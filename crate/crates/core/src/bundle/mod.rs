//! The external spectrum over a finite poset of contexts.

mod diagram;
mod opens;
mod points;
mod pullback;
mod sier;

pub use diagram::{AlgebraSpec, ContextDiagram, DiagramSpec, InclusionSpec, PosetSpec};
pub(crate) use diagram::parse_edge_key;
pub use opens::{
    apply_fibre_map, check_frame, check_internal_frame, evaluate, external_opens, fibre_map, internal_frame, reround,
    ExternalOpen, FrameReport, InternalFrame, DEFAULT_MAX_OPENS,
};
pub use points::{
    check_colimit, check_point_conditions, colimit_lattice, covering_pairs, external_points, ideal_labels,
    point_specialization, points_over, points_via_top, ColimitCheck, SpectrumPoint,
};
pub use pullback::{check_pullback, pull_open, pullback, PullbackReport};
pub use sier::{
    check_opfibration_specialization, sier_ideal_at, sier_points, sier_points_over, sier_points_via_top,
    OpfibrationReport, SierPoint,
};
