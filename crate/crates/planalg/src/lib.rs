//! Exact engine for planar diagram algebras.
//!
//! Two families of finite-dimensional algebras are implemented over the
//! exact coefficient ring of Laurent polynomials in the loop parameters
//! `a`, `b` with rational coefficients: the single-strand planar matching
//! algebras and their two-color refinement whose strands carry the colors
//! `a` and `b`. On top of the diagram bases the crate provides stacking
//! multiplication, the normalized trace and its Gram forms, numeric
//! positivity scans with root detection, the tower of inclusions with its
//! branching graphs, and a small planar-tangle calculus that evaluates
//! multilinear diagram operations.

pub mod algebra;
pub mod cells;
pub mod diagram;
pub mod error;
pub mod scalar;
pub mod selftest;
pub mod tangle;
pub mod trace;

pub use algebra::{
    check_relations, intermediate_p, jones_e, random_element, AlgebraElement, RelationCheck,
};
pub use cells::{
    bratteli, cell_dimensions, export_dot, half_diagrams, path_counts, CellLabel, HalfDiagram,
    PrincipalGraph,
};
pub use diagram::{dimension, enumerate, fc_color, Color, Diagram, Family, LoopCount};
pub use error::{Error, Result};
pub use scalar::ParamScalar;
pub use selftest::{run_all, run_criterion, CriterionOutcome, CRITERION_COUNT};
pub use tangle::{
    conditional_expectation, identity_tangle, inclusion, jones_projection, multiplication,
    random_inputs_for, random_tangle_tree, rotation, unit, HoleSpec, PlanarTangle, Point,
    TangleDiagnostic, TangleTree,
};
pub use trace::{
    gram_matrix, markov_property_check, markov_trace, positivity_scan, quantization_detect,
    GramMatrix, ScanPoint,
};
