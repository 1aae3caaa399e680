//! Crate-wide error type.

use crate::diagram::Family;

/// Errors reported by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("cannot parse scalar {input:?}: {reason}")]
    ScalarParse { input: String, reason: String },

    #[error("evaluation point must be positive and finite, got a = {a}, b = {b}")]
    NonPositivePoint { a: f64, b: f64 },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("family mismatch: {0} vs {1}")]
    FamilyMismatch(Family, Family),

    #[error("generator index {index} out of range at level {n}")]
    GeneratorIndex { index: usize, n: usize },

    #[error("operation requires family {required}, got {got}")]
    WrongFamily { required: Family, got: Family },

    #[error("basis dimension {dim} exceeds the supported bound {bound}")]
    DimensionGuard { dim: usize, bound: usize },

    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),

    #[error("invalid tangle: {0}")]
    InvalidTangle(String),

    #[error("tangle has no hole with index {index} ({holes} holes)")]
    HoleIndex { index: usize, holes: usize },

    #[error("hole {index} has arity {expected}, got input of level {got}")]
    ArityMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("tower graph inconsistent at level {level}, vertex {label}: stored dimension {stored}, path count {computed}")]
    InconsistentGraph {
        level: usize,
        label: String,
        stored: usize,
        computed: u64,
    },

    #[error("tangle has {holes} holes but {inputs} inputs were provided")]
    InputCount { holes: usize, inputs: usize },

    #[error("malformed element: {0}")]
    MalformedElement(String),
}

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
