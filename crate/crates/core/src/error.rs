use thiserror::Error;

/// Errors produced by model construction, coordinate maps and solvers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Q is not reducible to a canonical sinusoidal form: {0}")]
    NonCanonical(String),

    #[error("degree pair (m = {m}, n = {n}) is outside the generated range (m, n <= 2)")]
    Unsupported { m: usize, n: usize },

    #[error("x = {x} lies outside the open domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("z = {z} lies outside the image of the coordinate map")]
    OutOfImage { z: f64 },

    #[error("unknown preset id `{0}`")]
    UnknownPreset(String),

    #[error("preset `{preset}`: parameter `{name}` = {value} violates `{constraint}`")]
    Constraint {
        preset: String,
        name: String,
        value: f64,
        constraint: String,
    },

    #[error("preset `{preset}` has no parameter `{name}`")]
    UnknownParam { preset: String, name: String },

    #[error("grid needs at least {min} points, got {got}")]
    GridTooCoarse { got: usize, min: usize },

    #[error("exact ladder requested for a model with A2 != 0")]
    NotExactlySolvable,

    #[error("eigensolver did not converge on a {n}x{n} block")]
    EigensolveFailed { n: usize },

    #[error("{0}")]
    InvalidInput(String),
}
