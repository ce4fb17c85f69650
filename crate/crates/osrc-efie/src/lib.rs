//! Boundary-integral toolkit for electromagnetic scattering by perfect
//! conductors, centred on On-Surface-Radiation-Condition (OSRC)
//! preconditioning of the Electric Field Integral Equation.
//!
//! The crate provides four layers that can be used independently:
//!
//! * analytic machinery on the sphere: Riccati-Bessel/Hankel functions
//!   ([`special`]), rotated-branch-cut Pade approximants of the operator
//!   square roots ([`pade`]) and closed-form eigenvalue sweeps for every
//!   formulation of interest ([`spectrum`]);
//! * a desk-scale Galerkin boundary-element solver: triangle meshes and
//!   RWG/SNC spaces ([`mesh`], [`rwg`]), dense EFIE/double-layer assembly and
//!   the sparse surface matrices ([`bem`], [`quadrature`]);
//! * the refinement-free MtE preconditioner applied matrix-free through
//!   cached sparse factorizations ([`osrc`], [`sparse`]) and a full GMRES
//!   driver ([`gmres`], [`solve`]);
//! * a Mie-series reference solution and far-field evaluation for
//!   validation ([`mie`], [`farfield`]).

pub mod bem;
pub mod farfield;
pub mod gmres;
pub mod mesh;
pub mod mie;
pub mod osrc;
pub mod pade;
pub mod quadrature;
pub mod rwg;
pub mod solve;
pub mod sparse;
pub mod special;
pub mod spectrum;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderOverflow { order: usize, max: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("singular evaluation: pole hit at term {term} ({context})")]
    SingularEvaluation { term: usize, context: String },
    #[error("singular mode m={mode}: {context}")]
    SingularMode { mode: usize, context: String },
    #[error("mesh topology error: {0}")]
    Topology(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("missing dependency: {0}")]
    Dependency(String),
    #[error("factorization failed for block {block}: {context}")]
    Factorization { block: String, context: String },
    #[error("solver breakdown: {0}")]
    Breakdown(String),
    #[error("far-field direction sets differ: {0}")]
    DirectionMismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
