//! Solver library for two-player zero-sum games on finite graphs with
//! time-bounded parity objectives.
//!
//! The eight objective variants combine three switches: window parity (WP)
//! versus parity-response (PR), a fixed bound versus the existence of some
//! bound, and direct satisfaction versus satisfaction from some suffix on.
//! Fixed variants are solved by reduction to safety or co-Büchi games on a
//! product arena that tracks per-dimension window or request bookkeeping;
//! bounded variants go through the fixed solver at a threshold bound.
//! Membership of ultimately periodic plays can be checked directly against
//! the definitions, which gives an independent oracle for the solvers and
//! for strategy verification.

pub mod format;
pub mod game;
pub mod generators;
pub mod oracle;
pub mod product;
pub mod solvers;
pub mod strategy;

pub use game::{
    preceq, GameStructure, Lasso, Objective, ObjectiveKind, Player, ResponseKind, VertexId,
};
pub use product::{solve_bounded, solve_fixed, SolveOptions};
pub use solvers::{Region, SolveResult};
