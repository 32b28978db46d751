//! Numerical toolkit for studying how optimization problems respond to
//! perturbation, through the geometry of epigraphs and hypographs.
//!
//! The building blocks are extended-real arithmetic ([`ExtReal`]), block
//! max-norms ([`NormSpec`]), finite point clouds with excess and truncated
//! Hausdorff distances ([`PointCloud`]), and extended-real functions
//! tabulated on uniform grids ([`GriddedFunction`]). On top of those sit
//! parametric problem embeddings ([`RockafellianModel`]), their Lagrangians
//! and dual functions, and a harness that evaluates both sides of the
//! quantitative stability inequalities relating them ([`bounds`]).

// `!(x >= 0.0)` is the intended guard: it also rejects NaN radii.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cloud;
pub mod extreal;
pub mod grid;
pub mod lagrangian;
pub mod norm;
pub mod rockafellian;

pub use cloud::PointCloud;
pub use extreal::ExtReal;
pub use grid::{GridSpec, GriddedFunction};
pub use norm::NormSpec;
pub use rockafellian::RockafellianModel;
