//! Max-Cut approximation by signless threshold dynamics.
//!
//! Given a simple undirected weighted graph, this crate approximates a
//! maximum cut by alternating short-time diffusion under a *signless* graph
//! Laplacian with pointwise thresholding to +1/-1 (an MBO scheme). Signless
//! diffusion damps everything except near-bipartition structure, so the
//! thresholded iterates settle into large cuts.
//!
//! The pieces:
//! - [`graph`]: CSR graphs, edge-list ingestion, cuts, inner products.
//! - [`operators`]: matrix-free (signless) Laplacians, gradient/divergence.
//! - [`functionals`]: Ginzburg-Landau energies and total variations.
//! - [`spectra`]: eigenpairs of the signless Laplacians (Lanczos + dense).
//! - [`diffusion`]: spectral, explicit-Euler, and implicit-Euler solvers for
//!   `du/dt = -L+ u`.
//! - [`mbo`]: the threshold-dynamics loop, pinning bound, multi-seed driver.
//! - [`generators`]: Erdos-Renyi, modular, and reweighting generators.
//! - [`oracle`]: exact brute-force Max-Cut, random and greedy baselines.
//!
//! Everything numeric is generic over the [`Scalar`] float type; the aliases
//! below fix `f64`, which is what the command-line tool uses.

// `!(x > 0)`-style comparisons reject NaN along with the out-of-range values;
// the "clearer" rewrites clippy suggests would let NaN through. Float match
// guards stay because float literal patterns are not allowed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::redundant_guards)]

pub mod diffusion;
pub mod functionals;
pub mod generators;
pub mod graph;
pub mod mbo;
pub mod operators;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod spectra;

pub use graph::{
    cut_from_function, cut_size_via_laplacian, degree_distribution, inner_product_v,
    load_edge_list, Cut, Graph, GraphError, LoadedGraph, MergePolicy, NodeFunction,
};
pub use operators::{
    apply, divergence, gradient, inner_product_e, rayleigh, signless_divergence, signless_gradient,
    EdgeFunction, OperatorKind,
};
pub use scalar::Scalar;

/// Concrete `f64` aliases for the main domain types.
pub type GraphF64 = graph::Graph<f64>;
pub type NodeFunctionF64 = graph::NodeFunction<f64>;
pub type CutF64 = graph::Cut<f64>;
pub type EdgeFunctionF64 = operators::EdgeFunction<f64>;
pub type SpectralBasisF64 = spectra::SpectralBasis<f64>;
pub type MboConfigF64 = mbo::MboConfig<f64>;
pub type MboTraceF64 = mbo::MboTrace<f64>;

/// Concrete `f32` aliases; handy when memory outweighs the extra digits.
pub type GraphF32 = graph::Graph<f32>;
pub type NodeFunctionF32 = graph::NodeFunction<f32>;
pub type CutF32 = graph::Cut<f32>;
