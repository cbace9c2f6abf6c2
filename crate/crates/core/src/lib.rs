//! Spectral and structural tools for r-uniform hypergraphs.
//!
//! The central quantity is the p-spectral radius
//! `ρ_p(G) = max { L_G(x) : x ≥ 0, ‖x‖_p = 1 }` of the Lagrangian
//! `L_G(x) = r!·Σ_{e∈E} Π_{v∈e} x_v`. Around it sit the combinatorial notions
//! used to study extremal values of `ρ_p` over hereditary families: k-tightness,
//! k-bridges, λ-plateaus, cloning, blow-ups and saturation.

pub mod error;
pub mod hypergraph;
pub mod spectral;
pub mod families;
pub mod structure;
pub mod report;
pub mod experiments;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, VertexSet};
pub use spectral::{solve_rho_p, SolverConfig, SpectralSolution, WeightVector};
pub use structure::IntegerPartition;
