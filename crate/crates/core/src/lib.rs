//! Structural role embeddings for graph nodes.
//!
//! Nodes are compared by the ordered degree sequences of their hop rings,
//! aligned with FastDTW under a relative degree cost. The resulting
//! dissimilarity matrix is embedded in `d` dimensions by stress
//! majorization. Nodes with identical role profiles end up on top of each
//! other.
//!
//! ```
//! use role_embed::{distance_matrix, embed, gen_barbell, DistanceConfig, SolverConfig};
//!
//! let g = gen_barbell(4, 3).unwrap();
//! let d = distance_matrix::<f64>(&g, &DistanceConfig::default()).unwrap();
//! let (x, trace) = embed(&d, &SolverConfig::default()).unwrap();
//! assert_eq!(x.n(), g.node_count());
//! assert!(trace.converged);
//! ```
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

pub mod distance;
pub mod dtw;
mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod io;
mod labels;
pub(crate) mod linalg;
pub mod matrix;
pub mod scalar;
pub mod solver;

pub use distance::{distance_matrix, structural_distance, DistanceConfig, HopWeights};
pub use dtw::{exact_dtw, fast_dtw, pair_cost, DegreeSequence};
pub use error::{Error, Result};
pub use eval::{ClassificationReport, ClusteringReport};
pub use generators::{barbell_roles, gen_barbell, gen_cycle_with_shapes, ShapeKind, ShapeSpec, ShapesConfig};
pub use graph::{diameter, khop_rings, load_edge_list, ordered_degree_sequence, Graph, HopRings, NodeIds};
pub use labels::LabeledDataset;
pub use linalg::top_eigenpairs;
pub use matrix::SquareMatrix;
pub use scalar::Scalar;
pub use solver::{embed, majorize_step, stress, surrogate, weighted_laplacian, Init, SolverConfig, SolverTrace};

/// Double-precision distance matrix.
pub type DistanceMatrix = matrix::DistanceMatrix<f64>;
/// Double-precision embedding.
pub type EmbeddingMatrix = solver::EmbeddingMatrix<f64>;
/// Single-precision embedding.
pub type EmbeddingMatrixF32 = solver::EmbeddingMatrix<f32>;
pub type Trace = SolverTrace<f64>;
