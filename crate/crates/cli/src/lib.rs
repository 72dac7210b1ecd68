//! Pieces of the `role-embed` command line that are worth testing on their
//! own: SVG scatter plots, repeated clustering experiments, cached distance
//! computation and all-or-nothing output files.

pub mod experiment;
pub mod outputs;
pub mod pipeline;
pub mod plot;
