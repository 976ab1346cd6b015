//! Spatial preferential attachment (SPA) random graphs.
//!
//! Vertices arrive one at a time at uniform positions on the unit torus.
//! Every existing vertex owns a sphere of influence whose volume grows with
//! its in-degree and shrinks with time; a newcomer that lands inside a
//! sphere links to its owner with probability `p`.
//!
//! The crate provides:
//!
//! * [`model`]: parameters, the seeded random stream and the quadratic
//!   reference generator;
//! * [`fast`]: the bucketed heavy/light generator, which produces exactly
//!   the same graph in sub-quadratic time;
//! * [`clustering`]: directed and undirected local clustering, degree
//!   aggregates and the old/new decomposition;
//! * [`theory`]: estimators for degree trajectories, tail exponents,
//!   out-degree and `c/d` fits;
//! * [`io`]: the lossless graph file format and CSV schemas;
//! * [`experiments`]: sweeps, scatter export and the runtime benchmark;
//! * [`oracle`]: brute-force reference computations for small graphs.
//!
//! ```
//! use spa::{generate, GenerationMode, ModelParams};
//!
//! let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0)?.with_seed(1);
//! let fast = generate(&params, 2_000, GenerationMode::Fast)?;
//! let naive = generate(&params, 2_000, GenerationMode::Naive)?;
//! assert_eq!(fast, naive);
//! # Ok::<(), spa::SpaError>(())
//! ```

pub mod clustering;
pub mod error;
pub mod experiments;
pub mod fast;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod theory;

pub use clustering::{ClusteringReport, SplitRule};
pub use error::{Result, SpaError};
pub use geometry::NormKind;
pub use graph::{Edge, SpaGraph, VertexId};
pub use model::{generate, generate_with_stats, GenerationMode, ModelParams, RngStream};
