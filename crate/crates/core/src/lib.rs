//! Clustering of directional data with mixtures of von Mises-Fisher
//! distributions whose directional means are sparsified by an l1 penalty.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: log-scale modified Bessel functions, the Bessel ratio
//!   `A_d(κ)` and its inverse, and the vMF log-normaliser.
//! - [`vmf`]: a single vMF distribution (density, weighted MLE, sampling).
//! - [`dataset`]: observation matrices (dense or sparse), file formats and
//!   the planted-structure simulator.
//! - [`em`]: the penalised EM algorithm with soft-thresholded means.
//! - [`path`]: regularisation-path following over the penalty `β`.
//! - [`selection`]: information criteria and the two-stage model selection.
//! - [`skmeans`]: the spherical k-means baseline.
//! - [`metrics`]: ARI, sparsity, support precision/recall, overlap.
//! - [`viz`]: dimension/row orderings and pixel-map rendering.
//! - [`model_io`]: JSON persistence of fitted models.

pub mod dataset;
pub mod em;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod model_io;
pub mod path;
pub mod rng;
pub mod selection;
pub mod skmeans;
pub mod special;
pub mod viz;
pub mod vmf;

pub use dataset::{Dataset, GroundTruth, Separation, SimulationConfig};
pub use em::{
    FitOptions, FitResult, FitStatus, KappaMode, Kappas, MixtureParams, Responsibilities,
};
pub use error::{Error, Result};
pub use path::{PathOptions, PathResult, PathStep, Termination};
pub use selection::{Criterion, CriterionKind, IcValues, SelectionConfig, SelectionReport};
pub use skmeans::SkResult;
pub use vmf::{VmfParams, KAPPA_CAP};
