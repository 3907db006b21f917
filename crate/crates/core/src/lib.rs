//! Mirror ascent boosting.
//!
//! Boosting viewed as mirror ascent on the distribution over training
//! samples: each round takes a step in the dual space of a Bregman potential
//! along the weak hypothesis' loss vector and projects back onto a
//! constraint set. Choosing the potential and the set recovers AdaBoost-like
//! multiplicative updates, Euclidean projected updates, smooth (capped)
//! distributions, sparse distributions and a MadaBoost variant, each with a
//! training-error bound that [`bounds`] evaluates in closed form.
//!
//! ```
//! use maboost::{boost, data, GeometryKind};
//!
//! let ds = data::gen_diagonal(0, 60, 0.2).unwrap();
//! let config = boost::BoosterConfig::new(boost::Algorithm::MaBoostActive, GeometryKind::NegativeEntropy)
//!     .rounds(50);
//! let run = boost::run(&config, &ds).unwrap();
//! for r in &run.rounds {
//!     assert!(r.train_error <= r.bound + maboost::bounds::BOUND_SLACK);
//! }
//! ```

// Comparisons like `!(x >= 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boost;
pub mod bounds;
pub mod data;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod projection;
pub mod rng;
pub mod weaklearn;

pub use boost::{
    Algorithm, AlphaMode, BoostRun, BoosterConfig, Ensemble, MadaEta, RoundTrace, StopReason,
};
pub use data::{Dataset, Subset};
pub use error::{Error, Result};
pub use geometry::{Divergence, Geometry, GeometryKind};
pub use projection::ConstraintSet;
pub use weaklearn::{LossVector, Stump};
