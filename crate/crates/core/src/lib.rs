//! Belief functions under the transferable belief model, and the tools built
//! on them.
//!
//! - [`belief`]: frames, mass functions, combination rules, conditioning,
//!   discounting and the pignistic transform.
//! - [`classifier`]: a nearest-case evidential classifier trained on partially
//!   labelled data.
//! - [`overlap`]: fusion of evidence expressed on frames that share only some
//!   labels.
//! - [`conflict`]: splitting a pool of sources into groups with low internal
//!   conflict.
//! - [`pas`]: degrees of support for documents in a citation graph.
//! - [`experiments`]: the simulated case studies and a linear discriminant
//!   baseline.
//!
//! ```
//! use tbm::{Frame, MassFunction};
//!
//! let frame = Frame::new(["rain", "sun"]).unwrap();
//! let a = MassFunction::simple_support(frame.clone(), frame.subset(["rain"]).unwrap(), 0.6).unwrap();
//! let b = MassFunction::simple_support(frame.clone(), frame.subset(["sun"]).unwrap(), 0.5).unwrap();
//! let ab = a.conjunctive(&b).unwrap();
//! assert!((ab.conflict() - 0.3).abs() < 1e-12);
//! ```

pub mod belief;
pub mod classifier;
pub mod cli;
pub mod conflict;
mod error;
pub mod experiments;
pub mod overlap;
pub mod pas;

pub use belief::{Frame, MassFunction, PignisticDistribution, Subset};
pub use error::{Error, Result};
