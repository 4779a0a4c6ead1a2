//! Basic belief assignments on finite frames and their algebra: belief,
//! plausibility, pignistic probabilities, conjunctive and disjunctive
//! combination, conditioning and discounting.

mod frame;
pub mod json;
mod mass;

pub use frame::{Frame, Subset, MAX_FRAME_SIZE};
pub use mass::{combine_all, MassFunction, PignisticDistribution, SUM_TOLERANCE};
