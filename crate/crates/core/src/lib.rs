//! HillPathJump fitness functions, a seeded (1+1) EA, and the runtime model
//! that predicts the optimal mutation rate.
//!
//! - [`graypath`]: gray codes and the block-expanded path, indexed implicitly.
//! - [`fitness`]: instances and `O(n)` fitness evaluation.
//! - [`ea`]: the (1+1) EA with hitting-time instrumentation.
//! - [`theory`]: `g_a`, `q_a`, the optimal rate constant and runtime predictions.
//! - [`oracle`]: brute-force references for small `n`.
//! - [`harness`]: mutation-rate sweeps and CSV/JSON reports.

pub mod bits;
pub mod ea;
pub mod error;
pub mod fitness;
pub mod graypath;
pub mod harness;
pub mod oracle;
pub mod roots;
pub mod theory;

pub use bits::BitString;
pub use error::{Error, Result};
pub use fitness::{Fitness, Instance, PathIndex, PathLength};
