//! Input files, exports, reports and the command line for scatter network
//! analysis. The algorithms live in `scatter-core`.

pub mod cli;
pub mod export;
pub mod load;
pub mod report;
pub mod tsv;

pub use load::{load, Dataset, InputDigest, LoadError};
