//! Random recursive trees and Kingman's coalescent: samplers, exact
//! small-size enumeration, limit-law formulas and Monte Carlo experiments.

pub mod coalescent;
pub mod empirical;
pub mod error;
pub mod limits;
pub mod oracle;
pub mod rng;
pub mod tree;

pub use coalescent::{CoalescentChain, Merge, SelectionRecord, TruncatedSelection};
pub use error::{Error, Result};
pub use tree::{grow_rrt, Label, RecursiveTree, VertexStats};
