pub mod builtins;
pub mod cli;
pub mod enrichment;
pub mod error;
pub(crate) mod fmt;
pub mod geometry;
pub mod iteration;
pub mod multimap;
pub mod oracle;

pub use error::{Error, Result};
pub use geometry::{CompactSet, Point};
pub use multimap::MultiMap;
