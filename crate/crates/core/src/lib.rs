pub mod approx_renyi;
pub mod approx_shannon;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod exact1d;
pub mod exactnd;
pub mod ingest;
pub mod oracle;
pub mod partition;
pub mod persist;
pub mod points;
pub mod rangetree;
pub mod sweep1d;

pub use entropy::{ColorHistogram, ColorId, EntropyKind, EntropySummary, Order};
pub use error::{Error, Result};
pub use points::{ColoredPointSet, Point, QueryRect};
