pub mod error;
pub mod modarith;
pub mod sum;

pub use error::{Error, Result};
pub use sum::{Accumulator, UnitRootSum};
pub mod hsums;

pub use hsums::{HSumRequest, IndexData, Sign};
pub mod bessel;
pub mod jacobiforms;

pub use jacobiforms::{FourierTable, LaurentSeries};
pub mod petersson;

pub use petersson::{PeterssonJob, TruncatedSide};
pub mod iwaniec;
pub mod tolerances;
pub mod verify;
