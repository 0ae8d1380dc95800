pub mod analysis;
pub mod document;
pub mod duality;
pub mod error;
pub mod functions;
pub mod lp;
pub mod numeric;
pub mod sets;

pub use error::{Error, Result};
