pub mod cli;
pub mod diagram;
pub mod error;
pub mod freeprob;
pub mod gjs;
pub mod graphk;
pub mod linalg;
pub mod scalar;
pub mod tl;

pub use diagram::TLDiagram;
pub use error::{Error, Result};
pub use gjs::{BoxShape, Convention, GJSElement};
pub use scalar::{DeltaSpec, Scalar};
pub use tl::TLElement;
