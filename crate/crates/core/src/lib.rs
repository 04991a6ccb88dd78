pub mod ansatz;
pub mod cli;
pub mod error;
pub mod gabor;
pub mod graph;
pub mod io;
pub mod numerics;
pub mod pipeline;
pub mod sdp;

pub use error::{Error, Result};
