pub mod angle;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod special_fn;

pub use error::{Error, Result};
