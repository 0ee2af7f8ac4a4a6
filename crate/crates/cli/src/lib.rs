//! Support code for the `qmf` command-line tool.

pub mod form;

pub use form::{evaluate, parse, Form, FormError};
