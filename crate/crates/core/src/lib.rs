//! Gelfand-Tsetlin modules for quantum and classical gl(n), generic and
//! singular, with exact verification of their defining identities.

pub mod error;
pub mod exactalg;
pub mod tableaux;
pub mod action;
pub mod gtcenter;
pub mod verify;

pub use error::{Error, Result};
