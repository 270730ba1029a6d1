//! Abelian covers of surfaces, generating pairs and the numerical bounds on
//! the degree of the canonical map.

pub mod abgroup;
pub mod bounds;
pub mod canmap;
pub mod catalog;
pub mod cover;
pub mod error;
pub mod expr;
pub mod genpair;
pub mod picard;
pub mod run;

pub use error::{Error, Result};
