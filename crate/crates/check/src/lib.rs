//! Independent oracles for the core crate and the acceptance suite built on them.

pub mod acceptance;
pub mod oracle;
pub mod random;
