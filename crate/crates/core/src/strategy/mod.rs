//! Cop and robber strategies.

pub mod continuous;
pub mod discrete;
