//! Document formats, batch scanning and command implementations behind the
//! `abelmap` binary.

pub mod commands;
pub mod document;
pub mod scan;
