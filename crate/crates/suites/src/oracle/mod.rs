//! Reference implementations. None of them calls an evaluator, search or
//! construction from the core library; they only read its data types.

pub mod atm;
pub mod circuit;
pub mod per;
pub mod qbf;
pub mod team;
