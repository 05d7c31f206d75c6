//! Special unipotent representations of complex simple groups, computed
//! combinatorially: nilpotent orbit duality, integral root subsystems,
//! Springer labels and b-invariants, and verification against reference tables.

pub mod classical;
pub mod excdata;
pub mod exec;
pub mod partitions;
pub mod pipeline;
pub mod rootsys;
pub mod springer;

pub use partitions::{ClassicalFamily, Letter, Partition};
