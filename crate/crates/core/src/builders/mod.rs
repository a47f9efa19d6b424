//! Constructors for standard examples and random instances.

pub mod basic;
pub mod fixtures;
pub mod groups;
pub mod presheaf;
pub mod random;
pub mod semigroup;
