//! Instance generators.

mod mcc;
mod random;

pub use mcc::{reduce_mcc, verify_reduction_properties, MccInstance, ReductionArtifacts, ReductionReport};
pub use random::{gen_random, DeletionPolicy, GeneratedInstance, RandomGenConfig};
