//! Permutation groups on `0..degree`: orbits, block systems, stabilizer
//! chains and recognition of alternating groups.

pub mod blocks;
pub mod bsgs;
pub mod giant;
pub mod orbits;
mod random;

pub use blocks::{minimal_blocks, primitivity, BlockSystem, Primitivity};
pub use bsgs::{factorial, schreier_sims, BsgsChain, ChainMode, SchreierSimsConfig, Verification};
pub use giant::{certify_alternating, AltCertificate, CertifyConfig, CertifyMethod, Verdict};
pub use orbits::{orbit_of, orbits, orbits_by, restrict, OrbitPartition};
