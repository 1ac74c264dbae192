//! Exact arithmetic in H = D8² × C2^m, the permutations `x`, `y`, `z` of H,
//! and the checks built on them: fixed-point identities, orbit and block
//! computations, stabilizer chains, and local structure of the Cayley graph
//! on the group they generate.

pub mod action;
pub mod cayley;
pub mod error;
pub mod group;
pub mod lemmas;
pub mod perm;
pub mod permgroup;

pub use action::{ActionWord, Actions, Atom};
pub use error::{Error, Result};
pub use group::{GroupParams, HElem, Subgroup};
pub use perm::{Perm, Sign};
