//! Association schemes of Frobenius groups and their combinatorial twins.
//!
//! The crate builds schemes of Frobenius permutation groups with abelian
//! kernel, computes intersection tensors and coherent closures, checks the
//! 4-condition, reconstructs isomorphisms from base triples, decides the
//! arithmetic separability criteria, produces translation-plane spread
//! schemes, and certifies the Weisfeiler-Leman dimension of Frobenius
//! circulants.

pub mod algiso;
pub mod autsearch;
pub mod fingerprint;
pub mod frobenius;
pub mod generators;
pub mod numtheory;
pub mod parabolic;
pub mod par;
pub mod perm;
pub mod scheme;
pub mod tcond;
pub mod verify;
pub mod wl;

pub use par::Execution;
pub use perm::{PermGroup, Permutation};
pub use scheme::{IntersectionTensor, Scheme};
