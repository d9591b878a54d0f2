//! p-local invariants of finite permutation groups.
//!
//! Groups are enumerated in full. On top of the basic subgroup machinery the
//! crate computes Sylow structure, control of fusion, the orbit poset of
//! elementary abelian subgroups, the ρ-series, the chain subgroup `R ≤ N_G(S)`
//! whose quotient is the fundamental group of the orbit category, character
//! groups `Hom(N/J, k^×)`, weak S-homomorphisms, and explicit metacyclic
//! p-groups.

pub mod abelian;
pub mod battery;
pub mod characters;
pub mod error;
pub mod fusion;
pub mod group;
pub mod groupfile;
pub mod local;
pub mod metacyclic;
pub mod numtheory;
pub mod perm;
pub mod quotient;
pub mod report;
pub mod rho;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};
pub use local::{PGroupClass, PGroupKind, PLocalContext};
pub use perm::Permutation;
pub use quotient::QuotientGroup;
