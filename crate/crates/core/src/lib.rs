//! Exact computational group theory engine for centralizer-finiteness
//! checks: Dedekind groups, power automorphisms, cyclic extensions
//! `⟨g⟩ ⋉ D`, and truncation-ladder probes of infinite groups.

pub mod abelian;
pub mod dedekind;
pub mod error;
pub mod extension;
pub mod group;
pub mod padic;
pub mod pauto;
pub mod verify;

pub use error::{Error, Result};
