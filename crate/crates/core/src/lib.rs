//! Approximation operators on finite posets, induced by auxiliary relations.
//!
//! Given a poset `P` and an auxiliary relation `≺` on it, every subset `A` has a
//! lower approximation `lap(A) = {x ∈ A : ∃y ∈ A. y ≺ x}` and an upper
//! approximation `uap(A) = {x : s≺(x) ⊆ ↓A}`. This crate computes both, the
//! topologies they generate, the Scott topology, and checks the laws that relate
//! them over exhaustive or sampled scopes.
//!
//! ```
//! use std::sync::Arc;
//! use orderlab::{generate, AuxRelation, ElementSet, PosetKind};
//!
//! let c3 = Arc::new(generate(&PosetKind::Chain(3))?);
//! let r = AuxRelation::validate(c3.clone(), &[(0, 0), (0, 1), (0, 2), (1, 2)])?;
//! let a = ElementSet::parse(3, "1,2")?;
//! assert_eq!(r.lap(a).to_string(), "2");
//! assert_eq!(r.uap(ElementSet::parse(3, "0")?).to_string(), "0,1");
//! # Ok::<(), orderlab::Error>(())
//! ```
//!
//! Elements are indices `0..n`; subsets are [`ElementSet`] bit masks. Anything
//! that scans all subsets is limited to 24 elements, and directed-subset scans
//! to 20; windows into the symbolic [`families`] may have up to 128 elements.

pub mod approx;
pub mod auxrel;
pub mod budget;
pub mod closure;
pub mod error;
pub mod families;
pub mod generate;
pub mod harness;
pub mod io;
pub mod poset;
pub mod report;
pub mod set;
pub mod topology;

pub use approx::SubsetScope;
pub use auxrel::{enumerate_aux, sample_aux, AuxClass, AuxRelation};
pub use budget::Budget;
pub use error::{AuxAxiom, Error, OrderAxiom};
pub use families::{Family, FamilyElement};
pub use generate::{enumerate_posets, generate, PosetKind};
pub use poset::{Poset, RelationMode};
pub use report::{ApproxReport, ClosureReport, Report, Verdict, Witness};
pub use set::ElementSet;
pub use topology::{mu_topology, scott_topology, Topology, UpsetMode};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/auxiliary-relations.md")]
    mod auxiliary_relations {}
    #[doc = include_str!("../../../book/src/approximations.md")]
    mod approximations {}
    #[doc = include_str!("../../../book/src/topologies.md")]
    mod topologies {}
    #[doc = include_str!("../../../book/src/one-step-closure.md")]
    mod one_step_closure {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
