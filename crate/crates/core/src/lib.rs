//! Functional digraphs and their semiring.
//!
//! A functional digraph is a finite digraph in which every vertex has exactly
//! one out-neighbour, i.e. an endofunction on a finite set. Up to isomorphism,
//! with disjoint union as sum and the direct product as product, these form a
//! commutative semiring with the empty digraph as zero and the loop `C1` as one.
//!
//! The crate provides:
//!
//! - [`FunctionalDigraph`] with structural queries (components, cyclic part,
//!   heights, truncation) and a complete [`CanonicalForm`];
//! - the semiring operations and cycle arithmetic in [`algebra`];
//! - enumeration of all digraphs of a given size up to isomorphism in
//!   [`enumerate`];
//! - divisibility, quotient search and irreducibility in [`division`];
//! - constructive non-primality witnesses in [`witness`]: for every digraph
//!   `X != C1` a triple `(A, B, Y)` with `XY = AB`, `X ∤ A` and `X ∤ B`;
//! - the invariant suites behind `fungraph check-lemmas` in [`checks`].

pub mod algebra;
mod canonical;
pub mod checks;
mod digraph;
pub mod division;
pub mod enumerate;
mod error;
pub mod witness;

pub use algebra::SumOfCycles;
pub use canonical::CanonicalForm;
pub use digraph::{Component, FunctionalDigraph, HeightProfile, IsoMap};
pub use error::{Error, Result};

/// Three-valued answer for searches that may be cut off by a size bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}
