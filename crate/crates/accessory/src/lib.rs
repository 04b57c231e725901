//! Alexander polynomials, Blanchfield presentations and Arf invariants of
//! knots, computed from crossing changes and the loops through their double
//! points.
//!
//! The main entry point is [`pipeline::run`]. It takes an [`diagram::OrientedDiagram`],
//! picks an unknotting set, builds the framed double-point loops and returns
//! a hermitian matrix `Ψ` with `det Ψ ≐ Δ_K`. It also returns a Fox-calculus
//! cross-check.
//!
//! ```
//! use accessory::diagram::OrientedDiagram;
//! use accessory::pipeline::{run, PipelineOptions};
//!
//! let d = OrientedDiagram::parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]")?;
//! let report = run(&d, &PipelineOptions::default())?;
//! assert_eq!(report.arf, 1);
//! assert!(report.verdicts.all_pass());
//! # Ok::<(), accessory::Error>(())
//! ```
//!
//! The remaining modules are usable on their own:
//!
//! * [`laurent`]: exact polynomials and matrices over `Z[t, t⁻¹]`.
//! * [`diagram`]: PD and Gauss codes, signs, crossing changes.
//! * [`oracle`]: the Wirtinger presentation, Fox calculus and the Arf invariant from `Δ(-1)`.
//! * [`unknotting`]: descending and minimal unknotting sets with a simplifier certificate.
//! * [`tower`]: the loop construction and the matrices `Λ` and `Ψ`.
//! * [`omega`]: `Ω` assembled from tower intersection data.
//! * [`blanchfield`]: the linking form presented by a hermitian matrix.
//!
//! A longer guide lives in the `book/` directory of the repository.

pub mod blanchfield;
pub mod error;
pub mod diagram;
pub mod laurent;
pub mod omega;
pub mod oracle;
pub mod pipeline;
pub mod tower;
pub mod unknotting;

pub use error::{Error, Result};

/// The guide in `book/`, compiled here so that its examples run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/ch01-introduction.md")]
    pub mod ch01 {}
    #[doc = include_str!("../../../book/src/ch02-laurent.md")]
    pub mod ch02 {}
    #[doc = include_str!("../../../book/src/ch03-diagrams.md")]
    pub mod ch03 {}
    #[doc = include_str!("../../../book/src/ch04-oracle.md")]
    pub mod ch04 {}
    #[doc = include_str!("../../../book/src/ch05-unknotting.md")]
    pub mod ch05 {}
    #[doc = include_str!("../../../book/src/ch06-tower.md")]
    pub mod ch06 {}
    #[doc = include_str!("../../../book/src/ch07-omega.md")]
    pub mod ch07 {}
    #[doc = include_str!("../../../book/src/ch08-blanchfield.md")]
    pub mod ch08 {}
    #[doc = include_str!("../../../book/src/ch09-cli.md")]
    pub mod ch09 {}
}
