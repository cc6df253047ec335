//! Finite topological preordered spaces and discrete causal structure.
//!
//! The crate is organised bottom-up:
//!
//! * [`bitset`], [`relation`], [`topology`], [`space`] — point sets,
//!   relations, preorders, finite (Alexandrov) topologies and the hull
//!   operators `i`, `d`, `I`, `D` and the convex hull.
//! * [`props`] — exact decision procedures (T1/T2-preordered, normally and
//!   regularly preordered, the convexity hierarchy, I-/C-spaces) with
//!   witnesses.
//! * [`closure`] — smallest closed preorders and isotone-function
//!   enumeration.
//! * [`separation`] — constructive Urysohn separation with exact dyadic
//!   values and the complete-regularity decision.
//! * [`qpmetric`] — quasi-pseudo-metric synthesis and admissibility checks.
//! * [`grid`] — (1+1)-dimensional cone grids: causal reachability, cone
//!   widening, the causality ladder.
//! * [`lab`] — enumeration, random instances, theorem checks and
//!   counterexample search.
//! * [`format`] — the JSON instance, relation and grid file formats.

pub mod bitset;
pub mod closure;
pub mod error;
pub mod exact;
pub mod format;
pub mod grid;
pub mod lab;
pub mod props;
pub mod qpmetric;
pub mod relation;
pub mod separation;
pub mod space;
pub mod topology;

pub use bitset::PointSet;
pub use error::{Error, Result};
pub use props::{ConvexityKind, PropertyReport, Witness};
pub use relation::{Preorder, Relation};
pub use space::{Direction, PreorderedSpace};
pub use topology::FiniteTopology;
