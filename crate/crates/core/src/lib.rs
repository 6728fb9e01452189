//! Flip calculus on trivalent ribbon graphs.
//!
//! - [`ribbon`]: darts, rotations, punctures, canonical forms, file formats.
//! - [`moves`]: flips, shuffles and doe moves.
//! - [`groupoid`]: the edge-object fundamental groupoid, induced isomorphisms,
//!   puncture loops and mapping-class tables.
//! - [`farey`]: exact PSL₂(ℤ) arithmetic, the Farey tree as a dart torsor,
//!   the question-mark function and piecewise-PSL₂(ℤ) circle maps.
//! - [`explorer`]: enumeration, orbit exploration, relation certificates,
//!   coverings and unicyclic classification.

pub mod error;
pub mod explorer;
pub mod farey;
pub mod groupoid;
pub mod moves;
pub mod par;
pub mod ribbon;

pub use error::{Error, Result};
pub use ribbon::{CanonicalForm, Dart, MarkedGraph, RibbonGraph};
