//! Finite prefixes of graph coverings of zero-dimensional systems.
//!
//! A covering `G_0 ← G_1 ← … ← G_N` is stored as a [`covering::CoveringPrefix`].
//! Figure-8 towers (KR and GM) add circuit structure on top
//! ([`structured`]), ordered Bratteli diagrams live in [`bratteli`], and the
//! array codings of natural-extension points in [`symbolic`].

pub mod bratteli;
pub mod covering;
pub mod graph;
pub mod structured;
pub mod symbolic;
pub mod towers;
pub mod transform;
