//! Construction and verification of 2-saturating sets on elliptic quadrics in
//! `PG(3,q)`, together with the family of upper bounds on the length function
//! `l_q(3t+1, 3)` that such sets imply for covering codes of radius 3.
//!
//! The crate is organized around the pipeline:
//!
//! * [`field`] -- exact arithmetic in `GF(p^h)` with deterministic modulus
//!   selection, so point enumerations are reproducible across runs.
//! * [`pg3`] -- points, lines and planes of `PG(3,q)` with dense integer
//!   indexing and closed-form rank/unrank.
//! * [`quadric`] -- the elliptic quadric `Q`, its plane sections and the
//!   (q+1)-arc intersection trichotomy.
//! * [`saturator`] -- the iterative greedy construction of 2-saturating
//!   subsets of `Q`, plus exhaustive verification.
//! * [`bounds`] -- Bounds A-E on `l_q(4,3)`, the known-bound comparison,
//!   threshold constants, and the lift lengths for codimension `r = 3t+1`.
//! * [`codes`] -- the parity-check side of the correspondence: minimum
//!   distance and covering radius checks at exhaustive scale.
//! * [`setfile`] -- the plain-text set file format shared by the CLI tools.

mod bits;
pub mod bounds;
pub mod codes;
pub mod field;
pub mod pg3;
pub mod quadric;
pub mod saturator;
pub mod setfile;
