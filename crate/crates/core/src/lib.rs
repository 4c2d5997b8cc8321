//! Weighted path metrics on normed domains and numerical certification of
//! Bloch-type / Lipschitz-type semi-norm identities.
//!
//! The crate computes:
//!
//! * path lengths and path Riemann integrals over polylines ([`paths`]),
//! * ω-lengths and ω-distances (conformal geodesic distances) for positive
//!   continuous weight functions, via projected polyline descent with an
//!   independent grid-graph oracle ([`omega`]),
//! * Fréchet differential operator norms and metric upper derivatives
//!   ([`derivatives`]),
//! * operator monotone functions on (−1, 1) in closed form or as finite-atom
//!   Nevanlinna representations ([`om`]),
//! * Bloch numbers, Lipschitz numbers, the admissible-function catalogue, and
//!   equality certificates for the two semi-norms ([`seminorms`]).
//!
//! Everything randomized is seeded and deterministic: the same inputs and the
//! same seed reproduce results bit for bit.

pub mod corpus;
pub mod derivatives;
pub mod error;
pub mod geometry;
pub mod om;
pub mod omega;
pub mod paths;
pub mod report;
pub(crate) mod sampling;
pub mod seminorms;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{ConvexDomain, NormSpec, Vector};
pub use paths::{Partition, Polyline};
pub use weights::{Monotonicity, Weight};
