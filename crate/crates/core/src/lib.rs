//! Exact homology computations for surface bundles over surfaces.
//!
//! The crate computes fibering data for three families of 4-manifolds: the
//! Atiyah–Kodaira manifold, finite regular covers of products of surfaces,
//! and Salter's doubled punctured product. Each pipeline ends in a
//! [`FiberingCertificate`] listing the checks performed, the exact
//! dimensions computed and the geometric facts assumed as axioms.

pub mod akcert;
pub mod branchedcover;
pub mod certificate;
pub mod coverbundle;
pub mod error;
pub mod exactq;
pub mod homology;
pub mod prodring;
pub mod salter;
pub mod surfgroup;

pub use error::{Error, Result};
pub use certificate::{Check, CheckStatus, Conclusion, FiberingCertificate};
