//! Weighted composition operators on positive cones of function spaces.
//!
//! The crate models positive cones of continuous functions over two
//! desk-scale spaces (finite discrete sets with exact rational arithmetic,
//! and the real line with piecewise-linear functions), builds the weighted
//! composition operators `Tf(y) = h(y) * f(tau(y))` that act on them, and
//! provides three kinds of tooling around the norm-additive condition
//! `||T(f+g)|| = ||Tf + Tg||`:
//!
//! * [`verification`] - property checkers that exercise a black-box map
//!   oracle (norm additivity, order isomorphism, disjointness preservation,
//!   boundedness, Lipschitz continuity) with replayable counterexample
//!   witnesses;
//! * [`recovery`] - a constructive procedure that, given only oracle
//!   access, localizes the underlying point map by support-intersection
//!   probing, extracts the weight with plateau probes, and certifies the
//!   recovered representation against fresh samples;
//! * [`bruteforce`] - an independent exhaustive check on tiny grid-valued
//!   cones: enumerate all bijections, keep the norm-additive ones, and
//!   classify them against the weighted-composition (monomial) form.

pub mod bruteforce;
pub mod cone;
pub mod error;
pub mod fixtures;
pub mod operators;
pub mod polyline;
pub mod recovery;
pub mod scalar;
pub mod space;
pub mod verification;

pub use cone::{disjoint, pointwise_min, ConeFunction, ConeFunctionJson, Cozero, PlFunction, Support};
pub use error::{CheckError, ConeError, GridError, OperatorError, OracleError, RecoveryError};
pub use scalar::Scalar;
pub use space::{DiscreteSpace, PlLineSpace, Point, SpaceDescriptor};
