//! Exact free, Boolean and monotone cumulants, with infinitesimal extensions.
//!
//! Two engines compute the same objects:
//!
//! * [`cumulants`] evaluates moment-cumulant formulas as sums over
//!   non-crossing, interval and irreducible partitions.
//! * [`shuffle`] works in the double tensor Hopf algebra, where the three
//!   cumulant families are logarithms of a character for the half-shuffle
//!   and convolution exponentials.
//!
//! Infinitesimal data rides along in the soul of a [`Grassmann`] number, so a
//! single computation over [`GScalar`] produces both the classical cumulants
//! (body) and their infinitesimal counterparts (soul).
//!
//! Everything is generic over [`Scalar`]; the aliases below fix the concrete
//! types used by the CLI.

pub mod convolve;
pub mod cumulants;
pub mod error;
pub mod laws;
pub mod partitions;
pub mod poly;
pub mod scalar;
pub mod shuffle;

pub use error::{Error, Result};
pub use laws::{CumulantFamily, Cumulants, Moments, Word, WordTable};
pub use partitions::{Partition, PartitionFamily};
pub use scalar::{Grassmann, Scalar};
pub use shuffle::Functional;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

/// Grassmann number `a + h*b` over the rationals.
pub type GScalar = Grassmann<Rational>;

/// Truncated infinitesimal law: moments with values in [`GScalar`].
pub type Law = Moments<GScalar>;

/// Grassmann-valued cumulant table tagged with its family.
pub type CumulantTable = Cumulants<GScalar>;

/// Functional on the double tensor algebra with [`GScalar`] values.
pub type GFunctional = Functional<GScalar>;
