//! Lyapunov functionals in Fourier space and the pointwise decay certificate.

pub mod catalog;
pub mod certify;
pub mod functional;
pub mod params;

pub use catalog::{catalog, identity_residual, IdentityEntry, Term, IDENTITY_TOL};
pub use certify::{certify, standard_suite, DecayCertificate};
pub use params::{select_lambdas, Derived, LyapunovParams};
