//! Exact-arithmetic toolkit for constructing real numbers whose base-`b`
//! expansions accumulate zeros, together with certified digit prefixes of
//! their images under user-supplied smooth functions.
//!
//! The crate is organised around five subsystems:
//!
//! * [`digits`] — exact b-ary expansions of rationals, digit-frequency
//!   statistics, the auxiliary sets of finitely-expanding numbers and their
//!   "isolated trailing one" variants, and zero-run certificates.
//! * [`oracle`] — a small expression language for computable C¹ functions
//!   with symbolic derivatives, certified rational-interval evaluation and
//!   critical-point isolation.
//! * [`zigzag`] — the iterative constructions that emit certified digit
//!   prefixes of a point `x` such that the expansions of `x` and of the
//!   images `f_k(x)` are all dominated by zeros at certified checkpoints.
//! * [`cantor`] — the classical Cantor digit map, its symmetrisation, and
//!   the enriched, nowhere-constant variant assembled from self-similar
//!   copies, with exact truncation-level approximants.
//! * [`hausdorff`] — exact enumeration of zero-heavy words and certified
//!   cover-cost bounds witnessing that the zero-accumulating set has
//!   vanishing s-dimensional pre-measure at every scale.
//!
//! Everything on a certified path is exact: values are arbitrary-precision
//! rationals, enclosures are closed rational intervals, and transcendental
//! functions are evaluated with explicit remainder bounds. No floating
//! point is used anywhere.

pub mod cantor;
pub mod digits;
pub mod elementary;
pub mod error;
pub mod hausdorff;
pub mod interval;
pub mod oracle;
pub mod rational;
pub mod zigzag;

pub use error::Error;
pub use interval::RationalInterval;
pub use rational::Rational;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

