//! Differential characters on finite simplicial complexes, in exact
//! arithmetic.
//!
//! A character of degree `k` is represented by a spark `(a, R)`: a rational
//! `k`-cochain `a` and an integral `(k+1)`-cocycle `R`, with curvature
//! `φ = δa + R`. Two sparks are equivalent when they differ by
//! `(δb - S, δS)` with `b` rational and `S` integral; holonomy is `a(z) mod 1`
//! on integral cycles.

pub mod characters;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod hodge;
pub mod linalg;
pub mod lowdeg;
pub mod morse;
pub mod scalar;
pub mod spark;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use complex::{Chain, Cochain, SimplicialComplex};
pub use error::{Error, Result};
pub use scalar::{Field, Ring};

pub type IntCochain = Cochain<BigInt>;
pub type RatCochain = Cochain<BigRational>;
pub type RealCochain = Cochain<f64>;
pub type IntChain = Chain<BigInt>;

pub type ExactHodge = hodge::HodgeContext<BigRational>;
pub type FloatHodge = hodge::HodgeContext<f64>;
