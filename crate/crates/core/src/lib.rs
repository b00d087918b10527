//! Exact zeta functions and Möbius inversion.
//!
//! The crate covers incidence algebras of locally finite posets, Dirichlet
//! arithmetic over ℚ and quadratic fields, Hasse–Weil zeta functions of
//! varieties over finite fields, zeta functions of arithmetic schemes and
//! the incidence (co)algebra of discrete decomposition spaces. Every value is
//! an exact rational; nothing is evaluated in floating point.

pub mod arith;
pub mod arithscheme;
pub mod exact;
pub mod ffgeom;
pub mod linalg;
pub mod poly;
pub mod poset;
pub mod series;
pub mod simplicial;
pub mod verify;

pub use exact::Rational;
pub use series::{DirichletCoefficients, PowerSeries, RationalFunction};
