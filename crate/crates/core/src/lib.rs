//! Exact umbral calculus on finite sequences and polynomials.

pub mod conv;
pub mod duality;
pub mod error;
pub mod matrix;
pub mod pairing;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod umbral;

pub use conv::{binom_convolve, conv_invert, conv_matrix, creation_matrix, Seq};
pub use duality::{VandermondeReport, WronskianForm};
pub use error::{Error, Result};
pub use matrix::LowerTriMatrix;
pub use poly::Poly;
pub use roots::{ComplexPoly, Strip, VerificationReport};
pub use scalar::Scalar;
pub use series::PowerSeries;
pub use umbral::{Curve, DeltaOp, NamedOp, UmbralStructure};
