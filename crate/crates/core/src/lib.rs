//! Exact certification of polynomial inequalities for the Cayley-Menger
//! determinant on simplices of the pseudo-tetrahedron space.

pub mod anticert;
pub mod cases;
pub mod cayley_menger;
pub mod chambers;
pub mod dominance;
pub mod error;
pub mod lengthening;
pub mod linalg;
pub mod poly;
pub mod pullback;

pub use error::{Error, Result};
