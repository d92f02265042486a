//! Trinomials `x^n + x^s + 1` over GF(2) that have one irreducible, or
//! primitive, factor of large degree `r` and a small cofactor of degree `δ = n - r`.

pub mod ait;
pub mod apt;
pub mod density;
pub mod error;
pub mod implicit;
pub mod numtheory;
pub mod poly;
pub mod record;
pub mod swan;

pub use error::{Error, Result};
pub use poly::{DensePoly, Trinomial};
