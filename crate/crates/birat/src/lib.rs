//! Exact-arithmetic construction of Geiser and Bertini involutions on del Pezzo
//! surfaces of degrees 3 and 4 over the rationals, and factorization of
//! birational selfmaps of minimal cubic surfaces into these involutions.

pub mod blowup;
pub mod error;
pub mod groebner;
pub mod involution;
pub mod io;
pub mod linalg;
pub mod linsys;
pub mod maps;
pub mod mpoly;
pub mod nf;
pub mod rat;
pub mod sarkisov;
pub mod scheme;
pub mod upoly;

pub use error::Error;
