//! Quasimodular forms on Gamma0(N) with exact arithmetic, and detection of
//! primes through MacMahon-type partition functions.
//!
//! Series kernels are generic over the coefficient [`Ring`]; the aliases below
//! name the three instantiations used throughout.

pub mod arith;
pub mod characters;
pub mod detect;
pub mod eisenstein;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod newforms;
pub mod qseries;
pub mod quasimodular;
pub mod scalar;

pub use error::{Error, HeckeRelation, Result};
pub use exact::{CycNumber, Rational};
pub use qseries::{EtaProduct, QSeries};
pub use scalar::{Field, Ring};

pub type IntSeries = QSeries<num_bigint::BigInt>;
pub type RationalSeries = QSeries<Rational>;
pub type CycSeries = QSeries<CycNumber>;
