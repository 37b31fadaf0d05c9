//! Exact arithmetic in real quadratic fields of class number one, with
//! scans for non-Wieferich primes to unit bases and abc height/radical
//! tools.
//!
//! Elements of `O_K` for `K = Q(sqrt m)` are written `x + y*w` with
//! `w = (1 + sqrt m)/2` when `m = 1 (mod 4)` and `w = sqrt m` otherwise.

pub mod abc;
pub mod arith;
pub mod cache;
mod cfrac;
pub mod error;
pub mod factorint;
pub mod field;
pub mod prime;
pub mod residue;
pub mod ring;
pub mod scan;
pub mod surd;
pub mod unit;

pub use abc::{abc_report, abc_report_for_scan, height_k, radical_k, AbcReport, AbcTriple};
pub use cache::{FactorCache, Factorizer};
pub use error::{Error, Result};
pub use factorint::FactorBudget;
pub use field::{BasisMode, QuadInt, QuadraticField};
pub use prime::{valuation, ElementFactorization, PrimeElement, SplittingType};
pub use residue::{is_wieferich, is_wieferich_rational, pow_mod, rational_wieferich_primes, ResidueModulus};
pub use ring::{Integers, NumberRing};
pub use scan::{decompose, harvest_nonwieferich, verify_growth_chain, Decomposition, ScanReport};
pub use surd::Surd;
pub use unit::{unit_power, UnitCertificate};
