//! Ramanujan primes at scale, explicit bounds for the k-th prime, and a
//! harness that checks the finite claims behind the bound
//! `s < 2n(1 + 1/g(n))` on R_n = p_s.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod jexpr;
pub mod ramanujan;
pub mod sieve;
pub mod threshold;
pub mod verify;

pub use bounds::BoundParams;
pub use error::{Error, Result};
pub use jexpr::{parse as parse_expr, ExprNode};
pub use ramanujan::{build_table, build_table_with_sieve, rho, Entry, RamanujanTable};
pub use sieve::PrimeTable;
pub use verify::InequalityReport;
