//! Exact symbolic and numeric checks for the cell decomposition of `SU(m)`
//! by rotation products, the circle bundles over it, and the e-invariant
//! values they produce.

pub mod einv;
pub mod laurent;
pub mod numeric;
pub mod rational;
pub mod report;
pub mod su;
pub mod suite;
pub mod torus;

pub use laurent::{Polynomial, RelationConfig, SymbolId};
pub use rational::{GaussianRational, Rational};
pub use report::{CheckReport, Status, Witness};
pub use suite::{parse_range, run_suite, Command, OutputFormat, SuiteConfig, SuiteError, SuiteReport};
