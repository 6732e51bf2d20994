//! Fractional-order polynomial regression.
//!
//! An ordinary least-squares polynomial is fitted first. Each non-constant
//! monomial is then replaced by its Riemann–Liouville/Caputo image under the
//! power rule, and the order α is swept to trade in-sample fit against
//! out-of-sample (extrapolation) R².
//!
//! Modules:
//! - [`gamma`]: Γ, ln Γ and Gamma ratios.
//! - [`fracops`]: the power rule and quadrature-based fractional operators.
//! - [`opalgebra`]: finite groups of fractional operators indexed by exponents.
//! - [`regress`]: design matrix, least squares, R², ordered splits.
//! - [`fracmodel`]: fractional model, α sweep and selection.
//! - [`pipeline`]: CSV ingestion, monthly aggregation, reports and plots.

pub mod error;
pub mod fracmodel;
pub mod fracops;
pub mod gamma;
pub mod opalgebra;
pub mod pipeline;
pub mod regress;

pub use error::{Error, ErrorClass, Result};
