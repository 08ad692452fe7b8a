//! Exact computations in the free non-associative algebra on two generators:
//! truncated series, the Hopf structure, Sabinin-type operations and the
//! non-associative Baker-Campbell-Hausdorff series.

pub mod checks;
pub mod cuts;
pub mod dsw;
pub mod error;
pub mod hopf;
pub mod magnus;
pub mod magma;
pub mod par;
pub mod prim;
pub mod rational;
pub mod series;
pub mod suops;
pub mod trees;

pub use error::{Error, Result};
pub use magma::{Generator, Monomial, Shape, Style};
pub use par::Strategy;
pub use rational::Rational;
pub use series::{AssocSeries, Series};
pub use prim::{PrimCombination, PrimExpr};
