//! Exact polynomial engine: univariate Sturm theory, multivariate arithmetic
//! and resultants, branch-and-bound, matrices and multiplier search.

pub mod algebraic;
pub mod bb;
pub mod lp;
pub mod matrix;
pub mod multi;
pub mod uni;

pub use algebraic::AlgebraicNumber;
pub use bb::{bb_max_bound, BoxDomain, LinearConstraint, MaxBound};
pub use lp::{multiplier_certifies, positive_multiplier_lp, product_strictly_positive};
pub use matrix::{psd_check, RationalMatrix};
pub use multi::{resultant, MultiPoly};
pub use uni::UniPoly;
