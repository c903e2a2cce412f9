//! Exact elimination and certified numerics: univariate polynomials over
//! `Q`, resultants, root finding, bivariate solving, corner critical points
//! and an independent counting oracle in dimension one.

pub mod bivariate;
pub mod corners;
pub mod oracle;
pub mod resultant;
pub mod roots;
pub mod unipoly;

pub use bivariate::{solve_bivariate, BivariateSolution};
pub use corners::{corner_critical_points, relative_residual, residual, CornerPoint};
pub use oracle::{cpdeg_oracle_d1, OracleCount};
pub use unipoly::UniPoly;
