//! Amoebas of bivariate Laurent polynomials: membership and area, Ronkin functions and
//! their Monge–Ampère measure, real-curve topology and Harnack curves.

pub mod amoeba;
pub mod contour;
pub mod forge;
pub mod poly;
pub mod quad;
pub mod real_locus;
pub mod render;
pub mod report;
pub mod ronkin;
pub mod roots;

pub use amoeba::{LogPoint, Window};
pub use poly::{parse_polynomial, Exponent, LaurentPolynomial, NewtonPolygon, PolyError};
