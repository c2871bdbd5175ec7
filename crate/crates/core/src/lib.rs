pub mod error;
pub mod linalg;
pub mod lp;
pub mod parametric;
pub mod piecewise;
pub mod polytope;
pub mod quadrature;
pub mod rational;
pub mod stability;
pub mod threefold;
pub mod toric;
