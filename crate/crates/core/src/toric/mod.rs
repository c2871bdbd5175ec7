//! Toric dictionary: fans, pairs, divisors and their polytopes, toric
//! valuations, log discrepancies, and the anticanonical model.

mod fan;
pub mod library;
mod model;
mod pair;

pub use fan::{Fan, Wall};
pub use model::{anticanonical_model, ModelDecomposition, RayRecord};
pub use pair::{divisor_from_ints, ToricDivisor, ToricPair, ToricValuation};
