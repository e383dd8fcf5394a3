//! The unitized crossed product `C₀([0,1]) ⋊ Z` modelling `C*(C_φ, K)/K`.

mod base;
mod element;
mod symbol;

pub use base::{common_base, CommonBase, MAX_DENOMINATOR};
pub use element::CrossedProductElement;
pub use symbol::SymbolFunction;
