//! Exemplar schemes: translation-plane spreads over finite fields and
//! circulants of Frobenius groups with cyclic kernel.

mod circulant;
mod field;
mod spread;

pub use circulant::{frobenius_circulant, CirculantSpec};
pub use field::{FieldError, FiniteField, MAX_FIELD_ORDER};
pub use spread::{
    andre_spread, desarguesian_frobenius_spec, desarguesian_spread, spread_scheme, verify_spread, Spread, SpreadError,
};
