//! Independent reference implementations used by tests, the acceptance
//! harness and `fixtures --mint-examples`.
//!
//! The symbolic half works over `ℚ(i)` with arbitrary-precision rationals;
//! the numeric half uses plain nested `Vec`s and brute force. Neither calls
//! into the production algebra kernels.

mod numeric;
mod symbolic;

pub use numeric::{oracle_abelian_monodromy, oracle_alcove, oracle_alcove_auto};
pub use symbolic::{
    literal_convention_invariant_sign, oracle_bracket, oracle_cocycle, oracle_km_bracket, oracle_km_form,
    pin_sign, sl2_monomial_basis, GaussRat, SymKacMoody, SymMat, SymbolicLaurent,
};
