//! Exact arithmetic for Appell families, with the generalized Bernoulli and
//! Euler polynomials as the main examples.
//!
//! Orders are polynomial indeterminates (`m`, `l`), so every identity checked
//! by [`identities`] is a certificate in ℚ[x, y, m, l] valid for all complex
//! orders at each fixed degree. [`stochastic`] re-derives the expectation
//! identities by sampling for integer orders.

pub mod appell;
pub mod error;
pub mod families;
pub mod identities;
pub mod poly;
pub mod rational;
pub mod series;
pub mod stochastic;

pub use appell::{convolve, expect_bernoulli_shift, expect_uniform_shift, AppellFamily};
pub use error::{AppellError, Result};
pub use families::{
    bernoulli, bernoulli_number, euler, euler_member_at_zero, gen_bernoulli, gen_euler, gen_euler_in,
    mixed_q, specialize_order, Catalog, FamilyId, FamilyKey, FamilyKind, Shape,
};
pub use poly::{Monomial, MultiPoly, Var};
pub use rational::{parse_rational, Rational};
pub use series::PowerSeries;
