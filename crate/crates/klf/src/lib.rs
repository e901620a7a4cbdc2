//! Exact computation of symmetric-power (and general linear-algebra-operation)
//! L-functions of hyper-Kloosterman families over finite fields.
//!
//! The hyper-Kloosterman sum in `n` variables over `F_Q` at a parameter `t` is
//!
//! ```text
//! T(t; Q) = sum over x in (F_Q^*)^n of zeta_p^Tr(x_1 + ... + x_n + t/(x_1...x_n))
//! ```
//!
//! with values in the cyclotomic integers `Z[zeta_p]`. As `t` varies these sums
//! assemble into a family; this crate computes, entirely in exact arithmetic:
//!
//! - fiber sums by naive enumeration and by multiplicative convolution
//!   ([`expsum`]), with power-sum tables over extension towers ([`field`]);
//! - the degree-`n+1` fiber polynomial whose reciprocal roots are the Frobenius
//!   eigenvalues, via Newton identities ([`fiber`]);
//! - the family L-function of a linear algebra operation (symmetric, exterior,
//!   tensor powers and products thereof) as an integer power series, together
//!   with its reconstruction as a rational function over `Z` ([`lfunction`]);
//! - the trivial factor `P(n,k,T) = A_0 A_inf / B` ([`trivial`]);
//! - obstruction counts `d_k(n,p)` and their prime scans ([`linop`]);
//! - Hodge numbers, Hodge polygons and q-adic Newton polygons with exact
//!   rational comparison ([`polygon`]);
//! - the finite reduced-cohomology model: the graded maps `nabla_G` and
//!   `t d/dt + nabla_G` on the k-th symmetric power of a rank-(n+1) module
//!   over `F_q[t]`, weight-graded cokernels and constant bases ([`redcoh`]);
//! - a verification harness checking the degree formula and the
//!   "Newton lies on or above Hodge" bound at desk scale ([`verify`]).

pub mod cache;
pub mod config;
pub mod cyclotomic;
pub mod error;
pub mod expsum;
pub mod fiber;
pub mod field;
pub mod lfunction;
pub mod linop;
pub mod ntt;
pub mod poly;
pub mod polygon;
pub mod redcoh;
pub mod trivial;
pub mod verify;

pub use config::{Caps, RunConfig};
pub use cyclotomic::CycInt;
pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use linop::LinOp;
pub use poly::{IntPoly, IntSeries, RatFunc};
pub use polygon::Polygon;
