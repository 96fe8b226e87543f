//! Transmutation operators of the first kind.
//!
//! A transmutation `T f(x) = ∫₀ˣ K(x,t) f(t) dt` intertwines two second-order
//! operators, `B T = T A`. This crate stores operator pairs and kernels as
//! closed-form [`expr::Expression`]s, checks the existence conditions a kernel
//! must satisfy ([`conditions`]), applies the integral with singular
//! Gauss–Jacobi rules ([`quadrature`]) and computes kernels numerically from
//! an operator pair by characteristic marching ([`goursat`]).

pub mod cli;
pub mod conditions;
pub mod expr;
pub mod goursat;
pub mod kernels;
pub mod operators;
pub mod quadrature;
pub mod specfun;

pub use expr::{Expression, Jet2, Params};
