//! Exact computations around weight-two critical Eisenstein series.
//!
//! - [`numkernel`]: rationals, cyclotomic numbers, truncated power series.
//! - [`dirichlet`]: Dirichlet characters and generalized Bernoulli numbers.
//! - [`modforms`]: Eisenstein q-expansions, p-stabilization, Hecke operators.
//! - [`selmer`]: Selmer dimensions of one-dimensional p-adic characters.
//! - [`btree`]: stable lattices on the Bruhat-Tits tree of GL(2, Q_p).

pub mod btree;
pub mod dirichlet;
pub mod modforms;
pub mod numkernel;
pub mod selmer;
