// `!(x < tol)` is deliberate throughout: NaN must fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod curves;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod report;
pub mod reproduce;
pub mod theorem_lab;
