//! Exact arithmetic: rationals, cyclotomic numbers and truncated power series.

pub mod arith;
pub mod cyclotomic;
pub mod rational;
pub mod series;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicError, CyclotomicNumber};
pub use rational::{parse_rational, rat, ratio, rational_to_string, valuation, Rational};
pub use series::{exp_series, series_mul, Coefficient, SeriesError, TruncatedSeries};
