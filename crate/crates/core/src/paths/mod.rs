pub mod exponential;
pub mod integrals;
pub mod word;

pub use exponential::{
    exp_iterated_integral, exp_iterated_integral_series, transport, transport_with, IntegralWord, SeriesValue,
};
pub use integrals::{iterated_integral, iterated_integral_quadrature, pullback, shuffle_check};
pub use word::{PathWord, Segment};
