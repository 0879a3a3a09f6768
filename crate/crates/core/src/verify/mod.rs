//! Exact reproduction of the two counterexamples (Tseng's method and
//! extragradient with a non-subdifferential resolvent) and the rate-quotient
//! curves comparing the last-iterate bounds.

mod counterexamples;
mod rates;
mod report;

pub use counterexamples::{
    b1_instance, b2_iteration_matrix, spectral_radius_2x2, verify_resolvent_counterexample, verify_tseng_counterexample,
};
pub use rates::{rate_curve, rate_quotients};
pub use report::{Check, CounterexampleReport};
