//! Symbolic dynamics of the logistic map applied to prime sieves.
//!
//! The library connects two worlds through one alphabet:
//!
//! - **Arithmetic.** The sieve of Eratosthenes is encoded as symbolic words:
//!   a prime `p` becomes the periodic word `(R L^(p−1))*` marking its
//!   multiples, and sieving by several primes at once is the pointwise
//!   composition of their words ([`prime`]).
//! - **Dynamics.** The same words, read as itineraries of the quadratic map
//!   `x ↦ 1 − u·x²`, are kneading sequences. The kneading order decides which
//!   words a real parameter can realize, and bisection over that order
//!   recovers the parameter from a word ([`word`], [`logistic`], [`solver`]).
//!
//! Gap statistics close the loop: the distribution of prime gaps is compared
//! against gaps between negative excursions of a chaotic orbit ([`gapstats`]).
//!
//! Module map:
//!
//! - [`word`] — symbolic words, kneading comparison, admissibility.
//! - [`prime`] — sieve encodings, `•` composition, ordering/prefix checks.
//! - [`logistic`] — orbits, itineraries, Lyapunov exponent, entropy.
//! - [`solver`] — parameter recovery from kneading words.
//! - [`gapstats`] — gap histograms and their comparison.

pub mod gapstats;
pub mod logistic;
pub mod prime;
pub mod solver;
pub mod word;

pub use gapstats::{
    compare_histograms, histogram, GapHistogram, HistogramComparison, StatsError,
};
pub use logistic::{
    bifurcation_scan, constructed_prime_gaps, itinerary, lyapunov, orbit, step,
    topological_entropy, topological_entropy_with_cap, DynamicsError, MapParams, Orbit,
    DEFAULT_LAP_BUDGET,
};
pub use prime::{
    check_theme3, check_theorem4, compose, compose_budgeted, prime_gaps, prime_word,
    primitive_period, sieve_primes, sieve_word, sieve_word_with_budget, GapProvenance,
    GapSequence, PrimeError, PrimeTable, Theme3Report, Theorem4Report, Theorem4Step,
};
pub use solver::{
    default_truncation, kneading_of, parameter_chain, parameter_chain_with_budget,
    solve_parameter, solve_superstable, ChainEntry, ChainOutcome, SolveError, SolveResult,
};
pub use word::{Mismatch, Symbol, SymbolicWord, WordError};

/// Default cap on the number of period symbols a composed sieve word may
/// materialize (one bit per symbol, so the default is about 128 MB).
pub const DEFAULT_PERIOD_BUDGET: u64 = 1_000_000_000;

/// Formats a float with 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Slope of the ordinary least-squares line through `(x, y)` points.
pub(crate) fn least_squares_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &pts {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}
