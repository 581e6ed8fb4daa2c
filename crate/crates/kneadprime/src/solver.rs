//! Parameter recovery: given a kneading word, find the `u` whose critical
//! orbit realizes it.
//!
//! The kneading word of `x ↦ 1 − u·x²` is the itinerary of the critical
//! value 1. Kneading words grow monotonically with `u` in the kneading order,
//! so an admissible target can be bracketed by bisection over `[1, 2]`:
//! compare the numeric kneading word at the midpoint against the target and
//! move the end that lies on the wrong side. Superstable targets (ending in
//! `C`) instead demand that the critical orbit returns exactly to 0, which is
//! a one-dimensional root-finding problem in `u`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::logistic::{itinerary, orbit, DynamicsError};
use crate::prime::{sieve_word_with_budget, PrimeError};
use crate::word::{Symbol, SymbolicWord};

/// Bisection endpoints: every recoverable target lies in this window.
const SEARCH_LO: f64 = 1.0;
const SEARCH_HI: f64 = 2.0;

/// Grid resolution used to bracket superstable roots.
const BRACKET_STEP: f64 = 1e-3;

/// A realizing window wider than this (1% of the search range) gives no
/// meaningful point estimate; chain entries above it are flagged ambiguous.
const CHAIN_WINDOW_LIMIT: f64 = 0.01;

/// Errors from parameter recovery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    /// The target is exceeded by one of its own shifts: no parameter
    /// realizes it as a kneading word.
    #[error("target is not admissible: its shift by {violating_shift} exceeds it")]
    NotAdmissible { violating_shift: usize },
    /// A `C`-terminated word was given to the order-bisection solver.
    #[error("target ends in C; superstable words are solved by solve_superstable")]
    SuperstableTarget,
    /// A word without a final `C` was given to the superstable solver.
    #[error("target does not end in C; use solve_parameter for ordinary words")]
    NotSuperstable,
    /// Fewer comparison symbols than the target's own defining length.
    #[error("truncation {got} is below the target's {needed} defining symbols")]
    TruncationTooShort { needed: usize, got: usize },
    /// The tolerance cannot drive a bisection.
    #[error("tolerance {0} is not a positive finite width")]
    BadTolerance(f64),
    /// The target's realizing window spans most of the search interval:
    /// `truncation` symbols cannot pin the parameter down at all (a very
    /// short or uninformative target); raise the truncation.
    #[error(
        "kneading words match the target through {truncation} symbols across \
         ({lo}, {hi}), most of the search range; raise the truncation"
    )]
    NoConvergence { lo: f64, hi: f64, truncation: usize },
    /// No sign-change bracket with a matching itinerary prefix was found.
    #[error("no superstable bracket on [1, 2] at 1e-3 resolution")]
    NoBracket,
    /// Propagated orbit-level error.
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    /// Propagated sieve-word construction error.
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

/// A recovered parameter with its bisection provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Midpoint of the final bracket.
    pub u: f64,
    /// Final bracket `[lo, hi]` containing the parameter. For a target
    /// realized at a single point its width is at most the requested
    /// tolerance; for a target realized by a whole parameter window (a
    /// periodic word naming a stable window) it is the measured window,
    /// refined to the tolerance at each edge.
    pub bracket: (f64, f64),
    /// Symbols per kneading comparison.
    pub truncation: usize,
    /// Number of bisection steps taken.
    pub iterations: usize,
}

/// The first `length` symbols of the kneading word at `u`: the itinerary of
/// the critical value (seed 1.0). Landing on the critical point closes the
/// word with `C`, so the result may be shorter than `length`.
pub fn kneading_of(u: f64, length: usize) -> Result<SymbolicWord, DynamicsError> {
    itinerary(u, 1.0, length, 0.0)
}

/// Default comparison truncation for a target: three times its defining
/// length, with a floor of 30 symbols (short words leave the parameter
/// under-determined otherwise) and a cap of 200 (floating-point shadowing
/// limits long comparisons), but never below the defining length itself.
pub fn default_truncation(target: &SymbolicWord) -> usize {
    let defining = target.preperiod_len() + target.period_len();
    defining.max((3 * defining).max(30).min(200))
}

fn validate_tolerance(tol: f64) -> Result<(), SolveError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SolveError::BadTolerance(tol))
    }
}

/// Recovers the parameter realizing an admissible `C`-free kneading word by
/// bisection over `[1, 2]` in the kneading order, comparing `truncation`
/// symbols per probe. Stops when the bracket is narrower than `tol` (or at
/// the floating-point resolution floor) and returns its midpoint.
///
/// A probe that agrees with the target through every compared symbol means
/// the target is realized across a whole parameter window; the window's
/// edges are then located by further bisection and its midpoint returned,
/// with the window itself as the bracket.
pub fn solve_parameter(
    target: &SymbolicWord,
    truncation: usize,
    tol: f64,
) -> Result<SolveResult, SolveError> {
    if target.contains_c() {
        return Err(SolveError::SuperstableTarget);
    }
    validate_tolerance(tol)?;
    let needed = target.preperiod_len() + target.period_len();
    if truncation < needed {
        return Err(SolveError::TruncationTooShort {
            needed,
            got: truncation,
        });
    }
    if let Some(violating_shift) = target.violating_shift() {
        return Err(SolveError::NotAdmissible { violating_shift });
    }

    let mut lo = SEARCH_LO;
    let mut hi = SEARCH_HI;
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Floating-point resolution floor: the bracket cannot shrink.
            break;
        }
        iterations += 1;
        let probe = kneading_of(mid, truncation)?;
        match probe.compare(target) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => {
                // The midpoint realizes the target as far as we can see:
                // locate the realizing window inside (lo, hi).
                let (w_lo, left_steps) = refine_edge(lo, mid, target, truncation, tol)?;
                let (w_hi, right_steps) = refine_edge(hi, mid, target, truncation, tol)?;
                iterations += left_steps + right_steps;
                if w_hi - w_lo >= 0.5 * (SEARCH_HI - SEARCH_LO) {
                    return Err(SolveError::NoConvergence {
                        lo: w_lo,
                        hi: w_hi,
                        truncation,
                    });
                }
                return Ok(SolveResult {
                    u: 0.5 * (w_lo + w_hi),
                    bracket: (w_lo, w_hi),
                    truncation,
                    iterations,
                });
            }
        }
    }
    Ok(SolveResult {
        u: 0.5 * (lo + hi),
        bracket: (lo, hi),
        truncation,
        iterations,
    })
}

/// Bisects between a parameter whose kneading word differs from the target
/// (`outside`) and one that matches it through the truncation (`inside`)
/// until they are `tol` apart, returning the final matching end.
fn refine_edge(
    mut outside: f64,
    mut inside: f64,
    target: &SymbolicWord,
    truncation: usize,
    tol: f64,
) -> Result<(f64, usize), SolveError> {
    let mut iterations = 0;
    while (inside - outside).abs() > tol {
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        iterations += 1;
        if kneading_of(mid, truncation)?.compare(target) == Ordering::Equal {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((inside, iterations))
}

/// The orbit point whose vanishing makes `target` superstable: point number
/// `len` (1-indexed) of the critical-value orbit, i.e. where the final `C`
/// must land.
fn superstable_residual(u: f64, len: usize) -> f64 {
    let orb = orbit(u, 1.0, len, 0).expect("u and seed are validated by the caller");
    *orb.points.last().expect("len >= 1")
}

/// True when the first `prefix.len()` itinerary symbols at `u` equal
/// `prefix` exactly (an early critical hit counts as a mismatch).
fn prefix_matches(u: f64, prefix: &[Symbol]) -> bool {
    if prefix.is_empty() {
        return true;
    }
    match itinerary(u, 1.0, prefix.len(), 0.0) {
        Ok(word) => match word.expand(prefix.len()) {
            Ok(symbols) => symbols == prefix,
            Err(_) => false,
        },
        Err(_) => false,
    }
}

/// Recovers the parameter of a superstable kneading word `W C`: the `u` at
/// which the critical orbit returns to the critical point after `|W C|`
/// steps having realized the sign pattern `W`. Scans `[1, 2]` at 1e-3
/// resolution for a sign change of the returning orbit point between grid
/// neighbors that both realize `W`, then bisects that bracket to the
/// floating-point floor.
pub fn solve_superstable(target: &SymbolicWord) -> Result<SolveResult, SolveError> {
    if !target.ends_with_c() {
        return Err(SolveError::NotSuperstable);
    }
    if let Some(violating_shift) = target.violating_shift() {
        return Err(SolveError::NotAdmissible { violating_shift });
    }
    let len = target
        .finite_len()
        .expect("words ending in C are finite");
    let prefix = target.expand(len - 1).expect("prefix of a finite word");

    let steps = ((SEARCH_HI - SEARCH_LO) / BRACKET_STEP).round() as usize;
    let grid = |i: usize| {
        if i == steps {
            SEARCH_HI
        } else {
            SEARCH_LO + BRACKET_STEP * i as f64
        }
    };
    let mut previous: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 0..=steps {
        let u = grid(i);
        if !prefix_matches(u, &prefix) {
            previous = None;
            continue;
        }
        let g = superstable_residual(u, len);
        if g == 0.0 {
            return Ok(SolveResult {
                u,
                bracket: (u, u),
                truncation: len,
                iterations: 0,
            });
        }
        if let Some((u_prev, g_prev)) = previous {
            if g_prev.signum() != g.signum() {
                bracket = Some((u_prev, u));
                break;
            }
        }
        previous = Some((u, g));
    }
    let (mut lo, mut hi) = bracket.ok_or(SolveError::NoBracket)?;

    let mut g_lo = superstable_residual(lo, len);
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let g_mid = superstable_residual(mid, len);
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(SolveResult {
        u: 0.5 * (lo + hi),
        bracket: (lo, hi),
        truncation: len,
        iterations,
    })
}

/// Outcome of one chain entry in [`parameter_chain`].
#[derive(Clone, Debug, PartialEq)]
pub enum ChainOutcome {
    /// The word pinned a single parameter.
    Solved(SolveResult),
    /// The word is the kneading word of a whole parameter window, so no
    /// single `u` is determined (bisection stalled on exact agreement).
    AmbiguousWindow { lo: f64, hi: f64 },
    /// The full word is exceeded by one of its shifts and is not a kneading
    /// word of any parameter.
    NotAdmissible { violating_shift: usize },
}

/// One sieve word with its recovery outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainEntry {
    /// Sieve word order.
    pub index: usize,
    /// The composed sieve word itself.
    pub word: SymbolicWord,
    /// What parameter recovery produced for it.
    pub outcome: ChainOutcome,
}

/// Attempts parameter recovery for the sieve words of orders `1..=i_max`,
/// reporting a per-order outcome instead of failing the whole chain: order 1
/// is realized by the whole period-doubling window (flagged ambiguous with
/// the measured window), order 2 pins `u ≈ 1.476`, and orders 3 and above
/// are not admissible as full words (their violating shift is reported).
/// `truncation` is raised per entry to the word's defining length when
/// necessary.
pub fn parameter_chain(
    i_max: usize,
    truncation: usize,
    tol: f64,
) -> Result<Vec<ChainEntry>, SolveError> {
    parameter_chain_with_budget(i_max, truncation, tol, crate::DEFAULT_PERIOD_BUDGET)
}

/// [`parameter_chain`] with an explicit budget cap on each materialized
/// sieve-word period.
pub fn parameter_chain_with_budget(
    i_max: usize,
    truncation: usize,
    tol: f64,
    budget: u64,
) -> Result<Vec<ChainEntry>, SolveError> {
    validate_tolerance(tol)?;
    let mut entries = Vec::with_capacity(i_max);
    for index in 1..=i_max {
        let word = sieve_word_with_budget(index, budget)?;
        let outcome = match word.violating_shift() {
            Some(violating_shift) => ChainOutcome::NotAdmissible { violating_shift },
            None => {
                let needed = word.preperiod_len() + word.period_len();
                match solve_parameter(&word, truncation.max(needed), tol) {
                    Ok(result) if result.bracket.1 - result.bracket.0 > CHAIN_WINDOW_LIMIT => {
                        ChainOutcome::AmbiguousWindow {
                            lo: result.bracket.0,
                            hi: result.bracket.1,
                        }
                    }
                    Ok(result) => ChainOutcome::Solved(result),
                    Err(SolveError::NoConvergence { lo, hi, .. }) => {
                        ChainOutcome::AmbiguousWindow { lo, hi }
                    }
                    Err(other) => return Err(other),
                }
            }
        };
        entries.push(ChainEntry {
            index,
            word,
            outcome,
        });
    }
    Ok(entries)
}
