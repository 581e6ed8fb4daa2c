//! Prime sieves as symbolic words: per-prime encodings, the `•` composition,
//! composed sieve words, and gap sequences.
//!
//! A prime `p` becomes the purely periodic word `(R L^(p−1))*`: position `j`
//! carries `R` exactly when `p` divides `j` (position 0 counts as erased, and
//! position 1 — the unit — always stays `L`). Composing the first `i` prime
//! words with the pointwise rule "`L` only where both factors have `L`" yields
//! the sieve word of order `i`, whose `L` positions are the integers coprime
//! to every sieving prime: candidate primes beyond them, exactly as a run of
//! the sieve of Eratosthenes leaves them.

use std::cmp::Ordering;
use std::io::{self, Write};

use bitvec::prelude::*;
use thiserror::Error;

use crate::word::{Mismatch, SymbolicWord, WordError};
use crate::{format_float, DEFAULT_PERIOD_BUDGET};

type Bits = BitVec<u64, Lsb0>;

/// Errors from sieve construction and word composition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    /// The sieve or gap limit excludes even the smallest required primes.
    #[error("limit {0} is too small")]
    LimitTooSmall(u64),
    /// A per-prime word was requested for a composite or unit.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// Composition and period extraction require purely periodic words.
    #[error("word is not purely periodic")]
    NotPeriodic,
    /// Composition is defined only for words over `{L, R}`.
    #[error("word contains the critical symbol C")]
    ContainsC,
    /// A sieve word index of 0 was requested; orders start at 1.
    #[error("sieve word order must be at least 1")]
    ZeroIndex,
    /// The requested period exceeds the materialization budget.
    #[error("period of {required} symbols exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    /// Propagated word-level error.
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Primes up to a limit, as produced by [`sieve_primes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// The inclusive limit the sieve ran to.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `≤ limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes found.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    /// True when the table holds no primes (never for `limit ≥ 2`).
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Sieve of Eratosthenes up to `limit` (inclusive), bit-packed one flag per
/// candidate. Requires `limit ≥ 2`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable, PrimeError> {
    if limit < 2 {
        return Err(PrimeError::LimitTooSmall(limit));
    }
    let n = limit as usize;
    let mut composite = bitvec![u64, Lsb0; 0; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if !composite[p] {
            let mut m = p * p;
            while m <= n {
                composite.set(m, true);
                m += p;
            }
        }
        p += 1;
    }
    let primes = (2..=n)
        .filter(|&j| !composite[j])
        .map(|j| j as u64)
        .collect();
    Ok(PrimeTable {
        limit,
        primes,
    })
}

/// Trial-division primality for word construction; independent of the sieve.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The first `count` primes, ascending.
fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let mut limit = if count <= 5 {
        13
    } else {
        let n = count as f64;
        (n * (n.ln() + n.ln().ln())).ceil() as u64 + 16
    };
    loop {
        let table = sieve_primes(limit).expect("limit is at least 13");
        if table.len() >= count {
            return table.primes()[..count].to_vec();
        }
        limit *= 2;
    }
}

/// The purely periodic word `(R L^(p−1))*` marking the multiples of `p`.
pub fn prime_word(p: u64) -> Result<SymbolicWord, PrimeError> {
    if !is_prime(p) {
        return Err(PrimeError::NotPrime(p));
    }
    let mut per = bitvec![u64, Lsb0; 0; p as usize];
    per.set(0, true);
    Ok(SymbolicWord::from_bits(Bits::new(), per))
}

/// Pointwise `•` composition over one common super-period: position `j` is
/// `L` exactly when both inputs carry `L` there (`R` absorbs). Both inputs
/// must be purely periodic words over `{L, R}`; the result is normalized to
/// its primitive period. Periods whose least common multiple exceeds the
/// default budget are rejected.
pub fn compose(a: &SymbolicWord, b: &SymbolicWord) -> Result<SymbolicWord, PrimeError> {
    compose_budgeted(a, b, DEFAULT_PERIOD_BUDGET)
}

/// [`compose`] with an explicit budget cap on the materialized period.
pub fn compose_budgeted(
    a: &SymbolicWord,
    b: &SymbolicWord,
    budget: u64,
) -> Result<SymbolicWord, PrimeError> {
    if a.contains_c() || b.contains_c() {
        return Err(PrimeError::ContainsC);
    }
    if !a.is_purely_periodic() || !b.is_purely_periodic() {
        return Err(PrimeError::NotPeriodic);
    }
    let na = a.period_len();
    let nb = b.period_len();
    let lcm = lcm_u128(na as u128, nb as u128);
    if lcm > u128::from(budget) {
        return Err(PrimeError::BudgetExceeded {
            required: lcm,
            budget,
        });
    }
    let n = lcm as usize;
    let pa = a.period_bits();
    let pb = b.period_bits();
    let mut out = Bits::with_capacity(n);
    for j in 0..n {
        out.push(pa[j % na] | pb[j % nb]);
    }
    Ok(SymbolicWord::from_bits(Bits::new(), out))
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    fn gcd(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// The sieve word of order `i`: the left fold of `•` over the words of the
/// first `i` primes, under the default materialization budget.
pub fn sieve_word(i: usize) -> Result<SymbolicWord, PrimeError> {
    sieve_word_with_budget(i, DEFAULT_PERIOD_BUDGET)
}

/// [`sieve_word`] with an explicit budget cap on the materialized period
/// (the final period is the product of the first `i` primes).
pub fn sieve_word_with_budget(i: usize, budget: u64) -> Result<SymbolicWord, PrimeError> {
    if i == 0 {
        return Err(PrimeError::ZeroIndex);
    }
    let primes = first_primes(i);
    let required: u128 = primes.iter().map(|&p| u128::from(p)).product();
    if required > u128::from(budget) {
        return Err(PrimeError::BudgetExceeded { required, budget });
    }
    let mut word = prime_word(primes[0])?;
    for &p in &primes[1..] {
        word = compose_budgeted(&word, &prime_word(p)?, budget)?;
    }
    Ok(word)
}

/// Length of the primitive period of a purely periodic word.
pub fn primitive_period(word: &SymbolicWord) -> Result<usize, PrimeError> {
    if !word.is_purely_periodic() {
        return Err(PrimeError::NotPeriodic);
    }
    Ok(word.period_len())
}

/// How a gap sequence was generated; carried through to histogram output.
#[derive(Clone, Debug, PartialEq)]
pub enum GapProvenance {
    /// Gaps between consecutive real primes up to `limit` (inclusive).
    RealPrimes { limit: u64 },
    /// Gaps between consecutive negative orbit points of the logistic map
    /// `x ↦ 1 − u·x²` recorded over `n` points after a transient.
    ChaosOrbit {
        u: f64,
        x0: f64,
        n: usize,
        transient: usize,
    },
}

impl GapProvenance {
    /// Short source tag used in serialized output.
    pub fn source_name(&self) -> &'static str {
        match self {
            GapProvenance::RealPrimes { .. } => "real-primes",
            GapProvenance::ChaosOrbit { .. } => "chaos-orbit",
        }
    }

    /// The count bound the sequence was generated under (sieve limit or
    /// recorded orbit length).
    pub fn limit(&self) -> u64 {
        match self {
            GapProvenance::RealPrimes { limit } => *limit,
            GapProvenance::ChaosOrbit { n, .. } => *n as u64,
        }
    }

    /// Key/value pairs describing the generation parameters.
    pub fn metadata(&self) -> Vec<(String, String)> {
        match self {
            GapProvenance::RealPrimes { limit } => vec![
                ("source".to_string(), self.source_name().to_string()),
                ("limit".to_string(), limit.to_string()),
            ],
            GapProvenance::ChaosOrbit {
                u,
                x0,
                n,
                transient,
            } => vec![
                ("source".to_string(), self.source_name().to_string()),
                ("u".to_string(), format_float(*u)),
                ("x0".to_string(), format_float(*x0)),
                ("n".to_string(), n.to_string()),
                ("transient".to_string(), transient.to_string()),
            ],
        }
    }
}

/// Gaps between consecutive marked positions of a source sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GapSequence {
    provenance: GapProvenance,
    gaps: Vec<u64>,
}

impl GapSequence {
    pub(crate) fn new(provenance: GapProvenance, gaps: Vec<u64>) -> Self {
        debug_assert!(gaps.iter().all(|&g| g >= 1), "gaps are positive");
        GapSequence { provenance, gaps }
    }

    /// Generation parameters of the sequence.
    pub fn provenance(&self) -> &GapProvenance {
        &self.provenance
    }

    /// The gaps, in source order.
    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// Number of gaps.
    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    /// True when no gaps were produced.
    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    /// Writes `# key=value` metadata lines followed by `index,gap` CSV rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (key, value) in self.provenance.metadata() {
            writeln!(out, "# {key}={value}")?;
        }
        writeln!(out, "index,gap")?;
        for (i, gap) in self.gaps.iter().enumerate() {
            writeln!(out, "{i},{gap}")?;
        }
        Ok(())
    }
}

/// Gaps between consecutive primes `≤ limit`. The first gap is 1 (from 2 to
/// 3) and every later gap is even. Requires `limit ≥ 3`.
pub fn prime_gaps(limit: u64) -> Result<GapSequence, PrimeError> {
    if limit < 3 {
        return Err(PrimeError::LimitTooSmall(limit));
    }
    let table = sieve_primes(limit)?;
    let gaps = table
        .primes()
        .windows(2)
        .map(|pair| pair[1] - pair[0])
        .collect();
    Ok(GapSequence::new(
        GapProvenance::RealPrimes { limit },
        gaps,
    ))
}

/// One neighbor comparison from [`check_theorem4`].
#[derive(Clone, Debug)]
pub struct Theorem4Step {
    /// Left order `i` of the compared pair (sieve words `i` and `i + 1`).
    pub index: usize,
    /// Kneading order of the pair; the chain requires `Less`.
    pub ordering: Ordering,
    /// First differing position; at it the lower-order word holds `L`, the
    /// higher-order word `R`, after an even number of `R` symbols.
    pub mismatch: Option<Mismatch>,
}

/// Outcome of the sieve-word ordering chain check.
#[derive(Clone, Debug)]
pub struct Theorem4Report {
    /// Orders `1..i_max` were compared pairwise.
    pub i_max: usize,
    /// Per-pair details, ascending in `index`.
    pub steps: Vec<Theorem4Step>,
    /// True when every neighbor pair compared `Less`.
    pub holds: bool,
    /// First `i` whose pair failed to compare `Less`, if any.
    pub witness: Option<usize>,
}

/// Verifies the strict kneading-order chain of composed sieve words:
/// `word(i) < word(i + 1)` for every `i < i_max`.
pub fn check_theorem4(i_max: usize, budget: u64) -> Result<Theorem4Report, PrimeError> {
    if i_max == 0 {
        return Err(PrimeError::ZeroIndex);
    }
    let mut steps = Vec::new();
    let mut witness = None;
    let mut current = sieve_word_with_budget(1, budget)?;
    for i in 1..i_max {
        let next = sieve_word_with_budget(i + 1, budget)?;
        let (ordering, mismatch) = current.compare_detailed(&next);
        if ordering != Ordering::Less && witness.is_none() {
            witness = Some(i);
        }
        steps.push(Theorem4Step {
            index: i,
            ordering,
            mismatch,
        });
        current = next;
    }
    Ok(Theorem4Report {
        i_max,
        holds: witness.is_none(),
        steps,
        witness,
    })
}

/// Report of the kneading-prefix check for a sieve word.
#[derive(Clone, Debug)]
pub struct Theme3Report {
    /// Sieve word order `i`.
    pub index: usize,
    /// The `i`-th prime `p`.
    pub prime: u64,
    /// Number of leading symbols examined: `p² + 1`.
    pub prefix_len: usize,
    /// Whether that finite prefix is admissible (shift-maximal).
    pub admissible: bool,
    /// First shift exceeding the prefix when it is not admissible.
    pub violating_shift: Option<usize>,
    /// Largest gap between consecutive primes below `p²`.
    pub max_gap: u64,
    /// Prime opening that largest gap.
    pub max_gap_after: u64,
    /// Whether `max_gap ≤ p` — a strictly stronger arithmetic bound often
    /// paraphrased as equivalent; it fails at order 6 while the prefix is
    /// still admissible.
    pub gap_bound_holds: bool,
    /// The conjecture itself: the prefix is admissible (equals `admissible`).
    pub holds: bool,
}

/// Checks that the first `p_i² + 1` symbols of the order-`i` sieve word form
/// an admissible (kneading-realizable) prefix — the conjecture's formal
/// statement, reported as `holds` — alongside the arithmetic cross-check
/// that every gap between consecutive primes below `p_i²` is at most `p_i`
/// (reported as `gap_bound_holds`).
///
/// The two are often paraphrased as equivalent, but the gap bound is
/// strictly stronger: at order 6 the gap 127 − 113 = 14 exceeds `p_6 = 13`,
/// yet the corresponding run of 13 marked positions stays below the prefix's
/// first interior run (15 marked positions, reaching to the next prime 17),
/// so the prefix is still shift-maximal and `holds` remains true.
///
/// The prefix is generated directly from the sieve rule (position `j` is `R`
/// when some sieving prime divides `j`), so no full period is materialized.
pub fn check_theme3(i: usize) -> Result<Theme3Report, PrimeError> {
    if i == 0 {
        return Err(PrimeError::ZeroIndex);
    }
    let primes = first_primes(i);
    let p = *primes.last().expect("at least one prime");
    let prefix_len = (p * p + 1) as usize;

    let mut bits = Bits::with_capacity(prefix_len);
    for j in 0..prefix_len as u64 {
        bits.push(primes.iter().any(|&q| j % q == 0));
    }
    let prefix = SymbolicWord::from_bits(bits, Bits::new());
    let violating_shift = prefix.violating_shift_within(prefix_len - 1)?;
    let admissible = violating_shift.is_none();

    let table = sieve_primes(p * p)?;
    let mut max_gap = 0u64;
    let mut max_gap_after = 0u64;
    for pair in table.primes().windows(2) {
        let gap = pair[1] - pair[0];
        if gap > max_gap {
            max_gap = gap;
            max_gap_after = pair[0];
        }
    }
    let gap_bound_holds = max_gap <= p;

    Ok(Theme3Report {
        index: i,
        prime: p,
        prefix_len,
        admissible,
        violating_shift,
        max_gap,
        max_gap_after,
        gap_bound_holds,
        holds: admissible,
    })
}
