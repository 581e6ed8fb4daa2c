//! Symbolic words over the itinerary alphabet and the kneading order.
//!
//! A [`SymbolicWord`] is either a finite symbol list (optionally terminated by
//! the critical symbol `C`) or an eventually periodic infinite sequence held as
//! a finite preperiod plus a primitive period. Construction normalizes every
//! word: the period is cut to its primitive (non-repeating) form and preperiod
//! symbols that merely repeat the cycle are folded into it, so two words denote
//! the same sequence exactly when they are structurally equal.
//!
//! Words are compared by the kneading order: positional order `L < C < R` at
//! the first differing index, reversed when the shared prefix contains an odd
//! number of `R` symbols (each pass through the decreasing branch reverses
//! orientation). A word is *admissible* (realizable as a kneading sequence)
//! when no shift of it exceeds the word itself in this order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use thiserror::Error;

/// Bit storage for `L`/`R` runs: `true` encodes `R`, `false` encodes `L`.
type Bits = BitVec<u64, Lsb0>;

/// Itinerary alphabet. The derived `Ord` is the positional order `L < C < R`
/// used by the kneading comparison at even `R`-parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Orbit point left of the critical point.
    L,
    /// Orbit point on the critical point; terminates superstable words.
    C,
    /// Orbit point right of the critical point.
    R,
}

impl Symbol {
    /// Parses one alphabet character.
    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'L' => Some(Symbol::L),
            'C' => Some(Symbol::C),
            'R' => Some(Symbol::R),
            _ => None,
        }
    }

    /// The character used by the text form of words.
    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::C => 'C',
            Symbol::R => 'R',
        }
    }

    fn from_bit(bit: bool) -> Symbol {
        if bit {
            Symbol::R
        } else {
            Symbol::L
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Errors from word construction and manipulation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    /// A finite word cannot supply the requested number of symbols or shifts.
    #[error("word supplies {available} symbols but {requested} were required")]
    TooShort { requested: usize, available: usize },
    /// `C` occurred anywhere other than the final position of a finite word.
    #[error("C may only terminate a finite word (found at position {position})")]
    MisplacedC { position: usize },
    /// The text form could not be parsed.
    #[error("cannot parse {input:?} as a symbolic word: {reason}")]
    Parse { input: String, reason: String },
}

/// Location of the first index where two words disagree under the kneading
/// comparison, together with the parity that decided the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// First index (0-based) at which the words differ.
    pub index: usize,
    /// Symbol of the left-hand word at that index.
    pub left: Symbol,
    /// Symbol of the right-hand word at that index.
    pub right: Symbol,
    /// Whether the shared prefix holds an even number of `R` symbols
    /// (even parity keeps the positional order, odd parity reverses it).
    pub even_r_prefix: bool,
}

/// A finite or eventually periodic word over `{L, C, R}`.
///
/// Invariants maintained by every constructor:
/// - the period, when present, is primitive (it does not repeat a shorter block);
/// - preperiod symbols that duplicate the cycle are folded into it, so the
///   representation of an infinite word is unique;
/// - `C` appears only as the last symbol of a finite word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicWord {
    /// `L`/`R` preperiod bits; for a finite word, the whole body minus any trailing `C`.
    pre: Bits,
    /// `L`/`R` period bits in primitive form; empty for finite words.
    per: Bits,
    /// Marks a finite word terminated by the critical symbol.
    c_end: bool,
}

impl SymbolicWord {
    /// Builds a finite word. `C` is accepted only in the last position.
    pub fn finite(symbols: &[Symbol]) -> Result<Self, WordError> {
        let mut pre = Bits::new();
        let mut c_end = false;
        for (i, &s) in symbols.iter().enumerate() {
            match s {
                Symbol::C if i + 1 == symbols.len() => c_end = true,
                Symbol::C => return Err(WordError::MisplacedC { position: i }),
                s => pre.push(s == Symbol::R),
            }
        }
        Ok(SymbolicWord {
            pre,
            per: Bits::new(),
            c_end,
        })
    }

    /// Builds an eventually periodic word from a preperiod and a repeating
    /// period, normalizing the representation. An empty period yields a finite
    /// word. `C` is rejected anywhere in an infinite word.
    pub fn eventually_periodic(preperiod: &[Symbol], period: &[Symbol]) -> Result<Self, WordError> {
        if period.is_empty() {
            return Self::finite(preperiod);
        }
        for (i, &s) in preperiod.iter().enumerate() {
            if s == Symbol::C {
                return Err(WordError::MisplacedC { position: i });
            }
        }
        for (i, &s) in period.iter().enumerate() {
            if s == Symbol::C {
                return Err(WordError::MisplacedC {
                    position: preperiod.len() + i,
                });
            }
        }
        let pre: Bits = preperiod.iter().map(|&s| s == Symbol::R).collect();
        let per: Bits = period.iter().map(|&s| s == Symbol::R).collect();
        Ok(Self::assemble(pre, per, false))
    }

    /// Builds a purely periodic word (empty preperiod).
    pub fn purely_periodic(period: &[Symbol]) -> Result<Self, WordError> {
        Self::eventually_periodic(&[], period)
    }

    /// Crate-internal constructor from raw bits (no `C`); normalizes.
    pub(crate) fn from_bits(pre: Bits, per: Bits) -> Self {
        Self::assemble(pre, per, false)
    }

    /// Crate-internal view of the period bits (`true` = `R`).
    pub(crate) fn period_bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.per
    }

    fn assemble(pre: Bits, per: Bits, c_end: bool) -> Self {
        let mut word = SymbolicWord { pre, per, c_end };
        word.normalize();
        word
    }

    /// Cuts the period to primitive form, then folds preperiod symbols that
    /// duplicate the end of the cycle into the cycle. The result is the unique
    /// minimal representation of the sequence the word denotes.
    fn normalize(&mut self) {
        let n = self.per.len();
        if n == 0 {
            return;
        }
        for d in 1..=n / 2 {
            if n % d == 0 && self.per[..n - d] == self.per[d..] {
                self.per.truncate(d);
                break;
            }
        }
        while !self.pre.is_empty()
            && self.pre[self.pre.len() - 1] == self.per[self.per.len() - 1]
        {
            self.pre.pop();
            let bit = self.per.pop().expect("period is non-empty");
            self.per.insert(0, bit);
        }
    }

    /// Number of symbols the word can supply; `None` for infinite words.
    pub fn finite_len(&self) -> Option<usize> {
        if self.per.is_empty() {
            Some(self.pre.len() + usize::from(self.c_end))
        } else {
            None
        }
    }

    /// True when the word denotes an infinite (eventually periodic) sequence.
    pub fn is_periodic(&self) -> bool {
        !self.per.is_empty()
    }

    /// True when the word is a finite symbol list.
    pub fn is_finite(&self) -> bool {
        self.per.is_empty()
    }

    /// True when the word is periodic with an empty preperiod.
    pub fn is_purely_periodic(&self) -> bool {
        self.is_periodic() && self.pre.is_empty()
    }

    /// True for a finite word terminated by `C` (a superstable word).
    pub fn ends_with_c(&self) -> bool {
        self.c_end
    }

    /// True when `C` occurs anywhere in the word.
    pub fn contains_c(&self) -> bool {
        self.c_end
    }

    /// Length of the preperiod (for finite words, the whole length).
    pub fn preperiod_len(&self) -> usize {
        self.pre.len() + usize::from(self.c_end)
    }

    /// Length of the primitive period; 0 for finite words.
    pub fn period_len(&self) -> usize {
        self.per.len()
    }

    /// The preperiod as symbols (for finite words, the whole word).
    pub fn preperiod(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.pre.iter().by_vals().map(Symbol::from_bit).collect();
        if self.c_end {
            out.push(Symbol::C);
        }
        out
    }

    /// The primitive period as symbols; empty for finite words.
    pub fn period(&self) -> Vec<Symbol> {
        self.per.iter().by_vals().map(Symbol::from_bit).collect()
    }

    /// Symbol at `index`, or `None` past the end of a finite word.
    pub fn symbol_at(&self, index: usize) -> Option<Symbol> {
        let body = self.pre.len();
        if index < body {
            return Some(Symbol::from_bit(self.pre[index]));
        }
        if self.c_end {
            return (index == body).then_some(Symbol::C);
        }
        if self.per.is_empty() {
            return None;
        }
        Some(Symbol::from_bit(self.per[(index - body) % self.per.len()]))
    }

    /// Materializes the first `n` symbols.
    pub fn expand(&self, n: usize) -> Result<Vec<Symbol>, WordError> {
        if let Some(available) = self.finite_len() {
            if available < n {
                return Err(WordError::TooShort {
                    requested: n,
                    available,
                });
            }
        }
        Ok((0..n)
            .map(|i| self.symbol_at(i).expect("index below available length"))
            .collect())
    }

    /// Drops the first `k` symbols and renormalizes. A finite word must be
    /// longer than `k`.
    pub fn shift(&self, k: usize) -> Result<Self, WordError> {
        if let Some(available) = self.finite_len() {
            if available <= k {
                return Err(WordError::TooShort {
                    requested: k + 1,
                    available,
                });
            }
            let keep = &self.pre[k.min(self.pre.len())..];
            return Ok(Self::assemble(keep.to_bitvec(), Bits::new(), self.c_end));
        }
        if k <= self.pre.len() {
            let pre = self.pre[k..].to_bitvec();
            Ok(Self::assemble(pre, self.per.clone(), false))
        } else {
            let r = (k - self.pre.len()) % self.per.len();
            let mut per = self.per[r..].to_bitvec();
            per.extend_from_bitslice(&self.per[..r]);
            Ok(Self::assemble(Bits::new(), per, false))
        }
    }

    /// Kneading comparison: positional order `L < C < R` at the first
    /// differing index, reversed when the shared prefix contains an odd number
    /// of `R` symbols. Words that agree at every comparable position (one may
    /// be a prefix of the other, or both may be infinite and identical over a
    /// full common super-period) compare `Equal`.
    pub fn compare(&self, other: &Self) -> Ordering {
        cmp_tails(self, 0, other, 0).0
    }

    /// [`compare`](Self::compare) plus the deciding mismatch, when one exists.
    pub fn compare_detailed(&self, other: &Self) -> (Ordering, Option<Mismatch>) {
        cmp_tails(self, 0, other, 0)
    }

    /// Largest shift distance that can differ from any other: one full cycle
    /// for eventually periodic words, length − 1 for finite words.
    pub fn max_shift(&self) -> usize {
        match self.finite_len() {
            Some(len) => len.saturating_sub(1),
            None => self.pre.len() + self.per.len(),
        }
    }

    /// First shift `k` in `1..=horizon` whose tail exceeds the word in the
    /// kneading order, or `None` when the word is admissible out to `horizon`.
    /// The horizon is clamped to one full cycle for periodic words; a finite
    /// word shorter than the requested horizon is an error.
    pub fn violating_shift_within(&self, horizon: usize) -> Result<Option<usize>, WordError> {
        let max = self.max_shift();
        let effective = if self.is_periodic() {
            horizon.min(max)
        } else if horizon > max {
            return Err(WordError::TooShort {
                requested: horizon,
                available: max,
            });
        } else {
            horizon
        };
        for k in 1..=effective {
            if cmp_tails(self, k, self, 0).0 == Ordering::Greater {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// [`violating_shift_within`](Self::violating_shift_within) over every
    /// distinct shift the word has.
    pub fn violating_shift(&self) -> Option<usize> {
        self.violating_shift_within(self.max_shift())
            .expect("horizon bounded by max_shift")
    }

    /// Shift-maximality out to `horizon`: no shift in `1..=horizon` exceeds
    /// the word. Admissible words are exactly the realizable kneading words.
    pub fn is_admissible_within(&self, horizon: usize) -> Result<bool, WordError> {
        Ok(self.violating_shift_within(horizon)?.is_none())
    }

    /// Shift-maximality over every distinct shift (one full cycle for periodic
    /// words, all proper tails for finite words).
    pub fn is_admissible(&self) -> bool {
        self.violating_shift().is_none()
    }
}

/// Compares the tails of `a` and `b` starting at `a_off` and `b_off` without
/// materializing either, walking just far enough to decide the order.
fn cmp_tails(
    a: &SymbolicWord,
    a_off: usize,
    b: &SymbolicWord,
    b_off: usize,
) -> (Ordering, Option<Mismatch>) {
    let horizon = pair_horizon(a, a_off, b, b_off);
    let mut even_r = true;
    for i in 0..horizon {
        let sa = a.symbol_at(a_off + i).expect("index below pair horizon");
        let sb = b.symbol_at(b_off + i).expect("index below pair horizon");
        if sa != sb {
            let positional = sa.cmp(&sb);
            let ordering = if even_r {
                positional
            } else {
                positional.reverse()
            };
            return (
                ordering,
                Some(Mismatch {
                    index: i,
                    left: sa,
                    right: sb,
                    even_r_prefix: even_r,
                }),
            );
        }
        if sa == Symbol::R {
            even_r = !even_r;
        }
    }
    (Ordering::Equal, None)
}

/// Number of positions after which two tails are decided: the shorter finite
/// length, or for two infinite tails one full common super-period beyond the
/// longer preperiod.
fn pair_horizon(a: &SymbolicWord, a_off: usize, b: &SymbolicWord, b_off: usize) -> usize {
    match (a.finite_len(), b.finite_len()) {
        (Some(x), Some(y)) => x.saturating_sub(a_off).min(y.saturating_sub(b_off)),
        (Some(x), None) => x.saturating_sub(a_off),
        (None, Some(y)) => y.saturating_sub(b_off),
        (None, None) => {
            let pre_a = a.pre.len().saturating_sub(a_off);
            let pre_b = b.pre.len().saturating_sub(b_off);
            pre_a
                .max(pre_b)
                .saturating_add(lcm_saturating(a.per.len(), b.per.len()))
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple, saturating at `usize::MAX` rather than overflowing.
pub(crate) fn lcm_saturating(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    let g = gcd(a, b);
    (a / g).saturating_mul(b)
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.pre.iter().by_vals() {
            write!(f, "{}", Symbol::from_bit(bit).as_char())?;
        }
        if self.c_end {
            write!(f, "C")?;
        }
        if !self.per.is_empty() {
            write!(f, "(")?;
            for bit in self.per.iter().by_vals() {
                write!(f, "{}", Symbol::from_bit(bit).as_char())?;
            }
            write!(f, ")*")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicWord({self})")
    }
}

impl FromStr for SymbolicWord {
    type Err = WordError;

    /// Parses the text grammar: a finite word is a string over `{R, L, C}`;
    /// a periodic word is an optional prefix followed by `(body)*`,
    /// e.g. `RL(R)*` for `R L R R R …`.
    fn from_str(s: &str) -> Result<Self, WordError> {
        let s = s.trim();
        let parse_error = |reason: &str| WordError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(parse_error("empty input"));
        }
        let parse_symbols = |part: &str| -> Result<Vec<Symbol>, WordError> {
            part.chars()
                .map(|c| {
                    Symbol::from_char(c)
                        .ok_or_else(|| parse_error(&format!("unexpected character {c:?}")))
                })
                .collect()
        };
        match s.find('(') {
            None => Self::finite(&parse_symbols(s)?),
            Some(open) => {
                if !s.ends_with(")*") {
                    return Err(parse_error("periodic words must end with \")*\""));
                }
                let body = &s[open + 1..s.len() - 2];
                if body.is_empty() {
                    return Err(parse_error("empty period body"));
                }
                if body.contains('(') || body.contains(')') {
                    return Err(parse_error("nested parentheses"));
                }
                let prefix = &s[..open];
                Self::eventually_periodic(&parse_symbols(prefix)?, &parse_symbols(body)?)
            }
        }
    }
}
