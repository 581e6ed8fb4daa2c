//! Gap histograms and their comparison: how the distribution of real prime
//! gaps lines up against gaps constructed from a chaotic orbit.
//!
//! The comparison deliberately renders no verdict. It reports normalized
//! frequencies, an exponential-tail fit for each side, and the total
//! variation distance between the two distributions; judging similarity is
//! left to the reader of the numbers.

use std::collections::BTreeMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::format_float;
use crate::prime::{GapProvenance, GapSequence};

/// Minimum bin count admitted to the exponential-tail fit; sparser bins add
/// log-of-small-count noise.
const TAIL_FIT_MIN_COUNT: u64 = 5;

/// Errors from histogram construction and comparison.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    /// No gaps to count.
    #[error("gap sequence is empty")]
    EmptyInput,
}

/// Exact gap counts from one source.
#[derive(Clone, Debug, PartialEq)]
pub struct GapHistogram {
    /// Generation parameters of the underlying sequence.
    pub provenance: GapProvenance,
    /// Exact count per gap value, keyed ascending.
    pub bins: BTreeMap<u64, u64>,
    /// Number of gaps counted; equals the sum of all bin counts.
    pub total: u64,
}

impl GapHistogram {
    /// Normalized frequency table: count divided by total, per gap.
    pub fn frequencies(&self) -> BTreeMap<u64, f64> {
        self.bins
            .iter()
            .map(|(&gap, &count)| (gap, count as f64 / self.total as f64))
            .collect()
    }

    /// Least-squares slope of `ln(frequency)` against the gap value over
    /// bins with at least five counts; `None` with fewer than two such bins.
    pub fn tail_slope(&self) -> Option<f64> {
        let points: Vec<(f64, f64)> = self
            .bins
            .iter()
            .filter(|&(_, &count)| count >= TAIL_FIT_MIN_COUNT)
            .map(|(&gap, &count)| (gap as f64, (count as f64 / self.total as f64).ln()))
            .collect();
        if points.len() < 2 {
            return None;
        }
        Some(crate::least_squares_slope(points.into_iter()))
    }

    /// Writes `# key=value` metadata lines followed by
    /// `gap,count,frequency` CSV rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (key, value) in self.provenance.metadata() {
            writeln!(out, "# {key}={value}")?;
        }
        writeln!(out, "gap,count,frequency")?;
        for (&gap, &count) in &self.bins {
            let frequency = count as f64 / self.total as f64;
            writeln!(out, "{gap},{count},{}", format_float(frequency))?;
        }
        Ok(())
    }
}

/// Exact histogram of a gap sequence.
pub fn histogram(gaps: &GapSequence) -> Result<GapHistogram, StatsError> {
    if gaps.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut bins = BTreeMap::new();
    for &gap in gaps.gaps() {
        *bins.entry(gap).or_insert(0u64) += 1;
    }
    Ok(GapHistogram {
        provenance: gaps.provenance().clone(),
        bins,
        total: gaps.len() as u64,
    })
}

/// Side-by-side summary of two gap histograms; renders no verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct HistogramComparison {
    /// Normalized frequencies of the first histogram.
    pub left_frequencies: BTreeMap<u64, f64>,
    /// Normalized frequencies of the second histogram.
    pub right_frequencies: BTreeMap<u64, f64>,
    /// Exponential-tail fit slope of the first histogram, if fittable.
    pub left_tail_slope: Option<f64>,
    /// Exponential-tail fit slope of the second histogram, if fittable.
    pub right_tail_slope: Option<f64>,
    /// Total variation distance between the normalized distributions,
    /// in `[0, 1]` and symmetric in its arguments.
    pub total_variation: f64,
}

impl HistogramComparison {
    /// Writes the summary as a flat `key=value` block.
    pub fn write_summary<W: Write>(
        &self,
        mut out: W,
        left: &GapHistogram,
        right: &GapHistogram,
    ) -> io::Result<()> {
        let slope = |s: Option<f64>| s.map_or_else(|| "none".to_string(), format_float);
        writeln!(out, "left_source={}", left.provenance.source_name())?;
        writeln!(out, "left_total={}", left.total)?;
        writeln!(out, "left_distinct_gaps={}", left.bins.len())?;
        writeln!(out, "left_tail_slope={}", slope(self.left_tail_slope))?;
        writeln!(out, "right_source={}", right.provenance.source_name())?;
        writeln!(out, "right_total={}", right.total)?;
        writeln!(out, "right_distinct_gaps={}", right.bins.len())?;
        writeln!(out, "right_tail_slope={}", slope(self.right_tail_slope))?;
        writeln!(
            out,
            "total_variation={}",
            format_float(self.total_variation)
        )?;
        Ok(())
    }
}

/// Compares two histograms: normalized frequencies, per-side tail slopes,
/// and the total variation distance between the distributions.
pub fn compare_histograms(
    left: &GapHistogram,
    right: &GapHistogram,
) -> Result<HistogramComparison, StatsError> {
    if left.total == 0 || right.total == 0 {
        return Err(StatsError::EmptyInput);
    }
    let left_frequencies = left.frequencies();
    let right_frequencies = right.frequencies();
    let mut gaps: Vec<u64> = left_frequencies
        .keys()
        .chain(right_frequencies.keys())
        .copied()
        .collect();
    gaps.sort_unstable();
    gaps.dedup();
    let total_variation = 0.5
        * gaps
            .iter()
            .map(|gap| {
                let p = left_frequencies.get(gap).copied().unwrap_or(0.0);
                let q = right_frequencies.get(gap).copied().unwrap_or(0.0);
                (p - q).abs()
            })
            .sum::<f64>();
    Ok(HistogramComparison {
        left_tail_slope: left.tail_slope(),
        right_tail_slope: right.tail_slope(),
        left_frequencies,
        right_frequencies,
        total_variation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logistic::constructed_prime_gaps;
    use crate::prime::prime_gaps;

    #[test]
    fn histogram_counts_the_known_small_prime_gaps() {
        let hist = histogram(&prime_gaps(30).unwrap()).unwrap();
        let expected: BTreeMap<u64, u64> = [(1, 1), (2, 4), (4, 3), (6, 1)].into();
        assert_eq!(hist.bins, expected);
        assert_eq!(hist.total, 9);
        assert_eq!(hist.total, hist.bins.values().sum::<u64>());
    }

    #[test]
    fn histogram_of_a_single_gap_has_one_bin() {
        // Primes up to 4 are {2, 3}: exactly one gap.
        let hist = histogram(&prime_gaps(4).unwrap()).unwrap();
        assert_eq!(hist.bins, [(1, 1)].into());
        assert_eq!(hist.total, 1);
    }

    #[test]
    fn histogram_rejects_empty_input() {
        let empty = GapSequence::new(GapProvenance::RealPrimes { limit: 2 }, vec![]);
        assert_eq!(histogram(&empty), Err(StatsError::EmptyInput));
    }

    #[test]
    fn frequencies_are_normalized() {
        let hist = histogram(&prime_gaps(100_000).unwrap()).unwrap();
        let sum: f64 = hist.frequencies().values().sum();
        assert!((sum - 1.0).abs() < 1e-12, "frequencies summed to {sum}");
    }

    #[test]
    fn self_comparison_is_exactly_degenerate() {
        let hist = histogram(&prime_gaps(10_000).unwrap()).unwrap();
        let cmp = compare_histograms(&hist, &hist).unwrap();
        assert_eq!(cmp.total_variation, 0.0);
        assert_eq!(cmp.left_tail_slope, cmp.right_tail_slope);
        assert!(cmp.left_tail_slope.is_some());
    }

    #[test]
    fn prime_gap_tail_decays() {
        let hist = histogram(&prime_gaps(100_000).unwrap()).unwrap();
        let slope = hist.tail_slope().expect("dense bins exist");
        assert!(slope < 0.0, "tail slope was {slope}");
    }

    #[test]
    fn tail_slope_needs_at_least_two_dense_bins() {
        let hist = histogram(&prime_gaps(10).unwrap()).unwrap();
        // Gaps to 10 are 1, 2, 2: no bin reaches five counts.
        assert_eq!(hist.tail_slope(), None);
    }

    #[test]
    fn total_variation_is_a_symmetric_bounded_distance() {
        let primes = histogram(&prime_gaps(50_000).unwrap()).unwrap();
        let chaos = histogram(
            &constructed_prime_gaps(1.5437, 0.3, 50_000, 1_000).unwrap(),
        )
        .unwrap();
        let forward = compare_histograms(&primes, &chaos).unwrap();
        let backward = compare_histograms(&chaos, &primes).unwrap();
        assert_eq!(forward.total_variation, backward.total_variation);
        assert!(forward.total_variation >= 0.0);
        assert!(forward.total_variation <= 1.0);
        assert!(forward.total_variation > 0.0, "distinct sources never tie");
    }

    #[test]
    fn restricting_the_sieve_limit_preserves_shared_counts() {
        let small = prime_gaps(1_000).unwrap();
        let large = prime_gaps(10_000).unwrap();
        // The small sequence is a prefix of the large one...
        assert_eq!(small.gaps(), &large.gaps()[..small.len()]);
        // ...so histograms over that shared prefix agree exactly.
        let restricted = GapSequence::new(
            GapProvenance::RealPrimes { limit: 1_000 },
            large.gaps()[..small.len()].to_vec(),
        );
        assert_eq!(
            histogram(&small).unwrap().bins,
            histogram(&restricted).unwrap().bins
        );
    }

    #[test]
    fn csv_output_is_deterministic_and_annotated() {
        let hist = histogram(&prime_gaps(30).unwrap()).unwrap();
        let mut out = Vec::new();
        hist.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# source=real-primes\n# limit=30\ngap,count,frequency\n\
             1,1,1.1111111111111110e-1\n2,4,4.4444444444444442e-1\n\
             4,3,3.3333333333333331e-1\n6,1,1.1111111111111110e-1\n"
        );
    }

    #[test]
    fn summary_is_a_flat_key_value_block() {
        let primes = histogram(&prime_gaps(10_000).unwrap()).unwrap();
        let chaos = histogram(
            &constructed_prime_gaps(1.5437, 0.3, 10_000, 1_000).unwrap(),
        )
        .unwrap();
        let cmp = compare_histograms(&primes, &chaos).unwrap();
        let mut out = Vec::new();
        cmp.write_summary(&mut out, &primes, &chaos).unwrap();
        let text = String::from_utf8(out).unwrap();
        for line in text.lines() {
            assert!(line.contains('='), "line {line:?} is not key=value");
        }
        assert!(text.starts_with("left_source=real-primes\n"));
        assert!(text.contains("right_source=chaos-orbit\n"));
        assert!(text.contains("total_variation="));
    }
}
