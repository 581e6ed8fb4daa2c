//! The quadratic family `x ↦ 1 − u·x²` on `[−1, 1]`: orbits, itineraries,
//! Lyapunov exponents, lap-count topological entropy, bifurcation scans, and
//! gap sequences built from chaotic orbits.
//!
//! For `u ∈ (0, 2]` the interval `[−1, 1]` maps into itself (the critical
//! value is 1 and the endpoints go to `1 − u ≥ −1`), so every orbit stays
//! confined. The critical point 0 splits the interval into the `L` side
//! (negative) and the `R` side (positive); reading an orbit through that
//! partition produces the symbolic words of [`crate::word`].

use thiserror::Error;

use crate::prime::{GapProvenance, GapSequence};
use crate::word::{Symbol, SymbolicWord};

/// Default cap on per-iterate lap counts in the entropy estimator.
pub const DEFAULT_LAP_BUDGET: usize = 10_000_000;

/// Seed used for attractor sampling in [`bifurcation_scan`]; off the critical
/// point and asymmetric, so it falls into the attractor for every parameter.
const SCAN_SEED: f64 = 0.3;

/// Errors from orbit and estimator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    /// An argument lies outside its mathematical domain.
    #[error("{name} = {value} is outside {bounds}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        bounds: &'static str,
    },
    /// A count argument is below the minimum the routine can work with.
    #[error("{name} must be at least {min}, got {got}")]
    CountTooSmall {
        name: &'static str,
        min: usize,
        got: usize,
    },
    /// The entropy estimator's per-iterate lap count exceeded its cap.
    #[error("lap count {count} at iterate {level} exceeds the cap of {cap}")]
    BudgetExceeded {
        level: usize,
        count: usize,
        cap: usize,
    },
    /// The orbit never visited the negative half: no gaps can be recorded.
    #[error("orbit contains no negative points")]
    NoPrimePoints,
}

/// Validated parameter of the quadratic family `x ↦ 1 − u·x²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapParams {
    u: f64,
}

impl MapParams {
    /// The critical point, shared by every member of the family.
    pub const CRITICAL_POINT: f64 = 0.0;

    /// Endpoints of the invariant interval.
    pub const DOMAIN: (f64, f64) = (-1.0, 1.0);

    /// Validates `u ∈ (0, 2]` (the confinement range).
    pub fn new(u: f64) -> Result<Self, DynamicsError> {
        if u > 0.0 && u <= 2.0 {
            Ok(MapParams { u })
        } else {
            Err(DynamicsError::OutOfDomain {
                name: "u",
                value: u,
                bounds: "(0, 2]",
            })
        }
    }

    /// The map parameter.
    pub fn u(self) -> f64 {
        self.u
    }

    /// One application of the map.
    pub fn apply(self, x: f64) -> f64 {
        1.0 - self.u * x * x
    }
}

fn validate_point(name: &'static str, x: f64) -> Result<(), DynamicsError> {
    if x >= -1.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(DynamicsError::OutOfDomain {
            name,
            value: x,
            bounds: "[-1, 1]",
        })
    }
}

fn require_at_least(
    name: &'static str,
    min: usize,
    got: usize,
) -> Result<(), DynamicsError> {
    if got >= min {
        Ok(())
    } else {
        Err(DynamicsError::CountTooSmall { name, min, got })
    }
}

/// A recorded orbit segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    /// The validated map parameter.
    pub params: MapParams,
    /// The starting point the transient was run from.
    pub seed: f64,
    /// Iterations discarded before recording began.
    pub transient: usize,
    /// Recorded points; `points[0]` is the post-transient starting point.
    pub points: Vec<f64>,
}

/// One application of the map with full argument validation.
pub fn step(u: f64, x: f64) -> Result<f64, DynamicsError> {
    let params = MapParams::new(u)?;
    validate_point("x", x)?;
    Ok(params.apply(x))
}

/// Runs `transient` discarded iterations from `x0`, then records `n` points
/// (the first recorded point is the post-transient state itself).
pub fn orbit(u: f64, x0: f64, n: usize, transient: usize) -> Result<Orbit, DynamicsError> {
    let params = MapParams::new(u)?;
    validate_point("x0", x0)?;
    require_at_least("n", 1, n)?;
    let mut x = x0;
    for _ in 0..transient {
        x = params.apply(x);
    }
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        debug_assert!((-1.0..=1.0).contains(&x), "orbit escaped the interval");
        points.push(x);
        x = params.apply(x);
    }
    Ok(Orbit {
        params,
        seed: x0,
        transient,
        points,
    })
}

/// Reads an orbit through the critical partition: `L` for `x < −c_epsilon`,
/// `R` for `x > c_epsilon`, `C` for `|x| ≤ c_epsilon`. Since `C` marks a
/// landing on the critical point, it closes the word: recording stops there,
/// so the result may be shorter than `n` symbols.
pub fn itinerary(
    u: f64,
    x0: f64,
    n: usize,
    c_epsilon: f64,
) -> Result<SymbolicWord, DynamicsError> {
    let params = MapParams::new(u)?;
    validate_point("x0", x0)?;
    require_at_least("n", 1, n)?;
    if !(c_epsilon >= 0.0 && c_epsilon.is_finite()) {
        return Err(DynamicsError::OutOfDomain {
            name: "c_epsilon",
            value: c_epsilon,
            bounds: "[0, inf)",
        });
    }
    let mut symbols = Vec::with_capacity(n);
    let mut x = x0;
    for _ in 0..n {
        if x.abs() <= c_epsilon {
            symbols.push(Symbol::C);
            break;
        }
        symbols.push(if x < 0.0 { Symbol::L } else { Symbol::R });
        x = params.apply(x);
    }
    Ok(SymbolicWord::finite(&symbols).expect("C can only be the final symbol"))
}

/// Average expansion rate `(1/n) Σ ln|2·u·x_k|` over the post-transient
/// orbit. An orbit that lands on the critical point (|x| below 1e−300) has a
/// divergent logarithm; the result is then negative infinity.
pub fn lyapunov(u: f64, x0: f64, n: usize, transient: usize) -> Result<f64, DynamicsError> {
    let params = MapParams::new(u)?;
    validate_point("x0", x0)?;
    require_at_least("n", 1, n)?;
    let mut x = x0;
    for _ in 0..transient {
        x = params.apply(x);
    }
    let mut sum = 0.0;
    for _ in 0..n {
        let ax = x.abs();
        if ax < 1e-300 {
            return Ok(f64::NEG_INFINITY);
        }
        sum += (2.0 * u * ax).ln();
        x = params.apply(x);
    }
    Ok(sum / n as f64)
}

/// Topological entropy estimated from lap-count growth with the default cap.
pub fn topological_entropy(u: f64, n_max: usize) -> Result<f64, DynamicsError> {
    topological_entropy_with_cap(u, n_max, DEFAULT_LAP_BUDGET)
}

/// Topological entropy estimated from lap-count growth.
///
/// The turning points of the `k`-th iterate are the preimages of the critical
/// point under the `(k−1)`-th, so backward iteration of `{0}` enumerates the
/// new turning points level by level. Their count grows like `e^(h·k)`; the
/// estimate is the least-squares slope of its logarithm over the last half of
/// the levels `1..=n_max`. A level whose preimages die out entirely (the
/// critical point leaves the reachable interval, as happens for small `u`)
/// means laps stop multiplying: the entropy is 0.
pub fn topological_entropy_with_cap(
    u: f64,
    n_max: usize,
    cap: usize,
) -> Result<f64, DynamicsError> {
    let params = MapParams::new(u)?;
    require_at_least("n_max", 10, n_max)?;
    let u = params.u();
    let mut current = vec![0.0f64];
    let mut logs: Vec<(f64, f64)> = Vec::with_capacity(n_max);
    for level in 1..=n_max {
        if current.is_empty() {
            return Ok(0.0);
        }
        if current.len() > cap {
            return Err(DynamicsError::BudgetExceeded {
                level,
                count: current.len(),
                cap,
            });
        }
        logs.push((level as f64, (current.len() as f64).ln()));
        if level == n_max {
            break;
        }
        let mut next = Vec::with_capacity(current.len() * 2);
        for &y in &current {
            let t = (1.0 - y) / u;
            if t == 0.0 {
                next.push(0.0);
            } else if t > 0.0 && t <= 1.0 {
                let root = t.sqrt();
                next.push(root);
                next.push(-root);
            }
        }
        next.sort_by(f64::total_cmp);
        next.dedup();
        current = next;
    }
    let lo = (n_max / 2 + 1) as f64;
    Ok(crate::least_squares_slope(
        logs.iter().filter(|(k, _)| *k >= lo).copied(),
    ))
}

/// Samples attractors across a parameter grid: for each of `u_steps` equally
/// spaced parameters in `[u_min, u_max]`, records `points_per_u` orbit points
/// after `transient` discarded iterations, as flat `(u, x)` pairs.
pub fn bifurcation_scan(
    u_min: f64,
    u_max: f64,
    u_steps: usize,
    points_per_u: usize,
    transient: usize,
) -> Result<Vec<(f64, f64)>, DynamicsError> {
    MapParams::new(u_min)?;
    MapParams::new(u_max)?;
    if !(u_min < u_max) {
        return Err(DynamicsError::OutOfDomain {
            name: "u_min",
            value: u_min,
            bounds: "(0, u_max)",
        });
    }
    require_at_least("u_steps", 2, u_steps)?;
    require_at_least("points_per_u", 1, points_per_u)?;
    let mut pairs = Vec::with_capacity(u_steps * points_per_u);
    for i in 0..u_steps {
        let u = if i == u_steps - 1 {
            u_max
        } else {
            u_min + (u_max - u_min) * i as f64 / (u_steps - 1) as f64
        };
        let orb = orbit(u, SCAN_SEED, points_per_u, transient)?;
        pairs.extend(orb.points.iter().map(|&x| (u, x)));
    }
    Ok(pairs)
}

/// Marks the orbit positions with `x < 0` and records the index differences
/// between consecutive marks, mirroring how prime gaps are taken between
/// consecutive primes. Errors when the orbit never goes negative.
pub fn constructed_prime_gaps(
    u: f64,
    x0: f64,
    n: usize,
    transient: usize,
) -> Result<GapSequence, DynamicsError> {
    let orb = orbit(u, x0, n, transient)?;
    let marks: Vec<usize> = orb
        .points
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x < 0.0)
        .map(|(k, _)| k)
        .collect();
    if marks.is_empty() {
        return Err(DynamicsError::NoPrimePoints);
    }
    let gaps = marks
        .windows(2)
        .map(|pair| (pair[1] - pair[0]) as u64)
        .collect();
    Ok(GapSequence::new(
        GapProvenance::ChaosOrbit {
            u,
            x0,
            n,
            transient,
        },
        gaps,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    /// Attracting fixed point of `x = 1 − 0.5·x²` by the quadratic formula.
    fn fixed_point_oracle() -> f64 {
        3.0f64.sqrt() - 1.0
    }

    #[test]
    fn step_evaluates_the_map_exactly() {
        assert_eq!(step(2.0, 1.0).unwrap(), -1.0);
        assert_eq!(step(1.5437, 0.0).unwrap(), 1.0);
        assert_eq!(step(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn step_rejects_out_of_domain_arguments() {
        for (u, x) in [(0.0, 0.5), (2.5, 0.0), (-1.0, 0.0), (f64::NAN, 0.0)] {
            assert!(matches!(
                step(u, x),
                Err(DynamicsError::OutOfDomain { name: "u", .. })
            ));
        }
        for x in [1.5, -1.0001, f64::NAN] {
            assert!(matches!(
                step(1.0, x),
                Err(DynamicsError::OutOfDomain { name: "x", .. })
            ));
        }
    }

    #[test]
    fn orbit_records_post_transient_points() {
        assert_eq!(orbit(2.0, 1.0, 3, 0).unwrap().points, vec![1.0, -1.0, -1.0]);
        assert_eq!(orbit(2.0, 1.0, 2, 1).unwrap().points, vec![-1.0, -1.0]);
        // Superstable 2-cycle through the critical point, exact in floats.
        assert_eq!(
            orbit(1.0, 0.0, 4, 0).unwrap().points,
            vec![0.0, 1.0, 0.0, 1.0]
        );
        assert_eq!(orbit(1.7, 0.2, 17, 5).unwrap().points.len(), 17);
        assert!(matches!(
            orbit(1.0, 0.0, 0, 0),
            Err(DynamicsError::CountTooSmall { name: "n", .. })
        ));
    }

    #[test]
    fn orbit_converges_to_the_quadratic_formula_fixed_point() {
        let x_star = fixed_point_oracle();
        let settled = orbit(0.5, 0.3, 1, 500).unwrap().points[0];
        assert!(
            (settled - x_star).abs() < 1e-12,
            "settled at {settled}, oracle {x_star}"
        );
    }

    #[test]
    fn itinerary_reads_the_critical_partition() {
        assert_eq!(itinerary(2.0, 1.0, 5, 0.0).unwrap().to_string(), "RLLLL");
        assert_eq!(itinerary(1.0, 1.0, 2, 1e-12).unwrap().to_string(), "RC");
        assert_eq!(
            itinerary(1.5437, 1.0, 8, 0.0).unwrap().to_string(),
            "RLRRRRRR"
        );
    }

    #[test]
    fn itinerary_stops_at_the_critical_symbol() {
        // Hitting C closes the word even when more symbols were requested.
        let word = itinerary(1.0, 1.0, 10, 1e-12).unwrap();
        assert_eq!(word.to_string(), "RC");
        assert_eq!(word.finite_len(), Some(2));
        // A widened band catches the near-critical third point of the 3-cycle.
        assert_eq!(itinerary(1.754, 1.0, 5, 1e-2).unwrap().to_string(), "RLC");
    }

    #[test]
    fn itinerary_prefixes_match_known_kneading_words() {
        // Just above the band-merging parameter the critical orbit shadows
        // the repelling fixed point for a long R run, then escapes; the
        // escape must land on the greater side of the kneading order.
        let near_merge = itinerary(1.5437, 1.0, 25, 0.0).unwrap();
        assert_eq!(near_merge.to_string(), "RLRRRRRRRRRRRRRRRRRRRRLRL");
        let at_merge: SymbolicWord = "RL(R)*".parse().unwrap();
        assert_eq!(
            near_merge.compare(&at_merge),
            std::cmp::Ordering::Greater,
            "kneading words grow with the parameter"
        );
        // At u = 2 the critical orbit 1 → −1 → −1 → … is exact in floats,
        // so the full word R L L L … suffers no shadowing error at all.
        let expected = format!("R{}", "L".repeat(39));
        assert_eq!(
            itinerary(2.0, 1.0, 40, 0.0).unwrap().to_string(),
            expected
        );
    }

    #[test]
    fn lyapunov_matches_analytic_values() {
        // Conjugacy with the tent map gives exactly ln 2 at u = 2.
        let chaotic = lyapunov(2.0, 0.3, 1_000_000, 1_000).unwrap();
        assert!(
            (chaotic - LN_2).abs() < 0.01,
            "lyapunov at u=2 was {chaotic}, expected about {LN_2}"
        );
        // At the attracting fixed point the exponent is ln|f'(x*)| = ln x*.
        let stable = lyapunov(0.5, 0.3, 100_000, 1_000).unwrap();
        let expected = fixed_point_oracle().ln();
        assert!(
            (stable - expected).abs() < 1e-9,
            "lyapunov at u=0.5 was {stable}, expected {expected}"
        );
        // Near the band-merging parameter the exponent sits around 0.34.
        let merged = lyapunov(1.5437, 0.3, 1_000_000, 1_000).unwrap();
        assert!(
            (merged - 0.34).abs() < 0.02,
            "lyapunov at u=1.5437 was {merged}"
        );
    }

    #[test]
    fn lyapunov_reports_superstable_hits_as_negative_infinity() {
        assert_eq!(lyapunov(1.0, 0.0, 10, 0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn entropy_is_exact_where_lap_counts_are_exact() {
        // Full horseshoe: lap counts double every iterate.
        let full = topological_entropy(2.0, 20).unwrap();
        assert!(
            (full - LN_2).abs() < 1e-9,
            "entropy at u=2 was {full}, expected {LN_2}"
        );
        // Inside the period-doubling cascade the counts stay constant.
        let cascade = topological_entropy(1.2, 24).unwrap();
        assert!(
            cascade.abs() < 1e-9,
            "entropy at u=1.2 was {cascade}, expected 0"
        );
        // The critical point has no preimages at all for small u.
        assert_eq!(topological_entropy(0.5, 12).unwrap(), 0.0);
    }

    #[test]
    fn entropy_near_band_merging_is_half_of_ln_two() {
        let h = topological_entropy(1.5437, 24).unwrap();
        assert!(
            (h - LN_2 / 2.0).abs() < 0.02,
            "entropy at u=1.5437 was {h}, expected about {}",
            LN_2 / 2.0
        );
    }

    #[test]
    fn entropy_enforces_the_lap_cap() {
        // Counts are 2^(level−1) at u = 2, first exceeding 1000 at level 11.
        assert_eq!(
            topological_entropy_with_cap(2.0, 30, 1_000),
            Err(DynamicsError::BudgetExceeded {
                level: 11,
                count: 1_024,
                cap: 1_000,
            })
        );
        assert!(matches!(
            topological_entropy(1.5, 9),
            Err(DynamicsError::CountTooSmall { name: "n_max", .. })
        ));
    }

    #[test]
    fn bifurcation_scan_reproduces_known_attractors() {
        let pairs = bifurcation_scan(0.5, 1.0, 2, 30, 500).unwrap();
        assert_eq!(pairs.len(), 60);
        let x_star = fixed_point_oracle();
        for &(u, x) in &pairs {
            if u == 0.5 {
                assert!((x - x_star).abs() < 1e-6, "fixed point at u=0.5: {x}");
            } else {
                assert_eq!(u, 1.0);
                // Superstable 2-cycle alternating through {0, 1}.
                assert!(x.abs() < 1e-6 || (x - 1.0).abs() < 1e-6, "cycle at u=1: {x}");
            }
        }
        // The merged band straddles the critical point.
        let merged = bifurcation_scan(1.5437, 2.0, 2, 200, 500).unwrap();
        let band: Vec<f64> = merged
            .iter()
            .filter(|(u, _)| *u == 1.5437)
            .map(|&(_, x)| x)
            .collect();
        assert!(band.iter().cloned().fold(f64::INFINITY, f64::min) < 0.0);
        assert!(band.iter().cloned().fold(f64::NEG_INFINITY, f64::max) > 0.0);
    }

    #[test]
    fn bifurcation_scan_validates_its_grid() {
        assert!(matches!(
            bifurcation_scan(1.5, 1.5, 2, 10, 10),
            Err(DynamicsError::OutOfDomain { name: "u_min", .. })
        ));
        assert!(matches!(
            bifurcation_scan(1.0, 2.0, 1, 10, 10),
            Err(DynamicsError::CountTooSmall { name: "u_steps", .. })
        ));
    }

    #[test]
    fn constructed_gaps_mark_negative_points() {
        // Orbit 1, −1, −1, −1, −1, −1: marks at 1..5, all gaps 1.
        let gaps = constructed_prime_gaps(2.0, 1.0, 6, 0).unwrap();
        assert_eq!(gaps.gaps(), &[1, 1, 1, 1]);
        assert_eq!(
            gaps.provenance(),
            &GapProvenance::ChaosOrbit {
                u: 2.0,
                x0: 1.0,
                n: 6,
                transient: 0,
            }
        );
    }

    #[test]
    fn constructed_gaps_in_the_merged_band_behave_like_prime_gaps() {
        let gaps = constructed_prime_gaps(1.5437, 0.5, 10_000, 1_000).unwrap();
        assert!(!gaps.is_empty());
        // A negative point is at most 0.5437 in magnitude, so its successor
        // 1 − u·x² ≥ 0.543 is positive: marks are never adjacent.
        assert!(gaps.gaps().iter().all(|&g| g >= 2));
        // The mark–skip–mark pattern occurs routinely in the merged band.
        assert!(gaps.gaps().iter().any(|&g| g == 2));
        // Index arithmetic: the gaps cannot outrun the recorded orbit.
        assert!(gaps.gaps().iter().sum::<u64>() <= 10_000);
    }

    #[test]
    fn constructed_gaps_error_when_the_orbit_stays_positive() {
        assert_eq!(
            constructed_prime_gaps(0.5, 0.3, 1_000, 100),
            Err(DynamicsError::NoPrimePoints)
        );
    }

    #[test]
    fn orbits_stay_confined_to_the_interval() {
        for &(u, x0) in &[(0.3, 0.9), (1.0, -1.0), (1.9, 0.123), (2.0, 0.7)] {
            let orb = orbit(u, x0, 2_000, 0).unwrap();
            assert!(
                orb.points.iter().all(|&x| (-1.0..=1.0).contains(&x)),
                "orbit escaped at u={u}, x0={x0}"
            );
        }
    }
}
