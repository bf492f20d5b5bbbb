use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{Annulus, ExceptionalSet};
use crate::error::{Error, Result};
use crate::wide::WideReal;

/// Holes past `j + TRUNCATION` are covered by the tail bound.
const TRUNCATION: u32 = 60;
const MAX_DRAWS: usize = 1_000_000;
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow {
    pub j: u32,
    /// `Σ_{n ≥ j} (r_n + s_n)² / 2^{-2j}`, truncated.
    pub exact: f64,
    /// Upper bound on the truncated part of `exact`.
    pub tail_bound: f64,
    pub monte_carlo: Option<f64>,
    /// Binomial standard error at `p = exact`.
    pub sigma: Option<f64>,
    /// `(3/49) j^{-2/3}`.
    pub bound: f64,
}

impl DensityRow {
    pub fn below_bound(&self) -> bool {
        self.exact + self.tail_bound < self.bound
    }

    pub fn within_3_sigma(&self) -> Option<bool> {
        Some((self.monte_carlo? - self.exact).abs() <= 3.0 * self.sigma?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub rows: Vec<DensityRow>,
    pub samples: usize,
}

fn row_seed(seed: u64, j: u32) -> u64 {
    seed ^ (j as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Area fraction of `B(0, 2^{-j}) \ E` for each `j` in `js`.
///
/// The complement of `E` near 0 is the union of the disks `B(a_n, r_n + s_n)`,
/// which are disjoint and lie inside their annuli for `n ≥ n0`.
pub fn density_profile(
    e: &ExceptionalSet<'_>,
    js: std::ops::RangeInclusive<u32>,
    samples: usize,
    seed: u64,
) -> Result<DensityProfile> {
    let domain = e.domain();
    let n0 = domain.validate_geometry().n0;
    if *js.start() < n0 {
        return Err(Error::Precondition(format!("density rows must start at n0 = {n0}, got {}", js.start())));
    }
    let js: Vec<u32> = js.collect();
    let rows = js
        .par_iter()
        .map(|&j| {
            let scale = WideReal::pow2(j as i64);
            let last = j + TRUNCATION;
            let exact: f64 = domain
                .holes()
                .iter()
                .filter(|h| h.index >= j && h.index <= last)
                .map(|h| ((h.radius + h.margin) * scale).to_f64().powi(2))
                .sum();
            // s_{n+1} = s_n 2^{-1} (n/(n+1))^{1/3} and r_n < s_n, so the tail is
            // at most (2 s_{L+1})² Σ 4^{-k} = (16/3) s_{L+1}²
            let tail_bound = if domain.holes().iter().any(|h| h.index > last) {
                16.0 / 3.0 * (crate::domain::margin_rule(last + 1) * scale).to_f64().powi(2)
            } else {
                0.0
            };
            let (monte_carlo, sigma) = if samples == 0 {
                (None, None)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(row_seed(seed, j));
                let radius = WideReal::pow2(-(j as i64)).to_f64();
                let mut outside = 0usize;
                for _ in 0..samples {
                    let rho = radius * rng.random::<f64>().sqrt();
                    let z = Complex64::from_polar(rho, std::f64::consts::TAU * rng.random::<f64>());
                    if !e.contains(z) {
                        outside += 1;
                    }
                }
                let p = exact;
                (Some(outside as f64 / samples as f64), Some((p * (1.0 - p) / samples as f64).sqrt()))
            };
            DensityRow { j, exact, tail_bound, monte_carlo, sigma, bound: 3.0 / 49.0 * (j as f64).powf(-2.0 / 3.0) }
        })
        .collect();
    Ok(DensityProfile { rows, samples })
}

/// Uniform draws from `E ∩ A_n` by rejection from the annulus.
pub fn sample_exceptional<R: Rng>(e: &ExceptionalSet<'_>, n: u32, count: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    let ann = Annulus::new(Complex64::new(0.0, 0.0), n);
    let (r0, r1) = (ann.inner_radius(), ann.outer_radius());
    let mut out = Vec::with_capacity(count);
    let mut draws = 0usize;
    while out.len() < count {
        if draws >= MAX_DRAWS {
            return Err(Error::Sampling(format!(
                "only {} of {count} points of E ∩ A_{n} found in {MAX_DRAWS} draws",
                out.len()
            )));
        }
        draws += 1;
        let rho = (r0 * r0 + (r1 * r1 - r0 * r0) * rng.random::<f64>()).sqrt();
        let z = Complex64::from_polar(rho, std::f64::consts::TAU * rng.random::<f64>());
        if e.contains(z) {
            out.push(z);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub y: Complex64,
    /// Hole index, or `None` for the `|y| ≤ (4/3) φ(|y|) ψ(a_N)` check.
    pub hole: Option<u32>,
    pub value: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistReport {
    pub n: u32,
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// Smallest `d_n(y) / required` seen.
    pub min_margin: f64,
}

/// Pointwise check of the hole-distance lower bounds on `E ∩ A_N`:
/// `d_n ≥ a_n/21` for `n < N`, `d_N ≥ s_N`, `d_n ≥ a_N/42` for `n > N`.
pub fn dist_bounds_check(e: &ExceptionalSet<'_>, n: u32, samples: usize, seed: u64) -> Result<DistReport> {
    let domain = e.domain();
    let hole_n = domain
        .hole(n)
        .map_err(|_| Error::Precondition(format!("annulus A_{n} carries no hole")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sample_exceptional(e, n, samples, &mut rng)?;
    let a_n = hole_n.a();
    let psi_a = domain.phi().eval_psi(a_n)?;
    // beyond N + 64 every a_m is below 2^{-64} |y|, far inside the a_N/42 bound
    let holes: Vec<_> = domain.holes().iter().filter(|h| h.index <= n + 64).collect();
    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    for y in points {
        for h in &holes {
            let required = match h.index.cmp(&n) {
                std::cmp::Ordering::Less => h.a() / 21.0,
                std::cmp::Ordering::Equal => h.s(),
                std::cmp::Ordering::Greater => a_n / 42.0,
            };
            let d = h.distance(y);
            min_margin = min_margin.min(d / required);
            if d < required * (1.0 - BOUND_SLACK) {
                violations.push(Violation { y, hole: Some(h.index), value: d, required });
            }
        }
        let m = y.norm();
        let required = 4.0 / 3.0 * domain.phi().eval_phi(m)? * psi_a;
        if m > required * (1.0 + BOUND_SLACK) {
            violations.push(Violation { y, hole: None, value: m, required });
        }
    }
    Ok(DistReport { n, samples, violations, min_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::AdmissibleFunction;
    use crate::domain::{BuildMode, SwissCheeseDomain};

    fn dense(n: u32) -> SwissCheeseDomain {
        SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), n, BuildMode::Dense).unwrap()
    }

    #[test]
    fn exact_ratio_at_eight_is_below_bound() {
        let d = dense(120);
        let e = ExceptionalSet::new(&d);
        let p = density_profile(&e, 8..=8, 0, 1).unwrap();
        let row = &p.rows[0];
        assert!((row.bound - 3.0 / 196.0).abs() < 1e-15);
        assert!(row.below_bound(), "{row:?}");
        assert!(row.monte_carlo.is_none());
    }

    #[test]
    fn exact_ratio_decreases() {
        let d = dense(120);
        let e = ExceptionalSet::new(&d);
        let p = density_profile(&e, 4..=30, 0, 1).unwrap();
        assert!(p.rows.windows(2).all(|w| w[1].exact < w[0].exact));
    }

    #[test]
    fn start_below_n0_is_rejected() {
        let d = dense(20);
        let e = ExceptionalSet::new(&d);
        assert!(matches!(density_profile(&e, 2..=5, 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn distance_bounds_hold_at_six() {
        let d = dense(40);
        let e = ExceptionalSet::new(&d);
        let rep = dist_bounds_check(&e, 6, 10_000, 3).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations.first());
        assert!(rep.min_margin >= 1.0);
    }

    #[test]
    fn equality_point_sits_on_the_margin() {
        let d = dense(40);
        let h = d.hole(6).unwrap();
        let y = Complex64::new(h.a() + h.r() + h.s(), 0.0);
        assert!((h.distance(y) - h.s()).abs() <= 1e-12 * h.s());
    }

    #[test]
    fn missing_hole_is_a_precondition_error() {
        let d = dense(5);
        let e = ExceptionalSet::new(&d);
        assert!(matches!(dist_bounds_check(&e, 9, 10, 0), Err(Error::Precondition(_))));
    }
}
