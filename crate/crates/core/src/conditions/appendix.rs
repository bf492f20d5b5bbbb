use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::wide::WideReal;

/// `q_N` must fall below this for the density requirement to hold at scale.
const DENSITY_TOL: f64 = 0.1;
const CERT_SLACK: f64 = 1e-12;

/// `n ↦ log₂ r_n`, kept in log form so radii far below `f64` range are exact.
#[derive(Clone)]
pub struct RadiiRule {
    name: String,
    log2: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
}

impl fmt::Debug for RadiiRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadiiRule").field("name", &self.name).finish_non_exhaustive()
    }
}

impl RadiiRule {
    pub fn from_log2(name: impl Into<String>, log2: impl Fn(u32) -> f64 + Send + Sync + 'static) -> Self {
        RadiiRule { name: name.into(), log2: Arc::new(log2) }
    }

    /// `r_n = 2^{-c n}`.
    pub fn geometric(c: f64) -> Self {
        Self::from_log2(format!("2^(-{c}n)"), move |n| -c * n as f64)
    }

    /// `r_n^{1+α} = 2^{-n(1+β)} / n`, the edge case where every series term is `1/n`.
    pub fn harmonic_edge(alpha: f64, beta: f64) -> Self {
        Self::from_log2("harmonic-edge", move |n| {
            let nf = n as f64;
            (-nf * (1.0 + beta) - nf.log2()) / (1.0 + alpha)
        })
    }

    /// Explicit radii `r_1, r_2, …`; indices past the end repeat the last value.
    pub fn explicit(radii: Vec<f64>) -> Self {
        let logs: Vec<f64> = radii.iter().map(|r| r.log2()).collect();
        Self::from_log2("explicit", move |n| logs[(n as usize - 1).min(logs.len() - 1)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn log2_radius(&self, n: u32) -> f64 {
        (self.log2)(n)
    }
}

fn wide_pow2(x: f64) -> WideReal {
    let whole = x.floor();
    WideReal::pow2(whole as i64) * (x - whole).exp2()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixRow {
    pub j: u32,
    /// `log₂ (2^{2j} r_j²)`.
    pub log2_density: f64,
    /// `log₂` of the term `2^{j(1+β)} r_j^{1+α}`.
    pub log2_term: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixReport {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<AppendixRow>,
    /// Least slope of `log₂ q_j` over the second half of the range.
    pub density_slope: f64,
    /// `q_j → 0` at scale: negative trend and `q_N` below tolerance.
    pub density_holds: bool,
    /// Least `j₀` with `r_j ≤ 2^{-j}` on `[j₀, N]`.
    pub j0: Option<u32>,
    /// `S_{j₀−1} + 2^{j₀(β−α)} / (1 − 2^{β−α})`.
    pub certificate: Option<f64>,
    /// Partial sums stay under the certificate.
    pub converges: bool,
}

impl AppendixReport {
    pub fn partial_sum(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.partial_sum)
    }

    pub fn counterexample(&self) -> bool {
        self.density_holds && !self.converges
    }

    pub fn verdict(&self) -> &'static str {
        match (self.converges, self.density_holds) {
            (true, true) => "compatible: converges + density holds",
            (true, false) => "compatible: converges + density fails",
            (false, false) => "compatible: diverges + density fails",
            (false, true) => "counterexample: diverges + density holds",
        }
    }
}

/// Least-squares slope of `ys` against their indices.
fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        num += (i as f64 - mx) * (y - my);
        den += (i as f64 - mx).powi(2);
    }
    num / den
}

/// Tests a radius rule against both requirements: `2^{2j} r_j² → 0` and
/// convergence of `Σ 2^{n(1+β)} r_n^{1+α}`.
pub fn appendix_check(alpha: f64, beta: f64, radii: &RadiiRule, n_max: u32) -> Result<AppendixReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(beta > 0.0 && beta < alpha) {
        return Err(Error::Parameter(format!("beta must lie in (0, alpha), got beta = {beta}, alpha = {alpha}")));
    }
    if n_max < 2 {
        return Err(Error::Parameter(format!("need N ≥ 2, got {n_max}")));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut sums = Vec::with_capacity(n_max as usize);
    let mut acc = WideReal::ZERO;
    for j in 1..=n_max {
        let lr = radii.log2_radius(j);
        let jf = j as f64;
        let log2_term = jf * (1.0 + beta) + (1.0 + alpha) * lr;
        acc = acc + wide_pow2(log2_term);
        sums.push(acc);
        rows.push(AppendixRow { j, log2_density: 2.0 * jf + 2.0 * lr, log2_term, partial_sum: acc.to_f64() });
    }
    let second_half: Vec<f64> = rows[rows.len() / 2..].iter().map(|r| r.log2_density).collect();
    let density_slope = slope(&second_half);
    let density_holds = density_slope < 0.0 && rows.last().expect("N ≥ 2").log2_density < DENSITY_TOL.log2();

    let j0 = rows
        .iter()
        .rposition(|r| r.log2_density > 0.0)
        .map_or(Some(1), |k| (k + 1 < rows.len()).then_some(k as u32 + 2));
    let ratio = (beta - alpha).exp2();
    let certificate = j0.map(|j0| {
        let head = if j0 >= 2 { sums[j0 as usize - 2] } else { WideReal::ZERO };
        (head + wide_pow2(j0 as f64 * (beta - alpha)) / (1.0 - ratio)).to_f64()
    });
    let converges = certificate.is_some_and(|c| acc.to_f64() <= c * (1.0 + CERT_SLACK));
    Ok(AppendixReport { alpha, beta, rows, density_slope, density_holds, j0, certificate, converges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faster_than_dyadic_radii_are_compatible() {
        let rep = appendix_check(0.5, 0.25, &RadiiRule::geometric(1.1), 200).unwrap();
        assert!(rep.density_holds && rep.converges);
        assert_eq!(rep.j0, Some(1));
        assert_eq!(rep.verdict(), "compatible: converges + density holds");
    }

    #[test]
    fn dyadic_radii_fail_density() {
        let rep = appendix_check(0.5, 0.25, &RadiiRule::geometric(1.0), 200).unwrap();
        assert!(rep.rows.iter().all(|r| r.log2_density == 0.0));
        assert!(!rep.density_holds && rep.converges);
    }

    #[test]
    fn harmonic_edge_diverges_and_fails_density() {
        let rep = appendix_check(0.5, 0.25, &RadiiRule::harmonic_edge(0.5, 0.25), 400).unwrap();
        for r in &rep.rows {
            assert!((r.log2_term + (r.j as f64).log2()).abs() < 1e-9);
        }
        assert!(rep.density_slope > 0.0);
        assert_eq!(rep.verdict(), "compatible: diverges + density fails");
    }

    #[test]
    fn beta_at_least_alpha_is_rejected() {
        assert!(matches!(appendix_check(0.5, 0.5, &RadiiRule::geometric(1.1), 10), Err(Error::Parameter(_))));
    }

    #[test]
    fn tail_ratio_matches_exponent_arithmetic() {
        // term ratio for r = 2^{-(1+δ)n} is 2^{β−α−δ(1+α)}
        let delta = 0.1;
        let rep = appendix_check(0.5, 0.25, &RadiiRule::geometric(1.0 + delta), 20).unwrap();
        let step = rep.rows[5].log2_term - rep.rows[4].log2_term;
        assert!((step - (0.25 - 0.5 - delta * 1.5)).abs() < 1e-12);
    }
}
