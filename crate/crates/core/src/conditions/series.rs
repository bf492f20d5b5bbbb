use crate::content::{content_hole, CoverOptions};
use crate::domain::SwissCheeseDomain;
use crate::wide::WideReal;

use super::ConditionSpec;

/// `27/64`: the lower bound of `(9/16) φ(a_n)/φ(2^{-n})`.
const LOWER_CONSTANT: f64 = 27.0 / 64.0;
const DOMINATION_SLACK: f64 = 1e-12;
const TAIL_NEGLIGIBLE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesVerdict {
    DivergesAtScale,
    ConvergesAtScale,
    Inconclusive,
}

impl SeriesVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesVerdict::DivergesAtScale => "diverges-at-scale",
            SeriesVerdict::ConvergesAtScale => "converges-at-scale",
            SeriesVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Content used for holes that are not contained in their annulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidHolePolicy {
    /// `r_n^{1+α}`, the content of the hole itself.
    DiskValue,
    /// Cover upper bound for `A_n \ U`.
    CoverBracket,
    Exclude,
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    /// The lower-bound curve must reach this before divergence is declared.
    pub divergence_threshold: f64,
    pub invalid_holes: InvalidHolePolicy,
    pub cover: CoverOptions,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { divergence_threshold: 1.0, invalid_holes: InvalidHolePolicy::DiskValue, cover: CoverOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub n: u32,
    pub has_hole: bool,
    /// `2^{n(t+1)} M(A_n \ U) / φ(2^{-n})`.
    pub term: f64,
    /// True when the content value is exact.
    pub exact: bool,
    /// `term / ((9/16) φ(2^{-n})^{-1} n^{-1} φ(a_n))`, for `t = 1` holes.
    pub identity_ratio: Option<f64>,
    pub partial_sum: f64,
    /// `(27/64) Σ 1/m` over hole indices `m ≤ n`.
    pub lower_bound: f64,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub t: u32,
    pub n0: u32,
    pub rows: Vec<SeriesRow>,
    /// Partial sums stay above the lower-bound curve for every `n ≥ n0`.
    pub dominated: bool,
    pub verdict: SeriesVerdict,
}

impl SeriesReport {
    pub fn partial_sum(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.partial_sum)
    }
}

/// `(27/64) Σ_{n ≤ N} 1/n`.
pub fn series_lower_bound(n: u32) -> f64 {
    LOWER_CONSTANT * (1..=n).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// Partial sums of the condition-(c) series over annuli `1..=N`.
///
/// Only annuli carrying a hole contribute, and the lower-bound curve runs over
/// the same index set, so for dense domains it is `(27/64) H_n`.
pub fn series_c(domain: &SwissCheeseDomain, spec: &ConditionSpec, n_max: u32, opts: &SeriesOptions) -> SeriesReport {
    let n0 = domain.validate_geometry().n0;
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut partial = 0.0;
    let mut lower = 0.0;
    for n in 1..=n_max {
        let mut row = SeriesRow {
            n,
            has_hole: false,
            term: 0.0,
            exact: true,
            identity_ratio: None,
            partial_sum: partial,
            lower_bound: lower,
            warning: None,
        };
        if let Ok(h) = domain.hole(n) {
            row.has_hole = true;
            lower += LOWER_CONSTANT / n as f64;
            let dyadic = WideReal::pow2(-(n as i64));
            let scale = WideReal::pow2((n as i64) * (spec.t as i64 + 1));
            let content = if h.valid() {
                Some(if spec.alpha == domain.alpha() { h.content } else { h.radius.powf(1.0 + spec.alpha) })
            } else {
                row.exact = false;
                match opts.invalid_holes {
                    InvalidHolePolicy::DiskValue => {
                        row.warning = Some(format!("hole {n} leaves A_{n}; using the disk value"));
                        Some(h.radius.powf(1.0 + spec.alpha))
                    }
                    InvalidHolePolicy::CoverBracket => match content_hole(domain, n, spec.alpha, &opts.cover) {
                        Ok(est) => {
                            row.warning = est.warning;
                            Some(WideReal::from_f64(est.upper))
                        }
                        Err(e) => {
                            row.warning = Some(e.to_string());
                            None
                        }
                    },
                    InvalidHolePolicy::Exclude => {
                        row.warning = Some(format!("hole {n} leaves A_{n}; excluded"));
                        None
                    }
                }
            };
            if let (Some(c), Ok(phi_dyadic)) = (content, spec.phi.phi_wide(dyadic)) {
                let term = c * scale / phi_dyadic;
                row.term = term.to_f64();
                if spec.t == 1 && h.valid() {
                    if let Ok(phi_a) = spec.phi.phi_wide(h.center) {
                        let identity = phi_a / phi_dyadic * (9.0 / 16.0 / n as f64);
                        row.identity_ratio = Some((term / identity).to_f64());
                    }
                }
            }
            partial += row.term;
            row.partial_sum = partial;
            row.lower_bound = lower;
        }
        rows.push(row);
    }
    let dominated = rows
        .iter()
        .filter(|r| r.n >= n0)
        .all(|r| r.partial_sum >= r.lower_bound * (1.0 - DOMINATION_SLACK));
    let verdict = verdict(&rows, dominated, opts.divergence_threshold);
    SeriesReport { t: spec.t, n0, rows, dominated, verdict }
}

fn verdict(rows: &[SeriesRow], dominated: bool, threshold: f64) -> SeriesVerdict {
    let Some(last) = rows.last() else {
        return SeriesVerdict::ConvergesAtScale;
    };
    if last.partial_sum == 0.0 {
        return SeriesVerdict::ConvergesAtScale;
    }
    if dominated && last.lower_bound >= threshold {
        return SeriesVerdict::DivergesAtScale;
    }
    let half = rows[rows.len() / 2].partial_sum;
    if last.partial_sum - half <= TAIL_NEGLIGIBLE * last.partial_sum {
        SeriesVerdict::ConvergesAtScale
    } else {
        SeriesVerdict::Inconclusive
    }
}
