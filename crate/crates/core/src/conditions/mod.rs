//! Finite-scale evaluation of the content series, the area density of the
//! exceptional set, the remainder-term decomposition and the radius
//! obstruction for `Σ 2^{n(1+β)} r_n^{1+α}`.

mod appendix;
mod density;
mod remainder;
mod series;

use crate::admissible::AdmissibleFunction;
use crate::error::{Error, Result};

pub use appendix::{appendix_check, AppendixReport, AppendixRow, RadiiRule};
pub use density::{
    density_profile, dist_bounds_check, sample_exceptional, DensityProfile, DensityRow, DistReport, Violation,
};
pub use remainder::{
    build_corpus, condition_a_empirical, remainder_bound_terms, CorpusMember, EmpiricalReport, EmpiricalRow,
    RemainderTerms,
};
pub use series::{series_c, series_lower_bound, InvalidHolePolicy, SeriesOptions, SeriesReport, SeriesRow, SeriesVerdict};

/// Taylor degree and the function pair `(φ, α)` a condition is stated for.
#[derive(Clone, Debug)]
pub struct ConditionSpec {
    pub t: u32,
    pub phi: AdmissibleFunction,
    pub alpha: f64,
}

impl ConditionSpec {
    pub fn new(t: u32, phi: AdmissibleFunction, alpha: f64) -> Result<Self> {
        if t > 1 {
            return Err(Error::Parameter(format!("only t ∈ {{0, 1}} is supported, got {t}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(ConditionSpec { t, phi, alpha })
    }
}
