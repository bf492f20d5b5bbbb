//! Admissible functions `φ` and their associated `ψ(r) = r / φ(r)`.
//!
//! A function is admissible when `φ` is positive and non-decreasing, and `ψ`
//! is positive, non-decreasing and tends to zero at the origin. Those
//! properties are certified here on sampled geometric grids, since custom
//! kinds are black-box evaluators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::wide::WideReal;

/// Default threshold for the sampled limit `ψ(r_min) / ψ(r_max) < tol`.
pub const DEFAULT_PSI_TOLERANCE: f64 = 1e-3;

// Relative slack allowed in sampled monotonicity comparisons.
const MONOTONE_SLACK: f64 = 4.0 * f64::EPSILON;

pub type ScalarMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PhiKind {
    /// `φ(r) = r^β` with `β ∈ (0, 1)`.
    Power(f64),
    /// `φ(r) = r / log(1 + r)`.
    LogQuotient,
    /// `φ ≡ 1`.
    ConstantOne,
    Custom { name: String, map: ScalarMap },
}

impl fmt::Debug for PhiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiKind::Power(b) => write!(f, "Power({b})"),
            PhiKind::LogQuotient => write!(f, "LogQuotient"),
            PhiKind::ConstantOne => write!(f, "ConstantOne"),
            PhiKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleFunction {
    kind: PhiKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { r_min: 1e-9, r_max: 1.0, points: 512 }
    }
}

impl GridSpec {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Self {
        GridSpec { r_min, r_max, points }
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Usage(format!("grid needs at least 2 points, got {}", self.points)));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::Usage(format!(
                "grid requires 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        Ok(())
    }

    /// Geometric nodes from `r_min` to `r_max` inclusive.
    pub fn nodes(&self) -> Vec<f64> {
        let ratio = (self.r_max / self.r_min).ln();
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| match i {
                0 => self.r_min,
                i if i + 1 == self.points => self.r_max,
                i => self.r_min * (ratio * i as f64 / last).exp(),
            })
            .collect()
    }
}

/// Outcome of one sampled property. `witness` holds the first offending
/// grid pair `(r_i, r_{i+1})` (or `(r, r)` for a pointwise failure).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropertyCheck {
    pub passed: bool,
    pub witness: Option<(f64, f64)>,
}

impl PropertyCheck {
    fn pass() -> Self {
        PropertyCheck { passed: true, witness: None }
    }

    fn fail(a: f64, b: f64) -> Self {
        PropertyCheck { passed: false, witness: Some((a, b)) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub grid: GridSpec,
    pub phi_positive: PropertyCheck,
    pub phi_monotone: PropertyCheck,
    pub psi_positive: PropertyCheck,
    pub psi_monotone: PropertyCheck,
    /// `ψ(r_min) / ψ(r_max)`.
    pub psi_ratio: f64,
    pub psi_tolerance: f64,
    pub psi_vanishes: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.phi_positive.passed
            && self.phi_monotone.passed
            && self.psi_positive.passed
            && self.psi_monotone.passed
            && self.psi_vanishes
    }
}

/// Greedy subsequence of the hole-center rule `a_n = (3/4) 2^{-n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsequenceSelection {
    pub indices: Vec<u32>,
    /// `φ(a_{m_k}) < ½ φ(a_{m_{k-1}})`; vacuously true for the first index.
    pub halving: Vec<bool>,
    /// `Σ_{j<k} ψ(a_{m_j})^{-1} < ψ(a_{m_k})^{-1}`; vacuously true for the first index.
    pub psi_sum: Vec<bool>,
    pub max_index: u32,
    pub note: Option<String>,
}

impl SubsequenceSelection {
    pub fn certified(&self) -> bool {
        self.halving.iter().all(|&b| b) && self.psi_sum.iter().all(|&b| b)
    }
}

/// `a_n = (3/4) 2^{-n}`, exact.
pub fn hole_center(n: u32) -> WideReal {
    WideReal::from_parts(0.75, -(n as i64))
}

impl AdmissibleFunction {
    pub fn new(kind: PhiKind) -> Result<Self> {
        if let PhiKind::Power(beta) = kind {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::Parameter(format!("power exponent must lie in (0, 1), got {beta}")));
            }
        }
        Ok(AdmissibleFunction { kind })
    }

    pub fn power(beta: f64) -> Result<Self> {
        Self::new(PhiKind::Power(beta))
    }

    pub fn log_quotient() -> Self {
        AdmissibleFunction { kind: PhiKind::LogQuotient }
    }

    pub fn constant_one() -> Self {
        AdmissibleFunction { kind: PhiKind::ConstantOne }
    }

    pub fn custom(name: impl Into<String>, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        AdmissibleFunction { kind: PhiKind::Custom { name: name.into(), map: Arc::new(map) } }
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            PhiKind::Power(_) => "power",
            PhiKind::LogQuotient => "log-quotient",
            PhiKind::ConstantOne => "constant-one",
            PhiKind::Custom { name, .. } => name,
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            PhiKind::Power(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_constant_one(&self) -> bool {
        matches!(self.kind, PhiKind::ConstantOne)
    }

    pub fn eval_phi(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("φ is defined for r > 0, got {r}")));
        }
        let v = match &self.kind {
            PhiKind::Power(beta) => r.powf(*beta),
            PhiKind::LogQuotient => r / r.ln_1p(),
            PhiKind::ConstantOne => 1.0,
            PhiKind::Custom { map, .. } => map(r),
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("φ({r}) = {v} is not a positive finite value")));
        }
        Ok(v)
    }

    pub fn eval_psi(&self, r: f64) -> Result<f64> {
        Ok(r / self.eval_phi(r)?)
    }

    /// `φ` on extended-range input. Custom kinds fall back to `f64` and fail
    /// when the argument leaves its range.
    pub fn phi_wide(&self, r: WideReal) -> Result<WideReal> {
        if r.is_zero() {
            return Err(Error::Domain("φ is defined for r > 0, got 0".into()));
        }
        match &self.kind {
            PhiKind::Power(beta) => Ok(r.powf(*beta)),
            PhiKind::ConstantOne => Ok(WideReal::ONE),
            PhiKind::LogQuotient => {
                let x = r.to_f64();
                if x == 0.0 {
                    // r / log(1 + r) = 1 + r/2 + O(r^2)
                    Ok(WideReal::ONE)
                } else {
                    Ok(WideReal::from_f64(self.eval_phi(x)?))
                }
            }
            PhiKind::Custom { .. } => {
                let x = r.to_f64();
                if x == 0.0 || !x.is_finite() {
                    return Err(Error::Range(format!("{r}")));
                }
                Ok(WideReal::from_f64(self.eval_phi(x)?))
            }
        }
    }

    pub fn psi_wide(&self, r: WideReal) -> Result<WideReal> {
        Ok(r / self.phi_wide(r)?)
    }

    pub fn check_admissible(&self, grid: &GridSpec) -> Result<AdmissibilityReport> {
        self.check_admissible_with(grid, DEFAULT_PSI_TOLERANCE)
    }

    pub fn check_admissible_with(&self, grid: &GridSpec, psi_tolerance: f64) -> Result<AdmissibilityReport> {
        grid.validate()?;
        let nodes = grid.nodes();
        let mut phi = Vec::with_capacity(nodes.len());
        let mut phi_positive = PropertyCheck::pass();
        for &r in &nodes {
            match self.eval_phi(r) {
                Ok(v) => phi.push(v),
                Err(_) => {
                    if phi_positive.passed {
                        phi_positive = PropertyCheck::fail(r, r);
                    }
                    phi.push(f64::NAN);
                }
            }
        }
        let psi: Vec<f64> = nodes.iter().zip(&phi).map(|(r, p)| r / p).collect();
        let psi_positive = match nodes.iter().zip(&psi).find(|(_, &v)| !(v > 0.0)) {
            Some((&r, _)) => PropertyCheck::fail(r, r),
            None => PropertyCheck::pass(),
        };
        let monotone = |vals: &[f64]| -> PropertyCheck {
            for i in 1..vals.len() {
                let (prev, next) = (vals[i - 1], vals[i]);
                if !(next >= prev * (1.0 - MONOTONE_SLACK)) {
                    return PropertyCheck::fail(nodes[i - 1], nodes[i]);
                }
            }
            PropertyCheck::pass()
        };
        let phi_monotone = monotone(&phi);
        let psi_monotone = monotone(&psi);
        let psi_ratio = psi[0] / psi[psi.len() - 1];
        Ok(AdmissibilityReport {
            grid: *grid,
            phi_positive,
            phi_monotone,
            psi_positive,
            psi_monotone,
            psi_ratio,
            psi_tolerance,
            psi_vanishes: psi_ratio < psi_tolerance,
        })
    }

    /// Greedy-minimal selection: index 1 is always taken, then each next index
    /// is the smallest one satisfying both the halving and the ψ-sum
    /// inequalities against the prefix already chosen.
    pub fn select_subsequence(&self, max_index: u32) -> Result<SubsequenceSelection> {
        let mut sel = SubsequenceSelection {
            indices: Vec::new(),
            halving: Vec::new(),
            psi_sum: Vec::new(),
            max_index,
            note: None,
        };
        if max_index == 0 {
            return Ok(sel);
        }
        sel.indices.push(1);
        sel.halving.push(true);
        sel.psi_sum.push(true);
        let mut last_phi = self.phi_wide(hole_center(1))?;
        let mut inv_psi_sum = self.psi_wide(hole_center(1))?.recip();
        for n in 2..=max_index {
            let a = hole_center(n);
            let phi = self.phi_wide(a)?;
            let inv_psi = self.psi_wide(a)?.recip();
            let halves = phi < last_phi * 0.5;
            let sum_ok = inv_psi_sum < inv_psi;
            if halves && sum_ok {
                sel.indices.push(n);
                sel.halving.push(true);
                sel.psi_sum.push(true);
                last_phi = phi;
                inv_psi_sum = inv_psi_sum + inv_psi;
            }
        }
        if sel.indices.len() == 1 && max_index >= 2 {
            sel.note = Some(if self.is_constant_one() {
                "halving condition φ(a_n) < ½ φ(a_{n-1}) is unsatisfiable for constant φ".to_string()
            } else {
                format!("no index in 2..={max_index} satisfies the halving and ψ-sum conditions")
            });
        }
        Ok(sel)
    }
}

/// Independent scan of both subsequence inequalities over a list of indices.
pub fn verify_selection(f: &AdmissibleFunction, indices: &[u32]) -> Result<(Vec<bool>, Vec<bool>)> {
    let mut halving = vec![true];
    let mut psi_sum = vec![true];
    for k in 1..indices.len() {
        let prev = f.eval_phi(hole_center(indices[k - 1]).to_f64())?;
        let cur = f.eval_phi(hole_center(indices[k]).to_f64())?;
        halving.push(cur < 0.5 * prev);
        let sum: f64 = indices[..k]
            .iter()
            .map(|&m| f.eval_psi(hole_center(m).to_f64()).map(|p| 1.0 / p))
            .sum::<Result<f64>>()?;
        psi_sum.push(sum < 1.0 / f.eval_psi(hole_center(indices[k]).to_f64())?);
    }
    if indices.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    Ok((halving, psi_sum))
}
