use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{ExceptionalSet, SwissCheeseDomain};
use crate::error::{Error, Result};
use crate::testfn::{random_testfn, GeneratorOptions, TestFunction};
use crate::wide::WideReal;

use super::density::sample_exceptional;
use super::ConditionSpec;

const SEED_STRIDE: u64 = 0x9e37_79b9_7f4a_7c15;

/// The six sub-terms bounding `(A)` and `(B)` at scale `N`.
///
/// Sums run over the domain's hole indices. The `_iii` values are truncated
/// at the largest hole index; `_iii_tail` bounds what lies beyond it and is
/// `None` when the halving certificate is missing.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderTerms {
    pub n: u32,
    /// `ψ(a_N) Σ_{n<N} ψ(a_n)^{-1} n^{-1}`.
    pub a_i: f64,
    /// `a_N^{-1} φ(a_N)^{-1} s_N^{-1} r_N^{1+α}`.
    pub a_ii: f64,
    /// `7 N^{-2/3}`.
    pub a_ii_closed: f64,
    /// `φ(a_N)^{-1} Σ_{n>N} n^{-1} φ(a_n)`.
    pub a_iii: f64,
    pub a_iii_tail: Option<f64>,
    pub b_i: f64,
    /// `φ(a_N)^{-1} s_N^{-2} r_N^{1+α}`.
    pub b_ii: f64,
    /// `49 N^{-1/3}`.
    pub b_ii_closed: f64,
    /// `φ(a_N)^{-1} a_N^{-1} Σ_{n>N} a_n n^{-1} φ(a_n)`.
    pub b_iii: f64,
    pub b_iii_tail: Option<f64>,
}

impl RemainderTerms {
    /// `(A_III)` including its tail bound, when available.
    pub fn a_iii_upper(&self) -> Option<f64> {
        Some(self.a_iii + self.a_iii_tail?)
    }

    pub fn b_iii_upper(&self) -> Option<f64> {
        Some(self.b_iii + self.b_iii_tail?)
    }

    /// `(A_I) + (A_II) + (A_III)`, with the tail when certified.
    pub fn a_total(&self) -> f64 {
        self.a_i + self.a_ii + self.a_iii_upper().unwrap_or(self.a_iii)
    }

    pub fn b_total(&self) -> f64 {
        self.b_i + self.b_ii + self.b_iii_upper().unwrap_or(self.b_iii)
    }
}

/// `ψ(a_N) Σ_{n<N} ψ(a_n)^{-1} n^{-1}`, shared by `(A_I)` and `(B_I)`.
fn first_sum(domain: &SwissCheeseDomain, n: u32) -> Result<f64> {
    let phi = domain.phi();
    let psi_n = phi.psi_wide(domain.hole(n)?.center)?;
    let mut acc = WideReal::ZERO;
    for h in domain.holes().iter().take_while(|h| h.index < n) {
        acc = acc + phi.psi_wide(h.center)?.recip() / h.index as f64;
    }
    Ok((psi_n * acc).to_f64())
}

pub fn remainder_bound_terms(domain: &SwissCheeseDomain, spec: &ConditionSpec, n: u32) -> Result<RemainderTerms> {
    if spec.t != 1 {
        return Err(Error::Parameter(format!("the (A)/(B) decomposition needs t = 1, got {}", spec.t)));
    }
    let h = domain.hole(n).map_err(|_| Error::Precondition(format!("annulus A_{n} carries no hole")))?;
    let n0 = domain.validate_geometry().n0;
    if n < n0 {
        return Err(Error::Precondition(format!("N = {n} is below n0 = {n0}")));
    }
    let phi = domain.phi();
    let a = h.center;
    let phi_a = phi.phi_wide(a)?;
    let content = h.radius.powf(1.0 + spec.alpha);
    let first = first_sum(domain, n)?;

    let mut a_acc = WideReal::ZERO;
    let mut b_acc = WideReal::ZERO;
    for later in domain.holes().iter().filter(|g| g.index > n) {
        let t = phi.phi_wide(later.center)? / later.index as f64;
        a_acc = a_acc + t;
        b_acc = b_acc + t * later.center;
    }
    let last = domain.holes().last().expect("hole N exists");
    let (a_tail, b_tail) = if domain.halving_certified() {
        // past the last hole φ(a_n) halves and a_n at least halves per step
        let phi_l = phi.phi_wide(last.center)?;
        let l = last.index as f64;
        (Some((phi_l / (phi_a * l)).to_f64()), Some((last.center * phi_l / (phi_a * a * (3.0 * l))).to_f64()))
    } else {
        (None, None)
    };
    let nf = n as f64;
    Ok(RemainderTerms {
        n,
        a_i: first,
        a_ii: (content / (a * phi_a * h.margin)).to_f64(),
        a_ii_closed: 7.0 * nf.powf(-2.0 / 3.0),
        a_iii: (a_acc / phi_a).to_f64(),
        a_iii_tail: a_tail,
        b_i: first,
        b_ii: (content / (phi_a * h.margin * h.margin)).to_f64(),
        b_ii_closed: 49.0 * nf.powf(-1.0 / 3.0),
        b_iii: (b_acc / (phi_a * a)).to_f64(),
        b_iii_tail: b_tail,
    })
}

/// A normalized test function with its estimated `Lip_α` norm.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusMember {
    pub f: TestFunction,
    pub lip_norm: f64,
    pub seed: u64,
}

/// `size` independent draws of [`random_testfn`], seeded per member.
pub fn build_corpus(
    domain: &SwissCheeseDomain,
    size: usize,
    pole_budget: u32,
    seed: u64,
    opts: &GeneratorOptions,
) -> Result<Vec<CorpusMember>> {
    (0..size)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add((k as u64 + 1).wrapping_mul(SEED_STRIDE));
            let (f, est) = random_testfn(domain, pole_budget, s, opts)?;
            Ok(CorpusMember { f, lip_norm: est.lip_norm, seed: s })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalRow {
    pub n: u32,
    /// Largest ratio over `y ∈ E ∩ A_N` and the corpus.
    pub worst: f64,
    pub worst_y: Complex64,
    pub worst_member: usize,
    /// Largest ratio over points of `U ∩ A_N` inside the margin of hole `N`.
    pub outside_worst: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalReport {
    pub t: u32,
    pub rows: Vec<EmpiricalRow>,
}

impl EmpiricalReport {
    /// Worst ratio at the last `N` is strictly below the first.
    pub fn decreasing(&self) -> bool {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) if self.rows.len() > 1 => b.worst < a.worst,
            _ => false,
        }
    }
}

fn ratio(m: &CorpusMember, spec: &ConditionSpec, y: Complex64) -> Result<f64> {
    let rem = m.f.taylor_remainder(Complex64::new(0.0, 0.0), spec.t, y)?;
    let r = y.norm();
    Ok(rem.norm() / (spec.phi.eval_phi(r)? * r.powi(spec.t as i32) * m.lip_norm))
}

/// `|R_0^t f(y)| / (φ(|y|) |y|^t ‖f‖)` maximized per annulus.
pub fn condition_a_empirical(
    domain: &SwissCheeseDomain,
    e: &ExceptionalSet<'_>,
    spec: &ConditionSpec,
    corpus: &[CorpusMember],
    ns: &[u32],
    samples: usize,
    seed: u64,
) -> Result<EmpiricalReport> {
    if corpus.is_empty() {
        return Err(Error::Usage("the test-function corpus is empty".into()));
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            let hole = domain.hole(n).map_err(|_| Error::Precondition(format!("annulus A_{n} carries no hole")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(SEED_STRIDE));
            let points = sample_exceptional(e, n, samples, &mut rng)?;
            let mut row = EmpiricalRow {
                n,
                worst: 0.0,
                worst_y: points[0],
                worst_member: 0,
                outside_worst: 0.0,
                samples,
            };
            for &y in &points {
                for (k, m) in corpus.iter().enumerate() {
                    let v = ratio(m, spec, y)?;
                    if v > row.worst {
                        row.worst = v;
                        row.worst_y = y;
                        row.worst_member = k;
                    }
                }
            }
            // control group: U ∩ A_N within the margin of hole N
            let (a, r, s) = (hole.a(), hole.r(), hole.s());
            for _ in 0..samples {
                let gap = s * 10f64.powf(-6.0 * rng.random::<f64>());
                let y = Complex64::new(a, 0.0) + Complex64::from_polar(r + gap, std::f64::consts::TAU * rng.random::<f64>());
                if !domain.contains(y) || e.contains(y) {
                    continue;
                }
                for m in corpus {
                    if let Ok(v) = ratio(m, spec, y) {
                        row.outside_worst = row.outside_worst.max(v);
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalReport { t: spec.t, rows })
}
