//! Sampled lower estimates of Lipschitz-α seminorms.
//!
//! Pairs come in three interleaved kinds: uniform pairs over the region,
//! near pairs (a uniform point and a close partner, feeding the little-lip
//! decay table), and local pairs hugging the boundary of excluded disks that
//! contain poles. The `i`-th pair depends only on the seed and the pairs
//! before it, so estimates never decrease as the sample count grows.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TestFunction;
use crate::domain::Disk;
use crate::error::{Error, Result};

const DECAY_DECADES: i32 = 6;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    Disk { center: Complex64, radius: f64 },
    Square { center: Complex64, half: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
}

/// A closed shape with open disks removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub shape: Shape,
    pub excluded: Vec<Disk>,
}

impl Region {
    pub fn new(shape: Shape, excluded: Vec<Disk>) -> Self {
        Region { shape, excluded }
    }

    pub fn shape(shape: Shape) -> Self {
        Region { shape, excluded: Vec::new() }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let in_shape = match self.shape {
            Shape::Disk { center, radius } => (z - center).norm() <= radius,
            Shape::Square { center, half } => (z.re - center.re).abs() <= half && (z.im - center.im).abs() <= half,
            Shape::Annulus { center, inner, outer } => {
                let d = (z - center).norm();
                d >= inner && d <= outer
            }
        };
        in_shape && self.excluded.iter().all(|d| (z - d.center).norm() >= d.radius)
    }

    fn bounding(&self) -> (Complex64, f64) {
        match self.shape {
            Shape::Disk { center, radius } => (center, radius),
            Shape::Square { center, half } => (center, half),
            Shape::Annulus { center, outer, .. } => (center, outer),
        }
    }

    /// Diameter-scale length used for pair offsets.
    pub fn scale(&self) -> f64 {
        2.0 * self.bounding().1
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<Complex64> {
        let (c, half) = self.bounding();
        for _ in 0..MAX_REJECTIONS {
            let z = c + Complex64::new(half * (2.0 * rng.random::<f64>() - 1.0), half * (2.0 * rng.random::<f64>() - 1.0));
            if self.contains(z) {
                return Some(z);
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeminormOptions {
    pub samples: usize,
    pub refine_rounds: u32,
    pub seed: u64,
}

impl Default for SeminormOptions {
    fn default() -> Self {
        SeminormOptions { samples: 20_000, refine_rounds: 20, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate {
    /// Lower estimate of `‖f‖′_{Lip_α}` on `region`.
    pub seminorm: f64,
    /// Largest `|f|` seen on the sampled points.
    pub sup_norm: f64,
    /// `seminorm + sup_norm`.
    pub lip_norm: f64,
    pub alpha: f64,
    pub region: Region,
    /// Pairs actually evaluated.
    pub samples: usize,
    pub best_pair: (Complex64, Complex64),
    /// `(δ, sup of the ratio over sampled pairs with |z − w| < δ)`.
    pub decay: Vec<(f64, f64)>,
}

struct Tracker<'a> {
    f: &'a TestFunction,
    alpha: f64,
    best: f64,
    pair: (Complex64, Complex64),
    sup: f64,
    thresholds: Vec<f64>,
    decay: Vec<f64>,
    evaluated: usize,
}

impl Tracker<'_> {
    fn ratio(&self, z: Complex64, w: Complex64) -> Option<(f64, f64)> {
        let fz = self.f.evaluate(z).ok()?;
        let fw = self.f.evaluate(w).ok()?;
        let dist = (z - w).norm();
        if dist == 0.0 {
            return None;
        }
        Some(((fz - fw).norm() / dist.powf(self.alpha), fz.norm().max(fw.norm())))
    }

    fn offer(&mut self, z: Complex64, w: Complex64) {
        let Some((r, sup)) = self.ratio(z, w) else { return };
        self.evaluated += 1;
        self.sup = self.sup.max(sup);
        let dist = (z - w).norm();
        for (k, &t) in self.thresholds.iter().enumerate() {
            if dist < t {
                self.decay[k] = self.decay[k].max(r);
            }
        }
        if r > self.best {
            self.best = r;
            self.pair = (z, w);
        }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo_exp10: f64) -> f64 {
    10f64.powf(lo_exp10 * rng.random::<f64>())
}

/// Lower estimate of the `Lip_α` seminorm of `f` on `region`.
pub fn lip_seminorm(f: &TestFunction, region: &Region, alpha: f64, opts: &SeminormOptions) -> Result<NormEstimate> {
    if opts.samples < 2 {
        return Err(Error::Usage(format!("need at least 2 samples, got {}", opts.samples)));
    }
    if let Some(p) = f.poles.iter().find(|p| region.contains(p.pole)) {
        return Err(Error::PoleInRegion { re: p.pole.re, im: p.pole.im });
    }
    let focus: Vec<Disk> = region
        .excluded
        .iter()
        .filter(|d| f.poles.iter().any(|p| (p.pole - d.center).norm() < d.radius))
        .copied()
        .collect();
    let scale = region.scale();
    let mut t = Tracker {
        f,
        alpha,
        best: 0.0,
        pair: (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        sup: 0.0,
        thresholds: (0..=DECAY_DECADES).map(|k| scale * 10f64.powi(-k)).collect(),
        decay: vec![0.0; DECAY_DECADES as usize + 1],
        evaluated: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tau = std::f64::consts::TAU;
    for i in 0..opts.samples {
        let kind = if focus.is_empty() { i % 2 } else { i % 3 };
        match kind {
            0 => {
                if let (Some(z), Some(w)) = (region.sample(&mut rng), region.sample(&mut rng)) {
                    t.offer(z, w);
                }
            }
            1 => {
                let Some(z) = region.sample(&mut rng) else { continue };
                let delta = scale * log_uniform(&mut rng, -(DECAY_DECADES as f64 + 1.0));
                let w = z + Complex64::from_polar(delta, tau * rng.random::<f64>());
                if region.contains(w) {
                    t.offer(z, w);
                }
            }
            _ => {
                let d = focus[(i / 3) % focus.len()];
                let theta = tau * rng.random::<f64>();
                let gap = std::f64::consts::PI * log_uniform(&mut rng, -4.0);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let r1 = d.radius * (1.0 + log_uniform(&mut rng, -6.0) - 1e-6);
                let r2 = d.radius * (1.0 + log_uniform(&mut rng, -6.0) - 1e-6);
                let z = d.center + Complex64::from_polar(r1.max(d.radius), theta);
                let w = d.center + Complex64::from_polar(r2.max(d.radius), theta + sign * gap);
                if region.contains(z) && region.contains(w) {
                    t.offer(z, w);
                }
            }
        }
    }
    if t.evaluated == 0 {
        return Err(Error::Estimation("no sample pair could be evaluated".into()));
    }
    refine(&mut t, region, opts, &mut rng);
    let seminorm = t.best;
    Ok(NormEstimate {
        seminorm,
        sup_norm: t.sup,
        lip_norm: seminorm + t.sup,
        alpha,
        region: region.clone(),
        samples: t.evaluated,
        best_pair: t.pair,
        decay: t.thresholds.iter().copied().zip(t.decay.iter().copied()).collect(),
    })
}

/// Shrinking random perturbations of the best pair, keeping improvements.
fn refine(t: &mut Tracker<'_>, region: &Region, opts: &SeminormOptions, rng: &mut ChaCha8Rng) {
    if t.best <= 0.0 {
        return;
    }
    let (mut z, mut w) = t.pair;
    let mut step = 0.25 * (z - w).norm();
    for _ in 0..opts.refine_rounds {
        for _ in 0..24 {
            let dz = Complex64::from_polar(step * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>());
            let (cz, cw) = match rng.random_range(0..3) {
                0 => (z + dz, w),
                1 => (z, w + dz),
                _ => (z + dz, w - dz),
            };
            if !region.contains(cz) || !region.contains(cw) {
                continue;
            }
            if let Some((r, sup)) = t.ratio(cz, cw) {
                t.sup = t.sup.max(sup);
                if r > t.best {
                    t.best = r;
                    t.pair = (cz, cw);
                    z = cz;
                    w = cw;
                }
            }
        }
        step *= 0.6;
    }
}
