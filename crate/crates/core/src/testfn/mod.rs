//! Rational test functions with poles inside the removed disks.
//!
//! Such functions are analytic on a neighborhood of the closed domain, so
//! they stand in for members of `A_α(U)`. Norms are estimated by sampling
//! (see [`norm`]) and contour functionals by trapezoidal quadrature on
//! circles (see [`quadrature`]).

pub mod norm;
pub mod quadrature;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Disk, SwissCheeseDomain};
use crate::error::{Error, Result};

pub use norm::{lip_seminorm, NormEstimate, Region, SeminormOptions, Shape};
pub use quadrature::{contour_integral, melnikov_ratio, Contour, Integrand, MelnikovRecord};

/// Minimum distance between an evaluation point and any pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// `coeff · (z − pole)^{-order}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub order: u32,
    pub coeff: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TestFunction {
    pub poles: Vec<PoleTerm>,
    /// `Σ poly[k] z^k`.
    pub poly: Vec<Complex64>,
}

fn falling(k: usize, j: u32) -> f64 {
    (0..j as usize).map(|i| (k - i) as f64).product()
}

fn rising(m: u32, j: u32) -> f64 {
    (0..j).map(|i| (m + i) as f64).product()
}

fn factorial(j: u32) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

impl TestFunction {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        TestFunction { poles: Vec::new(), poly: coeffs }
    }

    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `coeff / (z − pole)`.
    pub fn simple_pole(pole: Complex64, coeff: Complex64) -> Self {
        TestFunction { poles: vec![PoleTerm { pole, order: 1, coeff }], poly: Vec::new() }
    }

    pub fn with_pole(mut self, term: PoleTerm) -> Self {
        self.poles.push(term);
        self
    }

    pub fn scaled(&self, k: f64) -> Self {
        TestFunction {
            poles: self.poles.iter().map(|p| PoleTerm { coeff: p.coeff * k, ..*p }).collect(),
            poly: self.poly.iter().map(|c| c * k).collect(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    /// Degree of the polynomial part, ignoring trailing zeros.
    pub fn degree(&self) -> Option<usize> {
        self.poly.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    fn check_point(&self, z: Complex64) -> Result<()> {
        for p in &self.poles {
            if (z - p.pole).norm() < POLE_TOLERANCE {
                return Err(Error::NearPole { re: z.re, im: z.im, tol: POLE_TOLERANCE });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.derivative_at(z, 0)
    }

    /// `f^{(j)}(x)` by closed-form differentiation.
    pub fn derivative_at(&self, x: Complex64, j: u32) -> Result<Complex64> {
        self.check_point(x)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.poles {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let d = x - p.pole;
            acc += p.coeff * sign * rising(p.order, j) * d.powi(-((p.order + j) as i32));
        }
        // Horner on the differentiated polynomial
        let mut poly_val = Complex64::new(0.0, 0.0);
        for k in (j as usize..self.poly.len()).rev() {
            poly_val = poly_val * x + self.poly[k] * falling(k, j);
        }
        Ok(acc + poly_val)
    }

    /// `R_x^t f(y) = f(y) − Σ_{j ≤ t} f^{(j)}(x)/j! (y − x)^j`.
    pub fn taylor_remainder(&self, x: Complex64, t: u32, y: Complex64) -> Result<Complex64> {
        let mut taylor = Complex64::new(0.0, 0.0);
        let h = y - x;
        let mut hp = Complex64::new(1.0, 0.0);
        for j in 0..=t {
            taylor += self.derivative_at(x, j)? / factorial(j) * hp;
            hp *= h;
        }
        Ok(self.evaluate(y)? - taylor)
    }

    /// Every pole lies strictly inside one of the domain's holes.
    pub fn poles_inside(&self, domain: &SwissCheeseDomain) -> bool {
        self.poles.iter().all(|p| {
            domain
                .holes()
                .iter()
                .any(|h| (p.pole - Complex64::new(h.a(), 0.0)).norm() < h.r())
        })
    }
}

/// Where the random poles go and how the result is normalized.
#[derive(Clone, Debug)]
pub struct GeneratorOptions {
    pub alpha: f64,
    /// Restrict poles to holes with index in this range (inclusive).
    pub hole_range: (u32, u32),
    pub norm: SeminormOptions,
    /// Normalization region; `None` uses `[-2, 2]²` minus every hole.
    pub region: Option<Region>,
}

impl GeneratorOptions {
    pub fn new(alpha: f64) -> Self {
        GeneratorOptions {
            alpha,
            hole_range: (1, u32::MAX),
            norm: SeminormOptions { samples: 6000, refine_rounds: 8, seed: 0 },
            region: None,
        }
    }
}

/// `[-2, 2]²` with the open holes removed.
pub fn default_norm_region(domain: &SwissCheeseDomain) -> Region {
    let excluded: Vec<Disk> = domain.holes().iter().filter(|h| h.r() > 0.0).map(|h| h.disk()).collect();
    Region::new(Shape::Square { center: Complex64::new(0.0, 0.0), half: 2.0 }, excluded)
}

/// Random member of the test-function family, normalized so that the
/// estimated `Lip_α` norm on the normalization region is 1.
///
/// `pole_budget` caps the total pole order; each term has order 1 or 2.
pub fn random_testfn(
    domain: &SwissCheeseDomain,
    pole_budget: u32,
    seed: u64,
    opts: &GeneratorOptions,
) -> Result<(TestFunction, NormEstimate)> {
    if pole_budget == 0 {
        return Err(Error::Generation("pole budget must be at least 1".into()));
    }
    let holes: Vec<_> = domain
        .holes()
        .iter()
        .filter(|h| h.valid() && h.r() > 0.0 && h.index >= opts.hole_range.0 && h.index <= opts.hole_range.1)
        .collect();
    if holes.is_empty() {
        return Err(Error::Generation("domain has no valid hole to place poles in".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = rng.random_range(1..=pole_budget);
    let mut remaining = pole_budget;
    let mut f = TestFunction::default();
    for k in 0..terms {
        let left_after = terms - k - 1;
        let max_order = (remaining - left_after).min(2);
        let order = rng.random_range(1..=max_order);
        remaining -= order;
        let h = holes[rng.random_range(0..holes.len())];
        let rho = 0.5 * h.r() * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        let pole = Complex64::new(h.a(), 0.0) + Complex64::from_polar(rho, theta);
        let phase = std::f64::consts::TAU * rng.random::<f64>();
        let mag = h.r().powf(order as f64 + opts.alpha);
        f.poles.push(PoleTerm { pole, order, coeff: Complex64::from_polar(mag, phase) });
    }
    let region = opts.region.clone().unwrap_or_else(|| default_norm_region(domain));
    let mut norm_opts = opts.norm;
    norm_opts.seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    for _ in 0..5 {
        let est = lip_seminorm(&f, &region, opts.alpha, &norm_opts)?;
        if (0.9..=1.1).contains(&est.lip_norm) {
            return Ok((f, est));
        }
        if !(est.lip_norm > 0.0) || !est.lip_norm.is_finite() {
            return Err(Error::Generation(format!("degenerate norm estimate {}", est.lip_norm)));
        }
        f = f.scaled(1.0 / est.lip_norm);
    }
    Err(Error::Generation("normalization did not settle in [0.9, 1.1]".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::AdmissibleFunction;
    use crate::domain::BuildMode;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let sq = TestFunction::real_polynomial(&[0.0, 0.0, 1.0]);
        assert_eq!(sq.evaluate(c(0.5, 0.0)).unwrap(), c(0.25, 0.0));
        let p = TestFunction::simple_pole(c(0.375, 0.0), c(1.0, 0.0));
        assert_relative_eq!(p.evaluate(c(0.0, 0.0)).unwrap().re, -1.0 / 0.375, max_relative = 1e-15);
        assert!(matches!(p.evaluate(c(0.375, 0.0)), Err(Error::NearPole { .. })));
    }

    #[test]
    fn pole_value_on_hole_boundary() {
        let d = SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), 8, BuildMode::Dense).unwrap();
        let h = d.hole(4).unwrap();
        let coeff = c(0.3, -0.2);
        let f = TestFunction::simple_pole(c(h.a(), 0.0), coeff);
        let v = f.evaluate(c(h.a() + h.r(), 0.0)).unwrap();
        assert_relative_eq!((v - coeff / h.r()).norm(), 0.0, epsilon = 1e-9 * (coeff / h.r()).norm());
        assert!(f.poles_inside(&d));
    }

    #[test]
    fn derivative_examples() {
        let sq = TestFunction::real_polynomial(&[0.0, 0.0, 1.0]);
        assert_eq!(sq.derivative_at(c(0.0, 0.0), 1).unwrap(), c(0.0, 0.0));
        assert_eq!(sq.derivative_at(c(0.0, 0.0), 2).unwrap(), c(2.0, 0.0));
        let a = 0.3;
        let p = TestFunction::simple_pole(c(a, 0.0), c(1.0, 0.0));
        assert_relative_eq!(p.derivative_at(c(0.0, 0.0), 1).unwrap().re, -1.0 / (a * a), max_relative = 1e-14);
        // second order pole: d/dz (z-a)^{-2} = -2 (z-a)^{-3}
        let q = TestFunction::default().with_pole(PoleTerm { pole: c(a, 0.0), order: 2, coeff: c(1.0, 0.0) });
        assert_relative_eq!(q.derivative_at(c(0.0, 0.0), 1).unwrap().re, 2.0 / (a * a * a), max_relative = 1e-14);
    }

    #[test]
    fn remainder_examples() {
        let sq = TestFunction::real_polynomial(&[0.0, 0.0, 1.0]);
        let y = c(0.2, -0.1);
        assert_relative_eq!((sq.taylor_remainder(c(0.0, 0.0), 1, y).unwrap() - y * y).norm(), 0.0, epsilon = 1e-16);
        let cubic = TestFunction::polynomial(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, -1.0)]);
        assert!(cubic.taylor_remainder(c(0.3, 0.1), 3, c(-0.7, 0.4)).unwrap().norm() < 1e-14);
        // geometric series tail of 1/(z - a) about 0: -Σ_{j≥2} y^j / a^{j+1}
        let a = 0.5;
        let f = TestFunction::simple_pole(c(a, 0.0), c(1.0, 0.0));
        let yv = c(a / 2.0, 0.0);
        let tail: Complex64 = (2..200).map(|j| -yv.powi(j) / a.powi(j + 1)).sum();
        let r = f.taylor_remainder(c(0.0, 0.0), 1, yv).unwrap();
        assert_relative_eq!((r - tail).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn random_generation() {
        let d = SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), 10, BuildMode::Dense).unwrap();
        let opts = GeneratorOptions::new(0.5);
        let (f, est) = random_testfn(&d, 1, 7, &opts).unwrap();
        assert_eq!(f.poles.len(), 1);
        assert_eq!(f.poles[0].order, 1);
        assert!(f.poles_inside(&d));
        assert!((0.9..=1.1).contains(&est.lip_norm));
        let (g, _) = random_testfn(&d, 1, 7, &opts).unwrap();
        assert_eq!(f, g);
        assert!(matches!(random_testfn(&d, 0, 7, &opts), Err(Error::Generation(_))));
        let bare = SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), 1, BuildMode::Dense).unwrap();
        assert!(matches!(random_testfn(&bare, 1, 7, &opts), Err(Error::Generation(_))));
    }
}
