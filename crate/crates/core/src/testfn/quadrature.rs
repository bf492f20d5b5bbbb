//! Trapezoidal contour integrals on circles and the Melnikov-type probe.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::norm::{lip_seminorm, Region, SeminormOptions, Shape};
use super::TestFunction;
use crate::content::{content_upper, CoverOptions, Target};
use crate::domain::{Annulus, Disk};
use crate::error::{Error, Result};

const MIN_CLEARANCE: f64 = 1e-9;
const REL_TOL: f64 = 1e-10;
const START_NODES: usize = 16;
const MAX_NODES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contour {
    /// Counterclockwise circle.
    Circle { center: Complex64, radius: f64 },
    /// Outer circle counterclockwise, inner circle clockwise.
    AnnulusBoundary(Annulus),
}

impl Contour {
    fn circles(&self) -> Vec<(Complex64, f64, f64)> {
        match *self {
            Contour::Circle { center, radius } => vec![(center, radius, 1.0)],
            Contour::AnnulusBoundary(a) => {
                vec![(a.center, a.outer_radius(), 1.0), (a.center, a.inner_radius(), -1.0)]
            }
        }
    }
}

/// The factor multiplying `f(z)` under the integral sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integrand {
    Plain,
    OverZ,
    OverZ2,
    /// `1 / (z² (z − y))`.
    Cauchy3(Complex64),
}

impl Integrand {
    fn singularities(&self) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Integrand::Plain => vec![],
            Integrand::OverZ | Integrand::OverZ2 => vec![zero],
            Integrand::Cauchy3(y) => vec![zero, y],
        }
    }

    fn weight(&self, z: Complex64) -> Complex64 {
        match *self {
            Integrand::Plain => Complex64::new(1.0, 0.0),
            Integrand::OverZ => 1.0 / z,
            Integrand::OverZ2 => 1.0 / (z * z),
            Integrand::Cauchy3(y) => 1.0 / (z * z * (z - y)),
        }
    }
}

/// `∮ f(z)·w(z) dz` without the `1/2πi` factor.
pub fn contour_integral(f: &TestFunction, contour: &Contour, integrand: Integrand) -> Result<Complex64> {
    let mut singular = integrand.singularities();
    singular.extend(f.poles.iter().map(|p| p.pole));
    let mut total = Complex64::new(0.0, 0.0);
    for (center, radius, sign) in contour.circles() {
        if let Some(s) = singular.iter().find(|s| ((**s - center).norm() - radius).abs() < MIN_CLEARANCE) {
            return Err(Error::Precondition(format!(
                "contour |z - {center}| = {radius} passes within {MIN_CLEARANCE:e} of singularity {s}"
            )));
        }
        total += sign * circle_integral(f, integrand, center, radius)?;
    }
    Ok(total)
}

fn circle_integral(f: &TestFunction, integrand: Integrand, center: Complex64, radius: f64) -> Result<Complex64> {
    // sum of g(z)·dz/dθ over nodes, and of its modulus for the relative scale
    let node = |theta: f64| -> Result<(Complex64, f64)> {
        let e = Complex64::from_polar(1.0, theta);
        let z = center + radius * e;
        let v = f.evaluate(z)? * integrand.weight(z) * Complex64::new(0.0, radius) * e;
        Ok((v, v.norm()))
    };
    let mut nodes = START_NODES;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..nodes {
        let (v, a) = node(TAU * k as f64 / nodes as f64)?;
        sum += v;
        abs_sum += a;
    }
    let mut value = sum * (TAU / nodes as f64);
    loop {
        // new nodes sit halfway between the old ones
        for k in 0..nodes {
            let (v, a) = node(TAU * (k as f64 + 0.5) / nodes as f64)?;
            sum += v;
            abs_sum += a;
        }
        nodes *= 2;
        let next = sum * (TAU / nodes as f64);
        let scale = next.norm().max(abs_sum * TAU / nodes as f64);
        let delta = (next - value).norm();
        value = next;
        if delta <= REL_TOL * scale {
            return Ok(value);
        }
        if nodes >= MAX_NODES {
            return Err(Error::Quadrature { nodes, delta });
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MelnikovRecord {
    /// `|∮_Γ f dz|`.
    pub lhs: f64,
    /// Content bound for `K`.
    pub content: f64,
    /// Seminorm estimate on a collar around `K`.
    pub seminorm: f64,
    /// `lhs / (content · seminorm)`; `None` when the seminorm vanishes.
    pub ratio: Option<f64>,
}

/// Square of three times the half-extent of `K`, with `K` removed.
pub fn collar_region(k: &[Disk]) -> Result<Region> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in k {
        x0 = x0.min(d.center.re - d.radius);
        x1 = x1.max(d.center.re + d.radius);
        y0 = y0.min(d.center.im - d.radius);
        y1 = y1.max(d.center.im + d.radius);
    }
    if k.is_empty() {
        return Err(Error::Usage("K must contain at least one disk".into()));
    }
    let center = Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let half = 1.5 * (x1 - x0).max(y1 - y0);
    Ok(Region::new(Shape::Square { center, half }, k.to_vec()))
}

/// Empirical lower bound for the constant in `|∮ f| ≤ C·M(K)·‖f‖′`.
pub fn melnikov_ratio(
    f: &TestFunction,
    contour: &Contour,
    k: &[Disk],
    alpha: f64,
    opts: &SeminormOptions,
) -> Result<MelnikovRecord> {
    if let Some(p) = f.poles.iter().find(|p| !k.iter().any(|d| (p.pole - d.center).norm() < d.radius)) {
        return Err(Error::Precondition(format!("pole {} lies outside K", p.pole)));
    }
    let lhs = contour_integral(f, contour, Integrand::Plain)?.norm();
    let content = match k {
        [d] => d.radius.powf(1.0 + alpha),
        _ => content_upper(&Target::Disks(k.to_vec()), alpha, &CoverOptions::default()).value,
    };
    let seminorm = lip_seminorm(f, &collar_region(k)?, alpha, opts)?.seminorm;
    let ratio = (seminorm > 0.0 && content > 0.0).then(|| lhs / (content * seminorm));
    Ok(MelnikovRecord { lhs, content, seminorm, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half_circle() -> Contour {
        Contour::Circle { center: c(0.0, 0.0), radius: 0.5 }
    }

    #[test]
    fn cauchy_formula_for_constant_and_derivative() {
        let two_pi_i = c(0.0, TAU);
        let one = TestFunction::real_polynomial(&[1.0]);
        let v = contour_integral(&one, &half_circle(), Integrand::OverZ).unwrap() / two_pi_i;
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        let id = TestFunction::real_polynomial(&[0.0, 1.0]);
        let d = contour_integral(&id, &half_circle(), Integrand::OverZ2).unwrap() / two_pi_i;
        assert!((d - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn residue_of_simple_pole() {
        let f = TestFunction::simple_pole(c(0.1, 0.05), c(2.0, -1.0));
        let v = contour_integral(&f, &half_circle(), Integrand::Plain).unwrap();
        assert!((v - c(2.0, -1.0) * c(0.0, TAU)).norm() < 1e-10);
    }

    #[test]
    fn annulus_boundary_without_enclosed_pole_vanishes() {
        // pole at a_4 = 0.046875 lies inside the inner circle of A_2
        let f = TestFunction::simple_pole(c(0.046875, 0.0), c(1.0, 0.0));
        let v = contour_integral(&f, &Contour::AnnulusBoundary(Annulus::new(c(0.0, 0.0), 2)), Integrand::OverZ).unwrap();
        assert!(v.norm() < 1e-9, "{v}");
    }

    #[test]
    fn contour_through_pole_is_rejected() {
        let f = TestFunction::simple_pole(c(0.5, 0.0), c(1.0, 0.0));
        assert!(matches!(contour_integral(&f, &half_circle(), Integrand::Plain), Err(Error::Precondition(_))));
        let one = TestFunction::real_polynomial(&[1.0]);
        let through_origin = Contour::Circle { center: c(0.5, 0.0), radius: 0.5 };
        assert!(contour_integral(&one, &through_origin, Integrand::OverZ).is_err());
    }

    #[test]
    fn near_contour_pole_reports_nonconvergence() {
        let f = TestFunction::simple_pole(c(0.5 + 1e-8, 0.0), c(1.0, 0.0));
        assert!(matches!(contour_integral(&f, &half_circle(), Integrand::Plain), Err(Error::Quadrature { .. })));
    }

    #[test]
    fn melnikov_single_hole_and_deformation() {
        let (a, r, alpha) = (0.046875, 0.0024184, 0.5);
        let hole = Disk::new(c(a, 0.0), r).unwrap();
        let f = TestFunction::simple_pole(hole.center, c(r.powf(1.0 + alpha), 0.0));
        let opts = SeminormOptions::default();
        let near = melnikov_ratio(&f, &Contour::Circle { center: hole.center, radius: 2.0 * r }, &[hole], alpha, &opts)
            .unwrap();
        let far = melnikov_ratio(&f, &half_circle(), &[hole], alpha, &opts).unwrap();
        let expected = 2.0 * PI * r.powf(1.0 + alpha);
        assert!((near.lhs - expected).abs() < 1e-10 * expected);
        assert!((far.lhs - expected).abs() < 1e-10 * expected);
        assert_eq!(near.content, r.powf(1.0 + alpha));
        assert!(near.seminorm > 1.0 && near.seminorm < 2.0, "{}", near.seminorm);
        let ratio = near.ratio.unwrap();
        assert!((ratio - 2.0 * PI / near.seminorm).abs() < 1e-9);
    }

    #[test]
    fn melnikov_of_analytic_function_is_zero() {
        let f = TestFunction::real_polynomial(&[1.0, 2.0, 3.0]);
        let k = [Disk::new(c(0.2, 0.0), 0.01).unwrap()];
        let rec = melnikov_ratio(&f, &half_circle(), &k, 0.5, &SeminormOptions::default()).unwrap();
        assert!(rec.lhs < 1e-12);
        assert!(rec.ratio.unwrap() < 1e-10);
        let constant = TestFunction::real_polynomial(&[4.0]);
        assert_eq!(melnikov_ratio(&constant, &half_circle(), &k, 0.5, &SeminormOptions::default()).unwrap().ratio, None);
    }
}
