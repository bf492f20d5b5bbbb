//! Disks, dyadic annuli, the Swiss-cheese domain and its exceptional set.
//!
//! The domain is the open unit disk with one closed disk removed from each
//! selected dyadic annulus `A_n(0)`. Hole `n` is centered at
//! `a_n = (3/4) 2^{-n}` on the positive real axis and its radius satisfies
//! `r_n^{1+α} = a_n² n^{-1} φ(a_n)`.

use num_complex::Complex64;

use crate::admissible::{hole_center, AdmissibleFunction, SubsequenceSelection};
use crate::error::{Error, Result};
use crate::wide::WideReal;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Disk { center, radius })
    }

    /// Closed-disk membership.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// `A_n(x) = {z : 2^{-(n+1)} ≤ |z − x| ≤ 2^{-n}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub center: Complex64,
    pub index: u32,
}

impl Annulus {
    pub fn new(center: Complex64, index: u32) -> Self {
        Annulus { center, index }
    }

    pub fn inner_radius(&self) -> f64 {
        2f64.powi(-(self.index as i32) - 1)
    }

    pub fn outer_radius(&self) -> f64 {
        2f64.powi(-(self.index as i32))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        d >= self.inner_radius() && d <= self.outer_radius()
    }
}

/// Index of the dyadic annulus about `center` containing `z`.
///
/// Radii `d ∈ [2^{-(n+1)}, 2^{-n})` map to `n`, so a boundary circle is owned
/// by the annulus of smaller index; `d = 1` maps to 0 and `d > 1` to `None`.
pub fn annulus_of(center: Complex64, z: Complex64) -> Result<Option<u32>> {
    let d = (z - center).norm();
    if d == 0.0 {
        return Err(Error::Domain("no annulus contains its own center".into()));
    }
    if d > 1.0 {
        return Ok(None);
    }
    if d == 1.0 {
        return Ok(Some(0));
    }
    let w = WideReal::from_f64(d);
    // d = m 2^e with m in [0.5, 1), so 2^{e-1} <= d < 2^e
    Ok(Some((-w.exponent()) as u32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// One hole in every annulus `1..=max_index`.
    Dense,
    /// Holes only in the annuli picked by [`AdmissibleFunction::select_subsequence`].
    Subsequenced,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HoleFlags {
    /// `r_n < a_n / 3`: the closed hole sits strictly inside `A_n`.
    pub inside_annulus: bool,
    /// `r_n < s_n`.
    pub below_margin: bool,
    /// `r_n + s_n < a_n / 3`: the exceptional margin also fits in `A_n`.
    pub clearance: bool,
}

impl HoleFlags {
    pub fn all(&self) -> bool {
        self.inside_annulus && self.below_margin && self.clearance
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hole {
    pub index: u32,
    pub center: WideReal,
    pub radius: WideReal,
    /// `r_n^{1+α}`, computed as `a_n² n^{-1} φ(a_n)`.
    pub content: WideReal,
    /// `s_n = (1/7) n^{-1/3} a_n`.
    pub margin: WideReal,
    pub flags: HoleFlags,
}

impl Hole {
    pub fn a(&self) -> f64 {
        self.center.to_f64()
    }

    pub fn r(&self) -> f64 {
        self.radius.to_f64()
    }

    pub fn s(&self) -> f64 {
        self.margin.to_f64()
    }

    pub fn valid(&self) -> bool {
        self.flags.inside_annulus
    }

    pub fn disk(&self) -> Disk {
        Disk { center: Complex64::new(self.a(), 0.0), radius: self.r() }
    }

    /// `max(0, |z − a_n| − r_n)`.
    pub fn distance(&self, z: Complex64) -> f64 {
        ((z - Complex64::new(self.a(), 0.0)).norm() - self.r()).max(0.0)
    }
}

/// `s_n = (1/7) n^{-1/3} a_n`.
pub fn margin_rule(n: u32) -> WideReal {
    hole_center(n) * ((n as f64).powf(-1.0 / 3.0) / 7.0)
}

#[derive(Clone, Debug)]
pub struct SwissCheeseDomain {
    alpha: f64,
    phi: AdmissibleFunction,
    mode: BuildMode,
    max_index: u32,
    holes: Vec<Hole>,
    selection: Option<SubsequenceSelection>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryRow {
    pub index: u32,
    pub flags: HoleFlags,
    /// `r_n / s_n`.
    pub radius_ratio: f64,
    /// No overlap with the next hole inward.
    pub disjoint_from_next: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryReport {
    pub rows: Vec<GeometryRow>,
    /// Least index from which every hole has all flags set.
    pub n0: u32,
    pub overlapping_pairs: Vec<(u32, u32)>,
}

impl SwissCheeseDomain {
    pub fn build(alpha: f64, phi: AdmissibleFunction, max_index: u32, mode: BuildMode) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        let (indices, selection): (Vec<u32>, _) = match mode {
            BuildMode::Dense => ((1..=max_index).collect(), None),
            BuildMode::Subsequenced => {
                if phi.is_constant_one() && max_index >= 2 {
                    return Err(Error::Construction(
                        "subsequenced mode needs φ(a_n) < ½ φ(a_{n-1}), which is impossible for constant φ".into(),
                    ));
                }
                let sel = phi.select_subsequence(max_index)?;
                if let Some(note) = &sel.note {
                    return Err(Error::Construction(note.clone()));
                }
                (sel.indices.clone(), Some(sel))
            }
        };
        let holes = indices
            .iter()
            .map(|&n| make_hole(alpha, &phi, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SwissCheeseDomain { alpha, phi, mode, max_index, holes, selection })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phi(&self) -> &AdmissibleFunction {
        &self.phi
    }

    pub fn mode(&self) -> BuildMode {
        self.mode
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn selection(&self) -> Option<&SubsequenceSelection> {
        self.selection.as_ref()
    }

    pub fn hole(&self, n: u32) -> Result<&Hole> {
        self.holes
            .binary_search_by_key(&n, |h| h.index)
            .map(|i| &self.holes[i])
            .map_err(|_| Error::UnknownHole(n))
    }

    pub fn has_hole(&self, n: u32) -> bool {
        self.hole(n).is_ok()
    }

    pub fn hole_distance(&self, n: u32, z: Complex64) -> Result<f64> {
        Ok(self.hole(n)?.distance(z))
    }

    /// Open unit disk minus the closed holes.
    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < 1.0 && self.holes.iter().all(|h| (z - Complex64::new(h.a(), 0.0)).norm() > h.r())
    }

    /// `φ(a_n) < ½ φ(a_{n-1})` between consecutive holes.
    pub fn halving_certified(&self) -> bool {
        self.holes.windows(2).all(|w| {
            match (self.phi.phi_wide(w[0].center), self.phi.phi_wide(w[1].center)) {
                (Ok(prev), Ok(cur)) => cur < prev * 0.5,
                _ => false,
            }
        })
    }

    pub fn validate_geometry(&self) -> GeometryReport {
        let mut rows = Vec::with_capacity(self.holes.len());
        let mut overlapping_pairs = Vec::new();
        for (k, h) in self.holes.iter().enumerate() {
            let disjoint_from_next = match self.holes.get(k + 1) {
                // holes sit on the positive axis with decreasing centers
                Some(next) => h.center > h.radius + next.center + next.radius,
                None => true,
            };
            if !disjoint_from_next {
                overlapping_pairs.push((h.index, self.holes[k + 1].index));
            }
            rows.push(GeometryRow {
                index: h.index,
                flags: h.flags,
                radius_ratio: (h.radius / h.margin).to_f64(),
                disjoint_from_next,
            });
        }
        let mut n0 = 1;
        for row in rows.iter().rev() {
            if !row.flags.all() {
                n0 = row.index + 1;
                break;
            }
        }
        GeometryReport { rows, n0, overlapping_pairs }
    }
}

fn make_hole(alpha: f64, phi: &AdmissibleFunction, n: u32) -> Result<Hole> {
    let a = hole_center(n);
    let content = a * a * phi.phi_wide(a)? / (n as f64);
    let radius = content.powf(1.0 / (1.0 + alpha));
    let margin = margin_rule(n);
    let third = a / 3.0;
    let flags = HoleFlags {
        inside_annulus: radius < third,
        below_margin: radius < margin,
        clearance: radius + margin < third,
    };
    Ok(Hole { index: n, center: a, radius, content, margin, flags })
}

/// `E = ∪_n {z ∈ A_n : d_n(z) ≥ s_n}` over the annuli carrying holes;
/// annuli without a hole belong to `E` entirely.
#[derive(Clone, Copy, Debug)]
pub struct ExceptionalSet<'a> {
    domain: &'a SwissCheeseDomain,
}

impl<'a> ExceptionalSet<'a> {
    pub fn new(domain: &'a SwissCheeseDomain) -> Self {
        ExceptionalSet { domain }
    }

    pub fn domain(&self) -> &'a SwissCheeseDomain {
        self.domain
    }

    pub fn margin(&self, n: u32) -> f64 {
        margin_rule(n).to_f64()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() >= 1.0 {
            return false;
        }
        let n = match annulus_of(Complex64::new(0.0, 0.0), z) {
            Ok(Some(n)) => n,
            _ => return false,
        };
        match self.domain.hole(n) {
            Ok(h) => h.distance(z) >= h.s(),
            Err(_) => true,
        }
    }
}
