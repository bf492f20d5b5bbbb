//! Hausdorff content through dyadic-square covers.
//!
//! Cover values charge each square `h(ρ)` where `ρ` is the square's radius
//! (half its side), so that a disk of radius `r` and its bounding square
//! carry the same weight `r^{1+α}`. Upper bounds come from a branch-and-bound
//! search over quadtrees; lower bounds are only reported where exact disk
//! values apply.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::domain::{Annulus, Disk, SwissCheeseDomain};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_LEVEL: u32 = 14;
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Clone)]
pub struct MeasureFunction {
    alpha: f64,
    map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for MeasureFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureFunction").field("alpha", &self.alpha).finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureEligibility {
    pub non_decreasing: bool,
    pub vanishes_at_zero: bool,
    pub dominated: bool,
    /// `h(t) t^{-(1+α)}` at the smallest grid node.
    pub ratio_at_min: f64,
}

impl MeasureFunction {
    /// `h(t) = t^{1+α}`, the cap every eligible measure function sits under.
    pub fn power_cap(alpha: f64) -> Self {
        MeasureFunction { alpha, map: Arc::new(move |t: f64| t.powf(1.0 + alpha)) }
    }

    pub fn new(alpha: f64, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MeasureFunction { alpha, map: Arc::new(map) }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.map)(t)
    }

    /// Sampled check on `points` geometric nodes in `[t_min, t_max]`.
    pub fn eligibility(&self, t_min: f64, t_max: f64, points: usize, ratio_tol: f64) -> MeasureEligibility {
        let ratio = (t_max / t_min).ln();
        let nodes: Vec<f64> =
            (0..points).map(|i| t_min * (ratio * i as f64 / (points - 1) as f64).exp()).collect();
        let vals: Vec<f64> = nodes.iter().map(|&t| self.eval(t)).collect();
        let non_decreasing = vals.windows(2).all(|w| w[1] >= w[0]);
        let dominated = nodes
            .iter()
            .zip(&vals)
            .all(|(&t, &h)| h >= 0.0 && h <= t.powf(1.0 + self.alpha) * (1.0 + 1e-12));
        let ratio_at_min = vals[0] / nodes[0].powf(1.0 + self.alpha);
        MeasureEligibility {
            non_decreasing,
            vanishes_at_zero: vals[0] <= ratio_tol * vals[points - 1].max(f64::MIN_POSITIVE),
            dominated,
            ratio_at_min,
        }
    }
}

/// Root square of a dyadic system: `[x0, x0+side] × [y0, y0+side]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicGrid {
    pub x0: f64,
    pub y0: f64,
    pub side: f64,
}

impl DyadicGrid {
    /// `[-1, 1]²`, the default root for targets in the closed unit disk.
    pub fn unit() -> Self {
        DyadicGrid { x0: -1.0, y0: -1.0, side: 2.0 }
    }

    /// Smallest square sharing the center of the box `[xa, xb] × [ya, yb]`.
    pub fn enclosing(xa: f64, xb: f64, ya: f64, yb: f64) -> Self {
        let side = (xb - xa).max(yb - ya);
        let cx = 0.5 * (xa + xb);
        let cy = 0.5 * (ya + yb);
        DyadicGrid { x0: cx - 0.5 * side, y0: cy - 0.5 * side, side }
    }
}

/// Square `[i s, (i+1) s] × [j s, (j+1) s]` (offset by the grid origin) with
/// `s = side · 2^{-level}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicSquare {
    pub level: u32,
    pub i: i64,
    pub j: i64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareBounds {
    pub x: f64,
    pub y: f64,
    pub side: f64,
}

impl SquareBounds {
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x && z.re <= self.x + self.side && z.im >= self.y && z.im <= self.y + self.side
    }

    fn center(&self) -> (f64, f64) {
        (self.x + 0.5 * self.side, self.y + 0.5 * self.side)
    }

    /// Nearest and farthest distance from `p` to the closed square.
    fn distance_range(&self, p: Complex64) -> (f64, f64) {
        let (cx, cy) = self.center();
        let half = 0.5 * self.side;
        let dx = (p.re - cx).abs();
        let dy = (p.im - cy).abs();
        let near = (dx - half).max(0.0).hypot((dy - half).max(0.0));
        let far = (dx + half).hypot(dy + half);
        (near, far)
    }
}

impl DyadicGrid {
    pub fn bounds(&self, sq: &DyadicSquare) -> SquareBounds {
        let s = self.side / 2f64.powi(sq.level as i32);
        SquareBounds { x: self.x0 + sq.i as f64 * s, y: self.y0 + sq.j as f64 * s, side: s }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Outside,
    Inside,
    Partial,
}

fn classify_disk(sq: &SquareBounds, d: &Disk) -> Class {
    let (near, far) = sq.distance_range(d.center);
    if near > d.radius {
        Class::Outside
    } else if far <= d.radius {
        Class::Inside
    } else {
        Class::Partial
    }
}

fn classify_disks(sq: &SquareBounds, disks: &[Disk]) -> Class {
    let mut any_partial = false;
    for d in disks {
        match classify_disk(sq, d) {
            Class::Inside => return Class::Inside,
            Class::Partial => any_partial = true,
            Class::Outside => {}
        }
    }
    if any_partial {
        Class::Partial
    } else {
        Class::Outside
    }
}

/// Sets whose content the cover search can bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// Finite union of closed disks (empty union allowed).
    Disks(Vec<Disk>),
    /// `A ∩ (∪ holes)`, i.e. `A_n \ U` for a Swiss-cheese domain.
    AnnulusHoles { annulus: Annulus, holes: Vec<Disk> },
}

impl Target {
    pub fn is_empty(&self) -> bool {
        self.components().is_empty()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Target::Disks(ds) => ds.iter().any(|d| d.contains(z)),
            Target::AnnulusHoles { annulus, holes } => annulus.contains(z) && holes.iter().any(|d| d.contains(z)),
        }
    }

    fn classify(&self, sq: &SquareBounds) -> Class {
        match self {
            Target::Disks(ds) => classify_disks(sq, ds),
            Target::AnnulusHoles { annulus, holes } => {
                let (near, far) = sq.distance_range(annulus.center);
                let (r_in, r_out) = (annulus.inner_radius(), annulus.outer_radius());
                if far < r_in || near > r_out {
                    return Class::Outside;
                }
                let inside_annulus = near >= r_in && far <= r_out;
                match classify_disks(sq, holes) {
                    Class::Outside => Class::Outside,
                    Class::Inside if inside_annulus => Class::Inside,
                    _ => Class::Partial,
                }
            }
        }
    }

    /// Bounding boxes `[xa, xb, ya, yb]` of the pieces of the target.
    pub fn components(&self) -> Vec<[f64; 4]> {
        self.pieces().into_iter().map(|(b, _)| b).collect()
    }

    /// Pieces as (bounding box, disk) pairs; one per disk meeting the target.
    fn pieces(&self) -> Vec<([f64; 4], Disk)> {
        let disk_box = |d: &Disk| {
            [d.center.re - d.radius, d.center.re + d.radius, d.center.im - d.radius, d.center.im + d.radius]
        };
        match self {
            Target::Disks(ds) => ds.iter().map(|d| (disk_box(d), *d)).collect(),
            Target::AnnulusHoles { annulus, holes } => {
                let (r_in, r_out) = (annulus.inner_radius(), annulus.outer_radius());
                let c = annulus.center;
                holes
                    .iter()
                    .filter(|d| {
                        let dist = (d.center - c).norm();
                        dist + d.radius >= r_in && dist - d.radius <= r_out
                    })
                    .map(|d| {
                        let b = disk_box(d);
                        ([b[0].max(c.re - r_out), b[1].min(c.re + r_out), b[2].max(c.im - r_out), b[3].min(c.im + r_out)], *d)
                    })
                    .collect()
            }
        }
    }

    /// The part of the target made of the listed pieces.
    fn restrict(&self, members: &[usize], pieces: &[([f64; 4], Disk)]) -> Target {
        let disks: Vec<Disk> = members.iter().map(|&k| pieces[k].1).collect();
        match self {
            Target::Disks(_) => Target::Disks(disks),
            Target::AnnulusHoles { annulus, .. } => Target::AnnulusHoles { annulus: *annulus, holes: disks },
        }
    }

    /// Exact content of a disk contained in the target, when one is known.
    fn lower_bound(&self, alpha: f64) -> Option<f64> {
        match self {
            Target::Disks(ds) => ds.iter().map(|d| d.radius.powf(1.0 + alpha)).reduce(f64::max),
            Target::AnnulusHoles { annulus, holes } => holes
                .iter()
                .filter(|d| {
                    let dist = (d.center - annulus.center).norm();
                    dist - d.radius >= annulus.inner_radius() && dist + d.radius <= annulus.outer_radius()
                })
                .map(|d| d.radius.powf(1.0 + alpha))
                .reduce(f64::max),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContentMethod {
    ExactDisk,
    CoverOptimized,
    BracketedUnion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContentEstimate {
    pub upper: f64,
    pub lower: Option<f64>,
    pub method: ContentMethod,
    pub warning: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverOptions {
    pub max_level: u32,
    pub node_budget: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { max_level: DEFAULT_MAX_LEVEL, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverSquare {
    pub grid: usize,
    pub square: DyadicSquare,
}

#[derive(Clone, Debug)]
pub struct CoverEstimate {
    pub target: Target,
    pub alpha: f64,
    pub grids: Vec<DyadicGrid>,
    pub squares: Vec<CoverSquare>,
    /// `Σ h(ρ_j)` over the listed squares.
    pub value: f64,
    /// False when a node budget ran out before the search finished.
    pub optimal: bool,
    pub nodes: usize,
    measure: MeasureFunction,
}

impl CoverEstimate {
    pub fn bounds(&self, sq: &CoverSquare) -> SquareBounds {
        self.grids[sq.grid].bounds(&sq.square)
    }

    /// `h` of the square's radius.
    pub fn weight(&self, sq: &CoverSquare) -> f64 {
        self.measure.eval(0.5 * self.bounds(sq).side)
    }

    pub fn covers(&self, z: Complex64) -> bool {
        self.squares.iter().any(|s| self.bounds(s).contains(z))
    }

    pub fn estimate(&self) -> ContentEstimate {
        let lower = self.target.lower_bound(self.alpha).map(|l| l.min(self.value));
        ContentEstimate {
            upper: self.value,
            lower,
            method: if matches!(&self.target, Target::Disks(d) if d.len() <= 1) {
                ContentMethod::CoverOptimized
            } else {
                ContentMethod::BracketedUnion
            },
            warning: (!self.optimal).then(|| "node budget exhausted; cover is not optimal".to_string()),
        }
    }
}

/// `M_*^{1+α}(B) = r^{1+α}` for a disk of radius `r`.
pub fn content_disk_exact(radius: f64, alpha: f64) -> Result<ContentEstimate> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
    }
    let v = radius.powf(1.0 + alpha);
    Ok(ContentEstimate { upper: v, lower: Some(v), method: ContentMethod::ExactDisk, warning: None })
}

struct Search<'a> {
    target: &'a Target,
    grid: DyadicGrid,
    measure: &'a MeasureFunction,
    max_level: u32,
    budget: usize,
    nodes: usize,
    exhausted: bool,
    chosen: Vec<DyadicSquare>,
}

impl Search<'_> {
    fn solve(&mut self, sq: DyadicSquare) -> f64 {
        self.nodes += 1;
        let b = self.grid.bounds(&sq);
        let keep = self.measure.eval(0.5 * b.side);
        match self.target.classify(&b) {
            Class::Outside => 0.0,
            Class::Inside => {
                // splitting a square never lowers Σ h for α < 1
                self.chosen.push(sq);
                keep
            }
            Class::Partial => {
                if sq.level >= self.max_level || self.nodes >= self.budget {
                    if self.nodes >= self.budget {
                        self.exhausted = true;
                    }
                    self.chosen.push(sq);
                    return keep;
                }
                let mark = self.chosen.len();
                let mut sum = 0.0;
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    sum += self.solve(DyadicSquare { level: sq.level + 1, i: 2 * sq.i + di, j: 2 * sq.j + dj });
                    if sum >= keep {
                        self.chosen.truncate(mark);
                        self.chosen.push(sq);
                        return keep;
                    }
                }
                sum
            }
        }
    }
}

struct Candidate {
    grids: Vec<DyadicGrid>,
    squares: Vec<CoverSquare>,
    value: f64,
    exhausted: bool,
}

impl Candidate {
    fn append(&mut self, other: Candidate) {
        let offset = self.grids.len();
        self.grids.extend(other.grids);
        self.squares.extend(other.squares.into_iter().map(|sq| CoverSquare { grid: sq.grid + offset, ..sq }));
        self.value += other.value;
        self.exhausted |= other.exhausted;
    }
}

fn search_roots(target: &Target, roots: &[DyadicGrid], measure: &MeasureFunction, opts: &CoverOptions, nodes: &mut usize) -> Candidate {
    let mut cand = Candidate { grids: roots.to_vec(), squares: Vec::new(), value: 0.0, exhausted: false };
    for (g, grid) in roots.iter().enumerate() {
        let mut s = Search {
            target,
            grid: *grid,
            measure,
            max_level: opts.max_level,
            budget: opts.node_budget,
            nodes: 0,
            exhausted: false,
            chosen: Vec::new(),
        };
        cand.value += s.solve(DyadicSquare { level: 0, i: 0, j: 0 });
        *nodes += s.nodes;
        cand.exhausted |= s.exhausted;
        cand.squares.extend(s.chosen.into_iter().map(|square| CoverSquare { grid: g, square }));
    }
    cand
}

/// Groups component boxes whose closures intersect; returns member indices.
fn clusters(boxes: &[[f64; 4]]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..boxes.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for a in 0..boxes.len() {
        for b in a + 1..boxes.len() {
            let (x, y) = (boxes[a], boxes[b]);
            if x[0] <= y[1] && y[0] <= x[1] && x[2] <= y[3] && y[2] <= x[3] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..boxes.len() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Upper bound on `M_*^{1+α}(target)` from the measure `t^{1+α}`.
pub fn content_upper(target: &Target, alpha: f64, opts: &CoverOptions) -> CoverEstimate {
    content_upper_with(target, &MeasureFunction::power_cap(alpha), opts)
}

/// Best cover found by combining dyadic systems: the global `[-1, 1]²`
/// quadtree over the whole target, or per cluster of overlapping pieces the
/// cheapest of the global quadtree, a quadtree rooted at the cluster box, and
/// the sum of the per-piece optima.
pub fn content_upper_with(target: &Target, measure: &MeasureFunction, opts: &CoverOptions) -> CoverEstimate {
    let alpha = measure.alpha();
    let pieces = target.pieces();
    let mut nodes = 0;
    if pieces.is_empty() {
        return CoverEstimate {
            target: target.clone(),
            alpha,
            grids: Vec::new(),
            squares: Vec::new(),
            value: 0.0,
            optimal: true,
            nodes,
            measure: measure.clone(),
        };
    }
    let global = search_roots(target, &[DyadicGrid::unit()], measure, opts, &mut nodes);
    let boxes: Vec<[f64; 4]> = pieces.iter().map(|(b, _)| *b).collect();
    let mut mixed = Candidate { grids: Vec::new(), squares: Vec::new(), value: 0.0, exhausted: false };
    for members in clusters(&boxes) {
        let sub = target.restrict(&members, &pieces);
        let cluster_box = bounding(members.iter().map(|&k| boxes[k]));
        let mut best = best_of(
            search_roots(&sub, &[DyadicGrid::unit()], measure, opts, &mut nodes),
            search_roots(&sub, &[enclosing(cluster_box)], measure, opts, &mut nodes),
        );
        if members.len() > 1 {
            let mut split = Candidate { grids: Vec::new(), squares: Vec::new(), value: 0.0, exhausted: false };
            for &k in &members {
                let piece = target.restrict(&[k], &pieces);
                split.append(best_of(
                    search_roots(&piece, &[DyadicGrid::unit()], measure, opts, &mut nodes),
                    search_roots(&piece, &[enclosing(boxes[k])], measure, opts, &mut nodes),
                ));
            }
            best = best_of(best, split);
        }
        mixed.append(best);
    }
    let best = best_of(global, mixed);
    CoverEstimate {
        target: target.clone(),
        alpha,
        grids: best.grids,
        squares: best.squares,
        value: best.value,
        optimal: !best.exhausted,
        nodes,
        measure: measure.clone(),
    }
}

fn enclosing(b: [f64; 4]) -> DyadicGrid {
    DyadicGrid::enclosing(b[0], b[1], b[2], b[3])
}

fn bounding(boxes: impl Iterator<Item = [f64; 4]>) -> [f64; 4] {
    boxes.fold([f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY], |m, b| {
        [m[0].min(b[0]), m[1].max(b[1]), m[2].min(b[2]), m[3].max(b[3])]
    })
}

fn best_of(a: Candidate, b: Candidate) -> Candidate {
    if b.value < a.value {
        b
    } else {
        a
    }
}

/// Content of `A_n \ U`: exact for a hole inside its annulus, otherwise
/// bracketed by a cover of the annulus/holes intersection.
pub fn content_hole(domain: &SwissCheeseDomain, n: u32, alpha: f64, opts: &CoverOptions) -> Result<ContentEstimate> {
    if let Ok(h) = domain.hole(n) {
        if h.valid() {
            let upper = if alpha == domain.alpha() {
                h.content.to_f64()
            } else {
                h.radius.powf(1.0 + alpha).to_f64()
            };
            return Ok(ContentEstimate { upper, lower: Some(upper), method: ContentMethod::ExactDisk, warning: None });
        }
    }
    let annulus = Annulus::new(Complex64::new(0.0, 0.0), n);
    let holes: Vec<Disk> = domain.holes().iter().filter(|h| h.r() > 0.0).map(|h| h.disk()).collect();
    let target = Target::AnnulusHoles { annulus, holes };
    if target.is_empty() {
        return Ok(ContentEstimate {
            upper: 0.0,
            lower: Some(0.0),
            method: ContentMethod::BracketedUnion,
            warning: None,
        });
    }
    let cover = content_upper(&target, alpha, opts);
    Ok(ContentEstimate {
        upper: cover.value,
        lower: None,
        method: ContentMethod::BracketedUnion,
        warning: Some(format!("hole {n} is not contained in A_{n}; value is a cover upper bound")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::AdmissibleFunction;
    use crate::domain::BuildMode;
    use approx::assert_relative_eq;

    fn disk(x: f64, y: f64, r: f64) -> Disk {
        Disk::new(Complex64::new(x, y), r).unwrap()
    }

    #[test]
    fn exact_disk_values() {
        assert_relative_eq!(content_disk_exact(0.5, 0.5).unwrap().upper, 0.353553, epsilon = 1e-6);
        assert_eq!(content_disk_exact(1.0, 0.3).unwrap().upper, 1.0);
        assert!(matches!(content_disk_exact(0.0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn empty_target_costs_nothing() {
        let c = content_upper(&Target::Disks(vec![]), 0.5, &CoverOptions::default());
        assert_eq!(c.value, 0.0);
        assert!(c.squares.is_empty());
    }

    #[test]
    fn single_disk_within_ten_percent() {
        let c = content_upper(&Target::Disks(vec![disk(0.0, 0.0, 0.25)]), 0.5, &CoverOptions { max_level: 10, ..Default::default() });
        assert!(c.value >= 0.125 * (1.0 - 1e-12) && c.value <= 0.125 * 1.1, "{}", c.value);
        let sum: f64 = c.squares.iter().map(|s| c.weight(s)).sum();
        assert_relative_eq!(sum, c.value, max_relative = 1e-12);
    }

    #[test]
    fn two_disks_are_subadditive() {
        let one = content_upper(&Target::Disks(vec![disk(-0.4, 0.1, 0.1)]), 0.5, &CoverOptions::default());
        let two = content_upper(
            &Target::Disks(vec![disk(-0.4, 0.1, 0.1), disk(0.5, -0.2, 0.1)]),
            0.5,
            &CoverOptions::default(),
        );
        assert!(two.value <= 2.0 * 0.1f64.powf(1.5) * 1.10);
        assert!(two.value <= 2.0 * one.value + 1e-15);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let target = Target::AnnulusHoles {
            annulus: Annulus::new(Complex64::new(0.0, 0.0), 1),
            holes: vec![disk(0.375, 0.0, 0.195)],
        };
        let c = content_upper(&target, 0.5, &CoverOptions { max_level: 14, node_budget: 50 });
        assert!(!c.optimal);
        assert!(c.estimate().warning.is_some());
    }

    #[test]
    fn hole_contents() {
        let d = SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), 8, BuildMode::Dense).unwrap();
        let opts = CoverOptions::default();
        let c4 = content_hole(&d, 4, 0.5, &opts).unwrap();
        let a4: f64 = 0.046875;
        assert_relative_eq!(c4.upper, a4 * a4 / 4.0 * a4.sqrt(), max_relative = 1e-13);
        assert!((c4.upper - 1.18931e-4).abs() < 1e-9);
        assert_eq!(c4.method, ContentMethod::ExactDisk);
        let c1 = content_hole(&d, 1, 0.5, &opts).unwrap();
        assert_eq!(c1.method, ContentMethod::BracketedUnion);
        assert!(c1.warning.is_some());
        assert!(c1.upper > 0.0 && c1.upper <= d.hole(1).unwrap().r().powf(1.5) * (1.0 + 1e-12));
        let empty = SwissCheeseDomain::build(0.5, AdmissibleFunction::power(0.5).unwrap(), 0, BuildMode::Dense).unwrap();
        assert_eq!(content_hole(&empty, 5, 0.5, &opts).unwrap().upper, 0.0);
    }

    #[test]
    fn power_cap_is_eligible_boundary() {
        let h = MeasureFunction::power_cap(0.5);
        let e = h.eligibility(1e-6, 1.0, 100, 1e-3);
        assert!(e.non_decreasing && e.dominated && e.vanishes_at_zero);
        let sub = MeasureFunction::new(0.5, |t: f64| t.powf(1.5) * t.powf(0.1));
        let e = sub.eligibility(1e-6, 1.0, 100, 1e-3);
        assert!(e.dominated && e.ratio_at_min < 0.3);
    }
}
