//! One function per subcommand. Each writes its artifacts and records checks.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;

use lipswiss_core::conditions::{
    appendix_check, build_corpus, condition_a_empirical, density_profile, dist_bounds_check, remainder_bound_terms,
    series_c, CorpusMember, RadiiRule, SeriesOptions,
};
use lipswiss_core::testfn::SeminormOptions;
use lipswiss_core::{
    content_upper, melnikov_ratio, Annulus, ConditionSpec, Contour, CoverOptions, Disk, ExceptionalSet,
    GeneratorOptions, SwissCheeseDomain, Target,
};

use crate::config::RunConfig;
use crate::output::{opt_real, real, write_text, Summary, Table};
use crate::plot::{cover_figure, domain_figure, LinePlot, Series, PALETTE};

/// Closed-form and identity comparisons use this relative tolerance.
const REL_TOL: f64 = 1e-9;
/// Monte Carlo rows are only judged once the expected hit count reaches this.
const MIN_EXPECTED_HITS: f64 = 10.0;
const EXTRA_HOLES: u32 = 70;
const MELNIKOV_CONTOUR_RADIUS: f64 = 0.5;
/// The full-corpus maximum may exceed the first-half maximum by at most this factor.
const MELNIKOV_STABILITY: f64 = 2.0;

pub struct Run<'a> {
    pub cfg: &'a RunConfig,
    pub out: &'a Path,
    pub summary: &'a mut Summary,
}

fn build_domain(cfg: &RunConfig, max_index: u32) -> Result<SwissCheeseDomain> {
    let phi = cfg.phi.build()?;
    Ok(SwissCheeseDomain::build(cfg.alpha, phi, max_index, cfg.mode)?)
}

fn spec(cfg: &RunConfig) -> Result<ConditionSpec> {
    Ok(ConditionSpec::new(cfg.t, cfg.phi.build()?, cfg.alpha)?)
}

fn flags(f: &lipswiss_core::domain::HoleFlags) -> String {
    let mut s = Vec::new();
    if f.inside_annulus {
        s.push("inside");
    }
    if f.below_margin {
        s.push("below-margin");
    }
    if f.clearance {
        s.push("clearance");
    }
    s.join("|")
}

pub fn build(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let domain = build_domain(cfg, cfg.max_index).context("build")?;
    if domain.holes().is_empty() {
        eprintln!("warning: the domain has no holes (max_index = {})", cfg.max_index);
    }
    let geo = domain.validate_geometry();
    let mut t = Table::create(ctx.out, "holes.csv", &["n", "a_n", "r_n", "s_n", "flags", "disjoint_from_next"])?;
    for (h, row) in domain.holes().iter().zip(&geo.rows) {
        t.row([
            h.index.to_string(),
            h.center.to_string(),
            h.radius.to_string(),
            h.margin.to_string(),
            flags(&h.flags),
            row.disjoint_from_next.to_string(),
        ])?;
    }
    t.finish()?;
    write_text(ctx.out, "domain.svg", &domain_figure(&domain))?;
    let overlaps = geo.overlapping_pairs.iter().filter(|(n, _)| *n >= geo.n0).count();
    ctx.summary.check("build", "overlapping hole pairs from n0", overlaps as f64, 0.0, overlaps == 0);
    if let Some(h) = domain.holes().iter().find(|h| h.index >= geo.n0) {
        let target = Target::AnnulusHoles { annulus: Annulus::new(Complex64::new(0.0, 0.0), h.index), holes: vec![h.disk()] };
        let cover = content_upper(&target, cfg.alpha, &CoverOptions::default());
        let mut t = Table::create(ctx.out, "cover.csv", &["hole", "grid", "level", "i", "j", "side", "h"])?;
        for sq in &cover.squares {
            t.row([
                h.index.to_string(),
                sq.grid.to_string(),
                sq.square.level.to_string(),
                sq.square.i.to_string(),
                sq.square.j.to_string(),
                real(cover.bounds(sq).side),
                real(cover.weight(sq)),
            ])?;
        }
        t.finish()?;
        write_text(ctx.out, "cover.svg", &cover_figure(&cover, h.disk()))?;
    }
    Ok(())
}

pub fn series(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let n_max = cfg.series_n();
    // annuli past max_index carry no hole and contribute zero terms
    let domain = build_domain(cfg, cfg.max_index).context("series")?;
    let rep = series_c(&domain, &spec(cfg)?, n_max, &SeriesOptions::default());
    let mut t = Table::create(
        ctx.out,
        "series.csv",
        &["n", "has_hole", "log2_scale", "term", "exact", "identity_ratio", "partial_sum", "lower_bound", "warning"],
    )?;
    for r in &rep.rows {
        t.row([
            r.n.to_string(),
            r.has_hole.to_string(),
            (r.n as u64 * (cfg.t as u64 + 1)).to_string(),
            real(r.term),
            r.exact.to_string(),
            opt_real(r.identity_ratio),
            real(r.partial_sum),
            real(r.lower_bound),
            r.warning.clone().unwrap_or_default(),
        ])?;
    }
    t.finish()?;
    let plot = LinePlot {
        title: format!("content series, t = {}: {}", cfg.t, rep.verdict.as_str()),
        x_label: "N".into(),
        y_label: "partial sum".into(),
        log_y: false,
        series: vec![
            Series::new("partial sum", rep.rows.iter().map(|r| (r.n as f64, r.partial_sum)).collect(), PALETTE[0]),
            Series::new("(27/64) H", rep.rows.iter().map(|r| (r.n as f64, r.lower_bound)).collect(), PALETTE[1])
                .dashed(),
        ],
    };
    write_text(ctx.out, "series.svg", &plot.render())?;
    if cfg.t == 1 {
        ctx.summary.check("series", "partial sums dominate lower bound", rep.partial_sum(), 0.0, rep.dominated);
        let worst = rep.rows.iter().filter_map(|r| r.identity_ratio).map(|q| (q - 1.0).abs()).fold(0.0, f64::max);
        ctx.summary.check("series", "max |identity ratio - 1|", worst, REL_TOL, worst <= REL_TOL);
    }
    Ok(())
}

pub fn density(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let domain = build_domain(cfg, cfg.max_index.max(cfg.density_j_max + EXTRA_HOLES)).context("density")?;
    let n0 = domain.validate_geometry().n0;
    let j_min = cfg.density_j_min.unwrap_or(n0);
    let e = ExceptionalSet::new(&domain);
    let prof = density_profile(&e, j_min..=cfg.density_j_max, cfg.mc_samples, cfg.seed).context("density")?;
    let mut t = Table::create(
        ctx.out,
        "density.csv",
        &["j", "exact", "tail_bound", "monte_carlo", "sigma", "bound", "below_bound", "within_3_sigma"],
    )?;
    let mut all_below = true;
    let mut worst_z: f64 = 0.0;
    for r in &prof.rows {
        all_below &= r.below_bound();
        let judged = r.exact * prof.samples as f64 >= MIN_EXPECTED_HITS;
        if let (true, Some(mc), Some(s)) = (judged, r.monte_carlo, r.sigma) {
            worst_z = worst_z.max((mc - r.exact).abs() / s);
        }
        t.row([
            r.j.to_string(),
            real(r.exact),
            real(r.tail_bound),
            opt_real(r.monte_carlo),
            opt_real(r.sigma),
            real(r.bound),
            r.below_bound().to_string(),
            if judged { r.within_3_sigma().map(|b| b.to_string()).unwrap_or_default() } else { String::new() },
        ])?;
    }
    t.finish()?;
    ctx.summary.check("density", "exact + tail below bound for every j", prof.rows.len() as f64, 0.0, all_below);
    ctx.summary.check("density", "max |MC - exact| / sigma", worst_z, 3.0, worst_z <= 3.0);

    let mut ns: Vec<u32> = vec![j_min, (j_min + cfg.density_j_max) / 2, cfg.density_j_max];
    ns.dedup();
    let mut t = Table::create(ctx.out, "distances.csv", &["n", "samples", "violations", "min_margin"])?;
    let mut total = 0usize;
    for (k, &n) in ns.iter().enumerate() {
        let rep = dist_bounds_check(&e, n, cfg.dist_samples, cfg.seed.wrapping_add(k as u64)).context("density")?;
        total += rep.violations.len();
        t.row([n.to_string(), rep.samples.to_string(), rep.violations.len().to_string(), real(rep.min_margin)])?;
    }
    t.finish()?;
    ctx.summary.check("density", "distance-bound violations", total as f64, 0.0, total == 0);

    let rows = &prof.rows;
    let mut series = vec![
        Series::new("exact + tail", rows.iter().map(|r| (r.j as f64, r.exact + r.tail_bound)).collect(), PALETTE[0]),
        Series::new("(3/49) j^(-2/3)", rows.iter().map(|r| (r.j as f64, r.bound)).collect(), PALETTE[1]).dashed(),
    ];
    if prof.samples > 0 {
        series.push(Series::new(
            "Monte Carlo",
            rows.iter().filter_map(|r| Some((r.j as f64, r.monte_carlo?))).collect(),
            PALETTE[2],
        ));
    }
    let plot = LinePlot {
        title: "area density of the complement of E".into(),
        x_label: "j".into(),
        y_label: "fraction of B(0, 2^-j)".into(),
        log_y: true,
        series,
    };
    write_text(ctx.out, "density.svg", &plot.render())
}

fn write_corpus(out: &Path, name: &str, corpus: &[CorpusMember]) -> Result<()> {
    let mut t = Table::create(
        out,
        name,
        &["member", "seed", "lip_norm", "pole_re", "pole_im", "order", "coeff_re", "coeff_im"],
    )?;
    for (k, m) in corpus.iter().enumerate() {
        for p in &m.f.poles {
            t.row([
                k.to_string(),
                m.seed.to_string(),
                real(m.lip_norm),
                real(p.pole.re),
                real(p.pole.im),
                p.order.to_string(),
                real(p.coeff.re),
                real(p.coeff.im),
            ])?;
        }
    }
    t.finish()
}

pub fn verify_a(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let domain = build_domain(cfg, cfg.max_index.max(cfg.verify_n_max + 4)).context("verify-a")?;
    let n0 = domain.validate_geometry().n0;
    let spec = spec(cfg)?;
    let ns: Vec<u32> =
        (cfg.verify_n_min..=cfg.verify_n_max).filter(|&n| n >= n0 && domain.has_hole(n)).collect();
    if ns.is_empty() {
        anyhow::bail!("verify-a: no hole index in [{}, {}] at or above n0 = {n0}", cfg.verify_n_min, cfg.verify_n_max);
    }

    if cfg.t == 1 {
        let mut t = Table::create(
            ctx.out,
            "remainder_terms.csv",
            &[
                "n", "a_i", "a_ii", "a_ii_closed", "a_iii", "a_iii_tail", "b_i", "b_ii", "b_ii_closed", "b_iii",
                "b_iii_tail", "a_total", "b_total",
            ],
        )?;
        let mut worst: f64 = 0.0;
        for &n in &ns {
            let r = remainder_bound_terms(&domain, &spec, n).context("verify-a")?;
            worst = worst.max((r.a_ii / r.a_ii_closed - 1.0).abs()).max((r.b_ii / r.b_ii_closed - 1.0).abs());
            t.row([
                n.to_string(),
                real(r.a_i),
                real(r.a_ii),
                real(r.a_ii_closed),
                real(r.a_iii),
                opt_real(r.a_iii_tail),
                real(r.b_i),
                real(r.b_ii),
                real(r.b_ii_closed),
                real(r.b_iii),
                opt_real(r.b_iii_tail),
                real(r.a_total()),
                real(r.b_total()),
            ])?;
        }
        t.finish()?;
        ctx.summary.check("verify-a", "max closed-form relative error", worst, REL_TOL, worst <= REL_TOL);
    } else {
        eprintln!("note: remainder_terms.csv is only produced for t = 1");
    }

    let mut opts = GeneratorOptions::new(cfg.alpha);
    opts.hole_range = (n0, cfg.verify_n_max);
    let corpus = build_corpus(&domain, cfg.corpus, cfg.pole_budget, cfg.seed, &opts).context("verify-a")?;
    write_corpus(ctx.out, "corpus.csv", &corpus)?;
    let e = ExceptionalSet::new(&domain);
    let rep = condition_a_empirical(&domain, &e, &spec, &corpus, &ns, cfg.verify_samples, cfg.seed)
        .context("verify-a")?;
    let mut t = Table::create(
        ctx.out,
        "verify_a.csv",
        &["n", "worst", "worst_y_re", "worst_y_im", "worst_member", "outside_worst", "samples"],
    )?;
    for r in &rep.rows {
        t.row([
            r.n.to_string(),
            real(r.worst),
            real(r.worst_y.re),
            real(r.worst_y.im),
            r.worst_member.to_string(),
            real(r.outside_worst),
            r.samples.to_string(),
        ])?;
    }
    t.finish()?;
    let (first, last) = (rep.rows.first().map_or(0.0, |r| r.worst), rep.rows.last().map_or(0.0, |r| r.worst));
    ctx.summary.check("verify-a", "worst ratio at last N below first N", last, first, rep.decreasing());

    let plot = LinePlot {
        title: format!("Taylor remainder ratio, t = {}", cfg.t),
        x_label: "N".into(),
        y_label: "max ratio".into(),
        log_y: true,
        series: vec![
            Series::new("on E", rep.rows.iter().map(|r| (r.n as f64, r.worst)).collect(), PALETTE[0]),
            Series::new("U outside E", rep.rows.iter().map(|r| (r.n as f64, r.outside_worst)).collect(), PALETTE[1])
                .dashed(),
        ],
    };
    write_text(ctx.out, "verify_a.svg", &plot.render())
}

pub fn appendix(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let rule = RadiiRule::geometric(cfg.radii_rate);
    let rep = appendix_check(cfg.alpha, cfg.beta, &rule, cfg.appendix_n).context("appendix")?;
    let mut t =
        Table::create(ctx.out, "appendix.csv", &["j", "log2_radius", "log2_density", "log2_term", "partial_sum"])?;
    for r in &rep.rows {
        t.row([r.j.to_string(), real(rule.log2_radius(r.j)), real(r.log2_density), real(r.log2_term), real(r.partial_sum)])?;
    }
    t.finish()?;
    println!("appendix: {}", rep.verdict());
    ctx.summary.check(
        "appendix",
        format!("no counterexample ({})", rep.verdict()),
        rep.partial_sum(),
        rep.certificate.unwrap_or(f64::INFINITY),
        !rep.counterexample(),
    );
    let plot = LinePlot {
        title: format!("radii {}: {}", rule.name(), rep.verdict()),
        x_label: "j".into(),
        y_label: "value".into(),
        log_y: true,
        series: vec![
            Series::new("partial sum", rep.rows.iter().map(|r| (r.j as f64, r.partial_sum)).collect(), PALETTE[0]),
            Series::new("4^j r_j^2", rep.rows.iter().map(|r| (r.j as f64, r.log2_density.exp2())).collect(), PALETTE[1])
                .dashed(),
        ],
    };
    write_text(ctx.out, "appendix.svg", &plot.render())
}

/// Hole disks containing the poles of `m`, in index order.
fn pole_holes(domain: &SwissCheeseDomain, m: &CorpusMember) -> Vec<Disk> {
    let mut k = BTreeMap::new();
    for p in &m.f.poles {
        if let Some(h) = domain.holes().iter().find(|h| h.disk().contains(p.pole)) {
            k.insert(h.index, h.disk());
        }
    }
    k.into_values().collect()
}

pub fn melnikov(ctx: &mut Run<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let domain = build_domain(cfg, cfg.max_index).context("melnikov")?;
    let n0 = domain.validate_geometry().n0;
    // |z| = 1/2 encloses every hole from index 2 on
    let mut opts = GeneratorOptions::new(cfg.alpha);
    opts.hole_range = (n0.max(2), cfg.max_index);
    let corpus = build_corpus(&domain, cfg.melnikov_corpus, cfg.pole_budget, cfg.seed, &opts).context("melnikov")?;
    let contour = Contour::Circle { center: Complex64::new(0.0, 0.0), radius: MELNIKOV_CONTOUR_RADIUS };
    let norm = SeminormOptions { samples: cfg.melnikov_samples, refine_rounds: 8, seed: cfg.seed };
    let mut t = Table::create(ctx.out, "melnikov.csv", &["member", "holes", "lhs", "content", "seminorm", "ratio"])?;
    let mut ratios = Vec::with_capacity(corpus.len());
    for (k, m) in corpus.iter().enumerate() {
        let disks = pole_holes(&domain, m);
        let rec = melnikov_ratio(&m.f, &contour, &disks, cfg.alpha, &norm).with_context(|| format!("melnikov member {k}"))?;
        ratios.push(rec.ratio);
        let holes: Vec<String> = m
            .f
            .poles
            .iter()
            .filter_map(|p| domain.holes().iter().find(|h| h.disk().contains(p.pole)).map(|h| h.index.to_string()))
            .collect();
        t.row([k.to_string(), holes.join("|"), real(rec.lhs), real(rec.content), real(rec.seminorm), opt_real(rec.ratio)])?;
    }
    t.finish()?;
    let max_of = |rs: &[Option<f64>]| rs.iter().flatten().copied().fold(0.0, f64::max);
    let full = max_of(&ratios);
    let half = max_of(&ratios[..ratios.len() / 2]);
    ctx.summary.check(
        "melnikov",
        "max ratio over corpus within factor of first half",
        full,
        MELNIKOV_STABILITY * half,
        full <= MELNIKOV_STABILITY * half,
    );
    let mut running = 0.0;
    let trend: Vec<(f64, f64)> = ratios
        .iter()
        .enumerate()
        .map(|(k, r)| {
            running = f64::max(running, r.unwrap_or(0.0));
            (k as f64 + 1.0, running)
        })
        .collect();
    let points: Vec<(f64, f64)> =
        ratios.iter().enumerate().filter_map(|(k, r)| Some((k as f64 + 1.0, (*r)?))).collect();
    let plot = LinePlot {
        title: "contour functional over content times seminorm".into(),
        x_label: "corpus member".into(),
        y_label: "ratio".into(),
        log_y: true,
        series: vec![
            Series::new("ratio", points, PALETTE[0]),
            Series::new("running max", trend, PALETTE[1]).dashed(),
        ],
    };
    write_text(ctx.out, "melnikov.svg", &plot.render())
}
