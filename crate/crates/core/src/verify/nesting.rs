use super::{max_by_value, min_by_value, near_pairs, total_pairs, Certificate, Status, Witness, DIST_SLACK};
use crate::geometry::{delta_point_to_polyloop, Aabb, Point3, PolyLoop, Similarity};
use crate::ladder::{Construction, TORUS_RADIUS};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NestingOptions {
    /// Covering radius of the boundary samples, in model units.
    pub h: f64,
}

impl Default for NestingOptions {
    fn default() -> Self {
        NestingOptions { h: 1e-4 }
    }
}

/// One straight side of a cross-section ring: endpoints as affine functions of `rho`.
#[derive(Debug, Clone, Copy)]
struct Side {
    a: (f64, f64),
    da: (f64, f64),
    b: (f64, f64),
    db: (f64, f64),
}

impl Side {
    fn at(&self, rho: f64, u: f64) -> (f64, f64) {
        let a = (self.a.0 + rho * self.da.0, self.a.1 + rho * self.da.1);
        let b = (self.b.0 + rho * self.db.0, self.b.1 + rho * self.db.1);
        (a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1))
    }

    fn max_len(&self, r: f64) -> f64 {
        let l = |rho: f64| {
            let a = (self.a.0 + rho * self.da.0, self.a.1 + rho * self.da.1);
            let b = (self.b.0 + rho * self.db.0, self.b.1 + rho * self.db.1);
            (b.0 - a.0).hypot(b.1 - a.1)
        };
        l(0.0).max(l(r))
    }
}

fn ring_sides(corners: &[((f64, f64), (f64, f64))]) -> Vec<Side> {
    (0..corners.len())
        .map(|k| {
            let (a, da) = corners[k];
            let (b, db) = corners[(k + 1) % corners.len()];
            Side { a, da, b, db }
        })
        .collect()
}

/// Boundary of `T^g` as ruled patches: `(sides, theta range)` per sheet.
///
/// A point at angle `theta` sits at height `r sin(theta)` on the ring grown
/// (outer sheet) or shrunk (hole sheets) by `rho = |r cos(theta)|`.
fn boundary_sheets(xs: &[f64]) -> Vec<(Vec<Side>, f64)> {
    let g = xs.len() - 1;
    let mut outer = vec![((xs[0], 0.0), (-1.0, -1.0))];
    outer.extend(xs[1..g].iter().map(|&x| ((x, 0.0), (0.0, -1.0))));
    outer.push(((xs[g], 0.0), (1.0, -1.0)));
    outer.push(((xs[g], 1.0), (1.0, 1.0)));
    outer.extend(xs[1..g].iter().rev().map(|&x| ((x, 1.0), (0.0, 1.0))));
    outer.push(((xs[0], 1.0), (-1.0, 1.0)));
    let mut sheets = vec![(ring_sides(&outer), -PI / 2.0)];
    for w in xs.windows(2) {
        let hole = [
            ((w[0], 0.0), (1.0, 1.0)),
            ((w[1], 0.0), (-1.0, 1.0)),
            ((w[1], 1.0), (-1.0, -1.0)),
            ((w[0], 1.0), (1.0, -1.0)),
        ];
        sheets.push((ring_sides(&hole), PI / 2.0));
    }
    sheets
}

/// Boundary patches `(side, theta0)`, each covering `theta0 .. theta0 + pi`.
fn boundary_patches(xs: &[f64]) -> Vec<(Side, f64)> {
    boundary_sheets(xs).into_iter().flat_map(|(sides, t0)| sides.into_iter().map(move |s| (s, t0))).collect()
}

fn patch_point(side: &Side, r: f64, th: f64, u: f64) -> Point3 {
    let rho = (r * th.cos()).abs();
    let (x, y) = side.at(rho, u);
    Point3::new(x, y, r * th.sin())
}

/// Uniform boundary samples with Euclidean covering radius at most `eps`.
pub(crate) fn boundary_samples(xs: &[f64], r: f64, eps: f64) -> Vec<Point3> {
    // d/dtheta moves a corner by at most sqrt(2) r in the plane and r in height.
    let n_theta = ((PI * r * 3f64.sqrt()) / eps).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    for (side, start) in boundary_patches(xs) {
        let n_u = (side.max_len(r) / eps).ceil().max(1.0) as usize;
        for a in 0..=n_theta {
            let th = start + PI * a as f64 / n_theta as f64;
            for b in 0..=n_u {
                out.push(patch_point(&side, r, th, b as f64 / n_u as f64));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default)]
struct PatchResult {
    /// Largest sampled distance.
    worst: f64,
    samples: u64,
    /// A cell still uncertified at the finest resolution.
    unresolved: bool,
    /// A sample strictly outside the torus.
    outside: bool,
}

/// Certifies `max delta(psi(p), gamma) <= limit` over one patch by Lipschitz
/// bisection: a cell passes when its centre value plus the image covering
/// radius of the cell fits under `limit`. Cells are split until that radius
/// drops below `h`. Stops at the first sample outside the torus.
fn certify_patch(
    side: &Side,
    t0: f64,
    r: f64,
    map: &Similarity,
    core: &[PolyLoop],
    limit: f64,
    h: f64,
) -> PatchResult {
    // Partial derivatives: at most r sqrt(3) in theta, the side length in u.
    let (lt, lu) = (r * 3f64.sqrt() * map.scale(), side.max_len(r) * map.scale());
    let mut res = PatchResult::default();
    let mut stack = vec![(t0, t0 + PI, 0.0, 1.0)];
    while let Some((ta, tb, ua, ub)) = stack.pop() {
        let (tm, um) = ((ta + tb) / 2.0, (ua + ub) / 2.0);
        let d = delta_to_core(map.apply(patch_point(side, r, tm, um)), core);
        res.samples += 1;
        res.worst = res.worst.max(d);
        if d - DIST_SLACK > r {
            res.outside = true;
            return res;
        }
        let cover = (lt * (tb - ta) + lu * (ub - ua)) / 2.0;
        if d + cover.max(h) + DIST_SLACK <= limit {
            continue;
        }
        if cover <= h {
            res.unresolved = true;
            continue;
        }
        if lt * (tb - ta) >= lu * (ub - ua) {
            stack.push((ta, tm, ua, ub));
            stack.push((tm, tb, ua, ub));
        } else {
            stack.push((ta, tb, ua, um));
            stack.push((ta, tb, um, ub));
        }
    }
    res
}

fn delta_to_core(p: Point3, core: &[PolyLoop]) -> f64 {
    core.iter().map(|l| delta_point_to_polyloop(p, l)).fold(f64::INFINITY, f64::min)
}

/// Containment of every image `psi_{i,j}(T^g)` in `T^g` by certified sampling,
/// plus pairwise disjointness of the images.
///
/// `delta`-distance to `gamma` is 1-Lipschitz and bounded by Euclidean
/// distance, so a boundary cell whose centre lies within `1/24 - rho` of
/// `gamma`, `rho` being the cell's covering radius, lies inside `T^g`. Cells
/// are refined down to `h`; one still unresolved there makes the result
/// inconclusive. The complement of a handlebody is connected, so containment
/// of the boundary gives containment of the solid image.
pub fn certify_nesting(c: &Construction, opts: &NestingOptions) -> Certificate {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("nesting", g, n, !c.ladder.seq.is_admissible());
    let r = TORUS_RADIUS;
    let alpha = c.alpha();
    let h = opts.h;
    let xs: Vec<f64> = c.ladder.seq.prefix.iter().map(|&x| x as f64).collect();
    let patches = boundary_patches(&xs);
    let core = c.ladder.loops();

    let per: Vec<(PatchResult, usize)> = c
        .copies
        .par_iter()
        .enumerate()
        .map(|(k, t)| {
            let mut acc = PatchResult::default();
            for (side, t0) in &patches {
                let p = certify_patch(side, *t0, r, t.map(), core, r, h);
                acc.worst = acc.worst.max(p.worst);
                acc.samples += p.samples;
                acc.unresolved |= p.unresolved;
                acc.outside |= p.outside;
                if acc.outside {
                    break;
                }
            }
            (acc, k)
        })
        .collect();
    let samples: u64 = per.iter().map(|p| p.0.samples).sum();
    let (worst, wk) = per.iter().map(|p| Some((p.0.worst, p.1))).fold(None, max_by_value).expect("at least one copy");
    let contain = if per.iter().any(|p| p.0.outside) {
        Status::Fail
    } else if per.iter().any(|p| p.0.unresolved) {
        Status::Inconclusive
    } else {
        Status::Pass
    };

    // Each image lies within Euclidean alpha * sqrt(2) * r of its copy's core.
    let reach = alpha * SQRT_2 * r;
    let boxes: Vec<Aabb> = c.copies.iter().map(|t| t.bbox()).collect();
    let cands = near_pairs(&boxes, 2.0 * reach);
    let closest = cands
        .par_iter()
        .map(|&(a, b)| Some((c.copies[a].distance(&c.copies[b]), (a, b))))
        .reduce(|| None, min_by_value);
    let (sep_lower, pair) = match closest {
        Some((d, p)) => (d - 2.0 * reach - DIST_SLACK, Some(p)),
        None => (f64::INFINITY, None),
    };
    let disjoint = if sep_lower > 0.0 { Status::Pass } else { Status::Fail };

    cert.stats.pairs_total = total_pairs(c.copies.len());
    cert.stats.pairs_checked = cands.len() as u64;
    cert.stats.pairs_pruned = cert.stats.pairs_total - cands.len() as u64;
    cert.notes.push(format!(
        "containment: {samples} adaptive boundary samples down to h = {h:e}, max delta distance {worst:.6e} against radius {r:.6e}: {contain:?}"
    ));
    let idx = |k: usize| (c.copies[k].i, c.copies[k].j);
    match pair {
        Some(p) => cert.notes.push(format!(
            "disjointness: closest cores {:?} and {:?}, certified gap {sep_lower:.6e}: {disjoint:?}",
            idx(p.0),
            idx(p.1)
        )),
        None => cert.notes.push("disjointness: no pair of images within reach".into()),
    }
    let contain_margin = r - worst - DIST_SLACK;
    if contain != Status::Pass || disjoint == Status::Pass {
        cert.witness = Some(Witness {
            first: Some(idx(wk)),
            second: None,
            achieved: worst,
            required: r,
            detail: "largest delta distance from a boundary sample to gamma".into(),
        });
    } else {
        let p = pair.expect("failing pair");
        cert.witness = Some(Witness {
            first: Some(idx(p.0)),
            second: Some(idx(p.1)),
            achieved: sep_lower + 2.0 * reach + DIST_SLACK,
            required: 2.0 * reach,
            detail: "closest pair of images".into(),
        });
    }
    cert.margin = Some(contain_margin.min(sep_lower));
    cert.status = contain.and(disjoint);
    cert.finish(started)
}
