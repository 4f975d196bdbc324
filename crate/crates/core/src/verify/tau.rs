use super::{max_by_value, min_by_value, near_pairs, total_pairs, Certificate, Status, Witness, DIST_SLACK};
use crate::geometry::Aabb;
use crate::ladder::Construction;
use rayon::prelude::*;
use std::time::Instant;

/// `3 / (10N)`.
pub fn separation_bound(n: u64) -> f64 {
    3.0 / (10.0 * n as f64)
}

/// `(8 C_g + 6) sqrt(2) / (5N)`.
pub fn proximity_bound(cg: u64, n: u64) -> f64 {
    (8 * cg + 6) as f64 * std::f64::consts::SQRT_2 / (5.0 * n as f64)
}

/// Minimum Euclidean distance between distinct copies `tau_{i,j}`.
pub fn certify_tau_separation(c: &Construction) -> Certificate {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("tau-separation", g, n, !c.ladder.seq.is_admissible());
    let bound = separation_bound(n);
    let boxes: Vec<Aabb> = c.copies.iter().map(|t| t.bbox()).collect();
    let cands = near_pairs(&boxes, bound);
    let closest = cands
        .par_iter()
        .map(|&(a, b)| Some((c.copies[a].distance(&c.copies[b]), (a, b))))
        .reduce(|| None, min_by_value);

    cert.stats.pairs_total = total_pairs(c.copies.len());
    cert.stats.pairs_checked = cands.len() as u64;
    cert.stats.pairs_pruned = cert.stats.pairs_total - cands.len() as u64;
    let (achieved, pair) = match closest {
        Some((d, p)) => (d, Some(p)),
        None => (bound, None),
    };
    let idx = |k: usize| (c.copies[k].i, c.copies[k].j);
    cert.witness = Some(Witness {
        first: pair.map(|p| idx(p.0)),
        second: pair.map(|p| idx(p.1)),
        achieved,
        required: bound,
        detail: if pair.is_some() { "closest pair of copies".into() } else { "no pair within the bound".into() },
    });
    let lower = achieved - DIST_SLACK;
    cert.margin = Some(lower - bound);
    cert.status = if lower >= bound { Status::Pass } else { Status::Fail };
    cert.finish(started)
}

/// Maximum distance from a vertex of `tau_{i,j}` to `gamma_i`.
pub fn certify_tau_proximity(c: &Construction) -> Certificate {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("tau-proximity", g, n, !c.ladder.seq.is_admissible());
    let bound = proximity_bound(c.ladder.seq.width(), n);
    let loops = c.ladder.loops();
    let far = c
        .copies
        .par_iter()
        .enumerate()
        .map(|(k, t)| {
            let core = &loops[t.i - 1];
            t.loops()
                .iter()
                .flat_map(|l| l.vertices().iter())
                .map(|&v| Some((core.distance_to_point(v), k)))
                .fold(None, max_by_value)
        })
        .reduce(|| None, max_by_value);
    cert.stats.pairs_total = c.copies.len() as u64;
    cert.stats.pairs_checked = c.copies.len() as u64;
    let (achieved, k) = far.expect("at least one copy");
    let t = &c.copies[k];
    cert.witness = Some(Witness {
        first: Some((t.i, t.j)),
        second: None,
        achieved,
        required: bound,
        detail: format!("farthest vertex from gamma_{}", t.i),
    });
    let upper = achieved + DIST_SLACK;
    cert.margin = Some(bound - upper);
    cert.status = if upper <= bound { Status::Pass } else { Status::Fail };
    cert.finish(started)
}
