use super::{min_by_value, near_pairs, total_pairs, Certificate, Status, Witness, DIST_SLACK};
use crate::geometry::{segment_distance, segments_intersect_2d, Aabb};
use crate::ladder::Construction;
use rayon::prelude::*;
use std::time::Instant;

/// Checks, over all pairs of scaffold segments, that they meet exactly when
/// they are consecutive on a loop or share an anchor across neighbouring
/// loops, and that disjoint pairs are at least `sqrt(2)/(5N)` apart.
pub fn certify_sigma_dichotomy(c: &Construction) -> Certificate {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("sigma-dichotomy", g, n, !c.ladder.seq.is_admissible());
    let bound = std::f64::consts::SQRT_2 / (5.0 * n as f64);
    let s = &c.scaffold;
    let m = s.len();
    let sig: Vec<_> = s.iter().collect();
    let boxes: Vec<Aabb> = sig.iter().map(|x| Aabb::of_points([x.segment().p(), x.segment().q()])).collect();
    let cands = near_pairs(&boxes, bound);

    // (mismatch key, min disjoint distance) per candidate.
    let (mismatch, closest) = cands
        .par_iter()
        .map(|&(a, b)| {
            let (x, y) = (sig[a], sig[b]);
            let meets = segments_intersect_2d(&x.p, &x.q, &y.p, &y.q);
            let want = s.predicate(a, b);
            let mism = (meets != want).then_some((a, b));
            let d = (!meets).then(|| (segment_distance(&x.segment(), &y.segment()), (a, b)));
            (mism, d)
        })
        .reduce(
            || (None, None),
            |l, r| {
                let mism = match (l.0, r.0) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                (mism, min_by_value(l.1, r.1))
            },
        );
    // Predicate pairs must also meet when their boxes were far apart.
    let far_mismatch = s
        .predicate_pairs()
        .into_iter()
        .find(|&(a, b)| cands.binary_search(&(a, b)).is_err() || {
            let (x, y) = (sig[a], sig[b]);
            !segments_intersect_2d(&x.p, &x.q, &y.p, &y.q)
        });
    let mismatch = match (mismatch, far_mismatch) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    cert.stats.pairs_total = total_pairs(m);
    cert.stats.pairs_checked = cands.len() as u64;
    cert.stats.pairs_pruned = cert.stats.pairs_total - cands.len() as u64;

    let (achieved, pair) = match closest {
        Some((d, p)) => (d, Some(p)),
        None => (bound, None),
    };
    let lower = achieved - DIST_SLACK;
    cert.margin = Some(lower - bound);
    cert.witness = Some(Witness {
        first: pair.map(|p| s.index_of(p.0)),
        second: pair.map(|p| s.index_of(p.1)),
        achieved,
        required: bound,
        detail: if pair.is_some() {
            "closest disjoint pair".into()
        } else {
            "no disjoint pair within the bound".into()
        },
    });
    let mut status = if lower >= bound { Status::Pass } else { Status::Fail };
    if let Some((a, b)) = mismatch {
        let x = s.get(a);
        let y = s.get(b);
        let meets = segments_intersect_2d(&x.p, &x.q, &y.p, &y.q);
        cert.notes.push(format!(
            "intersection predicate mismatch: sigma{:?} and sigma{:?} {} but the index rule says {}",
            s.index_of(a),
            s.index_of(b),
            if meets { "meet" } else { "are disjoint" },
            if meets { "disjoint" } else { "meeting" },
        ));
        cert.witness = Some(Witness {
            first: Some(s.index_of(a)),
            second: Some(s.index_of(b)),
            achieved: if meets { 0.0 } else { segment_distance(&x.segment(), &y.segment()) },
            required: bound,
            detail: "intersection predicate mismatch".into(),
        });
        status = Status::Fail;
    }
    cert.status = status;
    cert.finish(started)
}
