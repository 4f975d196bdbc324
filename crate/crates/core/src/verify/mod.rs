//! Machine-checked certificates for the construction's geometric claims.
//!
//! Each certificate records the bound it checks, the worst pair found, the
//! margin between them and how many pairs were examined. Pair sweeps prune
//! by bounding boxes grown by the bound being certified, so a pruned pair is
//! always provably beyond it.

mod genus;
mod linking;
mod nesting;
mod sigma;
mod tau;

pub use genus::genus_structure_certificate;
pub use linking::{certify_linking, LinkEntry, LinkingMatrix, LinkingOptions};
pub use nesting::{certify_nesting, NestingOptions};
pub(crate) use nesting::boundary_samples;
pub use sigma::certify_sigma_dichotomy;
pub use tau::{certify_tau_proximity, certify_tau_separation, proximity_bound, separation_bound};

use crate::geometry::Aabb;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Slack added to float distances before comparing with a bound.
///
/// Coordinates stay below 64 in magnitude, so one closest-point computation
/// is accurate to well under `1e-13`.
pub const DIST_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }

    /// Worst of two statuses.
    pub fn and(self, o: Status) -> Status {
        use Status::*;
        match (self, o) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (NotApplicable, x) | (x, NotApplicable) => x,
            _ => Pass,
        }
    }
}

/// The extremal pair for a certificate, with `(i, j)` indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub first: Option<(usize, usize)>,
    pub second: Option<(usize, usize)>,
    pub achieved: f64,
    pub required: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepStats {
    pub pairs_total: u64,
    pub pairs_checked: u64,
    pub pairs_pruned: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub lemma: String,
    pub g: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub status: Status,
    /// True when `N` is below the admissible density.
    pub figure_mode: bool,
    pub witness: Option<Witness>,
    /// Achieved minus required, signed so that non-negative is good.
    pub margin: Option<f64>,
    /// Wall time; left out of serialized output so reruns compare equal.
    #[serde(skip_serializing)]
    pub elapsed_ms: u64,
    pub stats: SweepStats,
    pub notes: Vec<String>,
}

impl Certificate {
    pub(crate) fn new(lemma: &str, g: usize, n: u64, figure_mode: bool) -> Self {
        Certificate {
            lemma: lemma.to_string(),
            g,
            n,
            status: Status::NotApplicable,
            figure_mode,
            witness: None,
            margin: None,
            elapsed_ms: 0,
            stats: SweepStats::default(),
            notes: Vec::new(),
        }
    }

    /// A certificate that does not apply to this construction, with the reason.
    pub fn not_applicable(lemma: &str, g: usize, n: u64, figure_mode: bool, why: &str) -> Self {
        let mut c = Certificate::new(lemma, g, n, figure_mode);
        c.notes.push(why.to_string());
        c
    }

    pub(crate) fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }
}

/// Pairs `(a, b)`, `a < b`, whose boxes are within `pad` of each other.
///
/// Sort-and-sweep along x; the output order is deterministic.
pub fn near_pairs(boxes: &[Aabb], pad: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x).then(a.cmp(&b)));
    let per: Vec<Vec<(usize, usize)>> = (0..order.len())
        .into_par_iter()
        .map(|p| {
            let a = order[p];
            let reach = boxes[a].max.x + pad;
            let mut out = Vec::new();
            for &b in &order[p + 1..] {
                if boxes[b].min.x > reach {
                    break;
                }
                if boxes[a].distance(&boxes[b]) <= pad {
                    out.push((a.min(b), a.max(b)));
                }
            }
            out
        })
        .collect();
    let mut all: Vec<(usize, usize)> = per.into_iter().flatten().collect();
    all.par_sort_unstable();
    all
}

pub(crate) fn total_pairs(m: usize) -> u64 {
    (m as u64) * (m as u64).saturating_sub(1) / 2
}

/// Deterministic minimum: smaller value wins, ties go to the smaller key.
pub(crate) fn min_by_value<K: Ord + Copy>(a: Option<(f64, K)>, b: Option<(f64, K)>) -> Option<(f64, K)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if x.0 < y.0 || (x.0 == y.0 && x.1 <= y.1) {
                Some(x)
            } else {
                Some(y)
            }
        }
    }
}

pub(crate) fn max_by_value<K: Ord + Copy>(a: Option<(f64, K)>, b: Option<(f64, K)>) -> Option<(f64, K)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if x.0 > y.0 || (x.0 == y.0 && x.1 <= y.1) {
                Some(x)
            } else {
                Some(y)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    #[test]
    fn sweep_matches_brute_force() {
        let boxes: Vec<Aabb> = (0..60)
            .map(|k| {
                let x = ((k * 37) % 17) as f64 * 0.3;
                let y = ((k * 11) % 7) as f64 * 0.2;
                Aabb::of_points([Point3::new(x, y, 0.0), Point3::new(x + 0.25, y + 0.1, 0.1)])
            })
            .collect();
        let fast = near_pairs(&boxes, 0.05);
        let mut slow = Vec::new();
        for a in 0..boxes.len() {
            for b in a + 1..boxes.len() {
                if boxes[a].distance(&boxes[b]) <= 0.05 {
                    slow.push((a, b));
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn status_combination() {
        assert_eq!(Status::Pass.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Fail), Status::Fail);
        assert_eq!(Status::NotApplicable.and(Status::Pass), Status::Pass);
    }
}
