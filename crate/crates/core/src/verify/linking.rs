use super::{near_pairs, total_pairs, Certificate, Status, Witness};
use crate::geometry::{linking_report_exact, Aabb, LinkError};
use crate::ladder::Construction;
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::time::Instant;

/// Which pairs of copies to examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinkingOptions {
    /// Sample this many pairs with meeting scaffold segments; `None` takes all.
    pub adjacent: Option<usize>,
    /// Sample this many other pairs, half of them among near neighbours.
    pub nonadjacent: Option<usize>,
    pub seed: u64,
}

impl Default for LinkingOptions {
    fn default() -> Self {
        LinkingOptions { adjacent: None, nonadjacent: None, seed: 0x5eed }
    }
}

impl LinkingOptions {
    pub fn sampled(adjacent: usize, nonadjacent: usize) -> Self {
        LinkingOptions { adjacent: Some(adjacent), nonadjacent: Some(nonadjacent), ..Default::default() }
    }

    fn is_exhaustive(&self) -> bool {
        self.adjacent.is_none() && self.nonadjacent.is_none()
    }
}

/// One nonzero linking number between loop `k` of `first` and loop `kp` of `second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkEntry {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub k: usize,
    pub kp: usize,
    pub value: i64,
}

/// Sparse linking numbers between loops of distinct copies.
///
/// Rows and columns are `copy * g + (k - 1)` in flat `(i, j)` order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LinkingMatrix {
    pub copies: usize,
    pub g: usize,
    /// Number of copy pairs whose block was computed.
    pub computed_pairs: usize,
    pub entries: Vec<LinkEntry>,
    #[serde(skip)]
    flat: Vec<(usize, usize, usize, usize, i64)>,
}

impl LinkingMatrix {
    pub fn dimension(&self) -> usize {
        self.copies * self.g
    }

    /// Linking number of loop `k` of copy `a` with loop `kp` of copy `b` (flat indices).
    pub fn get(&self, a: usize, k: usize, b: usize, kp: usize) -> i64 {
        let key = if a <= b { (a, k, b, kp) } else { (b, kp, a, k) };
        self.flat
            .binary_search_by(|e| (e.0, e.1, e.2, e.3).cmp(&key))
            .map(|i| self.flat[i].4)
            .unwrap_or(0)
    }

    /// Flat copy pairs with at least one nonzero entry.
    pub fn linked_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.flat.iter().map(|e| (e.0, e.2)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `row,col,value` lines, both orientations of every entry.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(usize, usize, i64)> = Vec::with_capacity(2 * self.flat.len());
        for &(a, k, b, kp, v) in &self.flat {
            let (r, c) = (a * self.g + k - 1, b * self.g + kp - 1);
            rows.push((r, c, v));
            rows.push((c, r, v));
        }
        rows.sort_unstable();
        let mut s = String::from("row,col,value\n");
        for (r, c, v) in rows {
            let _ = writeln!(s, "{r},{c},{v}");
        }
        s
    }
}

struct Block {
    a: usize,
    b: usize,
    values: Vec<i64>,
    error: Option<String>,
}

fn compute_block(c: &Construction, a: usize, b: usize) -> Block {
    let g = c.g();
    let (ta, tb) = (&c.copies[a], &c.copies[b]);
    let mut values = Vec::with_capacity(g * g);
    for k in 1..=g {
        let la = ta.exact_loop(k);
        for kp in 1..=g {
            match linking_report_exact(&la, &tb.exact_loop(kp)) {
                Ok(r) if r.agrees() => values.push(r.crossings),
                Ok(r) => {
                    let e = LinkError::OracleDisagreement { crossings: r.crossings, gauss: r.gauss };
                    return Block { a, b, values, error: Some(format!("loops {k},{kp}: {e}")) };
                }
                Err(e) => return Block { a, b, values, error: Some(format!("loops {k},{kp}: {e}")) },
            }
        }
    }
    Block { a, b, values, error: None }
}

fn choose(pairs: &[(usize, usize)], count: usize, rng: &mut StdRng) -> Vec<(usize, usize)> {
    if count >= pairs.len() {
        return pairs.to_vec();
    }
    let mut idx = sample(rng, pairs.len(), count).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| pairs[i]).collect()
}

fn select_pairs(c: &Construction, opts: &LinkingOptions, near: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let s = &c.scaffold;
    if opts.is_exhaustive() {
        return near.to_vec();
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let adjacent = s.predicate_pairs();
    let mut out = match opts.adjacent {
        Some(k) => choose(&adjacent, k, &mut rng),
        None => adjacent,
    };
    let near_other: Vec<_> = near.iter().copied().filter(|&(a, b)| !s.predicate(a, b)).collect();
    let want = opts.nonadjacent.unwrap_or(near_other.len());
    let from_near = want.div_ceil(2).min(near_other.len());
    out.extend(choose(&near_other, from_near, &mut rng));
    let m = c.copies.len();
    let mut extra = want - from_near;
    let mut guard = 0;
    while extra > 0 && guard < 100 * want.max(1) {
        guard += 1;
        let (a, b) = (rand::Rng::gen_range(&mut rng, 0..m), rand::Rng::gen_range(&mut rng, 0..m));
        if a == b || s.predicate(a.min(b), a.max(b)) {
            continue;
        }
        out.push((a.min(b), a.max(b)));
        extra -= 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Linking numbers between copies, checked for complete linkage exactly on
/// pairs whose scaffold segments meet and for vanishing everywhere else.
///
/// Copies with disjoint bounding boxes are split by a plane and count as
/// unlinked without computation.
pub fn certify_linking(c: &Construction, opts: &LinkingOptions) -> (Certificate, LinkingMatrix) {
    let started = Instant::now();
    let (g, n) = (c.g(), c.n());
    let mut cert = Certificate::new("linking", g, n, !c.ladder.seq.is_admissible());
    let s = &c.scaffold;
    let boxes: Vec<Aabb> = c.copies.iter().map(|t| t.bbox()).collect();
    let near = near_pairs(&boxes, 0.0);
    let pairs = select_pairs(c, opts, &near);
    let blocks: Vec<Block> = pairs.par_iter().map(|&(a, b)| compute_block(c, a, b)).collect();

    let mut matrix = LinkingMatrix { copies: c.copies.len(), g, computed_pairs: blocks.len(), ..Default::default() };
    let (mut positive, mut complete, mut weak, mut linked_other, mut errors) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut first_bad: Option<(usize, usize, String)> = None;
    let mut note_bad = |a: usize, b: usize, why: String| {
        if first_bad.is_none() {
            first_bad = Some((a, b, why));
        }
    };
    for blk in &blocks {
        let (a, b) = (blk.a, blk.b);
        if let Some(e) = &blk.error {
            errors += 1;
            note_bad(a, b, e.clone());
            continue;
        }
        for (idx, &v) in blk.values.iter().enumerate() {
            if v != 0 {
                matrix.flat.push((a, idx / g + 1, b, idx % g + 1, v));
            }
        }
        let diag_ok = (0..g).all(|k| blk.values[k * g + k].abs() == 1);
        let off_ok = (0..g * g).filter(|x| x / g != x % g).all(|x| blk.values[x] == 0);
        let any = blk.values.iter().any(|&v| v != 0);
        if s.predicate(a, b) {
            positive += 1;
            if any {
                weak += 1;
            }
            if diag_ok && off_ok {
                complete += 1;
            } else {
                note_bad(a, b, format!("meeting scaffold segments but block {:?}", blk.values));
            }
        } else if any {
            linked_other += 1;
            note_bad(a, b, format!("disjoint scaffold segments but block {:?}", blk.values));
        }
    }
    matrix.flat.sort_unstable();
    matrix.entries = matrix
        .flat
        .iter()
        .map(|&(a, k, b, kp, value)| LinkEntry { first: s.index_of(a), second: s.index_of(b), k, kp, value })
        .collect();

    cert.stats.pairs_total = total_pairs(c.copies.len());
    cert.stats.pairs_checked = blocks.len() as u64;
    if opts.is_exhaustive() {
        cert.stats.pairs_pruned = cert.stats.pairs_total - blocks.len() as u64;
    } else {
        cert.notes.push(format!("sampled mode, seed {}", opts.seed));
    }
    cert.notes.push(format!(
        "{positive} pairs with meeting segments: {complete} completely linked, {weak} linked; \
         {linked_other} linked pairs with disjoint segments; {errors} computation errors"
    ));
    let ok = first_bad.is_none();
    cert.margin = Some(if ok { 0.0 } else { -((positive - complete + linked_other + errors) as f64) });
    cert.witness = first_bad.map(|(a, b, why)| Witness {
        first: Some(s.index_of(a)),
        second: Some(s.index_of(b)),
        achieved: 0.0,
        required: 0.0,
        detail: why,
    });
    cert.status = if ok { Status::Pass } else { Status::Fail };
    (cert.finish(started), matrix)
}
