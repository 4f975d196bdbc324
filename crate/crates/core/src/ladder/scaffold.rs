use super::heading::{Heading, SlopeTag};
use super::layout::{junction_layout, uniform_positions};
use super::{Ladder, LadderError};
use crate::geometry::{Point3, Segment3, XPoint2};
use crate::qfield::QSqrt2;
use crate::sequences::FoldingSequence;
use serde::Serialize;

/// How anchors and segment directions are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum ScaffoldRule {
    /// Alternating diagonals, with junction gadgets when `g >= 2`.
    #[default]
    Junction,
    /// Uniform anchors with the index-set slope rule taken literally.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeSide {
    Top,
    Right,
    Bottom,
    Left,
}

impl EdgeSide {
    pub fn is_horizontal(self) -> bool {
        matches!(self, EdgeSide::Top | EdgeSide::Bottom)
    }
}

/// One scaffold segment `sigma_{i,j}` with its anchor.
#[derive(Debug, Clone)]
pub struct Sigma {
    pub i: usize,
    pub j: usize,
    pub side: EdgeSide,
    /// Arc position along loop `i` in units of `1/(8N)`.
    pub arc: i64,
    pub heading: Heading,
    pub tag: SlopeTag,
    pub anchor: XPoint2,
    /// Half of the segment vector, `(4 sqrt(2) / (5N)) * unit`.
    pub half: (QSqrt2, QSqrt2),
    pub p: XPoint2,
    pub q: XPoint2,
}

impl Sigma {
    pub fn segment(&self) -> Segment3 {
        let (px, py) = self.p.approx();
        let (qx, qy) = self.q.approx();
        Segment3::new(Point3::new(px, py, 0.0), Point3::new(qx, qy, 0.0)).expect("nonzero length")
    }

    pub fn anchor_point(&self) -> Point3 {
        let (x, y) = self.anchor.approx();
        Point3::new(x, y, 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct Scaffold {
    pub rule: ScaffoldRule,
    pub n: u64,
    /// Segments per loop, `j` ascending.
    pub loops: Vec<Vec<Sigma>>,
    /// Start of each loop in the flat `(i, j)` order.
    offsets: Vec<usize>,
}

impl Scaffold {
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of `(i, j)` (both 1-based).
    pub fn flat(&self, i: usize, j: usize) -> usize {
        self.offsets[i - 1] + j - 1
    }

    /// `(i, j)` of a flat index.
    pub fn index_of(&self, k: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= k);
        (i, k - self.offsets[i - 1] + 1)
    }

    pub fn get(&self, k: usize) -> &Sigma {
        let (i, j) = self.index_of(k);
        &self.loops[i - 1][j - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sigma> {
        self.loops.iter().flatten()
    }

    /// Pairs `(k, k')`, `k < k'`, that are consecutive on a loop or share an anchor
    /// across neighbouring loops.
    pub fn predicate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (li, l) in self.loops.iter().enumerate() {
            let m = l.len();
            for j in 0..m {
                let a = self.offsets[li] + j;
                let b = self.offsets[li] + (j + 1) % m;
                out.push((a.min(b), a.max(b)));
            }
        }
        for li in 1..self.loops.len() {
            for s in &self.loops[li - 1] {
                if s.side != EdgeSide::Right {
                    continue;
                }
                for t in &self.loops[li] {
                    if t.side == EdgeSide::Left && t.anchor == s.anchor {
                        out.push((self.flat(s.i, s.j), self.flat(t.i, t.j)));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether `(k, k')` satisfies the intersection predicate.
    pub fn predicate(&self, k: usize, kp: usize) -> bool {
        let (a, b) = (self.get(k), self.get(kp));
        if a.i == b.i {
            let m = self.loops[a.i - 1].len();
            let d = a.j.abs_diff(b.j);
            return d == 1 || d == m - 1;
        }
        a.i.abs_diff(b.i) == 1 && a.anchor == b.anchor
    }
}

fn side_and_point(seq: &FoldingSequence, i: usize, arc: i64) -> (EdgeSide, QSqrt2, QSqrt2) {
    let n8 = 8 * seq.n as i64;
    let l = seq.c[i - 1] as i64 * n8;
    let x0 = seq.prefix[i - 1] as i64;
    let x1 = seq.prefix[i] as i64;
    let r = |num: i64| QSqrt2::frac(num, n8);
    if arc < l {
        (EdgeSide::Top, r(x0 * n8 + arc), QSqrt2::one())
    } else if arc < l + n8 {
        (EdgeSide::Right, QSqrt2::from_int(x1), r(n8 - (arc - l)))
    } else if arc < 2 * l + n8 {
        (EdgeSide::Bottom, r(x1 * n8 - (arc - l - n8)), QSqrt2::zero())
    } else {
        (EdgeSide::Left, QSqrt2::from_int(x0), r(arc - 2 * l - n8))
    }
}

/// Heading of `sigma_{i,j}` under the index-set rule.
///
/// Indices not covered by any printed set default to slope `+1`.
pub fn printed_heading(c: u64, n: u64, j: u64, side: EdgeSide) -> Heading {
    let perp = [1, c * n + 1, (c + 1) * n + 1, (2 * c + 1) * n];
    if perp.contains(&j) {
        return if side.is_horizontal() { Heading::VERTICAL } else { Heading::HORIZONTAL };
    }
    let starts = [0, c * n, (c + 1) * n, (2 * c + 1) * n];
    let b = *starts.iter().filter(|&&s| s < j).max().unwrap();
    let off = j - b;
    if off >= 2 && off.is_multiple_of(2) {
        Heading::Diagonal(-1)
    } else {
        Heading::Diagonal(1)
    }
}

fn make_sigma(seq: &FoldingSequence, i: usize, j: usize, arc: i64, heading: Heading) -> Sigma {
    let (side, x, y) = side_and_point(seq, i, arc);
    let n = seq.n as i64;
    let half = heading.scaled_sqrt2(4, 5 * n);
    let anchor = XPoint2::new(x.clone(), y.clone());
    let p = XPoint2::new(&x - &half.0, &y - &half.1);
    let q = XPoint2::new(&x + &half.0, &y + &half.1);
    Sigma { i, j, side, arc, heading, tag: heading.tag(side.is_horizontal()), anchor, half, p, q }
}

/// Builds all `sigma_{i,j}`.
pub fn build_scaffold(ladder: &Ladder, rule: ScaffoldRule) -> Result<Scaffold, LadderError> {
    let seq = &ladder.seq;
    let g = seq.g;
    let per_loop: Vec<Vec<(i64, Heading)>> = match rule {
        ScaffoldRule::Junction if g >= 2 => junction_layout(&seq.c, seq.n)?,
        ScaffoldRule::Junction => (1..=g)
            .map(|i| {
                uniform_positions(seq.c[i - 1], seq.n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, arc)| (arc, Heading::Diagonal(if (i + k + 1) % 2 == 0 { 1 } else { -1 })))
                    .collect()
            })
            .collect(),
        ScaffoldRule::Printed => (1..=g)
            .map(|i| {
                uniform_positions(seq.c[i - 1], seq.n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, arc)| {
                        let side = side_and_point(seq, i, arc).0;
                        (arc, printed_heading(seq.c[i - 1], seq.n, k as u64 + 1, side))
                    })
                    .collect()
            })
            .collect(),
    };
    let mut loops = Vec::with_capacity(g);
    let mut offsets = vec![0];
    for (li, items) in per_loop.into_iter().enumerate() {
        let i = li + 1;
        let sig: Vec<Sigma> =
            items.into_iter().enumerate().map(|(k, (arc, h))| make_sigma(seq, i, k + 1, arc, h)).collect();
        offsets.push(offsets.last().unwrap() + sig.len());
        loops.push(sig);
    }
    Ok(Scaffold { rule, n: seq.n, loops, offsets })
}

/// Anchor points of loop `i` in order, as floats.
pub fn anchor_points(scaffold: &Scaffold, i: usize) -> Result<Vec<Point3>, LadderError> {
    let g = scaffold.loops.len();
    if i == 0 || i > g {
        return Err(LadderError::LoopIndex { index: i, g });
    }
    Ok(scaffold.loops[i - 1].iter().map(Sigma::anchor_point).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_ladder;

    #[test]
    fn printed_rule_examples() {
        let l = build_ladder(1, 9).unwrap();
        let s = build_scaffold(&l, ScaffoldRule::Printed).unwrap();
        assert_eq!(s.loops[0][0].tag, SlopeTag::Perpendicular);
        assert_eq!(s.loops[0][1].tag, SlopeTag::MinusOne);
        assert_eq!(s.iter().filter(|x| x.tag == SlopeTag::Perpendicular).count(), 4);
    }

    #[test]
    fn first_anchor_and_counts() {
        let l = build_ladder(1, 9).unwrap();
        let s = build_scaffold(&l, ScaffoldRule::Junction).unwrap();
        let a = anchor_points(&s, 1).unwrap();
        assert_eq!(a.len(), 36);
        assert!((a[0].x - 1.0 / 18.0).abs() < 1e-15 && a[0].y == 1.0);
        for side in [EdgeSide::Top, EdgeSide::Right, EdgeSide::Bottom, EdgeSide::Left] {
            assert_eq!(s.loops[0].iter().filter(|x| x.side == side).count(), 9);
        }
        assert!(anchor_points(&s, 2).is_err());
    }

    #[test]
    fn flat_indexing() {
        let l = build_ladder(3, 25).unwrap();
        let s = build_scaffold(&l, ScaffoldRule::Junction).unwrap();
        assert_eq!(s.len(), l.seq.copy_count());
        for k in [0, 1, 99, 100, 101, 299, s.len() - 1] {
            let (i, j) = s.index_of(k);
            assert_eq!(s.flat(i, j), k);
        }
        // N - 1 shared anchors on each interior vertical edge.
        let shared = s.predicate_pairs().iter().filter(|&&(a, b)| s.get(a).i != s.get(b).i).count();
        assert_eq!(shared, 2 * 24);
    }
}
