use super::scaffold::{Scaffold, Sigma};
use super::{Ladder, LadderError};
use crate::geometry::{Aabb, ExactSimilarity, Point3, PolyLoop, Similarity, XPoint2, XPoint3};
use crate::qfield::QSqrt2;
use serde::Serialize;
use std::collections::HashMap;

/// Vertical position of a copy: `Low` copies top out at `(4C_g - 1) sqrt(2)/(5N)`,
/// `High` copies a quarter of a rung spacing higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZClass {
    Low,
    High,
}

impl ZClass {
    fn flip(self) -> ZClass {
        match self {
            ZClass::Low => ZClass::High,
            ZClass::High => ZClass::Low,
        }
    }
}

pub(crate) fn alpha_f64(n: u64) -> f64 {
    8.0 * std::f64::consts::SQRT_2 / (5.0 * n as f64)
}

/// A scaled copy `tau_{i,j} = psi_{i,j}(gamma)` standing over `sigma_{i,j}`.
#[derive(Debug, Clone)]
pub struct LadderCopy {
    pub i: usize,
    pub j: usize,
    pub class: ZClass,
    map: Similarity,
    exact: ExactSimilarity,
    loops: Vec<PolyLoop>,
    bbox: Aabb,
    anchor: (QSqrt2, QSqrt2),
    half: (QSqrt2, QSqrt2),
    z_top: QSqrt2,
    alpha: QSqrt2,
    prefix: Vec<u64>,
}

impl LadderCopy {
    pub fn map(&self) -> &Similarity {
        &self.map
    }

    pub fn exact_map(&self) -> &ExactSimilarity {
        &self.exact
    }

    /// The loops of `tau_{i,j}`, images of `gamma_1..gamma_g`.
    pub fn loops(&self) -> &[PolyLoop] {
        &self.loops
    }

    pub fn bbox(&self) -> Aabb {
        self.bbox
    }

    pub fn z_top(&self) -> &QSqrt2 {
        &self.z_top
    }

    /// Exact vertices of loop `k` (1-based).
    ///
    /// A point `(x, y, 0)` of `gamma` goes to `anchor + (2y - 1) half` at height
    /// `z_top - alpha x`.
    pub fn exact_loop(&self, k: usize) -> Vec<XPoint3> {
        let xs = [self.prefix[k - 1], self.prefix[k], self.prefix[k], self.prefix[k - 1]];
        let ys = [1, 1, 0, 0];
        xs.iter()
            .zip(ys)
            .map(|(&x, y)| {
                let (px, py) = if y == 1 {
                    (&self.anchor.0 + &self.half.0, &self.anchor.1 + &self.half.1)
                } else {
                    (&self.anchor.0 - &self.half.0, &self.anchor.1 - &self.half.1)
                };
                let z = &self.z_top - &(&self.alpha * &QSqrt2::from_int(x as i64));
                XPoint3::new(px, py, z)
            })
            .collect()
    }

    /// All distinct exact vertices of `tau_{i,j}`.
    pub fn exact_vertices(&self) -> Vec<XPoint3> {
        let g = self.prefix.len() - 1;
        let mut v = Vec::with_capacity(2 * (g + 1));
        for (k, &x) in self.prefix.iter().enumerate() {
            let _ = k;
            let z = &self.z_top - &(&self.alpha * &QSqrt2::from_int(x as i64));
            v.push(XPoint3::new(
                &self.anchor.0 + &self.half.0,
                &self.anchor.1 + &self.half.1,
                z.clone(),
            ));
            v.push(XPoint3::new(&self.anchor.0 - &self.half.0, &self.anchor.1 - &self.half.1, z));
        }
        v
    }

    /// Euclidean distance between the two copies' curves.
    pub fn distance(&self, o: &LadderCopy) -> f64 {
        let mut best = f64::INFINITY;
        for a in &self.loops {
            for b in &o.loops {
                best = best.min(a.distance(b));
            }
        }
        best
    }
}

fn assign_classes(scaffold: &Scaffold) -> Result<Vec<Vec<ZClass>>, LadderError> {
    let g = scaffold.loops.len();
    let mut out: Vec<Vec<ZClass>> = Vec::with_capacity(g);
    let alt = |first: ZClass, k: usize| if k.is_multiple_of(2) { first } else { first.flip() };
    out.push((0..scaffold.loops[0].len()).map(|k| alt(ZClass::Low, k)).collect());
    for li in 1..g {
        let prev = &scaffold.loops[li - 1];
        let cur = &scaffold.loops[li];
        let positions: HashMap<&XPoint2, usize> = cur.iter().enumerate().map(|(b, t)| (&t.anchor, b)).collect();
        let mut first = None;
        for (a, s) in prev.iter().enumerate() {
            if let Some(&b) = positions.get(&s.anchor) {
                let want = out[li - 1][a].flip();
                let f = if b % 2 == 0 { want } else { want.flip() };
                match first {
                    None => first = Some(f),
                    Some(f0) if f0 != f => {
                        return Err(super::layout::LayoutError::ParityMismatch {
                            loop_index: li + 1,
                            pos: cur[b].arc,
                        }
                        .into())
                    }
                    _ => {}
                }
            }
        }
        let f = first.unwrap_or(ZClass::Low);
        out.push((0..cur.len()).map(|k| alt(f, k)).collect());
    }
    Ok(out)
}

fn copy_for(sig: &Sigma, class: ZClass, ladder: &Ladder) -> LadderCopy {
    let seq = &ladder.seq;
    let n = seq.n as i64;
    let cg = seq.width() as i64;
    let top = match class {
        ZClass::Low => 4 * cg - 1,
        ZClass::High => 4 * cg + 1,
    };
    let z_top = QSqrt2::frac_sqrt2(top, 5 * n);
    let alpha = QSqrt2::frac_sqrt2(8, 5 * n);
    let two = QSqrt2::from_int(2);
    let (hx, hy) = sig.half.clone();
    let (ax, ay) = (sig.anchor.x.clone(), sig.anchor.y.clone());
    let z = QSqrt2::zero;
    let lin = [
        [z(), &two * &hx, &two * &hy],
        [z(), &two * &hy, -(&two * &hx)],
        [-alpha.clone(), z(), z()],
    ];
    let exact = ExactSimilarity {
        scale: alpha.clone(),
        lin,
        trans: [&ax - &hx, &ay - &hy, z_top.clone()],
    };
    let (ux, uy) = sig.heading.unit();
    let rot = [[0.0, ux, uy], [0.0, uy, -ux], [-1.0, 0.0, 0.0]];
    let trans = Point3::new(exact.trans[0].to_f64(), exact.trans[1].to_f64(), z_top.to_f64());
    let map = Similarity::new(alpha_f64(seq.n), rot, trans).expect("proper rotation");
    let mut copy = LadderCopy {
        i: sig.i,
        j: sig.j,
        class,
        map,
        exact,
        loops: Vec::new(),
        bbox: Aabb::of_points([]),
        anchor: (ax, ay),
        half: (hx, hy),
        z_top,
        alpha,
        prefix: seq.prefix.clone(),
    };
    let (fa, fh) = ((copy.anchor.0.to_f64(), copy.anchor.1.to_f64()), (copy.half.0.to_f64(), copy.half.1.to_f64()));
    let (ft, fal) = (copy.z_top.to_f64(), alpha_f64(seq.n));
    let top = (fa.0 + fh.0, fa.1 + fh.1);
    let bottom = (fa.0 - fh.0, fa.1 - fh.1);
    copy.loops = (1..=seq.g)
        .map(|k| {
            let (z0, z1) = (ft - fal * seq.prefix[k - 1] as f64, ft - fal * seq.prefix[k] as f64);
            let v = vec![
                Point3::new(top.0, top.1, z0),
                Point3::new(top.0, top.1, z1),
                Point3::new(bottom.0, bottom.1, z1),
                Point3::new(bottom.0, bottom.1, z0),
            ];
            PolyLoop::new(v).expect("scaled rectangle is simple")
        })
        .collect();
    copy.bbox = Aabb::of_points(copy.loops.iter().flat_map(|l| l.vertices().iter().copied()));
    copy
}

/// Builds `tau_{i,j}` and `psi_{i,j}` for every scaffold segment, in `(i, j)` order.
pub fn build_copies(ladder: &Ladder, scaffold: &Scaffold) -> Result<Vec<LadderCopy>, LadderError> {
    let classes = assign_classes(scaffold)?;
    Ok(scaffold
        .loops
        .iter()
        .zip(&classes)
        .flat_map(|(l, cl)| l.iter().zip(cl).map(|(s, &c)| copy_for(s, c, ladder)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::Construction;

    #[test]
    fn exact_map_matches_vertices() {
        let c = Construction::build(2, 9).unwrap();
        for copy in c.copies.iter().step_by(7) {
            assert!(copy.exact_map().is_proper_similarity());
            for k in 1..=2 {
                let direct = copy.exact_loop(k);
                let mapped: Vec<XPoint3> = c.ladder.exact_loops()[k - 1].iter().map(|p| copy.exact_map().apply(p)).collect();
                assert_eq!(direct, mapped);
                for (p, q) in c.ladder.loops()[k - 1].vertices().iter().zip(copy.loops()[k - 1].vertices()) {
                    assert!(copy.map().apply(*p).dist(*q) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn classes_alternate_and_differ_on_shared_anchors() {
        let c = Construction::build(3, 25).unwrap();
        let s = &c.scaffold;
        for (a, b) in s.predicate_pairs() {
            assert_ne!(c.copies[a].class, c.copies[b].class, "{:?}", s.index_of(a));
        }
    }
}
