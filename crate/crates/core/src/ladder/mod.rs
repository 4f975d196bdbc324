//! Ladder curves, the segment scaffold, scaled ladder copies and solid tori.
//!
//! Loop `i` of the ladder is the boundary of `[C_{i-1}, C_i] x [0, 1]` in the
//! plane `z = 0`, traversed clockwise from its top-left corner.

mod copies;
mod heading;
mod layout;
mod mesh;
mod scaffold;

pub use copies::{build_copies, LadderCopy, ZClass};
pub use heading::{Heading, SlopeTag};
pub use layout::{JunctionKind, LayoutError};
pub use mesh::{mesh_tube, MeshError, TriMesh};
pub use scaffold::{anchor_points, build_scaffold, EdgeSide, Sigma, Scaffold, ScaffoldRule};

use crate::geometry::{Metric, Point3, PolyLoop, TubeError, TubeNeighborhood, XPoint3};
use crate::qfield::QSqrt2;
use crate::sequences::{FoldingSequence, SequenceError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LadderError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error("loop index {index} out of range 1..={g}")]
    LoopIndex { index: usize, g: usize },
}

/// Radius of the big torus under `delta`.
pub const TORUS_RADIUS: f64 = 1.0 / 24.0;

/// The planar ladder curve of genus `g`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub seq: FoldingSequence,
    loops: Vec<PolyLoop>,
    exact_loops: Vec<Vec<XPoint3>>,
}

impl Ladder {
    pub fn g(&self) -> usize {
        self.seq.g
    }

    pub fn loops(&self) -> &[PolyLoop] {
        &self.loops
    }

    pub fn exact_loops(&self) -> &[Vec<XPoint3>] {
        &self.exact_loops
    }

    /// Edges of the union `gamma`, each shared vertical edge listed once.
    pub fn union_edges(&self) -> Vec<(Point3, Point3)> {
        let p = &self.seq.prefix;
        let g = self.g();
        let mut out = Vec::with_capacity(3 * g + 1);
        for i in 1..=g {
            let (x0, x1) = (p[i - 1] as f64, p[i] as f64);
            out.push((Point3::new(x0, 1.0, 0.0), Point3::new(x1, 1.0, 0.0)));
            out.push((Point3::new(x1, 0.0, 0.0), Point3::new(x0, 0.0, 0.0)));
        }
        for i in 0..=g {
            let x = p[i] as f64;
            out.push((Point3::new(x, 1.0, 0.0), Point3::new(x, 0.0, 0.0)));
        }
        out
    }

    /// Distinct vertices of `gamma`.
    pub fn union_vertices(&self) -> Vec<Point3> {
        let p = &self.seq.prefix;
        (0..=self.g())
            .flat_map(|i| [Point3::new(p[i] as f64, 1.0, 0.0), Point3::new(p[i] as f64, 0.0, 0.0)])
            .collect()
    }
}

/// Loop `i` (1-based) as exact vertices, clockwise from the top-left corner.
pub(crate) fn exact_loop(seq: &FoldingSequence, i: usize) -> Vec<XPoint3> {
    let x0 = QSqrt2::from_int(seq.prefix[i - 1] as i64);
    let x1 = QSqrt2::from_int(seq.prefix[i] as i64);
    let (zero, one) = (QSqrt2::zero(), QSqrt2::one());
    vec![
        XPoint3::new(x0.clone(), one.clone(), zero.clone()),
        XPoint3::new(x1.clone(), one, zero.clone()),
        XPoint3::new(x1, zero.clone(), zero.clone()),
        XPoint3::new(x0, zero.clone(), zero),
    ]
}

/// Builds the ladder for genus `g` at density `n`.
pub fn build_ladder(g: usize, n: u64) -> Result<Ladder, LadderError> {
    let seq = FoldingSequence::with_density(g, n)?;
    Ok(ladder_from_sequence(seq))
}

pub fn ladder_from_sequence(seq: FoldingSequence) -> Ladder {
    let exact_loops: Vec<Vec<XPoint3>> = (1..=seq.g).map(|i| exact_loop(&seq, i)).collect();
    let loops = exact_loops
        .iter()
        .map(|v| PolyLoop::new(v.iter().map(XPoint3::to_point).collect()).expect("rectangles are simple"))
        .collect();
    Ladder { seq, loops, exact_loops }
}

/// The torus `T^g = {p : delta(p, gamma) <= 1/24}`.
pub fn build_torus(ladder: &Ladder) -> TubeNeighborhood {
    TubeNeighborhood::new(ladder.loops.clone(), TORUS_RADIUS, Metric::Delta).expect("positive radius")
}

/// Radius `sqrt(2) / (15 N)` of the sub-tori.
pub fn sub_torus_radius(n: u64) -> f64 {
    std::f64::consts::SQRT_2 / (15.0 * n as f64)
}

/// Sub-tori of radius `sqrt(2)/(15N)` around each copy, in copy order.
pub fn sub_tori(copies: &[LadderCopy], n: u64) -> Vec<TubeNeighborhood> {
    copies
        .iter()
        .map(|c| TubeNeighborhood::new(c.loops().to_vec(), sub_torus_radius(n), Metric::Delta).expect("positive"))
        .collect()
}

/// Everything built from `(g, N)`: ladder, scaffold and copies.
#[derive(Debug, Clone)]
pub struct Construction {
    pub ladder: Ladder,
    pub scaffold: Scaffold,
    pub copies: Vec<LadderCopy>,
}

impl Construction {
    pub fn build(g: usize, n: u64) -> Result<Self, LadderError> {
        Self::build_with_rule(g, n, ScaffoldRule::Junction)
    }

    pub fn build_with_rule(g: usize, n: u64, rule: ScaffoldRule) -> Result<Self, LadderError> {
        let ladder = build_ladder(g, n)?;
        let scaffold = build_scaffold(&ladder, rule)?;
        let copies = build_copies(&ladder, &scaffold)?;
        Ok(Construction { ladder, scaffold, copies })
    }

    pub fn g(&self) -> usize {
        self.ladder.g()
    }

    pub fn n(&self) -> u64 {
        self.ladder.seq.n
    }

    /// `alpha = 8 sqrt(2) / (5N)`.
    pub fn alpha(&self) -> f64 {
        copies::alpha_f64(self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_shapes() {
        let l = build_ladder(1, 9).unwrap();
        assert_eq!(l.loops()[0].vertices()[1], Point3::new(1.0, 1.0, 0.0));
        let l = build_ladder(6, 1089).unwrap();
        let widths: Vec<f64> = l.loops().iter().map(|p| p.vertices()[1].x - p.vertices()[0].x).collect();
        assert_eq!(widths, vec![1.0, 3.0, 1.0, 1.0, 3.0, 1.0]);
        assert_eq!(l.union_edges().len(), 19);
        assert!(matches!(build_ladder(1, 3), Err(LadderError::Sequence(SequenceError::DensityTooSmall(3)))));
    }

    #[test]
    fn torus_membership() {
        let l = build_ladder(1, 9).unwrap();
        let t = build_torus(&l);
        assert!((t.distance(Point3::new(0.5, 1.0 + 1.0 / 24.0, 0.0)) - 1.0 / 24.0).abs() < 1e-15);
        assert!(!t.contains(Point3::new(0.5, 0.5, 0.0)));
    }
}
