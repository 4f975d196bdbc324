use super::MapsError;
use crate::geometry::Point3;
use crate::sequences::FoldingSequence;
use serde::Serialize;

/// One coordinate threshold. All thresholds are integers plus quarters, so
/// comparisons in `f64` are exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Constraint {
    XAtMost(f64),
    XAtLeast(f64),
    YAtMost(f64),
    YAtLeast(f64),
}

impl Constraint {
    pub fn holds(&self, p: Point3) -> bool {
        match *self {
            Constraint::XAtMost(v) => p.x <= v,
            Constraint::XAtLeast(v) => p.x >= v,
            Constraint::YAtMost(v) => p.y <= v,
            Constraint::YAtLeast(v) => p.y >= v,
        }
    }
}

/// A piece of the complement of the sub-tori, cut out by closed half-spaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlabRegion {
    pub name: String,
    pub constraints: Vec<Constraint>,
}

impl SlabRegion {
    fn new(name: &str, constraints: Vec<Constraint>) -> Self {
        SlabRegion { name: name.to_string(), constraints }
    }
}

/// Whether `p` satisfies every constraint of `region`. Membership in the
/// ambient solid minus the sub-tori is a separate test.
pub fn region_membership(p: Point3, region: &SlabRegion) -> bool {
    region.constraints.iter().all(|c| c.holds(p))
}

/// The six pieces of the odd-genus torus and the three pieces of its half.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddDecomposition {
    pub k: usize,
    /// `C_{2k+1,k}`.
    pub c_odd: u64,
    /// `C_{k+1,k}`.
    pub c_half: u64,
    pub u: Vec<SlabRegion>,
    pub v: Vec<SlabRegion>,
}

/// Where a point falls among the `U` pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Placement {
    /// Indices (1-based) of the pieces whose constraints hold; two on a shared face.
    Regions(Vec<usize>),
    /// Strictly between the first two thresholds, assigned to no piece.
    Gap,
}

impl OddDecomposition {
    pub fn place(&self, p: Point3) -> Placement {
        let hits: Vec<usize> = self.u.iter().enumerate().filter(|(_, r)| region_membership(p, r)).map(|(k, _)| k + 1).collect();
        if hits.is_empty() {
            Placement::Gap
        } else {
            Placement::Regions(hits)
        }
    }

    /// The strip `C + 1/2 < x < C + 3/4` left uncovered by the thresholds.
    pub fn gap(&self) -> (f64, f64) {
        let c = self.c_odd as f64;
        (c + 0.5, c + 0.75)
    }

    pub fn place_half(&self, p: Point3) -> Vec<usize> {
        self.v.iter().enumerate().filter(|(_, r)| region_membership(p, r)).map(|(k, _)| k + 1).collect()
    }
}

/// Cuts for genus `n = 2k + 1`, `n >= 3`.
pub fn decompose_odd(n: usize) -> Result<OddDecomposition, MapsError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(MapsError::Parameter(format!("odd decomposition needs odd genus at least 3, got {n}")));
    }
    let k = n / 2;
    let c_odd = FoldingSequence::new(n)?.prefix[k];
    let c_half = FoldingSequence::new(k + 1)?.prefix[k];
    let c = c_odd as f64;
    use Constraint::*;
    let u = vec![
        SlabRegion::new("U1", vec![XAtMost(c + 0.5)]),
        SlabRegion::new("U2", vec![XAtLeast(c + 0.75), XAtMost(c + 1.5), YAtLeast(0.5)]),
        SlabRegion::new("U3", vec![XAtLeast(c + 1.5), XAtMost(c + 2.25), YAtLeast(0.5)]),
        SlabRegion::new("U4", vec![XAtLeast(c + 0.75), XAtMost(c + 1.5), YAtMost(0.5)]),
        SlabRegion::new("U5", vec![XAtLeast(c + 1.5), XAtMost(c + 2.25), YAtMost(0.5)]),
        SlabRegion::new("U6", vec![XAtLeast(c + 2.25)]),
    ];
    let h = c_half as f64;
    let v = vec![
        SlabRegion::new("V1", vec![XAtMost(h + 0.5)]),
        SlabRegion::new("V2", vec![XAtLeast(h + 0.5), YAtLeast(0.5)]),
        SlabRegion::new("V3", vec![XAtLeast(h + 0.5), YAtMost(0.5)]),
    ];
    Ok(OddDecomposition { k, c_odd, c_half, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_three_thresholds() {
        let d = decompose_odd(3).unwrap();
        assert_eq!((d.u.len(), d.v.len()), (6, 3));
        let c = d.c_odd as f64;
        assert_eq!(d.place(Point3::new(c + 0.25, 0.3, 0.0)), Placement::Regions(vec![1]));
        assert_eq!(d.place(Point3::new(c + 1.0, 0.75, 0.0)), Placement::Regions(vec![2]));
        assert_eq!(d.place(Point3::new(c + 0.6, 0.75, 0.0)), Placement::Gap);
        assert_eq!(d.place(Point3::new(c + 1.5, 0.5, 0.0)), Placement::Regions(vec![2, 3, 4, 5]));
        assert!(decompose_odd(4).is_err() && decompose_odd(1).is_err());
    }

    #[test]
    fn half_pieces_cover() {
        for n in [3, 5, 7] {
            let d = decompose_odd(n).unwrap();
            for x in 0..200 {
                for y in 0..20 {
                    let p = Point3::new(x as f64 * 0.05, y as f64 * 0.07 - 0.2, 0.0);
                    assert!(!d.place_half(p).is_empty());
                }
            }
        }
    }
}
