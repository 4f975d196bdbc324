//! Triangle meshes of `delta`-tubes around ladder curves.
//!
//! At height `z` the tube's cross-section is the set of points within
//! sup-distance `rho = sqrt(r^2 - z^2)` of the ladder: an outer rectangle
//! grown by `rho` with one shrunken rectangular hole per cell. The surface is
//! swept as rings of these rectangles. The outer sheet covers the lower and
//! upper halves on the outside, each hole sheet runs over the top and down
//! the inside, and all sheets meet along the ladder at `z = +-r`.

use crate::geometry::{Point3, Similarity, TubeNeighborhood};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("resolution must be at least 8, got {0}")]
    Resolution(usize),
    #[error("tube radius {radius} is too large for cells of size {cell}")]
    DegenerateRadius { radius: f64, cell: f64 },
    #[error("core must be axis-parallel rectangles in one plane, adjacent along x")]
    UnsupportedCore,
    #[error("edge ({0}, {1}) is used by {2} faces")]
    NotManifold(u32, u32, usize),
    #[error("edge ({0}, {1}) is traversed twice in the same direction")]
    NotOriented(u32, u32),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Point3>,
    pub faces: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn edge_uses(&self) -> HashMap<(u32, u32), Vec<bool>> {
        let mut uses: HashMap<(u32, u32), Vec<bool>> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                uses.entry((a.min(b), a.max(b))).or_default().push(a < b);
            }
        }
        uses
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_uses().len() as i64 + self.faces.len() as i64
    }

    /// Every edge in exactly two faces, traversed once in each direction.
    pub fn check_closed_oriented(&self) -> Result<(), MeshError> {
        let mut keys: Vec<_> = self.edge_uses().into_iter().collect();
        keys.sort_by_key(|(k, _)| *k);
        for ((a, b), dirs) in keys {
            if dirs.len() != 2 {
                return Err(MeshError::NotManifold(a, b, dirs.len()));
            }
            if dirs[0] == dirs[1] {
                return Err(MeshError::NotOriented(a, b));
            }
        }
        Ok(())
    }

    /// Enclosed volume; positive when faces wind outward.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let (a, b, c) = (self.vertices[f[0] as usize], self.vertices[f[1] as usize], self.vertices[f[2] as usize]);
                a.dot(b.cross(c)) / 6.0
            })
            .sum()
    }

    pub fn transformed(&self, s: &Similarity) -> TriMesh {
        TriMesh { vertices: self.vertices.iter().map(|&p| s.apply(p)).collect(), faces: self.faces.clone() }
    }

    /// Appends this mesh as an OBJ object; `base` is the number of vertices already written.
    pub fn write_obj(&self, name: &str, base: usize, out: &mut String) {
        let _ = writeln!(out, "o {name}");
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.12} {:.12} {:.12}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {}", base + f[0] as usize + 1, base + f[1] as usize + 1, base + f[2] as usize + 1);
        }
    }

    pub fn to_obj(&self, name: &str) -> String {
        let mut s = String::new();
        self.write_obj(name, 0, &mut s);
        s
    }
}

struct LadderShape {
    xs: Vec<f64>,
    y0: f64,
    y1: f64,
    z0: f64,
}

fn ladder_shape(t: &TubeNeighborhood) -> Result<LadderShape, MeshError> {
    let mut cells = Vec::new();
    let mut frame: Option<(f64, f64, f64)> = None;
    for l in t.core() {
        let v = l.vertices();
        if v.len() != 4 {
            return Err(MeshError::UnsupportedCore);
        }
        let z0 = v[0].z;
        let (xa, xb) = (v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max));
        let (ya, yb) = (v.iter().map(|p| p.y).fold(f64::INFINITY, f64::min), v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max));
        let corners_ok = v.iter().all(|p| p.z == z0 && (p.x == xa || p.x == xb) && (p.y == ya || p.y == yb));
        let axis_ok = l.edges().all(|(a, b)| a.x == b.x || a.y == b.y);
        if !corners_ok || !axis_ok {
            return Err(MeshError::UnsupportedCore);
        }
        match frame {
            None => frame = Some((ya, yb, z0)),
            Some(f) if f != (ya, yb, z0) => return Err(MeshError::UnsupportedCore),
            _ => {}
        }
        cells.push((xa, xb));
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut xs = vec![cells[0].0];
    for w in cells.windows(2) {
        if w[0].1 != w[1].0 {
            return Err(MeshError::UnsupportedCore);
        }
    }
    xs.extend(cells.iter().map(|c| c.1));
    let (y0, y1, z0) = frame.ok_or(MeshError::UnsupportedCore)?;
    Ok(LadderShape { xs, y0, y1, z0 })
}

/// Counter-clockwise ring of the outer rectangle grown by `rho`, with extra
/// vertices above and below every interior break.
fn outer_ring(s: &LadderShape, rho: f64) -> Vec<(f64, f64)> {
    let g = s.xs.len() - 1;
    let (xl, xr) = (s.xs[0] - rho, s.xs[g] + rho);
    let (yb, yt) = (s.y0 - rho, s.y1 + rho);
    let mut ring = vec![(xl, yb)];
    ring.extend(s.xs[1..g].iter().map(|&x| (x, yb)));
    ring.push((xr, yb));
    ring.push((xr, yt));
    ring.extend(s.xs[1..g].iter().rev().map(|&x| (x, yt)));
    ring.push((xl, yt));
    ring
}

/// Counter-clockwise ring of cell `i` shrunk by `rho`.
fn hole_ring(s: &LadderShape, i: usize, rho: f64) -> Vec<(f64, f64)> {
    let (xa, xb) = (s.xs[i] + rho, s.xs[i + 1] - rho);
    let (ya, yb) = (s.y0 + rho, s.y1 - rho);
    vec![(xa, ya), (xb, ya), (xb, yb), (xa, yb)]
}

struct Builder {
    mesh: TriMesh,
    index: HashMap<[u64; 3], u32>,
}

impl Builder {
    fn vertex(&mut self, p: Point3) -> u32 {
        let key = [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()];
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.mesh.vertices.len() as u32;
        self.mesh.vertices.push(p);
        self.index.insert(key, i);
        i
    }

    fn push_tri(&mut self, a: u32, b: u32, c: u32) {
        if a != b && b != c && a != c {
            self.mesh.faces.push([a, b, c]);
        }
    }

    /// Stitches consecutive rings (same length, same winding) into triangles.
    fn sheet(&mut self, rings: &[Vec<u32>]) {
        for w in rings.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let m = lo.len();
            for s in 0..m {
                let t = (s + 1) % m;
                self.push_tri(lo[s], lo[t], hi[t]);
                self.push_tri(lo[s], hi[t], hi[s]);
            }
        }
    }
}

/// Meshes a `delta`-tube whose core is a planar, axis-parallel ladder.
pub fn mesh_tube(t: &TubeNeighborhood, resolution: usize) -> Result<TriMesh, MeshError> {
    if resolution < 8 {
        return Err(MeshError::Resolution(resolution));
    }
    let s = ladder_shape(t)?;
    let r = t.radius();
    let min_cell = s.xs.windows(2).map(|w| w[1] - w[0]).fold(s.y1 - s.y0, f64::min);
    if !(2.0 * r < min_cell) {
        return Err(MeshError::DegenerateRadius { radius: r, cell: min_cell });
    }
    // Angle samples on a half circle; the ends are pinned to rho = 0.
    let profile = |k: usize, start: f64| -> (f64, f64) {
        if k == 0 || k == resolution {
            let z = if (start + PI * k as f64 / resolution as f64).sin() > 0.0 { r } else { -r };
            return (0.0, z);
        }
        let th = start + PI * k as f64 / resolution as f64;
        ((r * th.cos()).abs(), r * th.sin())
    };
    let mut b = Builder { mesh: TriMesh::default(), index: HashMap::new() };
    let mut rings = Vec::with_capacity(resolution + 1);
    for k in 0..=resolution {
        let (rho, z) = profile(k, -PI / 2.0);
        let ring = outer_ring(&s, rho);
        rings.push(ring.into_iter().map(|(x, y)| b.vertex(Point3::new(x, y, s.z0 + z))).collect::<Vec<_>>());
    }
    b.sheet(&rings);
    for cell in 0..s.xs.len() - 1 {
        let mut rings = Vec::with_capacity(resolution + 1);
        for k in 0..=resolution {
            let (rho, z) = profile(k, PI / 2.0);
            let ring = hole_ring(&s, cell, rho);
            rings.push(ring.into_iter().map(|(x, y)| b.vertex(Point3::new(x, y, s.z0 + z))).collect::<Vec<_>>());
        }
        b.sheet(&rings);
    }
    let mesh = b.mesh;
    mesh.check_closed_oriented()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::delta_point_to_polyloop;
    use crate::ladder::{build_ladder, build_torus};

    #[test]
    fn torus_and_genus_two() {
        for (g, chi) in [(1usize, 0i64), (2, -2), (6, -10)] {
            let l = build_ladder(g, 9).unwrap();
            let m = mesh_tube(&build_torus(&l), 8).unwrap();
            assert_eq!(m.euler_characteristic(), chi, "g = {g}");
            assert!(m.signed_volume() > 0.0);
            for v in &m.vertices {
                let d = l.loops().iter().map(|c| delta_point_to_polyloop(*v, c)).fold(f64::INFINITY, f64::min);
                assert!((d - 1.0 / 24.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn rejects_low_resolution() {
        let l = build_ladder(1, 9).unwrap();
        assert_eq!(mesh_tube(&build_torus(&l), 4), Err(MeshError::Resolution(4)));
    }
}
