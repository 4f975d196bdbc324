use super::point::{segment_distance_raw, Aabb, Point3};
use super::similarity::Similarity;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoopError {
    #[error("a loop needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("non-finite vertex {0}")]
    NonFinite(usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
}

/// Closed polygon; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyLoop {
    vertices: Vec<Point3>,
}

impl PolyLoop {
    /// Validates vertex count, distinct consecutive vertices and simplicity.
    pub fn new(vertices: Vec<Point3>) -> Result<Self, LoopError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LoopError::TooFewVertices(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(LoopError::NonFinite(i));
            }
            if *v == vertices[(i + 1) % n] {
                return Err(LoopError::RepeatedVertex(i, (i + 1) % n));
            }
        }
        let l = PolyLoop { vertices };
        l.check_simple()?;
        Ok(l)
    }

    fn check_simple(&self) -> Result<(), LoopError> {
        let n = self.vertices.len();
        let scale = self.bbox().max.dist(self.bbox().min).max(1.0);
        let tol = 1e-12 * scale;
        let v = &self.vertices;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            // Adjacent edge folding back onto this one.
            let c = v[(i + 2) % n];
            let (u, w) = (b - a, c - b);
            if u.cross(w).norm() <= tol * u.norm() * w.norm() && u.dot(w) < 0.0 {
                return Err(LoopError::SelfIntersection(i, (i + 1) % n));
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (v[j], v[(j + 1) % n]);
                if segment_distance_raw(a, b, c, d) <= tol {
                    return Err(LoopError::SelfIntersection(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> PolyLoop {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyLoop { vertices: v }
    }

    pub fn transformed(&self, s: &Similarity) -> PolyLoop {
        PolyLoop { vertices: self.vertices.iter().map(|&p| s.apply(p)).collect() }
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::of_points(self.vertices.iter().copied())
    }

    /// Euclidean distance between the two polygons.
    pub fn distance(&self, o: &PolyLoop) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            for (c, d) in o.edges() {
                best = best.min(segment_distance_raw(a, b, c, d));
            }
        }
        best
    }

    /// Euclidean distance from a point to the polygon.
    pub fn distance_to_point(&self, p: Point3) -> f64 {
        self.edges()
            .map(|(a, b)| super::point::point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(v[i].dist(v[j]));
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_loops() {
        let p = Point3::new;
        assert!(matches!(
            PolyLoop::new(vec![p(0., 0., 0.), p(1., 0., 0.)]),
            Err(LoopError::TooFewVertices(2))
        ));
        assert!(matches!(
            PolyLoop::new(vec![p(0., 0., 0.), p(0., 0., 0.), p(1., 1., 0.)]),
            Err(LoopError::RepeatedVertex(0, 1))
        ));
        let bowtie = vec![p(0., 0., 0.), p(1., 1., 0.), p(1., 0., 0.), p(0., 1., 0.)];
        assert!(matches!(PolyLoop::new(bowtie), Err(LoopError::SelfIntersection(..))));
    }
}
