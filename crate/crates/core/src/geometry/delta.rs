//! The anisotropic metric `delta(p, q) = sqrt(max(dx^2, dy^2) + dz^2)`.
//!
//! Balls of `delta` are square in the xy-directions and round in z, so tubes
//! around axis-parallel planar curves have cornered cross-sections.

use super::point::Point3;
use super::polyloop::PolyLoop;

pub fn delta_metric(p: Point3, q: Point3) -> f64 {
    let dx = (p.x - q.x).abs();
    let dy = (p.y - q.y).abs();
    let dz = p.z - q.z;
    let m = dx.max(dy);
    (m * m + dz * dz).sqrt()
}

/// Minimum of `delta(p, .)` over the closed segment `[a, b]`.
///
/// The squared distance along the segment is a maximum of two convex
/// quadratics plus a third, so it is convex. Its minimum sits at an endpoint,
/// a switch point where `|dx| = |dy|`, or a stationary point of one branch.
pub fn delta_point_to_segment(p: Point3, a: Point3, b: Point3) -> f64 {
    let e = b - a;
    let r = p - a;
    // dx(t) = r.x - t e.x, etc.
    let f = |t: f64| {
        let dx = r.x - t * e.x;
        let dy = r.y - t * e.y;
        let dz = r.z - t * e.z;
        let m = dx.abs().max(dy.abs());
        m * m + dz * dz
    };
    let mut cands = [0.0, 1.0, f64::NAN, f64::NAN, f64::NAN, f64::NAN];
    // Switch points: dx = dy and dx = -dy.
    let (sa, sb) = (e.x - e.y, e.x + e.y);
    if sa != 0.0 {
        cands[2] = (r.x - r.y) / sa;
    }
    if sb != 0.0 {
        cands[3] = (r.x + r.y) / sb;
    }
    // Stationary points of dx^2 + dz^2 and dy^2 + dz^2.
    let qx = e.x * e.x + e.z * e.z;
    if qx > 0.0 {
        cands[4] = (r.x * e.x + r.z * e.z) / qx;
    }
    let qy = e.y * e.y + e.z * e.z;
    if qy > 0.0 {
        cands[5] = (r.y * e.y + r.z * e.z) / qy;
    }
    cands
        .iter()
        .filter(|t| t.is_finite())
        .map(|&t| f(t.clamp(0.0, 1.0)))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

pub fn delta_point_to_polyloop(p: Point3, l: &PolyLoop) -> f64 {
    l.edges()
        .map(|(a, b)| delta_point_to_segment(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PolyLoop {
        PolyLoop::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn metric_values() {
        assert_eq!(delta_metric(Point3::ORIGIN, Point3::new(3.0, 4.0, 0.0)), 4.0);
        assert_eq!(delta_metric(Point3::new(1.0, 1.0, 1.0), Point3::new(1.0, 1.0, 1.0)), 0.0);
        let d = delta_metric(Point3::ORIGIN, Point3::new(1.0, 2.0, 2.0));
        assert!((d - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn point_to_square() {
        let l = unit_square();
        assert_eq!(delta_point_to_polyloop(Point3::new(1.0, 1.0, 0.0), &l), 0.0);
        let d = delta_point_to_polyloop(Point3::new(0.5, 2.0, 0.0), &l);
        assert!((d - 1.0).abs() < 1e-15);
        let d = delta_point_to_polyloop(Point3::new(0.5, 0.5, 1.0), &l);
        assert!((d - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_sampling() {
        let l = unit_square();
        let pts = [
            Point3::new(0.3, 0.8, 0.2),
            Point3::new(-0.4, 1.7, -0.5),
            Point3::new(1.3, 0.45, 0.05),
        ];
        for p in pts {
            let exact = delta_point_to_polyloop(p, &l);
            let mut best = f64::INFINITY;
            for (a, b) in l.edges() {
                for k in 0..=100_000 {
                    let t = k as f64 * 1e-5;
                    best = best.min(delta_metric(p, a.lerp(b, t)));
                }
            }
            assert!(exact <= best + 1e-12);
            assert!(best - exact < 1e-4);
        }
    }
}
