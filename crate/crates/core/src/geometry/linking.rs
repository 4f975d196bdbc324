//! Linking numbers of closed polygons.
//!
//! The primary method counts signed crossings of an oblique projection in
//! exact arithmetic. The Gauss double integral, summed in closed form per
//! segment pair, is an independent float check.

use super::exact::{orient2d, XPoint2, XPoint3};
use super::point::Point3;
use super::polyloop::PolyLoop;
use crate::qfield::{ratio, QSqrt2};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("the loops intersect")]
    Intersecting,
    #[error("no generic projection found after {0} directions")]
    NoGenericProjection(usize),
    #[error("crossing count {crossings} disagrees with Gauss integral {gauss:.4}")]
    OracleDisagreement { crossings: i64, gauss: f64 },
    #[error("non-finite vertex")]
    NonFinite,
}

/// Both linking computations for one pair of loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkingReport {
    pub crossings: i64,
    pub gauss: f64,
}

impl LinkingReport {
    pub fn agrees(&self) -> bool {
        (self.gauss - self.crossings as f64).abs() <= 0.25
    }
}

/// Projection directions `(a, b, 1)`, tried in order.
const DIRECTIONS: [(i64, i64, i64, i64); 8] = [
    (1, 7, 2, 11),
    (3, 13, -5, 17),
    (-2, 19, 7, 23),
    (5, 29, 3, 31),
    (-7, 37, -4, 41),
    (11, 43, 6, 47),
    (-13, 53, 9, 59),
    (17, 61, -10, 67),
];

enum Outcome {
    Sum(i64),
    Degenerate,
    Touching,
}

fn crossing_sum(a: &[XPoint3], b: &[XPoint3], da: &QSqrt2, db: &QSqrt2) -> Outcome {
    let project = |p: &XPoint3| XPoint2::new(&p.x - &(da * &p.z), &p.y - &(db * &p.z));
    let pa: Vec<XPoint2> = a.iter().map(project).collect();
    let pb: Vec<XPoint2> = b.iter().map(project).collect();
    let (na, nb) = (a.len(), b.len());
    let mut sum = 0i64;
    for i in 0..na {
        let (p0, p1) = (&pa[i], &pa[(i + 1) % na]);
        let (f0, f1) = (p0.approx(), p1.approx());
        for j in 0..nb {
            let (q0, q1) = (&pb[j], &pb[(j + 1) % nb]);
            let (g0, g1) = (q0.approx(), q1.approx());
            let pad = 1e-9;
            if f0.0.max(f1.0) + pad < g0.0.min(g1.0)
                || g0.0.max(g1.0) + pad < f0.0.min(f1.0)
                || f0.1.max(f1.1) + pad < g0.1.min(g1.1)
                || g0.1.max(g1.1) + pad < f0.1.min(f1.1)
            {
                continue;
            }
            let o1 = orient2d(p0, p1, q0);
            let o2 = orient2d(p0, p1, q1);
            let o3 = orient2d(q0, q1, p0);
            let o4 = orient2d(q0, q1, p1);
            if o1 * o2 < 0 && o3 * o4 < 0 {
                let det = |u: &XPoint2, v: &XPoint2, w: &XPoint2| {
                    &(&v.x - &u.x) * &(&w.y - &u.y) - &(&v.y - &u.y) * &(&w.x - &u.x)
                };
                let d3 = det(q0, q1, p0);
                let d4 = det(q0, q1, p1);
                let d1 = det(p0, p1, q0);
                let d2 = det(p0, p1, q1);
                let s = &d3 / &(&d3 - &d4);
                let t = &d1 / &(&d1 - &d2);
                let (za0, za1) = (&a[i].z, &a[(i + 1) % na].z);
                let (zb0, zb1) = (&b[j].z, &b[(j + 1) % nb].z);
                let za = za0 + &(&s * &(za1 - za0));
                let zb = zb0 + &(&t * &(zb1 - zb0));
                let lambda = (&za - &zb).signum();
                if lambda == 0 {
                    return Outcome::Touching;
                }
                let ua = (&p1.x - &p0.x, &p1.y - &p0.y);
                let ub = (&q1.x - &q0.x, &q1.y - &q0.y);
                let cross = (&(&ua.0 * &ub.1) - &(&ua.1 * &ub.0)).signum();
                sum += (lambda * cross) as i64;
            } else if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0)
                && super::exact::segments_intersect_2d(p0, p1, q0, q1) {
                    let (e0, e1) = (&a[i], &a[(i + 1) % na]);
                    let (h0, h1) = (&b[j], &b[(j + 1) % nb]);
                    if meets_in_3d(e0, e1, h0, h1, da, db) {
                        return Outcome::Touching;
                    }
                    return Outcome::Degenerate;
                }
        }
    }
    Outcome::Sum(sum)
}

fn cross3(u: &XPoint3, v: &XPoint3) -> XPoint3 {
    XPoint3::new(
        &(&u.y * &v.z) - &(&u.z * &v.y),
        &(&u.z * &v.x) - &(&u.x * &v.z),
        &(&u.x * &v.y) - &(&u.y * &v.x),
    )
}

fn dot3(u: &XPoint3, v: &XPoint3) -> QSqrt2 {
    &(&(&u.x * &v.x) + &(&u.y * &v.y)) + &(&u.z * &v.z)
}

/// Whether segments whose projections along `(da, db, 1)` meet also meet in space.
///
/// Coplanar segments whose plane is transverse to the projection direction
/// meet exactly when their projections do.
fn meets_in_3d(e0: &XPoint3, e1: &XPoint3, h0: &XPoint3, h1: &XPoint3, da: &QSqrt2, db: &QSqrt2) -> bool {
    let u = e1.sub(e0);
    let mut n = cross3(&u, &h0.sub(e0));
    if n.x.is_zero() && n.y.is_zero() && n.z.is_zero() {
        n = cross3(&u, &h1.sub(e0));
    }
    if n.x.is_zero() && n.y.is_zero() && n.z.is_zero() {
        // Both segments lie on one line; projections meet only if they overlap.
        return true;
    }
    if !dot3(&n, &h1.sub(e0)).is_zero() || !dot3(&n, &h0.sub(e0)).is_zero() {
        return false;
    }
    let v = XPoint3::new(da.clone(), db.clone(), QSqrt2::one());
    !dot3(&n, &v).is_zero()
}

/// Exact linking number of two disjoint closed polygons with vertices in `Q(sqrt 2)`.
///
/// Right-handed crossings count `+1`.
pub fn linking_number_exact(a: &[XPoint3], b: &[XPoint3]) -> Result<i64, LinkError> {
    for &(an, ad, bn, bd) in DIRECTIONS.iter() {
        let da = QSqrt2::from_rational(ratio(an, ad));
        let db = QSqrt2::from_rational(ratio(bn, bd));
        match crossing_sum(a, b, &da, &db) {
            Outcome::Sum(s) => {
                debug_assert!(s % 2 == 0);
                return Ok(s / 2);
            }
            Outcome::Touching => return Err(LinkError::Intersecting),
            Outcome::Degenerate => continue,
        }
    }
    Err(LinkError::NoGenericProjection(DIRECTIONS.len()))
}

fn unit(v: Point3) -> Option<Point3> {
    let n = v.norm();
    (n > 1e-300).then(|| v * (1.0 / n))
}

/// Gauss integral contribution of the segment pair `p1 -> p2`, `p3 -> p4`.
fn gauss_segment_pair(p1: Point3, p2: Point3, p3: Point3, p4: Point3) -> f64 {
    let r13 = p3 - p1;
    let r14 = p4 - p1;
    let r23 = p3 - p2;
    let r24 = p4 - p2;
    let r12 = p2 - p1;
    let r34 = p4 - p3;
    let normals = [r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)];
    let mut n = [Point3::ORIGIN; 4];
    for (k, v) in normals.iter().enumerate() {
        match unit(*v) {
            Some(u) => n[k] = u,
            None => return 0.0,
        }
    }
    let omega: f64 = (0..4).map(|k| n[k].dot(n[(k + 1) % 4]).clamp(-1.0, 1.0).asin()).sum();
    let s = r34.cross(r12).dot(r13);
    if s == 0.0 {
        return 0.0;
    }
    omega.copysign(s) / (4.0 * PI)
}

/// Gauss linking integral of two closed polygons, in closed form per edge pair.
pub fn gauss_linking(a: &[Point3], b: &[Point3]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    let mut total = 0.0;
    for i in 0..na {
        for j in 0..nb {
            total += gauss_segment_pair(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]);
        }
    }
    total
}

/// Exact crossings plus the Gauss estimate, for exact inputs.
pub fn linking_report_exact(a: &[XPoint3], b: &[XPoint3]) -> Result<LinkingReport, LinkError> {
    let crossings = linking_number_exact(a, b)?;
    let fa: Vec<Point3> = a.iter().map(XPoint3::to_point).collect();
    let fb: Vec<Point3> = b.iter().map(XPoint3::to_point).collect();
    Ok(LinkingReport { crossings, gauss: gauss_linking(&fa, &fb) })
}

/// Linking number of two disjoint polygons, cross-checked against the Gauss integral.
pub fn linking_number(a: &PolyLoop, b: &PolyLoop) -> Result<i64, LinkError> {
    if a.distance(b) <= 0.0 {
        return Err(LinkError::Intersecting);
    }
    let conv = |l: &PolyLoop| -> Result<Vec<XPoint3>, LinkError> {
        l.vertices().iter().map(|&p| XPoint3::from_point(p).ok_or(LinkError::NonFinite)).collect()
    };
    let crossings = linking_number_exact(&conv(a)?, &conv(b)?)?;
    let gauss = gauss_linking(a.vertices(), b.vertices());
    let report = LinkingReport { crossings, gauss };
    if !report.agrees() {
        return Err(LinkError::OracleDisagreement { crossings, gauss });
    }
    Ok(crossings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(center: Point3, u: Point3, v: Point3, n: usize) -> PolyLoop {
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                center + u * t.cos() + v * t.sin()
            })
            .collect();
        PolyLoop::new(pts).unwrap()
    }

    fn hopf() -> (PolyLoop, PolyLoop) {
        let a = polygon(Point3::ORIGIN, Point3::new(1., 0., 0.), Point3::new(0., 1., 0.), 16);
        let b = polygon(Point3::new(1., 0., 0.), Point3::new(1., 0., 0.), Point3::new(0., 0., 1.), 16);
        (a, b)
    }

    /// Midpoint-rule Gauss integral, independent of the closed form.
    fn quadrature(a: &PolyLoop, b: &PolyLoop, k: usize) -> f64 {
        let mut total = 0.0;
        for (p0, p1) in a.edges() {
            for (q0, q1) in b.edges() {
                let (da, db) = ((p1 - p0) * (1.0 / k as f64), (q1 - q0) * (1.0 / k as f64));
                for s in 0..k {
                    let x = p0 + da * (s as f64 + 0.5);
                    for t in 0..k {
                        let y = q0 + db * (t as f64 + 0.5);
                        let r = x - y;
                        total += r.dot(da.cross(db)) / r.norm().powi(3);
                    }
                }
            }
        }
        total / (4.0 * PI)
    }

    #[test]
    fn hopf_link() {
        let (a, b) = hopf();
        let lk = linking_number(&a, &b).unwrap();
        assert_eq!(lk.abs(), 1);
        let q = quadrature(&a, &b, 24);
        assert!((q - lk as f64).abs() < 0.05, "quadrature {q} vs {lk}");
        assert!((gauss_linking(a.vertices(), b.vertices()) - q).abs() < 0.05);
        assert_eq!(linking_number(&b, &a).unwrap(), lk);
        assert_eq!(linking_number(&a.reversed(), &b).unwrap(), -lk);
    }

    #[test]
    fn split_link() {
        let (a, _) = hopf();
        let far = polygon(Point3::new(10., 0., 0.), Point3::new(1., 0., 0.), Point3::new(0., 0., 1.), 16);
        assert_eq!(linking_number(&a, &far).unwrap(), 0);
    }

    #[test]
    fn touching_rejected() {
        let p = Point3::new;
        let a = PolyLoop::new(vec![p(0., 0., 0.), p(1., 0., 0.), p(1., 1., 0.), p(0., 1., 0.)]).unwrap();
        let b = PolyLoop::new(vec![p(1., 0., 0.), p(2., 0., 0.), p(2., 0., 1.), p(1., 0., 1.)]).unwrap();
        assert_eq!(linking_number(&a, &b), Err(LinkError::Intersecting));
        let xa: Vec<XPoint3> = a.vertices().iter().map(|&v| XPoint3::from_point(v).unwrap()).collect();
        let xb: Vec<XPoint3> = b.vertices().iter().map(|&v| XPoint3::from_point(v).unwrap()).collect();
        assert_eq!(linking_number_exact(&xa, &xb), Err(LinkError::Intersecting));
    }
}
