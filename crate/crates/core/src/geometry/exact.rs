//! Exact points and filtered predicates over `Q(sqrt 2)`.
//!
//! Orientation tests first run in floating point with an error bound that
//! covers the rounding of the inputs. Only tests that fall inside the bound
//! are repeated exactly, so the answer is always the exact one.

use super::point::{Point3, Segment3};
use crate::qfield::QSqrt2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredicateError {
    #[error("segment endpoints must lie in the plane z = 0")]
    NotPlanar,
    #[error("non-finite coordinate")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XPoint3 {
    pub x: QSqrt2,
    pub y: QSqrt2,
    pub z: QSqrt2,
}

impl XPoint3 {
    pub fn new(x: QSqrt2, y: QSqrt2, z: QSqrt2) -> Self {
        XPoint3 { x, y, z }
    }

    /// Exact image of a float point (floats are dyadic rationals).
    pub fn from_point(p: Point3) -> Option<Self> {
        Some(XPoint3::new(
            QSqrt2::from_f64(p.x)?,
            QSqrt2::from_f64(p.y)?,
            QSqrt2::from_f64(p.z)?,
        ))
    }

    pub fn to_point(&self) -> Point3 {
        Point3::new(self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }

    pub fn sub(&self, o: &XPoint3) -> XPoint3 {
        XPoint3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn add(&self, o: &XPoint3) -> XPoint3 {
        XPoint3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

/// An exact planar point with a cached float approximation.
#[derive(Debug, Clone)]
pub struct XPoint2 {
    pub x: QSqrt2,
    pub y: QSqrt2,
    fx: f64,
    fy: f64,
}

impl XPoint2 {
    pub fn new(x: QSqrt2, y: QSqrt2) -> Self {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        XPoint2 { x, y, fx, fy }
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }
}

impl PartialEq for XPoint2 {
    fn eq(&self, o: &Self) -> bool {
        self.x == o.x && self.y == o.y
    }
}

impl Eq for XPoint2 {}

impl std::hash::Hash for XPoint2 {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.x.hash(h);
        self.y.hash(h);
    }
}

const EPS: f64 = f64::EPSILON;

/// Sign of the determinant `(b - a) x (c - a)`.
pub fn orient2d(a: &XPoint2, b: &XPoint2, c: &XPoint2) -> i8 {
    let u1 = b.fx - a.fx;
    let v1 = c.fy - a.fy;
    let u2 = b.fy - a.fy;
    let v2 = c.fx - a.fx;
    let t1 = u1 * v1;
    let t2 = u2 * v2;
    let d = t1 - t2;
    let m = [a.fx, a.fy, b.fx, b.fy, c.fx, c.fy].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Input error per coordinate is a few ulps of the largest coordinate.
    let d0 = 4.0 * EPS * m;
    let e = 3.0 * d0;
    let bound = 2.0
        * (e * (u1.abs() + v1.abs() + u2.abs() + v2.abs())
            + 2.0 * e * e
            + 2.0 * EPS * (t1.abs() + t2.abs())
            + EPS * d.abs());
    if d > bound {
        return 1;
    }
    if d < -bound {
        return -1;
    }
    orient2d_exact(a, b, c)
}

pub fn orient2d_exact(a: &XPoint2, b: &XPoint2, c: &XPoint2) -> i8 {
    let det = &(&b.x - &a.x) * &(&c.y - &a.y) - &(&b.y - &a.y) * &(&c.x - &a.x);
    det.signum()
}

fn within(lo: &QSqrt2, hi: &QSqrt2, v: &QSqrt2) -> bool {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    lo <= v && v <= hi
}

/// `c` lies on segment `[a, b]`, given that the three points are collinear.
fn on_collinear_segment(a: &XPoint2, b: &XPoint2, c: &XPoint2) -> bool {
    within(&a.x, &b.x, &c.x) && within(&a.y, &b.y, &c.y)
}

/// Exact test whether closed planar segments `[a, b]` and `[c, d]` meet.
pub fn segments_intersect_2d(a: &XPoint2, b: &XPoint2, c: &XPoint2, d: &XPoint2) -> bool {
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    let (cx, cy) = c.approx();
    let (dx, dy) = d.approx();
    // Quick reject on slightly padded float boxes.
    let pad = 1e-9 * (1.0 + ax.abs() + ay.abs() + cx.abs() + cy.abs());
    if ax.max(bx) + pad < cx.min(dx)
        || cx.max(dx) + pad < ax.min(bx)
        || ay.max(by) + pad < cy.min(dy)
        || cy.max(dy) + pad < ay.min(by)
    {
        return false;
    }
    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_collinear_segment(a, b, c))
        || (o2 == 0 && on_collinear_segment(a, b, d))
        || (o3 == 0 && on_collinear_segment(c, d, a))
        || (o4 == 0 && on_collinear_segment(c, d, b))
}

/// Exact intersection test for segments in the plane `z = 0`.
pub fn segment_intersect(s: &Segment3, t: &Segment3) -> Result<bool, PredicateError> {
    let pts = [s.p(), s.q(), t.p(), t.q()];
    if pts.iter().any(|p| p.z != 0.0) {
        return Err(PredicateError::NotPlanar);
    }
    let mut xs = Vec::with_capacity(4);
    for p in pts {
        let x = QSqrt2::from_f64(p.x).ok_or(PredicateError::NonFinite)?;
        let y = QSqrt2::from_f64(p.y).ok_or(PredicateError::NonFinite)?;
        xs.push(XPoint2::new(x, y));
    }
    Ok(segments_intersect_2d(&xs[0], &xs[1], &xs[2], &xs[3]))
}
