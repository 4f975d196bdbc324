//! The three-stage deformation that straightens the corner piece `V2`.
//!
//! The domain is the boundary of the corner quarter of the last loop's tube:
//! the cut disks `D1` and `D3`, the mitred tube wall `S4` between them and the
//! boundaries of the sub-tori sitting inside. The wall is ruled: a point is
//! `(s, theta)` on the segment joining the same angle on consecutive cut
//! curves `C1`, `C2`, `C3`, and its image is the same convex combination of
//! the curve images.

use super::MapsError;
use crate::geometry::{Point3, Similarity};
use crate::ladder::{Construction, TORUS_RADIUS};
use crate::verify::boundary_samples;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, SQRT_2};

/// Rigid pieces of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    /// `D1` and the sub-tori before the corner.
    S1,
    /// The corner sub-torus.
    S2,
    /// `D3` and the sub-tori after the corner.
    S3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SurfacePoint {
    /// `rho` in `[0, 1]` of the radius, angle `theta`.
    Disk1 { rho: f64, theta: f64 },
    Disk3 { rho: f64, theta: f64 },
    /// `s` in `[0, 2]`: `[0, 1]` runs from `C1` to `C2`, `[1, 2]` from `C2` to `C3`.
    Wall { s: f64, theta: f64 },
    /// A point on the boundary of a sub-torus.
    SubTorus { part: Part, at: Point3 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Curve {
    C1,
    C2,
    C3,
}

/// Ratio bounds `|f(p) - f(q)| / |p - q|` over sampled pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiLipschitz {
    pub lower: f64,
    pub upper: f64,
    pub pairs: usize,
    /// Pairs skipped because the points coincide.
    pub skipped: usize,
}

impl BiLipschitz {
    /// `max(upper, 1 / lower)`.
    pub fn distortion(&self) -> f64 {
        self.upper.max(1.0 / self.lower)
    }
}

/// Ratio bounds of the map `before[i] -> after[i]` on the given index pairs.
pub fn estimate_bilipschitz(before: &[Point3], after: &[Point3], pairs: &[(usize, usize)]) -> BiLipschitz {
    let (lower, upper, used) = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let d0 = before[a].dist(before[b]);
            (d0 > 1e-12).then(|| {
                let r = after[a].dist(after[b]) / d0;
                (r, r, 1usize)
            })
        })
        .reduce(|| (f64::INFINITY, 0.0, 0), |x, y| (x.0.min(y.0), x.1.max(y.1), x.2 + y.2));
    BiLipschitz { lower, upper, pairs: used, skipped: pairs.len() - used }
}

/// Half local, half global index pairs, reproducible from `seed`.
pub fn sample_pairs(len: usize, budget: usize, window: usize, seed: u64) -> Vec<(usize, usize)> {
    if len < 2 {
        return Vec::new();
    }
    let mut rng = StdRng::seed_from_u64(seed);
    (0..budget)
        .map(|k| {
            let a = rng.gen_range(0..len);
            let b = if k % 2 == 0 {
                (a + rng.gen_range(1..=window.max(1))).min(len - 1)
            } else {
                rng.gen_range(0..len)
            };
            if a == b {
                (a, (a + 1) % len)
            } else {
                (a.min(b), a.max(b))
            }
        })
        .collect()
}

fn rotate_about(p: Point3, c: (f64, f64), phi: f64) -> Point3 {
    if phi == 0.0 {
        return p;
    }
    let (s, co) = phi.sin_cos();
    let (dx, dy) = (p.x - c.0, p.y - c.1);
    Point3::new(c.0 + co * dx - s * dy, c.1 + s * dx + co * dy, p.z)
}

fn line_meet(p1: (f64, f64), q1: (f64, f64), p2: (f64, f64), q2: (f64, f64)) -> Option<(f64, f64)> {
    let d1 = (q1.0 - p1.0, q1.1 - p1.1);
    let d2 = (q2.0 - p2.0, q2.1 - p2.1);
    let den = d1.0 * d2.1 - d1.1 * d2.0;
    if den.abs() < 1e-15 {
        return None;
    }
    let u = ((p2.0 - p1.0) * d2.1 - (p2.1 - p1.1) * d2.0) / den;
    Some((p1.0 + u * d1.0, p1.1 + u * d1.1))
}

/// Deformation data for the corner of the last loop of the genus-`(k+1)` ladder.
#[derive(Debug, Clone)]
pub struct Deformation {
    pub k: usize,
    pub n: u64,
    /// `l = (13 sqrt 2 - 10) / (20 N)`.
    pub l: f64,
    pub w1: Point3,
    pub w2: Point3,
    pub w3: Point3,
    /// Centre of the second-stage rotation.
    pub w0: (f64, f64),
    /// Centre of the third-stage rotation.
    pub v0: (f64, f64),
    radius: f64,
    copies: Vec<(Part, Similarity)>,
    torus_xs: Vec<f64>,
}

/// `(x, 1 - x)` mixing, written so `s = 0` returns `a` bit for bit.
fn mix(a: Point3, b: Point3, s: f64) -> Point3 {
    if s == 0.0 {
        a
    } else if s == 1.0 {
        b
    } else {
        a * (1.0 - s) + b * s
    }
}

impl Deformation {
    /// Needs `k >= 1`; the construction density `n` sets `l` and the sub-tori.
    pub fn new(k: usize, n: u64) -> Result<Self, MapsError> {
        if k == 0 {
            return Err(MapsError::Parameter("deformation needs k >= 1".into()));
        }
        let c = Construction::build(k + 1, n).map_err(|e| MapsError::Parameter(e.to_string()))?;
        let seq = &c.ladder.seq;
        if seq.c[k] != 1 {
            return Err(MapsError::Parameter(format!("last loop of genus {} has width {}", k + 1, seq.c[k])));
        }
        let x1 = seq.prefix[k + 1] as f64;
        let (w1, w2, w3) = (Point3::new(x1 - 0.5, 1.0, 0.0), Point3::new(x1, 1.0, 0.0), Point3::new(x1, 0.5, 0.0));
        let l = (13.0 * SQRT_2 - 10.0) / (20.0 * n as f64);

        let n8 = 8 * n as i64;
        let loop_sigmas = &c.scaffold.loops[k];
        let corner = loop_sigmas
            .iter()
            .filter(|s| s.arc >= n8 / 2 && s.arc <= 3 * n8 / 2)
            .min_by_key(|s| (s.arc - n8).abs())
            .ok_or_else(|| MapsError::Parameter("no copy near the corner".into()))?;
        let mut copies = Vec::new();
        let (mut last_s1, mut first_s3) = (None, None);
        for s in loop_sigmas {
            let part = if s.arc < n8 / 2 || s.arc > 3 * n8 / 2 {
                continue;
            } else if s.arc < corner.arc {
                last_s1 = Some(s);
                Part::S1
            } else if s.arc == corner.arc {
                Part::S2
            } else {
                if first_s3.is_none() {
                    first_s3 = Some(s);
                }
                Part::S3
            };
            copies.push((part, *c.copies[c.scaffold.flat(k + 1, s.j)].map()));
        }
        let (last_s1, first_s3) = match (last_s1, first_s3) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(MapsError::Parameter("corner needs copies on both sides".into())),
        };
        let shifted = |s: &crate::ladder::Sigma, dy: f64| {
            let (p, q) = (s.p.approx(), s.q.approx());
            ((p.0, p.1 - dy), (q.0, q.1 - dy))
        };
        let (a, b) = (shifted(last_s1, 0.0), shifted(corner, l));
        let w0 = line_meet(a.0, a.1, b.0, b.1).unwrap_or(((a.0 .0 + b.0 .0) / 2.0, (a.0 .1 + b.0 .1) / 2.0));
        let (b, d) = (shifted(corner, l), shifted(first_s3, 2.0 * l));
        let v = line_meet(b.0, b.1, d.0, d.1).unwrap_or(((b.0 .0 + d.0 .0) / 2.0, (b.0 .1 + d.0 .1) / 2.0));
        let v = rotate_about(Point3::new(v.0, v.1, 0.0), w0, FRAC_PI_4);
        let torus_xs = seq.prefix.iter().map(|&x| x as f64).collect();
        Ok(Deformation { k, n, l, w1, w2, w3, w0, v0: (v.x, v.y), radius: TORUS_RADIUS, copies, torus_xs })
    }

    pub fn sub_tori(&self) -> impl Iterator<Item = Part> + '_ {
        self.copies.iter().map(|c| c.0)
    }

    fn curve_point(&self, c: Curve, theta: f64) -> Point3 {
        let (co, si) = (theta.cos(), theta.sin());
        let r = self.radius;
        match c {
            Curve::C1 => self.w1 + Point3::new(0.0, r * co, r * si),
            Curve::C2 => self.w2 + Point3::new(r * co, r * co, r * si),
            Curve::C3 => self.w3 + Point3::new(r * co, 0.0, r * si),
        }
    }

    /// Rigid motion of one part during one stage at local time `tau`.
    fn rigid(&self, stage: usize, part: Part, tau: f64, p: Point3) -> Point3 {
        match (stage, part) {
            (1, Part::S2) => p + Point3::new(0.0, -self.l * tau, 0.0),
            (1, Part::S3) => p + Point3::new(0.0, -2.0 * self.l * tau, 0.0),
            (2, Part::S2 | Part::S3) => rotate_about(p, self.w0, tau * FRAC_PI_4),
            (3, Part::S3) => rotate_about(p, self.v0, tau * FRAC_PI_4),
            _ => p,
        }
    }

    /// Centre of `C2` after stage 2.
    fn w2_second(&self) -> Point3 {
        rotate_about(self.w2, self.w0, FRAC_PI_4)
    }

    /// Image of the point at angle `theta` of curve `c` after the stages in `times`.
    fn curve_image(&self, c: Curve, theta: f64, times: &[f64]) -> Point3 {
        let mut p = self.curve_point(c, theta);
        for (idx, &tau) in times.iter().enumerate() {
            let stage = idx + 1;
            p = match c {
                Curve::C1 => self.rigid(stage, Part::S1, tau, p),
                Curve::C3 => self.rigid(stage, Part::S3, tau, p),
                Curve::C2 => match stage {
                    1 => p,
                    2 => {
                        // Ellipse to circle: the major semi-axis r sqrt 2 shrinks to r.
                        let (a, big) = (1.0 / SQRT_2, self.radius * SQRT_2);
                        let m = big * (1.0 - tau + a * tau) * theta.cos() / SQRT_2;
                        let e = self.w2 + Point3::new(m, m, self.radius * theta.sin());
                        rotate_about(e, self.w0, tau * FRAC_PI_4)
                    }
                    _ => {
                        let c2 = self.w2_second();
                        p + (rotate_about(c2, self.v0, tau * FRAC_PI_4) - c2)
                    }
                },
            };
        }
        p
    }

    /// Local stage times for global time `t`: stages not yet started are omitted.
    fn stage_times(t: f64) -> Result<Vec<f64>, MapsError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(MapsError::TimeOutOfRange(t));
        }
        Ok(if t <= 1.0 / 3.0 {
            vec![3.0 * t]
        } else if t <= 2.0 / 3.0 {
            vec![1.0, 3.0 * t - 1.0]
        } else {
            vec![1.0, 1.0, 3.0 * t - 2.0]
        })
    }

    fn apply_times(&self, p: &SurfacePoint, times: &[f64]) -> Point3 {
        let r = self.radius;
        match *p {
            SurfacePoint::Disk1 { rho, theta } => {
                let q = self.w1 + Point3::new(0.0, r * rho * theta.cos(), r * rho * theta.sin());
                self.rigid_all(Part::S1, q, times)
            }
            SurfacePoint::Disk3 { rho, theta } => {
                let q = self.w3 + Point3::new(r * rho * theta.cos(), 0.0, r * rho * theta.sin());
                self.rigid_all(Part::S3, q, times)
            }
            SurfacePoint::Wall { s, theta } => {
                let (a, b, u) = if s <= 1.0 { (Curve::C1, Curve::C2, s) } else { (Curve::C2, Curve::C3, s - 1.0) };
                mix(self.curve_image(a, theta, times), self.curve_image(b, theta, times), u)
            }
            SurfacePoint::SubTorus { part, at } => self.rigid_all(part, at, times),
        }
    }

    fn rigid_all(&self, part: Part, p: Point3, times: &[f64]) -> Point3 {
        times.iter().enumerate().fold(p, |q, (idx, &tau)| self.rigid(idx + 1, part, tau, q))
    }

    /// Position of a domain point before deformation.
    pub fn position(&self, p: &SurfacePoint) -> Point3 {
        self.apply_times(p, &[])
    }

    /// `H_t(p)`: stage one on `[0, 1/3]`, stage two on `[1/3, 2/3]`, stage three after.
    pub fn eval(&self, p: &SurfacePoint, t: f64) -> Result<Point3, MapsError> {
        Ok(self.apply_times(p, &Self::stage_times(t)?))
    }

    /// Image of one stage alone at local time `tau`, applied after the earlier stages in full.
    pub fn eval_stage(&self, p: &SurfacePoint, stage: usize, tau: f64) -> Result<Point3, MapsError> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(MapsError::TimeOutOfRange(tau));
        }
        if !(1..=3).contains(&stage) {
            return Err(MapsError::Parameter(format!("stage {stage} not in 1..=3")));
        }
        let mut times = vec![1.0; stage - 1];
        times.push(tau);
        Ok(self.apply_times(p, &times))
    }

    /// Stratified samples: cut disks, the wall including its three cut
    /// curves, and every sub-torus boundary at spacing about `copy_eps`.
    pub fn samples(&self, angles: usize, steps: usize, copy_eps: f64) -> Vec<SurfacePoint> {
        let angles = angles.max(4);
        let steps = steps.max(2);
        let theta = |a: usize| std::f64::consts::TAU * a as f64 / angles as f64;
        let mut out = Vec::new();
        for b in 0..=steps {
            let rho = b as f64 / steps as f64;
            for a in 0..angles {
                out.push(SurfacePoint::Disk1 { rho, theta: theta(a) });
            }
        }
        for b in 0..=2 * steps {
            let s = b as f64 / steps as f64;
            for a in 0..angles {
                out.push(SurfacePoint::Wall { s, theta: theta(a) });
            }
        }
        for b in (0..=steps).rev() {
            let rho = b as f64 / steps as f64;
            for a in 0..angles {
                out.push(SurfacePoint::Disk3 { rho, theta: theta(a) });
            }
        }
        let base = boundary_samples(&self.torus_xs, self.radius, copy_eps);
        for (part, map) in &self.copies {
            out.extend(base.iter().map(|&p| SurfacePoint::SubTorus { part: *part, at: map.apply(p) }));
        }
        out
    }

    /// Images of all samples at time `t`, in parallel.
    pub fn images(&self, samples: &[SurfacePoint], t: f64) -> Result<Vec<Point3>, MapsError> {
        let times = Self::stage_times(t)?;
        Ok(samples.par_iter().map(|p| self.apply_times(p, &times)).collect())
    }

    /// Sup-distortion of `H_s o H_t^-1` on the sample pairs.
    pub fn relative_distortion(
        &self,
        samples: &[SurfacePoint],
        pairs: &[(usize, usize)],
        s: f64,
        t: f64,
    ) -> Result<f64, MapsError> {
        let (a, b) = (self.images(samples, t)?, self.images(samples, s)?);
        Ok(estimate_bilipschitz(&a, &b, pairs).distortion())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (Deformation, Vec<SurfacePoint>) {
        let d = Deformation::new(1, 9).unwrap();
        let s = d.samples(16, 6, 0.02);
        (d, s)
    }

    #[test]
    fn starts_at_identity() {
        let (d, s) = small();
        for p in &s {
            assert_eq!(d.eval(p, 0.0).unwrap(), d.position(p));
        }
        assert!(d.eval(&s[0], 1.5).is_err());
    }

    #[test]
    fn ellipse_becomes_circle() {
        let (d, _) = small();
        let p = SurfacePoint::Wall { s: 1.0, theta: 0.0 };
        let q = d.eval_stage(&p, 2, 1.0).unwrap();
        let centre = d.w2_second();
        assert!((q.dist(centre) - TORUS_RADIUS).abs() < 1e-14);
        let top = d.eval_stage(&SurfacePoint::Wall { s: 1.0, theta: std::f64::consts::FRAC_PI_2 }, 2, 1.0).unwrap();
        assert!((top.dist(centre) - TORUS_RADIUS).abs() < 1e-14);
    }

    #[test]
    fn first_stage_shifts() {
        let (d, s) = small();
        for p in &s {
            let shift = d.eval(p, 1.0 / 3.0).unwrap() - d.position(p);
            match p {
                SurfacePoint::SubTorus { part: Part::S2, .. } => assert!((shift.y + d.l).abs() < 1e-15),
                SurfacePoint::SubTorus { part: Part::S3, .. } | SurfacePoint::Disk3 { .. } => {
                    assert!((shift.y + 2.0 * d.l).abs() < 1e-15 && shift.x == 0.0)
                }
                SurfacePoint::SubTorus { part: Part::S1, .. } | SurfacePoint::Disk1 { .. } => {
                    assert_eq!(shift.norm(), 0.0)
                }
                SurfacePoint::Wall { .. } => {}
            }
        }
    }

    #[test]
    fn stages_join_continuously() {
        let (d, s) = small();
        for p in s.iter().step_by(7) {
            for t in [1.0 / 3.0, 2.0 / 3.0] {
                let a = d.eval(p, t).unwrap();
                let b = d.eval(p, t + 1e-9).unwrap();
                assert!(a.dist(b) < 1e-8);
            }
        }
    }
}
