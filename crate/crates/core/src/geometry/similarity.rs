use super::exact::XPoint3;
use super::point::Point3;
use crate::qfield::QSqrt2;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimilarityError {
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("rotation is not orthonormal (error {0:e})")]
    NotOrthonormal(f64),
    #[error("rotation has determinant {0}, expected +1")]
    NotProper(f64),
}

const ORTHO_TOL: f64 = 1e-12;

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn mat_vec(a: &Mat3, p: Point3) -> Point3 {
    let v = p.to_array();
    Point3::new(
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    )
}

fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// `p -> scale * rotation * p + translation`, with a proper rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Similarity {
    scale: f64,
    rotation: Mat3,
    translation: Point3,
}

impl Similarity {
    pub fn new(scale: f64, rotation: Mat3, translation: Point3) -> Result<Self, SimilarityError> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(SimilarityError::BadScale(scale));
        }
        let rtr = mat_mul(&transpose(&rotation), &rotation);
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((rtr[i][j] - target).abs());
            }
        }
        if err > ORTHO_TOL {
            return Err(SimilarityError::NotOrthonormal(err));
        }
        let d = det3(&rotation);
        if (d - 1.0).abs() > ORTHO_TOL {
            return Err(SimilarityError::NotProper(d));
        }
        Ok(Similarity { scale, rotation, translation })
    }

    pub fn identity() -> Self {
        Similarity { scale: 1.0, rotation: IDENTITY3, translation: Point3::ORIGIN }
    }

    pub fn scaling(s: f64) -> Result<Self, SimilarityError> {
        Self::new(s, IDENTITY3, Point3::ORIGIN)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rotation(&self) -> &Mat3 {
        &self.rotation
    }

    pub fn translation(&self) -> Point3 {
        self.translation
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        mat_vec(&self.rotation, p) * self.scale + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            scale: self.scale * other.scale,
            rotation: mat_mul(&self.rotation, &other.rotation),
            translation: self.apply(other.translation),
        }
    }

    pub fn inverse(&self) -> Similarity {
        let rt = transpose(&self.rotation);
        let inv_scale = 1.0 / self.scale;
        Similarity {
            scale: inv_scale,
            rotation: rt,
            translation: -(mat_vec(&rt, self.translation) * inv_scale),
        }
    }

    /// Largest entry-wise difference to another similarity.
    pub fn max_abs_diff(&self, o: &Similarity) -> f64 {
        let mut d = (self.scale - o.scale).abs();
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.rotation[i][j] - o.rotation[i][j]).abs());
            }
        }
        let t = self.translation - o.translation;
        d.max(t.x.abs()).max(t.y.abs()).max(t.z.abs())
    }
}

/// A similarity with entries in `Q(sqrt 2)`: `p -> lin * p + trans`.
///
/// `lin` is `scale` times a proper rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSimilarity {
    pub scale: QSqrt2,
    pub lin: [[QSqrt2; 3]; 3],
    pub trans: [QSqrt2; 3],
}

impl ExactSimilarity {
    pub fn identity() -> Self {
        let z = QSqrt2::zero;
        let o = QSqrt2::one;
        ExactSimilarity {
            scale: o(),
            lin: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]],
            trans: [z(), z(), z()],
        }
    }

    pub fn apply(&self, p: &XPoint3) -> XPoint3 {
        let c = [&p.x, &p.y, &p.z];
        let row = |i: usize| {
            let mut acc = self.trans[i].clone();
            for (k, v) in c.iter().enumerate() {
                if !self.lin[i][k].is_zero() && !v.is_zero() {
                    acc = acc + &self.lin[i][k] * v;
                }
            }
            acc
        };
        XPoint3::new(row(0), row(1), row(2))
    }

    pub fn compose(&self, other: &ExactSimilarity) -> ExactSimilarity {
        let mut lin: [[QSqrt2; 3]; 3] = Default::default();
        for (i, row) in lin.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut acc = QSqrt2::zero();
                for k in 0..3 {
                    acc = acc + &self.lin[i][k] * &other.lin[k][j];
                }
                *v = acc;
            }
        }
        let t = self.apply(&XPoint3::new(
            other.trans[0].clone(),
            other.trans[1].clone(),
            other.trans[2].clone(),
        ));
        ExactSimilarity { scale: &self.scale * &other.scale, lin, trans: [t.x, t.y, t.z] }
    }

    /// Float version, validated as a proper similarity.
    pub fn to_similarity(&self) -> Result<Similarity, SimilarityError> {
        let s = self.scale.to_f64();
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = (&self.lin[i][j] / &self.scale).to_f64();
            }
        }
        Similarity::new(
            s,
            r,
            Point3::new(self.trans[0].to_f64(), self.trans[1].to_f64(), self.trans[2].to_f64()),
        )
    }

    /// Exact check that `lin^T lin = scale^2 I` and `det(lin) > 0`.
    pub fn is_proper_similarity(&self) -> bool {
        let s2 = &self.scale * &self.scale;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = QSqrt2::zero();
                for k in 0..3 {
                    acc = acc + &self.lin[k][i] * &self.lin[k][j];
                }
                let target = if i == j { s2.clone() } else { QSqrt2::zero() };
                if acc != target {
                    return false;
                }
            }
        }
        let m = &self.lin;
        let det = &m[0][0] * &(&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * &(&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * &(&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        det.signum() > 0
    }
}
