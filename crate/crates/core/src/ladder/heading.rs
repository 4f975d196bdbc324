use crate::qfield::QSqrt2;
use serde::Serialize;

/// Direction of a scaffold segment in the plane.
///
/// Diagonal directions `(1, s)/sqrt(2)` give rational half-vectors.
/// Pythagorean directions `(p, q)/h` with `p^2 + q^2 = h^2` give half-vectors
/// in `sqrt(2) Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Heading {
    Diagonal(i8),
    Pythagorean { p: i64, q: i64, h: i64 },
}

/// Slope of a segment relative to the loop edge it sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeTag {
    Perpendicular,
    MinusOne,
    PlusOne,
    Oblique,
}

impl Heading {
    pub const VERTICAL: Heading = Heading::Pythagorean { p: 0, q: 1, h: 1 };
    pub const HORIZONTAL: Heading = Heading::Pythagorean { p: 1, q: 0, h: 1 };

    pub const fn pyth(p: i64, q: i64, h: i64) -> Heading {
        Heading::Pythagorean { p, q, h }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            Heading::Diagonal(s) => s == 1 || s == -1,
            Heading::Pythagorean { p, q, h } => h > 0 && p * p + q * q == h * h,
        }
    }

    /// Reflection in a vertical line.
    pub fn mirror_x(self) -> Heading {
        match self {
            Heading::Diagonal(s) => Heading::Diagonal(-s),
            Heading::Pythagorean { p, q, h } => Heading::Pythagorean { p: -p, q, h },
        }
    }

    /// Reflection in a horizontal line.
    pub fn mirror_y(self) -> Heading {
        match self {
            Heading::Diagonal(s) => Heading::Diagonal(-s),
            Heading::Pythagorean { p, q, h } => Heading::Pythagorean { p, q: -q, h },
        }
    }

    pub fn unit(&self) -> (f64, f64) {
        match *self {
            Heading::Diagonal(s) => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                (r, s as f64 * r)
            }
            Heading::Pythagorean { p, q, h } => (p as f64 / h as f64, q as f64 / h as f64),
        }
    }

    /// `scale * sqrt(2) * unit`, exactly, for a rational `scale = num/den`.
    pub fn scaled_sqrt2(&self, num: i64, den: i64) -> (QSqrt2, QSqrt2) {
        match *self {
            Heading::Diagonal(s) => (QSqrt2::frac(num, den), QSqrt2::frac(num * s as i64, den)),
            Heading::Pythagorean { p, q, h } => {
                (QSqrt2::frac_sqrt2(num * p, den * h), QSqrt2::frac_sqrt2(num * q, den * h))
            }
        }
    }

    /// Slope class relative to a horizontal (`on_horizontal`) or vertical edge.
    pub fn tag(&self, on_horizontal: bool) -> SlopeTag {
        match *self {
            Heading::Diagonal(-1) => SlopeTag::MinusOne,
            Heading::Diagonal(_) => SlopeTag::PlusOne,
            Heading::Pythagorean { p, q, .. } => {
                if (on_horizontal && p == 0) || (!on_horizontal && q == 0) {
                    SlopeTag::Perpendicular
                } else {
                    SlopeTag::Oblique
                }
            }
        }
    }
}
