use super::MapsError;
use crate::qfield::QSqrt2;
use crate::sequences::FoldingSequence;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2, TAU};

/// A point in cylindrical coordinates about the `z`-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cylindrical {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

impl Cylindrical {
    pub fn to_cartesian(self) -> crate::geometry::Point3 {
        crate::geometry::Point3::new(self.r * self.theta.cos(), self.r * self.theta.sin(), self.z)
    }
}

/// `(r, theta, z) -> (r, 2 N theta, z)`, angle reduced to `[0, 2 pi)`.
pub fn winding_map(p: Cylindrical, n: u64) -> Cylindrical {
    // Reduce before multiplying so large N does not amplify rounding.
    let period = PI / n as f64;
    let t = p.theta.rem_euclid(period);
    Cylindrical { r: p.r, theta: (2.0 * n as f64 * t).rem_euclid(TAU), z: p.z }
}

fn ceil_log2(g: usize) -> u32 {
    g.next_power_of_two().trailing_zeros()
}

/// `2^(ceil(log2 g) + 2) N`, the degree of the branched cover.
pub fn degree(g: usize, n: u64) -> Result<BigUint, MapsError> {
    if g == 0 || n == 0 {
        return Err(MapsError::Parameter("degree needs g >= 1 and N >= 1".into()));
    }
    Ok(BigUint::from(n) << (ceil_log2(g) + 2))
}

/// `base ^ exponent` with an exponent in `Q(sqrt 2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Power {
    pub base: u64,
    pub exponent: QSqrt2,
}

impl Power {
    /// Exact value when the exponent is a non-negative integer.
    pub fn exact(&self) -> Option<BigUint> {
        if !self.exponent.is_rational() {
            return None;
        }
        let e = self.exponent.rational_part();
        if !e.is_integer() || e.numer().sign() == num_bigint::Sign::Minus {
            return None;
        }
        let e = e.to_integer().to_u32()?;
        Some(BigUint::from(self.base).pow(e))
    }

    pub fn log2(&self) -> f64 {
        self.exponent.to_f64() * (self.base as f64).log2()
    }

    pub fn to_f64(&self) -> f64 {
        self.log2().exp2()
    }
}

impl std::fmt::Display for Power {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^({})", self.base, self.exponent)
    }
}

fn half_power_of_two(e: u32) -> QSqrt2 {
    // 2^(e/2)
    let whole = QSqrt2::from_int(1 << (e / 2));
    if e.is_multiple_of(2) {
        whole
    } else {
        &whole * &QSqrt2::sqrt2()
    }
}

/// `R = (4 C_{g,g})^(2 sqrt(N) 2^(ceil(log2 g) / 2))` for an odd square `N`.
pub fn escape_radius(g: usize, n: u64) -> Result<Power, MapsError> {
    let s = n.isqrt();
    if s * s != n {
        return Err(MapsError::Parameter(format!("escape radius needs a perfect square N, got {n}")));
    }
    let seq = FoldingSequence::with_density(g, n.max(4))?;
    let base = 4 * seq.width();
    let exponent = &QSqrt2::from_int(2 * s as i64) * &half_power_of_two(ceil_log2(g));
    Ok(Power { base, exponent })
}

/// `r^(2^(n/2) d)`, the radius of the image of the ball of radius `r`.
pub fn power_radius(r: u64, n: u32, d: u64) -> Result<Power, MapsError> {
    if d == 0 {
        return Err(MapsError::Parameter("power map degree must be positive".into()));
    }
    Ok(Power { base: r, exponent: &half_power_of_two(n) * &QSqrt2::from_int(d as i64) })
}

/// Float version of [`power_radius`] for real radii.
pub fn power_radius_f64(r: f64, n: u32, d: f64) -> f64 {
    r.powf(SQRT_2.powi(n as i32) * d)
}

/// `(g, N_g, degree)` for `g = 1..=max_g`.
pub fn degree_table(max_g: usize) -> Result<Vec<(usize, u64, BigUint)>, MapsError> {
    (1..=max_g)
        .map(|g| {
            let n = FoldingSequence::new(g)?.n;
            Ok((g, n, degree(g, n)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        assert_eq!(degree(1, 529).unwrap(), BigUint::from(2116u32));
        assert_eq!(degree(2, 625).unwrap(), BigUint::from(5000u32));
        assert_eq!(degree(3, 841).unwrap(), BigUint::from(13456u32));
        assert_eq!(power_radius(2, 2, 2).unwrap().exact(), Some(BigUint::from(16u32)));
        let r = escape_radius(1, 529).unwrap();
        assert_eq!(r.exact(), Some(BigUint::from(4u32).pow(46)));
        assert!(power_radius(2, 1, 2).unwrap().exact().is_none());
    }

    #[test]
    fn degree_doubles_with_log() {
        for k in [1usize, 2, 4, 8] {
            let (a, b) = (degree(2 * k, 961).unwrap(), degree(4 * k, 961).unwrap());
            assert_eq!(a * 2u32, b);
        }
    }

    #[test]
    fn winding_wraps() {
        let n = 529;
        for k in 0..100 {
            let theta = k as f64 * 0.0637;
            let a = winding_map(Cylindrical { r: 1.0, theta, z: 0.2 }, n).theta;
            let b = winding_map(Cylindrical { r: 1.0, theta: theta + PI / n as f64, z: 0.2 }, n).theta;
            let d = (a - b).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-9, "{a} {b}");
        }
    }
}
