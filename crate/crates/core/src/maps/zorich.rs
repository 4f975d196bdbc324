use crate::geometry::{ExactSimilarity, XPoint3};
use crate::qfield::{ratio, QSqrt2};
use crate::verify::{Certificate, Status, Witness};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn q(n: i64) -> QSqrt2 {
    QSqrt2::from_int(n)
}

fn similarity(scale: QSqrt2, lin: [[QSqrt2; 3]; 3], trans: [i64; 3]) -> ExactSimilarity {
    ExactSimilarity { scale, lin, trans: trans.map(q) }
}

/// `A(x1, x2, x3) = (x1 - x2, x1 + x2, sqrt(2) x3)`: scaling by `sqrt 2`
/// after a quarter of a right angle about the `x3`-axis.
pub fn zorich_linear_part() -> ExactSimilarity {
    similarity(QSqrt2::sqrt2(), [[q(1), q(-1), q(0)], [q(1), q(1), q(0)], [q(0), q(0), QSqrt2::sqrt2()]], [0, 0, 0])
}

/// Inverse of [`zorich_linear_part`].
pub fn zorich_linear_inverse() -> ExactSimilarity {
    let h = QSqrt2::frac(1, 2);
    let s = QSqrt2::frac_sqrt2(1, 2);
    similarity(s.clone(), [[h.clone(), h.clone(), q(0)], [-&h, h, q(0)], [q(0), q(0), s]], [0, 0, 0])
}

fn translation(v: [i64; 3]) -> ExactSimilarity {
    ExactSimilarity { trans: v.map(q), ..ExactSimilarity::identity() }
}

/// The generators `g1`, `g2` (unit translations) and `g3` (half turn about the `x3`-axis).
pub fn deck_generators() -> [ExactSimilarity; 3] {
    let g3 = similarity(q(1), [[q(-1), q(0), q(0)], [q(0), q(-1), q(0)], [q(0), q(0), q(1)]], [0, 0, 0]);
    [translation([1, 0, 0]), translation([0, 1, 0]), g3]
}

/// Checks `A g1 A^-1 = g2 g1`, `A g2 A^-1 = g2 g1^-1` and `A g3 A^-1 = g3`,
/// both as composed maps and pointwise on `samples` random rational points.
pub fn check_conjugation(samples: usize, seed: u64) -> Certificate {
    let started = Instant::now();
    let mut cert = Certificate::new("conjugation", 0, 0, false);
    let a = zorich_linear_part();
    let ai = zorich_linear_inverse();
    let [g1, g2, g3] = deck_generators();
    let g1i = translation([-1, 0, 0]);
    let cases = [
        ("A g1 A^-1 = g2 g1", g1.clone(), g2.compose(&g1)),
        ("A g2 A^-1 = g2 g1^-1", g2.clone(), g2.compose(&g1i)),
        ("A g3 A^-1 = g3", g3.clone(), g3),
    ];
    let mut rng = StdRng::seed_from_u64(seed);
    let points: Vec<XPoint3> = (0..samples)
        .map(|_| {
            let mut c = || QSqrt2::from_rational(ratio(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=997)));
            XPoint3::new(c(), c(), c())
        })
        .collect();
    let inverse_ok = a.compose(&ai) == ExactSimilarity::identity();
    let mut failures = 0usize;
    for (name, g, rhs) in &cases {
        let conj = a.compose(g).compose(&ai);
        let as_maps = conj == *rhs;
        let bad = points.iter().filter(|p| a.apply(&g.apply(&ai.apply(p))) != rhs.apply(p)).count();
        cert.notes.push(format!("{name}: maps equal {as_maps}, pointwise mismatches {bad}/{samples}"));
        if !as_maps || bad > 0 {
            failures += 1;
            if cert.witness.is_none() {
                cert.witness =
                    Some(Witness { first: None, second: None, achieved: bad as f64, required: 0.0, detail: name.to_string() });
            }
        }
    }
    cert.notes.push(format!("A A^-1 = identity: {inverse_ok}"));
    cert.stats.pairs_total = (3 * samples) as u64;
    cert.stats.pairs_checked = (3 * samples) as u64;
    cert.status = if failures == 0 && inverse_ok { Status::Pass } else { Status::Fail };
    cert.margin = Some(if failures == 0 { 0.0 } else { -(failures as f64) });
    cert.finish(started)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64, z: i64) -> XPoint3 {
        XPoint3::new(q(x), q(y), q(z))
    }

    #[test]
    fn printed_images() {
        let a = zorich_linear_part();
        assert_eq!(a.apply(&pt(1, 0, 0)), pt(1, 1, 0));
        assert_eq!(a.apply(&pt(0, 1, 0)), pt(-1, 1, 0));
        assert!(a.is_proper_similarity());
        // det = 2 sqrt(2), operator norm sqrt(2).
        let m = &a.lin;
        let det = &(&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]) * &m[2][2];
        assert_eq!(det, &q(2) * &QSqrt2::sqrt2());
        assert_eq!(a.scale, QSqrt2::sqrt2());
    }

    #[test]
    fn conjugation_holds() {
        let c = check_conjugation(200, 1);
        assert_eq!(c.status, Status::Pass, "{:?}", c.notes);
    }
}
