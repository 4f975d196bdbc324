use super::MapsError;
use crate::geometry::{ExactSimilarity, Point3, XPoint3};
use crate::ladder::Construction;
use crate::qfield::QSqrt2;
use crate::sequences::FoldingSequence;
use crate::verify::{Certificate, Status, Witness};
use serde::Serialize;
use std::collections::HashMap;
use std::time::Instant;

/// A rigid motion with rational translation and an integer rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub name: String,
    pub map: ExactSimilarity,
}

fn rigid(name: &str, rot: [[i64; 3]; 3], trans: [QSqrt2; 3]) -> Isometry {
    let lin = rot.map(|row| row.map(QSqrt2::from_int));
    Isometry { name: name.to_string(), map: ExactSimilarity { scale: QSqrt2::one(), lin, trans } }
}

impl Isometry {
    pub fn apply(&self, p: &XPoint3) -> XPoint3 {
        self.map.apply(p)
    }

    pub fn apply_f64(&self, p: Point3) -> Point3 {
        let f = |v: &QSqrt2| v.to_f64();
        let m = &self.map;
        let row = |i: usize| f(&m.lin[i][0]) * p.x + f(&m.lin[i][1]) * p.y + f(&m.lin[i][2]) * p.z + f(&m.trans[i]);
        Point3::new(row(0), row(1), row(2))
    }

    /// `self o other`.
    pub fn then_after(&self, other: &Isometry) -> Isometry {
        Isometry { name: format!("{} o {}", self.name, other.name), map: self.map.compose(&other.map) }
    }

    pub fn power(&self, k: u32) -> Isometry {
        let mut out = Isometry { name: format!("{}^{k}", self.name), map: ExactSimilarity::identity() };
        for _ in 0..k {
            out.map = self.map.compose(&out.map);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.map == ExactSimilarity::identity()
    }
}

fn prefix(n: usize) -> Result<FoldingSequence, MapsError> {
    Ok(FoldingSequence::new(n)?)
}

/// `iota_1(x, y, z) = (2 C_{2k,k} - x, y, -z)`, the half turn about the middle
/// vertical edge of the genus-`2k` ladder.
pub fn iota1(k: usize) -> Result<Isometry, MapsError> {
    if k == 0 {
        return Err(MapsError::Parameter("iota_1 needs k >= 1".into()));
    }
    let c = prefix(2 * k)?.prefix[k] as i64;
    Ok(rigid("iota1", [[-1, 0, 0], [0, 1, 0], [0, 0, -1]], [QSqrt2::from_int(2 * c), QSqrt2::zero(), QSqrt2::zero()]))
}

/// `iota_2(x, y, z) = (2 C_{2k+1,k} + 3/2 - x, 1 - y, z)`.
pub fn iota2(k: usize) -> Result<Isometry, MapsError> {
    if k == 0 {
        return Err(MapsError::Parameter("iota_2 needs k >= 1".into()));
    }
    let c = prefix(2 * k + 1)?.prefix[k] as i64;
    Ok(rigid("iota2", [[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [QSqrt2::frac(4 * c + 3, 2), QSqrt2::one(), QSqrt2::zero()]))
}

/// `iota_3(x, y, z) = (y + C_{k+1,k}, C_{k+1,k+1} - x, z)`, a quarter turn.
pub fn iota3(k: usize) -> Result<Isometry, MapsError> {
    if k == 0 {
        return Err(MapsError::Parameter("iota_3 needs k >= 1".into()));
    }
    let s = prefix(k + 1)?;
    let (a, b) = (s.prefix[k] as i64, s.prefix[k + 1] as i64);
    Ok(rigid("iota3", [[0, 1, 0], [-1, 0, 0], [0, 0, 1]], [QSqrt2::from_int(a), QSqrt2::from_int(b), QSqrt2::zero()]))
}

/// `iota(x, y, z) = (x, -y, -z)`.
pub fn iota() -> Isometry {
    rigid("iota", [[1, 0, 0], [0, -1, 0], [0, 0, -1]], [QSqrt2::zero(), QSqrt2::zero(), QSqrt2::zero()])
}

/// How `iota_1` permutes the copies of an even-genus construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldingReport {
    /// `image[a] = b` when `iota_1(tau_a) = tau_b` (flat indices).
    pub image: Vec<Option<usize>>,
    /// For each copy, the loop of the image copy that loop `k` lands on.
    pub loop_map: Vec<Vec<usize>>,
}

fn key(mut v: Vec<XPoint3>) -> Vec<XPoint3> {
    v.sort();
    v.dedup();
    v
}

/// Checks that `iota_1` maps the ladder onto itself and the copies onto
/// copies, matching exact vertex sets.
pub fn check_folding_invariance(c: &Construction) -> Result<(Certificate, FoldingReport), MapsError> {
    let started = Instant::now();
    let n = c.g();
    if !n.is_multiple_of(2) {
        return Err(MapsError::Parameter(format!("folding by iota_1 needs even genus, got {n}")));
    }
    let iota = iota1(n / 2)?;
    let mut cert = Certificate::new("folding-invariance", n, c.n(), !c.ladder.seq.is_admissible());
    let loops = c.ladder.exact_loops();
    let loop_keys: Vec<Vec<XPoint3>> = loops.iter().map(|l| key(l.clone())).collect();
    let ladder_ok = loops
        .iter()
        .enumerate()
        .all(|(i, l)| key(l.iter().map(|p| iota.apply(p)).collect()) == loop_keys[n - 1 - i]);

    let copy_key = |v: Vec<XPoint3>| key(v);
    let index: HashMap<Vec<XPoint3>, usize> =
        c.copies.iter().enumerate().map(|(k, t)| (copy_key(t.exact_vertices()), k)).collect();
    let mut image = Vec::with_capacity(c.copies.len());
    let mut loop_map = Vec::with_capacity(c.copies.len());
    for t in &c.copies {
        let mapped = copy_key(t.exact_vertices().iter().map(|p| iota.apply(p)).collect());
        let b = index.get(&mapped).copied();
        image.push(b);
        let mut lm = Vec::new();
        if let Some(b) = b {
            let target: Vec<Vec<XPoint3>> = (1..=n).map(|k| key(c.copies[b].exact_loop(k))).collect();
            for k in 1..=n {
                let img = key(t.exact_loop(k).iter().map(|p| iota.apply(p)).collect());
                lm.push(target.iter().position(|x| *x == img).map_or(0, |p| p + 1));
            }
        }
        loop_map.push(lm);
    }
    let unmatched = image.iter().position(Option::is_none);
    let involution = image.iter().enumerate().all(|(a, b)| b.is_some_and(|b| image[b] == Some(a)));
    let fixed = image.iter().enumerate().filter(|(a, b)| **b == Some(*a)).count();
    let loops_ok = loop_map.iter().all(|v| v.len() == n && v.iter().all(|&k| k > 0));
    let crosses = image
        .iter()
        .enumerate()
        .all(|(a, b)| b.is_some_and(|b| c.copies[b].i == n + 1 - c.copies[a].i));
    cert.stats.pairs_total = c.copies.len() as u64;
    cert.stats.pairs_checked = c.copies.len() as u64;
    cert.notes.push(format!(
        "ladder invariant: {ladder_ok}; copies matched: {}/{}; involution: {involution}; fixed copies: {fixed}; \
         loop i goes to loop {}+1-i: {crosses}; loops matched: {loops_ok}",
        image.iter().filter(|b| b.is_some()).count(),
        image.len(),
        n
    ));
    if let Some(a) = unmatched {
        let t = &c.copies[a];
        cert.witness = Some(Witness {
            first: Some((t.i, t.j)),
            second: None,
            achieved: 0.0,
            required: 0.0,
            detail: "image of this copy is not a copy".into(),
        });
    }
    cert.status = if ladder_ok && unmatched.is_none() && involution && loops_ok { Status::Pass } else { Status::Fail };
    cert.margin = Some(if cert.status.is_pass() { 0.0 } else { -1.0 });
    Ok((cert.finish(started), FoldingReport { image, loop_map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;
    use rand::{Rng, SeedableRng};

    fn random_points(count: usize) -> Vec<XPoint3> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        (0..count)
            .map(|_| {
                let mut q = || {
                    QSqrt2::new(ratio(rng.gen_range(-999..999), rng.gen_range(1..97)), ratio(rng.gen_range(-9..9), rng.gen_range(1..13)))
                };
                XPoint3::new(q(), q(), q())
            })
            .collect()
    }

    #[test]
    fn printed_values() {
        let p = XPoint3::new(QSqrt2::zero(), QSqrt2::zero(), QSqrt2::zero());
        let q = iota1(1).unwrap().apply(&p);
        assert_eq!(q, XPoint3::new(QSqrt2::from_int(2), QSqrt2::zero(), QSqrt2::zero()));
    }

    #[test]
    fn orders() {
        let pts = random_points(200);
        for k in 1..=3 {
            let maps = [iota1(k).unwrap(), iota2(k).unwrap(), iota()];
            for m in &maps {
                assert!(m.map.is_proper_similarity());
                assert!(m.power(2).is_identity());
                assert!(pts.iter().all(|p| m.apply(&m.apply(p)) == *p));
            }
            let i3 = iota3(k).unwrap();
            assert!(!i3.power(2).is_identity() && i3.power(4).is_identity());
        }
    }
}
