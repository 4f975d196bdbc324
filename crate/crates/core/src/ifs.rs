//! The iterated function system `phi_1, ..., phi_m` generated by the ladder
//! copies, its levels and the symbolic dynamics on addresses.

use crate::geometry::{delta_point_to_polyloop, Aabb, ExactSimilarity, Point3, PolyLoop, Similarity};
use crate::ladder::{Construction, TORUS_RADIUS};
use serde::Serialize;
use std::f64::consts::SQRT_2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IfsError {
    #[error("letter {letter} outside the alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("level would have {count} components, above the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("an address needs a non-empty periodic tail")]
    EmptyTail,
    #[error("point is not in the torus (delta distance {0:.3e})")]
    OutsideTorus(f64),
    #[error("point lies in no first-level image")]
    NotInImage,
    #[error("satellite configuration: {0}")]
    Satellite(String),
}

/// A finite word over `1..=alphabet`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>, alphabet: usize) -> Result<Self, IfsError> {
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > alphabet) {
            return Err(IfsError::LetterOutOfRange { letter, alphabet });
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with its last letter removed; `None` for the empty word.
    pub fn parent(&self) -> Option<Word> {
        (!self.0.is_empty()).then(|| Word(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn child(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word(self.0.iter().chain(&o.0).copied().collect())
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// An infinite address: a finite prefix followed by a repeating tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Address {
    pub prefix: Vec<usize>,
    pub tail: Vec<usize>,
}

impl Address {
    pub fn new(prefix: Vec<usize>, tail: Vec<usize>) -> Result<Self, IfsError> {
        if tail.is_empty() {
            return Err(IfsError::EmptyTail);
        }
        Ok(Address { prefix, tail })
    }

    pub fn letter(&self, k: usize) -> usize {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.tail[(k - self.prefix.len()) % self.tail.len()]
        }
    }

    /// The first `depth` letters.
    pub fn truncate(&self, depth: usize) -> Word {
        Word((0..depth).map(|k| self.letter(k)).collect())
    }

    /// Drops the first letter.
    pub fn shift(&self) -> Address {
        if self.prefix.is_empty() {
            let mut tail = self.tail.clone();
            tail.rotate_left(1);
            Address { prefix: Vec::new(), tail }
        } else {
            Address { prefix: self.prefix[1..].to_vec(), tail: self.tail.clone() }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Torus,
    Ball,
}

/// One component `phi_w(T^g)` of a level.
#[derive(Debug, Clone, Serialize)]
pub struct LevelComponent {
    pub word: Word,
    pub map: Similarity,
    pub kind: ComponentKind,
}

impl LevelComponent {
    /// Core curves `phi_w(gamma)`.
    pub fn core(&self, ifs: &Ifs) -> Vec<PolyLoop> {
        ifs.core.iter().map(|l| l.transformed(&self.map)).collect()
    }
}

/// The maps `phi_j = psi_{i,j}` in flat `(i, j)` order.
#[derive(Debug, Clone)]
pub struct Ifs {
    maps: Vec<Similarity>,
    exact: Vec<ExactSimilarity>,
    inverses: Vec<Similarity>,
    reach: Vec<Aabb>,
    core: Vec<PolyLoop>,
    width: f64,
    alpha: f64,
}

impl Ifs {
    pub fn from_construction(c: &Construction) -> Self {
        let alpha = c.alpha();
        let grow = alpha * SQRT_2 * TORUS_RADIUS;
        let reach = c
            .copies
            .iter()
            .map(|t| {
                let b = t.bbox();
                let d = Point3::new(grow, grow, grow);
                Aabb { min: b.min - d, max: b.max + d }
            })
            .collect();
        Ifs {
            maps: c.copies.iter().map(|t| *t.map()).collect(),
            exact: c.copies.iter().map(|t| t.exact_map().clone()).collect(),
            inverses: c.copies.iter().map(|t| t.map().inverse()).collect(),
            reach,
            core: c.ladder.loops().to_vec(),
            width: c.ladder.seq.width() as f64,
            alpha,
        }
    }

    /// Number of maps `m`.
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn core(&self) -> &[PolyLoop] {
        &self.core
    }

    /// Diameter of `T^g`, attained by opposite outer corners.
    pub fn torus_diameter(&self) -> f64 {
        (self.width + 2.0 * TORUS_RADIUS).hypot(1.0 + 2.0 * TORUS_RADIUS)
    }

    pub fn map(&self, j: usize) -> Result<&Similarity, IfsError> {
        self.check(j)?;
        Ok(&self.maps[j - 1])
    }

    fn check(&self, j: usize) -> Result<(), IfsError> {
        if j == 0 || j > self.m() {
            return Err(IfsError::LetterOutOfRange { letter: j, alphabet: self.m() });
        }
        Ok(())
    }

    /// `phi_w = phi_{w_1} o ... o phi_{w_n}`; the empty word gives the identity.
    pub fn phi(&self, w: &Word) -> Result<Similarity, IfsError> {
        let mut s = Similarity::identity();
        for &j in w.letters() {
            self.check(j)?;
            s = s.compose(&self.maps[j - 1]);
        }
        Ok(s)
    }

    pub fn phi_exact(&self, w: &Word) -> Result<ExactSimilarity, IfsError> {
        let mut s = ExactSimilarity::identity();
        for &j in w.letters() {
            self.check(j)?;
            s = s.compose(&self.exact[j - 1]);
        }
        Ok(s)
    }

    /// Components of level `n`, optionally only the descendants of `prefix`,
    /// refusing to enumerate more than `cap` of them.
    pub fn level(&self, n: usize, prefix: Option<&Word>, cap: u128) -> Result<LevelIter<'_>, IfsError> {
        let prefix = prefix.cloned().unwrap_or_else(Word::empty);
        let base = self.phi(&prefix)?;
        let free = n.saturating_sub(prefix.len());
        let count = u32::try_from(free)
            .ok()
            .and_then(|e| (self.m() as u128).checked_pow(e))
            .unwrap_or(u128::MAX);
        if prefix.len() > n {
            return Ok(LevelIter { ifs: self, prefix, base, digits: Vec::new(), done: true });
        }
        if count > cap {
            return Err(IfsError::CapExceeded { count, cap });
        }
        Ok(LevelIter { ifs: self, prefix, base, digits: vec![1; free], done: false })
    }

    /// `phi_w(anchor)` with the radius `alpha^|w| diam(T^g)` that contains
    /// every attractor point whose address starts with `w`.
    pub fn point_from_address(&self, w: &Word, anchor: Point3) -> Result<(Point3, f64), IfsError> {
        let d = self.delta_to_core(anchor);
        if d > TORUS_RADIUS + 1e-12 {
            return Err(IfsError::OutsideTorus(d));
        }
        let s = self.phi(w)?;
        Ok((s.apply(anchor), self.alpha.powi(w.len() as i32) * self.torus_diameter()))
    }

    fn delta_to_core(&self, p: Point3) -> f64 {
        self.core.iter().map(|l| delta_point_to_polyloop(p, l)).fold(f64::INFINITY, f64::min)
    }

    /// The first-level image containing `p`, if any.
    pub fn locate(&self, p: Point3) -> Option<usize> {
        let pt = Aabb { min: p, max: p };
        (0..self.m()).find(|&k| {
            self.reach[k].distance(&pt) == 0.0
                && self.delta_to_core(self.inverses[k].apply(p)) <= TORUS_RADIUS + 1e-12
        })
        .map(|k| k + 1)
    }

    /// `psi_j^{-1}(p)`, the branch of the expanding map on `phi_j(T^g)`.
    pub fn expand(&self, j: usize, p: Point3) -> Result<Point3, IfsError> {
        self.check(j)?;
        Ok(self.inverses[j - 1].apply(p))
    }

    /// The expanding map on the attractor: `psi_j^{-1}` on the image `phi_j(T^g)` containing `p`.
    ///
    /// Meaningful when the images are nested in `T^g`.
    pub fn shift_point(&self, p: Point3) -> Result<(usize, Point3), IfsError> {
        let j = self.locate(p).ok_or(IfsError::NotInImage)?;
        Ok((j, self.inverses[j - 1].apply(p)))
    }

    /// An approximate fixed point of `phi_j`, by iteration from the origin.
    pub fn fixed_point(&self, j: usize) -> Result<Point3, IfsError> {
        let s = self.map(j)?;
        let mut p = Point3::ORIGIN;
        for _ in 0..200 {
            let q = s.apply(p);
            if q.dist(p) == 0.0 {
                break;
            }
            p = q;
        }
        Ok(p)
    }
}

/// Lazy enumeration of the components of one level in lexicographic order.
pub struct LevelIter<'a> {
    ifs: &'a Ifs,
    prefix: Word,
    base: Similarity,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for LevelIter<'_> {
    type Item = LevelComponent;

    fn next(&mut self) -> Option<LevelComponent> {
        if self.done {
            return None;
        }
        let mut map = self.base;
        for &j in &self.digits {
            map = map.compose(&self.ifs.maps[j - 1]);
        }
        let word = self.prefix.concat(&Word(self.digits.clone()));
        // Advance the odometer.
        let m = self.ifs.m();
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.digits[k] < m {
                self.digits[k] += 1;
                break;
            }
            self.digits[k] = 1;
        }
        Some(LevelComponent { word, map, kind: ComponentKind::Torus })
    }
}

/// Extra contracting maps added beside the torus maps, with the balls they live in.
#[derive(Debug, Clone, Serialize)]
pub struct SatelliteConfig {
    /// Ball centres `u_1..u_k`.
    pub centers: Vec<Point3>,
    /// Radius of the satellite balls and of the receiving ball's inner part.
    pub eps2: f64,
    /// Receiving ball centre `x` and outer radius.
    pub receiver: Point3,
    pub eps1: f64,
    /// `A_0` into `B(x, eps2)`, then `A_1..A_k` into `B(u_j, eps2)`.
    pub maps: Vec<Similarity>,
}

impl SatelliteConfig {
    /// One satellite below the middle of the first loop's bottom edge and a
    /// receiving ball in the middle of the first hole.
    pub fn single(ifs: &Ifs) -> Self {
        let r = TORUS_RADIUS;
        let u = Point3::new(0.5, 0.0, -0.7 * r);
        let x = Point3::new(0.5, 0.5, 0.0);
        let eps2 = 0.1 * r;
        let center = Point3::new(ifs.width / 2.0, 0.5, 0.0);
        let s = eps2 / ifs.torus_diameter();
        let into = |target: Point3| {
            Similarity::new(s, crate::geometry::IDENTITY3, target - center * s).expect("positive scale")
        };
        SatelliteConfig { centers: vec![u], eps2, receiver: x, eps1: 0.25, maps: vec![into(x), into(u)] }
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }
}

/// Torus maps followed by satellite maps `xi_1..xi_{m+k}`.
#[derive(Debug, Clone)]
pub struct SatelliteIfs {
    pub base: Ifs,
    pub config: SatelliteConfig,
    /// Smallest gap found between any two first-level images.
    pub min_gap: f64,
}

/// Checks a satellite configuration and assembles the extended system.
///
/// Images are compared through enclosing sets: a torus image lies within
/// Euclidean `alpha sqrt(2)/24` of its core, a satellite image inside its ball.
pub fn build_satellite_ifs(base: &Ifs, cfg: SatelliteConfig) -> Result<SatelliteIfs, IfsError> {
    let err = |s: String| Err(IfsError::Satellite(s));
    let k = cfg.k();
    if k == 0 || cfg.maps.len() != k + 1 {
        return err(format!("{} maps for {k} balls; expected k + 1", cfg.maps.len()));
    }
    if !(cfg.eps2 > 0.0 && cfg.eps2 < cfg.eps1 / 2.0) {
        return err(format!("need 0 < eps2 < eps1/2, got eps2 = {}, eps1 = {}", cfg.eps2, cfg.eps1));
    }
    let r = TORUS_RADIUS;
    let center = Point3::new(base.width / 2.0, 0.5, 0.0);
    let half_diam = base.torus_diameter() / 2.0;
    let fits = |a: &Similarity, c: Point3| a.apply(center).dist(c) + a.scale() * half_diam <= cfg.eps2;
    if !fits(&cfg.maps[0], cfg.receiver) {
        return err("A_0(T) is not inside B(x, eps2)".into());
    }
    if base.delta_to_core(cfg.receiver) <= r + cfg.eps1 {
        return err("B(x, eps1) meets the torus".into());
    }
    for (j, u) in cfg.centers.iter().enumerate() {
        if !fits(&cfg.maps[j + 1], *u) {
            return err(format!("A_{}(T) is not inside B(u_{}, eps2)", j + 1, j + 1));
        }
        if base.delta_to_core(*u) + cfg.eps2 > r {
            return err(format!("B(u_{}, eps2) leaves the torus", j + 1));
        }
    }
    let last = &cfg.maps[k];
    let uk = cfg.centers[k - 1];
    if last.apply(uk).dist(uk) + last.scale() * cfg.eps2 > cfg.eps2 {
        return err(format!("A_{k} does not map B(u_{k}, eps2) into itself"));
    }
    let mut min_gap = f64::INFINITY;
    for a in 0..k {
        for b in a + 1..k {
            let gap = cfg.centers[a].dist(cfg.centers[b]) - 2.0 * cfg.eps2;
            if gap <= 0.0 {
                return err(format!("balls {} and {} overlap", a + 1, b + 1));
            }
            min_gap = min_gap.min(gap);
        }
    }
    let grow = base.alpha * SQRT_2 * r;
    for (j, u) in cfg.centers.iter().enumerate() {
        for t in 0..base.m() {
            let core_dist = base.core.iter().map(|l| l.transformed(&base.maps[t]).distance_to_point(*u)).fold(f64::INFINITY, f64::min);
            let gap = core_dist - grow - cfg.eps2;
            if gap <= 0.0 {
                return err(format!("ball {} meets torus image {}", j + 1, t + 1));
            }
            min_gap = min_gap.min(gap);
        }
    }
    Ok(SatelliteIfs { base: base.clone(), config: cfg, min_gap })
}

impl SatelliteIfs {
    pub fn len(&self) -> usize {
        self.base.m() + self.config.k()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `xi_j`: torus maps first, then `A_1..A_k`.
    pub fn map(&self, j: usize) -> Result<Similarity, IfsError> {
        let m = self.base.m();
        match j {
            0 => Err(IfsError::LetterOutOfRange { letter: j, alphabet: self.len() }),
            j if j <= m => Ok(self.base.maps[j - 1]),
            j if j <= self.len() => Ok(self.config.maps[j - m]),
            _ => Err(IfsError::LetterOutOfRange { letter: j, alphabet: self.len() }),
        }
    }

    /// First level: `xi_j(T^g)` for every letter.
    pub fn level1(&self) -> Vec<LevelComponent> {
        (1..=self.len())
            .map(|j| LevelComponent {
                word: Word(vec![j]),
                map: self.map(j).expect("in range"),
                kind: ComponentKind::Torus,
            })
            .collect()
    }

    /// The alternative first level: torus images together with the satellite balls.
    pub fn alt_level1(&self) -> Vec<LevelComponent> {
        let m = self.base.m();
        let mut v: Vec<LevelComponent> = self.level1().into_iter().take(m).collect();
        for (j, u) in self.config.centers.iter().enumerate() {
            let map = Similarity::new(self.config.eps2, crate::geometry::IDENTITY3, *u).expect("positive radius");
            v.push(LevelComponent { word: Word(vec![m + j + 1]), map, kind: ComponentKind::Ball });
        }
        v
    }

    /// Local genus label: `0` when the address eventually uses only satellite
    /// letters, `g` otherwise.
    pub fn label(&self, a: &Address, g: usize) -> usize {
        if a.tail.iter().all(|&l| l > self.base.m()) {
            0
        } else {
            g
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ifs(g: usize, n: u64) -> Ifs {
        Ifs::from_construction(&Construction::build(g, n).unwrap())
    }

    #[test]
    fn words_and_addresses() {
        assert!(Word::new(vec![1, 0], 3).is_err());
        let w = Word::new(vec![1, 2, 3], 3).unwrap();
        assert_eq!(w.parent().unwrap().letters(), &[1, 2]);
        assert_eq!(Word::empty().parent(), None);
        let a = Address::new(vec![1, 2, 3], vec![4]).unwrap();
        assert_eq!(a.shift().truncate(4).letters(), &[2, 3, 4, 4]);
        let p = Address::new(vec![], vec![5, 6]).unwrap();
        assert_eq!(p.shift().truncate(3).letters(), &[6, 5, 6]);
    }

    #[test]
    fn phi_scales() {
        let f = ifs(1, 9);
        assert_eq!(f.m(), 36);
        assert_eq!(f.phi(&Word::empty()).unwrap(), Similarity::identity());
        let w = Word::new(vec![3, 17, 36], 36).unwrap();
        let e = f.phi_exact(&w).unwrap();
        let a = crate::qfield::QSqrt2::frac_sqrt2(8, 45);
        assert_eq!(e.scale, &(&a * &a) * &a);
        assert!((f.phi(&w).unwrap().scale() - f.alpha().powi(3)).abs() < 1e-15);
        assert!(f.phi(&Word(vec![37])).is_err());
    }

    #[test]
    fn levels_and_caps() {
        let f = ifs(1, 9);
        assert_eq!(f.level(0, None, 1).unwrap().count(), 1);
        assert_eq!(f.level(1, None, 100).unwrap().count(), 36);
        let p = Word(vec![1]);
        let v: Vec<_> = f.level(2, Some(&p), 100).unwrap().collect();
        assert_eq!(v.len(), 36);
        assert!(v.iter().all(|c| (c.map.scale() - f.alpha().powi(2)).abs() < 1e-15 && c.word.letters()[0] == 1));
        assert!(matches!(f.level(2, None, 100), Err(IfsError::CapExceeded { count: 1296, .. })));
    }

    #[test]
    fn expand_inverts_first_letter() {
        let f = ifs(1, 9);
        let a = Point3::new(0.5, 0.0, 0.0);
        let (p, err) = f.point_from_address(&Word(vec![5, 9, 20]), a).unwrap();
        let q = f.expand(5, p).unwrap();
        let (r, _) = f.point_from_address(&Word(vec![9, 20]), a).unwrap();
        assert!(q.dist(r) < 1e-12 && err > 0.0);
        assert!(f.point_from_address(&Word(vec![1]), Point3::new(0.5, 0.5, 0.0)).is_err());
    }

    #[test]
    fn shift_locates_nested_images() {
        let f = ifs(1, 529);
        let a = f.fixed_point(700).unwrap();
        let (p, _) = f.point_from_address(&Word(vec![700, 3, 1500]), a).unwrap();
        let (j, q) = f.shift_point(p).unwrap();
        assert_eq!(j, 700);
        let (r, _) = f.point_from_address(&Word(vec![3, 1500]), a).unwrap();
        assert!(q.dist(r) < 1e-12);
    }

    #[test]
    fn single_satellite() {
        let f = ifs(1, 529);
        let sat = build_satellite_ifs(&f, SatelliteConfig::single(&f)).unwrap();
        assert_eq!(sat.len(), 2117);
        assert!(sat.min_gap > 0.0);
        assert_eq!(sat.alt_level1().last().unwrap().kind, ComponentKind::Ball);
        assert_eq!(sat.label(&Address::new(vec![1, 2], vec![2117]).unwrap(), 1), 0);
        assert_eq!(sat.label(&Address::new(vec![2117], vec![1]).unwrap(), 1), 1);
        let mut bad = SatelliteConfig::single(&f);
        bad.eps2 = 0.2;
        assert!(build_satellite_ifs(&f, bad).is_err());
    }
}
