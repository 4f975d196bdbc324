//! Anchor positions and headings along each loop.
//!
//! Positions are arc lengths from the loop's top-left corner, measured
//! clockwise in units of `1/(8N)`. Away from the junctions between loops the
//! anchors sit on a `1/N` grid and their segments alternate between slopes
//! `+1` and `-1`. Near each junction a fixed gadget of six segments per loop
//! takes over, with directions chosen so that the two chains passing through
//! the junction cross where they should and stay apart elsewhere.

use super::heading::Heading;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("genus {g} layouts need an odd density of at least 9, got {n}")]
    UnsupportedDensity { g: usize, n: u64 },
    #[error("slopes along loop {loop_index} do not alternate at arc position {pos}/8N")]
    ParityMismatch { loop_index: usize, pos: i64 },
    #[error("free run on loop {loop_index} cannot be split into unit and half steps")]
    BadRun { loop_index: usize },
}

/// Unit step along an edge, in eighths.
const U: i64 = 8;

/// Gadget flavour at a junction between two loops.
///
/// `Half` arms end half a grid step off the grid on the top edge, `Int` arms
/// end on the grid. `IntHalf` uses an `Int` arm on the left loop and a `Half`
/// arm on the right loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JunctionKind {
    Half,
    Int,
    IntHalf,
}

type Arm = Vec<(i64, Heading)>;

fn half_a() -> Arm {
    vec![(4, Heading::pyth(15, 112, 113)), (10, Heading::pyth(15, -8, 17)), (20, Heading::pyth(15, 8, 17))]
}

fn half_b() -> Arm {
    vec![(9, Heading::pyth(45, -28, 53)), (16, Heading::pyth(4, 3, 5)), (24, Heading::pyth(3, -4, 5))]
}

fn int_a() -> Arm {
    vec![(5, Heading::VERTICAL), (9, Heading::pyth(45, -28, 53)), (16, Heading::pyth(91, 60, 109))]
}

fn int_b() -> Arm {
    vec![(9, Heading::pyth(91, -60, 109)), (16, Heading::pyth(4, 3, 5)), (24, Heading::pyth(20, -21, 29))]
}

fn mirrored(arm: Arm) -> Arm {
    arm.into_iter().map(|(d, h)| (d, h.mirror_x())).collect()
}

/// Arms of one top junction in the global frame.
///
/// `a` runs left along the top edge of the left loop, `bi` down its right
/// edge, `d` right along the top edge of the right loop and `bj` down that
/// loop's left edge (the same line as `bi`).
struct Junction {
    a: Arm,
    bi: Arm,
    d: Arm,
    bj: Arm,
}

impl Junction {
    fn of(kind: JunctionKind) -> Junction {
        let (a, bi, d, bj) = match kind {
            JunctionKind::Half => (half_a(), half_b(), half_a(), half_b()),
            JunctionKind::Int => (int_a(), int_b(), int_a(), int_b()),
            JunctionKind::IntHalf => (int_a(), half_b(), half_a(), half_b()),
        };
        Junction { a, bi, d: mirrored(d), bj: mirrored(bj) }
    }
}

/// Gadgets for junctions `1..g-1`.
///
/// Loop 1 needs a `Half` arm on its right, loop `g` a `Half` arm on its
/// left, and every interior loop one arm of each kind. Alternating kinds
/// keeps the layout symmetric under reflection of the ladder when `g` is even.
pub fn junction_kinds(g: usize) -> Vec<JunctionKind> {
    (1..g)
        .map(|t| {
            if g % 2 == 1 && t == g - 1 {
                JunctionKind::IntHalf
            } else if t % 2 == 1 {
                JunctionKind::Half
            } else {
                JunctionKind::Int
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Item {
    pos: i64,
    heading: Option<Heading>,
    seed: Option<i8>,
}

enum End {
    Corner,
    Arm { elems: Arm, seed: i8 },
}

fn arm_end(elems: Arm, seed: i8) -> End {
    End::Arm { elems, seed }
}

fn ext_of(elems: &Arm) -> i64 {
    elems.iter().map(|e| e.0).max().unwrap_or(0) + U
}

fn mirror_y(arm: &Arm) -> Arm {
    arm.iter().map(|&(d, h)| (d, h.mirror_y())).collect()
}

/// Appends one edge's anchors, from `base` to `base + len`.
fn build_edge(
    loop_index: usize,
    base: i64,
    len: i64,
    start: End,
    end: End,
    extra_half: usize,
    out: &mut Vec<Item>,
) -> Result<(), LayoutError> {
    let (p0, seed0) = match &start {
        End::Corner => (U / 2, None),
        End::Arm { elems, seed } => {
            let mut e = elems.clone();
            e.sort_by_key(|x| x.0);
            for (d, h) in e {
                out.push(Item { pos: base + d, heading: Some(h), seed: None });
            }
            (ext_of(elems), Some(*seed))
        }
    };
    let (p1, seed1) = match &end {
        End::Corner => (len - U / 2, None),
        End::Arm { elems, seed } => (len - ext_of(elems), Some(*seed)),
    };
    let r = p1 - p0;
    let natural = usize::from(r.rem_euclid(U) == U / 2);
    if r < 0 || (r.rem_euclid(U) != 0 && natural == 0) {
        return Err(LayoutError::BadRun { loop_index });
    }
    let halves = natural + extra_half;
    let units = (r - (U / 2) * halves as i64) / U;
    if units < 0 || halves > 2 {
        return Err(LayoutError::BadRun { loop_index });
    }
    let gaps = units as usize + halves;
    let mid = gaps.saturating_sub(1) / 2;
    let half_at: Vec<usize> = match halves {
        0 => vec![],
        1 => vec![mid],
        _ => {
            let d = (gaps / 6).max(1);
            vec![mid - d, mid + d]
        }
    };
    let mut p = p0;
    out.push(Item { pos: base + p, heading: None, seed: seed0 });
    for k in 0..gaps {
        p += if half_at.contains(&k) { U / 2 } else { U };
        let seed = if k + 1 == gaps { seed1 } else { None };
        out.push(Item { pos: base + p, heading: None, seed });
    }
    debug_assert_eq!(p, p1);
    if let End::Arm { elems, .. } = end {
        let mut e = elems;
        e.sort_by_key(|x| std::cmp::Reverse(x.0));
        for (d, h) in e {
            out.push(Item { pos: base + len - d, heading: Some(h), seed: None });
        }
    }
    Ok(())
}

/// Fills free slots with alternating diagonals, starting from the seeds.
fn alternate(loop_index: usize, items: &mut [Item]) -> Result<(), LayoutError> {
    let n = items.len();
    // Start at a seed that opens a chain, i.e. one right after a gadget arm.
    let start = (0..n)
        .find(|&k| items[k].seed.is_some() && items[(k + n - 1) % n].heading.is_some())
        .ok_or(LayoutError::ParityMismatch { loop_index, pos: 0 })?;
    let mut cur: Option<i8> = None;
    for step in 0..n {
        let k = (start + step) % n;
        let it = &mut items[k];
        if it.heading.is_some() {
            cur = None;
            continue;
        }
        let s = match (it.seed, cur) {
            (Some(seed), Some(c)) if seed != -c => {
                return Err(LayoutError::ParityMismatch { loop_index, pos: it.pos });
            }
            (Some(seed), _) => seed,
            (None, Some(c)) => -c,
            (None, None) => return Err(LayoutError::ParityMismatch { loop_index, pos: it.pos }),
        };
        cur = Some(s);
        it.heading = Some(Heading::Diagonal(s));
    }
    Ok(())
}

/// Junction layout for genus `g >= 2`: `(position, heading)` per loop.
pub fn junction_layout(widths: &[u64], n: u64) -> Result<Vec<Vec<(i64, Heading)>>, LayoutError> {
    let g = widths.len();
    if n < 9 || n.is_multiple_of(2) {
        return Err(LayoutError::UnsupportedDensity { g, n });
    }
    let kinds = junction_kinds(g);
    let js: Vec<Junction> = kinds.iter().map(|&k| Junction::of(k)).collect();
    let nn = U * n as i64;
    let mut out = Vec::with_capacity(g);
    for t in 1..=g {
        let l = U * (widths[t - 1] * n) as i64;
        let left = (t > 1).then(|| &js[t - 2]);
        let right = (t < g).then(|| &js[t - 1]);
        let mut items = Vec::new();
        // Top, left to right.
        build_edge(
            t,
            0,
            l,
            left.map_or(End::Corner, |j| arm_end(j.d.clone(), 1)),
            right.map_or(End::Corner, |j| arm_end(j.a.clone(), -1)),
            0,
            &mut items,
        )?;
        // Right, top to bottom.
        build_edge(
            t,
            l,
            nn,
            right.map_or(End::Corner, |j| arm_end(j.bi.clone(), 1)),
            right.map_or(End::Corner, |j| arm_end(mirror_y(&j.bi), -1)),
            if t == g { 2 } else { 0 },
            &mut items,
        )?;
        // Bottom, right to left.
        build_edge(
            t,
            l + nn,
            l,
            right.map_or(End::Corner, |j| arm_end(mirror_y(&j.a), 1)),
            left.map_or(End::Corner, |j| arm_end(mirror_y(&j.d), -1)),
            0,
            &mut items,
        )?;
        // Left, bottom to top.
        build_edge(
            t,
            2 * l + nn,
            nn,
            left.map_or(End::Corner, |j| arm_end(mirror_y(&j.bj), 1)),
            left.map_or(End::Corner, |j| arm_end(j.bj.clone(), -1)),
            if t == 1 { 2 } else { 0 },
            &mut items,
        )?;
        alternate(t, &mut items)?;
        out.push(items.into_iter().map(|it| (it.pos, it.heading.unwrap())).collect());
    }
    Ok(out)
}

/// Uniform half-offset positions `(k - 1/2)/N`, `k = 1..perimeter*N`.
pub fn uniform_positions(width: u64, n: u64) -> Vec<i64> {
    let count = 2 * (width + 1) * n;
    (1..=count as i64).map(|k| U * k - U / 2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_perimeter() {
        for (widths, n) in [(vec![1, 1], 9u64), (vec![1, 3, 1], 25), (vec![1, 3, 1, 1, 3, 1], 9), (vec![1, 1], 625)] {
            let lay = junction_layout(&widths, n).unwrap();
            for (t, items) in lay.iter().enumerate() {
                assert_eq!(items.len() as u64, 2 * (widths[t] + 1) * n, "loop {}", t + 1);
                assert!(items.windows(2).all(|w| w[0].0 < w[1].0));
                assert!(items.iter().all(|it| it.1.is_valid()));
            }
        }
    }

    #[test]
    fn rejects_even_density() {
        assert!(matches!(junction_layout(&[1, 1], 10), Err(LayoutError::UnsupportedDensity { .. })));
    }
}
