//! Folding sequences, rectangle widths, prefix sums and the scaffold density.
//!
//! The folding sequence `a_{n,1..n}` is built by a recursion that halves `n`
//! at each step. Only one smaller index is needed per level, so the whole
//! computation is linear in `n`.

use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence length must be at least 1")]
    ZeroLength,
    #[error("entry {value} at position {index} is not in {{1, 2}}")]
    EntryOutOfRange { index: usize, value: u8 },
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("scaffold density {0} is below the figure-mode minimum of 4")]
    DensityTooSmall(u64),
}

/// Computes `(a_{n,1}, ..., a_{n,n})`.
pub fn folding_sequence(n: usize) -> Result<Vec<u8>, SequenceError> {
    if n == 0 {
        return Err(SequenceError::ZeroLength);
    }
    let mut memo = HashMap::new();
    Ok(folding_memo(n, &mut memo))
}

fn folding_memo(n: usize, memo: &mut HashMap<usize, Vec<u8>>) -> Vec<u8> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let out = if n == 1 {
        vec![1]
    } else if n.is_multiple_of(2) {
        let m = n / 2;
        let half = folding_memo(m, memo);
        // k <= m copies the prefix, k > m reflects it.
        (1..=n)
            .map(|k| if k <= m { half[k - 1] } else { half[2 * m - k] })
            .collect()
    } else {
        let m = n / 2;
        let half = folding_memo(m + 1, memo);
        (1..=n)
            .map(|k| {
                if k <= m {
                    half[k - 1]
                } else if k == m + 1 {
                    2 * half[m]
                } else {
                    half[2 * m + 1 - k]
                }
            })
            .collect()
    };
    memo.insert(n, out.clone());
    out
}

/// Maps a folding sequence to widths `c` and prefix sums `C` (with `C_0 = 0`).
pub fn widths_and_prefix_sums(a: &[u8]) -> Result<(Vec<u64>, Vec<u64>), SequenceError> {
    if a.is_empty() {
        return Err(SequenceError::ZeroLength);
    }
    let mut c = Vec::with_capacity(a.len());
    for (index, &value) in a.iter().enumerate() {
        match value {
            1 => c.push(1),
            2 => c.push(3),
            _ => return Err(SequenceError::EntryOutOfRange { index, value }),
        }
    }
    let mut prefix = Vec::with_capacity(a.len() + 1);
    prefix.push(0);
    for w in &c {
        prefix.push(prefix.last().unwrap() + w);
    }
    Ok((c, prefix))
}

/// True when `n >= 48*sqrt(2)*(cg + 6)`, decided in exact integer arithmetic.
///
/// Both sides are positive, so the test is `n^2 >= 4608 (cg+6)^2`.
pub fn meets_density_bound(n: u64, cg: u64) -> bool {
    let lhs = (n as u128) * (n as u128);
    let k = (cg + 6) as u128;
    lhs >= 4608 * k * k
}

/// `48*sqrt(2)*(cg + 6)` as a float, for display only.
pub fn density_bound(cg: u64) -> f64 {
    48.0 * std::f64::consts::SQRT_2 * (cg as f64 + 6.0)
}

/// Smallest odd perfect square meeting the density bound for genus `g`.
pub fn min_scaffold_density(g: usize) -> Result<u64, SequenceError> {
    let a = folding_sequence(g).map_err(|_| SequenceError::ZeroGenus)?;
    let (_, prefix) = widths_and_prefix_sums(&a)?;
    Ok(min_density_for_width(prefix[g]))
}

fn min_density_for_width(cg: u64) -> u64 {
    let mut s: u64 = 1;
    while !meets_density_bound(s * s, cg) {
        s += 2;
    }
    s * s
}

/// All integer data for one genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldingSequence {
    pub g: usize,
    pub a: Vec<u8>,
    pub c: Vec<u64>,
    #[serde(rename = "C")]
    pub prefix: Vec<u64>,
    #[serde(rename = "N")]
    pub n: u64,
}

impl FoldingSequence {
    /// Sequence data with the admissible density `N_g`.
    pub fn new(g: usize) -> Result<Self, SequenceError> {
        let n = min_scaffold_density(g)?;
        Self::with_density(g, n)
    }

    /// Sequence data with an explicit density (figure mode when below `N_g`).
    pub fn with_density(g: usize, n: u64) -> Result<Self, SequenceError> {
        if g == 0 {
            return Err(SequenceError::ZeroGenus);
        }
        if n < 4 {
            return Err(SequenceError::DensityTooSmall(n));
        }
        let a = folding_sequence(g)?;
        let (c, prefix) = widths_and_prefix_sums(&a)?;
        Ok(FoldingSequence { g, a, c, prefix, n })
    }

    /// `C_g`, the total width of the ladder.
    pub fn width(&self) -> u64 {
        self.prefix[self.g]
    }

    /// `C_i` for `0 <= i <= g`.
    pub fn c_sum(&self, i: usize) -> u64 {
        self.prefix[i]
    }

    /// Number of copies, `2 (C_g + g) N`.
    pub fn copy_count(&self) -> usize {
        (2 * (self.width() + self.g as u64) * self.n) as usize
    }

    /// True when `N` is an odd square meeting the density bound.
    pub fn is_admissible(&self) -> bool {
        let s = self.n.isqrt();
        s * s == self.n && self.n % 2 == 1 && meets_density_bound(self.n, self.width())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sequences() {
        assert_eq!(folding_sequence(1).unwrap(), vec![1]);
        assert_eq!(folding_sequence(5).unwrap(), vec![1, 2, 2, 2, 1]);
        assert_eq!(folding_sequence(6).unwrap(), vec![1, 2, 1, 1, 2, 1]);
        assert_eq!(folding_sequence(0), Err(SequenceError::ZeroLength));
    }

    #[test]
    fn widths() {
        let (c, p) = widths_and_prefix_sums(&[1, 2, 1, 1, 2, 1]).unwrap();
        assert_eq!(c, vec![1, 3, 1, 1, 3, 1]);
        assert_eq!(p, vec![0, 1, 4, 5, 6, 9, 10]);
        assert!(matches!(
            widths_and_prefix_sums(&[1, 3]),
            Err(SequenceError::EntryOutOfRange { index: 1, value: 3 })
        ));
    }

    #[test]
    fn densities() {
        assert_eq!(min_scaffold_density(1).unwrap(), 529);
        assert_eq!(min_scaffold_density(2).unwrap(), 625);
        assert_eq!(min_scaffold_density(3).unwrap(), 841);
        assert_eq!(min_scaffold_density(6).unwrap(), 1089);
        assert!(!meets_density_bound(729, 5));
        assert!(meets_density_bound(841, 5));
    }

    #[test]
    fn copy_count() {
        let s = FoldingSequence::new(1).unwrap();
        assert_eq!(s.copy_count(), 2116);
        assert!(s.is_admissible());
        assert!(!FoldingSequence::with_density(1, 9).unwrap().is_admissible());
    }
}
