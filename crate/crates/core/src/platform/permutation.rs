//! Permutations of `{1..n}`, stored 0-based. They serve both as the
//! symmetric-group platform elements and as the permutation-braid factors of
//! the Garside normal form.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // map[i] = image of position i, 0-based.
    map: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize + 1);
        Permutation {
            map: (0..n as u8).collect(),
        }
    }

    /// Build from a 1-based mapping of `{1..n}`; rejects non-bijections.
    pub fn from_mapping(one_based: &[usize]) -> Result<Self> {
        let n = one_based.len();
        let mut map = vec![0u8; n];
        let mut seen = vec![false; n];
        for (i, &v) in one_based.iter().enumerate() {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::InvalidConfig(format!(
                    "mapping {one_based:?} is not a bijection of 1..={n}"
                )));
            }
            seen[v - 1] = true;
            map[i] = (v - 1) as u8;
        }
        Ok(Permutation { map })
    }

    /// The adjacent transposition swapping 0-based positions `k` and `k+1`.
    pub fn transposition(n: usize, k: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.map.swap(k, k + 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    /// Apply `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), next.degree());
        Permutation {
            map: self.map.iter().map(|&i| next.map[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0u8; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v as usize] = i as u8;
        }
        Permutation { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Number of inversions, i.e. the length of the permutation braid.
    pub fn inversions(&self) -> usize {
        let n = self.map.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.map[i] > self.map[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// 1-based mapping, for display and serialization.
    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v as usize + 1).collect()
    }

    /// Canonical reduced word for the permutation braid: repeatedly peel the
    /// smallest generator `σ_j` such that the strands ending at positions
    /// `j, j+1` have crossed, emitting letters right to left. The result has
    /// exactly `inversions()` letters and composes back to `self`.
    pub fn descent_word(&self) -> Vec<u32> {
        let mut perm = self.map.clone();
        let mut inv = self.inverse().map;
        let mut reversed = Vec::with_capacity(self.inversions());
        loop {
            let mut found = None;
            for j in 0..perm.len().saturating_sub(1) {
                if inv[j] > inv[j + 1] {
                    found = Some(j);
                    break;
                }
            }
            let Some(j) = found else { break };
            reversed.push((j + 1) as u32);
            // Multiply by the transposition of values j, j+1 on the left:
            // swap where those values sit.
            let (pj, pj1) = (inv[j] as usize, inv[j + 1] as usize);
            perm.swap(pj, pj1);
            inv.swap(j, j + 1);
        }
        reversed.reverse();
        reversed
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.one_based().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
