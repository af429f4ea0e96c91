//! Garside left-normal form for the braid group `B_n`.
//!
//! A braid is stored as `Δ^inf · A_1 ⋯ A_ℓ` where `Δ` is the half twist and
//! each `A_i` is a permutation braid (a positive braid in which each pair of
//! strands crosses at most once, in bijection with permutations). Consecutive
//! factors are left-weighted, no factor is trivial or `Δ`, so two words
//! represent the same braid exactly when their normal forms coincide.
//!
//! Permutation braids are identified with their strand permutation `p`, where
//! `p(i)` is the end position of the strand starting at `i`, and a pair of
//! strands `i < j` crosses iff `p(i) > p(j)`. Prefix order is inversion-set
//! containment, which makes the lattice meet a greedy crossing-by-crossing
//! extension.

use crate::error::{Error, Result};
use crate::platform::permutation::Permutation;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GarsideNormalForm {
    n: u32,
    inf: i64,
    factors: Vec<Permutation>,
}

/// The half twist permutation `i ↦ n + 1 - i`.
fn delta_perm(n: usize) -> Permutation {
    Permutation::from_mapping(&(1..=n).rev().collect::<Vec<_>>()).expect("half twist")
}

/// Conjugation by `Δ`: `φ(A) = Δ A Δ⁻¹`, an involution on permutation braids.
fn phi(p: &Permutation) -> Permutation {
    let delta = delta_perm(p.degree());
    delta.then(p).then(&delta)
}

/// Right complement: the permutation braid with `A · ∂A = Δ`.
fn complement(p: &Permutation) -> Permutation {
    p.inverse().then(&delta_perm(p.degree()))
}

/// True when the strand pair `(i, j)`, `i < j`, crosses in `p`.
#[inline]
fn crosses(p: &Permutation, i: usize, j: usize) -> bool {
    p.apply(i) > p.apply(j)
}

/// Greatest common prefix of two permutation braids: grow greedily by any
/// crossing available in both. Each extension appends one generator, so the
/// greedy chain ends at the lattice meet.
fn meet(a: &Permutation, b: &Permutation) -> Permutation {
    let n = a.degree();
    let mut m = Permutation::identity(n);
    let mut m_inv = Permutation::identity(n);
    loop {
        let mut extended = false;
        for k in 0..n - 1 {
            // Strands currently at positions k, k+1.
            let u = m_inv.apply(k);
            let v = m_inv.apply(k + 1);
            if u < v && crosses(a, u, v) && crosses(b, u, v) {
                let s = Permutation::transposition(n, k);
                m = m.then(&s);
                m_inv = s.then(&m_inv);
                extended = true;
            }
        }
        if !extended {
            return m;
        }
    }
}

/// Starting set: generators `σ_{k+1}` (0-based `k`) that can begin the factor.
fn starting_set(p: &Permutation) -> Vec<usize> {
    (0..p.degree() - 1).filter(|&k| crosses(p, k, k + 1)).collect()
}

/// Finishing set: generators that can end the factor.
fn finishing_set(p: &Permutation) -> Vec<usize> {
    let inv = p.inverse();
    (0..p.degree() - 1)
        .filter(|&k| inv.apply(k) > inv.apply(k + 1))
        .collect()
}

/// Make the pair `(a, b)` left-weighted by moving the head of `b` into `a`.
/// Returns `None` when nothing moves.
fn left_weight_pair(a: &Permutation, b: &Permutation) -> Option<(Permutation, Permutation)> {
    let t = meet(&complement(a), b);
    if t.is_identity() {
        None
    } else {
        Some((a.then(&t), t.inverse().then(b)))
    }
}

/// Left-normalize a factor list: local pair fixes until stable, then strip
/// leading `Δ`s into the infimum and trailing identities. Scans narrow to the
/// neighborhood of the previous pass's changes, so multiplying two normal
/// forms only pays for the junction cascade.
fn normalize(mut inf: i64, mut factors: Vec<Permutation>) -> (i64, Vec<Permutation>) {
    if !factors.is_empty() {
        let n = factors[0].degree();
        let delta = delta_perm(n);
        let mut lo = 0usize;
        let mut hi = factors.len().saturating_sub(1);
        loop {
            let mut changed_lo = usize::MAX;
            let mut changed_hi = 0usize;
            for j in lo..hi.min(factors.len().saturating_sub(1)) {
                if let Some((left, right)) = left_weight_pair(&factors[j], &factors[j + 1]) {
                    factors[j] = left;
                    factors[j + 1] = right;
                    changed_lo = changed_lo.min(j);
                    changed_hi = changed_hi.max(j + 1);
                }
            }
            if changed_lo == usize::MAX {
                break;
            }
            lo = changed_lo.saturating_sub(1);
            hi = (changed_hi + 1).min(factors.len());
        }
        let mut start = 0;
        while start < factors.len() && factors[start] == delta {
            inf += 1;
            start += 1;
        }
        factors.drain(..start);
        while factors.last().is_some_and(|f| f.is_identity()) {
            factors.pop();
        }
    }
    (inf, factors)
}

impl GarsideNormalForm {
    pub fn identity(n: u32) -> Self {
        GarsideNormalForm {
            n,
            inf: 0,
            factors: Vec::new(),
        }
    }

    /// Normal form of an Artin word over `σ_1 .. σ_{n-1}`. A negative letter
    /// `σ_i⁻¹` enters as `Δ⁻¹ · (Δ σ_i⁻¹)`, which shifts every factor
    /// accumulated so far through `φ`.
    pub fn from_word(n: u32, word: &Word) -> Result<Self> {
        let strands = n as usize;
        let alphabet = n - 1;
        let delta = delta_perm(strands);
        let mut inf: i64 = 0;
        // The list held as Δ^inf · φ^parity(F_1 ⋯ F_k): each Δ⁻¹ that passes
        // the accumulated factors flips the pending parity instead of mapping
        // the whole list through φ.
        let mut parity = 0u8;
        let mut factors: Vec<Permutation> = Vec::with_capacity(word.len());
        for &letter in word.letters() {
            if letter.index() > alphabet {
                return Err(Error::LetterOutOfRange {
                    index: letter.index(),
                    alphabet_size: alphabet,
                });
            }
            let k = letter.index() as usize - 1;
            let incoming = if letter.sign() > 0 {
                Permutation::transposition(strands, k)
            } else {
                inf -= 1;
                parity ^= 1;
                delta.then(&Permutation::transposition(strands, k))
            };
            if !incoming.is_identity() {
                factors.push(if parity == 1 { phi(&incoming) } else { incoming });
            }
        }
        if parity == 1 {
            for f in &mut factors {
                *f = phi(f);
            }
        }
        let (inf, factors) = normalize(inf, factors);
        Ok(GarsideNormalForm { n, inf, factors })
    }

    pub fn strands(&self) -> u32 {
        self.n
    }

    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Group product. Delta powers of the right operand commute past the left
    /// factor list through `φ` (an involution, so only parity matters).
    pub fn mul(&self, other: &GarsideNormalForm) -> GarsideNormalForm {
        debug_assert_eq!(self.n, other.n);
        let inf = self.inf + other.inf;
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        if other.inf % 2 != 0 {
            factors.extend(self.factors.iter().map(phi));
        } else {
            factors.extend(self.factors.iter().cloned());
        }
        factors.extend(other.factors.iter().cloned());
        let (inf, factors) = normalize(inf, factors);
        GarsideNormalForm {
            n: self.n,
            inf,
            factors,
        }
    }

    /// Group inverse: `(Δ^p A_1 ⋯ A_k)⁻¹ = Δ^{-p-k} · B_1 ⋯ B_k` with
    /// `B_j = φ^{p+k-j+1}(∂A_{k+1-j})`.
    pub fn inverse(&self) -> GarsideNormalForm {
        let k = self.factors.len();
        let inf = -(self.inf + k as i64);
        let mut factors = Vec::with_capacity(k);
        for j in 1..=k {
            let base = complement(&self.factors[k - j]);
            let parity = (self.inf + k as i64 - j as i64 + 1).rem_euclid(2);
            factors.push(if parity == 1 { phi(&base) } else { base });
        }
        let (inf, factors) = normalize(inf, factors);
        GarsideNormalForm {
            n: self.n,
            inf,
            factors,
        }
    }

    /// Canonical letter count: `|inf| · ℓ(Δ) + Σ ℓ(A_i)`.
    pub fn canonical_word_len(&self) -> usize {
        let half_twist = self.n as usize * (self.n as usize - 1) / 2;
        self.inf.unsigned_abs() as usize * half_twist
            + self.factors.iter().map(|f| f.inversions()).sum::<usize>()
    }

    /// Canonical Artin word: the delta power expanded by the fixed half-twist
    /// word, then each factor by its descent word. Two equal braids always
    /// serialize identically.
    pub fn to_word(&self) -> Word {
        let strands = self.n as usize;
        let delta_word = delta_perm(strands).descent_word();
        let mut letters: Vec<Letter> = Vec::with_capacity(self.canonical_word_len());
        if self.inf > 0 {
            for _ in 0..self.inf {
                letters.extend(delta_word.iter().map(|&g| Letter::positive(g)));
            }
        } else {
            for _ in 0..(-self.inf) {
                letters.extend(delta_word.iter().rev().map(|&g| Letter::negative(g)));
            }
        }
        for factor in &self.factors {
            letters.extend(factor.descent_word().iter().map(|&g| Letter::positive(g)));
        }
        Word::from_letters(letters, self.n - 1).expect("letters in range")
    }

    /// Check the structural invariants: every factor is a proper permutation
    /// braid (neither trivial nor `Δ`) of the right degree, and each adjacent
    /// pair is left-weighted (the next factor starts only where the previous
    /// one finishes).
    pub fn validate(&self) -> std::result::Result<(), String> {
        let strands = self.n as usize;
        let delta = delta_perm(strands);
        for (i, f) in self.factors.iter().enumerate() {
            if f.degree() != strands {
                return Err(format!("factor {i} has degree {}", f.degree()));
            }
            if f.is_identity() {
                return Err(format!("factor {i} is the identity"));
            }
            if *f == delta {
                return Err(format!("factor {i} is the half twist"));
            }
        }
        for i in 0..self.factors.len().saturating_sub(1) {
            let fin = finishing_set(&self.factors[i]);
            for s in starting_set(&self.factors[i + 1]) {
                if !fin.contains(&s) {
                    return Err(format!(
                        "factors {i},{} are not left-weighted at generator {}",
                        i + 1,
                        s + 1
                    ));
                }
            }
        }
        Ok(())
    }
}
