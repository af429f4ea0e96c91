//! Shared test oracles: breadth-first rewriting over the Artin relations,
//! exhaustive word enumeration, and a normal-equations least-squares solver.
//! Everything here is independent of the library's implementation paths.

#![allow(dead_code)]

use ckex_core::words::{Letter, Word};
use std::collections::{HashSet, VecDeque};

/// Letters as compact signed integers for oracle state sets.
pub fn pack(word: &Word) -> Vec<i8> {
    word.letters()
        .iter()
        .map(|l| l.index() as i8 * l.sign())
        .collect()
}

pub fn unpack(packed: &[i8], alphabet: u32) -> Word {
    let letters = packed
        .iter()
        .map(|&v| Letter::new(v.unsigned_abs() as u32, v.signum()))
        .collect();
    Word::from_letters(letters, alphabet).expect("packed letters in range")
}

/// All single applications of a defining relation to `w`, as signed-letter
/// vectors. Length-preserving: far commutation with any signs, and the braid
/// relation on same-sign triples.
pub fn relation_neighbors(packed: &[i8]) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for i in 0..packed.len() {
        // Commutation σ_a^s σ_b^t = σ_b^t σ_a^s when |a - b| >= 2.
        if i + 1 < packed.len() {
            let (a, b) = (packed[i], packed[i + 1]);
            if (a.abs() - b.abs()).abs() >= 2 {
                let mut next = packed.to_vec();
                next.swap(i, i + 1);
                out.push(next);
            }
        }
        // Braid relation σ_a σ_b σ_a = σ_b σ_a σ_b for |a - b| = 1,
        // including the all-inverse variant.
        if i + 2 < packed.len() {
            let (a, b, c) = (packed[i], packed[i + 1], packed[i + 2]);
            if a == c && (a.abs() - b.abs()).abs() == 1 && a.signum() == b.signum() {
                let mut next = packed.to_vec();
                next[i] = b;
                next[i + 1] = a;
                next[i + 2] = b;
                out.push(next);
            }
        }
    }
    out
}

/// Words reachable from `w` by at most `depth` defining-relation rewrites.
pub fn rewrite_ball(word: &Word, depth: usize) -> Vec<Word> {
    let start = pack(word);
    let mut seen: HashSet<Vec<i8>> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for state in &frontier {
            for neighbor in relation_neighbors(state) {
                if seen.insert(neighbor.clone()) {
                    next_frontier.push(neighbor);
                }
            }
        }
        frontier = next_frontier;
    }
    seen.into_iter()
        .map(|p| unpack(&p, word.alphabet_size()))
        .collect()
}

/// Breadth-first word-problem oracle: are `u` and `v` equal in the braid
/// group? Moves are defining-relation rewrites, free cancellations, and
/// cancelling-pair insertions bounded by `max_len`. Complete for small
/// inputs; used to cross-check the Garside machinery on an independent path.
pub fn bfs_equal(alphabet: u32, u: &Word, v: &Word, max_len: usize) -> bool {
    let start = pack(&u.free_reduce());
    let goal = pack(&v.free_reduce());
    if start == goal {
        return true;
    }
    let mut seen: HashSet<Vec<i8>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let letters: Vec<i8> = (1..=alphabet as i8).flat_map(|g| [g, -g]).collect();
    while let Some(state) = queue.pop_front() {
        let mut moves = relation_neighbors(&state);
        // Free cancellations.
        for i in 0..state.len().saturating_sub(1) {
            if state[i] == -state[i + 1] {
                let mut next = state.clone();
                next.drain(i..i + 2);
                moves.push(next);
            }
        }
        // Cancelling-pair insertions up to the length bound.
        if state.len() + 2 <= max_len {
            for i in 0..=state.len() {
                for &g in &letters {
                    let mut next = state.clone();
                    next.splice(i..i, [g, -g]);
                    moves.push(next);
                }
            }
        }
        for next in moves {
            if next == goal {
                return true;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Enumerate every signed word of exactly `len` letters over `alphabet`
/// generators, in odometer order. Slot `2i` is `g(i+1)`, slot `2i+1` its
/// inverse.
pub struct WordEnumerator {
    alphabet: u32,
    len: usize,
    slots: Vec<usize>,
    done: bool,
}

impl WordEnumerator {
    pub fn new(alphabet: u32, len: usize) -> Self {
        WordEnumerator {
            alphabet,
            len,
            slots: vec![0; len],
            done: false,
        }
    }

    pub fn count(alphabet: u32, len: usize) -> u64 {
        (2 * alphabet as u64).pow(len as u32)
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let letters: Vec<Letter> = self
            .slots
            .iter()
            .map(|&s| Letter::new((s / 2 + 1) as u32, if s % 2 == 0 { 1 } else { -1 }))
            .collect();
        let word = Word::from_letters(letters, self.alphabet).expect("in range");
        // Advance the odometer.
        let base = 2 * self.alphabet as usize;
        let mut i = self.len;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.slots[i] += 1;
            if self.slots[i] < base {
                break;
            }
            self.slots[i] = 0;
        }
        Some(word)
    }
}

/// Rank of a word inside the exact-length enumeration order; inverse of the
/// enumerator, used to index dense class tables.
pub fn word_rank(word: &Word, alphabet: u32) -> usize {
    let base = 2 * alphabet as usize;
    let mut rank = 0usize;
    for l in word.letters() {
        let slot = (l.index() as usize - 1) * 2 + usize::from(l.sign() < 0);
        rank = rank * base + slot;
    }
    rank
}

/// Independent least-squares oracle: normal equations solved by Gaussian
/// elimination with partial pivoting.
pub fn normal_equations_fit(points: &[(f64, f64)], degree: usize) -> Vec<f64> {
    let cols = degree + 1;
    let mut ata = vec![vec![0.0f64; cols]; cols];
    let mut aty = vec![0.0f64; cols];
    for &(x, y) in points {
        let mut powers = vec![1.0f64; cols];
        for k in 1..cols {
            powers[k] = powers[k - 1] * x;
        }
        for i in 0..cols {
            aty[i] += powers[i] * y;
            for j in 0..cols {
                ata[i][j] += powers[i] * powers[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting on [AtA | Aty].
    for k in 0..cols {
        let pivot = (k..cols)
            .max_by(|&i, &j| ata[i][k].abs().total_cmp(&ata[j][k].abs()))
            .unwrap();
        ata.swap(k, pivot);
        aty.swap(k, pivot);
        for i in k + 1..cols {
            let factor = ata[i][k] / ata[k][k];
            for j in k..cols {
                ata[i][j] -= factor * ata[k][j];
            }
            aty[i] -= factor * aty[k];
        }
    }
    let mut beta = vec![0.0f64; cols];
    for k in (0..cols).rev() {
        let mut value = aty[k];
        for j in k + 1..cols {
            value -= ata[k][j] * beta[j];
        }
        beta[k] = value / ata[k][k];
    }
    beta
}
