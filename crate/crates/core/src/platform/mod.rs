//! Platform groups: the contract every protocol and attack runs against
//! (canonical forms, equality, length, generator count) and three concrete
//! platforms — free group, symmetric group, braid group with Garside
//! left-normal form.

pub mod braid;
pub mod permutation;

pub use braid::GarsideNormalForm;
pub use permutation::Permutation;

use crate::error::{Error, Result};
use crate::words::Word;
use std::fmt;
use std::str::FromStr;

/// Largest symmetric degree for which the factorial oracles stay instant.
pub const MAX_SYMMETRIC_DEGREE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Platform {
    /// Free group of the given rank; alphabet size = rank.
    Free { rank: u32 },
    /// Symmetric group `S_n` on adjacent transpositions; alphabet = n - 1.
    Symmetric { degree: u32 },
    /// Braid group `B_n` on Artin generators; alphabet = n - 1.
    Braid { strands: u32 },
}

impl Platform {
    pub fn free(rank: u32) -> Result<Self> {
        if rank < 2 {
            return Err(Error::BadRank {
                rank,
                reason: "free rank must be at least 2",
            });
        }
        Ok(Platform::Free { rank })
    }

    pub fn symmetric(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::BadRank {
                rank: degree,
                reason: "symmetric degree must be at least 2",
            });
        }
        if degree > MAX_SYMMETRIC_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                max: MAX_SYMMETRIC_DEGREE,
            });
        }
        Ok(Platform::Symmetric { degree })
    }

    pub fn braid(strands: u32) -> Result<Self> {
        if strands < 2 {
            return Err(Error::BadRank {
                rank: strands,
                reason: "braid index must be at least 2",
            });
        }
        if strands > 128 {
            return Err(Error::BadRank {
                rank: strands,
                reason: "braid index above 128 is unsupported",
            });
        }
        Ok(Platform::Braid { strands })
    }

    /// Number of generators `g1 .. gk` of this platform.
    pub fn alphabet_size(&self) -> u32 {
        match *self {
            Platform::Free { rank } => rank,
            Platform::Symmetric { degree } => degree - 1,
            Platform::Braid { strands } => strands - 1,
        }
    }

    fn check_alphabet(&self, w: &Word) -> Result<()> {
        let size = self.alphabet_size();
        for l in w.letters() {
            if l.index() > size {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    alphabet_size: size,
                });
            }
        }
        Ok(())
    }

    /// Lift a word to a platform element.
    pub fn element(&self, w: &Word) -> Result<Element> {
        self.check_alphabet(w)?;
        Ok(match *self {
            Platform::Free { rank } => {
                let mut reduced = w.free_reduce();
                if reduced.alphabet_size() != rank {
                    reduced = Word::from_letters(reduced.letters().to_vec(), rank)?;
                }
                Element::Free(reduced)
            }
            Platform::Symmetric { degree } => Element::Sym(self.permutation_of(w, degree)),
            Platform::Braid { strands } => {
                Element::Braid(GarsideNormalForm::from_word(strands, w)?)
            }
        })
    }

    pub fn identity(&self) -> Element {
        match *self {
            Platform::Free { rank } => Element::Free(Word::empty(rank)),
            Platform::Symmetric { degree } => {
                Element::Sym(Permutation::identity(degree as usize))
            }
            Platform::Braid { strands } => Element::Braid(GarsideNormalForm::identity(strands)),
        }
    }

    /// Canonical word: two inputs map to identical outputs exactly when they
    /// represent the same group element.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        Ok(self.element(w)?.to_word())
    }

    /// Word problem: do `u` and `v` represent the same element?
    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.element(u)? == self.element(v)?)
    }

    /// Canonical-form letter count — the length functional of the
    /// length-based attack and of all complexity accounting. Invariant under
    /// padding with cancelling pairs.
    pub fn word_length(&self, w: &Word) -> Result<usize> {
        Ok(self.element(w)?.canonical_len())
    }

    fn permutation_of(&self, w: &Word, degree: u32) -> Permutation {
        let n = degree as usize;
        let mut p = Permutation::identity(n);
        for l in w.letters() {
            // An adjacent transposition is its own inverse, so the sign is
            // irrelevant here.
            p = p.then(&Permutation::transposition(n, l.index() as usize - 1));
        }
        p
    }

    /// The canonical projection onto `S_n` (braid and symmetric platforms):
    /// composes one adjacent transposition per letter. A homomorphism, and a
    /// sound inequality filter: distinct images imply distinct elements.
    pub fn permutation_image(&self, w: &Word) -> Result<Permutation> {
        self.check_alphabet(w)?;
        match *self {
            Platform::Free { .. } => Err(Error::NoPermutationImage),
            Platform::Symmetric { degree } => Ok(self.permutation_of(w, degree)),
            Platform::Braid { strands } => Ok(self.permutation_of(w, strands)),
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Platform::Free { rank } => write!(f, "free:{rank}"),
            Platform::Symmetric { degree } => write!(f, "sym:{degree}"),
            Platform::Braid { strands } => write!(f, "braid:{strands}"),
        }
    }
}

impl FromStr for Platform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPlatform(s.to_string());
        let (kind, rank) = s.split_once(':').ok_or_else(bad)?;
        let rank: u32 = rank.parse().map_err(|_| bad())?;
        match kind {
            "free" => Platform::free(rank),
            "sym" => Platform::symmetric(rank),
            "braid" => Platform::braid(rank),
            _ => Err(bad()),
        }
    }
}

/// A platform group element in its canonical internal representation.
/// Protocol and attack arithmetic happens here; words are the interface
/// format. Keeping braids as factor lists avoids re-expanding canonical
/// words at every multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Free(Word),
    Sym(Permutation),
    Braid(GarsideNormalForm),
}

impl Element {
    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Free(a), Element::Free(b)) => Element::Free(a.concat(b).free_reduce()),
            (Element::Sym(a), Element::Sym(b)) => Element::Sym(a.then(b)),
            (Element::Braid(a), Element::Braid(b)) => Element::Braid(a.mul(b)),
            _ => panic!("elements from different platforms"),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Free(a) => Element::Free(a.invert()),
            Element::Sym(a) => Element::Sym(a.inverse()),
            Element::Braid(a) => Element::Braid(a.inverse()),
        }
    }

    /// `x · self · x⁻¹`.
    pub fn conjugated_by(&self, x: &Element) -> Element {
        x.mul(self).mul(&x.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Free(a) => a.is_empty(),
            Element::Sym(a) => a.is_identity(),
            Element::Braid(a) => a.is_identity(),
        }
    }

    pub fn canonical_len(&self) -> usize {
        match self {
            Element::Free(a) => a.len(),
            Element::Sym(a) => a.inversions(),
            Element::Braid(a) => a.canonical_word_len(),
        }
    }

    /// Serialize back to the canonical word.
    pub fn to_word(&self) -> Word {
        match self {
            Element::Free(a) => a.clone(),
            Element::Sym(a) => {
                let letters = a
                    .descent_word()
                    .iter()
                    .map(|&g| crate::words::Letter::positive(g))
                    .collect();
                Word::from_letters(letters, (a.degree() - 1) as u32).expect("in range")
            }
            Element::Braid(a) => a.to_word(),
        }
    }
}

/// Exact conjugacy search in the free group: `a` and `b` are conjugate iff
/// their cyclically reduced cores are cyclic rotations of one another, and a
/// witness assembles from the two cyclic conjugators plus the rotation
/// offset. Returns `None` when no conjugator exists.
pub fn free_conjugacy_search(a: &Word, b: &Word) -> Option<Word> {
    let (core_a, conj_a) = a.cyclic_reduce();
    let (core_b, conj_b) = b.cyclic_reduce();
    if core_a.len() != core_b.len() {
        return None;
    }
    let len = core_a.len();
    if len == 0 {
        // Both are the identity: every word conjugates one to the other.
        return Some(Word::empty(a.alphabet_size().max(b.alphabet_size())));
    }
    for k in 0..len {
        let rotated: Vec<_> = core_a.letters()[k..]
            .iter()
            .chain(&core_a.letters()[..k])
            .copied()
            .collect();
        if rotated == core_b.letters() {
            // core_b = u⁻¹ · core_a · u for the split core_a = u · v, so
            // b = (conj_b · u⁻¹ · conj_a⁻¹) · a · (...)⁻¹.
            let u = Word::from_letters(core_a.letters()[..k].to_vec(), core_a.alphabet_size())
                .expect("letters already validated");
            let witness = conj_b
                .concat(&u.invert())
                .concat(&conj_a.invert())
                .free_reduce();
            return Some(witness);
        }
    }
    None
}

/// Exhaustive conjugacy search in `S_n` for `n ≤ 8`: scan all `n!` candidates
/// in lexicographic order and return the first `x` with `x·a·x⁻¹ = b`.
pub fn finite_conjugacy_search(
    n: u32,
    a: &Permutation,
    b: &Permutation,
) -> Result<Option<Permutation>> {
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            max: MAX_SYMMETRIC_DEGREE,
        });
    }
    let mut mapping: Vec<usize> = (1..=n as usize).collect();
    loop {
        let x = Permutation::from_mapping(&mapping).expect("valid permutation");
        let conjugated = x.inverse().then(a).then(&x);
        if conjugated == *b {
            return Ok(Some(x));
        }
        if !next_permutation(&mut mapping) {
            return Ok(None);
        }
    }
}

/// Advance to the next permutation in lexicographic order; false at the end.
fn next_permutation(items: &mut [usize]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}
