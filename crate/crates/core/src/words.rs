//! Free-group word algebra: signed letters, free reduction, inversion,
//! conjugation, cyclic reduction and substitution.
//!
//! Every platform group represents its elements as [`Word`]s over a finite
//! alphabet `g1 .. g<k>`. The empty word is the identity everywhere; letters
//! are `(index, sign)` pairs so inverting a word is a reverse-and-flip pass.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;

/// One signed generator occurrence. `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    index: u32,
    sign: i8,
}

impl Letter {
    pub fn new(index: u32, sign: i8) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        assert!(sign == 1 || sign == -1, "letter sign must be +1 or -1");
        Letter { index, sign }
    }

    pub fn positive(index: u32) -> Self {
        Letter::new(index, 1)
    }

    pub fn negative(index: u32) -> Self {
        Letter::new(index, -1)
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            sign: -self.sign,
        }
    }

    /// True when `self·other` cancels freely.
    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.sign != other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign > 0 {
            write!(f, "g{}", self.index)
        } else {
            write!(f, "g{}^-1", self.index)
        }
    }
}

/// A word over the alphabet `g1 .. g<alphabet_size>`. Not necessarily freely
/// reduced; [`Word::free_reduce`] produces the reduced representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u32,
}

impl Word {
    /// The identity element.
    pub fn empty(alphabet_size: u32) -> Self {
        Word {
            letters: Vec::new(),
            alphabet_size,
        }
    }

    pub fn from_letters(letters: Vec<Letter>, alphabet_size: u32) -> Result<Self> {
        for l in &letters {
            if l.index() > alphabet_size {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    alphabet_size,
                });
            }
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }

    /// The single-letter word `g<index>`.
    pub fn generator(index: u32, alphabet_size: u32) -> Result<Self> {
        Word::from_letters(vec![Letter::positive(index)], alphabet_size)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// No adjacent cancelling pair.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// The unique freely reduced word equal to `self` in the free group.
    /// Single stack pass, linear time; idempotent.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word {
            letters: stack,
            alphabet_size: self.alphabet_size,
        }
    }

    /// Reversed sequence with all signs flipped: `w · w.invert()` reduces to
    /// the empty word.
    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            alphabet_size: self.alphabet_size,
        }
    }

    /// Plain concatenation (no reduction). The result lives over the larger
    /// of the two alphabets.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
        }
    }

    /// `x · self · x⁻¹`, freely reduced.
    pub fn conjugated_by(&self, x: &Word) -> Word {
        x.concat(self).concat(&x.invert()).free_reduce()
    }

    /// Split off the cyclic conjugator: returns `(core, conjugator)` with
    /// `core` cyclically reduced and `self = conjugator · core · conjugator⁻¹`
    /// in the free group.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let reduced = self.free_reduce();
        let letters = reduced.letters;
        let mut lo = 0usize;
        let mut hi = letters.len();
        let mut conjugator = Vec::new();
        while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
            conjugator.push(letters[lo]);
            lo += 1;
            hi -= 1;
        }
        let core = Word {
            letters: letters[lo..hi].to_vec(),
            alphabet_size: self.alphabet_size,
        };
        let conjugator = Word {
            letters: conjugator,
            alphabet_size: self.alphabet_size,
        };
        (core, conjugator)
    }

    /// Replace each letter `(i, s)` by `images[i-1]` (inverted when `s < 0`)
    /// and freely reduce. The template's alphabet size must equal the number
    /// of images.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.alphabet_size as usize {
            return Err(Error::ImageCountMismatch {
                expected: self.alphabet_size as usize,
                actual: images.len(),
            });
        }
        let alphabet = images
            .iter()
            .map(|w| w.alphabet_size)
            .max()
            .unwrap_or(0);
        let mut out = Word::empty(alphabet);
        for &l in &self.letters {
            let image = &images[(l.index() - 1) as usize];
            out = if l.sign() > 0 {
                out.concat(image)
            } else {
                out.concat(&image.invert())
            };
        }
        Ok(out.free_reduce())
    }

    /// Parse the textual word format: space-separated `g<i>` / `g<i>^-1`
    /// tokens, empty string for the identity. Strict: unknown tokens and
    /// out-of-range indices are errors.
    pub fn parse(text: &str, alphabet_size: u32) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let body = token
                .strip_prefix('g')
                .ok_or_else(|| Error::BadWordToken(token.to_string()))?;
            let (digits, sign) = match body.split_once('^') {
                None => (body, 1i8),
                Some((digits, "-1")) => (digits, -1i8),
                Some(_) => return Err(Error::BadWordToken(token.to_string())),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::BadWordToken(token.to_string()));
            }
            let index: u32 = digits
                .parse()
                .map_err(|_| Error::BadWordToken(token.to_string()))?;
            if index == 0 {
                return Err(Error::BadWordToken(token.to_string()));
            }
            if index > alphabet_size {
                return Err(Error::LetterOutOfRange {
                    index,
                    alphabet_size,
                });
            }
            letters.push(Letter::new(index, sign));
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Draw a uniformly random freely reduced word of exactly `length` letters
/// whose generators come from `pool` (or the full alphabet when `pool` is
/// `None`). Equal-length words over the pool are equiprobable: the first
/// letter is uniform over the `2k` signed pool letters and each subsequent
/// letter is uniform over the `2k - 1` letters that do not cancel the
/// previous one.
pub fn random_reduced_word<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet_size: u32,
    length: usize,
    pool: Option<&[u32]>,
) -> Result<Word> {
    let indices: Vec<u32> = match pool {
        Some(p) => p.to_vec(),
        None => (1..=alphabet_size).collect(),
    };
    if indices.is_empty() {
        return Err(Error::EmptyGeneratorPool { role: "sampler" });
    }
    for &i in &indices {
        if i == 0 || i > alphabet_size {
            return Err(Error::LetterOutOfRange {
                index: i,
                alphabet_size,
            });
        }
    }
    // Signed pool letters in a fixed order: g_i, g_i^-1 for each pool index.
    let signed: Vec<Letter> = indices
        .iter()
        .flat_map(|&i| [Letter::positive(i), Letter::negative(i)])
        .collect();
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    for step in 0..length {
        let choice = if step == 0 {
            signed[rng.gen_range(0..signed.len())]
        } else {
            let prev = letters[step - 1];
            let banned = signed
                .iter()
                .position(|l| prev.cancels(*l))
                .expect("inverse letter is in the signed pool");
            let mut r = rng.gen_range(0..signed.len() - 1);
            if r >= banned {
                r += 1;
            }
            signed[r]
        };
        letters.push(choice);
    }
    Ok(Word {
        letters,
        alphabet_size,
    })
}
