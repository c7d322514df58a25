//! Braid words in the standard Artin generators.
//!
//! A letter `+i` stands for `σ_i` and `-i` for `σ_i^{-1}`, with `1 <= i < n`.
//! The empty word is the identity of `B_n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("letter at position {position} is zero")]
    ZeroLetter { position: usize },
    #[error("letter {letter} at position {position} exceeds n-1={max}")]
    LetterOutOfRange {
        position: usize,
        letter: i32,
        max: usize,
    },
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("expected a braid on {expected} strands, found {found}")]
    WrongStrandCount { expected: usize, found: usize },
    #[error("cannot destabilize: {0}")]
    NotDestabilizable(String),
}

/// Validated braid word on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    n: usize,
    w: Vec<i32>,
}

impl TryFrom<RawWord> for BraidWord {
    type Error = BraidError;
    fn try_from(raw: RawWord) -> Result<Self, Self::Error> {
        BraidWord::new(raw.n, raw.w)
    }
}

impl From<BraidWord> for RawWord {
    fn from(w: BraidWord) -> Self {
        RawWord {
            n: w.strands,
            w: w.letters,
        }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for (position, &letter) in letters.iter().enumerate() {
            if letter == 0 {
                return Err(BraidError::ZeroLetter { position });
            }
            if letter.unsigned_abs() as usize >= strands {
                return Err(BraidError::LetterOutOfRange {
                    position,
                    letter,
                    max: strands - 1,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands > 0, "a braid needs at least one strand");
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn into_letters(self) -> Vec<i32> {
        self.letters
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn invert(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// `w^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> BraidWord {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// The same letters with every sign flipped: a diagram of the mirror image.
    pub fn mirror(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|&x| -x).collect(),
        }
    }

    /// Removes adjacent `x, -x` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &x in &self.letters {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&x| x.signum() as i64).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&x| x > 0)
    }

    /// Underlying permutation, `σ_i ↦ (i, i+1)`.
    pub fn permutation(&self) -> Permutation {
        // images[p] = where the strand entering at p leaves.
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = strand
        for &x in &self.letters {
            let i = x.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut images = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            images[strand] = pos;
        }
        Permutation { images }
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        self.permutation().cycle_count()
    }

    /// `w ∈ B_n ↦ w σ_n^{±1} ∈ B_{n+1}`.
    pub fn markov_stabilize(&self, positive: bool) -> BraidWord {
        let mut letters = self.letters.clone();
        let g = self.strands as i32;
        letters.push(if positive { g } else { -g });
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }

    /// Inverse of [`markov_stabilize`](Self::markov_stabilize): the top generator
    /// must occur exactly once; it is deleted and the last strand dropped.
    pub fn markov_destabilize(&self) -> Result<BraidWord, BraidError> {
        if self.strands < 2 {
            return Err(BraidError::NotDestabilizable(
                "a 1-strand braid has no last generator".into(),
            ));
        }
        let top = (self.strands - 1) as i32;
        let hits: Vec<usize> = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, x)| x.abs() == top)
            .map(|(i, _)| i)
            .collect();
        if hits.len() != 1 {
            return Err(BraidError::NotDestabilizable(format!(
                "generator {top} occurs {} times",
                hits.len()
            )));
        }
        let mut letters = self.letters.clone();
        letters.remove(hits[0]);
        Ok(BraidWord {
            strands: self.strands - 1,
            letters,
        })
    }

    /// Letters shifted up by `offset` generators inside `B_{strands}`.
    pub fn shifted(&self, offset: usize, strands: usize) -> Result<BraidWord, BraidError> {
        let letters = self
            .letters
            .iter()
            .map(|&x| x.signum() * (x.abs() + offset as i32))
            .collect();
        BraidWord::new(strands, letters)
    }

    /// The same letters viewed in a braid group with more strands.
    pub fn widened(&self, strands: usize) -> Result<BraidWord, BraidError> {
        BraidWord::new(strands, self.letters.clone())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}[", self.strands)?;
        for (i, x) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// `make_word`: validated construction.
pub fn make_word(strands: usize, letters: &[i32]) -> Result<BraidWord, BraidError> {
    BraidWord::new(strands, letters.to_vec())
}

/// Homomorphism `B_3 → B_6` doubling every strand: `a ↦ bacb`, `b ↦ dced`.
pub fn cable2(w: &BraidWord) -> Result<BraidWord, BraidError> {
    if w.strands() != 3 {
        return Err(BraidError::WrongStrandCount {
            expected: 3,
            found: w.strands(),
        });
    }
    const A: [i32; 4] = [2, 1, 3, 2];
    const B: [i32; 4] = [4, 3, 5, 4];
    let mut letters = Vec::with_capacity(4 * w.len());
    for &x in w.letters() {
        let image = if x.abs() == 1 { &A } else { &B };
        if x > 0 {
            letters.extend_from_slice(image);
        } else {
            letters.extend(image.iter().rev().map(|&y| -y));
        }
    }
    BraidWord::new(6, letters)
}

/// Permutation of `{0..n-1}` stored as the image list (0-based internally;
/// `Display` prints 1-based images).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", shown.join(" "))
    }
}
