//! Left greedy normal form `Δ^inf · A_1 ⋯ A_r` in the braid group.
//!
//! Simple factors are positive permutation braids, stored as the permutation
//! `π` with `π[p]` = bottom position of the strand entering at top position `p`.
//! For a product `AB` (A on top) the permutation is `π_B ∘ π_A`.

use std::fmt;

use crate::braid::{BraidError, BraidWord};

/// Complete invariant of a braid group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalBraid {
    strands: usize,
    infimum: i64,
    factors: Vec<Vec<u16>>,
}

impl CanonicalBraid {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn infimum(&self) -> i64 {
        self.infimum
    }

    pub fn factors(&self) -> &[Vec<u16>] {
        &self.factors
    }

    /// `inf + r`.
    pub fn supremum(&self) -> i64 {
        self.infimum + self.factors.len() as i64
    }

    pub fn is_identity(&self) -> bool {
        self.infimum == 0 && self.factors.is_empty()
    }

    /// A positive-and-Δ word for the element: `Δ^inf` followed by each factor
    /// written as a product of generators.
    pub fn to_word(&self) -> BraidWord {
        let n = self.strands;
        let delta = simple_to_letters(&delta(n));
        let mut letters = Vec::new();
        if self.infimum >= 0 {
            for _ in 0..self.infimum {
                letters.extend_from_slice(&delta);
            }
        } else {
            let inv: Vec<i32> = delta.iter().rev().map(|&x| -x).collect();
            for _ in 0..(-self.infimum) {
                letters.extend_from_slice(&inv);
            }
        }
        for f in &self.factors {
            letters.extend(simple_to_letters(f));
        }
        BraidWord::new(n, letters).expect("factor letters are in range")
    }
}

impl fmt::Display for CanonicalBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}", self.infimum)?;
        for factor in &self.factors {
            let shown: Vec<String> = factor.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, " [{}]", shown.join(" "))?;
        }
        Ok(())
    }
}

fn identity(n: usize) -> Vec<u16> {
    (0..n as u16).collect()
}

fn delta(n: usize) -> Vec<u16> {
    (0..n as u16).rev().collect()
}

fn inverse(p: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u16;
    }
    inv
}

/// Conjugation by Δ: `σ_i ↦ σ_{n-i}`.
fn flip(p: &[u16]) -> Vec<u16> {
    let n = p.len();
    (0..n).map(|i| (n - 1) as u16 - p[n - 1 - i]).collect()
}

/// `i ∈ S(A)`: A = σ_i A' with A' positive.
fn starts_with(p: &[u16], i: usize) -> bool {
    p[i] > p[i + 1]
}

/// `A σ_i` with the transposition applied to bottom positions.
fn append_generator(p: &mut [u16], i: usize) {
    for x in p.iter_mut() {
        if *x as usize == i {
            *x = (i + 1) as u16;
        } else if *x as usize == i + 1 {
            *x = i as u16;
        }
    }
}

/// `σ_i^{-1} B`, requires `i ∈ S(B)`.
fn strip_generator(p: &mut [u16], i: usize) {
    p.swap(i, i + 1);
}

/// Writes a simple factor as positive letters (bubble sort of its permutation).
fn simple_to_letters(p: &[u16]) -> Vec<i32> {
    // Peel starting generators off the left until the identity remains.
    let mut q = p.to_vec();
    let mut out = Vec::new();
    'outer: loop {
        for i in 0..q.len().saturating_sub(1) {
            if starts_with(&q, i) {
                out.push(i as i32 + 1);
                strip_generator(&mut q, i);
                continue 'outer;
            }
        }
        break;
    }
    out
}

/// Makes `(a, b)` left-weighted in place; returns whether anything moved.
fn left_weight(a: &mut [u16], b: &mut [u16]) -> bool {
    let n = a.len();
    let mut moved = false;
    let mut a_inv = inverse(a);
    loop {
        // i ∈ S(b) \ F(a); F(a) = { i : a_inv[i] > a_inv[i+1] }.
        let found = (0..n - 1).find(|&i| starts_with(b, i) && a_inv[i] < a_inv[i + 1]);
        match found {
            Some(i) => {
                append_generator(a, i);
                a_inv.swap(i, i + 1);
                strip_generator(b, i);
                moved = true;
            }
            None => return moved,
        }
    }
}

/// Left normal form of a braid word.
pub fn normal_form(w: &BraidWord) -> CanonicalBraid {
    let n = w.strands();
    if n == 1 {
        return CanonicalBraid {
            strands: 1,
            infimum: 0,
            factors: Vec::new(),
        };
    }

    // Rewrite σ_i^{-1} = Δ^{-1}(Δσ_i^{-1}) and greedily pack positive runs
    // into simple factors. `marks_after[j]` counts Δ^{-1} to the right of factor j.
    let mut raw: Vec<(Vec<u16>, usize)> = Vec::new(); // (factor, Δ^{-1} count before it)
    let mut negatives = 0usize;
    let mut current: Option<Vec<u16>> = None;
    for &x in w.letters() {
        let i = x.unsigned_abs() as usize - 1;
        if x > 0 {
            let fits = current.as_ref().is_some_and(|c| {
                let inv = inverse(c);
                inv[i] < inv[i + 1]
            });
            if fits {
                append_generator(current.as_mut().unwrap(), i);
            } else {
                if let Some(c) = current.take() {
                    raw.push((c, negatives));
                }
                let mut f = identity(n);
                append_generator(&mut f, i);
                current = Some(f);
            }
        } else {
            if let Some(c) = current.take() {
                raw.push((c, negatives));
            }
            negatives += 1;
            let mut f = delta(n);
            append_generator(&mut f, i);
            current = Some(f);
        }
    }
    if let Some(c) = current.take() {
        raw.push((c, negatives));
    }

    // Moving every Δ^{-1} to the front conjugates the factors it passes.
    let factors: Vec<Vec<u16>> = raw
        .into_iter()
        .map(|(f, before)| {
            if (negatives - before) % 2 == 1 {
                flip(&f)
            } else {
                f
            }
        })
        .collect();

    let mut normal: Vec<Vec<u16>> = Vec::with_capacity(factors.len());
    for f in factors.into_iter().rev() {
        prepend(&mut normal, f);
    }
    finish(n, -(negatives as i64), normal)
}

/// Prepends a simple factor to a sequence in left normal form, restoring
/// left-weightedness by a forward sweep.
fn prepend(normal: &mut Vec<Vec<u16>>, f: Vec<u16>) {
    normal.insert(0, f);
    let mut k = 0;
    while k + 1 < normal.len() {
        let (head, tail) = normal.split_at_mut(k + 1);
        if !left_weight(&mut head[k], &mut tail[0]) {
            break;
        }
        k += 1;
    }
}

fn finish(n: usize, mut infimum: i64, mut factors: Vec<Vec<u16>>) -> CanonicalBraid {
    // Safety net: repeat sweeps until every adjacent pair is left-weighted.
    loop {
        let mut changed = false;
        for k in 0..factors.len().saturating_sub(1) {
            let (head, tail) = factors.split_at_mut(k + 1);
            changed |= left_weight(&mut head[k], &mut tail[0]);
        }
        if !changed {
            break;
        }
    }
    let d = delta(n);
    let id = identity(n);
    let lead = factors.iter().take_while(|f| **f == d).count();
    factors.drain(..lead);
    infimum += lead as i64;
    while factors.last() == Some(&id) {
        factors.pop();
    }
    debug_assert!(!factors.contains(&id) && !factors.contains(&d));
    CanonicalBraid {
        strands: n,
        infimum,
        factors,
    }
}

/// Word problem: do the two words represent the same element of `B_n`?
pub fn equal(a: &BraidWord, b: &BraidWord) -> Result<bool, BraidError> {
    if a.strands() != b.strands() {
        return Err(BraidError::StrandMismatch {
            left: a.strands(),
            right: b.strands(),
        });
    }
    if a.free_reduce() == b.free_reduce() {
        return Ok(true);
    }
    Ok(normal_form(a) == normal_form(b))
}
