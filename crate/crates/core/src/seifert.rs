//! Seifert matrices of closed braids.
//!
//! Seifert's algorithm on a closed braid diagram gives one disk per strand and
//! one half-twisted band per letter. A basis of the first homology of the
//! surface is one loop per pair of consecutive bands in the same generator
//! column. Loops are ordered by the position of their first band, which keeps
//! the matrix banded for braids whose columns are visited regularly.

use crate::braid::BraidWord;

/// One homology generator: consecutive bands `first < second` in `column`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Loop {
    pub column: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrix {
    size: usize,
    entries: Vec<i64>,
    loops: Vec<Loop>,
    components: usize,
    euler_char: i64,
    pieces: usize,
}

impl SeifertMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.size)
            .map(|i| self.entries[i * self.size..(i + 1) * self.size].to_vec())
            .collect()
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    /// Components of the closure.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Euler characteristic of the surface: strands minus letters.
    pub fn euler_char(&self) -> i64 {
        self.euler_char
    }

    /// Connected pieces of the surface.
    pub fn pieces(&self) -> usize {
        self.pieces
    }

    /// Largest `|i - j|` over nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        for i in 0..self.size {
            for j in 0..self.size {
                if self.get(i, j) != 0 {
                    bw = bw.max(i.abs_diff(j));
                }
            }
        }
        bw
    }
}

pub fn seifert_matrix(w: &BraidWord) -> SeifertMatrix {
    let n = w.strands();
    let letters = w.letters();
    let sign = |pos: usize| -> i64 { letters[pos].signum() as i64 };

    // Band positions per column (1-based columns, index 0 unused).
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (pos, &x) in letters.iter().enumerate() {
        columns[x.unsigned_abs() as usize].push(pos);
    }

    let mut loops: Vec<Loop> = Vec::new();
    for (column, bands) in columns.iter().enumerate() {
        for pair in bands.windows(2) {
            loops.push(Loop {
                column,
                first: pair[0],
                second: pair[1],
            });
        }
    }
    loops.sort_by_key(|l| l.first);
    let size = loops.len();

    // index of the loop starting at a band position
    let mut starting_at = vec![usize::MAX; letters.len()];
    for (idx, l) in loops.iter().enumerate() {
        starting_at[l.first] = idx;
    }

    let mut entries = vec![0i64; size * size];
    let mut set = |i: usize, j: usize, v: i64| entries[i * size + j] = v;

    for (g, l) in loops.iter().enumerate() {
        set(g, g, -(sign(l.first) + sign(l.second)) / 2);

        // next loop in the same column shares band `second`
        let next = starting_at[l.second];
        if next != usize::MAX {
            if sign(l.second) > 0 {
                set(g, next, 1);
            } else {
                set(next, g, -1);
            }
        }

        // interleaving loops in the column to the right
        if l.column + 1 < n {
            let right = &columns[l.column + 1];
            let lo = right.partition_point(|&r| r < l.first);
            let hi = right.partition_point(|&r| r < l.second);
            if hi > lo {
                // p < r < q < s: r is the last band inside (p, q)
                let r = right[hi - 1];
                if hi < right.len() {
                    set(starting_at[r], g, -1);
                }
                // r < p < s < q: s is the first band inside (p, q)
                if lo > 0 {
                    let r = right[lo - 1];
                    set(starting_at[r], g, 1);
                }
            }
        }
    }

    let used = columns.iter().skip(1).filter(|b| !b.is_empty()).count();
    SeifertMatrix {
        size,
        entries,
        loops,
        components: w.components(),
        euler_char: n as i64 - letters.len() as i64,
        pieces: n - used,
    }
}
