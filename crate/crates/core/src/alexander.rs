//! Alexander polynomials `det(V - tVᵀ)` of braid closures.
//!
//! The determinant is a polynomial of degree at most `size`. It is evaluated
//! at `size + 1` points modulo word-sized primes, interpolated, and lifted by
//! Chinese remaindering until the product of primes exceeds twice a Hadamard
//! bound on the coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::braid::BraidWord;
use crate::seifert::{seifert_matrix, SeifertMatrix};

/// Integer Laurent polynomial up to units `±t^k`, stored with nonzero constant
/// term and positive leading coefficient. The zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlexanderPolynomial {
    coefficients: Vec<BigInt>,
}

impl AlexanderPolynomial {
    pub fn from_coefficients<I: IntoIterator<Item = BigInt>>(coefficients: I) -> Self {
        let mut c: Vec<BigInt> = coefficients.into_iter().collect();
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        let lead = c.iter().take_while(|x| x.is_zero()).count();
        c.drain(..lead);
        if c.last().is_some_and(Signed::is_negative) {
            for x in &mut c {
                *x = -x.clone();
            }
        }
        AlexanderPolynomial { coefficients: c }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::from_coefficients(coefficients.iter().map(|&x| BigInt::from(x)))
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Span of exponents; `None` for zero.
    pub fn span(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// `|Δ(e^{2πiθ})|` in floating point, for locating roots.
    pub fn abs_on_circle(&self, theta: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.coefficients.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let a = std::f64::consts::TAU * theta * k as f64;
            re += c * a.cos();
            im += c * a.sin();
        }
        re.hypot(im)
    }

    /// Value at `t = 1` (up to sign).
    pub fn at_one(&self) -> BigInt {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes below `2^31`, descending.
fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Determinant mod `p`, skipping structural zeros.
fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if r != k {
            a.swap(r, k);
            det = (p - det) % p;
        }
        det = det * a[k][k] % p;
        let inv = inv_mod(a[k][k], p);
        let end = (k..n).rev().find(|&j| a[k][j] != 0).unwrap_or(k);
        let pivot_row = a[k][k..=end].to_vec();
        for row in a.iter_mut().skip(k + 1) {
            if row[k] == 0 {
                continue;
            }
            let f = row[k] * inv % p;
            for (j, &x) in pivot_row.iter().enumerate() {
                if x != 0 {
                    let cell = &mut row[k + j];
                    *cell = (*cell + p - f * x % p) % p;
                }
            }
        }
    }
    det
}

/// `det(V - tVᵀ)` mod `p`.
fn value_mod(v: &SeifertMatrix, t: u64, p: u64) -> u64 {
    let n = v.size();
    let to_mod = |x: i64| x.rem_euclid(p as i64) as u64;
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (to_mod(v.get(i, j)) + p - t * to_mod(v.get(j, i)) % p) % p)
                .collect()
        })
        .collect();
    det_mod(m, p)
}

/// Coefficients of `det(V - tVᵀ)` mod `p`, lowest degree first.
fn coefficients_mod(v: &SeifertMatrix, p: u64) -> Vec<u64> {
    let values: Vec<u64> = (0..=v.size() as u64).map(|t| value_mod(v, t, p)).collect();
    interpolate(&values, p)
}

/// Newton interpolation through `(t, values[t])`, `t = 0..len`.
fn interpolate(values: &[u64], p: u64) -> Vec<u64> {
    let m = values.len();
    let mut dd = values.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            let diff = (dd[i] + p - dd[i - 1]) % p;
            dd[i] = diff * inv_mod(level as u64, p) % p;
        }
    }
    // Horner over the Newton basis (t - 0)(t - 1)...
    let mut poly = vec![0u64; m];
    for i in (0..m).rev() {
        // poly = poly * (t - i) + dd[i]
        let mut next = vec![0u64; m];
        for (k, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k + 1 < m {
                next[k + 1] = (next[k + 1] + c) % p;
            }
            next[k] = (next[k] + p - c * (i as u64 % p) % p) % p;
        }
        next[0] = (next[0] + dd[i]) % p;
        poly = next;
    }
    poly
}

/// `log2` of a Hadamard bound on `|det(V - tVᵀ)|` over `|t| = 1`.
fn coefficient_bound_log2(v: &SeifertMatrix) -> f64 {
    let n = v.size();
    (0..n)
        .map(|i| {
            let sq: f64 = (0..n)
                .map(|j| {
                    let x = (v.get(i, j).abs() + v.get(j, i).abs()) as f64;
                    x * x
                })
                .sum();
            sq.sqrt().max(1.0).log2()
        })
        .sum()
}

/// Whether `det(V - tVᵀ)` vanishes identically, judged modulo two primes.
/// A `false` answer is certain; `true` could only be wrong if both primes
/// divide every coefficient.
pub fn is_degenerate(v: &SeifertMatrix) -> bool {
    if v.size() == 0 {
        return false;
    }
    let ps = primes(2);
    // one nonzero value settles it; most forms are caught here
    if [2, 3].iter().any(|&t| value_mod(v, t, ps[0]) != 0) {
        return false;
    }
    ps.into_iter().all(|p| coefficients_mod(v, p).iter().all(|&c| c == 0))
}

pub fn alexander_of_matrix(v: &SeifertMatrix) -> AlexanderPolynomial {
    // a disconnected surface means a split closure
    if v.pieces() > 1 {
        return AlexanderPolynomial::from_i64(&[]);
    }
    if v.size() == 0 {
        return AlexanderPolynomial::from_i64(&[1]);
    }
    let needed_bits = coefficient_bound_log2(v) + 2.0;
    let count = (needed_bits / 30.0).ceil().max(1.0) as usize;
    let ps = primes(count);
    let residues: Vec<Vec<u64>> = ps.par_iter().map(|&p| coefficients_mod(v, p)).collect();

    let mut modulus = BigInt::one();
    let mut lifted: Vec<BigInt> = vec![BigInt::zero(); v.size() + 1];
    for (p, res) in ps.iter().zip(&residues) {
        let pb = BigInt::from(*p);
        let inv = BigInt::from(inv_mod((&modulus % &pb).to_u64().unwrap(), *p));
        for (x, &r) in lifted.iter_mut().zip(res) {
            // x' ≡ x (mod M), x' ≡ r (mod p)
            let delta = ((BigInt::from(r) - &*x) * &inv).mod_floor(&pb);
            *x += &modulus * delta;
        }
        modulus *= pb;
    }
    let half = &modulus >> 1;
    let symmetric = lifted
        .into_iter()
        .map(|x| if x > half { x - &modulus } else { x });
    AlexanderPolynomial::from_coefficients(symmetric)
}

pub fn alexander(w: &BraidWord) -> AlexanderPolynomial {
    alexander_of_matrix(&seifert_matrix(w))
}
