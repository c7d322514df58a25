//! Independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use braidcob::alexander::AlexanderPolynomial;
use braidcob::BraidWord;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced Burau matrix of `w` at an integer `t ≠ 0`, exactly.
fn reduced_burau(w: &BraidWord, t: i64) -> Vec<Vec<BigRational>> {
    let n = w.strands();
    let d = n - 1;
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let tt = q(t);
    let ti = BigRational::new(BigInt::one(), BigInt::from(t));
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { q(1) } else { q(0) }).collect())
        .collect();
    for &x in w.letters() {
        let i = x.unsigned_abs() as usize - 1;
        // generator matrix acting on rows i-1, i, i+1 (0-based)
        let mut g: Vec<Vec<BigRational>> = (0..d)
            .map(|r| (0..d).map(|c| if r == c { q(1) } else { q(0) }).collect())
            .collect();
        if x > 0 {
            g[i][i] = -tt.clone();
            if i > 0 {
                g[i][i - 1] = tt.clone();
            }
            if i + 1 < d {
                g[i][i + 1] = q(1);
            }
        } else {
            g[i][i] = -ti.clone();
            if i > 0 {
                g[i][i - 1] = q(1);
            }
            if i + 1 < d {
                g[i][i + 1] = ti.clone();
            }
        }
        m = mul(&m, &g);
    }
    m
}

fn mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut d = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= &a[k][k];
        for r in k + 1..n {
            let f = &a[r][k] / &a[k][k];
            for c in k..n {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
        }
    }
    d
}

/// `det(I − ψ(w))(1 − t)/(1 − tⁿ)` at integer `t`, which equals the Alexander
/// polynomial of the closure up to a factor `±tᵏ`.
pub fn burau_alexander_at(w: &BraidWord, t: i64) -> BigRational {
    let n = w.strands();
    let b = reduced_burau(w, t);
    let d = b.len();
    let i_minus: Vec<Vec<BigRational>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    let id = if r == c { BigRational::one() } else { BigRational::zero() };
                    id - &b[r][c]
                })
                .collect()
        })
        .collect();
    let tb = BigInt::from(t);
    let num = BigInt::one() - &tb;
    let den = BigInt::one() - num_traits::pow(tb, n);
    det(i_minus) * BigRational::new(num, den)
}

pub fn eval(p: &AlexanderPolynomial, t: i64) -> BigInt {
    let tb = BigInt::from(t);
    p.coefficients().iter().rev().fold(BigInt::zero(), |acc, c| acc * &tb + c)
}

/// Whether `a = ±tᵏ · b` for one `k` in `[-bound, bound]` at every sample `t`.
pub fn equal_up_to_units(a: &[BigRational], b: &[BigInt], ts: &[i64], bound: i32) -> bool {
    if a.iter().all(Zero::is_zero) && b.iter().all(Zero::is_zero) {
        return true;
    }
    (-bound..=bound).any(|k| {
        [1i64, -1].iter().any(|&s| {
            ts.iter().zip(a.iter().zip(b)).all(|(&t, (x, y))| {
                let unit = if k >= 0 {
                    BigRational::from_integer(num_traits::pow(BigInt::from(t), k as usize))
                } else {
                    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(t), (-k) as usize))
                };
                *x == unit * BigRational::from_integer(y * s)
            })
        })
    })
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Signature and nullity of `(1−ω)V + (1−ω̄)Vᵀ` from floating eigenvalues,
/// or `None` when some eigenvalue is too close to zero to classify.
pub fn float_signature(v: &[Vec<i64>], theta: f64) -> Option<(i64, usize)> {
    let n = v.len();
    let (c, s) = ((std::f64::consts::TAU * theta).cos(), (std::f64::consts::TAU * theta).sin());
    // H = (1−c)(V+Vᵀ) + i·s·(Vᵀ−V); embed as [[Re, −Im], [Im, Re]]
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let re = (1.0 - c) * (v[i][j] + v[j][i]) as f64;
            let im = s * (v[j][i] - v[i][j]) as f64;
            big[i][j] = re;
            big[i + n][j + n] = re;
            big[i][j + n] = -im;
            big[i + n][j] = im;
        }
    }
    let eig = symmetric_eigenvalues(big);
    let mut sig = 0i64;
    let mut zero = 0usize;
    for e in eig {
        if e.abs() < 1e-9 {
            zero += 1;
        } else if e.abs() < 1e-6 {
            return None;
        } else {
            sig += e.signum() as i64;
        }
    }
    // every eigenvalue of H appears twice
    Some((sig / 2, zero / 2))
}

pub fn dense(v: &braidcob::SeifertMatrix) -> Vec<Vec<i64>> {
    (0..v.size()).map(|i| (0..v.size()).map(|j| v.get(i, j)).collect()).collect()
}
