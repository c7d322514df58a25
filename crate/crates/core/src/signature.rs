//! Levine–Tristram signatures of braid closures with certified arithmetic.
//!
//! For `ω = e^{2πiθ}` the form is `H = (1-ω)V + (1-ω̄)Vᵀ`. Its inertia is
//! computed by Hermitian block elimination over complex balls: a pivot is
//! taken only when its sign (or the sign of a 2×2 determinant) is certified.
//! Whatever cannot be certified at the precision cap counts as nullity.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::ball::{unit_circle, Ball, ComplexBall};
use crate::braid::BraidWord;
use crate::seifert::{seifert_matrix, SeifertMatrix};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_PRECISION_CAP: u32 = 1024;
/// `σ₆` is evaluated at `1/6 + 2^-10`, `1/6 + 2^-11`, ...
pub const SIGMA6_FIRST_OFFSET_LOG2: u32 = 10;
pub const SIGMA6_MAX_HALVINGS: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("theta {0} is outside [0, 1]")]
    ThetaOutOfRange(String),
    #[error(
        "signature at theta={theta} disagrees between {bits} bits ({first}) and {doubled} bits ({second})"
    )]
    PrecisionUnresolved {
        theta: String,
        bits: u32,
        doubled: u32,
        first: String,
        second: String,
    },
    #[error("sigma6 did not stabilize within {0} halvings of the offset")]
    Sigma6Unstable(u32),
    #[error("the Hermitian form is singular on the whole circle")]
    Degenerate,
    #[error("torus parameters must be at least 1, got ({0}, {1})")]
    InvalidTorus(u64, u64),
    #[error("theta={theta} is a jump point of the signature of T({p},{q})")]
    JumpPoint { p: u64, q: u64, theta: String },
}

/// Working precision and escalation cap in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_PRECISION_BITS,
            cap_bits: DEFAULT_PRECISION_CAP,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_start(bits: u32) -> Self {
        let bits = bits.max(32);
        PrecisionPolicy {
            start_bits: bits,
            cap_bits: DEFAULT_PRECISION_CAP.max(8 * bits),
        }
    }

    fn doubled(self) -> Self {
        PrecisionPolicy {
            start_bits: 2 * self.start_bits,
            cap_bits: self.cap_bits.max(2 * self.start_bits),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    /// Rows left over when no certified pivot remained.
    pub undetermined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureProfile {
    pub theta: Ratio<i64>,
    pub signature: i64,
    /// Nullity of the closure: form nullity plus surface pieces minus one.
    pub nullity: usize,
    /// Nullity of `H` itself.
    pub form_nullity: usize,
    pub precision_bits: u32,
}

type SparseRow = BTreeMap<usize, ComplexBall>;

fn hermitian_form(v: &SeifertMatrix, theta: &Ratio<i64>, prec: u32) -> Vec<SparseRow> {
    let n = v.size();
    let (c, s) = unit_circle(theta, prec);
    let one_minus_c = Ball::from_int(1, prec).sub(&c);
    let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); n];
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..n {
            let (a, b) = (v.get(i, j), v.get(j, i));
            if a == 0 && b == 0 {
                continue;
            }
            // (1-c)(V_ij + V_ji) + i·s·(V_ji - V_ij)
            let entry = ComplexBall {
                re: one_minus_c.mul_int(a + b),
                im: s.mul_int(b - a),
            };
            row.insert(j, entry);
        }
    }
    rows
}

fn entry(rows: &[SparseRow], i: usize, j: usize, prec: u32) -> ComplexBall {
    rows[i].get(&j).cloned().unwrap_or_else(|| ComplexBall::zero(prec))
}

/// `H[k][l] -= x · H[p][l]` over `support`, the entries of row `p`.
fn subtract_multiple(rows: &mut [SparseRow], k: usize, x: &ComplexBall, support: &[(usize, ComplexBall)]) {
    for (l, hpl) in support {
        let delta = x.mul(hpl);
        let slot = rows[k]
            .entry(*l)
            .or_insert_with(|| ComplexBall::zero(delta.re.prec()));
        *slot = slot.sub(&delta);
    }
}

/// Inertia of `H` at a single working precision.
pub fn inertia(v: &SeifertMatrix, theta: &Ratio<i64>, prec: u32) -> Inertia {
    let mut rows = hermitian_form(v, theta, prec);
    let mut active: Vec<bool> = vec![true; v.size()];
    let mut remaining = v.size();
    let (mut positive, mut negative) = (0, 0);

    while remaining > 0 {
        let single = (0..rows.len()).find(|&i| {
            active[i] && entry(&rows, i, i, prec).re.sign().is_some_and(|o| o != Ordering::Equal)
        });
        if let Some(p) = single {
            let d = entry(&rows, p, p, prec).re;
            match d.sign() {
                Some(Ordering::Greater) => positive += 1,
                _ => negative += 1,
            }
            active[p] = false;
            remaining -= 1;
            let support: Vec<(usize, ComplexBall)> = rows[p]
                .iter()
                .filter(|(l, z)| active[**l] && !z.is_exact_zero())
                .map(|(l, z)| (*l, z.clone()))
                .collect();
            for (k, _) in &support {
                let hkp = entry(&rows, *k, p, prec);
                let x = hkp.div_real(&d).expect("pivot sign is certified");
                subtract_multiple(&mut rows, *k, &x, &support);
            }
            for (k, _) in &support {
                rows[*k].remove(&p);
            }
            continue;
        }

        let pair = find_pair(&rows, &active, prec);
        let Some((p, q, det)) = pair else { break };
        positive += 1;
        negative += 1;
        active[p] = false;
        active[q] = false;
        remaining -= 2;
        let a = entry(&rows, p, p, prec).re;
        let c = entry(&rows, q, q, prec).re;
        let b = entry(&rows, p, q, prec);
        let mut touched: Vec<usize> = rows[p]
            .keys()
            .chain(rows[q].keys())
            .copied()
            .filter(|&k| active[k])
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let support_p: Vec<(usize, ComplexBall)> =
            touched.iter().map(|&l| (l, entry(&rows, p, l, prec))).collect();
        let support_q: Vec<(usize, ComplexBall)> =
            touched.iter().map(|&l| (l, entry(&rows, q, l, prec))).collect();
        for &k in &touched {
            let hkp = entry(&rows, k, p, prec);
            let hkq = entry(&rows, k, q, prec);
            // [x1 x2] = [hkp hkq] · [[a, b], [b̄, c]]⁻¹
            let x1 = hkp
                .mul(&ComplexBall { re: c.clone(), im: Ball::zero(prec) })
                .sub(&hkq.mul(&b.conj()))
                .div_real(&det)
                .expect("determinant sign is certified");
            let x2 = hkq
                .mul(&ComplexBall { re: a.clone(), im: Ball::zero(prec) })
                .sub(&hkp.mul(&b))
                .div_real(&det)
                .expect("determinant sign is certified");
            subtract_multiple(&mut rows, k, &x1, &support_p);
            subtract_multiple(&mut rows, k, &x2, &support_q);
        }
        for &k in &touched {
            rows[k].remove(&p);
            rows[k].remove(&q);
        }
    }

    Inertia {
        positive,
        negative,
        undetermined: remaining,
    }
}

/// First active pair `(p, q)` whose 2×2 block has certified negative determinant.
fn find_pair(rows: &[SparseRow], active: &[bool], prec: u32) -> Option<(usize, usize, Ball)> {
    for p in 0..rows.len() {
        if !active[p] {
            continue;
        }
        let a = entry(rows, p, p, prec).re;
        for (q, b) in rows[p].range(p + 1..) {
            if !active[*q] || b.is_exact_zero() {
                continue;
            }
            let c = entry(rows, *q, *q, prec).re;
            let det = a.mul(&c).sub(&b.norm_sqr());
            if det.sign() == Some(Ordering::Less) {
                return Some((p, *q, det));
            }
        }
    }
    None
}

fn escalate(v: &SeifertMatrix, theta: &Ratio<i64>, policy: PrecisionPolicy) -> (Inertia, u32) {
    let mut bits = policy.start_bits;
    loop {
        let result = inertia(v, theta, bits);
        if result.undetermined == 0 || bits >= policy.cap_bits {
            return (result, bits);
        }
        bits = (2 * bits).min(policy.cap_bits);
    }
}

fn check_theta(theta: &Ratio<i64>) -> Result<(), SignatureError> {
    if *theta < Ratio::from_integer(0) || *theta > Ratio::from_integer(1) {
        return Err(SignatureError::ThetaOutOfRange(theta.to_string()));
    }
    Ok(())
}

/// Signature and nullity of a precomputed Seifert matrix, confirmed at twice
/// the starting precision.
pub fn signature_of_matrix(
    v: &SeifertMatrix,
    theta: &Ratio<i64>,
    policy: PrecisionPolicy,
) -> Result<SignatureProfile, SignatureError> {
    check_theta(theta)?;
    let (first, bits) = escalate(v, theta, policy);
    let (second, _) = escalate(v, theta, policy.doubled());
    let summary = |i: &Inertia| format!("{}/{}/{}", i.positive, i.negative, i.undetermined);
    if first.positive != second.positive || first.negative != second.negative {
        return Err(SignatureError::PrecisionUnresolved {
            theta: theta.to_string(),
            bits: policy.start_bits,
            doubled: policy.doubled().start_bits,
            first: summary(&first),
            second: summary(&second),
        });
    }
    debug_assert_eq!(first.positive + first.negative + first.undetermined, v.size());
    Ok(SignatureProfile {
        theta: *theta,
        signature: first.positive as i64 - first.negative as i64,
        nullity: first.undetermined + v.pieces() - 1,
        form_nullity: first.undetermined,
        precision_bits: bits,
    })
}

pub fn signature_at(
    w: &BraidWord,
    theta: &Ratio<i64>,
    precision_bits: u32,
) -> Result<SignatureProfile, SignatureError> {
    signature_of_matrix(&seifert_matrix(w), theta, PrecisionPolicy::with_start(precision_bits))
}

/// `σ₆` of a closure: minus the signature just above `θ = 1/6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sigma6 {
    pub value: i64,
    /// Offset used was `2^-(10 + halvings)`.
    pub halvings: u32,
    pub precision_bits: u32,
}

pub fn sigma6_theta(halvings: u32) -> Ratio<i64> {
    Ratio::new(1, 6) + Ratio::new(1, 1i64 << (SIGMA6_FIRST_OFFSET_LOG2 + halvings))
}

/// Halves the offset until three consecutive evaluations agree with zero
/// form nullity.
pub fn sigma6_of_matrix(v: &SeifertMatrix, policy: PrecisionPolicy) -> Result<Sigma6, SignatureError> {
    // nullity never reaches 0, so the stability rule cannot settle
    if crate::alexander::is_degenerate(v) {
        return Err(SignatureError::Degenerate);
    }
    let mut history: Vec<SignatureProfile> = Vec::new();
    for k in 0..=SIGMA6_MAX_HALVINGS {
        history.push(signature_of_matrix(v, &sigma6_theta(k), policy)?);
        if let [a, b, c] = &history[history.len().saturating_sub(3)..] {
            let settled = [a, b, c].iter().all(|p| p.form_nullity == 0)
                && a.signature == b.signature
                && b.signature == c.signature;
            if settled {
                return Ok(Sigma6 {
                    value: -c.signature,
                    halvings: k,
                    precision_bits: c.precision_bits,
                });
            }
        }
    }
    Err(SignatureError::Sigma6Unstable(SIGMA6_MAX_HALVINGS))
}

pub fn sigma6(w: &BraidWord, policy: PrecisionPolicy) -> Result<Sigma6, SignatureError> {
    sigma6_of_matrix(&seifert_matrix(w), policy)
}

/// Signature of `T(p, q)` at `θ` by counting lattice points, independent of
/// any Seifert matrix: `x = i/p + j/q` with `0 < i < p`, `0 < j < q`
/// contributes `-1` inside `(θ, θ+1)` and `+1` outside `[θ, θ+1]`.
pub fn torus_signature_oracle(p: u64, q: u64, theta: &Ratio<i64>) -> Result<i64, SignatureError> {
    if p == 0 || q == 0 {
        return Err(SignatureError::InvalidTorus(p, q));
    }
    let (a, b) = (*theta.numer() as i128, *theta.denom() as i128);
    if a <= 0 || a >= b {
        return Err(SignatureError::ThetaOutOfRange(theta.to_string()));
    }
    let (p, q) = (p as i128, q as i128);
    let pq = p * q;
    let lo = a * pq; // θ scaled by b·pq
    let hi = (a + b) * pq;
    let mut sig = 0i64;
    for i in 1..p {
        for j in 1..q {
            let x = (i * q + j * p) * b;
            if x == lo || x == hi {
                return Err(SignatureError::JumpPoint {
                    p: p as u64,
                    q: q as u64,
                    theta: theta.to_string(),
                });
            }
            sig += if x > lo && x < hi { -1 } else { 1 };
        }
    }
    Ok(sig)
}

/// `σ₆(T(p, q))` by the lattice count just above `1/6`.
pub fn torus_sigma6_oracle(p: u64, q: u64) -> Result<i64, SignatureError> {
    // Jump points of T(p, q) have denominator dividing pq; an offset below
    // 1/(6pq) lands strictly between 1/6 and the next one.
    let pq = (p * q).max(1) as i64;
    let theta = Ratio::new(1, 6) + Ratio::new(1, 12 * pq.lcm(&6));
    torus_signature_oracle(p, q, &theta).map(|s| -s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::make_word;

    fn torus(p: usize, q: usize) -> BraidWord {
        let gens: Vec<i32> = (1..p as i32).collect();
        make_word(p, &gens.repeat(q)).unwrap()
    }

    #[test]
    fn trefoil_signature() {
        let t = torus(2, 3);
        let half = signature_at(&t, &Ratio::new(1, 2), 128).unwrap();
        assert_eq!((half.signature, half.nullity), (-2, 0));
        let small = signature_at(&t, &Ratio::new(1, 10), 128).unwrap();
        assert_eq!((small.signature, small.nullity), (0, 0));
        let root = signature_at(&t, &Ratio::new(1, 6), 128).unwrap();
        assert_eq!((root.signature, root.nullity), (-1, 1));
    }

    #[test]
    fn endpoints_and_split_closures() {
        let t = torus(2, 3);
        let zero = signature_at(&t, &Ratio::from_integer(0), 128).unwrap();
        assert_eq!((zero.signature, zero.nullity), (0, 2));
        let e = make_word(4, &[]).unwrap();
        let p = signature_at(&e, &Ratio::new(1, 3), 128).unwrap();
        assert_eq!((p.signature, p.nullity), (0, 3));
        assert!(signature_at(&t, &Ratio::new(3, 2), 128).is_err());
    }

    #[test]
    fn oracle_values() {
        assert_eq!(torus_signature_oracle(2, 3, &Ratio::new(1, 2)).unwrap(), -2);
        assert_eq!(torus_signature_oracle(2, 7, &Ratio::new(1, 2)).unwrap(), -6);
        assert_eq!(torus_signature_oracle(3, 5, &Ratio::new(1, 100)).unwrap(), 0);
        assert!(torus_signature_oracle(2, 3, &Ratio::new(1, 6)).is_err());
    }

    #[test]
    fn matches_oracle_on_small_torus_links() {
        for (p, q) in [(2, 5), (3, 4), (3, 3), (4, 6), (2, 4)] {
            for theta in [Ratio::new(1, 2), Ratio::new(2, 7), Ratio::new(3, 11)] {
                let expect = torus_signature_oracle(p as u64, q as u64, &theta).unwrap();
                let got = signature_at(&torus(p, q), &theta, 128).unwrap();
                assert_eq!(got.signature, expect, "T({p},{q}) at {theta}");
            }
        }
    }

    #[test]
    fn sigma6_of_trefoils() {
        let policy = PrecisionPolicy::default();
        assert_eq!(sigma6(&torus(2, 3), policy).unwrap().value, 2);
        assert_eq!(sigma6(&torus(2, 3).mirror(), policy).unwrap().value, -2);
        assert_eq!(sigma6(&make_word(1, &[]).unwrap(), policy).unwrap().value, 0);
        assert_eq!(torus_sigma6_oracle(2, 3).unwrap(), 2);
    }
}
