//! Generators for the braid words, certificates and bound formulas relating
//! torus links to connected sums of trefoils.
//!
//! Letters follow the usual shorthand `a, b, c, d, e = σ₁, …, σ₅`. In `B_6`
//! the 2-cable images of the `B_3` generators are `Z = bacb` and `Y = dced`.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{cable2, BraidError, BraidWord};
use crate::cert::{
    CobordismCertificate, ConcordanceTarget, FormalLink, Step,
};
use crate::signature::{sigma6, PrecisionPolicy, SignatureError};

const A: i32 = 1;
const B: i32 = 2;
const C: i32 = 3;
const Z: [i32; 4] = [2, 1, 3, 2];
const Y: [i32; 4] = [4, 3, 5, 4];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplicationError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("k={k} and l={l} are not coprime")]
    NotCoprime { k: u64, l: u64 },
    #[error("N={n_total} is below the hypothesis bound ceil(7mn/24)={min}")]
    Hypothesis { n_total: u64, min: u64 },
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

fn word(strands: usize, letters: Vec<i32>) -> BraidWord {
    BraidWord::new(strands, letters).expect("generated letters are in range")
}

fn repeat(letters: &[i32], times: usize) -> Vec<i32> {
    letters.repeat(times)
}

fn inverse_letters(letters: &[i32]) -> Vec<i32> {
    letters.iter().rev().map(|x| -x).collect()
}

/// `(σ₁σ₂⋯σ_{m-1})^n` in `B_m`.
pub fn torus_word(m: usize, n: usize) -> Result<BraidWord, ReplicationError> {
    if m == 0 {
        return Err(ReplicationError::Parameter("torus_word needs m >= 1".into()));
    }
    let period: Vec<i32> = (1..m as i32).collect();
    Ok(word(m, repeat(&period, n)))
}

/// `(b a⁴ b a³ (b a⁵)^{l-1})²` in `B_3`, a positive braid for `T(3, 6l+3)`.
pub fn three_strand_torus_word(l: usize) -> Result<BraidWord, ReplicationError> {
    if l == 0 {
        return Err(ReplicationError::Parameter("three_strand_torus_word needs l >= 1".into()));
    }
    let mut half = vec![B, A, A, A, A, B, A, A, A];
    for _ in 1..l {
        half.extend([B, A, A, A, A, A]);
    }
    Ok(word(3, repeat(&half, 2)))
}

/// `(ace)^{4l+2}` followed by the 2-cable of [`three_strand_torus_word`]; a positive braid
/// for `T(6, 12l+6)` with `60l+30` letters.
pub fn cabled_torus_word(l: usize) -> Result<BraidWord, ReplicationError> {
    let core = cable2(&three_strand_torus_word(l)?)?;
    let mut letters = repeat(&[1, 3, 5], 4 * l + 2);
    letters.extend_from_slice(core.letters());
    Ok(word(6, letters))
}

/// Stages of the four-strand reduction after `a⁻³c⁻³`:
/// each entry is a word followed by the cube positions (relative to the word)
/// removed from it, in order.
/// A stage word and its cube positions `(pos, gen)`.
type Stage = (Vec<i32>, Vec<(usize, i32)>);

fn fourstrand_stages(coxeter: bool) -> Vec<Stage> {
    // γ = (a²cba³cb)⁴ → (a²(cb)²)⁴
    let gamma = repeat(&[A, A, C, B, A, A, A, C, B], 4);
    let gamma_cubes = (0..4).map(|i| (4 + 6 * i, A)).collect();
    // c²(a²bc³)³a²bc → c²(a²b)³a²bc
    let mut second = vec![C, C];
    second.extend(repeat(&[A, A, B, C, C, C], 3));
    second.extend([A, A, B, C]);
    let second_cubes = (0..3).map(|i| (5 + 3 * i, C)).collect();
    // δ = c²(a³b)³c → c²a³c: the second and third a³, then b³
    let mut delta = vec![C, C];
    delta.extend(repeat(&[A, A, A, B], 3));
    delta.push(C);
    let delta_cubes = vec![(6, A), (7, A), (5, B)];
    let mut stages = vec![(gamma, gamma_cubes), (second, second_cubes), (delta, delta_cubes)];
    if coxeter {
        stages.push((vec![C, C, C, A, A, A], vec![(0, C), (0, A)]));
    }
    stages
}

/// Steps taking `prefix · head · X · suffix` to `prefix · suffix`, where `X`
/// is `(abc)¹²` rewritten through the four-strand stages and `head` is
/// `a⁻³c⁻³` (or nothing for the twelve-cube variant).
fn fourstrand_script(
    closure: usize,
    strands: usize,
    prefix: &[i32],
    suffix: &[i32],
    coxeter: bool,
) -> Vec<Step> {
    let head: Vec<i32> = if coxeter { vec![] } else { vec![-A, -A, -A, -C, -C, -C] };
    let offset = prefix.len() + head.len();
    let mut steps = Vec::new();
    for (stage, cubes) in fourstrand_stages(coxeter) {
        let mut target = prefix.to_vec();
        target.extend(&head);
        target.extend(&stage);
        target.extend(suffix);
        steps.push(Step::Equiv {
            closure,
            target: word(strands, target),
        });
        for (pos, gen) in cubes {
            steps.push(Step::Tcube {
                closure,
                pos: offset + pos,
                gen: gen as u32,
                sign: 1,
            });
        }
    }
    let mut rest = prefix.to_vec();
    rest.extend(suffix);
    steps.push(Step::Equiv {
        closure,
        target: word(strands, rest),
    });
    steps
}

fn abc12() -> Vec<i32> {
    repeat(&[A, B, C], 12)
}

/// `a⁻³c⁻³(abc)¹²` in `B_4` to the trivial braid by ten cube removals.
pub fn fourstrand_certificate() -> CobordismCertificate {
    let mut start = vec![-A, -A, -A, -C, -C, -C];
    start.extend(abc12());
    CobordismCertificate {
        start: FormalLink::closure(word(4, start)),
        steps: fourstrand_script(0, 4, &[], &[], false),
        end: FormalLink {
            closures: vec![BraidWord::identity(4)],
            tpos: 10,
            ..Default::default()
        },
        meta: "a^-3 c^-3 (abc)^12 in B_4 to the trivial braid by 10 cube removals".into(),
    }
}

/// `(abc)¹²` in `B_4` to the trivial braid by twelve cube removals.
pub fn coxeter_certificate() -> CobordismCertificate {
    CobordismCertificate {
        start: FormalLink::closure(word(4, abc12())),
        steps: fourstrand_script(0, 4, &[], &[], true),
        end: FormalLink {
            closures: vec![BraidWord::identity(4)],
            tpos: 12,
            ..Default::default()
        },
        meta: "(abc)^12 in B_4 to the trivial braid by 12 cube removals".into(),
    }
}

/// Steps taking an unknot `B_1[]` carrying `d` extra positive trefoils to
/// the bare unknot, two saddles per trefoil.
fn unstack_trefoils(closure: usize, d: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    if d == 0 {
        return steps;
    }
    for _ in 0..d {
        steps.push(Step::MergeTrefoil { closure, sign: 1 });
    }
    // σ₁³σ₂³⋯σ_d³ → σ₁²σ₁⁻¹σ₂²σ₂⁻¹⋯
    for i in 0..d {
        steps.push(Step::CrossingChange { closure, pos: 3 * i + 2 });
    }
    steps.push(Step::Equiv {
        closure,
        target: word(d + 1, (1..=d as i32).collect()),
    });
    for _ in 0..d {
        steps.push(Step::Destab { closure });
    }
    steps
}

/// Steps adding `d` positive trefoils to an unknot `B_1[]`.
fn stack_trefoils(closure: usize, d: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    if d == 0 {
        return steps;
    }
    for _ in 0..d {
        steps.push(Step::Stab { closure, sign: 1 });
    }
    let mut padded = Vec::new();
    for i in 1..=d as i32 {
        padded.extend([i, i, -i]);
    }
    steps.push(Step::Equiv {
        closure,
        target: word(d + 1, padded),
    });
    for i in 0..d {
        steps.push(Step::CrossingChange { closure, pos: 3 * i + 2 });
    }
    for _ in 0..d {
        steps.push(Step::SplitTrefoil { closure, sign: 1 });
    }
    steps
}

/// `3_1^{n'}` to `3_1^n` by `n' − n` crossing changes.
pub fn trefoil_stack_certificate(n: u64, n_prime: u64) -> Result<CobordismCertificate, ReplicationError> {
    if n_prime < n {
        return Err(ReplicationError::Parameter(format!(
            "trefoil stack needs n' >= n, got n={n}, n'={n_prime}"
        )));
    }
    Ok(CobordismCertificate {
        start: FormalLink::trefoils(n_prime),
        steps: unstack_trefoils(0, (n_prime - n) as usize),
        end: FormalLink::trefoils(n),
        meta: format!("3_1^{n_prime} to 3_1^{n} by {} crossing changes", n_prime - n),
    })
}

/// The cabled word with its framing slid along the core: three `a` and three
/// `c` right after every `Z⁵` group, the remaining framing letters at the end.
/// Returns the word and the number of trailing framing letters.
fn framing_slid_word(l: usize) -> (Vec<i32>, usize) {
    // Framing letters are carried in three pair slots (a, c, e). Passing Z
    // swaps the a and c slots; passing Y swaps the c and e slots.
    let mut pool = [4 * l + 2; 3];
    let mut half: Vec<(bool, bool)> = Vec::new(); // (is Z, ends a Z⁵ group)
    let push_run = |half: &mut Vec<(bool, bool)>, zs: usize, closes_group: bool| {
        half.push((false, false));
        for i in 0..zs {
            half.push((true, closes_group && i + 1 == zs));
        }
    };
    push_run(&mut half, 4, false);
    push_run(&mut half, 3, false);
    for _ in 1..l {
        push_run(&mut half, 5, true);
    }
    let core: Vec<(bool, bool)> = half.iter().chain(half.iter()).copied().collect();

    let mut out = Vec::new();
    for (is_z, closes) in core {
        if is_z {
            out.extend(Z);
            pool.swap(0, 1);
        } else {
            out.extend(Y);
            pool.swap(1, 2);
        }
        if closes {
            assert!(pool[0] >= 3 && pool[1] >= 3, "framing pool exhausted");
            pool[0] -= 3;
            pool[1] -= 3;
            out.extend([A, A, A, C, C, C]);
        }
    }
    let leftover = pool.iter().sum();
    for (slot, count) in pool.iter().enumerate() {
        out.extend(std::iter::repeat_n(2 * slot as i32 + 1, *count));
    }
    (out, leftover)
}

/// `Y Z⁵ a³c³`, one period of the saddle-phase result `β`.
fn beta_period() -> Vec<i32> {
    let mut p = Y.to_vec();
    p.extend(repeat(&Z, 5));
    p.extend([A, A, A, C, C, C]);
    p
}

/// `P = Y Z⁻¹`, one period of `α`.
fn alpha_period() -> Vec<i32> {
    let mut p = Y.to_vec();
    p.extend(inverse_letters(&Z));
    p
}

/// Cuts `w1 · w2` in `B_m` into a braid whose closure is the connected sum of
/// the two closures along strand 1. Junction strand `q` (for `q = 6, …, 2`) is
/// brought to the top by conjugating with `σ_q ⋯ σ_{m-1}`, which moves its
/// closing arc along with it, and is then cut against a fresh stabilization.
fn cut_steps(closure: usize, w1: Vec<i32>, w2: Vec<i32>, strands: usize) -> (Vec<Step>, BraidWord) {
    let (mut w1, mut w2, mut m) = (w1, w2, strands);
    let mut steps = Vec::new();
    for q in (2..=6).rev() {
        let h: Vec<i32> = (q..m as i32).collect();
        if !h.is_empty() {
            let hi = inverse_letters(&h);
            let conj = |x: &[i32]| -> Vec<i32> {
                let mut v = hi.clone();
                v.extend(x);
                v.extend(&h);
                v
            };
            w1 = conj(&w1);
            w2 = conj(&w2);
            steps.push(Step::Conj {
                closure,
                by: word(m, h.clone()),
            });
            let mut target = w1.clone();
            target.extend(&w2);
            steps.push(Step::Equiv {
                closure,
                target: word(m, target),
            });
        }
        steps.push(Step::Stab { closure, sign: 1 });
        let top = m as i32;
        steps.push(Step::SaddleInsert {
            closure,
            pos: w1.len(),
            letter: -top,
        });
        w2 = std::iter::once(-top).chain(w2).chain(std::iter::once(top)).collect();
        m += 1;
    }
    let mut last = w1;
    last.extend(w2);
    (steps, word(m, last))
}

/// Summary of the pieces of a sixstrand certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SixstrandPlan {
    pub l: usize,
    pub framing_saddles: usize,
    pub tcubes: usize,
    pub cut_saddles: usize,
    /// Components of the closure of `P^{l-1}`.
    pub half_components: usize,
    /// Components of the unlink the cut braid is concordant to.
    pub unlink_components: usize,
    pub unknot_saddles: usize,
    pub adjustment_trefoils: usize,
    /// Braid for `L # L` right after the cuts.
    pub cut_word: BraidWord,
}

/// `T(6, 12l+6)` to `3_1^{20l}`.
pub fn sixstrand_certificate(l: usize) -> Result<(CobordismCertificate, SixstrandPlan), ReplicationError> {
    if l < 2 {
        return Err(ReplicationError::Parameter(format!("sixstrand needs l >= 2, got {l}")));
    }
    let start = cabled_torus_word(l)?;
    let mut steps = Vec::new();

    // Framing slide, then delete leftovers and the two short blocks.
    let (slid, leftover) = framing_slid_word(l);
    steps.push(Step::Equiv {
        closure: 0,
        target: word(6, slid.clone()),
    });
    let mut len = slid.len();
    for _ in 0..leftover {
        len -= 1;
        steps.push(Step::SaddleDelete { closure: 0, pos: len });
    }
    let short_block = 36; // Y Z⁴ Y Z³
    let second_block = short_block + 30 * (l - 1);
    for pos in [second_block, 0] {
        for _ in 0..short_block {
            steps.push(Step::SaddleDelete { closure: 0, pos });
        }
    }
    let framing_saddles = leftover + 2 * short_block;
    let periods = 2 * l - 2;

    // Each period Y Z⁵a³c³ = Y Z⁻¹ · a⁻³c⁻³(abc)¹² loses ten cubes.
    let beta = beta_period();
    let alpha_p = alpha_period();
    for j in 0..periods {
        let mut prefix = repeat(&alpha_p, j);
        prefix.extend(&alpha_p);
        let suffix = repeat(&beta, periods - j - 1);
        steps.extend(fourstrand_script(0, 6, &prefix, &suffix, false));
    }
    let tcubes = 10 * periods;

    // Five cuts to L # L with L the closure of P^{l-1}.
    let half = repeat(&alpha_p, l - 1);
    let (cut, cut_word) = cut_steps(0, half.clone(), half.clone(), 6);
    let cut_saddles = cut.iter().map(Step::cost).sum::<u64>() as usize;
    steps.extend(cut);
    let half_components = word(6, half).components();
    let unlink_components = cut_word.components();

    // L # L is concordant to the unlink; free reduction keeps the word short.
    steps.push(Step::Equiv {
        closure: 0,
        target: cut_word.free_reduce(),
    });
    let k = unlink_components;
    steps.push(Step::Concordance {
        closure: 0,
        to: ConcordanceTarget::Word(BraidWord::identity(k)),
        justification: "L # L with L isotopic to its mirror image is smoothly concordant to the unlink".into(),
    });
    for i in 1..k {
        steps.push(Step::SaddleInsert {
            closure: 0,
            pos: i - 1,
            letter: i as i32,
        });
    }
    for _ in 1..k {
        steps.push(Step::Destab { closure: 0 });
    }

    // Top up from 20l − 20 to 20l trefoils.
    let adjustment_trefoils = 20;
    steps.extend(stack_trefoils(0, adjustment_trefoils));

    let cert = CobordismCertificate {
        start: FormalLink::closure(start),
        steps,
        end: FormalLink::trefoils(20 * l as u64),
        meta: format!(
            "T(6,{}) to 3_1^{}: framing slide with {framing_saddles} saddles, {tcubes} cube removals, \
             5 cuts to L#L, concordance to the {k}-component unlink, {} saddles to the unknot, \
             {adjustment_trefoils} trefoils added by crossing changes",
            12 * l + 6,
            20 * l,
            k - 1
        ),
    };
    let plan = SixstrandPlan {
        l,
        framing_saddles,
        tcubes,
        cut_saddles,
        half_components,
        unlink_components: k,
        unknot_saddles: k - 1,
        adjustment_trefoils,
        cut_word,
    };
    Ok((cert, plan))
}

/// Cost of the sixstrand construction without building it; `l = 1` means the
/// framing slide alone reaches the six-component unlink.
pub fn sixstrand_cost(l: usize) -> u64 {
    if l <= 1 {
        return 90 + 5 + 40;
    }
    let c = word(6, repeat(&alpha_period(), l - 1)).components() as u64;
    90 + 20 * (l as u64 - 1) + 5 + (2 * c - 2) + 40
}

/// `(σ₁⋯σ₅)^{-1-6kl} · T(6k, 6l)` in `B_{6k}`, a knot when `k` and `l` are
/// coprime.
pub fn knot_k_word(k: usize, l: usize) -> Result<BraidWord, ReplicationError> {
    if k == 0 || l == 0 {
        return Err(ReplicationError::Parameter(format!("k and l must be positive, got ({k}, {l})")));
    }
    if k.gcd(&l) != 1 {
        return Err(ReplicationError::NotCoprime { k: k as u64, l: l as u64 });
    }
    let twist = inverse_letters(&repeat(&[1, 2, 3, 4, 5], 1 + 6 * k * l));
    let mut letters = twist;
    letters.extend(torus_word(6 * k, 6 * l)?.letters());
    Ok(word(6 * k, letters))
}

/// Upper bound `2t + 10` on the distance from `T(6k, 6l)` to
/// `T(6, 6kl) # 3_1^t`.
pub fn twisting_bound(k: u64, l: u64, t: u64) -> Result<u64, ReplicationError> {
    if k == 0 || l == 0 {
        return Err(ReplicationError::Parameter(format!("k and l must be positive, got ({k}, {l})")));
    }
    if k.gcd(&l) != 1 {
        return Err(ReplicationError::NotCoprime { k, l });
    }
    if 2 * t < (k - 1) * (l - 1) {
        return Err(ReplicationError::Parameter(format!(
            "t={t} is below (k-1)(l-1)/2 for k={k}, l={l}"
        )));
    }
    Ok(2 * t + 10)
}

/// Four-genus bound on the knot `K` of [`knot_k_word`].
pub fn genus_side(t: u64) -> u64 {
    t
}

/// Estimate `5mn/18` for `σ₆(T(m, n))` with its tolerance: `2m` when `6 | m`,
/// otherwise `2m + 15`.
pub fn sigma6_estimate(m: u64, n: u64) -> (Ratio<i64>, u64) {
    let est = Ratio::new(5 * (m * n) as i64, 18);
    let tol = if m.is_multiple_of(6) { 2 * m } else { 2 * m + 15 };
    (est, tol)
}

/// Constants of the asymptotic lower bound `5mn/18 − Am − Bn − C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundConstants {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants { a: 20, b: 20, c: 200 }
    }
}

pub fn clover_bound_with(m: u64, n: u64, k: BoundConstants) -> Ratio<i64> {
    Ratio::new(5 * (m * n) as i64, 18) - Ratio::from_integer(k.a * m as i64 + k.b * n as i64 + k.c)
}

pub fn clover_bound(m: u64, n: u64) -> Ratio<i64> {
    clover_bound_with(m, n, BoundConstants::default())
}

/// Largest `(m-1)·n` for which the lower bound uses an exact `σ₆`.
pub const EXACT_SIGMA6_LETTERS: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerSource {
    Sigma6,
    Estimate,
}

/// Chained upper bound and `σ₆` lower bound for the distance from `T(m, n)`
/// to `3_1^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub n_total: u64,
    pub k: u64,
    pub l: u64,
    pub t: u64,
    /// Parameter of the sixstrand step, `T(6, 12l′+6)`.
    pub l_prime: u64,
    /// Saddles from `T(m, n)` to `T(6k, 6l)`.
    pub rounding: u64,
    pub twisting: u64,
    /// Saddles from `T(6, 6kl)` to `T(6, 12l′+6)`.
    pub six_adjust: u64,
    pub sixstrand: u64,
    /// Crossing changes from `3_1^{20l′+t}` to `3_1^N`.
    pub trefoil_adjust: u64,
    pub upper: u64,
    pub lower: u64,
    pub lower_source: LowerSource,
    pub sigma6: Option<i64>,
    pub slack: i64,
    pub window: u64,
    pub pass: bool,
}

pub fn hypothesis_min(m: u64, n: u64) -> u64 {
    (7 * m * n).div_ceil(24)
}

fn nearest_multiple_index(x: u64) -> u64 {
    ((x + 3) / 6).max(1)
}

pub fn theorem_bound(
    m: u64,
    n: u64,
    n_total: u64,
    policy: PrecisionPolicy,
) -> Result<BoundReport, ReplicationError> {
    theorem_bound_with(m, n, n_total, policy, BoundConstants::default())
}

pub fn theorem_bound_with(
    m: u64,
    n: u64,
    n_total: u64,
    policy: PrecisionPolicy,
    constants: BoundConstants,
) -> Result<BoundReport, ReplicationError> {
    check_bound_args(m, n, n_total)?;
    let s = torus_sigma6_if_small(m, n, policy)?;
    assemble_bound(m, n, n_total, s, constants)
}

fn torus_sigma6_if_small(m: u64, n: u64, policy: PrecisionPolicy) -> Result<Option<i64>, ReplicationError> {
    if (m - 1) * n > EXACT_SIGMA6_LETTERS {
        return Ok(None);
    }
    Ok(Some(sigma6(&torus_word(m as usize, n as usize)?, policy)?.value))
}

fn check_bound_args(m: u64, n: u64, n_total: u64) -> Result<(), ReplicationError> {
    if m < 2 || n < 1 {
        return Err(ReplicationError::Parameter(format!("need m >= 2 and n >= 1, got ({m}, {n})")));
    }
    let min = hypothesis_min(m, n);
    if n_total < min {
        return Err(ReplicationError::Hypothesis { n_total, min });
    }
    Ok(())
}

fn assemble_bound(
    m: u64,
    n: u64,
    n_total: u64,
    sig: Option<i64>,
    constants: BoundConstants,
) -> Result<BoundReport, ReplicationError> {
    let k = nearest_multiple_index(m);
    let l0 = nearest_multiple_index(n);
    let l = (l0..).find(|x| x.gcd(&k) == 1).expect("coprime l exists");
    // Each letter of (σ₁⋯σ_{p-1})^q is one saddle: T(m, n) → T(m, 6l0) →
    // T(6k, 6l0) → T(6k, 6l), using T(p, q) = T(q, p) for the middle leg.
    let rounding = (m - 1) * n.abs_diff(6 * l0)
        + (6 * l0 - 1) * m.abs_diff(6 * k)
        + (6 * k - 1) * 6 * (l - l0);

    let t = ((k - 1) * (l - 1)).div_ceil(2);
    let twisting = twisting_bound(k, l, t)?;

    let target = 6 * k * l;
    let l_prime = ((target + 6) / 12).max(1);
    let six_adjust = 5 * target.abs_diff(12 * l_prime + 6);
    let sixstrand = sixstrand_cost(l_prime as usize);
    let trefoil_adjust = 2 * n_total.abs_diff(t + 20 * l_prime);
    let upper = rounding + twisting + six_adjust + sixstrand + trefoil_adjust;

    let (lower, lower_source) = if let Some(s) = sig {
        ((2 * n_total as i64 - s).unsigned_abs(), LowerSource::Sigma6)
    } else {
        let (est, tol) = sigma6_estimate(m, n);
        let bound = Ratio::from_integer(2 * n_total as i64) - est - Ratio::from_integer(tol as i64);
        (bound.ceil().to_integer().max(0) as u64, LowerSource::Estimate)
    };
    let window = (constants.a * m as i64 + constants.b * n as i64 + constants.c) as u64;
    let slack = upper as i64 - lower as i64;
    Ok(BoundReport {
        m,
        n,
        n_total,
        k,
        l,
        t,
        l_prime,
        rounding,
        twisting,
        six_adjust,
        sixstrand,
        trefoil_adjust,
        upper,
        lower,
        lower_source,
        sigma6: sig,
        slack,
        window,
        pass: lower <= upper && slack.unsigned_abs() <= window,
    })
}

/// Points `(m, n, ⌈7mn/24⌉ + offset)`, sorted.
pub fn bound_grid(ms: &[u64], ns: &[u64], offsets: &[u64]) -> Vec<(u64, u64, u64)> {
    let mut g: Vec<_> = ms
        .iter()
        .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
        .flat_map(|(m, n)| offsets.iter().map(move |&o| (m, n, hypothesis_min(m, n) + o)))
        .collect();
    g.sort_unstable();
    g.dedup();
    g
}

/// Evaluates [`theorem_bound`] over a grid in parallel, computing each
/// `σ₆(T(m, n))` once; output follows the grid order.
pub fn theorem_table(
    grid: &[(u64, u64, u64)],
    policy: PrecisionPolicy,
) -> Vec<Result<BoundReport, ReplicationError>> {
    let mut pairs: Vec<(u64, u64)> = grid.iter().map(|&(m, n, _)| (m, n)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let sigmas: std::collections::BTreeMap<(u64, u64), Result<Option<i64>, ReplicationError>> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let s = if m < 2 || n < 1 { Ok(None) } else { torus_sigma6_if_small(m, n, policy) };
            ((m, n), s)
        })
        .collect();
    grid.iter()
        .map(|&(m, n, total)| {
            check_bound_args(m, n, total)?;
            let s = sigmas[&(m, n)].clone()?;
            assemble_bound(m, n, total, s, BoundConstants::default())
        })
        .collect()
}

pub const BOUND_CSV_HEADER: &str = "m,n,N,upper,lower,slack,window,pass";

pub fn bound_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from(BOUND_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.m, r.n, r.n_total, r.upper, r.lower, r.slack, r.window, r.pass
        ));
    }
    out
}

/// One row of the `σ₆(T(m, n))` versus `5mn/18` comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimateRow {
    pub m: u64,
    pub n: u64,
    pub sigma6: i64,
    /// `5mn/18` as a reduced fraction.
    pub estimate: String,
    pub tolerance: u64,
    /// `|σ₆ − 5mn/18|` rounded up.
    pub deviation: u64,
    pub within: bool,
}

pub fn estimate_row(m: u64, n: u64, policy: PrecisionPolicy) -> Result<EstimateRow, ReplicationError> {
    if m == 0 || n == 0 {
        return Err(ReplicationError::Parameter(format!("need m, n >= 1, got ({m}, {n})")));
    }
    let s = sigma6(&torus_word(m as usize, n as usize)?, policy)?.value;
    let (est, tol) = sigma6_estimate(m, n);
    let dev = (Ratio::from_integer(s) - est).abs().ceil().to_integer() as u64;
    Ok(EstimateRow {
        m,
        n,
        sigma6: s,
        estimate: est.to_string(),
        tolerance: tol,
        deviation: dev,
        within: (Ratio::from_integer(s) - est).abs() <= Ratio::from_integer(tol as i64),
    })
}

/// Rows for `1 ≤ m ≤ mmax`, `1 ≤ n ≤ nmax`, in parallel, sorted by `(m, n)`.
pub fn estimate_table(mmax: u64, nmax: u64, policy: PrecisionPolicy) -> Vec<Result<EstimateRow, ReplicationError>> {
    let pts: Vec<(u64, u64)> = (1..=mmax).flat_map(|m| (1..=nmax).map(move |n| (m, n))).collect();
    pts.par_iter().map(|&(m, n)| estimate_row(m, n, policy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::{verify, Evaluated};

    #[test]
    fn word_shapes() {
        assert_eq!(torus_word(3, 4).unwrap().len(), 8);
        assert_eq!(cabled_torus_word(1).unwrap().len(), 90);
        assert_eq!(cabled_torus_word(2).unwrap().len(), 150);
        assert_eq!(cabled_torus_word(1).unwrap().components(), 6);
    }

    #[test]
    fn small_certificates() {
        assert_eq!(verify(&fourstrand_certificate()).unwrap().total_cost, 10);
        assert_eq!(verify(&coxeter_certificate()).unwrap().total_cost, 12);
        let r = verify(&trefoil_stack_certificate(2, 5).unwrap()).unwrap();
        assert_eq!(r.total_cost, 6);
        assert_eq!(r.lower_bound, Evaluated::Value(6));
        assert!(trefoil_stack_certificate(3, 3).unwrap().steps.is_empty());
    }

    #[test]
    fn sixstrand_l2() {
        let (cert, plan) = sixstrand_certificate(2).unwrap();
        let r = verify(&cert).unwrap();
        assert_eq!(r.total_cost, sixstrand_cost(2));
        assert_eq!(r.total_cost, 157);
        assert_eq!(plan.framing_saddles, 90);
        assert_eq!(plan.cut_saddles, 5);
        assert_eq!(plan.unlink_components, 2 * plan.half_components - 1);
        assert!(sixstrand_certificate(1).is_err());
    }

    #[test]
    fn twisting_and_genus() {
        assert_eq!(twisting_bound(2, 3, 1), Ok(12));
        assert_eq!(twisting_bound(1, 1, 0), Ok(10));
        assert!(matches!(twisting_bound(2, 2, 5), Err(ReplicationError::NotCoprime { .. })));
        assert!(twisting_bound(3, 4, 2).is_err());
        assert_eq!(genus_side(7), 7);
    }

    #[test]
    fn knot_k() {
        let w = knot_k_word(2, 1).unwrap();
        assert_eq!(w.strands(), 12);
        assert_eq!(w.components(), 1);
        let (k, l) = (2i64, 1i64);
        assert_eq!(w.exponent_sum(), 6 * l * (6 * k - 1) - 5 * (1 + 6 * k * l));
        assert!(knot_k_word(2, 2).is_err());
    }

    #[test]
    fn estimates() {
        assert_eq!(sigma6_estimate(6, 6), (Ratio::from_integer(10), 12));
        assert_eq!(sigma6_estimate(5, 6).1, 25);
        assert_eq!(clover_bound(6, 6), Ratio::from_integer(-430));
        let k = BoundConstants { a: 1, b: 2, c: 3 };
        assert_eq!(clover_bound_with(6, 6, k), Ratio::from_integer(10 - 6 - 12 - 3));
    }

    #[test]
    fn theorem_bound_hypothesis() {
        let p = PrecisionPolicy::default();
        assert_eq!(hypothesis_min(6, 6), 11);
        assert!(matches!(
            theorem_bound(6, 6, 10, p),
            Err(ReplicationError::Hypothesis { n_total: 10, min: 11 })
        ));
        let r = theorem_bound(6, 6, 11, p).unwrap();
        assert_eq!(r.lower_source, LowerSource::Sigma6);
        assert!(r.pass);
        assert_eq!(r.upper, r.rounding + r.twisting + r.six_adjust + r.sixstrand + r.trefoil_adjust);
    }

    #[test]
    fn csv_layout() {
        let rows: Vec<BoundReport> = theorem_table(&bound_grid(&[6], &[6, 12], &[0]), PrecisionPolicy::default())
            .into_iter()
            .collect::<Result<_, _>>()
            .unwrap();
        let csv = bound_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BOUND_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("6,6,11,"));
    }
}
