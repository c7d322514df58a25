//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always show.

use std::time::{Duration, Instant};

use braidcob::alexander::alexander;
use braidcob::cert::{link_sigma6, verify, Evaluated, FormalLink, Step};
use braidcob::replication::*;
use braidcob::signature::{
    sigma6, sigma6_theta, signature_at, signature_of_matrix, torus_signature_oracle, PrecisionPolicy,
    DEFAULT_PRECISION_BITS,
};
use braidcob::{equal, make_word, seifert_matrix, BraidWord};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 0x5eed_2024;
const IDENTITY_TIME: Duration = Duration::from_secs(1);
const TORUS6_MAX_M: u64 = 30;
const TORUS6_TOL: i64 = 12;
const TORUS6_TIME: Duration = Duration::from_secs(300);
const ESTIMATE_MS: [u64; 2] = [6, 12];
const ESTIMATE_MAX_N: u64 = 20;
const TREFOIL_MAX_N: u64 = 50;
const ORACLE_PS: [u64; 2] = [2, 3];
const ORACLE_MAX_Q: u64 = 13;
const ORACLE_THETAS: usize = 20;
const ORACLE_THETA_DEN: i64 = 10_007;
const STACK_PAIRS: usize = 10;
const STACK_MAX: u64 = 20;
const SIXSTRAND_LS: [usize; 2] = [2, 3];
const SIXSTRAND_WINDOW: i64 = 200;
const SIXSTRAND_TIME: Duration = Duration::from_secs(120);
const GRID: [u64; 3] = [6, 12, 18];
const GRID_OFFSETS: [u64; 3] = [0, 5, 10];
const AUDIT_MAX_L: usize = 3;
const AUDIT_THETAS: [(i64, i64); 5] = [(1, 7), (1, 5), (2, 7), (3, 7), (1, 2)];

type Criterion<'a> = (&'a str, Box<dyn FnOnce(&mut Vec<BraidWord>) -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn word(n: usize, letters: &[i32]) -> BraidWord {
    make_word(n, letters).unwrap()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let a = word(4, &[1, 2, 3].repeat(12));
    let b = word(4, &[1, 1, 3, 2, 1, 1, 1, 3, 2].repeat(4));
    let c = word(3, &[1, 1, 2].repeat(4));
    let d = word(3, &[1, 1, 1, 2].repeat(3));
    let first = equal(&a, &b).unwrap();
    let second = equal(&c, &d).unwrap();
    let t = start.elapsed();
    outcome(
        first && second && t < IDENTITY_TIME,
        format!("(abc)^12=(a2cba3cb)^4 {first}, (a2b)^4=(a3b)^3 {second}, {t:.2?}"),
    )
}

fn c2() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, cert, cubes) in [("fourstrand", fourstrand_certificate(), 10), ("coxeter", coxeter_certificate(), 12)] {
        let n_cubes = cert.steps.iter().filter(|s| matches!(s, Step::Tcube { .. })).count();
        let ok = match verify(&cert) {
            Ok(r) => {
                r.tcubes == cubes
                    && n_cubes == cubes
                    && cert.end.tpos == cubes as u64
                    && cert.end.closures.iter().all(|w| w.is_empty())
            }
            Err(_) => false,
        };
        pass &= ok;
        parts.push(format!("{name} {n_cubes} cubes {}", if ok { "ok" } else { "bad" }));
    }
    outcome(pass, parts.join(", "))
}

/// `σ₁³σ₂³⋯σ_N³` in `B_{N+1}`, the connected sum of `N` positive trefoils.
fn trefoil_sum(n: u64) -> BraidWord {
    let letters: Vec<i32> = (1..=n as i32).flat_map(|g| [g, g, g]).collect();
    word(n as usize + 1, &letters)
}

fn c3(words: &mut Vec<BraidWord>) -> Outcome {
    let p = PrecisionPolicy::default();
    let bad: Vec<u64> = (1..=TREFOIL_MAX_N)
        .into_par_iter()
        .filter(|&n| {
            let braid = sigma6(&trefoil_sum(n), p).map(|s| s.value);
            let formal = link_sigma6(&FormalLink::trefoils(n), p);
            braid != Ok(2 * n as i64) || formal != Ok(2 * n as i64)
        })
        .collect();
    words.extend((1..=TREFOIL_MAX_N).map(trefoil_sum));
    outcome(bad.is_empty(), format!("N = 1..{TREFOIL_MAX_N}, mismatches {bad:?}"))
}

fn c4(words: &mut Vec<BraidWord>) -> Outcome {
    let start = Instant::now();
    let p = PrecisionPolicy::default();
    let rows: Vec<(u64, Result<i64, String>)> = (1..=TORUS6_MAX_M)
        .into_par_iter()
        .map(|m| {
            let s = sigma6(&torus_word(6, m as usize).unwrap(), p).map(|s| s.value).map_err(|e| e.to_string());
            (m, s)
        })
        .collect();
    let t = start.elapsed();
    let mut worst = 0i64;
    let mut failures = Vec::new();
    for (m, s) in &rows {
        match s {
            Ok(v) => {
                // |v − 5m/3| ≤ 12  ⇔  |3v − 5m| ≤ 36
                let dev3 = (3 * v - 5 * *m as i64).abs();
                worst = worst.max(dev3);
                if dev3 > 3 * TORUS6_TOL {
                    failures.push(*m);
                }
            }
            Err(_) => failures.push(*m),
        }
    }
    words.extend((1..=TORUS6_MAX_M).map(|m| torus_word(6, m as usize).unwrap()));
    outcome(
        failures.is_empty() && t < TORUS6_TIME,
        format!("max |E(m)| = {:.2}, failures {failures:?}, {t:.2?}", worst as f64 / 3.0),
    )
}

fn c5(words: &mut Vec<BraidWord>) -> Outcome {
    let p = PrecisionPolicy::default();
    let pts: Vec<(u64, u64)> = ESTIMATE_MS.iter().flat_map(|&m| (1..=ESTIMATE_MAX_N).map(move |n| (m, n))).collect();
    let rows: Vec<_> = pts.par_iter().map(|&(m, n)| estimate_row(m, n, p)).collect();
    let mut failures = Vec::new();
    let mut worst = Ratio::from_integer(0i64);
    for ((m, n), r) in pts.iter().zip(&rows) {
        match r {
            Ok(r) => {
                let dev = (Ratio::from_integer(r.sigma6) - Ratio::new(5 * (m * n) as i64, 18)).abs();
                let ratio = dev / Ratio::from_integer(2 * *m as i64);
                worst = worst.max(ratio);
                if dev > Ratio::from_integer(2 * *m as i64) {
                    failures.push((*m, *n));
                }
            }
            Err(_) => failures.push((*m, *n)),
        }
    }
    words.extend(pts.iter().map(|&(m, n)| torus_word(m as usize, n as usize).unwrap()));
    outcome(
        failures.is_empty(),
        format!("{} links, max deviation / 2m = {:.3}, failures {failures:?}", pts.len(), *worst.numer() as f64 / *worst.denom() as f64),
    )
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in ORACLE_PS {
        for q in (1..=ORACLE_MAX_Q).filter(|q| q.gcd(&p) == 1) {
            let w = torus_word(p as usize, q as usize).unwrap();
            let mut done = 0;
            while done < ORACLE_THETAS {
                let theta = Ratio::new(rng.gen_range(1..ORACLE_THETA_DEN), ORACLE_THETA_DEN);
                let Ok(expected) = torus_signature_oracle(p, q, &theta) else { continue };
                let got = signature_at(&w, &theta, DEFAULT_PRECISION_BITS).map(|s| s.signature);
                if got != Ok(expected) {
                    failures.push((p, q, theta.to_string()));
                }
                done += 1;
                checked += 1;
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} comparisons, failures {failures:?}"))
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut failures = Vec::new();
    let mut pairs = Vec::new();
    while pairs.len() < STACK_PAIRS {
        let n = rng.gen_range(0..STACK_MAX);
        let np = rng.gen_range(n + 1..=STACK_MAX);
        pairs.push((n, np));
    }
    for &(n, np) in &pairs {
        let want = 2 * (np - n);
        let ok = trefoil_stack_certificate(n, np)
            .ok()
            .and_then(|c| verify(&c).ok())
            .is_some_and(|r| r.total_cost == want && r.lower_bound == Evaluated::Value(want as i64));
        if !ok {
            failures.push((n, np));
        }
    }
    outcome(failures.is_empty(), format!("pairs {pairs:?}, failures {failures:?}"))
}

fn c8() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for l in SIXSTRAND_LS {
        let start = Instant::now();
        let result = sixstrand_certificate(l).map_err(|e| e.to_string()).and_then(|(c, _)| verify(&c).map_err(|e| e.to_string()));
        let t = start.elapsed();
        match result {
            Ok(r) => {
                let s = r.sigma6_start.value();
                let err = s.map(|s| r.total_cost as i64 + s - 2 * 20 * l as i64);
                let ok = err.is_some_and(|e| e.abs() <= SIXSTRAND_WINDOW) && t < SIXSTRAND_TIME;
                pass &= ok;
                parts.push(format!(
                    "l={l}: cost {} sigma6 {} error {} in {t:.2?}",
                    r.total_cost,
                    r.sigma6_start,
                    err.map_or("n/a".into(), |e| e.to_string())
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("l={l}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn c9() -> Outcome {
    let grid = bound_grid(&GRID, &GRID, &GRID_OFFSETS);
    let rows = theorem_table(&grid, PrecisionPolicy::default());
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (pt, r) in grid.iter().zip(&rows) {
        match r {
            Ok(r) => {
                worst = worst.max(r.slack.unsigned_abs() as f64 / r.window as f64);
                if !(r.lower <= r.upper && r.slack.unsigned_abs() <= r.window && r.lower_source == LowerSource::Sigma6) {
                    failures.push(*pt);
                }
            }
            Err(_) => failures.push(*pt),
        }
    }
    outcome(failures.is_empty(), format!("{} points, max |slack|/window = {worst:.3}, failures {failures:?}", grid.len()))
}

fn invariants_agree(a: &BraidWord, b: &BraidWord) -> bool {
    a.components() == b.components()
        && a.exponent_sum() == b.exponent_sum()
        && alexander(a) == alexander(b)
        && AUDIT_THETAS.iter().all(|&(p, q)| {
            let t = Ratio::new(p, q);
            let x = signature_at(a, &t, DEFAULT_PRECISION_BITS).unwrap();
            let y = signature_at(b, &t, DEFAULT_PRECISION_BITS).unwrap();
            (x.signature, x.nullity) == (y.signature, y.nullity)
        })
}

fn c10() -> Outcome {
    let results: Vec<(usize, bool, bool, bool)> = (1..=AUDIT_MAX_L)
        .into_par_iter()
        .map(|l| {
            let three = invariants_agree(&three_strand_torus_word(l).unwrap(), &torus_word(3, 6 * l + 3).unwrap());
            let cable = cabled_torus_word(l).unwrap();
            let count = cable.len() == 60 * l + 30;
            let cab = invariants_agree(&cable, &torus_word(6, 12 * l + 6).unwrap());
            (l, three, count, cab)
        })
        .collect();
    let pass = results.iter().all(|&(_, a, b, c)| a && b && c);
    let detail = results
        .iter()
        .map(|(l, a, b, c)| format!("l={l} three-strand {a} count {b} cable {c}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn c11(words: &[BraidWord]) -> Outcome {
    let base = PrecisionPolicy::default();
    let doubled = PrecisionPolicy::with_start(2 * base.start_bits);
    let failures: Vec<String> = words
        .par_iter()
        .filter_map(|w| {
            let s = match sigma6(w, base) {
                Ok(s) => s,
                Err(e) => return Some(format!("{w}: {e}")),
            };
            let again = sigma6(w, doubled).map(|x| x.value);
            let extra = signature_of_matrix(&seifert_matrix(w), &sigma6_theta(s.halvings + 1), doubled);
            let ok = again == Ok(s.value)
                && extra.is_ok_and(|p| p.form_nullity == 0 && -p.signature == s.value);
            (!ok).then(|| format!("{} strands, {} letters", w.strands(), w.len()))
        })
        .collect();
    outcome(failures.is_empty(), format!("{} evaluations, failures {failures:?}", words.len()))
}

fn main() {
    let mut words = Vec::new();
    let criteria: Vec<Criterion> = vec![
        ("braid identities", Box::new(|_| c1())),
        ("four-strand and Coxeter certificates", Box::new(|_| c2())),
        ("sigma6 of trefoil sums", Box::new(c3)),
        ("sigma6(T(6,m)) within 12 of 5m/3", Box::new(c4)),
        ("sigma6(T(m,n)) within 2m of 5mn/18", Box::new(c5)),
        ("torus signatures match lattice count", Box::new(|_| c6())),
        ("trefoil stacks cost 2(n'-n) = lower bound", Box::new(|_| c7())),
        ("six-strand certificates within the window", Box::new(|_| c8())),
        ("bound grid: lower <= upper, slack in window", Box::new(|_| c9())),
        ("isotopy audits of displayed words", Box::new(|_| c10())),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = f(&mut words);
        report(i + 1, name, &o, start.elapsed());
        failed += usize::from(!o.pass);
    }
    let start = Instant::now();
    let o = c11(&words);
    report(11, "sigma6 stable under doubled precision and extra halving", &o, start.elapsed());
    failed += usize::from(!o.pass);
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn report(index: usize, name: &str, o: &Outcome, t: Duration) {
    println!(
        "criterion {index:>2}: {} | {name} | {} [{t:.1?}]",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
}
