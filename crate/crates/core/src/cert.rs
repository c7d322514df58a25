//! Formal link states, typed cobordism steps and a replaying verifier.
//!
//! A [`FormalLink`] is a disjoint union of braid closures together with
//! connected-sum counters of positive and negative trefoils and opaque
//! asserted summands. Each [`Step`] rewrites one closure and has a fixed cost
//! in saddles; a certificate's total cost bounds the cobordism distance of its
//! endpoints from above, while `|σ₆(start) − σ₆(end)|` bounds it from below.

use std::collections::HashMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::garside::{equal, normal_form, CanonicalBraid};
use crate::signature::{sigma6, PrecisionPolicy, SignatureError};

/// `σ₆` of an asserted summand: declared, or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclaredSigma6 {
    Known(i64),
    Unknown,
}

impl Serialize for DeclaredSigma6 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DeclaredSigma6::Known(v) => s.serialize_i64(*v),
            DeclaredSigma6::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for DeclaredSigma6 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(DeclaredSigma6::Known(v)),
            Raw::Text(t) if t == "unknown" => Ok(DeclaredSigma6::Unknown),
            Raw::Text(t) => Err(de::Error::custom(format!(
                "sigma6 must be an integer or \"unknown\", got {t:?}"
            ))),
        }
    }
}

/// A computed quantity that may be unavailable; serialized as an integer or
/// the string `"not evaluated"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluated<T> {
    Value(T),
    NotEvaluated,
}

impl<T: Copy> Evaluated<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            Evaluated::Value(v) => Some(*v),
            Evaluated::NotEvaluated => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Evaluated<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluated::Value(v) => write!(f, "{v}"),
            Evaluated::NotEvaluated => write!(f, "not evaluated"),
        }
    }
}

impl<T: Serialize> Serialize for Evaluated<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Evaluated::Value(v) => v.serialize(s),
            Evaluated::NotEvaluated => s.serialize_str("not evaluated"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Evaluated<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw<T> {
            Value(T),
            Text(String),
        }
        match Raw::<T>::deserialize(d)? {
            Raw::Value(v) => Ok(Evaluated::Value(v)),
            Raw::Text(t) if t == "not evaluated" => Ok(Evaluated::NotEvaluated),
            Raw::Text(t) => Err(de::Error::custom(format!("unexpected value {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertedSummand {
    pub label: String,
    pub components: usize,
    pub sigma6: DeclaredSigma6,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalLink {
    pub closures: Vec<BraidWord>,
    #[serde(default)]
    pub tpos: u64,
    #[serde(default)]
    pub tneg: u64,
    #[serde(default)]
    pub asserted: Vec<AssertedSummand>,
}

impl FormalLink {
    pub fn closure(w: BraidWord) -> Self {
        FormalLink {
            closures: vec![w],
            ..Default::default()
        }
    }

    pub fn unknot() -> Self {
        Self::closure(BraidWord::identity(1))
    }

    /// `3_1^N` as an unknot carrying `N` positive trefoil summands.
    pub fn trefoils(n: u64) -> Self {
        FormalLink {
            tpos: n,
            ..Self::unknot()
        }
    }

    /// Trefoil summands are attached to existing components and add none.
    pub fn components(&self) -> usize {
        self.closures.iter().map(BraidWord::components).sum::<usize>()
            + self.asserted.iter().map(|a| a.components).sum::<usize>()
    }

    fn canonical_closures(&self) -> Vec<CanonicalBraid> {
        let mut forms: Vec<CanonicalBraid> = self.closures.iter().map(normal_form).collect();
        forms.sort_by_cached_key(|c| c.to_string());
        forms
    }

    /// Same multiset of group elements, counters and assertions.
    pub fn same_state(&self, other: &FormalLink) -> bool {
        self.diff(other).is_empty()
    }

    /// Human-readable differences; empty when the states agree.
    pub fn diff(&self, other: &FormalLink) -> Vec<String> {
        let mut out = Vec::new();
        if self.tpos != other.tpos {
            out.push(format!("tpos {} vs {}", self.tpos, other.tpos));
        }
        if self.tneg != other.tneg {
            out.push(format!("tneg {} vs {}", self.tneg, other.tneg));
        }
        let count = |v: &[AssertedSummand]| {
            let mut m: HashMap<AssertedSummand, usize> = HashMap::new();
            for a in v {
                *m.entry(a.clone()).or_default() += 1;
            }
            m
        };
        if count(&self.asserted) != count(&other.asserted) {
            out.push("asserted summands differ".to_string());
        }
        if self.closures.len() != other.closures.len() {
            out.push(format!(
                "{} closures vs {}",
                self.closures.len(),
                other.closures.len()
            ));
        } else if self.canonical_closures() != other.canonical_closures() {
            let mut unmatched: Vec<&BraidWord> = other.closures.iter().collect();
            for w in &self.closures {
                let hit = unmatched
                    .iter()
                    .position(|u| u.strands() == w.strands() && equal(w, u).unwrap_or(false));
                match hit {
                    Some(i) => {
                        unmatched.remove(i);
                    }
                    None => out.push(format!("closure {w} has no equal counterpart")),
                }
            }
        }
        out
    }
}

impl fmt::Display for FormalLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.closures.iter().map(|w| w.to_string()).collect();
        if self.tpos > 0 {
            parts.push(format!("3_1^{}", self.tpos));
        }
        if self.tneg > 0 {
            parts.push(format!("(-3_1)^{}", self.tneg));
        }
        for a in &self.asserted {
            parts.push(format!("<{}>", a.label));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Where a concordance assertion sends a closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConcordanceTarget {
    Word(BraidWord),
    Asserted(AssertedSummand),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    /// Replace the word by a group-equal one.
    Equiv { closure: usize, target: BraidWord },
    /// `w ↦ g⁻¹ w g`.
    Conj { closure: usize, by: BraidWord },
    /// `w ↦ w σ_n^{±1}` in `B_{n+1}`.
    Stab { closure: usize, sign: i32 },
    Destab { closure: usize },
    SaddleDelete { closure: usize, pos: usize },
    SaddleInsert { closure: usize, pos: usize, letter: i32 },
    /// Deletes `σ_gen^{3·sign}` at `pos` and adds a trefoil of that sign.
    Tcube { closure: usize, pos: usize, gen: u32, sign: i32 },
    CrossingChange { closure: usize, pos: usize },
    Concordance {
        closure: usize,
        to: ConcordanceTarget,
        #[serde(default)]
        justification: String,
    },
    /// Splits a closure whose word avoids `σ_at` into a disjoint union.
    Split { closure: usize, at: usize },
    /// Disjoint union of two closures, `with` placed on the upper strands.
    Merge { closure: usize, with: usize },
    /// `u σ_{n-1}^{±3}` with `u ∈ B_{n-1}` becomes `u` plus a trefoil summand.
    SplitTrefoil { closure: usize, sign: i32 },
    /// Inverse of `SplitTrefoil`, consuming a trefoil summand.
    MergeTrefoil { closure: usize, sign: i32 },
}

impl Step {
    /// Cost in saddles.
    pub fn cost(&self) -> u64 {
        match self {
            Step::SaddleDelete { .. } | Step::SaddleInsert { .. } | Step::Tcube { .. } => 1,
            Step::CrossingChange { .. } => 2,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Step::Equiv { .. } => "equiv",
            Step::Conj { .. } => "conj",
            Step::Stab { .. } => "stab",
            Step::Destab { .. } => "destab",
            Step::SaddleDelete { .. } => "saddle_delete",
            Step::SaddleInsert { .. } => "saddle_insert",
            Step::Tcube { .. } => "tcube",
            Step::CrossingChange { .. } => "crossing_change",
            Step::Concordance { .. } => "concordance",
            Step::Split { .. } => "split",
            Step::Merge { .. } => "merge",
            Step::SplitTrefoil { .. } => "split_trefoil",
            Step::MergeTrefoil { .. } => "merge_trefoil",
        }
    }

    pub fn closure(&self) -> usize {
        match self {
            Step::Equiv { closure, .. }
            | Step::Conj { closure, .. }
            | Step::Stab { closure, .. }
            | Step::Destab { closure }
            | Step::SaddleDelete { closure, .. }
            | Step::SaddleInsert { closure, .. }
            | Step::Tcube { closure, .. }
            | Step::CrossingChange { closure, .. }
            | Step::Concordance { closure, .. }
            | Step::Split { closure, .. }
            | Step::Merge { closure, .. }
            | Step::SplitTrefoil { closure, .. }
            | Step::MergeTrefoil { closure, .. } => *closure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismCertificate {
    pub start: FormalLink,
    pub steps: Vec<Step>,
    pub end: FormalLink,
    #[serde(default)]
    pub meta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepVerdict {
    pub index: usize,
    pub op: String,
    pub cost: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub total_cost: u64,
    pub tcubes: usize,
    pub sigma6_start: Evaluated<i64>,
    pub sigma6_end: Evaluated<i64>,
    pub lower_bound: Evaluated<i64>,
    pub bound_ok: Evaluated<bool>,
    pub step_log: Vec<StepVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("step {index} ({op}): {reason}")]
    Step {
        index: usize,
        op: &'static str,
        reason: String,
    },
    #[error("replayed end state differs from the declared one: {}", .0.join("; "))]
    EndMismatch(Vec<String>),
    #[error("endpoints do not match: {}", .0.join("; "))]
    ComposeMismatch(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sigma6Error {
    #[error("asserted summand {0:?} has no declared sigma6")]
    UnknownSummand(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// `σ₆` of a formal link: additive over closures, `±2` per trefoil summand,
/// declared values for assertions.
pub fn link_sigma6(link: &FormalLink, policy: PrecisionPolicy) -> Result<i64, Sigma6Error> {
    let mut total = 2 * link.tpos as i64 - 2 * link.tneg as i64;
    for a in &link.asserted {
        match a.sigma6 {
            DeclaredSigma6::Known(v) => total += v,
            DeclaredSigma6::Unknown => return Err(Sigma6Error::UnknownSummand(a.label.clone())),
        }
    }
    for w in &link.closures {
        total += sigma6(w, policy)?.value;
    }
    Ok(total)
}

/// Replays certificates at a fixed precision policy.
#[derive(Debug, Clone, Copy, Default)]
pub struct Verifier {
    pub policy: PrecisionPolicy,
}

fn unit_sign(sign: i32) -> Result<i32, String> {
    match sign {
        1 | -1 => Ok(sign),
        _ => Err(format!("sign must be 1 or -1, got {sign}")),
    }
}

fn checked(r: Result<BraidWord, BraidError>) -> Result<BraidWord, String> {
    r.map_err(|e| e.to_string())
}

impl Verifier {
    pub fn new(policy: PrecisionPolicy) -> Self {
        Verifier { policy }
    }

    /// Applies one step, returning the new state and a note for the log.
    pub fn apply_step(&self, state: &FormalLink, step: &Step) -> Result<(FormalLink, String), String> {
        let mut next = state.clone();
        let idx = step.closure();
        if idx >= next.closures.len() {
            return Err(format!(
                "closure {idx} does not exist ({} closures)",
                next.closures.len()
            ));
        }
        let current = next.closures[idx].clone();
        let n = current.strands();
        let mut letters = current.letters().to_vec();

        let replacement: BraidWord = match step {
            Step::Equiv { target, .. } => {
                let same = equal(&current, target).map_err(|e| e.to_string())?;
                if !same {
                    return Err(format!("{current} and {target} are different braids"));
                }
                target.clone()
            }
            Step::Conj { by, .. } => {
                let c = by.invert().compose(&current).and_then(|x| x.compose(by));
                checked(c)?
            }
            Step::Stab { sign, .. } => current.markov_stabilize(unit_sign(*sign)? > 0),
            Step::Destab { .. } => checked(current.markov_destabilize())?,
            Step::SaddleDelete { pos, .. } => {
                if *pos >= letters.len() {
                    return Err(format!("no letter at position {pos} (length {})", letters.len()));
                }
                letters.remove(*pos);
                checked(BraidWord::new(n, letters))?
            }
            Step::SaddleInsert { pos, letter, .. } => {
                if *pos > letters.len() {
                    return Err(format!("position {pos} past the end (length {})", letters.len()));
                }
                letters.insert(*pos, *letter);
                checked(BraidWord::new(n, letters))?
            }
            Step::Tcube { pos, gen, sign, .. } => {
                let s = unit_sign(*sign)?;
                let x = s * *gen as i32;
                if letters.get(*pos..*pos + 3) != Some(&[x, x, x][..]) {
                    return Err(format!("no cube of {x} at position {pos} in {current}"));
                }
                letters.drain(*pos..*pos + 3);
                if s > 0 {
                    next.tpos += 1;
                } else {
                    next.tneg += 1;
                }
                checked(BraidWord::new(n, letters))?
            }
            Step::CrossingChange { pos, .. } => {
                let Some(x) = letters.get_mut(*pos) else {
                    return Err(format!("no letter at position {pos} (length {})", current.len()));
                };
                *x = -*x;
                checked(BraidWord::new(n, letters))?
            }
            Step::Concordance { to, .. } => {
                return self.concordance(next, idx, &current, to);
            }
            Step::Split { at, .. } => {
                if *at == 0 || *at >= n {
                    return Err(format!("split point {at} outside 1..{}", n - 1));
                }
                let at = *at as i32;
                if letters.iter().any(|x| x.abs() == at) {
                    return Err(format!("generator {at} occurs in {current}"));
                }
                let lower: Vec<i32> = letters.iter().copied().filter(|x| x.abs() < at).collect();
                let upper: Vec<i32> = letters
                    .iter()
                    .filter(|x| x.abs() > at)
                    .map(|x| x.signum() * (x.abs() - at))
                    .collect();
                let upper = checked(BraidWord::new(n - at as usize, upper))?;
                next.closures.insert(idx + 1, upper);
                checked(BraidWord::new(at as usize, lower))?
            }
            Step::Merge { with, .. } => {
                if *with == idx || *with >= next.closures.len() {
                    return Err(format!("cannot merge closure {idx} with {with}"));
                }
                let other = next.closures[*with].clone();
                let total = n + other.strands();
                let merged = checked(current.widened(total))?
                    .compose(&checked(other.shifted(n, total))?)
                    .map_err(|e| e.to_string())?;
                next.closures[idx] = merged.clone();
                next.closures.remove(*with);
                return Ok((next, String::new()));
            }
            Step::SplitTrefoil { sign, .. } => {
                let s = unit_sign(*sign)?;
                let top = n as i32 - 1;
                let len = letters.len();
                let tail_ok = len >= 3 && letters[len - 3..] == [s * top; 3];
                if n < 2 || !tail_ok || letters[..len - 3].iter().any(|x| x.abs() == top) {
                    return Err(format!("{current} is not u·σ_{top}^{} with u on fewer strands", 3 * s));
                }
                letters.truncate(len - 3);
                if s > 0 {
                    next.tpos += 1;
                } else {
                    next.tneg += 1;
                }
                checked(BraidWord::new(n - 1, letters))?
            }
            Step::MergeTrefoil { sign, .. } => {
                let s = unit_sign(*sign)?;
                let counter = if s > 0 { &mut next.tpos } else { &mut next.tneg };
                if *counter == 0 {
                    return Err("no trefoil summand of that sign to merge".to_string());
                }
                *counter -= 1;
                letters.extend([s * n as i32; 3]);
                checked(BraidWord::new(n + 1, letters))?
            }
        };
        next.closures[idx] = replacement;
        Ok((next, String::new()))
    }

    fn concordance(
        &self,
        mut next: FormalLink,
        idx: usize,
        current: &BraidWord,
        to: &ConcordanceTarget,
    ) -> Result<(FormalLink, String), String> {
        let (components, declared) = match to {
            ConcordanceTarget::Word(w) => (w.components(), sigma6(w, self.policy).ok().map(|s| s.value)),
            ConcordanceTarget::Asserted(a) => (
                a.components,
                match a.sigma6 {
                    DeclaredSigma6::Known(v) => Some(v),
                    DeclaredSigma6::Unknown => None,
                },
            ),
        };
        if components != current.components() {
            return Err(format!(
                "component count {} of {current} differs from target's {components}",
                current.components()
            ));
        }
        let source = sigma6(current, self.policy).ok().map(|s| s.value);
        let note = match (source, declared) {
            (Some(a), Some(b)) if a != b => {
                return Err(format!("sigma6 {a} of the source differs from target's {b}"))
            }
            (Some(a), Some(_)) => format!("components and sigma6={a} agree"),
            _ => "components agree; sigma6 not compared".to_string(),
        };
        match to {
            ConcordanceTarget::Word(w) => next.closures[idx] = w.clone(),
            ConcordanceTarget::Asserted(a) => {
                next.closures.remove(idx);
                next.asserted.push(a.clone());
            }
        }
        Ok((next, note))
    }

    /// Replays every step from `start` and returns the final state.
    pub fn replay(&self, cert: &CobordismCertificate) -> Result<(FormalLink, Vec<StepVerdict>), CertError> {
        let mut state = cert.start.clone();
        let mut log = Vec::with_capacity(cert.steps.len());
        for (index, step) in cert.steps.iter().enumerate() {
            let (next, note) = self.apply_step(&state, step).map_err(|reason| CertError::Step {
                index,
                op: step.name(),
                reason,
            })?;
            state = next;
            log.push(StepVerdict {
                index,
                op: step.name().to_string(),
                cost: step.cost(),
                note,
            });
        }
        Ok((state, log))
    }

    pub fn verify(&self, cert: &CobordismCertificate) -> Result<CertificateReport, CertError> {
        let (state, step_log) = self.replay(cert)?;
        let diff = state.diff(&cert.end);
        if !diff.is_empty() {
            return Err(CertError::EndMismatch(diff));
        }
        let total_cost: u64 = cert.steps.iter().map(Step::cost).sum();
        let tcubes = cert.steps.iter().filter(|s| matches!(s, Step::Tcube { .. })).count();
        let eval = |l: &FormalLink| match link_sigma6(l, self.policy) {
            Ok(v) => Evaluated::Value(v),
            Err(_) => Evaluated::NotEvaluated,
        };
        let sigma6_start = eval(&cert.start);
        let sigma6_end = eval(&cert.end);
        let (lower_bound, bound_ok) = match (sigma6_start, sigma6_end) {
            (Evaluated::Value(a), Evaluated::Value(b)) => {
                let lower = (a - b).abs();
                (Evaluated::Value(lower), Evaluated::Value(lower as u64 <= total_cost))
            }
            _ => (Evaluated::NotEvaluated, Evaluated::NotEvaluated),
        };
        Ok(CertificateReport {
            total_cost,
            tcubes,
            sigma6_start,
            sigma6_end,
            lower_bound,
            bound_ok,
            step_log,
        })
    }
}

pub fn apply_step(state: &FormalLink, step: &Step) -> Result<FormalLink, String> {
    Verifier::default().apply_step(state, step).map(|(s, _)| s)
}

pub fn verify(cert: &CobordismCertificate) -> Result<CertificateReport, CertError> {
    Verifier::default().verify(cert)
}

/// Concatenates two certificates whose endpoints agree closure by closure.
/// Literal word differences at the seam are bridged by equivalence steps.
pub fn compose_certificates(
    c1: &CobordismCertificate,
    c2: &CobordismCertificate,
) -> Result<CobordismCertificate, CertError> {
    let (a, b) = (&c1.end, &c2.start);
    let mut diff = a.diff(b);
    if diff.is_empty() {
        for (i, (x, y)) in a.closures.iter().zip(&b.closures).enumerate() {
            if x.strands() != y.strands() || !equal(x, y).unwrap_or(false) {
                diff.push(format!("closure {i}: {x} vs {y}"));
            }
        }
    }
    if !diff.is_empty() {
        return Err(CertError::ComposeMismatch(diff));
    }
    let mut steps = c1.steps.clone();
    for (i, (x, y)) in a.closures.iter().zip(&b.closures).enumerate() {
        if x != y {
            steps.push(Step::Equiv {
                closure: i,
                target: y.clone(),
            });
        }
    }
    steps.extend(c2.steps.iter().cloned());
    let meta = match (c1.meta.is_empty(), c2.meta.is_empty()) {
        (true, _) => c2.meta.clone(),
        (_, true) => c1.meta.clone(),
        _ => format!("{}; then {}", c1.meta, c2.meta),
    };
    Ok(CobordismCertificate {
        start: c1.start.clone(),
        steps,
        end: c2.end.clone(),
        meta,
    })
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps        {}", self.step_log.len())?;
        writeln!(f, "tcubes       {}", self.tcubes)?;
        writeln!(f, "total cost   {}", self.total_cost)?;
        writeln!(f, "sigma6 start {}", self.sigma6_start)?;
        writeln!(f, "sigma6 end   {}", self.sigma6_end)?;
        writeln!(f, "lower bound  {}", self.lower_bound)?;
        let verdict = match self.bound_ok {
            Evaluated::Value(true) => "PASS",
            Evaluated::Value(false) => "FAIL",
            Evaluated::NotEvaluated => "not evaluated",
        };
        write!(f, "bound        {verdict}")
    }
}
