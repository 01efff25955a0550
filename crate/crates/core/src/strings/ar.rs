//! Auslander-Reiten sequences of string modules.
//!
//! `R(w)` adds a hook at the end of `w` (an inverse letter followed by a
//! maximal direct run) when an inverse letter can be appended, and otherwise
//! deletes a cohook (everything from the last direct letter on).
//! `L = inv ∘ R ∘ inv` does the same at the start. The sequence starting at
//! `M[w]` is `0 → M[w] → M[R w] ⊕ M[L w] → M[L R w] → 0`, except when `M[w]`
//! is the radical of a projective-injective `P`, where it is
//! `0 → rad P → (rad P / soc P) ⊕ P → P / soc P → 0`.

use std::sync::Arc;

use thiserror::Error;

use super::{position_map, string_module, SLetter, StringWord};
use crate::field::Scalar;
use crate::module::{direct_sum, find_isomorphism, projective, DirectSum, GradedModule, Morphism};
use crate::repetitive::{RArrow, RPath, RVertex, Repetitive};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringsError {
    #[error("`{0}` is not a string")]
    InvalidWord(String),
    #[error("no Auslander-Reiten sequence data for `{0}`: both middle terms vanish")]
    EmptyMiddle(String),
    #[error("hook calculus and cokernel disagree at `{0}`")]
    EndMismatch(String),
}

fn hook_add(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    let mut cur = rep.arrows_in(w.end(rep)).into_iter().find_map(|a| {
        w.push(
            rep,
            SLetter {
                arrow: a,
                inverse: true,
            },
        )
    })?;
    while let Some(next) = rep
        .arrows_out(cur.end(rep))
        .into_iter()
        .find_map(|a| cur.push(rep, SLetter::direct(a)))
    {
        cur = next;
    }
    Some(cur)
}

fn cohook_add(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    let mut cur = rep
        .arrows_out(w.end(rep))
        .into_iter()
        .find_map(|a| w.push(rep, SLetter::direct(a)))?;
    while let Some(next) = rep.arrows_in(cur.end(rep)).into_iter().find_map(|a| {
        cur.push(
            rep,
            SLetter {
                arrow: a,
                inverse: true,
            },
        )
    }) {
        cur = next;
    }
    Some(cur)
}

fn cohook_delete(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    let k = w.letters.iter().rposition(|l| !l.inverse)?;
    Some(w.prefix(rep, k))
}

fn hook_delete(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    let k = w.letters.iter().rposition(|l| l.inverse)?;
    Some(w.prefix(rep, k))
}

/// `R(w)`; `None` stands for the zero module.
pub(crate) fn right(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    hook_add(rep, w).or_else(|| cohook_delete(rep, w))
}

pub(crate) fn left(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    right(rep, &w.inverse(rep)).map(|v| v.inverse(rep))
}

/// Inverse of `R`: used for sequences ending at a string.
fn right_dual(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    cohook_add(rep, w).or_else(|| hook_delete(rep, w))
}

fn left_dual(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    right_dual(rep, &w.inverse(rep)).map(|v| v.inverse(rep))
}

/// The paths from `y` to the socle of `P(y)`, one per arrow leaving `y`.
fn socle_paths(rep: &Repetitive, y: RVertex) -> Vec<RPath> {
    let mut out = Vec::new();
    for a in rep.arrows_out(y) {
        let mut p = RPath {
            start: y,
            arrows: vec![a],
        };
        if rep.value(&p).is_none() {
            continue;
        }
        loop {
            let end = rep.path_end(&p);
            let next = rep.arrows_out(end).into_iter().find_map(|b| {
                let mut q = p.clone();
                q.arrows.push(b);
                rep.value(&q).is_some().then_some(q)
            });
            match next {
                Some(q) => p = q,
                None => break,
            }
        }
        out.push(p);
    }
    out
}

fn direct_word(start: RVertex, arrows: &[RArrow]) -> StringWord {
    let mut w = StringWord::trivial(start);
    w.letters = arrows.iter().map(|&a| SLetter::direct(a)).collect();
    w
}

/// Words of `rad P(y)`, `P(y)/soc P(y)` and the summands of
/// `rad P(y)/soc P(y)`.
pub(crate) struct ProjectiveWords {
    pub radical: StringWord,
    pub top_quotient: StringWord,
    pub heart: Vec<StringWord>,
    /// Position of the socle in `radical`.
    pub socle_pos: usize,
}

pub(crate) fn projective_words(rep: &Repetitive, y: RVertex) -> ProjectiveWords {
    let paths = socle_paths(rep, y);
    assert!(!paths.is_empty() && paths.len() <= 2, "projective-injective is not biserial");
    let p = &paths[0];
    let tail = |q: &RPath| rep.target(q.arrows[0]);
    let mut radical = direct_word(tail(p), &p.arrows[1..]);
    let socle_pos = radical.len();
    let mut heart = Vec::new();
    for q in &paths {
        if q.len() >= 2 {
            heart.push(direct_word(tail(q), &q.arrows[1..q.len() - 1]));
        }
    }
    // P / soc P reads the first path backwards, then the second forwards
    let p_short = &p.arrows[..p.len() - 1];
    let mut top = direct_word(y, p_short).inverse(rep);
    if let Some(q) = paths.get(1) {
        for &a in &q.arrows[1..] {
            radical.letters.push(SLetter {
                arrow: a,
                inverse: true,
            });
        }
        radical.letters[socle_pos..].reverse();
        for &a in &q.arrows[..q.len() - 1] {
            top.letters.push(SLetter::direct(a));
        }
    }
    if radical.is_trivial() {
        radical.start = rep.target(p.arrows[0]);
    }
    radical.side = false;
    top.side = false;
    ProjectiveWords {
        radical,
        top_quotient: top,
        heart,
        socle_pos,
    }
}

/// If `M[w] ≅ rad P(y)`, return `y`.
pub fn radical_of_projective_top(rep: &Repetitive, w: &StringWord) -> Option<RVertex> {
    let j = w.letters.iter().take_while(|l| !l.inverse).count();
    if w.letters[j..].iter().any(|l| !l.inverse) {
        return None;
    }
    let y = w.vertices(rep)[j].shift(-1);
    (projective_words(rep, y).radical.canonical(rep) == w.canonical(rep)).then_some(y)
}

/// If `M[w] ≅ P(y)/soc P(y)`, return `y`.
pub fn top_quotient_of_projective(rep: &Repetitive, w: &StringWord) -> Option<RVertex> {
    let j = w.letters.iter().take_while(|l| l.inverse).count();
    if w.letters[j..].iter().any(|l| l.inverse) {
        return None;
    }
    let y = w.vertices(rep)[j];
    (projective_words(rep, y).top_quotient.canonical(rep) == w.canonical(rep)).then_some(y)
}

/// An Auslander-Reiten sequence `0 → M[start] → middle → M[end] → 0`.
#[derive(Clone, Debug)]
pub struct ArSequence<F: Scalar> {
    pub start: StringWord,
    pub end: StringWord,
    /// String summands of the middle term, in the order of `middle`.
    pub middle_words: Vec<StringWord>,
    /// Top of the projective-injective middle summand, listed last.
    pub projective: Option<RVertex>,
    pub start_module: GradedModule<F>,
    pub middle: DirectSum<F>,
    pub end_module: GradedModule<F>,
    pub h: Morphism<F>,
    pub h2: Morphism<F>,
}

impl<F: Scalar> ArSequence<F> {
    /// Middle term with the projective-injective summand removed, with the
    /// restricted maps.
    pub fn projective_free(&self) -> (GradedModule<F>, Morphism<F>, Morphism<F>) {
        let rep = self.start_module.repetitive();
        let parts: Vec<GradedModule<F>> = self
            .middle_words
            .iter()
            .map(|w| string_module(rep, w))
            .collect();
        let sum = direct_sum(rep, &parts);
        let mut h = Morphism::zero(&self.start_module, &sum.module);
        let mut h2 = Morphism::zero(&sum.module, &self.end_module);
        for k in 0..parts.len() {
            h = h.add(&sum.inclusions[k].after(&self.middle.projections[k].after(&self.h)));
            h2 = h2.add(&self.h2.after(&self.middle.inclusions[k]).after(&sum.projections[k]));
        }
        (sum.module, h, h2)
    }

    /// Component `M[start] → M[middle_words[k]]`.
    pub fn h_component(&self, k: usize) -> Morphism<F> {
        self.middle.projections[k].after(&self.h)
    }

    /// Component `M[middle_words[k]] → M[end]`.
    pub fn h2_component(&self, k: usize) -> Morphism<F> {
        self.h2.after(&self.middle.inclusions[k])
    }
}

/// The Auslander-Reiten sequence starting at `M[w]`.
pub fn ar_sequence<F: Scalar>(
    rep: &Arc<Repetitive>,
    w: &StringWord,
) -> Result<ArSequence<F>, StringsError> {
    let name = || w.display(rep);
    if !w.is_valid(rep) {
        return Err(StringsError::InvalidWord(name()));
    }
    if let Some(y) = radical_of_projective_top(rep, w) {
        return radical_sequence(rep, y);
    }
    let m = string_module::<F>(rep, w);
    let n = w.len();
    let mut words = Vec::new();
    let mut maps: Vec<Box<dyn Fn(usize) -> Option<usize>>> = Vec::new();
    if let Some(r) = right(rep, w) {
        let len = r.len();
        maps.push(Box::new(move |k| (k <= len).then_some(k)));
        words.push(r);
    }
    if let Some(l) = left(rep, w) {
        let len = l.len();
        maps.push(Box::new(move |k| (n - k <= len).then(|| len - (n - k))));
        words.push(l);
    }
    if words.is_empty() {
        return Err(StringsError::EmptyMiddle(name()));
    }
    let modules: Vec<GradedModule<F>> = words.iter().map(|v| string_module(rep, v)).collect();
    let sum = direct_sum(rep, &modules);
    let mut h = Morphism::zero(&m, &sum.module);
    for (k, f) in maps.iter().enumerate() {
        let part = position_map(rep, (w, &m), (&words[k], &modules[k]), f);
        h = h.add(&sum.inclusions[k].after(&part));
    }
    let end = match right(rep, w) {
        Some(r) => left(rep, &r),
        None => left(rep, w).and_then(|l| right(rep, &l)),
    }
    .ok_or_else(|| StringsError::EndMismatch(name()))?;
    finish(rep, w.clone(), m, words, None, sum, h, end)
}

#[allow(clippy::too_many_arguments)]
fn finish<F: Scalar>(
    rep: &Arc<Repetitive>,
    start: StringWord,
    start_module: GradedModule<F>,
    middle_words: Vec<StringWord>,
    projective: Option<RVertex>,
    middle: DirectSum<F>,
    h: Morphism<F>,
    end: StringWord,
) -> Result<ArSequence<F>, StringsError> {
    let err = || StringsError::EndMismatch(start.display(rep));
    if !h.is_valid() || !h.is_injective() {
        return Err(err());
    }
    let coker = h.cokernel();
    let end_module = string_module::<F>(rep, &end);
    let phi = find_isomorphism(&coker.module, &end_module).ok_or_else(err)?;
    let h2 = phi.after(&coker.map);
    Ok(ArSequence {
        start,
        end,
        middle_words,
        projective,
        start_module,
        middle,
        end_module,
        h,
        h2,
    })
}

fn radical_sequence<F: Scalar>(
    rep: &Arc<Repetitive>,
    y: RVertex,
) -> Result<ArSequence<F>, StringsError> {
    let pw = projective_words(rep, y);
    let w = pw.radical.clone();
    let m = string_module::<F>(rep, &w);
    let p = projective::<F>(rep, y).module;
    let rad = p.radical();
    let err = || StringsError::EndMismatch(w.display(rep));
    let to_rad = find_isomorphism(&m, &rad.module).ok_or_else(err)?;
    let mut modules: Vec<GradedModule<F>> = pw.heart.iter().map(|v| string_module(rep, v)).collect();
    modules.push(p.clone());
    let sum = direct_sum(rep, &modules);
    let n = w.len();
    let j = pw.socle_pos;
    let mut h = sum.inclusions[modules.len() - 1].after(&rad.map.after(&to_rad));
    for (k, v) in pw.heart.iter().enumerate() {
        // the first heart summand precedes the socle, the second follows it
        let before = k == 0 && j > 0;
        let f = move |i: usize| {
            if before {
                (i < j).then_some(i)
            } else {
                (i > j).then(|| n - i)
            }
        };
        let part = position_map(rep, (&w, &m), (v, &modules[k]), f);
        h = h.add(&sum.inclusions[k].after(&part));
    }
    finish(rep, w, m, pw.heart.clone(), Some(y), sum, h, pw.top_quotient)
}

/// The end of the sequence starting at `w`, canonical.
pub fn tau_inverse(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    if let Some(y) = radical_of_projective_top(rep, w) {
        return Some(projective_words(rep, y).top_quotient.canonical(rep));
    }
    match right(rep, w) {
        Some(r) => left(rep, &r),
        None => left(rep, w).and_then(|l| right(rep, &l)),
    }
    .map(|v| v.canonical(rep))
}

/// The start of the sequence ending at `w`, canonical.
pub fn tau(rep: &Repetitive, w: &StringWord) -> Option<StringWord> {
    if let Some(y) = top_quotient_of_projective(rep, w) {
        return Some(projective_words(rep, y).radical.canonical(rep));
    }
    match right_dual(rep, w) {
        Some(r) => left_dual(rep, &r),
        None => left_dual(rep, w).and_then(|l| right_dual(rep, &l)),
    }
    .map(|v| v.canonical(rep))
}
