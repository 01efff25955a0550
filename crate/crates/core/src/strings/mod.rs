//! Strings of the repetitive algebra and the modules they define.
//!
//! Strings are walks for the string algebra obtained by killing the socles of
//! the projective-injectives. A direct letter `a` moves along `a` from its
//! source to its target; an inverse letter `a⁻¹` moves backwards. A trivial
//! word also records a side, which decides on which end of the vertex the
//! word is open for extension: at every vertex the outgoing letters split into
//! two classes, and a word passing through the vertex enters from one class
//! and leaves through the other.

mod ar;
mod knit;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::module::{GradedModule, ModuleBuilder, Morphism};
use crate::repetitive::{RArrow, RPath, RVertex, Repetitive};

pub use ar::{ar_sequence, tau, tau_inverse, ArSequence, StringsError};
pub use knit::{export_dot, knit_component, ArComponent, Edge, Mesh};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse word `{word}`: {reason}")]
pub struct WordParseError {
    pub word: String,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SLetter {
    pub arrow: RArrow,
    pub inverse: bool,
}

impl SLetter {
    pub fn direct(arrow: RArrow) -> Self {
        SLetter {
            arrow,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        SLetter {
            arrow: self.arrow,
            inverse: !self.inverse,
        }
    }

    pub fn from(self, rep: &Repetitive) -> RVertex {
        if self.inverse {
            rep.target(self.arrow)
        } else {
            rep.source(self.arrow)
        }
    }

    pub fn to(self, rep: &Repetitive) -> RVertex {
        if self.inverse {
            rep.source(self.arrow)
        } else {
            rep.target(self.arrow)
        }
    }
}

/// A string: a start vertex and a walk of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord {
    pub start: RVertex,
    pub letters: Vec<SLetter>,
    /// Side class of a trivial word; always `false` for nontrivial words.
    pub side: bool,
}

/// Letters leaving `x`: direct arrows out of `x`, inverse arrows into `x`.
fn letters_at(rep: &Repetitive, x: RVertex) -> Vec<SLetter> {
    let mut out: Vec<SLetter> = rep.arrows_out(x).into_iter().map(SLetter::direct).collect();
    out.extend(rep.arrows_in(x).into_iter().map(|a| SLetter {
        arrow: a,
        inverse: true,
    }));
    out.sort();
    out
}

/// A maximal run of letters of one direction is admissible iff the path it
/// spells is nonzero in the string algebra.
fn run_ok(rep: &Repetitive, run: &[SLetter]) -> bool {
    let Some(first) = run.first() else {
        return true;
    };
    let path = if first.inverse {
        RPath {
            start: run.last().unwrap().to(rep),
            arrows: run.iter().rev().map(|l| l.arrow).collect(),
        }
    } else {
        RPath {
            start: first.from(rep),
            arrows: run.iter().map(|l| l.arrow).collect(),
        }
    };
    rep.string_nonzero(&path)
}

fn pair_ok(rep: &Repetitive, l1: SLetter, l2: SLetter) -> bool {
    if l1.arrow == l2.arrow && l1.inverse != l2.inverse {
        return false;
    }
    l1.inverse != l2.inverse || run_ok(rep, &[l1, l2])
}

/// Side class of a letter leaving `x`.
pub fn side_class(rep: &Repetitive, x: RVertex, m: SLetter) -> bool {
    let letters = letters_at(rep, x);
    let m0 = letters[0];
    m != m0 && pair_ok(rep, m0.inv(), m)
}

impl StringWord {
    pub fn trivial(start: RVertex) -> Self {
        StringWord {
            start,
            letters: Vec::new(),
            side: false,
        }
    }

    pub fn trivial_on_side(start: RVertex, side: bool) -> Self {
        StringWord {
            start,
            letters: Vec::new(),
            side,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    /// Vertices visited, one per basis vector of the string module.
    pub fn vertices(&self, rep: &Repetitive) -> Vec<RVertex> {
        let mut out = vec![self.start];
        for l in &self.letters {
            out.push(l.to(rep));
        }
        out
    }

    pub fn end(&self, rep: &Repetitive) -> RVertex {
        self.letters.last().map_or(self.start, |l| l.to(rep))
    }

    pub fn inverse(&self, rep: &Repetitive) -> Self {
        StringWord {
            start: self.end(rep),
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            side: self.is_trivial() && !self.side,
        }
    }

    /// Lexicographic minimum of the word and its inverse; trivial words
    /// forget their side.
    pub fn canonical(&self, rep: &Repetitive) -> Self {
        if self.is_trivial() {
            return StringWord::trivial(self.start);
        }
        let inv = self.inverse(rep);
        let key = |w: &StringWord| (w.letters.clone(), w.start);
        if key(&inv) < key(self) {
            inv
        } else {
            self.clone()
        }
    }

    pub fn shifted(&self, k: i64) -> Self {
        StringWord {
            start: self.start.shift(k),
            letters: self
                .letters
                .iter()
                .map(|l| SLetter {
                    arrow: l.arrow.shift(k),
                    inverse: l.inverse,
                })
                .collect(),
            side: self.side,
        }
    }

    /// Append a letter at the end, if the result is a string.
    pub fn push(&self, rep: &Repetitive, m: SLetter) -> Option<Self> {
        if m.from(rep) != self.end(rep) {
            return None;
        }
        match self.letters.last() {
            None => {
                if side_class(rep, self.start, m) != self.side {
                    return None;
                }
            }
            Some(&last) => {
                if last.arrow == m.arrow && last.inverse != m.inverse {
                    return None;
                }
                if last.inverse == m.inverse {
                    let k = self
                        .letters
                        .iter()
                        .rposition(|l| l.inverse != m.inverse)
                        .map_or(0, |i| i + 1);
                    let mut run = self.letters[k..].to_vec();
                    run.push(m);
                    if !run_ok(rep, &run) {
                        return None;
                    }
                }
            }
        }
        let mut w = self.clone();
        w.letters.push(m);
        w.side = false;
        Some(w)
    }

    /// All letters that extend the word at its end.
    pub fn extensions(&self, rep: &Repetitive) -> Vec<StringWord> {
        letters_at(rep, self.end(rep))
            .into_iter()
            .filter_map(|m| self.push(rep, m))
            .collect()
    }

    pub fn is_valid(&self, rep: &Repetitive) -> bool {
        let side = match self.letters.first() {
            Some(&l) => side_class(rep, self.start, l),
            None => self.side,
        };
        let mut w = StringWord::trivial_on_side(self.start, side);
        for &l in &self.letters {
            match w.push(rep, l) {
                Some(next) => w = next,
                None => return false,
            }
        }
        true
    }

    /// The prefix of the first `k` letters; a trivial prefix keeps the side
    /// on which the word continued.
    pub fn prefix(&self, rep: &Repetitive, k: usize) -> Self {
        if k == 0 {
            match self.letters.first() {
                Some(&l) => StringWord::trivial_on_side(self.start, side_class(rep, self.start, l)),
                None => self.clone(),
            }
        } else {
            StringWord {
                start: self.start,
                letters: self.letters[..k].to_vec(),
                side: false,
            }
        }
    }

    /// The suffix starting at position `k`.
    pub fn suffix(&self, rep: &Repetitive, k: usize) -> Self {
        self.inverse(rep)
            .prefix(rep, self.len() - k)
            .inverse(rep)
    }

    pub fn display(&self, rep: &Repetitive) -> String {
        if self.is_trivial() {
            return format!("e_{}", rep.vertex_name(self.start));
        }
        self.letters
            .iter()
            .map(|l| {
                let n = rep.arrow_name(l.arrow);
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the format produced by [`StringWord::display`].
    pub fn parse(rep: &Repetitive, text: &str) -> Result<Self, WordParseError> {
        let err = |reason: &str| WordParseError {
            word: text.to_string(),
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if let [single] = tokens[..] {
            if let Some(name) = single.strip_prefix("e_") {
                let (base, z) = name.rsplit_once('_').ok_or_else(|| err("bad vertex"))?;
                let z: i64 = z.parse().map_err(|_| err("bad degree"))?;
                let v = rep
                    .base_quiver()
                    .vertex(base)
                    .ok_or_else(|| err("unknown vertex"))?;
                return Ok(StringWord::trivial(RVertex { z, v }));
            }
        }
        let mut letters = Vec::new();
        for t in &tokens {
            let (name, inverse) = match t.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (*t, false),
            };
            let (base, z) = name.rsplit_once('_').ok_or_else(|| err("bad arrow"))?;
            let z: i64 = z.parse().map_err(|_| err("bad degree"))?;
            let letter = (0..rep.letters_per_degree())
                .map(|i| rep.letter_from_index(i))
                .find(|&l| rep.letter_name(l) == base)
                .ok_or_else(|| err("unknown arrow"))?;
            letters.push(SLetter {
                arrow: RArrow { z, letter },
                inverse,
            });
        }
        let first = letters.first().ok_or_else(|| err("empty word"))?;
        let start = first.from(rep);
        let side = side_class(rep, start, *first);
        let w = StringWord {
            start,
            letters,
            side: false,
        };
        let check = StringWord { side, ..w.clone() };
        if !check.is_valid(rep) {
            return Err(err("not a string"));
        }
        Ok(w)
    }

    /// Degrees of all visited vertices.
    pub fn degree_range(&self, rep: &Repetitive) -> (i64, i64) {
        let zs: Vec<i64> = self.vertices(rep).iter().map(|x| x.z).collect();
        (*zs.iter().min().unwrap(), *zs.iter().max().unwrap())
    }
}

/// A word together with the algebra, for display.
pub struct WordDisplay<'a>(pub &'a Repetitive, pub &'a StringWord);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1.display(self.0))
    }
}

/// All strings with at most `max_len` letters whose vertices lie in degrees
/// `[lo, hi]`, one canonical representative per inverse pair, sorted.
pub fn enumerate_strings(rep: &Repetitive, lo: i64, hi: i64, max_len: usize) -> Vec<StringWord> {
    let inside = |w: &StringWord| {
        let x = w.end(rep);
        lo <= x.z && x.z <= hi
    };
    let mut found = BTreeSet::new();
    let mut frontier = Vec::new();
    for z in lo..=hi {
        for v in 0..rep.vertex_count() {
            let x = RVertex { z, v };
            found.insert(StringWord::trivial(x));
            frontier.push(StringWord::trivial_on_side(x, false));
            frontier.push(StringWord::trivial_on_side(x, true));
        }
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for e in w.extensions(rep) {
                if inside(&e) {
                    found.insert(e.canonical(rep));
                    next.push(e);
                }
            }
        }
        frontier = next;
    }
    found.into_iter().collect()
}

/// The string module `M[w]`: one basis vector per position, ordered within
/// each vertex by position.
pub fn string_module<F: Scalar>(rep: &Arc<Repetitive>, w: &StringWord) -> GradedModule<F> {
    let (verts, index) = positions(rep, w);
    let mut b = ModuleBuilder::new(rep);
    let mut dims: BTreeMap<RVertex, usize> = BTreeMap::new();
    for x in &verts {
        *dims.entry(*x).or_default() += 1;
    }
    for (&x, &d) in &dims {
        b.dim(x, d);
    }
    let mut actions: BTreeMap<RArrow, Matrix<F>> = BTreeMap::new();
    for (k, l) in w.letters.iter().enumerate() {
        let a = l.arrow;
        let m = actions.entry(a).or_insert_with(|| {
            Matrix::zeros(dims[&rep.target(a)], dims[&rep.source(a)])
        });
        // letter k joins positions k and k + 1
        let (from, to) = if l.inverse { (k + 1, k) } else { (k, k + 1) };
        m[(index[to], index[from])] = F::one();
    }
    for (a, m) in actions {
        b.arrow(a, m);
    }
    b.build()
}

/// Vertex of each position and its index among the positions at that vertex.
fn positions(rep: &Repetitive, w: &StringWord) -> (Vec<RVertex>, Vec<usize>) {
    let verts = w.vertices(rep);
    let mut seen: BTreeMap<RVertex, usize> = BTreeMap::new();
    let index = verts
        .iter()
        .map(|x| {
            let c = seen.entry(*x).or_default();
            *c += 1;
            *c - 1
        })
        .collect();
    (verts, index)
}

/// The morphism `M[w] → M[w']` sending basis vector `k` to basis vector
/// `f(k)` (or to zero).
pub fn position_map<F: Scalar>(
    rep: &Arc<Repetitive>,
    source: (&StringWord, &GradedModule<F>),
    target: (&StringWord, &GradedModule<F>),
    f: impl Fn(usize) -> Option<usize>,
) -> Morphism<F> {
    let (sv, si) = positions(rep, source.0);
    let (tv, ti) = positions(rep, target.0);
    let mut blocks: BTreeMap<RVertex, Matrix<F>> = BTreeMap::new();
    for k in 0..sv.len() {
        if let Some(j) = f(k) {
            assert_eq!(sv[k], tv[j], "position map must preserve vertices");
            let x = sv[k];
            let b = blocks
                .entry(x)
                .or_insert_with(|| Matrix::zeros(target.1.dim(x), source.1.dim(x)));
            b[(ti[j], si[k])] = F::one();
        }
    }
    Morphism::from_blocks(source.1, target.1, &blocks)
}
