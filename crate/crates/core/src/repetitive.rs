//! The repetitive algebra of a gentle algebra.
//!
//! Vertices are pairs `(v, z)` with `v` a vertex of the base algebra and `z`
//! an integer degree. Every base arrow has a copy in each degree, and every
//! maximal nonzero path `p` of the base contributes a connector from
//! `(t(p), z)` to `(s(p), z + 1)`. A path of the repetitive quiver evaluates
//! to an element of the algebra:
//!
//! * without connectors, to the underlying base path;
//! * with a single connector `p̂`, written `v p̂ u` in application order, to
//!   the dual basis functional `x*` when `p = u x v` (nonzero iff such `x`
//!   exists);
//! * with two or more connectors, to zero.
//!
//! Everything else — relations, projectives, string combinatorics — is
//! derived from this evaluation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Scalar;
use crate::presentation::{
    validate_gentle, AlgebraPresentation, NormalForm, PathWord, PresentationError, Quiver,
    RelationGen,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepetitiveError {
    #[error("base algebra is not gentle: {}", .0.join("; "))]
    NotGentle(Vec<String>),
    #[error("window [{lo}, {hi}] is shorter than 3 degrees")]
    WindowTooShort { lo: i64, hi: i64 },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("degree table line {line}: {reason}")]
    DegreeTable { line: usize, reason: String },
}

/// An arrow kind of the repetitive quiver, independent of degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Copy of a base arrow.
    Copy(usize),
    /// Connector attached to a maximal base path.
    Conn(usize),
}

/// A vertex `(v, z)`. Ordered by degree first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RVertex {
    pub z: i64,
    pub v: usize,
}

/// An arrow of the repetitive quiver; `z` is the degree of its source.
/// Ordered by degree first, then copies before connectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RArrow {
    pub z: i64,
    pub letter: Letter,
}

impl RArrow {
    pub fn shift(self, k: i64) -> RArrow {
        RArrow {
            z: self.z + k,
            letter: self.letter,
        }
    }
}

impl RVertex {
    pub fn shift(self, k: i64) -> RVertex {
        RVertex {
            z: self.z + k,
            v: self.v,
        }
    }
}

/// A path in application order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPath {
    pub start: RVertex,
    pub arrows: Vec<RArrow>,
}

impl RPath {
    pub fn trivial(start: RVertex) -> Self {
        RPath {
            start,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Deg-lex key; agrees with the arrow order of materialized windows.
    pub fn order_key(&self) -> (usize, &[RArrow]) {
        (self.arrows.len(), &self.arrows)
    }
}

/// The algebra element a path evaluates to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathValue {
    /// A base path living in degree `z`.
    Alg { z: i64, path: PathWord },
    /// The dual functional `x*` in the bimodule component between degrees
    /// `z` and `z + 1`.
    Dual { z: i64, x: PathWord },
}

impl PathValue {
    /// Socle elements of the indecomposable projective-injectives.
    pub fn is_socle(&self) -> bool {
        matches!(self, PathValue::Dual { x, .. } if x.is_trivial())
    }
}

/// The (infinite) repetitive quiver with relations of a gentle algebra.
#[derive(Debug)]
pub struct Repetitive {
    base: AlgebraPresentation,
    basis: Vec<PathWord>,
    basis_index: HashMap<PathWord, usize>,
    max_paths: Vec<PathWord>,
    conn_names: Vec<String>,
    maxlen: usize,
}

impl Repetitive {
    pub fn new(base: AlgebraPresentation) -> Result<Arc<Self>, RepetitiveError> {
        let report = validate_gentle(&base);
        if !report.is_gentle() {
            return Err(RepetitiveError::NotGentle(report.violations));
        }
        let basis = base.basis()?;
        let basis_index = basis
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let q = base.quiver();
        let nonzero: HashSet<&PathWord> = basis.iter().collect();
        let max_paths: Vec<PathWord> = basis
            .iter()
            .filter(|p| {
                let right = q.arrows_out(p.target(q)).any(|a| {
                    p.then(q, &PathWord::new(q, vec![a]).unwrap())
                        .is_some_and(|w| nonzero.contains(&w))
                });
                let left = q.arrows_in(p.source()).any(|a| {
                    PathWord::new(q, vec![a])
                        .unwrap()
                        .then(q, p)
                        .is_some_and(|w| nonzero.contains(&w))
                });
                !left && !right
            })
            .cloned()
            .collect();
        let conn_names = max_paths
            .iter()
            .map(|p| {
                base.named_paths()
                    .iter()
                    .find(|(_, np)| np == p)
                    .map(|(n, _)| n.clone())
                    .unwrap_or_else(|| {
                        if p.is_trivial() {
                            format!("conn_{}", q.vertex_name(p.start))
                        } else {
                            let names: Vec<&str> =
                                p.arrows.iter().map(|&a| q.arrow(a).name.as_str()).collect();
                            format!("conn_{}", names.join("."))
                        }
                    })
            })
            .collect();
        let maxlen = basis.iter().map(|p| p.len()).max().unwrap_or(0);
        Ok(Arc::new(Repetitive {
            base,
            basis,
            basis_index,
            max_paths,
            conn_names,
            maxlen,
        }))
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn base_quiver(&self) -> &Quiver {
        self.base.quiver()
    }

    pub fn base_basis(&self) -> &[PathWord] {
        &self.basis
    }

    pub fn base_basis_index(&self, p: &PathWord) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn max_paths(&self) -> &[PathWord] {
        &self.max_paths
    }

    pub fn vertex_count(&self) -> usize {
        self.base.quiver().vertex_count()
    }

    pub fn copy_count(&self) -> usize {
        self.base.quiver().arrow_count()
    }

    pub fn conn_count(&self) -> usize {
        self.max_paths.len()
    }

    /// Arrows whose source lies in one degree.
    pub fn letters_per_degree(&self) -> usize {
        self.copy_count() + self.conn_count()
    }

    /// Every nonzero path is shorter than this.
    pub fn path_bound(&self) -> usize {
        self.maxlen + 2
    }

    pub fn letter_index(&self, l: Letter) -> usize {
        match l {
            Letter::Copy(a) => a,
            Letter::Conn(c) => self.copy_count() + c,
        }
    }

    pub fn letter_from_index(&self, i: usize) -> Letter {
        if i < self.copy_count() {
            Letter::Copy(i)
        } else {
            Letter::Conn(i - self.copy_count())
        }
    }

    pub fn source(&self, a: RArrow) -> RVertex {
        let q = self.base.quiver();
        match a.letter {
            Letter::Copy(b) => RVertex {
                z: a.z,
                v: q.arrow(b).source,
            },
            Letter::Conn(c) => RVertex {
                z: a.z,
                v: self.max_paths[c].target(q),
            },
        }
    }

    pub fn target(&self, a: RArrow) -> RVertex {
        let q = self.base.quiver();
        match a.letter {
            Letter::Copy(b) => RVertex {
                z: a.z,
                v: q.arrow(b).target,
            },
            Letter::Conn(c) => RVertex {
                z: a.z + 1,
                v: self.max_paths[c].source(),
            },
        }
    }

    /// Arrows leaving `x`, in arrow order.
    pub fn arrows_out(&self, x: RVertex) -> Vec<RArrow> {
        (0..self.letters_per_degree())
            .map(|i| RArrow {
                z: x.z,
                letter: self.letter_from_index(i),
            })
            .filter(|&a| self.source(a) == x)
            .collect()
    }

    /// Arrows entering `x`, in arrow order.
    pub fn arrows_in(&self, x: RVertex) -> Vec<RArrow> {
        let mut out: Vec<RArrow> = Vec::new();
        for z in [x.z - 1, x.z] {
            for i in 0..self.letters_per_degree() {
                let a = RArrow {
                    z,
                    letter: self.letter_from_index(i),
                };
                if self.target(a) == x {
                    out.push(a);
                }
            }
        }
        out.sort();
        out
    }

    pub fn vertex_name(&self, x: RVertex) -> String {
        format!("{}_{}", self.base.quiver().vertex_name(x.v), x.z)
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        match l {
            Letter::Copy(a) => &self.base.quiver().arrow(a).name,
            Letter::Conn(c) => &self.conn_names[c],
        }
    }

    pub fn arrow_name(&self, a: RArrow) -> String {
        format!("{}_{}", self.letter_name(a.letter), a.z)
    }

    pub fn path_end(&self, p: &RPath) -> RVertex {
        p.arrows.last().map_or(p.start, |&a| self.target(a))
    }

    pub fn path_display(&self, p: &RPath) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertex_name(p.start))
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrow_name(a))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    fn base_path(&self, start: usize, arrows: &[RArrow]) -> PathWord {
        PathWord {
            start,
            arrows: arrows
                .iter()
                .map(|a| match a.letter {
                    Letter::Copy(b) => b,
                    Letter::Conn(_) => unreachable!(),
                })
                .collect(),
        }
    }

    fn base_nonzero(&self, p: &PathWord) -> bool {
        self.basis_index.contains_key(p)
    }

    /// Evaluate a composable path; `None` means the path is zero.
    pub fn value(&self, p: &RPath) -> Option<PathValue> {
        let conns: Vec<usize> = p
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a.letter, Letter::Conn(_)))
            .map(|(i, _)| i)
            .collect();
        match conns.as_slice() {
            [] => {
                let path = self.base_path(p.start.v, &p.arrows);
                self.base_nonzero(&path).then_some(PathValue::Alg {
                    z: p.start.z,
                    path,
                })
            }
            [c] => {
                let conn = p.arrows[*c];
                let Letter::Conn(ci) = conn.letter else {
                    unreachable!()
                };
                let max = &self.max_paths[ci];
                let v = self.base_path(p.start.v, &p.arrows[..*c]);
                let after = self.target(conn);
                let u = self.base_path(after.v, &p.arrows[c + 1..]);
                let (lu, lv, lp) = (u.len(), v.len(), max.len());
                if lu + lv > lp
                    || max.arrows[..lu] != u.arrows[..]
                    || max.arrows[lp - lv..] != v.arrows[..]
                {
                    return None;
                }
                let q = self.base.quiver();
                let x = if lu + lv == lp {
                    // the trivial path sits at the source of `v`
                    PathWord::trivial(p.start.v)
                } else {
                    PathWord::new(q, max.arrows[lu..lp - lv].to_vec()).unwrap()
                };
                Some(PathValue::Dual { z: conn.z, x })
            }
            _ => None,
        }
    }

    /// All nonzero paths starting at `x`, shortest first.
    pub fn nonzero_paths_from(&self, x: RVertex) -> Vec<RPath> {
        let mut out = vec![RPath::trivial(x)];
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.arrows_out(self.path_end(p)) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    let w = RPath {
                        start: p.start,
                        arrows,
                    };
                    if self.value(&w).is_some() {
                        next.push(w);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Nonzero paths from `x` grouped by value; within a group the paths are
    /// sorted deg-lex, so the first one is the canonical representative.
    pub fn value_groups_from(&self, x: RVertex) -> BTreeMap<PathValue, Vec<RPath>> {
        let mut groups: BTreeMap<PathValue, Vec<RPath>> = BTreeMap::new();
        for p in self.nonzero_paths_from(x) {
            let v = self.value(&p).unwrap();
            groups.entry(v).or_default().push(p);
        }
        for g in groups.values_mut() {
            g.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        }
        groups
    }

    /// A path of the string algebra obtained by killing the socles of the
    /// projective-injectives is nonzero iff this holds.
    pub fn string_nonzero(&self, p: &RPath) -> bool {
        self.value(p).is_some_and(|v| !v.is_socle())
    }

    pub fn window(self: &Arc<Self>, lo: i64, hi: i64) -> Result<RepetitiveWindow, RepetitiveError> {
        RepetitiveWindow::build(self.clone(), lo, hi)
    }
}

/// A finite-degree window of the repetitive quiver, materialized as a
/// presentation.
#[derive(Clone, Debug)]
pub struct RepetitiveWindow {
    rep: Arc<Repetitive>,
    lo: i64,
    hi: i64,
    vertices: Vec<RVertex>,
    arrows: Vec<RArrow>,
    presentation: AlgebraPresentation,
}

pub fn build_repetitive_window(
    base: &AlgebraPresentation,
    lo: i64,
    hi: i64,
) -> Result<RepetitiveWindow, RepetitiveError> {
    Repetitive::new(base.clone())?.window(lo, hi)
}

impl RepetitiveWindow {
    fn build(rep: Arc<Repetitive>, lo: i64, hi: i64) -> Result<Self, RepetitiveError> {
        if hi - lo < 2 {
            return Err(RepetitiveError::WindowTooShort { lo, hi });
        }
        let inside = |x: RVertex| lo <= x.z && x.z <= hi;
        let vertices: Vec<RVertex> = (lo..=hi)
            .flat_map(|z| (0..rep.vertex_count()).map(move |v| RVertex { z, v }))
            .collect();
        let arrows: Vec<RArrow> = (lo..=hi)
            .flat_map(|z| {
                (0..rep.letters_per_degree()).map(move |i| (z, i))
            })
            .map(|(z, i)| RArrow {
                z,
                letter: rep.letter_from_index(i),
            })
            .filter(|&a| inside(rep.target(a)))
            .collect();

        let mut quiver = Quiver::new();
        let vindex: HashMap<RVertex, usize> = vertices
            .iter()
            .map(|&x| (x, quiver.add_vertex(&rep.vertex_name(x)).unwrap()))
            .collect();
        let mut aindex: HashMap<RArrow, usize> = HashMap::new();
        for &a in &arrows {
            let i = quiver.add_arrow(
                &rep.arrow_name(a),
                vindex[&rep.source(a)],
                vindex[&rep.target(a)],
            )?;
            aindex.insert(a, i);
        }
        let to_word = |p: &RPath| PathWord {
            start: vindex[&p.start],
            arrows: p.arrows.iter().map(|a| aindex[a]).collect(),
        };

        // nonzero paths inside the window
        let mut nonzero: Vec<RPath> = Vec::new();
        for &x in &vertices {
            nonzero.extend(
                rep.nonzero_paths_from(x)
                    .into_iter()
                    .filter(|p| p.arrows.iter().all(|a| aindex.contains_key(a))),
            );
        }
        let mut groups: BTreeMap<PathValue, Vec<&RPath>> = BTreeMap::new();
        for p in &nonzero {
            groups.entry(rep.value(p).unwrap()).or_default().push(p);
        }
        let mut reducible: HashSet<&[RArrow]> = HashSet::new();
        for g in groups.values_mut() {
            g.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
            for p in &g[1..] {
                reducible.insert(&p.arrows);
            }
        }
        let has_reducible_factor = |w: &[RArrow]| {
            let n = w.len();
            (0..n).any(|i| {
                (i + 1..=n).any(|j| j - i < n && reducible.contains(&w[i..j]))
            })
        };

        let mut relations = Vec::new();
        // monomials: every zero path whose two maximal proper factors are
        // nonzero, including those already implied by the binomials
        let nonzero_set: HashSet<&[RArrow]> = nonzero.iter().map(|p| p.arrows.as_slice()).collect();
        for p in &nonzero {
            if p.is_empty() {
                continue;
            }
            for a in rep.arrows_out(rep.path_end(p)) {
                if !aindex.contains_key(&a) {
                    continue;
                }
                let mut w = p.arrows.clone();
                w.push(a);
                if nonzero_set.contains(w.as_slice()) || !nonzero_set.contains(&w[1..]) {
                    continue;
                }
                relations.push(RelationGen::Monomial(to_word(&RPath {
                    start: p.start,
                    arrows: w,
                })));
            }
        }
        // binomials: each reducible path without a reducible proper factor
        // is identified with the canonical path of its group
        for g in groups.values() {
            for p in &g[1..] {
                if !has_reducible_factor(&p.arrows) {
                    relations.push(RelationGen::Binomial {
                        lhs: to_word(p),
                        rhs: to_word(g[0]),
                        sign: 1,
                    });
                }
            }
        }
        let presentation =
            AlgebraPresentation::new(quiver, relations, Some(rep.path_bound()))?;
        Ok(RepetitiveWindow {
            rep,
            lo,
            hi,
            vertices,
            arrows,
            presentation,
        })
    }

    pub fn repetitive(&self) -> &Arc<Repetitive> {
        &self.rep
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn vertices(&self) -> &[RVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[RArrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, x: RVertex) -> Option<usize> {
        self.vertices.iter().position(|&y| y == x)
    }

    pub fn arrow_index(&self, a: RArrow) -> Option<usize> {
        self.arrows.iter().position(|&b| b == a)
    }

    pub fn degree(&self, window_vertex: usize) -> i64 {
        self.vertices[window_vertex].z
    }

    /// A window path as a repetitive path.
    pub fn lift(&self, p: &PathWord) -> RPath {
        RPath {
            start: self.vertices[p.start],
            arrows: p.arrows.iter().map(|&a| self.arrows[a]).collect(),
        }
    }

    /// Sidecar degree table: one `vertex degree` pair per line.
    pub fn degree_table(&self) -> String {
        let mut s = String::new();
        for &x in &self.vertices {
            s.push_str(&format!("{} {}\n", self.rep.vertex_name(x), x.z));
        }
        s
    }

    /// The window as DSL text plus its degree table.
    pub fn serialize(&self) -> (String, String) {
        (self.presentation.to_string(), self.degree_table())
    }
}

impl fmt::Display for RepetitiveWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation)
    }
}

pub fn parse_degree_table(text: &str) -> Result<Vec<(String, i64)>, RepetitiveError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: &str| RepetitiveError::DegreeTable {
            line: i + 1,
            reason: reason.to_string(),
        };
        let mut it = line.split_whitespace();
        let (Some(name), Some(deg), None) = (it.next(), it.next(), it.next()) else {
            return Err(err("expected `vertex degree`"));
        };
        let deg: i64 = deg.parse().map_err(|_| err("degree is not an integer"))?;
        out.push((name.to_string(), deg));
    }
    Ok(out)
}

/// Parse a serialized window back into its presentation and degree map,
/// checking that they agree.
pub fn parse_window(
    dsl: &str,
    table: &str,
) -> Result<(AlgebraPresentation, Vec<i64>), RepetitiveError> {
    let pres = crate::presentation::parse_presentation(dsl)?;
    let table = parse_degree_table(table)?;
    let mut degrees = vec![None; pres.quiver().vertex_count()];
    for (line, (name, z)) in table.iter().enumerate() {
        let v = pres
            .quiver()
            .vertex(name)
            .ok_or_else(|| RepetitiveError::DegreeTable {
                line: line + 1,
                reason: format!("unknown vertex `{name}`"),
            })?;
        degrees[v] = Some(*z);
    }
    let degrees = degrees
        .into_iter()
        .enumerate()
        .map(|(v, d)| {
            d.ok_or_else(|| RepetitiveError::DegreeTable {
                line: 0,
                reason: format!("vertex `{}` has no degree", pres.quiver().vertex_name(v)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((pres, degrees))
}

/// An element `(a_i, φ_i)_i` of the repetitive algebra: `a_i` is a
/// combination of base basis paths, `φ_i` of their dual functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitiveElement<F: Scalar> {
    pub comps: BTreeMap<i64, (Vec<F>, Vec<F>)>,
}

/// Structure constants of the base algebra under composition: `mul[i][j]`
/// is the basis index of `b_i ∘ b_j` (first `b_j`, then `b_i`), if nonzero.
pub fn base_products(rep: &Repetitive) -> Vec<Vec<Option<usize>>> {
    let q = rep.base_quiver();
    let basis = rep.base_basis();
    basis
        .iter()
        .map(|bi| {
            basis
                .iter()
                .map(|bj| {
                    let w = bj.then(q, bi)?;
                    match rep.base().path_normal_form(&w).ok()? {
                        NormalForm::Term { path, .. } => rep.base_basis_index(&path),
                        NormalForm::Zero => None,
                    }
                })
                .collect()
        })
        .collect()
}

impl<F: Scalar> RepetitiveElement<F> {
    pub fn zero() -> Self {
        RepetitiveElement {
            comps: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps
            .values()
            .all(|(a, f)| a.iter().chain(f).all(|c| c.is_zero()))
    }

    /// Drop all-zero degrees so equality is structural.
    pub fn normalized(mut self) -> Self {
        self.comps
            .retain(|_, (a, f)| !a.iter().chain(f.iter()).all(|c| c.is_zero()));
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (z, (a, f)) in &other.comps {
            let e = out
                .comps
                .entry(*z)
                .or_insert_with(|| (vec![F::zero(); a.len()], vec![F::zero(); f.len()]));
            for (x, y) in e.0.iter_mut().zip(a) {
                *x = x.clone() + y.clone();
            }
            for (x, y) in e.1.iter_mut().zip(f) {
                *x = x.clone() + y.clone();
            }
        }
        out.normalized()
    }

    pub fn scale(&self, c: &F) -> Self {
        RepetitiveElement {
            comps: self
                .comps
                .iter()
                .map(|(z, (a, f))| {
                    (
                        *z,
                        (
                            a.iter().map(|x| x.clone() * c.clone()).collect(),
                            f.iter().map(|x| x.clone() * c.clone()).collect(),
                        ),
                    )
                })
                .collect(),
        }
        .normalized()
    }
}

/// `(a_i, φ_i) · (b_i, ψ_i) = (a_i b_i, a_{i+1} ψ_i + φ_i b_i)`, with the
/// bimodule actions `(a φ)(x) = φ(x a)` and `(φ b)(x) = φ(b x)`.
pub fn repetitive_product<F: Scalar>(
    mul: &[Vec<Option<usize>>],
    x: &RepetitiveElement<F>,
    y: &RepetitiveElement<F>,
) -> RepetitiveElement<F> {
    let n = mul.len();
    let zero = || vec![F::zero(); n];
    let mut out: BTreeMap<i64, (Vec<F>, Vec<F>)> = BTreeMap::new();
    let degrees: Vec<i64> = x.comps.keys().chain(y.comps.keys()).copied().collect();
    let empty = (zero(), zero());
    for &i in &degrees {
        let (a_i, phi_i) = x.comps.get(&i).unwrap_or(&empty);
        let (b_i, psi_i) = y.comps.get(&i).unwrap_or(&empty);
        let (a_next, _) = x.comps.get(&(i + 1)).unwrap_or(&empty);
        let mut ab = zero();
        let mut dual = zero();
        for s in 0..n {
            for t in 0..n {
                // algebra part: a_i b_i
                if let Some(k) = mul[s][t] {
                    let c = a_i[s].clone() * b_i[t].clone();
                    ab[k] = ab[k].clone() + c;
                }
            }
        }
        // (a ψ)(e_k) = ψ(e_k a) and (φ b)(e_k) = φ(b e_k)
        for k in 0..n {
            let mut acc = F::zero();
            for s in 0..n {
                if let Some(m) = mul[k][s] {
                    acc = acc + a_next[s].clone() * psi_i[m].clone();
                }
                if let Some(m) = mul[s][k] {
                    acc = acc + b_i[s].clone() * phi_i[m].clone();
                }
            }
            dual[k] = acc;
        }
        out.insert(i, (ab, dual));
    }
    RepetitiveElement { comps: out }.normalized()
}

/// The element a repetitive path evaluates to.
pub fn value_element<F: Scalar>(rep: &Repetitive, v: Option<&PathValue>) -> RepetitiveElement<F> {
    let n = rep.base_basis().len();
    let mut e = RepetitiveElement::zero();
    match v {
        None => {}
        Some(PathValue::Alg { z, path }) => {
            let mut a = vec![F::zero(); n];
            a[rep.base_basis_index(path).unwrap()] = F::one();
            e.comps.insert(*z, (a, vec![F::zero(); n]));
        }
        Some(PathValue::Dual { z, x }) => {
            let mut f = vec![F::zero(); n];
            f[rep.base_basis_index(x).unwrap()] = F::one();
            e.comps.insert(*z, (vec![F::zero(); n], f));
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F101;
    use crate::presentation::parse_presentation;

    fn rep(src: &str) -> Arc<Repetitive> {
        Repetitive::new(parse_presentation(src).unwrap()).unwrap()
    }

    const A2: &str = "vertices 1 2\narrow a : 1 -> 2\n";
    const EX4: &str = "vertices 1 2 3 4\narrow t : 2 -> 1\narrow a : 3 -> 2\narrow b : 4 -> 2\narrow l : 4 -> 4\nzero a t\nzero l l\nnilpotent 4\n";

    #[test]
    fn a2_window_is_a_line_with_cubes_zero() {
        let r = rep(A2);
        let w = r.window(0, 3).unwrap();
        let p = w.presentation();
        // 1_0 -> 2_0 -> 1_1 -> 2_1 -> ...
        assert_eq!(p.quiver().arrow_count(), 4 + 3);
        for x in 0..p.quiver().vertex_count() {
            assert!(p.quiver().arrows_out(x).count() <= 1);
        }
        for path in p.all_paths() {
            let zero = matches!(p.path_normal_form(&path).unwrap(), NormalForm::Zero);
            assert_eq!(zero, path.len() >= 3, "{}", path.display(p.quiver()));
        }
    }

    #[test]
    fn single_vertex_window_is_a_line_with_squares_zero() {
        let r = rep("vertices 1\n");
        let w = r.window(-1, 2).unwrap();
        let p = w.presentation();
        assert_eq!(p.quiver().arrow_count(), 3);
        assert_eq!(p.quiver().arrow(0).name, "conn_1_-1");
        for path in p.all_paths() {
            let zero = matches!(p.path_normal_form(&path).unwrap(), NormalForm::Zero);
            assert_eq!(zero, path.len() >= 2);
        }
    }

    #[test]
    fn too_short_window_is_rejected() {
        assert_eq!(
            rep(A2).window(0, 1).unwrap_err(),
            RepetitiveError::WindowTooShort { lo: 0, hi: 1 }
        );
    }

    #[test]
    fn values_are_multiplicative() {
        // the evaluation of a concatenation is the product of the evaluations
        // of its letters, composed right to left
        for src in [A2, EX4, "vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\nzero a b\n"] {
            let r = rep(src);
            let mul = base_products(&r);
            for v in 0..r.vertex_count() {
                let start = RVertex { z: 0, v };
                let mut frontier = vec![RPath::trivial(start)];
                for _ in 0..r.path_bound() + 1 {
                    let mut next = Vec::new();
                    for p in &frontier {
                        for a in r.arrows_out(r.path_end(p)) {
                            let mut q = p.clone();
                            q.arrows.push(a);
                            let whole: RepetitiveElement<F101> =
                                value_element(&r, r.value(&q).as_ref());
                            let head: RepetitiveElement<F101> =
                                value_element(&r, r.value(p).as_ref());
                            let last = RPath {
                                start: r.source(a),
                                arrows: vec![a],
                            };
                            let tail: RepetitiveElement<F101> =
                                value_element(&r, r.value(&last).as_ref());
                            assert_eq!(
                                whole,
                                repetitive_product(&mul, &tail, &head),
                                "{}",
                                r.path_display(&q)
                            );
                            next.push(q);
                        }
                    }
                    frontier = next;
                }
            }
        }
    }

    #[test]
    fn window_normal_forms_agree_with_values() {
        let r = rep(EX4);
        let w = r.window(-1, 2).unwrap();
        let p = w.presentation();
        let mut canon: HashMap<PathValue, PathWord> = HashMap::new();
        for path in p.all_paths() {
            let lifted = w.lift(&path);
            let nf = p.path_normal_form(&path).unwrap();
            match (r.value(&lifted), nf) {
                (None, NormalForm::Zero) => {}
                (Some(v), NormalForm::Term { coeff: 1, path: n }) => {
                    assert_eq!(r.value(&w.lift(&n)), Some(v.clone()));
                    let prev = canon.entry(v).or_insert(n.clone());
                    assert_eq!(*prev, n);
                }
                (v, nf) => panic!("{}: {v:?} vs {nf:?}", path.display(p.quiver())),
            }
        }
    }

    #[test]
    fn shift_equivariance() {
        let r = rep(EX4);
        let w0 = r.window(0, 3).unwrap();
        let w1 = r.window(1, 4).unwrap();
        assert_eq!(w0.presentation().relations(), w1.presentation().relations());
        let shifted: Vec<RArrow> = w0.arrows().iter().map(|a| a.shift(1)).collect();
        assert_eq!(shifted, w1.arrows());
    }

    #[test]
    fn serialization_roundtrip() {
        let r = rep(EX4);
        let w = r.window(0, 3).unwrap();
        let (dsl, table) = w.serialize();
        let (pres, degrees) = parse_window(&dsl, &table).unwrap();
        assert_eq!(&pres, w.presentation());
        assert_eq!(degrees, w.vertices().iter().map(|x| x.z).collect::<Vec<_>>());
        assert_eq!(pres.to_string(), dsl);
    }
}
