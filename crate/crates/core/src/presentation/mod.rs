//! Quivers with relations: the input algebra and its path arithmetic.

mod gentle;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use gentle::{validate_gentle, GentleReport};
pub use parse::parse_presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("{line}:{col}: {reason}")]
    Syntax {
        line: usize,
        col: usize,
        reason: String,
    },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("arrows `{0}` and `{1}` do not compose")]
    NotComposable(String, String),
    #[error("binomial relation sides are not parallel or not distinct")]
    BadBinomial,
    #[error("quiver has an oriented cycle but no nilpotency bound")]
    MissingNilpotency,
    #[error("path reduction did not terminate within the nilpotency bound")]
    ReductionDiverged,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, PresentationError> {
        if self.vertex_index.contains_key(name) {
            return Err(PresentationError::Duplicate(name.to_string()));
        }
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), self.vertices.len() - 1);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(
        &mut self,
        name: &str,
        source: usize,
        target: usize,
    ) -> Result<usize, PresentationError> {
        if self.arrow_index.contains_key(name) {
            return Err(PresentationError::Duplicate(name.to_string()));
        }
        assert!(source < self.vertices.len() && target < self.vertices.len());
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        self.arrow_index.insert(name.to_string(), self.arrows.len() - 1);
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn arrows_out(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_in(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen < n
    }
}

/// A path in application order: `arrows[0]` is applied first. The empty
/// path at `start` is the idempotent of that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl PathWord {
    pub fn trivial(v: usize) -> Self {
        PathWord {
            start: v,
            arrows: Vec::new(),
        }
    }

    pub fn new(q: &Quiver, arrows: Vec<usize>) -> Result<Self, PresentationError> {
        assert!(!arrows.is_empty(), "use PathWord::trivial for empty paths");
        for w in arrows.windows(2) {
            if q.arrow(w[0]).target != q.arrow(w[1]).source {
                return Err(PresentationError::NotComposable(
                    q.arrow(w[0]).name.clone(),
                    q.arrow(w[1]).name.clone(),
                ));
            }
        }
        Ok(PathWord {
            start: q.arrow(arrows[0]).source,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> usize {
        self.start
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrow(a).target)
    }

    /// `self` followed by `other`.
    pub fn then(&self, q: &Quiver, other: &PathWord) -> Option<PathWord> {
        if self.target(q) != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(PathWord {
            start: self.start,
            arrows,
        })
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertex_name(self.start))
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Deg-lex key used to orient binomial rewriting.
    fn order_key(&self) -> (usize, &[usize]) {
        (self.arrows.len(), &self.arrows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationGen {
    Monomial(PathWord),
    /// `lhs - sign * rhs = 0`, with `sign` in {1, -1}.
    Binomial {
        lhs: PathWord,
        rhs: PathWord,
        sign: i64,
    },
}

/// Either zero or `coeff * path` with `path` a normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Zero,
    Term { coeff: i64, path: PathWord },
}

pub const DEFAULT_NILPOTENCY: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    quiver: Quiver,
    relations: Vec<RelationGen>,
    nilpotency: Option<usize>,
    /// Optional names for paths, used to label the connector arrows of
    /// repetitive windows.
    named_paths: Vec<(String, PathWord)>,
}

impl AlgebraPresentation {
    pub fn new(
        quiver: Quiver,
        relations: Vec<RelationGen>,
        nilpotency: Option<usize>,
    ) -> Result<Self, PresentationError> {
        for r in &relations {
            match r {
                RelationGen::Monomial(p) => check_path(&quiver, p)?,
                RelationGen::Binomial { lhs, rhs, sign } => {
                    check_path(&quiver, lhs)?;
                    check_path(&quiver, rhs)?;
                    if lhs == rhs
                        || lhs.source() != rhs.source()
                        || lhs.target(&quiver) != rhs.target(&quiver)
                        || !(*sign == 1 || *sign == -1)
                    {
                        return Err(PresentationError::BadBinomial);
                    }
                }
            }
        }
        if nilpotency.is_none() && quiver.has_oriented_cycle() {
            return Err(PresentationError::MissingNilpotency);
        }
        Ok(AlgebraPresentation {
            quiver,
            relations,
            nilpotency,
            named_paths: Vec::new(),
        })
    }

    pub fn with_named_paths(
        mut self,
        named: Vec<(String, PathWord)>,
    ) -> Result<Self, PresentationError> {
        for (_, p) in &named {
            check_path(&self.quiver, p)?;
        }
        self.named_paths = named;
        Ok(self)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[RelationGen] {
        &self.relations
    }

    pub fn nilpotency(&self) -> Option<usize> {
        self.nilpotency
    }

    pub fn named_paths(&self) -> &[(String, PathWord)] {
        &self.named_paths
    }

    /// Paths of this length or longer are zero.
    pub fn length_bound(&self) -> usize {
        self.nilpotency.unwrap_or_else(|| {
            if self.quiver.has_oriented_cycle() {
                DEFAULT_NILPOTENCY
            } else {
                self.quiver.vertex_count()
            }
        })
    }

    pub fn monomials(&self) -> impl Iterator<Item = &PathWord> {
        self.relations.iter().filter_map(|r| match r {
            RelationGen::Monomial(p) => Some(p),
            _ => None,
        })
    }

    pub fn binomials(&self) -> impl Iterator<Item = (&PathWord, &PathWord, i64)> {
        self.relations.iter().filter_map(|r| match r {
            RelationGen::Binomial { lhs, rhs, sign } => Some((lhs, rhs, *sign)),
            _ => None,
        })
    }

    fn contains_monomial(&self, p: &PathWord) -> bool {
        self.monomials()
            .any(|m| !m.is_trivial() && contains_subword(&p.arrows, &m.arrows))
    }

    /// Reduce `p` modulo the relations: monomial relations and the length
    /// bound send it to zero, binomials rewrite the deg-lex larger side to the
    /// smaller one.
    pub fn path_normal_form(&self, p: &PathWord) -> Result<NormalForm, PresentationError> {
        check_path(&self.quiver, p)?;
        let bound = self.length_bound();
        let mut coeff = 1i64;
        let mut cur = p.clone();
        // each rewrite strictly decreases in deg-lex order, so the number of
        // steps is bounded; the cap only guards against malformed input
        for _ in 0..10_000 {
            if cur.len() >= bound || self.contains_monomial(&cur) {
                return Ok(NormalForm::Zero);
            }
            let mut rewritten = false;
            for (lhs, rhs, sign) in self.binomials() {
                let (big, small) = if lhs.order_key() > rhs.order_key() {
                    (lhs, rhs)
                } else {
                    (rhs, lhs)
                };
                if big.is_trivial() {
                    continue;
                }
                if let Some(pos) = find_subword(&cur.arrows, &big.arrows) {
                    let mut arrows = cur.arrows[..pos].to_vec();
                    arrows.extend_from_slice(&small.arrows);
                    arrows.extend_from_slice(&cur.arrows[pos + big.len()..]);
                    cur = PathWord {
                        start: cur.start,
                        arrows,
                    };
                    coeff *= sign;
                    rewritten = true;
                    break;
                }
            }
            if !rewritten {
                return Ok(NormalForm::Term { coeff, path: cur });
            }
        }
        Err(PresentationError::ReductionDiverged)
    }

    /// All composable paths of length below the bound, trivial ones included.
    pub fn all_paths(&self) -> Vec<PathWord> {
        let bound = self.length_bound();
        let mut out: Vec<PathWord> = (0..self.quiver.vertex_count())
            .map(PathWord::trivial)
            .collect();
        let mut frontier = out.clone();
        for _ in 1..bound {
            let mut next = Vec::new();
            for p in &frontier {
                for a in self.quiver.arrows_out(p.target(&self.quiver)) {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(PathWord {
                        start: p.start,
                        arrows,
                    });
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Distinct nonzero normal forms: a basis of the algebra.
    pub fn basis(&self) -> Result<Vec<PathWord>, PresentationError> {
        let mut set = BTreeSet::new();
        for p in self.all_paths() {
            if let NormalForm::Term { path, .. } = self.path_normal_form(&p)? {
                set.insert(path);
            }
        }
        Ok(set.into_iter().collect())
    }

    pub fn to_dsl(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.quiver;
        writeln!(f, "vertices {}", q.vertices.join(" "))?;
        for a in &q.arrows {
            writeln!(
                f,
                "arrow {} : {} -> {}",
                a.name,
                q.vertex_name(a.source),
                q.vertex_name(a.target)
            )?;
        }
        for r in &self.relations {
            match r {
                RelationGen::Monomial(p) => writeln!(f, "zero {}", p.display(q))?,
                RelationGen::Binomial { lhs, rhs, sign } => {
                    let neg = if *sign == -1 { "- " } else { "" };
                    writeln!(f, "equal {} , {}{}", lhs.display(q), neg, rhs.display(q))?
                }
            }
        }
        if let Some(n) = self.nilpotency {
            writeln!(f, "nilpotent {n}")?;
        }
        for (name, p) in &self.named_paths {
            writeln!(f, "connector {name} : {}", p.display(q))?;
        }
        Ok(())
    }
}

fn check_path(q: &Quiver, p: &PathWord) -> Result<(), PresentationError> {
    if p.start >= q.vertex_count() {
        return Err(PresentationError::UnknownVertex(p.start.to_string()));
    }
    let mut at = p.start;
    for &a in &p.arrows {
        if a >= q.arrow_count() {
            return Err(PresentationError::UnknownArrow(a.to_string()));
        }
        if q.arrow(a).source != at {
            let prev = p
                .arrows
                .iter()
                .take_while(|&&b| b != a)
                .last()
                .map_or_else(|| q.vertex_name(at).to_string(), |&b| q.arrow(b).name.clone());
            return Err(PresentationError::NotComposable(prev, q.arrow(a).name.clone()));
        }
        at = q.arrow(a).target;
    }
    Ok(())
}

fn find_subword(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

fn contains_subword(hay: &[usize], needle: &[usize]) -> bool {
    find_subword(hay, needle).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3_with_zero() -> AlgebraPresentation {
        parse_presentation("vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\nzero a b\n")
            .unwrap()
    }

    #[test]
    fn trivial_path_is_idempotent() {
        let p = a3_with_zero();
        let nf = p.path_normal_form(&PathWord::trivial(1)).unwrap();
        assert_eq!(
            nf,
            NormalForm::Term {
                coeff: 1,
                path: PathWord::trivial(1)
            }
        );
    }

    #[test]
    fn loop_square_is_zero() {
        let p = parse_presentation("vertices 1; arrow l : 1 -> 1; zero l l; nilpotent 4").unwrap();
        let ll = PathWord::new(p.quiver(), vec![0, 0]).unwrap();
        assert_eq!(p.path_normal_form(&ll).unwrap(), NormalForm::Zero);
        assert_eq!(p.basis().unwrap().len(), 2);
    }

    #[test]
    fn binomial_identifies_parallel_paths() {
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 2 -> 4\narrow c : 1 -> 3\narrow d : 3 -> 4\nequal a b , c d\n",
        )
        .unwrap();
        let q = p.quiver();
        let ab = PathWord::new(q, vec![0, 1]).unwrap();
        let cd = PathWord::new(q, vec![2, 3]).unwrap();
        assert_eq!(p.path_normal_form(&ab).unwrap(), p.path_normal_form(&cd).unwrap());
        // e1..e4, a, b, c, d, ab = cd
        assert_eq!(p.basis().unwrap().len(), 9);
    }

    #[test]
    fn normal_form_is_idempotent() {
        let p = a3_with_zero();
        for path in p.all_paths() {
            if let NormalForm::Term { path: nf, coeff } = p.path_normal_form(&path).unwrap() {
                assert_eq!(
                    p.path_normal_form(&nf).unwrap(),
                    NormalForm::Term { coeff: 1, path: nf }
                );
                assert_eq!(coeff, 1);
            }
        }
    }

    #[test]
    fn dimension_matches_relation_avoiding_count() {
        // independent count: composable words avoiding every monomial factor
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow t : 2 -> 1\narrow a : 3 -> 2\narrow b : 4 -> 2\narrow l : 4 -> 4\nzero a t\nzero l l\nnilpotent 6\n",
        )
        .unwrap();
        let q = p.quiver();
        let mut count = 0;
        let n = q.arrow_count();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        count += q.vertex_count();
        for a in 0..n {
            stack.push(vec![a]);
        }
        while let Some(w) = stack.pop() {
            let ok = w.windows(2).all(|x| {
                q.arrow(x[0]).target == q.arrow(x[1]).source
                    && !(q.arrow(x[0]).name == "a" && q.arrow(x[1]).name == "t")
                    && !(q.arrow(x[0]).name == "l" && q.arrow(x[1]).name == "l")
            });
            if !ok || w.len() >= 6 {
                continue;
            }
            count += 1;
            for a in 0..n {
                let mut v = w.clone();
                v.push(a);
                stack.push(v);
            }
        }
        // idempotents, four arrows, `b t` and `l b`, and `l b t`
        assert_eq!(count, 4 + 4 + 2 + 1);
        assert_eq!(p.basis().unwrap().len(), count);
    }
}
