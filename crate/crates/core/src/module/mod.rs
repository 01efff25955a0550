//! Finite-dimensional representations of the repetitive quiver and their
//! morphisms.
//!
//! A module only stores the degree range it occupies; the ambient quiver is
//! infinite, so there is no window boundary to fall off. Finite windows are
//! materialized on demand when relations have to be checked or exported.

mod decompose;
mod hom;
mod ops;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::presentation::RelationGen;
use crate::repetitive::{RArrow, RPath, RVertex, Repetitive};

pub use decompose::{
    decompose_with, is_indecomposable, local_residues, residue, unique_eigenvalue, DecomposeError, Summand,
};
pub(crate) use hom::{combine, solve_combination};
pub use hom::{
    find_isomorphism, hom_basis, hom_dim, is_isomorphic, splitness, Splitness,
};
pub use ops::{
    check_ses, direct_sum, injective_hull, proj_injective_module, projective, projective_cover, quotient,
    radical_of_projective, submodule,
    ComponentwiseView, DegreePart, DirectSum, Projective, SesReport, SubQuotient,
};
pub use text::{parse_module, parse_morphism, TextError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("modules live over different repetitive algebras")]
    AlgebraMismatch,
    #[error("morphisms do not compose")]
    NotComposable,
    #[error("the zero module has no injective hull")]
    ZeroModule,
}

#[derive(Clone)]
pub struct GradedModule<F: Scalar> {
    rep: Arc<Repetitive>,
    lo: i64,
    nz: usize,
    dims: Vec<usize>,
    action: Vec<Matrix<F>>,
}

impl<F: Scalar> PartialEq for GradedModule<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.rep, &other.rep)
            && self.lo == other.lo
            && self.nz == other.nz
            && self.dims == other.dims
            && self.action == other.action
    }
}

impl<F: Scalar> Eq for GradedModule<F> {}

impl<F: Scalar> fmt::Debug for GradedModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn union_range(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.min(l2), h1.max(h2))),
    }
}

/// Collects dimensions and arrow matrices, then lays them out densely.
pub struct ModuleBuilder<F: Scalar> {
    rep: Arc<Repetitive>,
    dims: BTreeMap<RVertex, usize>,
    action: BTreeMap<RArrow, Matrix<F>>,
}

impl<F: Scalar> ModuleBuilder<F> {
    pub fn new(rep: &Arc<Repetitive>) -> Self {
        ModuleBuilder {
            rep: rep.clone(),
            dims: BTreeMap::new(),
            action: BTreeMap::new(),
        }
    }

    pub fn dim(&mut self, x: RVertex, d: usize) -> &mut Self {
        self.dims.insert(x, d);
        self
    }

    pub fn arrow(&mut self, a: RArrow, m: Matrix<F>) -> &mut Self {
        self.action.insert(a, m);
        self
    }

    pub fn build(&self) -> GradedModule<F> {
        let support = self
            .dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(x, _)| x.z)
            .fold(None, |acc, z| union_range(acc, Some((z, z))));
        let Some((lo, hi)) = support else {
            return GradedModule::zero(&self.rep);
        };
        let mut m = GradedModule::zero_on(&self.rep, lo, hi);
        for (x, &d) in &self.dims {
            if let Some(i) = m.vidx(*x) {
                m.dims[i] = d;
            }
        }
        for a in m.arrows_in_range() {
            let (s, t) = (m.dim(self.rep.source(a)), m.dim(self.rep.target(a)));
            let mat = match self.action.get(&a) {
                Some(mat) => {
                    assert_eq!(mat.shape(), (t, s), "bad shape for {}", self.rep.arrow_name(a));
                    mat.clone()
                }
                None => Matrix::zeros(t, s),
            };
            let i = m.aidx(a).unwrap();
            m.action[i] = mat;
        }
        m
    }
}

impl<F: Scalar> GradedModule<F> {
    pub fn zero(rep: &Arc<Repetitive>) -> Self {
        GradedModule {
            rep: rep.clone(),
            lo: 0,
            nz: 0,
            dims: Vec::new(),
            action: Vec::new(),
        }
    }

    /// All-zero layout over `[lo, hi]`, used as scaffolding.
    fn zero_on(rep: &Arc<Repetitive>, lo: i64, hi: i64) -> Self {
        let nz = (hi - lo + 1) as usize;
        GradedModule {
            rep: rep.clone(),
            lo,
            nz,
            dims: vec![0; nz * rep.vertex_count()],
            action: vec![Matrix::zeros(0, 0); nz * rep.letters_per_degree()],
        }
    }

    pub fn repetitive(&self) -> &Arc<Repetitive> {
        &self.rep
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.rep, &other.rep)
    }

    /// Degree range of the support, `None` for the zero module.
    pub fn range(&self) -> Option<(i64, i64)> {
        (self.nz > 0).then(|| (self.lo, self.lo + self.nz as i64 - 1))
    }

    /// Degrees with a nonzero vertex.
    pub fn support(&self) -> Vec<i64> {
        self.vertices_in_range()
            .filter(|&x| self.dim(x) > 0)
            .map(|x| x.z)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    fn vidx(&self, x: RVertex) -> Option<usize> {
        let off = x.z - self.lo;
        (off >= 0 && (off as usize) < self.nz)
            .then(|| off as usize * self.rep.vertex_count() + x.v)
    }

    fn aidx(&self, a: RArrow) -> Option<usize> {
        let off = a.z - self.lo;
        (off >= 0 && (off as usize) < self.nz)
            .then(|| off as usize * self.rep.letters_per_degree() + self.rep.letter_index(a.letter))
    }

    pub fn dim(&self, x: RVertex) -> usize {
        self.vidx(x).map_or(0, |i| self.dims[i])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn vertices_in_range(&self) -> impl Iterator<Item = RVertex> + '_ {
        let nv = self.rep.vertex_count();
        (0..self.nz).flat_map(move |k| {
            (0..nv).map(move |v| RVertex {
                z: self.lo + k as i64,
                v,
            })
        })
    }

    /// Arrows whose source lies in the range.
    pub fn arrows_in_range(&self) -> Vec<RArrow> {
        let nl = self.rep.letters_per_degree();
        (0..self.nz)
            .flat_map(|k| {
                (0..nl).map(move |i| (self.lo + k as i64, i))
            })
            .map(|(z, i)| RArrow {
                z,
                letter: self.rep.letter_from_index(i),
            })
            .collect()
    }

    pub fn action(&self, a: RArrow) -> Matrix<F> {
        match self.aidx(a) {
            Some(i) => self.action[i].clone(),
            None => Matrix::zeros(self.dim(self.rep.target(a)), self.dim(self.rep.source(a))),
        }
    }

    /// The linear map of a path, composed in application order.
    pub fn path_action(&self, p: &RPath) -> Matrix<F> {
        let d = self.dim(p.start);
        let mut m = Matrix::identity(d);
        for &a in &p.arrows {
            m = &self.action(a) * &m;
        }
        m
    }

    /// Check every relation of the repetitive algebra.
    pub fn satisfies_relations(&self) -> bool {
        let Some((lo, hi)) = self.range() else {
            return true;
        };
        let win = self
            .rep
            .window(lo - 1, hi + 1)
            .expect("window of length at least 3");
        win.presentation().relations().iter().all(|r| match r {
            RelationGen::Monomial(p) => self.path_action(&win.lift(p)).is_zero(),
            RelationGen::Binomial { lhs, rhs, sign } => {
                let l = self.path_action(&win.lift(lhs));
                let r = self.path_action(&win.lift(rhs)).scale(&F::from_i64(*sign));
                l == r
            }
        })
    }

    /// Restrict the layout to the support.
    pub fn trimmed(&self) -> Self {
        let support = self.support();
        match (support.first(), support.last()) {
            (Some(&lo), Some(&hi)) => {
                let mut m = GradedModule::zero_on(&self.rep, lo, hi);
                for x in m.vertices_in_range().collect::<Vec<_>>() {
                    let i = m.vidx(x).unwrap();
                    m.dims[i] = self.dim(x);
                }
                for a in m.arrows_in_range() {
                    let i = m.aidx(a).unwrap();
                    m.action[i] = self.action(a);
                }
                m
            }
            _ => GradedModule::zero(&self.rep),
        }
    }

    /// Shift every degree by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut m = self.clone();
        if m.nz > 0 {
            m.lo += k;
        }
        m
    }

    /// The degree-`i` part as a module concentrated in one degree: the
    /// underlying base-algebra module `M_i`.
    pub fn restrict_degree(&self, i: i64) -> Self {
        let mut b = ModuleBuilder::new(&self.rep);
        for v in 0..self.rep.vertex_count() {
            b.dim(RVertex { z: i, v }, self.dim(RVertex { z: i, v }));
        }
        for c in 0..self.rep.copy_count() {
            let a = RArrow {
                z: i,
                letter: crate::repetitive::Letter::Copy(c),
            };
            b.arrow(a, self.action(a));
        }
        b.build()
    }

    /// Dimension vector as `(vertex, dim)` pairs over the support.
    pub fn dimension_vector(&self) -> Vec<(RVertex, usize)> {
        self.vertices_in_range()
            .map(|x| (x, self.dim(x)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Total dimension per degree over the support.
    pub fn degree_dims(&self) -> Vec<(i64, usize)> {
        let mut out: BTreeMap<i64, usize> = BTreeMap::new();
        for (x, d) in self.dimension_vector() {
            *out.entry(x.z).or_default() += d;
        }
        out.into_iter().collect()
    }
}

/// A module homomorphism, stored as one block per vertex over the union of
/// the two supports.
#[derive(Clone)]
pub struct Morphism<F: Scalar> {
    source: GradedModule<F>,
    target: GradedModule<F>,
    lo: i64,
    nz: usize,
    blocks: Vec<Matrix<F>>,
}

impl<F: Scalar> PartialEq for Morphism<F> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.blocks == other.blocks
    }
}

impl<F: Scalar> Eq for Morphism<F> {}

impl<F: Scalar> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<F: Scalar> Morphism<F> {
    /// Build from a block function; blocks must have shape
    /// `target.dim(x) × source.dim(x)`.
    pub fn from_fn(
        source: &GradedModule<F>,
        target: &GradedModule<F>,
        mut block: impl FnMut(RVertex) -> Matrix<F>,
    ) -> Self {
        assert!(source.same_algebra(target));
        let range = union_range(source.range(), target.range());
        let (lo, nz) = range.map_or((0, 0), |(l, h)| (l, (h - l + 1) as usize));
        let nv = source.rep.vertex_count();
        let mut blocks = Vec::with_capacity(nz * nv);
        for k in 0..nz {
            for v in 0..nv {
                let x = RVertex { z: lo + k as i64, v };
                let shape = (target.dim(x), source.dim(x));
                let b = if shape.0 == 0 || shape.1 == 0 {
                    Matrix::zeros(shape.0, shape.1)
                } else {
                    block(x)
                };
                assert_eq!(b.shape(), shape, "bad block shape at {}", source.rep.vertex_name(x));
                blocks.push(b);
            }
        }
        Morphism {
            source: source.clone(),
            target: target.clone(),
            lo,
            nz,
            blocks,
        }
    }

    pub fn from_blocks(
        source: &GradedModule<F>,
        target: &GradedModule<F>,
        blocks: &BTreeMap<RVertex, Matrix<F>>,
    ) -> Self {
        Morphism::from_fn(source, target, |x| {
            blocks
                .get(&x)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(target.dim(x), source.dim(x)))
        })
    }

    pub fn zero(source: &GradedModule<F>, target: &GradedModule<F>) -> Self {
        Morphism::from_fn(source, target, |x| Matrix::zeros(target.dim(x), source.dim(x)))
    }

    pub fn identity(m: &GradedModule<F>) -> Self {
        Morphism::from_fn(m, m, |x| Matrix::identity(m.dim(x)))
    }

    pub fn source(&self) -> &GradedModule<F> {
        &self.source
    }

    pub fn target(&self) -> &GradedModule<F> {
        &self.target
    }

    fn bidx(&self, x: RVertex) -> Option<usize> {
        let off = x.z - self.lo;
        (off >= 0 && (off as usize) < self.nz)
            .then(|| off as usize * self.source.rep.vertex_count() + x.v)
    }

    pub fn block(&self, x: RVertex) -> Matrix<F> {
        match self.bidx(x) {
            Some(i) => self.blocks[i].clone(),
            None => Matrix::zeros(self.target.dim(x), self.source.dim(x)),
        }
    }

    /// Vertices where both ends may be nonzero.
    pub fn vertices(&self) -> impl Iterator<Item = RVertex> + '_ {
        let nv = self.source.rep.vertex_count();
        (0..self.nz).flat_map(move |k| {
            (0..nv).map(move |v| RVertex {
                z: self.lo + k as i64,
                v,
            })
        })
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Morphism<F>) -> Morphism<F> {
        assert!(f.target == self.source, "morphisms do not compose");
        Morphism::from_fn(&f.source, &self.target, |x| &self.block(x) * &f.block(x))
    }

    fn zip(&self, other: &Morphism<F>, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Self {
        assert!(self.source == other.source && self.target == other.target);
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            lo: self.lo,
            nz: self.nz,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Morphism<F>) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Morphism<F>) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut m = self.clone();
        for b in &mut m.blocks {
            *b = b.scale(c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// All commutation constraints hold exactly.
    pub fn is_valid(&self) -> bool {
        let arrows = union_range(self.source.range(), self.target.range())
            .map(|(lo, hi)| GradedModule::<F>::zero_on(&self.source.rep, lo, hi).arrows_in_range())
            .unwrap_or_default();
        let rep = &self.source.rep;
        arrows.iter().all(|&a| {
            let lhs = &self.block(rep.target(a)) * &self.source.action(a);
            let rhs = &self.target.action(a) * &self.block(rep.source(a));
            lhs == rhs
        })
    }

    /// Entries of all blocks in vertex order, row-major within a block.
    pub fn flatten(&self) -> Vec<F> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().iter().cloned())
            .collect()
    }

    pub fn from_flat(source: &GradedModule<F>, target: &GradedModule<F>, flat: &[F]) -> Self {
        let mut pos = 0;
        let m = Morphism::from_fn(source, target, |x| {
            let (r, c) = (target.dim(x), source.dim(x));
            let b = Matrix::from_rows(r, c, flat[pos..pos + r * c].to_vec());
            pos += r * c;
            b
        });
        assert_eq!(pos, flat.len());
        m
    }

    /// Length of `flatten` for morphisms between these modules.
    pub fn flat_len(source: &GradedModule<F>, target: &GradedModule<F>) -> usize {
        let mut n = 0;
        Morphism::from_fn(source, target, |x| {
            n += target.dim(x) * source.dim(x);
            Matrix::zeros(target.dim(x), source.dim(x))
        });
        n
    }

    pub fn is_injective(&self) -> bool {
        self.vertices().all(|x| self.block(x).rank() == self.source.dim(x))
    }

    pub fn is_surjective(&self) -> bool {
        self.vertices().all(|x| self.block(x).rank() == self.target.dim(x))
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<Morphism<F>> {
        let mut inv = BTreeMap::new();
        for x in self.vertices() {
            inv.insert(x, self.block(x).inverse()?);
        }
        Some(Morphism::from_blocks(&self.target, &self.source, &inv))
    }

    /// Degree-`i` component `h_i : M_i → N_i`.
    pub fn component(&self, i: i64) -> Morphism<F> {
        let s = self.source.restrict_degree(i);
        let t = self.target.restrict_degree(i);
        Morphism::from_fn(&s, &t, |x| self.block(x))
    }

    /// Union of the degrees carrying a nonzero source or target.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.source.support();
        d.extend(self.target.support());
        d.sort();
        d.dedup();
        d
    }
}

#[cfg(test)]
mod tests;
