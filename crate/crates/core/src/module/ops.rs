use std::collections::BTreeMap;
use std::sync::Arc;

use super::hom::hom_basis;
use super::{GradedModule, ModuleBuilder, ModuleError, Morphism};
use crate::field::Scalar;
use crate::matrix::{span_basis, Matrix};
use crate::presentation::RelationGen;
use crate::repetitive::{Letter, RArrow, RPath, RVertex, Repetitive};

/// A submodule with its inclusion, or a quotient with its projection.
#[derive(Clone, Debug)]
pub struct SubQuotient<F: Scalar> {
    pub module: GradedModule<F>,
    pub map: Morphism<F>,
}

/// The submodule spanned at each vertex by the given column vectors, which
/// must be linearly independent and closed under the arrow actions.
pub fn submodule<F: Scalar>(
    m: &GradedModule<F>,
    basis: &BTreeMap<RVertex, Vec<Vec<F>>>,
) -> SubQuotient<F> {
    let rep = m.repetitive();
    let mats: BTreeMap<RVertex, Matrix<F>> = m
        .vertices_in_range()
        .map(|x| {
            let cols = basis.get(&x).cloned().unwrap_or_default();
            (x, Matrix::from_columns(m.dim(x), &cols))
        })
        .collect();
    let mut b = ModuleBuilder::new(rep);
    for (x, mat) in &mats {
        b.dim(*x, mat.cols());
    }
    for a in m.arrows_in_range() {
        let (s, t) = (rep.source(a), rep.target(a));
        let (Some(bs), Some(bt)) = (mats.get(&s), mats.get(&t)) else {
            continue;
        };
        if bs.cols() == 0 || bt.cols() == 0 {
            continue;
        }
        let img = &m.action(a) * bs;
        let induced = bt
            .solve_matrix(&img)
            .expect("subspace is not closed under the arrow actions");
        b.arrow(a, induced);
    }
    let sub = b.build();
    let incl = Morphism::from_fn(&sub, m, |x| mats[&x].clone());
    SubQuotient {
        module: sub,
        map: incl,
    }
}

/// `M / U` where `U` is spanned by the given columns at each vertex.
pub fn quotient<F: Scalar>(
    m: &GradedModule<F>,
    sub: &BTreeMap<RVertex, Vec<Vec<F>>>,
) -> SubQuotient<F> {
    let rep = m.repetitive();
    // rows annihilating the subspace: a full-rank map with kernel U
    let proj: BTreeMap<RVertex, Matrix<F>> = m
        .vertices_in_range()
        .map(|x| {
            let d = m.dim(x);
            let cols = sub.get(&x).cloned().unwrap_or_default();
            let p = if cols.is_empty() {
                Matrix::identity(d)
            } else {
                let ann = Matrix::from_columns(d, &cols).transpose().nullspace();
                Matrix::from_columns(d, &ann).transpose()
            };
            (x, p)
        })
        .collect();
    let mut b = ModuleBuilder::new(rep);
    for (x, p) in &proj {
        b.dim(*x, p.rows());
    }
    for a in m.arrows_in_range() {
        let (s, t) = (rep.source(a), rep.target(a));
        let (Some(ps), Some(pt)) = (proj.get(&s), proj.get(&t)) else {
            continue;
        };
        if ps.rows() == 0 || pt.rows() == 0 {
            continue;
        }
        let right_inv = ps
            .solve_matrix(&Matrix::identity(ps.rows()))
            .expect("projection has full row rank");
        b.arrow(a, &(pt * &m.action(a)) * &right_inv);
    }
    let q = b.build();
    let map = Morphism::from_fn(m, &q, |x| proj[&x].clone());
    SubQuotient { module: q, map }
}

impl<F: Scalar> Morphism<F> {
    pub fn kernel(&self) -> SubQuotient<F> {
        let basis = self
            .source()
            .vertices_in_range()
            .map(|x| (x, self.block(x).nullspace()))
            .collect();
        submodule(self.source(), &basis)
    }

    pub fn image(&self) -> SubQuotient<F> {
        let basis = self
            .target()
            .vertices_in_range()
            .map(|x| (x, self.block(x).column_basis()))
            .collect();
        submodule(self.target(), &basis)
    }

    pub fn cokernel(&self) -> SubQuotient<F> {
        let basis = self
            .target()
            .vertices_in_range()
            .map(|x| (x, self.block(x).column_basis()))
            .collect();
        quotient(self.target(), &basis)
    }
}

fn socle_basis<F: Scalar>(m: &GradedModule<F>) -> BTreeMap<RVertex, Vec<Vec<F>>> {
    let rep = m.repetitive();
    m.vertices_in_range()
        .map(|x| {
            let d = m.dim(x);
            let mut stacked = Matrix::zeros(0, d);
            for a in rep.arrows_out(x) {
                stacked = stacked.vstack(&m.action(a));
            }
            (x, stacked.nullspace())
        })
        .collect()
}

fn radical_basis<F: Scalar>(m: &GradedModule<F>) -> BTreeMap<RVertex, Vec<Vec<F>>> {
    let rep = m.repetitive();
    m.vertices_in_range()
        .map(|x| {
            let mut cols = Vec::new();
            for a in rep.arrows_in(x) {
                cols.extend(m.action(a).columns());
            }
            (x, span_basis(m.dim(x), &cols))
        })
        .collect()
}

impl<F: Scalar> GradedModule<F> {
    /// Joint kernel of all arrow actions, with its inclusion.
    pub fn socle(&self) -> SubQuotient<F> {
        submodule(self, &socle_basis(self))
    }

    /// Sum of the images of all arrow actions, with its inclusion.
    pub fn radical(&self) -> SubQuotient<F> {
        submodule(self, &radical_basis(self))
    }

    /// `M / rad M` with its projection.
    pub fn top(&self) -> SubQuotient<F> {
        quotient(self, &radical_basis(self))
    }

    /// `M / soc M` with its projection.
    pub fn quotient_by_socle(&self) -> SubQuotient<F> {
        quotient(self, &socle_basis(self))
    }

    /// Dimensions of the radical layers `rad^i M / rad^{i+1} M`.
    pub fn loewy_dims(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let rad = cur.radical().module;
            out.push(cur.total_dim() - rad.total_dim());
            cur = rad;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum<F: Scalar> {
    pub module: GradedModule<F>,
    pub inclusions: Vec<Morphism<F>>,
    pub projections: Vec<Morphism<F>>,
}

pub fn direct_sum<F: Scalar>(rep: &Arc<Repetitive>, parts: &[GradedModule<F>]) -> DirectSum<F> {
    let mut b = ModuleBuilder::new(rep);
    let mut dims: BTreeMap<RVertex, Vec<usize>> = BTreeMap::new();
    let mut arrows: Vec<RArrow> = Vec::new();
    for p in parts {
        assert!(Arc::ptr_eq(p.repetitive(), rep));
        arrows.extend(p.arrows_in_range());
        for x in p.vertices_in_range() {
            dims.entry(x).or_default();
        }
    }
    for x in dims.clone().keys() {
        dims.insert(*x, parts.iter().map(|p| p.dim(*x)).collect());
    }
    for (x, ds) in &dims {
        b.dim(*x, ds.iter().sum());
    }
    arrows.sort();
    arrows.dedup();
    for a in arrows {
        let mut acc = Matrix::zeros(0, 0);
        for p in parts {
            acc = acc.block_diag(&p.action(a));
        }
        b.arrow(a, acc);
    }
    let module = b.build();
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let place = |x: RVertex| {
            let ds = dims.get(&x).cloned().unwrap_or_else(|| vec![0; parts.len()]);
            let before: usize = ds[..k].iter().sum();
            let total: usize = ds.iter().sum();
            let mut m = Matrix::zeros(total, ds[k]);
            m.set_block(before, 0, &Matrix::identity(ds[k]));
            m
        };
        inclusions.push(Morphism::from_fn(p, &module, place));
        projections.push(Morphism::from_fn(&module, p, |x| place(x).transpose()));
    }
    DirectSum {
        module,
        inclusions,
        projections,
    }
}

/// An indecomposable projective-injective `P(x)` with its path basis.
#[derive(Clone, Debug)]
pub struct Projective<F: Scalar> {
    pub module: GradedModule<F>,
    pub top: RVertex,
    pub basis: BTreeMap<RVertex, Vec<RPath>>,
}

impl<F: Scalar> Projective<F> {
    /// The map `P(x) → M` sending the top generator to `m ∈ M_x`.
    pub fn map_to(&self, target: &GradedModule<F>, m: &[F]) -> Morphism<F> {
        Morphism::from_fn(&self.module, target, |y| {
            let cols: Vec<Vec<F>> = self.basis[&y]
                .iter()
                .map(|w| target.path_action(w).apply(m))
                .collect();
            Matrix::from_columns(target.dim(y), &cols)
        })
    }
}

/// The projective cover of the simple at `x`: top at `x`, simple socle at
/// the same base vertex one degree up.
pub fn projective<F: Scalar>(rep: &Arc<Repetitive>, x: RVertex) -> Projective<F> {
    let groups = rep.value_groups_from(x);
    let mut canon: Vec<&RPath> = groups.values().map(|g| &g[0]).collect();
    canon.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    let mut basis: BTreeMap<RVertex, Vec<RPath>> = BTreeMap::new();
    for p in &canon {
        basis.entry(rep.path_end(p)).or_default().push((*p).clone());
    }
    // basis element -> (vertex, index)
    let mut index = BTreeMap::new();
    for (y, ps) in &basis {
        for (i, p) in ps.iter().enumerate() {
            index.insert(rep.value(p).unwrap(), (*y, i));
        }
    }
    let mut b = ModuleBuilder::new(rep);
    for (y, ps) in &basis {
        b.dim(*y, ps.len());
    }
    let mut mats: BTreeMap<RArrow, Matrix<F>> = BTreeMap::new();
    for (y, ps) in &basis {
        for a in rep.arrows_out(*y) {
            let t = rep.target(a);
            let tdim = basis.get(&t).map_or(0, |v| v.len());
            let m = mats
                .entry(a)
                .or_insert_with(|| Matrix::zeros(tdim, ps.len()));
            for (j, p) in ps.iter().enumerate() {
                let mut w = p.clone();
                w.arrows.push(a);
                if let Some(v) = rep.value(&w) {
                    let (ty, i) = index[&v];
                    debug_assert_eq!(ty, t);
                    m[(i, j)] = F::one();
                }
            }
        }
    }
    for (a, m) in mats {
        b.arrow(a, m);
    }
    Projective {
        module: b.build(),
        top: x,
        basis,
    }
}

/// The projective-injective whose degree-`z` part is `Hom(Q, I(v))` and
/// whose degree-`(z + 1)` part is the injective `I(v)` of base vertex `v`.
pub fn proj_injective_module<F: Scalar>(rep: &Arc<Repetitive>, v: usize, z: i64) -> GradedModule<F> {
    projective(rep, RVertex { z, v }).module
}

pub fn radical_of_projective<F: Scalar>(p: &GradedModule<F>) -> (GradedModule<F>, Morphism<F>) {
    let r = p.radical();
    (r.module, r.map)
}

/// `P → M` with `P` projective and the map inducing an iso on tops.
pub fn projective_cover<F: Scalar>(m: &GradedModule<F>) -> (GradedModule<F>, Morphism<F>, Vec<RVertex>) {
    let rep = m.repetitive();
    let top = m.top();
    let mut parts = Vec::new();
    let mut gens = Vec::new();
    for x in top.module.vertices_in_range() {
        let pi = top.map.block(x);
        for k in 0..top.module.dim(x) {
            let mut e = vec![F::zero(); top.module.dim(x)];
            e[k] = F::one();
            let lift = pi.solve(&e).expect("projection onto the top is surjective");
            parts.push(projective::<F>(rep, x));
            gens.push(lift);
        }
    }
    let modules: Vec<GradedModule<F>> = parts.iter().map(|p| p.module.clone()).collect();
    let sum = direct_sum(rep, &modules);
    let mut map = Morphism::zero(&sum.module, m);
    for ((p, g), proj) in parts.iter().zip(&gens).zip(&sum.projections) {
        map = map.add(&p.map_to(m, g).after(proj));
    }
    (sum.module, map, parts.iter().map(|p| p.top).collect())
}

/// The injective hull `ι : M → I(M)`; `I(M)` is a sum of indecomposable
/// projective-injectives, one per socle basis vector, listed by top vertex.
pub fn injective_hull<F: Scalar>(
    m: &GradedModule<F>,
) -> Result<(GradedModule<F>, Morphism<F>, Vec<RVertex>), ModuleError> {
    if m.is_zero() {
        return Err(ModuleError::ZeroModule);
    }
    let rep = m.repetitive();
    let soc = socle_basis(m);
    let mut parts = Vec::new();
    let mut maps = Vec::new();
    let mut tops = Vec::new();
    for (x, vecs) in &soc {
        if vecs.is_empty() {
            continue;
        }
        let y = x.shift(-1);
        let p = projective::<F>(rep, y).module;
        let psoc = p.socle();
        assert_eq!(psoc.module.total_dim(), 1, "projective-injective with non-simple socle");
        let sigma = psoc.map.block(*x).column(0);
        let basis = hom_basis(m, &p);
        for j in 0..vecs.len() {
            // find φ with φ(s_i) = δ_ij σ for the socle basis at x
            let mut cols: Vec<Vec<F>> = Vec::new();
            for f in &basis {
                let b = f.block(*x);
                cols.push(vecs.iter().flat_map(|s| b.apply(s)).collect());
            }
            let goal: Vec<F> = (0..vecs.len())
                .flat_map(|i| {
                    if i == j {
                        sigma.clone()
                    } else {
                        vec![F::zero(); sigma.len()]
                    }
                })
                .collect();
            let coeffs = Matrix::from_columns(goal.len(), &cols)
                .solve(&goal)
                .expect("socle functional extends to the injective");
            maps.push(super::hom::combine(&basis, &coeffs, m, &p));
            parts.push(p.clone());
            tops.push(y);
        }
    }
    let sum = direct_sum(rep, &parts);
    let mut iota = Morphism::zero(m, &sum.module);
    for (phi, inc) in maps.iter().zip(&sum.inclusions) {
        iota = iota.add(&inc.after(phi));
    }
    Ok((sum.module, iota, tops))
}

/// Outcome of checking a short exact sequence globally and degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesReport {
    pub global_exact: bool,
    pub degreewise_exact: bool,
    pub per_degree: Vec<(i64, bool)>,
}

impl SesReport {
    pub fn agree(&self) -> bool {
        self.global_exact == self.degreewise_exact
    }
}

fn total_matrix<F: Scalar>(h: &Morphism<F>, xs: &[RVertex]) -> Matrix<F> {
    let mut acc = Matrix::zeros(0, 0);
    for &x in xs {
        acc = acc.block_diag(&h.block(x));
    }
    acc
}

fn exact_at<F: Scalar>(h: &Morphism<F>, h2: &Morphism<F>, xs: &[RVertex]) -> bool {
    let a = total_matrix(h, xs);
    let b = total_matrix(h2, xs);
    let (dm, dm2) = (a.cols(), b.rows());
    let dmid = a.rows();
    let (ra, rb) = (a.rank(), b.rank());
    ra == dm && rb == dm2 && (&b * &a).is_zero() && ra + rb == dmid
}

/// `0 → M --h--> M' --h2--> M'' → 0`.
pub fn check_ses<F: Scalar>(h: &Morphism<F>, h2: &Morphism<F>) -> SesReport {
    if h.target() != h2.source() {
        return SesReport {
            global_exact: false,
            degreewise_exact: false,
            per_degree: Vec::new(),
        };
    }
    let mut xs: Vec<RVertex> = h.vertices().chain(h2.vertices()).collect();
    xs.sort();
    xs.dedup();
    let global_exact = exact_at(h, h2, &xs);
    let mut degrees: Vec<i64> = h.degrees();
    degrees.extend(h2.degrees());
    degrees.sort();
    degrees.dedup();
    let per_degree: Vec<(i64, bool)> = degrees
        .iter()
        .map(|&i| {
            let (c, c2) = (h.component(i), h2.component(i));
            let ys: Vec<RVertex> = xs.iter().copied().filter(|x| x.z == i).collect();
            (i, exact_at(&c, &c2, &ys))
        })
        .collect();
    SesReport {
        global_exact,
        degreewise_exact: per_degree.iter().all(|(_, ok)| *ok),
        per_degree,
    }
}

/// `M = (M_i, f_i)`: the base-algebra module in each degree together with
/// the connector maps leaving it.
#[derive(Clone, Debug)]
pub struct ComponentwiseView<F: Scalar> {
    pub degrees: Vec<DegreePart<F>>,
}

#[derive(Clone, Debug)]
pub struct DegreePart<F: Scalar> {
    pub z: i64,
    pub module: GradedModule<F>,
    pub connectors: Vec<(RArrow, Matrix<F>)>,
}

impl<F: Scalar> GradedModule<F> {
    pub fn componentwise_view(&self) -> ComponentwiseView<F> {
        let rep = self.repetitive();
        let degrees = self
            .support()
            .into_iter()
            .map(|z| DegreePart {
                z,
                module: self.restrict_degree(z),
                connectors: (0..rep.conn_count())
                    .map(|c| {
                        let a = RArrow {
                            z,
                            letter: Letter::Conn(c),
                        };
                        (a, self.action(a))
                    })
                    .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                    .collect(),
            })
            .collect();
        ComponentwiseView { degrees }
    }

    /// Composites through two consecutive connector layers vanish.
    pub fn connector_composites_vanish(&self) -> bool {
        let Some((lo, hi)) = self.range() else {
            return true;
        };
        let win = self.repetitive().window(lo - 1, hi + 1).unwrap();
        win.presentation().relations().iter().all(|r| match r {
            RelationGen::Monomial(p) => {
                let lifted = win.lift(p);
                let conns = lifted
                    .arrows
                    .iter()
                    .filter(|a| matches!(a.letter, Letter::Conn(_)))
                    .count();
                conns < 2 || self.path_action(&lifted).is_zero()
            }
            RelationGen::Binomial { .. } => true,
        })
    }
}
