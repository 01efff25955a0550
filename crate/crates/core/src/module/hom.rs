use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GradedModule, Morphism};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::repetitive::RVertex;
use crate::sparse::{SparseEchelon, SparseRow};

/// Offsets of each vertex block inside a flattened morphism.
fn layout<F: Scalar>(m: &GradedModule<F>, n: &GradedModule<F>) -> (Vec<(RVertex, usize)>, usize) {
    let mut offsets = Vec::new();
    let mut pos = 0;
    Morphism::from_fn(m, n, |x| {
        offsets.push((x, pos));
        pos += n.dim(x) * m.dim(x);
        Matrix::zeros(n.dim(x), m.dim(x))
    });
    (offsets, pos)
}

/// A basis of `Hom(M, N)`: the nullspace of the commutation constraints
/// `B_t A_M(a) = A_N(a) B_s` over all arrows `a : s → t`.
pub fn hom_basis<F: Scalar>(m: &GradedModule<F>, n: &GradedModule<F>) -> Vec<Morphism<F>> {
    assert!(m.same_algebra(n), "modules live over different algebras");
    let (offsets, len) = layout(m, n);
    if len == 0 {
        return Vec::new();
    }
    let rep = m.repetitive();
    let offset = |x: RVertex| {
        offsets
            .iter()
            .find(|(y, _)| *y == x)
            .map(|&(_, o)| o)
    };
    let mut ech = SparseEchelon::new(len);
    let mut arrows = m.arrows_in_range();
    arrows.extend(n.arrows_in_range());
    arrows.sort();
    arrows.dedup();
    for a in arrows {
        let (s, t) = (rep.source(a), rep.target(a));
        let am = m.action(a); // dim_M(t) × dim_M(s)
        let an = n.action(a); // dim_N(t) × dim_N(s)
        let (ms, mt, ns, nt) = (m.dim(s), m.dim(t), n.dim(s), n.dim(t));
        if ms == 0 || nt == 0 {
            continue;
        }
        // (B_t A_M - A_N B_s)[i][j] for i < dim_N(t), j < dim_M(s)
        for i in 0..nt {
            for j in 0..ms {
                let mut row = SparseRow::new();
                if let Some(ot) = offset(t) {
                    for k in 0..mt {
                        let c = &am[(k, j)];
                        if !c.is_zero() {
                            let e = row.entry(ot + i * mt + k).or_insert_with(F::zero);
                            *e = e.clone() + c.clone();
                        }
                    }
                }
                if let Some(os) = offset(s) {
                    for k in 0..ns {
                        let c = &an[(i, k)];
                        if !c.is_zero() {
                            let e = row.entry(os + k * ms + j).or_insert_with(F::zero);
                            *e = e.clone() - c.clone();
                        }
                    }
                }
                if !row.is_empty() {
                    ech.push(row);
                }
            }
        }
    }
    ech.nullspace()
        .iter()
        .map(|v| Morphism::from_flat(m, n, v))
        .collect()
}

pub fn hom_dim<F: Scalar>(m: &GradedModule<F>, n: &GradedModule<F>) -> usize {
    hom_basis(m, n).len()
}

/// Solve `Σ c_j terms_j = goal` for morphisms with a common shape.
pub(crate) fn solve_combination<F: Scalar>(
    terms: &[Morphism<F>],
    goal: &Morphism<F>,
) -> Option<Vec<F>> {
    let rows = goal.flatten().len();
    if terms.is_empty() {
        return goal.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<F>> = terms.iter().map(|t| t.flatten()).collect();
    Matrix::from_columns(rows, &cols).solve(&goal.flatten())
}

pub(crate) fn combine<F: Scalar>(
    basis: &[Morphism<F>],
    coeffs: &[F],
    source: &GradedModule<F>,
    target: &GradedModule<F>,
) -> Morphism<F> {
    let mut acc = Morphism::zero(source, target);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitness<F: Scalar> {
    /// A retraction `g` with `g ∘ h = id`, if `h` is split mono.
    pub retraction: Option<Morphism<F>>,
    /// A section `g` with `h ∘ g = id`, if `h` is split epi.
    pub section: Option<Morphism<F>>,
}

impl<F: Scalar> Splitness<F> {
    pub fn is_split_mono(&self) -> bool {
        self.retraction.is_some()
    }

    pub fn is_split_epi(&self) -> bool {
        self.section.is_some()
    }
}

pub fn splitness<F: Scalar>(h: &Morphism<F>) -> Splitness<F> {
    let (m, n) = (h.source(), h.target());
    let retraction = if h.is_injective() {
        let basis = hom_basis(n, m);
        let terms: Vec<Morphism<F>> = basis.iter().map(|g| g.after(h)).collect();
        solve_combination(&terms, &Morphism::identity(m)).map(|c| combine(&basis, &c, n, m))
    } else {
        None
    };
    let section = if h.is_surjective() {
        let basis = hom_basis(n, m);
        let terms: Vec<Morphism<F>> = basis.iter().map(|g| h.after(g)).collect();
        solve_combination(&terms, &Morphism::identity(n)).map(|c| combine(&basis, &c, n, m))
    } else {
        None
    };
    Splitness {
        retraction,
        section,
    }
}

/// An isomorphism `M → N`, if one exists. Tries basis elements first, then
/// seeded random combinations; for indecomposable modules a basis element
/// always suffices because the non-isomorphisms form a subspace.
pub fn find_isomorphism<F: Scalar>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
) -> Option<Morphism<F>> {
    if m.dimension_vector() != n.dimension_vector() {
        return None;
    }
    if m.is_zero() {
        return Some(Morphism::zero(m, n));
    }
    let basis = hom_basis(m, n);
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Some(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..32 {
        let coeffs: Vec<F> = basis
            .iter()
            .map(|_| F::from_i64(rng.gen_range(-50..=50)))
            .collect();
        let f = combine(&basis, &coeffs, m, n);
        if f.is_iso() {
            return Some(f);
        }
    }
    None
}

pub fn is_isomorphic<F: Scalar>(m: &GradedModule<F>, n: &GradedModule<F>) -> bool {
    find_isomorphism(m, n).is_some()
}
