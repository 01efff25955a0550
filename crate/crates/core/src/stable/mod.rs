//! The stable category: morphisms modulo those factoring through
//! projective-injectives, cosyzygies and triangles from exact sequences.

mod axioms;
mod classify;

use thiserror::Error;

use crate::field::Scalar;
use crate::module::{
    check_ses, combine, hom_basis, injective_hull, projective_cover, solve_combination, GradedModule,
    ModuleError, Morphism,
};

pub use axioms::{
    ar_triangle_from_sequence, check_ar_axioms, verify_shape_table, ArReport, ArTriangle, ShapeFinding,
};
pub use classify::{classify_irreducible, classify_stable, rad_basis, IrredClass, Universe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StableError {
    #[error("trichotomy violated: degree profile {0}")]
    Trichotomy(String),
    #[error("morphisms have different sources or targets")]
    ShapeMismatch,
    #[error("sequence is not exact")]
    NotExact,
    #[error("middle term could not be decomposed")]
    NotDecomposed,
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("classification is representative-dependent: {0} vs {1}")]
    Representative(String, String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A factorization `h = v ∘ ι` through the injective hull of the source.
#[derive(Clone, Debug)]
pub struct FactorWitness<F: Scalar> {
    pub hull: GradedModule<F>,
    pub iota: Morphism<F>,
    pub v: Morphism<F>,
}

/// Every map factoring through a projective-injective factors through the
/// injective hull of its source.
pub fn factor_through_projinj<F: Scalar>(h: &Morphism<F>) -> Option<FactorWitness<F>> {
    let (m, n) = (h.source(), h.target());
    if m.is_zero() {
        let hull = GradedModule::zero(m.repetitive());
        return Some(FactorWitness {
            iota: Morphism::zero(m, &hull),
            v: Morphism::zero(&hull, n),
            hull,
        });
    }
    let (hull, iota, _) = injective_hull(m).ok()?;
    let basis = hom_basis(&hull, n);
    let terms: Vec<Morphism<F>> = basis.iter().map(|b| b.after(&iota)).collect();
    let c = solve_combination(&terms, h)?;
    let v = combine(&basis, &c, &hull, n);
    Some(FactorWitness { hull, iota, v })
}

pub fn stable_equal<F: Scalar>(h: &Morphism<F>, h2: &Morphism<F>) -> Result<bool, StableError> {
    if h.source() != h2.source() || h.target() != h2.target() {
        return Err(StableError::ShapeMismatch);
    }
    Ok(factor_through_projinj(&h.sub(h2)).is_some())
}

/// A module morphism viewed in the stable category.
#[derive(Clone, Debug)]
pub struct StableMorphism<F: Scalar> {
    pub representative: Morphism<F>,
    pub witness: Option<FactorWitness<F>>,
}

impl<F: Scalar> StableMorphism<F> {
    pub fn new(representative: Morphism<F>) -> Self {
        StableMorphism {
            representative,
            witness: None,
        }
    }

    pub fn is_zero(&mut self) -> bool {
        if self.witness.is_none() {
            self.witness = factor_through_projinj(&self.representative);
        }
        self.witness.is_some()
    }
}

/// `0 → M → I(M) → Ω⁻¹M → 0`.
#[derive(Clone, Debug)]
pub struct Cosyzygy<F: Scalar> {
    pub module: GradedModule<F>,
    pub hull: GradedModule<F>,
    pub iota: Morphism<F>,
    pub pi: Morphism<F>,
}

pub fn cosyzygy<F: Scalar>(m: &GradedModule<F>) -> Cosyzygy<F> {
    if m.is_zero() {
        let z = GradedModule::zero(m.repetitive());
        return Cosyzygy {
            iota: Morphism::zero(m, &z),
            pi: Morphism::zero(&z, &z),
            hull: z.clone(),
            module: z,
        };
    }
    let (hull, iota, _) = injective_hull(m).expect("nonzero module");
    let c = iota.cokernel();
    Cosyzygy {
        module: c.module,
        hull,
        iota,
        pi: c.map,
    }
}

/// `0 → ΩM → P(M) → M → 0`; returns `(ΩM, inclusion, cover)`.
pub fn syzygy<F: Scalar>(m: &GradedModule<F>) -> (GradedModule<F>, Morphism<F>, Morphism<F>) {
    let (_, cover, _) = projective_cover(m);
    let k = cover.kernel();
    (k.module, k.map, cover)
}

/// The triangle `M → M' → M'' → Ω⁻¹M` of an exact sequence, from the
/// pushout of the hull sequence of `M` along `h`.
#[derive(Clone, Debug)]
pub struct Triangle<F: Scalar> {
    pub h: Morphism<F>,
    pub h2: Morphism<F>,
    pub h3: Morphism<F>,
    pub cosyzygy: Cosyzygy<F>,
    /// `e : M' → I(M)` with `e ∘ h = ι`.
    pub e: Morphism<F>,
}

pub fn triangle_from_ses<F: Scalar>(h: &Morphism<F>, h2: &Morphism<F>) -> Result<Triangle<F>, StableError> {
    if !check_ses(h, h2).global_exact {
        return Err(StableError::NotExact);
    }
    let m = h.source();
    let (mid, end) = (h.target(), h2.target());
    let c = cosyzygy(m);
    let basis = hom_basis(mid, &c.hull);
    let terms: Vec<Morphism<F>> = basis.iter().map(|b| b.after(h)).collect();
    let coeffs = solve_combination(&terms, &c.iota).ok_or(StableError::NotExact)?;
    let e = combine(&basis, &coeffs, mid, &c.hull);
    let goal = c.pi.after(&e);
    let basis = hom_basis(end, &c.module);
    let terms: Vec<Morphism<F>> = basis.iter().map(|b| b.after(h2)).collect();
    let coeffs = solve_combination(&terms, &goal).ok_or(StableError::NotExact)?;
    let h3 = combine(&basis, &coeffs, end, &c.module);
    debug_assert!(e.after(h) == c.iota && h3.after(h2) == goal);
    Ok(Triangle {
        h: h.clone(),
        h2: h2.clone(),
        h3,
        cosyzygy: c,
        e,
    })
}
