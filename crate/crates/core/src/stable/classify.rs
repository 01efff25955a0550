use std::fmt;
use std::sync::Arc;

use super::{StableError, StableMorphism};
use crate::field::Scalar;
use crate::module::{
    decompose_with, find_isomorphism, hom_basis, projective, residue, solve_combination, splitness,
    GradedModule, Morphism,
};
use crate::repetitive::{RVertex, Repetitive};
use crate::strings::{enumerate_strings, string_module};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrredClass {
    Smonic,
    Sepic,
    Sirreducible(i64),
    NotIrreducible(String),
}

impl fmt::Display for IrredClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrredClass::Smonic => f.write_str("smonic"),
            IrredClass::Sepic => f.write_str("sepic"),
            IrredClass::Sirreducible(i) => write!(f, "sirr({i})"),
            IrredClass::NotIrreducible(r) => write!(f, "not-irreducible({r})"),
        }
    }
}

/// Indecomposable test modules for the finite radical-square search.
#[derive(Clone, Debug)]
pub struct Universe<F: Scalar> {
    pub modules: Vec<(String, GradedModule<F>)>,
    /// Largest intermediate dimension used; `None` means twice the larger
    /// end's dimension.
    pub dim_bound: Option<usize>,
}

impl<F: Scalar> Universe<F> {
    /// String modules of length at most `max_len` and the indecomposable
    /// projectives, all supported in degrees `[lo, hi]`.
    pub fn strings(rep: &Arc<Repetitive>, lo: i64, hi: i64, max_len: usize, dim_bound: Option<usize>) -> Self {
        let mut modules: Vec<(String, GradedModule<F>)> = enumerate_strings(rep, lo, hi, max_len)
            .into_iter()
            .map(|w| (w.display(rep), string_module(rep, &w)))
            .collect();
        for z in lo..hi {
            for v in 0..rep.vertex_count() {
                let x = RVertex { z, v };
                modules.push((format!("P({})", rep.vertex_name(x)), projective(rep, x).module));
            }
        }
        Universe { modules, dim_bound }
    }

    /// Modules within the dimension bound whose support meets both `m` and
    /// `n`; others admit no nonzero composite `m → u → n`.
    fn relevant<'a>(
        &'a self,
        m: &'a GradedModule<F>,
        n: &'a GradedModule<F>,
    ) -> impl Iterator<Item = &'a (String, GradedModule<F>)> + 'a {
        let bound = self
            .dim_bound
            .unwrap_or(2 * m.total_dim().max(n.total_dim()));
        let meets = |a: &GradedModule<F>, b: &GradedModule<F>| {
            a.dimension_vector()
                .iter()
                .any(|&(x, _)| b.dim(x) > 0)
        };
        self.modules
            .iter()
            .filter(move |(_, u)| u.total_dim() <= bound && meets(u, m) && meets(u, n))
    }

    pub fn bound_for(&self, m: &GradedModule<F>, n: &GradedModule<F>) -> usize {
        self.dim_bound.unwrap_or(2 * m.total_dim().max(n.total_dim()))
    }
}

fn same_dims<F: Scalar>(a: &GradedModule<F>, b: &GradedModule<F>) -> bool {
    a.dimension_vector() == b.dimension_vector()
}

/// A basis of `rad(X, U)` for indecomposable `X` and `U`: all of `Hom` unless
/// `X ≅ U`, in which case the kernel of the residue functional.
pub fn rad_basis<F: Scalar>(x: &GradedModule<F>, u: &GradedModule<F>) -> Vec<Morphism<F>> {
    let basis = hom_basis(x, u);
    if basis.is_empty() || !same_dims(x, u) {
        return basis;
    }
    let Some(psi) = find_isomorphism(u, x) else {
        return basis;
    };
    let res: Vec<F> = basis
        .iter()
        .map(|b| residue(&psi.after(b)).expect("local endomorphism ring"))
        .collect();
    let Some(j0) = res.iter().position(|r| !r.is_zero()) else {
        return basis;
    };
    let pivot = res[j0].clone();
    basis
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != j0)
        .map(|(j, b)| b.sub(&basis[j0].scale(&(res[j].clone() / pivot.clone()))))
        .collect()
}

/// For indecomposable `M`, `N`: labels of intermediates through which `h`
/// lies in `rad²(M, N)`, if it does.
fn rad2_witness<F: Scalar>(h: &Morphism<F>, universe: &Universe<F>) -> Option<Vec<String>> {
    let (m, n) = (h.source(), h.target());
    let mut terms = Vec::new();
    let mut owners = Vec::new();
    for (label, u) in universe.relevant(m, n) {
        let fs = rad_basis(m, u);
        if fs.is_empty() {
            continue;
        }
        let gs = rad_basis(u, n);
        for g in &gs {
            for f in &fs {
                let t = g.after(f);
                if !t.is_zero() {
                    terms.push(t);
                    owners.push(label.clone());
                }
            }
        }
    }
    let c = solve_combination(&terms, h)?;
    let mut labels: Vec<String> = owners
        .into_iter()
        .zip(c)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, _)| l)
        .collect();
    labels.dedup();
    Some(labels)
}

/// Radical-square search, component-wise when one end decomposes.
fn rad2_check<F: Scalar>(h: &Morphism<F>, universe: &Universe<F>) -> Result<Option<String>, StableError> {
    let (m, n) = (h.source(), h.target());
    let n_parts = decompose_with(n, &[]).map_err(|_| StableError::NotDecomposed)?;
    let m_parts = decompose_with(m, &[]).map_err(|_| StableError::NotDecomposed)?;
    for (i, mp) in m_parts.iter().enumerate() {
        for (j, np) in n_parts.iter().enumerate() {
            let part = np.projection.after(h).after(&mp.inclusion);
            if part.is_zero() {
                continue;
            }
            if let Some(labels) = rad2_witness(&part, universe) {
                return Ok(Some(format!(
                    "component {i}->{j} lies in rad^2 through [{}] (universe dim <= {})",
                    labels.join(", "),
                    universe.bound_for(m, n)
                )));
            }
        }
    }
    Ok(None)
}

/// Degree profile of `h`: Smonic, Sepic or Sirreducible at the unique degree
/// whose component is neither split mono nor split epi.
fn profile<F: Scalar>(h: &Morphism<F>) -> Result<IrredClass, StableError> {
    let mut all_mono = true;
    let mut all_epi = true;
    let mut neither = Vec::new();
    let mut desc = Vec::new();
    for i in h.degrees() {
        let s = splitness(&h.component(i));
        let (mono, epi) = (s.is_split_mono(), s.is_split_epi());
        all_mono &= mono;
        all_epi &= epi;
        if !mono && !epi {
            neither.push(i);
        }
        desc.push(format!("{i}:{}{}", if mono { "m" } else { "-" }, if epi { "e" } else { "-" }));
    }
    if neither.is_empty() && all_mono {
        return Ok(IrredClass::Smonic);
    }
    if neither.is_empty() && all_epi {
        return Ok(IrredClass::Sepic);
    }
    if let [i0] = neither[..] {
        return Ok(IrredClass::Sirreducible(i0));
    }
    Err(StableError::Trichotomy(desc.join(" ")))
}

/// Classifies a candidate irreducible morphism. With a universe, first
/// certifies it is not in the radical square relative to that universe.
pub fn classify_irreducible<F: Scalar>(
    h: &Morphism<F>,
    universe: Option<&Universe<F>>,
) -> Result<IrredClass, StableError> {
    let s = splitness(h);
    if s.is_split_mono() {
        return Ok(IrredClass::NotIrreducible("split mono".into()));
    }
    if s.is_split_epi() {
        return Ok(IrredClass::NotIrreducible("split epi".into()));
    }
    if let Some(u) = universe {
        if let Some(reason) = rad2_check(h, u)? {
            return Ok(IrredClass::NotIrreducible(reason));
        }
    }
    profile(h)
}

/// Classifies the stable class of `h`; a second representative, if given,
/// must classify identically.
pub fn classify_stable<F: Scalar>(
    h: &StableMorphism<F>,
    other: Option<&Morphism<F>>,
    universe: Option<&Universe<F>>,
) -> Result<IrredClass, StableError> {
    let c = classify_irreducible(&h.representative, universe)?;
    if let Some(o) = other {
        let c2 = classify_irreducible(o, universe)?;
        if c != c2 {
            return Err(StableError::Representative(c.to_string(), c2.to_string()));
        }
    }
    Ok(c)
}
