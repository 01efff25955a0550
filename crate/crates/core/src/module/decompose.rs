use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::hom::{combine, hom_basis};
use super::{GradedModule, Morphism};
use crate::field::Scalar;
use crate::matrix::{span_basis, span_contains, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("module of dimension {dim} not decomposed after {budget} idempotent trials")]
    NotDecomposed { dim: usize, budget: usize },
}

/// Fallback budget for the random endomorphism search.
pub const FALLBACK_BUDGET: usize = 1000;

/// An indecomposable direct summand with `projection ∘ inclusion = id`.
#[derive(Clone, Debug)]
pub struct Summand<F: Scalar> {
    pub module: GradedModule<F>,
    pub inclusion: Morphism<F>,
    pub projection: Morphism<F>,
    /// Index into the candidate list when the summand was matched there.
    pub candidate: Option<usize>,
}

/// The single eigenvalue `λ` of `b` with `b - λ` nilpotent, if there is one.
pub fn unique_eigenvalue<F: Scalar>(b: &Matrix<F>) -> Option<F> {
    let n = b.rows();
    if n == 0 {
        return None;
    }
    let nilpotent_shift = |l: &F| {
        let shifted = b - &Matrix::identity(n).scale(l);
        shifted.pow(n).is_zero()
    };
    let p = F::CHARACTERISTIC;
    if p == 0 || n as u64 % p != 0 {
        let l = b.trace() / F::from_i64(n as i64);
        return nilpotent_shift(&l).then_some(l);
    }
    (0..p as i64).map(F::from_i64).find(|l| nilpotent_shift(l))
}

fn total<F: Scalar>(h: &Morphism<F>) -> Matrix<F> {
    let mut acc = Matrix::zeros(0, 0);
    for x in h.vertices() {
        acc = acc.block_diag(&h.block(x));
    }
    acc
}

/// The residue `λ` of an endomorphism with `b - λ id` nilpotent, if any.
pub fn residue<F: Scalar>(b: &Morphism<F>) -> Option<F> {
    unique_eigenvalue(&total(b))
}

/// For a basis of `End(M)`, the residues `λ_i` with `b_i - λ_i id` nilpotent,
/// provided `End(M)` is local with residue field the ground field (i.e. `M`
/// is indecomposable with split residue field). `None` otherwise.
pub fn local_residues<F: Scalar>(m: &GradedModule<F>, basis: &[Morphism<F>]) -> Option<Vec<F>> {
    let residues: Vec<F> = basis
        .iter()
        .map(|b| unique_eigenvalue(&total(b)))
        .collect::<Option<_>>()?;
    // the shifted elements span a codimension-one subspace N; End(M) is
    // local with residue field k iff N is a nilpotent two-sided ideal
    let id = Morphism::identity(m);
    let len = Morphism::flat_len(m, m);
    let shifted: Vec<Vec<F>> = basis
        .iter()
        .zip(&residues)
        .map(|(b, l)| b.sub(&id.scale(l)).flatten())
        .collect();
    let n_basis = span_basis(len, &shifted);
    let ideal: Vec<Morphism<F>> = n_basis.iter().map(|v| Morphism::from_flat(m, m, v)).collect();
    for r in &ideal {
        for b in basis {
            let products = [b.after(r).flatten(), r.after(b).flatten()];
            if !span_contains(len, &n_basis, &products) {
                return None;
            }
        }
    }
    let mut power = ideal.clone();
    for _ in 0..=m.total_dim() {
        if power.is_empty() {
            return Some(residues);
        }
        let products: Vec<Vec<F>> = ideal
            .iter()
            .flat_map(|a| power.iter().map(move |p| a.after(p).flatten()))
            .collect();
        let next = span_basis(len, &products);
        if next.len() == power.len() {
            return None;
        }
        power = next.iter().map(|v| Morphism::from_flat(m, m, v)).collect();
    }
    None
}

pub fn is_indecomposable<F: Scalar>(m: &GradedModule<F>) -> bool {
    !m.is_zero() && local_residues(m, &hom_basis(m, m)).is_some()
}

fn pointwise_le<F: Scalar>(x: &GradedModule<F>, c: &GradedModule<F>) -> bool {
    x.dimension_vector().iter().all(|&(v, d)| d <= c.dim(v))
}

/// Piece of `M` still to be decomposed, as a summand of `M`.
struct Piece<F: Scalar> {
    module: GradedModule<F>,
    incl: Morphism<F>,
    proj: Morphism<F>,
}

/// Split `C = im f ⊕ ker g` where `g ∘ f = id`.
fn split_off<F: Scalar>(
    piece: &Piece<F>,
    f: &Morphism<F>,
    g: &Morphism<F>,
) -> (Summand<F>, Piece<F>) {
    let c = &piece.module;
    let summand = Summand {
        module: f.source().clone(),
        inclusion: piece.incl.after(f),
        projection: g.after(&piece.proj),
        candidate: None,
    };
    let k = g.kernel();
    let complement_proj = Morphism::identity(c).sub(&f.after(g));
    let pk = Morphism::from_fn(c, &k.module, |x| {
        k.map
            .block(x)
            .solve_matrix(&complement_proj.block(x))
            .expect("complement lies in the kernel")
    });
    let rest = Piece {
        module: k.module.clone(),
        incl: piece.incl.after(&k.map),
        proj: pk.after(&piece.proj),
    };
    (summand, rest)
}

/// Try to split off `x` from `c`: returns `f : X → C`, `g : C → X` with
/// `g ∘ f = id`.
fn match_candidate<F: Scalar>(
    x: &GradedModule<F>,
    c: &GradedModule<F>,
) -> Option<(Morphism<F>, Morphism<F>)> {
    let fs = hom_basis(x, c);
    if fs.is_empty() {
        return None;
    }
    let gs = hom_basis(c, x);
    for f in &fs {
        for g in &gs {
            let e = g.after(f);
            if e.is_iso() {
                let g2 = e.inverse().unwrap().after(g);
                return Some((f.clone(), g2));
            }
        }
    }
    None
}

/// Fitting decomposition along a random endomorphism.
fn fitting_split<F: Scalar>(
    c: &GradedModule<F>,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Option<(Morphism<F>, Morphism<F>, Morphism<F>, Morphism<F>)> {
    let basis = hom_basis(c, c);
    let n = c.total_dim();
    let id = Morphism::identity(c);
    for trial in 0..budget {
        let coeffs: Vec<F> = basis
            .iter()
            .map(|_| F::from_i64(rng.gen_range(-3..=3)))
            .collect();
        let phi = combine(&basis, &coeffs, c, c);
        let shift = F::from_i64((trial % 7) as i64 - 3);
        let mut psi = phi.sub(&id.scale(&shift));
        let base = psi.clone();
        for _ in 1..n {
            psi = psi.after(&base);
        }
        if psi.is_zero() || psi.is_iso() {
            continue;
        }
        // C = ker ψ^n ⊕ im ψ^n
        let ker = psi.kernel();
        let img = psi.image();
        let kbasis = ker.map.clone();
        let ibasis = img.map.clone();
        // projections via the combined basis change
        let proj_both = Morphism::from_fn(c, c, |x| {
            let kb = kbasis.block(x);
            let ib = ibasis.block(x);
            kb.hstack(&ib).inverse().expect("Fitting decomposition is direct")
        });
        let pk = Morphism::from_fn(c, &ker.module, |x| {
            let d = ker.module.dim(x);
            proj_both.block(x).submatrix(0, d, 0, c.dim(x))
        });
        let pi = Morphism::from_fn(c, &img.module, |x| {
            let d = ker.module.dim(x);
            let e = img.module.dim(x);
            proj_both.block(x).submatrix(d, e, 0, c.dim(x))
        });
        if pk.is_valid() && pi.is_valid() {
            return Some((kbasis, pk, ibasis, pi));
        }
    }
    None
}

/// Decompose `M` into indecomposables, matching summands against
/// `candidates` first and falling back to a seeded Fitting search.
pub fn decompose_with<F: Scalar>(
    m: &GradedModule<F>,
    candidates: &[GradedModule<F>],
) -> Result<Vec<Summand<F>>, DecomposeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec0);
    let mut out = Vec::new();
    let mut work = vec![Piece {
        module: m.clone(),
        incl: Morphism::identity(m),
        proj: Morphism::identity(m),
    }];
    while let Some(mut piece) = work.pop() {
        'peel: while !piece.module.is_zero() {
            for (i, x) in candidates.iter().enumerate() {
                if x.is_zero() || !pointwise_le(x, &piece.module) {
                    continue;
                }
                if let Some((f, g)) = match_candidate(x, &piece.module) {
                    let (mut s, rest) = split_off(&piece, &f, &g);
                    s.candidate = Some(i);
                    out.push(s);
                    piece = rest;
                    continue 'peel;
                }
            }
            if is_indecomposable(&piece.module) {
                out.push(Summand {
                    module: piece.module.clone(),
                    inclusion: piece.incl.clone(),
                    projection: piece.proj.clone(),
                    candidate: None,
                });
                break;
            }
            match fitting_split(&piece.module, &mut rng, FALLBACK_BUDGET) {
                Some((ki, kp, ii, ip)) => {
                    work.push(Piece {
                        module: ki.source().clone(),
                        incl: piece.incl.after(&ki),
                        proj: kp.after(&piece.proj),
                    });
                    work.push(Piece {
                        module: ii.source().clone(),
                        incl: piece.incl.after(&ii),
                        proj: ip.after(&piece.proj),
                    });
                    break;
                }
                None => {
                    return Err(DecomposeError::NotDecomposed {
                        dim: piece.module.total_dim(),
                        budget: FALLBACK_BUDGET,
                    })
                }
            }
        }
    }
    Ok(out)
}
