//! Sparse elimination for the large, very sparse constraint systems that
//! describe Hom-spaces.

use std::collections::BTreeMap;

use crate::field::Scalar;

pub type SparseRow<F> = BTreeMap<usize, F>;

/// Incremental row reduction: rows are reduced against the existing pivots
/// as they arrive.
pub struct SparseEchelon<F: Scalar> {
    ncols: usize,
    // pivot column -> row with leading coefficient 1 at that column
    pivots: BTreeMap<usize, SparseRow<F>>,
}

impl<F: Scalar> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` by the pivots; returns the remainder.
    fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        let mut from = 0;
        loop {
            let next = row
                .range(from..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, v)) = next else { break };
            for (k, pv) in &self.pivots[&c] {
                let e = row.entry(*k).or_insert_with(F::zero);
                *e = e.clone() - v.clone() * pv.clone();
                if e.is_zero() {
                    row.remove(k);
                }
            }
            from = c + 1;
        }
        row
    }

    /// Add a row; returns whether it increased the rank.
    pub fn push(&mut self, row: SparseRow<F>) -> bool {
        let row: SparseRow<F> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else {
            return false;
        };
        let inv = lv.inv();
        let row: SparseRow<F> = row
            .into_iter()
            .map(|(k, v)| (k, v * inv.clone()))
            .collect();
        assert!(lead < self.ncols);
        self.pivots.insert(lead, row);
        true
    }

    /// A basis of the solutions of `row · x = 0` for all pushed rows.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        // back-substitute so each pivot row mentions no other pivot column
        let mut reduced: BTreeMap<usize, SparseRow<F>> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let others: Vec<(usize, F)> = r
                .range(p + 1..)
                .filter(|(c, _)| reduced.contains_key(c))
                .map(|(c, v)| (*c, v.clone()))
                .collect();
            for (c, v) in others {
                for (k, pv) in &reduced[&c] {
                    let e = r.entry(*k).or_insert_with(F::zero);
                    *e = e.clone() - v.clone() * pv.clone();
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
            }
            reduced.insert(p, r);
        }
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.ncols];
                x[f] = F::one();
                for (&p, row) in &reduced {
                    if let Some(v) = row.get(&f) {
                        x[p] = -v.clone();
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::matrix::Matrix;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_dense_nullspace(entries in proptest::collection::vec(-2i64..3, 24)) {
            let m = Matrix::<Rational>::from_i64(4, 6, &entries);
            let mut s = SparseEchelon::new(6);
            for r in 0..4 {
                let row: SparseRow<Rational> = (0..6).map(|c| (c, m[(r, c)].clone())).collect();
                s.push(row);
            }
            prop_assert_eq!(s.rank(), m.rank());
            let ns = s.nullspace();
            prop_assert_eq!(ns.len(), 6 - m.rank());
            for x in &ns {
                prop_assert!(m.apply(x).iter().all(|v| v.is_zero()));
            }
        }
    }
}
