//! Generic solver for intertwining linear systems.

use std::collections::BTreeMap;

use crate::linalg::{kernel, SparseMatrix, SparseVec};
use crate::scalars::Field;

/// Basis of `{X : X a_g = b_g X for all g}` among `rows x cols` matrices
/// supported on the positions where `allowed(r, c)` holds.
///
/// `a_g` act on the source (`cols x cols`), `b_g` on the target
/// (`rows x rows`).
pub fn solve_intertwiners<F: Field>(
    rows: usize,
    cols: usize,
    pairs: &[(SparseMatrix<F>, SparseMatrix<F>)],
    allowed: impl Fn(usize, usize) -> bool,
) -> Vec<SparseMatrix<F>> {
    let unknowns: Vec<(usize, usize)> = (0..cols)
        .flat_map(|c| (0..rows).map(move |r| (r, c)))
        .filter(|&(r, c)| allowed(r, c))
        .collect();
    let mut eq_ids: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut columns: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); unknowns.len()];
    for (g, (a, b)) in pairs.iter().enumerate() {
        let at = a.transpose();
        for (u, &(r, k)) in unknowns.iter().enumerate() {
            // X[r][k] a[k][c] enters equation (g, r, c).
            for (c, x) in at.col(k).iter() {
                let n = eq_ids.len();
                let id = *eq_ids.entry((g, r, c)).or_insert(n);
                crate::linalg::accumulate(&mut columns[u], id, x);
            }
            // -b[r'][r] X[r][k] enters equation (g, r', k).
            for (r2, x) in b.col(r).iter() {
                let n = eq_ids.len();
                let id = *eq_ids.entry((g, r2, k)).or_insert(n);
                crate::linalg::accumulate(&mut columns[u], id, &-x.clone());
            }
        }
    }
    let cols_v: Vec<SparseVec<F>> = columns.into_iter().map(SparseVec::from_map).collect();
    kernel(&cols_v)
        .into_iter()
        .map(|k| {
            SparseMatrix::from_triplets(
                rows,
                cols,
                k.iter().map(|(u, x)| (unknowns[u].0, unknowns[u].1, x.clone())),
            )
        })
        .collect()
}

/// Scale so that the first nonzero entry in column order is 1.
pub(crate) fn normalize_first_entry<F: Field>(m: &SparseMatrix<F>) -> SparseMatrix<F> {
    match m.triplets().next() {
        Some((_, _, a)) => m.scale(&a.inv()),
        None => m.clone(),
    }
}
