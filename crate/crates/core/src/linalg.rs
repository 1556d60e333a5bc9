//! Sparse exact linear algebra over a [`Field`].

use std::collections::BTreeMap;

use crate::scalars::Field;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, F::one())],
        }
    }

    pub fn single(i: usize, a: F) -> Self {
        if a.is_zero() {
            Self::new()
        } else {
            SparseVec { entries: vec![(i, a)] }
        }
    }

    /// From arbitrary `(index, value)` pairs; duplicates are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, a) in pairs {
            accumulate(&mut acc, i, &a);
        }
        Self::from_map(acc)
    }

    pub fn from_map(m: BTreeMap<usize, F>) -> Self {
        SparseVec {
            entries: m.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[F]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| (i, a.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (i, a) in &self.entries {
            v[*i] = a.clone();
        }
        v
    }

    pub fn to_map(&self) -> BTreeMap<usize, F> {
        self.entries.iter().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(i, a)| (*i, a))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Option<&F> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, a)| (*i, a))
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, x.clone() * a))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, -x.clone())).collect(),
        }
    }

    /// `self + a * o`.
    pub fn axpy(&self, a: &F, o: &Self) -> Self {
        if a.is_zero() || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + o.entries.len());
        let (mut x, mut y) = (self.entries.iter().peekable(), o.entries.iter().peekable());
        loop {
            match (x.peek(), y.peek()) {
                (Some((i, u)), Some((j, v))) => {
                    if i < j {
                        out.push((*i, u.clone()));
                        x.next();
                    } else if j < i {
                        out.push((*j, v.clone() * a));
                        y.next();
                    } else {
                        let w = u.clone() + &(v.clone() * a);
                        if !w.is_zero() {
                            out.push((*i, w));
                        }
                        x.next();
                        y.next();
                    }
                }
                (Some((i, u)), None) => {
                    out.push((*i, u.clone()));
                    x.next();
                }
                (None, Some((j, v))) => {
                    out.push((*j, v.clone() * a));
                    y.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&F::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&-F::one(), o)
    }

    pub fn dot(&self, o: &Self) -> F {
        let mut acc = F::zero();
        let (mut x, mut y) = (self.entries.iter().peekable(), o.entries.iter().peekable());
        while let (Some((i, u)), Some((j, v))) = (x.peek(), y.peek()) {
            if i < j {
                x.next();
            } else if j < i {
                y.next();
            } else {
                acc += &(u.clone() * v);
                x.next();
                y.next();
            }
        }
        acc
    }

    /// Relabel indices through a strictly increasing map.
    pub fn map_indices_monotone(&self, f: impl Fn(usize) -> usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, a)| (f(*i), a.clone())).collect(),
        }
    }

    /// Relabel indices through an arbitrary injective map.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut entries: Vec<(usize, F)> =
            self.entries.iter().map(|(i, a)| (f(*i), a.clone())).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVec { entries }
    }

    pub fn into_entries(self) -> Vec<(usize, F)> {
        self.entries
    }
}

/// `acc[i] += a`, dropping entries that cancel.
pub fn accumulate<F: Field>(acc: &mut BTreeMap<usize, F>, i: usize, a: &F) {
    if a.is_zero() {
        return;
    }
    match acc.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(a.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += a;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `acc[k] += a` for an arbitrary ordered key, dropping zeros.
pub fn accumulate_key<K: Ord, F: Field>(acc: &mut BTreeMap<K, F>, k: K, a: &F) {
    if a.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += a;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(a.clone());
        }
    }
}

/// Column-major sparse matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let n = d.len();
        SparseMatrix {
            rows: n,
            cols: d.into_iter().enumerate().map(|(i, a)| SparseVec::single(i, a)).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec<F>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.indices().all(|i| i < rows)));
        SparseMatrix { rows, cols }
    }

    pub fn from_triplets(rows: usize, ncols: usize, t: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); ncols];
        for (r, c, a) in t {
            accumulate(&mut acc[c], r, &a);
        }
        SparseMatrix {
            rows,
            cols: acc.into_iter().map(SparseVec::from_map).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        Self::from_triplets(
            nr,
            nc,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, a)| (i, j, a.clone()))),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut d = vec![vec![F::zero(); self.cols.len()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, a) in c.iter() {
                d[i][j] = a.clone();
            }
        }
        d
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec<F> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.cols
    }

    pub fn set_col(&mut self, j: usize, v: SparseVec<F>) {
        self.cols[j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.cols[j].get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    /// Triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, a)| (i, j, a)))
    }

    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (j, a) in v.iter() {
            for (i, b) in self.cols[j].iter() {
                accumulate(&mut acc, i, &(b.clone() * a));
            }
        }
        SparseVec::from_map(acc)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.ncols(), o.nrows(), "matrix shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: o.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&F::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&-F::one(), o)
    }

    /// `self + a * o`.
    pub fn axpy(&self, a: &F, o: &Self) -> Self {
        assert_eq!((self.rows, self.ncols()), (o.rows, o.ncols()), "matrix shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&o.cols).map(|(x, y)| x.axpy(a, y)).collect(),
        }
    }

    pub fn scale(&self, a: &F) -> Self {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.scale(a)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, a) in c.iter() {
                t[i].push((j, a.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols.len(),
            cols: t.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    /// Kronecker product, index `(a, b) -> a * dim(o) + b`.
    pub fn kron(&self, o: &Self) -> Self {
        let (r2, c2) = (o.rows, o.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * c2);
        for ca in &self.cols {
            for cb in &o.cols {
                let mut e = Vec::with_capacity(ca.nnz() * cb.nnz());
                for (i, a) in ca.iter() {
                    for (k, b) in cb.iter() {
                        e.push((i * r2 + k, a.clone() * b));
                    }
                }
                cols.push(SparseVec { entries: e });
            }
        }
        SparseMatrix {
            rows: self.rows * r2,
            cols,
        }
    }

    /// Rows `rs` and columns `cs` (in the given order).
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        let mut pos = BTreeMap::new();
        for (k, &r) in rs.iter().enumerate() {
            pos.insert(r, k);
        }
        SparseMatrix {
            rows: rs.len(),
            cols: cs
                .iter()
                .map(|&j| {
                    SparseVec::from_pairs(
                        self.cols[j]
                            .iter()
                            .filter_map(|(i, a)| pos.get(&i).map(|&k| (k, a.clone()))),
                    )
                })
                .collect(),
        }
    }
}

/// Incremental linearly independent set with combination tracking.
///
/// Inserting a vector either adds it (returning its id) or expresses it as a
/// combination of previously added vectors.
#[derive(Clone, Debug)]
pub struct IndependentSet<F> {
    rows: Vec<SparseVec<F>>,
    combos: Vec<SparseVec<F>>,
    pivot_row: BTreeMap<usize, usize>,
    track: bool,
}

/// Result of [`IndependentSet::insert`].
#[derive(Clone, Debug)]
pub enum Insertion<F> {
    /// Independent; the vector received this id.
    Added(usize),
    /// Dependent: `v = sum c_id * member_id`.
    Dependent(SparseVec<F>),
}

impl<F: Field> Default for IndependentSet<F> {
    fn default() -> Self {
        Self::new(true)
    }
}

impl<F: Field> IndependentSet<F> {
    pub fn new(track: bool) -> Self {
        IndependentSet {
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_row: BTreeMap::new(),
            track,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduce `v` against the current rows. Returns the residual and, when
    /// tracking, the combination of members that was subtracted.
    pub fn reduce(&self, v: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut work: BTreeMap<usize, F> = v.to_map();
        let mut combo: BTreeMap<usize, F> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let Some((&i, a)) = work.range(cursor..).next() else {
                break;
            };
            cursor = i + 1;
            let Some(&r) = self.pivot_row.get(&i) else {
                continue;
            };
            let a = a.clone();
            for (k, b) in self.rows[r].iter() {
                accumulate(&mut work, k, &-(b.clone() * &a));
            }
            if self.track {
                for (k, b) in self.combos[r].iter() {
                    accumulate(&mut combo, k, &(b.clone() * &a));
                }
            }
        }
        (SparseVec::from_map(work), SparseVec::from_map(combo))
    }

    pub fn insert(&mut self, v: &SparseVec<F>) -> Insertion<F> {
        let (res, combo) = self.reduce(v);
        let Some((p, lead)) = res.leading() else {
            return Insertion::Dependent(combo);
        };
        let id = self.rows.len();
        let inv = lead.inv();
        self.pivot_row.insert(p, id);
        self.rows.push(res.scale(&inv));
        if self.track {
            // res = v - combo, so row = (e_id - combo) / lead.
            let c = SparseVec::unit(id).sub(&combo);
            self.combos.push(c.scale(&inv));
        }
        Insertion::Added(id)
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Combination of members equal to `v`, if `v` is in the span.
    pub fn express(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        let (r, c) = self.reduce(v);
        r.is_zero().then_some(c)
    }
}

pub fn rank<F: Field>(vs: &[SparseVec<F>]) -> usize {
    let mut s = IndependentSet::new(false);
    for v in vs {
        s.insert(v);
    }
    s.len()
}

/// Basis of `{x : sum_j x_j v_j = 0}`.
pub fn kernel<F: Field>(vs: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut s = IndependentSet::new(true);
    let mut ids = Vec::new();
    let mut out = Vec::new();
    for (j, v) in vs.iter().enumerate() {
        match s.insert(v) {
            Insertion::Added(_) => ids.push(j),
            Insertion::Dependent(c) => {
                let c = c.map_indices_monotone(|id| ids[id]);
                out.push(SparseVec::unit(j).sub(&c));
            }
        }
    }
    out
}

/// Kernel of a matrix acting on column vectors.
pub fn matrix_kernel<F: Field>(m: &SparseMatrix<F>) -> Vec<SparseVec<F>> {
    kernel(m.columns())
}

/// Reduced basis of the span, canonical for the subspace.
pub fn span_basis<F: Field>(vs: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut s = IndependentSet::new(false);
    for v in vs {
        s.insert(v);
    }
    rref_rows(s)
}

fn rref_rows<F: Field>(s: IndependentSet<F>) -> Vec<SparseVec<F>> {
    // Back-substitute so that every pivot column is a unit column.
    let mut order: Vec<(usize, usize)> = s.pivot_row.iter().map(|(&p, &r)| (p, r)).collect();
    order.sort();
    let mut rows: Vec<SparseVec<F>> = order.iter().map(|&(_, r)| s.rows[r].clone()).collect();
    let pivots: Vec<usize> = order.iter().map(|&(p, _)| p).collect();
    for k in (0..rows.len()).rev() {
        let (before, after) = rows.split_at_mut(k);
        let pk = pivots[k];
        let rk = &after[0];
        for r in before.iter_mut() {
            if let Some(a) = r.get(pk).cloned() {
                *r = r.axpy(&-a, rk);
            }
        }
    }
    rows
}

/// Whether two families span the same subspace.
pub fn same_span<F: Field>(a: &[SparseVec<F>], b: &[SparseVec<F>]) -> bool {
    let mut s = IndependentSet::new(false);
    for v in a {
        s.insert(v);
    }
    let ra = s.len();
    let mut t = IndependentSet::new(false);
    for v in b {
        t.insert(v);
    }
    if t.len() != ra {
        return false;
    }
    b.iter().all(|v| s.contains(v))
}

/// Inverse of a dense square matrix, `None` if singular.
pub fn invert_dense<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut inv: Vec<Vec<F>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c].inv();
        for j in 0..n {
            a[c][j] *= &d;
            inv[c][j] *= &d;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                if !a[c][j].is_zero() {
                    let t = a[c][j].clone() * &f;
                    a[r][j] -= &t;
                }
                if !inv[c][j].is_zero() {
                    let t = inv[c][j].clone() * &f;
                    inv[r][j] -= &t;
                }
            }
        }
    }
    Some(inv)
}

/// Inverse of a square sparse matrix, `None` if singular.
pub fn invert<F: Field>(m: &SparseMatrix<F>) -> Option<SparseMatrix<F>> {
    assert_eq!(m.nrows(), m.ncols());
    invert_dense(&m.to_dense()).map(|d| SparseMatrix::from_dense(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    fn v(x: &[i64]) -> SparseVec<Rational> {
        SparseVec::from_dense(&x.iter().map(|&a| r(a)).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 2]), v(&[2, 0, 2])];
        let k = kernel(&cols);
        assert_eq!(k.len(), 2);
        for x in &k {
            let mut acc = SparseVec::new();
            for (j, a) in x.iter() {
                acc = acc.axpy(a, &cols[j]);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = SparseMatrix::from_dense(&[vec![r(2), r(1)], vec![r(1), r(1)]]);
        let i = invert(&m).unwrap();
        assert_eq!(m.mul(&i), SparseMatrix::identity(2));
        assert!(invert(&SparseMatrix::from_dense(&[vec![r(1), r(2)], vec![r(2), r(4)]])).is_none());
    }

    #[test]
    fn span_comparison() {
        let a = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let b = vec![v(&[1, 2, 1]), v(&[1, 0, -1])];
        assert!(same_span(&a, &b));
        assert!(!same_span(&a, &[v(&[1, 0, 0]), v(&[0, 1, 1])]));
        assert_eq!(span_basis(&a), span_basis(&b));
    }
}
