//! Finite-dimensional type-1 modules of `U_q(g)` as explicit matrices.
//!
//! Conventions: `K_i v = q^{(alpha_i, wt v)} v`,
//! `[E_i, F_j] = delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1})`,
//! `Delta(E) = E ⊗ K + 1 ⊗ E`, `Delta(F) = F ⊗ 1 + K^{-1} ⊗ F`,
//! `S(E) = -E K^{-1}`, `S(F) = -K F`.

mod braid;
mod decompose;
mod intertwiner;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde_json::{json, Value};

pub use braid::{braid_operator, braid_operator_by_solver, lusztig_image, BraidOperator, RootVectorKind, RootVectors};
pub use decompose::{decompose, CgDecomposition, Summand};
pub use intertwiner::solve_intertwiners;

use crate::cartan::{LieType, Series, Weight};
use crate::error::{Error, Result};
use crate::linalg::{IndependentSet, Insertion, SparseMatrix, SparseVec};
use crate::scalars::{Field, QParams};

/// Limits on the modules the engine is willing to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_dim: u64,
    pub allow_exceptional: bool,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_dim: 64,
            allow_exceptional: false,
        }
    }
}

/// A generator of `U_q(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
}

impl Gen {
    pub fn all(rank: usize) -> Vec<Gen> {
        (0..rank)
            .flat_map(|i| [Gen::E(i), Gen::F(i), Gen::K(i), Gen::Kinv(i)])
            .collect()
    }

    pub fn parse(s: &str) -> Result<Gen> {
        let s = s.trim();
        let (head, idx) = if let Some(r) = s.strip_prefix("Kinv") {
            ("Kinv", r)
        } else {
            s.split_at(1.min(s.len()))
        };
        let i: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator `{s}`")))?;
        if i == 0 {
            return Err(Error::Parse("nodes are numbered from 1".into()));
        }
        Ok(match head {
            "E" => Gen::E(i - 1),
            "F" => Gen::F(i - 1),
            "K" => Gen::K(i - 1),
            "Kinv" => Gen::Kinv(i - 1),
            _ => return Err(Error::Parse(format!("bad generator `{s}`"))),
        })
    }
}

/// A finite-dimensional module with a weight basis.
#[derive(Clone, Debug)]
pub struct ModuleData<F: Field> {
    pub ty: LieType,
    pub params: QParams<F>,
    /// Highest weight, for modules built as irreducibles.
    pub highest: Option<Weight>,
    pub weights: Vec<Weight>,
    pub e: Vec<SparseMatrix<F>>,
    pub f: Vec<SparseMatrix<F>>,
    /// For irreducibles: basis vector `b` equals `F_i` applied to basis vector
    /// `p`, stored as `Some((i, p))`; the highest weight vector has `None`.
    pub parents: Option<Vec<Option<(usize, usize)>>>,
}

impl<F: Field> ModuleData<F> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// Basis index of the highest weight vector of an irreducible.
    pub fn highest_index(&self) -> usize {
        0
    }

    /// Basis indices grouped by weight.
    pub fn weight_blocks(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut m: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (j, w) in self.weights.iter().enumerate() {
            m.entry(w.clone()).or_default().push(j);
        }
        m
    }

    /// Indices of basis vectors of weight `mu`.
    pub fn weight_indices(&self, mu: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&j| &self.weights[j] == mu).collect()
    }

    /// Diagonal of `K_i^{sign}`.
    pub fn k_diag(&self, i: usize, sign: i64) -> Vec<F> {
        self.weights
            .iter()
            .map(|w| self.params.q_pow(sign * self.ty.alpha_pair(i, w)))
            .collect()
    }

    pub fn k(&self, i: usize, sign: i64) -> SparseMatrix<F> {
        SparseMatrix::diagonal(self.k_diag(i, sign))
    }

    pub fn gen(&self, g: Gen) -> SparseMatrix<F> {
        match g {
            Gen::E(i) => self.e[i].clone(),
            Gen::F(i) => self.f[i].clone(),
            Gen::K(i) => self.k(i, 1),
            Gen::Kinv(i) => self.k(i, -1),
        }
    }

    /// Matrix of a word `g_1 g_2 ... g_n` (so `g_n` acts first).
    pub fn word(&self, w: &[Gen]) -> SparseMatrix<F> {
        let mut m = SparseMatrix::identity(self.dim());
        for &g in w {
            m = m.mul(&self.gen(g));
        }
        m
    }

    /// Matrix of the antipode image `S(g)`.
    pub fn antipode(&self, g: Gen) -> SparseMatrix<F> {
        let minus = -F::one();
        match g {
            Gen::E(i) => self.e[i].mul(&self.k(i, -1)).scale(&minus),
            Gen::F(i) => self.k(i, 1).mul(&self.f[i]).scale(&minus),
            Gen::K(i) => self.k(i, -1),
            Gen::Kinv(i) => self.k(i, 1),
        }
    }

    /// `[alpha_i^vee-pairing]_{q_i}` on each basis vector.
    fn ef_commutator_diag(&self, i: usize) -> Vec<F> {
        let d = self.ty.root_halflengths()[i];
        self.weights.iter().map(|w| self.params.qint(w.0[i], d)).collect()
    }

    /// Check every defining relation of `U_q(g)` as a matrix identity,
    /// including the quantum Serre relations.
    pub fn check_relations(&self) -> Result<()> {
        let n = self.rank();
        let fail = |m: String| Err(Error::Verification(m));
        let alphas: Vec<Weight> = (0..n).map(|i| self.ty.simple_root_weight(i)).collect();
        for i in 0..n {
            for (name, mat, sign) in [("E", &self.e[i], 1i64), ("F", &self.f[i], -1)] {
                for (r, c, _) in mat.triplets() {
                    let expect = self.weights[c].add(&alphas[i].scale(sign));
                    if self.weights[r] != expect {
                        return fail(format!("{name}{} does not shift weights by ±alpha", i + 1));
                    }
                }
            }
        }
        let b = self.ty.root_form();
        for i in 0..n {
            let (k, kinv) = (self.k(i, 1), self.k(i, -1));
            if k.mul(&kinv) != SparseMatrix::identity(self.dim()) {
                return fail(format!("K{} K{}^-1 != 1", i + 1, i + 1));
            }
            for j in 0..n {
                let qf = self.params.q_pow(b[i][j]);
                if k.mul(&self.e[j]).mul(&kinv) != self.e[j].scale(&qf) {
                    return fail(format!("K{} E{} K{}^-1 relation", i + 1, j + 1, i + 1));
                }
                if k.mul(&self.f[j]).mul(&kinv) != self.f[j].scale(&qf.inv()) {
                    return fail(format!("K{} F{} K{}^-1 relation", i + 1, j + 1, i + 1));
                }
                let comm = self.e[i].mul(&self.f[j]).sub(&self.f[j].mul(&self.e[i]));
                let expect = if i == j {
                    SparseMatrix::diagonal(self.ef_commutator_diag(i))
                } else {
                    SparseMatrix::zeros(self.dim(), self.dim())
                };
                if comm != expect {
                    return fail(format!("[E{}, F{}] relation", i + 1, j + 1));
                }
            }
        }
        let a = self.ty.cartan_matrix();
        let d = self.ty.root_halflengths();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = 1 - a[i][j];
                for (name, x, y) in [("E", &self.e[i], &self.e[j]), ("F", &self.f[i], &self.f[j])] {
                    let mut acc = SparseMatrix::zeros(self.dim(), self.dim());
                    for r in 0..=m {
                        let c = self.params.qbinom(m, r, d[i]);
                        let c = if r % 2 == 1 { -c } else { c };
                        let t = matrix_pow(x, m - r).mul(y).mul(&matrix_pow(x, r));
                        acc = acc.axpy(&c, &t);
                    }
                    if !acc.is_zero() {
                        return fail(format!("quantum Serre relation ({name}{}, {name}{})", i + 1, j + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// JSON dump: weights and sparse generator matrices.
    pub fn to_json(&self) -> Value {
        let mats = |ms: &[SparseMatrix<F>]| -> Value {
            Value::Array(ms.iter().map(matrix_json).collect())
        };
        let k: Vec<SparseMatrix<F>> = (0..self.rank()).map(|i| self.k(i, 1)).collect();
        json!({
            "type": self.ty.name(),
            "lambda": self.highest.as_ref().map(|w| w.0.clone()),
            "dim": self.dim(),
            "weights": self.weights.iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
            "highest_index": self.highest.as_ref().map(|_| self.highest_index()),
            "E": mats(&self.e),
            "F": mats(&self.f),
            "K": mats(&k),
        })
    }
}

/// Sparse triples `[row, col, value]` sorted column-major.
pub fn matrix_json<F: Field>(m: &SparseMatrix<F>) -> Value {
    json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "entries": m.triplets().map(|(r, c, a)| json!([r, c, a.to_wire()])).collect::<Vec<_>>(),
    })
}

/// Inverse of [`matrix_json`].
pub fn matrix_from_json<F: Field>(v: &Value) -> Result<SparseMatrix<F>> {
    let bad = || Error::Parse("malformed matrix".into());
    let rows = v["rows"].as_u64().ok_or_else(bad)? as usize;
    let cols = v["cols"].as_u64().ok_or_else(bad)? as usize;
    let mut trip = Vec::new();
    for e in v["entries"].as_array().ok_or_else(bad)? {
        let e = e.as_array().ok_or_else(bad)?;
        if e.len() != 3 {
            return Err(bad());
        }
        let r = e[0].as_u64().ok_or_else(bad)? as usize;
        let c = e[1].as_u64().ok_or_else(bad)? as usize;
        let x = F::from_wire(e[2].as_str().ok_or_else(bad)?)?;
        if r >= rows || c >= cols {
            return Err(bad());
        }
        trip.push((r, c, x));
    }
    Ok(SparseMatrix::from_triplets(rows, cols, trip))
}

pub fn matrix_pow<F: Field>(m: &SparseMatrix<F>, k: i64) -> SparseMatrix<F> {
    let mut acc = SparseMatrix::identity(m.nrows());
    for _ in 0..k {
        acc = acc.mul(m);
    }
    acc
}

/// Build the irreducible module `V_lambda` by the F-word method.
///
/// Level by level, every candidate `F_i b` (with `b` a basis vector of the
/// previous level) is represented by its vector of images under all `E_j`,
/// computed from `E_j F_i = F_i E_j + delta_ij [K_i; 0]`. In the irreducible
/// quotient a vector below the top is zero iff all `E_j` kill it, so linear
/// relations among candidates are exactly the relations among their images.
pub fn build_irreducible<F: Field>(
    ty: LieType,
    lambda: &Weight,
    params: &QParams<F>,
    guard: &Guard,
) -> Result<ModuleData<F>> {
    if lambda.rank() != ty.rank || !lambda.is_dominant() {
        return Err(Error::InvalidInput(format!("{lambda} is not a dominant weight of {ty}")));
    }
    if ty.series == Series::E && !guard.allow_exceptional {
        return Err(Error::DimensionGuard(format!(
            "{ty} modules are refused unless exceptional types are enabled"
        )));
    }
    let expected = ty.weyl_dim(lambda)?;
    if expected > guard.max_dim {
        return Err(Error::DimensionGuard(format!(
            "dim V_{{{lambda}}} = {expected} exceeds the limit {}",
            guard.max_dim
        )));
    }
    let n = ty.rank;
    let d = ty.root_halflengths();
    let alphas: Vec<Weight> = (0..n).map(|i| ty.simple_root_weight(i)).collect();

    let mut weights = vec![lambda.clone()];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None];
    // e_cols[j][b] = E_j b, f_cols[i][b] = F_i b.
    let mut e_cols: Vec<Vec<SparseVec<F>>> = vec![vec![SparseVec::new()]; n];
    let mut f_cols: Vec<Vec<SparseVec<F>>> = vec![vec![SparseVec::new()]; n];
    let mut level: Vec<usize> = vec![0];

    while !level.is_empty() {
        let base = weights.len();
        let mut groups: BTreeMap<Weight, Vec<(usize, usize)>> = BTreeMap::new();
        for &b in &level {
            for i in 0..n {
                groups.entry(weights[b].sub(&alphas[i])).or_default().push((i, b));
            }
        }
        let mut next = Vec::new();
        // Later weights in descending order for a stable, readable basis.
        for (mu, cands) in groups.into_iter().rev() {
            let mut set: IndependentSet<F> = IndependentSet::new(true);
            let mut members: Vec<usize> = Vec::new();
            for (i, b) in cands {
                let image = e_image(i, b, &weights, &e_cols, &f_cols, params, &d, base);
                match set.insert(&stack(&image, base)) {
                    Insertion::Added(id) => {
                        let idx = weights.len();
                        debug_assert_eq!(id, members.len());
                        members.push(idx);
                        weights.push(mu.clone());
                        parents.push(Some((i, b)));
                        for j in 0..n {
                            e_cols[j].push(image[j].clone());
                            f_cols[j].push(SparseVec::new());
                        }
                        f_cols[i][b] = SparseVec::unit(idx);
                        next.push(idx);
                        if weights.len() as u64 > expected {
                            return Err(degenerate(lambda, expected));
                        }
                    }
                    Insertion::Dependent(c) => {
                        f_cols[i][b] = c.map_indices_monotone(|id| members[id]);
                    }
                }
            }
        }
        level = next;
    }
    if weights.len() as u64 != expected {
        return Err(degenerate(lambda, expected));
    }
    let dim = weights.len();
    let e = e_cols.into_iter().map(|c| SparseMatrix::from_columns(dim, c)).collect();
    let f = f_cols.into_iter().map(|c| SparseMatrix::from_columns(dim, c)).collect();
    Ok(ModuleData {
        ty,
        params: params.clone(),
        highest: Some(lambda.clone()),
        weights,
        e,
        f,
        parents: Some(parents),
    })
}

fn degenerate(lambda: &Weight, expected: u64) -> Error {
    Error::Construction(format!(
        "V_{{{lambda}}} did not reach dimension {expected}; the specialization point is degenerate"
    ))
}

/// `E_j (F_i b)` for all `j`, expressed in the basis built so far.
#[allow(clippy::too_many_arguments)]
fn e_image<F: Field>(
    i: usize,
    b: usize,
    weights: &[Weight],
    e_cols: &[Vec<SparseVec<F>>],
    f_cols: &[Vec<SparseVec<F>>],
    params: &QParams<F>,
    d: &[i64],
    base: usize,
) -> Vec<SparseVec<F>> {
    (0..e_cols.len())
        .map(|j| {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            for (c, a) in e_cols[j][b].iter() {
                for (r, x) in f_cols[i][c].iter() {
                    crate::linalg::accumulate(&mut acc, r, &(x.clone() * a));
                }
            }
            if i == j {
                let h = params.qint(weights[b].0[i], d[i]);
                crate::linalg::accumulate(&mut acc, b, &h);
            }
            let v = SparseVec::from_map(acc);
            debug_assert!(v.indices().all(|r| r < base));
            v
        })
        .collect()
}

fn stack<F: Field>(parts: &[SparseVec<F>], stride: usize) -> SparseVec<F> {
    let mut out = Vec::new();
    for (j, p) in parts.iter().enumerate() {
        out.extend(p.iter().map(|(r, a)| (j * stride + r, a.clone())));
    }
    SparseVec::from_pairs(out)
}

/// `M ⊗ N` with the action through the coproduct; index `a * dim N + b`.
pub fn tensor<F: Field>(m: &ModuleData<F>, n: &ModuleData<F>) -> Result<ModuleData<F>> {
    if m.ty != n.ty {
        return Err(Error::InvalidInput("tensor factors of different types".into()));
    }
    let r = m.rank();
    let (im, inn) = (SparseMatrix::identity(m.dim()), SparseMatrix::identity(n.dim()));
    let e = (0..r)
        .map(|i| m.e[i].kron(&n.k(i, 1)).add(&im.kron(&n.e[i])))
        .collect();
    let f = (0..r)
        .map(|i| m.f[i].kron(&inn).add(&m.k(i, -1).kron(&n.f[i])))
        .collect();
    let mut weights = Vec::with_capacity(m.dim() * n.dim());
    for a in &m.weights {
        for b in &n.weights {
            weights.push(a.add(b));
        }
    }
    Ok(ModuleData {
        ty: m.ty,
        params: m.params.clone(),
        highest: None,
        weights,
        e,
        f,
        parents: None,
    })
}

/// The dual module in the dual basis, `(x f)(v) = f(S(x) v)`.
pub fn dual_module<F: Field>(m: &ModuleData<F>) -> ModuleData<F> {
    let r = m.rank();
    ModuleData {
        ty: m.ty,
        params: m.params.clone(),
        highest: m.highest.as_ref().map(|w| m.ty.dual_weight(w)),
        weights: m.weights.iter().map(|w| w.neg()).collect(),
        e: (0..r).map(|i| m.antipode(Gen::E(i)).transpose()).collect(),
        f: (0..r).map(|i| m.antipode(Gen::F(i)).transpose()).collect(),
        parents: None,
    }
}

/// Image of basis vectors of an irreducible `v` inside `target`, given the
/// image `u` of the highest weight vector; propagates along F-words.
pub fn propagate_from_highest<F: Field>(
    v: &ModuleData<F>,
    target: &ModuleData<F>,
    u: SparseVec<F>,
) -> Vec<SparseVec<F>> {
    let parents = v.parents.as_ref().expect("module built from a highest weight vector");
    let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(v.dim());
    cols.push(u);
    for p in parents.iter().skip(1) {
        let (i, b) = p.expect("only the highest vector lacks a parent");
        let c = target.f[i].apply(&cols[b]);
        cols.push(c);
    }
    cols
}

/// Isomorphism `V_{-w_0 lambda} -> V_lambda^*` sending the highest weight
/// vector to the dual of the lowest weight vector; columns are images in the
/// dual basis.
pub fn dual_pairing<F: Field>(v: &ModuleData<F>, vdual_std: &ModuleData<F>) -> Result<SparseMatrix<F>> {
    let dual = dual_module(v);
    let lam = v.highest.clone().ok_or_else(|| Error::InvalidInput("not an irreducible".into()))?;
    let low = v.ty.w0_on_weight(&lam);
    let lows = v.weight_indices(&low);
    if lows.len() != 1 {
        return Err(Error::Construction("lowest weight space is not a line".into()));
    }
    let cols = propagate_from_highest(vdual_std, &dual, SparseVec::unit(lows[0]));
    Ok(SparseMatrix::from_columns(v.dim(), cols))
}

/// Shared cache of irreducible modules for one Lie type and field.
pub struct Registry<F: Field> {
    pub ty: LieType,
    pub params: QParams<F>,
    pub guard: Guard,
    mods: RwLock<HashMap<Weight, Arc<ModuleData<F>>>>,
}

impl<F: Field> Registry<F> {
    pub fn new(ty: LieType, params: QParams<F>, guard: Guard) -> Self {
        Registry {
            ty,
            params,
            guard,
            mods: RwLock::new(HashMap::new()),
        }
    }

    pub fn module(&self, lambda: &Weight) -> Result<Arc<ModuleData<F>>> {
        if let Some(m) = self.mods.read().get(lambda) {
            return Ok(m.clone());
        }
        let m = Arc::new(build_irreducible(self.ty, lambda, &self.params, &self.guard)?);
        let mut w = self.mods.write();
        Ok(w.entry(lambda.clone()).or_insert(m).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Rational, Scalar};

    fn sym(ty: &str) -> (LieType, QParams<Scalar>) {
        let t: LieType = ty.parse().unwrap();
        let l = t.l_denominator();
        (t, QParams::symbolic(l))
    }

    #[test]
    fn sl2_fundamental() {
        let (t, p) = sym("A1");
        let m = build_irreducible(t, &Weight(vec![1]), &p, &Guard::default()).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.k_diag(0, 1), vec![p.q_pow(1), p.q_pow(-1)]);
        assert_eq!(m.e[0].get(0, 1), Scalar::one());
        assert_eq!(m.f[0].get(1, 0), Scalar::one());
        m.check_relations().unwrap();
        let triv = build_irreducible(t, &Weight(vec![0]), &p, &Guard::default()).unwrap();
        assert_eq!(triv.dim(), 1);
        assert!(triv.e[0].is_zero() && triv.f[0].is_zero());
    }

    #[test]
    fn a2_fundamental_weights() {
        let (t, p) = sym("A2");
        let m = build_irreducible(t, &Weight(vec![1, 0]), &p, &Guard::default()).unwrap();
        assert_eq!(
            m.weights,
            vec![Weight(vec![1, 0]), Weight(vec![-1, 1]), Weight(vec![0, -1])]
        );
        m.check_relations().unwrap();
    }

    #[test]
    fn rank_two_modules_satisfy_relations() {
        for (ty, w) in [("A2", vec![1, 1]), ("B2", vec![1, 0]), ("B2", vec![0, 1]), ("C2", vec![1, 1]), ("B2", vec![0, 2])] {
            let (t, p) = sym(ty);
            let m = build_irreducible(t, &Weight(w.clone()), &p, &Guard::default()).unwrap();
            assert_eq!(m.dim() as u64, t.weyl_dim(&Weight(w)).unwrap());
            m.check_relations().unwrap();
        }
    }

    #[test]
    fn duals_and_tensors_are_modules() {
        let (t, p) = sym("A2");
        let m = build_irreducible(t, &Weight(vec![1, 0]), &p, &Guard::default()).unwrap();
        let d = dual_module(&m);
        d.check_relations().unwrap();
        assert_eq!(d.highest, Some(Weight(vec![0, 1])));
        let tp = tensor(&m, &d).unwrap();
        tp.check_relations().unwrap();
        let n = build_irreducible(t, &Weight(vec![0, 1]), &p, &Guard::default()).unwrap();
        let phi = dual_pairing(&m, &n).unwrap();
        // phi intertwines
        for i in 0..2 {
            assert_eq!(phi.mul(&n.e[i]), d.e[i].mul(&phi));
            assert_eq!(phi.mul(&n.f[i]), d.f[i].mul(&phi));
        }
    }

    #[test]
    fn specialization_matches_dimension() {
        let t: LieType = "B2".parse().unwrap();
        let p = QParams::at_s(1, Rational::from_integer(3.into())).unwrap();
        let m = build_irreducible(t, &Weight(vec![1, 1]), &p, &Guard::default()).unwrap();
        assert_eq!(m.dim(), 16);
        m.check_relations().unwrap();
    }
}
