//! The quantum coordinate algebra `O_q(G)` in the Peter–Weyl basis.
//!
//! `c^lambda_{r,c}` is the matrix coefficient `X -> f_r(X v_c)` of `V_lambda`,
//! with `f_r` the dual basis. An element restricted to one block is a
//! coefficient matrix `M` with `a = sum M[r][c] c_{r,c}`. The column slot
//! carries `X ▷ c_{f,v} = c_{f, Xv}`, i.e. `M -> M rho(X)^T`; the row slot
//! carries `X · c_{f,v} = c_{f ∘ S(X), v}`, i.e. `M -> rho(S(X))^T M`.

mod cache;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Value};

pub use cache::{CacheStats, StructureCache, CODE_VERSION};

use crate::cartan::{FlagSpec, LieType, Weight};
use crate::error::{Error, Result};
use crate::linalg::{kernel, IndependentSet, SparseMatrix, SparseVec};
use crate::par::Exec;
use crate::repr::{dual_pairing, Gen, ModuleData, Registry};
use crate::scalars::Field;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PWIndex {
    pub lambda: Weight,
    pub row: usize,
    pub col: usize,
}

/// A finite linear combination of matrix coefficients without stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PWElement<F: Field> {
    terms: BTreeMap<PWIndex, F>,
}

impl<F: Field> PWElement<F> {
    pub fn zero() -> Self {
        PWElement { terms: BTreeMap::new() }
    }

    /// The unit `c^0_{0,0}`.
    pub fn one(rank: usize) -> Self {
        Self::basis(Weight::zero(rank), 0, 0)
    }

    pub fn basis(lambda: Weight, row: usize, col: usize) -> Self {
        Self::term(PWIndex { lambda, row, col }, F::one())
    }

    pub fn term(idx: PWIndex, a: F) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(idx, a);
        }
        PWElement { terms }
    }

    /// `sum_c v_c c^lambda_{row,c}`.
    pub fn row_vector(lambda: &Weight, row: usize, v: &SparseVec<F>) -> Self {
        let terms = v
            .iter()
            .map(|(c, a)| (PWIndex { lambda: lambda.clone(), row, col: c }, a.clone()))
            .collect();
        PWElement { terms }
    }

    /// `sum M[r][c] c^lambda_{r,c}`.
    pub fn from_block(lambda: &Weight, m: &SparseMatrix<F>) -> Self {
        let terms = m
            .triplets()
            .map(|(r, c, a)| (PWIndex { lambda: lambda.clone(), row: r, col: c }, a.clone()))
            .collect();
        PWElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PWIndex, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, idx: &PWIndex) -> F {
        self.terms.get(idx).cloned().unwrap_or_else(F::zero)
    }

    /// Peter–Weyl blocks that occur.
    pub fn lambdas(&self) -> BTreeSet<Weight> {
        self.terms.keys().map(|k| k.lambda.clone()).collect()
    }

    /// Coefficient matrix of one block.
    pub fn block(&self, lambda: &Weight, dim: usize) -> SparseMatrix<F> {
        let lo = PWIndex {
            lambda: lambda.clone(),
            row: 0,
            col: 0,
        };
        let trip = self
            .terms
            .range(lo..)
            .take_while(|(k, _)| &k.lambda == lambda)
            .map(|(k, a)| (k.row, k.col, a.clone()));
        SparseMatrix::from_triplets(dim, dim, trip)
    }

    pub fn axpy(&self, a: &F, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        if a.is_zero() {
            return self.clone();
        }
        for (k, x) in &o.terms {
            let t = x.clone() * a;
            match terms.get_mut(k) {
                Some(y) => {
                    *y += &t;
                    if y.is_zero() {
                        terms.remove(k);
                    }
                }
                None => {
                    terms.insert(k.clone(), t);
                }
            }
        }
        PWElement { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&F::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&-F::one(), o)
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        PWElement {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x.clone() * a)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, a)| json!([k.lambda.0, k.row, k.col, a.to_wire()]))
                .collect(),
        )
    }
}

/// Coordinates of elements in a common index space, for span computations.
#[derive(Default)]
pub struct PWIndexer {
    map: BTreeMap<PWIndex, usize>,
}

impl PWIndexer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vector<F: Field>(&mut self, a: &PWElement<F>) -> SparseVec<F> {
        let pairs: Vec<(usize, F)> = a
            .terms()
            .map(|(k, x)| {
                let n = self.map.len();
                (*self.map.entry(k.clone()).or_insert(n), x.clone())
            })
            .collect();
        SparseVec::from_pairs(pairs)
    }
}

pub fn span_rank<F: Field>(xs: &[PWElement<F>]) -> usize {
    let mut ix = PWIndexer::new();
    let vs: Vec<_> = xs.iter().map(|x| ix.vector(x)).collect();
    crate::linalg::rank(&vs)
}

pub fn same_span<F: Field>(a: &[PWElement<F>], b: &[PWElement<F>]) -> bool {
    let mut ix = PWIndexer::new();
    let va: Vec<_> = a.iter().map(|x| ix.vector(x)).collect();
    let vb: Vec<_> = b.iter().map(|x| ix.vector(x)).collect();
    crate::linalg::same_span(&va, &vb)
}

/// Whether `x` lies in the span of `basis`.
pub fn in_span<F: Field>(basis: &[PWElement<F>], x: &PWElement<F>) -> bool {
    let mut ix = PWIndexer::new();
    let mut set = IndependentSet::new(false);
    for b in basis {
        set.insert(&ix.vector(b));
    }
    set.contains(&ix.vector(x))
}

/// Linear relations `sum c_j x_j = 0` among the given elements.
pub fn relations_among<F: Field>(xs: &[PWElement<F>]) -> Vec<SparseVec<F>> {
    let mut ix = PWIndexer::new();
    let vs: Vec<_> = xs.iter().map(|x| ix.vector(x)).collect();
    kernel(&vs)
}

/// Which invariants `invariant_subspace` computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subalgebra {
    /// `U_q(l_S)`: Levi factor including the full torus.
    Levi,
    /// `U_q(l^s_S)`: its semisimple part.
    Semisimple,
}

/// Truncated line module: per block `lambda`, column vectors `w` such that the
/// elements `c_{r,w}` (all rows `r`) form the basis.
#[derive(Clone, Debug)]
pub struct GradedComponent<F: Field> {
    pub k: i64,
    pub depth: i64,
    pub blocks: Vec<GradedBlock<F>>,
}

#[derive(Clone, Debug)]
pub struct GradedBlock<F: Field> {
    pub lambda: Weight,
    pub dim: usize,
    pub vectors: Vec<SparseVec<F>>,
}

impl<F: Field> GradedComponent<F> {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.vectors.len()).sum()
    }

    /// Blocks with their multiplicity of column vectors.
    pub fn multiplicities(&self) -> Vec<(Weight, usize)> {
        self.blocks
            .iter()
            .filter(|b| !b.vectors.is_empty())
            .map(|b| (b.lambda.clone(), b.vectors.len()))
            .collect()
    }

    pub fn elements(&self) -> Vec<PWElement<F>> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            for w in &b.vectors {
                for r in 0..b.dim {
                    out.push(PWElement::row_vector(&b.lambda, r, w));
                }
            }
        }
        out
    }

    /// Membership: every row of every block lies in the span of the block's
    /// column vectors.
    pub fn contains(&self, a: &PWElement<F>) -> bool {
        let by: BTreeMap<&Weight, &GradedBlock<F>> = self.blocks.iter().map(|b| (&b.lambda, b)).collect();
        for lam in a.lambdas() {
            let Some(b) = by.get(&lam) else {
                return false;
            };
            let mut set = IndependentSet::new(false);
            for w in &b.vectors {
                set.insert(w);
            }
            let m = a.block(&lam, b.dim).transpose();
            if !m.columns().iter().all(|row| set.contains(row)) {
                return false;
            }
        }
        true
    }
}

/// `O_q(G)` for one Lie type over one field.
pub struct CoordAlgebra<F: Field> {
    pub reg: Arc<Registry<F>>,
    pub cache: StructureCache<F>,
    pub exec: Exec,
}

/// Distinguished generators of a flag manifold.
#[derive(Clone, Debug)]
pub struct Generators<F: Field> {
    pub flag: FlagSpec,
    pub z: Vec<PWElement<F>>,
    /// Normalized so that `sum zbar_i z_i = 1`.
    pub zbar: Vec<PWElement<F>>,
    /// Before normalization.
    pub zbar_raw: Vec<PWElement<F>>,
    /// The scalar `sum zbar_raw_i z_i`, by which `zbar_raw` was divided.
    pub normalization: F,
}

impl<F: Field> CoordAlgebra<F> {
    pub fn new(reg: Arc<Registry<F>>, cache: StructureCache<F>) -> Self {
        CoordAlgebra {
            reg,
            cache,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn ty(&self) -> LieType {
        self.reg.ty
    }

    pub fn module(&self, lambda: &Weight) -> Result<Arc<ModuleData<F>>> {
        self.reg.module(lambda)
    }

    pub fn one(&self) -> PWElement<F> {
        PWElement::one(self.ty().rank)
    }

    fn blocks(&self, a: &PWElement<F>) -> Result<Vec<(Weight, Arc<ModuleData<F>>, SparseMatrix<F>)>> {
        a.lambdas()
            .into_iter()
            .map(|l| {
                let m = self.module(&l)?;
                let b = a.block(&l, m.dim());
                Ok((l, m, b))
            })
            .collect()
    }

    /// `c^V_{f,v} c^W_{g,w} = c^{V⊗W}_{f⊗g, v⊗w}`, re-expanded block by block:
    /// summand `m` with embedding `i` and projection `p` contributes
    /// `i^T (A ⊗ B) p^T` to the block of its highest weight.
    pub fn multiply(&self, a: &PWElement<F>, b: &PWElement<F>) -> Result<PWElement<F>> {
        let ba = self.blocks(a)?;
        let bb = self.blocks(b)?;
        let mut pairs = Vec::new();
        for x in &ba {
            for y in &bb {
                pairs.push((x, y));
            }
        }
        let parts = self.exec.try_map(pairs, |((la, _, ma), (lb, _, mb))| -> Result<Vec<PWElement<F>>> {
            let cg = self.cache.get(&self.reg, la, lb)?;
            let t = ma.kron(mb);
            Ok(cg
                .summands
                .iter()
                .map(|s| {
                    let m = s.embed.transpose().mul(&t).mul(&s.proj.transpose());
                    PWElement::from_block(&s.highest, &m)
                })
                .collect())
        })?;
        let mut out = PWElement::zero();
        for p in parts.into_iter().flatten() {
            out = out.add(&p);
        }
        Ok(out)
    }

    /// Product of a sequence, left to right; the unit for an empty one.
    pub fn product(&self, xs: &[&PWElement<F>]) -> Result<PWElement<F>> {
        let mut acc = self.one();
        for x in xs {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// `a^n`.
    pub fn power(&self, a: &PWElement<F>, n: u32) -> Result<PWElement<F>> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Evaluation at `1`: `c_{r,c} -> delta_rc`.
    pub fn counit(&self, a: &PWElement<F>) -> F {
        let mut acc = F::zero();
        for (k, x) in a.terms() {
            if k.row == k.col {
                acc += x;
            }
        }
        acc
    }

    /// Column-slot action of a per-module matrix: `M -> M X^T`.
    pub fn act_v_with(
        &self,
        a: &PWElement<F>,
        x: impl Fn(&ModuleData<F>) -> Result<SparseMatrix<F>>,
    ) -> Result<PWElement<F>> {
        let mut out = PWElement::zero();
        for (l, m, b) in self.blocks(a)? {
            let xm = x(&m)?;
            out = out.add(&PWElement::from_block(&l, &b.mul(&xm.transpose())));
        }
        Ok(out)
    }

    /// `X ▷ a` for a word `X = g_1 ... g_n`.
    pub fn act_v(&self, word: &[Gen], a: &PWElement<F>) -> Result<PWElement<F>> {
        self.act_v_with(a, |m| Ok(m.word(word)))
    }

    /// Row-slot left action `X · a` for a word `X = g_1 ... g_n`.
    pub fn act_f(&self, word: &[Gen], a: &PWElement<F>) -> Result<PWElement<F>> {
        let mut out = PWElement::zero();
        for (l, m, b) in self.blocks(a)? {
            let mut acc = b;
            for &g in word.iter().rev() {
                acc = m.antipode(g).transpose().mul(&acc);
            }
            out = out.add(&PWElement::from_block(&l, &acc));
        }
        Ok(out)
    }

    /// Vectors of `V_lambda` fixed by the chosen subalgebra of the Levi factor.
    pub fn invariant_subspace(&self, flag: &FlagSpec, lambda: &Weight, sub: Subalgebra) -> Result<Vec<SparseVec<F>>> {
        let m = self.module(lambda)?;
        let levi = flag.levi_nodes();
        let mut out = Vec::new();
        for (mu, idx) in m.weight_blocks().iter().rev() {
            let ok = match sub {
                Subalgebra::Levi => mu.is_zero(),
                Subalgebra::Semisimple => levi.iter().all(|&j| mu.0[j] == 0),
            };
            if ok {
                out.extend(levi_kernel(&m, &levi, idx));
            }
        }
        Ok(out)
    }

    /// `U_q(l^s_S)`-invariant vectors of weight `k varpi_x` in `V_lambda`.
    pub fn graded_vectors(&self, flag: &FlagSpec, lambda: &Weight, k: i64) -> Result<Vec<SparseVec<F>>> {
        let mu = flag.varpi().scale(k);
        if !has_weight(&self.ty(), lambda, &mu) {
            return Ok(Vec::new());
        }
        let m = self.module(lambda)?;
        let idx = m.weight_indices(&mu);
        Ok(levi_kernel(&m, &flag.levi_nodes(), &idx))
    }

    /// Truncation of the line module of degree `k` to blocks with
    /// `sum lambda_i <= depth`. Blocks whose module lacks the weight
    /// `k varpi_x` are skipped without being built.
    pub fn graded_component(&self, flag: &FlagSpec, k: i64, depth: i64) -> Result<GradedComponent<F>> {
        let mu = flag.varpi().scale(k);
        let lams: Vec<Weight> = self
            .ty()
            .dominant_weights(depth)
            .into_iter()
            .filter(|l| has_weight(&self.ty(), l, &mu))
            .collect();
        let blocks = self.exec.try_map(lams, |l| -> Result<GradedBlock<F>> {
            let vectors = self.graded_vectors(flag, &l, k)?;
            let dim = self.module(&l)?.dim();
            Ok(GradedBlock { lambda: l, dim, vectors })
        })?;
        Ok(GradedComponent {
            k,
            depth,
            blocks: blocks.into_iter().filter(|b| !b.vectors.is_empty()).collect(),
        })
    }

    /// `z_i = c^{varpi_x}_{f_i, v_hw}` and `zbar_j`, the coefficient of
    /// `V^* = V_{varpi_x}^*` pairing `e_j` with `f_hw`, transported to
    /// `V_{-w_0 varpi_x}` and normalized so that `sum zbar_i z_i = 1`.
    pub fn generators(&self, flag: &FlagSpec) -> Result<Generators<F>> {
        let w = flag.varpi();
        let v = self.module(&w)?;
        let wd = self.ty().dual_weight(&w);
        let vd = self.module(&wd)?;
        let hw = v.highest_index();
        let z: Vec<PWElement<F>> = (0..v.dim()).map(|i| PWElement::basis(w.clone(), i, hw)).collect();
        // phi: V' -> V^*, columns in the dual basis.
        let phi = dual_pairing(&v, &vd)?;
        let low = vd.ty.w0_on_weight(&wd);
        let lows = vd.weight_indices(&low);
        if lows.len() != 1 {
            return Err(Error::Construction("lowest weight of the dual is not a line".into()));
        }
        let c_low = lows[0];
        let a = phi.get(hw, c_low);
        if a.is_zero() {
            return Err(Error::Construction("pairing misses the highest dual vector".into()));
        }
        let t = a.inv();
        let phi_t = phi.transpose();
        let zbar_raw: Vec<PWElement<F>> = (0..v.dim())
            .map(|j| {
                let row = phi_t.col(j).scale(&t);
                let mut acc = PWElement::zero();
                for (r, x) in row.iter() {
                    acc = acc.add(&PWElement::term(
                        PWIndex {
                            lambda: wd.clone(),
                            row: r,
                            col: c_low,
                        },
                        x.clone(),
                    ));
                }
                acc
            })
            .collect();
        let mut s = PWElement::zero();
        for (zb, zi) in zbar_raw.iter().zip(&z) {
            s = s.add(&self.multiply(zb, zi)?);
        }
        let c = scalar_part(&s, self.ty().rank)
            .ok_or_else(|| Error::Verification("sum zbar_i z_i is not a scalar".into()))?;
        if c.is_zero() {
            return Err(Error::Verification("sum zbar_i z_i vanishes".into()));
        }
        let ci = c.inv();
        let zbar = zbar_raw.iter().map(|x| x.scale(&ci)).collect();
        Ok(Generators {
            flag: *flag,
            z,
            zbar,
            zbar_raw,
            normalization: c,
        })
    }
}

/// `c` if `a = c * 1`.
pub fn scalar_part<F: Field>(a: &PWElement<F>, rank: usize) -> Option<F> {
    let one = PWIndex {
        lambda: Weight::zero(rank),
        row: 0,
        col: 0,
    };
    if a.terms().all(|(k, _)| *k == one) {
        Some(a.get(&one))
    } else {
        None
    }
}

/// Joint kernel of `E_j, F_j` (`j` in `levi`) on the span of `idx`.
fn levi_kernel<F: Field>(m: &ModuleData<F>, levi: &[usize], idx: &[usize]) -> Vec<SparseVec<F>> {
    let dim = m.dim();
    let cols: Vec<SparseVec<F>> = idx
        .iter()
        .map(|&c| {
            let mut pairs = Vec::new();
            for (t, &j) in levi.iter().enumerate() {
                pairs.extend(m.e[j].col(c).iter().map(|(r, a)| ((2 * t) * dim + r, a.clone())));
                pairs.extend(m.f[j].col(c).iter().map(|(r, a)| ((2 * t + 1) * dim + r, a.clone())));
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    kernel(&cols)
        .into_iter()
        .map(|k| k.map_indices_monotone(|p| idx[p]))
        .collect()
}

/// Whether `mu` is a weight of `V_lambda`: its dominant conjugate lies below
/// `lambda` in the dominance order.
pub fn has_weight(ty: &LieType, lambda: &Weight, mu: &Weight) -> bool {
    let mut v = mu.clone();
    while let Some(i) = v.0.iter().position(|&a| a < 0) {
        v = ty.reflect_weight(i, &v);
    }
    v == *lambda || ty.strictly_below(&v, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::Guard;
    use crate::scalars::{QParams, Scalar};

    fn algebra(ty: &str) -> CoordAlgebra<Scalar> {
        let t: LieType = ty.parse().unwrap();
        let reg = Registry::new(t, QParams::symbolic(t.l_denominator()), Guard::default());
        CoordAlgebra::new(Arc::new(reg), StructureCache::in_memory())
    }

    #[test]
    fn unit_and_counit() {
        let o = algebra("A1");
        let z = PWElement::<Scalar>::basis(Weight(vec![1]), 1, 0);
        assert_eq!(o.multiply(&o.one(), &z).unwrap(), z);
        assert_eq!(o.multiply(&z, &o.one()).unwrap(), z);
        assert_eq!(o.counit(&o.one()), Scalar::one());
        assert!(o.counit(&z).is_zero());
        let zz = o.multiply(&z, &z).unwrap();
        assert_eq!(zz.lambdas().into_iter().collect::<Vec<_>>(), vec![Weight(vec![2])]);
    }

    #[test]
    fn generators_normalize_on_default_flags() {
        for f in ["A1/1", "A2/1", "A2/2", "B2/1", "C2/2"] {
            let flag: FlagSpec = f.parse().unwrap();
            let o = algebra(&flag.ty.name());
            let g = o.generators(&flag).unwrap();
            let mut s = PWElement::zero();
            for (a, b) in g.zbar.iter().zip(&g.z) {
                s = s.add(&o.multiply(a, b).unwrap());
            }
            assert_eq!(s, o.one(), "{f}");
        }
    }

    #[test]
    fn actions_commute_and_respect_weights() {
        let o = algebra("A2");
        let a = PWElement::<Scalar>::basis(Weight(vec![1, 1]), 2, 3);
        let x = o.act_v(&[Gen::E(0)], &o.act_f(&[Gen::F(1)], &a).unwrap()).unwrap();
        let y = o.act_f(&[Gen::F(1)], &o.act_v(&[Gen::E(0)], &a).unwrap()).unwrap();
        assert_eq!(x, y);
        let m = o.module(&Weight(vec![1, 1])).unwrap();
        let k = o.act_v(&[Gen::K(0)], &a).unwrap();
        assert_eq!(k, a.scale(&m.params.q_pow(m.ty.alpha_pair(0, &m.weights[3]))));
        let k = o.act_f(&[Gen::K(0)], &a).unwrap();
        assert_eq!(k, a.scale(&m.params.q_pow(-m.ty.alpha_pair(0, &m.weights[2]))));
    }

    #[test]
    fn sl2_graded_component_dims() {
        let o = algebra("A1");
        let flag: FlagSpec = "A1/1".parse().unwrap();
        assert_eq!(o.graded_component(&flag, 1, 3).unwrap().dim(), 6);
        assert_eq!(o.graded_component(&flag, 0, 4).unwrap().dim(), 1 + 3 + 5);
        let inv = o.invariant_subspace(&flag, &Weight(vec![2]), Subalgebra::Levi).unwrap();
        assert_eq!(inv.len(), 1);
        assert!(o.invariant_subspace(&flag, &Weight(vec![1]), Subalgebra::Levi).unwrap().is_empty());
    }
}
