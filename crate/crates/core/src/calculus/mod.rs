//! Tangent spaces of the Heckenberger–Kolb calculi, the differentials
//! `dbar`, `del`, truncated holomorphic sections and Liouville's theorem.
//!
//! `dbar b = sum_beta (E_beta ▷ b) ⊗ e_beta` over roots with nonzero
//! `alpha_x`-coefficient; `del` uses `F_beta`. An element of a line module is
//! holomorphic iff every component vanishes.

mod gamma;

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

pub use gamma::{gamma_crosscheck, gamma_relation_operator, GammaCrosscheck, GammaOperatorReport, GammaSlice};

use crate::cartan::{FlagSpec, Root, Weight, WeylWord};
use crate::error::Result;
use crate::linalg::{kernel, SparseMatrix, SparseVec};
use crate::peterweyl::{CoordAlgebra, GradedBlock, GradedComponent, PWElement};
use crate::repr::{RootVectorKind, RootVectors};
use crate::scalars::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chirality {
    /// `(0,1)`: spanned by `E_beta`.
    Antiholomorphic,
    /// `(1,0)`: spanned by `F_beta`.
    Holomorphic,
}

/// Root-vector operators for the restricted roots, cached per block.
pub struct TangentSpace<F: Field> {
    pub flag: FlagSpec,
    pub chirality: Chirality,
    pub word: WeylWord,
    /// Positions in the root sequence of the word with nonzero
    /// `alpha_x`-coefficient.
    pub positions: Vec<usize>,
    pub roots: Vec<Root>,
    ops: RwLock<HashMap<Weight, Arc<Vec<SparseMatrix<F>>>>>,
}

impl<F: Field> TangentSpace<F> {
    pub fn new(flag: FlagSpec, chirality: Chirality, word: Option<WeylWord>) -> Result<Self> {
        let word = word.unwrap_or_else(|| flag.ty.longest_word());
        let seq = flag.ty.root_sequence(&word)?;
        let positions: Vec<usize> = (0..seq.len()).filter(|&r| seq[r].0[flag.x] != 0).collect();
        let roots = positions
            .iter()
            .map(|&r| match chirality {
                Chirality::Antiholomorphic => seq[r].clone(),
                Chirality::Holomorphic => seq[r].neg(),
            })
            .collect();
        Ok(TangentSpace {
            flag,
            chirality,
            word,
            positions,
            roots,
            ops: RwLock::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    fn kind(&self) -> RootVectorKind {
        match self.chirality {
            Chirality::Antiholomorphic => RootVectorKind::E,
            Chirality::Holomorphic => RootVectorKind::F,
        }
    }

    /// Operators on `V_lambda`, in root order.
    pub fn operators(&self, o: &CoordAlgebra<F>, lambda: &Weight) -> Result<Arc<Vec<SparseMatrix<F>>>> {
        if let Some(x) = self.ops.read().get(lambda) {
            return Ok(x.clone());
        }
        let m = o.module(lambda)?;
        let rv = RootVectors::new(&m, self.word.clone())?;
        let ops = self
            .positions
            .iter()
            .map(|&r| rv.operator(r, self.kind()))
            .collect::<Result<Vec<_>>>()?;
        let ops = Arc::new(ops);
        Ok(self.ops.write().entry(lambda.clone()).or_insert(ops).clone())
    }
}

/// `sum_beta a_beta ⊗ e_beta`, one component per tangent direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormElement<F: Field> {
    pub components: Vec<PWElement<F>>,
}

impl<F: Field> FormElement<F> {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

/// The differential of the tangent space: `dbar` for `(0,1)`, `del` for `(1,0)`.
pub fn differential<F: Field>(o: &CoordAlgebra<F>, ts: &TangentSpace<F>, a: &PWElement<F>) -> Result<FormElement<F>> {
    let mut comps = vec![PWElement::zero(); ts.dim()];
    for lam in a.lambdas() {
        let ops = ts.operators(o, &lam)?;
        let dim = o.module(&lam)?.dim();
        let b = a.block(&lam, dim);
        for (t, x) in ops.iter().enumerate() {
            comps[t] = comps[t].add(&PWElement::from_block(&lam, &b.mul(&x.transpose())));
        }
    }
    Ok(FormElement { components: comps })
}

/// Kernel of the differential on a truncated line module. The column-slot
/// operators commute with the rows, so the kernel is computed on each block's
/// column vectors.
pub fn holomorphic_sections<F: Field>(
    o: &CoordAlgebra<F>,
    ts: &TangentSpace<F>,
    comp: &GradedComponent<F>,
) -> Result<GradedComponent<F>> {
    let blocks = comp.blocks.clone();
    let out = o.exec.try_map(blocks, |b| -> Result<GradedBlock<F>> {
        let ops = ts.operators(o, &b.lambda)?;
        let cols: Vec<SparseVec<F>> = b
            .vectors
            .iter()
            .map(|w| {
                let mut pairs = Vec::new();
                for (t, x) in ops.iter().enumerate() {
                    pairs.extend(x.apply(w).iter().map(|(r, a)| (t * b.dim + r, a.clone())));
                }
                SparseVec::from_pairs(pairs)
            })
            .collect();
        let vectors = kernel(&cols)
            .into_iter()
            .map(|c| {
                let mut acc = SparseVec::new();
                for (a, x) in c.iter() {
                    acc = acc.axpy(x, &b.vectors[a]);
                }
                acc
            })
            .collect();
        Ok(GradedBlock {
            lambda: b.lambda,
            dim: b.dim,
            vectors,
        })
    })?;
    Ok(GradedComponent {
        k: comp.k,
        depth: comp.depth,
        blocks: out.into_iter().filter(|b| !b.vectors.is_empty()).collect(),
    })
}

/// `H^0(E_k)` truncated at `depth` for the `(0,1)` calculus.
pub fn h0<F: Field>(o: &CoordAlgebra<F>, ts: &TangentSpace<F>, k: i64, depth: i64) -> Result<GradedComponent<F>> {
    let comp = o.graded_component(&ts.flag, k, depth)?;
    holomorphic_sections(o, ts, &comp)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleReport {
    pub flag: String,
    pub depth: i64,
    pub word: Vec<usize>,
    pub kernel_dim: usize,
    pub contains_one: bool,
    pub pass: bool,
}

/// `ker dbar` on the truncated degree-zero algebra is `C 1`.
pub fn liouville_check<F: Field>(o: &CoordAlgebra<F>, ts: &TangentSpace<F>, depth: i64) -> Result<LiouvilleReport> {
    let k = h0(o, ts, 0, depth)?;
    let contains_one = k.contains(&o.one());
    Ok(LiouvilleReport {
        flag: ts.flag.to_string(),
        depth,
        word: ts.word.labels(),
        kernel_dim: k.dim(),
        contains_one,
        pass: k.dim() == 1 && contains_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::LieType;
    use crate::peterweyl::{relations_among, StructureCache};
    use crate::repr::{Guard, Registry};
    use crate::scalars::{QParams, Scalar};

    fn setup(f: &str) -> (CoordAlgebra<Scalar>, FlagSpec) {
        let flag: FlagSpec = f.parse().unwrap();
        let t: LieType = flag.ty;
        let reg = Registry::new(t, QParams::symbolic(t.l_denominator()), Guard::default());
        (CoordAlgebra::new(Arc::new(reg), StructureCache::in_memory()), flag)
    }

    #[test]
    fn generators_and_differentials() {
        let (o, flag) = setup("A1/1");
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        let op = TangentSpace::new(flag, Chirality::Holomorphic, None).unwrap();
        let g = o.generators(&flag).unwrap();
        assert!(differential(&o, &ts, &o.one()).unwrap().is_zero());
        for z in &g.z {
            assert!(differential(&o, &ts, z).unwrap().is_zero());
        }
        assert!(!differential(&o, &ts, &g.zbar[0]).unwrap().is_zero());
        for z in &g.zbar {
            assert!(differential(&o, &op, z).unwrap().is_zero());
        }
    }

    #[test]
    fn block_kernel_matches_full_kernel() {
        let (o, flag) = setup("A1/1");
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        for k in -2..=2 {
            let comp = o.graded_component(&flag, k, 3).unwrap();
            let els = comp.elements();
            let comps: Vec<PWElement<Scalar>> = els
                .iter()
                .map(|e| differential(&o, &ts, e).unwrap().components[0].clone())
                .collect();
            let full = relations_among(&comps).len();
            assert_eq!(h0(&o, &ts, k, 3).unwrap().dim(), full, "k = {k}");
        }
    }

    #[test]
    fn podles_sections() {
        let (o, flag) = setup("A1/1");
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        let dims: Vec<usize> = (-2..=3).map(|k| h0(&o, &ts, k, 4).unwrap().dim()).collect();
        assert_eq!(dims, vec![0, 0, 1, 2, 3, 4]);
        assert!(liouville_check(&o, &ts, 4).unwrap().pass);
    }
}
