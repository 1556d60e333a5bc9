//! Clebsch–Gordan decomposition of completely reducible modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::{invert_dense, kernel, SparseMatrix, SparseVec};
use crate::scalars::Field;

use super::{propagate_from_highest, ModuleData, Registry};

/// One irreducible summand `V_nu -> M`.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub highest: Weight,
    pub module: Arc<ModuleData<F>>,
    /// `dim M x dim V_nu`.
    pub embed: SparseMatrix<F>,
    /// `dim V_nu x dim M`.
    pub proj: SparseMatrix<F>,
}

#[derive(Clone, Debug)]
pub struct CgDecomposition<F: Field> {
    pub summands: Vec<Summand<F>>,
}

impl<F: Field> CgDecomposition<F> {
    /// Highest weights with multiplicity, in summand order.
    pub fn highest_weights(&self) -> Vec<Weight> {
        self.summands.iter().map(|s| s.highest.clone()).collect()
    }

    /// Check that embeddings intertwine, that `proj_a embed_b = delta_ab`, and
    /// that the summands reassemble the identity.
    pub fn validate(&self, m: &ModuleData<F>) -> Result<()> {
        let fail = |s: &str| Err(Error::Verification(s.to_string()));
        let total: usize = self.summands.iter().map(|s| s.module.dim()).sum();
        if total != m.dim() {
            return fail("summand dimensions do not add up");
        }
        let mut acc = SparseMatrix::zeros(m.dim(), m.dim());
        for (a, sa) in self.summands.iter().enumerate() {
            for i in 0..m.rank() {
                if sa.embed.mul(&sa.module.e[i]) != m.e[i].mul(&sa.embed)
                    || sa.embed.mul(&sa.module.f[i]) != m.f[i].mul(&sa.embed)
                {
                    return fail("embedding does not intertwine");
                }
            }
            for (b, sb) in self.summands.iter().enumerate() {
                let p = sa.proj.mul(&sb.embed);
                let ok = if a == b {
                    p == SparseMatrix::identity(sa.module.dim())
                } else {
                    p.is_zero()
                };
                if !ok {
                    return fail("projections and embeddings are not dual");
                }
            }
            acc = acc.add(&sa.embed.mul(&sa.proj));
        }
        if acc != SparseMatrix::identity(m.dim()) {
            return fail("summands do not reassemble the identity");
        }
        Ok(())
    }
}

/// Highest weight vectors of weight `mu`: the joint kernel of all `E_i`.
pub fn highest_weight_vectors<F: Field>(m: &ModuleData<F>, idx: &[usize]) -> Vec<SparseVec<F>> {
    let n = m.rank();
    let dim = m.dim();
    let cols: Vec<SparseVec<F>> = idx
        .iter()
        .map(|&j| {
            let mut pairs = Vec::new();
            for i in 0..n {
                pairs.extend(m.e[i].col(j).iter().map(|(r, a)| (i * dim + r, a.clone())));
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    kernel(&cols)
        .into_iter()
        .map(|k| k.map_indices_monotone(|p| idx[p]))
        .collect()
}

/// Decompose `m` into irreducibles taken from `reg`.
pub fn decompose<F: Field>(m: &ModuleData<F>, reg: &Registry<F>) -> Result<CgDecomposition<F>> {
    let blocks = m.weight_blocks();
    let mut summands: Vec<(Weight, Arc<ModuleData<F>>, Vec<SparseVec<F>>)> = Vec::new();
    for (mu, idx) in blocks.iter().rev() {
        if !mu.is_dominant() {
            continue;
        }
        for u in highest_weight_vectors(m, idx) {
            let v = reg.module(mu)?;
            let cols = propagate_from_highest(&v, m, u);
            summands.push((mu.clone(), v, cols));
        }
    }
    let total: usize = summands.iter().map(|s| s.2.len()).sum();
    if total != m.dim() {
        return Err(Error::Construction(format!(
            "highest weight vectors generate {total} of {} dimensions",
            m.dim()
        )));
    }
    // Per weight, invert the square matrix of embedded basis vectors.
    let mut by_weight: BTreeMap<&Weight, Vec<(usize, usize)>> = BTreeMap::new();
    for (a, (_, v, _)) in summands.iter().enumerate() {
        for (b, w) in v.weights.iter().enumerate() {
            by_weight.entry(w).or_default().push((a, b));
        }
    }
    let mut proj_t: Vec<Vec<(usize, usize, F)>> = vec![Vec::new(); summands.len()];
    for (mu, members) in &by_weight {
        let idx = &blocks[*mu];
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        if members.len() != idx.len() {
            return Err(Error::Construction(format!("weight {mu} is not spanned by summands")));
        }
        let k = idx.len();
        // dense[p][c]: coordinate p of embedded vector c.
        let mut dense = vec![vec![F::zero(); k]; k];
        for (c, &(a, b)) in members.iter().enumerate() {
            for (r, x) in summands[a].2[b].iter() {
                dense[pos[&r]][c] = x.clone();
            }
        }
        let inv = invert_dense(&dense)
            .ok_or_else(|| Error::Construction(format!("weight {mu}: summands are dependent")))?;
        for (c, &(a, b)) in members.iter().enumerate() {
            for (p, &j) in idx.iter().enumerate() {
                if !inv[c][p].is_zero() {
                    proj_t[a].push((b, j, inv[c][p].clone()));
                }
            }
        }
    }
    let out = summands
        .into_iter()
        .zip(proj_t)
        .map(|((nu, v, cols), pt)| {
            let d = v.dim();
            Summand {
                highest: nu,
                embed: SparseMatrix::from_columns(m.dim(), cols),
                proj: SparseMatrix::from_triplets(d, m.dim(), pt),
                module: v,
            }
        })
        .collect();
    Ok(CgDecomposition { summands: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::LieType;
    use crate::repr::{tensor, Guard};
    use crate::scalars::{QParams, Scalar};

    fn reg(ty: &str) -> Registry<Scalar> {
        let t: LieType = ty.parse().unwrap();
        Registry::new(t, QParams::symbolic(t.l_denominator()), Guard::default())
    }

    #[test]
    fn sl2_square() {
        let r = reg("A1");
        let v = r.module(&Weight(vec![1])).unwrap();
        let t = tensor(&v, &v).unwrap();
        let weights: Vec<i64> = t.weights.iter().map(|w| w.0[0]).collect();
        assert_eq!(weights, vec![2, 0, 0, -2]);
        let cg = decompose(&t, &r).unwrap();
        assert_eq!(cg.highest_weights(), vec![Weight(vec![2]), Weight(vec![0])]);
        cg.validate(&t).unwrap();
    }

    #[test]
    fn a2_fundamental_times_dual() {
        let r = reg("A2");
        let a = r.module(&Weight(vec![1, 0])).unwrap();
        let b = r.module(&Weight(vec![0, 1])).unwrap();
        let t = tensor(&a, &b).unwrap();
        let cg = decompose(&t, &r).unwrap();
        assert_eq!(cg.highest_weights(), vec![Weight(vec![1, 1]), Weight(vec![0, 0])]);
        cg.validate(&t).unwrap();
    }

    #[test]
    fn tensor_with_trivial() {
        let r = reg("B2");
        let a = r.module(&Weight(vec![0, 1])).unwrap();
        let z = r.module(&Weight(vec![0, 0])).unwrap();
        let t = tensor(&a, &z).unwrap();
        let cg = decompose(&t, &r).unwrap();
        assert_eq!(cg.highest_weights(), vec![Weight(vec![0, 1])]);
        assert_eq!(cg.summands[0].embed, SparseMatrix::identity(a.dim()));
    }
}
