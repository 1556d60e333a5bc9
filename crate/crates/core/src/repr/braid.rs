//! Lusztig automorphisms `T_i` realized on modules, and root vectors.
//!
//! `T_i(E_i) = -F_i K_i`, `T_i(F_i) = -K_i^{-1} E_i`,
//! `T_i(K_j) = K_j K_i^{-a_ij}`, and for `j != i` with `r = -a_ij`
//! `T_i(E_j) = sum_t (-1)^{t+r} q_i^{-t} E_i^{(r-t)} E_j E_i^{(t)}`,
//! `T_i(F_j) = sum_t (-1)^{t+r} q_i^{t} F_i^{(t)} F_j F_i^{(r-t)}`,
//! with divided powers `X^{(n)} = X^n / [n]_{q_i}!`.

use std::collections::BTreeMap;

use crate::cartan::{Root, WeylWord};
use crate::error::{Error, Result};
use crate::linalg::{invert_dense, SparseMatrix, SparseVec};
use crate::scalars::Field;

use super::intertwiner::{normalize_first_entry, solve_intertwiners};
use super::{matrix_pow, Gen, ModuleData};

fn divided_power<F: Field>(m: &ModuleData<F>, x: &SparseMatrix<F>, i: usize, n: i64) -> SparseMatrix<F> {
    let d = m.ty.root_halflengths()[i];
    matrix_pow(x, n).scale(&m.params.qfact(n, d).inv())
}

/// `rho(T_i(g))` on `m`.
pub fn lusztig_image<F: Field>(m: &ModuleData<F>, i: usize, g: Gen) -> SparseMatrix<F> {
    let a = m.ty.cartan_matrix();
    let d = m.ty.root_halflengths()[i];
    let minus = -F::one();
    match g {
        Gen::E(j) if j == i => m.f[i].mul(&m.k(i, 1)).scale(&minus),
        Gen::F(j) if j == i => m.k(i, -1).mul(&m.e[i]).scale(&minus),
        Gen::K(j) | Gen::Kinv(j) => {
            let sign = if matches!(g, Gen::K(_)) { 1 } else { -1 };
            let diag = m
                .weights
                .iter()
                .map(|w| m.params.q_pow(sign * (m.ty.alpha_pair(j, w) - a[i][j] * m.ty.alpha_pair(i, w))))
                .collect();
            SparseMatrix::diagonal(diag)
        }
        Gen::E(j) | Gen::F(j) => {
            let r = -a[i][j];
            let is_e = matches!(g, Gen::E(_));
            let (xi, xj) = if is_e { (&m.e[i], &m.e[j]) } else { (&m.f[i], &m.f[j]) };
            let mut acc = SparseMatrix::zeros(m.dim(), m.dim());
            for t in 0..=r {
                let sign = if (t + r) % 2 == 0 { F::one() } else { minus.clone() };
                let c = sign * m.params.q_pow(if is_e { -t * d } else { t * d });
                let term = if is_e {
                    divided_power(m, xi, i, r - t).mul(xj).mul(&divided_power(m, xi, i, t))
                } else {
                    divided_power(m, xi, i, t).mul(xj).mul(&divided_power(m, xi, i, r - t))
                };
                acc = acc.axpy(&c, &term);
            }
            acc
        }
    }
}

/// `Theta_i` with `Theta_i rho(x) Theta_i^{-1} = rho(T_i(x))`.
#[derive(Clone, Debug)]
pub struct BraidOperator<F: Field> {
    pub node: usize,
    pub theta: SparseMatrix<F>,
    pub theta_inv: SparseMatrix<F>,
}

impl<F: Field> BraidOperator<F> {
    /// Check the conjugation identity for every generator.
    pub fn check(&self, m: &ModuleData<F>) -> Result<()> {
        for g in Gen::all(m.rank()) {
            if self.theta.mul(&m.gen(g)) != lusztig_image(m, self.node, g).mul(&self.theta) {
                return Err(Error::Verification(format!(
                    "Theta_{} fails the conjugation identity on {g:?}",
                    self.node + 1
                )));
            }
        }
        if self.theta.mul(&self.theta_inv) != SparseMatrix::identity(m.dim()) {
            return Err(Error::Verification("Theta inverse is wrong".into()));
        }
        Ok(())
    }

    /// `Theta X Theta^{-1}`.
    pub fn conjugate(&self, x: &SparseMatrix<F>) -> SparseMatrix<F> {
        self.theta.mul(x).mul(&self.theta_inv)
    }
}

/// Build `Theta_i` on an irreducible module.
///
/// The highest weight vector goes to the extremal vector of weight
/// `s_i lambda` (a unit basis vector, so the first nonzero entry in column
/// order is 1), and `Theta(F_j b) = rho(T_i(F_j)) Theta(b)` fixes the rest.
pub fn braid_operator<F: Field>(m: &ModuleData<F>, i: usize) -> Result<BraidOperator<F>> {
    let parents = m
        .parents
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("braid operators need an irreducible module".into()))?;
    if i >= m.rank() {
        return Err(Error::InvalidInput(format!("node {} out of range", i + 1)));
    }
    let lam = m.highest.clone().expect("irreducible");
    let target = m.ty.reflect_weight(i, &lam);
    let ext = m.weight_indices(&target);
    if ext.len() != 1 {
        return Err(Error::Construction("extremal weight space is not a line".into()));
    }
    let tf: Vec<SparseMatrix<F>> = (0..m.rank()).map(|j| lusztig_image(m, i, Gen::F(j))).collect();
    let mut cols: Vec<SparseVec<F>> = vec![SparseVec::unit(ext[0])];
    for p in parents.iter().skip(1) {
        let (j, b) = p.expect("parent");
        let c = tf[j].apply(&cols[b]);
        cols.push(c);
    }
    let theta = SparseMatrix::from_columns(m.dim(), cols);
    let theta_inv = blockwise_inverse(m, i, &theta)?;
    let op = BraidOperator { node: i, theta, theta_inv };
    op.check(m)?;
    Ok(op)
}

/// Invert a matrix mapping weight `mu` to weight `s_i mu`, block by block.
fn blockwise_inverse<F: Field>(m: &ModuleData<F>, i: usize, theta: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
    let blocks = m.weight_blocks();
    let mut trip = Vec::new();
    for (mu, cs) in &blocks {
        let rs = blocks
            .get(&m.ty.reflect_weight(i, mu))
            .ok_or_else(|| Error::Construction("weights are not Weyl invariant".into()))?;
        if rs.len() != cs.len() {
            return Err(Error::Construction("weight multiplicities are not Weyl invariant".into()));
        }
        let sub = theta.submatrix(rs, cs).to_dense();
        let inv = invert_dense(&sub).ok_or_else(|| Error::Construction("Theta is singular".into()))?;
        for (a, &c) in cs.iter().enumerate() {
            for (b, &r) in rs.iter().enumerate() {
                if !inv[a][b].is_zero() {
                    trip.push((c, r, inv[a][b].clone()));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(m.dim(), m.dim(), trip))
}

/// Solve for `Theta_i` directly from the conjugation system on weight-permuting
/// matrices; the normalized solution, or an error unless it is unique.
pub fn braid_operator_by_solver<F: Field>(m: &ModuleData<F>, i: usize) -> Result<SparseMatrix<F>> {
    let pairs: Vec<_> = Gen::all(m.rank())
        .into_iter()
        .map(|g| (m.gen(g), lusztig_image(m, i, g)))
        .collect();
    let refl: Vec<_> = m.weights.iter().map(|w| m.ty.reflect_weight(i, w)).collect();
    let sols = solve_intertwiners(m.dim(), m.dim(), &pairs, |r, c| m.weights[r] == refl[c]);
    if sols.len() != 1 {
        return Err(Error::Verification(format!(
            "conjugation system for Theta_{} has {} independent solutions",
            i + 1,
            sols.len()
        )));
    }
    Ok(normalize_first_entry(&sols[0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootVectorKind {
    E,
    F,
}

/// Root-vector operators for a reduced word of `w_0` on one module.
pub struct RootVectors<'a, F: Field> {
    pub module: &'a ModuleData<F>,
    pub word: WeylWord,
    pub roots: Vec<Root>,
    thetas: BTreeMap<usize, BraidOperator<F>>,
}

impl<'a, F: Field> RootVectors<'a, F> {
    pub fn new(m: &'a ModuleData<F>, word: WeylWord) -> Result<Self> {
        let roots = m.ty.root_sequence(&word)?;
        let mut thetas = BTreeMap::new();
        for &i in &word.0 {
            if let std::collections::btree_map::Entry::Vacant(e) = thetas.entry(i) {
                e.insert(braid_operator(m, i)?);
            }
        }
        Ok(RootVectors {
            module: m,
            word,
            roots,
            thetas,
        })
    }

    /// `Theta_{i_1} ... Theta_{i_{r-1}} rho(X_{i_r}) Theta_{i_{r-1}}^{-1} ... Theta_{i_1}^{-1}`
    /// for `r` counted from 0.
    pub fn operator(&self, r: usize, kind: RootVectorKind) -> Result<SparseMatrix<F>> {
        if r >= self.word.len() {
            return Err(Error::InvalidInput(format!("root index {} out of range", r + 1)));
        }
        let i = self.word.0[r];
        let mut x = match kind {
            RootVectorKind::E => self.module.e[i].clone(),
            RootVectorKind::F => self.module.f[i].clone(),
        };
        for k in (0..r).rev() {
            x = self.thetas[&self.word.0[k]].conjugate(&x);
        }
        Ok(x)
    }

    /// Whether `K_i X K_i^{-1} = q^{(alpha_i, ±beta_r)} X` for all `i`.
    pub fn has_root_weight(&self, r: usize, kind: RootVectorKind, x: &SparseMatrix<F>) -> bool {
        let m = self.module;
        let beta = m.ty.root_to_weight(&self.roots[r]);
        let sign = if kind == RootVectorKind::E { 1 } else { -1 };
        (0..m.rank()).all(|i| {
            let qf = m.params.q_pow(sign * m.ty.alpha_pair(i, &beta));
            m.k(i, 1).mul(x).mul(&m.k(i, -1)) == x.scale(&qf)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{LieType, Weight};
    use crate::linalg::{rank, SparseVec};
    use crate::repr::{build_irreducible, Guard};
    use crate::scalars::{QParams, Scalar};

    fn module(ty: &str, w: &[i64]) -> ModuleData<Scalar> {
        let t: LieType = ty.parse().unwrap();
        build_irreducible(t, &Weight(w.to_vec()), &QParams::symbolic(t.l_denominator()), &Guard::default()).unwrap()
    }

    #[test]
    fn sl2_theta_is_antidiagonal() {
        let m = module("A1", &[1]);
        let op = braid_operator(&m, 0).unwrap();
        assert!(op.theta.get(0, 0).is_zero() && op.theta.get(1, 1).is_zero());
        assert!(!op.theta.get(1, 0).is_zero() && !op.theta.get(0, 1).is_zero());
        assert_eq!(braid_operator_by_solver(&m, 0).unwrap(), op.theta);
        let triv = module("A1", &[0]);
        assert_eq!(braid_operator(&triv, 0).unwrap().theta, SparseMatrix::identity(1));
    }

    #[test]
    fn rank_two_conjugation_and_solver_agree() {
        for (ty, w) in [("A2", vec![1, 0]), ("A2", vec![1, 1]), ("B2", vec![1, 0]), ("B2", vec![0, 1]), ("C2", vec![0, 1])] {
            let m = module(ty, &w);
            for i in 0..2 {
                let op = braid_operator(&m, i).unwrap();
                assert_eq!(braid_operator_by_solver(&m, i).unwrap(), op.theta, "{ty} {w:?} node {i}");
            }
        }
    }

    #[test]
    fn root_vectors_have_root_weights_and_are_independent() {
        let m = module("B2", &[1, 1]);
        let rv = RootVectors::new(&m, m.ty.longest_word()).unwrap();
        assert_eq!(rv.operator(0, RootVectorKind::E).unwrap(), m.e[rv.word.0[0]]);
        let mut flat = Vec::new();
        for r in 0..rv.word.len() {
            for kind in [RootVectorKind::E, RootVectorKind::F] {
                let x = rv.operator(r, kind).unwrap();
                assert!(rv.has_root_weight(r, kind, &x));
                if kind == RootVectorKind::E {
                    flat.push(SparseVec::from_pairs(x.triplets().map(|(a, b, v)| (a * m.dim() + b, v.clone()))));
                }
            }
        }
        assert_eq!(rank(&flat), rv.word.len());
    }

    #[test]
    fn a2_braid_relation_up_to_scalar() {
        let m = module("A2", &[1, 1]);
        let t1 = braid_operator(&m, 0).unwrap().theta;
        let t2 = braid_operator(&m, 1).unwrap().theta;
        let lhs = normalize_first_entry(&t1.mul(&t2).mul(&t1));
        let rhs = normalize_first_entry(&t2.mul(&t1).mul(&t2));
        assert_eq!(lhs, rhs);
    }
}
