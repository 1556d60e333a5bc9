//! The braiding `R_{V,W}: V ⊗ W -> W ⊗ V` of type-1 modules.
//!
//! `R(v ⊗ w) = q^{(wt v, wt w)} w ⊗ v` plus terms `w' ⊗ v'` with `wt w'`
//! strictly below `wt w` and `wt v'` strictly above `wt v`. On
//! `e_hw ⊗ f` only the leading term survives, and intertwining with
//! `Delta(F_i)` determines the rest from the F-word basis of `V`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::{invert_dense, SparseMatrix, SparseVec};
use crate::repr::{matrix_json, solve_intertwiners, tensor, Gen, ModuleData};
use crate::scalars::{Field, Rational};

/// `R_{V,W}` as a matrix from the basis `e_a ⊗ f_b` (index `a dim W + b`) of
/// `V ⊗ W` to the basis `f_k ⊗ e_l` (index `k dim V + l`) of `W ⊗ V`.
#[derive(Clone, Debug)]
pub struct Braiding<F: Field> {
    pub v: ModuleData<F>,
    pub w: ModuleData<F>,
    pub matrix: SparseMatrix<F>,
}

/// `q^{(mu, nu)}`.
fn q_form<F: Field>(m: &ModuleData<F>, g: &[Vec<Rational>], mu: &Weight, nu: &Weight) -> F {
    let mut acc = Rational::from_integer(0.into());
    for i in 0..m.rank() {
        for j in 0..m.rank() {
            acc += g[i][j].clone() * Rational::from_integer((mu.0[i] * nu.0[j]).into());
        }
    }
    let e = acc * Rational::from_integer(m.params.l.into());
    assert!(e.is_integer());
    let e: i64 = e.to_integer().try_into().expect("small exponent");
    F::s_pow(&m.params.point, e)
}

/// Compute `R_{V,W}` by recursion over the F-word basis of the irreducible `v`.
pub fn braiding<F: Field>(v: &ModuleData<F>, w: &ModuleData<F>) -> Result<Braiding<F>> {
    let parents = v
        .parents
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the first braiding factor must be irreducible".into()))?;
    if v.ty != w.ty {
        return Err(Error::InvalidInput("braiding of modules of different types".into()));
    }
    let (dv, dw) = (v.dim(), w.dim());
    let wv = tensor(w, v)?;
    let g = v.ty.weight_form();
    let lam = &v.weights[0];
    let mut cols: Vec<SparseVec<F>> = vec![SparseVec::new(); dv * dw];
    for b in 0..dw {
        cols[b] = SparseVec::single(b * dv, q_form(v, &g, lam, &w.weights[b]));
    }
    for (a, p) in parents.iter().enumerate().skip(1) {
        let (i, a0) = p.expect("parent");
        let c = v.params.q_pow(-v.ty.alpha_pair(i, &v.weights[a0]));
        for b in 0..dw {
            let mut x = wv.f[i].apply(&cols[a0 * dw + b]);
            for (b2, y) in w.f[i].col(b).iter() {
                x = x.axpy(&-(c.clone() * y), &cols[a0 * dw + b2]);
            }
            cols[a * dw + b] = x;
        }
    }
    Ok(Braiding {
        v: v.clone(),
        w: w.clone(),
        matrix: SparseMatrix::from_columns(dv * dw, cols),
    })
}

impl<F: Field> Braiding<F> {
    fn dims(&self) -> (usize, usize) {
        (self.v.dim(), self.w.dim())
    }

    /// `(R)^{kl}_{ij}`: coefficient of `f_k ⊗ e_l` in `R(e_i ⊗ f_j)`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize, l: usize) -> F {
        let (dv, dw) = self.dims();
        self.matrix.get(k * dv + l, i * dw + j)
    }

    /// `R rho_{V⊗W}(x) = rho_{W⊗V}(x) R` for all generators.
    pub fn check_intertwining(&self) -> Result<()> {
        let vw = tensor(&self.v, &self.w)?;
        let wv = tensor(&self.w, &self.v)?;
        for g in Gen::all(self.v.rank()) {
            if self.matrix.mul(&vw.gen(g)) != wv.gen(g).mul(&self.matrix) {
                return Err(Error::Verification(format!("braiding does not intertwine {g:?}")));
            }
        }
        Ok(())
    }

    /// The triangular shape on both slots, with the exact leading term.
    pub fn check_triangularity(&self) -> Result<()> {
        let (dv, dw) = self.dims();
        let g = self.v.ty.weight_form();
        let shape = TriangularShape::new(&self.v, &self.w);
        for (r, c, x) in self.matrix.triplets() {
            let (i, j) = (c / dw, c % dw);
            let (k, l) = (r / dv, r % dv);
            if (k, l) == (j, i) {
                let lead = q_form(&self.v, &g, &self.v.weights[i], &self.w.weights[j]);
                if *x != lead {
                    return Err(Error::Verification(format!("wrong leading coefficient at ({i},{j})")));
                }
            } else if !shape.allowed(i, j, k, l) {
                return Err(Error::Verification(format!(
                    "term f_{k} ⊗ e_{l} in R(e_{i} ⊗ f_{j}) violates triangularity"
                )));
            }
        }
        for i in 0..dv {
            for j in 0..dw {
                if self.coefficient(i, j, j, i).is_zero() {
                    return Err(Error::Verification(format!("missing leading term at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// `R(v_hw ⊗ w_hw) = q^{(lambda, mu)} w_hw ⊗ v_hw`.
    pub fn check_highest_term(&self) -> bool {
        let g = self.v.ty.weight_form();
        let expect = SparseVec::single(0, q_form(&self.v, &g, &self.v.weights[0], &self.w.weights[0]));
        *self.matrix.col(0) == expect
    }

    /// Dimension of the space of intertwiners with the triangular support.
    /// A braiding is characterized by its shape only if this is 1; the
    /// normalized solution is returned alongside.
    pub fn solver_solutions(&self) -> Result<(usize, Option<SparseMatrix<F>>)> {
        let (dv, dw) = self.dims();
        let vw = tensor(&self.v, &self.w)?;
        let wv = tensor(&self.w, &self.v)?;
        let shape = TriangularShape::new(&self.v, &self.w);
        let pairs: Vec<_> = Gen::all(self.v.rank())
            .into_iter()
            .map(|g| (vw.gen(g), wv.gen(g)))
            .collect();
        let sols = solve_intertwiners(dv * dw, dv * dw, &pairs, |r, c| {
            let (i, j) = (c / dw, c % dw);
            let (k, l) = (r / dv, r % dv);
            (k, l) == (j, i) || shape.allowed(i, j, k, l)
        });
        let n = sols.len();
        let norm = (n == 1).then(|| {
            let g = self.v.ty.weight_form();
            let lead = q_form(&self.v, &g, &self.v.weights[0], &self.w.weights[0]);
            let x = sols[0].get(0, 0);
            sols[0].scale(&lead.div(&x))
        });
        Ok((n, norm))
    }

    /// Agreement of the recursion with the unique normalized solver output.
    pub fn check_solver_uniqueness(&self) -> Result<()> {
        match self.solver_solutions()? {
            (1, Some(m)) if m == self.matrix => Ok(()),
            (1, _) => Err(Error::Verification("solver and recursion disagree".into())),
            (n, _) => Err(Error::Verification(format!("triangular intertwiners span dimension {n}"))),
        }
    }

    /// `R^{-1}: W ⊗ V -> V ⊗ W`, inverted block by block in weight.
    pub fn inverse(&self) -> Result<SparseMatrix<F>> {
        let (dv, dw) = self.dims();
        let mut src: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        let mut dst: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for a in 0..dv {
            for b in 0..dw {
                let wt = self.v.weights[a].add(&self.w.weights[b]);
                src.entry(wt.clone()).or_default().push(a * dw + b);
                dst.entry(wt).or_default().push(b * dv + a);
            }
        }
        let mut trip = Vec::new();
        for (wt, cs) in &src {
            let rs = &dst[wt];
            let sub = self.matrix.submatrix(rs, cs).to_dense();
            let inv = invert_dense(&sub).ok_or_else(|| Error::Construction("braiding is singular".into()))?;
            for (a, &c) in cs.iter().enumerate() {
                for (b, &r) in rs.iter().enumerate() {
                    if !inv[a][b].is_zero() {
                        trip.push((c, r, inv[a][b].clone()));
                    }
                }
            }
        }
        Ok(SparseMatrix::from_triplets(dv * dw, dv * dw, trip))
    }

    pub fn to_json(&self) -> Value {
        let (dv, dw) = self.dims();
        let coeffs: Vec<Value> = self
            .matrix
            .triplets()
            .map(|(r, c, x)| json!([c / dw, c % dw, r / dv, r % dv, x.to_wire()]))
            .collect();
        json!({
            "type": self.v.ty.name(),
            "v": self.v.highest.as_ref().map(|w| w.0.clone()),
            "w": self.w.highest.as_ref().map(|w| w.0.clone()),
            "index_convention": "[i, j, k, l, R^{kl}_{ij}] with R(e_i ⊗ f_j) = sum R^{kl}_{ij} f_k ⊗ e_l",
            "triangularity": "lower on the W slot and higher on the V slot, strictly",
            "coefficients": coeffs,
            "matrix": matrix_json(&self.matrix),
        })
    }
}

/// Supports allowed below the leading term.
struct TriangularShape {
    v_coords: Vec<Vec<Rational>>,
    w_coords: Vec<Vec<Rational>>,
}

impl TriangularShape {
    fn new<F: Field>(v: &ModuleData<F>, w: &ModuleData<F>) -> Self {
        TriangularShape {
            v_coords: v.weights.iter().map(|x| v.ty.root_coordinates(x)).collect(),
            w_coords: w.weights.iter().map(|x| v.ty.root_coordinates(x)).collect(),
        }
    }

    /// `a < b` strictly in the dominance order.
    fn below(a: &[Rational], b: &[Rational]) -> bool {
        let mut nonzero = false;
        for (x, y) in a.iter().zip(b) {
            let d = y - x;
            if !d.is_integer() || d < Rational::from_integer(0.into()) {
                return false;
            }
            nonzero |= d != Rational::from_integer(0.into());
        }
        nonzero
    }

    /// Term `f_k ⊗ e_l` in `R(e_i ⊗ f_j)`, other than the leading one.
    fn allowed(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        Self::below(&self.w_coords[k], &self.w_coords[j]) && Self::below(&self.v_coords[i], &self.v_coords[l])
    }
}

/// `(R ⊗ 1)(1 ⊗ R)(R ⊗ 1) = (1 ⊗ R)(R ⊗ 1)(1 ⊗ R)` on `V ⊗ V ⊗ V`.
pub fn ybe_check<F: Field>(r: &Braiding<F>) -> bool {
    if r.v.dim() != r.w.dim() || r.v.weights != r.w.weights {
        return false;
    }
    let id = SparseMatrix::identity(r.v.dim());
    let r12 = r.matrix.kron(&id);
    let r23 = id.kron(&r.matrix);
    r12.mul(&r23).mul(&r12) == r23.mul(&r12).mul(&r23)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::LieType;
    use crate::repr::{build_irreducible, dual_module, Guard};
    use crate::scalars::{QParams, Scalar};

    fn module(ty: &str, w: &[i64]) -> ModuleData<Scalar> {
        let t: LieType = ty.parse().unwrap();
        build_irreducible(t, &Weight(w.to_vec()), &QParams::symbolic(t.l_denominator()), &Guard::default()).unwrap()
    }

    #[test]
    fn sl2_fundamental_braiding() {
        let v = module("A1", &[1]);
        let r = braiding(&v, &v).unwrap();
        let s = |e| Scalar::s_pow(&(), e);
        // L = 2, so q^{1/2} = s and q = s^2.
        assert_eq!(r.coefficient(0, 0, 0, 0), s(1));
        assert_eq!(r.coefficient(1, 1, 1, 1), s(1));
        assert_eq!(r.coefficient(0, 1, 1, 0), s(-1));
        assert_eq!(r.coefficient(1, 0, 0, 1), s(-1));
        // R(e_2 ⊗ f_1) = q^{-1/2} (f_1 ⊗ e_2 + (q - q^{-1}) f_2 ⊗ e_1)
        assert_eq!(r.coefficient(1, 0, 1, 0), s(-1) * (s(2) - s(-2)));
        assert!(r.coefficient(0, 1, 0, 1).is_zero());
        r.check_intertwining().unwrap();
        r.check_triangularity().unwrap();
        r.check_solver_uniqueness().unwrap();
        assert!(ybe_check(&r));
    }

    #[test]
    fn trivial_factor_is_the_flip() {
        let v = module("A2", &[1, 0]);
        let z = module("A2", &[0, 0]);
        let r = braiding(&v, &z).unwrap();
        assert_eq!(r.matrix, SparseMatrix::identity(3));
        assert!(ybe_check(&braiding(&z, &z).unwrap()));
    }

    #[test]
    fn rank_two_braidings() {
        for (ty, w) in [("A2", vec![1, 0]), ("B2", vec![1, 0]), ("C2", vec![0, 1])] {
            let v = module(ty, &w);
            let r = braiding(&v, &v).unwrap();
            r.check_intertwining().unwrap();
            r.check_triangularity().unwrap();
            assert!(r.check_highest_term());
            r.check_solver_uniqueness().unwrap();
            assert!(ybe_check(&r), "{ty}");
            let inv = r.inverse().unwrap();
            assert_eq!(inv.mul(&r.matrix), SparseMatrix::identity(v.dim() * v.dim()));
        }
    }

    #[test]
    fn braiding_with_a_dual() {
        let v = module("A2", &[1, 0]);
        let d = dual_module(&v);
        let r = braiding(&v, &d).unwrap();
        r.check_intertwining().unwrap();
        r.check_triangularity().unwrap();
    }
}
