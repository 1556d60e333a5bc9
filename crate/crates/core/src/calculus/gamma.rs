//! The quotient route: a presentation of the `(0,1)` calculus by generators
//! `z_i`, `zbar_j`, their relations and the forms `dbar zbar_j`, truncated at
//! a word length, compared against the tangent-space kernels.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cartan::{FlagSpec, Weight};
use crate::coordring::{opposite_relations, q_varpi_square, quadratic_relations};
use crate::error::{Error, Result};
use crate::linalg::{kernel, rank, SparseMatrix, SparseVec};
use crate::peterweyl::{same_span, span_rank, CoordAlgebra, Generators, PWElement, PWIndexer};
use crate::repr::{dual_module, tensor, Gen};
use crate::rmatrix::braiding;
use crate::scalars::Field;

use super::{differential, TangentSpace};

/// The bracket `R^2 + q^{(w,w)}(q^{(a,a)} - 1) R + q^{2(w,w) - (a,a)}` on
/// `V ⊗ V`, for `w = varpi_x`, `a = alpha_x` and `R = R_{V,V}`.
pub fn gamma_bracket<F: Field>(o: &CoordAlgebra<F>, flag: &FlagSpec, lambda: &Weight) -> Result<SparseMatrix<F>> {
    let v = o.module(lambda)?;
    let r = braiding(&v, &v)?.matrix;
    let p = &o.reg.params;
    let qw = q_varpi_square(o, flag);
    let dx = o.ty().root_halflengths()[flag.x];
    let qa = p.q_pow(2 * dx);
    let c1 = qw.clone() * (qa - F::one());
    let c0 = qw.clone() * &qw * &p.q_pow(-2 * dx);
    let n = v.dim() * v.dim();
    Ok(r.mul(&r).add(&r.scale(&c1)).add(&SparseMatrix::identity(n).scale(&c0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaEigen {
    pub summand: Vec<i64>,
    pub r_eigenvalue: String,
    pub bracket_value: String,
    pub annihilated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaOperatorReport {
    pub flag: String,
    pub size: usize,
    pub rank: usize,
    pub commutes_with_action: bool,
    pub eigen: Vec<GammaEigen>,
}

/// Assemble the bracket operator on `V_{varpi_x} ⊗ V_{varpi_x}`, its rank,
/// equivariance, and its value on each Clebsch–Gordan summand.
pub fn gamma_relation_operator<F: Field>(o: &CoordAlgebra<F>, flag: &FlagSpec) -> Result<GammaOperatorReport> {
    let w = flag.varpi();
    let v = o.module(&w)?;
    let op = gamma_bracket(o, flag, &w)?;
    let vv = tensor(&v, &v)?;
    let commutes = Gen::all(v.rank())
        .into_iter()
        .all(|g| op.mul(&vv.gen(g)) == vv.gen(g).mul(&op));
    let r = braiding(&v, &v)?.matrix;
    let cg = o.cache.get(&o.reg, &w, &w)?;
    let mut eigen = Vec::new();
    for s in &cg.summands {
        let u = s.embed.col(0).clone();
        let (p, x) = u.leading().map(|(p, x)| (p, x.clone())).expect("nonzero hw vector");
        let ru = r.apply(&u);
        let lam = ru.get(p).cloned().unwrap_or_else(F::zero).div(&x);
        if ru != u.scale(&lam) {
            return Err(Error::Verification("braiding is not scalar on a summand".into()));
        }
        let pu = op.apply(&u);
        let val = pu.get(p).cloned().unwrap_or_else(F::zero).div(&x);
        eigen.push(GammaEigen {
            summand: s.highest.0.clone(),
            r_eigenvalue: lam.to_wire(),
            bracket_value: val.to_wire(),
            annihilated: val.is_zero(),
        });
    }
    Ok(GammaOperatorReport {
        flag: flag.to_string(),
        size: op.nrows(),
        rank: rank(op.columns()),
        commutes_with_action: commutes,
        eigen,
    })
}

type Word = Vec<usize>;

/// Free algebra words over `z_0..z_{n-1}` (letters `0..n`), `zbar` (letters
/// `n..2n`) and the form symbols `dbar zbar_j` (letters `2n..3n`).
struct Alphabet {
    n: usize,
}

impl Alphabet {
    fn degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&c| if c < self.n { 1 } else { -1 }).sum()
    }

    fn words(&self, max: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut cur = vec![Vec::new()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &cur {
                for c in 0..2 * self.n {
                    let mut x = w.clone();
                    x.push(c);
                    next.push(x);
                }
            }
            out.extend(next.iter().cloned());
            cur = next;
        }
        out
    }

    /// Words with exactly one form letter, of total length `<= max`.
    fn forms(&self, max: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for w in self.words(max.saturating_sub(1)) {
            for p in 0..=w.len() {
                for j in 0..self.n {
                    let mut x = w.clone();
                    x.insert(p, 2 * self.n + j);
                    out.push(x);
                }
            }
        }
        out
    }

    /// Leibniz: `dbar z_i = 0`, `dbar zbar_j = d_j`.
    fn dbar_word(&self, w: &[usize]) -> Vec<Word> {
        (0..w.len())
            .filter(|&p| w[p] >= self.n && w[p] < 2 * self.n)
            .map(|p| {
                let mut x = w.to_vec();
                x[p] += self.n;
                x
            })
            .collect()
    }
}

type Poly<F> = BTreeMap<Word, F>;

fn poly_add<F: Field>(acc: &mut Poly<F>, w: Word, a: &F) {
    crate::linalg::accumulate_key(acc, w, a);
}

fn dbar_poly<F: Field>(al: &Alphabet, p: &Poly<F>) -> Poly<F> {
    let mut out = BTreeMap::new();
    for (w, a) in p {
        for x in al.dbar_word(w) {
            poly_add(&mut out, x, a);
        }
    }
    out
}

fn sandwich<F: Field>(u: &[usize], p: &Poly<F>, w: &[usize]) -> Poly<F> {
    p.iter()
        .map(|(m, a)| {
            let mut x = u.to_vec();
            x.extend_from_slice(m);
            x.extend_from_slice(w);
            (x, a.clone())
        })
        .collect()
}

fn max_len<F: Field>(p: &Poly<F>) -> usize {
    p.keys().map(|w| w.len()).max().unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaSlice {
    pub k: i64,
    pub free_dim: usize,
    pub ideal_dim: usize,
    /// `dim` of the degree-`k` part of the truncated quotient algebra.
    pub quotient_dim: usize,
    /// Rank of the realization of the slice in `O_q(G)`.
    pub realized_dim: usize,
    /// `ker dbar` on the quotient, modulo the ideal.
    pub quotient_kernel_dim: usize,
    /// Rank of its image in `O_q(G)`.
    pub quotient_kernel_image_dim: usize,
    /// Tangent-space kernel on the realized slice.
    pub tangent_kernel_dim: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaCrosscheck {
    pub flag: String,
    pub truncation: usize,
    pub bracket_relations: bool,
    pub relations_realize_to_zero: bool,
    pub slices: Vec<GammaSlice>,
    pub pass: bool,
}

/// Compare `ker dbar` computed in the truncated presentation with the
/// tangent-route kernel on the same realized slices.
pub fn gamma_crosscheck<F: Field>(
    o: &CoordAlgebra<F>,
    ts: &TangentSpace<F>,
    g: &Generators<F>,
    truncation: usize,
    slices: &[i64],
    bracket_relations: bool,
) -> Result<GammaCrosscheck> {
    let flag = g.flag;
    let n = g.z.len();
    let al = Alphabet { n };
    let q = q_varpi_square(o, &flag);

    // Algebra relations.
    let mut rels: Vec<Poly<F>> = Vec::new();
    for r in quadratic_relations(o, &flag)?.relations {
        rels.push(r.iter().map(|(ij, a)| (vec![ij / n, ij % n], a.clone())).collect());
    }
    for r in opposite_relations(o, g)?.relations {
        rels.push(r.iter().map(|(ij, a)| (vec![n + ij / n, n + ij % n], a.clone())).collect());
    }
    let v = o.module(&flag.varpi())?;
    let rvd = braiding(&v, &dual_module(&v))?;
    for i in 0..n {
        for j in 0..n {
            let mut p: Poly<F> = BTreeMap::new();
            poly_add(&mut p, vec![n + i, j], &F::one());
            for k in 0..n {
                for l in 0..n {
                    let c = rvd.coefficient(k, l, i, j);
                    if !c.is_zero() {
                        poly_add(&mut p, vec![k, n + l], &-(c * &q));
                    }
                }
            }
            rels.push(p);
        }
    }
    let mut c_rel: Poly<F> = (0..n).map(|i| (vec![n + i, i], F::one())).collect();
    poly_add(&mut c_rel, Vec::new(), &-F::one());
    rels.push(c_rel);

    // Optional bracket relations among zbar_k dbar zbar_l, from the bracket on
    // the module carrying the zbar.
    let mut form_gens: Vec<Poly<F>> = Vec::new();
    if bracket_relations {
        let wd = o.ty().dual_weight(&flag.varpi());
        let p = gamma_bracket(o, &flag, &wd)?;
        for row in p.transpose().columns() {
            let f: Poly<F> = row.iter().map(|(kl, a)| (vec![n + kl / n, 2 * n + kl % n], a.clone())).collect();
            if !f.is_empty() {
                form_gens.push(f);
            }
        }
    }

    let t = truncation;
    let plain = al.words(t);
    let forms = al.forms(t);
    let mut ideal: Vec<Poly<F>> = Vec::new();
    let mut nrel: Vec<Poly<F>> = Vec::new();
    for r in &rels {
        let lr = max_len(r);
        for u in plain.iter().filter(|u| u.len() + lr <= t) {
            for w in plain.iter().filter(|w| u.len() + lr + w.len() <= t) {
                let x = sandwich(u, r, w);
                nrel.push(dbar_poly(&al, &x));
                ideal.push(x);
            }
            for w in forms.iter().filter(|w| u.len() + lr + w.len() <= t) {
                nrel.push(sandwich(u, r, w));
            }
        }
        for u in forms.iter().filter(|u| u.len() + lr <= t) {
            for w in plain.iter().filter(|w| u.len() + lr + w.len() <= t) {
                nrel.push(sandwich(u, r, w));
            }
        }
    }
    for f in &form_gens {
        let lf = max_len(f);
        for u in plain.iter().filter(|u| u.len() + lf <= t) {
            for w in plain.iter().filter(|w| u.len() + lf + w.len() <= t) {
                nrel.push(sandwich(u, f, w));
            }
        }
    }

    // Realization of plain words.
    let mut real: HashMap<Word, PWElement<F>> = HashMap::new();
    real.insert(Vec::new(), o.one());
    for w in &plain {
        if w.is_empty() {
            continue;
        }
        let prefix = &w[..w.len() - 1];
        let c = w[w.len() - 1];
        let x = if c < n { &g.z[c] } else { &g.zbar[c - n] };
        let y = o.multiply(&real[prefix], x)?;
        real.insert(w.clone(), y);
    }
    let realize = |p: &Poly<F>| -> PWElement<F> {
        let mut acc = PWElement::zero();
        for (w, a) in p {
            acc = acc.axpy(a, &real[w]);
        }
        acc
    };
    let relations_realize_to_zero = ideal.iter().all(|x| realize(x).is_zero());

    let mut out = Vec::new();
    for &k in slices {
        let words: Vec<&Word> = plain.iter().filter(|w| al.degree(w) == k).collect();
        let widx: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let ideal_k: Vec<SparseVec<F>> = ideal
            .iter()
            .filter(|x| x.keys().next().is_some_and(|w| al.degree(w) == k))
            .map(|x| SparseVec::from_pairs(x.iter().map(|(w, a)| (widx[w], a.clone()))))
            .collect();
        // Columns: dbar of each word, then the form relations of degree k.
        let mut fidx: BTreeMap<Word, usize> = BTreeMap::new();
        let mut fvec = |p: &Poly<F>| -> SparseVec<F> {
            let pairs: Vec<(usize, F)> = p
                .iter()
                .map(|(w, a)| {
                    let m = fidx.len();
                    (*fidx.entry(w.clone()).or_insert(m), a.clone())
                })
                .collect();
            SparseVec::from_pairs(pairs)
        };
        let mut cols: Vec<SparseVec<F>> = Vec::new();
        for w in &words {
            let d = dbar_poly(&al, &BTreeMap::from([((*w).clone(), F::one())]));
            cols.push(fvec(&d));
        }
        for x in nrel.iter().filter(|x| x.keys().next().is_some_and(|w| al.degree(w) == k)) {
            cols.push(fvec(x));
        }
        let nw = words.len();
        let kvecs: Vec<SparseVec<F>> = kernel(&cols)
            .into_iter()
            .map(|c| SparseVec::from_pairs(c.iter().filter(|(i, _)| *i < nw).map(|(i, a)| (i, a.clone()))))
            .filter(|c| !c.is_zero())
            .collect();
        let ideal_rank = rank(&ideal_k);
        let mut both = ideal_k.clone();
        both.extend(kvecs.iter().cloned());
        let quotient_kernel_dim = rank(&both) - ideal_rank;
        let to_elem = |c: &SparseVec<F>| -> PWElement<F> {
            let mut acc = PWElement::zero();
            for (i, a) in c.iter() {
                acc = acc.axpy(a, &real[words[i]]);
            }
            acc
        };
        let qimg: Vec<PWElement<F>> = kvecs.iter().map(to_elem).collect();
        // Tangent route on the realized slice.
        let rw: Vec<PWElement<F>> = words.iter().map(|w| real[*w].clone()).collect();
        let mut ixs: Vec<PWIndexer> = (0..ts.dim()).map(|_| PWIndexer::new()).collect();
        let dcols: Vec<SparseVec<F>> = rw
            .iter()
            .map(|x| -> Result<SparseVec<F>> {
                let f = differential(o, ts, x)?;
                let mut pairs = Vec::new();
                for (tdir, c) in f.components.iter().enumerate() {
                    let v = ixs[tdir].vector(c);
                    pairs.extend(v.iter().map(|(i, a)| (i * ts.dim() + tdir, a.clone())));
                }
                Ok(SparseVec::from_pairs(pairs))
            })
            .collect::<Result<_>>()?;
        let timg: Vec<PWElement<F>> = kernel(&dcols).iter().map(to_elem).filter(|x| !x.is_zero()).collect();
        let quotient_dim = nw - ideal_rank;
        let realized_dim = span_rank(&rw);
        let qi = span_rank(&qimg);
        let ti = span_rank(&timg);
        let agree = same_span(&qimg, &timg) && qi == quotient_kernel_dim && quotient_dim == realized_dim;
        out.push(GammaSlice {
            k,
            free_dim: nw,
            ideal_dim: ideal_rank,
            quotient_dim,
            realized_dim,
            quotient_kernel_dim,
            quotient_kernel_image_dim: qi,
            tangent_kernel_dim: ti,
            agree,
        });
    }
    let pass = relations_realize_to_zero && out.iter().all(|s| s.agree);
    Ok(GammaCrosscheck {
        flag: flag.to_string(),
        truncation,
        bracket_relations,
        relations_realize_to_zero,
        slices: out,
        pass,
    })
}
