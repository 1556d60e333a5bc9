//! Theorem-level reports composed from the other modules: Borel–Weil,
//! Liouville, the coordinate ring, spherical weights and highest-weight
//! elements of the line modules.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::Value;

use crate::calculus::{h0, Chirality, TangentSpace};
use crate::cartan::{FlagSpec, Weight, WeylWord};
use crate::coordring::monomial_span_basis;
use crate::error::Result;
use crate::linalg::{kernel, IndependentSet, Insertion};
use crate::peterweyl::{
    in_span, same_span, CoordAlgebra, GradedComponent, Generators, PWElement, PWIndexer, Subalgebra,
};
use crate::repr::{braid_operator, tensor, Gen, Registry, RootVectorKind, RootVectors};
use crate::rmatrix::{braiding, ybe_check};
use crate::scalars::Field;

/// Truncation depth of the default verification matrix, large enough that
/// the predicted modules fit strictly inside the window.
pub fn default_depth(flag: &FlagSpec) -> i64 {
    match flag.to_string().as_str() {
        "A1/1" => 5,
        "A2/1" | "A2/2" => 4,
        _ => 3,
    }
}

/// Span of the `act_f`-orbit of `x` under the generators `E_i`, `F_i`.
pub fn act_f_orbit<F: Field>(o: &CoordAlgebra<F>, x: &PWElement<F>) -> Result<Vec<PWElement<F>>> {
    let rank = o.ty().rank;
    let mut ix = PWIndexer::new();
    let mut set = IndependentSet::new(false);
    let mut out = Vec::new();
    let mut frontier = Vec::new();
    if !x.is_zero() {
        set.insert(&ix.vector(x));
        out.push(x.clone());
        frontier.push(x.clone());
    }
    while let Some(y) = frontier.pop() {
        for i in 0..rank {
            for g in [Gen::E(i), Gen::F(i)] {
                let z = o.act_f(&[g], &y)?;
                if z.is_zero() {
                    continue;
                }
                if let Insertion::Added(_) = set.insert(&ix.vector(&z)) {
                    out.push(z.clone());
                    frontier.push(z);
                }
            }
        }
    }
    Ok(out)
}

/// A highest-weight vector for `act_f` in a truncated line module.
#[derive(Clone, Debug)]
pub struct HighestVector<F: Field> {
    pub block: Weight,
    /// `act_f` weight, read off the rows: a row of weight `mu` carries `-mu`.
    pub weight: Weight,
    pub element: PWElement<F>,
}

/// The `act_f`-highest-weight vectors of a component, block by block. Rows
/// carry the action, so the row kernel is computed once per block and paired
/// with every column vector.
pub fn act_f_highest<F: Field>(o: &CoordAlgebra<F>, comp: &GradedComponent<F>) -> Result<Vec<HighestVector<F>>> {
    let rank = o.ty().rank;
    let mut out = Vec::new();
    for b in &comp.blocks {
        let Some(w0) = b.vectors.first() else { continue };
        let m = o.module(&b.lambda)?;
        let rows: Vec<PWElement<F>> = (0..b.dim).map(|r| PWElement::row_vector(&b.lambda, r, w0)).collect();
        let mut ix = PWIndexer::new();
        let mut width = 0usize;
        let mut imgs: Vec<Vec<_>> = Vec::new();
        for e in &rows {
            let mut per = Vec::new();
            for i in 0..rank {
                per.push(ix.vector(&o.act_f(&[Gen::E(i)], e)?));
            }
            imgs.push(per);
        }
        for per in &imgs {
            for v in per {
                width = width.max(v.indices().max().map_or(0, |x| x + 1));
            }
        }
        let cols: Vec<_> = imgs
            .iter()
            .map(|per| {
                let pairs = per
                    .iter()
                    .enumerate()
                    .flat_map(|(i, v)| v.iter().map(move |(p, a)| (i * width + p, a.clone())).collect::<Vec<_>>());
                crate::linalg::SparseVec::from_pairs(pairs)
            })
            .collect();
        for a in kernel(&cols) {
            let wts: BTreeSet<&Weight> = a.indices().map(|r| &m.weights[r]).collect();
            if wts.len() != 1 {
                return Err(crate::Error::Verification(format!(
                    "inhomogeneous highest-weight vector in block {:?}",
                    b.lambda.0
                )));
            }
            let weight = wts.into_iter().next().expect("nonempty").neg();
            for w in &b.vectors {
                let mut e = PWElement::zero();
                for (r, x) in a.iter() {
                    e = e.axpy(x, &PWElement::row_vector(&b.lambda, r, w));
                }
                out.push(HighestVector {
                    block: b.lambda.clone(),
                    weight: weight.clone(),
                    element: e,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelWeilRow {
    pub k: i64,
    pub dim: usize,
    pub expected: u64,
    pub blocks: Vec<(Vec<i64>, usize)>,
    pub highest_weights: Vec<Vec<i64>>,
    /// `z^k` (or `zbar^{-k}` on the opposite side) lies in the kernel.
    pub contains_power: Option<bool>,
    /// The kernel is the `act_f`-orbit span of that power.
    pub orbit_equal: Option<bool>,
    pub pass: bool,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelWeilReport {
    pub flag: String,
    pub chirality: Chirality,
    pub depth: i64,
    pub word: Vec<usize>,
    pub l: u32,
    pub rows: Vec<BorelWeilRow>,
    pub pass: bool,
}

/// `h0(k)` for each `k`: its dimension against `weyl_dim(|k| varpi_x)` on the
/// nonvanishing side and 0 on the other, its generation by a power of the
/// generators, and its `act_f`-highest weights.
pub fn borel_weil_report<F: Field>(
    o: &CoordAlgebra<F>,
    ts: &TangentSpace<F>,
    g: &Generators<F>,
    ks: &[i64],
    depth: i64,
) -> Result<BorelWeilReport> {
    let flag = ts.flag;
    let mut rows = Vec::new();
    for &k in ks {
        let comp = h0(o, ts, k, depth)?;
        let positive_side = match ts.chirality {
            Chirality::Antiholomorphic => k >= 0,
            Chirality::Holomorphic => k <= 0,
        };
        let expected = if positive_side {
            flag.ty.weyl_dim(&flag.varpi().scale(k.abs()))?
        } else {
            0
        };
        let hws = act_f_highest(o, &comp)?;
        let mut highest_weights: Vec<Vec<i64>> = hws.iter().map(|h| h.weight.0.clone()).collect();
        highest_weights.sort();
        let (contains_power, orbit_equal, mut witness) = if positive_side {
            let base = if k >= 0 { &g.z[0] } else { &g.zbar[0] };
            let p = o.power(base, k.unsigned_abs() as u32)?;
            let orbit = act_f_orbit(o, &p)?;
            let els = comp.elements();
            let eq = same_span(&orbit, &els);
            let w = if eq {
                None
            } else {
                els.iter()
                    .find(|e| !in_span(&orbit, e))
                    .or_else(|| orbit.iter().find(|e| !comp.contains(e)))
                    .map(|e| e.to_json())
            };
            (Some(comp.contains(&p)), Some(eq), w)
        } else {
            (None, None, None)
        };
        let dim = comp.dim();
        if witness.is_none() && dim as u64 != expected {
            witness = comp.elements().first().map(|e| e.to_json());
        }
        let irreducible = if expected > 0 { highest_weights.len() == 1 } else { highest_weights.is_empty() };
        let pass = dim as u64 == expected
            && irreducible
            && contains_power.unwrap_or(true)
            && orbit_equal.unwrap_or(true);
        rows.push(BorelWeilRow {
            k,
            dim,
            expected,
            blocks: comp.multiplicities().into_iter().map(|(w, m)| (w.0, m)).collect(),
            highest_weights,
            contains_power,
            orbit_equal,
            pass,
            witness,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(BorelWeilReport {
        flag: flag.to_string(),
        chirality: ts.chirality,
        depth,
        word: ts.word.labels(),
        l: o.reg.params.l,
        rows,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoordRingRow {
    pub d: usize,
    pub monomial_dim: usize,
    pub h0_dim: usize,
    pub expected: u64,
    pub monomials_holomorphic: bool,
    pub holomorphic_in_monomials: bool,
    pub pass: bool,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoordRingReport {
    pub flag: String,
    pub depth: i64,
    pub word: Vec<usize>,
    pub rows: Vec<CoordRingRow>,
    pub pass: bool,
}

/// Degree by degree, the span of the `z`-monomials against `h0(d)`, with both
/// inclusions tested separately.
pub fn coordinate_ring_equality<F: Field>(
    o: &CoordAlgebra<F>,
    ts: &TangentSpace<F>,
    g: &Generators<F>,
    dmax: usize,
    depth: i64,
) -> Result<CoordRingReport> {
    let flag = ts.flag;
    let mut rows = Vec::new();
    for d in 0..=dmax {
        let mons = monomial_span_basis(o, &g.z, d)?;
        let comp = h0(o, ts, d as i64, depth)?;
        let els = comp.elements();
        let bad_mon = mons.iter().find(|m| !comp.contains(m));
        let bad_h0 = els.iter().find(|e| !in_span(&mons, e));
        let expected = flag.ty.weyl_dim(&flag.varpi().scale(d as i64))?;
        let pass = bad_mon.is_none() && bad_h0.is_none() && mons.len() as u64 == expected;
        rows.push(CoordRingRow {
            d,
            monomial_dim: mons.len(),
            h0_dim: comp.dim(),
            expected,
            monomials_holomorphic: bad_mon.is_none(),
            holomorphic_in_monomials: bad_h0.is_none(),
            pass,
            witness: bad_mon.or(bad_h0).map(|e| e.to_json()),
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(CoordRingReport {
        flag: flag.to_string(),
        depth,
        word: ts.word.labels(),
        rows,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SphericalReport {
    pub flag: String,
    pub depth: i64,
    pub generators: Vec<Vec<i64>>,
    /// Highest weights with nonzero invariants, with their multiplicity.
    pub weights: Vec<(Vec<i64>, usize)>,
    /// Truncation of the monoid generated by `generators`.
    pub expected: Vec<Vec<i64>>,
    pub multiplicity_free: bool,
    pub monoid_equal: bool,
    pub offending: Vec<Vec<i64>>,
    pub pass: bool,
}

/// Elements of the monoid generated by `gens` with level at most `depth`.
pub fn monoid_truncation(gens: &[Weight], rank: usize, depth: i64) -> BTreeSet<Weight> {
    let mut out = BTreeSet::from([Weight::zero(rank)]);
    let mut frontier = vec![Weight::zero(rank)];
    while let Some(w) = frontier.pop() {
        for g in gens {
            let x = w.add(g);
            if x.level() <= depth && out.insert(x.clone()) {
                frontier.push(x);
            }
        }
    }
    out
}

/// `U_q(l_S)`-invariants in every `V_lambda` with `sum lambda_i <= depth`.
pub fn spherical_decomposition_check<F: Field>(
    o: &CoordAlgebra<F>,
    flag: &FlagSpec,
    depth: i64,
) -> Result<SphericalReport> {
    let lams = flag.ty.dominant_weights(depth);
    let found = o.exec.try_map(lams, |l| -> Result<(Weight, usize)> {
        let n = o.invariant_subspace(flag, &l, Subalgebra::Levi)?.len();
        Ok((l, n))
    })?;
    let weights: Vec<(Weight, usize)> = found.into_iter().filter(|(_, n)| *n > 0).collect();
    let gens = flag.spherical_weights();
    let expected = monoid_truncation(&gens, flag.ty.rank, depth);
    let got: BTreeSet<Weight> = weights.iter().map(|(w, _)| w.clone()).collect();
    let mut offending: Vec<Vec<i64>> = got.symmetric_difference(&expected).map(|w| w.0.clone()).collect();
    offending.extend(weights.iter().filter(|(_, n)| *n > 1).map(|(w, _)| w.0.clone()));
    offending.sort();
    offending.dedup();
    let multiplicity_free = weights.iter().all(|(_, n)| *n == 1);
    let monoid_equal = got == expected;
    Ok(SphericalReport {
        flag: flag.to_string(),
        depth,
        generators: gens.iter().map(|w| w.0.clone()).collect(),
        weights: weights.into_iter().map(|(w, n)| (w.0, n)).collect(),
        expected: expected.into_iter().map(|w| w.0).collect(),
        multiplicity_free,
        monoid_equal,
        offending,
        pass: multiplicity_free && monoid_equal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HighestWeightAudit {
    pub flag: String,
    pub k: i64,
    pub depth: i64,
    pub count: usize,
    /// `act_f` highest weights of the truncated `E_k`.
    pub weights: Vec<Vec<i64>>,
    /// `mu - k w_0(varpi_x)` over the highest weights `mu` of `E_0`, kept when
    /// the resulting block fits the truncation.
    pub shifted: Vec<Vec<i64>>,
    pub all_factor: bool,
    pub shift_law: bool,
    pub pass: bool,
    pub witness: Option<Value>,
}

/// Every `act_f`-highest-weight element of the truncated `E_k` is `b z^k` for
/// some highest-weight `b` of `E_0`, and the weights shift by `-k w_0(varpi_x)`.
pub fn highest_weight_audit<F: Field>(
    o: &CoordAlgebra<F>,
    flag: &FlagSpec,
    g: &Generators<F>,
    k: i64,
    depth: i64,
) -> Result<HighestWeightAudit> {
    let ty = flag.ty;
    let ek = o.graded_component(flag, k, depth)?;
    let e0 = o.graded_component(flag, 0, depth)?;
    let hk = act_f_highest(o, &ek)?;
    let h0v = act_f_highest(o, &e0)?;
    let z = highest_generator(o, g)?;
    let zk = o.power(z, k as u32)?;
    let products: Vec<PWElement<F>> = h0v
        .iter()
        .map(|h| o.multiply(&h.element, &zk))
        .collect::<Result<_>>()?;
    let bad = hk.iter().find(|h| !in_span(&products, &h.element));
    let shift = ty.w0_on_weight(&flag.varpi()).scale(k);
    let weights: BTreeSet<Weight> = hk.iter().map(|h| h.weight.clone()).collect();
    // The block carrying act_f highest weight `nu` is `-w_0 nu`.
    let shifted: BTreeSet<Weight> = h0v
        .iter()
        .map(|h| h.weight.sub(&shift))
        .filter(|nu| ty.w0_on_weight(nu).neg().level() <= depth)
        .collect();
    let all_factor = bad.is_none();
    let shift_law = weights == shifted;
    Ok(HighestWeightAudit {
        flag: flag.to_string(),
        k,
        depth,
        count: hk.len(),
        weights: weights.iter().map(|w| w.0.clone()).collect(),
        shifted: shifted.iter().map(|w| w.0.clone()).collect(),
        all_factor,
        shift_law,
        pass: all_factor && shift_law,
        witness: bad.map(|h| h.element.to_json()),
    })
}

/// The generator `z_i` killed by every `act_f(E_j)`.
pub fn highest_generator<'a, F: Field>(o: &CoordAlgebra<F>, g: &'a Generators<F>) -> Result<&'a PWElement<F>> {
    let rank = o.ty().rank;
    for z in &g.z {
        let mut top = true;
        for j in 0..rank {
            top &= o.act_f(&[Gen::E(j)], z)?.is_zero();
        }
        if top {
            return Ok(z);
        }
    }
    Err(crate::Error::Verification("no act_f-highest generator".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct WordCheckReport {
    pub flag: String,
    pub depth: i64,
    pub word: Vec<usize>,
    pub alternative: Vec<usize>,
    pub ks: Vec<i64>,
    pub pass: bool,
}

/// Kernels computed with the reduced word and with its reverse (also a
/// reduced word of `w_0`) coincide as subspaces.
pub fn word_check<F: Field>(o: &CoordAlgebra<F>, flag: &FlagSpec, ks: &[i64], depth: i64) -> Result<WordCheckReport> {
    let w = flag.ty.longest_word();
    let alt = WeylWord(w.0.iter().rev().copied().collect());
    let a = TangentSpace::new(*flag, Chirality::Antiholomorphic, Some(w.clone()))?;
    let b = TangentSpace::new(*flag, Chirality::Antiholomorphic, Some(alt.clone()))?;
    let mut pass = true;
    for &k in ks {
        let x = h0(o, &a, k, depth)?.elements();
        let y = h0(o, &b, k, depth)?.elements();
        pass &= same_span(&x, &y);
    }
    Ok(WordCheckReport {
        flag: flag.to_string(),
        depth,
        word: w.labels(),
        alternative: alt.labels(),
        ks: ks.to_vec(),
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    pub flag: String,
    pub pairs: Vec<(i64, i64)>,
    pub pass: bool,
}

/// `h0(k) h0(l) ⊆ h0(k + l)` on the truncation, for products whose blocks
/// stay within `depth`.
pub fn multiplicativity_check<F: Field>(
    o: &CoordAlgebra<F>,
    ts: &TangentSpace<F>,
    pairs: &[(i64, i64)],
    depth: i64,
) -> Result<MultiplicativityReport> {
    let mut pass = true;
    for &(k, l) in pairs {
        let a = h0(o, ts, k, depth)?;
        let b = h0(o, ts, l, depth)?;
        let c = h0(o, ts, k + l, 2 * depth)?;
        for x in a.elements() {
            for y in b.elements() {
                pass &= c.contains(&o.multiply(&x, &y)?);
            }
        }
    }
    Ok(MultiplicativityReport {
        flag: ts.flag.to_string(),
        pairs: pairs.to_vec(),
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleRow {
    pub weight: Vec<i64>,
    pub dim: usize,
    pub weyl_dim: u64,
    pub relations: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationReport {
    pub ty: String,
    pub modules: Vec<ModuleRow>,
    pub pass: bool,
}

/// Every defining relation as a matrix identity, and `dim = weyl_dim`.
pub fn representation_suite<F: Field>(reg: &Registry<F>, lams: &[Weight]) -> Result<RepresentationReport> {
    let mut modules = Vec::new();
    for l in lams {
        let m = reg.module(l)?;
        modules.push(ModuleRow {
            weight: l.0.clone(),
            dim: m.dim(),
            weyl_dim: reg.ty.weyl_dim(l)?,
            relations: m.check_relations().is_ok(),
        });
    }
    let pass = modules.iter().all(|r| r.relations && r.dim as u64 == r.weyl_dim);
    Ok(RepresentationReport {
        ty: reg.ty.to_string(),
        modules,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorRow {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub product_dim: usize,
    pub summands: Vec<Vec<i64>>,
    pub summand_dim: usize,
    pub valid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorReport {
    pub ty: String,
    pub rows: Vec<TensorRow>,
    pub pass: bool,
}

/// Dimension bookkeeping and embedding/projection identities for
/// Clebsch–Gordan decompositions of the given pairs.
pub fn cg_bookkeeping<F: Field>(o: &CoordAlgebra<F>, pairs: &[(Weight, Weight)]) -> Result<TensorReport> {
    let mut rows = Vec::new();
    for (l, m) in pairs {
        let a = o.module(l)?;
        let b = o.module(m)?;
        let d = o.cache.get(&o.reg, l, m)?;
        let t = tensor(&a, &b)?;
        rows.push(TensorRow {
            lambda: l.0.clone(),
            mu: m.0.clone(),
            product_dim: t.dim(),
            summands: d.highest_weights().into_iter().map(|w| w.0).collect(),
            summand_dim: d.summands.iter().map(|s| s.module.dim()).sum(),
            valid: d.validate(&t).is_ok(),
        });
    }
    let pass = rows.iter().all(|r| r.valid && r.product_dim == r.summand_dim);
    Ok(TensorReport {
        ty: o.ty().to_string(),
        rows,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LusztigReport {
    pub ty: String,
    pub max_dim: u64,
    pub word: Vec<usize>,
    pub modules: Vec<Vec<i64>>,
    pub conjugation_failures: Vec<(Vec<i64>, usize)>,
    pub weight_failures: Vec<(Vec<i64>, usize)>,
    pub pass: bool,
}

/// The conjugation identities of every `Theta_i` and the weights of every
/// root-vector operator, on all irreducibles of dimension at most `max_dim`.
pub fn lusztig_suite<F: Field>(reg: &Registry<F>, max_dim: u64) -> Result<LusztigReport> {
    let ty = reg.ty;
    let word = ty.longest_word();
    let mut lams = Vec::new();
    for l in ty.dominant_weights(max_dim as i64) {
        if ty.weyl_dim(&l)? <= max_dim {
            lams.push(l);
        }
    }
    let mut conjugation_failures = Vec::new();
    let mut weight_failures = Vec::new();
    for l in &lams {
        let m = reg.module(l)?;
        for i in 0..ty.rank {
            if braid_operator(&m, i).and_then(|t| t.check(&m)).is_err() {
                conjugation_failures.push((l.0.clone(), i + 1));
            }
        }
        let rv = RootVectors::new(&m, word.clone())?;
        for r in 0..word.len() {
            for kind in [RootVectorKind::E, RootVectorKind::F] {
                if !rv.has_root_weight(r, kind, &rv.operator(r, kind)?) {
                    weight_failures.push((l.0.clone(), r + 1));
                }
            }
        }
    }
    let pass = conjugation_failures.is_empty() && weight_failures.is_empty();
    Ok(LusztigReport {
        ty: ty.to_string(),
        max_dim,
        word: word.labels(),
        modules: lams.into_iter().map(|l| l.0).collect(),
        conjugation_failures,
        weight_failures,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RMatrixReport {
    pub flag: String,
    pub dim: usize,
    pub intertwining: bool,
    pub triangular: bool,
    pub highest_term: bool,
    pub solver_dimension: usize,
    pub ybe: bool,
    pub pass: bool,
}

/// The braiding `R_{V,V}` of `V = V_{varpi_x}`.
pub fn rmatrix_suite<F: Field>(o: &CoordAlgebra<F>, flag: &FlagSpec) -> Result<RMatrixReport> {
    let v = o.module(&flag.varpi())?;
    let b = braiding(&v, &v)?;
    let (solver_dimension, _) = b.solver_solutions()?;
    let r = RMatrixReport {
        flag: flag.to_string(),
        dim: v.dim(),
        intertwining: b.check_intertwining().is_ok(),
        triangular: b.check_triangularity().is_ok(),
        highest_term: b.check_highest_term(),
        solver_dimension,
        ybe: ybe_check(&b),
        pass: false,
    };
    let pass = r.intertwining && r.triangular && r.highest_term && r.solver_dimension == 1 && r.ybe;
    Ok(RMatrixReport { pass, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::LieType;
    use crate::peterweyl::StructureCache;
    use crate::repr::Guard;
    use crate::scalars::{QParams, Scalar};
    use std::sync::Arc;

    fn setup(f: &str) -> (CoordAlgebra<Scalar>, FlagSpec) {
        let flag: FlagSpec = f.parse().unwrap();
        let t: LieType = flag.ty;
        let reg = Registry::new(t, QParams::symbolic(t.l_denominator()), Guard::default());
        (CoordAlgebra::new(Arc::new(reg), StructureCache::in_memory()), flag)
    }

    #[test]
    fn podles_borel_weil_both_sides() {
        let (o, flag) = setup("A1/1");
        let g = o.generators(&flag).unwrap();
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        let r = borel_weil_report(&o, &ts, &g, &[-2, -1, 0, 1, 2, 3], 4).unwrap();
        assert!(r.pass, "{r:#?}");
        let op = TangentSpace::new(flag, Chirality::Holomorphic, None).unwrap();
        let r = borel_weil_report(&o, &op, &g, &[-2, -1, 0, 1, 2], 4).unwrap();
        assert!(r.pass, "{r:#?}");
        let dims: Vec<usize> = r.rows.iter().map(|x| x.dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 0, 0]);
    }

    #[test]
    fn podles_coordinate_ring_and_audit() {
        let (o, flag) = setup("A1/1");
        let g = o.generators(&flag).unwrap();
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        let r = coordinate_ring_equality(&o, &ts, &g, 3, 4).unwrap();
        assert!(r.pass, "{r:#?}");
        let a = highest_weight_audit(&o, &flag, &g, 1, 3).unwrap();
        assert!(a.pass, "{a:#?}");
        assert_eq!(a.count, 2);
    }

    #[test]
    fn small_suites() {
        let (o, flag) = setup("A2/1");
        assert!(rmatrix_suite(&o, &flag).unwrap().pass);
        let r = lusztig_suite(&o.reg, 8).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.modules.len(), 6);
        let w = |a: i64, b: i64| Weight(vec![a, b]);
        let t = cg_bookkeeping(&o, &[(w(1, 0), w(1, 0)), (w(1, 0), w(0, 1))]).unwrap();
        assert!(t.pass);
        assert_eq!(t.rows[1].summands, vec![vec![1, 1], vec![0, 0]]);
    }

    #[test]
    fn monoid_truncation_of_a2() {
        let f: FlagSpec = "A2/1".parse().unwrap();
        let m = monoid_truncation(&f.spherical_weights(), 2, 4);
        let v: Vec<Vec<i64>> = m.into_iter().map(|w| w.0).collect();
        assert_eq!(v, vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
    }

    #[test]
    fn podles_spherical_and_products() {
        let (o, flag) = setup("A1/1");
        let r = spherical_decomposition_check(&o, &flag, 4).unwrap();
        assert!(r.pass, "{r:#?}");
        let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
        assert!(multiplicativity_check(&o, &ts, &[(1, 1), (1, 2)], 3).unwrap().pass);
    }
}
