//! Property suites over randomized small inputs.

use std::sync::Arc;

use proptest::prelude::*;

use qflag::calculus::{h0, liouville_check, Chirality, TangentSpace};
use qflag::cartan::{catalog, default_flags, FlagSpec, LieType, Root, Weight};
use qflag::coordring::{quadratic_relations, relations_match_realization};
use qflag::peterweyl::{CoordAlgebra, PWElement, StructureCache};
use qflag::repr::{Gen, Guard, Registry};
use qflag::rmatrix::{braiding, ybe_check};
use qflag::scalars::{qint, Field, QParams, Rational, Scalar};
use qflag::verify::{act_f_highest, borel_weil_report, cg_bookkeeping};

fn algebra(ty: LieType) -> CoordAlgebra<Scalar> {
    let reg = Registry::new(ty, QParams::symbolic(ty.l_denominator()), Guard::default());
    CoordAlgebra::new(Arc::new(reg), StructureCache::in_memory())
}

fn ty(s: &str) -> LieType {
    s.parse().unwrap()
}

/// `sum c_e s^e` over a few small exponents.
fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 1..4).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (c, e)| {
            acc + Scalar::from_i64(c) * &<Scalar as Field>::s_pow(&(), e)
        })
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(), laurent()).prop_map(|(a, b)| if b.is_zero() { a } else { a.div(&b) })
}

fn small_weights(t: LieType, max_dim: u64) -> Vec<Weight> {
    t.dominant_weights(6)
        .into_iter()
        .filter(|l| t.weyl_dim(l).is_ok_and(|d| d <= max_dim))
        .collect()
}

/// Whether `w` is a non-negative integer combination of `gens`.
fn in_monoid(w: &Weight, gens: &[Weight]) -> bool {
    if w.is_zero() {
        return true;
    }
    if w.0.iter().any(|&a| a < 0) {
        return false;
    }
    gens.iter().any(|g| !g.is_zero() && in_monoid(&w.sub(g), gens))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + &(a.clone() * &c));
        if !a.is_zero() {
            prop_assert!((a.clone() * &a.inv()).is_one());
        }
        // Two paths to the same value give the same representation.
        let p = (a.clone() + &b) - &b;
        prop_assert_eq!(p.to_wire(), a.to_wire());
    }

    #[test]
    fn quantum_integers(m in -6i64..=6, n in -6i64..=6, l in 1u32..=4) {
        prop_assert_eq!(qint(m, l) * &qint(n, l), qint(n, l) * &qint(m, l));
        prop_assert_eq!(qint(-m, l), -qint(m, l));
    }

    #[test]
    fn longest_word_covers_positive_roots(i in 0usize..64) {
        let flags = catalog(4);
        let t = flags[i % flags.len()].ty;
        let seq = t.root_sequence(&t.longest_word()).unwrap();
        let mut a: Vec<Root> = seq;
        let mut b = t.positive_roots();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bilinear_form_is_symmetric(i in 0usize..64, x in prop::collection::vec(-3i64..=3, 8), y in prop::collection::vec(-3i64..=3, 8)) {
        let flags = catalog(4);
        let t = flags[i % flags.len()].ty;
        let lam = Weight(x[..t.rank].to_vec());
        let mu = Weight(y[..t.rank].to_vec());
        prop_assert_eq!(t.bilinear_form(&lam, &mu), t.bilinear_form(&mu, &lam));
        let rf = t.root_form();
        let shortest = (0..t.rank).map(|j| rf[j][j]).min().unwrap();
        prop_assert_eq!(shortest, 2);
    }

    #[test]
    fn crossed_node_and_dual_span_spherical(i in 0usize..64) {
        let flags = catalog(4);
        let f = flags[i % flags.len()];
        let gens = f.spherical_weights();
        let w = f.varpi();
        let wd = f.ty.dual_weight(&w);
        prop_assert!(in_monoid(&w.add(&wd), &gens), "{f}");
        prop_assert!(!in_monoid(&w, &gens));
        prop_assert!(!in_monoid(&wd, &gens));
    }

    #[test]
    fn weyl_dim_is_dual_invariant(i in 0usize..64, x in prop::collection::vec(0i64..=2, 8)) {
        let flags = catalog(4);
        let t = flags[i % flags.len()].ty;
        let lam = Weight(x[..t.rank].to_vec());
        // Both sides overflow together or agree.
        prop_assert_eq!(t.weyl_dim(&lam).ok(), t.weyl_dim(&t.dual_weight(&lam)).ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn modules_and_decompositions(ti in 0usize..4, a in 0usize..64, b in 0usize..64) {
        let t = ty(["A2", "B2", "C2", "A3"][ti]);
        let o = algebra(t);
        let ws = small_weights(t, 12);
        let (l, m) = (ws[a % ws.len()].clone(), ws[b % ws.len()].clone());
        let v = o.module(&l).unwrap();
        prop_assert!(v.check_relations().is_ok());
        prop_assert_eq!(v.dim() as u64, t.weyl_dim(&l).unwrap());
        prop_assert!(cg_bookkeeping(&o, &[(l, m)]).unwrap().pass);
    }

    #[test]
    fn specialization_keeps_dimensions(ti in 0usize..3, a in 0usize..64, s0 in 2i64..5) {
        let t = ty(["A2", "B2", "C2"][ti]);
        let ws = small_weights(t, 20);
        let l = &ws[a % ws.len()];
        let p = QParams::<Rational>::at_s(t.l_denominator(), Rational::from_integer(s0.into())).unwrap();
        let rreg = Registry::new(t, p, Guard::default());
        let sreg = Registry::new(t, QParams::symbolic(t.l_denominator()), Guard::default());
        prop_assert_eq!(rreg.module(l).unwrap().dim(), sreg.module(l).unwrap().dim());
    }

    #[test]
    fn braidings_intertwine(ti in 0usize..3, a in 0usize..64, b in 0usize..64) {
        let t = ty(["A1", "A2", "B2"][ti]);
        let o = algebra(t);
        let ws = small_weights(t, 6);
        let v = o.module(&ws[a % ws.len()]).unwrap();
        let w = o.module(&ws[b % ws.len()]).unwrap();
        let r = braiding(&v, &w).unwrap();
        prop_assert!(r.check_intertwining().is_ok());
        prop_assert!(r.check_triangularity().is_ok());
        let rr = braiding(&v, &v).unwrap();
        prop_assert!(ybe_check(&rr));
    }
}

/// Products of up to three generators with small coefficients.
fn sample_elements(o: &CoordAlgebra<Scalar>, f: &FlagSpec, picks: &[(usize, usize, i64)]) -> Vec<PWElement<Scalar>> {
    let g = o.generators(f).unwrap();
    let gens: Vec<PWElement<Scalar>> = g.z.iter().chain(g.zbar.iter()).cloned().collect();
    picks
        .iter()
        .map(|&(i, j, c)| {
            let x = o.multiply(&gens[i % gens.len()], &gens[j % gens.len()]).unwrap();
            x.scale(&Scalar::from_i64(c)).add(&gens[(i + j) % gens.len()])
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn multiplication_is_associative_and_unital(fi in 0usize..2, picks in prop::collection::vec((0usize..8, 0usize..8, 1i64..4), 3)) {
        let f: FlagSpec = ["A1/1", "A2/1"][fi].parse().unwrap();
        let o = algebra(f.ty);
        let xs = sample_elements(&o, &f, &picks);
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        let l = o.multiply(&o.multiply(a, b).unwrap(), c).unwrap();
        let r = o.multiply(a, &o.multiply(b, c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(&o.multiply(&o.one(), a).unwrap(), a);
        prop_assert_eq!(&o.multiply(a, &o.one()).unwrap(), a);
    }

    #[test]
    fn column_action_follows_the_coproduct(fi in 0usize..2, node in 0usize..2, picks in prop::collection::vec((0usize..8, 0usize..8, 1i64..4), 2)) {
        let f: FlagSpec = ["A1/1", "A2/1"][fi].parse().unwrap();
        let o = algebra(f.ty);
        let i = node % f.ty.rank;
        let xs = sample_elements(&o, &f, &picks);
        let (a, b) = (&xs[0], &xs[1]);
        let ab = o.multiply(a, b).unwrap();
        let act = |w: &[Gen], x: &PWElement<Scalar>| o.act_v(w, x).unwrap();
        let mul = |x: &PWElement<Scalar>, y: &PWElement<Scalar>| o.multiply(x, y).unwrap();
        // Delta(E) = E ⊗ K + 1 ⊗ E, Delta(F) = F ⊗ 1 + K^{-1} ⊗ F, K grouplike.
        let e = mul(&act(&[Gen::E(i)], a), &act(&[Gen::K(i)], b)).add(&mul(a, &act(&[Gen::E(i)], b)));
        prop_assert_eq!(act(&[Gen::E(i)], &ab), e);
        let fl = mul(&act(&[Gen::F(i)], a), b).add(&mul(&act(&[Gen::Kinv(i)], a), &act(&[Gen::F(i)], b)));
        prop_assert_eq!(act(&[Gen::F(i)], &ab), fl);
        prop_assert_eq!(act(&[Gen::K(i)], &ab), mul(&act(&[Gen::K(i)], a), &act(&[Gen::K(i)], b)));
    }

    #[test]
    fn grading_is_multiplicative(k in -1i64..=1, l in -1i64..=1) {
        let f: FlagSpec = "A1/1".parse().unwrap();
        let o = algebra(f.ty);
        let a = o.graded_component(&f, k, 2).unwrap();
        let b = o.graded_component(&f, l, 2).unwrap();
        let c = o.graded_component(&f, k + l, 4).unwrap();
        for x in a.elements() {
            for y in b.elements() {
                prop_assert!(c.contains(&o.multiply(&x, &y).unwrap()));
            }
        }
    }

    #[test]
    fn sections_multiply_and_are_submodules(k in 0i64..=2, l in 0i64..=1) {
        let f: FlagSpec = "A2/1".parse().unwrap();
        let o = algebra(f.ty);
        let ts = TangentSpace::new(f, Chirality::Antiholomorphic, None).unwrap();
        let a = h0(&o, &ts, k, 3).unwrap();
        let b = h0(&o, &ts, l, 3).unwrap();
        let c = h0(&o, &ts, k + l, 6).unwrap();
        for x in a.elements() {
            for y in b.elements() {
                prop_assert!(c.contains(&o.multiply(&x, &y).unwrap()));
            }
            for gen in Gen::all(f.ty.rank) {
                prop_assert!(a.contains(&o.act_f(&[gen], &x).unwrap()));
            }
        }
        let g = o.generators(&f).unwrap();
        let zk = o.power(&g.z[0], k as u32).unwrap();
        prop_assert!(a.contains(&zk));
        prop_assert_eq!(act_f_highest(&o, &a).unwrap().len(), 1);
    }
}

#[test]
fn cache_round_trip_reproduces_products() {
    let dir = tempfile::tempdir().unwrap();
    let f: FlagSpec = "A2/1".parse().unwrap();
    let make = || {
        let reg = Registry::new(f.ty, QParams::symbolic(f.ty.l_denominator()), Guard::default());
        CoordAlgebra::new(Arc::new(reg), StructureCache::persistent(dir.path()).unwrap())
    };
    let cold = make();
    let g = cold.generators(&f).unwrap();
    let p1 = cold.product(&[&g.z[0], &g.zbar[1], &g.z[2]]).unwrap();
    let warm = make();
    let g2 = warm.generators(&f).unwrap();
    let p2 = warm.product(&[&g2.z[0], &g2.zbar[1], &g2.z[2]]).unwrap();
    assert_eq!(p1, p2);
    assert_eq!(warm.cache.stats().computed, 0);
    assert!(warm.cache.stats().disk_hits > 0);
}

#[test]
fn quadratic_relations_match_realized_kernels() {
    for f in default_flags() {
        let o = algebra(f.ty);
        let g = o.generators(&f).unwrap();
        let spec = quadratic_relations(&o, &f).unwrap();
        assert!(relations_match_realization(&o, &spec, &g).unwrap(), "{f}");
    }
}

#[test]
fn generator_degrees_and_normalization_round_trip() {
    for f in default_flags() {
        let o = algebra(f.ty);
        let g = o.generators(&f).unwrap();
        let plus = o.graded_component(&f, 1, f.varpi().level().max(f.ty.dual_weight(&f.varpi()).level())).unwrap();
        let minus = o.graded_component(&f, -1, f.ty.dual_weight(&f.varpi()).level()).unwrap();
        assert!(g.z.iter().all(|z| plus.contains(z)), "{f}");
        assert!(g.zbar.iter().all(|z| minus.contains(z)), "{f}");
        let c = Scalar::from_wire(&g.normalization.to_wire()).unwrap();
        assert_eq!(c, g.normalization);
    }
}

#[test]
fn degree_zero_row_reproduces_liouville() {
    for s in ["A1/1", "A2/1", "B2/1"] {
        let f: FlagSpec = s.parse().unwrap();
        let o = algebra(f.ty);
        let g = o.generators(&f).unwrap();
        let ts = TangentSpace::new(f, Chirality::Antiholomorphic, None).unwrap();
        let r = borel_weil_report(&o, &ts, &g, &[0], 3).unwrap();
        let l = liouville_check(&o, &ts, 3).unwrap();
        assert_eq!(r.rows[0].dim, l.kernel_dim);
        assert_eq!(r.rows[0].pass, l.pass);
    }
}
