//! Root systems, Weyl group words, the flag-manifold catalog and spherical
//! weights.
//!
//! Nodes are numbered as in Humphreys. Internally node indices are 0-based;
//! text input and output use 1-based labels.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{QExponent, Rational};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
}

/// A simple Lie type in the supported range (E only for 6 and 7).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LieType {
    pub series: Series,
    pub rank: usize,
}

/// Integer vector in the fundamental-weight basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

/// Integer vector in the simple-root basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

/// A word `s_{i_1} s_{i_2} ...` in simple reflections (0-based nodes).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WeylWord(pub Vec<usize>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `sum_i lambda_i`, the truncation degree.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated fundamental-weight coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let v: std::result::Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse()).collect();
        v.map(Weight)
            .map_err(|_| Error::Parse(format!("bad weight `{s}`")))
    }
}

impl Root {
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&a| a >= 0) && self.0.iter().any(|&a| a > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl WeylWord {
    /// 1-based node labels, as printed in reports.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => rank == 6 || rank == 7,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("no Lie type {series:?}{rank}")));
        }
        Ok(LieType { series, rank })
    }

    pub fn name(&self) -> String {
        format!("{:?}{}", self.series, self.rank)
    }

    /// Edges of the Dynkin diagram (0-based, unordered).
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.series {
            Series::A | Series::B | Series::C => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Series::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Series::E => {
                let mut e = vec![(0, 2), (2, 3), (3, 4), (1, 3)];
                for i in 4..n - 1 {
                    e.push((i, i + 1));
                }
                e
            }
        }
    }

    /// `d_i = (alpha_i, alpha_i) / 2`, with 1 for the short roots.
    pub fn root_halflengths(&self) -> Vec<i64> {
        let n = self.rank;
        match self.series {
            Series::B => (0..n).map(|i| if i + 1 < n { 2 } else { 1 }).collect(),
            Series::C => (0..n).map(|i| if i + 1 == n { 2 } else { 1 }).collect(),
            _ => vec![1; n],
        }
    }

    /// Symmetric Gram matrix `(alpha_i, alpha_j)`.
    pub fn root_form(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let d = self.root_halflengths();
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            b[i][i] = 2 * d[i];
        }
        for (i, j) in self.edges() {
            let v = -d[i].max(d[j]);
            b[i][j] = v;
            b[j][i] = v;
        }
        b
    }

    /// `a_ij = (alpha_i^vee, alpha_j) = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let b = self.root_form();
        let d = self.root_halflengths();
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| b[i][j] / d[i]).collect())
            .collect()
    }

    /// Gram matrix `(varpi_i, varpi_j)` of the fundamental weights.
    pub fn weight_form(&self) -> Vec<Vec<Rational>> {
        let n = self.rank;
        let a = self.cartan_matrix();
        // Coordinates of varpi_j in simple roots solve A c = e_j.
        let inv = invert_integer(&a);
        let d = self.root_halflengths();
        // (varpi_i, varpi_j) = sum_k c^{(i)}_k d_k delta_{kj} = (A^{-1})_{ji} d_j
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| inv[j][i].clone() * Rational::from_integer(d[j].into()))
                    .collect()
            })
            .collect()
    }

    /// Smallest `L > 0` with `(P, P) ⊆ (1/L) Z`.
    pub fn l_denominator(&self) -> u32 {
        let mut l = num_bigint::BigInt::one();
        for row in self.weight_form() {
            for x in row {
                l = l.lcm(x.denom());
            }
        }
        l.to_u32().expect("small denominator")
    }

    /// `(lambda, mu)` for weights in fundamental coordinates.
    pub fn pair(&self, lambda: &Weight, mu: &Weight) -> Rational {
        let g = self.weight_form();
        let mut acc = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if lambda.0[i] != 0 && mu.0[j] != 0 {
                    acc += g[i][j].clone() * Rational::from_integer((lambda.0[i] * mu.0[j]).into());
                }
            }
        }
        acc
    }

    /// `(lambda, mu)` as an exact multiple of `1/L`.
    pub fn bilinear_form(&self, lambda: &Weight, mu: &Weight) -> QExponent {
        let x = self.pair(lambda, mu) * Rational::from_integer(self.l_denominator().into());
        assert!(x.is_integer(), "form value outside (1/L) Z");
        QExponent(x.to_integer().to_i64().expect("small exponent"))
    }

    /// `(alpha_i, mu) = d_i mu_i` (an integer).
    pub fn alpha_pair(&self, i: usize, mu: &Weight) -> i64 {
        self.root_halflengths()[i] * mu.0[i]
    }

    /// `(beta, mu)` for a root in simple-root coordinates.
    pub fn root_weight_pair(&self, beta: &Root, mu: &Weight) -> i64 {
        let d = self.root_halflengths();
        (0..self.rank).map(|j| beta.0[j] * d[j] * mu.0[j]).sum()
    }

    /// Fundamental coordinates of a root.
    pub fn root_to_weight(&self, beta: &Root) -> Weight {
        let a = self.cartan_matrix();
        Weight(
            (0..self.rank)
                .map(|i| (0..self.rank).map(|j| a[i][j] * beta.0[j]).sum())
                .collect(),
        )
    }

    /// Simple-root coordinates of a weight, `A^{-1} mu`.
    pub fn root_coordinates(&self, mu: &Weight) -> Vec<Rational> {
        let inv = invert_integer(&self.cartan_matrix());
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| inv[i][j].clone() * Rational::from_integer(mu.0[j].into()))
                    .sum()
            })
            .collect()
    }

    /// Strict dominance `a < b`: `b - a` is a nonzero sum of positive roots.
    pub fn strictly_below(&self, a: &Weight, b: &Weight) -> bool {
        let d = b.sub(a);
        !d.is_zero()
            && self
                .root_coordinates(&d)
                .iter()
                .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        Root(v)
    }

    /// `alpha_i` in fundamental coordinates.
    pub fn simple_root_weight(&self, i: usize) -> Weight {
        self.root_to_weight(&self.simple_root(i))
    }

    /// `<beta, alpha_i^vee>`.
    fn coroot_pairing(&self, beta: &Root, i: usize) -> i64 {
        let a = self.cartan_matrix();
        (0..self.rank).map(|j| a[i][j] * beta.0[j]).sum()
    }

    pub fn reflect_root(&self, i: usize, beta: &Root) -> Root {
        let c = self.coroot_pairing(beta, i);
        let mut v = beta.0.clone();
        v[i] -= c;
        Root(v)
    }

    pub fn reflect_weight(&self, i: usize, mu: &Weight) -> Weight {
        let a = self.cartan_matrix();
        let m = mu.0[i];
        Weight((0..self.rank).map(|j| mu.0[j] - m * a[j][i]).collect())
    }

    /// All positive roots sorted by height then coordinates.
    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.rank;
        let mut roots: Vec<Root> = (0..n).map(|i| self.simple_root(i)).collect();
        let mut set: std::collections::BTreeSet<Root> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    // alpha_i-string through beta: beta - p alpha_i, ..., beta + q alpha_i
                    let mut p = 0;
                    loop {
                        let mut v = beta.0.clone();
                        v[i] -= p + 1;
                        if set.contains(&Root(v)) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.coroot_pairing(beta, i);
                    if q > 0 {
                        let mut v = beta.0.clone();
                        v[i] += 1;
                        let r = Root(v);
                        if set.insert(r.clone()) {
                            next.push(r);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        roots
    }

    pub fn highest_root(&self) -> Root {
        self.positive_roots().pop().expect("nonempty root system")
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Reduced word for `w_0` by descent from `rho`: repeatedly reflect in the
    /// first node where the current weight is positive.
    pub fn longest_word(&self) -> WeylWord {
        let mut v = self.rho();
        let mut word = Vec::new();
        while let Some(i) = v.0.iter().position(|&a| a > 0) {
            v = self.reflect_weight(i, &v);
            word.push(i);
        }
        WeylWord(word)
    }

    /// `beta_r = s_{i_1} ... s_{i_{r-1}} (alpha_{i_r})`; errors unless the word
    /// is a reduced word for `w_0`.
    pub fn root_sequence(&self, word: &WeylWord) -> Result<Vec<Root>> {
        let mut out = Vec::with_capacity(word.len());
        for r in 0..word.len() {
            if word.0[r] >= self.rank {
                return Err(Error::InvalidInput(format!("node {} out of range", word.0[r] + 1)));
            }
            let mut beta = self.simple_root(word.0[r]);
            for k in (0..r).rev() {
                beta = self.reflect_root(word.0[k], &beta);
            }
            out.push(beta);
        }
        let pos = self.positive_roots();
        let mut sorted = out.clone();
        sorted.sort();
        sorted.dedup();
        let reduced = out.iter().all(|b| b.is_positive()) && sorted.len() == out.len();
        if !reduced || out.len() != pos.len() {
            return Err(Error::InvalidInput(format!(
                "word {:?} is not a reduced word for the longest element",
                word.labels()
            )));
        }
        Ok(out)
    }

    pub fn w0_on_weight(&self, mu: &Weight) -> Weight {
        let w = self.longest_word();
        let mut v = mu.clone();
        for &i in w.0.iter().rev() {
            v = self.reflect_weight(i, &v);
        }
        v
    }

    /// `-w_0(mu)`, the highest weight of the dual of `V_mu`.
    pub fn dual_weight(&self, mu: &Weight) -> Weight {
        self.w0_on_weight(mu).neg()
    }

    /// Classical Weyl dimension formula.
    pub fn weyl_dim(&self, lambda: &Weight) -> Result<u64> {
        if lambda.rank() != self.rank || !lambda.is_dominant() {
            return Err(Error::InvalidInput(format!("weight {lambda} is not dominant")));
        }
        let lr = lambda.add(&self.rho());
        let rho = self.rho();
        let mut num = num_bigint::BigInt::one();
        let mut den = num_bigint::BigInt::one();
        for beta in self.positive_roots() {
            num *= self.root_weight_pair(&beta, &lr);
            den *= self.root_weight_pair(&beta, &rho);
        }
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero());
        q.to_u64()
            .ok_or_else(|| Error::Unsupported(format!("dim V_{lambda} of {self} exceeds u64")))
    }

    /// Dominant weights with `sum lambda_i <= depth`, sorted by level then
    /// coordinates.
    pub fn dominant_weights(&self, depth: i64) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank];
        fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
            if i == cur.len() {
                out.push(Weight(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, depth.max(0), &mut cur, &mut out);
        out.sort_by(|a, b| a.level().cmp(&b.level()).then_with(|| a.cmp(b)));
        out
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut ch = s.chars();
        let series = match ch.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            _ => return Err(Error::Parse(format!("bad Lie type `{s}`"))),
        };
        let rank: usize = ch
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad Lie type `{s}`")))?;
        LieType::new(series, rank)
    }
}

fn invert_integer(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    use crate::linalg::invert_dense;
    let m: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    invert_dense(&m).expect("Cartan matrix is invertible")
}

/// An irreducible flag manifold: a Lie type with one crossed node.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FlagSpec {
    pub ty: LieType,
    /// Crossed node, 0-based.
    pub x: usize,
}

impl FlagSpec {
    pub fn new(ty: LieType, x: usize) -> Result<Self> {
        if x >= ty.rank {
            return Err(Error::InvalidInput(format!("node {} out of range for {ty}", x + 1)));
        }
        let f = FlagSpec { ty, x };
        if !f.is_cominuscule() {
            return Err(Error::InvalidInput(format!(
                "{ty} crossed at node {} is not an irreducible flag manifold",
                x + 1
            )));
        }
        Ok(f)
    }

    fn is_cominuscule(&self) -> bool {
        self.ty.highest_root().0[self.x] == 1
    }

    /// Nodes of the Levi factor.
    pub fn levi_nodes(&self) -> Vec<usize> {
        (0..self.ty.rank).filter(|&j| j != self.x).collect()
    }

    pub fn varpi(&self) -> Weight {
        Weight::fundamental(self.ty.rank, self.x)
    }

    /// Positive (or negative) roots with nonzero `alpha_x` coefficient.
    pub fn restricted_roots(&self, positive: bool) -> Vec<Root> {
        self.ty
            .positive_roots()
            .into_iter()
            .filter(|b| b.0[self.x] != 0)
            .map(|b| if positive { b } else { b.neg() })
            .collect()
    }

    pub fn name(&self) -> String {
        let n = self.ty.rank;
        let x = self.x + 1;
        match self.ty.series {
            Series::A => format!("Gr_{{{},{}}}", n + 1, x),
            Series::B => format!("Q_{{{}}}", 2 * n + 1),
            Series::C => format!("L_{{{n}}}"),
            Series::D if x == 1 => format!("Q_{{{}}}", 2 * n),
            Series::D => format!("S_{{{n}}}"),
            Series::E if n == 6 => "OP^2".to_string(),
            Series::E => "F".to_string(),
        }
    }

    /// Generators of the monoid of highest weights of the degree-zero flag
    /// algebra.
    pub fn spherical_weights(&self) -> Vec<Weight> {
        let n = self.ty.rank;
        let w = |i: usize| Weight::fundamental(n, i - 1);
        let x = self.x + 1;
        match self.ty.series {
            Series::A => {
                let m = n + 1;
                (1..=x.min(m - x)).map(|i| w(i).add(&w(m - i))).collect()
            }
            // For B_2 the second fundamental weight is the spin weight and has
            // no zero weight; its double plays the role of varpi_2.
            Series::B if n == 2 => vec![w(1).scale(2), w(2).scale(2)],
            Series::B => vec![w(1).scale(2), w(2)],
            Series::C => (1..=n).map(|i| w(i).scale(2)).collect(),
            Series::D if x == 1 => vec![w(1).scale(2), w(2)],
            Series::D => {
                let mut v: Vec<Weight> = (1..).map(|k| 2 * k).take_while(|&i| i + 2 <= n).map(w).collect();
                if n % 2 == 0 {
                    // Which of 2 varpi_{n-1}, 2 varpi_n appears depends on the
                    // crossed node.
                    v.push(w(x).scale(2));
                } else {
                    v.push(w(n - 1).add(&w(n)));
                }
                v
            }
            Series::E if n == 6 => vec![w(1).add(&w(6)), w(2)],
            Series::E => vec![w(1), w(6), w(7).scale(2)],
        }
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.ty, self.x + 1)
    }
}

impl FromStr for FlagSpec {
    type Err = Error;

    /// `SERIESrank/x`, e.g. `A3/2`.
    fn from_str(s: &str) -> Result<Self> {
        let (t, x) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("bad flag `{s}`, expected e.g. A3/2")))?;
        let ty: LieType = t.parse()?;
        let x: usize = x
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad crossed node in `{s}`")))?;
        if x == 0 {
            return Err(Error::Parse("nodes are numbered from 1".into()));
        }
        FlagSpec::new(ty, x - 1)
    }
}

/// The six desk-scale flags used by the default verification matrix.
pub fn default_flags() -> Vec<FlagSpec> {
    ["A1/1", "A2/1", "A2/2", "A3/2", "B2/1", "C2/2"]
        .iter()
        .map(|s| s.parse().expect("valid default flag"))
        .collect()
}

/// Catalog of irreducible flags up to the given rank (E6/E7 always listed).
pub fn catalog(max_rank: usize) -> Vec<FlagSpec> {
    let mut out = Vec::new();
    let mut push = |s: Series, n: usize, x: usize| {
        if let Ok(ty) = LieType::new(s, n) {
            if let Ok(f) = FlagSpec::new(ty, x) {
                out.push(f);
            }
        }
    };
    for n in 1..=max_rank {
        for x in 0..n {
            push(Series::A, n, x);
        }
        push(Series::B, n, 0);
        push(Series::C, n, n.saturating_sub(1));
        push(Series::D, n, 0);
        if n >= 4 {
            push(Series::D, n, n - 2);
            push(Series::D, n, n - 1);
        }
    }
    push(Series::E, 6, 0);
    push(Series::E, 6, 5);
    push(Series::E, 7, 6);
    out
}
