//! Explicit representations of `sp(2g)` and `sl(n)` over Q.
//!
//! Conventions follow Fulton–Harris. For `sp(2g)` the defining space `H` has
//! basis `a_1..a_g, b_1..b_g` with form `J = [[0, I], [-I, 0]]`, so `a_i`
//! has weight `ε_i` and `b_i` has weight `-ε_i`. Weights are integer vectors
//! in ε-coordinates; for `sl(n)` they are normalized to have last
//! coordinate 0. The Casimir operator uses the trace form of the defining
//! representation, under which `V(λ)` has eigenvalue `⟨λ, λ + 2ρ⟩` with
//! `⟨ε_i, ε_j⟩ = δ_ij / 2` for `sp` and the standard form on sum-zero
//! vectors for `sl`.
//!
//! Every module carries a basis of weight vectors, and all constructions
//! (powers, tensor products, quotients by and restrictions to submodules
//! spanned by weight vectors) preserve that property.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{sort_with_sign, MonomialBasis, SubsetBasis};
use crate::error::{Error, Result};
use crate::exact_linalg::{QuotientMap, Rational, RationalMatrix, RationalVec, SparseVec, Subspace};

pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `sp(2g)`, type C_g.
    Symplectic,
    /// `sl(n)`, type A_{n-1}.
    SpecialLinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LieAlgebraSpec {
    pub family: Family,
    /// `g` for `sp(2g)`, `n` for `sl(n)`.
    pub param: usize,
}

/// `λ = Σ n_i λ_i` in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HighestWeight(pub Vec<u32>);

impl HighestWeight {
    pub fn zero(rank: usize) -> Self {
        HighestWeight(vec![0; rank])
    }

    /// `λ_k`, 1-indexed.
    pub fn fundamental(rank: usize, k: usize) -> Self {
        let mut v = vec![0; rank];
        v[k - 1] = 1;
        HighestWeight(v)
    }
}

impl LieAlgebraSpec {
    pub fn symplectic(g: usize) -> Self {
        assert!(g >= 1, "sp(2g) needs g ≥ 1");
        LieAlgebraSpec { family: Family::Symplectic, param: g }
    }

    pub fn special_linear(n: usize) -> Self {
        assert!(n >= 2, "sl(n) needs n ≥ 2");
        LieAlgebraSpec { family: Family::SpecialLinear, param: n }
    }

    pub fn defining_dim(&self) -> usize {
        match self.family {
            Family::Symplectic => 2 * self.param,
            Family::SpecialLinear => self.param,
        }
    }

    /// Number of fundamental weights.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::Symplectic => self.param,
            Family::SpecialLinear => self.param - 1,
        }
    }

    /// Length of ε-coordinate vectors.
    pub fn weight_len(&self) -> usize {
        self.param
    }

    pub fn normalize(&self, mut w: Weight) -> Weight {
        if self.family == Family::SpecialLinear {
            let last = *w.last().unwrap();
            w.iter_mut().for_each(|x| *x -= last);
        }
        w
    }

    pub fn epsilon_coords(&self, hw: &HighestWeight) -> Result<Weight> {
        if hw.0.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: hw.0.len() });
        }
        // c_j = Σ_{k ≥ j} n_k
        let mut c = vec![0i64; self.weight_len()];
        let mut acc = 0i64;
        for j in (0..self.rank()).rev() {
            acc += hw.0[j] as i64;
            c[j] = acc;
        }
        Ok(c)
    }

    /// Inverse of [`epsilon_coords`](Self::epsilon_coords) on dominant weights.
    pub fn highest_weight_of(&self, w: &[i64]) -> Option<HighestWeight> {
        let w = self.normalize(w.to_vec());
        let mut out = Vec::with_capacity(self.rank());
        for k in 0..self.rank() {
            let next = if k + 1 < w.len() { w[k + 1] } else { 0 };
            let n = w[k] - next;
            if n < 0 {
                return None;
            }
            out.push(n as u32);
        }
        Some(HighestWeight(out))
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        self.highest_weight_of(w).is_some()
    }

    pub fn rho(&self) -> Weight {
        let p = self.param as i64;
        match self.family {
            Family::Symplectic => (0..p).map(|i| p - i).collect(),
            Family::SpecialLinear => (0..p).map(|i| p - 1 - i).collect(),
        }
    }

    pub fn positive_roots(&self) -> Vec<Weight> {
        let p = self.param;
        let unit = |i: usize| {
            let mut v = vec![0i64; p];
            v[i] = 1;
            v
        };
        let mut roots = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                let mut d = unit(i);
                d[j] = -1;
                roots.push(d);
                if self.family == Family::Symplectic {
                    let mut s = unit(i);
                    s[j] = 1;
                    roots.push(s);
                }
            }
            if self.family == Family::Symplectic {
                let mut l = vec![0i64; p];
                l[i] = 2;
                roots.push(l);
            }
        }
        roots
    }

    /// `⟨λ, λ + 2ρ⟩` for the trace-form normalization.
    pub fn casimir_eigenvalue(&self, w: &[i64]) -> Rational {
        let rho = self.rho();
        match self.family {
            Family::Symplectic => {
                let s: i64 = w.iter().zip(&rho).map(|(a, r)| a * (a + 2 * r)).sum();
                Rational::new(s, 2)
            }
            Family::SpecialLinear => {
                let n = self.param as i64;
                let center = |v: &[i64]| -> Vec<Rational> {
                    let total: i64 = v.iter().sum();
                    v.iter().map(|&x| Rational::new(x * n - total, n)).collect()
                };
                let (lw, lr) = (center(w), center(&rho));
                let mut acc = Rational::zero();
                for (a, r) in lw.iter().zip(&lr) {
                    acc = &acc + &(a * &(a + &(r + r)));
                }
                acc
            }
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Weyl dimension formula.
pub fn weyl_dim(spec: &LieAlgebraSpec, hw: &HighestWeight) -> Result<u64> {
    let lambda = spec.epsilon_coords(hw)?;
    let rho = spec.rho();
    let shifted: Vec<i64> = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut acc = Rational::one();
    for alpha in spec.positive_roots() {
        acc = &acc * &Rational::new(dot(&shifted, &alpha), dot(&rho, &alpha));
    }
    debug_assert!(acc.is_integer());
    Ok(acc.numer().try_into().expect("dimension fits in u64"))
}

/// The Lie algebra in its defining representation.
#[derive(Debug)]
pub struct LieAlgebra {
    spec: LieAlgebraSpec,
    basis: Vec<RationalMatrix>,
    roots: Vec<Weight>,
    raising: Vec<usize>,
    /// Dual-basis pairs `(a, b, G⁻¹_ab)` for the trace form.
    casimir_terms: Vec<(usize, usize, Rational)>,
}

impl LieAlgebra {
    pub fn new(spec: LieAlgebraSpec) -> Arc<Self> {
        let d = spec.defining_dim();
        let e = |i: usize, j: usize, c: i64| (i, j, Rational::from_integer(c));
        let mut basis: Vec<Vec<(usize, usize, Rational)>> = Vec::new();
        let mut raising = Vec::new();
        match spec.family {
            Family::Symplectic => {
                let g = spec.param;
                for i in 0..g {
                    basis.push(vec![e(i, i, 1), e(g + i, g + i, -1)]);
                }
                for i in 0..g {
                    for j in 0..g {
                        if i != j {
                            if j == i + 1 {
                                raising.push(basis.len());
                            }
                            basis.push(vec![e(i, j, 1), e(g + j, g + i, -1)]);
                        }
                    }
                }
                for i in 0..g {
                    for j in i..g {
                        if i == j {
                            if i == g - 1 {
                                raising.push(basis.len());
                            }
                            basis.push(vec![e(i, g + i, 1)]);
                        } else {
                            basis.push(vec![e(i, g + j, 1), e(j, g + i, 1)]);
                        }
                    }
                }
                for i in 0..g {
                    for j in i..g {
                        if i == j {
                            basis.push(vec![e(g + i, i, 1)]);
                        } else {
                            basis.push(vec![e(g + i, j, 1), e(g + j, i, 1)]);
                        }
                    }
                }
            }
            Family::SpecialLinear => {
                let n = spec.param;
                for i in 0..n - 1 {
                    basis.push(vec![e(i, i, 1), e(i + 1, i + 1, -1)]);
                }
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            if j == i + 1 {
                                raising.push(basis.len());
                            }
                            basis.push(vec![e(i, j, 1)]);
                        }
                    }
                }
            }
        }
        let basis: Vec<RationalMatrix> = basis.into_iter().map(|t| RationalMatrix::from_triplets(d, d, t)).collect();
        let defining_weights = defining_weights(&spec);
        let roots = basis
            .iter()
            .map(|m| {
                // all entries of a root vector shift weights by the same root
                match m.triplets().find(|(r, c, _)| r != c) {
                    Some((r, c, _)) => {
                        spec.normalize(defining_weights[r].iter().zip(&defining_weights[c]).map(|(a, b)| a - b).collect())
                    }
                    None => vec![0; spec.weight_len()],
                }
            })
            .collect();
        let n = basis.len();
        let gram = RationalMatrix::from_triplets(
            n,
            n,
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter_map(|(a, b)| {
                let t = trace_of_product(&basis[a], &basis[b]);
                (!t.is_zero()).then_some((a, b, t))
            }),
        );
        let ginv = gram.inverse().expect("trace form is nondegenerate");
        let casimir_terms = ginv.triplets().map(|(a, b, c)| (a, b, c.clone())).collect();
        Arc::new(LieAlgebra { spec, basis, roots, raising, casimir_terms })
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalMatrix] {
        &self.basis
    }

    /// Root of each basis element; zero on the Cartan part.
    pub fn root(&self, a: usize) -> &Weight {
        &self.roots[a]
    }

    /// Indices of the simple raising operators `e_i`.
    pub fn raising(&self) -> &[usize] {
        &self.raising
    }

    pub fn casimir_terms(&self) -> &[(usize, usize, Rational)] {
        &self.casimir_terms
    }

    /// Coordinates of a matrix of the algebra in the basis, via the trace form.
    pub fn coordinates(&self, x: &RationalMatrix) -> RationalVec {
        let pairings: Vec<Rational> = self.basis.iter().map(|b| trace_of_product(b, x)).collect();
        SparseVec::from_pairs(self.casimir_terms.iter().map(|(a, b, c)| (*a, c * &pairings[*b])))
    }
}

fn defining_weights(spec: &LieAlgebraSpec) -> Vec<Weight> {
    let p = spec.param;
    let unit = |i: usize, s: i64| {
        let mut v = vec![0i64; p];
        v[i] = s;
        v
    };
    match spec.family {
        Family::Symplectic => (0..p).map(|i| unit(i, 1)).chain((0..p).map(|i| unit(i, -1))).collect(),
        Family::SpecialLinear => (0..p).map(|i| spec.normalize(unit(i, 1))).collect(),
    }
}

fn trace_of_product(a: &RationalMatrix, b: &RationalMatrix) -> Rational {
    let mut acc = Rational::zero();
    for (i, k, x) in a.triplets() {
        let y = b.get(k, i);
        if !y.is_zero() {
            acc = &acc + &(x * &y);
        }
    }
    acc
}

/// `x` acting as a derivation on `v_{s_1} ∧ … ∧ v_{s_k}`; `cols[i]` is `x v_i`.
pub fn wedge_derivation(cols: &[RationalVec], set: &[usize]) -> Vec<(Vec<usize>, Rational)> {
    let mut out = Vec::new();
    for pos in 0..set.len() {
        for (r, c) in cols[set[pos]].iter() {
            let mut s = set.to_vec();
            s[pos] = r;
            if let Some((sorted, sign)) = sort_with_sign(&s) {
                out.push((sorted, if sign > 0 { c.clone() } else { -c }));
            }
        }
    }
    out
}

/// `x` acting as a derivation on the monomial `v_{m_1} ⋯ v_{m_d}`.
pub fn sym_derivation(cols: &[RationalVec], mono: &[usize]) -> Vec<(Vec<usize>, Rational)> {
    let mut out = Vec::new();
    for pos in 0..mono.len() {
        for (r, c) in cols[mono[pos]].iter() {
            let mut m = mono.to_vec();
            m[pos] = r;
            m.sort_unstable();
            out.push((m, c.clone()));
        }
    }
    out
}

/// A representation with a basis of weight vectors.
#[derive(Clone, Debug)]
pub struct WeightModule {
    algebra: Arc<LieAlgebra>,
    dim: usize,
    /// Action of each basis element of the algebra.
    action: Vec<RationalMatrix>,
    weights: Vec<Weight>,
}

impl WeightModule {
    pub fn new(algebra: Arc<LieAlgebra>, action: Vec<RationalMatrix>, weights: Vec<Weight>) -> Result<Self> {
        let dim = weights.len();
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: action.len() });
        }
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.rows().max(m.cols()) });
            }
        }
        Ok(WeightModule { algebra, dim, action, weights })
    }

    pub fn defining(algebra: &Arc<LieAlgebra>) -> Self {
        let weights = defining_weights(algebra.spec());
        WeightModule { algebra: algebra.clone(), dim: weights.len(), action: algebra.basis().to_vec(), weights }
    }

    pub fn trivial(algebra: &Arc<LieAlgebra>) -> Self {
        let w = vec![0; algebra.spec().weight_len()];
        WeightModule {
            algebra: algebra.clone(),
            dim: 1,
            action: vec![RationalMatrix::zeros(1, 1); algebra.dim()],
            weights: vec![w],
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        self.algebra.spec()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[RationalMatrix] {
        &self.action
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn exterior_power(&self, k: usize) -> Self {
        let basis = SubsetBasis::new(self.dim, k);
        let action = self
            .action
            .par_iter()
            .map(|x| {
                let cols = x.columns();
                let columns = basis
                    .iter()
                    .map(|s| {
                        SparseVec::from_pairs(
                            wedge_derivation(&cols, s).into_iter().map(|(t, c)| (basis.index_of(&t).unwrap(), c)),
                        )
                    })
                    .collect();
                RationalMatrix::from_columns(basis.len(), basis.len(), columns)
            })
            .collect();
        let weights = basis.iter().map(|s| self.sum_weights(s)).collect();
        WeightModule { algebra: self.algebra.clone(), dim: basis.len(), action, weights }
    }

    pub fn symmetric_power(&self, d: usize) -> Self {
        let basis = MonomialBasis::new(self.dim, d);
        let action = self
            .action
            .par_iter()
            .map(|x| {
                let cols = x.columns();
                let columns = basis
                    .iter()
                    .map(|m| {
                        SparseVec::from_pairs(
                            sym_derivation(&cols, m).into_iter().map(|(t, c)| (basis.index_of(&t).unwrap(), c)),
                        )
                    })
                    .collect();
                RationalMatrix::from_columns(basis.len(), basis.len(), columns)
            })
            .collect();
        let weights = basis.iter().map(|m| self.sum_weights(m)).collect();
        WeightModule { algebra: self.algebra.clone(), dim: basis.len(), action, weights }
    }

    /// Basis `u_i ⊗ v_j` at index `i * other.dim + j`.
    pub fn tensor(&self, other: &WeightModule) -> Self {
        let (da, db) = (self.dim, other.dim);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                let mut triplets = Vec::new();
                for (r, c, v) in x.triplets() {
                    for j in 0..db {
                        triplets.push((r * db + j, c * db + j, v.clone()));
                    }
                }
                for (r, c, v) in y.triplets() {
                    for i in 0..da {
                        triplets.push((i * db + r, i * db + c, v.clone()));
                    }
                }
                RationalMatrix::from_triplets(da * db, da * db, triplets)
            })
            .collect();
        let weights = (0..da)
            .flat_map(|i| {
                (0..db).map(move |j| (i, j))
            })
            .map(|(i, j)| self.spec().normalize(self.weights[i].iter().zip(&other.weights[j]).map(|(a, b)| a + b).collect()))
            .collect();
        WeightModule { algebra: self.algebra.clone(), dim: da * db, action, weights }
    }

    fn sum_weights(&self, idx: &[usize]) -> Weight {
        let mut w = vec![0i64; self.spec().weight_len()];
        for &i in idx {
            for (a, b) in w.iter_mut().zip(&self.weights[i]) {
                *a += b;
            }
        }
        self.spec().normalize(w)
    }

    fn check_weight_homogeneous(&self, v: &RationalVec) -> Result<()> {
        let mut it = v.iter().map(|(i, _)| &self.weights[i]);
        if let Some(first) = it.next() {
            if it.any(|w| w != first) {
                return Err(Error::InvalidInput("vector is not a weight vector".into()));
            }
        }
        Ok(())
    }

    fn check_invariant(&self, space: &Subspace<Rational>) -> Result<()> {
        let basis = space.basis();
        let ok = self.action.par_iter().all(|x| basis.iter().all(|b| space.contains(&x.apply(b))));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("subspace is not invariant".into()))
        }
    }

    /// Quotient by the submodule spanned by `vectors` (weight vectors).
    /// The quotient basis is the set of non-pivot coordinates.
    pub fn quotient(&self, vectors: &[RationalVec]) -> Result<(WeightModule, QuotientMap<Rational>)> {
        for v in vectors {
            self.check_weight_homogeneous(v)?;
        }
        let space = Subspace::spanned_by(self.dim, vectors);
        self.check_invariant(&space)?;
        let qmap = QuotientMap::new(space);
        let reps = qmap.representatives().to_vec();
        let action = self
            .action
            .par_iter()
            .map(|x| {
                let columns = reps.iter().map(|&c| qmap.project(&x.column(c))).collect();
                RationalMatrix::from_columns(reps.len(), reps.len(), columns)
            })
            .collect();
        let weights = reps.iter().map(|&c| self.weights[c].clone()).collect();
        Ok((WeightModule { algebra: self.algebra.clone(), dim: reps.len(), action, weights }, qmap))
    }

    /// Restriction to the submodule spanned by `vectors` (weight vectors).
    /// The basis is the reduced echelon basis, ordered by pivot.
    pub fn submodule(&self, vectors: &[RationalVec]) -> Result<(WeightModule, Vec<RationalVec>)> {
        for v in vectors {
            self.check_weight_homogeneous(v)?;
        }
        let space = Subspace::spanned_by(self.dim, vectors);
        self.check_invariant(&space)?;
        let rref = space.reduced_rows();
        let pivots: Vec<usize> = rref.keys().copied().collect();
        let position: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let basis: Vec<RationalVec> = rref.into_values().collect();
        let action = self
            .action
            .par_iter()
            .map(|x| {
                let columns = basis
                    .iter()
                    .map(|b| {
                        let image = x.apply(b);
                        SparseVec::from_pairs(image.iter().filter_map(|(i, c)| position.get(&i).map(|&k| (k, c.clone()))))
                    })
                    .collect();
                RationalMatrix::from_columns(basis.len(), basis.len(), columns)
            })
            .collect();
        let weights = pivots.iter().map(|&p| self.weights[p].clone()).collect();
        Ok((WeightModule { algebra: self.algebra.clone(), dim: basis.len(), action, weights }, basis))
    }

    /// Basis indices of each weight space.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(i);
        }
        out
    }

    /// `Σ G⁻¹_ab ρ(x_a) ρ(x_b)`.
    pub fn casimir_matrix(&self) -> RationalMatrix {
        let terms: Vec<RationalMatrix> = self
            .algebra
            .casimir_terms()
            .par_iter()
            .map(|(a, b, c)| self.action[*a].mul(&self.action[*b]).scale(c))
            .collect();
        terms.into_iter().fold(RationalMatrix::zeros(self.dim, self.dim), |acc, t| acc.add(&t))
    }

    /// Basis of the joint kernel of the raising operators, tagged by weight.
    pub fn highest_weight_vectors(&self) -> Vec<(Weight, RationalVec)> {
        let spec = *self.spec();
        let spaces: Vec<(Weight, Vec<usize>)> =
            self.weight_spaces().into_iter().filter(|(w, _)| spec.is_dominant(w)).collect();
        let raising = self.algebra.raising();
        let per_space: Vec<Vec<(Weight, RationalVec)>> = spaces
            .par_iter()
            .map(|(w, idx)| {
                let mut triplets = Vec::new();
                for (k, &op) in raising.iter().enumerate() {
                    for (local, &i) in idx.iter().enumerate() {
                        for (r, c) in self.action[op].column(i).iter() {
                            triplets.push((k * self.dim + r, local, c.clone()));
                        }
                    }
                }
                let m = RationalMatrix::from_triplets(raising.len() * self.dim, idx.len(), triplets);
                m.kernel_basis()
                    .into_iter()
                    .map(|v| (w.clone(), SparseVec::from_pairs(v.iter().map(|(l, c)| (idx[l], c.clone())))))
                    .collect()
            })
            .collect();
        per_space.into_iter().flatten().collect()
    }

    /// Highest weights of the irreducible constituents with multiplicities.
    pub fn constituents(&self) -> BTreeMap<HighestWeight, usize> {
        let mut out = BTreeMap::new();
        for (w, _) in self.highest_weight_vectors() {
            let hw = self.spec().highest_weight_of(&w).expect("dominant");
            *out.entry(hw).or_insert(0) += 1;
        }
        out
    }

    /// The `λ`-isotypic component, cut out as a Casimir eigenspace.
    pub fn isotypic_component(&self, hw: &HighestWeight) -> Result<IsotypicComponent> {
        Ok(self.isotypic_components(std::slice::from_ref(hw))?.remove(0))
    }

    /// Several isotypic components sharing one Casimir computation. Each
    /// requested constituent must occur at most once and have a Casimir
    /// eigenvalue no other constituent shares; the eigenspace dimension is
    /// checked against the Weyl formula.
    pub fn isotypic_components(&self, hws: &[HighestWeight]) -> Result<Vec<IsotypicComponent>> {
        let constituents = self.constituents();
        let spec = *self.spec();
        let mut targets = Vec::with_capacity(hws.len());
        for hw in hws {
            let found = constituents.get(hw).copied().unwrap_or(0);
            if found > 1 {
                return Err(Error::MultiplicityTooHigh { found });
            }
            let c = spec.casimir_eigenvalue(&spec.epsilon_coords(hw)?);
            for other in constituents.keys() {
                if other != hw && spec.casimir_eigenvalue(&spec.epsilon_coords(other)?) == c {
                    return Err(Error::EigenvalueCollision { eigenvalue: c.to_string() });
                }
            }
            let expected = if found == 1 { weyl_dim(&spec, hw)? as usize } else { 0 };
            targets.push((hw.clone(), c, expected));
        }
        let casimir = self.casimir_matrix();
        targets
            .into_iter()
            .map(|(hw, c, expected)| {
                let comp = self.eigenspace(&c, &casimir);
                if comp.basis.len() != expected {
                    return Err(Error::Inconsistent(format!(
                        "eigenspace of {c} has dimension {}, Weyl formula gives {expected}",
                        comp.basis.len()
                    )));
                }
                Ok(IsotypicComponent { highest_weight: hw, ..comp })
            })
            .collect()
    }

    /// The projection onto the `λ`-isotypic component along the others.
    pub fn isotypic_projection(&self, hw: &HighestWeight) -> Result<RationalMatrix> {
        Ok(self.isotypic_component(hw)?.projection())
    }

    /// Eigenspace of a diagonalizable operator commuting with the weights,
    /// with coordinates along the sum of the other eigenspaces.
    fn eigenspace(&self, c: &Rational, op: &RationalMatrix) -> IsotypicComponent {
        let spaces: Vec<(Weight, Vec<usize>)> = self.weight_spaces().into_iter().collect();
        let parts: Vec<Vec<(Weight, RationalVec, RationalVec)>> = spaces
            .par_iter()
            .map(|(w, idx)| {
                let local = op.submatrix(idx, idx).sub(&RationalMatrix::scalar(idx.len(), c));
                let kernel = local.kernel_basis();
                if kernel.is_empty() {
                    return Vec::new();
                }
                let image = Subspace::spanned_by(idx.len(), &local.columns()).basis();
                let mut cols = kernel.clone();
                cols.extend(image);
                let b = RationalMatrix::from_columns(idx.len(), idx.len(), cols);
                let binv = b.inverse().expect("operator is diagonalizable on each weight space");
                kernel
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let lift = |u: &RationalVec| SparseVec::from_pairs(u.iter().map(|(l, x)| (idx[l], x.clone())));
                        (w.clone(), lift(v), lift(binv.row(k)))
                    })
                    .collect()
            })
            .collect();
        let mut basis = Vec::new();
        let mut weights = Vec::new();
        let mut functionals = Vec::new();
        for (w, v, f) in parts.into_iter().flatten() {
            weights.push(w);
            basis.push(v);
            functionals.push(f);
        }
        let coords = RationalMatrix::from_rows(functionals.len(), self.dim, functionals);
        IsotypicComponent {
            highest_weight: HighestWeight::zero(self.spec().rank()),
            eigenvalue: c.clone(),
            ambient: self.dim,
            basis,
            weights,
            coords,
        }
    }
}

/// An isotypic component with a weight basis and its coordinate functionals.
#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub highest_weight: HighestWeight,
    pub eigenvalue: Rational,
    pub ambient: usize,
    /// Weight vectors spanning the component.
    pub basis: Vec<RationalVec>,
    pub weights: Vec<Weight>,
    /// `dim × ambient`; row `k` reads off the coefficient of `basis[k]` and
    /// vanishes on the other isotypic components.
    pub coords: RationalMatrix,
}

impl IsotypicComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient, self.basis.len(), self.basis.clone())
    }

    pub fn projection(&self) -> RationalMatrix {
        self.basis_matrix().mul(&self.coords)
    }
}

/// `V(λ_k)`: for `sp`, `∧^k H / (θ ∧ ∧^{k-2} H)`; for `sl`, `∧^k C^n`.
pub fn fundamental_module(algebra: &Arc<LieAlgebra>, k: usize) -> Result<WeightModule> {
    let spec = *algebra.spec();
    if k == 0 || k > spec.rank() {
        return Err(Error::InvalidInput(format!("fundamental weight index {k} outside 1..={}", spec.rank())));
    }
    let wedge = WeightModule::defining(algebra).exterior_power(k);
    match spec.family {
        Family::SpecialLinear => Ok(wedge),
        Family::Symplectic => {
            if k < 2 {
                return Ok(wedge);
            }
            let g = spec.param;
            let big = SubsetBasis::new(2 * g, k);
            let theta_wedge: Vec<RationalVec> = SubsetBasis::new(2 * g, k - 2)
                .iter()
                .map(|s| {
                    SparseVec::from_pairs((0..g).filter_map(|i| {
                        let mut t = vec![i, g + i];
                        t.extend_from_slice(s);
                        big.signed_index(&t).map(|(idx, sign)| (idx, Rational::from_integer(sign)))
                    }))
                })
                .filter(|v| !v.is_zero())
                .collect();
            Ok(wedge.quotient(&theta_wedge)?.0)
        }
    }
}

/// The symplectic form `θ = Σ a_i ∧ b_i` in the pair basis of `∧²H`.
pub fn theta_vector(g: usize) -> RationalVec {
    let pairs = SubsetBasis::new(2 * g, 2);
    SparseVec::from_pairs((0..g).map(|i| (pairs.index_of(&[i, g + i]).unwrap(), Rational::one())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(v: &[u32]) -> HighestWeight {
        HighestWeight(v.to_vec())
    }

    fn commutator(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
        a.mul(b).sub(&b.mul(a))
    }

    /// ρ([x_a, x_b]) = [ρ(x_a), ρ(x_b)] for all basis pairs.
    fn is_representation(m: &WeightModule) -> bool {
        let alg = m.algebra();
        (0..alg.dim()).all(|a| {
            (0..alg.dim()).all(|b| {
                let coords = alg.coordinates(&commutator(&alg.basis()[a], &alg.basis()[b]));
                let mut lhs = RationalMatrix::zeros(m.dim(), m.dim());
                for (k, c) in coords.iter() {
                    lhs = lhs.add(&m.action()[k].scale(c));
                }
                lhs == commutator(&m.action()[a], &m.action()[b])
            })
        })
    }

    #[test]
    fn weyl_dimension_examples() {
        let sl2 = LieAlgebraSpec::special_linear(2);
        for q in 0..6 {
            assert_eq!(weyl_dim(&sl2, &hw(&[q])).unwrap(), q as u64 + 1);
        }
        let sp6 = LieAlgebraSpec::symplectic(3);
        assert_eq!(weyl_dim(&sp6, &hw(&[0, 2, 0])).unwrap(), 90);
        assert_eq!(weyl_dim(&sp6, &hw(&[0, 0, 1])).unwrap(), 14);
        assert_eq!(weyl_dim(&sp6, &hw(&[1, 0, 0])).unwrap(), 6);
        let sp8 = LieAlgebraSpec::symplectic(4);
        assert_eq!(weyl_dim(&sp8, &hw(&[0, 0, 1, 0])).unwrap(), 48);
        assert!(weyl_dim(&sp8, &hw(&[1])).is_err());
    }

    #[test]
    fn defining_representations_are_homomorphisms() {
        for spec in [LieAlgebraSpec::symplectic(2), LieAlgebraSpec::special_linear(3)] {
            let alg = LieAlgebra::new(spec);
            let h = WeightModule::defining(&alg);
            assert!(is_representation(&h));
            assert!(is_representation(&h.exterior_power(2)));
            assert!(is_representation(&h.symmetric_power(2)));
        }
        assert_eq!(LieAlgebra::new(LieAlgebraSpec::symplectic(3)).dim(), 21);
    }

    #[test]
    fn theta_is_invariant() {
        let alg = LieAlgebra::new(LieAlgebraSpec::symplectic(3));
        let w2 = WeightModule::defining(&alg).exterior_power(2);
        let theta = theta_vector(3);
        assert!(w2.action().iter().all(|x| x.apply(&theta).is_zero()));
    }

    #[test]
    fn casimir_is_scalar_on_irreducibles() {
        let sl2 = LieAlgebra::new(LieAlgebraSpec::special_linear(2));
        let c = WeightModule::defining(&sl2).casimir_matrix();
        assert_eq!(c, RationalMatrix::scalar(2, &Rational::new(3, 2)));
        let alg = LieAlgebra::new(LieAlgebraSpec::symplectic(3));
        let h = WeightModule::defining(&alg);
        let expected = alg.spec().casimir_eigenvalue(&[1, 0, 0]);
        assert_eq!(h.casimir_matrix(), RationalMatrix::scalar(6, &expected));
        let t = WeightModule::trivial(&alg);
        assert!(t.casimir_matrix().is_zero());
        let v = fundamental_module(&alg, 3).unwrap();
        let expected = alg.spec().casimir_eigenvalue(&[1, 1, 1]);
        assert_eq!(v.casimir_matrix(), RationalMatrix::scalar(14, &expected));
    }

    #[test]
    fn casimir_commutes_with_action() {
        let alg = LieAlgebra::new(LieAlgebraSpec::symplectic(2));
        let m = WeightModule::defining(&alg).exterior_power(2);
        let c = m.casimir_matrix();
        assert!(m.action().iter().all(|x| x.mul(&c) == c.mul(x)));
    }

    #[test]
    fn fundamental_module_dimensions() {
        let alg = LieAlgebra::new(LieAlgebraSpec::symplectic(3));
        assert_eq!(fundamental_module(&alg, 1).unwrap().dim(), 6);
        let v = fundamental_module(&alg, 3).unwrap();
        assert_eq!(v.dim(), 14);
        assert!(is_representation(&v));
        assert!(fundamental_module(&alg, 4).is_err());
        let sl4 = LieAlgebra::new(LieAlgebraSpec::special_linear(4));
        assert_eq!(fundamental_module(&sl4, 2).unwrap().dim(), 6);
    }

    #[test]
    fn clebsch_gordan() {
        let sl2 = LieAlgebra::new(LieAlgebraSpec::special_linear(2));
        let c2 = WeightModule::defining(&sl2);
        let t = c2.tensor(&c2);
        let hws: Vec<HighestWeight> = t.constituents().into_keys().collect();
        assert_eq!(hws, vec![hw(&[0]), hw(&[2])]);
        let irreducible = c2.symmetric_power(3);
        let v = irreducible.highest_weight_vectors();
        assert_eq!(v.len(), 1);
        assert_eq!(irreducible.spec().highest_weight_of(&v[0].0), Some(hw(&[3])));
    }

    #[test]
    fn projections_on_tensor_square() {
        let sl2 = LieAlgebra::new(LieAlgebraSpec::special_linear(2));
        let c2 = WeightModule::defining(&sl2);
        let t = c2.tensor(&c2);
        let p = t.isotypic_projection(&hw(&[2])).unwrap();
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.rank(), 3);
        assert!(t.action().iter().all(|x| x.mul(&p) == p.mul(x)));
        let p0 = t.isotypic_projection(&hw(&[0])).unwrap();
        assert_eq!(p0.rank(), 1);
        assert!(p.mul(&p0).is_zero());
        let s3 = c2.symmetric_power(3);
        assert_eq!(s3.isotypic_projection(&hw(&[3])).unwrap(), RationalMatrix::identity(4));
        // C² ⊗ C² ⊗ C² contains V(1) twice
        let t3 = t.tensor(&c2);
        assert!(matches!(t3.isotypic_projection(&hw(&[1])), Err(Error::MultiplicityTooHigh { found: 2 })));
    }

    #[test]
    fn sl_highest_weight_in_sym_tensor_wedge() {
        // Sym^q C^n ⊗ ∧² C^n contains qλ₁ + λ₂ with vector e₁^q ⊗ (e₁∧e₂)
        let n = 3;
        let alg = LieAlgebra::new(LieAlgebraSpec::special_linear(n));
        let h = WeightModule::defining(&alg);
        for q in 0..3 {
            let m = h.symmetric_power(q).tensor(&h.exterior_power(2));
            let target = hw(&[q as u32, 1]);
            assert_eq!(m.constituents().get(&target), Some(&1));
            let hwv = m.highest_weight_vectors();
            let (_, v) = hwv.iter().find(|(w, _)| alg.spec().highest_weight_of(w) == Some(target.clone())).unwrap();
            // e₁^q is monomial 0, e₁∧e₂ is pair 0
            assert_eq!(v.iter().map(|(i, _)| i).collect::<Vec<_>>(), vec![0]);
        }
    }
}
