//! The graded module `M = C ⊕ coker(q)` attached to a genus `g`.
//!
//! `H = C^{2g}` carries the standard `sp(2g)` action and the intersection
//! form θ. `V = ∧³H / (θ ∧ H)`, and `∧²V` splits as `R ⊕ Q ⊕ C·z` with
//! `Q = V(2λ₂)` and `z` spanning the invariant line. The map
//!
//! `q : Sym(V) ⊗ ∧³V → Sym(V) ⊗ Q`,
//! `f ⊗ (a₀∧a₁∧a₂) ↦ Σ_{i ∈ Z/3} f·a_i ⊗ π(a_{i+1} ∧ a_{i+2})`
//!
//! uses the idempotent equivariant projection `π : ∧²V → Q`, written in a
//! weight basis of `Q`. Results for `g < 6` are computed the same way but
//! lie outside the range where `coker(q)` is known to be finite.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alex_module::{coker_dims_within, delta3, GradedMap};
use crate::budget::Budget;
use crate::combinatorics::{binomial, MonomialBasis, SubsetBasis};
use crate::error::{Error, Result};
use crate::exact_linalg::{span_contains, Rational, RationalMatrix, RationalVec, SparseVec};
use crate::free_lie::FreeLieAlgebra;
use crate::quad_lie::LiePresentation;
use crate::rep_semisimple::{
    fundamental_module, sym_derivation, wedge_derivation, weyl_dim, HighestWeight, IsotypicComponent, LieAlgebra,
    LieAlgebraSpec, Weight, WeightModule,
};

/// Genus above which computations need an explicit opt-in.
pub const LARGE_GENUS: usize = 4;
/// Highest degree computed at [`LARGE_GENUS`] without opt-in.
pub const LARGE_GENUS_MAX_DEGREE: usize = 1;

/// `H` with basis `a_1..a_g, b_1..b_g` and `θ(a_i, b_i) = 1`.
#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    g: usize,
    theta: RationalMatrix,
}

impl SymplecticSpace {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidInput("genus must be positive".into()));
        }
        let theta = RationalMatrix::from_triplets(
            2 * g,
            2 * g,
            (0..g).flat_map(|i| [(i, g + i, Rational::one()), (g + i, i, Rational::from_integer(-1))]),
        );
        Ok(SymplecticSpace { g, theta })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn labels(&self) -> Vec<String> {
        (1..=self.g).map(|i| format!("a{i}")).chain((1..=self.g).map(|i| format!("b{i}"))).collect()
    }

    /// Gram matrix of θ.
    pub fn theta(&self) -> &RationalMatrix {
        &self.theta
    }
}

fn check_genus(g: usize) -> Result<()> {
    if g < 3 {
        return Err(Error::InvalidInput(format!("genus {g} < 3")));
    }
    Ok(())
}

/// Refuses sizes beyond the supported range unless `allow_large` is set.
pub fn check_scale(g: usize, max_degree: Option<usize>, allow_large: bool) -> Result<()> {
    if allow_large {
        return Ok(());
    }
    if g > LARGE_GENUS {
        return Err(Error::BudgetExceeded { what: "genus without --allow-large".into(), needed: g as u64, limit: LARGE_GENUS as u64 });
    }
    if let Some(n) = max_degree {
        if g == LARGE_GENUS && n > LARGE_GENUS_MAX_DEGREE {
            return Err(Error::BudgetExceeded {
                what: format!("degree at genus {g} without --allow-large"),
                needed: n as u64,
                limit: LARGE_GENUS_MAX_DEGREE as u64,
            });
        }
    }
    Ok(())
}

/// `V`, `∧²V` and its decomposition for one genus.
pub struct JohnsonData {
    g: usize,
    algebra: Arc<LieAlgebra>,
    v: WeightModule,
    wedge2: WeightModule,
    q: IsotypicComponent,
    z: IsotypicComponent,
    /// Weight vectors spanning the sum of the remaining constituents.
    r: Vec<RationalVec>,
    r_constituents: Vec<(HighestWeight, usize)>,
}

impl JohnsonData {
    pub fn new(g: usize, budget: &Budget) -> Result<Self> {
        check_genus(g)?;
        let spec = LieAlgebraSpec::symplectic(g);
        let dim_v = binomial(2 * g as u64, 3) - 2 * g as u64;
        budget.check("∧²V action", binomial(dim_v, 2) * (2 * g * g + g) as u64)?;
        let algebra = LieAlgebra::new(spec);
        let v = fundamental_module(&algebra, 3)?;
        let wedge2 = v.exterior_power(2);
        let q_hw = two_lambda_two(g);
        let zero = HighestWeight::zero(g);
        let mut comps = wedge2.isotypic_components(&[q_hw.clone(), zero.clone()])?;
        let z = comps.pop().unwrap();
        let q = comps.pop().unwrap();
        if z.dim() != 1 {
            return Err(Error::Inconsistent(format!("invariant part of ∧²V has dimension {}", z.dim())));
        }
        let r_constituents: Vec<(HighestWeight, usize)> =
            wedge2.constituents().into_iter().filter(|(hw, _)| *hw != q_hw && *hw != zero).collect();
        let r = complement(&wedge2, &[&q, &z]);
        Ok(JohnsonData { g, algebra, v, wedge2, q, z, r, r_constituents })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn v(&self) -> &WeightModule {
        &self.v
    }

    pub fn wedge2(&self) -> &WeightModule {
        &self.wedge2
    }

    pub fn q_component(&self) -> &IsotypicComponent {
        &self.q
    }

    /// The invariant vector `z ∈ ∧²V`.
    pub fn z(&self) -> &RationalVec {
        &self.z.basis[0]
    }

    pub fn r_basis(&self) -> &[RationalVec] {
        &self.r
    }

    /// The quadratic presentation `(V, R)`.
    pub fn presentation(&self) -> LiePresentation {
        LiePresentation::new(self.v.dim(), self.r.clone()).expect("R lies in ∧²V")
    }

    /// `(V, R + C·z)`, whose degree-two piece is `Q`.
    pub fn reduced_presentation(&self) -> LiePresentation {
        let mut rel = self.r.clone();
        rel.push(self.z().clone());
        LiePresentation::new(self.v.dim(), rel).expect("R + Cz lies in ∧²V")
    }

    pub fn build_q(&self) -> GradedMap {
        delta3(self.v.dim()).compose_target(&self.q.coords).expect("π has ∧²V as source")
    }

    /// Action of algebra basis element `x` on `Q` in its weight basis.
    pub fn q_action(&self, x: usize) -> RationalMatrix {
        self.q.coords.mul(&self.wedge2.action()[x].mul(&self.q.basis_matrix()))
    }
}

fn two_lambda_two(g: usize) -> HighestWeight {
    let mut hw = HighestWeight::zero(g);
    hw.0[1] = 2;
    hw
}

/// Weight vectors spanning the common kernel of the components' coordinate functionals.
fn complement(m: &WeightModule, comps: &[&IsotypicComponent]) -> Vec<RationalVec> {
    let spaces: Vec<(Weight, Vec<usize>)> = m.weight_spaces().into_iter().collect();
    let rows: Vec<&RationalVec> = comps.iter().flat_map(|c| c.coords.row_vectors()).collect();
    let parts: Vec<Vec<RationalVec>> = spaces
        .par_iter()
        .map(|(_, idx)| {
            let local: HashMap<usize, usize> = idx.iter().enumerate().map(|(l, &i)| (i, l)).collect();
            let restricted: Vec<RationalVec> = rows
                .iter()
                .map(|r| SparseVec::from_pairs(r.iter().filter_map(|(i, c)| local.get(&i).map(|&l| (l, c.clone())))))
                .filter(|r| !r.is_zero())
                .collect();
            let f = RationalMatrix::from_rows(restricted.len(), idx.len(), restricted);
            f.kernel_basis()
                .into_iter()
                .map(|v| SparseVec::from_pairs(v.iter().map(|(l, c)| (idx[l], c.clone()))))
                .collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub name: String,
    pub highest_weight: Option<HighestWeight>,
    pub dim: usize,
    /// Dimension from the Weyl formula, for identified irreducibles.
    pub weyl_dim: Option<u64>,
    pub casimir: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wedge2Decomposition {
    pub genus: usize,
    pub dim_v: usize,
    pub summands: Vec<Summand>,
    pub total: usize,
    /// Constituents of `R` with multiplicities.
    pub r_constituents: Vec<(HighestWeight, usize)>,
}

/// `∧²V = R ⊕ V(2λ₂) ⊕ V(0)` with dimensions from the Casimir eigenspaces.
pub fn decompose_wedge2_v(g: usize) -> Result<Wedge2Decomposition> {
    decompose_with(&JohnsonData::new(g, &Budget::from_env()?)?)
}

pub fn decompose_with(data: &JohnsonData) -> Result<Wedge2Decomposition> {
    let spec = *data.algebra.spec();
    let irreducible = |name: &str, c: &IsotypicComponent| -> Result<Summand> {
        Ok(Summand {
            name: name.to_string(),
            highest_weight: Some(c.highest_weight.clone()),
            dim: c.dim(),
            weyl_dim: Some(weyl_dim(&spec, &c.highest_weight)?),
            casimir: Some(c.eigenvalue.to_string()),
        })
    };
    let summands = vec![
        Summand { name: "R".into(), highest_weight: None, dim: data.r.len(), weyl_dim: None, casimir: None },
        irreducible("V(2λ₂)", &data.q)?,
        irreducible("V(0)", &data.z)?,
    ];
    let total = summands.iter().map(|s| s.dim).sum();
    if total != data.wedge2.dim() {
        return Err(Error::Inconsistent(format!("summands add to {total}, ∧²V has dimension {}", data.wedge2.dim())));
    }
    let r_weyl: u64 = data
        .r_constituents
        .iter()
        .map(|(hw, m)| weyl_dim(&spec, hw).map(|d| d * *m as u64))
        .sum::<Result<u64>>()?;
    if r_weyl != data.r.len() as u64 {
        return Err(Error::Inconsistent(format!("R has dimension {}, its constituents give {r_weyl}", data.r.len())));
    }
    Ok(Wedge2Decomposition {
        genus: data.g,
        dim_v: data.v.dim(),
        summands,
        total,
        r_constituents: data.r_constituents.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDims {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    /// `[dim R, dim Q, dim V(0)]`.
    #[serde(rename = "wedge2V")]
    pub wedge2_v: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JohnsonModuleReport {
    pub genus: usize,
    pub dims: ModuleDims,
    pub coker_q: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    /// Whether `g ≥ 6`, the range where `coker(q)` is known to be finite.
    pub finiteness_range: bool,
}

/// Dimensions of `coker(q)` and `M = C ⊕ coker(q)` in degrees `0..=max_degree`.
pub fn johnson_module_dims(g: usize, max_degree: usize) -> Result<JohnsonModuleReport> {
    let budget = Budget::from_env()?;
    let data = JohnsonData::new(g, &budget)?;
    johnson_report_with(&data, max_degree, &budget)
}

pub fn johnson_report_with(data: &JohnsonData, max_degree: usize, budget: &Budget) -> Result<JohnsonModuleReport> {
    let q = data.build_q();
    let coker = coker_dims_within(&q, max_degree, budget)?.dims;
    let mut m = coker.clone();
    m[0] += 1;
    Ok(JohnsonModuleReport {
        genus: data.g,
        dims: ModuleDims { v: data.v.dim(), q: data.q.dim(), wedge2_v: [data.r.len(), data.q.dim(), data.z.dim()] },
        coker_q: coker,
        m,
        finiteness_range: data.g >= 6,
    })
}

/// Checks `x · q(v) = q(x · v)` on `trials` random pairs of an algebra
/// basis element `x` and a sparse source vector `v` in degree `degree ≥ 1`.
/// Returns the number of pairs checked; a failure is an inconsistency.
pub fn check_equivariance(data: &JohnsonData, degree: usize, trials: usize, seed: u64) -> Result<usize> {
    if degree == 0 {
        return Err(Error::InvalidInput("the source of q vanishes in degree 0".into()));
    }
    let n = data.v.dim();
    let qmap = data.build_q();
    let source_dim = qmap.source_dim_in_degree(degree);
    let src_monos = MonomialBasis::new(n, degree - 1);
    let tgt_monos = MonomialBasis::new(n, degree);
    let triples = SubsetBasis::new(n, 3);
    let qdim = data.q.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let x = rng.gen_range(0..data.algebra.dim());
        let terms = rng.gen_range(1..=3);
        let v = SparseVec::from_pairs((0..terms).map(|_| {
            let col = rng.gen_range(0..source_dim);
            (col, Rational::from_integer(rng.gen_range(-3..=3)))
        }));
        let vcols = data.v.action()[x].columns();
        // x acting on Sym_{d-1}(V) ⊗ ∧³V
        let xv = SparseVec::from_pairs(v.iter().flat_map(|(col, c)| {
            let (m, t) = (col / triples.len(), col % triples.len());
            let mono = src_monos.get(m);
            let set = triples.get(t);
            let mut out = Vec::new();
            for (m2, a) in sym_derivation(&vcols, mono) {
                out.push((src_monos.index_of(&m2).unwrap() * triples.len() + t, &a * c));
            }
            for (s2, a) in wedge_derivation(&vcols, set) {
                out.push((m * triples.len() + triples.index_of(&s2).unwrap(), &a * c));
            }
            out
        }));
        let lhs = qmap.apply(degree, &xv)?;
        // x acting on Sym_d(V) ⊗ Q
        let qv = qmap.apply(degree, &v)?;
        let qx = data.q_action(x);
        let rhs = SparseVec::from_pairs(qv.iter().flat_map(|(row, c)| {
            let (m, t) = (row / qdim, row % qdim);
            let mono = tgt_monos.get(m);
            let mut out = Vec::new();
            for (m2, a) in sym_derivation(&vcols, mono) {
                out.push((tgt_monos.index_of(&m2).unwrap() * qdim + t, &a * c));
            }
            for (t2, a) in qx.column(t).iter() {
                out.push((m * qdim + t2, a * c));
            }
            out
        }));
        if lhs != rhs {
            return Err(Error::Inconsistent(format!("q is not equivariant at trial {trial} (generator {x})")));
        }
    }
    Ok(trials)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralZReport {
    pub genus: usize,
    pub dim_r: usize,
    /// Whether `[z, v] ∈ ideal(R)₃` for every basis vector `v` of `V`.
    pub central: bool,
    /// Basis vectors of `V` for which the membership fails.
    pub failures: Vec<usize>,
}

/// Tests in degree 3 whether the class of `z` is central in `L(V)/ideal(R)`.
pub fn central_z_check(g: usize) -> Result<CentralZReport> {
    let budget = Budget::from_env()?;
    let data = JohnsonData::new(g, &budget)?;
    central_z_with(&data, &budget)
}

pub fn central_z_with(data: &JohnsonData, budget: &Budget) -> Result<CentralZReport> {
    let n = data.v.dim();
    let l3 = (n as u64).pow(3).saturating_sub(n as u64) / 3;
    budget.check("L₃(V) basis", l3)?;
    let free = FreeLieAlgebra::new(n, 3);
    let weights = data.v.weights();
    let pair_weights = data.wedge2.weights();
    let z = data.z();
    let targets: Vec<RationalVec> =
        (0..n).into_par_iter().map(|k| free.bracket_coords(1, &SparseVec::unit(k), 2, z)).collect();
    // ideal(R)₃ splits by weight; only the weights of V can meet a target
    let wanted: BTreeSet<&Weight> = weights.iter().collect();
    let pairs: Vec<(usize, &RationalVec)> = (0..n)
        .flat_map(|k| data.r.iter().map(move |r| (k, r)))
        .filter(|(k, r)| {
            let rw = &pair_weights[r.leading().unwrap().0];
            let sum: Weight = weights[*k].iter().zip(rw).map(|(a, b)| a + b).collect();
            wanted.contains(&sum)
        })
        .collect();
    let spanning: Vec<RationalVec> =
        pairs.par_iter().map(|(k, r)| free.bracket_coords(1, &SparseVec::unit(*k), 2, r)).collect();
    let inside = span_contains(&spanning, &targets);
    let failures: Vec<usize> = inside.iter().enumerate().filter(|(_, &b)| !b).map(|(k, _)| k).collect();
    Ok(CentralZReport { genus: data.g, dim_r: data.r.len(), central: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alex_module::{coker_dims, nabla_bar};

    #[test]
    fn symplectic_space_form() {
        let h = SymplecticSpace::new(3).unwrap();
        let t = h.theta();
        assert_eq!(t.transpose(), t.scale(&Rational::from_integer(-1)));
        assert!(t.inverse().is_some());
        assert_eq!(t.get(0, 3), Rational::one());
        assert_eq!(h.labels()[3], "b1");
    }

    #[test]
    fn genus_three_decomposition() {
        let data = JohnsonData::new(3, &Budget::unlimited()).unwrap();
        assert_eq!(data.v().dim(), 14);
        let d = decompose_with(&data).unwrap();
        let dims: Vec<usize> = d.summands.iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![0, 90, 1]);
        assert_eq!(d.total, 91);
        assert_eq!(d.summands[1].weyl_dim, Some(90));
        assert!(d.r_constituents.is_empty());
    }

    #[test]
    fn genus_three_q_map() {
        let data = JohnsonData::new(3, &Budget::unlimited()).unwrap();
        let q = data.build_q();
        assert_eq!(q.source()[0].generator_dim, 364);
        assert_eq!(q.target().generator_dim, 90);
        // a₀∧a₁∧a₂ has three terms before projection
        assert!(delta3(14).symbol()[0].iter().all(|t| t.len() == 3));
        let report = johnson_report_with(&data, 1, &Budget::unlimited()).unwrap();
        assert_eq!(report.coker_q[0], 90);
        assert_eq!(report.m[0], 91);
        assert!(report.coker_q[1] <= 14 * 90);
        assert!(!report.finiteness_range);
        assert_eq!(check_equivariance(&data, 1, 20, 7).unwrap(), 20);
        // coker(q) agrees with coker(∇̄) for the presentation (V, R + Cz)
        let other = coker_dims(&nabla_bar(&data.reduced_presentation()), 1);
        assert_eq!(other.dims, report.coker_q);
    }

    #[test]
    fn projection_is_idempotent_and_equivariant() {
        let data = JohnsonData::new(3, &Budget::unlimited()).unwrap();
        let p = data.q_component().projection();
        assert_eq!(p.mul(&p), p);
        let w = data.wedge2();
        for x in w.action().iter().take(5) {
            assert_eq!(x.mul(&p), p.mul(x));
        }
    }

    #[test]
    fn genus_three_z_is_not_central() {
        let data = JohnsonData::new(3, &Budget::unlimited()).unwrap();
        let r = central_z_with(&data, &Budget::unlimited()).unwrap();
        assert_eq!(r.dim_r, 0);
        assert!(!r.central);
        assert_eq!(r.failures.len(), 14);
    }

    #[test]
    fn scale_policy() {
        assert!(check_scale(3, Some(5), false).is_ok());
        assert!(check_scale(4, Some(1), false).is_ok());
        assert!(matches!(check_scale(4, Some(2), false), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(check_scale(5, None, false), Err(Error::BudgetExceeded { .. })));
        assert!(check_scale(5, Some(3), true).is_ok());
        assert!(JohnsonData::new(2, &Budget::unlimited()).is_err());
    }
}
