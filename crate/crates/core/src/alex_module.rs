//! Free graded modules over `Sym(V)` and the maps δ₃, ∇ and ∇̄ between them.
//!
//! A free module `Sym(V) ⊗ W` has its generators in a single degree `d`, so
//! its degree-`q` piece is `Sym_{q-d}(V) ⊗ W`. A [`GradedMap`] is stored as
//! its symbol: each source generator goes to a sum of terms `x ⊗ w` or
//! `1 ⊗ w`, with `x` a variable and `w` a target generator. Within a
//! degree, basis vectors are ordered monomial-major: index
//! `mono * dim W + w`, monomials as in [`MonomialBasis`].
//!
//! For ∇ the relation block sits in degree 0 and the `∧³V` block in degree
//! 1, against `∧²V` in degree 0, so the degree-`q` matrix has source
//! `Sym_q ⊗ R ⊕ Sym_{q-1} ⊗ ∧³V` and target `Sym_q ⊗ ∧²V`.

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::combinatorics::{binomial, times_variable, MonomialBasis, SubsetBasis};
use crate::error::{Error, Result};
use crate::exact_linalg::{QuotientMap, Rational, RationalMatrix, RationalVec, SparseVec, Subspace};
use crate::free_lie::GradedDims;
use crate::quad_lie::{beta_matrix, LiePresentation};
use crate::rep_semisimple::{weyl_dim, HighestWeight, LieAlgebraSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreeGradedModule {
    pub base_dim: usize,
    pub generator_dim: usize,
    pub degree: usize,
}

impl FreeGradedModule {
    pub fn new(base_dim: usize, generator_dim: usize, degree: usize) -> Self {
        FreeGradedModule { base_dim, generator_dim, degree }
    }

    pub fn dim_in_degree(&self, q: usize) -> usize {
        match q.checked_sub(self.degree) {
            Some(s) => sym_dim(self.base_dim, s) * self.generator_dim,
            None => 0,
        }
    }
}

fn sym_dim(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial((n + d - 1) as u64, d as u64) as usize
}

/// One term `c · x_variable ⊗ w_target` (or `c · 1 ⊗ w_target`).
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTerm {
    pub variable: Option<usize>,
    pub target: usize,
    pub coeff: Rational,
}

impl SymbolTerm {
    pub fn new(variable: Option<usize>, target: usize, coeff: Rational) -> Self {
        SymbolTerm { variable, target, coeff }
    }
}

/// A `Sym(V)`-linear map `⊕_b Sym ⊗ W_b → Sym ⊗ W_t`.
#[derive(Clone, Debug)]
pub struct GradedMap {
    source: Vec<FreeGradedModule>,
    target: FreeGradedModule,
    /// `symbol[block][generator]`.
    symbol: Vec<Vec<Vec<SymbolTerm>>>,
}

impl GradedMap {
    pub fn new(source: Vec<FreeGradedModule>, target: FreeGradedModule, symbol: Vec<Vec<Vec<SymbolTerm>>>) -> Result<Self> {
        if symbol.len() != source.len() {
            return Err(Error::DimensionMismatch { expected: source.len(), found: symbol.len() });
        }
        for (block, gens) in source.iter().zip(&symbol) {
            if block.base_dim != target.base_dim {
                return Err(Error::InvalidInput("source and target use different variable counts".into()));
            }
            if gens.len() != block.generator_dim {
                return Err(Error::DimensionMismatch { expected: block.generator_dim, found: gens.len() });
            }
            for t in gens.iter().flatten() {
                if t.target >= target.generator_dim {
                    return Err(Error::DimensionMismatch { expected: target.generator_dim, found: t.target + 1 });
                }
                let shift = usize::from(t.variable.is_some());
                if block.degree != target.degree + shift {
                    return Err(Error::InvalidInput(format!(
                        "term {t:?} maps a degree-{} generator to degree {}",
                        block.degree,
                        target.degree + shift
                    )));
                }
                if t.variable.is_some_and(|v| v >= target.base_dim) {
                    return Err(Error::InvalidInput(format!("variable out of range in {t:?}")));
                }
            }
        }
        Ok(GradedMap { source, target, symbol })
    }

    pub fn source(&self) -> &[FreeGradedModule] {
        &self.source
    }

    pub fn target(&self) -> &FreeGradedModule {
        &self.target
    }

    pub fn base_dim(&self) -> usize {
        self.target.base_dim
    }

    pub fn symbol(&self) -> &[Vec<Vec<SymbolTerm>>] {
        &self.symbol
    }

    pub fn source_dim_in_degree(&self, q: usize) -> usize {
        self.source.iter().map(|b| b.dim_in_degree(q)).sum()
    }

    /// Number of symbol terms expanded by [`instantiate`](Self::instantiate).
    pub fn instantiation_size(&self, q: usize) -> u64 {
        self.source
            .iter()
            .zip(&self.symbol)
            .map(|(b, gens)| {
                let terms: usize = gens.iter().map(Vec::len).sum();
                match q.checked_sub(b.degree) {
                    Some(s) => sym_dim(b.base_dim, s) as u64 * terms as u64,
                    None => 0,
                }
            })
            .sum()
    }

    /// The degree-`q` matrix, `target_q × source_q`.
    pub fn instantiate(&self, q: usize) -> RationalMatrix {
        let n = self.base_dim();
        let rows = self.target.dim_in_degree(q);
        let target_monos = q.checked_sub(self.target.degree).map(|s| MonomialBasis::new(n, s));
        let mut columns: Vec<RationalVec> = Vec::with_capacity(self.source_dim_in_degree(q));
        for (block, gens) in self.source.iter().zip(&self.symbol) {
            let Some(s) = q.checked_sub(block.degree) else { continue };
            let monos = MonomialBasis::new(n, s);
            let tm = target_monos.as_ref().expect("source nonempty implies target nonempty");
            let block_cols: Vec<RationalVec> = (0..monos.len() * block.generator_dim)
                .into_par_iter()
                .map(|col| {
                    let (m, g) = (col / block.generator_dim, col % block.generator_dim);
                    self.image_of(tm, monos.get(m), &gens[g])
                })
                .collect();
            columns.extend(block_cols);
        }
        let cols = columns.len();
        RationalMatrix::from_columns(rows, cols, columns)
    }

    fn image_of(&self, target_monos: &MonomialBasis, mono: &[usize], terms: &[SymbolTerm]) -> RationalVec {
        let tdim = self.target.generator_dim;
        SparseVec::from_pairs(terms.iter().map(|t| {
            let idx = match t.variable {
                Some(v) => target_monos.index_of(&times_variable(mono, v)).unwrap(),
                None => target_monos.index_of(mono).unwrap(),
            };
            (idx * tdim + t.target, t.coeff.clone())
        }))
    }

    /// Applies the degree-`q` map to `v` without building the matrix.
    pub fn apply(&self, q: usize, v: &RationalVec) -> Result<RationalVec> {
        let n = self.base_dim();
        let Some(ts) = q.checked_sub(self.target.degree) else {
            return Ok(SparseVec::new());
        };
        let tm = MonomialBasis::new(n, ts);
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (block, gens) in self.source.iter().zip(&self.symbol) {
            if let Some(s) = q.checked_sub(block.degree) {
                let monos = MonomialBasis::new(n, s);
                let len = monos.len() * block.generator_dim;
                blocks.push((offset, len, monos, block.generator_dim, gens));
                offset += len;
            }
        }
        if let Some(i) = v.max_index() {
            if i >= offset {
                return Err(Error::DimensionMismatch { expected: offset, found: i + 1 });
            }
        }
        let mut out = SparseVec::new();
        for (col, c) in v.iter() {
            let (start, _, monos, gd, gens) = blocks.iter().find(|b| col < b.0 + b.1).unwrap();
            let local = col - start;
            let img = self.image_of(&tm, monos.get(local / gd), &gens[local % gd]);
            out = out.axpy(c, &img);
        }
        Ok(out)
    }

    pub fn instantiate_within(&self, q: usize, budget: &Budget) -> Result<RationalMatrix> {
        budget.check(&format!("degree-{q} matrix"), self.instantiation_size(q))?;
        Ok(self.instantiate(q))
    }

    /// Post-compose with a linear map on target generators, given as a
    /// `new_dim × old_dim` matrix.
    pub fn compose_target(&self, m: &RationalMatrix) -> Result<GradedMap> {
        if m.cols() != self.target.generator_dim {
            return Err(Error::DimensionMismatch { expected: self.target.generator_dim, found: m.cols() });
        }
        let columns = m.columns();
        let symbol = self
            .symbol
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|terms| {
                        let mut out: Vec<SymbolTerm> = Vec::new();
                        for t in terms {
                            for (k, c) in columns[t.target].iter() {
                                out.push(SymbolTerm::new(t.variable, k, &t.coeff * c));
                            }
                        }
                        merge_terms(out)
                    })
                    .collect()
            })
            .collect();
        let target = FreeGradedModule::new(self.target.base_dim, m.rows(), self.target.degree);
        GradedMap::new(self.source.clone(), target, symbol)
    }
}

fn merge_terms(mut terms: Vec<SymbolTerm>) -> Vec<SymbolTerm> {
    terms.sort_by_key(|a| (a.variable, a.target));
    let mut out: Vec<SymbolTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.variable == t.variable && last.target == t.target => {
                last.coeff = &last.coeff + &t.coeff;
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

/// Symbol of δ₃ on `∧³V` in the pair basis of `∧²V`:
/// `a∧b∧c ↦ a ⊗ b∧c + b ⊗ c∧a + c ⊗ a∧b`.
pub fn delta3_symbol(n: usize) -> Vec<Vec<SymbolTerm>> {
    let pairs = SubsetBasis::new(n, 2);
    SubsetBasis::new(n, 3)
        .iter()
        .map(|t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            vec![
                SymbolTerm::new(Some(a), pairs.index_of(&[b, c]).unwrap(), Rational::one()),
                SymbolTerm::new(Some(b), pairs.index_of(&[a, c]).unwrap(), Rational::from_integer(-1)),
                SymbolTerm::new(Some(c), pairs.index_of(&[a, b]).unwrap(), Rational::one()),
            ]
        })
        .collect()
}

pub fn delta3(n: usize) -> GradedMap {
    let wedge3 = binomial(n as u64, 3) as usize;
    let wedge2 = binomial(n as u64, 2) as usize;
    GradedMap::new(
        vec![FreeGradedModule::new(n, wedge3, 1)],
        FreeGradedModule::new(n, wedge2, 0),
        vec![delta3_symbol(n)],
    )
    .expect("well-formed")
}

/// `∇ = id ⊗ ι + δ₃ : Sym ⊗ (R ⊕ ∧³V) → Sym ⊗ ∧²V`.
pub fn nabla(p: &LiePresentation) -> GradedMap {
    let n = p.dim_v();
    let iota: Vec<Vec<SymbolTerm>> = p
        .relations()
        .iter()
        .map(|r| r.iter().map(|(k, c)| SymbolTerm::new(None, k, c.clone())).collect())
        .collect();
    let d3 = delta3(n);
    GradedMap::new(
        vec![FreeGradedModule::new(n, iota.len(), 0), d3.source[0]],
        d3.target,
        vec![iota, d3.symbol[0].clone()],
    )
    .expect("well-formed")
}

/// `∇̄ = (id ⊗ β) ∘ δ₃ : Sym ⊗ ∧³V → Sym ⊗ 𝒢₂`.
pub fn nabla_bar(p: &LiePresentation) -> GradedMap {
    delta3(p.dim_v()).compose_target(&beta_matrix(p)).expect("β has ∧²V as source")
}

/// `target − rank` in degrees `0..=max_degree`.
pub fn coker_dims(m: &GradedMap, max_degree: usize) -> GradedDims {
    coker_dims_within(m, max_degree, &Budget::unlimited()).expect("unlimited budget")
}

pub fn coker_dims_within(m: &GradedMap, max_degree: usize, budget: &Budget) -> Result<GradedDims> {
    for q in 0..=max_degree {
        budget.check(&format!("degree-{q} matrix"), m.instantiation_size(q))?;
    }
    let dims = (0..=max_degree)
        .into_par_iter()
        .map(|q| {
            let mat = m.instantiate(q);
            mat.rows() - mat.rank()
        })
        .collect();
    Ok(GradedDims::new(0, dims))
}

/// Least `q ≤ max_degree` with vanishing degree-`q` cokernel. Vanishing
/// must persist through `max_degree`, otherwise the result is an error.
pub fn nilpotence_order(m: &GradedMap, max_degree: usize) -> Result<Option<usize>> {
    let dims = coker_dims(m, max_degree);
    vanishing_degree(&dims)
}

pub fn vanishing_degree(dims: &GradedDims) -> Result<Option<usize>> {
    let Some(q) = dims.first_vanishing() else { return Ok(None) };
    if let Some(bad) = dims.degrees().find(|&d| d > q && dims.get(d) != Some(0)) {
        return Err(Error::Inconsistent(format!(
            "cokernel vanishes in degree {q} but not in degree {bad}: {:?}",
            dims.dims
        )));
    }
    Ok(Some(q))
}

/// Per-degree table in the JSON shape `{"degrees": [..], "coker_dims": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokerTable {
    pub degrees: Vec<usize>,
    pub coker_dims: Vec<usize>,
}

impl From<&GradedDims> for CokerTable {
    fn from(d: &GradedDims) -> Self {
        CokerTable { degrees: d.degrees().collect(), coker_dims: d.dims.clone() }
    }
}

/// `coker(m)` cut off above `max_degree`, with the action of each variable
/// as a matrix on the direct sum of the kept degrees.
#[derive(Clone, Debug)]
pub struct TruncatedCokernel {
    pub dims: GradedDims,
    /// First basis index of each degree in the direct sum.
    pub offsets: Vec<usize>,
    pub actions: Vec<RationalMatrix>,
}

impl TruncatedCokernel {
    pub fn total_dim(&self) -> usize {
        self.dims.dims.iter().sum()
    }
}

pub fn truncated_cokernel(m: &GradedMap, max_degree: usize) -> TruncatedCokernel {
    let n = m.base_dim();
    let tdim = m.target.generator_dim;
    let quotients: Vec<QuotientMap<Rational>> = (0..=max_degree)
        .into_par_iter()
        .map(|q| {
            let mat = m.instantiate(q);
            QuotientMap::new(Subspace::spanned_by(mat.rows(), &mat.columns()))
        })
        .collect();
    let dims: Vec<usize> = quotients.iter().map(QuotientMap::dim).collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for d in &dims {
        offsets.push(total);
        total += d;
    }
    let actions = (0..n)
        .map(|var| {
            let mut triplets = Vec::new();
            for q in 0..max_degree {
                let Some(s) = q.checked_sub(m.target.degree) else { continue };
                let here = MonomialBasis::new(n, s);
                let next = MonomialBasis::new(n, s + 1);
                for (k, &r) in quotients[q].representatives().iter().enumerate() {
                    let (mono, t) = (here.get(r / tdim), r % tdim);
                    let image = next.index_of(&times_variable(mono, var)).unwrap() * tdim + t;
                    for (j, c) in quotients[q + 1].project(&SparseVec::unit(image)).iter() {
                        triplets.push((offsets[q + 1] + j, offsets[q] + k, c.clone()));
                    }
                }
            }
            RationalMatrix::from_triplets(total, total, triplets)
        })
        .collect();
    TruncatedCokernel { dims: GradedDims::new(0, dims), offsets, actions }
}

/// `(q+n choose q+2)(q+1)`, the degree-`q` dimension of `coker δ₃` for `n` generators.
pub fn chen_closed_form(n: usize, q: usize) -> u64 {
    binomial((q + n) as u64, (q + 2) as u64) * (q as u64 + 1)
}

/// Degree-`q` comparison for the free Lie algebra on `n ≥ 2` generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChenCheck {
    pub n: usize,
    pub q: usize,
    pub closed_form: u64,
    pub computed: usize,
    /// Weyl dimension of the `sl_n` module with highest weight `qλ₁ + λ₂`.
    pub weyl_dim: u64,
    /// Whether `e₁^q ⊗ (e₁∧e₂)` survives in `coker δ₃`.
    pub highest_vector_nonzero: bool,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn chen_check(n: usize, q: usize, budget: &Budget) -> Result<ChenCheck> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least two generators".into()));
    }
    let d = delta3(n);
    let mat = d.instantiate_within(q, budget)?;
    let computed = mat.rows() - mat.rank();
    let spec = LieAlgebraSpec::special_linear(n);
    let mut hw = HighestWeight::zero(n - 1);
    hw.0[0] += q as u32;
    if n > 2 {
        hw.0[1] += 1;
    }
    let weyl = weyl_dim(&spec, &hw)?;
    let row = MonomialBasis::new(n, q).index_of(&vec![0; q]).unwrap() * d.target.generator_dim;
    let highest_vector_nonzero = !mat.solve_membership(&SparseVec::unit(row))?;
    let closed_form = chen_closed_form(n, q);
    Ok(ChenCheck {
        n,
        q,
        closed_form,
        computed,
        weyl_dim: weyl,
        highest_vector_nonzero,
        matches: closed_form == computed as u64 && weyl == closed_form && highest_vector_nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chen(n: u64, q: u64) -> usize {
        (binomial(q + n, q + 2) * (q + 1)) as usize
    }

    #[test]
    fn chen_checks() {
        let b = Budget::unlimited();
        for n in 2..=3 {
            for q in 0..=3 {
                let c = chen_check(n, q, &b).unwrap();
                assert!(c.matches, "{c:?}");
                assert_eq!(c.computed, chen(n as u64, q as u64));
            }
        }
        assert_eq!(chen_check(2, 3, &b).unwrap().closed_form, 4);
        assert!(chen_check(1, 0, &b).is_err());
    }

    #[test]
    fn apply_matches_instantiate() {
        let p = LiePresentation::free(3);
        let m = nabla(&p);
        let mat = m.instantiate(2);
        let v = SparseVec::from_pairs([(0, Rational::from_integer(2)), (mat.cols() - 1, Rational::from_integer(-1))]);
        assert_eq!(m.apply(2, &v).unwrap(), mat.apply(&v));
        assert!(m.apply(2, &SparseVec::unit(mat.cols())).is_err());
    }

    #[test]
    fn delta3_small_cases() {
        let d = delta3(2);
        assert_eq!(d.source()[0].generator_dim, 0);
        assert_eq!(coker_dims(&d, 4).dims, vec![1, 2, 3, 4, 5]);
        let d = delta3(3);
        // e0∧e1∧e2 ↦ e0⊗(e1∧e2) + e1⊗(e2∧e0) + e2⊗(e0∧e1)
        let m = d.instantiate(1);
        assert_eq!((m.rows(), m.cols()), (9, 1));
        let col = m.column(0);
        // rows: mono x_k, pair p → 3k + p, pairs (01, 02, 12)
        let expected = SparseVec::from_pairs(vec![
            (2, Rational::one()),
            (3 + 1, Rational::from_integer(-1)),
            (6, Rational::one()),
        ]);
        assert_eq!(col, expected);
    }

    #[test]
    fn koszul_composition_vanishes() {
        for n in 3..=4 {
            let pairs = SubsetBasis::new(n, 2);
            let symbol: Vec<Vec<SymbolTerm>> = pairs
                .iter()
                .map(|ab| {
                    vec![
                        SymbolTerm::new(Some(ab[0]), ab[1], Rational::one()),
                        SymbolTerm::new(Some(ab[1]), ab[0], Rational::from_integer(-1)),
                    ]
                })
                .collect();
            let delta2 = GradedMap::new(
                vec![FreeGradedModule::new(n, pairs.len(), 1)],
                FreeGradedModule::new(n, n, 0),
                vec![symbol],
            )
            .unwrap();
            let d3 = delta3(n);
            for q in 1..4 {
                assert!(delta2.instantiate(q + 1).mul(&d3.instantiate(q)).is_zero());
            }
        }
    }

    #[test]
    fn chen_dimensions_for_free_algebras() {
        for n in 2..=3u64 {
            let dims = coker_dims(&nabla(&LiePresentation::free(n as usize)), 3);
            let expected: Vec<usize> = (0..=3).map(|q| chen(n, q)).collect();
            assert_eq!(dims.dims, expected);
        }
    }

    #[test]
    fn nabla_edge_cases() {
        let ab = LiePresentation::abelian(3);
        assert_eq!(coker_dims(&nabla(&ab), 3).dims, vec![0, 0, 0, 0]);
        assert_eq!(nilpotence_order(&nabla(&ab), 3).unwrap(), Some(0));
        assert_eq!(coker_dims(&nabla_bar(&ab), 3).dims, vec![0, 0, 0, 0]);
        assert_eq!(nabla_bar(&ab).target().generator_dim, 0);
        let free = LiePresentation::free(3);
        for q in 0..3 {
            assert_eq!(nabla(&free).instantiate(q), delta3(3).instantiate(q));
            assert_eq!(nabla_bar(&free).instantiate(q), delta3(3).instantiate(q));
        }
        assert_eq!(nilpotence_order(&nabla(&LiePresentation::free(2)), 5).unwrap(), None);
    }

    #[test]
    fn zero_map_and_trivial_module() {
        let zero = GradedMap::new(vec![], FreeGradedModule::new(1, 3, 0), vec![]).unwrap();
        assert_eq!(coker_dims(&zero, 2).dims, vec![3, 3, 3]);
        // C = Sym/𝔪: x_i ⊗ w ↦ x_i · w
        let n = 2;
        let symbol = (0..n).map(|i| vec![SymbolTerm::new(Some(i), 0, Rational::one())]).collect();
        let trivial =
            GradedMap::new(vec![FreeGradedModule::new(n, n, 1)], FreeGradedModule::new(n, 1, 0), vec![symbol]).unwrap();
        assert_eq!(coker_dims(&trivial, 3).dims, vec![1, 0, 0, 0]);
        assert_eq!(nilpotence_order(&trivial, 3).unwrap(), Some(1));
    }

    #[test]
    fn rejects_inconsistent_degrees() {
        let bad = GradedMap::new(
            vec![FreeGradedModule::new(2, 1, 0)],
            FreeGradedModule::new(2, 1, 0),
            vec![vec![vec![SymbolTerm::new(Some(0), 0, Rational::one())]]],
        );
        assert!(bad.is_err());
        let dims = GradedDims::new(0, vec![1, 0, 2]);
        assert!(vanishing_degree(&dims).is_err());
    }

    #[test]
    fn truncated_cokernel_of_free_rank_two() {
        let t = truncated_cokernel(&nabla(&LiePresentation::free(2)), 3);
        assert_eq!(t.dims.dims, vec![1, 2, 3, 4]);
        assert_eq!(t.total_dim(), 10);
        let (x, y) = (&t.actions[0], &t.actions[1]);
        assert_eq!(x.mul(y), y.mul(x));
        // generated in degree zero: x^a y^b hits all of degree a + b
        let gen = SparseVec::unit(0);
        let mut span = Subspace::new(10);
        let mut frontier = vec![gen];
        for _ in 0..4 {
            let mut next = Vec::new();
            for v in &frontier {
                span.insert(v.clone());
                next.push(x.apply(v));
                next.push(y.apply(v));
            }
            frontier = next;
        }
        assert_eq!(span.dim(), 10);
    }
}
