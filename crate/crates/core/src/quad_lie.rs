//! Quadratic graded Lie algebras `𝒢 = L(V)/ideal(R)` with `R ⊆ ∧²V`.
//!
//! Graded pieces are computed as quotients of the free Lie algebra by the
//! degree-wise span of the ideal. `∧²V` is indexed by pairs `i < j` in
//! lexicographic order, which matches the Lyndon basis of `L₂(V)` under
//! `e_i ∧ e_j ↦ [e_i, e_j]`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::SubsetBasis;
use crate::error::{Error, Result};
use crate::exact_linalg::{QuotientMap, Rational, RationalMatrix, RationalVec, SparseVec, Subspace};
use crate::free_lie::{FreeLieAlgebra, GradedDims, LieElement};

/// Generator space of dimension `dim_v` and relations `R ⊆ ∧²V`, stored as
/// a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LiePresentation {
    dim_v: usize,
    relations: Vec<RationalVec>,
}

#[derive(Serialize, Deserialize)]
struct RelationTerm {
    i: usize,
    j: usize,
    c: Rational,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    dim_v: usize,
    relations: Vec<Vec<RelationTerm>>,
}

impl LiePresentation {
    /// Relations are coordinate vectors over the pair basis of `∧²V`.
    pub fn new(dim_v: usize, relations: Vec<RationalVec>) -> Result<Self> {
        let pairs = dim_v * dim_v.saturating_sub(1) / 2;
        for r in &relations {
            if let Some(m) = r.max_index() {
                if m >= pairs {
                    return Err(Error::DimensionMismatch { expected: pairs, found: m + 1 });
                }
            }
        }
        let space = Subspace::spanned_by(pairs, &relations);
        let relations = space.reduced_rows().into_values().collect();
        Ok(LiePresentation { dim_v, relations })
    }

    pub fn free(dim_v: usize) -> Self {
        LiePresentation { dim_v, relations: Vec::new() }
    }

    /// `R = ∧²V`.
    pub fn abelian(dim_v: usize) -> Self {
        let pairs = dim_v * dim_v.saturating_sub(1) / 2;
        LiePresentation { dim_v, relations: (0..pairs).map(SparseVec::unit).collect() }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn relations(&self) -> &[RationalVec] {
        &self.relations
    }

    pub fn wedge2_dim(&self) -> usize {
        self.dim_v * self.dim_v.saturating_sub(1) / 2
    }

    pub fn relation_space(&self) -> Subspace<Rational> {
        Subspace::spanned_by(self.wedge2_dim(), &self.relations)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PresentationDoc = serde_json::from_str(text)?;
        let pairs = SubsetBasis::new(doc.dim_v, 2);
        let mut relations = Vec::with_capacity(doc.relations.len());
        for rel in doc.relations {
            let mut terms = Vec::with_capacity(rel.len());
            for t in rel {
                if t.i >= t.j || t.j >= doc.dim_v {
                    return Err(Error::InvalidInput(format!(
                        "relation term ({}, {}) needs i < j < dim_v = {}",
                        t.i, t.j, doc.dim_v
                    )));
                }
                terms.push((pairs.index_of(&[t.i, t.j]).unwrap(), t.c));
            }
            relations.push(SparseVec::from_pairs(terms));
        }
        LiePresentation::new(doc.dim_v, relations)
    }

    pub fn to_json(&self) -> String {
        let pairs = SubsetBasis::new(self.dim_v, 2);
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(k, c)| {
                        let ij = pairs.get(k);
                        RelationTerm { i: ij[0], j: ij[1], c: c.clone() }
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&PresentationDoc { dim_v: self.dim_v, relations }).expect("serializable")
    }
}

/// A degree of `𝒢` as a quotient of `L_q(V)`.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: usize,
    /// Lyndon basis elements whose images form a basis of `𝒢_q`.
    pub basis_lift: Vec<LieElement>,
    /// Columns span `ideal(R)_q` inside `L_q(V)`.
    pub ideal_subspace: RationalMatrix,
}

/// `𝔟_q` computed directly from its definition.
#[derive(Clone, Debug)]
pub struct BbPiece {
    pub degree: usize,
    pub dim: usize,
    /// Elements of `L_{q+2}(V)` whose images form a basis of `𝔟_q`.
    pub basis_lift: Vec<LieElement>,
}

/// `𝒢` together with the ideal spans up to a fixed degree.
pub struct QuadraticLieAlgebra {
    presentation: LiePresentation,
    free: FreeLieAlgebra,
    /// `ideal[q - 1]` spans `ideal(R)_q`.
    ideal: Vec<Subspace<Rational>>,
}

impl QuadraticLieAlgebra {
    pub fn new(presentation: LiePresentation, max_degree: usize) -> Self {
        let n = presentation.dim_v;
        let free = FreeLieAlgebra::new(n, max_degree.max(2));
        let mut ideal = Vec::with_capacity(max_degree);
        if max_degree >= 1 {
            ideal.push(Subspace::new(free.dim(1)));
        }
        if max_degree >= 2 {
            ideal.push(Subspace::spanned_by(free.dim(2), &presentation.relations));
        }
        for q in 3..=max_degree {
            let prev: &Subspace<Rational> = &ideal[q - 2];
            let mut next = Subspace::new(free.dim(q));
            if prev.dim() > 0 {
                let basis = prev.basis();
                let mut vectors: Vec<RationalVec> = (0..n)
                    .flat_map(|k| {
                        let ek = SparseVec::unit(k);
                        basis.iter().map(move |w| (ek.clone(), w)).collect::<Vec<_>>()
                    })
                    .map(|(ek, w)| free.bracket_coords(1, &ek, q - 1, w))
                    .filter(|v| !v.is_zero())
                    .collect();
                vectors.sort_by_key(|v| v.nnz());
                for v in vectors {
                    if next.dim() == free.dim(q) {
                        break;
                    }
                    next.insert(v);
                }
            }
            ideal.push(next);
        }
        QuadraticLieAlgebra { presentation, free, ideal }
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.presentation
    }

    pub fn free_algebra(&self) -> &FreeLieAlgebra {
        &self.free
    }

    pub fn max_degree(&self) -> usize {
        self.ideal.len()
    }

    fn check_degree(&self, q: usize) {
        assert!(q >= 1 && q <= self.ideal.len(), "degree {q} outside 1..={}", self.ideal.len());
    }

    pub fn ideal_subspace(&self, q: usize) -> &Subspace<Rational> {
        self.check_degree(q);
        &self.ideal[q - 1]
    }

    /// Matrix whose columns are a basis of `ideal(R)_q`.
    pub fn ideal_piece(&self, q: usize) -> RationalMatrix {
        let s = self.ideal_subspace(q);
        RationalMatrix::from_columns(s.ambient(), s.dim(), s.basis())
    }

    pub fn dim(&self, q: usize) -> usize {
        self.check_degree(q);
        self.free.dim(q) - self.ideal[q - 1].dim()
    }

    pub fn graded_dims(&self) -> GradedDims {
        GradedDims::new(1, (1..=self.max_degree()).map(|q| self.dim(q)).collect())
    }

    /// Lyndon coordinates lifting a basis of `𝒢_q`.
    fn lift_coords(&self, q: usize) -> Vec<RationalVec> {
        self.ideal_subspace(q).free_columns().into_iter().map(SparseVec::unit).collect()
    }

    pub fn graded_piece(&self, q: usize) -> GradedPiece {
        let basis_lift = self.lift_coords(q).iter().map(|v| self.free.from_coords(q, v)).collect();
        GradedPiece { degree: q, basis_lift, ideal_subspace: self.ideal_piece(q) }
    }

    /// `dim 𝒢_{q+2}` minus the span of brackets `[𝒢_a, 𝒢_b]`, `a, b ≥ 2`.
    pub fn bb_direct(&self, q: usize) -> BbPiece {
        let top = q + 2;
        self.check_degree(top);
        let mut span = self.ideal_subspace(top).clone();
        let full = self.free.dim(top);
        for a in 2..=top / 2 {
            let b = top - a;
            let la = self.lift_coords(a);
            let lb = if a == b { la.clone() } else { self.lift_coords(b) };
            for (i, x) in la.iter().enumerate() {
                let start = if a == b { i + 1 } else { 0 };
                for y in &lb[start..] {
                    if span.dim() == full {
                        break;
                    }
                    span.insert(self.free.bracket_coords(a, x, b, y));
                }
            }
        }
        let basis_lift: Vec<LieElement> =
            span.free_columns().into_iter().map(|c| self.free.from_coords(top, &SparseVec::unit(c))).collect();
        BbPiece { degree: q, dim: basis_lift.len(), basis_lift }
    }
}

/// Columns spanning `ideal(R)_q`, `q ≥ 2`.
pub fn ideal_piece(p: &LiePresentation, q: usize) -> RationalMatrix {
    QuadraticLieAlgebra::new(p.clone(), q).ideal_piece(q)
}

/// `dim 𝒢_q` for `1 ≤ q ≤ max_degree`.
pub fn graded_dims(p: &LiePresentation, max_degree: usize) -> GradedDims {
    QuadraticLieAlgebra::new(p.clone(), max_degree).graded_dims()
}

/// The bracket `∧²V ↠ 𝒢₂ = ∧²V/R`; rows are quotient coordinates.
pub fn beta_matrix(p: &LiePresentation) -> RationalMatrix {
    QuotientMap::new(p.relation_space()).matrix()
}

pub fn bb_direct(p: &LiePresentation, q: usize) -> BbPiece {
    QuadraticLieAlgebra::new(p.clone(), q + 2).bb_direct(q)
}

/// A random presentation with `1 ≤ dim V ≤ max_dim_v` and at most
/// `max_relations` relations, each a sparse small-integer combination of pairs.
pub fn random_presentation<R: Rng>(rng: &mut R, max_dim_v: usize, max_relations: usize) -> LiePresentation {
    let n = rng.gen_range(1..=max_dim_v.max(1));
    let pairs = n * (n - 1) / 2;
    let count = if pairs == 0 { 0 } else { rng.gen_range(0..=max_relations) };
    let relations = (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=pairs.min(3));
            SparseVec::from_pairs((0..terms).map(|_| {
                let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                (rng.gen_range(0..pairs), Rational::from_integer(c))
            }))
        })
        .collect();
    LiePresentation::new(n, relations).expect("indices are in range")
}
