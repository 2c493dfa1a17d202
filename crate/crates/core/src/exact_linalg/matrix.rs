//! Sparse vectors, sparse matrices and incremental echelon subspaces.
//!
//! Rank computations split a matrix into the connected components of its
//! row/column incidence graph and eliminate each component on its own.
//! Equivariant maps written in weight bases fall apart into weight blocks
//! this way without the caller having to know about weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use super::field::Field;
use crate::error::{Error, Result};

/// Sorted `(index, value)` pairs with no stored zeros.
#[derive(Clone, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, F)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, x) in pairs {
            if x.is_zero() {
                continue;
            }
            match acc.get_mut(&i) {
                Some(e) => *e = e.clone() + &x,
                None => {
                    acc.insert(i, x);
                }
            }
        }
        SparseVec::from_sorted_map(acc)
    }

    fn from_sorted_map(acc: BTreeMap<usize, F>) -> Self {
        SparseVec { entries: acc.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn from_dense(values: &[F]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, F::one())] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> + '_ {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> F {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x.clone() * c)).collect() }
    }

    /// `self + c · other`
    pub fn axpy(&self, c: &F, other: &SparseVec<F>) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.clone() * c));
                        b.next();
                    } else {
                        let s = x.clone() + &(y.clone() * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.clone() * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec<F>) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &SparseVec<F>) -> Self {
        self.axpy(&-F::one(), other)
    }

    pub fn dot(&self, other: &SparseVec<F>) -> F {
        let mut acc = F::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            match i.cmp(j) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + &(x.clone() * y);
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    /// Relabel indices; `map` must be injective on the support.
    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> Self {
        SparseVec::from_pairs(self.entries.iter().map(|(i, x)| (map(*i), x.clone())))
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, x)| (i, x))).finish()
    }
}

impl<F: Field> FromIterator<(usize, F)> for SparseVec<F> {
    fn from_iter<I: IntoIterator<Item = (usize, F)>>(iter: I) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, data: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn scalar(n: usize, c: &F) -> Self {
        SparseMatrix::identity(n).scale(c)
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<SparseVec<F>>) -> Self {
        assert_eq!(data.len(), rows, "row count mismatch");
        for r in &data {
            if let Some(m) = r.max_index() {
                assert!(m < cols, "column index out of bounds");
            }
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, cols: usize, columns: Vec<SparseVec<F>>) -> Self {
        assert_eq!(columns.len(), cols, "column count mismatch");
        SparseMatrix::from_rows(cols, rows, columns).transpose()
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, F)>>(rows: usize, cols: usize, triplets: I) -> Self {
        let mut buckets: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (r, c, x) in triplets {
            assert!(r < rows && c < cols, "index out of bounds");
            buckets[r].push((c, x));
        }
        SparseMatrix { rows, cols, data: buckets.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn from_dense(values: &[Vec<F>]) -> Self {
        let rows = values.len();
        let cols = values.first().map_or(0, Vec::len);
        let data = values
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                SparseVec::from_dense(r)
            })
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn row(&self, r: usize) -> &SparseVec<F> {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[SparseVec<F>] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r].get(c)
    }

    pub fn column(&self, c: usize) -> SparseVec<F> {
        SparseVec {
            entries: self
                .data
                .iter()
                .enumerate()
                .filter_map(|(r, row)| {
                    let x = row.get(c);
                    (!x.is_zero()).then_some((r, x))
                })
                .collect(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVec<F>> {
        self.transpose().data
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, c, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut buckets: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row.iter() {
                buckets[c].push((r, x.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: buckets.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        SparseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let data = self
            .data
            .par_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, F> = BTreeMap::new();
                for (k, a) in row.iter() {
                    for (c, b) in other.data[k].iter() {
                        let t = a.clone() * b;
                        match acc.get_mut(&c) {
                            Some(e) => *e = e.clone() + &t,
                            None => {
                                acc.insert(c, t);
                            }
                        }
                    }
                }
                SparseVec::from_sorted_map(acc)
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        SparseVec {
            entries: self
                .data
                .iter()
                .enumerate()
                .filter_map(|(r, row)| {
                    let x = row.dot(v);
                    (!x.is_zero()).then_some((r, x))
                })
                .collect(),
        }
    }

    /// Column-oriented application, cheaper when `v` is very sparse.
    pub fn apply_by_columns(columns: &[SparseVec<F>], v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (j, c) in v.iter() {
            for (i, x) in columns[j].iter() {
                let t = x.clone() * c;
                match acc.get_mut(&i) {
                    Some(e) => *e = e.clone() + &t,
                    None => {
                        acc.insert(i, t);
                    }
                }
            }
        }
        SparseVec::from_sorted_map(acc)
    }

    /// Restriction to the given row and column index sets (in the given order).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let col_pos: HashMap<usize, usize> = col_idx.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let data = row_idx
            .iter()
            .map(|&r| {
                SparseVec::from_pairs(
                    self.data[r].iter().filter_map(|(c, x)| col_pos.get(&c).map(|&p| (p, x.clone()))),
                )
            })
            .collect();
        SparseMatrix { rows: row_idx.len(), cols: col_idx.len(), data }
    }

    /// Block-diagonal stacking `[self, 0; 0, other]`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut data = self.data.clone();
        data.extend(other.data.iter().map(|r| r.reindex(|c| c + self.cols)));
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols + other.cols, data }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut e = a.entries.clone();
                e.extend(b.iter().map(|(c, x)| (c + self.cols, x.clone())));
                SparseVec { entries: e }
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Rank over the scalar field.
    pub fn rank(&self) -> usize {
        rank_of_vectors(&self.data)
    }

    /// Basis of the right kernel `{v : self · v = 0}`.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        let mut space = Subspace::new(self.cols);
        for r in sorted_by_weight(&self.data) {
            space.insert(r.clone());
        }
        space.complement_kernel()
    }

    pub fn cokernel_dimension(&self) -> usize {
        self.rows - self.rank()
    }

    /// Whether `v` lies in the column span.
    pub fn solve_membership(&self, v: &SparseVec<F>) -> Result<bool> {
        self.check_column_vector(v)?;
        let columns = self.columns();
        Ok(span_contains(&columns, std::slice::from_ref(v))[0])
    }

    /// Dense-length version of [`solve_membership`](Self::solve_membership).
    pub fn solve_membership_dense(&self, v: &[F]) -> Result<bool> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        self.solve_membership(&SparseVec::from_dense(v))
    }

    fn check_column_vector(&self, v: &SparseVec<F>) -> Result<()> {
        match v.max_index() {
            Some(m) if m >= self.rows => Err(Error::DimensionMismatch { expected: self.rows, found: m + 1 }),
            _ => Ok(()),
        }
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut space = Subspace::new(2 * n);
        for (r, row) in self.data.iter().enumerate() {
            let mut e = row.entries.clone();
            e.push((n + r, F::one()));
            space.insert(SparseVec { entries: e });
        }
        let rref = space.reduced_rows();
        if rref.len() != n || rref.keys().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let data = rref.into_values().map(|row| row.reindex_filter(|c| c.checked_sub(n))).collect();
        Some(SparseMatrix { rows: n, cols: n, data })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = SparseMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl<F: Field> SparseVec<F> {
    fn reindex_filter(&self, map: impl Fn(usize) -> Option<usize>) -> Self {
        SparseVec { entries: self.entries.iter().filter_map(|(i, x)| map(*i).map(|j| (j, x.clone()))).collect() }
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Echelon basis of a subspace of F^ambient, grown one vector at a time.
///
/// Every stored row has leading coefficient 1 at its pivot column and no
/// entries left of it.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    pivots: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, pivots: BTreeMap::new() }
    }

    pub fn spanned_by<'a, I: IntoIterator<Item = &'a SparseVec<F>>>(ambient: usize, vectors: I) -> Self {
        let mut s = Subspace::new(ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivots.contains_key(&c)
    }

    /// The unique representative of `v + S` vanishing on every pivot column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        if self.pivots.is_empty() || v.is_zero() {
            return v.clone();
        }
        let mut acc: BTreeMap<usize, F> = v.entries.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = acc
                .range(cursor..)
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            for (j, x) in self.pivots[&k].iter() {
                let t = x.clone() * &c;
                match acc.get_mut(&j) {
                    Some(e) => {
                        let s = e.clone() - &t;
                        if s.is_zero() {
                            acc.remove(&j);
                        } else {
                            *e = s;
                        }
                    }
                    None => {
                        acc.insert(j, -t);
                    }
                }
            }
            cursor = k + 1;
        }
        SparseVec::from_sorted_map(acc)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(&v);
        match r.leading() {
            None => false,
            Some((p, lead)) => {
                let inv = lead.inv();
                let row = r.scale(&inv);
                self.pivots.insert(p, row);
                true
            }
        }
    }

    pub fn basis(&self) -> Vec<SparseVec<F>> {
        self.pivots.values().cloned().collect()
    }

    /// Fully reduced echelon rows keyed by pivot column.
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseVec<F>> {
        let mut done: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let hits: Vec<(usize, F)> =
                r.iter().filter(|(c, _)| *c != p && done.contains_key(c)).map(|(c, x)| (c, x.clone())).collect();
            for (c, x) in hits {
                r = r.axpy(&-x, &done[&c]);
            }
            done.insert(p, r);
        }
        done
    }

    /// Columns that are not pivots: coordinates on the quotient F^ambient / S.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Treating the stored rows as linear equations, a basis of their common kernel.
    pub fn complement_kernel(&self) -> Vec<SparseVec<F>> {
        let rref = self.reduced_rows();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut pairs = vec![(f, F::one())];
                for (&p, row) in &rref {
                    let x = row.get(f);
                    if !x.is_zero() {
                        pairs.push((p, -x));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect()
    }
}

/// Quotient of F^ambient by a subspace, with coordinates on the free columns.
#[derive(Clone, Debug)]
pub struct QuotientMap<F> {
    space: Subspace<F>,
    free: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl<F: Field> QuotientMap<F> {
    pub fn new(space: Subspace<F>) -> Self {
        let free = space.free_columns();
        let position = free.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        QuotientMap { space, free, position }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient(&self) -> usize {
        self.space.ambient()
    }

    /// Ambient column representing each quotient basis vector.
    pub fn representatives(&self) -> &[usize] {
        &self.free
    }

    pub fn subspace(&self) -> &Subspace<F> {
        &self.space
    }

    /// Quotient coordinates of `v`.
    pub fn project(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let r = self.space.reduce(v);
        SparseVec { entries: r.entries.into_iter().map(|(c, x)| (self.position[&c], x)).collect() }
    }

    /// Matrix of the projection, `dim × ambient`.
    pub fn matrix(&self) -> SparseMatrix<F> {
        let cols = (0..self.ambient()).map(|c| self.project(&SparseVec::unit(c))).collect();
        SparseMatrix::from_columns(self.dim(), self.ambient(), cols)
    }
}

fn sorted_by_weight<F: Field>(vectors: &[SparseVec<F>]) -> Vec<&SparseVec<F>> {
    let mut v: Vec<&SparseVec<F>> = vectors.iter().filter(|v| !v.is_zero()).collect();
    v.sort_by_key(|x| x.nnz());
    v
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups vector indices by connected component of shared coordinates.
/// Components are ordered by their smallest member, members ascending.
fn coordinate_components<F: Field>(vectors: &[&SparseVec<F>]) -> Vec<Vec<usize>> {
    let mut coord_owner: HashMap<usize, usize> = HashMap::new();
    let mut uf = UnionFind::new(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        for (c, _) in v.iter() {
            match coord_owner.get(&c) {
                Some(&o) => uf.union(o, k),
                None => {
                    coord_owner.insert(c, k);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..vectors.len() {
        let r = uf.find(k);
        groups.entry(r).or_default().push(k);
    }
    groups.into_values().collect()
}

/// Dimension of the span of `vectors`.
pub fn rank_of_vectors<F: Field>(vectors: &[SparseVec<F>]) -> usize {
    let nonzero: Vec<&SparseVec<F>> = vectors.iter().filter(|v| !v.is_zero()).collect();
    let groups = coordinate_components(&nonzero);
    groups
        .par_iter()
        .map(|g| {
            let mut members: Vec<&SparseVec<F>> = g.iter().map(|&k| nonzero[k]).collect();
            members.sort_by_key(|v| v.nnz());
            let ambient = members.iter().filter_map(|v| v.max_index()).max().map_or(0, |m| m + 1);
            let mut s = Subspace::new(ambient);
            for v in members {
                s.insert(v.clone());
            }
            s.dim()
        })
        .sum()
}

/// For each target, whether it lies in the span of `spanning`.
pub fn span_contains<F: Field>(spanning: &[SparseVec<F>], targets: &[SparseVec<F>]) -> Vec<bool> {
    let all: Vec<&SparseVec<F>> = spanning.iter().chain(targets.iter()).collect();
    let groups = coordinate_components(&all);
    let mut answer = vec![true; targets.len()];
    let results: Vec<Vec<(usize, bool)>> = groups
        .par_iter()
        .map(|g| {
            let span: Vec<&SparseVec<F>> = g.iter().filter(|&&k| k < spanning.len()).map(|&k| all[k]).collect();
            let tgt: Vec<usize> = g.iter().filter(|&&k| k >= spanning.len()).map(|&k| k - spanning.len()).collect();
            if tgt.is_empty() {
                return Vec::new();
            }
            let ambient = g.iter().filter_map(|&k| all[k].max_index()).max().map_or(0, |m| m + 1);
            let mut sorted = span;
            sorted.sort_by_key(|v| v.nnz());
            let mut s = Subspace::new(ambient);
            for v in sorted {
                s.insert(v.clone());
            }
            tgt.into_iter().map(|t| (t, s.contains(&targets[t]))).collect()
        })
        .collect();
    for (t, b) in results.into_iter().flatten() {
        answer[t] = b;
    }
    answer
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn m(rows: &[&[i64]]) -> SparseMatrix<Rational> {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn axpy_cancels() {
        let a = SparseVec::from_pairs(vec![(0, q(1)), (3, q(2))]);
        let b = SparseVec::from_pairs(vec![(3, q(1)), (5, q(1))]);
        let c = a.axpy(&q(-2), &b);
        assert_eq!(c, SparseVec::from_pairs(vec![(0, q(1)), (5, q(-2))]));
    }

    #[test]
    fn inverse_of_small_matrix() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), SparseMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn quotient_coordinates() {
        // quotient of Q^3 by span{(1,1,0)}
        let s = Subspace::spanned_by(3, [&SparseVec::from_pairs(vec![(0, q(1)), (1, q(1))])]);
        let qm = QuotientMap::new(s);
        assert_eq!(qm.dim(), 2);
        assert_eq!(qm.representatives(), &[1, 2]);
        // e0 ≡ −e1
        assert_eq!(qm.project(&SparseVec::unit(0)), SparseVec::from_pairs(vec![(0, q(-1))]));
    }

    #[test]
    fn components_do_not_change_rank() {
        let a = m(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 2, 2, 0], &[0, 0, 0, 3]]);
        assert_eq!(a.rank(), 3);
        let mut s = Subspace::new(4);
        for r in a.row_vectors() {
            s.insert(r.clone());
        }
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn span_contains_multiple_components() {
        let span = vec![SparseVec::from_pairs(vec![(0, q(1)), (1, q(1))]), SparseVec::unit(5)];
        let targets = vec![
            SparseVec::from_pairs(vec![(0, q(3)), (1, q(3))]),
            SparseVec::unit(0),
            SparseVec::unit(5).scale(&q(7)),
            SparseVec::new(),
        ];
        assert_eq!(span_contains(&span, &targets), vec![true, false, true, true]);
    }
}
