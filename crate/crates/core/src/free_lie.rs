//! The free graded Lie algebra L(V) on `n` generators, realized in the
//! Lyndon basis.
//!
//! The basis element of a Lyndon word `w` with standard factorization
//! `w = uv` (v the longest proper Lyndon suffix) is `b(w) = [b(u), b(v)]`,
//! and `b(i) = e_i` on letters. Brackets are computed in the tensor algebra
//! and rewritten into the basis using triangularity: the expansion of `b(w)`
//! is `w` plus lexicographically larger words, so the smallest word of any
//! Lie polynomial is Lyndon and carries its leading coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{Rational, RationalMatrix, RationalVec, SparseVec};

/// A word strictly smaller than each of its proper rotations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Vec<usize>);

impl LyndonWord {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if is_lyndon(&letters) {
            Ok(LyndonWord(letters))
        } else {
            Err(Error::InvalidInput(format!("{letters:?} is not a Lyndon word")))
        }
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(u, v)` with `v` the longest proper Lyndon suffix; `None` on letters.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        if self.0.len() < 2 {
            return None;
        }
        (1..self.0.len())
            .find(|&k| is_lyndon(&self.0[k..]))
            .map(|k| (LyndonWord(self.0[..k].to_vec()), LyndonWord(self.0[k..].to_vec())))
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| {
        let rotated = w[k..].iter().chain(&w[..k]);
        w.iter().lt(rotated)
    })
}

/// All Lyndon words of length `q` on `n` letters, lexicographically sorted.
pub fn lyndon_basis(n: usize, q: usize) -> Vec<LyndonWord> {
    if n == 0 || q == 0 {
        return Vec::new();
    }
    // Duval's generation of Lyndon words of length ≤ q, in lex order.
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == q {
            out.push(LyndonWord(w.clone()));
        }
        let m = w.len();
        while w.len() < q {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(n - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// (1/q) Σ_{d|q} μ(d) n^{q/d}
pub fn witt_number(n: u64, q: u64) -> u64 {
    if q == 0 {
        return 0;
    }
    let mut acc: i128 = 0;
    for d in 1..=q {
        if q.is_multiple_of(d) {
            acc += mobius(d) as i128 * (n as i128).pow((q / d) as u32);
        }
    }
    (acc / q as i128) as u64
}

/// Dimensions of a graded object, `dims[k]` belonging to degree `first_degree + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub first_degree: usize,
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn new(first_degree: usize, dims: Vec<usize>) -> Self {
        GradedDims { first_degree, dims }
    }

    pub fn get(&self, degree: usize) -> Option<usize> {
        degree.checked_sub(self.first_degree).and_then(|k| self.dims.get(k).copied())
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dims.len()).map(move |k| k + self.first_degree)
    }

    pub fn last_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1).map(|k| k + self.first_degree)
    }

    /// Least degree with vanishing dimension.
    pub fn first_vanishing(&self) -> Option<usize> {
        self.dims.iter().position(|&d| d == 0).map(|k| k + self.first_degree)
    }
}

/// Free Lie algebra dimensions in degrees `1..=max_degree`.
pub fn witt_dims(n: usize, max_degree: usize) -> GradedDims {
    GradedDims::new(1, (1..=max_degree).map(|q| witt_number(n as u64, q as u64) as usize).collect())
}

/// Homogeneous element of L(V).
#[derive(Clone, PartialEq, Eq)]
pub struct LieElement {
    degree: usize,
    coords: BTreeMap<LyndonWord, Rational>,
}

impl LieElement {
    pub fn zero(degree: usize) -> Self {
        LieElement { degree, coords: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (LyndonWord, Rational)>) -> Result<Self> {
        let mut coords: BTreeMap<LyndonWord, Rational> = BTreeMap::new();
        for (w, c) in terms {
            if w.len() != degree {
                return Err(Error::InvalidInput(format!("word {w:?} has length {}, expected {degree}", w.len())));
            }
            let e = coords.entry(w).or_insert_with(Rational::zero);
            *e = &*e + &c;
        }
        coords.retain(|_, c| !c.is_zero());
        Ok(LieElement { degree, coords })
    }

    pub fn generator(i: usize) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(LyndonWord(vec![i]), Rational::one());
        LieElement { degree: 1, coords }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coefficient(&self, w: &LyndonWord) -> Rational {
        self.coords.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &Rational)> + '_ {
        self.coords.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LieElement::zero(self.degree);
        }
        LieElement { degree: self.degree, coords: self.coords.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        let mut coords = self.coords.clone();
        for (w, c) in &other.coords {
            let e = coords.entry(w.clone()).or_insert_with(Rational::zero);
            *e = &*e + c;
        }
        coords.retain(|_, c| !c.is_zero());
        LieElement { degree: self.degree, coords }
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement(deg {}) ", self.degree)?;
        f.debug_map().entries(self.coords.iter()).finish()
    }
}

type TensorPoly = BTreeMap<Vec<usize>, Rational>;

struct DegreeData {
    words: Vec<LyndonWord>,
    index: HashMap<Vec<usize>, usize>,
    /// Expansion of each basis element, sorted by word.
    expansions: Vec<Vec<(Vec<usize>, Rational)>>,
}

/// L(V) with bases and tensor expansions precomputed up to a degree cap.
pub struct FreeLieAlgebra {
    n: usize,
    degrees: Vec<DegreeData>,
}

impl FreeLieAlgebra {
    pub fn new(n: usize, max_degree: usize) -> Self {
        let mut alg = FreeLieAlgebra { n, degrees: Vec::new() };
        for q in 1..=max_degree {
            alg.push_degree(q);
        }
        alg
    }

    fn push_degree(&mut self, q: usize) {
        let words = lyndon_basis(self.n, q);
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.0.clone(), i)).collect();
        let expansions = words
            .iter()
            .map(|w| match w.standard_factorization() {
                None => vec![(w.0.clone(), Rational::one())],
                Some((u, v)) => {
                    let eu = &self.degrees[u.len() - 1].expansions[self.degrees[u.len() - 1].index[&u.0]];
                    let ev = &self.degrees[v.len() - 1].expansions[self.degrees[v.len() - 1].index[&v.0]];
                    let mut acc = TensorPoly::new();
                    add_product(&mut acc, eu, ev, &Rational::one());
                    add_product(&mut acc, ev, eu, &Rational::from_integer(-1));
                    acc.into_iter().collect()
                }
            })
            .collect();
        self.degrees.push(DegreeData { words, index, expansions });
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len()
    }

    fn data(&self, q: usize) -> &DegreeData {
        assert!(q >= 1 && q <= self.degrees.len(), "degree {q} outside the precomputed range");
        &self.degrees[q - 1]
    }

    pub fn dim(&self, q: usize) -> usize {
        self.data(q).words.len()
    }

    pub fn basis(&self, q: usize) -> &[LyndonWord] {
        &self.data(q).words
    }

    pub fn index_of(&self, w: &LyndonWord) -> Option<usize> {
        self.data(w.len()).index.get(&w.0).copied()
    }

    /// Coordinates of `x` in the Lyndon basis of its degree.
    pub fn to_coords(&self, x: &LieElement) -> RationalVec {
        let d = self.data(x.degree);
        SparseVec::from_pairs(x.coords.iter().map(|(w, c)| (d.index[&w.0], c.clone())))
    }

    pub fn from_coords(&self, degree: usize, v: &RationalVec) -> LieElement {
        let d = self.data(degree);
        LieElement { degree, coords: v.iter().map(|(i, c)| (d.words[i].clone(), c.clone())).collect() }
    }

    /// Expansion of a coordinate vector in the tensor algebra.
    fn expand(&self, degree: usize, v: &RationalVec) -> Vec<(Vec<usize>, Rational)> {
        let d = self.data(degree);
        if v.nnz() == 1 {
            let (i, c) = v.leading().unwrap();
            return d.expansions[i].iter().map(|(w, x)| (w.clone(), x * c)).collect();
        }
        let mut acc = TensorPoly::new();
        for (i, c) in v.iter() {
            for (w, x) in &d.expansions[i] {
                accumulate(&mut acc, w.clone(), x * c);
            }
        }
        acc.into_iter().collect()
    }

    /// Rewrite a Lie polynomial given in the tensor algebra into Lyndon coordinates.
    fn rewrite(&self, degree: usize, mut poly: TensorPoly) -> RationalVec {
        let d = self.data(degree);
        let mut out = Vec::new();
        while let Some((w, c)) = poly.pop_first() {
            let i = *d.index.get(&w).unwrap_or_else(|| panic!("smallest word {w:?} is not Lyndon: not a Lie element"));
            // leading word of b(w) is w with coefficient 1
            for (u, x) in d.expansions[i].iter().skip(1) {
                accumulate(&mut poly, u.clone(), -(x * &c));
            }
            out.push((i, c));
        }
        SparseVec::from_pairs(out)
    }

    /// `[x, y]` on coordinate vectors of degrees `dx`, `dy`.
    pub fn bracket_coords(&self, dx: usize, x: &RationalVec, dy: usize, y: &RationalVec) -> RationalVec {
        if x.is_zero() || y.is_zero() {
            return SparseVec::new();
        }
        let ex = self.expand(dx, x);
        let ey = self.expand(dy, y);
        let mut acc = TensorPoly::new();
        add_product(&mut acc, &ex, &ey, &Rational::one());
        add_product(&mut acc, &ey, &ex, &Rational::from_integer(-1));
        self.rewrite(dx + dy, acc)
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let v = self.bracket_coords(x.degree, &self.to_coords(x), y.degree, &self.to_coords(y));
        self.from_coords(x.degree + y.degree, &v)
    }

    /// Matrix of ad_v : L_q → L_{q+1}, `v` given by coordinates in V.
    pub fn ad_matrix(&self, v: &RationalVec, q: usize) -> RationalMatrix {
        let src = self.dim(q);
        let tgt = self.dim(q + 1);
        let columns = (0..src).map(|j| self.bracket_coords(1, v, q, &SparseVec::unit(j))).collect();
        RationalMatrix::from_columns(tgt, src, columns)
    }
}

fn accumulate(acc: &mut TensorPoly, w: Vec<usize>, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(e) => {
            let s = &*e + &c;
            if s.is_zero() {
                acc.remove(&w);
            } else {
                *e = s;
            }
        }
        None => {
            acc.insert(w, c);
        }
    }
}

fn add_product(acc: &mut TensorPoly, a: &[(Vec<usize>, Rational)], b: &[(Vec<usize>, Rational)], scale: &Rational) {
    for (u, x) in a {
        let xs = x * scale;
        for (v, y) in b {
            let mut w = Vec::with_capacity(u.len() + v.len());
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            accumulate(acc, w, &xs * y);
        }
    }
}
