//! Finitely presented groups: Fox calculus, Alexander matrices and
//! characteristic-variety point tests.
//!
//! Words are sequences of nonzero `i32`, `+(i+1)` for `x_i` and `-(i+1)`
//! for its inverse.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact_linalg::{CyclotomicScalar, Field, Rational, RationalMatrix, SparseMatrix, SparseVec};

pub type Word = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

/// Reduced product `uv`.
pub fn multiply(u: &[i32], v: &[i32]) -> Word {
    let mut out = u.to_vec();
    for &x in v {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Exponent-sum vector of `w` in `Z^n`.
pub fn abelianize(w: &[i32], n: usize) -> Vec<i64> {
    let mut e = vec![0i64; n];
    for &x in w {
        e[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    e
}

/// A uniformly random reduced word of length at most `max_len`.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w: Word = Vec::with_capacity(len);
    while w.len() < len {
        let g = rng.gen_range(1..=n as i32);
        let x = if rng.gen_bool(0.5) { g } else { -g };
        if w.last() != Some(&-x) {
            w.push(x);
        }
    }
    w
}

fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    #[serde(rename = "generators")]
    num_generators: usize,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Validates letters and freely reduces every relator.
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Result<Self> {
        for (r, w) in relators.iter().enumerate() {
            for &x in w {
                if x == 0 || x.unsigned_abs() as usize > num_generators {
                    return Err(Error::InvalidInput(format!(
                        "relator {r}: letter {x} outside ±1..±{num_generators}"
                    )));
                }
            }
        }
        let relators = relators.iter().map(|w| free_reduce(w)).collect();
        Ok(GroupPresentation { num_generators, relators })
    }

    pub fn free(n: usize) -> Self {
        GroupPresentation { num_generators: n, relators: Vec::new() }
    }

    /// `Z^n` with all commutators `[x_i, x_j]`, `i < j`.
    pub fn free_abelian(n: usize) -> Self {
        let mut rel = Vec::new();
        for i in 1..=n as i32 {
            for j in i + 1..=n as i32 {
                rel.push(vec![i, j, -i, -j]);
            }
        }
        GroupPresentation { num_generators: n, relators: rel }
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GroupPresentation = serde_json::from_str(s)?;
        GroupPresentation::new(raw.num_generators, raw.relators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    /// Relator exponent sums as an `r × n` matrix.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|w| abelianize(w, self.num_generators)).collect()
    }

    /// Canonical form up to cyclic permutation and inversion of relators,
    /// with trivial and repeated relators dropped.
    pub fn normalized(&self) -> Self {
        let mut rel: Vec<Word> = self
            .relators
            .iter()
            .map(|w| cyclic_reduce(w))
            .filter(|w| !w.is_empty())
            .map(|w| {
                let inv = inverse(&w);
                (0..w.len())
                    .flat_map(|k| {
                        let mut a = w.clone();
                        a.rotate_left(k);
                        let mut b = inv.clone();
                        b.rotate_left(k);
                        [a, b]
                    })
                    .min()
                    .unwrap()
            })
            .collect();
        rel.sort();
        rel.dedup();
        GroupPresentation { num_generators: self.num_generators, relators: rel }
    }
}

/// Finitely supported element of `Q[F_n]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, Rational>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn from_word(w: &[i32]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(free_reduce(w), Rational::one());
        GroupRingElement { terms }
    }

    pub fn one() -> Self {
        GroupRingElement::from_word(&[])
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: Rational) {
        let e = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(multiply(u, v), a * b);
            }
        }
        out
    }

    /// Image in the Laurent ring under abelianization.
    pub fn abelianize(&self, n: usize) -> LaurentPoly {
        let mut p = LaurentPoly::zero(n);
        for (w, c) in &self.terms {
            p.add_term(abelianize(w, n), c.clone());
        }
        p
    }
}

/// `∂w/∂x_j` for the generator with 0-based index `j`.
pub fn fox_derivative(w: &[i32], j: usize) -> GroupRingElement {
    let w = free_reduce(w);
    let x = j as i32 + 1;
    let mut out = GroupRingElement::zero();
    for (k, &l) in w.iter().enumerate() {
        if l == x {
            out.add_term(w[..k].to_vec(), Rational::one());
        } else if l == -x {
            out.add_term(w[..=k].to_vec(), Rational::from_integer(-1));
        }
    }
    out
}

/// Laurent polynomial over Q in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(exponents: Vec<i64>, c: Rational) -> Self {
        let mut p = LaurentPoly::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        out
    }

    /// `self / d` when the quotient is a Laurent polynomial.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dl, dc) = d.terms.iter().next_back()?;
        let (dlow, _) = d.terms.iter().next().unwrap();
        let mut q = LaurentPoly::zero(self.nvars);
        let mut rem = self.clone();
        let Some((alow, _)) = self.terms.iter().next() else { return Some(q) };
        // every quotient monomial is at least low(self) / low(d)
        let floor: Vec<i64> = alow.iter().zip(dlow).map(|(a, b)| a - b).collect();
        while let Some((rl, rc)) = rem.terms.iter().next_back() {
            let e: Vec<i64> = rl.iter().zip(dl).map(|(a, b)| a - b).collect();
            if e < floor {
                return None;
            }
            let t = LaurentPoly::monomial(e, rc / dc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn evaluate(&self, point: &[CyclotomicScalar]) -> CyclotomicScalar {
        let mut acc = CyclotomicScalar::zero();
        for (e, c) in &self.terms {
            let mut v = CyclotomicScalar::from_rational(c.clone());
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    v = v * &x.pow(k);
                }
            }
            acc = acc + &v;
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.signum() < 0;
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = if negative { -c } else { c.clone() };
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("t{}", i + 1) } else { format!("t{}^{x}", i + 1) })
                .collect();
            match (vars.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Abelianized Fox Jacobian, one row per relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl LaurentMatrix {
    pub fn evaluate(&self, point: &[CyclotomicScalar]) -> SparseMatrix<CyclotomicScalar> {
        let rows = self
            .entries
            .iter()
            .map(|row| SparseVec::from_pairs(row.iter().enumerate().map(|(j, p)| (j, p.evaluate(point)))))
            .collect();
        SparseMatrix::from_rows(self.rows, self.cols, rows)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }
}

pub fn alexander_matrix(p: &GroupPresentation) -> LaurentMatrix {
    let n = p.num_generators;
    let entries = p
        .relators
        .iter()
        .map(|w| (0..n).map(|j| fox_derivative(w, j).abelianize(n)).collect())
        .collect();
    LaurentMatrix { rows: p.relators.len(), cols: n, entries }
}

/// Rank over the fraction field `Q(t_1, …, t_n)`, by fraction-free elimination.
pub fn generic_rank(m: &LaurentMatrix) -> Result<usize> {
    let mut a = m.entries.clone();
    let nvars = a.first().and_then(|r| r.first()).map_or(0, LaurentPoly::nvars);
    let mut prev = LaurentPoly::constant(nvars, Rational::one());
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..m.rows {
            for c in col + 1..m.cols {
                let num = a[rank][col].mul(&a[r][c]).sub(&a[r][col].mul(&a[rank][c]));
                a[r][c] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Inconsistent("inexact division in fraction-free elimination".into()))?;
            }
            a[r][col] = LaurentPoly::zero(nvars);
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    Ok(rank)
}

/// A point of the character torus, one value per generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Character {
    values: Vec<CyclotomicScalar>,
}

impl Character {
    pub fn new(values: Vec<CyclotomicScalar>) -> Result<Self> {
        if values.iter().any(Field::is_zero) {
            return Err(Error::InvalidInput("character values must be nonzero".into()));
        }
        Ok(Character { values })
    }

    pub fn trivial(n: usize) -> Self {
        Character { values: vec![CyclotomicScalar::one(); n] }
    }

    /// `(ζ_m^{e_1}, …, ζ_m^{e_n})`.
    pub fn torsion(m: u64, exponents: &[i64]) -> Self {
        Character { values: exponents.iter().map(|&e| CyclotomicScalar::zeta(m, e)).collect() }
    }

    pub fn rational(values: &[Rational]) -> Result<Self> {
        Character::new(values.iter().cloned().map(CyclotomicScalar::from_rational).collect())
    }

    pub fn values(&self) -> &[CyclotomicScalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Field::is_one)
    }

    /// `ρ^e = Π ρ_i^{e_i}`.
    pub fn evaluate(&self, e: &[i64]) -> CyclotomicScalar {
        self.values.iter().zip(e).fold(CyclotomicScalar::one(), |acc, (x, &k)| acc * &x.pow(k))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Character {
    type Err = Error;

    /// Comma separated rationals or `zeta_m^j` tokens.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Character { values: Vec::new() });
        }
        Character::new(s.split(',').map(str::parse).collect::<Result<_>>()?)
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        parts.serialize(s)
    }
}

/// Precomputed data for repeated point tests on one presentation.
pub struct TwistedHomology {
    n: usize,
    exponents: Vec<Vec<i64>>,
    matrix: LaurentMatrix,
    lattice: Vec<Vec<i64>>,
}

impl TwistedHomology {
    pub fn new(p: &GroupPresentation) -> Self {
        let exponents = p.exponent_matrix();
        TwistedHomology {
            n: p.num_generators,
            lattice: saturation_basis(&exponents, p.num_generators),
            exponents,
            matrix: alexander_matrix(p),
        }
    }

    pub fn alexander_matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    /// Z-basis of the saturation of the relator lattice in `Z^n`; a
    /// character is in the identity component iff it is 1 on each vector.
    pub fn saturation(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn check_character(&self, rho: &Character) -> Result<()> {
        if rho.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: rho.len() });
        }
        for (r, e) in self.exponents.iter().enumerate() {
            if !rho.evaluate(e).is_one() {
                return Err(Error::NotACharacter { relator: r });
            }
        }
        Ok(())
    }

    pub fn in_identity_component(&self, rho: &Character) -> Result<bool> {
        self.check_character(rho)?;
        Ok(self.lattice.iter().all(|v| rho.evaluate(v).is_one()))
    }

    /// `dim H_1(G, C_ρ)`.
    pub fn h1_dim(&self, rho: &Character) -> Result<usize> {
        self.check_character(rho)?;
        let rank = self.matrix.evaluate(rho.values()).rank();
        Ok(if rho.is_trivial() { self.n - rank } else { (self.n - 1).saturating_sub(rank) })
    }

    /// `dim H_1(G, C_ρ)` at a generic point of the torus.
    pub fn generic_h1_dim(&self) -> Result<usize> {
        Ok(self.n.saturating_sub(1).saturating_sub(generic_rank(&self.matrix)?))
    }
}

/// Z-basis of `(L ⊗ Q) ∩ Z^n` for `L` spanned by `rows`.
fn saturation_basis(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let e = RationalMatrix::from_rows(
        rows.len(),
        n,
        rows.iter().map(|r| SparseVec::from_pairs(r.iter().enumerate().map(|(j, &x)| (j, Rational::from_integer(x))))).collect(),
    );
    // integer vectors orthogonal to the rational kernel of E
    let kernel: Vec<Vec<BigInt>> = e
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let l = v.iter().fold(BigInt::from(1), |acc, (_, c)| acc.lcm(&c.denom()));
            let mut row = vec![BigInt::zero(); n];
            for (j, c) in v.iter() {
                row[j] = c.numer() * (&l / c.denom());
            }
            row
        })
        .collect();
    integer_kernel(&kernel, n)
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("lattice basis fits in i64")).collect())
        .collect()
}

/// Z-basis of `{v ∈ Z^n : K v = 0}` by unimodular reduction of `[Kᵀ | I]`.
fn integer_kernel(k: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|j| {
            let left = k.iter().map(|r| r[j].clone()).collect();
            let mut right = vec![BigInt::zero(); n];
            right[j] = BigInt::from(1);
            (left, right)
        })
        .collect();
    let mut pivot = 0;
    for c in 0..k.len() {
        loop {
            let nz: Vec<usize> = (pivot..n).filter(|&r| !rows[r].0[c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    rows.swap(pivot, r);
                    pivot += 1;
                }
                break;
            }
            let best = *nz.iter().min_by_key(|&&r| rows[r].0[c].abs()).unwrap();
            let (bl, br) = rows[best].clone();
            for &r in &nz {
                if r == best {
                    continue;
                }
                let q = rows[r].0[c].div_floor(&bl[c]);
                let (l, rr) = &mut rows[r];
                for (x, y) in l.iter_mut().zip(&bl) {
                    *x -= &q * y;
                }
                for (x, y) in rr.iter_mut().zip(&br) {
                    *x -= &q * y;
                }
            }
        }
    }
    rows.into_iter().skip(pivot).map(|(_, r)| r).collect()
}

pub fn twisted_h1_dim(p: &GroupPresentation, rho: &Character) -> Result<usize> {
    TwistedHomology::new(p).h1_dim(rho)
}

/// Whether `ρ ∈ V¹_k(G)`.
pub fn cv_membership(p: &GroupPresentation, rho: &Character, k: usize) -> Result<bool> {
    Ok(twisted_h1_dim(p, rho)? >= k)
}

/// Membership in the restricted variety: `ρ` must also lie in the identity
/// component of the character torus.
pub fn cv_membership_restricted(p: &GroupPresentation, rho: &Character, k: usize) -> Result<bool> {
    let th = TwistedHomology::new(p);
    Ok(th.in_identity_component(rho)? && th.h1_dim(rho)? >= k)
}

/// All characters with values in `μ_m` lying in `V¹_k(G)`, in lexicographic
/// order of exponents.
pub fn torsion_sweep(p: &GroupPresentation, m: u64, k: usize) -> Result<Vec<Character>> {
    torsion_sweep_within(p, m, k, false, &Budget::from_env()?)
}

pub fn torsion_sweep_within(
    p: &GroupPresentation,
    m: u64,
    k: usize,
    restricted: bool,
    budget: &Budget,
) -> Result<Vec<Character>> {
    if m == 0 {
        return Err(Error::InvalidInput("torsion order must be positive".into()));
    }
    let n = p.num_generators;
    let count = (m as u128).checked_pow(n as u32).filter(|&c| c <= u64::MAX as u128).map(|c| c as u64);
    let Some(count) = count else {
        return Err(Error::BudgetExceeded { what: "torsion sweep points".into(), needed: u64::MAX, limit: budget.max_entries().unwrap_or(u64::MAX) });
    };
    budget.check("torsion sweep points", count.saturating_mul((p.relators.len() * n).max(1) as u64))?;
    let th = TwistedHomology::new(p);
    let found: Vec<Option<Character>> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<Option<Character>> {
            let mut e = vec![0i64; n];
            let mut x = idx;
            for slot in e.iter_mut().rev() {
                *slot = (x % m) as i64;
                x /= m;
            }
            let rho = Character::torsion(m, &e);
            match th.check_character(&rho) {
                Err(Error::NotACharacter { .. }) => return Ok(None),
                other => other?,
            }
            if restricted && !th.in_identity_component(&rho)? {
                return Ok(None);
            }
            Ok((th.h1_dim(&rho)? >= k).then_some(rho))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
