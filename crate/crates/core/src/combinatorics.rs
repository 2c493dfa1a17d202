//! Index bookkeeping for exterior and symmetric powers.
//!
//! Exterior monomials are strictly increasing index lists in lexicographic
//! order; symmetric monomials are non-decreasing index lists in
//! lexicographic order, which is graded-lex order on exponent vectors
//! (x0^d first).

use std::collections::HashMap;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Basis of ∧^k of an n-dimensional space.
#[derive(Clone, Debug)]
pub struct SubsetBasis {
    n: usize,
    k: usize,
    sets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SubsetBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mut sets = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut sets);
        let index = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        SubsetBasis { n, k, sets, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.sets.iter().map(Vec::as_slice)
    }

    /// Index of a strictly increasing list.
    pub fn index_of(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Sort an arbitrary list of distinct indices; returns the index of the
    /// sorted list and the sign of the sorting permutation, or `None` on a repeat.
    pub fn signed_index(&self, unsorted: &[usize]) -> Option<(usize, i64)> {
        let (sorted, sign) = sort_with_sign(unsorted)?;
        Some((self.index[&sorted], sign))
    }
}

/// Sort distinct indices, returning the permutation sign; `None` if an index repeats.
pub fn sort_with_sign(items: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = items.to_vec();
    let mut sign = 1i64;
    // insertion sort counts transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Basis of Sym^d of an n-dimensional space.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    degree: usize,
    monos: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let mut monos = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == d {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i, n, d, cur, out);
                cur.pop();
            }
        }
        if n > 0 || degree == 0 {
            rec(0, n, degree, &mut cur, &mut monos);
        }
        let index = monos.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        MonomialBasis { n, degree, monos, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.monos[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.monos.iter().map(Vec::as_slice)
    }

    pub fn index_of(&self, mono: &[usize]) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Exponent vector of monomial `i`.
    pub fn exponents(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.n];
        for &v in &self.monos[i] {
            e[v] += 1;
        }
        e
    }
}

/// `mono · x_var` as a sorted index list.
pub fn times_variable(mono: &[usize], var: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(mono.len() + 1);
    let pos = mono.partition_point(|&x| x <= var);
    out.extend_from_slice(&mono[..pos]);
    out.push(var);
    out.extend_from_slice(&mono[pos..]);
    out
}
