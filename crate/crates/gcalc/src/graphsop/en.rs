//! The cohomology cooperad `e_n = H^*(D_n)` in arity `r`: generated by
//! `w_ij` of degree `n-1` for `1 <= i < j <= r`, subject to
//! `w_ji = (-1)^n w_ij`, `w_ij^2 = 0`, graded commutativity, and the Arnold
//! relation `w_ij w_jk + w_jk w_ki + w_ki w_ij = 0`.
//!
//! The admissible monomial basis consists of products whose larger indices
//! are pairwise distinct, sorted increasingly; a pair of factors sharing the
//! larger index rewrites by Arnold, strictly decreasing the multiset of
//! larger indices, so reduction terminates.

use super::{GraphsElement, GraphsOpError};
use crate::exactalg::{Rat, Rationals, SparseMatrix};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// 0-based generator `w_{i,j}` with `i < j` in normal form.
pub type EnFactor = (u8, u8);

#[derive(Debug, Clone, PartialEq)]
pub struct EnElement {
    pub arity: usize,
    pub n: u32,
    pub terms: BTreeMap<Vec<EnFactor>, Rat>,
}

impl EnElement {
    pub fn zero(arity: usize, n: u32) -> Self {
        EnElement { arity, n, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, GraphsOpError> {
        if self.arity != other.arity || self.n != other.n {
            return Err(GraphsOpError::ArityMismatch(self.arity, other.arity));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let e = out.terms.entry(w.clone()).or_insert_with(Rat::zero);
            *e += c;
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return EnElement::zero(self.arity, self.n);
        }
        EnElement {
            arity: self.arity,
            n: self.n,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    fn accumulate(&mut self, word: Vec<EnFactor>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(word).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GraphsOpError> {
        if self.arity != other.arity || self.n != other.n {
            return Err(GraphsOpError::ArityMismatch(self.arity, other.arity));
        }
        let mut out = EnElement::zero(self.arity, self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut word: Vec<EnFactor> = w1.clone();
                word.extend_from_slice(w2);
                let reduced = en_normal_form(self.arity, self.n, &word)?;
                for (w, c) in reduced.terms {
                    out.accumulate(w, c * c1 * c2);
                }
            }
        }
        Ok(out)
    }
}

/// Reduce a formal word of (not necessarily normalized) generators to the
/// admissible-monomial basis.
pub fn en_normal_form(arity: usize, n: u32, word: &[EnFactor]) -> Result<EnElement, GraphsOpError> {
    let mut out = EnElement::zero(arity, n);
    for (a, b) in word {
        if *a as usize >= arity || *b as usize >= arity {
            return Err(GraphsOpError::ArityMismatch(arity, (*a.max(b) + 1) as usize));
        }
    }
    // sign of commuting two generators and of reversing one
    let comm: i64 = if (n as i64 - 1) % 2 == 0 { 1 } else { -1 };
    let rev: i64 = if n % 2 == 0 { 1 } else { -1 };

    let mut stack: Vec<(Vec<EnFactor>, Rat)> = vec![(word.to_vec(), Rat::one())];
    'outer: while let Some((mut w, mut coeff)) = stack.pop() {
        // normalize factor endpoint order
        for f in w.iter_mut() {
            if f.0 == f.1 {
                continue 'outer; // w_ii = 0
            }
            if f.0 > f.1 {
                *f = (f.1, f.0);
                coeff *= Rat::from_integer(rev.into());
            }
        }
        // bubble sort by (larger, smaller) index, tracking Koszul signs
        let mut sorted = false;
        while !sorted {
            sorted = true;
            for t in 0..w.len().saturating_sub(1) {
                let key = |f: &EnFactor| (f.1, f.0);
                if key(&w[t]) > key(&w[t + 1]) {
                    w.swap(t, t + 1);
                    coeff *= Rat::from_integer(comm.into());
                    sorted = false;
                }
            }
        }
        // squares vanish
        if w.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        // find an adjacent pair sharing the larger index and rewrite by
        // Arnold: w_aj w_bj = w_ab w_bj + (-1)^n w_aj w_ab   (a < b < j)
        let shared = w.windows(2).position(|p| p[0].1 == p[1].1);
        match shared {
            None => out.accumulate(w, coeff),
            Some(t) => {
                let (a, j) = w[t];
                let (b, _) = w[t + 1];
                debug_assert!(a < b && b < j);
                let mut w1 = w.clone();
                w1[t] = (a, b);
                w1[t + 1] = (b, j);
                stack.push((w1, coeff.clone()));
                let mut w2 = w;
                w2[t] = (a, j);
                w2[t + 1] = (a, b);
                stack.push((w2, coeff * Rat::from_integer(rev.into())));
            }
        }
    }
    Ok(out)
}

/// Kill every diagram with internal vertices; an edge between externals
/// `i < j` becomes the generator `w_ij`, the word read off in the stored
/// orientation order so that signs transport correctly in both parities.
pub fn project_en(x: &GraphsElement) -> Result<EnElement, GraphsOpError> {
    let mut out = EnElement::zero(x.arity(), x.flavor.n);
    for (g, c) in x.inner.terms() {
        if g.num_internal() > 0 {
            continue;
        }
        let word: Vec<EnFactor> = g.edges().to_vec();
        let reduced = en_normal_form(x.arity(), x.flavor.n, &word)?;
        for (w, v) in reduced.terms {
            out.accumulate(w, v * c);
        }
    }
    Ok(out)
}

/// Dimension of the weight-`s` piece of `e_n(r)`, computed as the rank of
/// the reduction map on the full spanning set of `s`-fold products of
/// distinct generators (squares vanish identically).
pub fn en_weight_dimension(arity: usize, n: u32, weight: usize) -> Result<usize, GraphsOpError> {
    let mut gens: Vec<EnFactor> = Vec::new();
    for i in 0..arity as u8 {
        for j in (i + 1)..arity as u8 {
            gens.push((i, j));
        }
    }
    if weight == 0 {
        return Ok(1);
    }
    if weight > gens.len() {
        return Ok(0);
    }
    // all subsets of size `weight` (order irrelevant up to sign)
    let mut words: Vec<Vec<EnFactor>> = Vec::new();
    let mut idx: Vec<usize> = (0..weight).collect();
    loop {
        words.push(idx.iter().map(|&t| gens[t]).collect());
        // next combination
        let mut p = weight;
        loop {
            if p == 0 {
                idx.clear();
                break;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] <= gens.len() - (weight - p) {
                for q in p + 1..weight {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
        if idx.is_empty() {
            break;
        }
    }
    // rank of the coefficient matrix of the reductions in the normal basis
    let mut basis_index: BTreeMap<Vec<EnFactor>, usize> = BTreeMap::new();
    let mut triplets: Vec<(usize, usize, Rat)> = Vec::new();
    for (col, w) in words.iter().enumerate() {
        let reduced = en_normal_form(arity, n, w)?;
        for (nf, c) in reduced.terms {
            let next = basis_index.len();
            let row = *basis_index.entry(nf).or_insert(next);
            triplets.push((row, col, c));
        }
    }
    let m = SparseMatrix::from_triplets(Rationals, basis_index.len(), words.len(), triplets)?;
    Ok(m.rank())
}
