//! Exact scalar fields and sparse linear algebra over them.
//!
//! Everything downstream (differentials, cohomology tables) reduces to exact
//! rank computations on sparse matrices, either over `Q` or over a prime
//! field used as a fast screen.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

pub type Rat = BigRational;

/// Parse `p/q` or `p` into an exact rational. Used by the JSON element formats.
pub fn parse_rational(s: &str) -> Result<Rat, ExactError> {
    let s = s.trim();
    let mk_err = || ExactError::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| mk_err())?;
    let d = BigInt::from_str(den).map_err(|_| mk_err())?;
    if d.is_zero() {
        return Err(mk_err());
    }
    Ok(Rat::new(n, d))
}

pub fn format_rational(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a complex: d_out . d_in != 0 (first nonzero at row {row}, col {col})")]
    NotAComplex { row: usize, col: usize },
    #[error("entry out of range: ({row},{col}) in {rows}x{cols} matrix")]
    EntryOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("denominator not invertible mod {p}")]
    NotInvertibleModP { p: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A coefficient field, passed around as an explicit context object so that
/// prime fields can carry their modulus.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_rat(&self, q: &Rat) -> Result<Self::Elem, ExactError>;
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Rank of a row-major sparse matrix. The default is plain Gaussian
    /// elimination with a sparsity-guided pivot choice; `Rationals`
    /// overrides this with fraction-free integer elimination.
    fn matrix_rank(&self, rows: Vec<BTreeMap<u32, Self::Elem>>) -> usize {
        generic_rank(self, rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip()
    }
    fn from_rat(&self, q: &Rat) -> Result<Rat, ExactError> {
        Ok(q.clone())
    }
    fn format(&self, a: &Rat) -> String {
        format_rational(a)
    }

    fn matrix_rank(&self, rows: Vec<BTreeMap<u32, Rat>>) -> usize {
        fraction_free_rank(rows)
    }
}

/// F_p for an odd prime `p < 2^31` (products fit in u128 comfortably).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        PrimeField { p }
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc: u64 = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % self.p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "division by zero in F_p");
        self.pow(*a, self.p - 2)
    }
    fn from_rat(&self, q: &Rat) -> Result<u64, ExactError> {
        let p = BigInt::from(self.p);
        let num = q.numer().mod_floor(&p);
        let den = q.denom().mod_floor(&p);
        let num: u64 = num.try_into().expect("reduced mod p");
        let den: u64 = den.try_into().expect("reduced mod p");
        if den == 0 {
            return Err(ExactError::NotInvertibleModP { p: self.p });
        }
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Immutable sparse matrix with entries sorted row-major and no explicit zeros.
///
/// Convention throughout: a matrix maps the column index space to the row
/// index space, so a differential `basis(k-1) -> basis(k)` has
/// `cols = dim(k-1)` and `rows = dim(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, K::Elem)>,
}

/// Accumulates entries (duplicates allowed, summed on freeze).
pub struct MatrixBuilder<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, K::Elem)>,
}

impl<K: Field> MatrixBuilder<K> {
    pub fn new(field: K, rows: usize, cols: usize) -> Self {
        MatrixBuilder { field, rows, cols, entries: Vec::new() }
    }

    pub fn add(&mut self, row: usize, col: usize, v: K::Elem) -> Result<(), ExactError> {
        if row >= self.rows || col >= self.cols {
            return Err(ExactError::EntryOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.field.is_zero(&v) {
            self.entries.push((row as u32, col as u32, v));
        }
        Ok(())
    }

    pub fn freeze(mut self) -> SparseMatrix<K> {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(u32, u32, K::Elem)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries {
            match out.last_mut() {
                Some((lr, lc, lv)) if *lr == r && *lc == c => {
                    *lv = self.field.add(lv, &v);
                }
                _ => out.push((r, c, v)),
            }
        }
        out.retain(|(_, _, v)| !self.field.is_zero(v));
        SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, entries: out }
    }
}

impl<K: Field> SparseMatrix<K> {
    pub fn zero(field: K, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, entries: Vec::new() }
    }

    pub fn from_triplets(
        field: K,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, K::Elem)>,
    ) -> Result<Self, ExactError> {
        let mut b = MatrixBuilder::new(field, rows, cols);
        for (r, c, v) in triplets {
            b.add(r, c, v)?;
        }
        Ok(b.freeze())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
    pub fn entries(&self) -> &[(u32, u32, K::Elem)] {
        &self.entries
    }
    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<(u32, u32, K::Elem)> =
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, entries }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    fn row_maps(&self) -> Vec<BTreeMap<u32, K::Elem>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r as usize].insert(*c, v.clone());
        }
        rows
    }

    /// `self * other`, where `other` is applied first.
    pub fn compose(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "compose: {}x{} . {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let other_rows = other.row_maps();
        let mut b = MatrixBuilder::new(self.field.clone(), self.rows, other.cols);
        for (r, k, v) in &self.entries {
            for (c, w) in &other_rows[*k as usize] {
                b.add(*r as usize, *c as usize, self.field.mul(v, w))?;
            }
        }
        Ok(b.freeze())
    }

    pub fn apply(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "apply: {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (r, c, a) in &self.entries {
            let t = self.field.mul(a, &v[*c as usize]);
            out[*r as usize] = self.field.add(&out[*r as usize], &t);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.field.matrix_rank(self.row_maps())
    }

    pub fn nullspace_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Convert to another field entry-wise (entries must be expressible as
    /// rationals in the source field; used for the `F_p` screen of `Q` data).
    pub fn map_field<L: Field>(&self, target: &L) -> Result<SparseMatrix<L>, ExactError>
    where
        K: RatLift,
    {
        let mut b = MatrixBuilder::new(target.clone(), self.rows, self.cols);
        for (r, c, v) in &self.entries {
            b.add(*r as usize, *c as usize, target.from_rat(&self.field.lift(v))?)?;
        }
        Ok(b.freeze())
    }
}

/// Fields whose elements lift canonically to `Q`.
pub trait RatLift: Field {
    fn lift(&self, a: &Self::Elem) -> Rat;
}

impl RatLift for Rationals {
    fn lift(&self, a: &Rat) -> Rat {
        a.clone()
    }
}

/// `dim ker(d_out) - rank(d_in)` for a three-term slice
/// `basis(k-1) --d_in--> basis(k) --d_out--> basis(k+1)`.
pub fn cohomology_dim<K: Field>(
    d_in: &SparseMatrix<K>,
    d_out: &SparseMatrix<K>,
) -> Result<usize, ExactError> {
    if d_in.rows != d_out.cols {
        return Err(ExactError::DimensionMismatch(format!(
            "cohomology: d_in is {}x{}, d_out is {}x{}",
            d_in.rows, d_in.cols, d_out.rows, d_out.cols
        )));
    }
    let composite = d_out.compose(d_in)?;
    if let Some((r, c, _)) = composite.entries.first() {
        return Err(ExactError::NotAComplex { row: *r as usize, col: *c as usize });
    }
    Ok(d_out.nullspace_dim() - d_in.rank())
}

fn generic_rank<K: Field>(field: &K, mut rows: Vec<BTreeMap<u32, K::Elem>>) -> usize {
    let mut rank = 0;
    loop {
        // pivot: shortest row, and within it the column with fewest entries
        let mut col_count: BTreeMap<u32, usize> = BTreeMap::new();
        for row in &rows {
            for c in row.keys() {
                *col_count.entry(*c).or_insert(0) += 1;
            }
        }
        let Some(pi) = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .min_by_key(|(_, r)| r.len())
            .map(|(i, _)| i)
        else {
            break;
        };
        let prow = rows.swap_remove(pi);
        let (&pcol, _) = prow
            .iter()
            .min_by_key(|(c, _)| col_count.get(c).copied().unwrap_or(0))
            .expect("nonempty row");
        let pval = prow[&pcol].clone();
        rank += 1;
        let pinv = field.inv(&pval);
        for row in rows.iter_mut() {
            if let Some(a) = row.remove(&pcol) {
                let factor = field.mul(&a, &pinv);
                for (c, v) in &prow {
                    if *c == pcol {
                        continue;
                    }
                    let delta = field.neg(&field.mul(&factor, v));
                    let cur = row.remove(c);
                    let next = match cur {
                        Some(x) => field.add(&x, &delta),
                        None => delta,
                    };
                    if !field.is_zero(&next) {
                        row.insert(*c, next);
                    }
                }
            }
        }
    }
    rank
}

/// Fraction-free elimination on integer rows with per-row gcd normalization.
/// Denominators are cleared once up front, so all arithmetic stays in `Z`.
fn fraction_free_rank(rows: Vec<BTreeMap<u32, Rat>>) -> usize {
    let mut irows: Vec<BTreeMap<u32, BigInt>> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let mut lcm = BigInt::one();
        for v in row.values() {
            lcm = lcm.lcm(v.denom());
        }
        let mut irow = BTreeMap::new();
        for (c, v) in row {
            irow.insert(c, v.numer() * (&lcm / v.denom()));
        }
        irows.push(normalize_row(irow));
    }

    let mut rank = 0;
    loop {
        let mut col_count: BTreeMap<u32, usize> = BTreeMap::new();
        for row in &irows {
            for c in row.keys() {
                *col_count.entry(*c).or_insert(0) += 1;
            }
        }
        // Markowitz-flavored pivot: cheapest (row fill) x (column fill)
        let Some(pi) = irows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .min_by_key(|(_, r)| {
                let cmin = r.keys().map(|c| col_count[c]).min().unwrap_or(usize::MAX);
                (r.len().saturating_sub(1)) * (cmin.saturating_sub(1))
            })
            .map(|(i, _)| i)
        else {
            break;
        };
        let prow = irows.swap_remove(pi);
        let (&pcol, _) = prow
            .iter()
            .min_by_key(|(c, v)| (col_count[*c], v.magnitude().bits()))
            .expect("nonempty row");
        let pval = prow[&pcol].clone();
        rank += 1;
        for row in irows.iter_mut() {
            if let Some(a) = row.remove(&pcol) {
                // row <- pval*row - a*prow  (fraction free), then strip gcd
                let mut next: BTreeMap<u32, BigInt> = BTreeMap::new();
                for (c, v) in row.iter() {
                    next.insert(*c, v * &pval);
                }
                for (c, v) in &prow {
                    if *c == pcol {
                        continue;
                    }
                    let delta = -(&a * v);
                    let entry = next.entry(*c).or_insert_with(BigInt::zero);
                    *entry += delta;
                }
                next.retain(|_, v| !v.is_zero());
                *row = normalize_row(next);
            }
        }
    }
    rank
}

fn normalize_row(mut row: BTreeMap<u32, BigInt>) -> BTreeMap<u32, BigInt> {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
    row
}

// ---------------------------------------------------------------------------
// Matrix Market text interchange (for external cross-checks)
// ---------------------------------------------------------------------------

pub fn to_matrix_market(m: &SparseMatrix<Rationals>) -> String {
    let mut s = String::new();
    s.push_str("%%MatrixMarket matrix coordinate rational general\n");
    let _ = writeln!(s, "{} {} {}", m.rows, m.cols, m.entries.len());
    for (r, c, v) in &m.entries {
        let _ = writeln!(s, "{} {} {}", r + 1, c + 1, format_rational(v));
    }
    s
}

pub fn to_matrix_market_fp(m: &SparseMatrix<PrimeField>) -> String {
    let mut s = String::new();
    s.push_str("%%MatrixMarket matrix coordinate integer general\n");
    let _ = writeln!(s, "{} {} {}", m.rows, m.cols, m.entries.len());
    for (r, c, v) in &m.entries {
        let _ = writeln!(s, "{} {} {}", r + 1, c + 1, v);
    }
    s
}

/// Parse a rational or integer coordinate Matrix Market file back into a
/// sparse matrix over `Q`. Tolerates `%` comment lines; rejects anything
/// structurally malformed.
pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix<Rationals>, ExactError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ExactError::Parse("empty input".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() < 4
        || !h[0].starts_with("%%MatrixMarket")
        || h[1] != "matrix"
        || h[2] != "coordinate"
        || !matches!(h[3], "rational" | "integer")
    {
        return Err(ExactError::Parse(format!("unsupported header `{header}`")));
    }
    let mut size_line = None;
    for line in lines.by_ref() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        size_line = Some(t.to_string());
        break;
    }
    let size_line = size_line.ok_or_else(|| ExactError::Parse("missing size line".into()))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(ExactError::Parse(format!("bad size line `{size_line}`")));
    }
    let parse_dim = |s: &str| -> Result<usize, ExactError> {
        s.parse::<usize>().map_err(|_| ExactError::Parse(format!("bad size entry `{s}`")))
    };
    let (rows, cols, nnz) = (parse_dim(dims[0])?, parse_dim(dims[1])?, parse_dim(dims[2])?);
    if rows > 1_000_000 || cols > 1_000_000 || nnz > 10_000_000 {
        return Err(ExactError::Parse("matrix dimensions out of supported range".into()));
    }
    let mut b = MatrixBuilder::new(Rationals, rows, cols);
    let mut seen = 0usize;
    for line in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(ExactError::Parse(format!("bad entry line `{t}`")));
        }
        let r = parse_dim(parts[0])?;
        let c = parse_dim(parts[1])?;
        if r == 0 || c == 0 {
            return Err(ExactError::Parse("indices are 1-based".into()));
        }
        let v = parse_rational(parts[2])?;
        b.add(r - 1, c - 1, v)?;
        seen += 1;
    }
    if seen != nnz {
        return Err(ExactError::Parse(format!("expected {nnz} entries, found {seen}")));
    }
    Ok(b.freeze())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rq(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMatrix<Rationals> {
        SparseMatrix::from_triplets(
            Rationals,
            rows,
            cols,
            entries.iter().map(|&(r, c, v)| (r, c, rq(v))),
        )
        .unwrap()
    }

    /// Dense Gaussian elimination over Q; the independent oracle for rank.
    fn dense_rank_oracle(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> usize {
        let mut a = vec![vec![Rat::zero(); cols]; rows];
        for &(r, c, v) in entries {
            a[r][c] += rq(v);
        }
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let piv = (row..rows).find(|&i| !a[i][col].is_zero());
            let Some(piv) = piv else { continue };
            a.swap(row, piv);
            let p = a[row][col].clone();
            for i in 0..rows {
                if i != row && !a[i][col].is_zero() {
                    let f = &a[i][col] / &p;
                    for j in 0..cols {
                        let t = &a[row][j] * &f;
                        a[i][j] -= t;
                    }
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_trivial_cases() {
        assert_eq!(mat(0, 0, &[]).rank(), 0);
        let id5: Vec<(usize, usize, i64)> = (0..5).map(|i| (i, i, 1)).collect();
        assert_eq!(mat(5, 5, &id5).rank(), 5);
    }

    #[test]
    fn rank_matches_dense_oracle_on_given_example() {
        let entries = [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)];
        assert_eq!(dense_rank_oracle(2, 2, &entries), 1);
        assert_eq!(mat(2, 2, &entries).rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        let id3: Vec<(usize, usize, i64)> = (0..3).map(|i| (i, i, 1)).collect();
        assert_eq!(mat(3, 3, &id3).nullspace_dim(), 0);
        assert_eq!(mat(4, 7, &[]).nullspace_dim(), 7);
        let entries = [(0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1)];
        assert_eq!(dense_rank_oracle(2, 3, &entries), 2);
        assert_eq!(mat(2, 3, &entries).nullspace_dim(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank_randomized() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..40 {
            let rows = (next() % 6 + 1) as usize;
            let cols = (next() % 6 + 1) as usize;
            let mut entries = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if next() % 3 == 0 {
                        entries.push((r, c, (next() % 7) as i64 - 3));
                    }
                }
            }
            let m = mat(rows, cols, &entries);
            let oracle = dense_rank_oracle(rows, cols, &entries);
            assert_eq!(m.rank(), oracle);
            assert_eq!(m.transpose().rank(), oracle);
            assert_eq!(m.transpose().transpose(), m);
        }
    }

    #[test]
    fn fp_rank_at_most_rational_rank() {
        let fp = PrimeField::new(2147483629);
        let small = PrimeField::new(5);
        let entries = [(0, 0, 5), (0, 1, 10), (1, 0, 1), (1, 1, 3)];
        let m = mat(2, 2, &entries);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.map_field(&fp).unwrap().rank(), 2);
        // over F_5 the first row vanishes
        assert_eq!(m.map_field(&small).unwrap().rank(), 1);
        assert!(m.map_field(&small).unwrap().rank() <= m.rank());
    }

    #[test]
    fn cohomology_zero_differentials() {
        let d_in = SparseMatrix::zero(Rationals, 3, 0);
        let d_out = SparseMatrix::zero(Rationals, 0, 3);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 3);

        let d_in = SparseMatrix::zero(Rationals, 2, 1);
        let d_out = SparseMatrix::zero(Rationals, 1, 2);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 2);
    }

    #[test]
    fn cohomology_exact_three_term_complex() {
        // Q -> Q^2 -> Q with d_in = (1,0)^T, d_out = (0,1): exact in the middle
        let d_in = mat(2, 1, &[(0, 0, 1)]);
        let d_out = mat(1, 2, &[(0, 1, 1)]);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn cohomology_rejects_non_complexes() {
        let d_in = mat(2, 1, &[(0, 0, 1)]);
        let d_out = mat(1, 2, &[(0, 0, 1)]);
        assert!(matches!(
            cohomology_dim(&d_in, &d_out),
            Err(ExactError::NotAComplex { .. })
        ));
        let bad = mat(3, 3, &[]);
        assert!(matches!(
            cohomology_dim(&d_in, &bad),
            Err(ExactError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn cohomology_invariant_under_basis_permutation() {
        // permute middle basis of the 3-term complex; dims must agree
        let d_out = mat(1, 3, &[(0, 0, 1), (0, 1, 1), (0, 2, -2)]);
        let d_in = mat(3, 2, &[(1, 1, 2), (2, 1, 1)]);
        let h = cohomology_dim(&d_in, &d_out).unwrap();
        // permutation of the middle coordinates (0 1 2) -> (2 0 1)
        let perm = [2usize, 0, 1];
        let d_in_p = SparseMatrix::from_triplets(
            Rationals,
            3,
            2,
            d_in.entries().iter().map(|(r, c, v)| (perm[*r as usize], *c as usize, v.clone())),
        )
        .unwrap();
        let d_out_p = SparseMatrix::from_triplets(
            Rationals,
            1,
            3,
            d_out.entries().iter().map(|(r, c, v)| (*r as usize, perm[*c as usize], v.clone())),
        )
        .unwrap();
        assert_eq!(cohomology_dim(&d_in_p, &d_out_p).unwrap(), h);
    }

    #[test]
    fn matrix_market_round_trip() {
        let m = mat(3, 4, &[(0, 1, 2), (2, 3, -5), (1, 0, 7)]);
        let text = to_matrix_market(&m);
        assert!(text.starts_with("%%MatrixMarket matrix coordinate rational general"));
        let back = parse_matrix_market(&text).unwrap();
        assert_eq!(back, m);

        let fp = PrimeField::new(2147483629);
        let mf = m.map_field(&fp).unwrap();
        let text = to_matrix_market_fp(&mf);
        let back = parse_matrix_market(&text).unwrap();
        assert_eq!(back.rank(), m.rank());
    }

    #[test]
    fn matrix_market_rejects_garbage() {
        assert!(parse_matrix_market("").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1.0").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate rational general\n2 2 1\n0 1 3").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate rational general\n2 2 2\n1 1 3").is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), Rat::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-6/8").unwrap(), Rat::new((-3).into(), 4.into()));
        assert_eq!(format_rational(&parse_rational("-6/8").unwrap()), "-3/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
