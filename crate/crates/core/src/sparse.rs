//! Sparse exact matrices: rank, reduced row echelon form, products.
//!
//! Rank over GF(p) uses Markowitz-style pivoting (sparsest column, then
//! sparsest row, ties broken by lowest index) to control fill-in. Rank over
//! the rationals clears denominators row by row and runs fraction-free
//! Bareiss elimination so intermediate values stay bounded.

use crate::field::{addmod, invmod, mulmod, FieldSpec, Scalar};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("entry ({0},{1}) outside a {2}x{3} matrix")]
    OutOfBounds(u32, u32, usize, usize),
    #[error("scalar not valid for field {0}")]
    WrongField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// An immutable sparse matrix over an exact field.
///
/// Entries are stored as (row, col, value) triplets in row-major order with
/// no zeros and no duplicate positions.
///
/// ```
/// use koszul::{FieldSpec, SparseMatrix};
/// let f = FieldSpec::prime(65537).unwrap();
/// let m = SparseMatrix::from_triplets(
///     2, 3,
///     vec![(0, 0, f.from_i64(1)), (0, 2, f.from_i64(2)), (1, 1, f.from_i64(5))],
///     f,
/// ).unwrap();
/// assert_eq!(m.rank(), 2);
/// assert_eq!(m.kernel_dim(), 1);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(u32, u32, Scalar)>,
    field: FieldSpec,
}

/// Result of `row_echelon`: the reduced form and its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Pivot column indices, ascending. Canonical: the leftmost independent
    /// columns of the input.
    pub pivots: Vec<usize>,
    /// Reduced row echelon form; one row per pivot, ordered by pivot column.
    pub matrix: SparseMatrix,
}

impl SparseMatrix {
    /// Builds a matrix from triplets. Repeated positions are summed and
    /// resulting zeros dropped, which makes assembling differentials easy.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: Vec<(u32, u32, Scalar)>,
        field: FieldSpec,
    ) -> Result<Self, LinAlgError> {
        let mut triplets = triplets;
        for (r, c, v) in &triplets {
            if (*r as usize) >= nrows || (*c as usize) >= ncols {
                return Err(LinAlgError::OutOfBounds(*r, *c, nrows, ncols));
            }
            if !field.owns(v) {
                return Err(LinAlgError::WrongField(field.to_string()));
            }
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, Scalar)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some((lr, lc, lv)) if *lr == r && *lc == c => {
                    *lv = field.add(lv, &v);
                }
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|(_, _, v)| !field.is_zero(v));
        Ok(SparseMatrix {
            nrows,
            ncols,
            entries,
            field,
        })
    }

    pub fn zero(nrows: usize, ncols: usize, field: FieldSpec) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            entries: Vec::new(),
            field,
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let entries = (0..n as u32).map(|i| (i, i, field.one())).collect();
        SparseMatrix {
            nrows: n,
            ncols: n,
            entries,
            field,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, Scalar)] {
        &self.entries
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<(u32, u32, Scalar)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
            field: self.field,
        }
    }

    pub fn matmul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, LinAlgError> {
        if self.ncols != rhs.nrows {
            return Err(LinAlgError::Shape(format!(
                "{}x{} * {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        if self.field != rhs.field {
            return Err(LinAlgError::WrongField(rhs.field.to_string()));
        }
        // rows of rhs, indexable by the column index of self
        let mut rhs_rows: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); rhs.nrows];
        for (r, c, v) in &rhs.entries {
            rhs_rows[*r as usize].push((*c, v.clone()));
        }
        let mut triplets = Vec::new();
        let mut acc: Vec<Option<Scalar>> = vec![None; rhs.ncols];
        let mut touched: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let mut j = i;
            while j < self.entries.len() && self.entries[j].0 == row {
                let (_, c, v) = &self.entries[j];
                for (cc, w) in &rhs_rows[*c as usize] {
                    let prod = self.field.mul(v, w);
                    match &mut acc[*cc as usize] {
                        Some(cur) => *cur = self.field.add(cur, &prod),
                        slot => {
                            *slot = Some(prod);
                            touched.push(*cc);
                        }
                    }
                }
                j += 1;
            }
            touched.sort_unstable();
            for cc in touched.drain(..) {
                if let Some(v) = acc[cc as usize].take() {
                    if !self.field.is_zero(&v) {
                        triplets.push((row, cc, v));
                    }
                }
            }
            i = j;
        }
        SparseMatrix::from_triplets(self.nrows, rhs.ncols, triplets, self.field)
    }

    /// Rank over the matrix's field. Deterministic; `kernel_dim` is
    /// `ncols - rank`.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Prime(p) => markowitz_rank_fp(self, p),
            FieldSpec::Rationals => bareiss_rank(self),
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Reduced row echelon form with the leftmost-pivot rule. The pivot
    /// column set is the canonical set of leftmost independent columns, so
    /// the non-pivot complement is reproducible across runs.
    pub fn row_echelon(&self) -> Echelon {
        match self.field {
            FieldSpec::Prime(p) => rref_fp(self, p),
            FieldSpec::Rationals => rref_qq(self),
        }
    }

    /// Coordinate-format text dump (1-based indices) for debugging.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "%%MatrixMarket matrix coordinate exact general");
        let _ = writeln!(out, "% field: {}", self.field);
        let _ = writeln!(out, "{} {} {}", self.nrows, self.ncols, self.entries.len());
        for (r, c, v) in &self.entries {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, self.field.scalar_to_string(v));
        }
        out
    }
}

fn rows_fp(m: &SparseMatrix) -> Vec<Vec<(u32, u64)>> {
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); m.nrows];
    for (r, c, v) in &m.entries {
        match v {
            Scalar::Fp(x) => rows[*r as usize].push((*c, *x)),
            _ => unreachable!("fp matrix holds fp scalars"),
        }
    }
    rows
}

/// row_a of the caller becomes row_a - factor * row_b (both sorted by column).
fn axpy_fp(a: &[(u32, u64)], b: &[(u32, u64)], factor: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                let v = addmod(va, p - mulmod(factor, vb, p), p);
                if v != 0 {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                out.push((ca, va));
                i += 1;
            }
            (Some(_), Some(&(cb, vb))) => {
                let v = mulmod(p - factor % p, vb, p);
                if v != 0 {
                    out.push((cb, v));
                }
                j += 1;
            }
            (Some(&(ca, va)), None) => {
                out.push((ca, va));
                i += 1;
            }
            (None, Some(&(cb, vb))) => {
                let v = mulmod(p - factor % p, vb, p);
                if v != 0 {
                    out.push((cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn markowitz_rank_fp(m: &SparseMatrix, p: u64) -> usize {
    let mut rows = rows_fp(m);
    let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].insert(r as u32);
        }
    }
    let mut col_active = vec![true; m.ncols];
    let mut rank = 0usize;
    loop {
        // pivot column: fewest active entries, then lowest index
        let mut best: Option<(usize, usize)> = None; // (count, col)
        for c in 0..m.ncols {
            if !col_active[c] || col_rows[c].is_empty() {
                continue;
            }
            let count = col_rows[c].len();
            if best.is_none_or(|(bc, _)| count < bc) {
                best = Some((count, c));
                if count == 1 {
                    break;
                }
            }
        }
        let Some((_, pc)) = best else { break };
        // pivot row: shortest row in that column, then lowest index
        let pr = *col_rows[pc]
            .iter()
            .min_by_key(|&&r| (rows[r as usize].len(), r))
            .expect("nonempty column");
        let pivot_row = std::mem::take(&mut rows[pr as usize]);
        for (c, _) in &pivot_row {
            col_rows[*c as usize].remove(&pr);
        }
        let pivot_val = pivot_row
            .iter()
            .find(|&&(c, _)| c as usize == pc)
            .expect("pivot entry")
            .1;
        let pivot_inv = invmod(pivot_val, p);
        let victims: Vec<u32> = col_rows[pc].iter().copied().collect();
        for r in victims {
            let old = std::mem::take(&mut rows[r as usize]);
            let val = old
                .iter()
                .find(|&&(c, _)| c as usize == pc)
                .expect("column index is consistent")
                .1;
            let factor = mulmod(val, pivot_inv, p);
            let new = axpy_fp(&old, &pivot_row, factor, p);
            for (c, _) in &old {
                col_rows[*c as usize].remove(&r);
            }
            for (c, _) in &new {
                col_rows[*c as usize].insert(r);
            }
            rows[r as usize] = new;
        }
        col_active[pc] = false;
        col_rows[pc].clear();
        rank += 1;
    }
    rank
}

fn rref_fp(m: &SparseMatrix, p: u64) -> Echelon {
    let mut placed: Vec<(usize, Vec<(u32, u64)>)> = Vec::new(); // (pivot col, row)
    let mut active: Vec<Vec<(u32, u64)>> = rows_fp(m).into_iter().filter(|r| !r.is_empty()).collect();
    for col in 0..m.ncols as u32 {
        // choose the sparsest active row with a leading entry in this column
        let mut pick: Option<usize> = None;
        for (i, row) in active.iter().enumerate() {
            if row.first().map(|&(c, _)| c) == Some(col)
                && pick.is_none_or(|b| row.len() < active[b].len())
            {
                pick = Some(i);
            }
        }
        let Some(i) = pick else { continue };
        let mut pivot_row = active.swap_remove(i);
        let inv = invmod(pivot_row[0].1, p);
        for (_, v) in pivot_row.iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        // clear this column from remaining active rows
        let mut next_active = Vec::with_capacity(active.len());
        for row in active {
            let reduced = match row.iter().find(|&&(c, _)| c == col) {
                Some(&(_, v)) => axpy_fp(&row, &pivot_row, v, p),
                None => row,
            };
            if !reduced.is_empty() {
                next_active.push(reduced);
            }
        }
        active = next_active;
        // and from already placed rows (back substitution as we go)
        for (_, row) in placed.iter_mut() {
            if let Some(&(_, v)) = row.iter().find(|&&(c, _)| c == col) {
                *row = axpy_fp(row, &pivot_row, v, p);
            }
        }
        placed.push((col as usize, pivot_row));
    }
    let pivots: Vec<usize> = placed.iter().map(|(c, _)| *c).collect();
    let mut triplets = Vec::new();
    for (i, (_, row)) in placed.iter().enumerate() {
        for (c, v) in row {
            triplets.push((i as u32, *c, Scalar::Fp(*v)));
        }
    }
    let matrix = SparseMatrix::from_triplets(placed.len(), m.ncols, triplets, m.field)
        .expect("echelon triplets are in range");
    Echelon { pivots, matrix }
}

fn dense_qq(m: &SparseMatrix) -> Vec<Vec<BigRational>> {
    let mut rows = vec![vec![BigRational::zero(); m.ncols]; m.nrows];
    for (r, c, v) in &m.entries {
        match v {
            Scalar::Rat(x) => rows[*r as usize][*c as usize] = (**x).clone(),
            _ => unreachable!("qq matrix holds rational scalars"),
        }
    }
    rows
}

/// Fraction-free Bareiss rank over the rationals. Each row is scaled to
/// integers first; all divisions below are exact.
fn bareiss_rank(m: &SparseMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = dense_qq(m)
        .into_iter()
        .map(|row| {
            let lcm = row
                .iter()
                .filter(|v| !v.is_zero())
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.into_iter()
                .map(|v| (v * BigRational::from(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let (nr, nc) = (m.nrows, m.ncols);
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..nc {
        let Some(pivot) = (row..nr).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot);
        for r in row + 1..nr {
            if rows[r].iter().skip(col).all(|v| v.is_zero()) {
                continue;
            }
            for c in col + 1..nc {
                let num = &rows[row][col] * &rows[r][c] - &rows[r][col] * &rows[row][c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                rows[r][c] = q;
            }
            rows[r][col] = BigInt::zero();
        }
        prev = rows[row][col].clone();
        row += 1;
        rank += 1;
        if row == nr {
            break;
        }
    }
    rank
}

fn rref_qq(m: &SparseMatrix) -> Echelon {
    let mut rows = dense_qq(m);
    let nc = m.ncols;
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..nc {
        let Some(pr) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pr);
        let inv = rows[row][col].recip();
        for c in col..nc {
            let v = &rows[row][c] * &inv;
            rows[row][c] = v;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..nc {
                    let v = &rows[r][c] - &f * &rows[row][c];
                    rows[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    let mut triplets = Vec::new();
    for (i, _) in pivots.iter().enumerate() {
        for (c, v) in rows[i].iter().enumerate() {
            if !v.is_zero() {
                triplets.push((i as u32, c as u32, Scalar::Rat(Box::new(v.clone()))));
            }
        }
    }
    let matrix = SparseMatrix::from_triplets(pivots.len(), nc, triplets, m.field)
        .expect("echelon triplets are in range");
    Echelon { pivots, matrix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::SplitMix64;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    /// Naive dense Gaussian elimination, used only as an oracle here.
    fn naive_rank(m: &SparseMatrix) -> usize {
        let f = m.field();
        let mut rows = vec![vec![f.zero(); m.ncols()]; m.nrows()];
        for (r, c, v) in m.entries() {
            rows[*r as usize][*c as usize] = v.clone();
        }
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.ncols() {
            let Some(pr) = (row..rows.len()).find(|&r| !f.is_zero(&rows[r][col])) else {
                continue;
            };
            rows.swap(row, pr);
            for r in 0..rows.len() {
                if r != row && !f.is_zero(&rows[r][col]) {
                    let factor = f.div(&rows[r][col], &rows[row][col]).unwrap();
                    for c in 0..m.ncols() {
                        let t = f.mul(&factor, &rows[row][c]);
                        rows[r][c] = f.sub(&rows[r][c], &t);
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows.len() {
                break;
            }
        }
        rank
    }

    fn random_matrix(rng: &mut SplitMix64, nr: usize, nc: usize, field: FieldSpec) -> SparseMatrix {
        let mut triplets = Vec::new();
        for r in 0..nr {
            for c in 0..nc {
                if rng.next_u64().is_multiple_of(3) {
                    triplets.push((r as u32, c as u32, rng.next_scalar(field)));
                }
            }
        }
        SparseMatrix::from_triplets(nr, nc, triplets, field).unwrap()
    }

    #[test]
    fn identity_rank() {
        let m = SparseMatrix::identity(5, fp(7));
        assert_eq!(m.rank(), 5);
        assert_eq!(m.kernel_dim(), 0);
    }

    #[test]
    fn proportional_rows_over_qq() {
        let q = FieldSpec::Rationals;
        let t = vec![
            (0, 0, q.from_i64(1)),
            (0, 1, q.from_i64(2)),
            (1, 0, q.from_i64(2)),
            (1, 1, q.from_i64(4)),
        ];
        let m = SparseMatrix::from_triplets(2, 2, t, q).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn echelon_zero_and_identity() {
        let z = SparseMatrix::zero(3, 4, fp(65537));
        assert!(z.row_echelon().pivots.is_empty());
        let id = SparseMatrix::identity(4, fp(65537));
        let e = id.row_echelon();
        assert_eq!(e.pivots, vec![0, 1, 2, 3]);
        assert_eq!(e.matrix, id);
    }

    #[test]
    fn rank_matches_naive_oracle() {
        let mut rng = SplitMix64::new(42);
        for field in [fp(65537), fp(1000003), FieldSpec::Rationals] {
            for _ in 0..12 {
                let m = random_matrix(&mut rng, 8, 11, field);
                assert_eq!(m.rank(), naive_rank(&m), "field {field}");
                assert_eq!(m.rank(), m.row_echelon().pivots.len());
            }
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..16 {
            let m = random_matrix(&mut rng, 9, 6, fp(65537));
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn product_rank_bound() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..12 {
            let a = random_matrix(&mut rng, 7, 5, fp(65537));
            let b = random_matrix(&mut rng, 5, 8, fp(65537));
            let ab = a.matmul(&b).unwrap();
            assert!(ab.rank() <= a.rank().min(b.rank()));
        }
    }

    #[test]
    fn rref_reproduces_row_space() {
        // duplicate triplets must be summed, zeros dropped
        let f = fp(13);
        let t = vec![
            (0, 0, f.from_i64(5)),
            (0, 0, f.from_i64(8)), // sums to 0 mod 13
            (0, 1, f.from_i64(3)),
            (1, 1, f.from_i64(6)),
        ];
        let m = SparseMatrix::from_triplets(2, 2, t, f).unwrap();
        assert_eq!(m.nnz(), 2);
        let e = m.row_echelon();
        assert_eq!(e.pivots, vec![1]);
        assert_eq!(e.matrix.nnz(), 1);
    }

    #[test]
    fn echelon_pivots_canonical_under_row_permutation() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..8 {
            let m = random_matrix(&mut rng, 6, 9, fp(65537));
            let mut rev: Vec<_> = m
                .entries()
                .iter()
                .map(|(r, c, v)| (m.nrows() as u32 - 1 - r, *c, v.clone()))
                .collect();
            rev.sort_by_key(|&(r, c, _)| (r, c));
            let m2 = SparseMatrix::from_triplets(m.nrows(), m.ncols(), rev, m.field()).unwrap();
            let (e1, e2) = (m.row_echelon(), m2.row_echelon());
            assert_eq!(e1.pivots, e2.pivots);
            assert_eq!(e1.matrix, e2.matrix);
        }
    }

    #[test]
    fn matrix_market_dump() {
        let f = fp(7);
        let m = SparseMatrix::from_triplets(2, 3, vec![(0, 2, f.from_i64(4)), (1, 0, f.from_i64(1))], f)
            .unwrap();
        let s = m.to_matrix_market();
        assert!(s.starts_with("%%MatrixMarket"));
        assert!(s.contains("2 3 2"));
        assert!(s.contains("1 3 4"));
        assert!(s.contains("2 1 1"));
    }
}
