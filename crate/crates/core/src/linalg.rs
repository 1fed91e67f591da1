//! Exact sparse and dense linear algebra over a [`Field`].
//!
//! The workhorse is [`ExactMatrix::rank`], which peels singleton rows and
//! columns structurally, then runs a left-looking sparse elimination on the
//! remaining core with columns ordered by ascending count, and switches to
//! dense elimination once the core gets denser than [`DENSE_SWITCH`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

/// Density above which the elimination core is handed to the dense kernel.
pub const DENSE_SWITCH: f64 = 0.25;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<E> = Vec<(u32, E)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A sparse matrix over `F`, stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        ExactMatrix { field, rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let data = (0..n).map(|i| vec![(i as u32, one.clone())]).collect();
        ExactMatrix { field, rows: n, cols: n, data }
    }

    /// Build from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        field: F,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self, LinalgError> {
        let mut data: Vec<SparseVec<F::Elem>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfRange { row: r, col: c, rows, cols });
            }
            data[r].push((c as u32, v));
        }
        for row in data.iter_mut() {
            *row = normalize_sparse(&field, std::mem::take(row));
        }
        Ok(ExactMatrix { field, rows, cols, data })
    }

    /// Build from detached field elements; every entry must belong to `field`.
    pub fn from_elements(field: F, rows: usize, cols: usize, entries: &[(usize, usize, FieldElement)]) -> Result<Self, LinalgError> {
        let converted = entries.iter().map(|(r, c, e)| Ok((*r, *c, field.from_element(e)?))).collect::<Result<Vec<_>, FieldError>>()?;
        Self::from_triplets(field, rows, cols, converted)
    }

    pub fn from_dense(field: F, dense: &[Vec<F::Elem>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let data = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !field.is_zero(v)).map(|(c, v)| (c as u32, v.clone())).collect())
            .collect();
        ExactMatrix { field, rows, cols, data }
    }

    /// Build directly from sparse rows (indices must be sorted, no zeros).
    pub fn from_sparse_rows(field: F, cols: usize, data: Vec<SparseVec<F::Elem>>) -> Self {
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(data.iter().flatten().all(|(c, v)| (*c as usize) < cols && !field.is_zero(v)));
        ExactMatrix { field, rows: data.len(), cols, data }
    }

    /// Build from sparse columns.
    pub fn from_sparse_cols(field: F, rows: usize, columns: Vec<SparseVec<F::Elem>>) -> Self {
        let cols = columns.len();
        let mut data: Vec<SparseVec<F::Elem>> = vec![Vec::new(); rows];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                data[r as usize].push((c as u32, v));
            }
        }
        ExactMatrix { field, rows, cols, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, r: usize) -> &SparseVec<F::Elem> {
        &self.data[r]
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.data[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Triplet view with detached elements.
    pub fn entries(&self) -> Vec<(usize, usize, FieldElement)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c as usize, v)))
            .map(|(r, c, v)| (r, c, self.field.to_element(v)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![self.field.zero(); self.cols];
                for (c, v) in row {
                    d[*c as usize] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c as usize].push((r as u32, v.clone()));
            }
        }
        ExactMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(self.field.zero(), |acc, (c, a)| self.field.add(&acc, &self.field.mul(a, &v[*c as usize]))))
            .collect())
    }

    pub fn mul(&self, other: &ExactMatrix<F>) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = &self.field;
        let mut acc = vec![f.zero(); other.cols];
        let mut touched: Vec<u32> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k as usize] {
                    let j = *j as usize;
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j as u32);
                    }
                    acc[j] = f.add(&acc[j], &f.mul(a, b));
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::replace(&mut acc[j as usize], f.zero());
                mark[j as usize] = false;
                if !f.is_zero(&v) {
                    out.push((j, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(ExactMatrix { field: f.clone(), rows: self.rows, cols: other.cols, data })
    }

    /// Rank by structural peeling followed by sparse/dense elimination.
    pub fn rank(&self) -> usize {
        sparse_rank(&self.field, self.cols, self.data.clone())
    }

    /// Rank by plain dense Gaussian elimination (reference path).
    pub fn dense_rank(&self) -> usize {
        self.field.dense_rank(self.to_dense())
    }

    /// Reduced row echelon form (dense).
    pub fn rref(&self) -> Rref<F> {
        rref_dense(&self.field, self.to_dense(), self.cols)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let rows: Vec<Vec<F::Elem>> = self
            .to_dense()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
                row
            })
            .collect();
        let rref = rref_dense(&self.field, rows, n);
        if rref.rank() < n {
            return None;
        }
        let inv: Vec<Vec<F::Elem>> = rref.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Self::from_dense(self.field.clone(), &inv))
    }

    /// Rank and a kernel basis; the basis is read off the RREF, so it is
    /// canonical for a given matrix.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<F::Elem>>) {
        let rref = self.rref();
        let kernel = rref.kernel_basis(&self.field);
        (rref.rank(), kernel)
    }
}

/// Sort, merge duplicates and drop zeros.
pub fn normalize_sparse<F: Field>(field: &F, mut v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx = field.add(lx, &x),
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !field.is_zero(x));
    out
}

/// Result of dense reduction to RREF.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub cols: usize,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    /// The nonzero rows, each with a 1 at its pivot and zeros at other pivots.
    pub rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_basis(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|c| !is_pivot[*c])
            .map(|free| {
                let mut v = vec![field.zero(); self.cols];
                v[free] = field.one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = field.neg(&row[free]);
                }
                v
            })
            .collect()
    }
}

pub fn rref_dense<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>, cols: usize) -> Rref<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !field.is_zero(&rows[k][c])) else {
            continue;
        };
        rows.swap(r, k);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !field.is_zero(&row[c]) {
                let coef = field.neg(&row[c]);
                field.axpy(row, &coef, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Rref { cols, pivots, rows }
}

pub(crate) fn dense_rank_generic<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !field.is_zero(&rows[k][c])) else {
            continue;
        };
        rows.swap(r, k);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            if !field.is_zero(&row[c]) {
                let coef = field.neg(&field.mul(&row[c], &inv));
                field.axpy(&mut row[c..], &coef, &pivot[c..]);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Dense rank over `F_p` with lazily reduced `u64` accumulators.
pub(crate) fn dense_rank_mod_p(p: u32, rows: Vec<Vec<u32>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let p64 = p as u64;
    let sq = (p64 - 1) * (p64 - 1);
    // number of unreduced multiply-adds a reduced row can absorb
    let budget = ((u64::MAX - p64) / sq.max(1)).min(u32::MAX as u64) as u32;
    let mut rows: Vec<(Vec<u64>, u32)> = rows.into_iter().map(|r| (r.into_iter().map(u64::from).collect(), 0)).collect();
    let inv = |a: u64| -> u64 {
        let (mut base, mut e, mut acc) = (a % p64, p64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p64;
            }
            base = base * base % p64;
            e >>= 1;
        }
        acc
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k].0[c].is_multiple_of(p64)) else {
            continue;
        };
        rows.swap(r, k);
        {
            let (row, pending) = &mut rows[r];
            for x in row[c..].iter_mut() {
                *x %= p64;
            }
            *pending = 0;
            let iv = inv(row[c]);
            for x in row[c..].iter_mut() {
                *x = *x * iv % p64;
            }
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r].0[c..];
        for (row, pending) in tail.iter_mut() {
            let lead = row[c] % p64;
            if lead == 0 {
                row[c] = 0;
                continue;
            }
            if *pending >= budget {
                for x in row[c..].iter_mut() {
                    *x %= p64;
                }
                *pending = 0;
            }
            let coef = p64 - lead;
            for (x, y) in row[c..].iter_mut().zip(pivot) {
                *x += coef * y;
            }
            *pending += 1;
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Fraction-free (Bareiss) rank over ℚ: rows are scaled to integers first.
pub(crate) fn fraction_free_rank(rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            for j in (c + 1)..cols {
                let v = &pivot[c] * &row[j] - &row[c] * &pivot[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot[c].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Rank of the matrix with the given sparse rows.
pub fn sparse_rank<F: Field>(field: &F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> usize {
    let (peeled, core_rows, core_cols) = peel(ncols, rows);
    if core_rows.is_empty() {
        return peeled;
    }
    peeled + core_rank(field, core_cols, core_rows)
}

/// Structural peeling of singleton rows and columns. Returns the number of
/// peeled pivots and the remaining core with compacted column indices.
fn peel<E: Clone>(ncols: usize, rows: Vec<SparseVec<E>>) -> (usize, Vec<SparseVec<E>>, usize) {
    let rows: Vec<SparseVec<E>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let nrows = rows.len();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut col_alive = vec![true; ncols];
    let mut row_count: Vec<usize> = rows.iter().map(Vec::len).collect();
    let mut col_count: Vec<usize> = col_rows.iter().map(Vec::len).collect();
    let mut queue_rows: Vec<u32> = (0..nrows as u32).filter(|&r| row_count[r as usize] == 1).collect();
    let mut queue_cols: Vec<u32> = (0..ncols as u32).filter(|&c| col_count[c as usize] == 1).collect();
    let mut peeled = 0;

    loop {
        if let Some(c) = queue_cols.pop() {
            let c = c as usize;
            if !col_alive[c] || col_count[c] != 1 {
                continue;
            }
            let r = col_rows[c].iter().map(|&r| r as usize).find(|&r| row_alive[r]).expect("live row");
            peeled += 1;
            row_alive[r] = false;
            col_alive[c] = false;
            for (cc, _) in &rows[r] {
                let cc = *cc as usize;
                if col_alive[cc] {
                    col_count[cc] -= 1;
                    if col_count[cc] == 1 {
                        queue_cols.push(cc as u32);
                    }
                }
            }
            continue;
        }
        if let Some(r) = queue_rows.pop() {
            let r = r as usize;
            if !row_alive[r] || row_count[r] != 1 {
                continue;
            }
            let c = rows[r].iter().map(|(c, _)| *c as usize).find(|&c| col_alive[c]).expect("live col");
            peeled += 1;
            row_alive[r] = false;
            col_alive[c] = false;
            for &rr in &col_rows[c] {
                let rr = rr as usize;
                if row_alive[rr] {
                    row_count[rr] -= 1;
                    if row_count[rr] == 1 {
                        queue_rows.push(rr as u32);
                    }
                }
            }
            continue;
        }
        break;
    }

    let mut remap = vec![u32::MAX; ncols];
    let mut next = 0u32;
    for c in 0..ncols {
        if col_alive[c] && col_count[c] > 0 {
            remap[c] = next;
            next += 1;
        }
    }
    let core: Vec<SparseVec<E>> = rows
        .into_iter()
        .enumerate()
        .filter(|(r, _)| row_alive[*r] && row_count[*r] > 0)
        .map(|(_, row)| row.into_iter().filter(|(c, _)| remap[*c as usize] != u32::MAX).map(|(c, v)| (remap[c as usize], v)).collect())
        .collect();
    (peeled, core, next as usize)
}

fn core_rank<F: Field>(field: &F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> usize {
    let nnz: usize = rows.iter().map(Vec::len).sum();
    let area = rows.len() as f64 * ncols as f64;
    if nnz as f64 > DENSE_SWITCH * area {
        return dense_from_sparse(field, ncols, rows.iter());
    }

    // Column ordering: sparse columns first.
    let mut count = vec![0usize; ncols];
    for row in &rows {
        for (c, _) in row {
            count[*c as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..ncols as u32).collect();
    order.sort_by_key(|&c| (count[c as usize], c));
    let mut position = vec![0u32; ncols];
    for (k, &c) in order.iter().enumerate() {
        position[c as usize] = k as u32;
    }
    let mut rows: Vec<SparseVec<F::Elem>> = rows
        .into_iter()
        .map(|row| {
            let mut r: SparseVec<F::Elem> = row.into_iter().map(|(c, v)| (position[c as usize], v)).collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .collect();
    rows.sort_by_key(|r| (r.len(), r.first().map(|e| e.0)));

    let mut pivots: Vec<Option<SparseVec<F::Elem>>> = vec![None; ncols];
    let mut pivot_nnz = 0usize;
    let mut rank = 0usize;
    let mut acc: Vec<F::Elem> = vec![field.zero(); ncols];
    let mut in_heap = vec![false; ncols];
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();

    for (done, row) in rows.iter().enumerate() {
        if rank > 32 && pivot_nnz as f64 > DENSE_SWITCH * rank as f64 * ncols as f64 {
            let remaining = rows[done..].iter();
            let pivot_rows = pivots.iter().flatten();
            let sub = dense_from_sparse(field, ncols, pivot_rows.chain(remaining));
            return sub;
        }
        for (c, v) in row {
            acc[*c as usize] = v.clone();
            in_heap[*c as usize] = true;
            heap.push(Reverse(*c));
        }
        let mut new_pivot: Option<usize> = None;
        while let Some(Reverse(c)) = heap.pop() {
            let c = c as usize;
            in_heap[c] = false;
            if field.is_zero(&acc[c]) {
                continue;
            }
            match &pivots[c] {
                Some(prow) => {
                    let coef = field.neg(&acc[c]);
                    for (j, v) in prow {
                        let j = *j as usize;
                        acc[j] = field.add(&acc[j], &field.mul(&coef, v));
                        if !in_heap[j] && j != c {
                            in_heap[j] = true;
                            heap.push(Reverse(j as u32));
                        }
                    }
                    acc[c] = field.zero();
                }
                None => {
                    new_pivot = Some(c);
                    break;
                }
            }
        }
        if let Some(c) = new_pivot {
            let inv = field.inv(&acc[c]).expect("nonzero pivot");
            let mut prow: SparseVec<F::Elem> = vec![(c as u32, field.one())];
            acc[c] = field.zero();
            let mut rest: Vec<u32> = Vec::with_capacity(heap.len());
            while let Some(Reverse(j)) = heap.pop() {
                in_heap[j as usize] = false;
                rest.push(j);
            }
            rest.sort_unstable();
            rest.dedup();
            for j in rest {
                let v = std::mem::replace(&mut acc[j as usize], field.zero());
                if !field.is_zero(&v) {
                    prow.push((j, field.mul(&v, &inv)));
                }
            }
            pivot_nnz += prow.len();
            pivots[c] = Some(prow);
            rank += 1;
            if rank == ncols {
                return rank;
            }
        }
    }
    rank
}

fn dense_from_sparse<'a, F: Field>(field: &F, ncols: usize, rows: impl Iterator<Item = &'a SparseVec<F::Elem>>) -> usize {
    let dense: Vec<Vec<F::Elem>> = rows
        .map(|row| {
            let mut d = vec![field.zero(); ncols];
            for (c, v) in row {
                d[*c as usize] = v.clone();
            }
            d
        })
        .collect();
    field.dense_rank(dense)
}

/// A subspace of `F^n` kept as a semi-echelon basis of dense rows.
///
/// Row `k` has a 1 in column `pivots[k]` and zeros in the pivot columns of
/// all rows inserted before it, so reducing against rows in insertion order
/// is well defined.
#[derive(Debug, Clone)]
pub struct EchelonSpace<F: Field> {
    field: F,
    dim: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> EchelonSpace<F> {
    pub fn new(field: F, dim: usize) -> Self {
        EchelonSpace { field, dim, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` in place against the basis.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&v[p]) {
                let coef = self.field.neg(&v[p]);
                self.field.axpy(v, &coef, row);
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Insert `v`; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        let inv = self.field.inv(&v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = self.field.mul(x, &inv);
        }
        self.pivots.push(p);
        self.rows.push(v);
        true
    }

    pub fn insert_sparse(&mut self, v: &SparseVec<F::Elem>) -> bool {
        let mut d = vec![self.field.zero(); self.dim];
        for (c, x) in v {
            d[*c as usize] = x.clone();
        }
        self.insert(d)
    }

    /// Canonical basis: the reduced row echelon form of the span.
    pub fn canonical_basis(&self) -> Vec<Vec<F::Elem>> {
        rref_dense(&self.field, self.rows.clone(), self.dim).rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let m = ExactMatrix::identity(fp(), 2);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 2);
        assert!(ker.is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn inverse_round_trips() {
        let f = fp();
        let m = ExactMatrix::from_dense(f, &[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(f, 3));
        let singular = ExactMatrix::from_dense(f, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = ExactMatrix::zeros(fp(), 3, 4);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 0);
        assert_eq!(ker.len(), 4);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn rational_rank_one_kernel() {
        let q = RationalField;
        let dense = vec![vec![q.from_i64(1), q.from_i64(2)], vec![q.from_i64(2), q.from_i64(4)]];
        let m = ExactMatrix::from_dense(q, &dense);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 1);
        // (2, -1) up to scale
        let v = &ker[0];
        assert_eq!(q.mul(&v[0], &q.from_i64(-1)), q.mul(&v[1], &q.from_i64(2)));
        assert!(m.mul_vec(v).unwrap().iter().all(|x| q.is_zero(x)));
        assert_eq!(m.rank(), 1);
        assert_eq!(m.dense_rank(), 1);
    }

    #[test]
    fn mixed_field_entries_are_rejected() {
        let entries = vec![(0, 0, FieldElement::modular(1, 7)), (1, 1, FieldElement::modular(1, 11))];
        let err = ExactMatrix::from_elements(fp(), 2, 2, &entries).unwrap_err();
        assert!(matches!(err, LinalgError::Field(FieldError::Descriptor { .. })));
    }

    #[test]
    fn bareiss_agrees_on_small_integer_matrix() {
        let q = RationalField;
        let rows: Vec<Vec<BigRational>> =
            [[2, 4, 1], [1, 2, 0], [3, 6, 1]].iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect();
        assert_eq!(fraction_free_rank(rows.clone()), 2);
        assert_eq!(dense_rank_generic(&q, rows), 2);
    }

    fn random_sparse(seed: u64, rows: usize, cols: usize, density: f64) -> ExactMatrix<PrimeField> {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    t.push((r, c, f.random(&mut rng)));
                }
            }
        }
        ExactMatrix::from_triplets(f, rows, cols, t).unwrap()
    }

    #[test]
    fn low_rank_products_are_detected() {
        let a = random_sparse(1, 60, 5, 0.6);
        let b = random_sparse(2, 5, 70, 0.6);
        let m = a.mul(&b).unwrap();
        assert!(m.rank() <= 5);
        assert_eq!(m.rank(), m.dense_rank());
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(seed in 0u64..10_000, rows in 1usize..30, cols in 1usize..30, density in 0.02f64..0.7) {
            let m = random_sparse(seed, rows, cols, density);
            let r = m.rank();
            prop_assert_eq!(r, m.dense_rank());
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert_eq!(r, m.rref().rank());
        }

        #[test]
        fn kernel_vectors_are_annihilated(seed in 0u64..10_000, rows in 1usize..15, cols in 1usize..15) {
            let m = random_sparse(seed, rows, cols, 0.3);
            let (rank, ker) = m.rank_kernel();
            prop_assert_eq!(rank + ker.len(), cols);
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == 0));
            }
            let mut span = EchelonSpace::new(*m.field(), cols);
            for v in ker {
                prop_assert!(span.insert(v));
            }
        }
    }
}
