//! Graded pieces of `M = R/I` as a module over a coordinate subring
//! `S_t = k[x_t, …, x_n]`, Koszul complexes `Λ^i W ⊗ M` with
//! `W = ⟨x_t, …, x_n⟩`, Betti numbers as Koszul homology, and an explicit
//! check of the long exact sequence relating `Tor^{S_t}` and `Tor^{S_{t+1}}`.
//!
//! Basis conventions: `Λ^i W` is indexed by increasing index sets in
//! lexicographic order; `K_{i,d} = Λ^i W ⊗ M_{d-i}` is laid out subset-major,
//! each subset owning a block of `dim M_{d-i}` coordinates ordered like the
//! standard monomial basis of `M_{d-i}` (decreasing in degrevlex).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldKind};
use crate::groebner::{GroebnerBasis, Ideal, DEFAULT_DEGREE_CAP, INTERNAL_SEED};
use crate::linalg::{EchelonSpace, ExactMatrix, SparseVec};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};

/// Absolute internal degree of the entry in homological column `i`, row `j`.
pub fn slope_to_internal(i: u32, j: u32) -> u32 {
    i + j
}

/// Row index `j = d - i` of the entry `β_{i,d}`; `None` when `d < i`.
pub fn internal_to_slope(i: u32, d: u32) -> Option<u32> {
    d.checked_sub(i)
}

/// Increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn subset_index(n: usize, k: usize) -> FxHashMap<Vec<usize>, usize> {
    subsets(n, k).into_iter().enumerate().map(|(i, s)| (s, i)).collect()
}

/// Standard monomial bases of `M = R/I` (optionally `R/(I + R_{≥e})`) in
/// degrees `0..=max_degree`, and the multiplication maps by `x_t, …, x_n`.
#[derive(Clone, Debug)]
pub struct GradedModuleSlice<F: Field> {
    ring: Ring<F>,
    t: usize,
    truncation: Option<u32>,
    max_degree: u32,
    bases: Vec<Vec<Monomial>>,
    /// `mult[v - t][j]`: multiplication by `x_v` as a map `M_j → M_{j+1}`.
    mult: Vec<Vec<ExactMatrix<F>>>,
}

/// Memoized normal forms of monomials, as coordinates in the standard
/// monomial basis of their degree.
pub struct MonomialNormalForms<'g, F: Field> {
    gb: &'g GroebnerBasis<F>,
    masks: Vec<u64>,
    index: Vec<FxHashMap<Monomial, u32>>,
    truncation: Option<u32>,
    memo: FxHashMap<Monomial, SparseVec<F::Elem>>,
}

fn mask(m: &Monomial) -> u64 {
    m.exps().iter().enumerate().fold(0u64, |acc, (i, &e)| if e > 0 { acc | 1 << (i % 64) } else { acc })
}

impl<'g, F: Field> MonomialNormalForms<'g, F> {
    /// Standard bases in degrees `0..=max_degree`; empty from degree
    /// `truncation` on.
    pub fn new(gb: &'g GroebnerBasis<F>, max_degree: u32, truncation: Option<u32>) -> Self {
        let bases: Vec<Vec<Monomial>> =
            (0..=max_degree).map(|j| if truncation.is_some_and(|e| j >= e) { Vec::new() } else { gb.std_monomials(j) }).collect();
        let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(k, m)| (m, k as u32)).collect()).collect();
        let masks = gb.polys().iter().map(|g| mask(g.lead_monomial().unwrap())).collect();
        MonomialNormalForms { gb, masks, index, truncation, memo: FxHashMap::default() }
    }

    /// Standard monomials of degree `j`, in the order of the coordinates.
    pub fn basis(&self, j: u32) -> Vec<Monomial> {
        let mut v: Vec<(u32, Monomial)> = self.index[j as usize].iter().map(|(m, &k)| (k, m.clone())).collect();
        v.sort_unstable_by_key(|e| e.0);
        v.into_iter().map(|e| e.1).collect()
    }

    pub fn is_standard(&self, u: &Monomial) -> bool {
        self.index[u.degree() as usize].contains_key(u)
    }

    fn reducer(&self, u: &Monomial) -> Option<usize> {
        let mu = mask(u);
        self.gb.polys().iter().zip(&self.masks).position(|(g, &mg)| mg & !mu == 0 && g.lead_monomial().unwrap().divides(u))
    }

    /// Normal form of a monomial as coordinates in the standard basis of its degree.
    pub fn nf(&mut self, u: &Monomial) -> SparseVec<F::Elem> {
        let fld = self.gb.ring().field().clone();
        let d = u.degree() as usize;
        if self.truncation.is_some_and(|e| u.degree() >= e) {
            return Vec::new();
        }
        if let Some(&k) = self.index[d].get(u) {
            return vec![(k, fld.one())];
        }
        let mut stack = vec![u.clone()];
        while let Some(top) = stack.last().cloned() {
            if self.memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            if let Some(&k) = self.index[d].get(&top) {
                self.memo.insert(top, vec![(k, fld.one())]);
                stack.pop();
                continue;
            }
            let gi = self.reducer(&top).expect("non-standard monomials have a reducer");
            let g = &self.gb.polys()[gi];
            let q = g.lead_monomial().unwrap().quotient_of(&top).unwrap();
            let tail: Vec<(Monomial, F::Elem)> = g.terms()[1..].iter().map(|(m, c)| (m.mul(&q), c.clone())).collect();
            let missing: Vec<Monomial> =
                tail.iter().filter(|(m, _)| !self.memo.contains_key(m) && !self.index[d].contains_key(m)).map(|(m, _)| m.clone()).collect();
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            // top = −Σ c·(q·w) modulo I (g is monic)
            let mut acc: FxHashMap<u32, F::Elem> = FxHashMap::default();
            for (m, c) in &tail {
                let coef = fld.neg(c);
                let v = match self.index[d].get(m) {
                    Some(&k) => vec![(k, fld.one())],
                    None => self.memo[m].clone(),
                };
                for (k, x) in v {
                    let add = fld.mul(&coef, &x);
                    let e = acc.entry(k).or_insert_with(|| fld.zero());
                    *e = fld.add(e, &add);
                }
            }
            let mut out: SparseVec<F::Elem> = acc.into_iter().filter(|(_, x)| !fld.is_zero(x)).collect();
            out.sort_unstable_by_key(|e| e.0);
            self.memo.insert(top, out);
            stack.pop();
        }
        self.memo[u].clone()
    }
}

impl<F: Field> GradedModuleSlice<F> {
    /// Build bases and multiplication maps for degrees `0..=max_degree`.
    pub fn build(ideal: &Ideal<F>, t: usize, truncation: Option<u32>, max_degree: u32) -> Result<Self> {
        let n = ideal.ring().nvars();
        if t > n {
            return Err(Error::Range(format!("subring index {t} exceeds {n} variables")));
        }
        if max_degree > DEFAULT_DEGREE_CAP {
            return Err(Error::Truncation { what: "module slice".into(), cap: DEFAULT_DEGREE_CAP });
        }
        let ring = ideal.ring().with_order(MonomialOrder::Degrevlex);
        let gb = ideal.truncated_groebner_basis(MonomialOrder::Degrevlex, max_degree.max(1));
        let mut memo = MonomialNormalForms::new(&gb, max_degree, truncation);
        let bases: Vec<Vec<Monomial>> = (0..=max_degree).map(|j| memo.basis(j)).collect();
        let fld = ring.field().clone();
        let mut mult = Vec::with_capacity(n - t);
        for v in t..n {
            let mut per_degree = Vec::with_capacity(max_degree as usize);
            for j in 0..max_degree as usize {
                let cols: Vec<SparseVec<F::Elem>> = bases[j].iter().map(|m| memo.nf(&m.mul_var(v))).collect();
                per_degree.push(ExactMatrix::from_sparse_cols(fld.clone(), bases[j + 1].len(), cols));
            }
            mult.push(per_degree);
        }
        Ok(GradedModuleSlice { ring, t, truncation, max_degree, bases, mult })
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }
    pub fn basis(&self, j: u32) -> &[Monomial] {
        &self.bases[j as usize]
    }
    pub fn dim(&self, j: u32) -> usize {
        self.bases.get(j as usize).map_or(0, Vec::len)
    }
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Multiplication by `x_v` on `M_j`.
    pub fn mult(&self, v: usize, j: u32) -> Result<&ExactMatrix<F>> {
        if v < self.t || v >= self.ring.nvars() {
            return Err(Error::Range(format!("variable x{v} not in the slice's subring")));
        }
        if j >= self.max_degree {
            return Err(Error::Truncation { what: format!("slice degree {}", j + 1), cap: self.max_degree });
        }
        Ok(&self.mult[v - self.t][j as usize])
    }

    /// Number of Koszul variables over `S_s`.
    fn wsize(&self, s: usize) -> usize {
        self.ring.nvars() - s
    }

    /// `dim K_{i,d}` over `S_s`.
    pub fn chain_dim(&self, s: usize, i: u32, d: u32) -> usize {
        if d < i || d > self.max_degree + i {
            return 0;
        }
        binomial(self.wsize(s), i as usize) * self.dim(d - i)
    }

    /// Matrix of `∂: Λ^i W ⊗ M_{d-i} → Λ^{i-1} W ⊗ M_{d-i+1}` over `S_s`, `s ≥ t`.
    pub fn differential(&self, s: usize, i: u32, d: u32) -> Result<ExactMatrix<F>> {
        if s < self.t {
            return Err(Error::Range(format!("subring S_{s} is larger than the slice's S_{}", self.t)));
        }
        if i == 0 || d < i {
            return Err(Error::Range(format!("no differential at (i, d) = ({i}, {d})")));
        }
        if d - i + 1 > self.max_degree {
            return Err(Error::Truncation { what: format!("slice degree {}", d - i + 1), cap: self.max_degree });
        }
        let w = self.wsize(s);
        let fld = self.ring.field();
        let src_m = self.dim(d - i);
        let dst_m = self.dim(d - i + 1);
        let src = subsets(w, i as usize);
        let dst_index = subset_index(w, i as usize - 1);
        let rows = dst_index.len() * dst_m;
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(src.len() * src_m);
        let neg_one = fld.neg(&fld.one());
        let col_cache: Vec<Vec<SparseVec<F::Elem>>> =
            (s..self.ring.nvars()).map(|v| column_cache(&self.mult[v - self.t][(d - i) as usize])).collect();
        for set in &src {
            let faces: Vec<(usize, usize, bool)> = (0..set.len())
                .map(|r| {
                    let mut face = set.clone();
                    let v = face.remove(r);
                    (dst_index[&face], v + s, r % 2 == 1)
                })
                .collect();
            for m in 0..src_m {
                let mut col: Vec<(u32, F::Elem)> = Vec::new();
                for &(block, v, negative) in &faces {
                    for (k, c) in &col_cache[v - s][m] {
                        let val = if negative { fld.mul(c, &neg_one) } else { c.clone() };
                        col.push(((block * dst_m) as u32 + *k, val));
                    }
                }
                col.sort_unstable_by_key(|e| e.0);
                cols.push(col);
            }
        }
        Ok(ExactMatrix::from_sparse_cols(fld.clone(), rows, cols))
    }
}

fn column_cache<F: Field>(mat: &ExactMatrix<F>) -> Vec<SparseVec<F::Elem>> {
    let t = mat.transpose();
    (0..t.rows()).map(|r| t.row(r).clone()).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    crate::poly::binomial(n, k)
}

/// Region of `(i, d)` pairs to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BettiWindow {
    pub max_i: u32,
    pub max_d: u32,
    /// Optional bound on the row `d - i`.
    pub max_row: Option<u32>,
}

impl BettiWindow {
    pub fn new(max_i: u32, max_d: u32) -> Self {
        BettiWindow { max_i, max_d, max_row: None }
    }
    pub fn with_max_row(mut self, r: u32) -> Self {
        self.max_row = Some(r);
        self
    }
    pub fn contains(&self, i: u32, d: u32) -> bool {
        i <= self.max_i && d <= self.max_d && d >= i && self.max_row.is_none_or(|r| d - i <= r)
    }
}

/// Graded Betti numbers `β_{i,d} = dim Tor_i(M, k)_d` over a declared ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    /// `R` or `S_t`.
    pub ring_label: String,
    pub field: FieldKind,
    /// Number of variables of the ring the table is taken over.
    pub nvars: usize,
    pub window: BettiWindow,
    /// Proven: `β_{i,d} = 0` whenever `d - i` exceeds this.
    pub row_bound: Option<u32>,
    /// Proven: `β_{i,d} = 0` whenever `i` exceeds this.
    pub col_bound: usize,
    entries: BTreeMap<(u32, u32), u64>,
}

impl BettiTable {
    pub fn from_entries(ring_label: &str, field: FieldKind, nvars: usize, window: BettiWindow, entries: BTreeMap<(u32, u32), u64>) -> Self {
        BettiTable { ring_label: ring_label.to_string(), field, nvars, window, row_bound: None, col_bound: nvars, entries }
    }

    pub fn with_bounds(mut self, row_bound: Option<u32>, col_bound: usize) -> Self {
        self.row_bound = row_bound;
        self.col_bound = col_bound.min(self.nvars);
        self
    }

    /// Entry if known: computed inside the window, or zero by one of the
    /// proven vanishing bounds.
    pub fn get(&self, i: u32, d: u32) -> Option<u64> {
        if d < i || i as usize > self.col_bound || self.row_bound.is_some_and(|r| d - i > r) {
            return Some(0);
        }
        self.entries.get(&(i, d)).copied()
    }

    /// Every entry of the table is known.
    pub fn is_complete(&self) -> bool {
        match self.row_bound {
            None => false,
            Some(r) => (0..=self.col_bound as u32).all(|i| (i..=i + r).all(|d| self.get(i, d).is_some())),
        }
    }

    pub fn is_certified(&self, i: u32, d: u32) -> bool {
        self.get(i, d).is_some()
    }

    /// Entry, treating unknown entries as zero.
    pub fn beta(&self, i: u32, d: u32) -> u64 {
        self.get(i, d).unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.entries.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v))
    }

    /// `β_{i,i+j}` for `i = 0..=max_i`.
    pub fn row(&self, j: u32) -> Vec<Option<u64>> {
        (0..=self.window.max_i).map(|i| self.get(i, i + j)).collect()
    }

    pub fn to_pretty(&self) -> String {
        let max_i = self.nonzero().map(|((i, _), _)| i).max().unwrap_or(0).max(self.window.max_i.min(self.nvars as u32));
        let max_j = self.nonzero().map(|((i, d), _)| d - i).max().unwrap_or(0);
        let cells: Vec<Vec<String>> = (0..=max_j)
            .map(|j| {
                (0..=max_i)
                    .map(|i| match self.get(i, i + j) {
                        Some(0) => ".".to_string(),
                        Some(v) => v.to_string(),
                        None => "?".to_string(),
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(String::len).chain((0..=max_i).map(|i| i.to_string().len())).max().unwrap_or(1);
        let label_w = (max_j.to_string().len() + 1).max(2);
        let mut s = format!("betti ring={} rows=j cols=i\n", self.ring_label);
        let _ = write!(s, "{:label_w$}", "");
        for i in 0..=max_i {
            let _ = write!(s, " {:>width$}", i);
        }
        s.push('\n');
        for (j, row) in cells.iter().enumerate() {
            let _ = write!(s, "{:>label_w$}", format!("{j}:"));
            for c in row {
                let _ = write!(s, " {:>width$}", c);
            }
            s.push('\n');
        }
        s
    }

    /// Nonzero entries as `i<TAB>d<TAB>beta` lines.
    pub fn to_tsv(&self) -> String {
        self.nonzero().map(|((i, d), v)| format!("{i}\t{d}\t{v}\n")).collect()
    }

    /// Largest `i` with a nonzero entry.
    pub fn max_nonzero_i(&self) -> Option<u32> {
        self.nonzero().map(|((i, _), _)| i).max()
    }
}

/// Options for [`betti_numbers_with`].
#[derive(Clone, Copy, Debug)]
pub struct BettiOptions {
    /// Quotient by generic linear forms of `W` that are verified regular on
    /// the module before building the Koszul complex.
    pub reduce_regular: bool,
    pub seed: u64,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions { reduce_regular: true, seed: INTERNAL_SEED }
    }
}

/// Replace `M = R/I` by `M/ℓM` for generic `ℓ ∈ W` while `ℓ` is a
/// nonzerodivisor, which leaves `Tor^{S_t}(M, k)` unchanged. Regularity of
/// `ℓ` is certified by equality of Hilbert series numerators
/// (`HS(M/ℓM) = (1 - z) HS(M)`). Returns the reduced ideal and the number of
/// forms divided out.
pub fn reduce_by_regular_forms<F: Field>(ideal: &Ideal<F>, t: usize, seed: u64) -> Result<(Ideal<F>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = ideal.with_order(MonomialOrder::Degrevlex);
    let mut removed = 0;
    loop {
        let ring = cur.ring().clone();
        let n = ring.nvars();
        if n <= t + 1 || n == 1 {
            break;
        }
        let fld = ring.field().clone();
        let small = Ring::new(fld.clone(), ring.vars()[..n - 1].to_vec(), MonomialOrder::Degrevlex)?;
        let coeffs: Vec<F::Elem> = (0..n - 1).map(|v| if v >= t { fld.random(&mut rng) } else { fld.zero() }).collect();
        let mut images: Vec<Polynomial<F>> = (0..n - 1).map(|v| small.var(v)).collect();
        images.push(small.linear_form(&coeffs));
        let gens = cur.gens().iter().map(|g| ring.substitute(g, &images, &small)).collect();
        let next = Ideal::new(small, gens)?;
        let a = trim(cur.hilbert_numerator());
        let b = trim(next.hilbert_numerator());
        if a != b {
            break;
        }
        cur = next;
        removed += 1;
    }
    Ok((cur, removed))
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Betti numbers of `R/I` over `S_t` by Koszul homology.
pub fn betti_numbers<F: Field>(ideal: &Ideal<F>, t: usize, window: BettiWindow, truncation: Option<u32>) -> Result<BettiTable> {
    betti_numbers_with(ideal, t, window, truncation, BettiOptions::default())
}

/// Rows computed past `max_i` when no vanishing bound is available.
pub const FALLBACK_ROWS: u32 = 6;

/// Betti numbers of `R/I` over `S_t` for `i ≤ max_i`, with the degree window
/// sized from the proven row bound so that the table is complete whenever
/// such a bound exists within the degree cap.
pub fn betti_table<F: Field>(ideal: &Ideal<F>, t: usize, max_i: u32) -> Result<BettiTable> {
    let n = ideal.ring().nvars();
    if t >= n {
        return Err(Error::Range(format!("subring index {t} leaves no variables")));
    }
    let (work, _) = reduce_by_regular_forms(ideal, t, INTERNAL_SEED)?;
    let rows = row_vanishing_bound(&work, t, None).unwrap_or(FALLBACK_ROWS);
    let max_d = (max_i + rows).min(DEFAULT_DEGREE_CAP);
    table_of(ideal, &work, t, BettiWindow::new(max_i, max_d), None)
}

pub fn betti_numbers_with<F: Field>(
    ideal: &Ideal<F>,
    t: usize,
    window: BettiWindow,
    truncation: Option<u32>,
    opts: BettiOptions,
) -> Result<BettiTable> {
    let n = ideal.ring().nvars();
    if t >= n {
        return Err(Error::Range(format!("subring index {t} leaves no variables")));
    }
    let (work, _) =
        if opts.reduce_regular && truncation.is_none() { reduce_by_regular_forms(ideal, t, opts.seed)? } else { (ideal.clone(), 0) };
    table_of(ideal, &work, t, window, truncation)
}

/// Table of the original `ideal`, computed from `work` (the ideal itself or a
/// quotient by regular linear forms of `W`).
fn table_of<F: Field>(ideal: &Ideal<F>, work: &Ideal<F>, t: usize, window: BettiWindow, truncation: Option<u32>) -> Result<BettiTable> {
    let n = ideal.ring().nvars();
    let label = if t == 0 { "R".to_string() } else { format!("S_{t}") };
    let wsize = n - t;
    let slice = GradedModuleSlice::build(work, t, truncation, window.max_d)?;
    let w = work.ring().nvars() - t;

    let cells: Vec<(u32, u32)> = (0..=window.max_i.min(wsize as u32))
        .flat_map(|i| (i..=window.max_d).map(move |d| (i, d)))
        .filter(|&(i, d)| window.contains(i, d))
        .collect();
    let mut rank_jobs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &(i, d) in &cells {
        if i >= 1 && i as usize <= w {
            rank_jobs.insert((i, d));
        }
        if (i + 1) as usize <= w && d > i {
            rank_jobs.insert((i + 1, d));
        }
    }
    let jobs: Vec<(u32, u32)> = rank_jobs.into_iter().collect();
    let ranks: Vec<Result<usize>> = jobs.par_iter().map(|&(i, d)| Ok(slice.differential(t, i, d)?.rank())).collect();
    let mut rank: FxHashMap<(u32, u32), usize> = FxHashMap::default();
    for (job, r) in jobs.iter().zip(ranks) {
        rank.insert(*job, r?);
    }
    let mut entries = BTreeMap::new();
    for &(i, d) in &cells {
        let dim = if i as usize <= w { slice.chain_dim(t, i, d) } else { 0 };
        let r_out = rank.get(&(i, d)).copied().unwrap_or(0);
        let r_in = rank.get(&(i + 1, d)).copied().unwrap_or(0);
        entries.insert((i, d), (dim - r_out - r_in) as u64);
    }
    let row_bound = row_vanishing_bound(work, t, truncation);
    Ok(BettiTable {
        ring_label: label,
        field: ideal.ring().field().kind(),
        nvars: wsize,
        window,
        row_bound,
        col_bound: w.min(wsize),
        entries,
    })
}

/// A row `r` with `β_{i,d} = 0` for `d - i > r`, when one can be proven:
/// the top degree of a finite-length module, or else the Taylor bound
/// `max_i (min(sum of the i largest, deg lcm) - i)` on the regularity of the
/// initial ideal, valid when `M` is finite over `S_t`.
pub fn row_vanishing_bound<F: Field>(ideal: &Ideal<F>, t: usize, truncation: Option<u32>) -> Option<u32> {
    if let Some(e) = truncation {
        return Some(e.saturating_sub(1));
    }
    if ideal.is_unit() {
        return Some(0);
    }
    let gb = ideal.groebner_basis_in(MonomialOrder::Degrevlex);
    if gb.krull_dim() <= 0 {
        let top = gb.hilbert_numerator().len() as u32;
        return (0..=top).rev().find(|&j| gb.hilbert_function(j) > 0).or(Some(0));
    }
    if t > 0 {
        let ring = ideal.ring();
        let vars: Vec<Polynomial<F>> = (t..ring.nvars()).map(|v| ring.var(v)).collect();
        if ideal.add_gens(vars).ok()?.krull_dim() > 0 {
            return None;
        }
    }
    let lms = gb.leading_monomials();
    if lms.is_empty() {
        return Some(0);
    }
    let mut degs: Vec<u32> = lms.iter().map(Monomial::degree).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let lcm = lms.iter().skip(1).fold(lms[0].clone(), |acc, m| acc.lcm(m)).degree();
    let mut best = 0i64;
    let mut sum = 0u32;
    for (k, d) in degs.iter().enumerate() {
        sum += d;
        best = best.max(sum.min(lcm) as i64 - (k as i64 + 1));
    }
    Some(best as u32)
}

/// Homology `Z / B` of one spot of a complex, with canonical representatives.
struct Homology<F: Field> {
    field: F,
    chain_dim: usize,
    boundaries: EchelonSpace<F>,
    /// Representatives reduced modulo the boundaries.
    reps: Vec<Vec<F::Elem>>,
    /// Boundaries followed by `[rep_k | e_k]`, for reading coordinates.
    augmented: EchelonSpace<F>,
}

impl<F: Field> Homology<F> {
    fn new(field: &F, chain_dim: usize, cycles: Vec<Vec<F::Elem>>, boundary_cols: Vec<Vec<F::Elem>>) -> Self {
        let mut boundaries = EchelonSpace::new(field.clone(), chain_dim);
        for b in boundary_cols {
            boundaries.insert(b);
        }
        let mut total = boundaries.clone();
        let mut reps = Vec::new();
        for z in cycles {
            if total.insert(z.clone()) {
                let mut r = z;
                boundaries.reduce(&mut r);
                reps.push(r);
            }
        }
        let h = reps.len();
        let mut augmented = EchelonSpace::new(field.clone(), chain_dim + h);
        for b in boundaries.basis() {
            let mut v = b.clone();
            v.resize(chain_dim + h, field.zero());
            augmented.insert(v);
        }
        for (k, r) in reps.iter().enumerate() {
            let mut v = r.clone();
            v.resize(chain_dim + h, field.zero());
            v[chain_dim + k] = field.one();
            augmented.insert(v);
        }
        Homology { field: field.clone(), chain_dim, boundaries, reps, augmented }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cycle in the representative basis.
    fn coords(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let h = self.reps.len();
        let mut w = v.to_vec();
        w.resize(self.chain_dim + h, self.field.zero());
        self.augmented.reduce(&mut w);
        debug_assert!(w[..self.chain_dim].iter().all(|x| self.field.is_zero(x)), "not a cycle of this spot");
        w[self.chain_dim..].iter().map(|x| self.field.neg(x)).collect()
    }

    fn is_boundary(&self, v: &[F::Elem]) -> bool {
        self.boundaries.contains(v)
    }
}

fn dense_cols<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F::Elem>> {
    let t = m.transpose();
    (0..t.rows())
        .map(|r| {
            let mut v = vec![m.field().zero(); m.rows()];
            for (k, x) in t.row(r) {
                v[*k as usize] = x.clone();
            }
            v
        })
        .collect()
}

/// Which of the three homology groups of the long exact sequence a node is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LesSpot {
    /// `Tor_i^{S_{t+1}}(M)_d`
    Small,
    /// `Tor_i^{S_t}(M)_d`
    Big,
    /// `Tor_{i-1}^{S_{t+1}}(M)_{d-1}`
    Shifted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    pub spot: LesSpot,
    pub i: u32,
    pub d: u32,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composition_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesMapKind {
    /// Induced by `S_{t+1} ⊂ S_t`.
    Inclusion,
    /// Projection onto the `e_t ∧ ·` component.
    Boundary,
    /// Multiplication by `x_t`.
    Connecting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesMap {
    pub kind: LesMapKind,
    /// Node the map starts from: `(spot, i, d)`.
    pub source: (LesSpot, u32, u32),
    pub rank: usize,
    /// Matrix in the canonical homology bases (rows: target coordinates).
    pub matrix: Vec<Vec<FieldElement>>,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub t: usize,
    pub max_i: u32,
    pub max_d: u32,
    pub nodes: Vec<LesNode>,
    pub maps: Vec<LesMap>,
    pub exact: bool,
}

impl LesReport {
    pub fn map(&self, kind: LesMapKind, spot: LesSpot, i: u32, d: u32) -> Option<&LesMap> {
        self.maps.iter().find(|m| m.kind == kind && m.source == (spot, i, d))
    }

    pub fn node(&self, spot: LesSpot, i: u32, d: u32) -> Option<&LesNode> {
        self.nodes.iter().find(|n| n.spot == spot && n.i == i && n.d == d)
    }
}

/// Check the long exact sequence
/// `… → Tor_i^{S_{t+1}}(M)_d → Tor_i^{S_t}(M)_d → Tor_{i-1}^{S_{t+1}}(M)_{d-1} --·x_t--> Tor_{i-1}^{S_{t+1}}(M)_d → …`
/// at every node with `i ≤ max_i`, `d ≤ max_d`, from explicit homology bases.
pub fn verify_les<F: Field>(ideal: &Ideal<F>, t: usize, max_i: u32, max_d: u32) -> Result<LesReport> {
    let n = ideal.ring().nvars();
    if t + 1 >= n {
        return Err(Error::Range(format!("need t + 1 < {n} for the pair S_t ⊃ S_(t+1)")));
    }
    let slice = GradedModuleSlice::build(ideal, t, None, max_d)?;
    let fld = slice.ring().field().clone();
    let wb = n - t; // |W| over S_t
    let ws = wb - 1; // over S_{t+1}

    // Homology over a subring at (i, d).
    let homology = |s: usize, i: u32, d: u32| -> Result<Homology<F>> {
        let w = n - s;
        let dim = if (i as usize) <= w { slice.chain_dim(s, i, d) } else { 0 };
        let cycles = if dim == 0 {
            Vec::new()
        } else if i == 0 {
            (0..dim).map(|k| unit(&fld, dim, k)).collect()
        } else {
            slice.differential(s, i, d)?.rank_kernel().1
        };
        let bounds =
            if dim == 0 || (i as usize) + 1 > w || d < i + 1 { Vec::new() } else { dense_cols(&slice.differential(s, i + 1, d)?) };
        Ok(Homology::new(&fld, dim, cycles, bounds))
    };

    // Needed groups: small (i, d) and (i, d-1) for i ≤ max_i, big (i, d).
    let mut small_keys: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut big_keys: BTreeSet<(u32, u32)> = BTreeSet::new();
    for d in 0..=max_d {
        for i in 0..=max_i {
            small_keys.insert((i, d));
            big_keys.insert((i, d));
            if d >= 1 {
                small_keys.insert((i, d - 1));
            }
        }
    }
    let small_list: Vec<(u32, u32)> = small_keys.into_iter().collect();
    let big_list: Vec<(u32, u32)> = big_keys.into_iter().collect();
    let small_h: Vec<Result<Homology<F>>> = small_list.par_iter().map(|&(i, d)| homology(t + 1, i, d)).collect();
    let big_h: Vec<Result<Homology<F>>> = big_list.par_iter().map(|&(i, d)| homology(t, i, d)).collect();
    let mut small: FxHashMap<(u32, u32), Homology<F>> = FxHashMap::default();
    for (k, h) in small_list.into_iter().zip(small_h) {
        small.insert(k, h?);
    }
    let mut big: FxHashMap<(u32, u32), Homology<F>> = FxHashMap::default();
    for (k, h) in big_list.into_iter().zip(big_h) {
        big.insert(k, h?);
    }

    // Chain-level maps.
    // ι: K'_{i,d} → K_{i,d}, subset S' ⊆ W' (indices relative to W') maps to S'+1 in W.
    let iota = |i: u32, d: u32, v: &[F::Elem]| -> Vec<F::Elem> {
        let md = slice.dim(d.saturating_sub(i));
        let big_index = subset_index(wb, i as usize);
        let mut out = vec![fld.zero(); if (i as usize) <= wb && d >= i { binomial(wb, i as usize) * md } else { 0 }];
        if out.is_empty() {
            return out;
        }
        for (k, set) in subsets(ws, i as usize).into_iter().enumerate() {
            let shifted: Vec<usize> = set.iter().map(|x| x + 1).collect();
            let b = big_index[&shifted];
            out[b * md..(b + 1) * md].clone_from_slice(&v[k * md..(k + 1) * md]);
        }
        out
    };
    // π: K_{i,d} → K'_{i-1,d-1}, take the blocks of subsets containing W's first variable.
    let pi = |i: u32, d: u32, v: &[F::Elem]| -> Vec<F::Elem> {
        if i == 0 || d < i {
            return Vec::new();
        }
        let md = slice.dim(d - i);
        let big_index = subset_index(wb, i as usize);
        let smalls = subsets(ws, i as usize - 1);
        let mut out = vec![fld.zero(); smalls.len() * md];
        for (k, set) in smalls.into_iter().enumerate() {
            let mut full = vec![0usize];
            full.extend(set.iter().map(|x| x + 1));
            let b = big_index[&full];
            out[k * md..(k + 1) * md].clone_from_slice(&v[b * md..(b + 1) * md]);
        }
        out
    };
    // δ: K'_{j,e} → K'_{j,e+1}, multiply every block by x_t.
    let delta = |j: u32, e: u32, v: &[F::Elem]| -> Result<Vec<F::Elem>> {
        if e < j {
            return Ok(Vec::new());
        }
        let src_m = slice.dim(e - j);
        let dst_m = slice.dim(e - j + 1);
        let blocks = binomial(ws, j as usize);
        let mat = slice.mult(t, e - j)?;
        let mut out = vec![fld.zero(); blocks * dst_m];
        for b in 0..blocks {
            let y = mat.mul_vec(&v[b * src_m..(b + 1) * src_m])?;
            out[b * dst_m..(b + 1) * dst_m].clone_from_slice(&y);
        }
        Ok(out)
    };

    let empty = Homology::new(&fld, 0, Vec::new(), Vec::new());
    let get_small = |i: i64, d: i64| -> &Homology<F> {
        if i < 0 || d < 0 {
            return &empty;
        }
        small.get(&(i as u32, d as u32)).unwrap_or(&empty)
    };
    let get_big = |i: i64, d: i64| -> &Homology<F> {
        if i < 0 || d < 0 {
            return &empty;
        }
        big.get(&(i as u32, d as u32)).unwrap_or(&empty)
    };

    // Induced map data: images of source representatives in the target chain space.
    struct Induced<E> {
        images: Vec<Vec<E>>,
    }
    let induced = |kind: LesMapKind, i: u32, d: u32| -> Result<Induced<F::Elem>> {
        let images = match kind {
            LesMapKind::Inclusion => get_small(i as i64, d as i64).reps.iter().map(|r| iota(i, d, r)).collect(),
            LesMapKind::Boundary => get_big(i as i64, d as i64).reps.iter().map(|r| pi(i, d, r)).collect(),
            LesMapKind::Connecting => {
                // source is Tor_{i-1}^{S_{t+1}}(M)_{d-1}
                if i == 0 || d == 0 {
                    Vec::new()
                } else {
                    get_small(i as i64 - 1, d as i64 - 1).reps.iter().map(|r| delta(i - 1, d - 1, r)).collect::<Result<Vec<_>>>()?
                }
            }
        };
        Ok(Induced { images })
    };
    let target_of = |kind: LesMapKind, i: u32, d: u32| -> &Homology<F> {
        match kind {
            LesMapKind::Inclusion => get_big(i as i64, d as i64),
            LesMapKind::Boundary => get_small(i as i64 - 1, d as i64 - 1),
            LesMapKind::Connecting => get_small(i as i64 - 1, d as i64),
        }
    };
    let rank_of = |imgs: &[Vec<F::Elem>], target: &Homology<F>| -> usize {
        if imgs.is_empty() || target.dim() == 0 {
            return 0;
        }
        let mut sp = target.boundaries.clone();
        imgs.iter().filter(|v| sp.insert((*v).clone())).count()
    };

    let mut maps = Vec::new();
    let mut map_rank: FxHashMap<(u8, u32, u32), usize> = FxHashMap::default();
    let mut map_images: FxHashMap<(u8, u32, u32), Vec<Vec<F::Elem>>> = FxHashMap::default();
    let kinds = [LesMapKind::Inclusion, LesMapKind::Boundary, LesMapKind::Connecting];
    for d in 0..=max_d {
        for i in 0..=max_i + 1 {
            for (kk, kind) in kinds.iter().enumerate() {
                let ind = induced(*kind, i, d)?;
                let target = target_of(*kind, i, d);
                let r = rank_of(&ind.images, target);
                let matrix: Vec<Vec<FieldElement>> = if target.dim() == 0 {
                    Vec::new()
                } else {
                    let cols: Vec<Vec<F::Elem>> = ind.images.iter().map(|v| target.coords(v)).collect();
                    (0..target.dim()).map(|row| cols.iter().map(|c| fld.to_element(&c[row])).collect()).collect()
                };
                let source = match kind {
                    LesMapKind::Inclusion => (LesSpot::Small, i, d),
                    LesMapKind::Boundary => (LesSpot::Big, i, d),
                    LesMapKind::Connecting => (LesSpot::Shifted, i, d),
                };
                if i <= max_i {
                    maps.push(LesMap { kind: *kind, source, rank: r, matrix });
                }
                map_rank.insert((kk as u8, i, d), r);
                map_images.insert((kk as u8, i, d), ind.images);
            }
        }
    }

    // Node checks. Order within a fixed d, descending i:
    // Small(i) →ι Big(i) →π Shifted(i) →δ Small(i-1) → …
    let mut nodes = Vec::new();
    let compose_zero = |first: (u8, u32, u32), second: LesMapKind, si: u32, sd: u32| -> Result<bool> {
        // images of the first map, pushed through the second map's chain map,
        // must be boundaries in the second map's target.
        let imgs = &map_images[&first];
        let target = target_of(second, si, sd);
        for v in imgs {
            if v.is_empty() {
                continue;
            }
            let w = match second {
                LesMapKind::Inclusion => iota(si, sd, v),
                LesMapKind::Boundary => pi(si, sd, v),
                LesMapKind::Connecting => delta(si - 1, sd - 1, v)?,
            };
            if !w.is_empty() && !target.is_boundary(&w) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for d in 0..=max_d {
        for i in 0..=max_i {
            // Small(i, d): in = δ from Shifted(i+1, d); out = ι(i, d)
            let dim = get_small(i as i64, d as i64).dim();
            let rin = map_rank[&(2, i + 1, d)];
            let rout = map_rank[&(0, i, d)];
            let cz = compose_zero((2, i + 1, d), LesMapKind::Inclusion, i, d)?;
            nodes.push(LesNode {
                spot: LesSpot::Small,
                i,
                d,
                dim,
                rank_in: rin,
                rank_out: rout,
                composition_zero: cz,
                exact: cz && rin + rout == dim,
            });
            // Big(i, d): in = ι(i, d); out = π(i, d)
            let dim = get_big(i as i64, d as i64).dim();
            let rin = map_rank[&(0, i, d)];
            let rout = map_rank[&(1, i, d)];
            let cz = compose_zero((0, i, d), LesMapKind::Boundary, i, d)?;
            nodes.push(LesNode {
                spot: LesSpot::Big,
                i,
                d,
                dim,
                rank_in: rin,
                rank_out: rout,
                composition_zero: cz,
                exact: cz && rin + rout == dim,
            });
            // Shifted(i, d) = Small(i-1, d-1): in = π(i, d); out = δ(i, d)
            let dim = if i == 0 || d == 0 { 0 } else { get_small(i as i64 - 1, d as i64 - 1).dim() };
            let rin = map_rank[&(1, i, d)];
            let rout = map_rank[&(2, i, d)];
            let cz = if i == 0 || d == 0 { true } else { compose_zero((1, i, d), LesMapKind::Connecting, i, d)? };
            nodes.push(LesNode {
                spot: LesSpot::Shifted,
                i,
                d,
                dim,
                rank_in: rin,
                rank_out: rout,
                composition_zero: cz,
                exact: cz && rin + rout == dim,
            });
        }
    }
    let exact = nodes.iter().all(|n| n.exact);
    Ok(LesReport { t, max_i, max_d, nodes, maps, exact })
}

fn unit<F: Field>(fld: &F, n: usize, k: usize) -> Vec<F::Elem> {
    let mut v = vec![fld.zero(); n];
    v[k] = fld.one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::poly::Ring;

    fn fp_ring(n: usize) -> Ring<PrimeField> {
        Ring::with_prefix(PrimeField::default_field(), "x", n, MonomialOrder::Deglex)
    }

    fn twisted_cubic() -> Ideal<PrimeField> {
        Ideal::from_strs(fp_ring(4), &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]).unwrap()
    }

    #[test]
    fn degree_conversion_round_trips() {
        assert_eq!(slope_to_internal(2, 1), 3);
        assert_eq!(internal_to_slope(2, 3), Some(1));
        assert_eq!(internal_to_slope(3, 2), None);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(internal_to_slope(i, slope_to_internal(i, j)), Some(j));
            }
        }
    }

    #[test]
    fn slice_examples() {
        let r = fp_ring(2);
        let i = Ideal::from_strs(r, &["x0"]).unwrap();
        let s = GradedModuleSlice::build(&i, 0, None, 4).unwrap();
        assert_eq!(s.dims(), vec![1, 1, 1, 1, 1]);
        let s = GradedModuleSlice::build(&twisted_cubic(), 0, None, 3).unwrap();
        assert_eq!(s.dims(), vec![1, 4, 7, 10]);
        let z = Ideal::zero(fp_ring(1));
        let s = GradedModuleSlice::build(&z, 0, Some(2), 4).unwrap();
        assert_eq!(s.dims(), vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn multiplication_maps_commute() {
        let s = GradedModuleSlice::build(&twisted_cubic(), 0, None, 4).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                for j in 0..3 {
                    let a = s.mult(u, j + 1).unwrap().mul(s.mult(v, j).unwrap()).unwrap();
                    let b = s.mult(v, j + 1).unwrap().mul(s.mult(u, j).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn differential_shapes_and_complex_property() {
        let z = Ideal::zero(fp_ring(1));
        let s = GradedModuleSlice::build(&z, 0, None, 2).unwrap();
        let m = s.differential(0, 1, 1).unwrap();
        assert_eq!(m.to_dense(), vec![vec![1]]);
        let s = GradedModuleSlice::build(&twisted_cubic(), 0, None, 5).unwrap();
        let m = s.differential(0, 2, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (28, 24));
        for i in 2..=4u32 {
            for d in i..=5 {
                let a = s.differential(0, i, d).unwrap();
                let b = s.differential(0, i - 1, d).unwrap();
                assert!(b.mul(&a).unwrap().is_zero(), "∂∂ ≠ 0 at ({i}, {d})");
            }
        }
        assert!(matches!(s.differential(0, 1, 7), Err(Error::Truncation { .. })));
    }

    #[test]
    fn principal_and_twisted_cubic_tables() {
        let i = Ideal::from_strs(fp_ring(2), &["x0*x1"]).unwrap();
        let b = betti_numbers(&i, 0, BettiWindow::new(2, 4), None).unwrap();
        let nz: Vec<_> = b.nonzero().collect();
        assert_eq!(nz, vec![((0, 0), 1), ((1, 2), 1)]);

        let b = betti_numbers(&twisted_cubic(), 0, BettiWindow::new(4, 6), None).unwrap();
        let nz: Vec<_> = b.nonzero().collect();
        assert_eq!(nz, vec![((0, 0), 1), ((1, 2), 3), ((2, 3), 2)]);
        assert!(b.to_pretty().starts_with("betti ring=R rows=j cols=i\n"));
        assert_eq!(b.to_tsv(), "0\t0\t1\n1\t2\t3\n2\t3\t2\n");
    }

    #[test]
    fn reduction_preserves_tables() {
        let tc = twisted_cubic();
        for t in 0..2 {
            let w = BettiWindow::new(3, 5);
            let direct = betti_numbers_with(&tc, t, w, None, BettiOptions { reduce_regular: false, seed: 1 }).unwrap();
            let reduced = betti_numbers(&tc, t, w, None).unwrap();
            for i in 0..=3 {
                for d in 0..=5 {
                    assert_eq!(direct.get(i, d), reduced.get(i, d), "({i}, {d})");
                }
            }
        }
        let (_, removed) = reduce_by_regular_forms(&tc, 0, 7).unwrap();
        assert_eq!(removed, 2);
    }

    #[test]
    fn free_module_les_is_trivially_exact() {
        let z = Ideal::zero(fp_ring(3));
        let rep = verify_les(&z, 0, 2, 3).unwrap();
        assert!(rep.exact);
        for n in &rep.nodes {
            if n.i >= 1 && n.spot == LesSpot::Big {
                assert_eq!(n.dim, 0);
            }
        }
    }

    #[test]
    fn twisted_cubic_les_is_exact() {
        let rep = verify_les(&twisted_cubic(), 0, 3, 5).unwrap();
        assert!(rep.exact, "{:?}", rep.nodes.iter().filter(|n| !n.exact).collect::<Vec<_>>());
    }

    #[test]
    fn rational_and_prime_tables_agree_on_small_input() {
        let r = Ring::with_prefix(RationalField, "x", 4, MonomialOrder::Deglex);
        let i = Ideal::from_strs(r, &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]).unwrap();
        let w = BettiWindow::new(3, 5);
        let q = betti_numbers(&i, 0, w, None).unwrap();
        let p = betti_numbers(&twisted_cubic(), 0, w, None).unwrap();
        assert_eq!(q.nonzero().collect::<Vec<_>>(), p.nonzero().collect::<Vec<_>>());
        assert_eq!(q.field, FieldKind::Rational);
    }

    fn s114() -> Ideal<PrimeField> {
        let top = ["x0", "x2", "x4", "x5", "x6", "x7"];
        let bot = ["x1", "x3", "x5", "x6", "x7", "x8"];
        let mut gens = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                gens.push(format!("{}*{} - {}*{}", top[a], bot[b], top[b], bot[a]));
            }
        }
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        Ideal::from_strs(fp_ring(9), &refs).unwrap()
    }

    #[test]
    fn scroll_table() {
        let b = betti_numbers(&s114(), 0, BettiWindow::new(6, 8), None).unwrap();
        let nz: Vec<_> = b.nonzero().collect();
        assert_eq!(nz, vec![((0, 0), 1), ((1, 2), 15), ((2, 3), 40), ((3, 4), 45), ((4, 5), 24), ((5, 6), 5)]);
        assert!(b.is_complete());
        assert_eq!((b.row_bound, b.col_bound), (Some(1), 5));
    }

    #[test]
    fn vanishing_bounds_hold_on_unreduced_runs() {
        let i = Ideal::from_strs(fp_ring(3), &["x0^2", "x1^3"]).unwrap();
        let opts = BettiOptions { reduce_regular: false, seed: 0 };
        let b = betti_numbers_with(&i, 0, BettiWindow::new(3, 8), None, opts).unwrap();
        let r = b.row_bound.unwrap();
        assert!(b.nonzero().all(|((i, d), _)| d - i <= r));
        assert_eq!(b.get(2, 5), Some(1));
        assert!(b.is_complete());
        // x0 is free over S_1 here, so R/I is not finite over S_1
        let j = Ideal::from_strs(fp_ring(3), &["x1*x2"]).unwrap();
        assert_eq!(row_vanishing_bound(&j, 1, None), None);
    }

    #[test]
    fn first_betti_numbers_count_minimal_generators() {
        let i = Ideal::from_strs(fp_ring(3), &["x0^2", "x0*x1", "x1^3", "x0*x2^2 + x1^2*x2"]).unwrap();
        let b = betti_numbers(&i, 0, BettiWindow::new(1, 5), None).unwrap();
        for (deg, count) in i.generator_degrees() {
            assert_eq!(b.beta(1, deg), count as u64, "degree {deg}");
        }
        let total: u64 = (0..=5).map(|d| b.beta(1, d)).sum();
        assert_eq!(total as usize, i.minimal_generators().len());
    }

    #[test]
    fn tables_are_invariant_under_coordinate_changes_of_r() {
        let tc = twisted_cubic();
        let change: Vec<Vec<u32>> = vec![vec![1, 2, 0, 5], vec![0, 1, 3, 0], vec![7, 0, 1, 1], vec![0, 0, 2, 1]];
        let fld = *tc.ring().field();
        let m: Vec<Vec<u32>> = change.iter().map(|r| r.iter().map(|&x| fld.from_i64(x as i64)).collect()).collect();
        let moved = tc.apply_linear_change(&ExactMatrix::from_dense(fld, &m)).unwrap();
        let w = BettiWindow::new(3, 5);
        assert_eq!(betti_numbers(&tc, 0, w, None).unwrap(), betti_numbers(&moved, 0, w, None).unwrap());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn alternating_sum_recovers_hilbert_numerator(seed in 0u64..10_000) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = fp_ring(3);
            let fld = *r.field();
            let count = rng.gen_range(1..4);
            let mut gens = Vec::new();
            for _ in 0..count {
                let deg = rng.gen_range(1..3u32);
                let mut terms: Vec<(Monomial, u32)> = Vec::new();
                for m in r.monomials_of_degree(deg) {
                    if rng.gen_bool(0.5) {
                        terms.push((m, fld.random(&mut rng)));
                    }
                }
                let p = r.from_terms(terms);
                if !p.is_zero() {
                    gens.push(p);
                }
            }
            let i = Ideal::new(r, gens).unwrap();
            let b = betti_numbers(&i, 0, BettiWindow::new(3, 8), None).unwrap();
            let num = i.hilbert_numerator();
            for d in 0..=8u32 {
                let alt: i128 = (0..=3u32).map(|k| if k % 2 == 0 { b.beta(k, d) as i128 } else { -(b.beta(k, d) as i128) }).sum();
                let expected = num.get(d as usize).copied().unwrap_or(0);
                proptest::prop_assert_eq!(alt, expected, "degree {}", d);
            }
        }
    }
}
