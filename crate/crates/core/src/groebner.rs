//! Gröbner bases and the ideal-theoretic operations built on them:
//! membership, elimination, colon, intersection, saturation and Hilbert
//! functions of homogeneous ideals.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::EchelonSpace;
use crate::poly::{binomial, monomials_of_degree, Monomial, MonomialOrder, Polynomial, Ring};

/// Default degree cap for truncation-sensitive computations.
pub const DEFAULT_DEGREE_CAP: u32 = 30;

/// Seed used when an operation needs a random linear form internally.
pub const INTERNAL_SEED: u64 = 0x5eed_0001;

fn support_mask(m: &Monomial) -> u64 {
    m.exps().iter().enumerate().fold(0u64, |acc, (i, &e)| if e > 0 { acc | 1 << (i % 64) } else { acc })
}

/// A set of reducers with cached leading-monomial masks and inverse leading
/// coefficients.
struct Reducers<'a, F: Field> {
    polys: Vec<&'a Polynomial<F>>,
    masks: Vec<u64>,
    inv_lc: Vec<F::Elem>,
}

impl<'a, F: Field> Reducers<'a, F> {
    fn new(ring: &Ring<F>, polys: impl IntoIterator<Item = &'a Polynomial<F>>) -> Self {
        let polys: Vec<&Polynomial<F>> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        let masks = polys.iter().map(|p| support_mask(p.lead_monomial().expect("nonzero"))).collect();
        let inv_lc = polys.iter().map(|p| ring.field().inv(p.lead_coeff().expect("nonzero")).expect("nonzero")).collect();
        Reducers { polys, masks, inv_lc }
    }

    fn find(&self, m: &Monomial, mask: u64) -> Option<usize> {
        (0..self.polys.len()).find(|&k| self.masks[k] & !mask == 0 && self.polys[k].lead_monomial().expect("nonzero").divides(m))
    }

    /// Full reduction: no term of the result is divisible by a leading monomial.
    fn reduce(&self, ring: &Ring<F>, f: Polynomial<F>) -> Polynomial<F> {
        let fld = ring.field();
        let mut done: Vec<(Monomial, F::Elem)> = Vec::new();
        let mut p = f.into_terms();
        let mut start = 0;
        while start < p.len() {
            let (m, c) = &p[start];
            match self.find(m, support_mask(m)) {
                None => {
                    done.push(p[start].clone());
                    start += 1;
                }
                Some(k) => {
                    let g = self.polys[k];
                    let q = g.lead_monomial().expect("nonzero").quotient_of(m).expect("divides");
                    let coef = fld.neg(&fld.mul(c, &self.inv_lc[k]));
                    p = ring.merge_scaled(&p[start + 1..], &coef, &q, &g.terms()[1..]);
                    start = 0;
                }
            }
        }
        Polynomial::from_sorted_terms(done)
    }
}

/// Normal form of `f` with respect to `g` (no term divisible by any leading
/// monomial of `g`).
pub fn normal_form<F: Field>(ring: &Ring<F>, f: &Polynomial<F>, g: &[Polynomial<F>]) -> Polynomial<F> {
    Reducers::new(ring, g.iter()).reduce(ring, f.clone())
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine<'r, F: Field> {
    ring: &'r Ring<F>,
    basis: Vec<Polynomial<F>>,
    sugar: Vec<u32>,
    alive: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'r, F: Field> Engine<'r, F> {
    fn lm(&self, i: usize) -> &Monomial {
        self.basis[i].lead_monomial().expect("nonzero")
    }

    fn reduce(&self, f: Polynomial<F>) -> Polynomial<F> {
        let reducers = Reducers::new(self.ring, self.basis.iter().zip(&self.alive).filter(|(_, a)| **a).map(|(p, _)| p));
        reducers.reduce(self.ring, f)
    }

    /// Insert a new monic element and apply the Gebauer–Möller criteria.
    fn insert(&mut self, h: Polynomial<F>, sugar: u32) {
        let hidx = self.basis.len();
        let lm_h = h.lead_monomial().expect("nonzero").clone();
        self.basis.push(h);
        self.sugar.push(sugar);
        self.alive.push(true);

        let candidates: Vec<(usize, Monomial, bool)> =
            (0..hidx).filter(|&g| self.alive[g]).map(|g| (g, self.lm(g).lcm(&lm_h), self.lm(g).is_coprime(&lm_h))).collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for k in 0..candidates.len() {
            let (g, l, coprime) = &candidates[k];
            let dominated =
                !coprime && (candidates[k + 1..].iter().any(|(_, l2, _)| l2.divides(l)) || kept.iter().any(|(_, l2, _)| l2.divides(l)));
            if !dominated {
                kept.push((*g, l.clone(), *coprime));
            }
        }

        let basis = &self.basis;
        let lm = |i: usize| basis[i].lead_monomial().expect("nonzero");
        self.pairs.retain(|p| !(lm_h.divides(&p.lcm) && lm(p.i).lcm(&lm_h) != p.lcm && lm(p.j).lcm(&lm_h) != p.lcm));

        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            let sg = self.sugar[g] + l.degree() - self.lm(g).degree();
            let sh = sugar + l.degree() - lm_h.degree();
            self.pairs.push(Pair { i: g, j: hidx, lcm: l, sugar: sg.max(sh) });
        }

        for g in 0..hidx {
            if self.alive[g] && lm_h.divides(self.lm(g)) {
                self.alive[g] = false;
            }
        }
    }

    fn spoly(&self, p: &Pair) -> Polynomial<F> {
        let fld = self.ring.field();
        let gi = &self.basis[p.i];
        let gj = &self.basis[p.j];
        let qi = self.lm(p.i).quotient_of(&p.lcm).expect("lcm");
        let qj = self.lm(p.j).quotient_of(&p.lcm).expect("lcm");
        let a = self.ring.mul_term(&Polynomial::from_sorted_terms(gi.terms()[1..].to_vec()), &fld.one(), &qi);
        Polynomial::from_sorted_terms(self.ring.merge_scaled(a.terms(), &fld.neg(&fld.one()), &qj, &gj.terms()[1..]))
    }

    fn select(&mut self) -> Option<Pair> {
        let ring = self.ring;
        let k = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.sugar.cmp(&pb.sugar).then_with(|| ring.cmp(&pa.lcm, &pb.lcm))
        })?;
        Some(self.pairs.swap_remove(k))
    }
}

/// Reduced Gröbner basis of `gens` in the order of `ring` (Buchberger with
/// the normal/sugar selection strategy and the Gebauer–Möller criteria).
///
/// With `cap = Some(c)` and homogeneous input in a graded order, only
/// S-pairs of degree ≤ `c` are processed: the result is then a Gröbner basis
/// of the ideal in degrees ≤ `c`.
pub fn buchberger<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>], cap: Option<u32>) -> Vec<Polynomial<F>> {
    if gens.iter().all(Polynomial::is_homogeneous) {
        let cap = if ring.order().is_graded() { cap } else { None };
        return crate::f4::homogeneous_gb(ring, gens, cap);
    }
    let cap: Option<u32> = None;
    let fld = ring.field();

    let mut inputs: Vec<Polynomial<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.monic(&ring.reorder(g)))
        .filter(|g| cap.is_none_or(|c| g.degree().unwrap_or(0) <= c))
        .collect();
    if inputs.iter().any(Polynomial::is_constant) {
        return vec![ring.one()];
    }
    inputs.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap())));
    let mut inputs = inputs.into_iter().peekable();

    let mut eng = Engine { ring, basis: Vec::new(), sugar: Vec::new(), alive: Vec::new(), pairs: Vec::new() };
    loop {
        let next_pair_sugar = eng.pairs.iter().map(|p| p.sugar).min();
        let take_input = match (inputs.peek(), next_pair_sugar) {
            (Some(f), Some(s)) => f.degree().unwrap_or(0) <= s,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let (candidate, sugar) = if take_input {
            let f = inputs.next().expect("peeked");
            let s = f.degree().unwrap_or(0);
            (f, s)
        } else {
            let p = eng.select().expect("nonempty");
            if cap.is_some_and(|c| p.lcm.degree() > c) {
                continue;
            }
            (eng.spoly(&p), p.sugar)
        };
        let h = eng.reduce(candidate);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return vec![ring.one()];
        }
        let h = ring.monic(&h);
        eng.insert(h, sugar);
    }

    let alive: Vec<usize> = (0..eng.basis.len()).filter(|&i| eng.alive[i]).collect();
    let mut out: Vec<Polynomial<F>> = alive
        .iter()
        .map(|&i| {
            let g = &eng.basis[i];
            let others = Reducers::new(ring, alive.iter().filter(|&&j| j != i).map(|&j| &eng.basis[j]));
            let tail = others.reduce(ring, Polynomial::from_sorted_terms(g.terms()[1..].to_vec()));
            let mut terms = vec![(g.lead_monomial().unwrap().clone(), fld.one())];
            terms.extend(tail.into_terms());
            Polynomial::from_sorted_terms(terms)
        })
        .collect();
    out.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    out
}

/// Whether every S-polynomial of `g` reduces to zero modulo `g`.
pub fn satisfies_buchberger_criterion<F: Field>(ring: &Ring<F>, g: &[Polynomial<F>]) -> bool {
    let fld = ring.field();
    let reducers = Reducers::new(ring, g.iter());
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            let (mi, ci) = g[i].lead().expect("nonzero");
            let (mj, cj) = g[j].lead().expect("nonzero");
            let l = mi.lcm(mj);
            let a = ring.mul_term(&g[i], &fld.inv(ci).unwrap(), &mi.quotient_of(&l).unwrap());
            let b = ring.mul_term(&g[j], &fld.inv(cj).unwrap(), &mj.quotient_of(&l).unwrap());
            if !reducers.reduce(ring, ring.sub(&a, &b)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// A reduced Gröbner basis together with its ring (which fixes the order).
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: Ring<F>,
    polys: Vec<Polynomial<F>>,
    cap: Option<u32>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn compute(ring: &Ring<F>, gens: &[Polynomial<F>], cap: Option<u32>) -> Self {
        let polys = buchberger(ring, gens, cap);
        GroebnerBasis { ring: ring.clone(), polys, cap }
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }
    pub fn polys(&self) -> &[Polynomial<F>] {
        &self.polys
    }
    /// Degree up to which the basis is valid; `None` when complete.
    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lead_monomial().expect("nonzero").clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(Polynomial::is_constant)
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        Reducers::new(&self.ring, self.polys.iter()).reduce(&self.ring, self.ring.reorder(f))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Numerator `N(z)` of the Hilbert series `N(z) / (1-z)^{n}` of the quotient.
    pub fn hilbert_numerator(&self) -> Vec<i128> {
        hilbert_numerator(self.leading_monomials(), self.ring.nvars())
    }

    /// `dim_k (R/I)_m`.
    pub fn hilbert_function(&self, m: u32) -> u64 {
        hf_from_numerator(&self.hilbert_numerator(), self.ring.nvars(), m)
    }

    /// Standard monomials of degree `m`, decreasing in the basis order.
    pub fn std_monomials(&self, m: u32) -> Vec<Monomial> {
        let lms = self.leading_monomials();
        let masks: Vec<u64> = lms.iter().map(support_mask).collect();
        let mut out: Vec<Monomial> = monomials_of_degree(self.ring.nvars(), m)
            .into_iter()
            .filter(|x| {
                let mx = support_mask(x);
                !lms.iter().zip(&masks).any(|(l, &ml)| ml & !mx == 0 && l.divides(x))
            })
            .collect();
        out.sort_by(|a, b| self.ring.cmp(b, a));
        out
    }

    /// Krull dimension of `R/I`: the largest set of variables containing the
    /// support of no leading monomial; −1 for the unit ideal.
    pub fn krull_dim(&self) -> i32 {
        krull_dim_of_monomials(&self.leading_monomials(), self.ring.nvars())
    }
}

/// Largest variable subset supporting none of `lms`; −1 if some is 1.
pub fn krull_dim_of_monomials(lms: &[Monomial], n: usize) -> i32 {
    assert!(n <= 64, "at most 64 variables");
    if lms.iter().any(Monomial::is_one) {
        return -1;
    }
    let masks: Vec<u64> = lms.iter().map(support_mask).collect();
    // A subset S is admissible iff it contains no mask. Search by deciding
    // variables one at a time, excluding first.
    fn search(v: usize, n: usize, chosen: u64, size: usize, masks: &[u64], best: &mut usize) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        let with = chosen | 1 << v;
        if !masks.iter().any(|&m| m & !with == 0) {
            search(v + 1, n, with, size + 1, masks, best);
        }
        search(v + 1, n, chosen, size, masks, best);
    }
    let mut best = 0;
    search(0, n, 0, 0, &masks, &mut best);
    best as i32
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i128>, b: &[i128], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Hilbert series numerator of `k[x_1..x_n] / (gens)` by pivoting on variable powers.
pub fn hilbert_numerator(gens: Vec<Monomial>, n: usize) -> Vec<i128> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(Monomial::is_one) {
        return vec![0];
    }
    let masks: Vec<u64> = gens.iter().map(support_mask).collect();
    let coprime = (0..gens.len()).all(|i| (i + 1..gens.len()).all(|j| masks[i] & masks[j] == 0));
    if coprime {
        return trim(gens.iter().fold(vec![1i128], |acc, g| {
            let mut f = vec![0i128; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            poly_mul(&acc, &f)
        }));
    }
    // pivot: the variable in most generators, at the median positive exponent
    let mut counts = vec![0usize; n];
    for g in &gens {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let v = (0..n).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).expect("n > 0");
    let mut exps: Vec<u16> = gens.iter().map(|g| g.exp(v)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pe = vec![0u16; n];
    pe[v] = e;
    let pivot = Monomial::from_exps(&pe);

    let mut sum_gens: Vec<Monomial> = gens.iter().filter(|g| g.exp(v) < e).cloned().collect();
    sum_gens.push(pivot);
    let colon_gens: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut x = g.exps().to_vec();
            x[v] = x[v].saturating_sub(e);
            Monomial::from_exps(&x)
        })
        .collect();
    let mut out = hilbert_numerator(sum_gens, n);
    let colon = hilbert_numerator(colon_gens, n);
    poly_add_shifted(&mut out, &colon, e as usize);
    trim(out)
}

/// `Σ_k N_k · C(m - k + n - 1, n - 1)`.
pub fn hf_from_numerator(num: &[i128], n: usize, m: u32) -> u64 {
    let mut total: i128 = 0;
    for (k, c) in num.iter().enumerate() {
        if *c == 0 || k as u32 > m {
            continue;
        }
        let d = (m as usize) - k;
        total += c * binomial(d + n - 1, n - 1) as i128;
    }
    assert!(total >= 0, "negative Hilbert function value");
    total as u64
}

/// Whether `(1 - z)^k` divides the integer polynomial `p`.
pub fn divisible_by_one_minus_z_pow(p: &[i128], k: usize) -> bool {
    let mut q = trim(p.to_vec());
    for _ in 0..k {
        if q.iter().all(|&c| c == 0) {
            return true;
        }
        if q.iter().sum::<i128>() != 0 {
            return false;
        }
        // synthetic division by (1 - z): q = (1 - z) r with r_j = Σ_{i ≤ j} q_i
        let mut r = Vec::with_capacity(q.len().saturating_sub(1));
        let mut acc = 0i128;
        for c in &q[..q.len() - 1] {
            acc += c;
            r.push(acc);
        }
        q = trim(if r.is_empty() { vec![0] } else { r });
    }
    true
}

/// Tri-state saturation flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Saturation {
    Yes,
    No,
    Unknown,
}

type GbCache<F> = Arc<RwLock<FxHashMap<MonomialOrder, Arc<GroebnerBasis<F>>>>>;

/// A homogeneous ideal with a lazily filled Gröbner basis cache per order.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: Ring<F>,
    gens: Vec<Polynomial<F>>,
    saturated: Saturation,
    cache: GbCache<F>,
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped; every other generator must be homogeneous.
    pub fn new(ring: Ring<F>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        let gens: Vec<Polynomial<F>> = gens.into_iter().filter(|g| !g.is_zero()).map(|g| ring.reorder(&g)).collect();
        if let Some(g) = gens.iter().find(|g| !g.is_homogeneous()) {
            return Err(Error::NotHomogeneous(ring.format(g)));
        }
        Ok(Ideal { ring, gens, saturated: Saturation::Unknown, cache: Arc::default() })
    }

    /// Parse generators given as text.
    pub fn from_strs(ring: Ring<F>, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| ring.parse(s)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ideal::new(ring, polys)
    }

    pub fn zero(ring: Ring<F>) -> Self {
        Ideal { ring, gens: Vec::new(), saturated: Saturation::Yes, cache: Arc::default() }
    }

    pub fn unit(ring: Ring<F>) -> Self {
        let one = ring.one();
        Ideal { ring, gens: vec![one], saturated: Saturation::Yes, cache: Arc::default() }
    }

    /// The ideal generated by all variables.
    pub fn irrelevant(ring: Ring<F>) -> Self {
        let gens = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        Ideal { ring, gens, saturated: Saturation::No, cache: Arc::default() }
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }
    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }
    pub fn saturated(&self) -> Saturation {
        self.saturated
    }
    pub fn with_saturated(mut self, s: Saturation) -> Self {
        self.saturated = s;
        self
    }

    /// Same generators viewed in a ring with another order (fresh cache).
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        let ring = self.ring.with_order(order);
        let gens = self.gens.iter().map(|g| ring.reorder(g)).collect();
        Ideal { ring, gens, saturated: self.saturated, cache: Arc::default() }
    }

    /// Reduced Gröbner basis in the ring's own order.
    pub fn groebner_basis(&self) -> Arc<GroebnerBasis<F>> {
        self.groebner_basis_in(self.ring.order())
    }

    pub fn groebner_basis_in(&self, order: MonomialOrder) -> Arc<GroebnerBasis<F>> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(&order) {
            return gb.clone();
        }
        let ring = self.ring.with_order(order);
        let gb = Arc::new(GroebnerBasis::compute(&ring, &self.gens, None));
        self.cache.write().expect("cache lock").entry(order).or_insert(gb).clone()
    }

    /// Gröbner basis valid through degree `cap` (not cached).
    pub fn truncated_groebner_basis(&self, order: MonomialOrder, cap: u32) -> GroebnerBasis<F> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(&order) {
            return (**gb).clone();
        }
        GroebnerBasis::compute(&self.ring.with_order(order), &self.gens, Some(cap))
    }

    /// Any cached basis, preferring degrevlex; used when the order does not matter.
    pub fn any_groebner_basis(&self) -> Arc<GroebnerBasis<F>> {
        let cached = {
            let c = self.cache.read().expect("cache lock");
            c.get(&self.ring.order()).or_else(|| c.values().next()).cloned()
        };
        cached.unwrap_or_else(|| self.groebner_basis_in(MonomialOrder::Degrevlex))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.any_groebner_basis().contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> bool {
        let gb = self.any_groebner_basis();
        other.gens.iter().all(|g| gb.contains(g))
    }

    pub fn same_as(&self, other: &Ideal<F>) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Polynomial::is_constant) || self.any_groebner_basis().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        self.groebner_basis().normal_form(f)
    }

    pub fn hilbert_numerator(&self) -> Vec<i128> {
        self.any_groebner_basis().hilbert_numerator()
    }

    pub fn hilbert_function(&self, m: u32) -> u64 {
        self.any_groebner_basis().hilbert_function(m)
    }

    pub fn std_monomials(&self, m: u32) -> Vec<Monomial> {
        self.groebner_basis().std_monomials(m)
    }

    pub fn krull_dim(&self) -> i32 {
        self.any_groebner_basis().krull_dim()
    }

    pub fn hilbert_data(&self, cap: u32) -> HilbertData {
        HilbertData::compute(self, cap)
    }

    /// Degree of the projective scheme, from the stabilized Hilbert function.
    pub fn degree_of(&self, cap: u32) -> Result<u64> {
        let hd = self.hilbert_data(cap);
        hd.degree.ok_or(Error::Truncation { what: "Hilbert function".into(), cap })
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| self.ring.reorder(g)));
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn add_gens(&self, extra: Vec<Polynomial<F>>) -> Result<Ideal<F>> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(self.ring.clone(), gens)
    }

    /// Ideal generated by the (reduced) Gröbner basis in the ring's order.
    pub fn with_gb_generators(&self) -> Ideal<F> {
        let gb = self.groebner_basis();
        Ideal { ring: self.ring.clone(), gens: gb.polys().to_vec(), saturated: self.saturated, cache: self.cache.clone() }
    }

    /// Apply the linear substitution given by the columns of `a`.
    pub fn apply_linear_change(&self, a: &crate::linalg::ExactMatrix<F>) -> Result<Ideal<F>> {
        let images = self.ring.linear_change_images(a)?;
        let gens = self.gens.iter().map(|g| self.ring.substitute(g, &images, &self.ring)).collect();
        Ok(Ideal::new(self.ring.clone(), gens)?.with_saturated(self.saturated))
    }

    /// Minimal homogeneous generators, selected from the given generators.
    pub fn minimal_generators(&self) -> Vec<Polynomial<F>> {
        let mut by_deg: BTreeMap<u32, Vec<&Polynomial<F>>> = BTreeMap::new();
        for g in &self.gens {
            by_deg.entry(g.degree().unwrap_or(0)).or_default().push(g);
        }
        let ring = self.ring.with_order(MonomialOrder::Degrevlex);
        let mut kept: Vec<Polynomial<F>> = Vec::new();
        for (d, block) in by_deg {
            let lower = GroebnerBasis::compute(&ring, &kept, Some(d));
            let nfs: Vec<Polynomial<F>> = block.iter().map(|g| lower.normal_form(g)).collect();
            let mut index: FxHashMap<Monomial, usize> = FxHashMap::default();
            for f in &nfs {
                for (m, _) in f.terms() {
                    let len = index.len();
                    index.entry(m.clone()).or_insert(len);
                }
            }
            let mut space = EchelonSpace::new(ring.field().clone(), index.len());
            for (g, f) in block.into_iter().zip(&nfs) {
                let mut v = vec![ring.field().zero(); index.len()];
                for (m, c) in f.terms() {
                    v[index[m]] = c.clone();
                }
                if space.insert(v) {
                    kept.push(g.clone());
                }
            }
        }
        kept
    }

    /// Number of minimal generators in each degree.
    pub fn generator_degrees(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for g in self.minimal_generators() {
            *out.entry(g.degree().unwrap_or(0)).or_insert(0) += 1;
        }
        out
    }

    /// Ideal with minimal generators only (same cache).
    pub fn minimalized(&self) -> Ideal<F> {
        Ideal { ring: self.ring.clone(), gens: self.minimal_generators(), saturated: self.saturated, cache: self.cache.clone() }
    }
}

/// Hilbert function table, stabilization data and the derived invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// `values[m] = dim (R/I)_m` for `m ≤ cap`.
    pub values: Vec<u64>,
    pub krull_dim: i32,
    /// First degree from which the Hilbert polynomial is certified to agree.
    pub stabilized_from: Option<u32>,
    /// Newton form of the Hilbert polynomial around `stabilized_from`:
    /// `HP(m) = Σ_k c_k · C(m - m0, k)`.
    pub newton: Vec<i64>,
    pub degree: Option<u64>,
}

impl HilbertData {
    fn compute<F: Field>(ideal: &Ideal<F>, cap: u32) -> Self {
        let gb = ideal.any_groebner_basis();
        let num = gb.hilbert_numerator();
        let n = ideal.ring().nvars();
        let values: Vec<u64> = (0..=cap).map(|m| hf_from_numerator(&num, n, m)).collect();
        let dim = gb.krull_dim();
        if dim <= 0 {
            // finite length (or zero) module: the Hilbert polynomial is zero
            let last_nonzero = values.iter().rposition(|&v| v != 0);
            let stable = match last_nonzero {
                None => Some(0),
                Some(k) if (k as u32) < cap => Some(k as u32 + 1),
                Some(_) => None,
            };
            let degree = stable.map(|_| values.iter().sum());
            return HilbertData { values, krull_dim: dim, stabilized_from: stable, newton: Vec::new(), degree };
        }
        let order = (dim - 1) as usize;
        let iv: Vec<i128> = values.iter().map(|&v| v as i128).collect();
        let diff = |v: &[i128], k: usize| -> Vec<i128> {
            let mut cur = v.to_vec();
            for _ in 0..k {
                cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
            }
            cur
        };
        // d[m] = Δ^{dim-1} HF at m (forward differences starting at m)
        let d = diff(&iv, order);
        let window = dim as usize + 2;
        let mut stable = None;
        for m in 0..d.len() {
            if m + window <= d.len() && d[m..m + window].iter().all(|&x| x == d[m]) {
                stable = Some(m as u32);
                break;
            }
        }
        let (newton, degree) = match stable {
            Some(m0) => {
                let newton: Vec<i64> = (0..=order).map(|k| diff(&iv[m0 as usize..], k)[0] as i64).collect();
                (newton, Some(d[m0 as usize] as u64))
            }
            None => (Vec::new(), None),
        };
        HilbertData { values, krull_dim: dim, stabilized_from: stable, newton, degree }
    }

    /// Evaluate the fitted Hilbert polynomial.
    pub fn hilbert_polynomial(&self, m: i64) -> Option<i128> {
        let m0 = self.stabilized_from? as i64;
        if self.newton.is_empty() {
            return Some(0);
        }
        let x = m - m0;
        let mut total: i128 = 0;
        for (k, c) in self.newton.iter().enumerate() {
            // generalized binomial C(x, k)
            let mut b: i128 = 1;
            for j in 0..k as i128 {
                b = b * (x as i128 - j) / (j + 1);
            }
            total += *c as i128 * b;
        }
        Some(total)
    }
}

/// `I ∩ k[x_t, ..., x_n]` as an ideal of the subring.
pub fn eliminate<F: Field>(ideal: &Ideal<F>, t: usize) -> Result<Ideal<F>> {
    eliminate_with(ideal, t, MonomialOrder::GradedElim(t))
}

/// Elimination using a caller-chosen elimination order (for cross-checks).
pub fn eliminate_with<F: Field>(ideal: &Ideal<F>, t: usize, order: MonomialOrder) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    if t >= ring.nvars() {
        return Err(Error::Range(format!("cannot eliminate {t} of {} variables", ring.nvars())));
    }
    let sub = ring.subring(t);
    if t == 0 {
        return Ok(ideal.clone());
    }
    let gb = ideal.groebner_basis_in(order);
    let gens = gb.polys().iter().filter_map(|g| ring.restrict_to_subring(g, t, &sub)).collect();
    Ideal::new(sub, gens)
}

/// Swap variables `a` and `b` in every term.
fn swap_vars<F: Field>(ring: &Ring<F>, f: &Polynomial<F>, a: usize, b: usize) -> Polynomial<F> {
    if a == b {
        return f.clone();
    }
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e.swap(a, b);
            (Monomial::from_exps(&e), c.clone())
        })
        .collect();
    ring.from_terms(terms)
}

/// `I : x_j` (`infinite = false`) or `I : x_j^∞` via a degrevlex basis with
/// `x_j` moved to the last position.
pub fn colon_var<F: Field>(ideal: &Ideal<F>, j: usize, infinite: bool) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    let last = ring.nvars() - 1;
    let rl = ring.with_order(MonomialOrder::Degrevlex);
    let swapped: Vec<Polynomial<F>> = ideal.gens().iter().map(|g| swap_vars(&rl, g, j, last)).collect();
    let gb = GroebnerBasis::compute(&rl, &swapped, None);
    let gens = gb
        .polys()
        .iter()
        .map(|g| {
            let k = g.terms().iter().map(|(m, _)| m.exp(last)).min().unwrap_or(0);
            let k = if infinite { k } else { k.min(1) };
            let mut e = vec![0u16; ring.nvars()];
            e[last] = k;
            let q = rl.div_monomial(g, &Monomial::from_exps(&e)).expect("divisible");
            swap_vars(ring, &q, j, last)
        })
        .collect();
    Ideal::new(ring.clone(), gens)
}

fn tag_ring<F: Field>(ring: &Ring<F>) -> Ring<F> {
    let mut name = "t".to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    let mut vars = vec![name];
    vars.extend(ring.vars().iter().cloned());
    Ring::new(ring.field().clone(), vars, MonomialOrder::BlockElim(1)).expect("fresh name")
}

/// `I ∩ J` by eliminating a tag variable from `t·I + (1 - t)·J`.
pub fn intersect<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    let ring = i.ring();
    if i.is_zero() || j.is_zero() {
        return Ok(Ideal::zero(ring.clone()));
    }
    let tr = tag_ring(ring);
    let t = tr.var(0);
    let one_minus_t = tr.sub(&tr.one(), &t);
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(tr.mul(&t, &tr.embed_from_subring(g, 1)));
    }
    for h in j.gens() {
        gens.push(tr.mul(&one_minus_t, &tr.embed_from_subring(h, 1)));
    }
    let gb = buchberger(&tr, &gens, None);
    let mut out = Vec::new();
    for g in &gb {
        if let Some(p) = tr.restrict_to_subring(g, 1, ring) {
            out.extend(ring.homogeneous_components(&p));
        }
    }
    Ideal::new(ring.clone(), out)
}

/// `I : f` for a homogeneous nonzero `f`.
pub fn colon<F: Field>(ideal: &Ideal<F>, f: &Polynomial<F>) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    let f = ring.reorder(f);
    if f.is_zero() {
        return Err(crate::poly::PolyError::ZeroPolynomial.into());
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(ring.format(&f)));
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    if f.len() == 1 && f.degree() == Some(1) {
        let j = f.lead_monomial().unwrap().support().next().expect("a variable");
        return colon_var(ideal, j, false);
    }
    let principal = Ideal::new(ring.clone(), vec![f.clone()])?;
    let inter = intersect(ideal, &principal)?;
    let gens = inter.gens().iter().map(|g| ring.div_exact(g, &f).expect("elements of (f) are divisible by f")).collect();
    Ideal::new(ring.clone(), gens)
}

/// `I : J = ∩_{g ∈ gens J} (I : g)`.
pub fn colon_ideal<F: Field>(ideal: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    let mut acc: Option<Ideal<F>> = None;
    for g in j.gens() {
        let c = colon(ideal, g)?;
        acc = Some(match acc {
            None => c,
            Some(a) => intersect(&a, &c)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(ideal.ring().clone())))
}

/// `I : J^∞`. Uses the irrelevant-ideal routine when `J` is primary to the
/// maximal homogeneous ideal; otherwise iterates `I ← I : J` to a fixed point.
pub fn saturate<F: Field>(ideal: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    if j.is_unit() {
        return Ok(ideal.clone());
    }
    if j.krull_dim() == 0 {
        return saturate_irrelevant(ideal, INTERNAL_SEED);
    }
    let mut cur = ideal.clone();
    loop {
        let next = colon_ideal(&cur, j)?;
        if next.contains_ideal(&cur) && cur.contains_ideal(&next) {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `I : (x_0, …, x_n)^∞`.
///
/// For a random linear form `ℓ`, `J = I : ℓ^∞` always contains the
/// saturation; it equals it exactly when `J / I` has finite length, i.e. when
/// `(1 - z)^{n+1}` divides the difference of the Hilbert numerators. Failing
/// that for ten draws, the saturation is assembled as `∩_j (I : x_j^∞)`.
pub fn saturate_irrelevant<F: Field>(ideal: &Ideal<F>, seed: u64) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if ideal.is_zero() {
        return Ok(ideal.clone().with_saturated(Saturation::Yes));
    }
    let base = ideal.any_groebner_basis();
    if base.krull_dim() <= 0 {
        return Ok(Ideal::unit(ring.clone()));
    }
    let num_i = base.hilbert_numerator();
    let fld = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let a: Vec<F::Elem> = (0..n).map(|_| fld.random(&mut rng)).collect();
        let Some(an_inv) = fld.inv(&a[n - 1]) else { continue };
        // φ: x_last ↦ (x_last − Σ_{i<last} a_i x_i) / a_last, so φ(ℓ) = x_last
        let mut fwd: Vec<Polynomial<F>> = (0..n).map(|i| ring.var(i)).collect();
        let mut coeffs: Vec<F::Elem> = a.iter().map(|c| fld.neg(&fld.mul(c, &an_inv))).collect();
        coeffs[n - 1] = an_inv;
        fwd[n - 1] = ring.linear_form(&coeffs);
        let mut back: Vec<Polynomial<F>> = (0..n).map(|i| ring.var(i)).collect();
        back[n - 1] = ring.linear_form(&a);

        let moved = Ideal::new(ring.clone(), ideal.gens().iter().map(|g| ring.substitute(g, &fwd, ring)).collect())?;
        let sat = colon_var(&moved, n - 1, true)?;
        let j = Ideal::new(ring.clone(), sat.gens().iter().map(|g| ring.substitute(g, &back, ring)).collect())?;
        let num_j = j.any_groebner_basis().hilbert_numerator();
        let len = num_i.len().max(num_j.len());
        let diff: Vec<i128> = (0..len).map(|k| num_i.get(k).copied().unwrap_or(0) - num_j.get(k).copied().unwrap_or(0)).collect();
        if divisible_by_one_minus_z_pow(&diff, n) {
            return Ok(j.with_saturated(Saturation::Yes));
        }
    }
    let mut acc: Option<Ideal<F>> = None;
    for v in 0..n {
        let s = colon_var(ideal, v, true)?;
        acc = Some(match acc {
            None => s,
            Some(a) => intersect(&a, &s)?,
        });
    }
    Ok(acc.expect("n ≥ 1").with_saturated(Saturation::Yes))
}
