//! Degree-by-degree Gröbner bases of homogeneous ideals by sparse linear
//! algebra: all S-pairs of one degree are reduced together in a single
//! Macaulay-style matrix.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::field::Field;
use crate::poly::{Monomial, Polynomial, Ring};

fn support_mask(m: &Monomial) -> u64 {
    m.exps().iter().enumerate().fold(0u64, |acc, (i, &e)| if e > 0 { acc | 1 << (i % 64) } else { acc })
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'r, F: Field> {
    ring: &'r Ring<F>,
    basis: Vec<Polynomial<F>>,
    leads: Vec<Monomial>,
    masks: Vec<u64>,
    alive: Vec<bool>,
    pairs: Vec<Pair>,
}

/// Sparse row over column indices; columns are sorted by decreasing monomial.
struct Row<E> {
    cols: Vec<u32>,
    vals: Vec<E>,
}

impl<'r, F: Field> State<'r, F> {
    fn divisor_of(&self, m: &Monomial) -> Option<usize> {
        let mask = support_mask(m);
        (0..self.basis.len())
            .filter(|&k| self.alive[k] && self.masks[k] & !mask == 0 && self.leads[k].divides(m))
            .min_by_key(|&k| self.basis[k].len())
    }

    /// Gebauer–Möller update for a new monic element.
    fn insert(&mut self, h: Polynomial<F>) {
        let hidx = self.basis.len();
        let lm_h = h.lead_monomial().expect("nonzero").clone();
        let candidates: Vec<(usize, Monomial, bool)> =
            (0..hidx).filter(|&g| self.alive[g]).map(|g| (g, self.leads[g].lcm(&lm_h), self.leads[g].is_coprime(&lm_h))).collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for k in 0..candidates.len() {
            let (g, l, coprime) = &candidates[k];
            let dominated =
                !coprime && (candidates[k + 1..].iter().any(|(_, l2, _)| l2.divides(l)) || kept.iter().any(|(_, l2, _)| l2.divides(l)));
            if !dominated {
                kept.push((*g, l.clone(), *coprime));
            }
        }
        let leads = &self.leads;
        self.pairs.retain(|p| !(lm_h.divides(&p.lcm) && leads[p.i].lcm(&lm_h) != p.lcm && leads[p.j].lcm(&lm_h) != p.lcm));
        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            self.pairs.push(Pair { i: g, j: hidx, lcm: l });
        }
        for g in 0..hidx {
            if self.alive[g] && lm_h.divides(&self.leads[g]) {
                self.alive[g] = false;
            }
        }
        self.masks.push(support_mask(&lm_h));
        self.leads.push(lm_h);
        self.basis.push(h);
        self.alive.push(true);
    }
}

/// Reduce the homogeneous `targets` (all of one degree) modulo the alive
/// elements of `state`, then echelonize the results. The returned
/// polynomials are monic with pairwise distinct leading monomials, none
/// divisible by an alive leading monomial. `seeds` are products `u * g`
/// already known to lie in the ideal; their leads become pivots first.
fn reduce_block<F: Field>(state: &State<'_, F>, seeds: Vec<(usize, Monomial)>, targets: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let ring = state.ring;
    let fld = ring.field();
    let mult = |k: usize, u: &Monomial| -> Vec<(Monomial, F::Elem)> {
        state.basis[k].terms().iter().map(|(m, c)| (m.mul(u), c.clone())).collect()
    };

    let mut reducers: FxHashMap<Monomial, Vec<(Monomial, F::Elem)>> = FxHashMap::default();
    let mut target_terms: Vec<Vec<(Monomial, F::Elem)>> = Vec::new();
    let mut seen_seed: FxHashSet<(usize, Monomial)> = FxHashSet::default();
    for (k, u) in seeds {
        if !seen_seed.insert((k, u.clone())) {
            continue;
        }
        let row = mult(k, &u);
        let lead = row[0].0.clone();
        if let std::collections::hash_map::Entry::Vacant(e) = reducers.entry(lead) {
            e.insert(row);
        } else {
            target_terms.push(row);
        }
    }
    target_terms.extend(targets.into_iter().filter(|t| !t.is_zero()).map(Polynomial::into_terms));

    let mut monos: FxHashSet<Monomial> = FxHashSet::default();
    let mut queue: Vec<Monomial> = Vec::new();
    let push_all = |row: &[(Monomial, F::Elem)], monos: &mut FxHashSet<Monomial>, queue: &mut Vec<Monomial>| {
        for (m, _) in row {
            if monos.insert(m.clone()) {
                queue.push(m.clone());
            }
        }
    };
    for row in reducers.values().chain(target_terms.iter()) {
        push_all(row, &mut monos, &mut queue);
    }
    while let Some(m) = queue.pop() {
        if reducers.contains_key(&m) {
            continue;
        }
        if let Some(k) = state.divisor_of(&m) {
            let u = state.leads[k].quotient_of(&m).expect("divides");
            let row = mult(k, &u);
            push_all(&row, &mut monos, &mut queue);
            reducers.insert(m, row);
        }
    }

    let mut cols: Vec<Monomial> = monos.into_iter().collect();
    cols.sort_by(|a, b| ring.cmp(b, a));
    let index: FxHashMap<&Monomial, u32> = cols.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let to_row = |terms: &[(Monomial, F::Elem)]| -> Row<F::Elem> {
        Row { cols: terms.iter().map(|(m, _)| index[m]).collect(), vals: terms.iter().map(|(_, c)| c.clone()).collect() }
    };

    let ncols = cols.len();
    let mut pivot: Vec<Option<Row<F::Elem>>> = (0..ncols).map(|_| None).collect();
    for (lead, terms) in &reducers {
        let mut row = to_row(terms);
        let inv = fld.inv(&row.vals[0]).expect("nonzero lead");
        if !fld.is_one(&inv) {
            row.vals.iter_mut().for_each(|v| *v = fld.mul(v, &inv));
        }
        pivot[index[lead] as usize] = Some(row);
    }

    let reduce_dense = |acc: &mut Vec<F::Elem>, start: usize, pivot: &[Option<Row<F::Elem>>]| {
        for c in start..ncols {
            if fld.is_zero(&acc[c]) {
                continue;
            }
            if let Some(p) = &pivot[c] {
                let coef = acc[c].clone();
                for (k, v) in p.cols.iter().zip(&p.vals) {
                    let k = *k as usize;
                    acc[k] = fld.sub(&acc[k], &fld.mul(&coef, v));
                }
            }
        }
    };
    let sparse_of = |acc: Vec<F::Elem>| -> Row<F::Elem> {
        let mut row = Row { cols: Vec::new(), vals: Vec::new() };
        for (c, v) in acc.into_iter().enumerate() {
            if !fld.is_zero(&v) {
                row.cols.push(c as u32);
                row.vals.push(v);
            }
        }
        row
    };

    let mut reduced: Vec<Row<F::Elem>> = target_terms
        .par_iter()
        .map(|terms| {
            let row = to_row(terms);
            let mut acc = vec![fld.zero(); ncols];
            for (c, v) in row.cols.iter().zip(row.vals) {
                acc[*c as usize] = fld.add(&acc[*c as usize], &v);
            }
            let start = row.cols.iter().copied().min().unwrap_or(0) as usize;
            reduce_dense(&mut acc, start, &pivot);
            sparse_of(acc)
        })
        .filter(|r| !r.cols.is_empty())
        .collect();
    reduced.sort_by_key(|r| r.cols[0]);

    // Echelonize among the reduced rows against fresh pivots only.
    let mut fresh: Vec<Option<Row<F::Elem>>> = (0..ncols).map(|_| None).collect();
    let mut fresh_cols: Vec<usize> = Vec::new();
    for row in reduced {
        let mut acc = vec![fld.zero(); ncols];
        for (c, v) in row.cols.iter().zip(row.vals) {
            acc[*c as usize] = v;
        }
        reduce_dense(&mut acc, row.cols[0] as usize, &fresh);
        let mut row = sparse_of(acc);
        if row.cols.is_empty() {
            continue;
        }
        let inv = fld.inv(&row.vals[0]).expect("nonzero lead");
        row.vals.iter_mut().for_each(|v| *v = fld.mul(v, &inv));
        fresh_cols.push(row.cols[0] as usize);
        let lead = row.cols[0] as usize;
        fresh[lead] = Some(row);
    }
    // Back-substitute so the new elements are mutually reduced.
    fresh_cols.sort_unstable();
    for &c in fresh_cols.iter().rev() {
        let row = fresh[c].take().expect("pivot");
        let mut acc = vec![fld.zero(); ncols];
        for (k, v) in row.cols.iter().zip(row.vals) {
            acc[*k as usize] = v;
        }
        for &c2 in fresh_cols.iter().filter(|&&c2| c2 > c) {
            if fld.is_zero(&acc[c2]) {
                continue;
            }
            let coef = acc[c2].clone();
            let p = fresh[c2].as_ref().expect("pivot");
            for (k, v) in p.cols.iter().zip(&p.vals) {
                let k = *k as usize;
                acc[k] = fld.sub(&acc[k], &fld.mul(&coef, v));
            }
        }
        fresh[c] = Some(sparse_of(acc));
    }
    fresh_cols
        .into_iter()
        .map(|c| {
            let row = fresh[c].take().expect("pivot");
            let terms = row.cols.iter().zip(row.vals).map(|(k, v)| (cols[*k as usize].clone(), v)).collect();
            Polynomial::from_sorted_terms(terms)
        })
        .collect()
}

/// Reduced Gröbner basis of homogeneous generators, in degrees ≤ `cap` when
/// given. Works for any monomial order.
pub(crate) fn homogeneous_gb<F: Field>(ring: &Ring<F>, gens: &[Polynomial<F>], cap: Option<u32>) -> Vec<Polynomial<F>> {
    let mut inputs: Vec<Polynomial<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.reorder(g))
        .filter(|g| cap.is_none_or(|c| g.degree().unwrap_or(0) <= c))
        .collect();
    if inputs.iter().any(Polynomial::is_constant) {
        return vec![ring.one()];
    }
    inputs.sort_by_key(|g| std::cmp::Reverse(g.degree().unwrap_or(0)));

    let mut state = State { ring, basis: Vec::new(), leads: Vec::new(), masks: Vec::new(), alive: Vec::new(), pairs: Vec::new() };
    loop {
        let next_pair = state.pairs.iter().map(|p| p.lcm.degree()).min();
        let next_input = inputs.last().map(|g| g.degree().unwrap_or(0));
        let d = match (next_pair, next_input) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => break,
        };
        if cap.is_some_and(|c| d > c) {
            break;
        }
        let mut seeds = Vec::new();
        let mut k = 0;
        while k < state.pairs.len() {
            if state.pairs[k].lcm.degree() == d {
                let p = state.pairs.swap_remove(k);
                for g in [p.i, p.j] {
                    seeds.push((g, state.leads[g].quotient_of(&p.lcm).expect("lcm")));
                }
            } else {
                k += 1;
            }
        }
        let mut targets = Vec::new();
        while inputs.last().is_some_and(|g| g.degree().unwrap_or(0) == d) {
            targets.push(inputs.pop().expect("nonempty"));
        }
        for h in reduce_block(&state, seeds, targets) {
            state.insert(h);
        }
    }

    // Tail-reduce each surviving element against the others, degree by degree.
    let alive: Vec<usize> = (0..state.basis.len()).filter(|&i| state.alive[i]).collect();
    let mut out: Vec<Polynomial<F>> = Vec::with_capacity(alive.len());
    let mut by_degree: FxHashMap<u32, Vec<usize>> = FxHashMap::default();
    for &i in &alive {
        by_degree.entry(state.basis[i].degree().unwrap_or(0)).or_default().push(i);
    }
    for idx in by_degree.into_values() {
        let tails: Vec<Polynomial<F>> = idx.iter().map(|&i| Polynomial::from_sorted_terms(state.basis[i].terms()[1..].to_vec())).collect();
        let reduced = reduce_tails(&state, tails);
        for (&i, tail) in idx.iter().zip(reduced) {
            let mut terms = vec![(state.leads[i].clone(), ring.field().one())];
            terms.extend(tail.into_terms());
            out.push(Polynomial::from_sorted_terms(terms));
        }
    }
    out.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    out
}

/// Full normal forms of homogeneous polynomials of one degree each.
fn reduce_tails<F: Field>(state: &State<'_, F>, tails: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    tails
        .into_par_iter()
        .map(|t| {
            if t.is_zero() {
                return t;
            }
            let ring = state.ring;
            let fld = ring.field();
            let mut done: Vec<(Monomial, F::Elem)> = Vec::new();
            let mut acc: FxHashMap<Monomial, F::Elem> = t.into_terms().into_iter().collect();
            let mut heap: std::collections::BinaryHeap<OrdMono<'_, F>> = acc.keys().map(|m| OrdMono { m: m.clone(), ring }).collect();
            while let Some(OrdMono { m, .. }) = heap.pop() {
                let Some(c) = acc.remove(&m) else { continue };
                if fld.is_zero(&c) {
                    continue;
                }
                match state.divisor_of(&m) {
                    None => done.push((m, c)),
                    Some(k) => {
                        let u = state.leads[k].quotient_of(&m).expect("divides");
                        for (gm, gc) in &state.basis[k].terms()[1..] {
                            let nm = gm.mul(&u);
                            let delta = fld.neg(&fld.mul(&c, gc));
                            match acc.get_mut(&nm) {
                                Some(v) => *v = fld.add(v, &delta),
                                None => {
                                    heap.push(OrdMono { m: nm.clone(), ring });
                                    acc.insert(nm, delta);
                                }
                            }
                        }
                    }
                }
            }
            Polynomial::from_sorted_terms(done)
        })
        .collect()
}

struct OrdMono<'r, F: Field> {
    m: Monomial,
    ring: &'r Ring<F>,
}

impl<F: Field> PartialEq for OrdMono<'_, F> {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}
impl<F: Field> Eq for OrdMono<'_, F> {}
impl<F: Field> PartialOrd for OrdMono<'_, F> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: Field> Ord for OrdMono<'_, F> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ring.cmp(&self.m, &other.m)
    }
}
