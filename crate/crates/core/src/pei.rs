//! Partial elimination ideals `K_i(I) ⊂ S_1 = k[x_1, …, x_n]`.
//!
//! `K_i(I)` is generated by the `x_0^i`-coefficients of the elements of `I`
//! whose `x_0`-degree is at most `i`. Two routes compute it: the Gröbner rule
//! (leading `x_0`-coefficients `f̄` of the reduced deglex basis elements with
//! `d_0(f) ≤ i`), and the degreewise definition by linear algebra, which is
//! the oracle for the rule.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{saturate_irrelevant, Ideal, DEFAULT_DEGREE_CAP, INTERNAL_SEED};
use crate::koszul::{betti_table, MonomialNormalForms};
use crate::linalg::SparseVec;
use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, Polynomial, Ring};
use crate::syzygy::{check_ndp, NdpReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeiSource {
    GroebnerRule,
    DegreewiseOracle,
}

/// One level `K_i(I)` of the filtration.
#[derive(Clone, Debug)]
pub struct PeiLevel<F: Field> {
    pub level: u32,
    /// Ideal of `S_1`.
    pub ideal: Ideal<F>,
    /// Some element `x_0^i + (lower x_0-powers)` lies in `I`.
    pub unit: bool,
    pub source: PeiSource,
}

/// `K_0(I) ⊆ K_1(I) ⊆ …` for the levels `0..=max_level`.
#[derive(Clone, Debug)]
pub struct PeiFiltration<F: Field> {
    pub base: Ideal<F>,
    pub levels: Vec<PeiLevel<F>>,
}

impl<F: Field> PeiFiltration<F> {
    pub fn compute(ideal: &Ideal<F>, max_level: u32) -> Result<Self> {
        let levels = (0..=max_level).map(|i| partial_elim_ideal(ideal, i)).collect::<Result<_>>()?;
        Ok(PeiFiltration { base: ideal.clone(), levels })
    }

    /// Every generator of each level lies in the next.
    pub fn is_increasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[0].ideal.gens().iter().all(|g| w[1].ideal.contains(g)))
    }
}

fn check_setting<F: Field>(ideal: &Ideal<F>) -> Result<()> {
    let ring = ideal.ring();
    if ring.order() != MonomialOrder::Deglex {
        return Err(Error::Order(format!("partial elimination needs deglex with x_0 greatest, found {}", ring.order())));
    }
    if ring.nvars() < 2 {
        return Err(Error::Range("partial elimination needs at least two variables".into()));
    }
    Ok(())
}

/// `K_i(I)` by the Gröbner rule.
pub fn partial_elim_ideal<F: Field>(ideal: &Ideal<F>, i: u32) -> Result<PeiLevel<F>> {
    check_setting(ideal)?;
    let ring = ideal.ring();
    let sub = ring.subring(1);
    let gb = ideal.groebner_basis_in(MonomialOrder::Deglex);
    let mut gens = Vec::new();
    for f in gb.polys() {
        let (d, fbar) = ring.leading_x0_coefficient(f, &sub)?;
        if u32::from(d) <= i {
            gens.push(fbar);
        }
    }
    let unit = gens.iter().any(Polynomial::is_constant);
    let ideal = if unit { Ideal::unit(sub) } else { Ideal::new(sub, gens)? };
    Ok(PeiLevel { level: i, ideal, unit, source: PeiSource::GroebnerRule })
}

/// Where the degreewise oracle takes its spanning set of `I_m` from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisSource {
    /// `u - NF(u)` for the degrevlex-nonstandard monomials `u`.
    NormalForms,
    /// Monomial multiples of the given generators.
    Generators,
}

/// Row echelon form keyed by leading column, columns ordered so that
/// smaller indices are larger monomials.
#[derive(Clone, Debug)]
struct LeadEchelon<F: Field> {
    field: F,
    pivots: FxHashMap<u32, usize>,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> LeadEchelon<F> {
    fn new(field: F) -> Self {
        LeadEchelon { field, pivots: FxHashMap::default(), rows: Vec::new() }
    }

    /// Reduce until the leading column is not a pivot (or `v` vanishes).
    fn reduce(&self, mut v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        while let Some((c, a)) = v.first().cloned() {
            match self.pivots.get(&c) {
                Some(&r) => v = sub_scaled(&self.field, &v, &a, &self.rows[r]),
                None => break,
            }
        }
        v
    }

    fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        let v = self.reduce(v);
        let Some((c, a)) = v.first().cloned() else { return false };
        let inv = self.field.inv(&a).expect("nonzero pivot");
        let v: SparseVec<F::Elem> = v.into_iter().map(|(k, x)| (k, self.field.mul(&x, &inv))).collect();
        self.pivots.insert(c, self.rows.len());
        self.rows.push(v);
        true
    }

    fn contains(&self, v: SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `v - a·w` for sorted sparse vectors.
fn sub_scaled<F: Field>(f: &F, v: &[(u32, F::Elem)], a: &F::Elem, w: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j == w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i == v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_w {
            out.push((w[j].0, f.neg(&f.mul(a, &w[j].1))));
            j += 1;
        } else {
            let x = f.sub(&v[i].1, &f.mul(a, &w[j].1));
            if !f.is_zero(&x) {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `I_m` in echelon form over the deglex-decreasing monomial basis of `R_m`.
struct DegreePiece<F: Field> {
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, u32>,
    echelon: LeadEchelon<F>,
}

impl<F: Field> DegreePiece<F> {
    fn vector(&self, f: &Polynomial<F>) -> SparseVec<F::Elem> {
        let mut v: SparseVec<F::Elem> = f.terms().iter().map(|(m, c)| (self.index[m], c.clone())).collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    fn pivot_x0(&self, row: &SparseVec<F::Elem>) -> u16 {
        self.monomials[row[0].0 as usize].exp(0)
    }
}

/// The definition of `K̃_i(I)` and `K_i(I)` carried out degree by degree:
/// `K̃_i(I)_m = {f ∈ I_m : d_0(f) ≤ i}` and `K_i(I)_{m-i}` its image under
/// the `x_0^i`-coefficient.
///
/// Deglex on a fixed degree is lex with `x_0` first, so the monomials with
/// `x_0`-exponent above `i` form a prefix of the columns; an echelon row lies
/// in `K̃_i` exactly when its pivot has `x_0`-exponent at most `i`.
pub struct DegreewisePei<F: Field> {
    ring: Ring<F>,
    sub: Ring<F>,
    max_degree: u32,
    pieces: Vec<DegreePiece<F>>,
}

impl<F: Field> DegreewisePei<F> {
    pub fn compute(ideal: &Ideal<F>, max_degree: u32, source: BasisSource) -> Result<Self> {
        check_setting(ideal)?;
        if max_degree > DEFAULT_DEGREE_CAP {
            return Err(Error::Truncation { what: "degreewise partial elimination".into(), cap: DEFAULT_DEGREE_CAP });
        }
        let ring = ideal.ring().clone();
        let n = ring.nvars();
        let fld = ring.field().clone();
        let mut pieces: Vec<DegreePiece<F>> = Vec::with_capacity(max_degree as usize + 1);
        let drl = match source {
            BasisSource::NormalForms => Some(ideal.truncated_groebner_basis(MonomialOrder::Degrevlex, max_degree.max(1))),
            BasisSource::Generators => None,
        };
        let mut nfs = drl.as_ref().map(|gb| MonomialNormalForms::new(gb, max_degree, None));
        for m in 0..=max_degree {
            let monomials = monomials_of_degree(n, m);
            let index: FxHashMap<Monomial, u32> = monomials.iter().cloned().enumerate().map(|(k, u)| (u, k as u32)).collect();
            let mut piece = DegreePiece { monomials, index, echelon: LeadEchelon::new(fld.clone()) };
            match nfs.as_mut() {
                Some(nf) => {
                    let basis = nf.basis(m);
                    for u in piece.monomials.clone() {
                        if nf.is_standard(&u) {
                            continue;
                        }
                        let mut v: SparseVec<F::Elem> = vec![(piece.index[&u], fld.one())];
                        for (k, c) in nf.nf(&u) {
                            v.push((piece.index[&basis[k as usize]], fld.neg(&c)));
                        }
                        v.sort_unstable_by_key(|e| e.0);
                        piece.echelon.insert(v);
                    }
                }
                None => {
                    for g in ideal.gens().iter().filter(|g| g.degree() == Some(m)) {
                        let v = piece.vector(g);
                        piece.echelon.insert(v);
                    }
                    if m > 0 {
                        let prev = &pieces[m as usize - 1];
                        for row in &prev.echelon.rows {
                            for x in 0..n {
                                let mut v: SparseVec<F::Elem> =
                                    row.iter().map(|(k, c)| (piece.index[&prev.monomials[*k as usize].mul_var(x)], c.clone())).collect();
                                v.sort_unstable_by_key(|e| e.0);
                                piece.echelon.insert(v);
                            }
                        }
                    }
                }
            }
            pieces.push(piece);
        }
        let sub = ring.subring(1);
        Ok(DegreewisePei { ring, sub, max_degree, pieces })
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// `dim I_m`.
    pub fn dim_ideal(&self, m: u32) -> usize {
        self.pieces[m as usize].echelon.rows.len()
    }

    /// `dim K̃_i(I)_m`.
    pub fn dim_tilde(&self, i: u32, m: u32) -> usize {
        let p = &self.pieces[m as usize];
        p.echelon.rows.iter().filter(|r| u32::from(p.pivot_x0(r)) <= i).count()
    }

    /// `dim K_i(I)_e` for `e + i ≤ max_degree`.
    pub fn dim_level(&self, i: u32, e: u32) -> usize {
        let p = &self.pieces[(e + i) as usize];
        p.echelon.rows.iter().filter(|r| u32::from(p.pivot_x0(r)) == i).count()
    }

    /// A basis of `K_i(I)_e`, as polynomials of `S_1`.
    pub fn level_basis(&self, i: u32, e: u32) -> Vec<Polynomial<F>> {
        let p = &self.pieces[(e + i) as usize];
        p.echelon
            .rows
            .iter()
            .filter(|r| u32::from(p.pivot_x0(r)) == i)
            .map(|r| {
                let terms = r
                    .iter()
                    .filter(|(k, _)| u32::from(p.monomials[*k as usize].exp(0)) == i)
                    .map(|(k, c)| (Monomial::from_exps(&p.monomials[*k as usize].exps()[1..]), c.clone()))
                    .collect();
                self.sub.from_terms(terms)
            })
            .collect()
    }

    /// Membership of a form of `R` of degree at most `max_degree` in `I`.
    pub fn ideal_contains(&self, f: &Polynomial<F>) -> bool {
        match f.degree() {
            None => true,
            Some(m) if m <= self.max_degree => {
                let p = &self.pieces[m as usize];
                p.echelon.contains(p.vector(f))
            }
            Some(_) => false,
        }
    }

    /// The ideal of `S_1` generated by `K_i(I)_e` for `e + i ≤ max_degree`.
    pub fn to_ideal(&self, i: u32) -> Result<Ideal<F>> {
        let mut gens = Vec::new();
        let mut acc: Option<Ideal<F>> = None;
        for e in 0..=self.max_degree.saturating_sub(i) {
            for g in self.level_basis(i, e) {
                if g.is_constant() {
                    return Ok(Ideal::unit(self.sub.clone()));
                }
                if acc.as_ref().is_none_or(|a| !a.contains(&g)) {
                    gens.push(g);
                    acc = Some(Ideal::new(self.sub.clone(), gens.clone())?);
                }
            }
        }
        Ok(acc.unwrap_or_else(|| Ideal::zero(self.sub.clone())))
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }
}

/// `K_i(I)` from the degreewise definition, generated in degrees `≤ max_degree - i`.
pub fn pei_oracle<F: Field>(ideal: &Ideal<F>, i: u32, max_degree: u32) -> Result<PeiLevel<F>> {
    let data = DegreewisePei::compute(ideal, max_degree, BasisSource::NormalForms)?;
    let ideal = data.to_ideal(i)?;
    Ok(PeiLevel { level: i, unit: ideal.is_unit(), ideal, source: PeiSource::DegreewiseOracle })
}

/// `dim K_i(I)_e` read from an ideal of `S_1`.
fn dim_component<F: Field>(k: &Ideal<F>, e: u32) -> usize {
    let total = crate::poly::count_monomials(k.ring().nvars(), e);
    total - k.hilbert_function(e) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelComparison {
    pub level: u32,
    /// `(e, dim from the rule, dim from the oracle)` for `e + level ≤ max_degree`.
    pub dims: Vec<(u32, usize, usize)>,
    /// Every rule generator (shifted by `x_0`) lies in the oracle's `I_m`.
    pub rule_in_oracle: bool,
    pub agree: bool,
}

/// Degreewise comparison of the Gröbner rule against the oracle for levels `0..=max_level`.
pub fn compare_with_oracle<F: Field>(ideal: &Ideal<F>, max_level: u32, oracle: &DegreewisePei<F>) -> Result<Vec<LevelComparison>> {
    let ring = ideal.ring();
    let gb = ideal.groebner_basis_in(MonomialOrder::Deglex);
    let x0 = ring.var(0);
    let mut out = Vec::new();
    for i in 0..=max_level {
        let rule = partial_elim_ideal(ideal, i)?;
        let mut dims = Vec::new();
        for e in 0..=oracle.max_degree().saturating_sub(i) {
            dims.push((e, dim_component(&rule.ideal, e), oracle.dim_level(i, e)));
        }
        let mut rule_in_oracle = true;
        for f in gb.polys() {
            let d0 = u32::from(ring.d0(f)?);
            let deg = f.degree().unwrap_or(0);
            if d0 <= i && deg + (i - d0) <= oracle.max_degree() {
                let shifted = ring.mul(&ring.pow(&x0, i - d0), f);
                rule_in_oracle &= oracle.ideal_contains(&shifted);
            }
        }
        let agree = rule_in_oracle && dims.iter().all(|(_, a, b)| a == b);
        out.push(LevelComparison { level: i, dims, rule_in_oracle, agree });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeiSequenceRow {
    pub m: u32,
    pub tilde_i: usize,
    pub tilde_prev: usize,
    /// `dim K_i(I)_{m-i}` from the Gröbner rule.
    pub level: usize,
}

impl PeiSequenceRow {
    pub fn residual(&self) -> i64 {
        self.tilde_i as i64 - self.tilde_prev as i64 - self.level as i64
    }
}

/// `dim K̃_i(I)_m - dim K̃_{i-1}(I)_m = dim K_i(I)_{m-i}` for `m ≤ max_degree`.
pub fn verify_pei_sequence<F: Field>(ideal: &Ideal<F>, i: u32, max_degree: u32) -> Result<Vec<PeiSequenceRow>> {
    if i == 0 {
        return Err(Error::Range("the sequence starts at level 1".into()));
    }
    let oracle = DegreewisePei::compute(ideal, max_degree, BasisSource::NormalForms)?;
    let rule = partial_elim_ideal(ideal, i)?;
    Ok((0..=max_degree)
        .map(|m| PeiSequenceRow {
            m,
            tilde_i: oracle.dim_tilde(i, m),
            tilde_prev: oracle.dim_tilde(i - 1, m),
            level: if m >= i { dim_component(&rule.ideal, m - i) } else { 0 },
        })
        .collect())
}

/// `Z_i`: the saturation of `K_i(I)`. Describes the locus set-theoretically
/// only; no radical is taken.
#[derive(Clone, Debug)]
pub struct MultipleLocus<F: Field> {
    pub level: u32,
    pub ideal: Ideal<F>,
    pub unit: bool,
    pub set_theoretic_only: bool,
}

pub fn multiple_locus<F: Field>(ideal: &Ideal<F>, i: u32) -> Result<MultipleLocus<F>> {
    let k = partial_elim_ideal(ideal, i)?;
    let sat = if k.unit { k.ideal } else { saturate_irrelevant(&k.ideal, INTERNAL_SEED)? };
    Ok(MultipleLocus { level: i, unit: sat.is_unit(), ideal: sat, set_theoretic_only: true })
}

/// Largest degree of a minimal generator; `0` for the unit ideal, `None` for zero.
pub fn max_generator_degree<F: Field>(k: &Ideal<F>) -> Option<u32> {
    if k.is_unit() {
        return Some(0);
    }
    k.generator_degrees().keys().next_back().copied()
}

#[derive(Clone, Debug)]
pub struct Prop38Report {
    pub d: u32,
    pub ndp: NdpReport,
    /// Maximal generator degree of `K_{d-1}(I)`; the claim is `≤ 1`.
    pub top: Option<u32>,
    /// Maximal generator degree of `K_{d-2}(I)` when `d ≥ 2`; the claim is `≤ 3`.
    pub next: Option<Option<u32>>,
    pub status: Status,
}

/// Generation degrees of the top partial elimination ideals under `N_{d,2}`.
pub fn check_prop38<F: Field>(ideal: &Ideal<F>, d: u32) -> Result<Prop38Report> {
    check_setting(ideal)?;
    if d == 0 {
        return Err(Error::Range("d must be positive".into()));
    }
    let table = betti_table(ideal, 0, 2)?;
    let ndp = check_ndp(&table, d, 2);
    if ndp.status != Status::Pass {
        return Err(Error::Hypothesis(ndp.to_string()));
    }
    let top = max_generator_degree(&partial_elim_ideal(ideal, d - 1)?.ideal);
    let next = if d >= 2 { Some(max_generator_degree(&partial_elim_ideal(ideal, d - 2)?.ideal)) } else { None };
    let ok_top = top.is_none_or(|g| g <= 1);
    let ok_next = next.flatten().is_none_or(|g| g <= 3);
    let status = if ok_top && ok_next { Status::Pass } else { Status::Fail };
    Ok(Prop38Report { d, ndp, top, next, status })
}
