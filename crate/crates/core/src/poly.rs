//! Monomials, monomial orders, polynomial rings and their text format.
//!
//! A [`Ring`] fixes the field, the variable names (leftmost greatest) and a
//! [`MonomialOrder`]. Polynomials are plain term lists kept strictly
//! decreasing in the order of the ring they were built in; arithmetic goes
//! through the ring.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::linalg::ExactMatrix;

pub type Exps = SmallVec<[u16; 16]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("a ring needs at least one variable")]
    NoVariables,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("linear change of coordinates is singular")]
    Singular,
    #[error("operation requires the {expected} order, ring uses {found}")]
    Order { expected: MonomialOrder, found: MonomialOrder },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Exps,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.deg += 1;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Some(Monomial { deg: other.deg - self.deg, exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

/// All monomials of degree `d` in `n` variables, in decreasing lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Monomial>, d: u32) {
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(Monomial { deg: d, exps: cur.clone() });
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(n, i + 1, left - e, cur, out, d);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur: Exps = SmallVec::from_elem(0, n);
    rec(n, 0, d, &mut cur, &mut out, d);
    out
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: u32) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(d as usize + n - 1, n - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Monomial orders. The first three are user-facing; the block orders are
/// used internally for elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Deglex,
    Degrevlex,
    Lex,
    /// Total degree, then degree in the first `k` variables, then degrevlex.
    /// Eliminates the first `k` variables from homogeneous ideals.
    GradedElim(usize),
    /// Degrevlex on the first `k` variables, ties broken by degrevlex on the
    /// rest. Eliminates the first `k` variables from arbitrary ideals.
    BlockElim(usize),
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Deglex => write!(f, "deglex"),
            MonomialOrder::Degrevlex => write!(f, "degrevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GradedElim(k) => write!(f, "graded-elim({k})"),
            MonomialOrder::BlockElim(k) => write!(f, "block-elim({k})"),
        }
    }
}

impl FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deglex" => Ok(MonomialOrder::Deglex),
            "degrevlex" => Ok(MonomialOrder::Degrevlex),
            "lex" => Ok(MonomialOrder::Lex),
            other => Err(format!("unknown order `{other}`")),
        }
    }
}

fn revlex_tail(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn block_degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Deglex => a.deg.cmp(&b.deg).then_with(|| a.exps.cmp(&b.exps)),
            MonomialOrder::Degrevlex => a.deg.cmp(&b.deg).then_with(|| revlex_tail(&a.exps, &b.exps)),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GradedElim(k) => a
                .deg
                .cmp(&b.deg)
                .then_with(|| block_degree(&a.exps[..k]).cmp(&block_degree(&b.exps[..k])))
                .then_with(|| revlex_tail(&a.exps, &b.exps)),
            MonomialOrder::BlockElim(k) => {
                let (a1, a2) = a.exps.split_at(k);
                let (b1, b2) = b.exps.split_at(k);
                block_degree(a1)
                    .cmp(&block_degree(b1))
                    .then_with(|| revlex_tail(a1, b1))
                    .then_with(|| block_degree(a2).cmp(&block_degree(b2)))
                    .then_with(|| revlex_tail(a2, b2))
            }
        }
    }

    /// Whether the order refines total degree.
    pub fn is_graded(&self) -> bool {
        !matches!(self, MonomialOrder::Lex | MonomialOrder::BlockElim(_))
    }
}

/// A polynomial: terms strictly decreasing in the order of its ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }
    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn lead(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }
    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }
    pub fn lead_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.deg).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.deg == w[1].0.deg)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    /// Build from terms already strictly decreasing with nonzero coefficients.
    pub fn from_sorted_terms(terms: Vec<(Monomial, F::Elem)>) -> Self {
        Polynomial { terms }
    }

    /// Largest exponent of variable `v` over all terms.
    pub fn max_exp(&self, v: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exps[v]).max().unwrap_or(0)
    }
}

/// A polynomial ring `k[x_0, ..., x_n]` with a monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<F: Field> Ring<F> {
    pub fn new(field: F, vars: Vec<String>, order: MonomialOrder) -> Result<Self, PolyError> {
        if vars.is_empty() {
            return Err(PolyError::NoVariables);
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(PolyError::BadVariableName(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Ring { field, vars, order })
    }

    /// Ring with variables `prefix0 .. prefix{n-1}`.
    pub fn with_prefix(field: F, prefix: &str, n: usize, order: MonomialOrder) -> Self {
        let vars = (0..n).map(|i| format!("{prefix}{i}")).collect();
        Ring::new(field, vars, order).expect("generated names are valid")
    }

    /// Ring with variables `x{first} .. x{first+n-1}`.
    pub fn with_offset(field: F, first: usize, n: usize, order: MonomialOrder) -> Self {
        let vars = (first..first + n).map(|i| format!("x{i}")).collect();
        Ring::new(field, vars, order).expect("generated names are valid")
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn order(&self) -> MonomialOrder {
        self.order
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        Ring { field: self.field.clone(), vars: self.vars.clone(), order }
    }

    /// The coordinate subring on the variables `t..`.
    pub fn subring(&self, t: usize) -> Self {
        Ring { field: self.field.clone(), vars: self.vars[t..].to_vec(), order: self.order }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b)
    }

    /// Degree-`d` monomials sorted decreasing in this ring's order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut ms = monomials_of_degree(self.nvars(), d);
        ms.sort_by(|a, b| self.cmp(b, a));
        ms
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial::zero()
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn one(&self) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> Polynomial<F> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        self.term(Monomial::var(self.nvars(), i), self.field.one())
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear_form(&self, coeffs: &[F::Elem]) -> Polynomial<F> {
        let n = self.nvars();
        self.from_terms(coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())).collect())
    }

    /// Normalize arbitrary terms: sort, merge equal monomials, drop zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        Polynomial { terms: out }
    }

    /// Re-sort a polynomial built in a ring with another order.
    pub fn reorder(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    /// `f + c * m * g`.
    pub fn add_scaled(&self, f: &Polynomial<F>, c: &F::Elem, m: &Monomial, g: &Polynomial<F>) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return f.clone();
        }
        Polynomial { terms: self.merge_scaled(&f.terms, c, m, &g.terms) }
    }

    /// Term-list form of `f + c * m * g` for sorted term slices.
    pub fn merge_scaled(
        &self,
        f: &[(Monomial, F::Elem)],
        c: &F::Elem,
        m: &Monomial,
        g: &[(Monomial, F::Elem)],
    ) -> Vec<(Monomial, F::Elem)> {
        let fld = &self.field;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut gi = g.iter().map(|(gm, gc)| (gm.mul(m), fld.mul(c, gc))).peekable();
        while i < f.len() {
            let Some((gm, _)) = gi.peek() else { break };
            match self.cmp(&f[i].0, gm) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(gi.next().expect("peeked")),
                Ordering::Equal => {
                    let (gm, gc) = gi.next().expect("peeked");
                    let s = fld.add(&f[i].1, &gc);
                    if !fld.is_zero(&s) {
                        out.push((gm, s));
                    }
                    i += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        out.extend(gi);
        out
    }

    /// Exact quotient `f / g`, or `None` when `g` does not divide `f`.
    pub fn div_exact(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Option<Polynomial<F>> {
        let (gm, gc) = g.lead()?;
        let ginv = self.field.inv(gc).expect("nonzero lead");
        let mut q: Vec<(Monomial, F::Elem)> = Vec::new();
        let mut r = f.terms.clone();
        while let Some((rm, rc)) = r.first() {
            let qm = gm.quotient_of(rm)?;
            let qc = self.field.mul(rc, &ginv);
            r = self.merge_scaled(&r[1..], &self.field.neg(&qc), &qm, &g.terms[1..]);
            q.push((qm, qc));
        }
        Some(Polynomial { terms: q })
    }

    /// Split into homogeneous components, highest degree first.
    pub fn homogeneous_components(&self, f: &Polynomial<F>) -> Vec<Polynomial<F>> {
        let mut degs: Vec<u32> = f.terms.iter().map(|t| t.0.deg).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        degs.dedup();
        degs.into_iter().map(|d| self.homogeneous_part(f, d)).collect()
    }

    pub fn add(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        self.add_scaled(f, &self.field.one(), &Monomial::one(self.nvars()), g)
    }

    pub fn sub(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        self.add_scaled(f, &self.field.neg(&self.field.one()), &Monomial::one(self.nvars()), g)
    }

    pub fn neg(&self, f: &Polynomial<F>) -> Polynomial<F> {
        Polynomial { terms: f.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect() }
    }

    pub fn scale(&self, f: &Polynomial<F>, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial { terms: f.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(a, c))).collect() }
    }

    /// `c * m * f`; order is preserved because monomial orders are multiplicative.
    pub fn mul_term(&self, f: &Polynomial<F>, c: &F::Elem, m: &Monomial) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial { terms: f.terms.iter().map(|(fm, a)| (fm.mul(m), self.field.mul(a, c))).collect() }
    }

    pub fn mul(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        let (small, big) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        let mut acc: FxHashMap<Monomial, F::Elem> = FxHashMap::default();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                let m = m1.mul(m2);
                let p = self.field.mul(c1, c2);
                acc.entry(m).and_modify(|c| *c = self.field.add(c, &p)).or_insert(p);
            }
        }
        self.from_terms(acc.into_iter().collect())
    }

    pub fn pow(&self, f: &Polynomial<F>, e: u32) -> Polynomial<F> {
        let mut acc = self.one();
        let mut base = f.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self, f: &Polynomial<F>) -> Polynomial<F> {
        match f.lead_coeff() {
            None => Polynomial::zero(),
            Some(c) if self.field.is_one(c) => f.clone(),
            Some(c) => self.scale(f, &self.field.inv(c).expect("nonzero")),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, f: &Polynomial<F>, m: &Monomial) -> Option<Polynomial<F>> {
        let terms = f.terms.iter().map(|(fm, c)| m.quotient_of(fm).map(|q| (q, c.clone()))).collect::<Option<Vec<_>>>()?;
        Some(Polynomial { terms })
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, f: &Polynomial<F>, d: u32) -> Polynomial<F> {
        Polynomial { terms: f.terms.iter().filter(|t| t.0.deg == d).cloned().collect() }
    }

    pub fn evaluate(&self, f: &Polynomial<F>, point: &[F::Elem]) -> F::Elem {
        let fld = &self.field;
        f.terms.iter().fold(fld.zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    v = fld.mul(&v, &point[i]);
                }
            }
            fld.add(&acc, &v)
        })
    }

    /// Ring homomorphism `x_i ↦ images[i]` into `target`.
    pub fn substitute(&self, f: &Polynomial<F>, images: &[Polynomial<F>], target: &Ring<F>) -> Polynomial<F> {
        assert_eq!(images.len(), self.nvars());
        let mut powers: Vec<Vec<Polynomial<F>>> = vec![vec![target.one()]; self.nvars()];
        let mut acc: FxHashMap<Monomial, F::Elem> = FxHashMap::default();
        for (m, c) in &f.terms {
            let mut prod = target.constant(c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = target.mul(powers[i].last().expect("nonempty"), &images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    prod = target.mul(&prod, &powers[i][e as usize]);
                }
            }
            for (pm, pc) in prod.terms {
                acc.entry(pm).and_modify(|x| *x = target.field.add(x, &pc)).or_insert(pc);
            }
        }
        target.from_terms(acc.into_iter().collect())
    }

    /// Substitute `x_i ↦ Σ_j A[j][i] x_j` (column `i` of `A`); `A` must be invertible.
    pub fn apply_linear_change(&self, f: &Polynomial<F>, a: &ExactMatrix<F>) -> Result<Polynomial<F>, PolyError> {
        let images = self.linear_change_images(a)?;
        Ok(self.substitute(f, &images, self))
    }

    /// The images of the variables under the linear change `A`, after
    /// checking that `A` is square of the right size and invertible.
    pub fn linear_change_images(&self, a: &ExactMatrix<F>) -> Result<Vec<Polynomial<F>>, PolyError> {
        let n = self.nvars();
        if a.rows() != n || a.cols() != n {
            return Err(PolyError::Dimension(format!("{}x{} matrix for {n} variables", a.rows(), a.cols())));
        }
        if a.rank() != n {
            return Err(PolyError::Singular);
        }
        let at = a.transpose();
        Ok((0..n)
            .map(|i| {
                let mut col = vec![self.field.zero(); n];
                for (j, v) in at.row(i) {
                    col[*j as usize] = v.clone();
                }
                self.linear_form(&col)
            })
            .collect())
    }

    /// Move a polynomial into another ring with the same variable count.
    pub fn transfer(&self, f: &Polynomial<F>, target: &Ring<F>) -> Polynomial<F> {
        debug_assert_eq!(self.nvars(), target.nvars());
        target.reorder(f)
    }

    /// Embed a polynomial of the subring on variables `t..` into this ring.
    pub fn embed_from_subring(&self, f: &Polynomial<F>, t: usize) -> Polynomial<F> {
        let n = self.nvars();
        let terms = f
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Exps = SmallVec::from_elem(0, n);
                e[t..].copy_from_slice(&m.exps);
                (Monomial { deg: m.deg, exps: e }, c.clone())
            })
            .collect();
        self.from_terms(terms)
    }

    /// Restrict a polynomial free of `x_0..x_{t-1}` to the subring on `t..`.
    pub fn restrict_to_subring(&self, f: &Polynomial<F>, t: usize, sub: &Ring<F>) -> Option<Polynomial<F>> {
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in &f.terms {
            if m.exps[..t].iter().any(|&e| e > 0) {
                return None;
            }
            terms.push((Monomial::from_exps(&m.exps[t..]), c.clone()));
        }
        Some(sub.from_terms(terms))
    }

    /// Leading power of `x_0`. Requires a deglex or lex ring with `x_0` greatest.
    pub fn d0(&self, f: &Polynomial<F>) -> Result<u16, PolyError> {
        if !matches!(self.order, MonomialOrder::Deglex | MonomialOrder::Lex) {
            return Err(PolyError::Order { expected: MonomialOrder::Deglex, found: self.order });
        }
        f.lead_monomial().map(|m| m.exps[0]).ok_or(PolyError::ZeroPolynomial)
    }

    /// Split `f = x_0^{d} f̄ + (terms of lower x_0-power)` with `d` the
    /// maximal `x_0` exponent; returns `(d, f̄)` with `f̄` in the subring `x_1..`.
    pub fn leading_x0_coefficient(&self, f: &Polynomial<F>, sub: &Ring<F>) -> Result<(u16, Polynomial<F>), PolyError> {
        let d = f.terms.iter().map(|t| t.0.exps[0]).max().ok_or(PolyError::ZeroPolynomial)?;
        let terms = f.terms.iter().filter(|t| t.0.exps[0] == d).map(|(m, c)| (Monomial::from_exps(&m.exps[1..]), c.clone())).collect();
        Ok((d, sub.from_terms(terms)))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, f: &Polynomial<F>) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let fld = &self.field;
        let mut s = String::new();
        for (k, (m, c)) in f.terms.iter().enumerate() {
            let negative = fld.is_negative_repr(c);
            let abs = if negative { fld.neg(c) } else { c.clone() };
            match (k, negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m.is_one() {
                s.push_str(&fld.format_elem(&abs));
            } else if fld.is_one(&abs) {
                s.push_str(&self.format_monomial(m));
            } else {
                s.push_str(&fld.format_elem(&abs));
                s.push('*');
                s.push_str(&self.format_monomial(m));
            }
        }
        s
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial<F>, PolyError> {
        let mut p = Parser { ring: self, src: text, toks: tokenize(text)?, pos: 0 };
        let f = p.expr()?;
        if let Some(t) = p.toks.get(p.pos) {
            return Err(PolyError::Parse { pos: t.pos, msg: format!("unexpected `{}`", t.text(text)) });
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int,
    Ident,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy)]
struct Token {
    kind: Tok,
    pos: usize,
    end: usize,
}

impl Token {
    fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.pos..self.end]
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>, PolyError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // `a/b` is a single rational coefficient token
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'/') {
                    return Err(PolyError::Parse { pos: i, msg: "non-integer coefficient".into() });
                }
                toks.push(Token { kind: Tok::Int, pos: start, end: i });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push(Token { kind: Tok::Ident, pos: start, end: i });
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().expect("in bounds");
                return Err(PolyError::Parse { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        };
        i += 1;
        toks.push(Token { kind, pos: start, end: i });
    }
    Ok(toks)
}

struct Parser<'a, F: Field> {
    ring: &'a Ring<F>,
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.kind)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.pos)
    }

    fn expr(&mut self) -> Result<Polynomial<F>, PolyError> {
        let ring = self.ring;
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { ring.neg(&first) } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = ring.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>, PolyError> {
        let base = self.base()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.here();
        match self.toks.get(self.pos) {
            Some(t) if t.kind == Tok::Int => {
                let e: u32 = t
                    .text(self.src)
                    .parse()
                    .ok()
                    .filter(|&e| e <= u16::MAX as u32)
                    .ok_or(PolyError::Parse { pos, msg: "exponent out of range".into() })?;
                self.pos += 1;
                Ok(self.ring.pow(&base, e))
            }
            _ => Err(PolyError::Parse { pos, msg: "expected a non-negative integer exponent".into() }),
        }
    }

    fn base(&mut self) -> Result<Polynomial<F>, PolyError> {
        let pos = self.here();
        let Some(tok) = self.toks.get(self.pos).copied() else {
            return Err(PolyError::Parse { pos, msg: "unexpected end of input".into() });
        };
        match tok.kind {
            Tok::Int => {
                self.pos += 1;
                let c = self.ring.field.parse_elem(tok.text(self.src))?;
                Ok(self.ring.constant(c))
            }
            Tok::Ident => {
                self.pos += 1;
                let name = tok.text(self.src);
                let i = self.ring.var_index(name).ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), pos })?;
                Ok(self.ring.var(i))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(PolyError::Parse { pos: self.here(), msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(PolyError::Parse { pos, msg: format!("unexpected `{}`", tok.text(self.src)) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use proptest::prelude::*;

    fn ring(n: usize, order: MonomialOrder) -> Ring<RationalField> {
        Ring::with_prefix(RationalField, "x", n, order)
    }

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn parse_examples() {
        let r = ring(3, MonomialOrder::Deglex);
        let f = r.parse("x0*x2 - x1^2").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.degree(), Some(2));
        assert!(r.parse("0").unwrap().is_zero());
        let g = r.parse("(x0 + x1)^2").unwrap();
        assert_eq!(g, r.parse("x0^2 + 2*x0*x1 + x1^2").unwrap());
        assert_eq!(r.format(&g), "x0^2 + 2*x0*x1 + x1^2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let r = ring(3, MonomialOrder::Deglex);
        assert_eq!(r.parse("x0 + y"), Err(PolyError::UnknownVariable { name: "y".into(), pos: 5 }));
        assert!(matches!(r.parse("1.5*x0"), Err(PolyError::Parse { pos: 1, .. })));
        assert!(matches!(r.parse("x0 x1"), Err(PolyError::Parse { pos: 3, .. })));
        assert!(matches!(r.parse("(x0"), Err(PolyError::Parse { pos: 3, .. })));
        assert!(matches!(r.parse("x0^"), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn order_examples() {
        let dl = MonomialOrder::Deglex;
        assert_eq!(dl.compare(&m(&[1, 1, 0]), &m(&[0, 2, 0])), Ordering::Greater);
        assert_eq!(dl.compare(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
        let drl = MonomialOrder::Degrevlex;
        assert_eq!(drl.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn d0_examples() {
        let r = ring(4, MonomialOrder::Deglex);
        assert_eq!(r.d0(&r.parse("x0^2*x3 + x0*x1^2").unwrap()), Ok(2));
        assert_eq!(r.d0(&r.parse("x1*x2 - x3^2").unwrap()), Ok(0));
        assert_eq!(r.d0(&r.parse("(x0 + x1)*(x0 - x2)").unwrap()), Ok(2));
        assert_eq!(r.d0(&r.zero()), Err(PolyError::ZeroPolynomial));
        let rr = r.with_order(MonomialOrder::Degrevlex);
        assert!(matches!(rr.d0(&rr.var(0)), Err(PolyError::Order { .. })));
    }

    #[test]
    fn linear_change_examples() {
        let q = RationalField;
        let r = ring(2, MonomialOrder::Deglex);
        let id = ExactMatrix::identity(q, 2);
        let f = r.parse("x0^2 - 3*x0*x1").unwrap();
        assert_eq!(r.apply_linear_change(&f, &id).unwrap(), f);
        let swap = ExactMatrix::from_dense(q, &[vec![q.from_i64(0), q.from_i64(1)], vec![q.from_i64(1), q.from_i64(0)]]);
        assert_eq!(r.apply_linear_change(&r.parse("x0^2").unwrap(), &swap).unwrap(), r.parse("x1^2").unwrap());
        let a = ExactMatrix::from_dense(q, &[vec![q.from_i64(1), q.from_i64(1)], vec![q.from_i64(0), q.from_i64(1)]]);
        assert_eq!(r.apply_linear_change(&r.parse("x1^2").unwrap(), &a).unwrap(), r.parse("x0^2 + 2*x0*x1 + x1^2").unwrap());
        let singular = ExactMatrix::from_dense(q, &[vec![q.from_i64(1), q.from_i64(1)], vec![q.from_i64(1), q.from_i64(1)]]);
        assert_eq!(r.apply_linear_change(&f, &singular), Err(PolyError::Singular));
    }

    #[test]
    fn prime_field_printing_uses_signed_residues() {
        let f = PrimeField::new(7).unwrap();
        let r = Ring::with_prefix(f, "x", 2, MonomialOrder::Deglex);
        let p = r.parse("x0 - 2*x1").unwrap();
        assert_eq!(r.format(&p), "x0 - 2*x1");
        assert_eq!(r.parse(&r.format(&p)).unwrap(), p);
    }

    #[test]
    fn ring_rejects_bad_descriptors() {
        assert_eq!(Ring::new(RationalField, vec![], MonomialOrder::Lex), Err(PolyError::NoVariables));
        assert!(matches!(Ring::new(RationalField, vec!["a".into(), "a".into()], MonomialOrder::Lex), Err(PolyError::DuplicateVariable(_))));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(count_monomials(9, 3), 165);
        assert_eq!(monomials_of_degree(9, 3).len(), 165);
        let r = ring(3, MonomialOrder::Degrevlex);
        let ms = r.monomials_of_degree(3);
        assert!(ms.windows(2).all(|w| r.cmp(&w[0], &w[1]) == Ordering::Greater));
    }

    const ORDERS: [MonomialOrder; 5] =
        [MonomialOrder::Deglex, MonomialOrder::Degrevlex, MonomialOrder::Lex, MonomialOrder::GradedElim(2), MonomialOrder::BlockElim(1)];

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..4, 4).prop_map(|e| Monomial::from_exps(&e))
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u16..3, n), -20i64..20), 0..6)
    }

    fn build(r: &Ring<RationalField>, t: &[(Vec<u16>, i64)]) -> Polynomial<RationalField> {
        r.from_terms(t.iter().map(|(e, c)| (Monomial::from_exps(e), r.field().from_i64(*c))).collect())
    }

    fn homogenize(t: &[(Vec<u16>, i64)], d: u16) -> Vec<(Vec<u16>, i64)> {
        t.iter()
            .map(|(e, c)| {
                let s: u16 = e.iter().sum();
                let mut e = e.clone();
                let last = e.len() - 1;
                e[last] += d.saturating_sub(s);
                let s: u16 = e.iter().sum();
                if s > d {
                    e = vec![0; e.len()];
                    e[0] = d;
                }
                (e, *c)
            })
            .collect()
    }

    proptest! {
        #[test]
        fn order_axioms(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            for o in ORDERS {
                prop_assert_eq!(o.compare(&a, &b), o.compare(&b, &a).reverse());
                prop_assert_eq!(o.compare(&a, &b) == Ordering::Equal, a == b);
                if o.compare(&a, &b) == Ordering::Greater {
                    prop_assert_eq!(o.compare(&a.mul(&c), &b.mul(&c)), Ordering::Greater);
                    if o.compare(&b, &c) == Ordering::Greater {
                        prop_assert_eq!(o.compare(&a, &c), Ordering::Greater);
                    }
                }
                prop_assert_ne!(o.compare(&Monomial::one(4), &a), Ordering::Greater);
            }
        }

        #[test]
        fn print_parse_roundtrip(t in arb_poly(3)) {
            let r = ring(3, MonomialOrder::Deglex);
            let f = build(&r, &t);
            prop_assert_eq!(r.parse(&r.format(&f)).unwrap(), f.clone());
            let fp = Ring::with_prefix(PrimeField::new(32003).unwrap(), "x", 3, MonomialOrder::Degrevlex);
            let g = fp.from_terms(t.iter().map(|(e, c)| (Monomial::from_exps(e), fp.field().from_i64(*c))).collect());
            prop_assert_eq!(fp.parse(&fp.format(&g)).unwrap(), g);
        }

        #[test]
        fn d0_is_additive(a in arb_poly(3), b in arb_poly(3)) {
            let r = ring(3, MonomialOrder::Deglex);
            let f = build(&r, &homogenize(&a, 2));
            let g = build(&r, &homogenize(&b, 3));
            prop_assume!(!f.is_zero() && !g.is_zero());
            let fg = r.mul(&f, &g);
            prop_assert_eq!(r.d0(&fg).unwrap(), r.d0(&f).unwrap() + r.d0(&g).unwrap());
            prop_assert_eq!(r.d0(&f).unwrap(), f.max_exp(0));
        }

        #[test]
        fn linear_change_is_multiplicative(a in arb_poly(3), b in arb_poly(3), seed in 0u64..1000) {
            use rand::SeedableRng;
            let q = RationalField;
            let r = ring(3, MonomialOrder::Degrevlex);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dense: Vec<Vec<_>> = (0..3).map(|_| (0..3).map(|_| q.random(&mut rng)).collect()).collect();
            let mat = ExactMatrix::from_dense(q, &dense);
            prop_assume!(mat.rank() == 3);
            let f = build(&r, &a);
            let g = build(&r, &b);
            let lhs = r.apply_linear_change(&r.mul(&f, &g), &mat).unwrap();
            let rhs = r.mul(&r.apply_linear_change(&f, &mat).unwrap(), &r.apply_linear_change(&g, &mat).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
