//! Ideals of rational normal curves, Veronese varieties, rational normal
//! scrolls and secant varieties of rational normal curves, together with
//! point sampling and stratified random projection centers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::poly::{monomials_of_degree, MonomialOrder, Polynomial, Ring};

/// Attempts allowed for any rejection-sampled choice.
pub const GENERICITY_BUDGET: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Rational normal curve of degree `d` in `P^d`.
    Rnc(u32),
    /// `d`-uple embedding of `P^n`.
    Veronese { n: u32, d: u32 },
    /// Rational normal scroll `S(a_1, …, a_k)`, all `a_i ≥ 1`.
    Scroll(Vec<u32>),
    /// `ℓ`-secant variety of the rational normal curve of degree `d`, cut out
    /// by the `(ℓ+1)`-minors of the catalecticant matrix.
    CatalecticantSecant { d: u32, l: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    pub family: Family,
}

impl VarietySpec {
    pub fn rnc(d: u32) -> Self {
        VarietySpec { family: Family::Rnc(d) }
    }
    pub fn veronese(n: u32, d: u32) -> Self {
        VarietySpec { family: Family::Veronese { n, d } }
    }
    pub fn scroll(a: &[u32]) -> Self {
        VarietySpec { family: Family::Scroll(a.to_vec()) }
    }
    pub fn catalecticant_secant(d: u32, l: u32) -> Self {
        VarietySpec { family: Family::CatalecticantSecant { d, l } }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Range(msg));
        match &self.family {
            Family::Rnc(d) if *d < 1 => bad("rational normal curve needs d ≥ 1".into()),
            Family::Veronese { n, d } if *n < 1 || *d < 1 => bad("Veronese needs n, d ≥ 1".into()),
            Family::Scroll(a) if a.is_empty() || a.iter().any(|&x| x < 1) => {
                bad("scroll type must be a nonempty list of positive integers".into())
            }
            Family::CatalecticantSecant { d, l } if *l < 1 || l + 1 > d - l + 1 || *d < 2 => {
                bad(format!("{}-minors do not fit a catalecticant matrix of P^{d}", l + 1))
            }
            _ => Ok(()),
        }
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        match &self.family {
            Family::Rnc(d) => *d as usize,
            Family::Veronese { n, d } => count_monomials(*n as usize + 1, *d) - 1,
            Family::Scroll(a) => a.iter().map(|&x| x as usize).sum::<usize>() + a.len() - 1,
            Family::CatalecticantSecant { d, .. } => *d as usize,
        }
    }

    pub fn nvars(&self) -> usize {
        self.ambient_dim() + 1
    }

    /// Number of free parameters of [`point_at`](Self::point_at).
    pub fn parameter_count(&self) -> usize {
        match &self.family {
            Family::Rnc(_) => 2,
            Family::Veronese { n, .. } => *n as usize + 1,
            Family::Scroll(a) => 2 + a.len(),
            Family::CatalecticantSecant { l, .. } => 3 * *l as usize,
        }
    }

    pub fn ring<F: Field>(&self, field: F) -> Ring<F> {
        Ring::with_prefix(field, "x", self.nvars(), MonomialOrder::Deglex)
    }

    /// Index of the first coordinate of each scroll block.
    fn block_starts(a: &[u32]) -> Vec<usize> {
        let mut starts = Vec::with_capacity(a.len());
        let mut at = 0;
        for &x in a {
            starts.push(at);
            at += x as usize + 1;
        }
        starts
    }

    /// Point of `X` at the given parameter values.
    ///
    /// RNC: `(s, t)`. Veronese: a point of `P^n`. Scroll: `(s, t, u_1, …, u_k)`,
    /// block `i` carrying `u_i s^{a_i-j} t^j`. Secant: `ℓ` triples
    /// `(c, s, t)` summing `c · ν_d(s, t)`.
    pub fn point_at<F: Field>(&self, field: &F, params: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if params.len() != self.parameter_count() {
            return Err(Error::Range(format!("expected {} parameters, got {}", self.parameter_count(), params.len())));
        }
        let pow = |x: &F::Elem, e: u32| (0..e).fold(field.one(), |acc, _| field.mul(&acc, x));
        let rnc = |d: u32, s: &F::Elem, t: &F::Elem| -> Vec<F::Elem> { (0..=d).map(|j| field.mul(&pow(s, d - j), &pow(t, j))).collect() };
        Ok(match &self.family {
            Family::Rnc(d) => rnc(*d, &params[0], &params[1]),
            Family::Veronese { n, d } => monomials_of_degree(*n as usize + 1, *d)
                .iter()
                .map(|m| m.exps().iter().zip(params).fold(field.one(), |acc, (&e, x)| field.mul(&acc, &pow(x, e.into()))))
                .collect(),
            Family::Scroll(a) => {
                let (s, t) = (&params[0], &params[1]);
                let mut out = Vec::with_capacity(self.nvars());
                for (i, &ai) in a.iter().enumerate() {
                    out.extend(rnc(ai, s, t).into_iter().map(|v| field.mul(&v, &params[2 + i])));
                }
                out
            }
            Family::CatalecticantSecant { d, l } => {
                let mut out = vec![field.zero(); *d as usize + 1];
                for k in 0..*l as usize {
                    let (c, s, t) = (&params[3 * k], &params[3 * k + 1], &params[3 * k + 2]);
                    for (o, v) in out.iter_mut().zip(rnc(*d, s, t)) {
                        *o = field.add(o, &field.mul(c, &v));
                    }
                }
                out
            }
        })
    }

    /// A random point of `X`, redrawn while it is the zero vector.
    pub fn sample_point<F: Field, R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> Result<Vec<F::Elem>> {
        for _ in 0..GENERICITY_BUDGET {
            let params: Vec<F::Elem> = (0..self.parameter_count()).map(|_| field.random(rng)).collect();
            let p = self.point_at(field, &params)?;
            if p.iter().any(|c| !field.is_zero(c)) {
                return Ok(p);
            }
        }
        Err(Error::Genericity { what: "nonzero point of the variety".into(), attempts: GENERICITY_BUDGET })
    }

    /// Points spanning a named linear subspace of a scroll.
    pub fn named_points<F: Field, R: Rng + ?Sized>(&self, field: &F, part: &SpanPart, rng: &mut R) -> Result<Vec<Vec<F::Elem>>> {
        let unit = |k: usize| -> Vec<F::Elem> {
            let mut v = vec![field.zero(); self.nvars()];
            v[k] = field.one();
            v
        };
        match (part, &self.family) {
            (SpanPart::Sampled(k), _) => (0..*k).map(|_| self.sample_point(field, rng)).collect(),
            (SpanPart::Directrix(i), Family::Scroll(a)) if *i < a.len() => {
                let start = Self::block_starts(a)[*i];
                Ok((start..=start + a[*i] as usize).map(unit).collect())
            }
            (SpanPart::SubScroll(blocks), Family::Scroll(a)) if blocks.iter().all(|&b| b < a.len()) => {
                let starts = Self::block_starts(a);
                Ok(blocks.iter().flat_map(|&b| (starts[b]..=starts[b] + a[b] as usize).map(unit)).collect())
            }
            (SpanPart::Fiber, Family::Scroll(a)) => {
                let s = field.random(rng);
                let t = field.random(rng);
                (0..a.len())
                    .map(|i| {
                        let mut params = vec![s.clone(), t.clone()];
                        params.extend((0..a.len()).map(|j| if j == i { field.one() } else { field.zero() }));
                        self.point_at(field, &params)
                    })
                    .collect()
            }
            _ => Err(Error::Range(format!("{part} is not a subvariety of {self}"))),
        }
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Rnc(d) => write!(f, "RNC({d})"),
            Family::Veronese { n, d } => write!(f, "VERONESE({n},{d})"),
            Family::Scroll(a) => {
                let parts: Vec<String> = a.iter().map(u32::to_string).collect();
                write!(f, "SCROLL({})", parts.join(","))
            }
            Family::CatalecticantSecant { d, l } => write!(f, "CATALECTICANT_SECANT({d},{l})"),
        }
    }
}

fn parse_list<T: FromStr>(text: &str, sep: char) -> Option<Vec<T>> {
    text.split(sep).map(|w| w.trim().parse().ok()).collect()
}

/// `rnc:D`, `veronese:N,D`, `scroll:A1,…,Ak` or `secant:D,L`.
impl FromStr for VarietySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Range(format!("cannot parse variety `{text}` (expected rnc:D, veronese:N,D, scroll:A,B,.. or secant:D,L)"));
        let (kind, args) = text.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u32> = parse_list(args, ',').ok_or_else(bad)?;
        let spec = match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("rnc", [d]) => VarietySpec::rnc(*d),
            ("veronese", [n, d]) => VarietySpec::veronese(*n, *d),
            ("scroll", a) => VarietySpec::scroll(a),
            ("secant", [d, l]) => VarietySpec::catalecticant_secant(*d, *l),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn count_monomials(nvars: usize, d: u32) -> usize {
    crate::poly::count_monomials(nvars, d)
}

/// Determinant of a small square matrix of polynomials by cofactor expansion.
fn determinant<F: Field>(ring: &Ring<F>, m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => ring.sub(&ring.mul(&m[0][0], &m[1][1]), &ring.mul(&m[0][1], &m[1][0])),
        n => {
            let mut acc = Polynomial::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial<F>>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect()).collect();
                let term = ring.mul(&m[0][c], &determinant(ring, &minor));
                acc = if c % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::koszul::subsets(n, k)
}

/// All `k`-minors of a matrix of polynomials, skipping zeros.
fn minors<F: Field>(ring: &Ring<F>, m: &[Vec<Polynomial<F>>], k: usize) -> Vec<Polynomial<F>> {
    let rows = choose(m.len(), k);
    let cols = choose(m[0].len(), k);
    let mut out = Vec::new();
    for r in &rows {
        for c in &cols {
            let sub: Vec<Vec<Polynomial<F>>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j].clone()).collect()).collect();
            let det = determinant(ring, &sub);
            if !det.is_zero() {
                out.push(det);
            }
        }
    }
    out
}

/// Defining ideal in `k[x_0, …, x_N]` with the DEGLEX order.
pub fn build_ideal<F: Field>(field: F, spec: &VarietySpec) -> Result<Ideal<F>> {
    spec.validate()?;
    let ring = spec.ring(field);
    let gens = match &spec.family {
        Family::Rnc(d) => {
            let d = *d as usize;
            let m = vec![(0..d).map(|j| ring.var(j)).collect(), (1..=d).map(|j| ring.var(j)).collect()];
            minors(&ring, &m, 2)
        }
        Family::CatalecticantSecant { d, l } => {
            let (rows, cols) = (*l as usize + 1, (*d - *l) as usize + 1);
            let m: Vec<Vec<Polynomial<F>>> = (0..rows).map(|r| (0..cols).map(|c| ring.var(r + c)).collect()).collect();
            minors(&ring, &m, rows)
        }
        Family::Scroll(a) => {
            let starts = VarietySpec::block_starts(a);
            let mut top = Vec::new();
            let mut bottom = Vec::new();
            for (&s, &ai) in starts.iter().zip(a) {
                for j in 0..ai as usize {
                    top.push(ring.var(s + j));
                    bottom.push(ring.var(s + j + 1));
                }
            }
            minors(&ring, &[top, bottom], 2)
        }
        Family::Veronese { n, d } => {
            let monos = monomials_of_degree(*n as usize + 1, *d);
            let mut by_sum: std::collections::BTreeMap<Vec<u16>, Vec<(usize, usize)>> = std::collections::BTreeMap::new();
            for a in 0..monos.len() {
                for b in a..monos.len() {
                    let key = monos[a].mul(&monos[b]).exps().to_vec();
                    by_sum.entry(key).or_default().push((a, b));
                }
            }
            let quad = |(a, b): (usize, usize)| ring.mul(&ring.var(a), &ring.var(b));
            by_sum.values().flat_map(|pairs| pairs[1..].iter().map(|&p| ring.sub(&quad(pairs[0]), &quad(p))).collect::<Vec<_>>()).collect()
        }
    };
    Ideal::new(ring, gens)
}

/// A named piece of a span for [`Stratum::SpanOf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanPart {
    /// `k` random points of `X`.
    Sampled(usize),
    /// Span of the `i`-th block of a scroll (the directrix curve of `O(a_i)`).
    Directrix(usize),
    /// A random fiber `P^{k-1}` of a scroll over `P^1`.
    Fiber,
    /// The sub-scroll spanned by the listed blocks.
    SubScroll(Vec<usize>),
}

impl fmt::Display for SpanPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanPart::Sampled(k) => write!(f, "points:{k}"),
            SpanPart::Directrix(i) => write!(f, "directrix:{i}"),
            SpanPart::Fiber => write!(f, "fiber"),
            SpanPart::SubScroll(b) => {
                let parts: Vec<String> = b.iter().map(usize::to_string).collect();
                write!(f, "subscroll:{}", parts.join("+"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stratum {
    GenericOuter,
    /// A point on the line through two random points of `X`.
    Secant,
    SpanOf(Vec<SpanPart>),
    /// A random point of `X` itself (inner projection).
    OnX,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::GenericOuter => f.write_str("generic"),
            Stratum::Secant => f.write_str("secant"),
            Stratum::OnX => f.write_str("on-x"),
            Stratum::SpanOf(parts) => {
                let parts: Vec<String> = parts.iter().map(SpanPart::to_string).collect();
                write!(f, "span:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SpanPart {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Range(format!("cannot parse span part `{text}`"));
        let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "points" => Ok(SpanPart::Sampled(arg.parse().map_err(|_| bad())?)),
            "directrix" => Ok(SpanPart::Directrix(arg.parse().map_err(|_| bad())?)),
            "fiber" if arg.is_empty() => Ok(SpanPart::Fiber),
            "subscroll" => Ok(SpanPart::SubScroll(parse_list(arg, '+').ok_or_else(bad)?)),
            _ => Err(bad()),
        }
    }
}

/// `generic`, `secant`, `on-x`, or `span:PART,PART,…` with parts as printed
/// by [`SpanPart`].
impl FromStr for Stratum {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "generic" => Ok(Stratum::GenericOuter),
            "secant" => Ok(Stratum::Secant),
            "on-x" => Ok(Stratum::OnX),
            _ => match text.strip_prefix("span:") {
                Some(rest) => Ok(Stratum::SpanOf(rest.split(',').map(str::parse).collect::<Result<_>>()?)),
                None => Err(Error::Range(format!("unknown stratum `{text}` (expected generic, secant, on-x or span:...)"))),
            },
        }
    }
}

/// Whether every generator of `ideal` vanishes at `p`.
pub fn lies_on<F: Field>(ideal: &Ideal<F>, p: &[F::Elem]) -> bool {
    let ring = ideal.ring();
    ideal.gens().iter().all(|g| ring.field().is_zero(&ring.evaluate(g, p)))
}

fn random_combination<F: Field, R: Rng + ?Sized>(field: &F, points: &[Vec<F::Elem>], rng: &mut R) -> Vec<F::Elem> {
    let n = points[0].len();
    let mut out = vec![field.zero(); n];
    for p in points {
        let c = field.random(rng);
        for (o, v) in out.iter_mut().zip(p) {
            *o = field.add(o, &field.mul(&c, v));
        }
    }
    out
}

/// A one-point projection center from the requested stratum.
///
/// Draws are rejected while the point is zero or (for every stratum but
/// `OnX`) lies on `X`.
pub fn random_center<F: Field, R: Rng + ?Sized>(
    spec: &VarietySpec,
    ideal: &Ideal<F>,
    stratum: &Stratum,
    rng: &mut R,
) -> Result<Vec<F::Elem>> {
    let field = ideal.ring().field().clone();
    for _ in 0..GENERICITY_BUDGET {
        let q = match stratum {
            Stratum::GenericOuter => (0..spec.nvars()).map(|_| field.random(rng)).collect(),
            Stratum::Secant => {
                let pts = [spec.sample_point(&field, rng)?, spec.sample_point(&field, rng)?];
                random_combination(&field, &pts, rng)
            }
            Stratum::SpanOf(parts) => {
                let mut pts = Vec::new();
                for part in parts {
                    pts.extend(spec.named_points(&field, part, rng)?);
                }
                if pts.is_empty() {
                    return Err(Error::Range("empty span".into()));
                }
                random_combination(&field, &pts, rng)
            }
            Stratum::OnX => spec.sample_point(&field, rng)?,
        };
        if q.iter().all(|c| field.is_zero(c)) {
            continue;
        }
        let on_x = lies_on(ideal, &q);
        if on_x == (*stratum == Stratum::OnX) {
            return Ok(q);
        }
    }
    Err(Error::Genericity { what: format!("center in stratum {stratum:?} of {spec}"), attempts: GENERICITY_BUDGET })
}
