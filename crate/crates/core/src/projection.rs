//! Linear projections `π_Λ : X → Y_t ⊂ P^{n-t}`: coordinate standardization
//! of the center, image ideals, fibers and linear sections as finite schemes,
//! secant loci, and the identities relating `X`, `Y_1` and `Z_1`.

use std::fmt;

use crate::constructions::lies_on;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{eliminate, saturate_irrelevant, Ideal, Saturation, DEFAULT_DEGREE_CAP, INTERNAL_SEED};
use crate::koszul::{betti_table, BettiTable};
use crate::linalg::{EchelonSpace, ExactMatrix};
use crate::pei::{max_generator_degree, partial_elim_ideal};
use crate::poly::{binomial, count_monomials, Polynomial};
use crate::syzygy::{check_ndp, pd_depth, NdpReport, PdDepth, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disjointness {
    /// `Λ ∩ X = ∅` (outer projection).
    Disjoint,
    MeetsX,
}

impl fmt::Display for Disjointness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Disjointness::Disjoint => "disjoint",
            Disjointness::MeetsX => "meets-x",
        })
    }
}

/// A projection center together with the coordinates that make it standard.
///
/// With `P` the matrix whose first `t` columns are the center points,
/// `x = P y`; in the `y` coordinates the center is spanned by `e_0..e_{t-1}`
/// and the projection forgets `y_0..y_{t-1}`.
#[derive(Clone, Debug)]
pub struct ProjectionSetup<F: Field> {
    pub source: Ideal<F>,
    pub center: Vec<Vec<F::Elem>>,
    pub basis: ExactMatrix<F>,
    pub inverse: ExactMatrix<F>,
    /// `I(P y)`, in the ring of `source`.
    pub transformed: Ideal<F>,
    pub t: usize,
    pub disjointness: Disjointness,
}

impl<F: Field> ProjectionSetup<F> {
    /// Coordinates of `x` in the standardized system.
    pub fn to_standard(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        Ok(self.inverse.mul_vec(x)?)
    }

    /// Image of a point not in `Λ`, as a point of `P^{n-t}`.
    pub fn image_of(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let y = self.to_standard(x)?;
        let img = y[self.t..].to_vec();
        let fld = self.source.ring().field();
        if img.iter().all(|c| fld.is_zero(c)) {
            return Err(Error::Range("point lies in the center".into()));
        }
        Ok(img)
    }

    /// Bring an ideal written in the standardized coordinates back.
    pub fn from_standard(&self, ideal: &Ideal<F>) -> Result<Ideal<F>> {
        ideal.apply_linear_change(&self.inverse.transpose())
    }
}

/// Standardize the span of `center` and test whether it meets `X`.
pub fn make_projection<F: Field>(ideal: &Ideal<F>, center: &[Vec<F::Elem>]) -> Result<ProjectionSetup<F>> {
    let ring = ideal.ring();
    let fld = ring.field();
    let n = ring.nvars();
    let t = center.len();
    if t == 0 || t >= n {
        return Err(Error::Range(format!("a center of {t} points in P^{}", n - 1)));
    }
    if let Some(p) = center.iter().find(|p| p.len() != n) {
        return Err(Error::Dimension(format!("point with {} coordinates in P^{}", p.len(), n - 1)));
    }
    let mut space = EchelonSpace::new(fld.clone(), n);
    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
    for p in center {
        if !space.insert(p.clone()) {
            return Err(Error::Dimension("center points are linearly dependent".into()));
        }
        columns.push(p.clone());
    }
    for j in 0..n {
        let mut e = vec![fld.zero(); n];
        e[j] = fld.one();
        if space.insert(e.clone()) {
            columns.push(e);
        }
    }
    // Rows of `A` are the columns of `P`, so that `x_i ↦ Σ_j P[i][j] y_j`.
    let change = ExactMatrix::from_dense(fld.clone(), &columns);
    let basis = change.transpose();
    let inverse = basis.inverse().ok_or_else(|| Error::Dimension("singular completion".into()))?;
    let transformed = ideal.apply_linear_change(&change)?;
    let mut gens = transformed.gens().to_vec();
    gens.extend((t..n).map(|i| ring.var(i)));
    let meet = Ideal::new(ring.clone(), gens)?;
    let disjointness = if meet.krull_dim() <= 0 { Disjointness::Disjoint } else { Disjointness::MeetsX };
    Ok(ProjectionSetup { source: ideal.clone(), center: center.to_vec(), basis, inverse, transformed, t, disjointness })
}

/// Saturated ideal of the image `Y_t` in `S_t = k[y_t, …, y_n]`, with
/// minimal generators.
pub fn project_ideal<F: Field>(setup: &ProjectionSetup<F>) -> Result<Ideal<F>> {
    let elim = eliminate(&setup.transformed, setup.t)?;
    let sat = saturate_irrelevant(&elim, INTERNAL_SEED)?;
    Ok(sat.minimalized().with_saturated(Saturation::Yes))
}

/// Length, Hilbert function and regularity of a zero-dimensional scheme.
#[derive(Clone, Debug)]
pub struct FiniteSchemeReport<F: Field> {
    /// Saturated defining ideal.
    pub ideal: Ideal<F>,
    /// Projective dimension of the linear span used to cut the scheme.
    pub span_dim: usize,
    pub length: u64,
    /// `HF(S/I_Z, m)` for `m` up to the first degree where it reaches `length`.
    pub hf: Vec<u64>,
    /// Least `m` with `HF(m) = length`: the scheme is `m'`-normal for all `m' ≥ m`.
    pub normal_from: u32,
    /// `reg(I_Z) = normal_from + 1`.
    pub regularity: u32,
    /// Upper bound on `length` supplied by the caller's hypotheses.
    pub bound: Option<u64>,
}

impl<F: Field> FiniteSchemeReport<F> {
    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Whether `S_m → H^0(O_Z(m))` is onto.
    pub fn is_normal_in(&self, m: u32) -> bool {
        m >= self.normal_from
    }

    pub fn within_bound(&self) -> Option<bool> {
        self.bound.map(|b| self.length <= b)
    }
}

impl<F: Field> fmt::Display for FiniteSchemeReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hf: Vec<String> = self.hf.iter().map(u64::to_string).collect();
        write!(
            f,
            "length={} reg={} normal_from={} span_dim={} hf={}",
            self.length,
            self.regularity,
            self.normal_from,
            self.span_dim,
            hf.join(",")
        )?;
        if let Some(b) = self.bound {
            write!(f, " bound={b}")?;
        }
        Ok(())
    }
}

/// Finite scheme cut out by `I` and the linear forms vanishing on `points`.
fn section_report<F: Field>(ideal: &Ideal<F>, points: &[Vec<F::Elem>], bound: Option<u64>) -> Result<FiniteSchemeReport<F>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::Dimension(format!("point with {} coordinates in P^{}", p.len(), n - 1)));
    }
    let m = ExactMatrix::from_dense(ring.field().clone(), points);
    let (rank, forms) = m.rank_kernel();
    if rank == 0 {
        return Err(Error::Dimension("the span is empty".into()));
    }
    let mut gens = ideal.gens().to_vec();
    gens.extend(forms.iter().map(|c| ring.linear_form(c)).filter(|f: &Polynomial<F>| !f.is_zero()));
    let section = Ideal::new(ring.clone(), gens)?;
    let dim = section.krull_dim();
    if dim >= 2 {
        return Err(Error::Dimension(format!("the section has dimension {}", dim - 1)));
    }
    let span_dim = rank - 1;
    if dim <= 0 {
        let ideal = Ideal::unit(ring.clone());
        return Ok(FiniteSchemeReport { ideal, span_dim, length: 0, hf: vec![0], normal_from: 0, regularity: 0, bound });
    }
    let sat = saturate_irrelevant(&section, INTERNAL_SEED)?;
    let data = sat.hilbert_data(DEFAULT_DEGREE_CAP);
    let length = data.degree.ok_or(Error::Truncation { what: "Hilbert function of a section".into(), cap: DEFAULT_DEGREE_CAP })?;
    let normal_from = data.values.iter().position(|&v| v == length).expect("stabilized") as u32;
    let hf = data.values[..=normal_from as usize].to_vec();
    Ok(FiniteSchemeReport { ideal: sat, span_dim, length, hf, normal_from, regularity: normal_from + 1, bound })
}

/// `X ∩ L` for `L` the span of `points`.
pub fn linear_section<F: Field>(ideal: &Ideal<F>, points: &[Vec<F::Elem>]) -> Result<FiniteSchemeReport<F>> {
    section_report(ideal, points, None)
}

/// The fiber `π_Λ^{-1}(y) = X ∩ ⟨Λ, y⟩`, in standardized coordinates, for
/// `y` a point of `P^{n-t}`. `d` is the generation degree of `X`, giving the
/// length bound `C(t+d-1, t)`.
pub fn fiber_report<F: Field>(setup: &ProjectionSetup<F>, y: &[F::Elem], d: u32) -> Result<FiniteSchemeReport<F>> {
    let ring = setup.transformed.ring();
    let fld = ring.field();
    let n = ring.nvars();
    let t = setup.t;
    if y.len() != n - t {
        return Err(Error::Dimension(format!("image point needs {} coordinates, got {}", n - t, y.len())));
    }
    if y.iter().all(|c| fld.is_zero(c)) {
        return Err(Error::Dimension("the zero vector is not a point".into()));
    }
    let mut points: Vec<Vec<F::Elem>> = (0..t)
        .map(|k| {
            let mut e = vec![fld.zero(); n];
            e[k] = fld.one();
            e
        })
        .collect();
    let mut lifted = vec![fld.zero(); t];
    lifted.extend(y.iter().cloned());
    points.push(lifted);
    let bound = binomial(t + d as usize - 1, t) as u64;
    section_report(&setup.transformed, &points, Some(bound))
}

/// Secant locus `Σ_q(X)` of a one-point projection and its image `Z_1`.
#[derive(Clone, Debug)]
pub struct SecantLocus<F: Field> {
    pub setup: ProjectionSetup<F>,
    /// `K_1(I)` in the standardized coordinates, as computed.
    pub k1: Ideal<F>,
    pub k1_linear: bool,
    /// Saturated ideal of `Z_1` in `S_1`.
    pub z1: Ideal<F>,
    /// `dim Z_1`, `-1` when empty.
    pub s: i64,
    /// Saturated ideal of `Σ_q` in the original coordinates.
    pub sigma: Ideal<F>,
    /// Length of `Σ_q` when it is finite and nonempty.
    pub sigma_length: Option<u64>,
}

impl<F: Field> fmt::Display for SecantLocus<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} k1_linear={}", self.s, self.k1_linear)?;
        if let Some(l) = self.sigma_length {
            write!(f, " sigma_length={l}")?;
        }
        Ok(())
    }
}

/// `Σ_q(X)` for `q ∉ X`, where `X` satisfies `N_{2,2}`.
pub fn secant_locus<F: Field>(ideal: &Ideal<F>, q: &[F::Elem]) -> Result<SecantLocus<F>> {
    if lies_on(ideal, q) {
        return Err(Error::Hypothesis("the center lies on X".into()));
    }
    let table = betti_table(ideal, 0, 2)?;
    let ndp = check_ndp(&table, 2, 2);
    if ndp.status != Status::Pass {
        return Err(Error::Hypothesis(format!("X does not satisfy N_2,2: {ndp}")));
    }
    secant_locus_unchecked(ideal, q)
}

/// [`secant_locus`] without the syzygy hypothesis check.
pub fn secant_locus_unchecked<F: Field>(ideal: &Ideal<F>, q: &[F::Elem]) -> Result<SecantLocus<F>> {
    let setup = make_projection(ideal, &[q.to_vec()])?;
    let ring = setup.transformed.ring().clone();
    let level = partial_elim_ideal(&setup.transformed, 1)?;
    let k1 = level.ideal;
    let k1_linear = max_generator_degree(&k1).is_none_or(|g| g <= 1);
    let z1 = if k1.is_unit() { k1.clone() } else { saturate_irrelevant(&k1, INTERNAL_SEED)? };
    let s = if z1.is_unit() { -1 } else { i64::from(z1.krull_dim()) - 1 };
    let mut gens = setup.transformed.gens().to_vec();
    gens.extend(k1.gens().iter().map(|g| ring.embed_from_subring(g, 1)));
    let cone = Ideal::new(ring.clone(), gens)?;
    let sigma_std = saturate_irrelevant(&cone, INTERNAL_SEED)?;
    let sigma = setup.from_standard(&sigma_std)?.with_saturated(Saturation::Yes);
    let sigma_length = if s == 0 { sigma_std.degree_of(DEFAULT_DEGREE_CAP).ok() } else { None };
    Ok(SecantLocus { setup, k1, k1_linear, z1, s, sigma, sigma_length })
}

/// Quadric count and depth of a one-point outer projection against those of `X`.
#[derive(Clone, Debug)]
pub struct Prop41Report {
    pub n: usize,
    pub s: i64,
    pub quadrics_x: u64,
    pub quadrics_y: u64,
    /// `quadrics_y = quadrics_x - n + s`.
    pub quadrics: Status,
    pub depth_x: PdDepth,
    pub depth_y: PdDepth,
    /// `depth(Y) = min(depth(X), s + 2)`; conditional on a cohomology
    /// vanishing for `X` that is not checked here.
    pub depth: Status,
}

impl Prop41Report {
    pub fn status(&self) -> Status {
        self.quadrics.and(self.depth)
    }
}

impl fmt::Display for Prop41Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quadrics {} = {} - {} + {} ({}); depth {} vs min({}, {}) ({}, conditional)",
            self.quadrics_y,
            self.quadrics_x,
            self.n,
            self.s,
            self.quadrics,
            self.depth_y.depth,
            self.depth_x.depth,
            self.s + 2,
            self.depth
        )
    }
}

fn quadric_count<F: Field>(ideal: &Ideal<F>) -> u64 {
    count_monomials(ideal.ring().nvars(), 2) as u64 - ideal.hilbert_function(2)
}

/// Compare `X ⊂ P^n` with its one-point outer projection `Y ⊂ P^{n-1}`.
/// The tables are Betti tables of `R/I_X` over `R` and of `S_1/I_Y` over `S_1`.
pub fn check_prop41<F: Field>(
    i_x: &Ideal<F>,
    setup: &ProjectionSetup<F>,
    i_y: &Ideal<F>,
    s: i64,
    b_x: &BettiTable,
    b_y: &BettiTable,
) -> Result<Prop41Report> {
    if setup.t != 1 || setup.disjointness != Disjointness::Disjoint {
        return Err(Error::Hypothesis("needs a one-point outer projection".into()));
    }
    let ndp = check_ndp(b_x, 2, 2);
    if ndp.status != Status::Pass {
        return Err(Error::Hypothesis(format!("X does not satisfy N_2,2: {ndp}")));
    }
    let n = i_x.ring().nvars() - 1;
    let quadrics_x = quadric_count(i_x);
    let quadrics_y = quadric_count(i_y);
    let quadrics = if quadrics_y as i64 == quadrics_x as i64 - n as i64 + s { Status::Pass } else { Status::Fail };
    let depth_x = pd_depth(b_x, i_x.ring().nvars());
    let depth_y = pd_depth(b_y, i_y.ring().nvars());
    let expected = depth_x.depth.min(s + 2);
    let depth = if !(depth_x.certified && depth_y.certified) {
        Status::Inconclusive
    } else if depth_y.depth == expected {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Prop41Report { n, s, quadrics_x, quadrics_y, quadrics, depth_x, depth_y, depth })
}

/// `HF(R/I_X, m) = HF(S_1/I_Y, m) + HF(S_1/K_1, m-1)` for `m ≤ cap`.
#[derive(Clone, Debug)]
pub struct HfSequenceReport {
    /// `(m, HF_X, HF_Y, HF_K1(m-1))`.
    pub rows: Vec<(u32, u64, u64, u64)>,
    pub status: Status,
}

impl HfSequenceReport {
    pub fn residual(&self, m: u32) -> Option<i64> {
        self.rows.iter().find(|r| r.0 == m).map(|&(_, x, y, z)| x as i64 - y as i64 - z as i64)
    }
}

/// Hilbert functions along `0 → S_1/I_Y → R/I_X → S_1/K_1(-1) → 0`.
pub fn check_thm39_hf<F: Field>(i_x: &Ideal<F>, i_y: &Ideal<F>, k1: &Ideal<F>, cap: u32) -> HfSequenceReport {
    let rows: Vec<(u32, u64, u64, u64)> = (0..=cap)
        .map(|m| {
            let z = if m == 0 { 0 } else { k1.hilbert_function(m - 1) };
            (m, i_x.hilbert_function(m), i_y.hilbert_function(m), z)
        })
        .collect();
    let status = if rows.iter().all(|&(_, x, y, z)| x == y + z) { Status::Pass } else { Status::Fail };
    HfSequenceReport { rows, status }
}

/// Generation degree and syzygy check for an image `Y_t`: minimal generators
/// of degree at most `d` and `N_{d,p}` on the table.
#[derive(Clone, Debug)]
pub struct ImageSyzygyReport {
    pub max_generator_degree: Option<u32>,
    pub bound: u32,
    pub ndp: NdpReport,
    pub status: Status,
}

pub fn check_image_syzygies<F: Field>(i_y: &Ideal<F>, b_y: &BettiTable, d: u32, p: u32) -> ImageSyzygyReport {
    let max = max_generator_degree(i_y);
    let ndp = check_ndp(b_y, d, p);
    let gen = if max.is_none_or(|g| g <= d) { Status::Pass } else { Status::Fail };
    ImageSyzygyReport { max_generator_degree: max, bound: d, status: gen.and(ndp.status), ndp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_ideal, random_center, Stratum, VarietySpec};
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::default_field()
    }

    fn point(v: &[i64]) -> Vec<u32> {
        v.iter().map(|&c| fp().from_i64(c)).collect()
    }

    #[test]
    fn coordinate_point_center_is_standard() {
        let i = build_ideal(fp(), &VarietySpec::rnc(3)).unwrap();
        let setup = make_projection(&i, &[point(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(setup.disjointness, Disjointness::Disjoint);
        let setup = make_projection(&i, &[point(&[1, 0, 0, 0])]).unwrap();
        assert_eq!(setup.disjointness, Disjointness::MeetsX);
        assert_eq!(setup.basis, ExactMatrix::identity(fp(), 4));
        assert!(make_projection(&i, &[point(&[1, 1, 0, 0]), point(&[2, 2, 0, 0])]).is_err());
    }

    #[test]
    fn twisted_cubic_projects_to_a_nodal_cubic() {
        let i = build_ideal(fp(), &VarietySpec::rnc(3)).unwrap();
        // q = p(1,1) + p(1,2) lies on a secant line
        let q = point(&[2, 3, 5, 9]);
        let setup = make_projection(&i, std::slice::from_ref(&q)).unwrap();
        assert_eq!(setup.disjointness, Disjointness::Disjoint);
        let y = project_ideal(&setup).unwrap();
        assert_eq!(y.generator_degrees().into_iter().collect::<Vec<_>>(), vec![(3, 1)]);
        let locus = secant_locus(&i, &q).unwrap();
        assert!(locus.k1_linear);
        assert_eq!(locus.s, 0);
        assert_eq!(locus.sigma_length, Some(2));
        assert!(lies_on(&locus.sigma, &point(&[1, 1, 1, 1])));
        assert!(lies_on(&locus.sigma, &point(&[1, 2, 4, 8])));
        let hf = check_thm39_hf(&i, &y, &partial_elim_ideal(&setup.transformed, 1).unwrap().ideal, 8);
        assert_eq!(hf.status, Status::Pass);
    }

    #[test]
    fn general_line_misses_the_twisted_cubic() {
        let i = build_ideal(fp(), &VarietySpec::rnc(3)).unwrap();
        let setup = make_projection(&i, &[point(&[1, 0, 3, 1]), point(&[0, 1, 5, 7])]).unwrap();
        assert_eq!(setup.disjointness, Disjointness::Disjoint);
        let y = project_ideal(&setup).unwrap();
        assert_eq!(y.ring().nvars(), 2);
        assert!(y.is_zero());
    }

    #[test]
    fn secant_line_section_has_length_two() {
        let i = build_ideal(fp(), &VarietySpec::rnc(3)).unwrap();
        let r = linear_section(&i, &[point(&[1, 1, 1, 1]), point(&[1, 2, 4, 8])]).unwrap();
        assert_eq!((r.length, r.regularity, r.span_dim), (2, 2, 1));
        let r = linear_section(&i, &[point(&[1, 1, 1, 1])]).unwrap();
        assert_eq!((r.length, r.regularity), (1, 1));
        let plane = [point(&[1, 0, 0, 0]), point(&[0, 1, 0, 0]), point(&[0, 0, 1, 0])];
        assert_eq!(linear_section(&i, &plane).unwrap().length, 3);
        let mut whole = plane.to_vec();
        whole.push(point(&[0, 0, 0, 1]));
        assert!(matches!(linear_section(&i, &whole), Err(Error::Dimension(_))));
    }

    #[test]
    fn fibers_of_a_quadric_generated_curve_have_length_at_most_two() {
        let spec = VarietySpec::rnc(4);
        let i = build_ideal(fp(), &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = random_center(&spec, &i, &Stratum::GenericOuter, &mut rng).unwrap();
        let setup = make_projection(&i, &[q]).unwrap();
        for _ in 0..5 {
            let x = spec.sample_point(&fp(), &mut rng).unwrap();
            let r = fiber_report(&setup, &setup.image_of(&x).unwrap(), 2).unwrap();
            assert!(r.length >= 1);
            assert_eq!(r.within_bound(), Some(true));
        }
    }

    #[test]
    fn re_presenting_the_center_gives_the_same_image() {
        let i = build_ideal(fp(), &VarietySpec::rnc(4)).unwrap();
        let a = point(&[1, 0, 3, 1, 2]);
        let b = point(&[0, 1, 5, 7, 1]);
        let ab: Vec<u32> = a.iter().zip(&b).map(|(x, y)| fp().add(x, &fp().mul(&fp().from_i64(3), y))).collect();
        let y1 = project_ideal(&make_projection(&i, &[a.clone(), b.clone()]).unwrap()).unwrap();
        let y2 = project_ideal(&make_projection(&i, &[ab, b]).unwrap()).unwrap();
        assert!(y1.same_as(&y2));
    }

    #[test]
    fn prop41_on_rnc_generic_projection() {
        let spec = VarietySpec::rnc(5);
        let i = build_ideal(fp(), &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = random_center(&spec, &i, &Stratum::GenericOuter, &mut rng).unwrap();
        let setup = make_projection(&i, std::slice::from_ref(&q)).unwrap();
        let y = project_ideal(&setup).unwrap();
        let locus = secant_locus(&i, &q).unwrap();
        let b_x = betti_table(&i, 0, 5).unwrap();
        let b_y = betti_table(&y, 0, 4).unwrap();
        let r = check_prop41(&i, &setup, &y, locus.s, &b_x, &b_y).unwrap();
        assert_eq!(r.quadrics, Status::Pass, "{r}");
        assert_eq!(r.depth, Status::Pass, "{r}");
    }
}
