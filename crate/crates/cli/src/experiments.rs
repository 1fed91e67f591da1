//! Seeded projection experiments shared by the corpus runner and the
//! acceptance suite. Every random choice goes through the caller's RNG.

use rand::Rng;
use syzproj::constructions::{random_center, Stratum, VarietySpec, GENERICITY_BUDGET};
use syzproj::field::Field;
use syzproj::groebner::Ideal;
use syzproj::koszul::{betti_table, BettiTable};
use syzproj::projection::{
    fiber_report, linear_section, make_projection, project_ideal, secant_locus_unchecked, Disjointness, FiniteSchemeReport,
    ProjectionSetup, SecantLocus,
};
use syzproj::{Error, Result};

/// `t` uniformly random points of `P^n` spanning a center disjoint from `X`;
/// dependent or meeting draws are redrawn within the genericity budget.
pub fn generic_center<F: Field, R: Rng + ?Sized>(
    ideal: &Ideal<F>,
    t: usize,
    rng: &mut R,
) -> Result<(Vec<Vec<F::Elem>>, ProjectionSetup<F>)> {
    let fld = ideal.ring().field().clone();
    let n = ideal.ring().nvars();
    for _ in 0..GENERICITY_BUDGET {
        let center: Vec<Vec<F::Elem>> = (0..t).map(|_| (0..n).map(|_| fld.random(rng)).collect()).collect();
        match make_projection(ideal, &center) {
            Ok(setup) if setup.disjointness == Disjointness::Disjoint => return Ok((center, setup)),
            Ok(_) | Err(Error::Dimension(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Genericity { what: format!("center of {t} points disjoint from X"), attempts: GENERICITY_BUDGET })
}

/// A projection together with its image and, for one-point centers off
/// `X`, the secant locus.
#[derive(Clone, Debug)]
pub struct ProjectionRun<F: Field> {
    pub setup: ProjectionSetup<F>,
    /// Saturated ideal of the image, minimally generated.
    pub image: Ideal<F>,
    pub locus: Option<SecantLocus<F>>,
}

impl<F: Field> ProjectionRun<F> {
    pub fn new(ideal: &Ideal<F>, center: &[Vec<F::Elem>]) -> Result<Self> {
        let mut setup = make_projection(ideal, center)?;
        let mut locus = None;
        if center.len() == 1 && setup.disjointness == Disjointness::Disjoint {
            let l = secant_locus_unchecked(ideal, &center[0])?;
            setup = l.setup.clone();
            locus = Some(l);
        }
        let image = project_ideal(&setup)?;
        Ok(ProjectionRun { setup, image, locus })
    }

    /// Betti table of the image over its own polynomial ring.
    pub fn image_table(&self, max_i: u32) -> Result<BettiTable> {
        betti_table(&self.image, 0, max_i)
    }
}

/// One-point center drawn from `stratum`, or `t` generic points.
pub fn draw_center<F: Field, R: Rng + ?Sized>(
    spec: &VarietySpec,
    ideal: &Ideal<F>,
    stratum: &Stratum,
    t: usize,
    rng: &mut R,
) -> Result<Vec<Vec<F::Elem>>> {
    if t == 1 {
        return Ok(vec![random_center(spec, ideal, stratum, rng)?]);
    }
    if *stratum != Stratum::GenericOuter {
        return Err(Error::Range(format!("stratum {stratum} needs a one-point center")));
    }
    Ok(generic_center(ideal, t, rng)?.0)
}

/// Fibers of `count` random projections from generic `t`-point centers, each
/// taken over the image of a random point of `X`. `d` is the generation
/// degree used for the length bound.
pub fn random_fibers<F: Field, R: Rng + ?Sized>(
    spec: &VarietySpec,
    ideal: &Ideal<F>,
    t: usize,
    d: u32,
    count: usize,
    rng: &mut R,
) -> Result<Vec<FiniteSchemeReport<F>>> {
    let fld = ideal.ring().field().clone();
    (0..count)
        .map(|_| {
            let (_, setup) = generic_center(ideal, t, rng)?;
            let x = spec.sample_point(&fld, rng)?;
            let y = setup.image_of(&x)?;
            fiber_report(&setup, &y, d)
        })
        .collect()
}

/// Sections `X ∩ L` with `L` spanned by `k + 1` random points of `X`, for
/// each `k` in `dims`, `count` times. Returns `(dim L, report)`.
pub fn random_sections<F: Field, R: Rng + ?Sized>(
    spec: &VarietySpec,
    ideal: &Ideal<F>,
    dims: &[usize],
    count: usize,
    rng: &mut R,
) -> Result<Vec<(usize, FiniteSchemeReport<F>)>> {
    let fld = ideal.ring().field().clone();
    let mut out = Vec::with_capacity(count * dims.len());
    for _ in 0..count {
        for &k in dims {
            let points = (0..=k).map(|_| spec.sample_point(&fld, rng)).collect::<Result<Vec<_>>>()?;
            out.push((k, linear_section(ideal, &points)?));
        }
    }
    Ok(out)
}
