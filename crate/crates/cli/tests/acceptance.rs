//! Acceptance criteria, one PASS/FAIL line each on stdout.
//!
//! All comparisons are exact; the only tolerances are the wall-clock budgets
//! below, measured on the test profile. Criterion 13 is long and runs under
//! `cargo test -- --ignored`.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzproj::constructions::{build_ideal, Stratum, VarietySpec};
use syzproj::field::{Field, PrimeField};
use syzproj::groebner::{Ideal, DEFAULT_DEGREE_CAP};
use syzproj::koszul::{betti_table, verify_les, BettiTable};
use syzproj::pei::{compare_with_oracle, verify_pei_sequence, BasisSource, DegreewisePei, PeiFiltration};
use syzproj::poly::{MonomialOrder, Ring};
use syzproj::projection::{make_projection, Disjointness};
use syzproj::syzygy::{check_cor23, check_ndp, pd_depth, Status};
use syzproj_cli::commands::generator_counts;
use syzproj_cli::experiments::{draw_center, generic_center, random_fibers, random_sections, ProjectionRun};

const SEED: u64 = 17;
const BUDGET_SCROLL_TABLE: Duration = Duration::from_secs(120);
const BUDGET_PER_STRATUM: Duration = Duration::from_secs(180);
const BUDGET_SUBRING_BETTI: Duration = Duration::from_secs(60);
const BUDGET_LES: Duration = Duration::from_secs(300);
const BUDGET_FIBERS_SECTIONS: Duration = Duration::from_secs(240);
const BUDGET_PEI: Duration = Duration::from_secs(600);
const BUDGET_IMAGES: Duration = Duration::from_secs(300);
const BUDGET_LONG: Duration = Duration::from_secs(1800);
/// Random quadric ideals checked against the degreewise oracle.
const RANDOM_QUADRIC_IDEALS: usize = 50;
const PEI_MAX_DEGREE: u32 = 8;
const PEI_LEVELS: u32 = 3;
const FIBERS_PER_T: usize = 25;
const SECTIONS_PER_DIM: usize = 25;

type F = PrimeField;

struct Verdict {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn report(v: &Verdict) {
    let word = if v.ok { "PASS" } else { "FAIL" };
    // written past the test harness's capture so the lines land in the log
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {:>2} {word} {} [{:.1}s] {}", v.id, v.name, v.elapsed.as_secs_f64(), v.detail).unwrap();
}

fn criterion(id: u32, name: &'static str, budget: Duration, body: impl FnOnce() -> Result<(bool, String), String>) -> Verdict {
    let start = Instant::now();
    let res = body();
    let elapsed = start.elapsed();
    let (ok, mut detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    let ok = ok && elapsed <= budget;
    if elapsed > budget {
        detail.push_str(&format!(" over budget {}s", budget.as_secs()));
    }
    let v = Verdict { id, name, ok, detail, elapsed };
    report(&v);
    v
}

fn ideal_of(spec: &str) -> (VarietySpec, Ideal<F>) {
    let spec: VarietySpec = spec.parse().unwrap();
    let ideal = build_ideal(PrimeField::default_field(), &spec).unwrap();
    (spec, ideal)
}

fn entries(t: &BettiTable, at: &[(u32, u32)]) -> Vec<Option<u64>> {
    at.iter().map(|&(i, d)| t.get(i, d)).collect()
}

fn known(v: &[u64]) -> Vec<Option<u64>> {
    v.iter().map(|&x| Some(x)).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// One projection of `S(1,1,4)` with everything the strata criteria read.
struct Stratum114 {
    label: &'static str,
    run: ProjectionRun<F>,
    gens: std::collections::BTreeMap<u32, usize>,
    table: BettiTable,
    elapsed: Duration,
}

fn scroll_strata() -> Vec<Result<Stratum114, String>> {
    let (spec, ideal) = ideal_of("scroll:1,1,4");
    let strata = [("a", "generic"), ("b", "secant"), ("c1", "span:directrix:0,fiber"), ("c2", "span:subscroll:0+1"), ("d", "on-x")];
    strata
        .iter()
        .map(|&(label, stratum)| {
            let start = Instant::now();
            let stratum: Stratum = stratum.parse().map_err(err)?;
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let center = draw_center(&spec, &ideal, &stratum, 1, &mut rng).map_err(err)?;
            let run = ProjectionRun::new(&ideal, &center).map_err(err)?;
            let ny = run.image.ring().nvars() as u32;
            let table = run.image_table(ny).map_err(err)?;
            let gens = generator_counts(&run.image);
            Ok(Stratum114 { label, run, gens, table, elapsed: start.elapsed() })
        })
        .collect()
}

fn random_quadric_ideal(rng: &mut ChaCha8Rng) -> Ideal<F> {
    let field = PrimeField::default_field();
    let n = rng.gen_range(3..=6);
    let ring = Ring::with_prefix(field, "x", n, MonomialOrder::Deglex);
    let monomials = ring.monomials_of_degree(2);
    let count = rng.gen_range(1..=4);
    let gens = (0..count)
        .map(|_| {
            // sparse quadrics keep x_0-degrees and the K_i varied
            let mut terms = Vec::new();
            for m in &monomials {
                if rng.gen_bool(0.4) {
                    terms.push((m.clone(), field.random(rng)));
                }
            }
            ring.from_terms(terms)
        })
        .filter(|q| !q.is_zero())
        .collect();
    Ideal::new(ring, gens).unwrap()
}

/// Gröbner-rule `K_i` against the oracle, the filtration and the sequence residuals.
fn pei_checks(ideal: &Ideal<F>) -> Result<bool, String> {
    let oracle = DegreewisePei::compute(ideal, PEI_MAX_DEGREE, BasisSource::NormalForms).map_err(err)?;
    let agree = compare_with_oracle(ideal, PEI_LEVELS, &oracle).map_err(err)?.iter().all(|r| r.agree);
    let increasing = PeiFiltration::compute(ideal, PEI_LEVELS).map_err(err)?.is_increasing();
    let mut residual = 0;
    for i in 1..=PEI_LEVELS {
        residual += verify_pei_sequence(ideal, i, PEI_MAX_DEGREE).map_err(err)?.iter().map(|r| r.residual().abs()).sum::<i64>();
    }
    Ok(agree && increasing && residual == 0)
}

#[test]
fn acceptance() {
    let mut verdicts = Vec::new();

    verdicts.push(criterion(1, "scroll S(1,1,4) resolution", BUDGET_SCROLL_TABLE, || {
        let (_, ideal) = ideal_of("scroll:1,1,4");
        let t = betti_table(&ideal, 0, 8).map_err(err)?;
        let got = entries(&t, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]);
        let rest_zero = t.nonzero().all(|((i, d), _)| i == 0 || d == i + 1);
        Ok((got == known(&[15, 40, 45, 24, 5]) && rest_zero && t.is_complete(), format!("{got:?}")))
    }));

    let strata = scroll_strata();
    let stratum = |label: &str| -> Result<&Stratum114, String> {
        match strata.iter().find(|s| s.as_ref().is_ok_and(|s| s.label == label)) {
            Some(Ok(s)) => Ok(s),
            _ => Err(strata.iter().filter_map(|s| s.as_ref().err()).cloned().collect::<Vec<_>>().join("; ")),
        }
    };

    let budget2 = BUDGET_PER_STRATUM * strata.len() as u32;
    verdicts.push(criterion(2, "projection strata of S(1,1,4)", budget2, || {
        let mut ok = strata.iter().all(|s| s.as_ref().is_ok_and(|s| s.elapsed <= BUDGET_PER_STRATUM));
        let mut detail = Vec::new();
        let expected: [(&str, usize, usize, &[(u32, u32)], &[u64]); 5] = [
            ("a", 6, 10, &[(2, 4), (2, 3)], &[40, 8]),
            ("b", 7, 3, &[(2, 4), (2, 3)], &[19, 8]),
            ("c1", 8, 1, &[(2, 4), (2, 3)], &[4, 12]),
            ("c2", 9, 0, &[(1, 2), (2, 3), (3, 4), (4, 6)], &[9, 16, 9, 1]),
            ("d", 10, 0, &[(1, 2), (2, 3), (3, 4), (4, 5)], &[10, 20, 15, 4]),
        ];
        for (label, q, c, at, want) in expected {
            let s = stratum(label)?;
            let got = (s.gens.get(&2).copied().unwrap_or(0), s.gens.get(&3).copied().unwrap_or(0), entries(&s.table, at));
            let good = got == (q, c, known(want));
            ok &= good;
            detail.push(format!("{label}:{}+{} {:?} in {:.1}s", got.0, got.1, got.2, s.elapsed.as_secs_f64()));
        }
        Ok((ok, detail.join(" ")))
    }));

    verdicts.push(criterion(3, "quadric count 15 - 8 + s across strata", Duration::MAX, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for (label, s_want) in [("a", -1), ("b", 0), ("c1", 1), ("c2", 2)] {
            let st = stratum(label)?;
            let s = st.run.locus.as_ref().ok_or("no secant locus")?.s;
            let q = st.gens.get(&2).copied().unwrap_or(0) as i64;
            ok &= s == s_want && q == 15 - 8 + s;
            detail.push(format!("{label}: s={s} quadrics={q}"));
        }
        Ok((ok, detail.join(", ")))
    }));

    verdicts.push(criterion(4, "depth of the images", Duration::MAX, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for (label, want) in [("a", 1), ("b", 2), ("c2", 4)] {
            let st = stratum(label)?;
            let pd = pd_depth(&st.table, st.run.image.ring().nvars());
            ok &= pd.certified && pd.depth == want;
            detail.push(format!("{label}: depth={}", pd.depth));
        }
        Ok((ok, detail.join(", ")))
    }));

    verdicts.push(criterion(5, "Betti numbers over S_1 for RNC(4..6)", BUDGET_SUBRING_BETTI, || {
        let mut ok = true;
        let mut detail = Vec::new();
        for d in 4u32..=6 {
            let (spec, ideal) = ideal_of(&format!("rnc:{d}"));
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let q = draw_center(&spec, &ideal, &Stratum::GenericOuter, 1, &mut rng).map_err(err)?;
            let setup = make_projection(&ideal, &q).map_err(err)?;
            let p = d - 1;
            let b_r = betti_table(&ideal, 0, p).map_err(err)?;
            let b_s1 = betti_table(&setup.transformed, 1, p).map_err(err)?;
            let report = check_cor23(&b_r, &b_s1, 2, p).map_err(err)?;
            let zero = report.rows.iter().all(|r| r.residual() == Some(0));
            let spot = b_s1.get(1, 2) == Some(binomial(u64::from(d), 2) - 1);
            ok &= setup.disjointness == Disjointness::Disjoint && zero && spot && report.status == Status::Pass;
            detail.push(format!("d={d}: beta^S1_12={:?}", b_s1.get(1, 2)));
        }
        Ok((ok, detail.join(", ")))
    }));

    verdicts.push(criterion(6, "Eagon-Northcott numbers for RNC(d), d <= 6", Duration::MAX, || {
        let mut ok = true;
        for d in 2u32..=6 {
            let (_, ideal) = ideal_of(&format!("rnc:{d}"));
            let t = betti_table(&ideal, 0, d + 1).map_err(err)?;
            for i in 1..=d + 1 {
                let want = u64::from(i) * binomial(u64::from(d), u64::from(i) + 1);
                ok &= t.get(i, i + 1) == Some(want);
            }
            ok &= t.nonzero().all(|((i, m), _)| i == 0 || m == i + 1);
        }
        Ok((ok, "beta_{i,i+1} = i C(d,i+1)".into()))
    }));

    verdicts.push(criterion(7, "mapping-cone long exact sequence", BUDGET_LES, || {
        let mut ok = true;
        let mut nodes = 0;
        for (spec, max_d) in [("rnc:3", 5), ("scroll:1,1,4", 4)] {
            let (_, ideal) = ideal_of(spec);
            for t in [0, 1] {
                let r = verify_les(&ideal, t, 3, max_d).map_err(err)?;
                ok &= r.exact && !r.nodes.is_empty();
                nodes += r.nodes.len();
            }
        }
        Ok((ok, format!("{nodes} nodes")))
    }));

    verdicts.push(criterion(8, "fibers and sections of RNC(6)", BUDGET_FIBERS_SECTIONS, || {
        let (spec, ideal) = ideal_of("rnc:6");
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut ok = true;
        let mut max_len = 0;
        for t in 1..=3 {
            let fibers = random_fibers(&spec, &ideal, t, 2, FIBERS_PER_T, &mut rng).map_err(err)?;
            ok &= fibers.iter().all(|f| f.length >= 1 && f.length <= 2 && f.within_bound() == Some(true));
            max_len = max_len.max(fibers.iter().map(|f| f.length).max().unwrap_or(0));
        }
        let sections = random_sections(&spec, &ideal, &[1, 2, 3], SECTIONS_PER_DIM, &mut rng).map_err(err)?;
        ok &= sections.iter().all(|(k, r)| r.length <= *k as u64 + 1 && r.regularity <= 2);
        let max_reg = sections.iter().map(|(_, r)| r.regularity).max().unwrap_or(0);
        Ok((ok, format!("max fiber length {max_len}, {} sections, max reg {max_reg}", sections.len())))
    }));

    verdicts.push(criterion(9, "degrees of catalecticant secant varieties", Duration::MAX, || {
        let (_, a) = ideal_of("secant:5,2");
        let (_, b) = ideal_of("secant:7,2");
        let got = (a.degree_of(DEFAULT_DEGREE_CAP).map_err(err)?, b.degree_of(DEFAULT_DEGREE_CAP).map_err(err)?);
        Ok((got == (6, binomial(6, 2)), format!("{got:?}")))
    }));

    verdicts.push(criterion(10, "partial elimination ideals against the oracle", BUDGET_PEI, || {
        let mut ok = true;
        let mut checked = 0;
        for spec in ["rnc:3", "rnc:4", "rnc:6", "scroll:1,1,4", "secant:5,2", "veronese:2,2"] {
            let (_, ideal) = ideal_of(spec);
            ok &= pei_checks(&ideal)?;
            // the same ideal with a generic outer point moved to e_0
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let (_, setup) = generic_center(&ideal, 1, &mut rng).map_err(err)?;
            ok &= pei_checks(&setup.transformed)?;
            checked += 2;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..RANDOM_QUADRIC_IDEALS {
            ok &= pei_checks(&random_quadric_ideal(&mut rng))?;
            checked += 1;
        }
        Ok((ok, format!("{checked} ideals up to degree {PEI_MAX_DEGREE}")))
    }));

    verdicts.push(criterion(11, "secant loci for centers on Sec minus Tan", Duration::MAX, || {
        let (spec, ideal) = ideal_of("rnc:6");
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let q = draw_center(&spec, &ideal, &Stratum::Secant, 1, &mut rng).map_err(err)?;
        let run = ProjectionRun::new(&ideal, &q).map_err(err)?;
        let l = run.locus.as_ref().ok_or("no secant locus")?;
        let mut ok = l.k1_linear && l.sigma_length == Some(2) && l.s == 0;
        let mut detail = vec![format!("rnc6: {l}")];
        let b = stratum("b")?.run.locus.as_ref().ok_or("no secant locus")?;
        ok &= b.k1_linear && b.sigma_length == Some(2);
        detail.push(format!("s114-b: {b}"));
        for label in ["c1", "c2"] {
            let l = stratum(label)?.run.locus.as_ref().ok_or("no secant locus")?;
            let linear = generator_counts(&l.z1).keys().all(|&d| d <= 1);
            ok &= l.k1_linear && linear;
            detail.push(format!("s114-{label}: {l} z1 linear {linear}"));
        }
        Ok((ok, detail.join("; ")))
    }));

    verdicts.push(criterion(12, "generation and N_{d,p} of projected RNC(6)", BUDGET_IMAGES, || {
        let (spec, ideal) = ideal_of("rnc:6");
        let p = 5;
        let mut ok = true;
        let mut detail = Vec::new();
        for (t, stratum, top) in [(1, Stratum::GenericOuter, 3), (2, Stratum::GenericOuter, 4), (1, Stratum::Secant, 3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let center = draw_center(&spec, &ideal, &stratum, t, &mut rng).map_err(err)?;
            let run = ProjectionRun::new(&ideal, &center).map_err(err)?;
            let gens_ok = generator_counts(&run.image).keys().all(|&d| d <= top);
            let steps = p - t as u32;
            let ndp = check_ndp(&run.image_table(steps).map_err(err)?, top, steps);
            ok &= run.setup.disjointness == Disjointness::Disjoint && gens_ok && ndp.status == Status::Pass;
            detail.push(format!("t={t} {stratum}: gens<= {top} {gens_ok}, {ndp}"));
        }
        Ok((ok, detail.join("; ")))
    }));

    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.ok).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
#[ignore = "long: projections of the degree-13 rational normal curve"]
fn acceptance_long() {
    let v = criterion(13, "projections of nu_13(P^1)", BUDGET_LONG, || {
        let (spec, ideal) = ideal_of("rnc:13");
        let mut ok = true;
        let mut detail = Vec::new();
        for (t, p) in [(1usize, 4u32), (2, 3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let center = draw_center(&spec, &ideal, &Stratum::GenericOuter, t, &mut rng).map_err(err)?;
            let run = ProjectionRun::new(&ideal, &center).map_err(err)?;
            let ndp = check_ndp(&run.image_table(p).map_err(err)?, 2, p);
            ok &= ndp.status == Status::Pass;
            detail.push(format!("t={t}: {ndp}"));
        }
        Ok((ok, detail.join("; ")))
    });
    assert!(v.ok);
}
