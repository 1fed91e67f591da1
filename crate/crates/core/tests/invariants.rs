use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzproj::constructions::{build_ideal, VarietySpec};
use syzproj::field::{Field, PrimeField};
use syzproj::groebner::{buchberger, satisfies_buchberger_criterion, Ideal};
use syzproj::io::{parse_ideal_file, write_ideal, AnyIdeal};
use syzproj::koszul::betti_table;
use syzproj::pei::{compare_with_oracle, BasisSource, DegreewisePei, PeiFiltration};
use syzproj::poly::{MonomialOrder, Ring};

fn random_forms(seed: u64, n: usize, count: usize, degrees: &[u32]) -> Ideal<PrimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = PrimeField::default_field();
    let ring = Ring::with_prefix(field, "x", n, MonomialOrder::Deglex);
    let mut gens = Vec::new();
    for _ in 0..count {
        let d = degrees[rng.gen_range(0..degrees.len())];
        let mut terms = Vec::new();
        for m in ring.monomials_of_degree(d) {
            if rng.gen_bool(0.5) {
                terms.push((m, field.random(&mut rng)));
            }
        }
        let f = ring.from_terms(terms);
        if !f.is_zero() {
            gens.push(f);
        }
    }
    Ideal::new(ring, gens).unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn f4_basis_matches_reference_buchberger(seed in 0u64..5_000, n in 2usize..5, count in 1usize..4) {
        let i = random_forms(seed, n, count, &[2, 3]);
        let gb = i.groebner_basis();
        prop_assert!(satisfies_buchberger_criterion(i.ring(), gb.polys()));
        let reference = buchberger(i.ring(), i.gens(), None);
        for f in &reference {
            prop_assert!(gb.normal_form(f).is_zero());
        }
        let mut lm = gb.leading_monomials();
        let mut lm_ref: Vec<_> = Ideal::new(i.ring().clone(), reference).unwrap().groebner_basis().leading_monomials();
        lm.sort_by(|a, b| i.ring().cmp(a, b));
        lm_ref.sort_by(|a, b| i.ring().cmp(a, b));
        prop_assert_eq!(lm, lm_ref);
    }

    /// Alternating sums of a complete Betti table give the Hilbert numerator.
    #[test]
    fn betti_euler_characteristic_is_the_hilbert_numerator(seed in 0u64..5_000, n in 2usize..5, count in 1usize..4) {
        let i = random_forms(seed, n, count, &[2]);
        let t = betti_table(&i, 0, n as u32).unwrap();
        prop_assume!(t.is_complete());
        let num = i.hilbert_numerator();
        let top = num.len() as u32 + n as u32 + 2;
        for j in 0..top {
            let chi: i128 = (0..=n as u32).map(|k| (if k % 2 == 0 { 1 } else { -1 }) * t.beta(k, j) as i128).sum();
            prop_assert_eq!(chi, num.get(j as usize).copied().unwrap_or(0), "degree {}", j);
        }
    }

    /// Rational normal scrolls of degree f have the Eagon–Northcott table
    /// `β_{i,i+1} = i C(f, i+1)`.
    #[test]
    fn scrolls_have_eagon_northcott_tables(a in proptest::collection::vec(1u32..4, 1..3)) {
        let f: u32 = a.iter().sum();
        prop_assume!((2..=6).contains(&f));
        let ideal = build_ideal(PrimeField::default_field(), &VarietySpec::scroll(&a)).unwrap();
        let t = betti_table(&ideal, 0, f).unwrap();
        for i in 1..=f {
            prop_assert_eq!(t.get(i, i + 1), Some(i as u64 * binomial(f as u64, i as u64 + 1)));
        }
        prop_assert!(t.nonzero().all(|((i, d), _)| i == 0 || d == i + 1));
    }

    #[test]
    fn partial_elimination_filtration_and_oracle(seed in 0u64..5_000, n in 2usize..5, count in 1usize..4) {
        let i = random_forms(seed, n, count, &[2, 3]);
        prop_assert!(PeiFiltration::compute(&i, 3).unwrap().is_increasing());
        // generator multiples only: no Gröbner basis enters the oracle
        let oracle = DegreewisePei::compute(&i, 6, BasisSource::Generators).unwrap();
        for row in compare_with_oracle(&i, 3, &oracle).unwrap() {
            prop_assert!(row.agree, "level {}: {:?}", row.level, row.dims);
        }
    }

    #[test]
    fn ideal_files_round_trip(seed in 0u64..5_000, n in 1usize..6, count in 0usize..4) {
        let i = random_forms(seed, n, count, &[1, 2, 3]);
        let AnyIdeal::Prime(j) = parse_ideal_file(&write_ideal(&i)).unwrap() else { panic!("field changed") };
        prop_assert_eq!(i.gens(), j.gens());
        prop_assert_eq!(i.ring().vars(), j.ring().vars());
    }
}

#[test]
fn oracle_sources_agree() {
    let i = random_forms(7, 4, 3, &[2]);
    let a = DegreewisePei::compute(&i, 6, BasisSource::NormalForms).unwrap();
    let b = DegreewisePei::compute(&i, 6, BasisSource::Generators).unwrap();
    for lvl in 0..=3 {
        for e in 0..=6 - lvl {
            assert_eq!(a.dim_level(lvl, e), b.dim_level(lvl, e));
        }
    }
}
