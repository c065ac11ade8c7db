mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tableaux::involutivity::{build_b_array, prolongation_dimension, quadratic_criterion, Variant};
use tableaux::moduli::{export_ideal, free_variables, presentation_at, Poly};
use tableaux::tableau::{extract_symbol_coefficients, BasisPair};
use tableaux::*;

fn presentation(seed: u64, n: usize, r: usize) -> SymbolPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chars = random_characters(&mut rng, n, r);
    random_endovolutive(&mut rng, r, &chars, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficients_round_trip(seed in any::<u64>(), n in 1usize..=4, r in 1usize..=4) {
        let p = presentation(seed, n, r);
        let t = tableau_from_coefficients(&p);
        prop_assert_eq!(t.dim(), p.characters().dim());
        let back = extract_symbol_coefficients(&t, &BasisPair::identity(r, n)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn prolongation_never_exceeds_bound(seed in any::<u64>(), n in 1usize..=4, r in 1usize..=4) {
        let p = presentation(seed, n, r);
        let (d1, _) = prolongation_dimension(&tableau_from_coefficients(&p));
        prop_assert!(d1 <= p.characters().cartan_bound());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 1usize..=4, r in 1usize..=4) {
        let p = presentation(seed, n, r);
        let doc = TableauDocument::Coefficients(p);
        prop_assert_eq!(TableauDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn proof_range_is_stricter(seed in any::<u64>(), n in 1usize..=4, r in 1usize..=4) {
        let b = build_b_array(&presentation(seed, n, r));
        let th = quadratic_criterion(&b, Variant::Theorem).unwrap();
        let pr = quadratic_criterion(&b, Variant::Proof).unwrap();
        prop_assert!(th.len() <= pr.len());
        prop_assert!(th.iter().all(|v| pr.contains(v)));
    }

    #[test]
    fn ideal_matches_direct_criterion(seed in any::<u64>(), n in 1usize..=4, r in 1usize..=3) {
        let p = presentation(seed, n, r);
        let chars = p.characters().clone();
        let point: std::collections::BTreeMap<_, _> = free_variables(&chars)
            .into_iter()
            .map(|k| (k, p.coefficient(k)))
            .collect();
        let q = presentation_at(&chars, &point).unwrap();
        let vanishes = export_ideal(&chars, Variant::Theorem).iter().all(|g| g.poly.evaluate(&point).is_zero());
        let empty = quadratic_criterion(&build_b_array(&q), Variant::Theorem).unwrap().is_empty();
        prop_assert_eq!(vanishes, empty);
    }
}

#[test]
fn generators_print_and_parse() {
    for s in [vec![3, 1, 0], vec![1, 1, 0, 0], vec![2, 2, 1, 0]] {
        let chars = CartanCharacters::new(s).unwrap();
        for g in export_ideal(&chars, Variant::Proof) {
            let text = g.poly.to_string();
            let back: Poly = text.parse().unwrap();
            assert_eq!(back, g.poly, "{text}");
        }
    }
}
