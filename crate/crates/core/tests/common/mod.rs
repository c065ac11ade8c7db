#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tableaux::moduli::is_generic_presentation;
use tableaux::*;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn k(a: usize, l: usize, i: usize, b: usize) -> CoefficientKey {
    CoefficientKey::new(a, l, i, b)
}

pub fn q(x: i64) -> Rational {
    Rational::from(x)
}

/// Weakly decreasing characters with `s_1 ≤ r`.
pub fn random_characters<R: Rng>(rng: &mut R, n: usize, r: usize) -> CartanCharacters {
    let mut s: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=r)).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    CartanCharacters::new(s).unwrap()
}

/// Random values in `[-bound, bound]` on every endovolutive slot.
pub fn random_endovolutive<R: Rng>(rng: &mut R, r: usize, chars: &CartanCharacters, bound: i64) -> SymbolPresentation {
    let n = chars.n();
    let mut coeffs = Vec::new();
    for l in 1..=chars.ell() {
        for i in l + 1..=n {
            for a in chars.s(i) + 1..=chars.s(l) {
                for b in 1..=chars.s(l) {
                    coeffs.push((k(a, l, i, b), q(rng.gen_range(-bound..=bound))));
                }
            }
        }
    }
    SymbolPresentation::new(r, chars.clone(), coeffs).unwrap()
}

/// `count` seeded random endovolutive presentations with `n ≤ n_max`,
/// `r ≤ r_max`, coefficients in `[-bound, bound]`, kept only when their own
/// basis is generic. Also returns the number of non-generic draws skipped.
pub fn generic_endovolutive_samples(
    seed: u64,
    count: usize,
    n_max: usize,
    r_max: usize,
    bound: i64,
) -> (Vec<SymbolPresentation>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut skipped = 0;
    while out.len() < count {
        let n = rng.gen_range(1..=n_max);
        let r = rng.gen_range(1..=r_max);
        let chars = random_characters(&mut rng, n, r);
        let p = random_endovolutive(&mut rng, r, &chars, bound);
        if is_generic_presentation(&p, seed, 32) {
            out.push(p);
        } else {
            skipped += 1;
        }
    }
    (out, skipped)
}

/// The three-column family with `B^1_2 = E_23`, `T_2 = t2`, `R_3 = r3` and the
/// other named slots as given.
pub fn family_310(t2: i64, r3: i64, others: &[(CoefficientKey, i64)]) -> SymbolPresentation {
    let mut entries = vec![(k(2, 1, 2, 3), q(1)), (k(2, 1, 3, 2), q(t2)), (k(3, 1, 3, 3), q(r3))];
    entries.extend(others.iter().map(|&(key, v)| (key, q(v))));
    SymbolPresentation::new(3, CartanCharacters::new(vec![3, 1, 0]).unwrap(), entries).unwrap()
}
