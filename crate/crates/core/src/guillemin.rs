//! Guillemin normal form: the subspaces `W^-_i`, `W^-(φ)`, `W^1(φ)`, the
//! symbol maps `B(φ)(v)`, and the commutativity and restriction checks.
//!
//! Everything here works in the bases of a [`BArray`], i.e. a generic,
//! endovolutive presentation. `W^-_i` is spanned by the first `s_i` basis
//! vectors of `W`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involutivity::{cartan_test, prolongation_basis, prolongation_dimension, BArray, CartanOptions};
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::subspace::Subspace;
use crate::tableau::{find_generic_basis, restrict_to_u, Tableau};

/// Default number of random covectors tried by [`dim_w1_generic`].
pub const DEFAULT_PHI_TRIALS: usize = 16;
const PHI_ENTRY_BOUND: i64 = 9;

/// An element `φ = φ_i u^i` of `V*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covector(Vec<Rational>);

impl Covector {
    pub fn new(phi: Vec<Rational>) -> Self {
        Covector(phi)
    }

    pub fn from_i64(phi: &[i64]) -> Self {
        Covector(phi.iter().map(|&x| Rational::from(x)).collect())
    }

    /// The dual basis element `u^k` (1-based).
    pub fn basis(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n, "covector index out of range");
        let mut phi = vec![Rational::zero(); n];
        phi[k - 1] = Rational::one();
        Covector(phi)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `φ_k`, 1-based; zero past the end.
    pub fn get(&self, k: usize) -> Rational {
        self.0.get(k - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Smallest `k` with `φ_k ≠ 0` among the first `upto` coordinates.
    pub fn leading_index(&self, upto: usize) -> Option<usize> {
        self.0.iter().take(upto).position(|x| !x.is_zero()).map(|k| k + 1)
    }
}

fn check_len(b: &BArray, len: usize, what: &str) -> Result<()> {
    if len != b.n() {
        return Err(Error::DimensionMismatch(format!("{what} has length {len}, n = {}", b.n())));
    }
    Ok(())
}

/// `W^-_i`, the span of `w_1, …, w_{s_i}` (1-based `i`; zero for `i > ℓ`).
pub fn w_minus(b: &BArray, i: usize) -> Subspace {
    Subspace::coordinate(b.r(), 0..b.characters().s(i))
}

/// `W^+_i`, the span of `w_{s_i+1}, …, w_r`.
pub fn w_plus(b: &BArray, i: usize) -> Subspace {
    Subspace::coordinate(b.r(), b.characters().s(i)..b.r())
}

/// `W^-(φ) = W^-_κ` with `κ` the first index where `φ` is nonzero.
pub fn w_minus_of_phi(b: &BArray, phi: &Covector) -> Result<Subspace> {
    check_len(b, phi.n(), "covector")?;
    let kappa = phi.leading_index(b.n()).ok_or(Error::ZeroCovector)?;
    Ok(w_minus(b, kappa))
}

/// `B(φ)(v) = Σ_{λ ≤ ℓ, i} φ_λ v^i B^λ_i`.
pub fn b_of_phi(b: &BArray, phi: &Covector, v: &[Rational]) -> Result<RatMatrix> {
    check_len(b, phi.n(), "covector")?;
    check_len(b, v.len(), "vector")?;
    let mut out = RatMatrix::zeros(b.r(), b.r());
    for lambda in 1..=b.ell() {
        let pl = phi.get(lambda);
        if pl.is_zero() {
            continue;
        }
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                out.add_scaled(&(&pl * vi), &b.block(lambda, i + 1));
            }
        }
    }
    Ok(out)
}

/// `W^1(φ)` for `φ` taken modulo `Y*`: the `z ∈ W^-(φ)` with
/// `(Σ_λ φ_λ B^λ_μ − φ_μ I) z = 0` for every `μ ≤ ℓ`.
pub fn w1_of_phi(b: &BArray, phi: &Covector) -> Result<Subspace> {
    check_len(b, phi.n(), "covector")?;
    let (r, ell) = (b.r(), b.ell());
    let kappa = phi.leading_index(ell).ok_or(Error::ZeroCovector)?;
    let width = b.characters().s(kappa);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for mu in 1..=ell {
        let mut m = RatMatrix::zeros(r, r);
        for lambda in 1..=ell {
            m.add_scaled(&phi.get(lambda), &b.block(lambda, mu));
        }
        m.add_scaled(&-phi.get(mu), &RatMatrix::identity(r));
        rows.extend((0..r).map(|a| m.row(a)[..width].to_vec()));
    }
    let kernel = if width == 0 { Vec::new() } else { RatMatrix::from_rows(rows).kernel_basis() };
    let embedded: Vec<Vec<Rational>> = kernel
        .into_iter()
        .map(|mut z| {
            z.resize(r, Rational::zero());
            z
        })
        .collect();
    Ok(Subspace::span(r, &embedded))
}

/// Solution space of `π ∈ A`, `π_μ = φ_μ z` for `μ ≤ ell`, in the unknowns
/// `(c_1, …, c_d, z)` where `π = Σ c_k M_k` over the tableau basis.
fn rank_one_system(tableau: &Tableau, phi: &Covector, ell: usize) -> Vec<Vec<Rational>> {
    let (r, d) = (tableau.r(), tableau.dim());
    let mut rows = Vec::with_capacity(r * ell);
    for mu in 0..ell {
        for a in 0..r {
            let mut row: Vec<Rational> = tableau.basis().iter().map(|m| m.get(a, mu).clone()).collect();
            row.resize(d + r, Rational::zero());
            row[d + a] = -phi.as_slice()[mu].clone();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return (0..d + r)
            .map(|k| {
                let mut e = vec![Rational::zero(); d + r];
                e[k] = Rational::one();
                e
            })
            .collect();
    }
    RatMatrix::from_rows(rows).kernel_basis()
}

/// `W^1(φ)` straight from its definition, `{ z : z ⊗ φ + J ∈ A, J ∈ W ⊗ Y* }`,
/// for a tableau written in coordinates where `U* = ⟨u^1, …, u^ell⟩`.
pub fn w1_by_definition(tableau: &Tableau, phi: &Covector, ell: usize) -> Result<Subspace> {
    if phi.n() != tableau.n() || ell > tableau.n() {
        return Err(Error::DimensionMismatch(format!(
            "covector length {}, ell {ell}, n = {}",
            phi.n(),
            tableau.n()
        )));
    }
    if phi.leading_index(ell).is_none() {
        return Err(Error::ZeroCovector);
    }
    let d = tableau.dim();
    let zs: Vec<Vec<Rational>> = rank_one_system(tableau, phi, ell).into_iter().map(|x| x[d..].to_vec()).collect();
    Ok(Subspace::span(tableau.r(), &zs))
}

/// An element `π = z ⊗ φ + J` of `A^1(φ)` over a given `z ∈ W^1(φ)`.
pub fn lift_to_a1(tableau: &Tableau, phi: &Covector, ell: usize, z: &[Rational]) -> Result<RatMatrix> {
    let (r, n, d) = (tableau.r(), tableau.n(), tableau.dim());
    if z.len() != r || phi.n() != n || ell > n {
        return Err(Error::DimensionMismatch("lift arguments".into()));
    }
    // columns μ ≤ ell of Σ c_k M_k must equal φ_μ z
    let mut rows = Vec::with_capacity(r * ell);
    let mut rhs = Vec::with_capacity(r * ell);
    for mu in 0..ell {
        for a in 0..r {
            rows.push(tableau.basis().iter().map(|m| m.get(a, mu).clone()).collect::<Vec<_>>());
            rhs.push(&phi.as_slice()[mu] * &z[a]);
        }
    }
    let c = if d == 0 || rows.is_empty() {
        if rhs.iter().any(|x| !x.is_zero()) {
            return Err(Error::Inconsistent);
        }
        vec![Rational::zero(); d]
    } else {
        RatMatrix::from_rows(rows).solve(&rhs)?
    };
    let mut pi = RatMatrix::zeros(r, n);
    for (ck, m) in c.iter().zip(tableau.basis()) {
        pi.add_scaled(ck, m);
    }
    Ok(pi)
}

/// A random element of `U*` with entries in `[-9, 9]`, not identically zero.
pub fn random_u_covector<R: Rng>(n: usize, ell: usize, rng: &mut R) -> Covector {
    loop {
        let mut phi = vec![Rational::zero(); n];
        for x in phi.iter_mut().take(ell) {
            *x = Rational::from(rng.gen_range(-PHI_ENTRY_BOUND..=PHI_ENTRY_BOUND));
        }
        let c = Covector(phi);
        if ell == 0 || c.leading_index(ell).is_some() {
            return c;
        }
    }
}

/// The most frequent `dim W^1(φ)` over `trials` random `φ ∈ U*`; ties go to
/// the smaller dimension. Returns 0 when `ℓ = 0`.
pub fn dim_w1_generic(b: &BArray, seed: u64, trials: usize) -> usize {
    if b.ell() == 0 {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..trials.max(1) {
        let phi = random_u_covector(b.n(), b.ell(), &mut rng);
        let d = w1_of_phi(b, &phi).expect("nonzero on U*").dim();
        *counts.entry(d).or_default() += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    counts.into_iter().find(|&(_, c)| c == best).map(|(d, _)| d).unwrap_or(0)
}

/// First failure found by [`check_gnf_commutativity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GnfWitness {
    /// `B(φ)(v) z ∉ W^1(φ)` for `z ∈ W^1(φ)`.
    NotInvariant { v: Vec<Rational>, z: Vec<Rational> },
    /// `[B(φ)(v), B(φ)(ṽ)] z ≠ 0` for `z ∈ W^1(φ)`.
    NotCommuting { v: Vec<Rational>, v_tilde: Vec<Rational>, z: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnfCheck {
    pub dim_w1: usize,
    pub vectors_checked: usize,
    pub witness: Option<GnfWitness>,
}

impl GnfCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that every `B(φ)(v)` preserves `W^1(φ)` and that the maps commute
/// there, over `samples` together with the coordinate basis of `V`.
pub fn check_gnf_commutativity(b: &BArray, phi: &Covector, samples: &[Vec<Rational>]) -> Result<GnfCheck> {
    let w1 = w1_of_phi(b, phi)?;
    let n = b.n();
    let mut vs: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            let mut e = vec![Rational::zero(); n];
            e[k] = Rational::one();
            e
        })
        .collect();
    for v in samples {
        check_len(b, v.len(), "sample vector")?;
        vs.push(v.clone());
    }
    let maps: Vec<RatMatrix> = vs.iter().map(|v| b_of_phi(b, phi, v)).collect::<Result<_>>()?;
    let mut check = GnfCheck { dim_w1: w1.dim(), vectors_checked: vs.len(), witness: None };
    for (v, m) in vs.iter().zip(&maps) {
        for z in w1.basis() {
            if !w1.contains(&m.mul_vec(z)?) {
                check.witness = Some(GnfWitness::NotInvariant { v: v.clone(), z: z.clone() });
                return Ok(check);
            }
        }
    }
    for p in 0..vs.len() {
        for q in p + 1..vs.len() {
            let comm = maps[p].matmul(&maps[q])?.sub(&maps[q].matmul(&maps[p])?)?;
            for z in w1.basis() {
                if comm.mul_vec(z)?.iter().any(|x| !x.is_zero()) {
                    check.witness = Some(GnfWitness::NotCommuting {
                        v: vs[p].clone(),
                        v_tilde: vs[q].clone(),
                        z: z.clone(),
                    });
                    return Ok(check);
                }
            }
        }
    }
    Ok(check)
}

/// Outcome of comparing `A^(1)` with `(A|_U)^(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub ell: usize,
    pub dim_a1: usize,
    pub dim_a1_restricted: usize,
    /// Rank of the natural map `A^(1) → (A|_U)^(1)`.
    pub map_rank: usize,
    pub restricted_involutive: bool,
}

impl RestrictionCheck {
    /// The map is bijective and `A|_U` is involutive.
    pub fn holds(&self) -> bool {
        self.dim_a1 == self.dim_a1_restricted && self.map_rank == self.dim_a1 && self.restricted_involutive
    }
}

/// Restricts `A` to `U` in a generic basis and compares prolongations.
pub fn check_theorem_a(tableau: &Tableau, opts: &CartanOptions) -> Result<RestrictionCheck> {
    let (basis, chars) = find_generic_basis(tableau, opts.seed, opts.trials);
    let ell = chars.ell();
    let local = tableau.in_basis(&basis)?;
    let restricted = restrict_to_u(tableau, &basis, ell)?;
    let (dim_a1, _) = prolongation_dimension(&local);
    let (dim_a1_restricted, _) = prolongation_dimension(&restricted);

    // P^a_{ij} = Σ_k x_{kj} (M_k)^a_i, kept for i, j ≤ ℓ
    let (r, n) = (local.r(), local.n());
    let images: Vec<Vec<Rational>> = prolongation_basis(&local)
        .into_iter()
        .map(|x| {
            let mut img = Vec::with_capacity(r * ell * ell);
            for a in 0..r {
                for i in 0..ell {
                    for j in 0..ell {
                        let mut s = Rational::zero();
                        for (k, m) in local.basis().iter().enumerate() {
                            let c = &x[k * n + j];
                            if !c.is_zero() {
                                s += c * m.get(a, i);
                            }
                        }
                        img.push(s);
                    }
                }
            }
            img
        })
        .collect();
    let map_rank = if images.is_empty() || ell == 0 { 0 } else { RatMatrix::from_rows(images).rank() };
    let restricted_involutive = cartan_test(&restricted, opts).involutive;
    Ok(RestrictionCheck { ell, dim_a1, dim_a1_restricted, map_rank, restricted_involutive })
}
