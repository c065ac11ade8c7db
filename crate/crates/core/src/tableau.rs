//! Tableaux `A ⊂ W ⊗ V*`, their Cartan characters, and the symbol
//! presentation by relation coefficients.
//!
//! Elements of `A` are `r x n` matrices `π^a_i` (row `a` indexes `W`, column
//! `i` indexes `V*`). A [`BasisPair`] `(g, h)` re-expresses an element as
//! `h⁻¹ · π · g⁻¹`, so `g` is the change of basis `ũ^i = g^i_j u^j` on `V*`
//! and the columns of `h` are the new basis vectors of `W`.
//!
//! All index-carrying domain types ([`CoefficientKey`], [`CartanCharacters::s`])
//! use 1-based indices, matching the notation `B^{a,λ}_{i,b}` and the file
//! formats. Matrix storage is 0-based.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

/// Default number of random candidates when searching for generic bases.
pub const DEFAULT_TRIALS: usize = 32;
/// Entries of random basis candidates are drawn from `[-9, 9]`.
pub const BASIS_ENTRY_BOUND: i64 = 9;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanCharacters(Vec<usize>);

impl CartanCharacters {
    /// Accepts only weakly decreasing sequences.
    pub fn new(s: Vec<usize>) -> Result<Self> {
        let c = CartanCharacters(s);
        if !c.is_weakly_decreasing() {
            return Err(Error::InvalidCharacters(format!("{:?} is not weakly decreasing", c.0)));
        }
        Ok(c)
    }

    /// Characters measured in an arbitrary (possibly non-generic) basis.
    pub(crate) fn from_counts(s: Vec<usize>) -> Self {
        CartanCharacters(s)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `s_k`, 1-based; zero past `n`.
    pub fn s(&self, k: usize) -> usize {
        assert!(k >= 1, "characters are 1-based");
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Index of the last nonzero character, 0 when all vanish.
    pub fn ell(&self) -> usize {
        self.0.iter().rposition(|&x| x > 0).map_or(0, |p| p + 1)
    }

    pub fn dim(&self) -> usize {
        self.0.iter().sum()
    }

    /// `s_1 + 2 s_2 + ... + n s_n`.
    pub fn cartan_bound(&self) -> usize {
        self.0.iter().enumerate().map(|(k, s)| (k + 1) * s).sum()
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl std::fmt::Display for CartanCharacters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Change of basis on `V*` (`g`, `n x n`) and on `W` (`h`, `r x r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPair {
    g: RatMatrix,
    h: RatMatrix,
    g_inv: RatMatrix,
    h_inv: RatMatrix,
}

impl BasisPair {
    pub fn new(g: RatMatrix, h: RatMatrix) -> Result<Self> {
        if !g.is_square() || !h.is_square() {
            return Err(Error::InvalidBasis("basis matrices must be square".into()));
        }
        let g_inv = g.invert().map_err(|_| Error::InvalidBasis("g is singular".into()))?;
        let h_inv = h.invert().map_err(|_| Error::InvalidBasis("h is singular".into()))?;
        Ok(BasisPair { g, h, g_inv, h_inv })
    }

    pub fn identity(r: usize, n: usize) -> Self {
        BasisPair {
            g: RatMatrix::identity(n),
            h: RatMatrix::identity(r),
            g_inv: RatMatrix::identity(n),
            h_inv: RatMatrix::identity(r),
        }
    }

    pub fn g(&self) -> &RatMatrix {
        &self.g
    }

    pub fn h(&self) -> &RatMatrix {
        &self.h
    }

    pub fn r(&self) -> usize {
        self.h.rows()
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn with_g(&self, g: RatMatrix) -> Result<Self> {
        BasisPair::new(g, self.h.clone())
    }

    pub fn with_h(&self, h: RatMatrix) -> Result<Self> {
        BasisPair::new(self.g.clone(), h)
    }

    /// Coordinates of `π` in this basis: `h⁻¹ π g⁻¹`.
    pub fn to_basis(&self, pi: &RatMatrix) -> RatMatrix {
        self.h_inv.matmul(pi).and_then(|m| m.matmul(&self.g_inv)).expect("shape checked by caller")
    }

    /// Inverse of [`BasisPair::to_basis`].
    pub fn from_basis(&self, pi: &RatMatrix) -> RatMatrix {
        self.h.matmul(pi).and_then(|m| m.matmul(&self.g)).expect("shape checked by caller")
    }

    fn check_shape(&self, r: usize, n: usize) -> Result<()> {
        if self.r() != r || self.n() != n {
            return Err(Error::InvalidBasis(format!(
                "basis is for r={}, n={} but tableau has r={r}, n={n}",
                self.r(),
                self.n()
            )));
        }
        Ok(())
    }
}

/// A tableau, stored as a basis of `A` (reduced, so equal subspaces compare equal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    r: usize,
    n: usize,
    basis: Vec<RatMatrix>,
}

fn flatten(m: &RatMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

impl Tableau {
    pub fn from_spanning_set(r: usize, n: usize, mats: Vec<RatMatrix>) -> Result<Self> {
        for m in &mats {
            if m.rows() != r || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "spanning matrix is {}x{}, expected {r}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if mats.is_empty() || r * n == 0 {
            return Ok(Tableau { r, n, basis: Vec::new() });
        }
        let stacked = RatMatrix::from_rows(mats.iter().map(flatten).collect());
        let (red, pivots) = stacked.rref();
        let basis = (0..pivots.len())
            .map(|k| RatMatrix::from_vec(r, n, red.row(k).to_vec()).expect("row length r*n"))
            .collect();
        Ok(Tableau { r, n, basis })
    }

    pub fn zero(r: usize, n: usize) -> Self {
        Tableau { r, n, basis: Vec::new() }
    }

    /// All of `W ⊗ V*`.
    pub fn full(r: usize, n: usize) -> Self {
        let mut mats = Vec::with_capacity(r * n);
        for a in 0..r {
            for i in 0..n {
                let mut m = RatMatrix::zeros(r, n);
                m.set(a, i, Rational::one());
                mats.push(m);
            }
        }
        Tableau { r, n, basis: mats }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    /// `dim H^1(A) = r n - dim A`.
    pub fn dim_h1(&self) -> usize {
        self.r * self.n - self.dim()
    }

    pub fn contains(&self, pi: &RatMatrix) -> bool {
        if pi.rows() != self.r || pi.cols() != self.n {
            return false;
        }
        if pi.is_zero() {
            return true;
        }
        let mut rows: Vec<Vec<Rational>> = self.basis.iter().map(flatten).collect();
        rows.push(flatten(pi));
        RatMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn same_subspace(&self, other: &Tableau) -> bool {
        self.r == other.r && self.n == other.n && self.basis == other.basis
    }

    /// The same subspace written in the coordinates of `basis`.
    pub fn in_basis(&self, basis: &BasisPair) -> Result<Tableau> {
        basis.check_shape(self.r, self.n)?;
        Tableau::from_spanning_set(self.r, self.n, self.basis.iter().map(|m| basis.to_basis(m)).collect())
    }

    /// Rank of the projection of `A` onto its first `k` columns.
    fn prefix_rank(&self, k: usize) -> usize {
        if k == 0 || self.basis.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|m| (0..self.r).flat_map(|a| (0..k).map(move |i| m.get(a, i).clone())).collect())
            .collect();
        RatMatrix::from_rows(rows).rank()
    }

    /// Characters in the current coordinates.
    fn characters_here(&self) -> CartanCharacters {
        let mut prev = 0;
        let mut s = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            let rk = self.prefix_rank(k);
            s.push(rk - prev);
            prev = rk;
        }
        CartanCharacters::from_counts(s)
    }

    /// Whether the generator entries `π^a_i`, `a ≤ s_i`, `i ≤ k`, are
    /// coordinates on the projection to the first `k` columns for every `k`.
    fn staircase_holds(&self, chars: &CartanCharacters) -> bool {
        let mut coords: Vec<(usize, usize)> = Vec::new();
        for k in 1..=self.n {
            coords.extend((0..chars.s(k)).map(|a| (a, k - 1)));
            if coords.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Rational>> =
                self.basis.iter().map(|m| coords.iter().map(|&(a, i)| m.get(a, i).clone()).collect()).collect();
            if RatMatrix::from_rows(rows).rank() != coords.len() {
                return false;
            }
        }
        true
    }

    /// Projection onto the first `ell` columns, a tableau in `W ⊗ U*`.
    fn truncate(&self, ell: usize) -> Tableau {
        let mats = self.basis.iter().map(|m| m.column_range(0, ell)).collect();
        Tableau::from_spanning_set(self.r, ell, mats).expect("shapes agree")
    }
}

/// `s_k = dim π_{≤k}(A) − dim π_{≤k−1}(A)` in the coordinates of `basis`.
pub fn characters_in_basis(tableau: &Tableau, basis: &BasisPair) -> Result<CartanCharacters> {
    Ok(tableau.in_basis(basis)?.characters_here())
}

/// Searches for a generic basis pair.
///
/// The `V*` basis is the one with lexicographically largest characters among
/// the identity and `trials` seeded random integer candidates (ties keep the
/// earlier candidate, so an already generic identity basis is kept). The `W`
/// basis is the identity when the generator staircase is already packed to the
/// top, otherwise the first seeded random candidate for which it is.
pub fn find_generic_basis(tableau: &Tableau, seed: u64, trials: usize) -> (BasisPair, CartanCharacters) {
    let (r, n) = (tableau.r, tableau.n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_g = RatMatrix::identity(n);
    let mut best = tableau.characters_here();
    for _ in 0..trials {
        let g = RatMatrix::random_invertible_with(n, &mut rng, BASIS_ENTRY_BOUND);
        let pair = BasisPair::new(g.clone(), RatMatrix::identity(r)).expect("invertible by construction");
        let chars = characters_in_basis(tableau, &pair).expect("shapes agree");
        if chars > best {
            best = chars;
            best_g = g;
        }
    }
    let pair = BasisPair::new(best_g, RatMatrix::identity(r)).expect("invertible by construction");
    let in_g = tableau.in_basis(&pair).expect("shapes agree");
    if in_g.staircase_holds(&best) {
        return (pair, best);
    }
    for _ in 0..trials.max(8) {
        let h = RatMatrix::random_invertible_with(r, &mut rng, BASIS_ENTRY_BOUND);
        let candidate = pair.with_h(h).expect("invertible by construction");
        if tableau.in_basis(&candidate).expect("shapes agree").staircase_holds(&best) {
            return (candidate, best);
        }
    }
    (pair, best)
}

/// Index quadruple `(a, λ, i, b)` of a symbol coefficient `B^{a,λ}_{i,b}`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoefficientKey {
    pub a: usize,
    pub lambda: usize,
    pub i: usize,
    pub b: usize,
}

impl CoefficientKey {
    pub fn new(a: usize, lambda: usize, i: usize, b: usize) -> Self {
        CoefficientKey { a, lambda, i, b }
    }
}

impl std::fmt::Display for CoefficientKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "B[{},{},{},{}]", self.a, self.lambda, self.i, self.b)
    }
}

/// The relations `π^a_i = B^{a,λ}_{i,b} π^b_λ` (`a > s_i`) cutting out `A` in
/// a generic basis. Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPresentation {
    r: usize,
    characters: CartanCharacters,
    coefficients: BTreeMap<CoefficientKey, Rational>,
}

impl SymbolPresentation {
    pub fn new(
        r: usize,
        characters: CartanCharacters,
        coefficients: impl IntoIterator<Item = (CoefficientKey, Rational)>,
    ) -> Result<Self> {
        if !characters.is_weakly_decreasing() {
            return Err(Error::InvalidCharacters(format!("{characters} is not weakly decreasing")));
        }
        if characters.s(1) > r {
            return Err(Error::InvalidCharacters(format!("s_1 = {} exceeds r = {r}", characters.s(1))));
        }
        let n = characters.n();
        let mut map = BTreeMap::new();
        for (key, value) in coefficients {
            let CoefficientKey { a, lambda, i, b } = key;
            let valid = lambda >= 1
                && lambda <= i
                && i <= n
                && b >= 1
                && b <= characters.s(lambda)
                && a > characters.s(i)
                && a <= r;
            if !valid {
                return Err(Error::InvalidPresentation(format!(
                    "{key} is outside the staircase (need λ ≤ i ≤ n, b ≤ s_λ, s_i < a ≤ r)"
                )));
            }
            if map.insert(key, value.clone()).is_some() {
                return Err(Error::InvalidPresentation(format!("{key} given twice")));
            }
        }
        map.retain(|_, v: &mut Rational| !v.is_zero());
        Ok(SymbolPresentation { r, characters, coefficients: map })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.characters.n()
    }

    pub fn characters(&self) -> &CartanCharacters {
        &self.characters
    }

    pub fn coefficients(&self) -> &BTreeMap<CoefficientKey, Rational> {
        &self.coefficients
    }

    /// `B^{a,λ}_{i,b}`, zero when not stored.
    pub fn coefficient(&self, key: CoefficientKey) -> Rational {
        self.coefficients.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// The element of `A` whose generator coordinates are all zero except
    /// `z^b_λ = 1` (the `(λ, b)` column of the monomorphism `A* → W ⊗ V*`).
    pub fn generator(&self, lambda: usize, b: usize) -> RatMatrix {
        let (r, n) = (self.r, self.n());
        let mut m = RatMatrix::zeros(r, n);
        m.set(b - 1, lambda - 1, Rational::one());
        for i in lambda..=n {
            for a in self.characters.s(i) + 1..=r {
                let c = self.coefficient(CoefficientKey::new(a, lambda, i, b));
                if !c.is_zero() {
                    m.set(a - 1, i - 1, c);
                }
            }
        }
        m
    }

    /// Generator index pairs `(λ, b)` with `b ≤ s_λ`, in column order.
    pub fn generator_indices(&self) -> Vec<(usize, usize)> {
        (1..=self.n()).flat_map(|l| (1..=self.characters.s(l)).map(move |b| (l, b))).collect()
    }
}

/// Solves for the coefficients of the symbol relations in `basis`.
pub fn extract_symbol_coefficients(tableau: &Tableau, basis: &BasisPair) -> Result<SymbolPresentation> {
    let local = tableau.in_basis(basis)?;
    let chars = local.characters_here();
    if !chars.is_weakly_decreasing() {
        return Err(Error::NonGenericBasis(format!("characters {chars} are not weakly decreasing")));
    }
    if !local.staircase_holds(&chars) {
        return Err(Error::NonGenericBasis("generator entries do not determine the tableau".into()));
    }
    let (r, n) = (local.r, local.n);
    let gens: Vec<(usize, usize)> =
        (1..=n).flat_map(|l| (1..=chars.s(l)).map(move |b| (l, b))).collect();
    let d = gens.len();
    if d == 0 {
        return SymbolPresentation::new(r, chars, std::iter::empty());
    }
    // coords[k][g] = generator coordinate g of basis element k
    let coords = RatMatrix::from_rows(
        local.basis.iter().map(|m| gens.iter().map(|&(l, b)| m.get(b - 1, l - 1).clone()).collect()).collect(),
    );
    let x = coords.invert().map_err(|_| Error::NonGenericBasis("generator coordinates are dependent".into()))?;
    let mut coefficients = Vec::new();
    for (g, &(lambda, b)) in gens.iter().enumerate() {
        let mut e = RatMatrix::zeros(r, n);
        for k in 0..d {
            e.add_scaled(x.get(g, k), &local.basis[k]);
        }
        for i in 1..=n {
            for a in chars.s(i) + 1..=r {
                let c = e.get(a - 1, i - 1);
                if c.is_zero() {
                    continue;
                }
                if i < lambda {
                    return Err(Error::NonGenericBasis(format!(
                        "entry ({a},{i}) depends on a generator of column {lambda}"
                    )));
                }
                coefficients.push((CoefficientKey::new(a, lambda, i, b), c.clone()));
            }
        }
    }
    SymbolPresentation::new(r, chars, coefficients)
}

/// Spanning set of the tableau cut out by `p`, one matrix per generator `z^b_λ`.
pub fn tableau_from_coefficients(p: &SymbolPresentation) -> Tableau {
    let mats = p.generator_indices().into_iter().map(|(l, b)| p.generator(l, b)).collect();
    Tableau::from_spanning_set(p.r, p.n(), mats).expect("generator shapes agree")
}

/// Decomposes `π ∈ A` (given in the original coordinates) as
/// `π = Σ_λ B(u^λ)(·) z_λ` in the coordinates of `basis`; returns `(λ, z_λ)`
/// for `λ = 1..=ℓ`, where `z_λ` holds the top `s_λ` entries of column `λ`.
pub fn decompose_element(
    tableau: &Tableau,
    basis: &BasisPair,
    pi: &RatMatrix,
) -> Result<Vec<(usize, Vec<Rational>)>> {
    let p = extract_symbol_coefficients(tableau, basis)?;
    if pi.rows() != tableau.r || pi.cols() != tableau.n {
        return Err(Error::DimensionMismatch(format!(
            "element is {}x{}, tableau is {}x{}",
            pi.rows(),
            pi.cols(),
            tableau.r,
            tableau.n
        )));
    }
    let local = basis.to_basis(pi);
    let chars = p.characters().clone();
    let mut rebuilt = RatMatrix::zeros(tableau.r, tableau.n);
    let mut parts = Vec::new();
    for lambda in 1..=chars.ell() {
        let mut z = vec![Rational::zero(); tableau.r];
        for b in 1..=chars.s(lambda) {
            let coef = local.get(b - 1, lambda - 1).clone();
            rebuilt.add_scaled(&coef, &p.generator(lambda, b));
            z[b - 1] = coef;
        }
        parts.push((lambda, z));
    }
    if rebuilt != local {
        return Err(Error::NotInTableau);
    }
    Ok(parts)
}

/// `A|_U`: the image of `A` in `W ⊗ U*`, `U* = ⟨u^1, …, u^ℓ⟩`, in the
/// coordinates of `basis`.
pub fn restrict_to_u(tableau: &Tableau, basis: &BasisPair, ell: usize) -> Result<Tableau> {
    if ell > tableau.n {
        return Err(Error::DimensionMismatch(format!("ell = {ell} exceeds n = {}", tableau.n)));
    }
    Ok(tableau.in_basis(basis)?.truncate(ell))
}

/// Re-expresses a presentation after the change `ũ^i = g^i_j u^j` on `V*`,
/// keeping the `W` basis.
pub fn change_v_basis(p: &SymbolPresentation, g: &RatMatrix) -> Result<SymbolPresentation> {
    let t = tableau_from_coefficients(p);
    let pair = BasisPair::new(g.clone(), RatMatrix::identity(p.r()))?;
    extract_symbol_coefficients(&t, &pair)
}

/// Re-expresses a presentation after changing the `W` basis to the columns of `h`.
pub fn change_w_basis(p: &SymbolPresentation, h: &RatMatrix) -> Result<SymbolPresentation> {
    let t = tableau_from_coefficients(p);
    let pair = BasisPair::new(RatMatrix::identity(p.n()), h.clone())?;
    extract_symbol_coefficients(&t, &pair)
}
