//! Involutivity: the prolongation oracle (Cartan's test) and the linear and
//! quadratic criteria on the symbol endomorphisms `B^λ_i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::subspace::Subspace;
use crate::tableau::{
    characters_in_basis, extract_symbol_coefficients, find_generic_basis, BasisPair, CartanCharacters,
    CoefficientKey, SymbolPresentation, Tableau, BASIS_ENTRY_BOUND, DEFAULT_TRIALS,
};

/// The `ℓ x n` grid of `r x r` blocks `B^λ_i = B(u^λ)(u_i)`.
///
/// `(B^λ_i)^a_b` is `δ^a_b` when `λ = i` and `a ≤ s_λ`, the coefficient
/// `B^{a,λ}_{i,b}` when `a > s_i`, and zero otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BArray {
    r: usize,
    n: usize,
    characters: CartanCharacters,
    blocks: Vec<RatMatrix>,
}

impl BArray {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.characters.ell()
    }

    pub fn characters(&self) -> &CartanCharacters {
        &self.characters
    }

    /// `B^λ_i`, 1-based. Rows `λ > ℓ` are identically zero.
    pub fn block(&self, lambda: usize, i: usize) -> RatMatrix {
        assert!(lambda >= 1 && i >= 1 && i <= self.n, "block index out of range");
        if lambda > self.ell() {
            return RatMatrix::zeros(self.r, self.r);
        }
        self.blocks[(lambda - 1) * self.n + (i - 1)].clone()
    }

    fn block_ref(&self, lambda: usize, i: usize) -> Option<&RatMatrix> {
        (lambda <= self.ell()).then(|| &self.blocks[(lambda - 1) * self.n + (i - 1)])
    }

    /// Recovers the presentation the array was built from.
    pub fn to_presentation(&self) -> SymbolPresentation {
        let mut coefficients = Vec::new();
        for lambda in 1..=self.ell() {
            for i in lambda..=self.n {
                let blk = self.block_ref(lambda, i).expect("lambda ≤ ell");
                for a in self.characters.s(i) + 1..=self.r {
                    for b in 1..=self.characters.s(lambda) {
                        let c = blk.get(a - 1, b - 1);
                        if !c.is_zero() {
                            coefficients.push((CoefficientKey::new(a, lambda, i, b), c.clone()));
                        }
                    }
                }
            }
        }
        SymbolPresentation::new(self.r, self.characters.clone(), coefficients).expect("built from a valid presentation")
    }

    /// First row `a > s_λ` with a nonzero entry in some block of row `λ`.
    fn endovolutivity_violation(&self) -> Option<CoefficientKey> {
        for lambda in 1..=self.ell() {
            for i in lambda..=self.n {
                let blk = self.block_ref(lambda, i).expect("lambda ≤ ell");
                for a in self.characters.s(lambda) + 1..=self.r {
                    for b in 1..=self.r {
                        if !blk.get(a - 1, b - 1).is_zero() {
                            return Some(CoefficientKey::new(a, lambda, i, b));
                        }
                    }
                }
            }
        }
        None
    }
}

pub fn build_b_array(p: &SymbolPresentation) -> BArray {
    let (r, n) = (p.r(), p.n());
    let chars = p.characters().clone();
    let ell = chars.ell();
    let mut blocks = Vec::with_capacity(ell * n);
    for lambda in 1..=ell {
        for i in 1..=n {
            let mut m = RatMatrix::zeros(r, r);
            if i == lambda {
                for a in 1..=chars.s(lambda) {
                    m.set(a - 1, a - 1, Rational::one());
                }
            }
            if i >= lambda {
                for a in chars.s(i) + 1..=r {
                    for b in 1..=chars.s(lambda) {
                        let c = p.coefficient(CoefficientKey::new(a, lambda, i, b));
                        if !c.is_zero() {
                            m.set(a - 1, b - 1, c);
                        }
                    }
                }
            }
            blocks.push(m);
        }
    }
    BArray { r, n, characters: chars, blocks }
}

/// The first stored coefficient `B^{a,λ}_{i,b}` with `a > s_λ`, if any.
pub fn endovolutivity_violation(p: &SymbolPresentation) -> Option<CoefficientKey> {
    let chars = p.characters();
    p.coefficients().keys().copied().find(|k| k.a > chars.s(k.lambda))
}

pub fn is_endovolutive(p: &SymbolPresentation) -> bool {
    endovolutivity_violation(p).is_none()
}

/// For each `λ ≤ ℓ`, the column-`λ` image of `{π ∈ A : columns 1..λ-1 vanish}`
/// (coordinates of `local`).
fn column_flag(local: &Tableau, ell: usize) -> Vec<Subspace> {
    let r = local.r();
    let basis = local.basis();
    let mut flag = Vec::with_capacity(ell);
    for lambda in 1..=ell {
        // combinations x with Σ x_k M_k vanishing on columns < λ
        let combos: Vec<Vec<Rational>> = if lambda == 1 || basis.is_empty() {
            (0..basis.len())
                .map(|k| {
                    let mut e = vec![Rational::zero(); basis.len()];
                    e[k] = Rational::one();
                    e
                })
                .collect()
        } else {
            let cols: Vec<Vec<Rational>> = basis
                .iter()
                .map(|m| (0..r).flat_map(|a| (0..lambda - 1).map(move |i| m.get(a, i).clone())).collect())
                .collect();
            RatMatrix::from_columns(r * (lambda - 1), &cols).kernel_basis()
        };
        let images: Vec<Vec<Rational>> = combos
            .iter()
            .map(|x| {
                (0..r)
                    .map(|a| {
                        x.iter()
                            .zip(basis)
                            .filter(|(c, _)| !c.is_zero())
                            .map(|(c, m)| c * m.get(a, lambda - 1))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        flag.push(Subspace::span(r, &images));
    }
    flag
}

/// A `W` basis adapted to the flag `W'_1 ⊇ … ⊇ W'_ℓ`: first a basis of
/// `W'_ℓ`, extended through each larger space, then by standard vectors.
fn adapted_w_basis(r: usize, flag: &[Subspace]) -> RatMatrix {
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let extend = |candidates: &[Vec<Rational>], chosen: &mut Vec<Vec<Rational>>| {
        for v in candidates {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if RatMatrix::from_rows(trial.clone()).rank() == trial.len() {
                *chosen = trial;
            }
        }
    };
    for space in flag.iter().rev() {
        extend(space.basis(), &mut chosen);
    }
    extend(Subspace::full(r).basis(), &mut chosen);
    RatMatrix::from_columns(r, &chosen)
}

fn try_endovolutive_in(tableau: &Tableau, g: &RatMatrix) -> Option<(BasisPair, SymbolPresentation)> {
    let r = tableau.r();
    let pair = BasisPair::new(g.clone(), RatMatrix::identity(r)).ok()?;
    let local = tableau.in_basis(&pair).ok()?;
    let chars = characters_in_basis(tableau, &pair).ok()?;
    if !chars.is_weakly_decreasing() {
        return None;
    }
    let flag = column_flag(&local, chars.ell());
    for (k, space) in flag.iter().enumerate() {
        if space.dim() != chars.s(k + 1) || (k > 0 && !flag[k - 1].contains_subspace(space)) {
            return None;
        }
    }
    let pair = pair.with_h(adapted_w_basis(r, &flag)).ok()?;
    let p = extract_symbol_coefficients(tableau, &pair).ok()?;
    is_endovolutive(&p).then_some((pair, p))
}

/// Looks for a `W` basis in which `tableau` is endovolutive.
///
/// Endovolutivity in a fixed `V*` basis depends only on the flag
/// `W^-_1 ⊇ W^-_2 ⊇ …`, which must equal the column flag `W'_λ` of the
/// tableau. The given basis is tried first (unchanged if it already works),
/// then the column flag in its `V*` basis, then the column flag in up to
/// `retries` seeded random `V*` bases with the same characters.
pub fn search_endovolutive_basis(
    tableau: &Tableau,
    basis: &BasisPair,
    retries: usize,
    seed: u64,
) -> Result<(BasisPair, SymbolPresentation)> {
    if let Ok(p) = extract_symbol_coefficients(tableau, basis) {
        if is_endovolutive(&p) {
            return Ok((basis.clone(), p));
        }
    }
    if let Some(found) = try_endovolutive_in(tableau, basis.g()) {
        return Ok(found);
    }
    let target = characters_in_basis(tableau, basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retries {
        let g = RatMatrix::random_invertible_with(tableau.n(), &mut rng, BASIS_ENTRY_BOUND);
        let pair = basis.with_g(g.clone())?;
        if characters_in_basis(tableau, &pair)? != target {
            continue;
        }
        if let Some(found) = try_endovolutive_in(tableau, &g) {
            return Ok(found);
        }
    }
    Err(Error::Inconclusive { retries })
}

/// Index range for `μ` in the quadratic criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `λ ≤ μ < j`, as stated in the theorem.
    #[default]
    Theorem,
    /// `λ ≤ μ ≤ j`, the range reached at the end of the inductive proof.
    Proof,
}

impl Variant {
    pub fn mu_range(self, lambda: usize, j: usize, ell: usize) -> std::ops::RangeInclusive<usize> {
        let hi = match self {
            Variant::Theorem => j - 1,
            Variant::Proof => j,
        };
        lambda..=hi.min(ell)
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "theorem" => Ok(Variant::Theorem),
            "proof" => Ok(Variant::Proof),
            other => Err(format!("unknown variant {other:?} (expected theorem|proof)")),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Theorem => "theorem",
            Variant::Proof => "proof",
        })
    }
}

/// A nonzero entry `(B^λ_i B^μ_j − B^λ_j B^μ_i)^a_b` with `λ < i < j`, `a > s_i`
/// (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticViolation {
    pub lambda: usize,
    pub mu: usize,
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub b: usize,
    pub value: Rational,
}

/// Every index tuple `(λ, μ, i, j)` the criterion ranges over, in
/// enumeration order.
pub fn criterion_index_tuples(chars: &CartanCharacters, variant: Variant) -> Vec<(usize, usize, usize, usize)> {
    let (n, ell) = (chars.n(), chars.ell());
    let mut out = Vec::new();
    for lambda in 1..=ell {
        for i in lambda + 1..=n {
            for j in i + 1..=n {
                for mu in variant.mu_range(lambda, j, ell) {
                    out.push((lambda, mu, i, j));
                }
            }
        }
    }
    out
}

/// Evaluates the quadratic conditions exhaustively; empty means they all hold.
pub fn quadratic_criterion(b: &BArray, variant: Variant) -> Result<Vec<QuadraticViolation>> {
    if let Some(k) = b.endovolutivity_violation() {
        return Err(Error::NotEndovolutive { a: k.a, lambda: k.lambda, i: k.i, b: k.b });
    }
    let chars = &b.characters;
    let mut out = Vec::new();
    let zero = RatMatrix::zeros(b.r, b.r);
    let get = |l: usize, i: usize| -> &RatMatrix {
        if i < l {
            &zero
        } else {
            b.block_ref(l, i).unwrap_or(&zero)
        }
    };
    for (lambda, mu, i, j) in criterion_index_tuples(chars, variant) {
        let left = get(lambda, i).matmul(get(mu, j)).expect("square blocks");
        let right = get(lambda, j).matmul(get(mu, i)).expect("square blocks");
        let comm = left.sub(&right).expect("square blocks");
        for a in chars.s(i) + 1..=b.r {
            for col in 1..=b.r {
                let v = comm.get(a - 1, col - 1);
                if !v.is_zero() {
                    out.push(QuadraticViolation { lambda, mu, i, j, a, b: col, value: v.clone() });
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of `δ_σ : A ⊗ V* → W ⊗ Λ²V*` with domain basis `M_k ⊗ u^j` (column
/// `k n + j`) and codomain basis `w_a ⊗ u^i ∧ u^j`, `i < j`.
pub fn prolongation_matrix(tableau: &Tableau) -> RatMatrix {
    let (r, n, d) = (tableau.r(), tableau.n(), tableau.dim());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut m = RatMatrix::zeros(r * pairs.len(), d * n);
    for (k, e) in tableau.basis().iter().enumerate() {
        for a in 0..r {
            for (p, &(i, j)) in pairs.iter().enumerate() {
                let row = a * pairs.len() + p;
                // P^a_{ij} - P^a_{ji} with P^a_{ij} = Σ_k x_{kj} (M_k)^a_i
                let eai = e.get(a, i);
                if !eai.is_zero() {
                    let idx = k * n + j;
                    let cur = m.get(row, idx) + eai;
                    m.set(row, idx, cur);
                }
                let eaj = e.get(a, j);
                if !eaj.is_zero() {
                    let idx = k * n + i;
                    let cur = m.get(row, idx) - eaj;
                    m.set(row, idx, cur);
                }
            }
        }
    }
    m
}

/// `(dim A^(1), dim H^2(A))` from the exact kernel and cokernel of `δ_σ`.
pub fn prolongation_dimension(tableau: &Tableau) -> (usize, usize) {
    let m = prolongation_matrix(tableau);
    let rank = m.rank();
    (m.cols() - rank, m.rows() - rank)
}

/// Basis of `A^(1)` as vectors of coefficients on `M_k ⊗ u^j`.
pub fn prolongation_basis(tableau: &Tableau) -> Vec<Vec<Rational>> {
    prolongation_matrix(tableau).kernel_basis()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CartanOptions {
    pub seed: u64,
    pub trials: usize,
    pub variant: Variant,
    pub retries: usize,
}

impl Default for CartanOptions {
    fn default() -> Self {
        CartanOptions { seed: 0, trials: DEFAULT_TRIALS, variant: Variant::Theorem, retries: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndovolutiveStatus {
    /// The input presentation was already endovolutive.
    Given,
    /// A `W` (and possibly `V*`) basis change made it endovolutive.
    Found,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub g: Vec<Vec<Rational>>,
    pub h: Vec<Vec<Rational>>,
}

impl BasisRecord {
    pub fn of(pair: &BasisPair) -> Self {
        let rows = |m: &RatMatrix| (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        BasisRecord { g: rows(pair.g()), h: rows(pair.h()) }
    }

    pub fn to_pair(&self) -> Result<BasisPair> {
        BasisPair::new(RatMatrix::from_rows(self.g.clone()), RatMatrix::from_rows(self.h.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutivityReport {
    pub r: usize,
    pub n: usize,
    pub characters: CartanCharacters,
    pub dim_a: usize,
    pub dim_a1: usize,
    pub cartan_bound: usize,
    pub involutive: bool,
    pub endovolutive: bool,
    pub endovolutive_status: EndovolutiveStatus,
    pub variant: Variant,
    /// Whether the quadratic criterion holds, when it could be evaluated.
    pub criterion_holds: Option<bool>,
    pub violations: Vec<QuadraticViolation>,
    pub dim_h1: usize,
    pub dim_h2: usize,
    /// Basis pair in which the characters and criterion were evaluated.
    pub basis: BasisRecord,
}

impl InvolutivityReport {
    /// Checks the internal consistency relations between the fields.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let (r, n) = (self.r, self.n);
        if self.characters.n() != n {
            return Err("characters length differs from n".into());
        }
        if self.characters.dim() != self.dim_a {
            return Err("sum of characters differs from dim A".into());
        }
        if self.characters.cartan_bound() != self.cartan_bound {
            return Err("cartan_bound differs from sum of i*s_i".into());
        }
        if self.dim_a1 > self.cartan_bound {
            return Err("dim A^(1) exceeds the Cartan bound".into());
        }
        if self.involutive != (self.dim_a1 == self.cartan_bound) {
            return Err("involutive flag disagrees with Cartan's test".into());
        }
        if self.dim_h1 + self.dim_a != r * n {
            return Err("dim H^1 + dim A differs from r n".into());
        }
        if self.dim_a * n - self.dim_a1 + self.dim_h2 != r * n * n.saturating_sub(1) / 2 {
            return Err("rank-nullity for the prolonged symbol fails".into());
        }
        if self.endovolutive == (self.endovolutive_status == EndovolutiveStatus::Inconclusive) {
            return Err("endovolutive flag disagrees with status".into());
        }
        if self.criterion_holds == Some(true) && !self.violations.is_empty() {
            return Err("criterion holds but violations are listed".into());
        }
        if self.criterion_holds.is_none() && !self.violations.is_empty() {
            return Err("violations listed without an evaluated criterion".into());
        }
        self.basis.to_pair().map_err(|e| e.to_string())?;
        Ok(())
    }
}

/// Generic characters, oracle prolongation dimension, endovolutive search,
/// and the quadratic criterion, assembled into one report.
pub fn cartan_test(tableau: &Tableau, opts: &CartanOptions) -> InvolutivityReport {
    let (generic, chars) = find_generic_basis(tableau, opts.seed, opts.trials);
    let (dim_a1, dim_h2) = prolongation_dimension(tableau);
    let bound = chars.cartan_bound();
    let search = match extract_symbol_coefficients(tableau, &generic) {
        Ok(p) if is_endovolutive(&p) => Ok((generic.clone(), p, EndovolutiveStatus::Given)),
        _ => search_endovolutive_basis(tableau, &generic, opts.retries, opts.seed.wrapping_add(1))
            .map(|(b, p)| (b, p, EndovolutiveStatus::Found)),
    };
    let (basis, status, criterion_holds, violations) = match search {
        Ok((basis, p, status)) => {
            let v = quadratic_criterion(&build_b_array(&p), opts.variant).expect("endovolutive by construction");
            (basis, status, Some(v.is_empty()), v)
        }
        Err(_) => (generic, EndovolutiveStatus::Inconclusive, None, Vec::new()),
    };
    InvolutivityReport {
        r: tableau.r(),
        n: tableau.n(),
        dim_a: tableau.dim(),
        dim_a1,
        cartan_bound: bound,
        involutive: dim_a1 == bound,
        endovolutive: status != EndovolutiveStatus::Inconclusive,
        endovolutive_status: status,
        variant: opts.variant,
        criterion_holds,
        violations,
        dim_h1: tableau.dim_h1(),
        dim_h2,
        basis: BasisRecord::of(&basis),
        characters: chars,
    }
}
