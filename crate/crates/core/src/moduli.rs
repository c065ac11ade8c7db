//! Coefficient-space exploration for fixed characters: the free endovolutive
//! slots, the quadratic ideal they must satisfy, random sampling and
//! exhaustive census.
//!
//! Every presentation is also checked against the prolongation oracle and
//! disagreements are reported rather than hidden. Counts refer to
//! presentations in a fixed basis, not to isomorphism classes of tableaux.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involutivity::{build_b_array, criterion_index_tuples, prolongation_dimension, quadratic_criterion, Variant};
use crate::rational::Rational;
use crate::tableau::{find_generic_basis, tableau_from_coefficients, CartanCharacters, CoefficientKey, SymbolPresentation};

/// Default census cap on the number of assignments.
pub const DEFAULT_CENSUS_CAP: u64 = 100_000;

/// Printed with every census.
pub const CENSUS_NOTE: &str =
    "counts are of coefficient assignments in a fixed basis, not of isomorphism classes of tableaux";

/// The default sampling set `{-1, 0, 1}`.
pub fn default_coefficient_set() -> Vec<Rational> {
    vec![Rational::from(-1), Rational::zero(), Rational::one()]
}

/// `dim W` used for presentations with the given characters: `max(s_1, 1)`.
/// Rows past `s_1` of an endovolutive presentation vanish identically.
pub fn default_r(chars: &CartanCharacters) -> usize {
    chars.s(1).max(1)
}

/// The free slots of an endovolutive presentation: `λ < i`, `b ≤ s_λ`,
/// `s_i < a ≤ s_λ`, in key order.
pub fn free_variables(chars: &CartanCharacters) -> Vec<CoefficientKey> {
    let n = chars.n();
    let mut out = Vec::new();
    for lambda in 1..=chars.ell() {
        for i in lambda + 1..=n {
            for a in chars.s(i) + 1..=chars.s(lambda) {
                for b in 1..=chars.s(lambda) {
                    out.push(CoefficientKey::new(a, lambda, i, b));
                }
            }
        }
    }
    out.sort();
    out
}

/// A polynomial of degree at most two in the coefficient variables.
/// Monomials are sorted variable lists; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly(BTreeMap<Vec<CoefficientKey>, Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Vec::new())
    }

    pub fn var(k: CoefficientKey) -> Self {
        Poly::term(Rational::one(), vec![k])
    }

    fn term(c: Rational, mut mono: Vec<CoefficientKey>) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            mono.sort();
            m.insert(mono, c);
        }
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[CoefficientKey], &Rational)> {
        self.0.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn degree(&self) -> usize {
        self.0.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn add_term(&mut self, mono: Vec<CoefficientKey>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(mono).or_insert_with(Rational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut m: Vec<CoefficientKey> = m1.iter().chain(m2).copied().collect();
                m.sort();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Value at `point`; variables missing from `point` are zero.
    pub fn evaluate(&self, point: &BTreeMap<CoefficientKey, Rational>) -> Rational {
        let mut total = Rational::zero();
        for (mono, c) in &self.0 {
            let mut t = c.clone();
            for k in mono {
                match point.get(k) {
                    Some(v) => t *= v,
                    None => {
                        t = Rational::zero();
                        break;
                    }
                }
            }
            total += &t;
        }
        total
    }

    /// Substitutes the variables present in `values`, keeping the rest symbolic.
    pub fn substitute(&self, values: &BTreeMap<CoefficientKey, Rational>) -> Poly {
        let mut out = Poly::zero();
        for (mono, c) in &self.0 {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for k in mono {
                match values.get(k) {
                    Some(v) => coef *= v,
                    None => rest.push(*k),
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    /// Flips the sign so that the first term is positive.
    fn sign_normalized(self) -> Poly {
        match self.0.values().next() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (idx, (mono, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = mono.iter().map(ToString::to_string).collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_key(s: &str) -> Option<CoefficientKey> {
    let inner = s.strip_prefix("B[")?.strip_suffix(']')?;
    let idx: Vec<usize> = inner.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
    match idx[..] {
        [a, l, i, b] => Some(CoefficientKey::new(a, l, i, b)),
        _ => None,
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses the format written by `Display`.
    fn from_str(s: &str) -> Result<Poly> {
        let bad = || Error::InvalidDocument(format!("cannot parse polynomial {s:?}"));
        let mut text = s.trim().to_string();
        if text == "0" {
            return Ok(Poly::zero());
        }
        if !text.starts_with('-') {
            text.insert_str(0, "+ ");
        } else {
            text.replace_range(0..1, "- ");
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() % 2 != 0 {
            return Err(bad());
        }
        let mut out = Poly::zero();
        for pair in tokens.chunks(2) {
            let sign = match pair[0] {
                "+" => Rational::one(),
                "-" => Rational::from(-1),
                _ => return Err(bad()),
            };
            let mut coef = sign;
            let mut mono = Vec::new();
            for factor in pair[1].split('*') {
                if let Some(k) = parse_key(factor) {
                    mono.push(k);
                } else {
                    coef *= &factor.parse::<Rational>().map_err(|_| bad())?;
                }
            }
            mono.sort();
            out.add_term(mono, coef);
        }
        Ok(out)
    }
}

/// One generator of the ideal, with the first commutator entry producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    pub poly: Poly,
    /// `(λ, μ, i, j, a, b)`.
    pub origin: (usize, usize, usize, usize, usize, usize),
}

/// `(B^λ_i)^a_b` with free coefficients as variables and `r = max(s_1, 1)`.
fn symbolic_block(chars: &CartanCharacters, r: usize, lambda: usize, i: usize) -> Vec<Vec<Poly>> {
    let mut m = vec![vec![Poly::zero(); r]; r];
    if i < lambda || lambda > chars.ell() {
        return m;
    }
    for a in 1..=r {
        for b in 1..=chars.s(lambda) {
            m[a - 1][b - 1] = if lambda == i && a <= chars.s(lambda) {
                if a == b {
                    Poly::constant(Rational::one())
                } else {
                    Poly::zero()
                }
            } else if a > chars.s(i) && a <= chars.s(lambda) {
                Poly::var(CoefficientKey::new(a, lambda, i, b))
            } else {
                Poly::zero()
            };
        }
    }
    m
}

fn symbolic_product(x: &[Vec<Poly>], y: &[Vec<Poly>], a: usize, b: usize) -> Poly {
    let mut out = Poly::zero();
    for (k, xk) in x[a].iter().enumerate() {
        if !xk.is_zero() && !y[k][b].is_zero() {
            out = out.add(&xk.mul(&y[k][b]));
        }
    }
    out
}

/// Expands every commutator entry in the criterion's index ranges and
/// returns the distinct nonzero polynomials, up to sign, in first-seen order.
pub fn export_ideal(chars: &CartanCharacters, variant: Variant) -> Vec<IdealGenerator> {
    let r = default_r(chars);
    let n = chars.n();
    let mut blocks: BTreeMap<(usize, usize), Vec<Vec<Poly>>> = BTreeMap::new();
    for l in 1..=chars.ell() {
        for i in 1..=n {
            blocks.insert((l, i), symbolic_block(chars, r, l, i));
        }
    }
    let zero = vec![vec![Poly::zero(); r]; r];
    let get = |l: usize, i: usize| blocks.get(&(l, i)).unwrap_or(&zero);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (lambda, mu, i, j) in criterion_index_tuples(chars, variant) {
        for a in chars.s(i) + 1..=r {
            for b in 1..=r {
                let p = symbolic_product(get(lambda, i), get(mu, j), a - 1, b - 1)
                    .sub(&symbolic_product(get(lambda, j), get(mu, i), a - 1, b - 1));
                if p.is_zero() {
                    continue;
                }
                let p = p.sign_normalized();
                if seen.insert(p.clone()) {
                    out.push(IdealGenerator { poly: p, origin: (lambda, mu, i, j, a, b) });
                }
            }
        }
    }
    out
}

/// Renders generators as `# N generators` followed by one polynomial per line.
pub fn format_ideal(gens: &[IdealGenerator]) -> String {
    let mut s = format!("# {} generators\n", gens.len());
    for g in gens {
        s.push_str(&g.poly.to_string());
        s.push('\n');
    }
    s
}

/// Builds the presentation with `r = max(s_1, 1)` and the given values.
pub fn presentation_at(chars: &CartanCharacters, point: &BTreeMap<CoefficientKey, Rational>) -> Result<SymbolPresentation> {
    SymbolPresentation::new(default_r(chars), chars.clone(), point.iter().map(|(k, v)| (*k, v.clone())))
}

/// Whether the presentation's own basis realizes its generic characters.
pub fn is_generic_presentation(p: &SymbolPresentation, seed: u64, trials: usize) -> bool {
    let (_, c) = find_generic_basis(&tableau_from_coefficients(p), seed, trials);
    &c == p.characters()
}

/// Criterion and oracle verdicts on one presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub generic: bool,
    pub violations: usize,
    pub oracle_involutive: bool,
}

impl Verdict {
    pub fn criterion_involutive(&self) -> bool {
        self.violations == 0
    }

    pub fn agrees(&self) -> bool {
        self.criterion_involutive() == self.oracle_involutive
    }
}

/// Evaluates an endovolutive presentation with both the criterion and the oracle.
pub fn judge(p: &SymbolPresentation, variant: Variant, seed: u64, trials: usize) -> Result<Verdict> {
    let violations = quadratic_criterion(&build_b_array(p), variant)?.len();
    let (dim_a1, _) = prolongation_dimension(&tableau_from_coefficients(p));
    Ok(Verdict {
        generic: is_generic_presentation(p, seed, trials),
        violations,
        oracle_involutive: dim_a1 == p.characters().cartan_bound(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    pub seed: u64,
    pub count: usize,
    pub set: Vec<Rational>,
    pub variant: Variant,
    pub trials: usize,
    /// Draws before giving up.
    pub max_draws: usize,
    /// Values held fixed; only the remaining free variables are drawn.
    pub fixed: BTreeMap<CoefficientKey, Rational>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            seed: 0,
            count: 10,
            set: default_coefficient_set(),
            variant: Variant::Theorem,
            trials: crate::tableau::DEFAULT_TRIALS,
            max_draws: 10_000,
            fixed: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleOutcome {
    /// Generic presentations passing the criterion.
    pub kept: Vec<SymbolPresentation>,
    pub draws: usize,
    pub non_generic: usize,
    pub rejected: usize,
    /// Generic draws where criterion and oracle differ.
    pub disagreements: Vec<SymbolPresentation>,
}

/// Draws random assignments from `opts.set`, skips presentations whose basis
/// is not generic, and keeps those satisfying the quadratic criterion.
pub fn sample_involutive(chars: &CartanCharacters, opts: &SampleOptions) -> Result<SampleOutcome> {
    if opts.set.is_empty() {
        return Err(Error::InvalidDocument("empty coefficient set".into()));
    }
    let vars: Vec<CoefficientKey> =
        free_variables(chars).into_iter().filter(|k| !opts.fixed.contains_key(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = SampleOutcome::default();
    while out.kept.len() < opts.count && out.draws < opts.max_draws {
        out.draws += 1;
        let mut point = opts.fixed.clone();
        for k in &vars {
            point.insert(*k, opts.set[rng.gen_range(0..opts.set.len())].clone());
        }
        let p = presentation_at(chars, &point)?;
        let v = judge(&p, opts.variant, opts.seed, opts.trials)?;
        if !v.generic {
            out.non_generic += 1;
            continue;
        }
        if !v.agrees() {
            out.disagreements.push(p.clone());
        }
        if v.criterion_involutive() {
            out.kept.push(p);
        } else {
            out.rejected += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub characters: CartanCharacters,
    pub r: usize,
    pub variables: usize,
    pub set: Vec<Rational>,
    pub variant: Variant,
    pub total: u64,
    pub non_generic: u64,
    pub criterion_involutive: u64,
    pub oracle_involutive: u64,
    pub disagreements: u64,
    /// Number of generic assignments by violation count.
    pub violation_histogram: BTreeMap<usize, u64>,
    pub note: String,
}

/// Walks every assignment of `set` to the free variables.
pub fn enumerate_census(
    chars: &CartanCharacters,
    set: &[Rational],
    cap: u64,
    variant: Variant,
    trials: usize,
) -> Result<Census> {
    if set.is_empty() {
        return Err(Error::InvalidDocument("empty coefficient set".into()));
    }
    let vars = free_variables(chars);
    let total = (set.len() as u64).checked_pow(vars.len() as u32).filter(|&t| t <= cap).ok_or_else(|| {
        Error::CensusTooLarge { assignments: format!("{}^{}", set.len(), vars.len()), cap }
    })?;
    let mut census = Census {
        characters: chars.clone(),
        r: default_r(chars),
        variables: vars.len(),
        set: set.to_vec(),
        variant,
        total,
        non_generic: 0,
        criterion_involutive: 0,
        oracle_involutive: 0,
        disagreements: 0,
        violation_histogram: BTreeMap::new(),
        note: CENSUS_NOTE.to_string(),
    };
    let mut digits = vec![0usize; vars.len()];
    for _ in 0..total {
        let point: BTreeMap<CoefficientKey, Rational> =
            vars.iter().zip(&digits).map(|(k, &d)| (*k, set[d].clone())).collect();
        let v = judge(&presentation_at(chars, &point)?, variant, 0, trials)?;
        if !v.generic {
            census.non_generic += 1;
        } else {
            census.criterion_involutive += u64::from(v.criterion_involutive());
            census.oracle_involutive += u64::from(v.oracle_involutive);
            census.disagreements += u64::from(!v.agrees());
            *census.violation_histogram.entry(v.violations).or_default() += 1;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < set.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(census)
}
