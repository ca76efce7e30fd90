//! Degree/root-count checks for univariate polynomial sums and
//! desk-scale non-existence searches for `f^a + g^b + h^c + lambda = 0`.
//!
//! [`mason_check`] takes coprime `f, g` of positive degree, sets
//! `h = -(f + g)` so the three sum to zero, and tests the strict
//! inequality `max(deg f, deg g, deg h) < N(f g h)`, where `N` counts
//! distinct roots in an algebraic closure. A falsifying applicable
//! instance would be a build-stopping bug.
//!
//! [`fermat_search`] enumerates (or samples) triples of nonconstant,
//! setwise-coprime univariate polynomials with bounded degree and
//! coefficients from a finite set, returning every exact solution of
//! `f^a + g^b + h^c + lambda = 0`. Two hypothesis regimes guarantee an
//! empty result: `lambda = 0` with `1/a + 1/b + 1/c <= 1`, and
//! `lambda != 0` with `a,b,c >= 4` and
//! `1/(a-3) + 1/(b-3) + 1/(c-3) <= 1/2`. The enumeration prunes degree
//! triples whose leading degrees cannot cancel (the maximum of
//! `a deg f, b deg g, c deg h` must be attained at least twice); this
//! never discards a solution.
//!
//! [`derivative_gcd_bound`] checks the bookkeeping bound
//! `deg w <= deg f + deg g + deg h - 3` for
//! `w = gcd(f^(a-1) f', g^(b-1) g', h^(c-1) h')`.

use crate::poly::{
    self, as_univariate, distinct_root_count, gcd_univariate, Poly, PolyError,
};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// Variable used for search candidates.
pub const SEARCH_VAR: &str = "T";

#[derive(Debug, Clone, PartialEq)]
pub enum MasonError {
    Poly(PolyError),
    HypothesisViolation(String),
}

impl fmt::Display for MasonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MasonError::Poly(e) => write!(f, "{e}"),
            MasonError::HypothesisViolation(msg) => write!(f, "hypothesis violation: {msg}"),
        }
    }
}

impl std::error::Error for MasonError {}

impl From<PolyError> for MasonError {
    fn from(e: PolyError) -> Self {
        MasonError::Poly(e)
    }
}

/// Result of one degree/root-count comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasonReport {
    /// `max(deg f, deg g, deg h)` over the nonzero inputs.
    pub max_degree: u64,
    /// `N(f g h)` when the product is nonzero, else 0.
    pub root_count: u64,
    /// All three nonzero of positive degree with constant setwise gcd.
    pub applicable: bool,
    /// `applicable` and the strict inequality `max_degree < root_count`.
    pub holds: bool,
}

/// Checks the inequality for `f`, `g`, and `h = -(f + g)`.
pub fn mason_check(f: &Poly, g: &Poly) -> Result<MasonReport, MasonError> {
    let (vf, _) = as_univariate(f)?;
    let (vg, _) = as_univariate(g)?;
    if let (Some(a), Some(b)) = (&vf, &vg) {
        if a != b {
            return Err(PolyError::VariableMismatch(a.clone(), b.clone()).into());
        }
    }
    let h = f.add(g).neg();

    let degrees: Vec<u64> = [f, g, &h]
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.total_degree().unwrap())
        .collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);

    let all_nonzero = !f.is_zero() && !g.is_zero() && !h.is_zero();
    let positive_degree = all_nonzero && degrees.iter().all(|&d| d >= 1);
    let coprime = if all_nonzero {
        let d = gcd_univariate(&gcd_univariate(f, g)?, &h)?;
        d.is_constant()
    } else {
        false
    };
    let applicable = positive_degree && coprime;

    let product = f.mul(g).mul(&h);
    let root_count = if product.is_zero() {
        0
    } else {
        distinct_root_count(&product)?
    };
    Ok(MasonReport {
        max_degree,
        root_count,
        applicable,
        holds: applicable && max_degree < root_count,
    })
}

/// Hypothesis regime of a search configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `lambda = 0` and `1/a + 1/b + 1/c <= 1`; `strict` records whether
    /// the sum is strictly below 1.
    Unperturbed { strict: bool },
    /// `lambda != 0`, `a,b,c >= 4`, and `1/(a-3) + 1/(b-3) + 1/(c-3) <= 1/2`.
    Perturbed,
    /// No emptiness guarantee; solutions may exist.
    Unconstrained,
}

impl Regime {
    /// True when the regime guarantees the search result is empty.
    pub fn guarantees_empty(&self) -> bool {
        !matches!(self, Regime::Unconstrained)
    }
}

/// Search mode: exhaustive enumeration or seeded random sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized { samples: u64, seed: u64 },
}

/// Default cap on the number of candidate triples examined.
pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;

/// Configuration of a non-existence search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub exponents: (u32, u32, u32),
    pub lambda: BigRational,
    pub degree_bound: u32,
    pub coefficient_set: Vec<BigRational>,
    pub mode: SearchMode,
    pub candidate_cap: u64,
}

impl SearchConfig {
    /// Validates exponents (>= 1), the degree bound (>= 1), and the
    /// coefficient set (nonempty with a nonzero element; duplicates are
    /// dropped, keeping first occurrences).
    pub fn new(
        exponents: (u32, u32, u32),
        lambda: BigRational,
        degree_bound: u32,
        coefficient_set: Vec<BigRational>,
        mode: SearchMode,
    ) -> Result<Self, SearchError> {
        let (a, b, c) = exponents;
        if a < 1 || b < 1 || c < 1 {
            return Err(SearchError::InvalidConfig(
                "exponents must be at least 1".to_string(),
            ));
        }
        if degree_bound < 1 {
            return Err(SearchError::InvalidConfig(
                "degree bound must be at least 1".to_string(),
            ));
        }
        let mut set: Vec<BigRational> = Vec::new();
        for c in coefficient_set {
            if !set.contains(&c) {
                set.push(c);
            }
        }
        if set.is_empty() || set.iter().all(|c| c.is_zero()) {
            return Err(SearchError::InvalidConfig(
                "coefficient set needs a nonzero element".to_string(),
            ));
        }
        Ok(SearchConfig {
            exponents,
            lambda,
            degree_bound,
            coefficient_set: set,
            mode,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        })
    }

    pub fn with_candidate_cap(mut self, cap: u64) -> Self {
        self.candidate_cap = cap;
        self
    }

    /// Classifies the configuration's hypothesis regime.
    pub fn regime(&self) -> Regime {
        let (a, b, c) = self.exponents;
        let (aa, bb, cc) = (a as u64, b as u64, c as u64);
        if self.lambda.is_zero() {
            let lhs = bb * cc + aa * cc + aa * bb;
            let rhs = aa * bb * cc;
            if lhs <= rhs {
                return Regime::Unperturbed { strict: lhs < rhs };
            }
            return Regime::Unconstrained;
        }
        if a >= 4 && b >= 4 && c >= 4 {
            let (pa, pb, pc) = (aa - 3, bb - 3, cc - 3);
            if 2 * (pb * pc + pa * pc + pa * pb) <= pa * pb * pc {
                return Regime::Perturbed;
            }
        }
        Regime::Unconstrained
    }
}

/// One exact solution found by the search, tagged with its enumeration
/// index and a re-substitution flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FermatSolution {
    pub index: u64,
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    InvalidConfig(String),
    /// The candidate space exceeds the configured cap. Distinct from a
    /// completed search that found nothing.
    ResourceLimit { candidates: u64, cap: u64 },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::InvalidConfig(msg) => write!(f, "invalid search configuration: {msg}"),
            SearchError::ResourceLimit { candidates, cap } => write!(
                f,
                "candidate space has {candidates} triples, exceeding the cap of {cap}"
            ),
        }
    }
}

impl std::error::Error for SearchError {}

/// The maximum of `a*df, b*dg, c*dh` must be attained at least twice,
/// otherwise the top-degree coefficient of the sum cannot vanish.
fn degrees_compatible(exponents: (u32, u32, u32), degs: (u32, u32, u32)) -> bool {
    let tops = [
        exponents.0 as u64 * degs.0 as u64,
        exponents.1 as u64 * degs.1 as u64,
        exponents.2 as u64 * degs.2 as u64,
    ];
    let max = tops.iter().copied().max().unwrap();
    tops.iter().filter(|&&t| t == max).count() >= 2
}

struct CandidateSpace {
    set: Vec<BigRational>,
    nonzero: Vec<BigRational>,
}

impl CandidateSpace {
    fn count_for_degree(&self, d: u32) -> u128 {
        let s = self.set.len() as u128;
        self.nonzero.len() as u128 * s.pow(d)
    }

    /// Decodes the `idx`-th coefficient tuple of exact degree `d`:
    /// tuples are ordered lexicographically by
    /// `(c_d, c_(d-1), ..., c_0)`, the leading coefficient ranging over
    /// the nonzero elements and the rest over the full set.
    fn decode(&self, d: u32, idx: u64) -> Poly {
        let s = self.set.len() as u64;
        let tail = s.pow(d);
        let lead = &self.nonzero[(idx / tail) as usize];
        let mut rest = idx % tail;
        let mut coeffs = vec![BigRational::zero(); d as usize + 1];
        coeffs[d as usize] = lead.clone();
        for k in (0..d as usize).rev() {
            let base = s.pow(k as u32);
            coeffs[k] = self.set[(rest / base) as usize].clone();
            rest %= base;
        }
        poly::from_univariate(SEARCH_VAR, &coeffs)
    }

    fn sample<R: Rng>(&self, d: u32, rng: &mut R) -> Poly {
        let mut coeffs = vec![BigRational::zero(); d as usize + 1];
        coeffs[d as usize] = self.nonzero[rng.gen_range(0..self.nonzero.len())].clone();
        for c in coeffs.iter_mut().take(d as usize) {
            *c = self.set[rng.gen_range(0..self.set.len())].clone();
        }
        poly::from_univariate(SEARCH_VAR, &coeffs)
    }
}

fn setwise_coprime(f: &Poly, g: &Poly, h: &Poly) -> bool {
    let fg = gcd_univariate(f, g).expect("nonzero candidates");
    gcd_univariate(&fg, h).expect("nonzero candidates").is_constant()
}

/// Runs the configured search. Returned solutions are exact, setwise
/// coprime, nonconstant, and sorted by enumeration index.
pub fn fermat_search(cfg: &SearchConfig) -> Result<Vec<FermatSolution>, SearchError> {
    let space = CandidateSpace {
        set: cfg.coefficient_set.clone(),
        nonzero: cfg
            .coefficient_set
            .iter()
            .filter(|c| !c.is_zero())
            .cloned()
            .collect(),
    };
    match &cfg.mode {
        SearchMode::Exhaustive => exhaustive_search(cfg, &space),
        SearchMode::Randomized { samples, seed } => {
            if *samples > cfg.candidate_cap {
                return Err(SearchError::ResourceLimit {
                    candidates: *samples,
                    cap: cfg.candidate_cap,
                });
            }
            Ok(randomized_search(cfg, &space, *samples, *seed))
        }
    }
}

fn exhaustive_search(
    cfg: &SearchConfig,
    space: &CandidateSpace,
) -> Result<Vec<FermatSolution>, SearchError> {
    let d = cfg.degree_bound;
    let (a, b, c) = cfg.exponents;
    let mut triples = Vec::new();
    for df in 1..=d {
        for dg in 1..=d {
            for dh in 1..=d {
                if degrees_compatible(cfg.exponents, (df, dg, dh)) {
                    triples.push((df, dg, dh));
                }
            }
        }
    }
    let total: u128 = triples
        .iter()
        .map(|&(df, dg, dh)| {
            space.count_for_degree(df) * space.count_for_degree(dg) * space.count_for_degree(dh)
        })
        .sum();
    if total > cfg.candidate_cap as u128 {
        return Err(SearchError::ResourceLimit {
            candidates: total.min(u64::MAX as u128) as u64,
            cap: cfg.candidate_cap,
        });
    }

    let mut solutions: Vec<FermatSolution> = Vec::new();
    let mut base_index = 0u64;
    for (df, dg, dh) in triples {
        let fc = space.count_for_degree(df) as u64;
        let gc = space.count_for_degree(dg) as u64;
        let hc = space.count_for_degree(dh) as u64;
        let g_cands: Vec<(Poly, Poly)> = (0..gc)
            .map(|gi| {
                let g = space.decode(dg, gi);
                let gp = g.pow(b);
                (g, gp)
            })
            .collect();
        // sum == 0 iff f^a + g^b + lambda equals -(h^c); equality
        // short-circuits on the first mismatching term
        let h_cands: Vec<(Poly, Poly)> = (0..hc)
            .map(|hi| {
                let h = space.decode(dh, hi);
                let hp_neg = h.pow(c).neg();
                (h, hp_neg)
            })
            .collect();
        let lambda = Poly::constant(&[SEARCH_VAR], cfg.lambda.clone());
        let mut found: Vec<FermatSolution> = (0..fc)
            .into_par_iter()
            .flat_map_iter(|fi| {
                let f = space.decode(df, fi);
                let fp = f.pow(a);
                let mut local = Vec::new();
                for (gi, (g, gp)) in g_cands.iter().enumerate() {
                    let partial = fp.add(gp).add(&lambda);
                    for (hi, (h, hp_neg)) in h_cands.iter().enumerate() {
                        if partial == *hp_neg && setwise_coprime(&f, g, h) {
                            let index = base_index + (fi * gc + gi as u64) * hc + hi as u64;
                            local.push(FermatSolution {
                                index,
                                f: f.clone(),
                                g: g.clone(),
                                h: h.clone(),
                                verified: true,
                            });
                        }
                    }
                }
                local
            })
            .collect();
        found.sort_by_key(|s| s.index);
        solutions.extend(found);
        base_index += fc * gc * hc;
    }
    Ok(solutions)
}

fn randomized_search(
    cfg: &SearchConfig,
    space: &CandidateSpace,
    samples: u64,
    seed: u64,
) -> Vec<FermatSolution> {
    let (a, b, c) = cfg.exponents;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solutions = Vec::new();
    for index in 0..samples {
        let df = rng.gen_range(1..=cfg.degree_bound);
        let dg = rng.gen_range(1..=cfg.degree_bound);
        let dh = rng.gen_range(1..=cfg.degree_bound);
        let f = space.sample(df, &mut rng);
        let g = space.sample(dg, &mut rng);
        let h = space.sample(dh, &mut rng);
        if !degrees_compatible(cfg.exponents, (df, dg, dh)) {
            continue;
        }
        let lambda = Poly::constant(&[SEARCH_VAR], cfg.lambda.clone());
        let sum = f.pow(a).add(&g.pow(b)).add(&h.pow(c)).add(&lambda);
        if sum.is_zero() && setwise_coprime(&f, &g, &h) {
            solutions.push(FermatSolution {
                index,
                f,
                g,
                h,
                verified: true,
            });
        }
    }
    solutions
}

/// Report of the derivative-gcd degree bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeGcdReport {
    pub w: Poly,
    pub deg_w: u64,
    pub bound: u64,
    pub holds: bool,
}

/// For nonconstant, setwise-coprime univariate `f, g, h` and exponents
/// `a, b, c >= 1`, computes `w = gcd(f^(a-1) f', g^(b-1) g', h^(c-1) h')`
/// and checks `deg w <= deg f + deg g + deg h - 3`.
pub fn derivative_gcd_bound(
    f: &Poly,
    g: &Poly,
    h: &Poly,
    a: u32,
    b: u32,
    c: u32,
) -> Result<DerivativeGcdReport, MasonError> {
    if a < 1 || b < 1 || c < 1 {
        return Err(MasonError::HypothesisViolation(
            "exponents must be at least 1".to_string(),
        ));
    }
    let mut var: Option<String> = None;
    for p in [f, g, h] {
        let (v, _) = as_univariate(p)?;
        let d = p.total_degree().unwrap_or(0);
        if p.is_zero() || d < 1 {
            return Err(MasonError::HypothesisViolation(
                "inputs must be nonconstant".to_string(),
            ));
        }
        match (&var, v) {
            (None, Some(w)) => var = Some(w),
            (Some(a), Some(b)) if *a != b => {
                return Err(MasonError::Poly(PolyError::VariableMismatch(a.clone(), b)))
            }
            _ => {}
        }
    }
    let var = var.expect("nonconstant inputs have a variable");
    if !setwise_coprime(f, g, h) {
        return Err(MasonError::HypothesisViolation(
            "inputs must have constant setwise gcd".to_string(),
        ));
    }
    let dpart = |p: &Poly, e: u32| -> Result<Poly, MasonError> {
        Ok(p.pow(e - 1).mul(&p.partial_derivative(&var)?))
    };
    let fa = dpart(f, a)?;
    let gb = dpart(g, b)?;
    let hc = dpart(h, c)?;
    let w = gcd_univariate(&gcd_univariate(&fa, &gb)?, &hc)?;
    let deg_w = w.total_degree().unwrap_or(0);
    let bound = f.total_degree().unwrap() + g.total_degree().unwrap() + h.total_degree().unwrap() - 3;
    Ok(DerivativeGcdReport {
        deg_w,
        bound,
        holds: deg_w <= bound,
        w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn tp(coeffs: &[i64]) -> Poly {
        poly::from_univariate(
            SEARCH_VAR,
            &coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>(),
        )
    }

    fn int_set(range: std::ops::RangeInclusive<i64>) -> Vec<BigRational> {
        range.map(int).collect()
    }

    #[test]
    fn mason_check_on_a_holding_instance() {
        let f = tp(&[0, 0, 1]); // T^2
        let g = tp(&[1, 2]); // 2T + 1, so h = -(T+1)^2
        let r = mason_check(&f, &g).unwrap();
        assert!(r.applicable);
        assert_eq!(r.max_degree, 2);
        assert_eq!(r.root_count, 3);
        assert!(r.holds);
    }

    #[test]
    fn hypothesis_gates() {
        // g and h fail the positive-degree hypothesis
        let r = mason_check(&tp(&[0, 1]), &tp(&[1])).unwrap();
        assert!(!r.applicable);
        assert!(!r.holds);

        // common factor T
        let r = mason_check(&tp(&[0, 0, 0, 1]), &tp(&[0, 1])).unwrap();
        assert!(!r.applicable);

        // degenerate h = 0
        let f = tp(&[0, 1]);
        let r = mason_check(&f, &f.neg()).unwrap();
        assert!(!r.applicable);

        let s = Poly::var(&["S"], "S");
        assert!(matches!(
            mason_check(&tp(&[0, 1]), &s),
            Err(MasonError::Poly(PolyError::VariableMismatch(..)))
        ));
    }

    #[test]
    fn inequality_holds_on_random_applicable_pairs() {
        use rand::Rng;
        let mut rng = StdRng::seed_from_u64(1000);
        let mut applicable = 0;
        for _ in 0..300 {
            let df = rng.gen_range(1..=8);
            let dg = rng.gen_range(1..=8);
            let mut fc: Vec<i64> = (0..=df).map(|_| rng.gen_range(-9..=9)).collect();
            let mut gc: Vec<i64> = (0..=dg).map(|_| rng.gen_range(-9..=9)).collect();
            if fc[df] == 0 {
                fc[df] = 1;
            }
            if gc[dg] == 0 {
                gc[dg] = 1;
            }
            let f = tp(&fc);
            let g = tp(&gc);
            let r = mason_check(&f, &g).unwrap();
            if r.applicable {
                applicable += 1;
                assert!(r.holds, "violated for f={f}, g={g}");
            }
        }
        assert!(applicable > 200, "suite is nearly vacuous: {applicable}");
    }

    #[test]
    fn search_is_empty_in_the_unperturbed_regime() {
        let cfg = SearchConfig::new(
            (2, 3, 7),
            int(0),
            3,
            int_set(-2..=2),
            SearchMode::Exhaustive,
        )
        .unwrap();
        assert_eq!(cfg.regime(), Regime::Unperturbed { strict: true });
        assert!(cfg.regime().guarantees_empty());
        assert!(fermat_search(&cfg).unwrap().is_empty());
    }

    #[test]
    fn search_is_empty_in_the_perturbed_regime() {
        let cfg = SearchConfig::new(
            (7, 11, 13),
            int(1),
            2,
            int_set(-1..=1),
            SearchMode::Exhaustive,
        )
        .unwrap();
        assert_eq!(cfg.regime(), Regime::Perturbed);
        assert!(fermat_search(&cfg).unwrap().is_empty());
    }

    #[test]
    fn degenerate_exponent_one_has_solutions() {
        let cfg = SearchConfig::new(
            (1, 2, 3),
            int(0),
            3,
            int_set(-2..=1),
            SearchMode::Exhaustive,
        )
        .unwrap();
        assert_eq!(cfg.regime(), Regime::Unconstrained);
        let sols = fermat_search(&cfg).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            // re-substitution: f + g^2 + h^3 = 0, exactly
            let sum = s.f.add(&s.g.pow(2)).add(&s.h.pow(3));
            assert!(sum.is_zero());
            assert!(s.verified);
            assert!(setwise_coprime(&s.f, &s.g, &s.h));
            assert!(s.f.total_degree().unwrap() >= 1);
        }
        // the known in-range solution f = T^3 - T^2 - 2T - 1, g = T + 1, h = -T
        let f = tp(&[-1, -2, -1, 1]);
        let g = tp(&[1, 1]);
        let h = tp(&[0, -1]);
        assert!(sols.iter().any(|s| s.f == f && s.g == g && s.h == h));
        // enumeration indices ascend
        assert!(sols.windows(2).all(|w| w[0].index < w[1].index));
    }

    #[test]
    fn randomized_mode_is_reproducible() {
        let cfg = SearchConfig::new(
            (1, 1, 2),
            int(0),
            2,
            int_set(-1..=1),
            SearchMode::Randomized {
                samples: 30_000,
                seed: 99,
            },
        )
        .unwrap();
        let first = fermat_search(&cfg).unwrap();
        let second = fermat_search(&cfg).unwrap();
        assert_eq!(first, second);
        assert!(!first.is_empty());
        for s in &first {
            let sum = s.f.add(&s.g).add(&s.h.pow(2));
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn resource_cap_is_a_distinct_outcome() {
        let cfg = SearchConfig::new(
            (1, 2, 3),
            int(0),
            3,
            int_set(-2..=1),
            SearchMode::Exhaustive,
        )
        .unwrap()
        .with_candidate_cap(10);
        assert!(matches!(
            fermat_search(&cfg),
            Err(SearchError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new((0, 2, 3), int(0), 3, int_set(-1..=1), SearchMode::Exhaustive).is_err());
        assert!(SearchConfig::new((2, 3, 7), int(0), 0, int_set(-1..=1), SearchMode::Exhaustive).is_err());
        assert!(SearchConfig::new((2, 3, 7), int(0), 2, vec![int(0)], SearchMode::Exhaustive).is_err());
        assert!(SearchConfig::new((2, 3, 7), int(0), 2, vec![], SearchMode::Exhaustive).is_err());
    }

    #[test]
    fn derivative_gcd_bound_examples() {
        // f = T, g = T+1, h = T+2 with fourth powers: w = 1, bound = 0
        let r = derivative_gcd_bound(&tp(&[0, 1]), &tp(&[1, 1]), &tp(&[2, 1]), 4, 4, 4).unwrap();
        assert_eq!(r.deg_w, 0);
        assert_eq!(r.bound, 0);
        assert!(r.holds);

        // pairwise distinct linear factors force a constant w
        let f = tp(&[-1, 1]).mul(&tp(&[-2, 1]));
        let g = tp(&[3, 1]).mul(&tp(&[4, 1]));
        let h = tp(&[5, 1]);
        let r = derivative_gcd_bound(&f, &g, &h, 5, 6, 7).unwrap();
        assert_eq!(r.deg_w, 0);
        assert!(r.holds);

        assert!(matches!(
            derivative_gcd_bound(&tp(&[1]), &tp(&[1, 1]), &tp(&[2, 1]), 4, 4, 4),
            Err(MasonError::HypothesisViolation(_))
        ));
        assert!(matches!(
            derivative_gcd_bound(&tp(&[0, 1]), &tp(&[0, 2]), &tp(&[0, 3]), 4, 4, 4),
            Err(MasonError::HypothesisViolation(_))
        ));
    }

    #[test]
    fn derivative_gcd_bound_holds_on_random_triples() {
        use rand::Rng;
        let mut rng = StdRng::seed_from_u64(77);
        let mut checked = 0;
        while checked < 1000 {
            let mut mk = || {
                let d = rng.gen_range(1..=5);
                let mut cs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-4..=4)).collect();
                if cs[d] == 0 {
                    cs[d] = 1;
                }
                tp(&cs)
            };
            let (f, g, h) = (mk(), mk(), mk());
            if !setwise_coprime(&f, &g, &h) {
                continue;
            }
            let a = rng.gen_range(4..=8);
            let b = rng.gen_range(4..=8);
            let c = rng.gen_range(4..=8);
            let r = derivative_gcd_bound(&f, &g, &h, a, b, c).unwrap();
            assert!(r.holds, "bound failed for f={f}, g={g}, h={h}");
            checked += 1;
        }
    }
}
