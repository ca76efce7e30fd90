//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! A [`Poly`] stores an ordered variable list and a map from exponent
//! vectors to nonzero rational coefficients. The term order is graded
//! lexicographic with respect to the declared variable order; it drives
//! canonical printing and the notion of leading term used elsewhere in
//! the crate.
//!
//! Arithmetic is exact. Operations on polynomials with different variable
//! lists first align both operands over the union of their variables
//! (left operand's order first, then unseen variables from the right).
//!
//! Univariate helpers (`gcd_univariate`, `squarefree_part`,
//! `distinct_root_count`) run a primitive pseudo-remainder sequence over
//! the integers after clearing denominators, so coefficient growth stays
//! tame. The gcd contract is the monic-gcd postcondition only.
//!
//! Multiplications, powers, and substitutions panic if an intermediate
//! result would exceed the `LND_ALGEBRA_MAX_TERMS` cap (default 10^6
//! terms); the cap is a guard against runaway memory, not an error path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// Errors raised by polynomial operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// A variable name was not part of the polynomial's variable list.
    UnknownVariable(String),
    /// An operation required univariate input.
    NotUnivariate(Vec<String>),
    /// Two univariate inputs use different variables.
    VariableMismatch(String, String),
    /// The zero polynomial where a nonzero one is required.
    ZeroPolynomial,
    /// Division by the zero polynomial.
    DivisionByZero,
    /// Division with a nonzero remainder where exact division is required.
    InexactDivision,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::UnknownVariable(v) => write!(f, "unknown variable: {v}"),
            PolyError::NotUnivariate(vs) => {
                write!(f, "expected a univariate polynomial, found variables {vs:?}")
            }
            PolyError::VariableMismatch(a, b) => {
                write!(f, "univariate variable mismatch: {a} vs {b}")
            }
            PolyError::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            PolyError::DivisionByZero => write!(f, "division by zero polynomial"),
            PolyError::InexactDivision => write!(f, "division is not exact"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Cap on the number of terms any intermediate polynomial may hold,
/// read once from `LND_ALGEBRA_MAX_TERMS`.
pub fn term_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("LND_ALGEBRA_MAX_TERMS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(1_000_000)
    })
}

fn check_term_cap(len: usize) {
    assert!(
        len <= term_cap(),
        "polynomial exceeds LND_ALGEBRA_MAX_TERMS ({} terms)",
        term_cap()
    );
}

/// Exponent vector of a monomial, aligned with the owning polynomial's
/// variable list. The order is graded lexicographic: total degree first,
/// then exponents compared left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn new(exps: Vec<u32>) -> Self {
        Mono(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise divisibility: `self` divides `other`.
    pub fn divides(&self, other: &Mono) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_into(&self, other: &Mono) -> Mono {
        debug_assert!(self.divides(other));
        Mono(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Largest `q` with `self^q` dividing `other` (0 if `self == 1`).
    pub fn max_quotient_power(&self, other: &Mono) -> u32 {
        let mut q = u32::MAX;
        let mut seen = false;
        for (a, b) in self.0.iter().zip(&other.0) {
            if *a > 0 {
                seen = true;
                q = q.min(b / a);
            }
        }
        if seen {
            q
        } else {
            0
        }
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono(self.0.iter().map(|&e| e * k).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Self {
        Poly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_over(vars: Vec<String>) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(p.vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Poly::constant(vars, BigRational::one())
    }

    pub fn from_int(vars: &[&str], n: i64) -> Self {
        Poly::constant(vars, crate::rational::int(n))
    }

    /// Single variable as a polynomial. Panics if `name` is not declared.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Poly::zero(vars);
        let idx = p
            .var_index(name)
            .unwrap_or_else(|| panic!("variable {name} not declared in {vars:?}"));
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.terms.insert(Mono(exps), BigRational::one());
        p
    }

    /// Monomial `c * prod(var^exp)`. Panics on undeclared variables.
    pub fn monomial(vars: &[&str], factors: &[(&str, u32)], c: BigRational) -> Self {
        let mut p = Poly::zero(vars);
        if c.is_zero() {
            return p;
        }
        let mut exps = vec![0; p.vars.len()];
        for (name, e) in factors {
            let idx = p
                .var_index(name)
                .unwrap_or_else(|| panic!("variable {name} not declared in {vars:?}"));
            exps[idx] += e;
        }
        p.terms.insert(Mono(exps), c);
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping
    /// zero coefficients. Every exponent vector must match the variable
    /// count.
    pub fn from_terms(vars: Vec<String>, terms: Vec<(Mono, BigRational)>) -> Self {
        let nvars = vars.len();
        let mut map: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Poly { vars, terms: map }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant value if the polynomial has no nonconstant term
    /// (zero counts as the constant 0).
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(|m| m.total_degree())
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, name: &str) -> Result<Option<u64>, PolyError> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self
            .terms
            .keys()
            .map(|m| m.0[idx] as u64)
            .max())
    }

    /// Leading term under the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Variables that actually occur with a positive exponent.
    pub fn effective_vars(&self) -> Vec<String> {
        let mut used = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        self.vars
            .iter()
            .zip(used)
            .filter(|(_, u)| *u)
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// Re-expresses the polynomial over `new_vars`, which must contain
    /// every effective variable.
    pub fn aligned_to(&self, new_vars: &[String]) -> Result<Poly, PolyError> {
        if self.vars == new_vars {
            return Ok(self.clone());
        }
        let mut index_map = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            index_map.push(new_vars.iter().position(|w| w == v));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match index_map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(PolyError::UnknownVariable(self.vars[i].clone())),
                }
            }
            terms.insert(Mono(exps), c.clone());
        }
        Ok(Poly {
            vars: new_vars.to_vec(),
            terms,
        })
    }

    /// Union of the two variable lists: left order first, then unseen
    /// variables from the right.
    pub fn union_vars(&self, other: &Poly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned_pair(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            (self.clone(), other.clone())
        } else {
            let vars = self.union_vars(other);
            (
                self.aligned_to(&vars).expect("union contains own vars"),
                other.aligned_to(&vars).expect("union contains own vars"),
            )
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut a, b) = self.aligned_pair(other);
        for (m, c) in b.terms {
            let entry = a.terms.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = self.aligned_pair(other);
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += c;
            }
            check_term_cap(terms.len());
        }
        terms.retain(|_, c| !c.is_zero());
        Poly {
            vars: a.vars,
            terms,
        }
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero_over(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// `self^e` by binary exponentiation; `self^0 = 1`.
    pub fn pow(&self, e: u32) -> Poly {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut acc = Poly::one(&vars);
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial_derivative(&self, name: &str) -> Result<Poly, PolyError> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            terms.insert(Mono(exps), c * BigRational::from_integer(BigInt::from(e)));
        }
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Substitutes polynomials for variables; variables without an image
    /// are left in place. The result is expressed over the union of the
    /// remaining variables and all image variables.
    pub fn substitute(&self, images: &[(String, Poly)]) -> Poly {
        // Result variable list: own vars without images, then image vars.
        let mut result_vars: Vec<String> = Vec::new();
        for v in &self.vars {
            if !images.iter().any(|(n, _)| n == v) && !result_vars.contains(v) {
                result_vars.push(v.clone());
            }
        }
        for (_, img) in images {
            for v in &img.vars {
                if !result_vars.contains(v) {
                    result_vars.push(v.clone());
                }
            }
        }
        let rvars: Vec<&str> = result_vars.iter().map(|s| s.as_str()).collect();

        // Power ladders per substituted variable, up to the max exponent used.
        let mut max_exp = vec![0u32; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let mut ladders: Vec<Option<Vec<Poly>>> = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match images.iter().find(|(n, _)| n == v) {
                Some((_, img)) => {
                    let img = img
                        .aligned_to(&result_vars)
                        .expect("image vars included in result vars");
                    let mut ladder = vec![Poly::one(&rvars)];
                    for _ in 0..max_exp[i] {
                        ladder.push(ladder.last().unwrap().mul(&img));
                    }
                    ladders.push(Some(ladder));
                }
                None => ladders.push(None),
            }
        }

        let mut acc = Poly::zero(&rvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&rvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &ladders[i] {
                    Some(ladder) => term = term.mul(&ladder[e as usize]),
                    None => {
                        let v = Poly::var(&rvars, &self.vars[i]);
                        term = term.mul(&v.pow(e));
                    }
                }
            }
            acc = acc.add(&term);
            check_term_cap(acc.terms.len());
        }
        acc
    }

    /// Exact multivariate division: returns `r` with `r * q == self`.
    ///
    /// Errors distinguish division by zero from inexact division.
    pub fn exact_divide(&self, q: &Poly) -> Result<Poly, PolyError> {
        if q.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (mut rem, q) = self.aligned_pair(q);
        let (qlm, qlc) = {
            let (m, c) = q.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot = Poly::zero_over(rem.vars.clone());
        while !rem.is_zero() {
            let (rlm, rlc) = {
                let (m, c) = rem.leading_term().unwrap();
                (m.clone(), c.clone())
            };
            if !qlm.divides(&rlm) {
                return Err(PolyError::InexactDivision);
            }
            let m = qlm.quotient_into(&rlm);
            let c = &rlc / &qlc;
            let piece = Poly {
                vars: rem.vars.clone(),
                terms: BTreeMap::from([(m, c)]),
            };
            rem = rem.sub(&piece.mul(&q));
            quot = quot.add(&piece);
        }
        Ok(quot)
    }

    /// Renders without spaces around operators; reparses to an equal
    /// polynomial under the shared expression grammar.
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = crate::rational::abs(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if spaced {
                out.push_str(if neg { " - " } else { " + " });
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            out.push_str(&self.render_term(m, &mag));
        }
        out
    }

    fn render_term(&self, m: &Mono, mag: &BigRational) -> String {
        if m.is_one() {
            return crate::rational::format_rational(mag);
        }
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() {
            parts.push(crate::rational::format_rational(mag));
        }
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned_pair(other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(true))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Univariate operations
// ---------------------------------------------------------------------------

/// Dense view of a univariate polynomial: variable (if any) and ascending
/// coefficients. A constant has no variable constraint.
pub fn as_univariate(p: &Poly) -> Result<(Option<String>, Vec<BigRational>), PolyError> {
    let eff = p.effective_vars();
    match eff.len() {
        0 => Ok((
            None,
            if p.is_zero() {
                vec![]
            } else {
                vec![p.constant_value().unwrap()]
            },
        )),
        1 => {
            let var = eff[0].clone();
            let idx = p.var_index(&var).unwrap();
            let deg = p.degree_in(&var)?.unwrap() as usize;
            let mut coeffs = vec![BigRational::zero(); deg + 1];
            for (m, c) in &p.terms {
                coeffs[m.0[idx] as usize] = c.clone();
            }
            Ok((Some(var), coeffs))
        }
        _ => Err(PolyError::NotUnivariate(eff)),
    }
}

/// Builds a univariate polynomial from ascending coefficients.
pub fn from_univariate(var: &str, coeffs: &[BigRational]) -> Poly {
    let vars = [var];
    let mut terms = BTreeMap::new();
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            terms.insert(Mono(vec![e as u32]), c.clone());
        }
    }
    Poly {
        vars: vars.iter().map(|s| s.to_string()).collect(),
        terms,
    }
}

/// Common variable of two univariate polynomials, if compatible.
fn common_univariate_var(f: &Poly, g: &Poly) -> Result<Option<String>, PolyError> {
    let (vf, _) = as_univariate(f)?;
    let (vg, _) = as_univariate(g)?;
    match (vf, vg) {
        (Some(a), Some(b)) => {
            if a == b {
                Ok(Some(a))
            } else {
                Err(PolyError::VariableMismatch(a, b))
            }
        }
        (Some(a), None) | (None, Some(a)) => Ok(Some(a)),
        (None, None) => Ok(None),
    }
}

/// Monic greatest common divisor of two univariate polynomials in the
/// same variable. Errors if both inputs are zero.
pub fn gcd_univariate(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    let var = common_univariate_var(f, g)?;
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let var = match var {
        Some(v) => v,
        // Both constants, not both zero: the gcd is 1.
        None => return Ok(Poly::constant(&[], BigRational::one())),
    };
    let (_, fc) = as_univariate(f)?;
    let (_, gc) = as_univariate(g)?;
    let a = clear_denominators(&fc);
    let b = clear_denominators(&gc);
    let g = int_gcd_primitive(a, b);
    Ok(monic(&from_univariate(&var, &to_rational_vec(&g))))
}

/// Monic normalization: divides by the leading coefficient.
pub fn monic(p: &Poly) -> Poly {
    match p.leading_term() {
        None => p.clone(),
        Some((_, lc)) => {
            let inv = lc.recip();
            p.mul_scalar(&inv)
        }
    }
}

/// Monic squarefree part `f / gcd(f, f')` of a nonzero univariate
/// polynomial; its degree counts distinct roots in any algebraic closure.
pub fn squarefree_part(f: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (var, _) = as_univariate(f)?;
    let var = match var {
        None => return Ok(from_univariate("T", &[BigRational::one()])),
        Some(v) => v,
    };
    let fp = f.partial_derivative(&var)?;
    let g = gcd_univariate(f, &fp)?;
    let sf = f.exact_divide(&g)?;
    Ok(monic(&sf))
}

/// Number of distinct roots of a nonzero univariate polynomial in an
/// algebraic closure (characteristic 0): the degree of the squarefree part.
pub fn distinct_root_count(f: &Poly) -> Result<u64, PolyError> {
    let sf = squarefree_part(f)?;
    Ok(sf.total_degree().unwrap_or(0))
}

fn clear_denominators(coeffs: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in coeffs {
        if !c.is_zero() {
            lcm = lcm.lcm(c.denom());
        }
    }
    coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

fn to_rational_vec(coeffs: &[BigInt]) -> Vec<BigRational> {
    coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn trim_zeros(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn int_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    trim_zeros(&mut v);
    let c = int_content(&v);
    if !c.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &c;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero): `lc(b)^(da-db+1) * a mod b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lcb = b[db].clone();
    let mut r = a.to_vec();
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        for x in r.iter_mut() {
            *x = &*x * &lcb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lead * bc);
        }
        trim_zeros(&mut r);
    }
    r
}

/// Primitive pseudo-remainder sequence gcd over the integers.
fn int_gcd_primitive(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut a = int_primitive(a);
    let mut b = int_primitive(b);
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return b;
        }
        a = b;
        b = int_primitive(r);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn t() -> Poly {
        Poly::var(&["T"], "T")
    }

    fn tp(coeffs: &[i64]) -> Poly {
        from_univariate("T", &coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    fn random_poly(rng: &mut StdRng, deg: u32, vars: &[&str]) -> Poly {
        let mut p = Poly::zero(vars);
        for _ in 0..rng.gen_range(1..=6) {
            let mut exps = vec![0u32; vars.len()];
            let mut budget = deg;
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=budget);
                budget -= *e;
            }
            let c = int(rng.gen_range(-9..=9));
            p = p.add(&Poly::from_terms(
                p.vars().to_vec(),
                vec![(Mono::new(exps), c)],
            ));
        }
        p
    }

    #[test]
    fn additive_inverse_cancels() {
        let x = Poly::var(&["x"], "x");
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let p = tp(&[1, -3, 0, 2]);
        assert_eq!(p.mul(&Poly::one(&["T"])), p);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let p = tp(&[1, 1]); // T + 1
        let by_mul = p.mul(&p);
        assert_eq!(p.pow(2), by_mul);
        assert_eq!(p.pow(2), tp(&[1, 2, 1]));
        let by_mul3 = by_mul.mul(&p);
        assert_eq!(p.pow(3), by_mul3);
        assert_eq!(p.pow(0), Poly::one(&["T"]));
    }

    #[test]
    fn derivative_basics() {
        assert_eq!(tp(&[0, 0, 0, 1]).partial_derivative("T").unwrap(), tp(&[0, 0, 3]));
        assert_eq!(tp(&[5]).partial_derivative("T").unwrap(), tp(&[]));
        // d/dx (x^2 y + y) = 2xy
        let vars = ["x", "y"];
        let x = Poly::var(&vars, "x");
        let y = Poly::var(&vars, "y");
        let p = x.pow(2).mul(&y).add(&y);
        let expect = x.mul(&y).mul_scalar(&int(2));
        assert_eq!(p.partial_derivative("x").unwrap(), expect);
        assert_eq!(
            p.partial_derivative("w"),
            Err(PolyError::UnknownVariable("w".into()))
        );
    }

    #[test]
    fn gcd_examples() {
        let f = tp(&[-1, 0, 1]); // T^2 - 1
        let g = tp(&[-1, 1]); // T - 1
        assert_eq!(gcd_univariate(&f, &g).unwrap(), g);
        assert_eq!(gcd_univariate(&t(), &Poly::one(&["T"])).unwrap(), Poly::one(&["T"]));
        // gcd((T-1)^2 (T+3), (T-1)(T+5)) = T - 1, built from factors
        let a = tp(&[-1, 1]).pow(2).mul(&tp(&[3, 1]));
        let b = tp(&[-1, 1]).mul(&tp(&[5, 1]));
        assert_eq!(gcd_univariate(&a, &b).unwrap(), tp(&[-1, 1]));
    }

    #[test]
    fn gcd_rejects_two_zeros_and_mismatched_vars() {
        let z = Poly::zero(&["T"]);
        assert_eq!(gcd_univariate(&z, &z), Err(PolyError::ZeroPolynomial));
        let s = Poly::var(&["S"], "S");
        assert_eq!(
            gcd_univariate(&t(), &s),
            Err(PolyError::VariableMismatch("T".into(), "S".into()))
        );
    }

    #[test]
    fn distinct_roots() {
        assert_eq!(distinct_root_count(&tp(&[0, 0, 0, 1])).unwrap(), 1); // T^3
        let f = tp(&[-1, 1]).mul(&tp(&[-2, 1]));
        assert_eq!(distinct_root_count(&f).unwrap(), 2);
        // (T^2+1)^2 (T-1): the quadratic factor contributes two closure roots
        let g = tp(&[1, 0, 1]).pow(2).mul(&tp(&[-1, 1]));
        assert_eq!(distinct_root_count(&g).unwrap(), 3);
        assert_eq!(
            distinct_root_count(&Poly::zero(&["T"])),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = tp(&[-1, 1]).pow(2).mul(&tp(&[3, 1])).mul_scalar(&int(5));
        let sf = squarefree_part(&f).unwrap();
        assert_eq!(sf, tp(&[-1, 1]).mul(&tp(&[3, 1])));
        assert_eq!(squarefree_part(&tp(&[7])).unwrap(), Poly::one(&["T"]));
    }

    #[test]
    fn exact_division() {
        let p = tp(&[-1, 0, 1]);
        let q = tp(&[-1, 1]);
        assert_eq!(p.exact_divide(&q).unwrap(), tp(&[1, 1]));
        let r = tp(&[7, 3]);
        assert_eq!(r.exact_divide(&Poly::one(&["T"])).unwrap(), r);
        let a = tp(&[-1, 1]).pow(2).mul(&tp(&[3, 1]));
        assert_eq!(
            a.exact_divide(&tp(&[-1, 1])).unwrap(),
            tp(&[-1, 1]).mul(&tp(&[3, 1]))
        );
        assert_eq!(
            tp(&[1, 1]).exact_divide(&Poly::zero(&["T"])),
            Err(PolyError::DivisionByZero)
        );
        assert_eq!(tp(&[1, 0, 1]).exact_divide(&tp(&[1, 1])), Err(PolyError::InexactDivision));
    }

    #[test]
    fn gcd_properties_on_random_factor_products() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..200 {
            let shared = tp(&[rng.gen_range(-4..=4), 1]);
            let f = shared.mul(&tp(&[rng.gen_range(-4..=4), rng.gen_range(1..=3)]));
            let g = shared.mul(&tp(&[rng.gen_range(-4..=4), rng.gen_range(1..=3)]));
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let d = gcd_univariate(&f, &g).unwrap();
            let d2 = gcd_univariate(&g, &f).unwrap();
            assert_eq!(d, d2);
            assert!(f.exact_divide(&d).is_ok());
            assert!(g.exact_divide(&d).is_ok());
            let (_, lc) = d.leading_term().unwrap();
            assert!(lc.is_one());
            // the known common factor divides the gcd
            assert!(d.exact_divide(&monic(&shared)).is_ok() || d.is_one());
        }
    }

    #[test]
    fn root_count_bounded_by_degree_with_equality_iff_squarefree() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let mut f = tp(&[rng.gen_range(-3..=3), 1]);
            for _ in 0..rng.gen_range(0..3) {
                f = f.mul(&tp(&[rng.gen_range(-3..=3), rng.gen_range(-2..=2), 1]));
            }
            let n = distinct_root_count(&f).unwrap();
            let deg = f.total_degree().unwrap();
            assert!(n <= deg);
            let fp = f.partial_derivative("T").unwrap();
            let g = gcd_univariate(&f, &fp).unwrap();
            assert_eq!(n == deg, g.is_constant());
        }
    }

    #[test]
    fn multiply_then_divide_round_trips() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_poly(&mut rng, 4, &["x", "y"]);
            let q = random_poly(&mut rng, 3, &["x", "y"]);
            if q.is_zero() {
                continue;
            }
            assert_eq!(p.mul(&q).exact_divide(&q).unwrap(), p);
        }
    }

    #[test]
    fn arithmetic_is_exact_and_commutative() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_poly(&mut rng, 5, &["x", "y", "z"]);
            let q = random_poly(&mut rng, 5, &["x", "y", "z"]);
            let r = random_poly(&mut rng, 3, &["x", "y", "z"]);
            assert_eq!(p.add(&q).sub(&q), p);
            assert_eq!(p.add(&q), q.add(&p));
            assert_eq!(p.mul(&q), q.mul(&p));
            assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
            assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        }
    }

    #[test]
    fn alignment_by_name_union() {
        let x = Poly::var(&["x"], "x");
        let y = Poly::var(&["y"], "y");
        let s = x.add(&y);
        assert_eq!(s.vars(), &["x".to_string(), "y".to_string()]);
        let s2 = y.add(&x);
        assert_eq!(s, s2);
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let vars = ["x", "y"];
        let x = Poly::var(&vars, "x");
        let y = Poly::var(&vars, "y");
        let p = x.pow(2).mul(&y).add(&y).add(&Poly::constant(&vars, ratio(3, 2)));
        assert_eq!(p.to_string(), "x^2*y + y + 3/2");
        let q = x.pow(2).neg().sub(&y.pow(3));
        assert_eq!(q.to_string(), "-y^3 - x^2");
        assert_eq!(q.to_compact_string(), "-y^3-x^2");
        assert_eq!(Poly::zero(&vars).to_string(), "0");
    }
}
