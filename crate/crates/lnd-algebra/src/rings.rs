//! Presentations and canonical normal forms for the quotient rings
//!
//! ```text
//! R      = Q[x,y,z] / (x^a + y^b + z^c + lambda)
//! A(n,m) = R[u,v]   / (x^m u - y^n v - 1)
//! ```
//!
//! with exponents `a,b,c >= 2` pairwise coprime and `n,m >= 2` (a
//! permissive constructor admits `n,m >= 1`).
//!
//! Elements are kept in a canonical normal form obtained by exhaustively
//! rewriting
//!
//! ```text
//! z^c    ->  -x^a - y^b - lambda
//! x^m u  ->  y^n v + 1
//! ```
//!
//! on any monomial divisible by a left-hand side. Under a lexicographic
//! order with `u > z > x > y > v` both left-hand sides lead their
//! relations and are coprime as monomials, so the relation pair is a
//! Groebner basis of the defining ideal: the rewriting terminates and the
//! normal form is independent of the order in which rules are applied.
//! `normal_form_randomized` exposes a single-step reducer with a caller
//! supplied random strategy so that confluence can be exercised directly.
//!
//! A [`Presentation`] may adjoin extra free variables (used for bundle
//! coordinates) and further `x^k u' -> y^l v' + 1` relations. Extra
//! relations of that shape overlap the base `x^m u` rule in `x`, so the
//! extended system is terminating but not confluent; reduced forms are
//! still valid representatives, and callers that need decidable equality
//! work in the free-adjoined presentation instead (see the cancellation
//! module).

use crate::poly::{Mono, Poly, PolyError};
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use std::fmt;

/// Generators of the base ring, in declared order.
pub const BASE_VARS: [&str; 5] = ["x", "y", "z", "u", "v"];

/// Errors raised by ring construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingsError {
    ExponentTooSmall {
        which: &'static str,
        value: u32,
        min: u32,
    },
    NotPairwiseCoprime {
        pair: (u32, u32),
        gcd: u32,
    },
    UnknownVariable(String),
    DuplicateVariable(String),
    PresentationMismatch,
    MissingImage(String),
    UnexpectedImage(String),
    RelationNotPreserved {
        relation: String,
        image: String,
    },
}

impl fmt::Display for RingsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingsError::ExponentTooSmall { which, value, min } => {
                write!(f, "exponent {which} = {value} is below the minimum {min}")
            }
            RingsError::NotPairwiseCoprime { pair, gcd } => {
                write!(f, "exponents {} and {} share the factor {gcd}", pair.0, pair.1)
            }
            RingsError::UnknownVariable(v) => write!(f, "unknown variable: {v}"),
            RingsError::DuplicateVariable(v) => write!(f, "duplicate variable: {v}"),
            RingsError::PresentationMismatch => {
                write!(f, "operands live in different ring presentations")
            }
            RingsError::MissingImage(v) => write!(f, "no image given for generator {v}"),
            RingsError::UnexpectedImage(v) => write!(f, "image given for unknown generator {v}"),
            RingsError::RelationNotPreserved { relation, image } => {
                write!(f, "relation {relation} maps to nonzero element {image}")
            }
        }
    }
}

impl std::error::Error for RingsError {}

impl From<PolyError> for RingsError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::UnknownVariable(v) => RingsError::UnknownVariable(v),
            other => panic!("unexpected polynomial error in ring operation: {other}"),
        }
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exponent data `(a, b, c, lambda)` of the surface relation
/// `x^a + y^b + z^c + lambda`, with derived regime flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceParams {
    a: u32,
    b: u32,
    c: u32,
    lambda: BigRational,
    ml_regime: bool,
    perturbed_regime: bool,
}

impl SurfaceParams {
    /// Validates `a,b,c >= 2` pairwise coprime and computes the regime
    /// flags: `ml_regime` is `1/a + 1/b + 1/c < 1`, `perturbed_regime`
    /// is `a,b,c >= 4` with `1/(a-3) + 1/(b-3) + 1/(c-3) <= 1/2`.
    pub fn new(a: u32, b: u32, c: u32, lambda: BigRational) -> Result<Self, RingsError> {
        for (which, value) in [("a", a), ("b", b), ("c", c)] {
            if value < 2 {
                return Err(RingsError::ExponentTooSmall { which, value, min: 2 });
            }
        }
        for (p, q) in [(a, b), (a, c), (b, c)] {
            let g = gcd_u32(p, q);
            if g != 1 {
                return Err(RingsError::NotPairwiseCoprime { pair: (p, q), gcd: g });
            }
        }
        let (aa, bb, cc) = (a as u64, b as u64, c as u64);
        let ml_regime = bb * cc + aa * cc + aa * bb < aa * bb * cc;
        let perturbed_regime = a >= 4 && b >= 4 && c >= 4 && {
            let (pa, pb, pc) = (aa - 3, bb - 3, cc - 3);
            2 * (pb * pc + pa * pc + pa * pb) <= pa * pb * pc
        };
        Ok(SurfaceParams {
            a,
            b,
            c,
            lambda,
            ml_regime,
            perturbed_regime,
        })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    /// `1/a + 1/b + 1/c < 1`.
    pub fn ml_regime(&self) -> bool {
        self.ml_regime
    }

    /// `a,b,c >= 4` and `1/(a-3) + 1/(b-3) + 1/(c-3) <= 1/2`.
    pub fn perturbed_regime(&self) -> bool {
        self.perturbed_regime
    }

    /// The defining relation `x^a + y^b + z^c + lambda` over `x,y,z`.
    pub fn relation(&self) -> Poly {
        let vars = ["x", "y", "z"];
        Poly::var(&vars, "x")
            .pow(self.a)
            .add(&Poly::var(&vars, "y").pow(self.b))
            .add(&Poly::var(&vars, "z").pow(self.c))
            .add(&Poly::constant(&vars, self.lambda.clone()))
    }
}

/// Surface exponents together with the bundle exponents `(n, m)` of the
/// relation `x^m u - y^n v - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldParams {
    surface: SurfaceParams,
    n: u32,
    m: u32,
}

impl ThreefoldParams {
    /// Default constructor: requires `n, m >= 2`.
    pub fn new(surface: SurfaceParams, n: u32, m: u32) -> Result<Self, RingsError> {
        for (which, value) in [("n", n), ("m", m)] {
            if value < 2 {
                return Err(RingsError::ExponentTooSmall { which, value, min: 2 });
            }
        }
        Ok(ThreefoldParams { surface, n, m })
    }

    /// Permissive constructor admitting `n, m >= 1`. Callers that accept
    /// user input should surface a warning when either exponent is 1.
    pub fn new_permissive(surface: SurfaceParams, n: u32, m: u32) -> Result<Self, RingsError> {
        for (which, value) in [("n", n), ("m", m)] {
            if value < 1 {
                return Err(RingsError::ExponentTooSmall { which, value, min: 1 });
            }
        }
        Ok(ThreefoldParams { surface, n, m })
    }

    pub fn surface(&self) -> &SurfaceParams {
        &self.surface
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// An extra relation `x^x_power * u_var = y^y_power * v_var + 1` on a
/// pair of adjoined variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleRelation {
    pub u_var: String,
    pub v_var: String,
    pub x_power: u32,
    pub y_power: u32,
}

/// One rewrite rule `lhs -> rhs`; applying it to a monomial divisible by
/// `lhs` replaces one occurrence of the divisor.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub lhs: Mono,
    pub rhs: Poly,
    pub label: String,
}

/// A presentation of `A(n,m)`, possibly extended by adjoined free
/// variables and extra bundle relations.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    params: ThreefoldParams,
    adjoined: Vec<String>,
    bundles: Vec<BundleRelation>,
}

impl Presentation {
    pub fn new(params: ThreefoldParams) -> Self {
        Presentation {
            params,
            adjoined: Vec::new(),
            bundles: Vec::new(),
        }
    }

    /// Adjoins free variables after the base generators. Names must be
    /// fresh.
    pub fn with_adjoined(mut self, names: &[&str]) -> Result<Self, RingsError> {
        for name in names {
            let name = name.to_string();
            if BASE_VARS.contains(&name.as_str()) || self.adjoined.contains(&name) {
                return Err(RingsError::DuplicateVariable(name));
            }
            self.adjoined.push(name);
        }
        Ok(self)
    }

    /// Adds a bundle relation on two already-adjoined variables.
    pub fn with_bundle_relation(mut self, rel: BundleRelation) -> Result<Self, RingsError> {
        for v in [&rel.u_var, &rel.v_var] {
            if !self.adjoined.contains(v) {
                return Err(RingsError::UnknownVariable(v.clone()));
            }
        }
        self.bundles.push(rel);
        Ok(self)
    }

    pub fn params(&self) -> &ThreefoldParams {
        &self.params
    }

    pub fn adjoined(&self) -> &[String] {
        &self.adjoined
    }

    pub fn bundle_relations(&self) -> &[BundleRelation] {
        &self.bundles
    }

    /// Generator names: `x, y, z, u, v`, then adjoined variables.
    pub fn vars(&self) -> Vec<String> {
        BASE_VARS
            .iter()
            .map(|s| s.to_string())
            .chain(self.adjoined.iter().cloned())
            .collect()
    }

    fn var_refs(&self) -> Vec<String> {
        self.vars()
    }

    fn mono(&self, factors: &[(&str, u32)]) -> Mono {
        let vars = self.vars();
        let mut exps = vec![0u32; vars.len()];
        for (name, e) in factors {
            let idx = vars.iter().position(|v| v == name).expect("declared var");
            exps[idx] += e;
        }
        Mono::new(exps)
    }

    /// The active rewrite rules, base rules first.
    pub fn rules(&self) -> Vec<RewriteRule> {
        let vars = self.vars();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let s = self.params.surface();
        let mut rules = Vec::with_capacity(2 + self.bundles.len());

        let z_rhs = Poly::var(&var_refs, "x")
            .pow(s.a())
            .add(&Poly::var(&var_refs, "y").pow(s.b()))
            .add(&Poly::constant(&var_refs, s.lambda().clone()))
            .neg();
        rules.push(RewriteRule {
            lhs: self.mono(&[("z", s.c())]),
            rhs: z_rhs,
            label: format!("z^{}", s.c()),
        });

        let u_rhs = Poly::var(&var_refs, "y")
            .pow(self.params.n())
            .mul(&Poly::var(&var_refs, "v"))
            .add(&Poly::one(&var_refs));
        rules.push(RewriteRule {
            lhs: self.mono(&[("x", self.params.m()), ("u", 1)]),
            rhs: u_rhs,
            label: format!("x^{}*u", self.params.m()),
        });

        for b in &self.bundles {
            let rhs = Poly::var(&var_refs, "y")
                .pow(b.y_power)
                .mul(&Poly::var(&var_refs, &b.v_var))
                .add(&Poly::one(&var_refs));
            rules.push(RewriteRule {
                lhs: self.mono(&[("x", b.x_power), (b.u_var.as_str(), 1)]),
                rhs,
                label: format!("x^{}*{}", b.x_power, b.u_var),
            });
        }
        rules
    }

    /// Defining relations as polynomials (`lhs - rhs`, zero in the ring).
    pub fn relations(&self) -> Vec<(String, Poly)> {
        self.rules()
            .into_iter()
            .map(|r| {
                let lhs = Poly::from_terms(self.var_refs(), vec![(r.lhs, BigRational::one())]);
                (r.label, lhs.sub(&r.rhs))
            })
            .collect()
    }

    pub fn zero(&self) -> AElement {
        AElement {
            pres: self.clone(),
            value: Poly::zero_over(self.vars()),
        }
    }

    pub fn one(&self) -> AElement {
        self.constant(BigRational::one())
    }

    pub fn constant(&self, c: BigRational) -> AElement {
        let vars = self.vars();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        AElement {
            pres: self.clone(),
            value: Poly::constant(&var_refs, c),
        }
    }

    /// A generator as an element. Errors on undeclared names.
    pub fn var(&self, name: &str) -> Result<AElement, RingsError> {
        let vars = self.vars();
        if !vars.iter().any(|v| v == name) {
            return Err(RingsError::UnknownVariable(name.to_string()));
        }
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        Ok(AElement {
            pres: self.clone(),
            value: Poly::var(&var_refs, name),
        })
    }
}

/// Reduces a polynomial with the given rules until no monomial is
/// divisible by any left-hand side. Deterministic strategy: largest
/// reducible monomial first, first applicable rule, applied as many
/// times as the monomial allows.
pub fn reduce(p: &Poly, rules: &[RewriteRule]) -> Poly {
    let mut cur = p.clone();
    loop {
        let mut chosen: Option<(Mono, usize)> = None;
        for (m, _) in cur.terms().rev() {
            if let Some(ri) = rules.iter().position(|r| r.lhs.divides(m)) {
                chosen = Some((m.clone(), ri));
                break;
            }
        }
        let Some((m, ri)) = chosen else {
            return cur;
        };
        let rule = &rules[ri];
        let q = rule.lhs.max_quotient_power(&m);
        let c = cur.coefficient(&m);
        let quotient = rule.lhs.pow(q).quotient_into(&m);
        let replacement =
            Poly::from_terms(cur.vars().to_vec(), vec![(quotient, c.clone())]).mul(&rule.rhs.pow(q));
        let removed = Poly::from_terms(cur.vars().to_vec(), vec![(m, c)]);
        cur = cur.sub(&removed).add(&replacement);
    }
}

/// Single-step reducer with a randomized strategy: at each step one
/// (monomial, rule) pair is chosen uniformly among all reducible pairs
/// and the rule is applied to one occurrence of its divisor.
pub fn reduce_randomized<R: Rng>(p: &Poly, rules: &[RewriteRule], rng: &mut R) -> Poly {
    let mut cur = p.clone();
    loop {
        let mut reducible: Vec<(Mono, usize)> = Vec::new();
        for (m, _) in cur.terms() {
            for (ri, r) in rules.iter().enumerate() {
                if r.lhs.divides(m) {
                    reducible.push((m.clone(), ri));
                }
            }
        }
        if reducible.is_empty() {
            return cur;
        }
        let (m, ri) = reducible[rng.gen_range(0..reducible.len())].clone();
        let rule = &rules[ri];
        let c = cur.coefficient(&m);
        let quotient = rule.lhs.quotient_into(&m);
        let replacement =
            Poly::from_terms(cur.vars().to_vec(), vec![(quotient, c.clone())]).mul(&rule.rhs);
        let removed = Poly::from_terms(cur.vars().to_vec(), vec![(m, c)]);
        cur = cur.sub(&removed).add(&replacement);
    }
}

/// An element of `A(n,m)` (or an extension) in canonical normal form:
/// no monomial of `value` is divisible by any rule left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct AElement {
    pres: Presentation,
    value: Poly,
}

impl AElement {
    /// Canonical normal form of a polynomial in the presentation's
    /// variables.
    pub fn normal_form(pres: &Presentation, p: &Poly) -> Result<AElement, RingsError> {
        let aligned = p.aligned_to(&pres.vars())?;
        Ok(AElement {
            pres: pres.clone(),
            value: reduce(&aligned, &pres.rules()),
        })
    }

    /// Normal form computed with a randomized rule-application order.
    /// Agrees with [`AElement::normal_form`] whenever the presentation's
    /// rule left-hand sides are pairwise coprime monomials.
    pub fn normal_form_randomized<R: Rng>(
        pres: &Presentation,
        p: &Poly,
        rng: &mut R,
    ) -> Result<AElement, RingsError> {
        let aligned = p.aligned_to(&pres.vars())?;
        Ok(AElement {
            pres: pres.clone(),
            value: reduce_randomized(&aligned, &pres.rules(), rng),
        })
    }

    pub fn pres(&self) -> &Presentation {
        &self.pres
    }

    pub fn params(&self) -> &ThreefoldParams {
        self.pres.params()
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn check_same(&self, other: &AElement) -> Result<(), RingsError> {
        if self.pres == other.pres {
            Ok(())
        } else {
            Err(RingsError::PresentationMismatch)
        }
    }

    pub fn add(&self, other: &AElement) -> Result<AElement, RingsError> {
        self.check_same(other)?;
        AElement::normal_form(&self.pres, &self.value.add(&other.value))
    }

    pub fn sub(&self, other: &AElement) -> Result<AElement, RingsError> {
        self.check_same(other)?;
        AElement::normal_form(&self.pres, &self.value.sub(&other.value))
    }

    pub fn mul(&self, other: &AElement) -> Result<AElement, RingsError> {
        self.check_same(other)?;
        AElement::normal_form(&self.pres, &self.value.mul(&other.value))
    }

    pub fn neg(&self) -> AElement {
        AElement {
            pres: self.pres.clone(),
            value: self.value.neg(),
        }
    }

    pub fn mul_scalar(&self, c: &BigRational) -> AElement {
        AElement {
            pres: self.pres.clone(),
            value: self.value.mul_scalar(c),
        }
    }

    pub fn pow(&self, k: u32) -> AElement {
        AElement::normal_form(&self.pres, &self.value.pow(k)).expect("own vars are valid")
    }

    /// True if the element lies in the `x,y,z`-subring.
    pub fn is_in_surface_subring(&self) -> bool {
        self.value
            .effective_vars()
            .iter()
            .all(|v| v == "x" || v == "y" || v == "z")
    }

    /// Coefficients `p_0 .. p_d` of the element as a polynomial in `u`;
    /// the `p_i` are polynomials in the remaining variables and the
    /// decomposition reassembles to the element. Canonical because the
    /// normal form bounds the `x`-degree below `m` in every monomial
    /// containing `u` and the `z`-degree below `c` everywhere.
    pub fn u_decomposition(&self) -> Vec<Poly> {
        let vars = self.pres.vars();
        let u_idx = vars.iter().position(|v| v == "u").expect("base var u");
        let rest_vars: Vec<String> = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != u_idx)
            .map(|(_, v)| v.clone())
            .collect();
        let d = self
            .value
            .terms()
            .map(|(m, _)| m.exponents()[u_idx])
            .max()
            .unwrap_or(0) as usize;
        let mut coeffs: Vec<Vec<(Mono, BigRational)>> = vec![Vec::new(); d + 1];
        for (m, c) in self.value.terms() {
            let e = m.exponents()[u_idx] as usize;
            let rest: Vec<u32> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != u_idx)
                .map(|(_, &x)| x)
                .collect();
            coeffs[e].push((Mono::new(rest), c.clone()));
        }
        coeffs
            .into_iter()
            .map(|terms| Poly::from_terms(rest_vars.clone(), terms))
            .collect()
    }
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A ring homomorphism between presentations, given by generator images.
/// Construction verifies that every defining relation of the source maps
/// to zero; [`RingMap::new_unchecked`] skips that check for data read
/// from external input, in which case [`RingMap::check_relations`]
/// reports rather than rejects.
#[derive(Debug, Clone, PartialEq)]
pub struct RingMap {
    src: Presentation,
    dst: Presentation,
    images: Vec<AElement>,
}

impl RingMap {
    pub fn new(
        src: Presentation,
        dst: Presentation,
        images: Vec<(String, AElement)>,
    ) -> Result<Self, RingsError> {
        let map = RingMap::new_unchecked(src, dst, images)?;
        map.check_relations()?;
        Ok(map)
    }

    /// Builds the map without verifying relation preservation. Image
    /// count and presentations are still validated.
    pub fn new_unchecked(
        src: Presentation,
        dst: Presentation,
        images: Vec<(String, AElement)>,
    ) -> Result<Self, RingsError> {
        let vars = src.vars();
        for (name, img) in &images {
            if !vars.iter().any(|v| v == name) {
                return Err(RingsError::UnexpectedImage(name.clone()));
            }
            if img.pres() != &dst {
                return Err(RingsError::PresentationMismatch);
            }
        }
        let mut ordered = Vec::with_capacity(vars.len());
        for v in &vars {
            let img = images
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, i)| i.clone())
                .ok_or_else(|| RingsError::MissingImage(v.clone()))?;
            ordered.push(img);
        }
        Ok(RingMap {
            src,
            dst,
            images: ordered,
        })
    }

    pub fn identity(pres: &Presentation) -> Self {
        let images = pres
            .vars()
            .iter()
            .map(|v| pres.var(v).expect("own generator"))
            .collect();
        RingMap {
            src: pres.clone(),
            dst: pres.clone(),
            images,
        }
    }

    pub fn src(&self) -> &Presentation {
        &self.src
    }

    pub fn dst(&self) -> &Presentation {
        &self.dst
    }

    pub fn image(&self, name: &str) -> Result<&AElement, RingsError> {
        let vars = self.src.vars();
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RingsError::UnknownVariable(name.to_string()))?;
        Ok(&self.images[idx])
    }

    pub fn images(&self) -> impl Iterator<Item = (String, &AElement)> {
        self.src.vars().into_iter().zip(self.images.iter())
    }

    /// Verifies that every source relation maps to zero.
    pub fn check_relations(&self) -> Result<(), RingsError> {
        for (label, rel) in self.src.relations() {
            let image = self.apply_poly(&rel);
            if !image.is_zero() {
                return Err(RingsError::RelationNotPreserved {
                    relation: label,
                    image: image.value().to_string(),
                });
            }
        }
        Ok(())
    }

    fn apply_poly(&self, p: &Poly) -> AElement {
        let images: Vec<(String, Poly)> = self
            .src
            .vars()
            .into_iter()
            .zip(self.images.iter())
            .map(|(v, img)| (v, img.value().clone()))
            .collect();
        let substituted = p.substitute(&images);
        AElement::normal_form(&self.dst, &substituted).expect("images use dst vars")
    }

    /// Applies the map to an element of the source ring.
    pub fn apply(&self, h: &AElement) -> Result<AElement, RingsError> {
        if h.pres() != &self.src {
            return Err(RingsError::PresentationMismatch);
        }
        Ok(self.apply_poly(h.value()))
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &RingMap) -> Result<RingMap, RingsError> {
        if inner.dst != self.src {
            return Err(RingsError::PresentationMismatch);
        }
        let images = inner
            .src
            .vars()
            .into_iter()
            .zip(inner.images.iter())
            .map(|(v, img)| Ok((v, self.apply(img)?)))
            .collect::<Result<Vec<_>, RingsError>>()?;
        RingMap::new_unchecked(inner.src.clone(), self.dst.clone(), images)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
            && self
                .images()
                .all(|(v, img)| match self.src.var(&v) {
                    Ok(gen) => *img == gen,
                    Err(_) => false,
                })
    }
}

/// An endomorphism of the surface ring `R` given by images of `x,y,z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMap {
    surface: SurfaceParams,
    images: [Poly; 3],
}

impl SurfaceMap {
    /// Validates that the surface relation maps to zero.
    pub fn new(surface: SurfaceParams, images: [Poly; 3]) -> Result<Self, RingsError> {
        let map = SurfaceMap { surface, images };
        let rel = map.surface.relation();
        let image = map.apply(&rel)?;
        if !image.is_zero() {
            return Err(RingsError::RelationNotPreserved {
                relation: "surface".to_string(),
                image: image.to_string(),
            });
        }
        Ok(map)
    }

    pub fn identity(surface: SurfaceParams) -> Self {
        let vars = ["x", "y", "z"];
        let images = [
            Poly::var(&vars, "x"),
            Poly::var(&vars, "y"),
            Poly::var(&vars, "z"),
        ];
        SurfaceMap { surface, images }
    }

    pub fn images(&self) -> &[Poly; 3] {
        &self.images
    }

    fn z_rule(&self) -> Vec<RewriteRule> {
        let vars = ["x", "y", "z"];
        let s = &self.surface;
        let rhs = Poly::var(&vars, "x")
            .pow(s.a())
            .add(&Poly::var(&vars, "y").pow(s.b()))
            .add(&Poly::constant(&vars, s.lambda().clone()))
            .neg();
        vec![RewriteRule {
            lhs: Mono::new(vec![0, 0, s.c()]),
            rhs,
            label: format!("z^{}", s.c()),
        }]
    }

    /// Applies the map to a polynomial in `x,y,z` and reduces modulo the
    /// surface relation.
    pub fn apply(&self, p: &Poly) -> Result<Poly, RingsError> {
        let vars = ["x", "y", "z"];
        let aligned = p.aligned_to(&vars.map(String::from))?;
        let images: Vec<(String, Poly)> = ["x", "y", "z"]
            .iter()
            .zip(self.images.iter())
            .map(|(v, img)| (v.to_string(), img.clone()))
            .collect();
        let substituted = aligned.substitute(&images);
        Ok(reduce(
            &substituted.aligned_to(&vars.map(String::from))?,
            &self.z_rule(),
        ))
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &SurfaceMap) -> Result<SurfaceMap, RingsError> {
        let images = [
            self.apply(&inner.images[0])?,
            self.apply(&inner.images[1])?,
            self.apply(&inner.images[2])?,
        ];
        Ok(SurfaceMap {
            surface: self.surface.clone(),
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == SurfaceMap::identity(self.surface.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn surface237() -> SurfaceParams {
        SurfaceParams::new(2, 3, 7, int(0)).unwrap()
    }

    fn pres22() -> Presentation {
        Presentation::new(ThreefoldParams::new(surface237(), 2, 2).unwrap())
    }

    fn nf(pres: &Presentation, text: &str) -> AElement {
        let vars = pres.vars();
        let p = crate::parse::parse_expression_with_vars(text, &vars).unwrap();
        AElement::normal_form(pres, &p).unwrap()
    }

    fn random_element(pres: &Presentation, rng: &mut StdRng, max_deg: u32, terms: usize) -> AElement {
        use rand::Rng;
        let vars = pres.vars();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let mut p = Poly::zero(&var_refs);
        for _ in 0..terms {
            let mut exps = vec![0u32; vars.len()];
            let mut budget = max_deg;
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=budget.min(3));
                budget -= *e;
            }
            p = p.add(&Poly::from_terms(
                vars.clone(),
                vec![(Mono::new(exps), int(rng.gen_range(-5..=5)))],
            ));
        }
        AElement::normal_form(pres, &p).unwrap()
    }

    #[test]
    fn surface_params_examples() {
        let s = surface237();
        assert!(s.ml_regime()); // 1/2 + 1/3 + 1/7 = 41/42 < 1
        assert!(!s.perturbed_regime());

        let err = SurfaceParams::new(2, 4, 5, int(0)).unwrap_err();
        assert_eq!(err, RingsError::NotPairwiseCoprime { pair: (2, 4), gcd: 2 });

        let s = SurfaceParams::new(7, 11, 13, int(1)).unwrap();
        assert!(s.perturbed_regime()); // 1/4 + 1/8 + 1/10 = 19/40 <= 1/2
        assert!(s.ml_regime());

        assert!(matches!(
            SurfaceParams::new(1, 3, 7, int(0)),
            Err(RingsError::ExponentTooSmall { which: "a", .. })
        ));
    }

    #[test]
    fn boundary_of_perturbed_regime() {
        // 1/(7-3) + 1/(7-3) + ... needs pairwise coprime inputs; use (4,5,7):
        // 1/1 + 1/2 + 1/4 > 1/2, not in the regime.
        let s = SurfaceParams::new(4, 5, 7, int(1)).unwrap();
        assert!(!s.perturbed_regime());
    }

    #[test]
    fn threefold_exponent_bounds() {
        let s = surface237();
        assert!(ThreefoldParams::new(s.clone(), 2, 2).is_ok());
        assert!(matches!(
            ThreefoldParams::new(s.clone(), 1, 2),
            Err(RingsError::ExponentTooSmall { which: "n", .. })
        ));
        assert!(ThreefoldParams::new_permissive(s.clone(), 1, 1).is_ok());
        assert!(ThreefoldParams::new_permissive(s, 0, 1).is_err());
    }

    #[test]
    fn single_rule_normal_forms() {
        let pres = pres22();
        assert_eq!(nf(&pres, "z^7"), nf(&pres, "-x^2 - y^3"));
        assert_eq!(nf(&pres, "x^2*u"), nf(&pres, "y^2*v + 1"));
        // x^(2m) u reduces once and is then irreducible
        assert_eq!(nf(&pres, "x^4*u"), nf(&pres, "x^2*y^2*v + x^2"));
        let e = nf(&pres, "x^4*u");
        assert_eq!(e.value().to_string(), "x^2*y^2*v + x^2");
    }

    #[test]
    fn lambda_is_carried_through_the_z_rule() {
        let s = SurfaceParams::new(2, 3, 7, ratio(1, 2)).unwrap();
        let pres = Presentation::new(ThreefoldParams::new(s, 2, 2).unwrap());
        assert_eq!(nf(&pres, "z^7"), nf(&pres, "-x^2 - y^3 - 1/2"));
    }

    #[test]
    fn defining_relation_is_a_unit_partition() {
        let pres = pres22();
        let x2 = nf(&pres, "x^2");
        let u = nf(&pres, "u");
        assert_eq!(x2.mul(&u).unwrap(), nf(&pres, "y^2*v + 1"));

        let e = random_element(&pres, &mut StdRng::seed_from_u64(1), 4, 4);
        assert_eq!(e.add(&pres.zero()).unwrap(), e);

        let unit = nf(&pres, "x^2*u - y^2*v");
        assert!(unit.mul(&unit).unwrap().is_one());
    }

    #[test]
    fn powers_match_repeated_multiplication() {
        let pres = pres22();
        let e = random_element(&pres, &mut StdRng::seed_from_u64(9), 3, 3);
        assert!(e.pow(0).is_one());
        assert_eq!(e.pow(1), e);
        let cubed = e.mul(&e).unwrap().mul(&e).unwrap();
        assert_eq!(e.pow(3), cubed);
    }

    #[test]
    fn u_decomposition_examples() {
        let pres = pres22();
        let u = nf(&pres, "u");
        let d = u.u_decomposition();
        assert_eq!(d.len(), 2);
        assert!(d[0].is_zero());
        assert!(d[1].is_one());

        let h = nf(&pres, "x^2*u"); // reduces to y^2 v + 1, u-degree 0
        let d = h.u_decomposition();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0], "y^2*v + 1".parse::<Poly>().unwrap());

        let h = nf(&pres, "u*v + x");
        let d = h.u_decomposition();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], "x".parse::<Poly>().unwrap());
        assert_eq!(d[1], "v".parse::<Poly>().unwrap());
    }

    #[test]
    fn u_decomposition_reassembles() {
        let pres = pres22();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let h = random_element(&pres, &mut rng, 6, 5);
            let parts = h.u_decomposition();
            let vars = pres.vars();
            let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let u = Poly::var(&var_refs, "u");
            let mut acc = Poly::zero(&var_refs);
            for (i, p) in parts.iter().enumerate() {
                acc = acc.add(&p.aligned_to(&vars).unwrap().mul(&u.pow(i as u32)));
            }
            assert_eq!(&acc, h.value());
        }
    }

    #[test]
    fn confluence_under_randomized_orders() {
        let pres = pres22();
        let mut rng = StdRng::seed_from_u64(99);
        let vars = pres.vars();
        for _ in 0..200 {
            let p = {
                use rand::Rng;
                let mut p = Poly::zero_over(vars.clone());
                for _ in 0..rng.gen_range(1..6) {
                    let mut exps = vec![0u32; vars.len()];
                    let mut budget = 6u32;
                    for e in exps.iter_mut() {
                        *e = rng.gen_range(0..=budget.min(4));
                        budget -= *e;
                    }
                    p = p.add(&Poly::from_terms(
                        vars.clone(),
                        vec![(Mono::new(exps), int(rng.gen_range(-5..=5)))],
                    ));
                }
                p
            };
            let a = AElement::normal_form_randomized(&pres, &p, &mut rng).unwrap();
            let b = AElement::normal_form_randomized(&pres, &p, &mut rng).unwrap();
            let c = AElement::normal_form(&pres, &p).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }

    #[test]
    fn confluence_survives_a_nonzero_constant_term() {
        let s = SurfaceParams::new(2, 3, 5, ratio(1, 2)).unwrap();
        let pres = Presentation::new(ThreefoldParams::new(s, 2, 2).unwrap());
        let vars = pres.vars();
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..50 {
            let p = {
                use rand::Rng;
                let mut p = Poly::zero_over(vars.clone());
                for _ in 0..rng.gen_range(1..5) {
                    let mut exps = vec![0u32; vars.len()];
                    let mut budget = 7u32;
                    for e in exps.iter_mut() {
                        *e = rng.gen_range(0..=budget);
                        budget -= *e;
                    }
                    p = p.add(&Poly::from_terms(
                        vars.clone(),
                        vec![(Mono::new(exps), int(rng.gen_range(-5..=5)))],
                    ));
                }
                p
            };
            let a = AElement::normal_form_randomized(&pres, &p, &mut rng).unwrap();
            let b = AElement::normal_form(&pres, &p).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ring_laws_on_random_elements() {
        let pres = pres22();
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..40 {
            let a = random_element(&pres, &mut rng, 4, 3);
            let b = random_element(&pres, &mut rng, 4, 3);
            let c = random_element(&pres, &mut rng, 4, 3);
            assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_multiplicative() {
        let pres = pres22();
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let a = random_element(&pres, &mut rng, 5, 4);
            let renf = AElement::normal_form(&pres, a.value()).unwrap();
            assert_eq!(renf, a);

            let b = random_element(&pres, &mut rng, 5, 4);
            let prod_raw = a.value().mul(b.value());
            let nf_prod = AElement::normal_form(&pres, &prod_raw).unwrap();
            assert_eq!(nf_prod, a.mul(&b).unwrap());
        }
    }

    #[test]
    fn mismatched_presentations_are_rejected() {
        let pres_a = pres22();
        let pres_b = Presentation::new(ThreefoldParams::new(surface237(), 2, 3).unwrap());
        let a = nf(&pres_a, "u");
        let b = nf(&pres_b, "u");
        assert_eq!(a.add(&b), Err(RingsError::PresentationMismatch));
    }

    #[test]
    fn unknown_variables_are_rejected() {
        let pres = pres22();
        let p = "w + x".parse::<Poly>().unwrap();
        assert_eq!(
            AElement::normal_form(&pres, &p),
            Err(RingsError::UnknownVariable("w".to_string()))
        );
        let pres_w = Presentation::new(pres.params().clone())
            .with_adjoined(&["w"])
            .unwrap();
        assert!(AElement::normal_form(&pres_w, &p).is_ok());
    }

    #[test]
    fn ring_map_identity_and_relation_check() {
        let pres = pres22();
        let id = RingMap::identity(&pres);
        assert!(id.is_identity());
        assert!(id.check_relations().is_ok());
        let e = nf(&pres, "u*v + z^8");
        assert_eq!(id.apply(&e).unwrap(), e);

        // u -> u + 1 does not preserve the bundle relation
        let mut images: Vec<(String, AElement)> = pres
            .vars()
            .iter()
            .map(|v| (v.clone(), pres.var(v).unwrap()))
            .collect();
        let u_img = nf(&pres, "u + 1");
        images[3] = ("u".to_string(), u_img);
        let err = RingMap::new(pres.clone(), pres.clone(), images).unwrap_err();
        assert!(matches!(err, RingsError::RelationNotPreserved { .. }));
    }

    #[test]
    fn surface_map_identity_and_composition() {
        let s = surface237();
        let id = SurfaceMap::identity(s.clone());
        assert!(id.is_identity());
        let p = "x^2 + z^7".parse::<Poly>().unwrap();
        // z^7 reduces modulo the surface relation
        let reduced = id.apply(&p).unwrap();
        assert_eq!(reduced, "-y^3".parse::<Poly>().unwrap());
        let c = id.compose(&id).unwrap();
        assert!(c.is_identity());
    }
}
