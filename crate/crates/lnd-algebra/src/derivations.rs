//! Derivations of `A(n,m)` specified by generator images.
//!
//! A derivation given on generators extends by the Leibniz rule to the
//! whole ring; it is well defined on the quotient exactly when the
//! extension annihilates every defining relation, which
//! [`Derivation::new`] verifies. The distinguished derivation
//!
//! ```text
//! E : u -> y^n,  v -> x^m,  x,y,z -> 0
//! ```
//!
//! is locally nilpotent; its exponentials are one-parameter families of
//! automorphisms.
//!
//! Local nilpotency is a semi-decision: certifying that every generator
//! is annihilated by some iterate proves the property for the whole
//! ring, while failure to reach zero within the iteration bound is
//! reported as inconclusive. Kernel queries come in two forms: pointwise
//! membership, and a bounded-degree basis oracle that solves the exact
//! linear system `D(sum c_i m_i) = 0` over the normal-form monomials.

use crate::poly::{Mono, Poly};
use crate::rings::{AElement, Presentation, RingMap, RingsError};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// Default iteration bound for nilpotency certification.
pub const DEFAULT_LND_BOUND: u32 = 50;

/// Cap on the number of candidate monomials the kernel oracle will solve
/// over.
pub const KERNEL_MONOMIAL_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum DerivationError {
    Rings(RingsError),
    MissingImage(String),
    /// The Leibniz extension does not annihilate a defining relation.
    NotWellDefined {
        relation: String,
        image: String,
    },
    PresentationMismatch,
    NotCertifiedLnd {
        generator: String,
        bound: u32,
    },
    ResourceCap {
        needed: usize,
        cap: usize,
    },
}

impl fmt::Display for DerivationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationError::Rings(e) => write!(f, "{e}"),
            DerivationError::MissingImage(g) => write!(f, "no image for generator {g}"),
            DerivationError::NotWellDefined { relation, image } => {
                write!(f, "not a derivation: relation {relation} has image {image}")
            }
            DerivationError::PresentationMismatch => {
                write!(f, "element and derivation live in different presentations")
            }
            DerivationError::NotCertifiedLnd { generator, bound } => write!(
                f,
                "derivation not certified locally nilpotent: generator {generator} did not vanish within {bound} iterations"
            ),
            DerivationError::ResourceCap { needed, cap } => {
                write!(f, "kernel oracle needs {needed} monomials, cap is {cap}")
            }
        }
    }
}

impl std::error::Error for DerivationError {}

impl From<RingsError> for DerivationError {
    fn from(e: RingsError) -> Self {
        DerivationError::Rings(e)
    }
}

/// Outcome of nilpotency certification. `indices[g]` is the least `k`
/// with `D^k(g) = 0`; the zero derivation reports index 0 for every
/// generator.
#[derive(Debug, Clone, PartialEq)]
pub enum LndVerdict {
    Nilpotent { indices: BTreeMap<String, u32> },
    NotWithinBound { generator: String, bound: u32 },
}

impl LndVerdict {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self, LndVerdict::Nilpotent { .. })
    }

    pub fn indices(&self) -> Option<&BTreeMap<String, u32>> {
        match self {
            LndVerdict::Nilpotent { indices } => Some(indices),
            LndVerdict::NotWithinBound { .. } => None,
        }
    }
}

/// A derivation of a presented ring, stored as one image per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pres: Presentation,
    images: Vec<AElement>,
}

impl Derivation {
    /// Builds and validates a derivation from generator images. Every
    /// generator needs an image in the same presentation, and the
    /// Leibniz extension must annihilate each defining relation.
    pub fn new(
        pres: &Presentation,
        images: Vec<(String, AElement)>,
    ) -> Result<Self, DerivationError> {
        let vars = pres.vars();
        for (name, img) in &images {
            if !vars.iter().any(|v| v == name) {
                return Err(RingsError::UnexpectedImage(name.clone()).into());
            }
            if img.pres() != pres {
                return Err(DerivationError::PresentationMismatch);
            }
        }
        let mut ordered = Vec::with_capacity(vars.len());
        for v in &vars {
            let img = images
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, i)| i.clone())
                .ok_or_else(|| DerivationError::MissingImage(v.clone()))?;
            ordered.push(img);
        }
        let d = Derivation {
            pres: pres.clone(),
            images: ordered,
        };
        for (label, rel) in pres.relations() {
            let image = d.apply_poly(&rel);
            if !image.is_zero() {
                return Err(DerivationError::NotWellDefined {
                    relation: label,
                    image: image.value().to_string(),
                });
            }
        }
        Ok(d)
    }

    /// The derivation `u -> y^n, v -> x^m`, all other generators to zero.
    pub fn e(pres: &Presentation) -> Self {
        let params = pres.params();
        let y_n = pres
            .var("y")
            .expect("base var")
            .pow(params.n());
        let x_m = pres
            .var("x")
            .expect("base var")
            .pow(params.m());
        let images = pres
            .vars()
            .into_iter()
            .map(|v| {
                let img = match v.as_str() {
                    "u" => y_n.clone(),
                    "v" => x_m.clone(),
                    _ => pres.zero(),
                };
                (v, img)
            })
            .collect();
        Derivation::new(pres, images).expect("E annihilates both relations")
    }

    pub fn zero(pres: &Presentation) -> Self {
        let images = pres.vars().into_iter().map(|v| (v, pres.zero())).collect();
        Derivation::new(pres, images).expect("zero derivation is well defined")
    }

    /// `f * D`: scaling every image by a ring element preserves
    /// relation annihilation.
    pub fn scale(&self, f: &AElement) -> Result<Self, DerivationError> {
        if f.pres() != &self.pres {
            return Err(DerivationError::PresentationMismatch);
        }
        let images = self
            .pres
            .vars()
            .into_iter()
            .zip(self.images.iter())
            .map(|(v, img)| Ok((v, img.mul(f)?)))
            .collect::<Result<Vec<_>, RingsError>>()?;
        Derivation::new(&self.pres, images)
    }

    pub fn pres(&self) -> &Presentation {
        &self.pres
    }

    pub fn image(&self, name: &str) -> Result<&AElement, DerivationError> {
        let vars = self.pres.vars();
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| DerivationError::Rings(RingsError::UnknownVariable(name.to_string())))?;
        Ok(&self.images[idx])
    }

    pub fn images(&self) -> impl Iterator<Item = (String, &AElement)> {
        self.pres.vars().into_iter().zip(self.images.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|i| i.is_zero())
    }

    fn apply_poly(&self, p: &Poly) -> AElement {
        let vars = self.pres.vars();
        let mut acc = self.pres.zero();
        for (v, img) in vars.iter().zip(self.images.iter()) {
            if img.is_zero() {
                continue;
            }
            let partial = p.partial_derivative(v).expect("aligned variables");
            if partial.is_zero() {
                continue;
            }
            let term = AElement::normal_form(&self.pres, &partial.mul(img.value()))
                .expect("own presentation vars");
            acc = acc.add(&term).expect("same presentation");
        }
        acc
    }

    /// Leibniz-extended image of an element, in normal form.
    pub fn apply(&self, h: &AElement) -> Result<AElement, DerivationError> {
        if h.pres() != &self.pres {
            return Err(DerivationError::PresentationMismatch);
        }
        Ok(self.apply_poly(h.value()))
    }

    /// True iff `D(h) = 0`.
    pub fn kernel_membership(&self, h: &AElement) -> Result<bool, DerivationError> {
        Ok(self.apply(h)?.is_zero())
    }

    /// Iterates the derivation on every generator. Certifies local
    /// nilpotency when every generator reaches zero within `bound`
    /// applications; otherwise reports the first failing generator.
    pub fn is_locally_nilpotent(&self, bound: u32) -> LndVerdict {
        let mut indices = BTreeMap::new();
        if self.is_zero() {
            for v in self.pres.vars() {
                indices.insert(v, 0);
            }
            return LndVerdict::Nilpotent { indices };
        }
        for (v, img) in self.pres.vars().into_iter().zip(self.images.iter()) {
            let mut cur = img.clone();
            let mut k = 1u32;
            while !cur.is_zero() {
                if k >= bound {
                    return LndVerdict::NotWithinBound {
                        generator: v,
                        bound,
                    };
                }
                cur = self.apply(&cur).expect("same presentation");
                k += 1;
            }
            indices.insert(v, k);
        }
        LndVerdict::Nilpotent { indices }
    }

    /// Exponential `g -> sum t^k D^k(g) / k!` as a generator-image ring
    /// map. Requires nilpotency certification at the default bound.
    pub fn exp_map(&self, t: &BigRational) -> Result<RingMap, DerivationError> {
        match self.is_locally_nilpotent(DEFAULT_LND_BOUND) {
            LndVerdict::NotWithinBound { generator, bound } => {
                Err(DerivationError::NotCertifiedLnd { generator, bound })
            }
            LndVerdict::Nilpotent { .. } => {
                let mut images = Vec::new();
                for v in self.pres.vars() {
                    let mut term = self.pres.var(&v)?;
                    let mut acc = term.clone();
                    let mut factorial = BigInt::one();
                    let mut t_pow = BigRational::one();
                    let mut k = 1u32;
                    loop {
                        term = self.apply(&term)?;
                        if term.is_zero() {
                            break;
                        }
                        factorial *= BigInt::from(k);
                        t_pow *= t;
                        let coeff = &t_pow / BigRational::from_integer(factorial.clone());
                        acc = acc.add(&term.mul_scalar(&coeff))?;
                        k += 1;
                    }
                    images.push((v, acc));
                }
                Ok(RingMap::new(self.pres.clone(), self.pres.clone(), images)?)
            }
        }
    }

    /// Transport along ring maps: the derivation `g -> post(D(pre(g)))`.
    /// For an automorphism `phi` with inverse `phi_inv`, passing
    /// `pre = phi, post = phi_inv` computes the conjugate
    /// `phi^-1 D phi`. Validates well-definedness on the resulting
    /// presentation.
    pub fn conjugate(&self, pre: &RingMap, post: &RingMap) -> Result<Derivation, DerivationError> {
        if pre.dst() != &self.pres || post.src() != &self.pres || pre.src() != post.dst() {
            return Err(DerivationError::PresentationMismatch);
        }
        let images = pre
            .src()
            .vars()
            .into_iter()
            .map(|v| {
                let fwd = pre.image(&v)?.clone();
                let mid = self.apply(&fwd)?;
                let back = post.apply(&mid)?;
                Ok((v, back))
            })
            .collect::<Result<Vec<_>, DerivationError>>()?;
        Derivation::new(pre.src(), images)
    }

    /// Basis of `{ H : D(H) = 0 }` restricted to the span of normal-form
    /// monomials of total degree at most `bound`, computed by exact
    /// linear algebra. Basis vectors are reduced against each other and
    /// ordered by their distinguished monomial.
    pub fn kernel_basis_bounded(&self, bound: u32) -> Result<Vec<AElement>, DerivationError> {
        let monos = normal_monomials(&self.pres, bound);
        if monos.len() > KERNEL_MONOMIAL_CAP {
            return Err(DerivationError::ResourceCap {
                needed: monos.len(),
                cap: KERNEL_MONOMIAL_CAP,
            });
        }
        let vars = self.pres.vars();
        let images: Vec<AElement> = monos
            .par_iter()
            .map(|m| {
                let p = Poly::from_terms(vars.clone(), vec![(m.clone(), BigRational::one())]);
                let e = AElement::normal_form(&self.pres, &p).expect("normal monomial");
                self.apply(&e).expect("same presentation")
            })
            .collect();

        let mut row_index: BTreeMap<Mono, usize> = BTreeMap::new();
        for img in &images {
            for (m, _) in img.value().terms() {
                let next = row_index.len();
                row_index.entry(m.clone()).or_insert(next);
            }
        }
        let rows = row_index.len();
        let cols = monos.len();
        let mut mat = vec![vec![BigRational::zero(); cols]; rows];
        for (j, img) in images.iter().enumerate() {
            for (m, c) in img.value().terms() {
                mat[row_index[m]][j] = c.clone();
            }
        }
        let pivots = rref(&mut mat);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_set[free] {
                continue;
            }
            let mut coeffs = vec![BigRational::zero(); cols];
            coeffs[free] = BigRational::one();
            for (pi, &pc) in pivots.iter().enumerate() {
                let v = &mat[pi][free];
                if !v.is_zero() {
                    coeffs[pc] = -v.clone();
                }
            }
            let terms: Vec<(Mono, BigRational)> = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (monos[j].clone(), c))
                .collect();
            let p = Poly::from_terms(vars.clone(), terms);
            basis.push(AElement::normal_form(&self.pres, &p).expect("normal monomials"));
        }
        Ok(basis)
    }
}

/// All normal-form monomials of total degree at most `bound`, ascending.
pub fn normal_monomials(pres: &Presentation, bound: u32) -> Vec<Mono> {
    let rules = pres.rules();
    let nvars = pres.vars().len();
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn walk(
        exps: &mut Vec<u32>,
        idx: usize,
        remaining: u32,
        rules: &[crate::rings::RewriteRule],
        out: &mut Vec<Mono>,
    ) {
        if idx == exps.len() {
            let m = Mono::new(exps.clone());
            if !rules.iter().any(|r| r.lhs.divides(&m)) {
                out.push(m);
            }
            return;
        }
        for e in 0..=remaining {
            exps[idx] = e;
            walk(exps, idx + 1, remaining - e, rules, out);
        }
        exps[idx] = 0;
    }
    walk(&mut exps, 0, bound, &rules, &mut out);
    out.sort();
    out
}

/// Reduced row echelon form in place; returns pivot column indices.
fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    let s = p * &factor;
                    *x -= s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Certificate pair `(A, B)` with `A x^xt + B y^yt = 1` in `A(n,m)`,
/// obtained by expanding `(x^m u - y^n v)^N` for
/// `N = ceil(xt/m) - 1 + ceil(yt/n)` and routing each term to whichever
/// side its powers cover (ties to the `x` side).
pub fn bezout_split(
    pres: &Presentation,
    x_target: u32,
    y_target: u32,
) -> Result<(AElement, AElement), DerivationError> {
    for (which, value) in [("x target power", x_target), ("y target power", y_target)] {
        if value < 1 {
            return Err(DerivationError::Rings(RingsError::ExponentTooSmall {
                which,
                value,
                min: 1,
            }));
        }
    }
    let params = pres.params();
    let (n, m) = (params.n(), params.m());
    let big_n = x_target.div_ceil(m) - 1 + y_target.div_ceil(n);
    let vars = pres.vars();
    let idx_of = |name: &str| vars.iter().position(|v| v == name).expect("base var");
    let (xi, yi, ui, vi) = (idx_of("x"), idx_of("y"), idx_of("u"), idx_of("v"));

    let mut a_terms: Vec<(Mono, BigRational)> = Vec::new();
    let mut b_terms: Vec<(Mono, BigRational)> = Vec::new();
    for i in 0..=big_n {
        let mut coeff = BigRational::from_integer(binomial(BigInt::from(big_n), BigInt::from(i)));
        if (big_n - i) % 2 == 1 {
            coeff = -coeff;
        }
        let x_pow = m * i;
        let y_pow = n * (big_n - i);
        let mut exps = vec![0u32; vars.len()];
        exps[ui] = i;
        exps[vi] = big_n - i;
        if x_pow >= x_target {
            exps[xi] = x_pow - x_target;
            exps[yi] = y_pow;
            a_terms.push((Mono::new(exps), coeff));
        } else {
            debug_assert!(y_pow >= y_target, "term covers neither target power");
            exps[xi] = x_pow;
            exps[yi] = y_pow - y_target;
            b_terms.push((Mono::new(exps), coeff));
        }
    }
    let a = AElement::normal_form(&Presentation::clone(pres), &Poly::from_terms(vars.clone(), a_terms))?;
    let b = AElement::normal_form(pres, &Poly::from_terms(vars, b_terms))?;
    Ok((a, b))
}
