//! The automorphism group of `A(n,m)` over rational scalars.
//!
//! Every element is kept in the normalized word `torus(mu) . shear(f)`
//! (composition right to left, `(phi psi)(r) = phi(psi(r))`), where
//!
//! ```text
//! shear(f):  u -> f(x,y,z) y^n + u,   v -> f(x,y,z) x^m + v
//! torus(mu): (x,y,z,u,v) -> (mu^bc x, mu^ac y, mu^ab z, mu^-mbc u, mu^-nac v)
//! ```
//!
//! Shears compose additively and the torus acts on them by the twist
//! `torus(mu)^-1 . shear(f) . torus(mu) = shear(mu^-K f(mu^-bc x, mu^-ac y, mu^-ab z))`
//! with `K = m*b*c + n*a*c`; the twist exponent is pinned by tests
//! against the generator-image substitution oracle. The group is a
//! semidirect product of the scalar torus with the additive group of the
//! surface ring, and it is not abelian.
//!
//! Note the torus only preserves the surface relation when
//! `lambda * (1 - mu^abc) = 0`; for nonzero `lambda` construction
//! rejects every rational scalar except `mu = 1` (and `mu = -1` when
//! `abc` is even).

use crate::derivations::{Derivation, DerivationError};
use crate::poly::Poly;
use crate::rational::pow_signed;
use crate::rings::{AElement, Presentation, RingMap, RingsError, SurfaceMap, ThreefoldParams};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum AutError {
    Rings(RingsError),
    Derivation(DerivationError),
    ZeroTorusScalar,
    /// The shear parameter must lie in the `x,y,z`-subring.
    ShearOutsideBaseRing(String),
    ParamsMismatch,
    /// The conjugated derivation is not a scalar multiple of `E`; this
    /// would falsify conjugation stability and is build-stopping.
    NotProportional {
        generator: String,
        image: String,
    },
}

impl fmt::Display for AutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutError::Rings(e) => write!(f, "{e}"),
            AutError::Derivation(e) => write!(f, "{e}"),
            AutError::ZeroTorusScalar => write!(f, "torus scalar must be nonzero"),
            AutError::ShearOutsideBaseRing(v) => {
                write!(f, "shear parameter contains the variable {v}")
            }
            AutError::ParamsMismatch => write!(f, "automorphisms have different parameters"),
            AutError::NotProportional { generator, image } => write!(
                f,
                "conjugate of E is not proportional to E: generator {generator} maps to {image}"
            ),
        }
    }
}

impl std::error::Error for AutError {}

impl From<RingsError> for AutError {
    fn from(e: RingsError) -> Self {
        AutError::Rings(e)
    }
}

impl From<DerivationError> for AutError {
    fn from(e: DerivationError) -> Self {
        AutError::Derivation(e)
    }
}

/// An automorphism in normalized `(mu, f)` coordinates, denoting
/// `torus(mu) . shear(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutElement {
    params: ThreefoldParams,
    mu: BigRational,
    shear: AElement,
}

impl AutElement {
    pub fn identity(params: &ThreefoldParams) -> Self {
        let pres = Presentation::new(params.clone());
        AutElement {
            params: params.clone(),
            mu: BigRational::one(),
            shear: pres.zero(),
        }
    }

    /// Torus scaling by a nonzero rational. Fails if the scaling does
    /// not preserve the surface relation (nonzero `lambda`).
    pub fn torus(params: &ThreefoldParams, mu: BigRational) -> Result<Self, AutError> {
        if mu.is_zero() {
            return Err(AutError::ZeroTorusScalar);
        }
        let pres = Presentation::new(params.clone());
        let aut = AutElement {
            params: params.clone(),
            mu,
            shear: pres.zero(),
        };
        aut.to_ring_map_checked()?;
        Ok(aut)
    }

    /// Shear by an element of the `x,y,z`-subring.
    pub fn shear(params: &ThreefoldParams, f: &AElement) -> Result<Self, AutError> {
        let pres = Presentation::new(params.clone());
        if f.pres() != &pres {
            return Err(AutError::ParamsMismatch);
        }
        if !f.is_in_surface_subring() {
            let bad = f
                .value()
                .effective_vars()
                .into_iter()
                .find(|v| v != "x" && v != "y" && v != "z")
                .unwrap_or_default();
            return Err(AutError::ShearOutsideBaseRing(bad));
        }
        Ok(AutElement {
            params: params.clone(),
            mu: BigRational::one(),
            shear: f.clone(),
        })
    }

    /// Shear from a polynomial in `x,y,z`.
    pub fn shear_from_poly(params: &ThreefoldParams, f: &Poly) -> Result<Self, AutError> {
        let pres = Presentation::new(params.clone());
        let f = AElement::normal_form(&pres, f)?;
        AutElement::shear(params, &f)
    }

    pub fn params(&self) -> &ThreefoldParams {
        &self.params
    }

    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    pub fn shear_part(&self) -> &AElement {
        &self.shear
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.params.clone())
    }

    fn surface_exponents(&self) -> (i64, i64, i64) {
        let s = self.params.surface();
        let (a, b, c) = (s.a() as i64, s.b() as i64, s.c() as i64);
        (b * c, a * c, a * b)
    }

    /// The twist exponent `K = m*b*c + n*a*c`.
    pub fn twist_exponent(&self) -> i64 {
        let (bc, ac, _) = self.surface_exponents();
        self.params.m() as i64 * bc + self.params.n() as i64 * ac
    }

    /// Substitutes `x -> mu^(e*bc) x, y -> mu^(e*ac) y, z -> mu^(e*ab) z`
    /// in an element of the surface subring, for `e = 1` or `e = -1`.
    fn torus_substitute(&self, f: &AElement, mu: &BigRational, sign: i64) -> AElement {
        let (bc, ac, ab) = self.surface_exponents();
        let pres = self.presentation();
        let vars = pres.vars();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let images = vec![
            (
                "x".to_string(),
                Poly::var(&var_refs, "x").mul_scalar(&pow_signed(mu, sign * bc)),
            ),
            (
                "y".to_string(),
                Poly::var(&var_refs, "y").mul_scalar(&pow_signed(mu, sign * ac)),
            ),
            (
                "z".to_string(),
                Poly::var(&var_refs, "z").mul_scalar(&pow_signed(mu, sign * ab)),
            ),
        ];
        let substituted = f.value().substitute(&images);
        AElement::normal_form(&pres, &substituted).expect("stays in presentation vars")
    }

    fn to_ring_map_checked(&self) -> Result<RingMap, AutError> {
        let pres = self.presentation();
        let (bc, ac, ab) = self.surface_exponents();
        let (n, m) = (self.params.n(), self.params.m());
        let mu = &self.mu;

        // shear first
        let y_n = pres.var("y")?.pow(n);
        let x_m = pres.var("x")?.pow(m);
        let shear_images = vec![
            ("x".to_string(), pres.var("x")?),
            ("y".to_string(), pres.var("y")?),
            ("z".to_string(), pres.var("z")?),
            ("u".to_string(), pres.var("u")?.add(&self.shear.mul(&y_n)?)?),
            ("v".to_string(), pres.var("v")?.add(&self.shear.mul(&x_m)?)?),
        ];
        let shear_map = RingMap::new(pres.clone(), pres.clone(), shear_images)?;

        let torus_images = vec![
            (
                "x".to_string(),
                pres.var("x")?.mul_scalar(&pow_signed(mu, bc)),
            ),
            (
                "y".to_string(),
                pres.var("y")?.mul_scalar(&pow_signed(mu, ac)),
            ),
            (
                "z".to_string(),
                pres.var("z")?.mul_scalar(&pow_signed(mu, ab)),
            ),
            (
                "u".to_string(),
                pres.var("u")?
                    .mul_scalar(&pow_signed(mu, -(m as i64) * bc)),
            ),
            (
                "v".to_string(),
                pres.var("v")?
                    .mul_scalar(&pow_signed(mu, -(n as i64) * ac)),
            ),
        ];
        let torus_map = RingMap::new(pres.clone(), pres, torus_images)?;

        Ok(torus_map.compose(&shear_map)?)
    }

    /// Generator-image ring map of the automorphism; both defining
    /// relations are preserved by construction.
    pub fn to_ring_map(&self) -> RingMap {
        self.to_ring_map_checked()
            .expect("normalized automorphisms preserve the relations")
    }

    /// Applies the automorphism to a ring element.
    pub fn apply(&self, h: &AElement) -> Result<AElement, AutError> {
        Ok(self.to_ring_map().apply(h)?)
    }

    /// Group law in normalized coordinates: the shear of the right
    /// factor is kept, the left shear is twisted past the right torus.
    pub fn compose(&self, other: &AutElement) -> Result<AutElement, AutError> {
        if self.params != other.params {
            return Err(AutError::ParamsMismatch);
        }
        let k = self.twist_exponent();
        let twisted = self
            .torus_substitute(&self.shear, &other.mu, -1)
            .mul_scalar(&pow_signed(&other.mu, -k));
        Ok(AutElement {
            params: self.params.clone(),
            mu: &self.mu * &other.mu,
            shear: twisted.add(&other.shear)?,
        })
    }

    pub fn invert(&self) -> AutElement {
        let k = self.twist_exponent();
        let f_inv = self
            .torus_substitute(&self.shear, &self.mu, 1)
            .mul_scalar(&pow_signed(&self.mu, k))
            .neg();
        AutElement {
            params: self.params.clone(),
            mu: self.mu.recip(),
            shear: f_inv,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mu.is_one() && self.shear.is_zero()
    }

    /// Conjugates the distinguished derivation: computes
    /// `g -> phi^-1(E(phi(g)))`, verifies it equals `lambda * E` for a
    /// nonzero scalar, and returns that scalar.
    pub fn conjugate_e(&self) -> Result<BigRational, AutError> {
        let pres = self.presentation();
        let e = Derivation::e(&pres);
        let phi = self.to_ring_map();
        let phi_inv = self.invert().to_ring_map();
        let conj = e.conjugate(&phi, &phi_inv)?;

        for g in ["x", "y", "z"] {
            let img = conj.image(g)?;
            if !img.is_zero() {
                return Err(AutError::NotProportional {
                    generator: g.to_string(),
                    image: img.value().to_string(),
                });
            }
        }
        let y_n = pres.var("y")?.pow(self.params.n());
        let x_m = pres.var("x")?.pow(self.params.m());
        let du = conj.image("u")?;
        let lambda = match (du.value().leading_term(), y_n.value().leading_term()) {
            (Some((mu_, cu)), Some((my, _))) if mu_ == my && du.value().num_terms() == 1 => {
                cu.clone()
            }
            _ => {
                return Err(AutError::NotProportional {
                    generator: "u".to_string(),
                    image: du.value().to_string(),
                })
            }
        };
        if lambda.is_zero()
            || *du != y_n.mul_scalar(&lambda)
            || *conj.image("v")? != x_m.mul_scalar(&lambda)
        {
            return Err(AutError::NotProportional {
                generator: "v".to_string(),
                image: conj.image("v")?.value().to_string(),
            });
        }
        Ok(lambda)
    }

    /// Restriction to the surface ring: shears restrict to the identity,
    /// the torus to its scaling action on `x,y,z`.
    pub fn restrict(&self) -> SurfaceMap {
        let (bc, ac, ab) = self.surface_exponents();
        let vars = ["x", "y", "z"];
        let images = [
            Poly::var(&vars, "x").mul_scalar(&pow_signed(&self.mu, bc)),
            Poly::var(&vars, "y").mul_scalar(&pow_signed(&self.mu, ac)),
            Poly::var(&vars, "z").mul_scalar(&pow_signed(&self.mu, ab)),
        ];
        SurfaceMap::new(self.params.surface().clone(), images)
            .expect("torus scalings preserve the surface relation")
    }
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}; {}",
            crate::rational::format_rational(&self.mu),
            self.shear.value()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::rings::SurfaceParams;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params237() -> ThreefoldParams {
        let s = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
        ThreefoldParams::new(s, 2, 2).unwrap()
    }

    fn nf(pres: &Presentation, text: &str) -> AElement {
        let vars = pres.vars();
        let p = crate::parse::parse_expression_with_vars(text, &vars).unwrap();
        AElement::normal_form(pres, &p).unwrap()
    }

    fn random_shear_poly(rng: &mut StdRng, pres: &Presentation) -> AElement {
        let text = match rng.gen_range(0..4) {
            0 => format!("({})", rng.gen_range(-3..=3)),
            1 => format!("({})*x + ({})", rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
            2 => format!("({})*y^2 + ({})*z", rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
            _ => format!(
                "({})*x*y + ({})*z^3 + ({})",
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3)
            ),
        };
        nf(pres, &text)
    }

    fn random_mu(rng: &mut StdRng) -> BigRational {
        loop {
            let mu = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=4));
            if !mu.is_zero() {
                return mu;
            }
        }
    }

    #[test]
    fn trivial_elements_are_the_identity() {
        let params = params237();
        assert!(AutElement::torus(&params, int(1)).unwrap().is_identity());
        let pres = Presentation::new(params.clone());
        assert!(AutElement::shear(&params, &pres.zero()).unwrap().is_identity());
    }

    #[test]
    fn torus_exponents_match_the_scaling_action() {
        let params = params237(); // bc = 21, ac = 14, ab = 6
        let phi = AutElement::torus(&params, int(2)).unwrap();
        let map = phi.to_ring_map();
        let pres = phi.presentation();
        assert_eq!(*map.image("x").unwrap(), nf(&pres, "2097152*x")); // 2^21
        assert_eq!(*map.image("y").unwrap(), nf(&pres, "16384*y")); // 2^14
        assert_eq!(*map.image("z").unwrap(), nf(&pres, "64*z")); // 2^6
    }

    #[test]
    fn shear_moves_u_and_v_by_the_kernel_element() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let f = nf(&pres, "x + z^2");
        let phi = AutElement::shear(&params, &f).unwrap();
        assert_eq!(
            phi.apply(&nf(&pres, "u")).unwrap(),
            nf(&pres, "u + (x + z^2)*y^2")
        );
        assert_eq!(
            phi.apply(&nf(&pres, "v")).unwrap(),
            nf(&pres, "v + (x + z^2)*x^2")
        );
        assert!(phi.apply(&pres.one()).unwrap().is_one());
    }

    #[test]
    fn relations_are_preserved_by_construction() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let unit = nf(&pres, "x^2*u - y^2*v");
        let phi = AutElement::torus(&params, ratio(3, 2)).unwrap();
        assert!(phi.apply(&unit).unwrap().is_one());

        let mut rng = StdRng::seed_from_u64(40);
        for _ in 0..10 {
            let f = random_shear_poly(&mut rng, &pres);
            let phi = AutElement::shear(&params, &f).unwrap();
            let psi = phi.compose(&AutElement::torus(&params, random_mu(&mut rng)).unwrap()).unwrap();
            assert!(psi.to_ring_map().check_relations().is_ok());
            assert!(psi.apply(&unit).unwrap().is_one());
        }
    }

    #[test]
    fn torus_with_nonzero_lambda_needs_a_root_of_unity() {
        let s = SurfaceParams::new(2, 3, 7, int(1)).unwrap();
        let params = ThreefoldParams::new(s, 2, 2).unwrap();
        assert!(AutElement::torus(&params, int(2)).is_err());
        assert!(AutElement::torus(&params, int(1)).is_ok());
        // abc = 42 is even, so -1 works
        assert!(AutElement::torus(&params, int(-1)).is_ok());
    }

    #[test]
    fn construction_rejects_degenerate_input() {
        let params = params237();
        assert_eq!(
            AutElement::torus(&params, int(0)).unwrap_err(),
            AutError::ZeroTorusScalar
        );
        let pres = Presentation::new(params.clone());
        let f = nf(&pres, "u + x");
        assert_eq!(
            AutElement::shear(&params, &f).unwrap_err(),
            AutError::ShearOutsideBaseRing("u".to_string())
        );
    }

    #[test]
    fn shears_compose_additively() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let f = nf(&pres, "x*y + 1");
        let g = nf(&pres, "z^3 - 2");
        let left = AutElement::shear(&params, &f)
            .unwrap()
            .compose(&AutElement::shear(&params, &g).unwrap())
            .unwrap();
        let sum = AutElement::shear(&params, &f.add(&g).unwrap()).unwrap();
        assert_eq!(left, sum);
    }

    #[test]
    fn inverse_cancels_in_both_orders() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..15 {
            let phi = AutElement::torus(&params, random_mu(&mut rng))
                .unwrap()
                .compose(&AutElement::shear(&params, &random_shear_poly(&mut rng, &pres)).unwrap())
                .unwrap();
            assert!(phi.compose(&phi.invert()).unwrap().is_identity());
            assert!(phi.invert().compose(&phi).unwrap().is_identity());
        }
    }

    #[test]
    fn normalized_composition_matches_the_substitution_oracle() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..30 {
            let phi = AutElement::torus(&params, random_mu(&mut rng))
                .unwrap()
                .compose(&AutElement::shear(&params, &random_shear_poly(&mut rng, &pres)).unwrap())
                .unwrap();
            let psi = AutElement::torus(&params, random_mu(&mut rng))
                .unwrap()
                .compose(&AutElement::shear(&params, &random_shear_poly(&mut rng, &pres)).unwrap())
                .unwrap();
            let fast = phi.compose(&psi).unwrap();
            let oracle = phi.to_ring_map().compose(&psi.to_ring_map()).unwrap();
            assert_eq!(fast.to_ring_map(), oracle);
        }
    }

    #[test]
    fn torus_conjugation_twists_the_shear() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let f = nf(&pres, "x + y*z");
        let mu = ratio(2, 3);
        let phi = AutElement::torus(&params, mu.clone()).unwrap();
        let conj = phi
            .compose(&AutElement::shear(&params, &f).unwrap())
            .unwrap()
            .compose(&phi.invert())
            .unwrap();
        // expected shear: mu^K * f(mu^bc x, mu^ac y, mu^ab z)
        let k = phi.twist_exponent();
        let expected_f = phi
            .torus_substitute(&f, &mu, 1)
            .mul_scalar(&pow_signed(&mu, k));
        let expected = AutElement::shear(&params, &expected_f).unwrap();
        assert_eq!(conj, expected);
    }

    #[test]
    fn the_group_is_not_abelian() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let t = AutElement::torus(&params, int(2)).unwrap();
        let s = AutElement::shear(&params, &pres.one()).unwrap();
        assert_ne!(t.compose(&s).unwrap(), s.compose(&t).unwrap());
    }

    #[test]
    fn conjugate_e_scalars() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        assert_eq!(
            AutElement::identity(&params).conjugate_e().unwrap(),
            int(1)
        );
        let f = nf(&pres, "x*z - 3");
        assert_eq!(
            AutElement::shear(&params, &f).unwrap().conjugate_e().unwrap(),
            int(1)
        );
        // K = m*bc + n*ac = 2*21 + 2*14 = 70
        let mu = ratio(3, 2);
        let phi = AutElement::torus(&params, mu.clone()).unwrap();
        assert_eq!(phi.conjugate_e().unwrap(), pow_signed(&mu, -70));
    }

    #[test]
    fn restriction_is_a_group_homomorphism_onto_the_torus_maps() {
        let params = params237();
        let pres = Presentation::new(params.clone());
        let f = nf(&pres, "y + z");
        let shear = AutElement::shear(&params, &f).unwrap();
        assert!(shear.restrict().is_identity());

        let phi = AutElement::torus(&params, int(2)).unwrap();
        let r = phi.restrict();
        let x_img = &r.images()[0];
        assert_eq!(x_img, &"2097152*x".parse::<Poly>().unwrap());

        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..10 {
            let a = AutElement::torus(&params, random_mu(&mut rng))
                .unwrap()
                .compose(&AutElement::shear(&params, &random_shear_poly(&mut rng, &pres)).unwrap())
                .unwrap();
            let b = AutElement::torus(&params, random_mu(&mut rng))
                .unwrap()
                .compose(&AutElement::shear(&params, &random_shear_poly(&mut rng, &pres)).unwrap())
                .unwrap();
            let lhs = a.compose(&b).unwrap().restrict();
            let rhs = a.restrict().compose(&b.restrict()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
