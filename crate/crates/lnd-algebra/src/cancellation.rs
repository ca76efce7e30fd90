//! Explicit construction and machine verification of the stable
//! isomorphism `A(n,m)[w] ~ A(n',m')[w']` over a common surface.
//!
//! Both rings are bundles over the same punctured surface, trivialized
//! by a global partition of unity: `1 = x^m u - y^n v` is a unit
//! combination of `x`- and `y`-powers, and expanding its `N`-th power
//! splits `1 = A x^m' + B y^n'` for any target powers
//! ([`crate::derivations::bezout_split`]). In the fibered product with
//! adjoined coordinates `u', v'` subject to `x^m' u' - y^n' v' = 1`,
//! the element `s = B u' + A v'` satisfies `E'(s) = 1` for the fiber
//! derivation `E' = y^n' d/du' + x^m' d/dv'`, and
//!
//! ```text
//! u' = A + s y^n',    v' = -B + s x^m'
//! ```
//!
//! hold identically, so the fibered product is a polynomial ring in `s`
//! over either factor. Composing the two trivializations yields the
//! forward and backward generator-image maps, with `w -> s` on each
//! side.
//!
//! The three-rule rewrite system of the fibered product is terminating
//! but not confluent (`x^m u` and `x^m' u'` overlap in `x`), so the
//! trivialization identities are checked coefficientwise in the free
//! module over the base ring, applying the bundle relation as an
//! explicit step; the forward/backward maps and every invariant of the
//! final object are verified in the canonical single-bundle
//! presentations.

use crate::derivations::{bezout_split, Derivation, DerivationError};
use crate::parse::parse_expression_with_vars;
use crate::rational::{format_rational, parse_rational};
use crate::rings::{
    AElement, Presentation, RingMap, RingsError, SurfaceParams, ThreefoldParams,
};
use std::fmt;

/// Adjoined variable name used on both sides.
pub const STABLE_VAR: &str = "w";

#[derive(Debug, Clone, PartialEq)]
pub enum CancelError {
    Rings(RingsError),
    Derivation(DerivationError),
    /// An internal construction invariant failed; build-stopping.
    CertificateFailure(String),
    ArtifactParse {
        line: usize,
        message: String,
    },
}

impl fmt::Display for CancelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CancelError::Rings(e) => write!(f, "{e}"),
            CancelError::Derivation(e) => write!(f, "{e}"),
            CancelError::CertificateFailure(msg) => {
                write!(f, "internal certificate failure: {msg}")
            }
            CancelError::ArtifactParse { line, message } => {
                write!(f, "artifact parse error at line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for CancelError {}

impl From<RingsError> for CancelError {
    fn from(e: RingsError) -> Self {
        CancelError::Rings(e)
    }
}

impl From<DerivationError> for CancelError {
    fn from(e: DerivationError) -> Self {
        CancelError::Derivation(e)
    }
}

/// A stable isomorphism: generator-image maps in both directions plus
/// the certificate pairs used in the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StableIso {
    pub surface: SurfaceParams,
    pub left: ThreefoldParams,
    pub right: ThreefoldParams,
    /// `A(n,m)[w] -> A(n',m')[w]`.
    pub forward: RingMap,
    /// `A(n',m')[w] -> A(n,m)[w]`.
    pub backward: RingMap,
    /// `(A, B)` with `A x^m' + B y^n' = 1` in the left ring.
    pub cert_left: (AElement, AElement),
    /// `(A', B')` with `A' x^m + B' y^n = 1` in the right ring.
    pub cert_right: (AElement, AElement),
}

/// Outcome of re-verifying a stable isomorphism from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// Both maps send every defining relation to zero.
    pub relations_ok: bool,
    /// Both composites restrict to the identity on all six generators.
    pub round_trip_ok: bool,
    /// Both certificate pairs combine to 1.
    pub certificates_ok: bool,
    /// Total degree of each forward image, for regression tracking.
    pub forward_degrees: Vec<(String, u64)>,
    pub backward_degrees: Vec<(String, u64)>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.relations_ok && self.round_trip_ok && self.certificates_ok
    }
}

/// The `[w]`-presentation of `A(n,m)`.
pub fn stable_presentation(params: &ThreefoldParams) -> Presentation {
    Presentation::new(params.clone())
        .with_adjoined(&[STABLE_VAR])
        .expect("w is not a base generator")
}

/// Checks `a x^xt + b y^yt = 1`.
fn certificate_holds(
    pres: &Presentation,
    a: &AElement,
    b: &AElement,
    xt: u32,
    yt: u32,
) -> Result<bool, RingsError> {
    let x_pow = pres.var("x")?.pow(xt);
    let y_pow = pres.var("y")?.pow(yt);
    Ok(a.mul(&x_pow)?.add(&b.mul(&y_pow)?)?.is_one())
}

/// Verifies the fibered-product trivialization over `base`: with
/// adjoined coordinates subject to `x^xt u' - y^yt v' = 1` and
/// `s = b u' + a v'`,
///
/// * the fiber derivation sends `s` to `a x^xt + b y^yt = 1`, and
/// * `u' - s y^yt` equals `a (x^xt u' - y^yt v')` and `v' - s x^xt`
///   equals `-b (x^xt u' - y^yt v')` in the free module over the base,
///   so applying the bundle relation gives `u' = a + s y^yt` and
///   `v' = -b + s x^xt`.
fn verify_trivialization(
    base: &ThreefoldParams,
    a: &AElement,
    b: &AElement,
    xt: u32,
    yt: u32,
) -> Result<(), CancelError> {
    let fp = Presentation::new(base.clone())
        .with_adjoined(&["u2", "v2"])
        .expect("fresh adjoined names");
    let lift = |e: &AElement| -> Result<AElement, RingsError> {
        AElement::normal_form(&fp, e.value())
    };
    let a = lift(a)?;
    let b = lift(b)?;
    let u2 = fp.var("u2")?;
    let v2 = fp.var("v2")?;
    let x_pow = fp.var("x")?.pow(xt);
    let y_pow = fp.var("y")?.pow(yt);
    let s = b.mul(&u2)?.add(&a.mul(&v2)?)?;

    let fiber = Derivation::new(
        &fp,
        fp.vars()
            .into_iter()
            .map(|v| {
                let img = match v.as_str() {
                    "u2" => y_pow.clone(),
                    "v2" => x_pow.clone(),
                    _ => fp.zero(),
                };
                (v, img)
            })
            .collect(),
    )?;
    if !fiber.apply(&s)?.is_one() {
        return Err(CancelError::CertificateFailure(
            "fiber derivation does not send the slice to 1".to_string(),
        ));
    }

    // x^xt u' - y^yt v' as a free-module element
    let relation = u2.mul(&x_pow)?.sub(&v2.mul(&y_pow)?)?;
    let lhs_u = u2.sub(&s.mul(&y_pow)?)?;
    if lhs_u != a.mul(&relation)? {
        return Err(CancelError::CertificateFailure(
            "slice does not trivialize the u' coordinate".to_string(),
        ));
    }
    let lhs_v = v2.sub(&s.mul(&x_pow)?)?;
    if lhs_v != b.mul(&relation)?.neg() {
        return Err(CancelError::CertificateFailure(
            "slice does not trivialize the v' coordinate".to_string(),
        ));
    }
    Ok(())
}

/// Builds one direction of the isomorphism. `src` carries certificates
/// `(a, b)` splitting the `dst`-side powers; `(a2, b2)` split the
/// `src`-side powers in `dst`.
fn build_direction(
    src: &Presentation,
    dst: &Presentation,
    src_params: &ThreefoldParams,
    a: &AElement,
    b: &AElement,
    a2: &AElement,
    b2: &AElement,
) -> Result<RingMap, CancelError> {
    let w = dst.var(STABLE_VAR)?;
    let y_n = dst.var("y")?.pow(src_params.n());
    let x_m = dst.var("x")?.pow(src_params.m());
    let mut images: Vec<(String, AElement)> = vec![
        ("x".to_string(), dst.var("x")?),
        ("y".to_string(), dst.var("y")?),
        ("z".to_string(), dst.var("z")?),
        ("u".to_string(), a2.add(&w.mul(&y_n)?)?),
        ("v".to_string(), b2.neg().add(&w.mul(&x_m)?)?),
    ];
    // The w image substitutes the five base images into the source
    // certificates, then pairs them with the destination's own bundle
    // coordinates.
    let mut partial_images = images.clone();
    partial_images.push((STABLE_VAR.to_string(), dst.zero()));
    let partial = RingMap::new_unchecked(src.clone(), dst.clone(), partial_images)?;
    let a_t = partial.apply(a)?;
    let b_t = partial.apply(b)?;
    let w_img = b_t.mul(&dst.var("u")?)?.add(&a_t.mul(&dst.var("v")?)?)?;
    images.push((STABLE_VAR.to_string(), w_img));
    RingMap::new(src.clone(), dst.clone(), images)
        .map_err(|e| CancelError::CertificateFailure(format!("direction map invalid: {e}")))
}

/// Constructs the stable isomorphism between `A(left)[w]` and
/// `A(right)[w]` over the given surface, verifying every construction
/// certificate along the way.
pub fn build_stable_iso(
    surface: &SurfaceParams,
    left: (u32, u32),
    right: (u32, u32),
) -> Result<StableIso, CancelError> {
    let left = ThreefoldParams::new(surface.clone(), left.0, left.1)?;
    let right = ThreefoldParams::new(surface.clone(), right.0, right.1)?;
    let lp = stable_presentation(&left);
    let rp = stable_presentation(&right);

    let (a, b) = bezout_split(&lp, right.m(), right.n())?;
    let (a2, b2) = bezout_split(&rp, left.m(), left.n())?;
    if !certificate_holds(&lp, &a, &b, right.m(), right.n())? {
        return Err(CancelError::CertificateFailure(
            "left certificate does not combine to 1".to_string(),
        ));
    }
    if !certificate_holds(&rp, &a2, &b2, left.m(), left.n())? {
        return Err(CancelError::CertificateFailure(
            "right certificate does not combine to 1".to_string(),
        ));
    }
    verify_trivialization(&left, &a, &b, right.m(), right.n())?;
    verify_trivialization(&right, &a2, &b2, left.m(), left.n())?;

    let forward = build_direction(&lp, &rp, &left, &a, &b, &a2, &b2)?;
    let backward = build_direction(&rp, &lp, &right, &a2, &b2, &a, &b)?;

    let iso = StableIso {
        surface: surface.clone(),
        left,
        right,
        forward,
        backward,
        cert_left: (a, b),
        cert_right: (a2, b2),
    };
    let report = verify_stable_iso(&iso);
    if !report.all_ok() {
        return Err(CancelError::CertificateFailure(format!(
            "constructed isomorphism failed verification: relations={} round_trip={} certificates={}",
            report.relations_ok, report.round_trip_ok, report.certificates_ok
        )));
    }
    Ok(iso)
}

/// Re-verifies every invariant of a stable isomorphism by exact
/// normal-form computation. Failures are reported, not thrown.
pub fn verify_stable_iso(iso: &StableIso) -> VerifyReport {
    let relations_ok =
        iso.forward.check_relations().is_ok() && iso.backward.check_relations().is_ok();

    let round_trip_ok = {
        let back_fwd = iso
            .backward
            .compose(&iso.forward)
            .map(|m| m.is_identity())
            .unwrap_or(false);
        let fwd_back = iso
            .forward
            .compose(&iso.backward)
            .map(|m| m.is_identity())
            .unwrap_or(false);
        back_fwd && fwd_back
    };

    let certificates_ok = {
        let lp = iso.forward.src();
        let rp = iso.forward.dst();
        let left = certificate_holds(
            lp,
            &iso.cert_left.0,
            &iso.cert_left.1,
            iso.right.m(),
            iso.right.n(),
        )
        .unwrap_or(false);
        let right = certificate_holds(
            rp,
            &iso.cert_right.0,
            &iso.cert_right.1,
            iso.left.m(),
            iso.left.n(),
        )
        .unwrap_or(false);
        left && right
    };

    let degrees = |map: &RingMap| -> Vec<(String, u64)> {
        map.images()
            .map(|(v, img)| (v, img.value().total_degree().unwrap_or(0)))
            .collect()
    };

    VerifyReport {
        relations_ok,
        round_trip_ok,
        certificates_ok,
        forward_degrees: degrees(&iso.forward),
        backward_degrees: degrees(&iso.backward),
    }
}

/// The distinguished derivation of the left factor extended across the
/// adjoined variable so that it matches the fiberwise action under the
/// left trivialization: `u -> y^n`, `v -> x^m`, and
/// `w -> E(B)(A + w y^n') + E(A)(-B + w x^m')`.
pub fn extended_flow_derivation(iso: &StableIso) -> Result<Derivation, CancelError> {
    let lp = iso.forward.src();
    let e = Derivation::e(lp);
    let (a, b) = &iso.cert_left;
    let w = lp.var(STABLE_VAR)?;
    let y_nt = lp.var("y")?.pow(iso.right.n());
    let x_mt = lp.var("x")?.pow(iso.right.m());
    let u_lift = a.add(&w.mul(&y_nt)?)?;
    let v_lift = b.neg().add(&w.mul(&x_mt)?)?;
    let w_img = e.apply(b)?.mul(&u_lift)?.add(&e.apply(a)?.mul(&v_lift)?)?;
    let images = lp
        .vars()
        .into_iter()
        .map(|v| {
            let img = match v.as_str() {
                "u" => lp.var("y").unwrap().pow(iso.left.n()),
                "v" => lp.var("x").unwrap().pow(iso.left.m()),
                _ if v == STABLE_VAR => w_img.clone(),
                _ => lp.zero(),
            };
            (v, img)
        })
        .collect();
    Ok(Derivation::new(lp, images)?)
}

// ---------------------------------------------------------------------------
// Artifact serialization
// ---------------------------------------------------------------------------

const ARTIFACT_HEADER: &str = "stable-iso v1";

/// Renders the isomorphism as a line-based artifact: parameters, all
/// twelve generator images, and the four certificates.
pub fn to_artifact_string(iso: &StableIso) -> String {
    let mut out = String::new();
    out.push_str(ARTIFACT_HEADER);
    out.push('\n');
    let s = &iso.surface;
    out.push_str(&format!(
        "surface {},{},{},{}\n",
        s.a(),
        s.b(),
        s.c(),
        format_rational(s.lambda())
    ));
    out.push_str(&format!("left {},{}\n", iso.left.n(), iso.left.m()));
    out.push_str(&format!("right {},{}\n", iso.right.n(), iso.right.m()));
    for (v, img) in iso.forward.images() {
        out.push_str(&format!("forward {v} = {}\n", img.value().to_compact_string()));
    }
    for (v, img) in iso.backward.images() {
        out.push_str(&format!("backward {v} = {}\n", img.value().to_compact_string()));
    }
    out.push_str(&format!(
        "cert-left A = {}\n",
        iso.cert_left.0.value().to_compact_string()
    ));
    out.push_str(&format!(
        "cert-left B = {}\n",
        iso.cert_left.1.value().to_compact_string()
    ));
    out.push_str(&format!(
        "cert-right A = {}\n",
        iso.cert_right.0.value().to_compact_string()
    ));
    out.push_str(&format!(
        "cert-right B = {}\n",
        iso.cert_right.1.value().to_compact_string()
    ));
    out
}

/// Parses an artifact back into a [`StableIso`]. Generator images are
/// accepted without relation checking so that a tampered artifact still
/// parses and [`verify_stable_iso`] can report the failure.
pub fn parse_artifact(text: &str) -> Result<StableIso, CancelError> {
    let err = |line: usize, message: &str| CancelError::ArtifactParse {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty artifact"))?;
    if header != ARTIFACT_HEADER {
        return Err(err(ln, "unrecognized artifact header"));
    }

    let mut surface: Option<SurfaceParams> = None;
    let mut left: Option<(u32, u32)> = None;
    let mut right: Option<(u32, u32)> = None;
    let mut forward_images: Vec<(String, String)> = Vec::new();
    let mut backward_images: Vec<(String, String)> = Vec::new();
    let mut certs: Vec<(String, String)> = Vec::new();

    for (ln, line) in lines {
        let (key, rest) = line
            .split_once(' ')
            .ok_or_else(|| err(ln, "expected `<key> <value>`"))?;
        match key {
            "surface" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(err(ln, "surface takes a,b,c,lambda"));
                }
                let nums: Result<Vec<u32>, _> =
                    parts[..3].iter().map(|p| p.parse::<u32>()).collect();
                let nums = nums.map_err(|_| err(ln, "invalid surface exponent"))?;
                let lambda =
                    parse_rational(parts[3]).map_err(|_| err(ln, "invalid lambda"))?;
                surface = Some(
                    SurfaceParams::new(nums[0], nums[1], nums[2], lambda)
                        .map_err(|e| err(ln, &e.to_string()))?,
                );
            }
            "left" | "right" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(err(ln, "expected n,m"));
                }
                let n = parts[0].parse().map_err(|_| err(ln, "invalid n"))?;
                let m = parts[1].parse().map_err(|_| err(ln, "invalid m"))?;
                if key == "left" {
                    left = Some((n, m));
                } else {
                    right = Some((n, m));
                }
            }
            "forward" | "backward" | "cert-left" | "cert-right" => {
                let (var, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| err(ln, "expected `<generator> = <expression>`"))?;
                let entry = (var.trim().to_string(), expr.trim().to_string());
                match key {
                    "forward" => forward_images.push(entry),
                    "backward" => backward_images.push(entry),
                    _ => certs.push((format!("{key} {}", entry.0), entry.1)),
                }
            }
            _ => return Err(err(ln, "unrecognized key")),
        }
    }

    let surface = surface.ok_or_else(|| err(0, "missing surface line"))?;
    let (ln_, lm) = left.ok_or_else(|| err(0, "missing left line"))?;
    let (rn, rm) = right.ok_or_else(|| err(0, "missing right line"))?;
    let left = ThreefoldParams::new(surface.clone(), ln_, lm)
        .map_err(|e| err(0, &e.to_string()))?;
    let right = ThreefoldParams::new(surface.clone(), rn, rm)
        .map_err(|e| err(0, &e.to_string()))?;
    let lp = stable_presentation(&left);
    let rp = stable_presentation(&right);

    let parse_elem = |pres: &Presentation, text: &str| -> Result<AElement, CancelError> {
        let vars = pres.vars();
        let p = parse_expression_with_vars(text, &vars)
            .map_err(|e| err(0, &format!("bad expression `{text}`: {e}")))?;
        Ok(AElement::normal_form(pres, &p)?)
    };
    let parse_images = |pres: &Presentation,
                        entries: &[(String, String)]|
     -> Result<Vec<(String, AElement)>, CancelError> {
        entries
            .iter()
            .map(|(v, t)| Ok((v.clone(), parse_elem(pres, t)?)))
            .collect()
    };

    let forward = RingMap::new_unchecked(lp.clone(), rp.clone(), parse_images(&rp, &forward_images)?)?;
    let backward = RingMap::new_unchecked(rp.clone(), lp.clone(), parse_images(&lp, &backward_images)?)?;

    let cert = |name: &str, pres: &Presentation| -> Result<AElement, CancelError> {
        certs
            .iter()
            .find(|(k, _)| k == name)
            .ok_or_else(|| err(0, &format!("missing certificate {name}")))
            .and_then(|(_, t)| parse_elem(pres, t))
    };
    let cert_left = (cert("cert-left A", &lp)?, cert("cert-left B", &lp)?);
    let cert_right = (cert("cert-right A", &rp)?, cert("cert-right B", &rp)?);

    Ok(StableIso {
        surface,
        left,
        right,
        forward,
        backward,
        cert_left,
        cert_right,
    })
}
