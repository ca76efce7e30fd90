//! Batch command-line surface over the library.
//!
//! [`run`] parses a subcommand plus arguments and returns the exit code
//! with captured output instead of touching the process, so the whole
//! surface is testable in-process. Exit status contract: 0 for success
//! and verified-true outcomes, 1 for verification failures (a falsified
//! invariant, a failed re-verification, an uncertified derivation), 2
//! for usage and parse errors.
//!
//! Ring parameters are comma lists (`--surface a,b,c,lambda`,
//! `--threefold n,m`); rationals accept `p/q`. Structured output mode
//! (`--output structured`) emits one self-describing `key=value` record
//! per line with stable field names.

use crate::automorphisms::{AutElement, AutError};
use crate::cancellation::{
    build_stable_iso, parse_artifact, to_artifact_string, verify_stable_iso,
};
use crate::derivations::{Derivation, DerivationError, LndVerdict, DEFAULT_LND_BOUND};
use crate::mason::{
    derivative_gcd_bound, fermat_search, mason_check, Regime, SearchConfig, SearchError,
    SearchMode,
};
use crate::poly::Poly;
use crate::rational::{format_rational, parse_rational};
use crate::rings::{AElement, Presentation, SurfaceParams, ThreefoldParams};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

pub use crate::parse::{parse_expression, parse_expression_with_vars, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Fixed default seed for all randomized subcommands.
pub const DEFAULT_SEED: u64 = 0x1517_abcd;

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Structured,
}

/// Validated per-invocation context. Construction fails on any invalid
/// parameter, even ones the requested subcommand would not use.
pub struct Session {
    pub surface: Option<SurfaceParams>,
    pub threefold_left: Option<ThreefoldParams>,
    pub threefold_right: Option<ThreefoldParams>,
    pub output_mode: OutputMode,
    pub random_seed: u64,
    warnings: Vec<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn verify(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFY_FAIL,
            message: message.into(),
        }
    }
}

type CmdResult = Result<String, Failure>;

#[derive(Parser)]
#[command(
    name = "lnd-algebra",
    about = "Exact computer algebra for bundle threefolds over Fermat-type surfaces",
    disable_help_subcommand = true
)]
struct Cli {
    /// Surface exponents and constant: a,b,c,lambda
    #[arg(long, global = true)]
    surface: Option<String>,

    /// Bundle exponents: n,m (alias: --left)
    #[arg(long, global = true, alias = "left")]
    threefold: Option<String>,

    /// Bundle exponents of a second ring: n,m
    #[arg(long, global = true)]
    right: Option<String>,

    /// Accept n,m >= 1 instead of the default n,m >= 2 (warns on 1)
    #[arg(long, global = true)]
    permissive: bool,

    /// Output mode: text or structured
    #[arg(long, global = true, default_value = "text")]
    output: String,

    /// Seed for randomized subcommands
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate surface parameters and report regime flags
    SurfaceInfo,
    /// Canonical normal form of an expression in the quotient ring
    Nf(NfArgs),
    /// Apply a derivation to an expression
    EvalDerivation(EvalArgs),
    /// Certify local nilpotency of a derivation
    LndCheck(LndArgs),
    /// Bounded-degree kernel basis of a derivation
    KernelBasis(KernelArgs),
    /// Exponential of a certified locally nilpotent derivation
    Exp(ExpArgs),
    /// Automorphism group operations
    Aut(AutArgs),
    /// Degree/root-count inequality for f, g, and h = -(f+g)
    Mason(MasonArgs),
    /// Search for solutions of f^a + g^b + h^c + lambda = 0
    FermatSearch(FermatArgs),
    /// Build or verify an explicit stable isomorphism
    StableIso(StableIsoArgs),
}

#[derive(Args)]
struct NfArgs {
    /// Expression over x,y,z,u,v and any adjoined variables
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
    /// Comma list of adjoined free variable names
    #[arg(long)]
    adjoined: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Derivation: E, zero, or semicolon list gen=expr (missing are 0)
    #[arg(long)]
    derivation: String,
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
}

#[derive(Args)]
struct LndArgs {
    #[arg(long)]
    derivation: String,
    /// Iteration bound for the certification
    #[arg(long, default_value_t = DEFAULT_LND_BOUND)]
    bound: u32,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    derivation: String,
    /// Total-degree bound of the monomial span
    #[arg(long)]
    bound: u32,
}

#[derive(Args)]
struct ExpArgs {
    #[arg(long)]
    derivation: String,
    /// Flow time, a rational
    #[arg(long, allow_hyphen_values = true)]
    t: String,
}

#[derive(Args)]
struct AutArgs {
    #[command(subcommand)]
    verb: AutVerb,
}

#[derive(Subcommand)]
enum AutVerb {
    /// Compose two automorphisms given as "mu; f" pairs
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Invert an automorphism
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        aut: String,
    },
    /// Apply an automorphism to an expression
    Apply {
        #[arg(long, allow_hyphen_values = true)]
        aut: String,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Conjugate the distinguished derivation and report the scalar
    ConjugateE {
        #[arg(long, allow_hyphen_values = true)]
        aut: String,
    },
    /// Restrict to the surface ring
    Restrict {
        #[arg(long, allow_hyphen_values = true)]
        aut: String,
    },
}

#[derive(Args)]
struct MasonArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// Also check the derivative-gcd degree bound for these exponents
    #[arg(long)]
    exponents: Option<String>,
}

#[derive(Args)]
struct FermatArgs {
    /// Exponents a,b,c
    #[arg(long)]
    exponents: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lambda: String,
    #[arg(long)]
    degree_bound: u32,
    /// Coefficient set: either lo..hi over integers or a comma list
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// exhaustive or randomized
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Sample count for randomized mode
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Candidate cap override
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct StableIsoArgs {
    #[command(subcommand)]
    verb: StableIsoVerb,
}

#[derive(Subcommand)]
enum StableIsoVerb {
    /// Build the isomorphism and emit the artifact; the two rings come
    /// from the session flags --left (= --threefold) and --right
    Build {
        /// Write the artifact to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-verify an artifact from a file or stdin
    Verify {
        #[arg(long)]
        input: Option<String>,
    },
}

/// Parses arguments (without the binary name) and runs one subcommand.
pub fn run(args: &[String]) -> CliOutcome {
    let full = std::iter::once("lnd-algebra".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(full) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                CliOutcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                CliOutcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };

    let session = match build_session(&cli) {
        Ok(s) => s,
        Err(f) => {
            return CliOutcome {
                code: f.code,
                stdout: String::new(),
                stderr: format!("error: {}\n", f.message),
            }
        }
    };

    let result = dispatch(&cli.command, &session);
    let mut stderr = String::new();
    for w in &session.warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    match result {
        Ok(stdout) => CliOutcome {
            code: EXIT_OK,
            stdout,
            stderr,
        },
        Err(f) => {
            stderr.push_str(&format!("error: {}\n", f.message));
            CliOutcome {
                code: f.code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn build_session(cli: &Cli) -> Result<Session, Failure> {
    let output_mode = match cli.output.as_str() {
        "text" => OutputMode::Text,
        "structured" => OutputMode::Structured,
        other => return Err(Failure::usage(format!("unknown output mode `{other}`"))),
    };
    let mut warnings = Vec::new();
    let surface = cli
        .surface
        .as_deref()
        .map(parse_surface_flag)
        .transpose()?;
    let parse_bundle = |flag: Option<&str>,
                        what: &str,
                        warnings: &mut Vec<String>|
     -> Result<Option<ThreefoldParams>, Failure> {
        match (&surface, flag) {
            (Some(s), Some(flag)) => {
                let (n, m) = parse_pair(flag, what)?;
                Ok(Some(make_threefold(s, n, m, cli.permissive, warnings)?))
            }
            (None, Some(_)) => Err(Failure::usage(format!("--{what} requires --surface"))),
            _ => Ok(None),
        }
    };
    let threefold_left = parse_bundle(cli.threefold.as_deref(), "threefold", &mut warnings)?;
    let threefold_right = parse_bundle(cli.right.as_deref(), "right", &mut warnings)?;
    Ok(Session {
        surface,
        threefold_left,
        threefold_right,
        output_mode,
        random_seed: cli.seed,
        warnings,
    })
}

fn parse_surface_flag(flag: &str) -> Result<SurfaceParams, Failure> {
    let parts: Vec<&str> = flag.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!(
            "--surface takes a,b,c,lambda, got `{flag}`"
        )));
    }
    let mut nums = [0u32; 3];
    for (i, p) in parts[..3].iter().enumerate() {
        nums[i] = p
            .parse()
            .map_err(|_| Failure::usage(format!("invalid surface exponent `{p}`")))?;
    }
    let lambda = parse_rational(parts[3])
        .map_err(|e| Failure::usage(e.to_string()))?;
    SurfaceParams::new(nums[0], nums[1], nums[2], lambda)
        .map_err(|e| Failure::usage(e.to_string()))
}

fn parse_pair(flag: &str, what: &str) -> Result<(u32, u32), Failure> {
    let parts: Vec<&str> = flag.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::usage(format!("--{what} takes n,m, got `{flag}`")));
    }
    let n = parts[0]
        .parse()
        .map_err(|_| Failure::usage(format!("invalid {what} exponent `{}`", parts[0])))?;
    let m = parts[1]
        .parse()
        .map_err(|_| Failure::usage(format!("invalid {what} exponent `{}`", parts[1])))?;
    Ok((n, m))
}

fn make_threefold(
    surface: &SurfaceParams,
    n: u32,
    m: u32,
    permissive: bool,
    warnings: &mut Vec<String>,
) -> Result<ThreefoldParams, Failure> {
    if permissive {
        if n == 1 || m == 1 {
            warnings.push(format!(
                "bundle exponents n={n}, m={m} below 2 accepted in permissive mode"
            ));
        }
        ThreefoldParams::new_permissive(surface.clone(), n, m)
            .map_err(|e| Failure::usage(e.to_string()))
    } else {
        ThreefoldParams::new(surface.clone(), n, m).map_err(|e| Failure::usage(e.to_string()))
    }
}

fn dispatch(cmd: &Command, session: &Session) -> CmdResult {
    match cmd {
        Command::SurfaceInfo => surface_info(session),
        Command::Nf(args) => nf(session, args),
        Command::EvalDerivation(args) => eval_derivation(session, args),
        Command::LndCheck(args) => lnd_check(session, args),
        Command::KernelBasis(args) => kernel_basis(session, args),
        Command::Exp(args) => exp(session, args),
        Command::Aut(args) => aut(session, &args.verb),
        Command::Mason(args) => mason(session, args),
        Command::FermatSearch(args) => fermat(session, args),
        Command::StableIso(args) => stable_iso(session, &args.verb),
    }
}

fn require_surface(session: &Session) -> Result<&SurfaceParams, Failure> {
    session
        .surface
        .as_ref()
        .ok_or_else(|| Failure::usage("this subcommand requires --surface a,b,c,lambda"))
}

fn require_threefold(session: &Session) -> Result<&ThreefoldParams, Failure> {
    session
        .threefold_left
        .as_ref()
        .ok_or_else(|| Failure::usage("this subcommand requires --threefold n,m"))
}

fn kv_record(record: &str, fields: &[(&str, String)]) -> String {
    let mut out = format!("record={record}");
    for (k, v) in fields {
        out.push_str(&format!(" {k}={v}"));
    }
    out.push('\n');
    out
}

fn surface_info(session: &Session) -> CmdResult {
    let s = require_surface(session)?;
    let mut fields = vec![
        ("a", s.a().to_string()),
        ("b", s.b().to_string()),
        ("c", s.c().to_string()),
        ("lambda", format_rational(s.lambda())),
        ("ml_regime", s.ml_regime().to_string()),
        ("perturbed_regime", s.perturbed_regime().to_string()),
    ];
    if let Some(t) = &session.threefold_left {
        fields.push(("n", t.n().to_string()));
        fields.push(("m", t.m().to_string()));
    }
    match session.output_mode {
        OutputMode::Structured => Ok(kv_record("surface-info", &fields)),
        OutputMode::Text => {
            let mut out = format!(
                "surface x^{} + y^{} + z^{} + {} = 0\n",
                s.a(),
                s.b(),
                s.c(),
                format_rational(s.lambda())
            );
            out.push_str(&format!(
                "ml regime (1/a + 1/b + 1/c < 1): {}\n",
                s.ml_regime()
            ));
            out.push_str(&format!(
                "perturbed regime (a,b,c >= 4, shifted sum <= 1/2): {}\n",
                s.perturbed_regime()
            ));
            if let Some(t) = &session.threefold_left {
                out.push_str(&format!(
                    "threefold relation x^{} u - y^{} v = 1\n",
                    t.m(),
                    t.n()
                ));
            }
            Ok(out)
        }
    }
}

fn presentation_for(session: &Session, adjoined: Option<&str>) -> Result<Presentation, Failure> {
    let params = require_threefold(session)?;
    let mut pres = Presentation::new(params.clone());
    if let Some(list) = adjoined {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        pres = pres
            .with_adjoined(&names)
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(pres)
}

fn parse_element(pres: &Presentation, text: &str) -> Result<AElement, Failure> {
    let vars = pres.vars();
    let p = parse_expression_with_vars(text, &vars)
        .map_err(|e| Failure::usage(e.to_string()))?;
    AElement::normal_form(pres, &p).map_err(|e| Failure::usage(e.to_string()))
}

fn nf(session: &Session, args: &NfArgs) -> CmdResult {
    let pres = presentation_for(session, args.adjoined.as_deref())?;
    let element = parse_element(&pres, &args.expr)?;
    match session.output_mode {
        OutputMode::Structured => Ok(kv_record(
            "normal-form",
            &[("value", element.value().to_compact_string())],
        )),
        OutputMode::Text => Ok(format!("{}\n", element.value())),
    }
}

/// Derivation specs: `E`, `zero`, or `gen=expr;gen=expr;...` with
/// unmentioned generators mapped to zero.
fn parse_derivation(pres: &Presentation, spec: &str) -> Result<Derivation, Failure> {
    match spec.trim() {
        "E" => Ok(Derivation::e(pres)),
        "zero" => Ok(Derivation::zero(pres)),
        custom => {
            let mut images: Vec<(String, AElement)> = pres
                .vars()
                .into_iter()
                .map(|v| (v, pres.zero()))
                .collect();
            for part in custom.split(';') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (gen, expr) = part
                    .split_once('=')
                    .ok_or_else(|| Failure::usage(format!("expected gen=expr, got `{part}`")))?;
                let gen = gen.trim();
                let idx = images
                    .iter()
                    .position(|(v, _)| v == gen)
                    .ok_or_else(|| Failure::usage(format!("unknown generator `{gen}`")))?;
                images[idx].1 = parse_element(pres, expr)?;
            }
            Derivation::new(pres, images).map_err(|e| match e {
                DerivationError::NotWellDefined { .. } => Failure::verify(e.to_string()),
                other => Failure::usage(other.to_string()),
            })
        }
    }
}

fn eval_derivation(session: &Session, args: &EvalArgs) -> CmdResult {
    let pres = presentation_for(session, None)?;
    let d = parse_derivation(&pres, &args.derivation)?;
    let h = parse_element(&pres, &args.expr)?;
    let image = d
        .apply(&h)
        .map_err(|e| Failure::usage(e.to_string()))?;
    match session.output_mode {
        OutputMode::Structured => Ok(kv_record(
            "eval-derivation",
            &[("value", image.value().to_compact_string())],
        )),
        OutputMode::Text => Ok(format!("{}\n", image.value())),
    }
}

fn lnd_check(session: &Session, args: &LndArgs) -> CmdResult {
    let pres = presentation_for(session, None)?;
    let d = parse_derivation(&pres, &args.derivation)?;
    match d.is_locally_nilpotent(args.bound) {
        LndVerdict::Nilpotent { indices } => {
            let fields: Vec<(&str, String)> = std::iter::once(("nilpotent", "true".to_string()))
                .chain(indices.iter().map(|(g, k)| (g.as_str(), k.to_string())))
                .collect();
            match session.output_mode {
                OutputMode::Structured => Ok(kv_record("lnd-check", &fields)),
                OutputMode::Text => {
                    let mut out = String::from("locally nilpotent\n");
                    for (g, k) in &indices {
                        out.push_str(&format!("index {g} = {k}\n"));
                    }
                    Ok(out)
                }
            }
        }
        LndVerdict::NotWithinBound { generator, bound } => Err(Failure::verify(format!(
            "not nilpotent within {bound} iterations: generator {generator} keeps growing"
        ))),
    }
}

fn kernel_basis(session: &Session, args: &KernelArgs) -> CmdResult {
    let pres = presentation_for(session, None)?;
    let d = parse_derivation(&pres, &args.derivation)?;
    let basis = d
        .kernel_basis_bounded(args.bound)
        .map_err(|e| Failure::verify(e.to_string()))?;
    match session.output_mode {
        OutputMode::Structured => {
            let mut out = kv_record("kernel-basis", &[("dimension", basis.len().to_string())]);
            for (i, e) in basis.iter().enumerate() {
                out.push_str(&kv_record(
                    "kernel-element",
                    &[
                        ("index", i.to_string()),
                        ("value", e.value().to_compact_string()),
                    ],
                ));
            }
            Ok(out)
        }
        OutputMode::Text => {
            let mut out = format!("kernel dimension {} at degree bound {}\n", basis.len(), args.bound);
            for e in &basis {
                out.push_str(&format!("{}\n", e.value()));
            }
            Ok(out)
        }
    }
}

fn exp(session: &Session, args: &ExpArgs) -> CmdResult {
    let pres = presentation_for(session, None)?;
    let d = parse_derivation(&pres, &args.derivation)?;
    let t = parse_rational(&args.t).map_err(|e| Failure::usage(e.to_string()))?;
    let map = d.exp_map(&t).map_err(|e| Failure::verify(e.to_string()))?;
    match session.output_mode {
        OutputMode::Structured => {
            let mut out = kv_record("exp", &[("t", format_rational(&t))]);
            for (g, img) in map.images() {
                out.push_str(&kv_record(
                    "exp-image",
                    &[
                        ("generator", g.clone()),
                        ("value", img.value().to_compact_string()),
                    ],
                ));
            }
            Ok(out)
        }
        OutputMode::Text => {
            let mut out = String::new();
            for (g, img) in map.images() {
                out.push_str(&format!("{g} -> {}\n", img.value()));
            }
            Ok(out)
        }
    }
}

/// Automorphisms are serialized as `mu; f-expression`.
fn parse_aut(session: &Session, spec: &str) -> Result<AutElement, Failure> {
    let params = require_threefold(session)?;
    let (mu_text, f_text) = spec
        .split_once(';')
        .ok_or_else(|| Failure::usage(format!("expected `mu; f`, got `{spec}`")))?;
    let mu = parse_rational(mu_text).map_err(|e| Failure::usage(e.to_string()))?;
    let pres = Presentation::new(params.clone());
    let f = parse_element(&pres, f_text)?;
    let torus = AutElement::torus(params, mu).map_err(|e| Failure::usage(e.to_string()))?;
    let shear = AutElement::shear(params, &f).map_err(|e| Failure::usage(e.to_string()))?;
    torus
        .compose(&shear)
        .map_err(|e| Failure::usage(e.to_string()))
}

fn render_aut(session: &Session, phi: &AutElement) -> String {
    match session.output_mode {
        OutputMode::Structured => kv_record(
            "automorphism",
            &[
                ("mu", format_rational(phi.mu())),
                ("f", phi.shear_part().value().to_compact_string()),
            ],
        ),
        OutputMode::Text => format!(
            "mu = {}\nf = {}\n",
            format_rational(phi.mu()),
            phi.shear_part().value()
        ),
    }
}

fn aut(session: &Session, verb: &AutVerb) -> CmdResult {
    match verb {
        AutVerb::Compose { lhs, rhs } => {
            let a = parse_aut(session, lhs)?;
            let b = parse_aut(session, rhs)?;
            let c = a.compose(&b).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(render_aut(session, &c))
        }
        AutVerb::Invert { aut } => {
            let phi = parse_aut(session, aut)?;
            Ok(render_aut(session, &phi.invert()))
        }
        AutVerb::Apply { aut, expr } => {
            let phi = parse_aut(session, aut)?;
            let pres = phi.presentation();
            let h = parse_element(&pres, expr)?;
            let image = phi.apply(&h).map_err(|e| Failure::usage(e.to_string()))?;
            match session.output_mode {
                OutputMode::Structured => Ok(kv_record(
                    "aut-apply",
                    &[("value", image.value().to_compact_string())],
                )),
                OutputMode::Text => Ok(format!("{}\n", image.value())),
            }
        }
        AutVerb::ConjugateE { aut } => {
            let phi = parse_aut(session, aut)?;
            let lambda = phi.conjugate_e().map_err(|e| match e {
                AutError::NotProportional { .. } => Failure::verify(e.to_string()),
                other => Failure::usage(other.to_string()),
            })?;
            match session.output_mode {
                OutputMode::Structured => Ok(kv_record(
                    "conjugate-e",
                    &[("lambda", format_rational(&lambda))],
                )),
                OutputMode::Text => Ok(format!("lambda = {}\n", format_rational(&lambda))),
            }
        }
        AutVerb::Restrict { aut } => {
            let phi = parse_aut(session, aut)?;
            let r = phi.restrict();
            match session.output_mode {
                OutputMode::Structured => Ok(kv_record(
                    "restrict",
                    &[
                        ("x", r.images()[0].to_compact_string()),
                        ("y", r.images()[1].to_compact_string()),
                        ("z", r.images()[2].to_compact_string()),
                    ],
                )),
                OutputMode::Text => {
                    let mut out = String::new();
                    for (g, img) in ["x", "y", "z"].iter().zip(r.images()) {
                        out.push_str(&format!("{g} -> {img}\n"));
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn mason(session: &Session, args: &MasonArgs) -> CmdResult {
    let f = args
        .f
        .parse::<Poly>()
        .map_err(|e| Failure::usage(format!("--f: {e}")))?;
    let g = args
        .g
        .parse::<Poly>()
        .map_err(|e| Failure::usage(format!("--g: {e}")))?;
    let report = mason_check(&f, &g).map_err(|e| Failure::usage(e.to_string()))?;
    let h = f.add(&g).neg();
    let mut fields = vec![
        ("f", f.to_compact_string()),
        ("g", g.to_compact_string()),
        ("h", h.to_compact_string()),
        ("applicable", report.applicable.to_string()),
        ("max_degree", report.max_degree.to_string()),
        ("root_count", report.root_count.to_string()),
        ("holds", report.holds.to_string()),
    ];
    let mut extra = String::new();
    if let Some(exps) = &args.exponents {
        let (a, b, c) = parse_triple(exps)?;
        let bound = derivative_gcd_bound(&f, &g, &h, a, b, c)
            .map_err(|e| Failure::usage(e.to_string()))?;
        fields.push(("deg_w", bound.deg_w.to_string()));
        fields.push(("bound", bound.bound.to_string()));
        fields.push(("bound_holds", bound.holds.to_string()));
        extra = format!(
            "derivative gcd w = {}, deg {} <= bound {}: {}\n",
            bound.w, bound.deg_w, bound.bound, bound.holds
        );
    }
    let out = match session.output_mode {
        OutputMode::Structured => kv_record("mason", &fields),
        OutputMode::Text => format!(
            "f = {f}\ng = {g}\nh = {h}\napplicable: {}\nmax degree {} < distinct roots {}: {}\n{extra}",
            report.applicable, report.max_degree, report.root_count, report.holds
        ),
    };
    if report.applicable && !report.holds {
        return Err(Failure::verify(format!(
            "degree/root-count inequality falsified\n{out}"
        )));
    }
    Ok(out)
}

fn parse_triple(flag: &str) -> Result<(u32, u32, u32), Failure> {
    let parts: Vec<&str> = flag.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!("expected a,b,c, got `{flag}`")));
    }
    let mut nums = [0u32; 3];
    for (i, p) in parts.iter().enumerate() {
        nums[i] = p
            .parse()
            .map_err(|_| Failure::usage(format!("invalid exponent `{p}`")))?;
    }
    Ok((nums[0], nums[1], nums[2]))
}

/// Coefficient sets: `lo..hi` over integers, or a comma list of
/// rationals.
fn parse_coeff_set(spec: &str) -> Result<Vec<BigRational>, Failure> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = lo
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("invalid range bound `{lo}`")))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("invalid range bound `{hi}`")))?;
        if lo > hi {
            return Err(Failure::usage("empty coefficient range"));
        }
        Ok((lo..=hi).map(crate::rational::int).collect())
    } else {
        spec.split(',')
            .map(|p| parse_rational(p).map_err(|e| Failure::usage(e.to_string())))
            .collect()
    }
}

fn fermat(session: &Session, args: &FermatArgs) -> CmdResult {
    let exponents = parse_triple(&args.exponents)?;
    let lambda = parse_rational(&args.lambda).map_err(|e| Failure::usage(e.to_string()))?;
    let coeffs = parse_coeff_set(&args.coeffs)?;
    let mode = match args.mode.as_str() {
        "exhaustive" => SearchMode::Exhaustive,
        "randomized" => SearchMode::Randomized {
            samples: args.samples,
            seed: session.random_seed,
        },
        other => return Err(Failure::usage(format!("unknown search mode `{other}`"))),
    };
    let mut cfg = SearchConfig::new(exponents, lambda, args.degree_bound, coeffs, mode)
        .map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(cap) = args.cap {
        cfg = cfg.with_candidate_cap(cap);
    }
    let regime = cfg.regime();
    let regime_name = match regime {
        Regime::Unperturbed { strict: true } => "unperturbed-strict",
        Regime::Unperturbed { strict: false } => "unperturbed-boundary",
        Regime::Perturbed => "perturbed",
        Regime::Unconstrained => "unconstrained",
    };
    let solutions = match fermat_search(&cfg) {
        Ok(s) => s,
        Err(e @ SearchError::ResourceLimit { .. }) => {
            return Err(Failure::verify(format!(
                "{e}; raise --cap to continue (search did NOT complete)"
            )))
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };

    let mut out = match session.output_mode {
        OutputMode::Structured => kv_record(
            "fermat-search",
            &[
                ("regime", regime_name.to_string()),
                ("solutions", solutions.len().to_string()),
            ],
        ),
        OutputMode::Text => format!(
            "regime {regime_name}; search completed with {} solution(s)\n",
            solutions.len()
        ),
    };
    for s in &solutions {
        let fields = [
            ("index", s.index.to_string()),
            ("f", s.f.to_compact_string()),
            ("g", s.g.to_compact_string()),
            ("h", s.h.to_compact_string()),
            ("deg_f", s.f.total_degree().unwrap_or(0).to_string()),
            ("deg_g", s.g.total_degree().unwrap_or(0).to_string()),
            ("deg_h", s.h.total_degree().unwrap_or(0).to_string()),
            ("verified", s.verified.to_string()),
        ];
        out.push_str(&kv_record("solution", &fields));
    }
    if regime.guarantees_empty() && !solutions.is_empty() {
        return Err(Failure::verify(format!(
            "found {} solution(s) in a regime that guarantees none\n{out}",
            solutions.len()
        )));
    }
    Ok(out)
}

fn stable_iso(session: &Session, verb: &StableIsoVerb) -> CmdResult {
    match verb {
        StableIsoVerb::Build { out } => {
            let surface = require_surface(session)?;
            let left = session
                .threefold_left
                .as_ref()
                .ok_or_else(|| Failure::usage("stable-iso build requires --left n,m"))?;
            let right = session
                .threefold_right
                .as_ref()
                .ok_or_else(|| Failure::usage("stable-iso build requires --right n,m"))?;
            let iso = build_stable_iso(surface, (left.n(), left.m()), (right.n(), right.m()))
                .map_err(|e| Failure::verify(e.to_string()))?;
            let artifact = to_artifact_string(&iso);
            match out {
                Some(path) => {
                    std::fs::write(path, &artifact)
                        .map_err(|e| Failure::usage(format!("cannot write {path}: {e}")))?;
                    Ok(format!("wrote {path}\n"))
                }
                None => Ok(artifact),
            }
        }
        StableIsoVerb::Verify { input } => {
            let text = match input {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?,
                None => std::io::read_to_string(std::io::stdin())
                    .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?,
            };
            let iso = parse_artifact(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let report = verify_stable_iso(&iso);
            let out = match session.output_mode {
                OutputMode::Structured => kv_record(
                    "stable-iso-verify",
                    &[
                        ("relations_ok", report.relations_ok.to_string()),
                        ("round_trip_ok", report.round_trip_ok.to_string()),
                        ("certificates_ok", report.certificates_ok.to_string()),
                        ("all_ok", report.all_ok().to_string()),
                    ],
                ),
                OutputMode::Text => {
                    let mut s = format!(
                        "relations_ok: {}\nround_trip_ok: {}\ncertificates_ok: {}\n",
                        report.relations_ok, report.round_trip_ok, report.certificates_ok
                    );
                    let degs: Vec<String> = report
                        .forward_degrees
                        .iter()
                        .map(|(v, d)| format!("{v}:{d}"))
                        .collect();
                    s.push_str(&format!("forward image degrees: {}\n", degs.join(" ")));
                    s
                }
            };
            if report.all_ok() {
                Ok(out)
            } else {
                Err(Failure {
                    code: EXIT_VERIFY_FAIL,
                    message: format!("stable isomorphism verification failed\n{out}"),
                })
            }
        }
    }
}

/// Convenience for invoking [`run`] with string literals.
pub fn run_args(args: &[&str]) -> CliOutcome {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run(&owned)
}
