//! Exact computer algebra for a family of affine threefolds: the rings
//!
//! ```text
//! R      = Q[x,y,z] / (x^a + y^b + z^c + lambda)
//! A(n,m) = R[u,v]   / (x^m u - y^n v - 1)
//! ```
//!
//! their locally nilpotent derivations and automorphism groups, the
//! Mason–Stothers degree inequality with the non-existence searches it
//! powers, and an explicit, machine-verified stable isomorphism
//! `A(n,m)[w] ~ A(n',m')[w]`. Everything runs over arbitrary-precision
//! rationals; there are no floating-point code paths.
//!
//! # Modules
//!
//! - [`poly`] — sparse multivariate polynomials: exact arithmetic,
//!   univariate gcd, squarefree parts, distinct-root counts.
//! - [`rings`] — quotient-ring presentations, confluent rewrite normal
//!   forms, generator-image ring maps.
//! - [`derivations`] — derivations from generator images, nilpotency
//!   certification, kernel oracles, exponentials, Bezout power splits.
//! - [`automorphisms`] — the torus/shear group in normalized
//!   coordinates, with conjugation of the distinguished derivation.
//! - [`mason`] — the degree/root-count inequality and the seeded,
//!   cap-guarded searches for `f^a + g^b + h^c + lambda = 0`.
//! - [`cancellation`] — construction, serialization, and re-verification
//!   of the stable isomorphism.
//! - [`cli`] — the batch subcommand surface (`lnd-algebra` binary).
//! - [`parse`] — the shared expression grammar.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example mason_theorem
//! cargo run --example fermat_search
//! cargo run --example normal_forms
//! cargo run --example derivation_kernel
//! cargo run --example exponential_action
//! cargo run --example automorphism_group
//! cargo run --example stable_isomorphism
//! ```
//!
//! The `lnd-algebra` binary exposes the same operations for batch use;
//! see the README for the subcommand list and the exit-status contract.

pub mod automorphisms;
pub mod cancellation;
pub mod cli;
pub mod derivations;
pub mod mason;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod rings;

pub use automorphisms::AutElement;
pub use cancellation::{build_stable_iso, verify_stable_iso, StableIso};
pub use derivations::{bezout_split, Derivation, LndVerdict};
pub use mason::{fermat_search, mason_check, MasonReport, SearchConfig};
pub use parse::parse_expression;
pub use poly::Poly;
pub use rings::{AElement, Presentation, RingMap, SurfaceParams, ThreefoldParams};
