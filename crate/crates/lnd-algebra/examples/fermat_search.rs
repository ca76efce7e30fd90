//! Exhaustive desk-scale searches for `f^a + g^b + h^c + lambda = 0`.
//!
//! In the guaranteed regimes the search space empties out: with
//! `lambda = 0` and `1/a + 1/b + 1/c <= 1`, or with `lambda != 0`,
//! `a,b,c >= 4`, and `1/(a-3) + 1/(b-3) + 1/(c-3) <= 1/2`, no triple of
//! nonconstant coprime polynomials solves the equation. Outside those
//! regimes solutions show up quickly.
//!
//! Run with `cargo run --example fermat_search`.

use lnd_algebra::mason::{fermat_search, Regime, SearchConfig, SearchMode};
use lnd_algebra::rational::int;

fn coeff_range(lo: i64, hi: i64) -> Vec<num_rational::BigRational> {
    (lo..=hi).map(int).collect()
}

fn describe(regime: Regime) -> &'static str {
    match regime {
        Regime::Unperturbed { strict: true } => "unperturbed, strict sum < 1",
        Regime::Unperturbed { strict: false } => "unperturbed, boundary sum = 1",
        Regime::Perturbed => "perturbed, shifted sum <= 1/2",
        Regime::Unconstrained => "unconstrained (no emptiness guarantee)",
    }
}

fn run(label: &str, cfg: &SearchConfig) {
    println!("{label}: exponents {:?}, lambda {}", cfg.exponents, cfg.lambda);
    println!("  regime: {}", describe(cfg.regime()));
    match fermat_search(cfg) {
        Ok(solutions) if solutions.is_empty() => println!("  search completed: no solutions\n"),
        Ok(solutions) => {
            println!("  search completed: {} solution(s), e.g.", solutions.len());
            let s = &solutions[0];
            println!("    f = {}", s.f);
            println!("    g = {}", s.g);
            println!("    h = {}\n", s.h);
        }
        Err(e) => println!("  {e}\n"),
    }
}

fn main() {
    let unperturbed = SearchConfig::new(
        (2, 3, 7),
        int(0),
        3,
        coeff_range(-2, 2),
        SearchMode::Exhaustive,
    )
    .unwrap();
    run("x^2 + y^3 + z^7", &unperturbed);

    let perturbed = SearchConfig::new(
        (7, 11, 13),
        int(1),
        2,
        coeff_range(-1, 1),
        SearchMode::Exhaustive,
    )
    .unwrap();
    run("x^7 + y^11 + z^13 + 1", &perturbed);

    // exponent 1 breaks the hypotheses: f is determined by g and h
    let degenerate = SearchConfig::new(
        (1, 2, 3),
        int(0),
        3,
        coeff_range(-2, 1),
        SearchMode::Exhaustive,
    )
    .unwrap();
    run("f + g^2 + h^3 (degenerate)", &degenerate);
}
