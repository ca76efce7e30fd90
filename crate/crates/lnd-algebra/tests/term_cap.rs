//! The LND_ALGEBRA_MAX_TERMS guard. Lives in its own test binary so the
//! environment variable is set before the cap is first read.

use lnd_algebra::poly::{self, Poly};
use lnd_algebra::rational::int;

#[test]
fn term_cap_panics_on_oversized_intermediates() {
    std::env::set_var("LND_ALGEBRA_MAX_TERMS", "40");
    assert_eq!(poly::term_cap(), 40);

    // (1 + T)^8 has 9 terms: fine
    let coeffs: Vec<_> = [1i64, 1].iter().map(|&c| int(c)).collect();
    let p = poly::from_univariate("T", &coeffs);
    assert_eq!(p.pow(8).num_terms(), 9);

    // a product with 51 distinct monomials must trip the guard
    let dense: Vec<_> = (0..=50i64).map(|_| int(1)).collect();
    let big = poly::from_univariate("T", &dense);
    let result = std::panic::catch_unwind(|| big.mul(&Poly::one(&["T"])));
    assert!(result.is_err(), "cap did not trigger");
}
