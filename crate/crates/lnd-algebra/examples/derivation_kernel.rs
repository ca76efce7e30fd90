//! The distinguished derivation `E` and its kernel.
//!
//! `E` sends `u -> y^n` and `v -> x^m` and kills `x, y, z`. It is
//! locally nilpotent (every generator dies after at most two
//! applications), and its kernel within any bounded-degree slice of the
//! ring is exactly the span of the `x,y,z`-monomials — computed here by
//! solving the exact linear system over the normal-form monomial basis.
//!
//! Run with `cargo run --example derivation_kernel`.

use lnd_algebra::derivations::Derivation;
use lnd_algebra::parse::parse_expression_with_vars;
use lnd_algebra::rational::int;
use lnd_algebra::rings::{AElement, Presentation, SurfaceParams, ThreefoldParams};

fn main() {
    let surface = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
    let params = ThreefoldParams::new(surface, 2, 2).unwrap();
    let pres = Presentation::new(params);
    let e = Derivation::e(&pres);

    println!("generator images of E:");
    for (g, img) in e.images() {
        println!("  E({g}) = {}", img.value());
    }

    let verdict = e.is_locally_nilpotent(50);
    println!("\nnilpotency indices: {:?}", verdict.indices().unwrap());

    // a derivation prescription that violates the bundle relation
    let mut images: Vec<_> = pres.vars().into_iter().map(|v| (v, pres.zero())).collect();
    images[3].1 = pres.one(); // u -> 1 alone
    match Derivation::new(&pres, images) {
        Err(e) => println!("\nrejected u -> 1 alone: {e}"),
        Ok(_) => unreachable!("u -> 1 alone cannot preserve the bundle relation"),
    }

    for text in ["x", "u", "x^2*u - y^2*v"] {
        let vars = pres.vars();
        let p = parse_expression_with_vars(text, &vars).unwrap();
        let h = AElement::normal_form(&pres, &p).unwrap();
        println!(
            "kernel membership of {text}: {}",
            e.kernel_membership(&h).unwrap()
        );
    }

    println!("\nbounded kernel bases (should match the x,y,z-monomial counts):");
    for bound in 1..=4u32 {
        let basis = e.kernel_basis_bounded(bound).unwrap();
        let expected = (bound as u64 + 1) * (bound as u64 + 2) * (bound as u64 + 3) / 6;
        println!(
            "  degree <= {bound}: dimension {} (xyz-monomial count {expected})",
            basis.len()
        );
        assert_eq!(basis.len() as u64, expected);
    }
}
