//! Canonical normal forms in the quotient ring.
//!
//! Elements of `A(n,m)` are reduced with two rewrite rules,
//! `z^c -> -x^a - y^b - lambda` and `x^m u -> y^n v + 1`, whose
//! left-hand sides are coprime monomials: the result does not depend on
//! the order rules are applied in. This example reduces a few elements,
//! then re-reduces random polynomials under randomized rule orders to
//! exhibit the confluence.
//!
//! Run with `cargo run --example normal_forms`.

use lnd_algebra::parse::parse_expression_with_vars;
use lnd_algebra::poly::{Mono, Poly};
use lnd_algebra::rational::int;
use lnd_algebra::rings::{AElement, Presentation, SurfaceParams, ThreefoldParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() {
    let surface = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
    let params = ThreefoldParams::new(surface, 2, 2).unwrap();
    let pres = Presentation::new(params);
    println!("ring: Q[x,y,z]/(x^2 + y^3 + z^7), bundle x^2 u - y^2 v = 1\n");

    for text in [
        "z^7",
        "x^2*u",
        "x^4*u",
        "(x^2*u - y^2*v)^3",
        "z^9 + u*v",
    ] {
        let vars = pres.vars();
        let p = parse_expression_with_vars(text, &vars).unwrap();
        let nf = AElement::normal_form(&pres, &p).unwrap();
        println!("{text:-24} ->  {}", nf.value());
    }

    // confluence: randomized single-step reduction orders agree
    let mut rng = StdRng::seed_from_u64(7);
    let vars = pres.vars();
    let mut agreements = 0;
    for _ in 0..200 {
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
        let first = AElement::normal_form_randomized(&pres, &p, &mut rng).unwrap();
        let second = AElement::normal_form_randomized(&pres, &p, &mut rng).unwrap();
        assert_eq!(first, second);
        agreements += 1;
    }
    println!("\n{agreements}/200 random polynomials reduced to identical normal");
    println!("forms under two independently randomized rule orders.");
}
