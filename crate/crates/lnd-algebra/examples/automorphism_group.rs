//! The automorphism group in normalized torus/shear coordinates.
//!
//! Run with `cargo run --example automorphism_group`.

use lnd_algebra::automorphisms::AutElement;
use lnd_algebra::parse::parse_expression_with_vars;
use lnd_algebra::rational::{format_rational, int, pow_signed, ratio};
use lnd_algebra::rings::{AElement, Presentation, SurfaceParams, ThreefoldParams};

fn main() {
    let surface = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
    let params = ThreefoldParams::new(surface, 2, 2).unwrap();
    let pres = Presentation::new(params.clone());

    let torus = AutElement::torus(&params, int(2)).unwrap();
    println!("torus(2) generator images (exponents bc=21, ac=14, ab=6):");
    for (g, img) in torus.to_ring_map().images() {
        println!("  {g} -> {}", img.value());
    }

    let vars = pres.vars();
    let f = AElement::normal_form(
        &pres,
        &parse_expression_with_vars("x + z^2", &vars).unwrap(),
    )
    .unwrap();
    let shear = AutElement::shear(&params, &f).unwrap();
    println!("\nshear(x + z^2) moves the bundle coordinates:");
    for g in ["u", "v"] {
        let img = shear.to_ring_map().image(g).unwrap().clone();
        println!("  {g} -> {}", img.value());
    }

    // the group law is computed in normalized coordinates and agrees
    // with plain generator-image substitution
    let product = torus.compose(&shear).unwrap();
    let oracle = torus
        .to_ring_map()
        .compose(&shear.to_ring_map())
        .unwrap();
    assert_eq!(product.to_ring_map(), oracle);
    println!(
        "\ntorus(2) . shear(x + z^2) normalizes to (mu = {}, f = {})",
        format_rational(product.mu()),
        product.shear_part().value()
    );

    let other = shear.compose(&torus).unwrap();
    assert_ne!(product, other);
    println!("composition in the other order differs: the group is nonabelian");

    // conjugating the distinguished derivation scales it by mu^-(m bc + n ac)
    let mu = ratio(3, 2);
    let phi = AutElement::torus(&params, mu.clone()).unwrap();
    let lambda = phi.conjugate_e().unwrap();
    assert_eq!(lambda, pow_signed(&mu, -70));
    println!(
        "\nconjugate of E under torus(3/2): lambda = (3/2)^-70 = {}",
        format_rational(&lambda)
    );

    let inv = product.invert();
    assert!(product.compose(&inv).unwrap().is_identity());
    println!("inverses recover the identity in normalized coordinates");
}
