//! Exponentials of locally nilpotent derivations.
//!
//! For a certified locally nilpotent derivation the series
//! `exp(t D): g -> sum t^k D^k(g) / k!` is finite and defines a ring
//! automorphism; varying `t` gives a one-parameter group. The flow of
//! `E` is precisely the shear family of the automorphism group.
//!
//! Run with `cargo run --example exponential_action`.

use lnd_algebra::derivations::Derivation;
use lnd_algebra::rational::{int, ratio};
use lnd_algebra::rings::{Presentation, SurfaceParams, ThreefoldParams};

fn main() {
    let surface = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
    let params = ThreefoldParams::new(surface, 2, 2).unwrap();
    let pres = Presentation::new(params);
    let e = Derivation::e(&pres);

    let t = ratio(1, 3);
    let flow = e.exp_map(&t).unwrap();
    println!("exp((1/3) E):");
    for (g, img) in flow.images() {
        println!("  {g} -> {}", img.value());
    }

    let back = e.exp_map(&ratio(-1, 3)).unwrap();
    assert!(flow.compose(&back).unwrap().is_identity());
    println!("\nexp((1/3)E) . exp((-1/3)E) = identity");

    let s = ratio(5, 2);
    let combined = e.exp_map(&s).unwrap().compose(&flow).unwrap();
    let direct = e.exp_map(&(s + t)).unwrap();
    assert_eq!(combined, direct);
    println!("exp((5/2)E) . exp((1/3)E) = exp((17/6)E)");

    // the flow preserves both defining relations exactly
    flow.check_relations().unwrap();
    println!("both defining relations are preserved by the flow");

    // scaling E by u leaves the relations intact but kills nilpotency
    let u = pres.var("u").unwrap();
    let ue = e.scale(&u).unwrap();
    match ue.exp_map(&int(1)) {
        Err(err) => println!("\nexp of u*E correctly refused: {err}"),
        Ok(_) => unreachable!("u*E is not locally nilpotent"),
    }
}
