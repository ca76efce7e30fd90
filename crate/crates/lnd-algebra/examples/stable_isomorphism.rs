//! The explicit stable isomorphism `A(n,m)[w] ~ A(n',m')[w]`.
//!
//! The two bundle rings over a common surface become isomorphic after
//! adjoining one free variable. This example builds the isomorphism for
//! `(n,m) = (2,2)` and `(n',m') = (2,3)`, prints all twelve generator
//! images, re-verifies every certificate, and demonstrates that a
//! tampered map is caught.
//!
//! Run with `cargo run --example stable_isomorphism`.

use lnd_algebra::cancellation::{
    build_stable_iso, extended_flow_derivation, to_artifact_string, verify_stable_iso,
    StableIso,
};
use lnd_algebra::rational::int;
use lnd_algebra::rings::{RingMap, SurfaceParams};

fn main() {
    let surface = SurfaceParams::new(2, 3, 7, int(0)).unwrap();
    let iso = build_stable_iso(&surface, (2, 2), (2, 3)).unwrap();

    println!("forward images (left (n,m) = (2,2) into right (n,m) = (2,3)):");
    for (g, img) in iso.forward.images() {
        println!("  {g} -> {}", img.value());
    }
    println!("\nbackward images:");
    for (g, img) in iso.backward.images() {
        println!("  {g} -> {}", img.value());
    }
    println!(
        "\ncertificates: A x^{} + B y^{} = 1 with A = {}, B = {}",
        iso.right.m(),
        iso.right.n(),
        iso.cert_left.0.value(),
        iso.cert_left.1.value()
    );

    let report = verify_stable_iso(&iso);
    println!(
        "\nverification: relations {}, round trips {}, certificates {}",
        report.relations_ok, report.round_trip_ok, report.certificates_ok
    );
    assert!(report.all_ok());

    // the flow of E, transported through the isomorphism, becomes
    // unit-rate translation in the other chart's adjoined coordinate
    let flow = extended_flow_derivation(&iso).unwrap();
    let transported = flow.conjugate(&iso.backward, &iso.forward).unwrap();
    println!("\ntransported flow images on the right:");
    for (g, img) in transported.images() {
        println!("  {g} -> {}", img.value());
    }

    // tamper with one image: verification must notice
    let mut images: Vec<_> = iso.forward.images().map(|(v, i)| (v, i.clone())).collect();
    let u_idx = images.iter().position(|(v, _)| v == "u").unwrap();
    images[u_idx].1 = images[u_idx].1.add(&iso.forward.dst().one()).unwrap();
    let corrupted = StableIso {
        forward: RingMap::new_unchecked(
            iso.forward.src().clone(),
            iso.forward.dst().clone(),
            images,
        )
        .unwrap(),
        ..iso.clone()
    };
    let bad = verify_stable_iso(&corrupted);
    assert!(!bad.round_trip_ok);
    println!("\nperturbing forward(u) by +1 flips round_trip_ok to {}", bad.round_trip_ok);

    println!("\nartifact ({} bytes) begins:", to_artifact_string(&iso).len());
    for line in to_artifact_string(&iso).lines().take(6) {
        println!("  {line}");
    }
}
