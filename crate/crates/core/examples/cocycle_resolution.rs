//! Resolving a cocycle valued in a 2-vector space.
//!
//! A 2-vector space is a two-term complex `∂: U -> W` seen as a category;
//! a cocycle assigns objects `v_i` in `W` to patches and transition
//! 2-cells `w_ij = (u_ij, v_j)` satisfying `w_ij ∘ w_jk = w_ik`. Because
//! every cocycle of vector spaces is a coboundary, a weighted average
//! produces cells `z_i = (Σ λ_k u_ik, Σ λ_k v_k)` with
//! `z_i ∘ z_j⁻¹ = w_ij` exactly — the cocycle is trivialized.
//!
//! Run with: `cargo run --example cocycle_resolution`

use lie2kit::exactla::{int, rat, Matrix};
use lie2kit::testgen;
use lie2kit::twovect::{
    compose_cells, invert_cell, resolve_cocycle, verify_cocycle, CocycleData, TwoTermComplex,
};

fn main() {
    // Two patches over del: R -> R^2, del(u) = (u, 0), equal weights.
    let d = CocycleData {
        complex: TwoTermComplex::new(1, 2, Matrix::from_i64(&[&[1], &[0]])),
        objects: vec![vec![int(0), int(0)], vec![int(1), int(0)]],
        morphism_vectors: vec![
            vec![vec![int(0)], vec![int(-1)]],
            vec![vec![int(1)], vec![int(0)]],
        ],
        weights: vec![rat(1, 2), rat(1, 2)],
    };
    println!("cocycle: {}", verify_cocycle(&d));
    let z = resolve_cocycle(&d).unwrap();
    for (i, c) in z.iter().enumerate() {
        println!("z{} = (u = {:?}, v = {:?})", i + 1, c.u, c.v);
    }
    for i in 0..d.size() {
        for j in 0..d.size() {
            let w = compose_cells(&d.complex, &z[i], &invert_cell(&d.complex, &z[j])).unwrap();
            assert_eq!(w, d.w(i, j));
        }
    }
    println!("all {} identities z_i ∘ z_j⁻¹ = w_ij hold exactly", d.size() * d.size());

    // The same resolution works for arbitrary valid cocycles.
    let mut rng = testgen::rng(9);
    let big = testgen::random_cocycle(&mut rng, 6, 5);
    println!(
        "random cocycle with s = {}, dims ({}, {}): {}",
        big.size(),
        big.complex.u_dim(),
        big.complex.w_dim(),
        verify_cocycle(&big)
    );
    let z = resolve_cocycle(&big).unwrap();
    for i in 0..big.size() {
        for j in 0..big.size() {
            let w = compose_cells(&big.complex, &z[i], &invert_cell(&big.complex, &z[j])).unwrap();
            assert_eq!(w, big.w(i, j));
        }
    }
    println!("resolved: all {} identities exact", big.size() * big.size());

    // Invalid cocycles are rejected with the violated condition.
    let (bad, condition) = testgen::corrupt_cocycle(&mut rng, &big);
    match resolve_cocycle(&bad) {
        Err(e) => println!("corrupted ({condition}): rejected with \"{e}\""),
        Ok(_) => unreachable!("corrupted cocycle must not resolve"),
    }
}
