//! Composing Lie 2-algebra bibundles.
//!
//! Bibundles compose like bimodules: `Q . P` is a quotient of the
//! anchor-matched pair space by the diagonal middle action. For bundles of
//! functors the composite agrees with the bundle of the composite functor,
//! witnessed by an explicit isomorphism; unit laws hold the same way. This
//! example checks both for the Heisenberg equivalence, then runs the
//! seeded isomorphism search used by `lie2kit verify --against`.
//!
//! Run with: `cargo run --example bibundle_composition`

use lie2kit::lie2;

fn main() {
    let phi = lie2::heis_phi();
    let idt = lie2::Lie2Functor::identity(&phi.target);

    let bf = lie2::bundle_of_functor(&phi).unwrap();
    let bg = lie2::bundle_of_functor(&idt).unwrap();
    let gf = lie2::Lie2Functor::compose(&idt, &phi);
    let bgf = lie2::bundle_of_functor(&gf).unwrap();

    // <id> . <phi> as a quotient of the pair space.
    let comp = lie2::compose_bibundles(&bg.bundle, &bf.bundle).unwrap();
    println!(
        "pair space: {}-dim, diagonal: {}-dim, composite total: {}-dim",
        comp.pair_space.dim(),
        comp.delta.dim(),
        comp.bundle.p.dim()
    );
    println!("composite bundle: {}", lie2::verify_bibundle(&comp.bundle));

    // The canonical comparison <id> . <phi> -> <id . phi>.
    let wit = lie2::witness_compose_functor_bundles(&idt, &phi, &bf, &bg, &bgf, &comp).unwrap();
    let r = lie2::verify_bibundle_morphism(&comp.bundle, &bgf.bundle, &wit).unwrap();
    println!("canonical witness: {r}");

    // Unit laws up to isomorphism.
    let left = lie2::compose_bibundles(&lie2::identity_bibundle(&phi.target), &bf.bundle).unwrap();
    let wl = lie2::witness_left_unit(&bf.bundle, &left).unwrap();
    println!(
        "left unit law:  {}",
        lie2::verify_bibundle_morphism(&left.bundle, &bf.bundle, &wl).unwrap()
    );
    let right = lie2::compose_bibundles(&bf.bundle, &lie2::identity_bibundle(&phi.source)).unwrap();
    let wr = lie2::witness_right_unit(&bf.bundle, &right).unwrap();
    println!(
        "right unit law: {}",
        lie2::verify_bibundle_morphism(&right.bundle, &bf.bundle, &wr).unwrap()
    );

    // The blind search (no canonical formula available) also finds a
    // witness: anchors and equivariance pin the candidate down to an
    // affine subspace, which is then scanned for an invertible point.
    let found = lie2::find_bibundle_iso(&left.bundle, &bf.bundle, Some(42)).unwrap();
    println!("searched witness for <id>.P = P:");
    for i in 0..found.matrix.rows() {
        let row: Vec<String> = found.matrix.row(i).iter().map(|x| x.to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
    assert!(lie2::verify_bibundle_morphism(&left.bundle, &bf.bundle, &found)
        .unwrap()
        .pass());
}
