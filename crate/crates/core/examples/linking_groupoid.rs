//! The linking groupoid of a Morita equivalence.
//!
//! A biprincipal bibundle `P: G -> H` can be packaged as a single groupoid
//! on the disjoint union of objects, with arrows `G1 ⊔ P ⊔ P̄ ⊔ H1`; the
//! two inclusions `w_G`, `w_H` are essential equivalences and `P` is
//! recovered as `<w_H>⁻¹ ∘ <w_G>` — concretely, `<w_H> ∘ P ≅ <w_G>`.
//!
//! Run with: `cargo run --example linking_groupoid`

use lie2kit::{fingpd, testgen};

fn main() {
    // pt ≃ codisc({a, b}): the linking groupoid is codiscrete on 3 objects.
    let (_, fb) = fingpd::point_codisc_bundle();
    let link = fingpd::linking_groupoid(&fb.bundle).unwrap();
    println!(
        "pt * codisc(a,b): {} objects, {} arrows — {}",
        link.groupoid.n_objects(),
        link.groupoid.n_arrows(),
        fingpd::verify_groupoid(&link.groupoid)
    );
    println!("objects: {:?}", link.groupoid.objects);
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(link.groupoid.hom(x, y).len(), 1);
        }
    }
    println!("codiscrete: exactly one arrow in every hom-set");

    // The two embeddings and the recovery of P.
    println!("w_G: {}", fingpd::is_essential_equivalence(&link.w_g));
    println!("w_H: {}", fingpd::is_essential_equivalence(&link.w_h));
    let bwg = fingpd::bundle_of_functor(&link.w_g).unwrap().bundle;
    let bwh = fingpd::bundle_of_functor(&link.w_h).unwrap().bundle;
    let comp = fingpd::compose_bibundles(&bwh, &fb.bundle).unwrap();
    let delta = fingpd::find_bibundle_iso(&comp, &bwg, None).expect("oracle isomorphism");
    assert!(fingpd::verify_bibundle_map(&comp, &bwg, &delta).pass());
    println!("<w_H> ∘ P ≅ <w_G> with witness {delta:?}");

    // Same story on a random Morita equivalence.
    let mut rng = testgen::rng(20);
    let p = testgen::random_morita_bundle(&mut rng, 3, 3);
    let link = fingpd::linking_groupoid(&p).unwrap();
    println!(
        "random Morita bundle ({} elements): linking groupoid has {} objects, {} arrows — {}",
        p.total.len(),
        link.groupoid.n_objects(),
        link.groupoid.n_arrows(),
        fingpd::verify_groupoid(&link.groupoid)
    );
    let bwg = fingpd::bundle_of_functor(&link.w_g).unwrap().bundle;
    let bwh = fingpd::bundle_of_functor(&link.w_h).unwrap().bundle;
    let comp = fingpd::compose_bibundles(&bwh, &p).unwrap();
    let delta = fingpd::find_bibundle_iso(&comp, &bwg, None).expect("oracle isomorphism");
    assert!(fingpd::verify_bibundle_map(&comp, &bwg, &delta).pass());
    println!("<w_H> ∘ P ≅ <w_G> holds here too");
}
