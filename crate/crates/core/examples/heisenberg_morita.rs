//! The Heisenberg Morita equivalence, end to end.
//!
//! The crossed module `(R·T -> heis3)` (center inclusion, trivial action)
//! presents the same stack as the plane `R^2 = heis3 / center`, but the
//! equivalence has no strict inverse: the projection admits no Lie-algebra
//! section. This example builds the functor `phi`, checks that it is an
//! essential equivalence, turns it into a bibundle `<phi>`, checks weak
//! invertibility, and computes the obstruction to a strict inverse.
//!
//! Run with: `cargo run --example heisenberg_morita`

use lie2kit::exactla::{add_vec, int, null_space, scale_vec, solve};
use lie2kit::{lie2, liealg};

fn main() {
    // The crossed module and its semidirect-product Lie 2-algebra.
    let cm = lie2::heis_cm();
    println!("crossed module:   {}", lie2::verify_crossed_module(&cm));
    let a = lie2::lie2_of_crossed_module(&cm).unwrap();
    println!(
        "semidirect model: V1 = {}-dim, V0 = {}-dim, {}",
        a.v1.dim(),
        a.v0.dim(),
        lie2::verify_lie2(&a)
    );

    // phi: (R -> heis3) -> (0 -> R^2) kills the center.
    let phi = lie2::heis_phi();
    println!("functor phi:      {}", lie2::verify_lie2_functor(&phi));
    let ess = lie2::functor_is_essential_equivalence(&phi).unwrap();
    println!("equivalence:      {ess}");

    // The bibundle <phi> and its weak invertibility.
    let pb = lie2::bundle_of_functor(&phi).unwrap().bundle;
    println!("bundle <phi>:     {}", lie2::verify_bibundle(&pb));
    let weak = lie2::is_weakly_invertible(&pb).unwrap();
    println!("weak inverse:     {weak}");

    // Why no strict inverse exists: a strict inverse functor would need a
    // Lie-algebra section of the projection pi = phi.f0. Any linear
    // section sigma has defect [sigma x, sigma y] - sigma [x, y]; the
    // defect is independent of sigma and equal to Z != 0.
    let heis = liealg::heis3();
    let pi = &phi.f0;
    let kernel = null_space(pi);
    let mut sigma = Vec::new();
    for j in 0..2 {
        let mut e = vec![int(0); 2];
        e[j] = int(1);
        sigma.push(solve(pi, &e).unwrap().unwrap().particular);
    }
    let defect = heis.bracket(&sigma[0], &sigma[1]);
    let pretty: Vec<String> = defect.iter().map(|x| x.to_string()).collect();
    println!(
        "section defect:   [sigma e1, sigma e2] = ({})  — the center generator Z",
        pretty.join(", ")
    );
    let perturbed = {
        let mut cols = sigma.clone();
        cols[0] = add_vec(&cols[0], &scale_vec(&int(5), &kernel.basis()[0]));
        heis.bracket(&cols[0], &cols[1])
    };
    assert_eq!(defect, perturbed);
    println!("                  unchanged under any other choice of section — no strict inverse exists");
}
