//! Finite groupoid calculus: groupoids, functors, bibundles.
//!
//! Finite groupoids stand in for Lie groupoids: every structure map is a
//! finite table and every property is decidable. This example builds a
//! few groupoids, turns a functor into its bibundle, and shows that
//! biprincipality of the bundle detects exactly the essential
//! equivalences.
//!
//! Run with: `cargo run --example groupoid_calculus`

use lie2kit::{fingpd, testgen};

fn main() {
    // The codiscrete groupoid on {a, b}: one arrow between any two objects.
    let codisc = fingpd::codisc(&["a", "b"]);
    println!(
        "codisc(a,b): {} objects, {} arrows — {}",
        codisc.n_objects(),
        codisc.n_arrows(),
        fingpd::verify_groupoid(&codisc)
    );

    // Inclusion of the point: an essential equivalence (codisc is
    // connected with trivial isotropy), so its bundle is biprincipal.
    let (f, fb) = fingpd::point_codisc_bundle();
    println!("point inclusion: {}", fingpd::verify_functor(&f));
    println!("its bundle:      {}", fingpd::verify_bibundle(&fb.bundle));
    println!("biprincipality:  {}", fingpd::biprincipality_report(&fb.bundle));
    assert!(fingpd::is_biprincipal(&fb.bundle));
    assert!(fingpd::is_essential_equivalence(&f).pass());

    // A non-equivalence: include the point into two disjoint points.
    let two = fingpd::disc(&["a", "b"]);
    let partial = fingpd::FinFunctor {
        source: fingpd::pt_groupoid(),
        target: two,
        on_objects: vec![0],
        on_arrows: vec![0],
    };
    let pb = fingpd::bundle_of_functor(&partial).unwrap().bundle;
    println!(
        "point -> (pt ⊔ pt): essential equivalence = {}, biprincipal = {}",
        fingpd::is_essential_equivalence(&partial).pass(),
        fingpd::is_biprincipal(&pb)
    );
    assert!(!fingpd::is_biprincipal(&pb));

    // The agreement is not an accident — it holds for random functors too.
    let mut rng = testgen::rng(7);
    let mut agreements = 0;
    for _ in 0..50 {
        let g = testgen::random_groupoid(&mut rng, 3, 3);
        let h = testgen::random_groupoid(&mut rng, 3, 3);
        let f = testgen::random_functor(&mut rng, &g, &h);
        let fb = fingpd::bundle_of_functor(&f).unwrap();
        assert_eq!(
            fingpd::is_biprincipal(&fb.bundle),
            fingpd::is_essential_equivalence(&f).pass()
        );
        agreements += 1;
    }
    println!("{agreements}/50 random functors: biprincipality == essential equivalence");
}
