use lie2kit::doc::{
    Body, CocycleDoc, CrossedModuleDoc, Document, FinBibundleDoc, FinFunctorDoc, FinGroupoidDoc,
    LieAlgebraDoc, LieBibundleDoc, Lie2AlgebraDoc, Lie2FunctorDoc,
};
use lie2kit::exactla::Matrix;
use lie2kit::twovect::{CocycleData, TwoTermComplex};
use lie2kit::{fingpd, lie2, liealg, testgen};
use num_rational::BigRational;
use num_bigint::BigInt;
use std::path::Path;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Regenerates the fixture corpus into a scratch directory and checks it
/// is byte-identical to the committed one. Set `REGEN_FIXTURES=1` to
/// rewrite the committed corpus instead.
#[test]
fn fixtures_are_current() {
    let committed = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let scratch = tempfile::tempdir().unwrap();
    let dir = if std::env::var_os("REGEN_FIXTURES").is_some() {
        committed.clone()
    } else {
        scratch.path().to_path_buf()
    };
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, doc: Document| {
        std::fs::write(dir.join(name), doc.to_json()).unwrap();
    };

    write(
        "heis3.json",
        Document::new("heis3", Body::LieAlgebra(LieAlgebraDoc::of(&liealg::heis3()))),
    );
    write(
        "heis_cm.json",
        Document::new("heis_cm", Body::CrossedModule(CrossedModuleDoc::of(&lie2::heis_cm()))),
    );
    write(
        "ab_cm.json",
        Document::new("ab_cm", Body::CrossedModule(CrossedModuleDoc::of(&lie2::ab_cm()))),
    );
    let sl2_ad = lie2::ad_cm(&liealg::sl2());
    write(
        "sl2_ad_cm.json",
        Document::new("sl2_ad_cm", Body::CrossedModule(CrossedModuleDoc::of(&sl2_ad))),
    );
    let mut rng = testgen::rng(7);
    let (bad, check) = testgen::corrupt_crossed_module(&mut rng, &sl2_ad).unwrap();
    eprintln!("sl2_cm_bad first failing check: {check}");
    write(
        "sl2_cm_bad.json",
        Document::new("sl2_cm_bad", Body::CrossedModule(CrossedModuleDoc::of(&bad))),
    );
    let heis_lie2 = lie2::lie2_of_crossed_module(&lie2::heis_cm()).unwrap();
    write(
        "heis_lie2.json",
        Document::new("heis_lie2", Body::Lie2Algebra(Lie2AlgebraDoc::of(&heis_lie2))),
    );
    let phi = lie2::heis_phi();
    write(
        "heis_phi.json",
        Document::new("heis_phi", Body::Lie2Functor(Lie2FunctorDoc::of(&phi))),
    );
    let phi_bundle = lie2::bundle_of_functor(&phi).unwrap();
    write(
        "heis_phi_bundle.json",
        Document::new(
            "heis_phi_bundle",
            Body::LieBibundle(LieBibundleDoc::of(&phi_bundle.bundle)),
        ),
    );
    let ident = lie2::identity_bibundle(&heis_lie2);
    write(
        "heis_identity_bundle.json",
        Document::new(
            "heis_identity_bundle",
            Body::LieBibundle(LieBibundleDoc::of(&ident)),
        ),
    );

    let ab_lie2 = lie2::lie2_of_crossed_module(&lie2::ab_cm()).unwrap();
    write(
        "ab_identity_functor.json",
        Document::new(
            "ab_identity_functor",
            Body::Lie2Functor(Lie2FunctorDoc::of(&lie2::Lie2Functor::identity(&ab_lie2))),
        ),
    );
    write(
        "ab_identity_bundle.json",
        Document::new(
            "ab_identity_bundle",
            Body::LieBibundle(LieBibundleDoc::of(&lie2::identity_bibundle(&ab_lie2))),
        ),
    );

    write(
        "pt_groupoid.json",
        Document::new("pt_groupoid", Body::FinGroupoid(FinGroupoidDoc::of(&fingpd::pt_groupoid()))),
    );
    write(
        "codisc3.json",
        Document::new(
            "codisc3",
            Body::FinGroupoid(FinGroupoidDoc::of(&fingpd::codisc(&["a", "b", "c"]))),
        ),
    );
    let (f, fb) = fingpd::point_codisc_bundle();
    write(
        "point_codisc_functor.json",
        Document::new("point_codisc_functor", Body::FinFunctor(FinFunctorDoc::of(&f))),
    );
    write(
        "point_codisc_bundle.json",
        Document::new(
            "point_codisc_bundle",
            Body::FinBibundle(FinBibundleDoc::of(&fb.bundle)),
        ),
    );
    let mut rng2 = testgen::rng(11);
    let morita = testgen::random_morita_bundle(&mut rng2, 3, 3);
    write(
        "morita_bundle.json",
        Document::new("morita_bundle", Body::FinBibundle(FinBibundleDoc::of(&morita))),
    );

    let cocycle = CocycleData {
        complex: TwoTermComplex::new(1, 2, Matrix::from_i64(&[&[1], &[0]])),
        objects: vec![vec![int(0), int(0)], vec![int(1), int(0)]],
        morphism_vectors: vec![
            vec![vec![int(0)], vec![int(-1)]],
            vec![vec![int(1)], vec![int(0)]],
        ],
        weights: vec![rat(1, 2), rat(1, 2)],
    };
    write(
        "cocycle_two_object.json",
        Document::new("cocycle_two_object", Body::Cocycle(CocycleDoc::of(&cocycle))),
    );
    let mut bad_cocycle = cocycle.clone();
    bad_cocycle.weights = vec![rat(1, 2), rat(1, 3)];
    write(
        "cocycle_bad_weights.json",
        Document::new(
            "cocycle_bad_weights",
            Body::Cocycle(CocycleDoc::of(&bad_cocycle)),
        ),
    );

    // deliberately malformed inputs for the exit-code contract
    std::fs::write(
        dir.join("truncated.json.broken"),
        "{\n  \"version\": \"1\",\n  \"name\": \"broken\",\n  \"kind\": \"lie_algebra\"",
    )
    .unwrap();

    let _ = liealg::verify_lie_algebra(&liealg::heis3());

    if dir != committed {
        let mut names: Vec<_> = std::fs::read_dir(&committed)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        let mut fresh: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        fresh.sort();
        assert_eq!(names, fresh, "fixture file lists differ");
        for name in names {
            let a = std::fs::read(committed.join(&name)).unwrap();
            let b = std::fs::read(dir.join(&name)).unwrap();
            assert_eq!(a, b, "fixture {name:?} is stale; rerun with REGEN_FIXTURES=1");
        }
    }
}
