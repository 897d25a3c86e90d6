//! Acceptance gate: the eight release criteria, each printed as a single
//! pass/fail line. Every check is exact — no tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use lie2kit::doc::Document;
use lie2kit::exactla::{add_vec, int, is_zero_vec, null_space, solve, Subspace};
use lie2kit::twovect::{compose_cells, invert_cell, resolve_cocycle, verify_cocycle};
use lie2kit::{fingpd, lie2, liealg, testgen};
use std::path::{Path, PathBuf};
use std::process::Command;

fn gate(n: usize, desc: &str, result: Result<(), String>) {
    match &result {
        Ok(()) => println!("criterion {n} ({desc}): pass"),
        Err(e) => println!("criterion {n} ({desc}): FAIL — {e}"),
    }
    if let Err(e) = result {
        panic!("criterion {n} ({desc}) failed: {e}");
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------
// 1. Crossed-module Lemma suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_crossed_module_lemma() {
    gate(1, "crossed-module lemma suite", (|| {
        let heis = liealg::heis3();
        let z_span = Subspace::span(3, vec![vec![int(0), int(0), int(1)]]);
        let fixtures = vec![
            lie2::heis_cm(),
            lie2::ab_cm(),
            lie2::ad_cm(&liealg::sl2()),
            lie2::ad_cm(&heis),
            lie2::inclusion_cm(&heis, &z_span).map_err(|e| e.to_string())?,
        ];
        for (i, cm) in fixtures.iter().enumerate() {
            ensure(lie2::verify_crossed_module(cm).pass(), format!("fixture {i} fails"))?;
            let a = lie2::lie2_of_crossed_module(cm).map_err(|e| e.to_string())?;
            ensure(lie2::verify_lie2(&a).pass(), format!("semidirect of fixture {i} fails"))?;
        }
        let mut rng = testgen::rng(101);
        let mut corrupted = 0usize;
        for trial in 0..200 {
            let cm = testgen::random_crossed_module(&mut rng);
            let good = lie2::verify_crossed_module(&cm).pass();
            let a = lie2::lie2_of_crossed_module_unchecked(&cm);
            ensure(
                good == lie2::verify_lie2(&a).pass(),
                format!("trial {trial}: verdicts disagree on a genuine module"),
            )?;
            if let Some((bad, axiom)) = testgen::corrupt_crossed_module(&mut rng, &cm) {
                let report = lie2::verify_crossed_module(&bad);
                let named = report
                    .first_failure()
                    .ok_or(format!("trial {trial}: corruption not detected"))?;
                ensure(
                    named.id == axiom,
                    format!("trial {trial}: named {}, injected {axiom}", named.id),
                )?;
                let bad_a = lie2::lie2_of_crossed_module_unchecked(&bad);
                ensure(
                    !lie2::verify_lie2(&bad_a).pass(),
                    format!("trial {trial}: semidirect of corrupted module passes"),
                )?;
                corrupted += 1;
            }
        }
        ensure(corrupted >= 150, format!("only {corrupted} corrupted instances"))
    })());
}

// ---------------------------------------------------------------------------
// 2. Heisenberg Morita fixture
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_heisenberg_morita() {
    gate(2, "Heisenberg Morita fixture", (|| {
        let phi = lie2::heis_phi();
        let ess = lie2::functor_is_essential_equivalence(&phi).map_err(|e| e.to_string())?;
        ensure(ess.get("essentially_surjective").is_some_and(|c| c.pass), "not essentially surjective")?;
        ensure(ess.get("fully_faithful").is_some_and(|c| c.pass), "not fully faithful")?;

        let pb = lie2::bundle_of_functor(&phi).map_err(|e| e.to_string())?.bundle;
        let vb = lie2::verify_bibundle(&pb);
        ensure(vb.pass(), format!("<phi> fails verification: {vb}"))?;
        ensure(
            vb.derived.get("principality_dims") == Some(&serde_json::json!([3, 3])),
            format!("right principality map is not 3 -> 3: {:?}", vb.derived.get("principality_dims")),
        )?;
        let weak = lie2::is_weakly_invertible(&pb).map_err(|e| e.to_string())?;
        ensure(weak.pass(), format!("<phi> not weakly invertible: {weak}"))?;
        ensure(
            weak.derived.get("principality_dims") == Some(&serde_json::json!([4, 4])),
            format!("left principality map is not 4 -> 4: {:?}", weak.derived.get("principality_dims")),
        )?;

        // Section defect: a strict inverse would need a Lie-algebra section
        // of f0: heis3 -> ab2. Every linear section sigma has the same
        // defect [sigma x, sigma y] - sigma [x, y] = Z != 0.
        let heis = liealg::heis3();
        let pi = &phi.f0;
        let kernel = null_space(pi);
        ensure(kernel.dim() == 1, "kernel of the projection is not a line")?;
        let mut base_cols = Vec::new();
        for j in 0..2 {
            let mut e = vec![int(0); 2];
            e[j] = int(1);
            let sol = solve(pi, &e)
                .map_err(|e| e.to_string())?
                .ok_or("projection is not surjective")?;
            base_cols.push(sol.particular);
        }
        let defect = |cols: &[Vec<lie2kit::exactla::Scalar>]| heis.bracket(&cols[0], &cols[1]);
        let base_defect = defect(&base_cols);
        ensure(!is_zero_vec(&base_defect), "defect vanishes; a strict inverse would exist")?;
        ensure(kernel.contains(&base_defect), "defect is not central")?;
        // vary the section by every kernel perturbation of either column
        let k = kernel.basis()[0].clone();
        for col in 0..2 {
            for c in [-2i64, -1, 1, 3] {
                let mut cols = base_cols.clone();
                cols[col] = add_vec(&cols[col], &k.iter().map(|v| v * int(c)).collect::<Vec<_>>());
                ensure(
                    defect(&cols) == base_defect,
                    "defect depends on the choice of section",
                )?;
            }
        }
        Ok(())
    })());
}

// ---------------------------------------------------------------------------
// 3. Functoriality of <.>
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_bundle_functoriality() {
    gate(3, "functoriality of bundle-of-functor", (|| {
        // Lie 2-algebra side: 100 random chains g . f with witnesses.
        let mut rng = testgen::rng(303);
        for trial in 0..100 {
            let (f, g) = testgen::random_functor_chain(&mut rng);
            let bf = lie2::bundle_of_functor(&f).map_err(|e| e.to_string())?;
            let bg = lie2::bundle_of_functor(&g).map_err(|e| e.to_string())?;
            let gf = lie2::Lie2Functor::compose(&g, &f);
            let bgf = lie2::bundle_of_functor(&gf).map_err(|e| e.to_string())?;
            let comp = lie2::compose_bibundles(&bg.bundle, &bf.bundle).map_err(|e| e.to_string())?;
            let wit = lie2::witness_compose_functor_bundles(&g, &f, &bf, &bg, &bgf, &comp)
                .map_err(|e| e.to_string())?;
            let r = lie2::verify_bibundle_morphism(&comp.bundle, &bgf.bundle, &wit)
                .map_err(|e| e.to_string())?;
            ensure(r.pass(), format!("lie trial {trial}: witness fails: {r}"))?;

            // unit laws on <f>
            let left = lie2::compose_bibundles(&lie2::identity_bibundle(&f.target), &bf.bundle)
                .map_err(|e| e.to_string())?;
            let wl = lie2::witness_left_unit(&bf.bundle, &left).map_err(|e| e.to_string())?;
            ensure(
                lie2::verify_bibundle_morphism(&left.bundle, &bf.bundle, &wl)
                    .map_err(|e| e.to_string())?
                    .pass(),
                format!("lie trial {trial}: left unit law fails"),
            )?;
            let right = lie2::compose_bibundles(&bf.bundle, &lie2::identity_bibundle(&f.source))
                .map_err(|e| e.to_string())?;
            let wr = lie2::witness_right_unit(&bf.bundle, &right).map_err(|e| e.to_string())?;
            ensure(
                lie2::verify_bibundle_morphism(&right.bundle, &bf.bundle, &wr)
                    .map_err(|e| e.to_string())?
                    .pass(),
                format!("lie trial {trial}: right unit law fails"),
            )?;
        }

        // Finite side: 100 random chains with searched witnesses.
        let mut rng = testgen::rng(304);
        for trial in 0..100 {
            let g0 = testgen::random_groupoid(&mut rng, 4, 2);
            let h0 = testgen::random_groupoid(&mut rng, 4, 2);
            let k0 = testgen::random_groupoid(&mut rng, 4, 2);
            let f = testgen::random_functor(&mut rng, &g0, &h0);
            let g = testgen::random_functor(&mut rng, &h0, &k0);
            let bf = fingpd::bundle_of_functor(&f).map_err(|e| e.to_string())?.bundle;
            let bg = fingpd::bundle_of_functor(&g).map_err(|e| e.to_string())?.bundle;
            let gf = fingpd::FinFunctor::compose(&g, &f);
            let bgf = fingpd::bundle_of_functor(&gf).map_err(|e| e.to_string())?.bundle;
            let comp = fingpd::compose_bibundles(&bg, &bf).map_err(|e| e.to_string())?;
            let delta = fingpd::find_bibundle_iso(&comp, &bgf, None)
                .ok_or(format!("fin trial {trial}: no iso <g><f> -> <gf>"))?;
            ensure(
                fingpd::verify_bibundle_map(&comp, &bgf, &delta).pass(),
                format!("fin trial {trial}: witness fails"),
            )?;

            let idb = fingpd::bundle_of_functor(&fingpd::FinFunctor::identity(&f.target))
                .map_err(|e| e.to_string())?
                .bundle;
            let left = fingpd::compose_bibundles(&idb, &bf).map_err(|e| e.to_string())?;
            ensure(
                fingpd::find_bibundle_iso(&left, &bf, None).is_some(),
                format!("fin trial {trial}: left unit law fails"),
            )?;
            let ids = fingpd::bundle_of_functor(&fingpd::FinFunctor::identity(&f.source))
                .map_err(|e| e.to_string())?
                .bundle;
            let right = fingpd::compose_bibundles(&bf, &ids).map_err(|e| e.to_string())?;
            ensure(
                fingpd::find_bibundle_iso(&right, &bf, None).is_some(),
                format!("fin trial {trial}: right unit law fails"),
            )?;
        }
        Ok(())
    })());
}

// ---------------------------------------------------------------------------
// 4. Folklore-theorem round-trip
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_folklore_roundtrip() {
    gate(4, "natural transformations vs bundle isomorphisms", (|| {
        let family = vec![
            fingpd::pt_groupoid(),
            fingpd::cyclic(2),
            fingpd::cyclic(3),
            fingpd::disc(&["a", "b"]),
            fingpd::codisc(&["a", "b"]),
            fingpd::connected(&["a", "b"], 2),
            fingpd::codisc(&["a", "b", "c"]),
        ];
        for g in &family {
            ensure(g.n_objects() <= 3 && g.n_arrows() <= 12, "family member too large")?;
        }
        let mut pairs = 0usize;
        let mut nats = 0usize;
        for g in &family {
            for h in &family {
                let functors = testgen::enumerate_functors(g, h);
                for f in &functors {
                    let bf = fingpd::bundle_of_functor(f).map_err(|e| e.to_string())?;
                    for k in &functors {
                        let bk = fingpd::bundle_of_functor(k).map_err(|e| e.to_string())?;
                        pairs += 1;
                        for alpha in testgen::enumerate_nats(f, k) {
                            nats += 1;
                            let delta = fingpd::bundle_iso_of_nat(f, k, &bf, &bk, &alpha)
                                .map_err(|e| e.to_string())?;
                            ensure(
                                fingpd::verify_bibundle_map(&bf.bundle, &bk.bundle, &delta).pass(),
                                "induced bundle map is not an isomorphism",
                            )?;
                            let back = fingpd::nat_of_bundle_iso(f, k, &bf, &bk, &delta)
                                .map_err(|e| e.to_string())?;
                            ensure(back == alpha, "nat -> iso -> nat is not the identity")?;
                            let delta_again = fingpd::bundle_iso_of_nat(f, k, &bf, &bk, &back)
                                .map_err(|e| e.to_string())?;
                            ensure(delta_again == delta, "iso -> nat -> iso is not the identity")?;
                        }
                    }
                }
            }
        }
        ensure(pairs >= 100 && nats >= 100, format!("enumeration too small: {pairs} pairs, {nats} nats"))
    })());
}

// ---------------------------------------------------------------------------
// 5. Cocycle resolution
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_cocycle_resolution() {
    gate(5, "cocycle resolution lemma", (|| {
        let mut rng = testgen::rng(505);
        for trial in 0..100 {
            let d = testgen::random_cocycle(&mut rng, 6, 5);
            ensure(verify_cocycle(&d).pass(), format!("trial {trial}: cocycle invalid"))?;
            let z = resolve_cocycle(&d).map_err(|e| e.to_string())?;
            for i in 0..d.size() {
                for j in 0..d.size() {
                    let w = compose_cells(&d.complex, &z[i], &invert_cell(&d.complex, &z[j]))
                        .map_err(|e| e.to_string())?;
                    ensure(
                        w == d.w(i, j),
                        format!("trial {trial}: z_{i} z_{j}^-1 != w_{i}{j}"),
                    )?;
                }
            }
            let (bad, condition) = testgen::corrupt_cocycle(&mut rng, &d);
            let report = verify_cocycle(&bad);
            ensure(!report.pass(), format!("trial {trial}: corruption passes"))?;
            ensure(
                report.get(&condition).is_some_and(|c| !c.pass),
                format!("trial {trial}: expected {condition} to be cited"),
            )?;
            ensure(
                resolve_cocycle(&bad).is_err(),
                format!("trial {trial}: corrupted cocycle resolves"),
            )?;
        }
        Ok(())
    })());
}

// ---------------------------------------------------------------------------
// 6. Linking groupoid
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_linking_groupoid() {
    gate(6, "linking groupoid", (|| {
        // pt / codisc({a, b}) fixture: linking is codiscrete on 3 objects.
        let (_, fb) = fingpd::point_codisc_bundle();
        let link = fingpd::linking_groupoid(&fb.bundle).map_err(|e| e.to_string())?;
        let l = &link.groupoid;
        ensure(l.n_objects() == 3, format!("expected 3 objects, got {}", l.n_objects()))?;
        ensure(l.n_arrows() == 9, format!("expected 9 arrows, got {}", l.n_arrows()))?;
        ensure(fingpd::verify_groupoid(l).pass(), "linking groupoid invalid")?;
        for x in 0..3 {
            for y in 0..3 {
                ensure(l.hom(x, y).len() == 1, "linking groupoid is not codiscrete")?;
            }
        }

        // 50 random Morita equivalences.
        let mut rng = testgen::rng(606);
        for trial in 0..50 {
            let p = testgen::random_morita_bundle(&mut rng, 3, 3);
            let link = fingpd::linking_groupoid(&p).map_err(|e| e.to_string())?;
            ensure(
                fingpd::verify_groupoid(&link.groupoid).pass(),
                format!("trial {trial}: linking groupoid invalid"),
            )?;
            ensure(
                fingpd::is_essential_equivalence(&link.w_g).pass(),
                format!("trial {trial}: w_G not an essential equivalence"),
            )?;
            ensure(
                fingpd::is_essential_equivalence(&link.w_h).pass(),
                format!("trial {trial}: w_H not an essential equivalence"),
            )?;
            let bwg = fingpd::bundle_of_functor(&link.w_g).map_err(|e| e.to_string())?.bundle;
            let bwh = fingpd::bundle_of_functor(&link.w_h).map_err(|e| e.to_string())?.bundle;
            let comp = fingpd::compose_bibundles(&bwh, &p).map_err(|e| e.to_string())?;
            let delta = fingpd::find_bibundle_iso(&comp, &bwg, None)
                .ok_or(format!("trial {trial}: no iso <w_H> . P -> <w_G>"))?;
            ensure(
                fingpd::verify_bibundle_map(&comp, &bwg, &delta).pass(),
                format!("trial {trial}: witness fails"),
            )?;
        }
        Ok(())
    })());
}

// ---------------------------------------------------------------------------
// 7. Equivalence cross-check
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_equivalence_crosscheck() {
    gate(7, "biprincipality vs essential equivalence", (|| {
        let mut rng = testgen::rng(707);
        let mut equivalences = 0usize;
        for trial in 0..500 {
            let g = testgen::random_groupoid(&mut rng, 3, 3);
            let h = testgen::random_groupoid(&mut rng, 3, 3);
            let f = testgen::random_functor(&mut rng, &g, &h);
            let fb = fingpd::bundle_of_functor(&f).map_err(|e| e.to_string())?;
            let bip = fingpd::is_biprincipal(&fb.bundle);
            let ess = fingpd::is_essential_equivalence(&f).pass();
            ensure(bip == ess, format!("trial {trial}: biprincipal={bip}, essential={ess}"))?;
            if ess {
                equivalences += 1;
            }
        }
        ensure(equivalences >= 10, "family contains too few equivalences to be informative")
    })());
}

// ---------------------------------------------------------------------------
// 8. CLI closure
// ---------------------------------------------------------------------------

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn criterion_8_cli_closure() {
    gate(8, "CLI closure and corpus round-trip", (|| {
        let bin = env!("CARGO_BIN_EXE_lie2kit");
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let cases = [
            ("lie2-of-cm", "heis_cm.json"),
            ("lie2-of-cm", "ab_cm.json"),
            ("lie2-of-cm", "sl2_ad_cm.json"),
            ("cm-of-lie2", "heis_lie2.json"),
            ("bundle-of-functor", "heis_phi.json"),
            ("bundle-of-functor", "ab_identity_functor.json"),
            ("bundle-of-functor", "point_codisc_functor.json"),
            ("linking", "point_codisc_bundle.json"),
            ("linking", "morita_bundle.json"),
        ];
        for (i, (verb, input)) in cases.iter().enumerate() {
            let out = Command::new(bin)
                .args(["build", verb, fixture_dir().join(input).to_str().unwrap()])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(
                out.status.code() == Some(0),
                format!("build {verb} {input} exited {:?}", out.status.code()),
            )?;
            let path = dir.path().join(format!("built{i}.json"));
            std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
            let check = Command::new(bin)
                .args(["verify", path.to_str().unwrap()])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(
                check.status.code() == Some(0),
                format!("output of build {verb} {input} does not re-verify"),
            )?;
        }

        let mut corpus = 0usize;
        for entry in std::fs::read_dir(fixture_dir()).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.extension().is_none_or(|x| x != "json") {
                continue;
            }
            let bytes = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let doc = Document::from_json(&bytes).map_err(|e| e.to_string())?;
            ensure(
                doc.to_json() == bytes,
                format!("{} does not round-trip byte-identically", path.display()),
            )?;
            corpus += 1;
        }
        ensure(corpus >= 10, "fixture corpus unexpectedly small")
    })());
}
