//! The JSON document layer shared with the `lie2kit` binary.
//!
//! Every structure serializes to a versioned `{version, name, kind,
//! payload}` envelope with exact rationals as `"p/q"` strings; see
//! `docs/format.md`. Serialization is byte-deterministic, so documents
//! round-trip identically — the CLI relies on this for its exit-code
//! contract.
//!
//! Run with: `cargo run --example json_documents`

use lie2kit::doc::{Body, CrossedModuleDoc, Document};
use lie2kit::lie2;

fn main() {
    let cm = lie2::heis_cm();
    let doc = Document::new("heis_cm", Body::CrossedModule(CrossedModuleDoc::of(&cm)));
    let json = doc.to_json();
    println!("{json}");

    // Round trip: bytes -> document -> bytes is the identity.
    let back = Document::from_json(&json).unwrap();
    assert_eq!(back.to_json(), json);
    println!("round trip: byte-identical");

    // And the reloaded payload rebuilds the verified structure.
    let Body::CrossedModule(d) = &back.body else { unreachable!() };
    let rebuilt = d.build().unwrap();
    println!("reloaded:  {}", lie2::verify_crossed_module(&rebuilt));

    // Malformed input is rejected with a position, which the CLI turns
    // into exit code 2.
    let truncated = &json[..json.len() / 2];
    let err = Document::from_json(truncated).unwrap_err();
    println!("truncated: line {}, column {}: {err}", err.line(), err.column());
}
