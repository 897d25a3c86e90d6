//! JSON interchange documents for every structure in the library.
//!
//! All scalars are serialized as exact rationals: canonical output writes
//! the string `"p"` or `"p/q"`; integers are also accepted on input.
//! Emission is byte-deterministic: struct fields serialize in declaration
//! order and derived bases (fiber products, composition domains) are
//! recomputed canonically on load instead of being stored.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::str::FromStr;

use crate::exactla::{Matrix, Scalar, Subspace};
use crate::fingpd::{FinBibundle, FinFunctor, FinGroupoid};
use crate::lie2::{CrossedModule, Lie2Algebra, Lie2Functor, LieBibundle, PairMap};
use crate::liealg::{LieAlgebra, LieHom};
use crate::twovect::{CocycleData, TwoTermComplex};
use num_bigint::BigInt;
use num_traits::One;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("document schema error: {0}")]
    Schema(String),
    #[error("document kind `{found}` cannot be used here (expected {expected})")]
    Kind {
        expected: &'static str,
        found: String,
    },
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

// ---------------------------------------------------------------------------
// Rational scalars
// ---------------------------------------------------------------------------

/// Exact rational in transport form: `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Scalar);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let s = if self.0.denom().is_one() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        };
        ser.serialize_str(&s)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(n) => Ok(Q(Scalar::from_integer(BigInt::from(n)))),
            Raw::Str(s) => {
                let mk = |p: &str, q: &str| -> Option<Scalar> {
                    let num = BigInt::from_str(p.trim()).ok()?;
                    let den = BigInt::from_str(q.trim()).ok()?;
                    if den == BigInt::from(0) {
                        return None;
                    }
                    Some(Scalar::new(num, den))
                };
                let parsed = match s.split_once('/') {
                    Some((p, q)) => mk(p, q),
                    None => mk(&s, "1"),
                };
                parsed
                    .map(Q)
                    .ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
            }
        }
    }
}

type Mat = Vec<Vec<Q>>;

fn mat_to(m: &Matrix) -> Mat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Q(m.at(i, j).clone())).collect())
        .collect()
}

/// Rebuild a matrix, validating the announced shape.
fn mat_from(v: &Mat, rows: usize, cols: usize, what: &str) -> Result<Matrix, Error> {
    if v.len() != rows || v.iter().any(|r| r.len() != cols) {
        return Err(schema(format!(
            "{what} must be a {rows}x{cols} matrix, got {}x{}",
            v.len(),
            v.first().map_or(0, |r| r.len())
        )));
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| v[i][j].0.clone()))
}

fn vecs_to(v: &[Vec<Scalar>]) -> Vec<Vec<Q>> {
    v.iter()
        .map(|row| row.iter().map(|x| Q(x.clone())).collect())
        .collect()
}

fn vecs_from(v: &[Vec<Q>], dim: usize, what: &str) -> Result<Vec<Vec<Scalar>>, Error> {
    v.iter()
        .map(|row| {
            if row.len() != dim {
                Err(schema(format!("{what} entries must have length {dim}")))
            } else {
                Ok(row.iter().map(|x| x.0.clone()).collect())
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Payload schemas
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieAlgebraDoc {
    pub basis: Vec<String>,
    /// `structure_constants[i][j]` is the coordinate vector of `[e_i, e_j]`.
    pub structure_constants: Vec<Vec<Vec<Q>>>,
}

impl LieAlgebraDoc {
    pub fn of(l: &LieAlgebra) -> Self {
        LieAlgebraDoc {
            basis: l.basis_names().to_vec(),
            structure_constants: l
                .structure_constants()
                .iter()
                .map(|row| vecs_to(row))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<LieAlgebra, Error> {
        let n = self.basis.len();
        if self.structure_constants.len() != n {
            return Err(schema("structure_constants must have one row per basis vector"));
        }
        let sc = self
            .structure_constants
            .iter()
            .map(|row| {
                if row.len() != n {
                    Err(schema("structure_constants rows must be square"))
                } else {
                    vecs_from(row, n, "structure constant")
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(LieAlgebra::new(self.basis.clone(), sc))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossedModuleDoc {
    pub m: LieAlgebraDoc,
    pub n: LieAlgebraDoc,
    pub del: Mat,
    pub action: Vec<Mat>,
}

impl CrossedModuleDoc {
    pub fn of(cm: &CrossedModule) -> Self {
        CrossedModuleDoc {
            m: LieAlgebraDoc::of(&cm.m),
            n: LieAlgebraDoc::of(&cm.n),
            del: mat_to(&cm.del.matrix),
            action: cm.action.iter().map(mat_to).collect(),
        }
    }

    pub fn build(&self) -> Result<CrossedModule, Error> {
        let m = self.m.build()?;
        let n = self.n.build()?;
        let del = mat_from(&self.del, n.dim(), m.dim(), "del")?;
        if self.action.len() != n.dim() {
            return Err(schema("action must have one matrix per n basis vector"));
        }
        let action = self
            .action
            .iter()
            .map(|a| mat_from(a, m.dim(), m.dim(), "action"))
            .collect::<Result<_, _>>()?;
        let del = LieHom::new(m.clone(), n.clone(), del)
            .map_err(|e| schema(e.to_string()))?;
        Ok(CrossedModule::new(m, n, del, action))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lie2AlgebraDoc {
    pub v1: LieAlgebraDoc,
    pub v0: LieAlgebraDoc,
    pub s: Mat,
    pub t: Mat,
    pub unit: Mat,
    /// Composition in the echelon basis of the canonical fiber product of
    /// `(s, t)`; the basis is recomputed on load.
    pub comp: Mat,
}

impl Lie2AlgebraDoc {
    pub fn of(a: &Lie2Algebra) -> Self {
        Lie2AlgebraDoc {
            v1: LieAlgebraDoc::of(&a.v1),
            v0: LieAlgebraDoc::of(&a.v0),
            s: mat_to(&a.s.matrix),
            t: mat_to(&a.t.matrix),
            unit: mat_to(&a.unit.matrix),
            comp: mat_to(&a.comp.matrix),
        }
    }

    pub fn build(&self) -> Result<Lie2Algebra, Error> {
        let v1 = self.v1.build()?;
        let v0 = self.v0.build()?;
        let (d1, d0) = (v1.dim(), v0.dim());
        let s = mat_from(&self.s, d0, d1, "s")?;
        let t = mat_from(&self.t, d0, d1, "t")?;
        let unit = mat_from(&self.unit, d1, d0, "unit")?;
        let domain = crate::exactla::pullback_space(&s, &t)
            .map_err(|e| schema(e.to_string()))?;
        let comp_matrix = mat_from(&self.comp, d1, domain.dim(), "comp")?;
        let mk = |src: &LieAlgebra, tgt: &LieAlgebra, m: Matrix| LieHom {
            source: src.clone(),
            target: tgt.clone(),
            matrix: m,
        };
        Ok(Lie2Algebra {
            s: mk(&v1, &v0, s),
            t: mk(&v1, &v0, t),
            unit: mk(&v0, &v1, unit),
            comp: PairMap {
                left_dim: d1,
                right_dim: d1,
                domain,
                matrix: comp_matrix,
            },
            v1,
            v0,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lie2FunctorDoc {
    pub source: Lie2AlgebraDoc,
    pub target: Lie2AlgebraDoc,
    pub f1: Mat,
    pub f0: Mat,
}

impl Lie2FunctorDoc {
    pub fn of(f: &Lie2Functor) -> Self {
        Lie2FunctorDoc {
            source: Lie2AlgebraDoc::of(&f.source),
            target: Lie2AlgebraDoc::of(&f.target),
            f1: mat_to(&f.f1),
            f0: mat_to(&f.f0),
        }
    }

    pub fn build(&self) -> Result<Lie2Functor, Error> {
        let source = self.source.build()?;
        let target = self.target.build()?;
        let f1 = mat_from(&self.f1, target.v1.dim(), source.v1.dim(), "f1")?;
        let f0 = mat_from(&self.f0, target.v0.dim(), source.v0.dim(), "f0")?;
        Ok(Lie2Functor {
            source,
            target,
            f1,
            f0,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieBibundleDoc {
    pub source: Lie2AlgebraDoc,
    pub target: Lie2AlgebraDoc,
    pub p: LieAlgebraDoc,
    pub a_l: Mat,
    pub a_r: Mat,
    /// Actions in the echelon bases of the canonical anchor fiber
    /// products, recomputed on load.
    pub act_l: Mat,
    pub act_r: Mat,
}

impl LieBibundleDoc {
    pub fn of(b: &LieBibundle) -> Self {
        LieBibundleDoc {
            source: Lie2AlgebraDoc::of(&b.source),
            target: Lie2AlgebraDoc::of(&b.target),
            p: LieAlgebraDoc::of(&b.p),
            a_l: mat_to(&b.a_l.matrix),
            a_r: mat_to(&b.a_r.matrix),
            act_l: mat_to(&b.act_l.matrix),
            act_r: mat_to(&b.act_r.matrix),
        }
    }

    pub fn build(&self) -> Result<LieBibundle, Error> {
        let source = self.source.build()?;
        let target = self.target.build()?;
        let p = self.p.build()?;
        let a_l = mat_from(&self.a_l, source.v0.dim(), p.dim(), "a_l")?;
        let a_r = mat_from(&self.a_r, target.v0.dim(), p.dim(), "a_r")?;
        let act_l_dom = crate::exactla::pullback_space(&source.s.matrix, &a_l)
            .map_err(|e| schema(e.to_string()))?;
        let act_r_dom = crate::exactla::pullback_space(&a_r, &target.t.matrix)
            .map_err(|e| schema(e.to_string()))?;
        let act_l = PairMap {
            left_dim: source.v1.dim(),
            right_dim: p.dim(),
            matrix: mat_from(&self.act_l, p.dim(), act_l_dom.dim(), "act_l")?,
            domain: act_l_dom,
        };
        let act_r = PairMap {
            left_dim: p.dim(),
            right_dim: target.v1.dim(),
            matrix: mat_from(&self.act_r, p.dim(), act_r_dom.dim(), "act_r")?,
            domain: act_r_dom,
        };
        let mk = |src: &LieAlgebra, tgt: &LieAlgebra, m: Matrix| LieHom {
            source: src.clone(),
            target: tgt.clone(),
            matrix: m,
        };
        Ok(LieBibundle {
            a_l: mk(&p, &source.v0, a_l),
            a_r: mk(&p, &target.v0, a_r),
            source,
            target,
            p,
            act_l,
            act_r,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinGroupoidDoc {
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub unit: Vec<usize>,
    pub inv: Vec<usize>,
    /// Triples `[g2, g1, g2 . g1]`, sorted.
    pub comp: Vec<[usize; 3]>,
}

impl FinGroupoidDoc {
    pub fn of(g: &FinGroupoid) -> Self {
        FinGroupoidDoc {
            objects: g.objects.clone(),
            arrows: g.arrows.clone(),
            s: g.s.clone(),
            t: g.t.clone(),
            unit: g.unit.clone(),
            inv: g.inv.clone(),
            comp: g.comp.iter().map(|(&(a, b), &c)| [a, b, c]).collect(),
        }
    }

    pub fn build(&self) -> Result<FinGroupoid, Error> {
        let mut comp = BTreeMap::new();
        for &[a, b, c] in &self.comp {
            if comp.insert((a, b), c).is_some() {
                return Err(schema(format!("duplicate composition entry ({a}, {b})")));
            }
        }
        FinGroupoid::new(
            self.objects.clone(),
            self.arrows.clone(),
            self.s.clone(),
            self.t.clone(),
            self.unit.clone(),
            self.inv.clone(),
            comp,
        )
        .map_err(|e| schema(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinFunctorDoc {
    pub source: FinGroupoidDoc,
    pub target: FinGroupoidDoc,
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl FinFunctorDoc {
    pub fn of(f: &FinFunctor) -> Self {
        FinFunctorDoc {
            source: FinGroupoidDoc::of(&f.source),
            target: FinGroupoidDoc::of(&f.target),
            on_objects: f.on_objects.clone(),
            on_arrows: f.on_arrows.clone(),
        }
    }

    pub fn build(&self) -> Result<FinFunctor, Error> {
        Ok(FinFunctor {
            source: self.source.build()?,
            target: self.target.build()?,
            on_objects: self.on_objects.clone(),
            on_arrows: self.on_arrows.clone(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinBibundleDoc {
    pub source: FinGroupoidDoc,
    pub target: FinGroupoidDoc,
    pub total: Vec<String>,
    pub a_l: Vec<usize>,
    pub a_r: Vec<usize>,
    /// Triples `[g, p, g . p]`, sorted.
    pub act_l: Vec<[usize; 3]>,
    /// Triples `[p, h, p . h]`, sorted.
    pub act_r: Vec<[usize; 3]>,
}

impl FinBibundleDoc {
    pub fn of(b: &FinBibundle) -> Self {
        FinBibundleDoc {
            source: FinGroupoidDoc::of(&b.source),
            target: FinGroupoidDoc::of(&b.target),
            total: b.total.clone(),
            a_l: b.a_l.clone(),
            a_r: b.a_r.clone(),
            act_l: b.act_l.iter().map(|(&(a, i), &j)| [a, i, j]).collect(),
            act_r: b.act_r.iter().map(|(&(i, a), &j)| [i, a, j]).collect(),
        }
    }

    pub fn build(&self) -> Result<FinBibundle, Error> {
        let to_map = |entries: &[[usize; 3]], what: &str| -> Result<BTreeMap<(usize, usize), usize>, Error> {
            let mut map = BTreeMap::new();
            for &[a, b, c] in entries {
                if map.insert((a, b), c).is_some() {
                    return Err(schema(format!("duplicate {what} entry ({a}, {b})")));
                }
            }
            Ok(map)
        };
        Ok(FinBibundle {
            source: self.source.build()?,
            target: self.target.build()?,
            total: self.total.clone(),
            a_l: self.a_l.clone(),
            a_r: self.a_r.clone(),
            act_l: to_map(&self.act_l, "left action")?,
            act_r: to_map(&self.act_r, "right action")?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub u_dim: usize,
    pub w_dim: usize,
    pub del: Mat,
    pub objects: Vec<Vec<Q>>,
    /// `morphisms[i][j]` is `u_ij`.
    pub morphisms: Vec<Vec<Vec<Q>>>,
    pub weights: Vec<Q>,
}

impl CocycleDoc {
    pub fn of(d: &CocycleData) -> Self {
        CocycleDoc {
            u_dim: d.complex.u_dim(),
            w_dim: d.complex.w_dim(),
            del: mat_to(d.complex.del()),
            objects: vecs_to(&d.objects),
            morphisms: d.morphism_vectors.iter().map(|row| vecs_to(row)).collect(),
            weights: d.weights.iter().map(|w| Q(w.clone())).collect(),
        }
    }

    pub fn build(&self) -> Result<CocycleData, Error> {
        let del = mat_from(&self.del, self.w_dim, self.u_dim, "del")?;
        let complex = TwoTermComplex::new(self.u_dim, self.w_dim, del);
        let s = self.objects.len();
        if self.morphisms.len() != s || self.weights.len() != s {
            return Err(schema(
                "objects, morphisms and weights must all have one entry per object",
            ));
        }
        let objects = vecs_from(&self.objects, self.w_dim, "object")?;
        let morphism_vectors = self
            .morphisms
            .iter()
            .map(|row| {
                if row.len() != s {
                    Err(schema("morphisms must form a square array"))
                } else {
                    vecs_from(row, self.u_dim, "morphism")
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(CocycleData {
            complex,
            objects,
            morphism_vectors,
            weights: self.weights.iter().map(|w| w.0.clone()).collect(),
        })
    }
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    LieAlgebra(LieAlgebraDoc),
    CrossedModule(CrossedModuleDoc),
    Lie2Algebra(Lie2AlgebraDoc),
    Lie2Functor(Lie2FunctorDoc),
    LieBibundle(LieBibundleDoc),
    FinGroupoid(FinGroupoidDoc),
    FinFunctor(FinFunctorDoc),
    FinBibundle(FinBibundleDoc),
    Cocycle(CocycleDoc),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::LieAlgebra(_) => "lie_algebra",
            Body::CrossedModule(_) => "crossed_module",
            Body::Lie2Algebra(_) => "lie2_algebra",
            Body::Lie2Functor(_) => "lie2_functor",
            Body::LieBibundle(_) => "lie_bibundle",
            Body::FinGroupoid(_) => "fin_groupoid",
            Body::FinFunctor(_) => "fin_functor",
            Body::FinBibundle(_) => "fin_bibundle",
            Body::Cocycle(_) => "cocycle",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub version: String,
    pub name: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(name: impl Into<String>, body: Body) -> Self {
        Document {
            version: FORMAT_VERSION.into(),
            name: name.into(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Recompute the canonical total-space embedding of a functor bundle
/// document produced by `bundle_of_functor` on the Lie side.
pub fn lie_bibundle_total_subspace(b: &LieBibundle) -> Result<Subspace, Error> {
    crate::exactla::pullback_space(&b.a_l.matrix, &b.a_r.matrix).map_err(|e| schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingpd;
    use crate::lie2;

    fn round_trip(doc: &Document) -> Document {
        let text = doc.to_json();
        let back = Document::from_json(&text).expect("parse");
        assert_eq!(text, back.to_json(), "round trip must be byte-identical");
        back
    }

    #[test]
    fn lie_algebra_round_trip() {
        let doc = Document::new("sl2", Body::LieAlgebra(LieAlgebraDoc::of(&crate::liealg::sl2())));
        let back = round_trip(&doc);
        let Body::LieAlgebra(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), crate::liealg::sl2());
    }

    #[test]
    fn crossed_module_round_trip() {
        let cm = lie2::heis_cm();
        let doc = Document::new("heisCM", Body::CrossedModule(CrossedModuleDoc::of(&cm)));
        let back = round_trip(&doc);
        let Body::CrossedModule(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), cm);
    }

    #[test]
    fn lie2_and_bundle_round_trip() {
        let a = lie2::lie2_of_crossed_module(&lie2::heis_cm()).unwrap();
        let doc = Document::new("heis2", Body::Lie2Algebra(Lie2AlgebraDoc::of(&a)));
        let back = round_trip(&doc);
        let Body::Lie2Algebra(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), a);

        let phi = lie2::heis_phi();
        let b = lie2::bundle_of_functor(&phi).unwrap().bundle;
        let doc = Document::new("phi_bundle", Body::LieBibundle(LieBibundleDoc::of(&b)));
        let back = round_trip(&doc);
        let Body::LieBibundle(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), b);
    }

    #[test]
    fn fin_round_trips() {
        let g = fingpd::codisc(&["a", "b"]);
        let doc = Document::new("codisc2", Body::FinGroupoid(FinGroupoidDoc::of(&g)));
        let back = round_trip(&doc);
        let Body::FinGroupoid(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), g);

        let (f, bundle) = fingpd::point_codisc_bundle();
        let doc = Document::new("inc", Body::FinFunctor(FinFunctorDoc::of(&f)));
        let back = round_trip(&doc);
        let Body::FinFunctor(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), f);

        let doc = Document::new("incB", Body::FinBibundle(FinBibundleDoc::of(&bundle.bundle)));
        let back = round_trip(&doc);
        let Body::FinBibundle(d) = back.body else { panic!() };
        assert_eq!(d.build().unwrap(), bundle.bundle);
    }

    #[test]
    fn cocycle_round_trip_with_fractions() {
        let d = crate::testgen::random_cocycle(&mut crate::testgen::rng(11), 4, 3);
        let doc = Document::new("coc", Body::Cocycle(CocycleDoc::of(&d)));
        let back = round_trip(&doc);
        let Body::Cocycle(c) = back.body else { panic!() };
        assert_eq!(c.build().unwrap(), d);
    }

    #[test]
    fn integer_scalars_accepted() {
        let q: Q = serde_json::from_str("3").unwrap();
        assert_eq!(q.0, crate::exactla::int(3));
        let q: Q = serde_json::from_str("\"-7/2\"").unwrap();
        assert_eq!(q.0, crate::exactla::rat(-7, 2));
        assert!(serde_json::from_str::<Q>("\"1/0\"").is_err());
    }

    #[test]
    fn shape_errors_are_schema_errors() {
        let d = LieAlgebraDoc {
            basis: vec!["x".into()],
            structure_constants: vec![],
        };
        assert!(matches!(d.build(), Err(Error::Schema(_))));
    }
}
