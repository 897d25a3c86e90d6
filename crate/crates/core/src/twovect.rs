//! 2-vector spaces as 2-term complexes.
//!
//! A 2-term complex `del: U -> W` presents the action groupoid
//! `{U x W => W}` whose arrows are cells `(u, v): v -> v + del(u)`.
//! `complex_from_category` goes the other way: it extracts the complex and
//! the cell model from category data `(V1, V0, s, t, unit)`. The cocycle
//! resolution implements the coboundary trick `w_ij = z_i z_j^{-1}` for
//! weighted barycenters of objects.

use crate::exactla::{
    add_vec, is_zero_vec, null_space, scale_vec, sub_vec, zeros_vec, Matrix, Scalar, Subspace,
};
use crate::report::Report;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cells are not composable: outer source {outer_source:?} != inner target {inner_target:?}")]
    NotComposable {
        outer_source: Vec<String>,
        inner_target: Vec<String>,
    },
    #[error("unit is not a section of {map}: {map} . unit != id")]
    UnitNotSection { map: &'static str },
    #[error("cell has wrong shape for this complex: u len {u_len} (want {u_dim}), v len {v_len} (want {w_dim})")]
    CellShape {
        u_len: usize,
        v_len: usize,
        u_dim: usize,
        w_dim: usize,
    },
    #[error("invalid cocycle: {condition}")]
    InvalidCocycle { condition: String },
}

/// 2-term chain complex `del: U -> W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermComplex {
    u_dim: usize,
    w_dim: usize,
    del: Matrix,
}

impl TwoTermComplex {
    pub fn new(u_dim: usize, w_dim: usize, del: Matrix) -> Self {
        assert_eq!(del.rows(), w_dim);
        assert_eq!(del.cols(), u_dim);
        TwoTermComplex { u_dim, w_dim, del }
    }

    pub fn u_dim(&self) -> usize {
        self.u_dim
    }

    pub fn w_dim(&self) -> usize {
        self.w_dim
    }

    pub fn del(&self) -> &Matrix {
        &self.del
    }

    pub fn boundary(&self, u: &[Scalar]) -> Vec<Scalar> {
        self.del.apply(u)
    }

    fn check_cell(&self, c: &Cell) -> Result<(), Error> {
        if c.u.len() != self.u_dim || c.v.len() != self.w_dim {
            return Err(Error::CellShape {
                u_len: c.u.len(),
                v_len: c.v.len(),
                u_dim: self.u_dim,
                w_dim: self.w_dim,
            });
        }
        Ok(())
    }

    pub fn source(&self, c: &Cell) -> Vec<Scalar> {
        c.v.clone()
    }

    pub fn target(&self, c: &Cell) -> Vec<Scalar> {
        add_vec(&c.v, &self.boundary(&c.u))
    }

    pub fn identity_cell(&self, v: &[Scalar]) -> Cell {
        Cell {
            u: zeros_vec(self.u_dim),
            v: v.to_vec(),
        }
    }
}

/// Arrow `v -> v + del(u)` of the action groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
}

/// Composition `(u', v + del u)(u, v) = (u' + u, v)`, right to left.
pub fn compose_cells(cplx: &TwoTermComplex, c2: &Cell, c1: &Cell) -> Result<Cell, Error> {
    cplx.check_cell(c2)?;
    cplx.check_cell(c1)?;
    let t1 = cplx.target(c1);
    if c2.v != t1 {
        return Err(Error::NotComposable {
            outer_source: c2.v.iter().map(|x| x.to_string()).collect(),
            inner_target: t1.iter().map(|x| x.to_string()).collect(),
        });
    }
    Ok(Cell {
        u: add_vec(&c2.u, &c1.u),
        v: c1.v.clone(),
    })
}

/// Inverse `(u, v)^{-1} = (-u, v + del u)`.
pub fn invert_cell(cplx: &TwoTermComplex, c: &Cell) -> Cell {
    Cell {
        u: scale_vec(&-Scalar::one(), &c.u),
        v: cplx.target(c),
    }
}

/// A category in vector spaces presented as a 2-term complex plus the
/// isomorphism `V1 -> U + W` realizing its arrows as cells.
#[derive(Debug, Clone)]
pub struct CategoryComplex {
    pub complex: TwoTermComplex,
    /// Echelon basis of `ker s` inside `V1`; its coordinates are the `U`
    /// component of a cell.
    pub ker_s: Subspace,
    /// `w |-> (w - unit(s w), s w)` in cell coordinates; bijective.
    pub iso: Matrix,
    /// Inverse: `(a, v) |-> (ker basis) a + unit v`.
    pub iso_inv: Matrix,
}

impl CategoryComplex {
    pub fn to_cell(&self, w: &[Scalar]) -> Cell {
        let y = self.iso.apply(w);
        Cell {
            u: y[..self.complex.u_dim()].to_vec(),
            v: y[self.complex.u_dim()..].to_vec(),
        }
    }

    pub fn from_cell(&self, c: &Cell) -> Vec<Scalar> {
        let mut y = c.u.clone();
        y.extend_from_slice(&c.v);
        self.iso_inv.apply(&y)
    }
}

/// Extract the 2-term complex `del = t|_{ker s}` and the cell-model
/// isomorphism from category data. `unit` must be a section of both `s`
/// and `t`.
pub fn complex_from_category(
    v1_dim: usize,
    v0_dim: usize,
    s: &Matrix,
    t: &Matrix,
    unit: &Matrix,
) -> Result<CategoryComplex, Error> {
    assert_eq!((s.rows(), s.cols()), (v0_dim, v1_dim));
    assert_eq!((t.rows(), t.cols()), (v0_dim, v1_dim));
    assert_eq!((unit.rows(), unit.cols()), (v1_dim, v0_dim));
    if s.mul(unit) != Matrix::identity(v0_dim) {
        return Err(Error::UnitNotSection { map: "s" });
    }
    if t.mul(unit) != Matrix::identity(v0_dim) {
        return Err(Error::UnitNotSection { map: "t" });
    }
    let ker_s = null_space(s);
    let u_dim = ker_s.dim();
    let del = t.mul(&ker_s.basis_cols());
    let complex = TwoTermComplex::new(u_dim, v0_dim, del);

    // f(w) = (coords of w - unit(s w) in the kernel basis, s w)
    let proj_ker = Matrix::identity(v1_dim).sub(&unit.mul(s));
    let mut u_rows = Vec::with_capacity(u_dim);
    {
        // coordinates in an echelon basis are just the pivot entries
        let mut coord = Matrix::zeros(u_dim, v1_dim);
        for (r, &p) in ker_s.pivots().iter().enumerate() {
            coord.set(r, p, Scalar::one());
        }
        let m = coord.mul(&proj_ker);
        for r in 0..u_dim {
            u_rows.push(m.row(r));
        }
    }
    let mut rows = u_rows;
    rows.extend((0..v0_dim).map(|r| s.row(r)));
    let iso = Matrix::from_rows(rows);
    let iso_inv = ker_s.basis_cols().hstack(unit);
    assert_eq!(iso.mul(&iso_inv), Matrix::identity(u_dim + v0_dim));
    assert_eq!(iso_inv.mul(&iso), Matrix::identity(v1_dim));
    Ok(CategoryComplex {
        complex,
        ker_s,
        iso,
        iso_inv,
    })
}

/// Objects `v_1..v_s`, cocycle vectors `u[i][j]` (so `w_ij = (u_ij, v_j)`)
/// and barycentric weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleData {
    pub complex: TwoTermComplex,
    pub objects: Vec<Vec<Scalar>>,
    pub morphism_vectors: Vec<Vec<Vec<Scalar>>>,
    pub weights: Vec<Scalar>,
}

impl CocycleData {
    pub fn size(&self) -> usize {
        self.objects.len()
    }

    /// The cocycle arrow `w_ij: v_j -> v_i` as a cell.
    pub fn w(&self, i: usize, j: usize) -> Cell {
        Cell {
            u: self.morphism_vectors[i][j].clone(),
            v: self.objects[j].clone(),
        }
    }
}

/// Cocycle conditions plus the boundary constraint `del u_ij = v_i - v_j`
/// and `sum of weights = 1`, all exact. The report also notes whether the
/// weights stay in `[0,1]` (they are allowed not to).
pub fn verify_cocycle(d: &CocycleData) -> Report {
    let mut report = Report::new("cocycle");
    let s = d.size();
    report.derive("objects", s);

    let shapes_ok = d.weights.len() == s
        && d.morphism_vectors.len() == s
        && d.morphism_vectors.iter().all(|row| row.len() == s)
        && d.objects.iter().all(|v| v.len() == d.complex.w_dim())
        && d
            .morphism_vectors
            .iter()
            .flatten()
            .all(|u| u.len() == d.complex.u_dim());
    report.check(
        "shapes",
        shapes_ok,
        Some("object, morphism or weight arrays have inconsistent sizes".into()),
    );
    if !shapes_ok {
        return report;
    }

    let sum: Scalar = d.weights.iter().fold(Scalar::zero(), |a, b| a + b);
    report.check(
        "weights_sum_to_one",
        sum == Scalar::one(),
        Some(format!("sum of weights is {sum}")),
    );
    report.derive(
        "weights_in_unit_interval",
        d.weights
            .iter()
            .all(|l| *l >= Scalar::zero() && *l <= Scalar::one()),
    );

    let mut diag = None;
    for i in 0..s {
        if !is_zero_vec(&d.morphism_vectors[i][i]) {
            diag = Some(i);
            break;
        }
    }
    report.check(
        "w_ii_is_identity",
        diag.is_none(),
        diag.map(|i| format!("u[{i}][{i}] != 0")),
    );

    let mut anti = None;
    'anti: for i in 0..s {
        for j in 0..s {
            if !is_zero_vec(&add_vec(&d.morphism_vectors[j][i], &d.morphism_vectors[i][j])) {
                anti = Some((i, j));
                break 'anti;
            }
        }
    }
    report.check(
        "w_ji_is_inverse",
        anti.is_none(),
        anti.map(|(i, j)| format!("u[{j}][{i}] != -u[{i}][{j}]")),
    );

    let mut coc = None;
    'coc: for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let lhs = sub_vec(&d.morphism_vectors[i][k], &d.morphism_vectors[j][k]);
                if lhs != d.morphism_vectors[i][j] {
                    coc = Some((i, j, k));
                    break 'coc;
                }
            }
        }
    }
    report.check(
        "cocycle_identity",
        coc.is_none(),
        coc.map(|(i, j, k)| format!("u[{i}][{k}] - u[{j}][{k}] != u[{i}][{j}]")),
    );

    let mut bd = None;
    'bd: for i in 0..s {
        for j in 0..s {
            let lhs = d.complex.boundary(&d.morphism_vectors[i][j]);
            if lhs != sub_vec(&d.objects[i], &d.objects[j]) {
                bd = Some((i, j));
                break 'bd;
            }
        }
    }
    report.check(
        "boundary_matches_objects",
        bd.is_none(),
        bd.map(|(i, j)| format!("del u[{i}][{j}] != v_{} - v_{}", i + 1, j + 1)),
    );
    report
}

/// Resolve a cocycle: produce cells `z_i` from the weighted barycenter to
/// `v_i` with `w_ij = z_i z_j^{-1}` for all `i, j`.
pub fn resolve_cocycle(d: &CocycleData) -> Result<Vec<Cell>, Error> {
    let report = verify_cocycle(d);
    if let Some(failed) = report.first_failure() {
        return Err(Error::InvalidCocycle {
            condition: match &failed.detail {
                Some(detail) => format!("{} ({detail})", failed.id),
                None => failed.id.clone(),
            },
        });
    }
    let s = d.size();
    let barycenter = d
        .objects
        .iter()
        .zip(&d.weights)
        .fold(zeros_vec(d.complex.w_dim()), |acc, (v, l)| {
            add_vec(&acc, &scale_vec(l, v))
        });
    Ok((0..s)
        .map(|i| {
            let u = d
                .morphism_vectors[i]
                .iter()
                .zip(&d.weights)
                .fold(zeros_vec(d.complex.u_dim()), |acc, (uik, l)| {
                    add_vec(&acc, &scale_vec(l, uik))
                });
            Cell {
                u,
                v: barycenter.clone(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, rat};

    fn line() -> TwoTermComplex {
        TwoTermComplex::new(1, 1, Matrix::identity(1))
    }

    /// The two-object fixture: del: R -> R^2, del(u) = (u, 0).
    fn two_object_cocycle() -> CocycleData {
        CocycleData {
            complex: TwoTermComplex::new(1, 2, Matrix::from_i64(&[&[1], &[0]])),
            objects: vec![vec![int(0), int(0)], vec![int(1), int(0)]],
            morphism_vectors: vec![
                vec![vec![int(0)], vec![int(-1)]],
                vec![vec![int(1)], vec![int(0)]],
            ],
            weights: vec![rat(1, 2), rat(1, 2)],
        }
    }

    #[test]
    fn compose_identity_on_target() {
        let c = line();
        let c1 = Cell { u: vec![int(2)], v: vec![int(0)] };
        let id_t = c.identity_cell(&c.target(&c1));
        assert_eq!(compose_cells(&c, &id_t, &c1).unwrap(), c1);
    }

    #[test]
    fn compose_formula() {
        let c = line();
        let c1 = Cell { u: vec![int(2)], v: vec![int(0)] };
        let c2 = Cell { u: vec![int(3)], v: vec![int(2)] };
        assert_eq!(
            compose_cells(&c, &c2, &c1).unwrap(),
            Cell { u: vec![int(5)], v: vec![int(0)] }
        );
    }

    #[test]
    fn compose_rejects_mismatch() {
        let c = line();
        let c1 = Cell { u: vec![int(2)], v: vec![int(0)] };
        let c2 = Cell { u: vec![int(3)], v: vec![int(1)] };
        assert!(matches!(
            compose_cells(&c, &c2, &c1),
            Err(Error::NotComposable { .. })
        ));
    }

    #[test]
    fn invert_cell_laws() {
        let c = line();
        let id = c.identity_cell(&[int(7)]);
        assert_eq!(invert_cell(&c, &id), id);
        let cell = Cell { u: vec![int(2)], v: vec![int(0)] };
        assert_eq!(
            invert_cell(&c, &cell),
            Cell { u: vec![int(-2)], v: vec![int(2)] }
        );
        assert_eq!(invert_cell(&c, &invert_cell(&c, &cell)), cell);
        let inv = invert_cell(&c, &cell);
        assert_eq!(
            compose_cells(&c, &inv, &cell).unwrap(),
            c.identity_cell(&cell.v)
        );
    }

    #[test]
    fn complex_from_discrete_category() {
        let id = Matrix::identity(1);
        let cc = complex_from_category(1, 1, &id, &id, &id).unwrap();
        assert_eq!(cc.complex.u_dim(), 0);
        assert_eq!(cc.complex.w_dim(), 1);
        assert_eq!(cc.iso, Matrix::identity(1));
    }

    #[test]
    fn complex_from_interval_category() {
        // V1 = R^2, V0 = R, s = (1 0), t = (1 1), unit = (1, 0)^T
        let s = Matrix::from_i64(&[&[1, 0]]);
        let t = Matrix::from_i64(&[&[1, 1]]);
        let unit = Matrix::from_i64(&[&[1], &[0]]);
        let cc = complex_from_category(2, 1, &s, &t, &unit).unwrap();
        assert_eq!(cc.complex.u_dim(), 1);
        assert_eq!(cc.complex.del(), &Matrix::identity(1));
        assert!(cc.ker_s.contains(&[int(0), int(1)]));
    }

    #[test]
    fn complex_rejects_bad_unit() {
        let s = Matrix::from_i64(&[&[1, 0]]);
        let t = Matrix::from_i64(&[&[1, 1]]);
        let unit = Matrix::from_i64(&[&[0], &[1]]);
        assert!(matches!(
            complex_from_category(2, 1, &s, &t, &unit),
            Err(Error::UnitNotSection { map: "s" })
        ));
    }

    #[test]
    fn iso_transports_composition() {
        // action category of del = id: R -> R, arrows (u, v) stacked in R^2
        let s = Matrix::from_i64(&[&[0, 1]]);
        let t = Matrix::from_i64(&[&[1, 1]]);
        let unit = Matrix::from_i64(&[&[0], &[1]]);
        let cc = complex_from_category(2, 1, &s, &t, &unit).unwrap();
        // arrows a = (2, 0), b = (3, 2) in (u, v) coordinates of V1
        let a = vec![int(2), int(0)];
        let b = vec![int(3), int(2)];
        let (ca, cb) = (cc.to_cell(&a), cc.to_cell(&b));
        let composed = compose_cells(&cc.complex, &cb, &ca).unwrap();
        // the ambient composition in the action category is (u'+u, v)
        let ambient = vec![int(5), int(0)];
        assert_eq!(cc.from_cell(&composed), ambient);
    }

    #[test]
    fn verify_two_object_cocycle() {
        let d = two_object_cocycle();
        let report = verify_cocycle(&d);
        assert!(report.pass(), "{report}");
        assert_eq!(
            report.derived.get("weights_in_unit_interval"),
            Some(&serde_json::Value::Bool(true))
        );
    }

    #[test]
    fn verify_single_object() {
        let d = CocycleData {
            complex: line(),
            objects: vec![vec![int(4)]],
            morphism_vectors: vec![vec![vec![int(0)]]],
            weights: vec![int(1)],
        };
        assert!(verify_cocycle(&d).pass());
        let z = resolve_cocycle(&d).unwrap();
        assert_eq!(z, vec![d.complex.identity_cell(&[int(4)])]);
    }

    #[test]
    fn verify_rejects_broken_antisymmetry() {
        let mut d = two_object_cocycle();
        d.morphism_vectors[1][0] = vec![int(2)];
        let report = verify_cocycle(&d);
        assert!(!report.pass());
        assert!(!report.get("w_ji_is_inverse").unwrap().pass);
        assert!(matches!(
            resolve_cocycle(&d),
            Err(Error::InvalidCocycle { .. })
        ));
    }

    #[test]
    fn resolve_two_object_fixture() {
        let d = two_object_cocycle();
        let z = resolve_cocycle(&d).unwrap();
        assert_eq!(
            z[0],
            Cell { u: vec![rat(-1, 2)], v: vec![rat(1, 2), int(0)] }
        );
        assert_eq!(
            z[1],
            Cell { u: vec![rat(1, 2)], v: vec![rat(1, 2), int(0)] }
        );
        // z1 z2^{-1} = w_12 = (-1, (1, 0))
        let w12 = compose_cells(&d.complex, &z[0], &invert_cell(&d.complex, &z[1])).unwrap();
        assert_eq!(w12, d.w(0, 1));
    }

    #[test]
    fn resolve_degenerate_weights() {
        let mut d = two_object_cocycle();
        d.weights = vec![int(1), int(0)];
        let z = resolve_cocycle(&d).unwrap();
        assert_eq!(z[0], d.complex.identity_cell(&d.objects[0]));
        assert_eq!(d.complex.target(&z[1]), d.objects[1]);
        for i in 0..2 {
            for j in 0..2 {
                let w = compose_cells(&d.complex, &z[i], &invert_cell(&d.complex, &z[j])).unwrap();
                assert_eq!(w, d.w(i, j));
            }
        }
    }

    #[test]
    fn resolve_rejects_bad_weights() {
        let mut d = two_object_cocycle();
        d.weights = vec![rat(1, 2), rat(1, 3)];
        match resolve_cocycle(&d) {
            Err(Error::InvalidCocycle { condition }) => {
                assert!(condition.contains("weights_sum_to_one"));
            }
            other => panic!("expected invalid cocycle, got {other:?}"),
        }
    }
}
