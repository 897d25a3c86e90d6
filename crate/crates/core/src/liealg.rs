//! Finite-dimensional Lie algebras over the rationals, presented by
//! structure constants, together with the constructions the higher modules
//! consume: derivation algebras, fiber products, quotients, centers.

use crate::exactla::{
    self, add_vec, concat_vec, int, is_zero_vec, null_space, pullback_space, scale_vec,
    zeros_vec, Matrix, Scalar, Subspace,
};
use crate::report::Report;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("homomorphism matrix must be {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    HomShape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("maps do not share a target: dimensions {left} and {right}")]
    TargetMismatch { left: usize, right: usize },
    #[error("not an ideal: bracket of basis vector {i} with ideal vector {j} leaves the subspace")]
    NotAnIdeal { i: usize, j: usize },
    #[error("subspace is not closed under the bracket: basis pair ({i}, {j})")]
    NotClosed { i: usize, j: usize },
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error(transparent)]
    LinAlg(#[from] exactla::Error),
}

/// Finite-dimensional Lie algebra given by structure constants:
/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    basis_names: Vec<String>,
    sc: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    pub fn new(basis_names: Vec<String>, sc: Vec<Vec<Vec<Scalar>>>) -> Self {
        let n = basis_names.len();
        assert_eq!(sc.len(), n);
        assert!(sc.iter().all(|p| p.len() == n && p.iter().all(|v| v.len() == n)));
        LieAlgebra { basis_names, sc }
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("e{}", i + 1)).collect();
        LieAlgebra::new(names, vec![vec![zeros_vec(dim); dim]; dim])
    }

    /// Build from a list of nonzero brackets `(i, j, coords)`; antisymmetric
    /// counterparts are filled in automatically.
    pub fn from_brackets(
        basis_names: Vec<String>,
        brackets: &[(usize, usize, Vec<Scalar>)],
    ) -> Self {
        let n = basis_names.len();
        let mut sc = vec![vec![zeros_vec(n); n]; n];
        for (i, j, v) in brackets {
            sc[*i][*j] = v.clone();
            sc[*j][*i] = scale_vec(&-Scalar::one(), v);
        }
        LieAlgebra::new(basis_names, sc)
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn structure_constants(&self) -> &Vec<Vec<Vec<Scalar>>> {
        &self.sc
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.sc[i][j]
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut out = zeros_vec(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                out = add_vec(&out, &scale_vec(&c, &self.sc[i][j]));
            }
        }
        out
    }

    /// Matrix of `ad(x) = [x, -]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let mut e = zeros_vec(n);
                e[j] = Scalar::one();
                self.bracket(x, &e)
            })
            .collect();
        Matrix::from_cols(cols)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut e = zeros_vec(self.dim());
        e[i] = Scalar::one();
        e
    }
}

/// Antisymmetry and Jacobi, reported with the first violated identity.
pub fn verify_lie_algebra(l: &LieAlgebra) -> Report {
    let n = l.dim();
    let mut report = Report::new("lie_algebra");
    report.derive("dim", n);

    let mut anti = None;
    'anti: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if &l.sc[i][j][k] + &l.sc[j][i][k] != Scalar::zero() {
                    anti = Some((i, j, k));
                    break 'anti;
                }
            }
        }
    }
    match anti {
        None => report.ok("antisymmetry"),
        Some((i, j, k)) => report.fail(
            "antisymmetry",
            format!(
                "c[{i}][{j}][{k}] + c[{j}][{i}][{k}] != 0 (basis {}, {})",
                l.basis_names[i], l.basis_names[j]
            ),
        ),
    }

    let mut jac = None;
    'jac: for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let ei = l.basis_vector(i);
                let ej = l.basis_vector(j);
                let ek = l.basis_vector(k);
                let cyc = add_vec(
                    &l.bracket(&ei, &l.bracket(&ej, &ek)),
                    &add_vec(
                        &l.bracket(&ej, &l.bracket(&ek, &ei)),
                        &l.bracket(&ek, &l.bracket(&ei, &ej)),
                    ),
                );
                if !is_zero_vec(&cyc) {
                    jac = Some((i, j, k));
                    break 'jac;
                }
            }
        }
    }
    match jac {
        None => report.ok("jacobi"),
        Some((i, j, k)) => report.fail(
            "jacobi",
            format!(
                "Jacobi fails on triple ({}, {}, {})",
                l.basis_names[i], l.basis_names[j], l.basis_names[k]
            ),
        ),
    }
    report
}

/// Linear map between Lie algebras, stored as a matrix in the chosen bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieHom {
    pub source: LieAlgebra,
    pub target: LieAlgebra,
    pub matrix: Matrix,
}

impl LieHom {
    pub fn new(source: LieAlgebra, target: LieAlgebra, matrix: Matrix) -> Result<Self, Error> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::HomShape {
                expected_rows: target.dim(),
                expected_cols: source.dim(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(LieHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(l: &LieAlgebra) -> Self {
        LieHom {
            source: l.clone(),
            target: l.clone(),
            matrix: Matrix::identity(l.dim()),
        }
    }

    pub fn zero(source: &LieAlgebra, target: &LieAlgebra) -> Self {
        LieHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(x)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LieHom) -> LieHom {
        assert_eq!(other.target.dim(), self.source.dim());
        LieHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }
}

/// Bracket preservation `f[x,y] = [fx, fy]` on all basis pairs.
pub fn verify_hom(f: &LieHom) -> Report {
    let mut report = Report::new("lie_hom");
    let mut bad = None;
    'outer: for i in 0..f.source.dim() {
        for j in (i + 1)..f.source.dim() {
            let lhs = f.apply(f.source.bracket_basis(i, j));
            let rhs = f
                .target
                .bracket(&f.matrix.col(i), &f.matrix.col(j));
            if lhs != rhs {
                bad = Some((i, j));
                break 'outer;
            }
        }
    }
    match bad {
        None => report.ok("bracket_preserved"),
        Some((i, j)) => report.fail(
            "bracket_preserved",
            format!(
                "f[{}, {}] != [f {}, f {}]",
                f.source.basis_names()[i],
                f.source.basis_names()[j],
                f.source.basis_names()[i],
                f.source.basis_names()[j]
            ),
        ),
    }
    report
}

/// Derivations of `l` as a subspace of `End(l)` (endomorphisms vectorized
/// row-major). Closure under commutator is asserted.
pub fn derivation_space(l: &LieAlgebra) -> Subspace {
    let n = l.dim();
    let unknowns = n * n;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                // (M [e_i,e_j])_k - [M e_i, e_j]_k - [e_i, M e_j]_k = 0
                let mut row = zeros_vec(unknowns);
                for c in 0..n {
                    row[k * n + c] = &row[k * n + c] + &l.sc[i][j][c];
                }
                for r in 0..n {
                    row[r * n + i] = &row[r * n + i] - &l.sc[r][j][k];
                    row[r * n + j] = &row[r * n + j] - &l.sc[i][r][k];
                }
                rows.push(row);
            }
        }
    }
    let space = if rows.is_empty() {
        Subspace::full(unknowns)
    } else {
        null_space(&Matrix::from_rows(rows))
    };
    // commutator of two derivations is a derivation; the solution space
    // must reflect that
    let unvec = |v: &[Scalar]| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone());
    for a in space.basis() {
        for b in space.basis() {
            let (ma, mb) = (unvec(a), unvec(b));
            let comm = ma.mul(&mb).sub(&mb.mul(&ma));
            let flat: Vec<Scalar> = (0..n)
                .flat_map(|r| (0..n).map(|c| comm.at(r, c).clone()).collect::<Vec<_>>())
                .collect();
            assert!(space.contains(&flat), "derivation space not closed under commutator");
        }
    }
    space
}

/// Center `{x : [x, e_i] = 0 for all i}`.
pub fn center(l: &LieAlgebra) -> Subspace {
    let n = l.dim();
    if n == 0 {
        return Subspace::zero(0);
    }
    let mut stacked = l.ad(&l.basis_vector(0));
    for i in 1..n {
        stacked = stacked.vstack(&l.ad(&l.basis_vector(i)));
    }
    // [x, e_i] = -ad(e_i) x, so the kernels agree
    null_space(&stacked)
}

/// Lie algebra structure on a bracket-closed subspace of an ambient
/// coordinate space. Errors with the offending basis pair when the subspace
/// is not closed.
pub fn subalgebra_on(
    names: Vec<String>,
    basis: &Subspace,
    bracket: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
) -> Result<LieAlgebra, Error> {
    let d = basis.dim();
    assert_eq!(names.len(), d);
    let mut sc = vec![vec![zeros_vec(d); d]; d];
    for i in 0..d {
        for j in 0..d {
            let b = bracket(&basis.basis()[i], &basis.basis()[j]);
            let coords = basis
                .coordinates(&b)
                .ok_or(Error::NotClosed { i, j })?;
            sc[i][j] = coords;
        }
    }
    Ok(LieAlgebra::new(names, sc))
}

/// Fiber product of two Lie algebra maps with a shared target.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub algebra: LieAlgebra,
    /// The underlying subspace of `source(f) + source(h)`.
    pub subspace: Subspace,
    pub pr_left: LieHom,
    pub pr_right: LieHom,
}

pub fn lie_fiber_product(f: &LieHom, h: &LieHom) -> Result<FiberProduct, Error> {
    if f.target.dim() != h.target.dim() {
        return Err(Error::TargetMismatch {
            left: f.target.dim(),
            right: h.target.dim(),
        });
    }
    let subspace = pullback_space(&f.matrix, &h.matrix)?;
    let dl = f.source.dim();
    let names = (0..subspace.dim()).map(|i| format!("p{}", i + 1)).collect();
    let bracket = |x: &[Scalar], y: &[Scalar]| {
        concat_vec(
            &f.source.bracket(&x[..dl], &y[..dl]),
            &h.source.bracket(&x[dl..], &y[dl..]),
        )
    };
    let algebra = subalgebra_on(names, &subspace, bracket)?;
    let basis = subspace.basis_cols();
    let pick = |offset: usize, dim: usize| {
        Matrix::from_fn(dim, basis.cols(), |i, j| basis.at(offset + i, j).clone())
    };
    let pr_left = LieHom::new(algebra.clone(), f.source.clone(), pick(0, dl))?;
    let pr_right = LieHom::new(algebra.clone(), h.source.clone(), pick(dl, h.source.dim()))?;
    Ok(FiberProduct {
        algebra,
        subspace,
        pr_left,
        pr_right,
    })
}

/// Quotient of `l` by an ideal, with the canonical projection. The
/// complement is read off the echelon pivots of the ideal, so the quotient
/// structure constants are reproducible.
pub fn lie_quotient(l: &LieAlgebra, ideal: &Subspace) -> Result<(LieAlgebra, LieHom), Error> {
    if ideal.ambient_dim() != l.dim() {
        return Err(exactla::Error::AmbientMismatch {
            expected: l.dim(),
            found: ideal.ambient_dim(),
        }
        .into());
    }
    for i in 0..l.dim() {
        for (j, w) in ideal.basis().iter().enumerate() {
            if !ideal.contains(&l.bracket(&l.basis_vector(i), w)) {
                return Err(Error::NotAnIdeal { i, j });
            }
        }
    }
    let (qdim, proj) = exactla::quotient(l.dim(), ideal)?;
    let section = exactla::quotient_section(l.dim(), ideal);
    let names = (0..qdim).map(|i| format!("q{}", i + 1)).collect();
    let mut sc = vec![vec![zeros_vec(qdim); qdim]; qdim];
    for i in 0..qdim {
        for j in 0..qdim {
            let b = l.bracket(&section.col(i), &section.col(j));
            sc[i][j] = proj.apply(&b);
        }
    }
    let quotient = LieAlgebra::new(names, sc);
    let projection = LieHom::new(l.clone(), quotient.clone(), proj)?;
    Ok((quotient, projection))
}

// ---------------------------------------------------------------------------
// Named fixtures
// ---------------------------------------------------------------------------

/// 3-dimensional Heisenberg algebra: [X, Y] = Z.
pub fn heis3() -> LieAlgebra {
    LieAlgebra::from_brackets(
        vec!["X".into(), "Y".into(), "Z".into()],
        &[(0, 1, vec![int(0), int(0), int(1)])],
    )
}

/// Abelian 2-dimensional algebra.
pub fn ab2() -> LieAlgebra {
    LieAlgebra::new(
        vec!["E1".into(), "E2".into()],
        vec![vec![zeros_vec(2); 2]; 2],
    )
}

/// sl(2): [H,E] = 2E, [H,F] = -2F, [E,F] = H.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::from_brackets(
        vec!["H".into(), "E".into(), "F".into()],
        &[
            (0, 1, vec![int(0), int(2), int(0)]),
            (0, 2, vec![int(0), int(0), int(-2)]),
            (1, 2, vec![int(1), int(0), int(0)]),
        ],
    )
}

/// Direct sum with componentwise bracket.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let n = a.dim() + b.dim();
    let mut names: Vec<String> = a.basis_names().iter().map(|s| format!("a.{s}")).collect();
    names.extend(b.basis_names().iter().map(|s| format!("b.{s}")));
    let mut sc = vec![vec![zeros_vec(n); n]; n];
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            sc[i][j][..a.dim()].clone_from_slice(a.bracket_basis(i, j));
        }
    }
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            sc[a.dim() + i][a.dim() + j][a.dim()..].clone_from_slice(b.bracket_basis(i, j));
        }
    }
    LieAlgebra::new(names, sc)
}
