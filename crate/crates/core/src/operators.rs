//! Linear transformations on the algebra and their Peirce blocks.
//!
//! Operators are stored densely as coordinate matrices in the ambient
//! orthonormal basis. Blocks `A_{ij,kl} = P_{E_ij} ∘ A|_{E_kl}` are derived on
//! demand from a [`PeirceSystem`] and are never stored.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{same_algebra, Algebra, AlgebraRef, AlgebraSpec, Element};
use crate::error::{Error, Result};
use crate::linalg::asymmetry;
use crate::peirce::{IdempotentSplit, Pair, PeirceSystem};

/// Largest asymmetry accepted when building a [`SelfAdjointOp`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Anything with an algebra and a coordinate matrix.
pub trait Operator {
    fn algebra(&self) -> &AlgebraRef;
    fn matrix(&self) -> &DMatrix<f64>;

    fn apply(&self, x: &Element) -> Element {
        let v = self.matrix() * x.to_vector();
        Element::from_raw(self.algebra(), v.iter().copied().collect())
    }
}

/// A general linear transformation. Only produced as an intermediate, e.g.
/// by [`tensor`].
#[derive(Clone, Debug)]
pub struct LinearOp {
    algebra: AlgebraRef,
    matrix: DMatrix<f64>,
}

impl LinearOp {
    pub fn new(algebra: &AlgebraRef, matrix: DMatrix<f64>) -> Result<Self> {
        check_shape(algebra, &matrix)?;
        Ok(LinearOp {
            algebra: algebra.clone(),
            matrix,
        })
    }

    /// The self-adjoint part `(A + A*)/2`.
    pub fn symmetric_part(&self) -> SelfAdjointOp {
        SelfAdjointOp {
            algebra: self.algebra.clone(),
            matrix: (&self.matrix + self.matrix.transpose()) * 0.5,
        }
    }
}

impl Operator for LinearOp {
    fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }
    fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

fn check_shape(algebra: &AlgebraRef, m: &DMatrix<f64>) -> Result<()> {
    let n = algebra.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

/// A self-adjoint transformation; its matrix is exactly symmetric.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct SelfAdjointOp {
    algebra: AlgebraRef,
    matrix: DMatrix<f64>,
}

/// Wire form: `{"algebra": {...}, "matrix": [[row0], [row1], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub algebra: AlgebraSpec,
    pub matrix: Vec<Vec<f64>>,
}

impl TryFrom<OperatorJson> for SelfAdjointOp {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let algebra = std::sync::Arc::new(Algebra::try_from(j.algebra)?);
        let n = algebra.dim();
        if j.matrix.len() != n || j.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "operator matrix must be {n} x {n}"
            )));
        }
        let m = DMatrix::from_fn(n, n, |r, c| j.matrix[r][c]);
        SelfAdjointOp::new(&algebra, m)
    }
}

impl From<SelfAdjointOp> for OperatorJson {
    fn from(op: SelfAdjointOp) -> Self {
        OperatorJson {
            algebra: op.algebra.spec(),
            matrix: op
                .matrix
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }
}

impl SelfAdjointOp {
    /// Rejects matrices whose asymmetry exceeds `1e-10 · max(1, max|aᵢⱼ|)`
    /// and stores the exact symmetric part otherwise.
    pub fn new(algebra: &AlgebraRef, matrix: DMatrix<f64>) -> Result<Self> {
        check_shape(algebra, &matrix)?;
        let scale = matrix.amax().max(1.0);
        let asym = asymmetry(&matrix);
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSelfAdjoint { asymmetry: asym });
        }
        Ok(SelfAdjointOp {
            algebra: algebra.clone(),
            matrix: (&matrix + matrix.transpose()) * 0.5,
        })
    }

    pub fn from_rows(algebra: &AlgebraRef, rows: &[&[f64]]) -> Result<Self> {
        let n = algebra.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("operator matrix must be {n} x {n}")));
        }
        Self::new(algebra, DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn identity(algebra: &AlgebraRef) -> Self {
        let n = algebra.dim();
        SelfAdjointOp {
            algebra: algebra.clone(),
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn zero(algebra: &AlgebraRef) -> Self {
        let n = algebra.dim();
        SelfAdjointOp {
            algebra: algebra.clone(),
            matrix: DMatrix::zeros(n, n),
        }
    }

    pub(crate) fn from_symmetric_raw(algebra: &AlgebraRef, matrix: DMatrix<f64>) -> Self {
        debug_assert!(asymmetry(&matrix) <= 1e-12 * matrix.amax().max(1.0));
        SelfAdjointOp {
            algebra: algebra.clone(),
            matrix: (&matrix + matrix.transpose()) * 0.5,
        }
    }

    /// Frobenius norm, i.e. the norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn scale(&self, a: f64) -> Self {
        SelfAdjointOp {
            algebra: self.algebra.clone(),
            matrix: &self.matrix * a,
        }
    }

    /// `self + a·other`.
    ///
    /// # Panics
    /// If the operators act on different algebras.
    pub fn axpy(&self, a: f64, other: &SelfAdjointOp) -> Self {
        assert!(same_algebra(&self.algebra, &other.algebra), "operators on different algebras");
        SelfAdjointOp {
            algebra: self.algebra.clone(),
            matrix: &self.matrix + &other.matrix * a,
        }
    }

    pub fn to_linear(&self) -> LinearOp {
        LinearOp {
            algebra: self.algebra.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

impl Operator for SelfAdjointOp {
    fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }
    fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl std::ops::Add for &SelfAdjointOp {
    type Output = SelfAdjointOp;
    fn add(self, rhs: &SelfAdjointOp) -> SelfAdjointOp {
        self.axpy(1.0, rhs)
    }
}

impl std::ops::Sub for &SelfAdjointOp {
    type Output = SelfAdjointOp;
    fn sub(self, rhs: &SelfAdjointOp) -> SelfAdjointOp {
        self.axpy(-1.0, rhs)
    }
}

fn check_elements(a: &Element, b: &Element) -> Result<()> {
    if same_algebra(a.algebra(), b.algebra()) {
        Ok(())
    } else {
        Err(Error::DescriptorMismatch)
    }
}

/// `a ⊗ b : x ↦ (b•x) a`.
pub fn tensor(a: &Element, b: &Element) -> Result<LinearOp> {
    check_elements(a, b)?;
    Ok(LinearOp {
        algebra: a.algebra().clone(),
        matrix: a.to_vector() * b.to_vector().transpose(),
    })
}

/// `a ⊗ b + b ⊗ a`.
pub fn sym_tensor(a: &Element, b: &Element) -> Result<SelfAdjointOp> {
    check_elements(a, b)?;
    let (u, v) = (a.to_vector(), b.to_vector());
    let m = &u * v.transpose() + &v * u.transpose();
    Ok(SelfAdjointOp {
        algebra: a.algebra().clone(),
        matrix: m,
    })
}

/// `a ⊗ a`.
pub fn tensor_square(a: &Element) -> SelfAdjointOp {
    let u = a.to_vector();
    SelfAdjointOp {
        algebra: a.algebra().clone(),
        matrix: &u * u.transpose(),
    }
}

/// `⟨A, B⟩ = tr(A ∘ B)`.
pub fn trace_inner<A: Operator, B: Operator>(a: &A, b: &B) -> Result<f64> {
    if !same_algebra(a.algebra(), b.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    Ok(a.matrix().component_mul(&b.matrix().transpose()).sum())
}

/// `x • A(x)`.
pub fn quadratic_form<A: Operator>(a: &A, x: &Element) -> Result<f64> {
    if !same_algebra(a.algebra(), x.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let v = x.to_vector();
    Ok(v.dot(&(a.matrix() * &v)))
}

/// The block `A_{ij,kl}` as a `dim E_ij x dim E_kl` matrix in the system's bases.
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub target: Pair,
    pub source: Pair,
    pub matrix: DMatrix<f64>,
}

impl BlockMap {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.iter().all(|v| v.abs() <= tol)
    }
}

/// `P_{E_ij} ∘ A|_{E_kl}`.
pub fn block<A: Operator>(a: &A, system: &PeirceSystem, ij: Pair, kl: Pair) -> Result<BlockMap> {
    if !same_algebra(a.algebra(), system.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let bt = system.space(ij)?.basis();
    let bs = system.space(kl)?.basis();
    Ok(BlockMap {
        target: ij,
        source: kl,
        matrix: bt.transpose() * a.matrix() * bs,
    })
}

/// Whether `A_{ij,kl}` equals the adjoint of `A_{kl,ij}` within `tol`.
/// Invalid pairs or mismatched algebras give `false`.
pub fn adjoint_check<A: Operator>(a: &A, system: &PeirceSystem, ij: Pair, kl: Pair, tol: f64) -> bool {
    match (block(a, system, ij, kl), block(a, system, kl, ij)) {
        (Ok(x), Ok(y)) => x
            .matrix
            .iter()
            .zip(y.matrix.transpose().iter())
            .all(|(p, q)| (p - q).abs() <= tol),
        _ => false,
    }
}

/// `Σ_ij x_ij • A_{ij,ij}(x_ij) + 2 Σ_{ij ≺ kl} x_ij • A_{ij,kl}(x_kl)`
/// evaluated block by block.
pub fn expand_quadratic<A: Operator>(a: &A, system: &PeirceSystem, x: &Element) -> Result<f64> {
    if !same_algebra(a.algebra(), x.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let pairs: Vec<Pair> = system.pairs().collect();
    let local: Vec<DVector<f64>> = pairs
        .iter()
        .map(|&p| Ok(system.space(p)?.local_coords(x)))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (s, &p) in pairs.iter().enumerate() {
        for (t, &q) in pairs.iter().enumerate().skip(s) {
            if local[s].is_empty() || local[t].is_empty() {
                continue;
            }
            let b = block(a, system, p, q)?;
            let term = local[s].dot(&(&b.matrix * &local[t]));
            total += if s == t { term } else { 2.0 * term };
        }
    }
    Ok(total)
}

/// Rebuilds the operator from all of its blocks, `Σ P*_ij A_{ij,kl} P_kl`.
pub fn reassemble<A: Operator>(a: &A, system: &PeirceSystem) -> Result<DMatrix<f64>> {
    let n = system.algebra().dim();
    let mut m = DMatrix::zeros(n, n);
    for p in system.pairs() {
        for q in system.pairs() {
            let b = block(a, system, p, q)?;
            m += system.space(p)?.basis() * &b.matrix * system.space(q)?.basis().transpose();
        }
    }
    Ok(m)
}

/// Copy of `a` with the listed blocks (and their adjoints) set to zero.
pub fn without_blocks(a: &SelfAdjointOp, system: &PeirceSystem, blocks: &[(Pair, Pair)]) -> Result<SelfAdjointOp> {
    let mut m = a.matrix.clone();
    let mut seen: Vec<(Pair, Pair)> = Vec::new();
    for &(p, q) in blocks {
        let key = if p <= q { (p, q) } else { (q, p) };
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let pp = system.space(key.0)?.projector();
        let pq = system.space(key.1)?.projector();
        let part = pp * &a.matrix * pq;
        m -= &part;
        if key.0 != key.1 {
            m -= part.transpose();
        }
    }
    Ok(SelfAdjointOp::from_symmetric_raw(&a.algebra, m))
}

/// A self-adjoint operator on `E(c,1)`, written in the basis of the
/// corresponding [`IdempotentSplit`].
#[derive(Clone, Debug, PartialEq)]
pub struct CornerOp {
    pub matrix: DMatrix<f64>,
}

impl CornerOp {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidInput("corner operator must be square".into()));
        }
        if asymmetry(&matrix) > SYMMETRY_TOL * matrix.amax().max(1.0) {
            return Err(Error::NotSelfAdjoint {
                asymmetry: asymmetry(&matrix),
            });
        }
        Ok(CornerOp {
            matrix: (&matrix + matrix.transpose()) * 0.5,
        })
    }

    pub fn identity(k: usize) -> Self {
        CornerOp {
            matrix: DMatrix::identity(k, k),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `P* ∘ G ∘ P` with `P` the orthogonal projection onto `E(c,1)`.
pub fn zero_pad(g: &CornerOp, split: &IdempotentSplit) -> Result<SelfAdjointOp> {
    let b = split.one().basis();
    if g.dim() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: b.ncols(),
            got: g.dim(),
        });
    }
    Ok(SelfAdjointOp::from_symmetric_raw(
        split.algebra(),
        b * &g.matrix * b.transpose(),
    ))
}

/// `P ∘ A|_{E(c,1)}` in the split's basis of `E(c,1)`.
pub fn principal_corner<A: Operator>(a: &A, split: &IdempotentSplit) -> Result<CornerOp> {
    if !same_algebra(a.algebra(), split.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let b = split.one().basis();
    let m = b.transpose() * a.matrix() * b;
    Ok(CornerOp {
        matrix: (&m + m.transpose()) * 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, random_element, Algebra};
    use crate::peirce::{fine_peirce, peirce_halves, JordanFrame};
    use approx::assert_abs_diff_eq;

    fn el(alg: &AlgebraRef, c: &[f64]) -> Element {
        Element::new(alg, c.to_vec()).unwrap()
    }

    fn std_system(frame: Vec<Element>) -> PeirceSystem {
        fine_peirce(&JordanFrame::new(frame, 1e-12).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn tensor_examples() {
        let h = Algebra::hadamard(2);
        let a = el(&h, &[1.0, 2.0]);
        let b = el(&h, &[3.0, 4.0]);
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.matrix(), &DMatrix::from_row_slice(2, 2, &[3.0, 4.0, 6.0, 8.0]));
        let aa = tensor_square(&a);
        assert_eq!(aa.apply(&a).coords(), a.scale(a.dot(&a)).coords());
        let c = el(&h, &[1.0, 0.0]);
        let hh = el(&h, &[1.0, 1.0]);
        let v = trace_inner(&tensor_square(&c), &tensor_square(&hh)).unwrap();
        assert_eq!(v, c.dot(&hh).powi(2));
        assert_eq!(v, 1.0);
        assert!(tensor(&a, &identity(&Algebra::spin(2))).is_err());
    }

    #[test]
    fn trace_inner_examples() {
        let h = Algebra::hadamard(3);
        let i = SelfAdjointOp::identity(&h);
        assert_eq!(trace_inner(&i, &i).unwrap(), 3.0);
        let h2 = Algebra::hadamard(2);
        let c = el(&h2, &[1.0, 0.0]);
        let d = el(&h2, &[0.0, 1.0]);
        let a = sym_tensor(&c, &d).unwrap();
        assert_eq!(trace_inner(&a, &tensor_square(&c)).unwrap(), 0.0);
        assert_eq!(trace_inner(&a, &a).unwrap(), 2.0);
    }

    #[test]
    fn rejects_asymmetric_matrices() {
        let h = Algebra::hadamard(2);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(SelfAdjointOp::new(&h, m), Err(Error::NotSelfAdjoint { .. })));
        assert!(SelfAdjointOp::new(&h, DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn json_round_trip_validates_symmetry() {
        let h = Algebra::hadamard(2);
        let a = SelfAdjointOp::from_rows(&h, &[&[1.0, 2.0], &[2.0, 5.0]]).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(
            text,
            r#"{"algebra":{"factors":[{"kind":"hadamard","n":2}]},"matrix":[[1.0,2.0],[2.0,5.0]]}"#
        );
        let back = SelfAdjointOp::from_json(&text).unwrap();
        assert_eq!(back.matrix(), a.matrix());
        let bad = r#"{"algebra":{"factors":[{"kind":"hadamard","n":2}]},"matrix":[[1.0,2.0],[0.0,5.0]]}"#;
        assert!(SelfAdjointOp::from_json(bad).is_err());
    }

    #[test]
    fn scalar_blocks_in_hadamard() {
        let h = Algebra::hadamard(2);
        let sys = std_system(vec![el(&h, &[1.0, 0.0]), el(&h, &[0.0, 1.0])]);
        let a = SelfAdjointOp::from_rows(&h, &[&[1.0, 2.0], &[2.0, 5.0]]).unwrap();
        let (p11, p22) = (Pair::diagonal(0), Pair::diagonal(1));
        assert_eq!(block(&a, &sys, p11, p11).unwrap().matrix[(0, 0)], 1.0);
        assert_eq!(block(&a, &sys, p11, p22).unwrap().matrix[(0, 0)], 2.0);
        assert_eq!(block(&a, &sys, p22, p22).unwrap().matrix[(0, 0)], 5.0);
        assert!(block(&a, &sys, p11, Pair { i: 0, j: 2 }).is_err());
        // x = (x1, x2): both routes give x1² + 4x1x2 + 5x2²
        let x = el(&h, &[0.3, -1.7]);
        let want = 0.09 + 4.0 * 0.3 * -1.7 + 5.0 * 1.7 * 1.7;
        assert_abs_diff_eq!(quadratic_form(&a, &x).unwrap(), want, epsilon = 1e-14);
        assert_abs_diff_eq!(expand_quadratic(&a, &sys, &x).unwrap(), want, epsilon = 1e-14);
    }

    #[test]
    fn identity_blocks_vanish_off_diagonal() {
        let s = Algebra::sym(3);
        let sys = fine_peirce(&JordanFrame::of_element(&random_element(&s, 5), 1e-9).unwrap(), 1e-9).unwrap();
        let i = SelfAdjointOp::identity(&s);
        for p in sys.pairs() {
            for q in sys.pairs() {
                if p != q {
                    assert!(block(&i, &sys, p, q).unwrap().is_zero(1e-12));
                }
            }
        }
    }

    #[test]
    fn sym2_cross_block() {
        let s = Algebra::sym(2);
        let c1 = Element::basis(&s, 0);
        let sys = std_system(vec![c1.clone(), Element::basis(&s, 2)]);
        let m = Element::basis(&s, 1);
        let a = sym_tensor(&c1, &m).unwrap();
        let b = block(&a, &sys, Pair::diagonal(0), Pair::new(0, 1).unwrap()).unwrap();
        assert_eq!(b.matrix.shape(), (1, 1));
        assert_abs_diff_eq!(b.matrix[(0, 0)].abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn adjoint_check_cases() {
        let s = Algebra::sym(2);
        let sys = fine_peirce(&JordanFrame::of_element(&random_element(&s, 8), 1e-9).unwrap(), 1e-9).unwrap();
        let x = random_element(&s, 1);
        let y = random_element(&s, 2);
        let a = sym_tensor(&x, &y).unwrap();
        let skew = tensor(&x, &y).unwrap();
        let mut any_false = false;
        for p in sys.pairs() {
            for q in sys.pairs() {
                assert!(adjoint_check(&a, &sys, p, q, 1e-12));
                any_false |= !adjoint_check(&skew, &sys, p, q, 1e-9);
            }
        }
        assert!(any_false);
        let diag = SelfAdjointOp::from_rows(&Algebra::hadamard(2), &[&[1.0, 0.0], &[0.0, 3.0]]).unwrap();
        let h = diag.algebra().clone();
        let hs = std_system(vec![el(&h, &[1.0, 0.0]), el(&h, &[0.0, 1.0])]);
        assert!(adjoint_check(&diag, &hs, Pair::diagonal(0), Pair::diagonal(1), 0.0));
    }

    #[test]
    fn zero_pad_and_corner() {
        let s = Algebra::sym(2);
        let c = Element::basis(&s, 0);
        let split = peirce_halves(&c, 1e-12).unwrap();
        let padded = zero_pad(&CornerOp::identity(1), &split).unwrap();
        assert!(crate::linalg::max_abs_diff(padded.matrix(), tensor_square(&c).matrix()) < 1e-15);
        assert_eq!(principal_corner(&padded, &split).unwrap(), CornerOp::identity(1));
        assert!(zero_pad(&CornerOp::identity(2), &split).is_err());

        let corner = principal_corner(&tensor_square(&Element::basis(&s, 2)), &split).unwrap();
        assert_eq!(corner.matrix, DMatrix::zeros(1, 1));

        let e = identity(&s);
        let full = peirce_halves(&e, 1e-12).unwrap();
        let g = CornerOp::new(DMatrix::from_fn(3, 3, |i, j| (i + j) as f64)).unwrap();
        let pg = zero_pad(&g, &full).unwrap();
        // E(e,1) = E, so padding is conjugation by an orthogonal matrix
        assert_abs_diff_eq!(pg.norm(), g.matrix.norm(), epsilon = 1e-12);
        assert!(crate::linalg::max_abs_diff(&principal_corner(&pg, &full).unwrap().matrix, &g.matrix) < 1e-12);
        assert_eq!(principal_corner(&SelfAdjointOp::identity(&s), &full).unwrap().matrix.nrows(), 3);
    }
}
