//! Concrete Euclidean Jordan algebras and their cones of squares.
//!
//! An [`Algebra`] is a direct sum of factors drawn from three families:
//!
//! * `Hadamard(n)`: `R^n` with the componentwise product; its cone of squares
//!   is the nonnegative orthant.
//! * `SymMatrix(n)`: real symmetric `n x n` matrices with `X∘Y = (XY+YX)/2`;
//!   the cone of squares is the PSD cone.
//! * `Spin(n)`: `R x R^{n-1}` with `(s,u)∘(t,v) = (st + u·v, sv + tu)`; the
//!   cone of squares is the Lorentz cone.
//!
//! Coordinates are always taken in an orthonormal basis, so the Jordan inner
//! product is the plain dot product of coordinate vectors. For `SymMatrix`
//! the basis is `E_ii` followed row-wise by `(E_ij + E_ji)/√2` for `i < j`,
//! interleaved as `(0,0), (0,1), ..., (0,n-1), (1,1), ...`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

/// Default absolute tolerance for membership tests on unit-scale inputs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `tol` scaled by `max(1, norm)`.
pub fn scaled_tol(tol: f64, norm: f64) -> f64 {
    tol * norm.max(1.0)
}

/// One simple factor of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Factor {
    Hadamard { n: usize },
    #[serde(rename = "sym")]
    SymMatrix { n: usize },
    Spin { n: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Hadamard { n } | Factor::Spin { n } => n,
            Factor::SymMatrix { n } => n * (n + 1) / 2,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Factor::Hadamard { n } | Factor::SymMatrix { n } => n,
            Factor::Spin { .. } => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Factor::Hadamard { n } | Factor::SymMatrix { n } if n == 0 => Err(
                Error::InvalidAlgebra(format!("{self} needs n >= 1")),
            ),
            Factor::Spin { n } if n < 2 => {
                Err(Error::InvalidAlgebra(format!("{self} needs n >= 2")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Hadamard { n } => write!(f, "hadamard({n})"),
            Factor::SymMatrix { n } => write!(f, "sym({n})"),
            Factor::Spin { n } => write!(f, "spin({n})"),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Wire form of an algebra descriptor: `{"factors":[{"kind":"hadamard","n":3}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub factors: Vec<Factor>,
}

/// A direct sum of Jordan algebra factors with a fixed orthonormal basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraSpec", into = "AlgebraSpec")]
pub struct Algebra {
    factors: Vec<Factor>,
    offsets: Vec<usize>,
    dim: usize,
    rank: usize,
}

pub type AlgebraRef = Arc<Algebra>;

impl TryFrom<AlgebraSpec> for Algebra {
    type Error = Error;

    fn try_from(spec: AlgebraSpec) -> Result<Self> {
        if spec.factors.is_empty() {
            return Err(Error::InvalidAlgebra("factor list is empty".into()));
        }
        let mut offsets = Vec::with_capacity(spec.factors.len());
        let mut dim = 0;
        for f in &spec.factors {
            f.validate()?;
            offsets.push(dim);
            dim += f.dim();
        }
        let rank = spec.factors.iter().map(Factor::rank).sum();
        Ok(Algebra {
            factors: spec.factors,
            offsets,
            dim,
            rank,
        })
    }
}

impl From<Algebra> for AlgebraSpec {
    fn from(a: Algebra) -> Self {
        AlgebraSpec { factors: a.factors }
    }
}

impl Algebra {
    pub fn new(factors: Vec<Factor>) -> Result<AlgebraRef> {
        Ok(Arc::new(Algebra::try_from(AlgebraSpec { factors })?))
    }

    /// Parses the JSON descriptor format.
    pub fn from_json(text: &str) -> Result<AlgebraRef> {
        Ok(Arc::new(serde_json::from_str::<Algebra>(text)?))
    }

    /// # Panics
    /// If `n == 0`.
    pub fn hadamard(n: usize) -> AlgebraRef {
        Self::new(vec![Factor::Hadamard { n }]).expect("hadamard(n) needs n >= 1")
    }

    /// # Panics
    /// If `n == 0`.
    pub fn sym(n: usize) -> AlgebraRef {
        Self::new(vec![Factor::SymMatrix { n }]).expect("sym(n) needs n >= 1")
    }

    /// # Panics
    /// If `n < 2`.
    pub fn spin(n: usize) -> AlgebraRef {
        Self::new(vec![Factor::Spin { n }]).expect("spin(n) needs n >= 2")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Coordinate offset of each factor.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            factors: self.factors.clone(),
        }
    }

    /// True when every factor is a `Hadamard` factor, i.e. the cone of
    /// squares is a nonnegative orthant.
    pub fn is_orthant(&self) -> bool {
        self.factors
            .iter()
            .all(|f| matches!(f, Factor::Hadamard { .. }))
    }

    fn factor_ranges(&self) -> impl Iterator<Item = (Factor, std::ops::Range<usize>)> + '_ {
        self.factors
            .iter()
            .zip(&self.offsets)
            .map(|(f, &o)| (*f, o..o + f.dim()))
    }

    pub(crate) fn product_raw(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (f, r) in self.factor_ranges() {
            factor_product(f, &x[r.clone()], &y[r.clone()], &mut out[r]);
        }
        out
    }

    pub(crate) fn identity_raw(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (f, r) in self.factor_ranges() {
            let e = &mut out[r];
            match f {
                Factor::Hadamard { .. } => e.fill(1.0),
                Factor::SymMatrix { n } => {
                    for i in 0..n {
                        e[sym_index(n, i, i)] = 1.0;
                    }
                }
                Factor::Spin { .. } => e[0] = 1.0,
            }
        }
        out
    }
}

pub(crate) fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Position of the `(i, j)` basis vector (`i <= j`) inside a `SymMatrix(n)` block.
pub(crate) fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

fn sym_to_matrix(n: usize, c: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = c[sym_index(n, i, j)];
            if i == j {
                m[(i, i)] = v;
            } else {
                m[(i, j)] = v * std::f64::consts::FRAC_1_SQRT_2;
                m[(j, i)] = m[(i, j)];
            }
        }
    }
    m
}

fn matrix_to_sym(n: usize, m: &DMatrix<f64>, out: &mut [f64]) {
    for i in 0..n {
        for j in i..n {
            out[sym_index(n, i, j)] = if i == j {
                m[(i, i)]
            } else {
                0.5 * (m[(i, j)] + m[(j, i)]) * std::f64::consts::SQRT_2
            };
        }
    }
}

fn factor_product(f: Factor, x: &[f64], y: &[f64], out: &mut [f64]) {
    match f {
        Factor::Hadamard { .. } => {
            for ((o, a), b) in out.iter_mut().zip(x).zip(y) {
                *o = a * b;
            }
        }
        Factor::SymMatrix { n } => {
            let a = sym_to_matrix(n, x);
            let b = sym_to_matrix(n, y);
            let p = (&a * &b + &b * &a) * 0.5;
            matrix_to_sym(n, &p, out);
        }
        Factor::Spin { .. } => {
            let (s, u) = (x[0], &x[1..]);
            let (t, v) = (y[0], &y[1..]);
            out[0] = s * t + u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            for k in 1..x.len() {
                out[k] = s * y[k] + t * x[k];
            }
        }
    }
}

/// A point of the algebra, stored by coordinates in the fixed orthonormal basis.
#[derive(Clone, Debug)]
pub struct Element {
    algebra: AlgebraRef,
    coords: Vec<f64>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl Element {
    pub fn new(algebra: &AlgebraRef, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: coords.len(),
            });
        }
        Ok(Element {
            algebra: algebra.clone(),
            coords,
        })
    }

    pub(crate) fn from_raw(algebra: &AlgebraRef, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Element {
            algebra: algebra.clone(),
            coords,
        }
    }

    pub fn from_vector(algebra: &AlgebraRef, v: &DVector<f64>) -> Result<Self> {
        Self::new(algebra, v.iter().copied().collect())
    }

    pub fn zeros(algebra: &AlgebraRef) -> Self {
        Self::from_raw(algebra, vec![0.0; algebra.dim()])
    }

    /// The `k`-th orthonormal basis vector.
    pub fn basis(algebra: &AlgebraRef, k: usize) -> Self {
        let mut c = vec![0.0; algebra.dim()];
        c[k] = 1.0;
        Self::from_raw(algebra, c)
    }

    /// Element of a `SymMatrix` factor algebra from a dense symmetric matrix.
    /// Only valid for single-factor `SymMatrix` algebras.
    pub fn from_sym_matrix(algebra: &AlgebraRef, m: &DMatrix<f64>) -> Result<Self> {
        match algebra.factors() {
            [Factor::SymMatrix { n }] if m.nrows() == *n && m.ncols() == *n => {
                let mut out = vec![0.0; algebra.dim()];
                matrix_to_sym(*n, m, &mut out);
                Ok(Self::from_raw(algebra, out))
            }
            _ => Err(Error::InvalidInput(
                "from_sym_matrix needs a single sym(n) factor and an n x n matrix".into(),
            )),
        }
    }

    /// Dense matrix view of a single-factor `SymMatrix` element.
    pub fn to_sym_matrix(&self) -> Option<DMatrix<f64>> {
        match self.algebra.factors() {
            [Factor::SymMatrix { n }] => Some(sym_to_matrix(*n, &self.coords)),
            _ => None,
        }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    pub fn dot(&self, other: &Element) -> f64 {
        assert_same(&self.algebra, &other.algebra);
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        dot(&self.coords, &self.coords).sqrt()
    }

    /// `x ∘ y`.
    ///
    /// # Panics
    /// If the operands live in different algebras; use [`jordan_product`]
    /// for a checked variant.
    pub fn jordan(&self, other: &Element) -> Element {
        assert_same(&self.algebra, &other.algebra);
        Self::from_raw(&self.algebra, self.algebra.product_raw(&self.coords, &other.coords))
    }

    pub fn square(&self) -> Element {
        self.jordan(self)
    }

    pub fn scale(&self, a: f64) -> Element {
        Self::from_raw(&self.algebra, self.coords.iter().map(|v| v * a).collect())
    }

    pub fn axpy(&self, a: f64, other: &Element) -> Element {
        assert_same(&self.algebra, &other.algebra);
        Self::from_raw(
            &self.algebra,
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    pub fn distance(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// The orthogonal projection onto the symmetric cone: negative
    /// eigenvalues are clipped to zero.
    pub fn project_to_cone(&self) -> Result<Element> {
        Ok(spectral(self)?.map(|l| l.max(0.0)))
    }
}

fn assert_same(a: &AlgebraRef, b: &AlgebraRef) {
    assert!(same_algebra(a, b), "operands belong to different algebras");
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, a: f64) -> Element {
        self.scale(a)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

fn check_pair(x: &Element, y: &Element) -> Result<()> {
    if same_algebra(&x.algebra, &y.algebra) {
        Ok(())
    } else {
        Err(Error::DescriptorMismatch)
    }
}

/// `x ∘ y`, rejecting operands from different algebras.
pub fn jordan_product(x: &Element, y: &Element) -> Result<Element> {
    check_pair(x, y)?;
    Ok(x.jordan(y))
}

/// `x • y`, rejecting operands from different algebras.
pub fn inner(x: &Element, y: &Element) -> Result<f64> {
    check_pair(x, y)?;
    Ok(x.dot(y))
}

pub fn identity(algebra: &AlgebraRef) -> Element {
    Element::from_raw(algebra, algebra.identity_raw())
}

/// Matrix of `y ↦ x ∘ y` in the orthonormal basis. Symmetric because the
/// inner product is associative.
pub fn multiplication_operator(x: &Element) -> DMatrix<f64> {
    let alg = &x.algebra;
    let n = alg.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for k in 0..n {
        e[k] = 1.0;
        let col = alg.product_raw(&x.coords, &e);
        m.set_column(k, &DVector::from_vec(col));
        e[k] = 0.0;
    }
    m
}

/// Eigenvalues and a Jordan frame of an element.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ f(λᵢ) cᵢ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let alg = self.frame[0].algebra();
        let mut out = Element::zeros(alg);
        for (l, c) in self.eigenvalues.iter().zip(&self.frame) {
            out = out.axpy(f(*l), c);
        }
        out
    }

    pub fn reconstruct(&self) -> Element {
        self.map(|l| l)
    }
}

/// Spectral decomposition factor by factor.
///
/// Pairs are sorted by eigenvalue, largest first; equal eigenvalues are
/// ordered by lexicographically descending frame coordinates.
pub fn spectral(x: &Element) -> Result<SpectralDecomposition> {
    let alg = x.algebra.clone();
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(alg.rank());
    for (f, r) in alg.factor_ranges() {
        let local = &x.coords[r.clone()];
        let mut push = |l: f64, block: Vec<f64>| {
            let mut c = vec![0.0; alg.dim()];
            c[r.clone()].copy_from_slice(&block);
            pairs.push((l, c));
        };
        match f {
            Factor::Hadamard { n } => {
                for k in 0..n {
                    let mut b = vec![0.0; n];
                    b[k] = 1.0;
                    push(local[k], b);
                }
            }
            Factor::SymMatrix { n } => {
                let eig = linalg::symmetric_eigen(&sym_to_matrix(n, local))?;
                for (k, l) in eig.values.iter().enumerate() {
                    let v = eig.vectors.column(k);
                    let p = v * v.transpose();
                    let mut b = vec![0.0; f.dim()];
                    matrix_to_sym(n, &p, &mut b);
                    push(*l, b);
                }
            }
            Factor::Spin { n } => {
                let s = local[0];
                let u = &local[1..];
                let nu = dot(u, u).sqrt();
                let w: Vec<f64> = if nu > 0.0 {
                    u.iter().map(|v| v / nu).collect()
                } else {
                    let mut w = vec![0.0; n - 1];
                    w[0] = 1.0;
                    w
                };
                let half = |sign: f64| {
                    let mut b = vec![0.5; n];
                    for k in 1..n {
                        b[k] = 0.5 * sign * w[k - 1];
                    }
                    b
                };
                push(s + nu, half(1.0));
                push(s - nu, half(-1.0));
            }
        }
    }
    if pairs.iter().any(|(l, _)| !l.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    pairs.sort_by(|a, b| {
        b.0.total_cmp(&a.0).then_with(|| {
            for (p, q) in a.1.iter().zip(&b.1) {
                match q.total_cmp(p) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let (eigenvalues, frame) = pairs
        .into_iter()
        .map(|(l, c)| (l, Element::from_raw(&alg, c)))
        .unzip();
    Ok(SpectralDecomposition { eigenvalues, frame })
}

/// `‖c∘c − c‖`.
pub fn idempotency_residual(c: &Element) -> f64 {
    c.square().distance(c)
}

pub fn is_idempotent(c: &Element, tol: f64) -> bool {
    idempotency_residual(c) <= tol
}

/// Idempotent, nonzero, and exactly one eigenvalue near 1.
pub fn is_primitive(c: &Element, tol: f64) -> bool {
    if !is_idempotent(c, tol) || c.is_zero(tol) {
        return false;
    }
    match spectral(c) {
        Ok(sd) => sd.eigenvalues.iter().filter(|&&l| l > 0.5).count() == 1,
        Err(_) => false,
    }
}

/// `x ∈ E₊` up to `tol`: the smallest eigenvalue is at least `-tol`.
pub fn in_symmetric_cone(x: &Element, tol: f64) -> bool {
    spectral(x)
        .map(|sd| sd.min_eigenvalue() >= -tol)
        .unwrap_or(false)
}

/// Element with i.i.d. standard normal coordinates drawn from `rng`.
pub fn random_element_from<R: Rng + ?Sized>(algebra: &AlgebraRef, rng: &mut R) -> Element {
    let coords = (0..algebra.dim())
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    Element::from_raw(algebra, coords)
}

/// Deterministic random element for a given seed.
pub fn random_element(algebra: &AlgebraRef, seed: u64) -> Element {
    random_element_from(algebra, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Deterministic random element of the cone: the square of a random element.
pub fn random_cone_element(algebra: &AlgebraRef, seed: u64) -> Element {
    random_element(algebra, seed).square()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn el(alg: &AlgebraRef, c: &[f64]) -> Element {
        Element::new(alg, c.to_vec()).unwrap()
    }

    fn close(a: &Element, b: &[f64], tol: f64) {
        for (x, y) in a.coords().iter().zip(b) {
            assert_abs_diff_eq!(*x, *y, epsilon = tol);
        }
    }

    #[test]
    fn sym_index_is_row_major_upper_triangle() {
        let got: Vec<usize> = (0..3)
            .flat_map(|i| (i..3).map(move |j| sym_index(3, i, j)))
            .collect();
        assert_eq!(got, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(sym_index(4, 2, 1), sym_index(4, 1, 2));
        assert_eq!(sym_index(4, 3, 3), 9);
    }

    #[test]
    fn descriptor_dims_and_ranks() {
        let h = Algebra::hadamard(4);
        assert_eq!((h.dim(), h.rank()), (4, 4));
        close(&identity(&h), &[1.0; 4], 0.0);
        let s = Algebra::sym(3);
        assert_eq!((s.dim(), s.rank()), (6, 3));
        close(&identity(&s), &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0], 0.0);
        let p = Algebra::spin(5);
        assert_eq!((p.dim(), p.rank()), (5, 2));
        close(&identity(&p), &[1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn json_descriptor() {
        let a = Algebra::from_json(
            r#"{"factors":[{"kind":"hadamard","n":3},{"kind":"spin","n":4},{"kind":"sym","n":2}]}"#,
        )
        .unwrap();
        assert_eq!(a.dim(), 3 + 4 + 3);
        assert_eq!(a.rank(), 3 + 2 + 2);
        assert_eq!(a.offsets(), &[0, 3, 7]);
        let back = serde_json::to_string(&*a).unwrap();
        assert_eq!(Algebra::from_json(&back).unwrap(), a);
        assert!(Algebra::from_json(r#"{"factors":[]}"#).is_err());
        assert!(Algebra::from_json(r#"{"factors":[{"kind":"spin","n":1}]}"#).is_err());
        assert!(Algebra::from_json(r#"{"factors":[{"kind":"sym","n":0}]}"#).is_err());
    }

    #[test]
    fn products_by_hand() {
        let h = Algebra::hadamard(3);
        let p = jordan_product(&el(&h, &[1.0, 2.0, 2.0]), &el(&h, &[0.0, 1.0, 3.0])).unwrap();
        close(&p, &[0.0, 2.0, 6.0], 0.0);

        let s = Algebra::sym(2);
        let x = Element::from_sym_matrix(&s, &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
            .unwrap();
        close(&x.square(), &[1.0, 0.0, 1.0], 1e-15);

        let sp = Algebra::spin(3);
        let y = el(&sp, &[1.0, 1.0, 0.0]);
        close(&y.square(), &[2.0, 2.0, 0.0], 0.0);
    }

    #[test]
    fn inner_products() {
        let h = Algebra::hadamard(3);
        assert_eq!(inner(&el(&h, &[1.0, 2.0, 2.0]), &el(&h, &[0.0, 1.0, 3.0])).unwrap(), 8.0);
        let s = Algebra::sym(2);
        assert_eq!(inner(&Element::basis(&s, 0), &Element::basis(&s, 2)).unwrap(), 0.0);
        let sp = Algebra::spin(3);
        let e = identity(&sp);
        assert_eq!(inner(&e, &e).unwrap(), 1.0);
        // trace inner product agrees with the coordinate dot product
        let a = random_element(&s, 1);
        let b = random_element(&s, 2);
        let ta = (a.to_sym_matrix().unwrap() * b.to_sym_matrix().unwrap()).trace();
        assert_abs_diff_eq!(ta, a.dot(&b), epsilon = 1e-13);
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = identity(&Algebra::hadamard(2));
        let b = identity(&Algebra::spin(2));
        assert!(matches!(jordan_product(&a, &b), Err(Error::DescriptorMismatch)));
        assert!(matches!(inner(&a, &b), Err(Error::DescriptorMismatch)));
        assert!(Element::new(&Algebra::hadamard(2), vec![1.0]).is_err());
    }

    #[test]
    fn spectral_examples() {
        let h = Algebra::hadamard(2);
        let sd = spectral(&el(&h, &[3.0, -1.0])).unwrap();
        assert_eq!(sd.eigenvalues, vec![3.0, -1.0]);
        close(&sd.frame[0], &[1.0, 0.0], 0.0);
        close(&sd.frame[1], &[0.0, 1.0], 0.0);

        let s = Algebra::sym(2);
        let x = Element::from_sym_matrix(&s, &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
            .unwrap();
        let sd = spectral(&x).unwrap();
        assert_abs_diff_eq!(sd.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sd.eigenvalues[1], -1.0, epsilon = 1e-14);
        let r2 = std::f64::consts::SQRT_2;
        // ½[[1,1],[1,1]] and ½[[1,-1],[-1,1]] in the orthonormal basis
        close(&sd.frame[0], &[0.5, 0.5 * r2, 0.5], 1e-14);
        close(&sd.frame[1], &[0.5, -0.5 * r2, 0.5], 1e-14);

        let sp = Algebra::spin(3);
        let sd = spectral(&el(&sp, &[1.0, 3.0, 4.0])).unwrap();
        assert_eq!(sd.eigenvalues, vec![6.0, -4.0]);
        close(&sd.frame[0], &[0.5, 0.3, 0.4], 1e-15);
        close(&sd.frame[1], &[0.5, -0.3, -0.4], 1e-15);
    }

    #[test]
    fn spin_with_zero_vector_part_gets_a_frame() {
        let sp = Algebra::spin(3);
        let sd = spectral(&el(&sp, &[2.0, 0.0, 0.0])).unwrap();
        assert_eq!(sd.eigenvalues, vec![2.0, 2.0]);
        for c in &sd.frame {
            assert!(is_primitive(c, 1e-12));
        }
        close(&sd.reconstruct(), &[2.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn idempotent_and_primitive_examples() {
        let h = Algebra::hadamard(3);
        let c = el(&h, &[1.0, 0.0, 1.0]);
        assert!(is_idempotent(&c, 1e-12));
        assert!(!is_primitive(&c, 1e-12));
        let sp = Algebra::spin(3);
        let c = el(&sp, &[0.5, 0.5, 0.0]);
        assert!(is_idempotent(&c, 1e-12));
        assert!(is_primitive(&c, 1e-12));
        let s = Algebra::sym(2);
        let half_i = el(&s, &[0.5, 0.0, 0.5]);
        assert!(!is_idempotent(&half_i, 1e-12));
        assert!(!is_primitive(&Element::zeros(&s), 1e-12));
    }

    #[test]
    fn cone_membership_examples() {
        let h = Algebra::hadamard(3);
        assert!(in_symmetric_cone(&el(&h, &[0.0, 2.0, 5.0]), 1e-12));
        let sp = Algebra::spin(3);
        assert!(in_symmetric_cone(&el(&sp, &[2.0, 2.0, 0.0]), 1e-12));
        let s = Algebra::sym(2);
        let x = Element::from_sym_matrix(&s, &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]))
            .unwrap();
        assert!(!in_symmetric_cone(&x, 1e-12));
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = Algebra::from_json(
            r#"{"factors":[{"kind":"hadamard","n":2},{"kind":"sym","n":3}]}"#,
        )
        .unwrap();
        assert_eq!(random_element(&a, 9), random_element(&a, 9));
        assert_ne!(random_element(&a, 9), random_element(&a, 10));
        let k = random_cone_element(&a, 4);
        assert!(in_symmetric_cone(&k, 1e-12));
    }

    #[test]
    fn cone_projection_clips() {
        let s = Algebra::sym(2);
        let x = Element::from_sym_matrix(&s, &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
            .unwrap();
        let p = x.project_to_cone().unwrap();
        let r2 = std::f64::consts::SQRT_2;
        close(&p, &[0.5, 0.5 * r2, 0.5], 1e-14);
    }
}
