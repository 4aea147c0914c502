//! Peirce decompositions.
//!
//! Relative to an idempotent `c` the algebra splits orthogonally into the
//! eigenspaces `E(c,0) ⊕ E(c,½) ⊕ E(c,1)` of `y ↦ c∘y`. Relative to a Jordan
//! frame `c_0, ..., c_{r-1}` it splits further into `E_ij` for `i <= j`, with
//! `E_ii = R c_i` and `E_ij = E(c_i,½) ∩ E(c_j,½)`.
//!
//! Frame indices are 0-based throughout.

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{
    idempotency_residual, identity, is_primitive, multiplication_operator, same_algebra,
    spectral, AlgebraRef, Element,
};
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_range, symmetric_eigen};

/// Rank cutoff used when orthonormalizing the range of a projector product.
pub const RANK_CUTOFF: f64 = 1e-8;

/// An index pair `(i, j)` with `i <= j`. The derived ordering is the
/// lexicographic order `(0,0) ⪯ (0,1) ⪯ ... ⪯ (r-1,r-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pair {
    pub i: usize,
    pub j: usize,
}

impl Pair {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i > j {
            return Err(Error::InvalidInput(format!("pair ({i},{j}) needs i <= j")));
        }
        Ok(Pair { i, j })
    }

    /// Builds a pair from two indices in either order.
    pub fn sorted(a: usize, b: usize) -> Self {
        Pair {
            i: a.min(b),
            j: a.max(b),
        }
    }

    pub fn diagonal(i: usize) -> Self {
        Pair { i, j: i }
    }

    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }

    /// All pairs for rank `r`, in lexicographic order.
    pub fn all(r: usize) -> impl Iterator<Item = Pair> {
        (0..r).flat_map(move |i| (i..r).map(move |j| Pair { i, j }))
    }

    /// Position of this pair in [`Pair::all`].
    pub fn index(&self, r: usize) -> usize {
        self.i * r - self.i * self.i.saturating_sub(1) / 2 + (self.j - self.i)
    }

    pub fn count(r: usize) -> usize {
        r * (r + 1) / 2
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A subspace given by an orthonormal basis (columns) and its orthogonal projector.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: DMatrix<f64>,
    projector: DMatrix<f64>,
}

impl Subspace {
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        let projector = &basis * basis.transpose();
        Subspace { basis, projector }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn projector(&self) -> &DMatrix<f64> {
        &self.projector
    }

    pub fn basis_elements(&self, algebra: &AlgebraRef) -> Vec<Element> {
        self.basis
            .column_iter()
            .map(|c| Element::from_raw(algebra, c.iter().copied().collect()))
            .collect()
    }

    pub fn project(&self, x: &Element) -> Element {
        let v = &self.projector * x.to_vector();
        Element::from_raw(x.algebra(), v.iter().copied().collect())
    }

    /// Coordinates of the projection of `x` in this subspace's basis.
    pub fn local_coords(&self, x: &Element) -> nalgebra::DVector<f64> {
        self.basis.transpose() * x.to_vector()
    }

    pub fn contains(&self, x: &Element, tol: f64) -> bool {
        self.project(x).distance(x) <= tol * x.norm().max(1.0)
    }
}

/// The three Peirce spaces of an idempotent.
#[derive(Clone, Debug)]
pub struct IdempotentSplit {
    idempotent: Element,
    zero: Subspace,
    half: Subspace,
    one: Subspace,
}

impl IdempotentSplit {
    pub fn idempotent(&self) -> &Element {
        &self.idempotent
    }

    pub fn algebra(&self) -> &AlgebraRef {
        self.idempotent.algebra()
    }

    /// `E(c,0)`.
    pub fn zero(&self) -> &Subspace {
        &self.zero
    }

    /// `E(c,½)`.
    pub fn half(&self) -> &Subspace {
        &self.half
    }

    /// `E(c,1)`.
    pub fn one(&self) -> &Subspace {
        &self.one
    }

    pub fn spaces(&self) -> [&Subspace; 3] {
        [&self.zero, &self.half, &self.one]
    }
}

/// Eigenspace split of `y ↦ c∘y` at eigenvalues `{0, ½, 1}`.
pub fn peirce_halves(c: &Element, tol: f64) -> Result<IdempotentSplit> {
    let residual = idempotency_residual(c);
    if residual > tol {
        return Err(Error::InvalidIdempotent { residual });
    }
    let cluster = tol.max(1e-10);
    let eig = symmetric_eigen(&multiplication_operator(c))?;
    let mut groups: [Vec<usize>; 3] = Default::default();
    for (k, &l) in eig.values.iter().enumerate() {
        let slot = [0.0, 0.5, 1.0]
            .iter()
            .position(|t| (l - t).abs() <= cluster)
            .ok_or_else(|| {
                Error::NumericalFailure(format!(
                    "multiplication operator has stray eigenvalue {l:.6e}"
                ))
            })?;
        groups[slot].push(k);
    }
    let n = c.algebra().dim();
    let space = |idx: &[usize]| {
        let cols: Vec<_> = idx.iter().map(|&k| eig.vectors.column(k).into_owned()).collect();
        if cols.is_empty() {
            Subspace::from_orthonormal(DMatrix::zeros(n, 0))
        } else {
            Subspace::from_orthonormal(DMatrix::from_columns(&cols))
        }
    };
    Ok(IdempotentSplit {
        idempotent: c.clone(),
        zero: space(&groups[0]),
        half: space(&groups[1]),
        one: space(&groups[2]),
    })
}

/// An ordered Jordan frame.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct JordanFrame {
    elements: Vec<Element>,
}

impl JordanFrame {
    /// Checks primitivity, pairwise orthogonality and `Σ cᵢ = e` within `tol`.
    pub fn new(elements: Vec<Element>, tol: f64) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidFrame("empty frame".into()));
        };
        let alg = first.algebra().clone();
        if elements.iter().any(|c| !same_algebra(c.algebra(), &alg)) {
            return Err(Error::DescriptorMismatch);
        }
        if elements.len() != alg.rank() {
            return Err(Error::InvalidFrame(format!(
                "frame has {} elements, algebra rank is {}",
                elements.len(),
                alg.rank()
            )));
        }
        for (k, c) in elements.iter().enumerate() {
            if !is_primitive(c, tol) {
                return Err(Error::InvalidFrame(format!("element {k} is not a primitive idempotent")));
            }
        }
        for a in 0..elements.len() {
            for b in (a + 1)..elements.len() {
                let p = elements[a].jordan(&elements[b]).norm();
                if p > tol {
                    return Err(Error::InvalidFrame(format!(
                        "elements {a} and {b} are not orthogonal (|c∘d| = {p:.3e})"
                    )));
                }
            }
        }
        let sum = elements
            .iter()
            .fold(Element::zeros(&alg), |acc, c| &acc + c);
        let gap = sum.distance(&identity(&alg));
        if gap > tol {
            return Err(Error::InvalidFrame(format!(
                "frame does not sum to the identity (gap {gap:.3e})"
            )));
        }
        Ok(JordanFrame { elements })
    }

    /// The frame of a spectral decomposition, in its order.
    pub fn of_element(x: &Element, tol: f64) -> Result<Self> {
        Self::new(spectral(x)?.frame, tol)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn algebra(&self) -> &AlgebraRef {
        self.elements[0].algebra()
    }
}

impl std::ops::Index<usize> for JordanFrame {
    type Output = Element;
    fn index(&self, i: usize) -> &Element {
        &self.elements[i]
    }
}

fn lex_desc(a: &Element, b: &Element) -> std::cmp::Ordering {
    for (p, q) in a.coords().iter().zip(b.coords()) {
        match q.total_cmp(p) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Completes an idempotent `c` to a Jordan frame `c_0, ..., c_{r-1}` with
/// `c = c_p + ... + c_{r-1}`.
///
/// The returned `p` is the 0-based index of the first frame element inside
/// `c`; elements `0..p` form a frame of `E(c,0)` and sum to `e - c`.
pub fn complete_frame(c: &Element, tol: f64) -> Result<(JordanFrame, usize)> {
    let residual = idempotency_residual(c);
    if residual > tol {
        return Err(Error::InvalidIdempotent { residual });
    }
    if c.is_zero(tol) {
        return Err(Error::InvalidInput("cannot complete the zero idempotent".into()));
    }
    let sd = spectral(c)?;
    let (mut low, mut high): (Vec<_>, Vec<_>) = sd
        .eigenvalues
        .iter()
        .zip(sd.frame)
        .partition(|(l, _)| **l < 0.5);
    low.sort_by(|a, b| lex_desc(&a.1, &b.1));
    high.sort_by(|a, b| lex_desc(&a.1, &b.1));
    let p = low.len();
    let elements = low.into_iter().chain(high).map(|(_, c)| c).collect();
    Ok((JordanFrame::new(elements, tol)?, p))
}

/// The fine Peirce decomposition relative to a Jordan frame.
#[derive(Clone, Debug)]
pub struct PeirceSystem {
    frame: JordanFrame,
    spaces: Vec<Subspace>,
}

/// Peirce spaces `E_ij` of a frame; `E_ij` for `i < j` is the joint
/// `½`-eigenspace of the two multiplication operators.
pub fn fine_peirce(frame: &JordanFrame, tol: f64) -> Result<PeirceSystem> {
    let alg = frame.algebra().clone();
    let r = frame.len();
    let mut halves = Vec::with_capacity(r);
    let mut diag = Vec::with_capacity(r);
    for (i, c) in frame.elements().iter().enumerate() {
        let split = peirce_halves(c, tol)?;
        if split.one().dim() != 1 {
            return Err(Error::InvalidFrame(format!(
                "E(c_{i},1) has dimension {}, expected 1",
                split.one().dim()
            )));
        }
        let unit = c.scale(1.0 / c.norm());
        diag.push(Subspace::from_orthonormal(DMatrix::from_column_slice(
            alg.dim(),
            1,
            unit.coords(),
        )));
        halves.push(split.half.projector);
    }
    let mut spaces = Vec::with_capacity(Pair::count(r));
    for pair in Pair::all(r) {
        if pair.is_diagonal() {
            spaces.push(diag[pair.i].clone());
        } else {
            let (a, b) = (&halves[pair.i], &halves[pair.j]);
            let meet = (a * b + b * a) * 0.5;
            spaces.push(Subspace::from_orthonormal(orthonormal_range(&meet, RANK_CUTOFF)));
        }
    }
    let total: usize = spaces.iter().map(Subspace::dim).sum();
    if total != alg.dim() {
        return Err(Error::NumericalFailure(format!(
            "Peirce spaces have total dimension {total}, algebra has {}",
            alg.dim()
        )));
    }
    Ok(PeirceSystem {
        frame: frame.clone(),
        spaces,
    })
}

impl PeirceSystem {
    pub fn frame(&self) -> &JordanFrame {
        &self.frame
    }

    pub fn algebra(&self) -> &AlgebraRef {
        self.frame.algebra()
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> {
        Pair::all(self.rank())
    }

    pub fn check_pair(&self, pair: Pair) -> Result<()> {
        if pair.i > pair.j || pair.j >= self.rank() {
            return Err(Error::InvalidInput(format!(
                "pair {pair} out of range for rank {}",
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn space(&self, pair: Pair) -> Result<&Subspace> {
        self.check_pair(pair)?;
        Ok(&self.spaces[pair.index(self.rank())])
    }

    /// The `E_ij` component of `x`.
    pub fn project(&self, x: &Element, pair: Pair) -> Result<Element> {
        if !same_algebra(x.algebra(), self.algebra()) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.space(pair)?.project(x))
    }

    /// All components of `x`, in lexicographic pair order.
    pub fn components(&self, x: &Element) -> Result<Vec<(Pair, Element)>> {
        self.pairs().map(|p| Ok((p, self.project(x, p)?))).collect()
    }

    /// `(c_i∘x², c_j∘x²)` for `x ∈ E_ij`, `i != j`.
    pub fn square_split(&self, x: &Element, pair: Pair, tol: f64) -> Result<(Element, Element)> {
        if pair.is_diagonal() {
            return Err(Error::InvalidInput("square_split needs i != j".into()));
        }
        if !self.space(pair)?.contains(x, tol) {
            return Err(Error::InvalidInput(format!("element is not in E{pair}")));
        }
        let sq = x.square();
        Ok((self.frame[pair.i].jordan(&sq), self.frame[pair.j].jordan(&sq)))
    }
}

impl Serialize for PeirceSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Space {
            i: usize,
            j: usize,
            dim: usize,
            basis: Vec<Vec<f64>>,
        }
        let spaces: Vec<Space> = self
            .pairs()
            .zip(&self.spaces)
            .map(|(p, sp)| Space {
                i: p.i,
                j: p.j,
                dim: sp.dim(),
                basis: sp
                    .basis()
                    .column_iter()
                    .map(|c| c.iter().copied().collect())
                    .collect(),
            })
            .collect();
        let mut st = s.serialize_struct("PeirceSystem", 3)?;
        st.serialize_field("algebra", &self.algebra().spec())?;
        st.serialize_field("frame", &self.frame)?;
        st.serialize_field("spaces", &spaces)?;
        st.end()
    }
}
