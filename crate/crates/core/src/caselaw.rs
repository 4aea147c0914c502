//! Block quadruples, their eleven equality patterns, and the perturbation
//! curves that isolate one Peirce block of a quadratic form at a time.
//!
//! A quadruple `(i,j,k,l)` names the block `A_{ij,kl}`. For each pattern
//! there is a curve `x(ε)` in the cone whose form `x(ε)•A(x(ε))` has that
//! block's pairing as its lowest-order coefficient once the blocks of
//! earlier patterns vanish. Expansions are computed exactly by convolving
//! the curve's coefficients.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{random_element_from, same_algebra, scaled_tol, Element};
use crate::error::{Error, Result};
use crate::operators::{block, zero_pad, CornerOp, Operator, SelfAdjointOp};
use crate::peirce::{complete_frame, fine_peirce, peirce_halves, IdempotentSplit, JordanFrame, Pair, PeirceSystem};

/// Indices `(i,j,k,l)` naming the block `A_{ij,kl}`; 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Quadruple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl Quadruple {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Self {
        Quadruple { i, j, k, l }
    }

    pub fn from_pairs(p: Pair, q: Pair) -> Self {
        Quadruple::new(p.i, p.j, q.i, q.j)
    }

    /// Checks `i ≤ j`, `k ≤ l` and `(i,j) ⪯ (k,l)` lexicographically.
    pub fn check_admissible(&self) -> Result<()> {
        if self.i > self.j {
            return Err(Error::InvalidInput(format!("{self}: needs i <= j")));
        }
        if self.k > self.l {
            return Err(Error::InvalidInput(format!("{self}: needs k <= l")));
        }
        if (self.i, self.j) > (self.k, self.l) {
            return Err(Error::InvalidInput(format!(
                "{self}: needs (i,j) <= (k,l) lexicographically"
            )));
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    pub fn left(&self) -> Pair {
        Pair { i: self.i, j: self.j }
    }

    pub fn right(&self) -> Pair {
        Pair { i: self.k, j: self.l }
    }

    pub fn max_index(&self) -> usize {
        self.i.max(self.j).max(self.k).max(self.l)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i, self.j, self.k, self.l)
    }
}

/// One of the eleven equality patterns, numbered 1 to 11.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CaseTag(u8);

impl CaseTag {
    pub fn new(value: u8) -> Result<Self> {
        if (1..=11).contains(&value) {
            Ok(CaseTag(value))
        } else {
            Err(Error::InvalidInput(format!("case tag {value} is not in 1..=11")))
        }
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = CaseTag> {
        (1..=11).map(CaseTag)
    }

    /// Order of `ε` at which the block pairing first appears in `α`.
    pub fn leading_order(&self) -> usize {
        [0, 1, 1, 2, 5, 1, 2, 3, 3, 3, 3][self.0 as usize - 1]
    }

    /// `γ(x(ε)) = O(ε^m)` for curves with `i < p`; `None` when `γ` vanishes
    /// identically.
    pub fn gamma_order(&self) -> Option<usize> {
        match self.0 {
            1 => None,
            3 | 6 => Some(2),
            5 => Some(6),
            _ => Some(4),
        }
    }

    /// The curve's input pairs, e.g. `E_il` for case 2.
    pub fn required_inputs(&self, q: &Quadruple) -> Vec<Pair> {
        let ij = q.left();
        let kl = q.right();
        match self.0 {
            1 | 3 => vec![],
            2 | 6 => vec![kl],
            4 | 5 | 8 => vec![ij],
            _ => vec![ij, kl],
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// The equality pattern of an admissible quadruple.
pub fn classify(q: &Quadruple) -> Result<CaseTag> {
    q.check_admissible()?;
    let Quadruple { i, j, k, l } = *q;
    let tag = match (i == j, i == k, i == l, j == k, j == l, k == l) {
        (true, true, true, _, _, _) => 1,
        (true, true, false, _, _, _) => 2,
        (false, false, false, true, true, true) => 5,
        (true, false, _, _, _, true) => 3,
        (false, true, false, false, true, false) => 4,
        (true, false, false, false, false, false) => 6,
        (false, true, false, false, false, false) => 7,
        (false, false, false, false, false, true) => 8,
        (false, false, false, false, true, false) => 9,
        (false, false, false, true, false, false) => 10,
        (false, false, false, false, false, false) => 11,
        _ => {
            return Err(Error::InvalidInput(format!(
                "{q}: equality pattern is not realised by an admissible quadruple"
            )))
        }
    };
    Ok(CaseTag(tag))
}

/// All admissible quadruples for rank `r` in lexicographic order of their
/// pairs, with their tags.
pub fn enumerate_quadruples(r: usize) -> Result<Vec<(Quadruple, CaseTag)>> {
    let pairs: Vec<Pair> = Pair::all(r).collect();
    let mut out = Vec::new();
    for (s, &p) in pairs.iter().enumerate() {
        for &q in &pairs[s..] {
            let quad = Quadruple::from_pairs(p, q);
            out.push((quad, classify(&quad)?));
        }
    }
    Ok(out)
}

/// Number of quadruples per tag; index 0 holds case 1.
pub fn case_counts(r: usize) -> Result<[usize; 11]> {
    let mut counts = [0; 11];
    for (_, t) in enumerate_quadruples(r)? {
        counts[t.0 as usize - 1] += 1;
    }
    Ok(counts)
}

/// Blocks `A_{P,Q}` with `P ⪯ Q`, `P` starting at `q.i`, whose tag precedes
/// that of `q`. Zeroing them leaves the block of `q` as the lowest-order term
/// of `α` along the curve of `q`.
pub fn earlier_blocks(q: &Quadruple, r: usize) -> Result<Vec<(Pair, Pair)>> {
    let tag = classify(q)?;
    let mut out = Vec::new();
    for (quad, t) in enumerate_quadruples(r)? {
        if quad.i == q.i && t < tag {
            out.push((quad.left(), quad.right()));
        }
    }
    Ok(out)
}

/// A Jordan frame completing an idempotent `c`, with its Peirce data.
///
/// Frame elements `0..p` lie in `E(c,0)` and `p..r` in `E(c,1)`.
#[derive(Clone, Debug)]
pub struct FrameContext {
    pub split: IdempotentSplit,
    pub system: PeirceSystem,
    pub p: usize,
}

impl FrameContext {
    pub fn new(c: &Element, tol: f64) -> Result<Self> {
        let split = peirce_halves(c, tol)?;
        let (frame, p) = complete_frame(c, tol)?;
        let system = fine_peirce(&frame, tol)?;
        Ok(FrameContext { split, system, p })
    }

    pub fn idempotent(&self) -> &Element {
        self.split.idempotent()
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }
}

/// Polynomial in `ε` with element coefficients, dense by degree.
#[derive(Clone, Debug)]
struct ElemPoly(Vec<Element>);

impl ElemPoly {
    fn monomial(deg: usize, x: &Element) -> Self {
        let mut v = vec![Element::zeros(x.algebra()); deg + 1];
        v[deg] = x.clone();
        ElemPoly(v)
    }

    fn add(&self, other: &ElemPoly) -> ElemPoly {
        let alg = self.0[0].algebra();
        let n = self.0.len().max(other.0.len());
        ElemPoly(
            (0..n)
                .map(|k| match (self.0.get(k), other.0.get(k)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => Element::zeros(alg),
                })
                .collect(),
        )
    }

    fn shift(&self, by: usize) -> ElemPoly {
        let alg = self.0[0].algebra();
        let mut v = vec![Element::zeros(alg); by];
        v.extend(self.0.iter().cloned());
        ElemPoly(v)
    }

    fn square(&self) -> ElemPoly {
        let alg = self.0[0].algebra();
        let n = self.0.len();
        let mut out = vec![Element::zeros(alg); 2 * n - 1];
        for a in 0..n {
            for b in 0..n {
                out[a + b] = &out[a + b] + &self.0[a].jordan(&self.0[b]);
            }
        }
        ElemPoly(out)
    }
}

/// `x(ε) = Σ ε^k x_k` for one quadruple.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationCurve {
    pub tag: CaseTag,
    pub quadruple: Quadruple,
    pub inputs: Vec<(Pair, Element)>,
    /// Nonzero coefficients by ascending degree.
    pub terms: Vec<(usize, Element)>,
}

impl PerturbationCurve {
    pub fn eval(&self, eps: f64) -> Element {
        let alg = self.terms[0].1.algebra();
        self.terms
            .iter()
            .fold(Element::zeros(alg), |acc, (k, x)| acc.axpy(eps.powi(*k as i32), x))
    }

    pub fn degree(&self) -> usize {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn coefficient(&self, k: usize) -> Option<&Element> {
        self.terms.iter().find(|t| t.0 == k).map(|t| &t.1)
    }
}

/// Builds the curve of case `tag` for quadruple `q`.
///
/// `inputs` must hold an element of `E_P` for every pair `P` in
/// [`CaseTag::required_inputs`]; other entries are ignored.
pub fn curve_for_case(
    tag: CaseTag,
    system: &PeirceSystem,
    q: &Quadruple,
    inputs: &BTreeMap<Pair, Element>,
    tol: f64,
) -> Result<PerturbationCurve> {
    let actual = classify(q)?;
    if actual != tag {
        return Err(Error::InvalidInput(format!("{q} follows pattern {actual}, not {tag}")));
    }
    if q.max_index() >= system.rank() {
        return Err(Error::InvalidInput(format!("{q} out of range for rank {}", system.rank())));
    }
    let mut used = Vec::new();
    for pair in tag.required_inputs(q) {
        let x = inputs
            .get(&pair)
            .ok_or_else(|| Error::InvalidInput(format!("missing component x_{pair}")))?;
        if !same_algebra(x.algebra(), system.algebra()) {
            return Err(Error::DescriptorMismatch);
        }
        if !system.space(pair)?.contains(x, scaled_tol(tol, x.norm())) {
            return Err(Error::InvalidInput(format!("component x_{pair} is not in E{pair}")));
        }
        used.push((pair, x.clone()));
    }
    let frame = system.frame();
    let c = |a: usize| frame[a].clone();
    let x = |a: usize| &used[a].1;
    let mono = ElemPoly::monomial;
    let Quadruple { i, j, k, l } = *q;
    let poly = match tag.0 {
        1 => mono(0, &c(i)),
        2 | 4 => mono(0, &c(i)).add(&mono(1, x(0))).square(),
        3 => mono(0, &c(i)).add(&mono(1, &c(l))),
        5 => mono(0, &c(i)).add(&mono(2, x(0))).square().add(&mono(3, &c(j))),
        6 => mono(0, &c(i)).add(&mono(0, &c(k)).add(&mono(0, x(0))).square().shift(1)),
        7 => mono(0, &c(i))
            .add(&mono(1, x(0)))
            .square()
            .add(&mono(0, &c(i)).add(&mono(1, x(1))).square()),
        8 => mono(0, &c(i)).add(&mono(1, x(0))).square().add(&mono(2, &c(l))),
        _ => mono(0, &c(i))
            .add(&mono(1, x(0)))
            .square()
            .add(&mono(0, &c(k)).add(&mono(0, x(1))).square().shift(2)),
    };
    let terms = poly
        .0
        .into_iter()
        .enumerate()
        .filter(|(_, e)| e.coords().iter().any(|v| *v != 0.0))
        .collect();
    Ok(PerturbationCurve {
        tag,
        quadruple: *q,
        inputs: used,
        terms,
    })
}

/// Random inputs for the curve of `q`: standard normal elements projected
/// onto each required Peirce space.
pub fn random_inputs<R: Rng + ?Sized>(
    system: &PeirceSystem,
    q: &Quadruple,
    rng: &mut R,
) -> Result<BTreeMap<Pair, Element>> {
    let tag = classify(q)?;
    let mut out = BTreeMap::new();
    for pair in tag.required_inputs(q) {
        let y = random_element_from(system.algebra(), rng);
        out.insert(pair, system.project(&y, pair)?);
    }
    Ok(out)
}

/// All input maps built from `±` basis vectors of the required spaces.
pub fn basis_inputs(system: &PeirceSystem, q: &Quadruple) -> Result<Vec<BTreeMap<Pair, Element>>> {
    let tag = classify(q)?;
    let mut maps = vec![BTreeMap::new()];
    for pair in tag.required_inputs(q) {
        let basis = system.space(pair)?.basis_elements(system.algebra());
        let choices: Vec<Element> = if basis.is_empty() {
            vec![Element::zeros(system.algebra())]
        } else {
            basis.iter().flat_map(|b| [b.clone(), -b]).collect()
        };
        maps = maps
            .into_iter()
            .flat_map(|m| {
                choices.iter().map(move |x| {
                    let mut m = m.clone();
                    m.insert(pair, x.clone());
                    m
                })
            })
            .collect();
    }
    Ok(maps)
}

/// Coefficients of a scalar polynomial in `ε`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsExpansion {
    pub coeffs: Vec<f64>,
}

impl EpsExpansion {
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }

    /// Largest `|coefficient|` of degree below `k`.
    pub fn max_below(&self, k: usize) -> f64 {
        self.coeffs.iter().take(k).fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Lowest degree whose coefficient exceeds `tol` in magnitude.
    pub fn order(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.abs() > tol)
    }
}

/// Exact coefficients of `ε ↦ x(ε)•A(x(ε))`:
/// `Σ_{a+b=k} x_a•A(x_b)`.
pub fn eps_expand<A: Operator>(a: &A, curve: &PerturbationCurve) -> Result<EpsExpansion> {
    if !same_algebra(a.algebra(), curve.terms[0].1.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let images: Vec<Element> = curve.terms.iter().map(|(_, x)| a.apply(x)).collect();
    let mut coeffs = vec![0.0; 2 * curve.degree() + 1];
    for (da, xa) in &curve.terms {
        for ((db, _), axb) in curve.terms.iter().zip(&images) {
            coeffs[da + db] += xa.dot(axb);
        }
    }
    Ok(EpsExpansion { coeffs })
}

/// The same coefficients recovered by interpolating `quadratic_form` at
/// Chebyshev nodes on `[0.1, 1]`.
pub fn eps_expand_interpolated<A: Operator>(a: &A, curve: &PerturbationCurve) -> Result<EpsExpansion> {
    let n = 2 * curve.degree() + 1;
    let nodes: Vec<f64> = (0..n)
        .map(|m| {
            let t = ((2 * m + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.55 + 0.45 * t
        })
        .collect();
    let vander = DMatrix::from_fn(n, n, |r, c| nodes[r].powi(c as i32));
    let values = nodes
        .iter()
        .map(|&e| crate::operators::quadratic_form(a, &curve.eval(e)))
        .collect::<Result<Vec<f64>>>()?;
    let coeffs = vander
        .lu()
        .solve(&DVector::from_vec(values))
        .ok_or_else(|| Error::NumericalFailure("interpolation system is singular".into()))?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericalFailure("interpolation produced non-finite values".into()));
    }
    Ok(EpsExpansion {
        coeffs: coeffs.iter().copied().collect(),
    })
}

/// Expansion of `γ(x(ε)) = x(ε)•P*GP(x(ε))` for a corner operator `G`.
///
/// Requires a completion with `p > 0` and a curve whose first index lies
/// in `E(c,0)`, i.e. `q.i < p`.
pub fn gamma_expand(g: &CornerOp, ctx: &FrameContext, curve: &PerturbationCurve) -> Result<EpsExpansion> {
    if ctx.p == 0 {
        return Err(Error::HypothesisViolation(
            "c = e leaves no frame element in E(c,0)".into(),
        ));
    }
    if curve.quadruple.i >= ctx.p {
        return Err(Error::HypothesisViolation(format!(
            "curve index i = {} is not below p = {}",
            curve.quadruple.i, ctx.p
        )));
    }
    eps_expand(&zero_pad(g, &ctx.split)?, curve)
}

/// The pairing the curve of `q` isolates, computed from Peirce blocks in
/// local coordinates, and the `ε` order at which it appears.
pub fn expected_leading<A: Operator>(a: &A, curve: &PerturbationCurve, system: &PeirceSystem) -> Result<(usize, f64)> {
    let q = curve.quadruple;
    let frame = system.frame();
    let input = |pair: Pair| -> Result<&Element> {
        curve
            .inputs
            .iter()
            .find(|(p, _)| *p == pair)
            .map(|(_, x)| x)
            .ok_or_else(|| Error::InvalidInput(format!("curve has no input for {pair}")))
    };
    let pairing = |p: Pair, x: &Element, r: Pair, y: &Element| -> Result<f64> {
        let b = block(a, system, p, r)?;
        let u = system.space(p)?.local_coords(x);
        let v = system.space(r)?.local_coords(y);
        Ok(u.dot(&(&b.matrix * v)))
    };
    let (ii, ij, kl) = (Pair::diagonal(q.i), q.left(), q.right());
    let c_i = &frame[q.i];
    let value = match curve.tag.0 {
        1 => pairing(ii, c_i, ii, c_i)?,
        2 | 6 => 2.0 * pairing(ii, c_i, kl, input(kl)?)?,
        3 => 2.0 * pairing(ii, c_i, kl, &frame[q.l])?,
        4 => pairing(ij, input(ij)?, ij, input(ij)?)?,
        5 | 8 => 2.0 * pairing(ij, input(ij)?, kl, &frame[q.l])?,
        _ => 2.0 * pairing(ij, input(ij)?, kl, input(kl)?)?,
    };
    Ok((curve.tag.leading_order(), value))
}

/// `a` with the blocks of [`earlier_blocks`] removed.
pub fn with_earlier_blocks_zeroed(a: &SelfAdjointOp, system: &PeirceSystem, q: &Quadruple) -> Result<SelfAdjointOp> {
    crate::operators::without_blocks(a, system, &earlier_blocks(q, system.rank())?)
}

/// Every admissible quadruple with `i < p` and its tag.
pub fn low_quadruples(ctx: &FrameContext) -> Result<Vec<(Quadruple, CaseTag)>> {
    Ok(enumerate_quadruples(ctx.rank())?
        .into_iter()
        .filter(|(q, _)| q.i < ctx.p)
        .collect())
}

/// A Jordan frame in the given order without completion.
pub fn system_of(frame: Vec<Element>, tol: f64) -> Result<PeirceSystem> {
    fine_peirce(&JordanFrame::new(frame, tol)?, tol)
}
