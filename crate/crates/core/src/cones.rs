//! Copositivity over a symmetric cone and completely positive elements.
//!
//! Deciding `A ∈ COP(K)` is hard in general, so [`in_cop`] is tiered:
//! closed forms for `Hadamard(2)` and single spin factors, a few sufficient
//! conditions, and a seeded multistart search that can only ever refute.
//! A report is `certified_not_copositive` only when it carries a witness.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    identity, in_symmetric_cone, random_element_from, same_algebra, scaled_tol, AlgebraRef,
    Element, Factor,
};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::operators::{quadratic_form, tensor_square, Operator, SelfAdjointOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CopStatus {
    CertifiedCopositive,
    CertifiedNotCopositive,
    Inconclusive,
}

/// Which tier decided the status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CopMethod {
    ExactHadamard2,
    ExactSpin,
    SufficientCondition,
    SampledMultistart,
}

#[derive(Clone, Debug, Serialize)]
pub struct CopReport {
    pub status: CopStatus,
    /// Best value of `x•A(x)` found over `K ∩ {‖x‖ = 1}`.
    pub min_value: f64,
    pub witness: Option<Element>,
    pub method: CopMethod,
    pub detail: String,
}

impl CopReport {
    pub fn is_copositive(&self) -> bool {
        self.status == CopStatus::CertifiedCopositive
    }
}

/// Multistart search effort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub starts: usize,
    pub iterations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            starts: 64,
            iterations: 500,
        }
    }
}

/// Decides copositivity of `a` over the cone of squares, up to `tol`.
///
/// `certified_copositive` means `x•A(x) ≥ -tol·max(1,‖A‖)` on the unit
/// sphere of `K` by a closed form or a sufficient condition;
/// `certified_not_copositive` always carries a cone element with
/// `x•A(x) < -tol`.
pub fn in_cop(a: &SelfAdjointOp, budget: Budget, seed: u64, tol: f64) -> Result<CopReport> {
    in_cop_with_candidates(a, budget, seed, tol, &[])
}

/// [`in_cop`] with extra starting points for the search.
pub fn in_cop_with_candidates(
    a: &SelfAdjointOp,
    budget: Budget,
    seed: u64,
    tol: f64,
    candidates: &[Element],
) -> Result<CopReport> {
    let alg = a.algebra().clone();
    let slack = scaled_tol(tol, a.norm());
    let factors = alg.factors();

    if factors == [Factor::Hadamard { n: 2 }] {
        let m = a.matrix();
        let (value, x) = hadamard2_min(m[(0, 0)], m[(1, 1)], m[(0, 1)]);
        let witness = Element::new(&alg, x.to_vec())?;
        let rule = hadamard2_rule(m[(0, 0)], m[(1, 1)], m[(0, 1)]);
        let (status, witness) = if rule {
            (CopStatus::CertifiedCopositive, None)
        } else if value < -tol {
            (CopStatus::CertifiedNotCopositive, Some(witness))
        } else {
            (CopStatus::Inconclusive, None)
        };
        return Ok(CopReport {
            status,
            min_value: value,
            witness,
            method: CopMethod::ExactHadamard2,
            detail: "closed-form 2x2 rule".into(),
        });
    }

    let mut extra: Vec<Element> = candidates.to_vec();
    let mut exact_spin: Option<bool> = None;
    if let [Factor::Spin { .. }] = factors {
        let (margin, mu, cand) = spin_s_lemma(a.matrix())?;
        exact_spin = Some(margin >= -slack);
        extra.extend(cand.into_iter().map(|v| Element::from_raw(&alg, v)));
        if exact_spin == Some(true) {
            let (value, _) = min_quadratic_with_starts(a, budget, seed, &extra)?;
            if value >= -tol {
                return Ok(CopReport {
                    status: CopStatus::CertifiedCopositive,
                    min_value: value,
                    witness: None,
                    method: CopMethod::ExactSpin,
                    detail: format!("A - {mu:.6e} J is positive semidefinite up to {margin:.3e}"),
                });
            }
        }
    }

    let sufficient = if exact_spin.is_none() {
        sufficient_condition(a, slack)?
    } else {
        None
    };
    let (value, x) = min_quadratic_with_starts(a, budget, seed, &extra)?;

    if value < -tol && in_symmetric_cone(&x, 1e-12) {
        return Ok(CopReport {
            status: CopStatus::CertifiedNotCopositive,
            min_value: value,
            witness: Some(x),
            method: match exact_spin {
                Some(_) => CopMethod::ExactSpin,
                None => CopMethod::SampledMultistart,
            },
            detail: "cone element with negative quadratic form".into(),
        });
    }
    if let Some(reason) = sufficient {
        return Ok(CopReport {
            status: CopStatus::CertifiedCopositive,
            min_value: value,
            witness: None,
            method: CopMethod::SufficientCondition,
            detail: reason,
        });
    }
    let detail = match exact_spin {
        Some(false) => "no nonnegative multiple of J makes A positive semidefinite, but no witness was found".into(),
        _ => format!(
            "no certificate; best value over {} starts is {value:.3e}",
            budget.starts
        ),
    };
    Ok(CopReport {
        status: CopStatus::Inconclusive,
        min_value: value,
        witness: None,
        method: match exact_spin {
            Some(_) => CopMethod::ExactSpin,
            None => CopMethod::SampledMultistart,
        },
        detail,
    })
}

/// The 2x2 rule: `a₁₁, a₂₂ ≥ 0` and `a₁₂ + √(a₁₁a₂₂) ≥ 0`.
pub fn hadamard2_rule(a11: f64, a22: f64, a12: f64) -> bool {
    a11 >= 0.0 && a22 >= 0.0 && a12 + (a11 * a22).sqrt() >= 0.0
}

/// Exact minimum of `x•Ax` over the unit quarter circle and a minimizer.
///
/// With `x = (cos φ, sin φ)` the form is `m + p cos 2φ + q sin 2φ`, so the
/// minimum is at an endpoint or, when `a₁₂ ≤ 0`, at the interior critical
/// angle.
pub fn hadamard2_min(a11: f64, a22: f64, a12: f64) -> (f64, [f64; 2]) {
    let mut best = if a11 <= a22 {
        (a11, [1.0, 0.0])
    } else {
        (a22, [0.0, 1.0])
    };
    if a12 <= 0.0 {
        let m = 0.5 * (a11 + a22);
        let p = 0.5 * (a11 - a22);
        let q = a12;
        let v = m - p.hypot(q);
        if v < best.0 {
            let theta = (-q).atan2(-p);
            let phi = 0.5 * theta;
            best = (v, [phi.cos(), phi.sin()]);
        }
    }
    best
}

fn signature(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n, n);
    for k in 1..n {
        j[(k, k)] = -1.0;
    }
    j
}

/// `max_{μ≥0} λ_min(A − μJ)` for a single spin factor, with the maximizing
/// `μ` and candidate witnesses from the bottom eigenvector.
///
/// `μ ↦ λ_min(A − μJ)` is concave and bounded by `a₀₀ − μ`, so a golden
/// section search on `[0, max(a₀₀, 0)]` finds the maximum.
pub fn spin_s_lemma(a: &DMatrix<f64>) -> Result<(f64, f64, Vec<Vec<f64>>)> {
    let n = a.nrows();
    let j = signature(n);
    let f = |mu: f64| -> Result<(f64, DMatrix<f64>)> {
        let e = symmetric_eigen(&(a - &j * mu))?;
        Ok((e.min_value(), e.vectors.columns(n - 1, 1).into_owned()))
    };
    let hi = a[(0, 0)].max(0.0);
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut up) = (0.0, hi);
    let mut x1 = up - golden * (up - lo);
    let mut x2 = lo + golden * (up - lo);
    let mut f1 = f(x1)?.0;
    let mut f2 = f(x2)?.0;
    for _ in 0..200 {
        if up - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (up - lo);
            f2 = f(x2)?.0;
        } else {
            up = x2;
            x2 = x1;
            f2 = f1;
            x1 = up - golden * (up - lo);
            f1 = f(x1)?.0;
        }
    }
    let mut best = (f(0.0)?, 0.0);
    for mu in [hi, 0.5 * (lo + up)] {
        let v = f(mu)?;
        if v.0 > best.0 .0 {
            best = (v, mu);
        }
    }
    let ((margin, vec), mu) = best;
    let v: Vec<f64> = vec.iter().copied().collect();
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    Ok((margin, mu, vec![v, neg, e]))
}

/// Checks the sufficient conditions and names the first one that holds.
fn sufficient_condition(a: &SelfAdjointOp, slack: f64) -> Result<Option<String>> {
    let m = a.matrix();
    let eig = symmetric_eigen(m)?;
    if eig.min_value() >= -slack {
        return Ok(Some("positive semidefinite".into()));
    }
    let alg = a.algebra();
    if alg.is_orthant() {
        if m.iter().all(|&v| v >= -slack) {
            return Ok(Some("entrywise nonnegative".into()));
        }
        let n = m.nrows();
        let mut p = m.clone();
        for r in 0..n {
            for c in 0..n {
                if r != c && m[(r, c)] > 0.0 {
                    p[(r, c)] = 0.0;
                }
            }
        }
        if symmetric_eigen(&p)?.min_value() >= -slack {
            return Ok(Some("positive semidefinite plus nonnegative split".into()));
        }
    }
    if let Some((x, y)) = rank_two_cone_factors(m, &eig, slack) {
        let (x, y) = (Element::from_raw(alg, x), Element::from_raw(alg, y));
        let t = scaled_tol(slack, x.norm().max(y.norm()));
        let both = |s: f64| in_symmetric_cone(&x.scale(s), t) && in_symmetric_cone(&y.scale(s), t);
        if both(1.0) || both(-1.0) {
            return Ok(Some("a⊗b + b⊗a with a, b in the same cone half".into()));
        }
    }
    Ok(None)
}

/// If `m` has exactly one positive and one negative eigenvalue (the rest
/// within `slack` of zero), returns `a, b` with `m = abᵀ + baᵀ`.
fn rank_two_cone_factors(
    m: &DMatrix<f64>,
    eig: &crate::linalg::SymEigen,
    slack: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = m.nrows();
    if n < 2 {
        return None;
    }
    let (top, bottom) = (eig.values[0], eig.values[n - 1]);
    if top <= slack || bottom >= -slack {
        return None;
    }
    if eig.values[1..n - 1].iter().any(|v| v.abs() > slack) {
        return None;
    }
    let (s, t) = (top.sqrt(), (-bottom).sqrt());
    let (u, w) = (eig.vectors.column(0), eig.vectors.column(n - 1));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a = (u * s + w * t) * r;
    let b = (u * s - w * t) * r;
    Some((a.iter().copied().collect(), b.iter().copied().collect()))
}

/// Best value of `x•A(x)` over `K ∩ {‖x‖ = 1}` found by multistart
/// projected gradient descent, and the point attaining it.
pub fn min_quadratic_over_cone(a: &SelfAdjointOp, budget: Budget, seed: u64) -> Result<(f64, Element)> {
    min_quadratic_with_starts(a, budget, seed, &[])
}

/// [`min_quadratic_over_cone`] with additional starting points.
///
/// Every start is projected onto the cone and normalized; starts with a
/// zero projection are skipped. Besides `budget.starts` random cone
/// elements, the normalized identity and `±` eigenvectors of `A` are used.
pub fn min_quadratic_with_starts(
    a: &SelfAdjointOp,
    budget: Budget,
    seed: u64,
    extra: &[Element],
) -> Result<(f64, Element)> {
    let alg = a.algebra().clone();
    for x in extra {
        if !same_algebra(x.algebra(), &alg) {
            return Err(Error::DescriptorMismatch);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Element> = Vec::new();
    starts.push(identity(&alg));
    let eig = symmetric_eigen(a.matrix())?;
    for col in eig.vectors.column_iter().rev() {
        let v = Element::from_raw(&alg, col.iter().copied().collect());
        starts.push(v.clone());
        starts.push(-&v);
    }
    starts.extend(extra.iter().cloned());
    for _ in 0..budget.starts {
        starts.push(random_element_from(&alg, &mut rng).square());
    }

    let mut best: Option<(f64, Element)> = None;
    for s in starts {
        let Some(x0) = normalize_into_cone(&s)? else {
            continue;
        };
        let (v, x) = descend(a, x0, budget.iterations)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
    }
    best.ok_or_else(|| Error::NumericalFailure("no usable starting point".into()))
}

fn normalize_into_cone(x: &Element) -> Result<Option<Element>> {
    let p = x.project_to_cone()?;
    let n = p.norm();
    if n <= 1e-300 || !n.is_finite() {
        return Ok(None);
    }
    Ok(Some(p.scale(1.0 / n)))
}

fn descend(a: &SelfAdjointOp, mut x: Element, iterations: usize) -> Result<(f64, Element)> {
    let scale = a.norm().max(1e-300);
    let mut fx = quadratic_form(a, &x)?;
    let mut step = 0.5 / scale;
    for _ in 0..iterations {
        let g = a.apply(&x).scale(2.0);
        let mut moved = false;
        for _ in 0..40 {
            if let Some(y) = normalize_into_cone(&x.axpy(-step, &g))? {
                let fy = quadratic_form(a, &y)?;
                if fy < fx {
                    let gain = fx - fy;
                    x = y;
                    fx = fy;
                    moved = gain > 1e-16 * scale;
                    step *= 2.0;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok((fx, x))
}

/// `Σ hᵢ⊗hᵢ` together with its generators.
#[derive(Clone, Debug)]
pub struct CpElement {
    generators: Vec<Element>,
    op: SelfAdjointOp,
}

impl CpElement {
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn op(&self) -> &SelfAdjointOp {
        &self.op
    }

    /// `⟨A, H⟩ = Σ hᵢ•A(hᵢ)`.
    pub fn dual_pairing(&self, a: &SelfAdjointOp) -> Result<f64> {
        if !same_algebra(a.algebra(), self.op.algebra()) {
            return Err(Error::DescriptorMismatch);
        }
        self.generators
            .iter()
            .map(|h| quadratic_form(a, h))
            .sum()
    }
}

/// Assembles `Σ hᵢ⊗hᵢ`; every generator must lie in `K` up to `tol`.
pub fn make_cp(algebra: &AlgebraRef, generators: Vec<Element>, tol: f64) -> Result<CpElement> {
    let mut offenders = Vec::new();
    let mut op = SelfAdjointOp::zero(algebra);
    for (k, h) in generators.iter().enumerate() {
        if !same_algebra(h.algebra(), algebra) {
            return Err(Error::DescriptorMismatch);
        }
        if !in_symmetric_cone(h, scaled_tol(tol, h.norm())) {
            offenders.push(k);
            continue;
        }
        op = &op + &tensor_square(h);
    }
    if !offenders.is_empty() {
        return Err(Error::InvalidGenerator { offenders });
    }
    Ok(CpElement { generators, op })
}

/// `⟨A, H⟩` for a completely positive `H`.
pub fn dual_pairing(a: &SelfAdjointOp, h: &CpElement) -> Result<f64> {
    h.dual_pairing(a)
}
