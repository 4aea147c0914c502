//! Faces of the copositive cone attached to idempotents, and the
//! certificate that `R₊·c⊗c` is an extreme ray that no single completely
//! positive element exposes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    identity, idempotency_residual, in_symmetric_cone, is_idempotent, is_primitive,
    random_element_from, same_algebra, spectral, AlgebraSpec, Element,
};
use crate::caselaw::{basis_inputs, curve_for_case, low_quadruples, FrameContext};
use crate::cones::{in_cop, in_cop_with_candidates, make_cp, Budget, CopReport, CopStatus};
use crate::error::{Error, Result};
use crate::operators::{
    principal_corner, quadratic_form, sym_tensor, tensor_square, trace_inner, zero_pad, CornerOp,
    Operator, SelfAdjointOp,
};
use crate::peirce::{peirce_halves, IdempotentSplit};

/// The face `{0} ⊕ COP(E(c,1)₊)` of `COP(E₊)`.
#[derive(Clone, Debug)]
pub struct FaceDescriptor {
    split: IdempotentSplit,
}

impl FaceDescriptor {
    pub fn idempotent(&self) -> &Element {
        self.split.idempotent()
    }

    pub fn split(&self) -> &IdempotentSplit {
        &self.split
    }

    /// `dim E(c,1)`.
    pub fn corner_dim(&self) -> usize {
        self.split.one().dim()
    }

    /// Dimension of the span of the face, `k(k+1)/2` for `k = dim E(c,1)`.
    pub fn dim(&self) -> usize {
        let k = self.corner_dim();
        k * (k + 1) / 2
    }

    pub fn is_zero_face(&self) -> bool {
        self.corner_dim() == 0
    }

    pub fn is_whole_cone(&self) -> bool {
        self.corner_dim() == self.split.algebra().dim()
    }

    pub fn embed(&self, g: &CornerOp) -> Result<SelfAdjointOp> {
        zero_pad(g, &self.split)
    }

    pub fn corner_of(&self, a: &SelfAdjointOp) -> Result<CornerOp> {
        principal_corner(a, &self.split)
    }

    /// Distance from `a` to the span of the face.
    pub fn support_residual(&self, a: &SelfAdjointOp) -> Result<f64> {
        let back = self.embed(&self.corner_of(a)?)?;
        Ok((a - &back).norm())
    }
}

pub fn face_from_idempotent(c: &Element, tol: f64) -> Result<FaceDescriptor> {
    let residual = idempotency_residual(c);
    if residual > tol {
        return Err(Error::InvalidIdempotent { residual });
    }
    Ok(FaceDescriptor {
        split: peirce_halves(c, tol)?,
    })
}

/// `d = e − c`, which exposes `R₊c` in `K` when `c` is primitive.
pub fn exposing_vector(c: &Element, tol: f64) -> Result<Element> {
    if !is_primitive(c, tol) {
        return Err(Error::InvalidInput("c is not a primitive idempotent".into()));
    }
    let d = &identity(c.algebra()) - c;
    if d.is_zero(tol) {
        return Err(Error::HypothesisViolation("c = e, so the cone is a single ray".into()));
    }
    Ok(d)
}

/// For `x ∈ K`: `(x•d, ‖x − (x•c/‖c‖²)c‖)`. The second value must vanish
/// whenever the first does.
pub fn exposure_residual(c: &Element, d: &Element, x: &Element) -> (f64, f64) {
    let along = x.dot(c) / c.dot(c);
    (x.dot(d), x.axpy(-along, c).norm())
}

/// Tolerances a certificate is checked against.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WitnessTolerances {
    pub idempotency: f64,
    pub orthogonality: f64,
    pub norm_identity: f64,
    pub ray_pairing: f64,
    pub sampled_form: f64,
    pub cop_min_value: f64,
    pub probe_pairing: f64,
    pub probe_ray: f64,
}

impl Default for WitnessTolerances {
    fn default() -> Self {
        WitnessTolerances {
            idempotency: 1e-9,
            orthogonality: 1e-12,
            norm_identity: 1e-9,
            ray_pairing: 1e-10,
            sampled_form: 1e-9,
            cop_min_value: 1e-8,
            probe_pairing: 1e-9,
            probe_ray: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessResiduals {
    /// `‖c∘c − c‖`.
    pub idempotency: f64,
    pub primitive: bool,
    /// `c•d`.
    pub orthogonality: f64,
    /// `|‖A‖² − 2‖c‖²‖d‖²|`.
    pub norm_identity: f64,
    /// `‖A‖²` in the trace inner product.
    pub a_norm_squared: f64,
    /// `⟨A, c⊗c⟩`.
    pub ray_pairing: f64,
    /// Smallest `x•A(x)/‖x‖²` over sampled cone points.
    pub sampled_min_form: f64,
    /// Largest `|x•A(x) − 2(c•x)(d•x)|/‖x‖²` over the same points.
    pub sampled_form_error: f64,
}

/// One candidate exposer `H = Σ hᵢ⊗hᵢ` with `hᵢ ∈ K ∩ {c}⊥`.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub generators: usize,
    /// `⟨c⊗c, H⟩`.
    pub ray_pairing: f64,
    /// `⟨A, H⟩`.
    pub witness_pairing: f64,
    /// `H` is refuted: `c⊗c ∈ {H}⊥` and `A ∈ COP ∩ {H}⊥` off the ray.
    pub refuted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Valid,
    Invalid,
}

/// Evidence that `R₊·c⊗c` is a non-exposed extreme ray of `COP(K)`.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub algebra: AlgebraSpec,
    pub c: Element,
    pub d: Element,
    /// `A = c⊗d + d⊗c`, row-major.
    pub a: Vec<Vec<f64>>,
    pub seed: u64,
    pub residuals: WitnessResiduals,
    pub copositivity: CopReport,
    pub probes: Vec<ProbeResult>,
    pub tolerances: WitnessTolerances,
    pub status: CertificateStatus,
    pub failures: Vec<String>,
    pub scope: String,
}

impl WitnessCertificate {
    pub fn is_valid(&self) -> bool {
        self.status == CertificateStatus::Valid
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

const SCOPE: &str = "Each probe refutes one sampled candidate exposer. \
Non-exposedness quantifies over every completely positive H and is not checked at runtime.";

/// Builds and checks the witness `A = c⊗d + d⊗c` for a primitive `c`.
///
/// `samples` sets both the number of sampled cone points for the form
/// identity and the number of probe exposers.
pub fn build_witness(c: &Element, samples: usize, seed: u64, tol: f64) -> Result<WitnessCertificate> {
    build_witness_with(c, samples, seed, tol, WitnessTolerances::default(), Budget::default())
}

pub fn build_witness_with(
    c: &Element,
    samples: usize,
    seed: u64,
    tol: f64,
    tolerances: WitnessTolerances,
    budget: Budget,
) -> Result<WitnessCertificate> {
    let alg = c.algebra().clone();
    if alg.dim() < 2 {
        return Err(Error::HypothesisViolation(format!(
            "the algebra has dimension {}, at least 2 is required",
            alg.dim()
        )));
    }
    let d = exposing_vector(c, tol)?;
    let a = sym_tensor(c, &d)?;
    let cc = tensor_square(c);

    let a_sq = trace_inner(&a, &a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled_min_form = f64::INFINITY;
    let mut sampled_form_error: f64 = 0.0;
    for _ in 0..samples {
        let x = random_element_from(&alg, &mut rng).square();
        let n2 = x.dot(&x);
        let q = quadratic_form(&a, &x)?;
        sampled_min_form = sampled_min_form.min(q / n2);
        sampled_form_error = sampled_form_error.max((q - 2.0 * c.dot(&x) * d.dot(&x)).abs() / n2);
    }
    let residuals = WitnessResiduals {
        idempotency: idempotency_residual(c),
        primitive: is_primitive(c, tol),
        orthogonality: c.dot(&d),
        norm_identity: (a_sq - 2.0 * c.dot(c) * d.dot(&d)).abs(),
        a_norm_squared: a_sq,
        ray_pairing: trace_inner(&a, &cc)?,
        sampled_min_form,
        sampled_form_error,
    };

    let copositivity = in_cop(&a, budget, seed, tol)?;

    let zero_space = peirce_halves(c, tol)?.zero().clone();
    let mut probes = Vec::with_capacity(samples);
    for _ in 0..samples {
        let m = rng.random_range(1..=alg.dim());
        let mut gens = Vec::with_capacity(m);
        for _ in 0..m {
            let h = zero_space.project(&random_element_from(&alg, &mut rng).square());
            let n = h.norm();
            if n > 0.0 {
                gens.push(h.scale(1.0 / n));
            }
        }
        let h = make_cp(&alg, gens, tol)?;
        let ray_pairing = trace_inner(&cc, h.op())?;
        let witness_pairing = trace_inner(&a, h.op())?;
        probes.push(ProbeResult {
            generators: h.generators().len(),
            ray_pairing,
            witness_pairing,
            refuted: witness_pairing.abs() <= tolerances.probe_pairing
                && ray_pairing.abs() <= tolerances.probe_ray,
        });
    }

    let mut failures = Vec::new();
    let mut need = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    let r = &residuals;
    need(r.idempotency <= tolerances.idempotency, format!("idempotency residual {:.3e}", r.idempotency));
    need(r.primitive, "c is not primitive".into());
    need(r.orthogonality.abs() <= tolerances.orthogonality, format!("c•d = {:.3e}", r.orthogonality));
    need(r.norm_identity <= tolerances.norm_identity, format!("norm identity residual {:.3e}", r.norm_identity));
    need(r.ray_pairing.abs() <= tolerances.ray_pairing, format!("<A, c⊗c> = {:.3e}", r.ray_pairing));
    need(r.a_norm_squared > tolerances.norm_identity, "A vanishes".into());
    if samples > 0 {
        need(r.sampled_min_form >= -tolerances.sampled_form, format!("sampled x•A(x) = {:.3e}", r.sampled_min_form));
        need(r.sampled_form_error <= tolerances.sampled_form, format!("x•A(x) ≠ 2(c•x)(d•x) by {:.3e}", r.sampled_form_error));
    }
    need(
        copositivity.status == CopStatus::CertifiedCopositive
            || (copositivity.status == CopStatus::Inconclusive
                && copositivity.min_value >= -tolerances.cop_min_value),
        format!("copositivity: {:?}, min {:.3e}", copositivity.status, copositivity.min_value),
    );
    let unrefuted = probes.iter().filter(|p| !p.refuted).count();
    need(unrefuted == 0, format!("{unrefuted} probe exposers not refuted"));

    Ok(WitnessCertificate {
        algebra: alg.spec(),
        c: c.clone(),
        d,
        a: a.matrix().row_iter().map(|row| row.iter().copied().collect()).collect(),
        seed,
        residuals,
        copositivity,
        probes,
        tolerances,
        status: if failures.is_empty() {
            CertificateStatus::Valid
        } else {
            CertificateStatus::Invalid
        },
        failures,
        scope: SCOPE.into(),
    })
}

/// Re-checks the algebraic part of a serialized certificate from its own
/// data: the algebra, `c`, `d`, `A` and the embedded tolerances. Returns the
/// list of failed checks.
pub fn verify_certificate_json(text: &str) -> Result<Vec<String>> {
    #[derive(serde::Deserialize)]
    struct Tol {
        idempotency: f64,
        orthogonality: f64,
        norm_identity: f64,
        ray_pairing: f64,
        probe_pairing: f64,
        probe_ray: f64,
    }
    #[derive(serde::Deserialize)]
    struct Probe {
        ray_pairing: f64,
        witness_pairing: f64,
    }
    #[derive(serde::Deserialize)]
    struct Cert {
        algebra: AlgebraSpec,
        c: Vec<f64>,
        d: Vec<f64>,
        a: Vec<Vec<f64>>,
        probes: Vec<Probe>,
        tolerances: Tol,
    }
    let cert: Cert = serde_json::from_str(text)?;
    let alg = std::sync::Arc::new(crate::algebra::Algebra::try_from(cert.algebra)?);
    let c = Element::new(&alg, cert.c)?;
    let d = Element::new(&alg, cert.d)?;
    let rows: Vec<&[f64]> = cert.a.iter().map(Vec::as_slice).collect();
    let a = SelfAdjointOp::from_rows(&alg, &rows)?;
    let t = cert.tolerances;
    let mut failures = Vec::new();
    if !is_idempotent(&c, t.idempotency) || !is_primitive(&c, t.idempotency) {
        failures.push("c is not a primitive idempotent".to_string());
    }
    if d.distance(&(&identity(&alg) - &c)) > t.idempotency {
        failures.push("d differs from e − c".into());
    }
    if c.dot(&d).abs() > t.orthogonality {
        failures.push("c•d is not zero".into());
    }
    let rebuilt = sym_tensor(&c, &d)?;
    if (&a - &rebuilt).norm() > t.norm_identity {
        failures.push("A differs from c⊗d + d⊗c".into());
    }
    if (trace_inner(&a, &a)? - 2.0 * c.dot(&c) * d.dot(&d)).abs() > t.norm_identity {
        failures.push("norm identity fails".into());
    }
    if trace_inner(&a, &tensor_square(&c))?.abs() > t.ray_pairing {
        failures.push("<A, c⊗c> is not zero".into());
    }
    if !in_symmetric_cone(&c, t.idempotency) || !in_symmetric_cone(&d, t.idempotency) {
        failures.push("c or d is outside the cone".into());
    }
    let bad = cert
        .probes
        .iter()
        .filter(|p| p.witness_pairing.abs() > t.probe_pairing || p.ray_pairing.abs() > t.probe_ray)
        .count();
    if bad > 0 {
        failures.push(format!("{bad} recorded probes exceed their tolerances"));
    }
    Ok(failures)
}

/// Outcome of the split search for one `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitStatus {
    ViolationFound,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitRow {
    pub t: f64,
    pub status: SplitStatus,
    /// `"A"` for `M/2 + tD`, `"B"` for `M/2 − tD`.
    pub half: Option<String>,
    pub source: Option<String>,
    /// `x•X(x)/‖x‖²` at the witness.
    pub value: Option<f64>,
    pub witness: Option<Element>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceSplitReport {
    pub p: usize,
    pub padded: CopStatus,
    /// `‖D − P*P D P*P‖` with `P` the projection onto `E(c,1)`.
    pub off_corner_norm: f64,
    pub rows: Vec<SplitRow>,
}

impl FaceSplitReport {
    pub fn all_found(&self) -> bool {
        self.rows.iter().all(|r| r.status == SplitStatus::ViolationFound)
    }
}

/// `ε` values at which case curves are evaluated.
pub const CURVE_EPS: [f64; 13] = [1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5, 1.0];

/// Splits `zero_pad(G)` as `(M/2 + tD) + (M/2 − tD)` and looks for a cone
/// element on which one half is negative. The case curves of every
/// quadruple with `i < p` are tried first with `±` basis inputs, then a
/// multistart search seeded with the best curve points.
pub fn face_split_probe(
    ctx: &FrameContext,
    g: &CornerOp,
    d: &SelfAdjointOp,
    t_grid: &[f64],
    budget: Budget,
    seed: u64,
    tol: f64,
) -> Result<FaceSplitReport> {
    if !same_algebra(d.algebra(), ctx.split.algebra()) {
        return Err(Error::DescriptorMismatch);
    }
    let m = zero_pad(g, &ctx.split)?;
    let padded = in_cop(&m, budget, seed, tol)?.status;
    let corner = zero_pad(&principal_corner(d, &ctx.split)?, &ctx.split)?;
    let off_corner_norm = (d - &corner).norm();

    let mut points: Vec<(String, Element)> = Vec::new();
    for (q, tag) in low_quadruples(ctx)? {
        for inputs in basis_inputs(&ctx.system, &q)? {
            let curve = curve_for_case(tag, &ctx.system, &q, &inputs, 1e-8)?;
            for eps in CURVE_EPS {
                let x = curve.eval(eps);
                if in_symmetric_cone(&x, 1e-13) && !x.is_zero(1e-300) {
                    points.push((format!("{tag} curve {q} at ε = {eps:e}"), x));
                }
            }
        }
    }

    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut best: Option<(String, String, f64, Element)> = None;
        for (name, sign) in [("A", 1.0), ("B", -1.0)] {
            let half = m.scale(0.5).axpy(sign * t, d);
            for (source, x) in &points {
                let v = quadratic_form(&half, x)? / x.dot(x);
                if v < -tol && best.as_ref().is_none_or(|b| v < b.2) {
                    best = Some((name.into(), source.clone(), v, x.clone()));
                }
            }
        }
        if best.is_none() {
            for (name, sign) in [("A", 1.0), ("B", -1.0)] {
                let half = m.scale(0.5).axpy(sign * t, d);
                let report = in_cop_with_candidates(&half, budget, seed, tol, &[])?;
                if let Some(w) = report.witness {
                    best = Some((name.into(), "multistart".into(), report.min_value, w));
                    break;
                }
            }
        }
        rows.push(match best {
            Some((half, source, value, x)) => SplitRow {
                t,
                status: SplitStatus::ViolationFound,
                half: Some(half),
                source: Some(source),
                value: Some(value),
                witness: Some(x.scale(1.0 / x.norm())),
            },
            None => SplitRow {
                t,
                status: SplitStatus::Unresolved,
                half: None,
                source: None,
                value: None,
                witness: None,
            },
        });
    }
    Ok(FaceSplitReport {
        p: ctx.p,
        padded,
        off_corner_norm,
        rows,
    })
}

/// Primitive idempotents of the frame of a seeded random element.
pub fn spectral_frame(algebra: &crate::algebra::AlgebraRef, seed: u64) -> Result<Vec<Element>> {
    Ok(spectral(&crate::algebra::random_element(algebra, seed))?.frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraRef};
    use crate::operators::Operator;
    use approx::assert_abs_diff_eq;

    fn el(alg: &AlgebraRef, c: &[f64]) -> Element {
        Element::new(alg, c.to_vec()).unwrap()
    }

    #[test]
    fn face_descriptor_extremes() {
        let s = Algebra::sym(2);
        let whole = face_from_idempotent(&identity(&s), 1e-9).unwrap();
        assert!(whole.is_whole_cone());
        assert_eq!(whole.dim(), 6);
        let zero = face_from_idempotent(&Element::zeros(&s), 1e-9).unwrap();
        assert!(zero.is_zero_face());
        assert_eq!(zero.dim(), 0);
        let c = Element::basis(&s, 0);
        let ray = face_from_idempotent(&c, 1e-9).unwrap();
        assert_eq!(ray.dim(), 1);
        let g = ray.embed(&CornerOp::identity(1)).unwrap();
        assert!(crate::linalg::max_abs_diff(g.matrix(), tensor_square(&c).matrix()) < 1e-15);
        assert!(ray.support_residual(&g).unwrap() < 1e-15);
        assert!(ray.support_residual(&SelfAdjointOp::identity(&s)).unwrap() > 0.5);
        assert!(face_from_idempotent(&el(&s, &[0.5, 0.0, 0.0]), 1e-9).is_err());
    }

    #[test]
    fn exposing_vector_examples() {
        let h = Algebra::hadamard(2);
        assert_eq!(exposing_vector(&el(&h, &[1.0, 0.0]), 1e-9).unwrap().coords(), &[0.0, 1.0]);
        let sp = Algebra::spin(3);
        let d = exposing_vector(&el(&sp, &[0.5, 0.5, 0.0]), 1e-9).unwrap();
        assert_eq!(d.coords(), &[0.5, -0.5, 0.0]);
        assert_eq!(d.dot(&el(&sp, &[0.5, 0.5, 0.0])), 0.0);
        let s = Algebra::sym(2);
        assert_eq!(exposing_vector(&Element::basis(&s, 0), 1e-9).unwrap().coords(), Element::basis(&s, 2).coords());
        assert!(exposing_vector(&identity(&s), 1e-9).is_err());
        assert!(matches!(
            exposing_vector(&identity(&Algebra::hadamard(1)), 1e-9),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn hadamard2_witness_is_exact() {
        let h = Algebra::hadamard(2);
        let cert = build_witness(&el(&h, &[1.0, 0.0]), 50, 1, 1e-9).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.failures);
        assert_eq!(cert.a, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(cert.residuals.norm_identity, 0.0);
        assert_eq!(cert.residuals.ray_pairing, 0.0);
        assert_eq!(cert.residuals.a_norm_squared, 2.0);
        assert_eq!(cert.copositivity.status, CopStatus::CertifiedCopositive);
        assert!(verify_certificate_json(&cert.to_json().unwrap()).unwrap().is_empty());
    }

    #[test]
    fn sym2_and_spin3_witnesses() {
        let s = Algebra::sym(2);
        let cert = build_witness(&Element::basis(&s, 0), 50, 2, 1e-9).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.failures);
        let x = el(&s, &[2.0, 0.5, 3.0]);
        let a = SelfAdjointOp::from_rows(&s, &cert.a.iter().map(Vec::as_slice).collect::<Vec<_>>()).unwrap();
        assert_abs_diff_eq!(quadratic_form(&a, &x).unwrap(), 12.0, epsilon = 1e-12);

        let sp = Algebra::spin(3);
        let cert = build_witness(&el(&sp, &[0.5, 0.5, 0.0]), 50, 3, 1e-9).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.failures);
        assert_eq!(cert.copositivity.method, crate::cones::CopMethod::ExactSpin);
    }

    #[test]
    fn witness_rejects_bad_input() {
        assert!(matches!(
            build_witness(&identity(&Algebra::hadamard(1)), 5, 0, 1e-9),
            Err(Error::HypothesisViolation(_))
        ));
        let s = Algebra::sym(2);
        assert!(build_witness(&identity(&s), 5, 0, 1e-9).is_err());
    }

    #[test]
    fn tampered_certificate_is_caught() {
        let h = Algebra::hadamard(3);
        let cert = build_witness(&el(&h, &[0.0, 1.0, 0.0]), 10, 1, 1e-9).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&cert.to_json().unwrap()).unwrap();
        v["a"][0][1] = serde_json::json!(0.5);
        v["a"][1][0] = serde_json::json!(0.5);
        assert!(!verify_certificate_json(&v.to_string()).unwrap().is_empty());
    }

    #[test]
    fn exposure_of_the_ray() {
        let s = Algebra::sym(3);
        let frame = spectral_frame(&s, 11).unwrap();
        let c = &frame[0];
        let d = exposing_vector(c, 1e-9).unwrap();
        let (dot, off) = exposure_residual(c, &d, &c.scale(3.0));
        assert!(dot.abs() < 1e-12 && off < 1e-12);
        let (dot, _) = exposure_residual(c, &d, &frame[1]);
        assert!(dot > 0.5);
    }

    #[test]
    fn face_split_sym2_example() {
        let s = Algebra::sym(2);
        let c = Element::basis(&s, 0);
        let ctx = FrameContext::new(&c, 1e-9).unwrap();
        let m = Element::basis(&s, 1);
        let d = sym_tensor(&c, &m).unwrap();
        let grid = [-1.0, -0.1, -0.01, 0.01, 0.1, 1.0];
        let rep = face_split_probe(&ctx, &CornerOp::identity(1), &d, &grid, Budget::default(), 0, 1e-9).unwrap();
        assert_eq!(rep.padded, CopStatus::CertifiedCopositive);
        assert!(rep.off_corner_norm > 0.5);
        assert!(rep.all_found(), "{:?}", rep.rows);
        assert!(rep.rows.iter().all(|r| r.source.as_deref().unwrap().contains("curve")));

        let rep = face_split_probe(&ctx, &CornerOp::identity(1), &d, &[0.0], Budget::default(), 0, 1e-9).unwrap();
        assert_eq!(rep.rows[0].status, SplitStatus::Unresolved);

        let inside = tensor_square(&c).scale(0.25);
        let rep = face_split_probe(&ctx, &CornerOp::identity(1), &inside, &grid, Budget::default(), 0, 1e-9).unwrap();
        assert_eq!(rep.off_corner_norm, 0.0);
        assert!(rep.rows.iter().all(|r| r.status == SplitStatus::Unresolved));
    }
}
