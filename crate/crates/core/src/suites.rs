//! Seeded invariant suites over a fixed matrix of algebras.
//!
//! Each suite measures worst-case residuals and compares them with a
//! limit; reports serialize deterministically so that identical seeds give
//! identical output.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{in_symmetric_cone, random_element_from, Algebra, AlgebraRef, Element, Factor};
use crate::caselaw::{
    case_counts, classify, curve_for_case, enumerate_quadruples, eps_expand, expected_leading,
    gamma_expand, random_inputs, with_earlier_blocks_zeroed, CaseTag, FrameContext, Quadruple,
};
use crate::cones::{
    hadamard2_rule, in_cop, make_cp, min_quadratic_over_cone, spin_s_lemma, Budget, CopStatus,
};
use crate::error::Result;
use crate::facial::{build_witness, exposing_vector, exposure_residual, face_split_probe, SplitStatus};
use crate::operators::{
    adjoint_check, block, expand_quadratic, quadratic_form, reassemble, sym_tensor, tensor_square,
    CornerOp, LinearOp, Operator, SelfAdjointOp,
};
use crate::peirce::{fine_peirce, JordanFrame, Pair, PeirceSystem};

pub const SUITE_NAMES: [&str; 9] = [
    "axioms", "peirce", "blocks", "cases", "curves", "expansions", "cop", "witness", "face",
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub count: usize,
    pub worst: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `worst <= limit`.
    pub fn at_most(name: impl Into<String>, count: usize, worst: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            count,
            worst,
            limit,
            pass: worst <= limit,
        }
    }

    /// Passes when the number of failures `bad` is zero.
    pub fn none_of(name: impl Into<String>, count: usize, bad: usize) -> Self {
        Check::at_most(name, count, bad as f64, 0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite: suite.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Divides every sample count by ten (at least one sample).
    pub quick: bool,
    /// Replaces the operator fixture of the block suite by a non-symmetric one.
    pub inject_fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 2024,
            quick: false,
            inject_fault: false,
        }
    }
}

impl SuiteOptions {
    fn n(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(1)
        } else {
            full
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "axioms" => axioms(opts),
        "peirce" => peirce(opts),
        "blocks" => blocks(opts),
        "cases" => cases(),
        "curves" => curves(opts),
        "expansions" => expansions(opts),
        "cop" => cop(opts),
        "witness" => witness(opts),
        "face" => face(opts),
        other => Err(crate::error::Error::InvalidInput(format!("unknown suite `{other}`"))),
    }
}

pub fn mixed_algebra() -> AlgebraRef {
    Algebra::new(vec![
        Factor::Hadamard { n: 2 },
        Factor::SymMatrix { n: 2 },
        Factor::Spin { n: 3 },
    ])
    .expect("valid factors")
}

/// Algebras used by the axiom suite: every family up to its size bound and
/// one direct sum.
pub fn axiom_algebras() -> Vec<AlgebraRef> {
    let mut v: Vec<AlgebraRef> = (1..=8).map(Algebra::hadamard).collect();
    v.extend((1..=4).map(Algebra::sym));
    v.extend((2..=8).map(Algebra::spin));
    v.push(mixed_algebra());
    v
}

/// Algebras used by the Peirce, block, curve and expansion suites.
pub fn peirce_algebras() -> Vec<AlgebraRef> {
    vec![
        Algebra::hadamard(3),
        Algebra::hadamard(4),
        Algebra::sym(2),
        Algebra::sym(3),
        Algebra::sym(4),
        Algebra::spin(3),
        Algebra::spin(5),
        mixed_algebra(),
    ]
}

/// Algebras and frames the witness suite covers.
pub fn witness_algebras() -> Vec<AlgebraRef> {
    let mut v: Vec<AlgebraRef> = (2..=5).map(Algebra::hadamard).collect();
    v.extend((3..=5).map(Algebra::spin));
    v.extend((2..=3).map(Algebra::sym));
    v
}

fn random_frame<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> Result<PeirceSystem> {
    let x = random_element_from(alg, rng);
    fine_peirce(&JordanFrame::of_element(&x, 1e-9)?, 1e-9)
}

pub fn random_op<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> SelfAdjointOp {
    let n = alg.dim();
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    SelfAdjointOp::new(alg, (&g + g.transpose()) * 0.5).expect("symmetric by construction")
}

fn random_corner<R: Rng>(k: usize, rng: &mut R) -> CornerOp {
    let g = DMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    CornerOp::new((&g + g.transpose()) * 0.5).expect("symmetric by construction")
}

fn axioms(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(1);
    let (mut comm, mut jordan, mut assoc) = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for alg in axiom_algebras() {
        for _ in 0..opts.n(200) {
            let x = random_element_from(&alg, &mut rng);
            let y = random_element_from(&alg, &mut rng);
            let z = random_element_from(&alg, &mut rng);
            let (nx, ny, nz) = (x.norm(), y.norm(), z.norm());
            comm = comm.max(x.jordan(&y).distance(&y.jordan(&x)) / (nx * ny));
            let x2 = x.square();
            let lhs = x2.jordan(&y).jordan(&x);
            let rhs = x2.jordan(&y.jordan(&x));
            jordan = jordan.max(lhs.distance(&rhs) / (nx * nx * nx * ny));
            assoc = assoc.max((x.jordan(&y).dot(&z) - x.dot(&y.jordan(&z))).abs() / (nx * ny * nz));
            count += 1;
        }
    }
    Ok(SuiteReport::new(
        "axioms",
        vec![
            Check::at_most("commutativity", count, comm, 1e-10),
            Check::at_most("jordan identity", count, jordan, 1e-10),
            Check::at_most("associative inner product", count, assoc, 1e-10),
        ],
    ))
}

/// Which factor a primitive idempotent lives in.
fn factor_of(alg: &AlgebraRef, c: &Element) -> usize {
    let offsets = alg.offsets();
    let mut best = (0, 0.0);
    for (k, f) in alg.factors().iter().enumerate() {
        let r = offsets[k]..offsets[k] + f.dim();
        let mass: f64 = c.coords()[r].iter().map(|v| v * v).sum();
        if mass > best.1 {
            best = (k, mass);
        }
    }
    best.0
}

fn peirce(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(2);
    let (mut recon, mut ortho, mut split) = (0.0f64, 0.0f64, 0.0f64);
    let mut dim_bad = 0;
    let mut count = 0;
    for alg in peirce_algebras() {
        for _ in 0..opts.n(100) {
            let sys = random_frame(&alg, &mut rng)?;
            let frame = sys.frame().elements().to_vec();
            let x = random_element_from(&alg, &mut rng);
            let comps = sys.components(&x)?;
            let sum = comps.iter().fold(Element::zeros(&alg), |acc, (_, c)| &acc + c);
            recon = recon.max(sum.distance(&x) / x.norm());
            for (s, (_, a)) in comps.iter().enumerate() {
                for (_, b) in &comps[s + 1..] {
                    ortho = ortho.max(a.dot(b).abs() / (x.norm() * x.norm()));
                }
            }
            let total: usize = sys.pairs().map(|p| sys.space(p).map(|s| s.dim()).unwrap_or(0)).sum();
            if total != alg.dim() {
                dim_bad += 1;
            }
            for p in sys.pairs() {
                let d = sys.space(p)?.dim();
                let want = if p.is_diagonal() {
                    1
                } else {
                    let fi = factor_of(&alg, &frame[p.i]);
                    let fj = factor_of(&alg, &frame[p.j]);
                    if fi != fj {
                        0
                    } else {
                        match alg.factors()[fi] {
                            Factor::Hadamard { .. } => 0,
                            Factor::SymMatrix { .. } => 1,
                            Factor::Spin { n } => n - 2,
                        }
                    }
                };
                if d != want {
                    dim_bad += 1;
                }
                if !p.is_diagonal() && d > 0 {
                    let xij = sys.project(&x, p)?;
                    let (ci, cj) = sys.square_split(&xij, p, 1e-9)?;
                    let sq = xij.square();
                    let scale = sq.norm().max(1e-300);
                    let mut r = sq.distance(&(&ci + &cj)) / scale;
                    r = r.max(sys.space(Pair::diagonal(p.i))?.project(&ci).distance(&ci) / scale);
                    r = r.max(sys.space(Pair::diagonal(p.j))?.project(&cj).distance(&cj) / scale);
                    split = split.max(r);
                }
            }
            count += 1;
        }
    }
    Ok(SuiteReport::new(
        "peirce",
        vec![
            Check::at_most("projections sum to identity", count, recon, 1e-9),
            Check::at_most("components pairwise orthogonal", count, ortho, 1e-9),
            Check::none_of("dimension bookkeeping", count, dim_bad),
            Check::at_most("x_ij squared splits over E_ii and E_jj", count, split, 1e-9),
        ],
    ))
}

fn blocks(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(3);
    let (mut adj, mut expand, mut rebuild) = (0.0f64, 0.0f64, 0.0f64);
    let mut adj_bad = 0;
    let mut count = 0;
    for alg in peirce_algebras() {
        for _ in 0..opts.n(200) {
            let sys = random_frame(&alg, &mut rng)?;
            let a = random_op(&alg, &mut rng);
            let x = random_element_from(&alg, &mut rng);
            let scale = a.norm() * x.dot(&x);
            if opts.inject_fault {
                let skew = DMatrix::from_fn(alg.dim(), alg.dim(), |r, c| if r < c { 1.0 } else { 0.0 });
                let fixture = LinearOp::new(&alg, a.matrix() + skew)?;
                adj_bad += sys
                    .pairs()
                    .flat_map(|p| sys.pairs().map(move |q| (p, q)))
                    .filter(|&(p, q)| !adjoint_check(&fixture, &sys, p, q, 1e-9))
                    .count();
            }
            for p in sys.pairs() {
                for q in sys.pairs() {
                    let b = block(&a, &sys, p, q)?;
                    let bt = block(&a, &sys, q, p)?;
                    let diff = (&b.matrix - bt.matrix.transpose()).amax();
                    adj = adj.max(diff / a.norm());
                    if !adjoint_check(&a, &sys, p, q, 1e-9 * a.norm()) {
                        adj_bad += 1;
                    }
                }
            }
            let e = expand_quadratic(&a, &sys, &x)?;
            expand = expand.max((e - quadratic_form(&a, &x)?).abs() / scale);
            let m = reassemble(&a, &sys)?;
            rebuild = rebuild.max((m - a.matrix()).amax() / a.norm());
            count += 1;
        }
    }
    Ok(SuiteReport::new(
        "blocks",
        vec![
            Check::at_most("adjoint block symmetry", count, adj, 1e-9),
            Check::none_of("adjoint_check agreement", count, adj_bad),
            Check::at_most("quadratic form expansion", count, expand, 1e-9),
            Check::at_most("reassembly from blocks", count, rebuild, 1e-9),
        ],
    ))
}

fn cases() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut bad = 0;
    let mut total = 0;
    for r in 2..=6usize {
        let listed = enumerate_quadruples(r)?;
        let p = r * (r + 1) / 2;
        if listed.len() != p * (p + 1) / 2 {
            bad += 1;
        }
        let mut seen = 0;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let q = Quadruple::new(i, j, k, l);
                        match classify(&q) {
                            Ok(t) => {
                                seen += 1;
                                if !listed.contains(&(q, t)) {
                                    bad += 1;
                                }
                            }
                            Err(_) => {
                                if q.is_admissible() {
                                    bad += 1;
                                }
                            }
                        }
                        total += 1;
                    }
                }
            }
        }
        if seen != listed.len() {
            bad += 1;
        }
        if r >= 4 && case_counts(r)?.contains(&0) {
            bad += 1;
        }
    }
    checks.push(Check::none_of("partition into eleven cases, r = 2..6", total, bad));
    let counts = case_counts(2)?;
    let want = [2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
    checks.push(Check::none_of(
        "rank-2 counts",
        6,
        counts.iter().zip(want).filter(|(a, b)| **a != *b).count(),
    ));
    Ok(SuiteReport::new("cases", checks))
}

pub const CURVE_GRID: [f64; 5] = [1e-3, 1e-2, 0.1, 1.0, 10.0];

fn curves(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(5);
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut tags_seen = [false; 11];
    for alg in peirce_algebras() {
        for _ in 0..opts.n(50) {
            let sys = random_frame(&alg, &mut rng)?;
            for (q, tag) in enumerate_quadruples(sys.rank())? {
                let inputs = random_inputs(&sys, &q, &mut rng)?;
                let curve = curve_for_case(tag, &sys, &q, &inputs, 1e-8)?;
                for eps in CURVE_GRID {
                    let x = curve.eval(eps);
                    let lmin = crate::algebra::spectral(&x)?.min_eigenvalue();
                    worst = worst.max(-lmin / x.norm().max(1.0));
                    count += 1;
                }
                tags_seen[tag.value() as usize - 1] = true;
            }
        }
    }
    Ok(SuiteReport::new(
        "curves",
        vec![
            Check::at_most("curves lie in the cone (relative negative eigenvalue)", count, worst, 1e-12),
            Check::none_of("all eleven curve families exercised", 11, tags_seen.iter().filter(|s| !**s).count()),
        ],
    ))
}

/// A random idempotent with `0 < p < r` from a random frame.
pub fn random_split_idempotent<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> Result<Element> {
    let sys = random_frame(alg, rng)?;
    let r = sys.rank();
    let out = rng.random_range(0..r);
    let mut c = Element::zeros(alg);
    let mut used = 0;
    for (k, e) in sys.frame().elements().iter().enumerate() {
        if k != out && (used == 0 || rng.random_bool(0.5)) {
            c = &c + e;
            used += 1;
        }
    }
    Ok(c)
}

fn expansions(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(6);
    let (mut lead, mut lower) = (0.0f64, 0.0f64);
    let mut count = 0;
    let mut per_tag = [0usize; 11];
    for alg in peirce_algebras() {
        for _ in 0..opts.n(20) {
            let sys = random_frame(&alg, &mut rng)?;
            let all = enumerate_quadruples(sys.rank())?;
            for tag in CaseTag::all() {
                let of_tag: Vec<&(Quadruple, CaseTag)> = all.iter().filter(|(_, t)| *t == tag).collect();
                if of_tag.is_empty() {
                    continue;
                }
                let (q, _) = *of_tag[rng.random_range(0..of_tag.len())];
                let a = with_earlier_blocks_zeroed(&random_op(&alg, &mut rng), &sys, &q)?;
                let inputs = random_inputs(&sys, &q, &mut rng)?;
                let curve = curve_for_case(tag, &sys, &q, &inputs, 1e-8)?;
                let ex = eps_expand(&a, &curve)?;
                let (order, want) = expected_leading(&a, &curve, &sys)?;
                lead = lead.max((ex.coefficient(order) - want).abs() / want.abs().max(1.0));
                lower = lower.max(ex.max_below(order));
                per_tag[tag.value() as usize - 1] += 1;
                count += 1;
            }
        }
    }
    let mut gamma = 0.0f64;
    let mut gcount = 0;
    let algs = peirce_algebras();
    for tag in CaseTag::all() {
        let mut done = 0;
        let mut attempts = 0;
        while done < opts.n(50) && attempts < 1000 {
            attempts += 1;
            let alg = &algs[attempts % algs.len()];
            let c = random_split_idempotent(alg, &mut rng)?;
            let ctx = FrameContext::new(&c, 1e-9)?;
            let low: Vec<Quadruple> = crate::caselaw::low_quadruples(&ctx)?
                .into_iter()
                .filter(|(_, t)| *t == tag)
                .map(|(q, _)| q)
                .collect();
            if low.is_empty() {
                continue;
            }
            let q = low[rng.random_range(0..low.len())];
            let g = random_corner(ctx.split.one().dim(), &mut rng);
            let inputs = random_inputs(&ctx.system, &q, &mut rng)?;
            let curve = curve_for_case(tag, &ctx.system, &q, &inputs, 1e-8)?;
            let ex = gamma_expand(&g, &ctx, &curve)?;
            let below = match tag.gamma_order() {
                Some(m) => ex.max_below(m),
                None => ex.max_below(ex.coeffs.len()),
            };
            gamma = gamma.max(below);
            done += 1;
            gcount += 1;
        }
    }
    Ok(SuiteReport::new(
        "expansions",
        vec![
            Check::at_most("leading coefficient equals block pairing (relative)", count, lead, 1e-8),
            Check::at_most("coefficients below the leading order", count, lower, 1e-9),
            Check::at_most("gamma vanishes to the stated order", gcount, gamma, 1e-9),
            Check::none_of("every case exercised", 11, per_tag.iter().filter(|c| **c == 0).count()),
        ],
    ))
}

/// Minimum of `x•Ax` over `x₁ + x₂ = 1, x ≥ 0` on a grid of step `step`.
pub fn simplex_grid_min(a11: f64, a22: f64, a12: f64, step: f64) -> f64 {
    let n = (1.0 / step).round() as usize;
    (0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            let t = 1.0 - s;
            a11 * s * s + a22 * t * t + 2.0 * a12 * s * t
        })
        .fold(f64::INFINITY, f64::min)
}

fn cop(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(7);
    let mut disagree = 0;
    let n = opts.n(1000);
    let h = Algebra::hadamard(2);
    for _ in 0..n {
        let (a11, a22, a12) = (
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
        );
        let grid = simplex_grid_min(a11, a22, a12, 1e-3);
        if grid.abs() > 1e-6 && hadamard2_rule(a11, a22, a12) != (grid >= 0.0) {
            disagree += 1;
        }
        let op = SelfAdjointOp::from_rows(&h, &[&[a11, a12], &[a12, a22]])?;
        let rep = in_cop(&op, Budget::default(), 0, 1e-9)?;
        if grid.abs() > 1e-6 && rep.is_copositive() != (grid >= 0.0) {
            disagree += 1;
        }
    }

    let mut contradictions = 0;
    let mut unsound = 0;
    let m = opts.n(200);
    for k in 0..m {
        let alg = Algebra::spin(3 + k % 3);
        let a = spin_test_op(&alg, &mut rng);
        let rep = in_cop(&a, Budget::default(), k as u64, 1e-9)?;
        let (sampled, x) = min_quadratic_over_cone(&a, Budget::default(), 1000 + k as u64)?;
        let (margin, _, _) = spin_s_lemma(a.matrix())?;
        if rep.status == CopStatus::CertifiedCopositive && sampled < -1e-9 {
            contradictions += 1;
        }
        if margin < -1e-6 && sampled > 1e-9 && in_symmetric_cone(&x, 1e-12) {
            contradictions += 1;
        }
        if let Some(w) = &rep.witness {
            if !in_symmetric_cone(w, 1e-12) || quadratic_form(&a, w)? >= -1e-9 {
                unsound += 1;
            }
        }
    }

    let mut dual_worst = 0.0f64;
    let mut dual_count = 0;
    let algs = [Algebra::hadamard(3), Algebra::sym(2), Algebra::spin(3)];
    let mut tries = 0;
    while dual_count < opts.n(100) && tries < 10_000 {
        tries += 1;
        let alg = &algs[tries % algs.len()];
        let a = random_copositive_candidate(alg, &mut rng);
        if in_cop(&a, Budget { starts: 8, iterations: 200 }, tries as u64, 1e-9)?.status != CopStatus::CertifiedCopositive {
            continue;
        }
        let gens: Vec<Element> = (0..3).map(|_| random_element_from(alg, &mut rng).square()).collect();
        let h = make_cp(alg, gens, 1e-9)?;
        dual_worst = dual_worst.max(-h.dual_pairing(&a)?);
        dual_count += 1;
    }
    Ok(SuiteReport::new(
        "cop",
        vec![
            Check::none_of("2x2 rule agrees with simplex grid", n, disagree),
            Check::none_of("spin rule agrees with multistart", m, contradictions),
            Check::none_of("refutations carry valid witnesses", m, unsound),
            Check::at_most("copositive pairs nonnegatively with completely positive", dual_count, dual_worst, 1e-8),
        ],
    ))
}

/// `M + μJ` with `M` small and random, `μ ∈ [0, 2]`: roughly half copositive.
pub fn spin_test_op<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> SelfAdjointOp {
    let n = alg.dim();
    let mu = rng.random_range(0.0..2.0);
    let m = random_op(alg, rng).scale(0.5);
    let mut j = DMatrix::identity(n, n);
    for k in 1..n {
        j[(k, k)] = -1.0;
    }
    SelfAdjointOp::new(alg, m.matrix() + j * mu).expect("symmetric")
}

fn random_copositive_candidate<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> SelfAdjointOp {
    let a = random_element_from(alg, rng).square();
    let b = random_element_from(alg, rng).square();
    let psd = {
        let g = random_op(alg, rng);
        SelfAdjointOp::new(alg, g.matrix() * g.matrix()).expect("symmetric")
    };
    match rng.random_range(0..3) {
        0 => sym_tensor(&a, &b).expect("same algebra"),
        1 => psd,
        _ => &psd.scale(0.1) + &sym_tensor(&a, &b).expect("same algebra"),
    }
}

fn witness(opts: &SuiteOptions) -> Result<SuiteReport> {
    let samples = opts.n(200);
    let mut invalid = Vec::new();
    let mut count = 0;
    let (mut ray, mut norm, mut probe, mut probe_ray) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut min_form = f64::INFINITY;
    let mut exposure_bad = 0;
    let mut rng = opts.rng(8);
    for (s, alg) in witness_algebras().into_iter().enumerate() {
        let frame = crate::facial::spectral_frame(&alg, opts.seed + s as u64)?;
        for (k, c) in frame.iter().enumerate() {
            let cert = build_witness(c, samples, opts.seed + (100 * s + k) as u64, 1e-9)?;
            if !cert.is_valid() {
                invalid.push(format!("{alg} frame {k}: {:?}", cert.failures));
            }
            let r = &cert.residuals;
            ray = ray.max(r.ray_pairing);
            norm = norm.max(r.norm_identity);
            min_form = min_form.min(r.sampled_min_form);
            for p in &cert.probes {
                probe = probe.max(p.witness_pairing.abs());
                probe_ray = probe_ray.max(p.ray_pairing);
            }
            let d = exposing_vector(c, 1e-9)?;
            for _ in 0..opts.n(50) {
                let y = random_element_from(&alg, &mut rng).square();
                let x = &c.scale(y.norm()) + &crate::peirce::peirce_halves(c, 1e-9)?.zero().project(&y).scale(rng.random_range(0.0..1e-12));
                let (dot, off) = exposure_residual(c, &d, &x);
                if dot.abs() <= 1e-9 && off > 1e-6 * x.norm() {
                    exposure_bad += 1;
                }
            }
            count += 1;
        }
    }
    let mut hadamard_bad = 0;
    for n in 2..=5 {
        let h = Algebra::hadamard(n);
        for i in 0..n {
            let c = Element::basis(&h, i);
            let cert = build_witness(&c, opts.n(20), i as u64, 1e-9)?;
            for (r, row) in cert.a.iter().enumerate() {
                for (col, v) in row.iter().enumerate() {
                    let want = if (r == i) != (col == i) { 1.0 } else { 0.0 };
                    if *v != want {
                        hadamard_bad += 1;
                    }
                }
            }
            let cc = tensor_square(&c);
            if cc.matrix()[(i, i)] != 1.0 || cc.norm() != 1.0 || !cert.is_valid() {
                hadamard_bad += 1;
            }
        }
    }
    let mut checks = vec![
        Check::none_of("certificates valid", count, invalid.len()),
        Check::at_most("<A, c⊗c>", count, ray, 1e-10),
        Check::at_most("norm identity", count, norm, 1e-9),
        Check::at_most("negative sampled form", count, -min_form, 1e-9),
        Check::at_most("|<A, H>| over probes", count * samples, probe, 1e-9),
        Check::at_most("<c⊗c, H> over probes", count * samples, probe_ray, 1e-10),
        Check::none_of("d exposes the ray of c", count, exposure_bad),
        Check::none_of("orthant case gives e_i e_i^T", 14, hadamard_bad),
    ];
    if let Some(first) = invalid.first() {
        checks[0].name = format!("certificates valid (first failure: {first})");
    }
    Ok(SuiteReport::new("witness", checks))
}

/// `t` values of the face-split probe.
pub const SPLIT_GRID: [f64; 6] = [-1.0, -0.1, -0.01, 0.01, 0.1, 1.0];

/// The split directions exercised for an idempotent context: off-corner
/// operators built from frame elements and one random operator.
pub fn split_directions<R: Rng>(ctx: &FrameContext, rng: &mut R) -> Result<Vec<(String, SelfAdjointOp)>> {
    let alg = ctx.split.algebra().clone();
    let frame = ctx.system.frame().elements();
    let mut out = Vec::new();
    let low = &frame[0];
    let high = &frame[ctx.p];
    for p in ctx.system.pairs() {
        if p.i == 0 && !p.is_diagonal() && p.j >= ctx.p {
            if let Some(m) = ctx.system.space(p)?.basis_elements(&alg).first() {
                out.push((format!("c_{}⊗m + m⊗c_{} with m in E{p}", ctx.p, ctx.p), sym_tensor(high, m)?));
            }
        }
    }
    out.push(("c_0⊗c_0".into(), tensor_square(low)));
    out.push((format!("c_0⊗c_{} + c_{}⊗c_0", ctx.p, ctx.p), sym_tensor(low, high)?));
    out.push(("random".into(), random_op(&alg, rng)));
    Ok(out)
}

fn face(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = opts.rng(9);
    let mut unresolved = Vec::new();
    let mut count = 0;
    let s = Algebra::sym(2);
    let h = Algebra::hadamard(3);
    let setups = [
        (Element::basis(&s, 0), s.clone()),
        (Element::new(&h, vec![0.0, 1.0, 1.0])?, h.clone()),
    ];
    for (c, alg) in setups {
        let ctx = FrameContext::new(&c, 1e-9)?;
        let g = CornerOp::identity(ctx.split.one().dim());
        for (name, d) in split_directions(&ctx, &mut rng)? {
            let rep = face_split_probe(&ctx, &g, &d, &SPLIT_GRID, Budget::default(), opts.seed, 1e-9)?;
            for row in &rep.rows {
                if row.status != SplitStatus::ViolationFound {
                    unresolved.push(format!("{alg} D = {name} t = {}", row.t));
                }
                count += 1;
            }
        }
    }
    let mut check = Check::none_of("violation found for every t != 0", count, unresolved.len());
    if let Some(first) = unresolved.first() {
        check.name = format!("{} (first miss: {first})", check.name);
    }
    Ok(SuiteReport::new("face", vec![check]))
}

/// Runs every suite in order.
pub fn run_all(opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    SUITE_NAMES.iter().map(|n| run_suite(n, opts)).collect()
}
