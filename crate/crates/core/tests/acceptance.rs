//! Acceptance suite. Prints one line per criterion and fails only when the
//! set of failing clauses differs from [`KNOWN_FAILURES`].
//!
//! Runs without the test harness so the criterion lines always print:
//! `cargo test -p mdilate --test acceptance`.

use mdilate::dilation::diagonal::diagonal_model;
use mdilate::dilation::perturbed;
use mdilate::hermitian::{eigh, pinv_sqrt, sqrt_psd, ComplexMatrix, HermitianMatrix, C64};
use mdilate::operator::beta_form;
use mdilate::report::{demo, demo_spec, run_pipeline, run_pipeline_full, OperatorSpec, ReportFile, DEMOS};
use mdilate::verifier::{check_p_difference, check_w_m_isometry, VerifyOptions};
use mdilate::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// Pinned tolerances.
const TIGHT: f64 = 1e-12;
const ISOMETRY: f64 = 1e-10;
const DILATION: f64 = 1e-12;
const POWERS: f64 = 1e-11;
const CRITERION: f64 = 1e-10;
const P_DIFFERENCE: f64 = 1e-11;
const CORRUPTION: f64 = 1e-3;
const ORACLE: f64 = 1e-10;
const WINDOW_FACTOR: f64 = 10.0;
const KERNEL_SAMPLES: usize = 200;
const KERNEL_MAX_DIM: usize = 64;
const KERNEL_SEED: u64 = 0x5eed_0009;

/// Clauses that cannot hold as stated.
///
/// The norm gap between the two 2-isometric dilations at `h` is
/// `⟨β_1(T)h, h⟩`. The Dirichlet shift is expansive but not an isometry
/// (`β_1 = diag(1/(n+1))`), so its gap at `e_0` is 1, not 0.
const KNOWN_FAILURES: &[(usize, &str)] = &[(4, "dirichlet gap(e0) <= 1e-12")];

type Criterion = (usize, &'static str, fn() -> Outcome);

#[derive(Default)]
struct Outcome {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn clause(&mut self, name: &str, ok: bool, value: impl Value) {
        if !ok {
            self.failed.push(name.to_string());
        }
        self.notes.push(format!("{name} [{}]", value.show()));
    }
}

trait Value {
    fn show(&self) -> String;
}

impl Value for f64 {
    fn show(&self) -> String {
        format!("{self:.3e}")
    }
}

impl Value for usize {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Value for bool {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Value for String {
    fn show(&self) -> String {
        self.clone()
    }
}

fn report(name: &str) -> ReportFile {
    demo(name).unwrap_or_else(|e| panic!("demo {name}: {e}"))
}

fn residual(r: &ReportFile, check: &str) -> f64 {
    r.check(check).unwrap_or_else(|| panic!("missing check {check}")).residual
}

fn passed(r: &ReportFile, check: &str) -> bool {
    r.check(check).is_some_and(|c| c.passed)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::default();
    let run = run_pipeline_full(&demo_spec("scalar-3concave").unwrap()).unwrap();
    let model = run.dilation.source();
    let a = model.a.as_matrix()[(0, 0)].re;
    let b = model.b.as_matrix()[(0, 0)].re;
    o.clause("A = -1/4", close(a, -0.25, TIGHT), a);
    o.clause("B = sqrt5/2", close(b, 5f64.sqrt() / 2.0, TIGHT), b);
    let expect = [1.0, 5f64.sqrt() / 2.0, (7.0f64 / 5.0).sqrt()];
    for (j, e) in expect.iter().enumerate() {
        let s = run.weights.get(j + 1).as_matrix()[(0, 0)].re;
        o.clause(&format!("S{}", j + 1), close(s, *e, TIGHT), s);
    }
    let r = &run.report;
    o.clause("isometry", residual(r, "w_m_isometry") <= ISOMETRY, residual(r, "w_m_isometry"));
    o.clause("dilation", residual(r, "dilation_property") <= DILATION, residual(r, "dilation_property"));
    o.clause("powers", residual(r, "powers_formula") <= POWERS, residual(r, "powers_formula"));
    o.clause("minimality exact", residual(r, "minimality") == 0.0, residual(r, "minimality"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::default();
    let run = run_pipeline_full(&demo_spec("dirichlet-2iso").unwrap()).unwrap();
    let model = run.dilation.source();
    let q = model.q.as_ref().unwrap().q.real_diagonal();
    let q_err = q.iter().enumerate().map(|(n, v)| (v - 1.0 / (n + 1) as f64).abs()).fold(0.0, f64::max);
    o.clause("q_n = 1/(n+1)", q_err <= TIGHT, q_err);
    o.clause("A = 0", model.a.max_norm() <= TIGHT, model.a.max_norm());
    let s_err = (1..=8)
        .map(|j| run.weights.get(j).sub(&HermitianMatrix::identity(model.hprime_dim())).max_norm())
        .fold(0.0, f64::max);
    o.clause("S_n = I", s_err <= TIGHT, s_err);
    let r = &run.report;
    o.clause("isometry", residual(r, "w_m_isometry") <= ISOMETRY, residual(r, "w_m_isometry"));
    o.clause("remark", passed(r, "remark_consistency"), residual(r, "remark_consistency"));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::default();
    let spec = demo_spec("strict-2concave").unwrap();
    let run = run_pipeline_full(&spec).unwrap();
    let r = &run.report;
    let c = &r.classification;
    o.clause("strict", c.m_concave.holds && !c.m_isometric.holds, c.m_isometric.residual);
    let (beta, w) = beta_form(&spec.corner().unwrap(), 2).unwrap();
    let diag = beta.real_diagonal();
    let b_err = (0..w.valid_dim)
        .map(|n| {
            let a = 0.5f64.powi(n as i32 + 1);
            (diag[n] + a / 2.0 * (1.0 - a)).abs()
        })
        .fold(0.0, f64::max);
    o.clause("beta_2 closed form", b_err <= TIGHT, b_err);
    let q0 = r.q_solution.as_ref().and_then(|q| q.q0).unwrap_or(f64::NAN);
    o.clause("q0 = 1/2", close(q0, 0.5, TIGHT), q0);
    let s1 = run.weights.get(1);
    let gap = s1.sub(&HermitianMatrix::identity(s1.dim())).max_norm();
    let b_gap = s1.sub(&run.dilation.source().b).max_norm();
    o.clause("S1 = B", b_gap <= TIGHT, b_gap);
    o.clause("S1 != I", gap > CORRUPTION, gap);
    o.clause("isometry", residual(r, "w_m_isometry") <= ISOMETRY, residual(r, "w_m_isometry"));
    o.clause("minimality", residual(r, "minimality") == 0.0, residual(r, "minimality"));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::default();
    let strict = report("nonisomorphic-pair");
    for check in ["w_m_isometry", "minimality", "reference.w_m_isometry", "reference.minimality"] {
        o.clause(check, passed(&strict, check), residual(&strict, check));
    }
    let g = strict.certificate.as_ref().map_or(f64::NAN, |c| c.gap_e0);
    o.clause("strict gap(e0) = 1/2", close(g, 0.5, ISOMETRY), g);
    let dirichlet = report("dirichlet-2iso");
    let g = dirichlet.certificate.as_ref().map_or(f64::NAN, |c| c.gap_e0);
    o.clause("dirichlet gap(e0) <= 1e-12", g.abs() <= TIGHT, g);
    o.clause("gap form equals beta_1", passed(&dirichlet, "nonisomorphism_dichotomy"), residual(&dirichlet, "nonisomorphism_dichotomy"));
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::default();
    for name in ["scalar-3concave", "dirichlet-2iso", "strict-2concave"] {
        let r = report(name);
        o.clause(&format!("{name} criterion"), residual(&r, "criterion_identity") <= CRITERION, residual(&r, "criterion_identity"));
        o.clause(&format!("{name} p-difference"), residual(&r, "p_difference") <= P_DIFFERENCE, residual(&r, "p_difference"));
    }
    let tol = Tolerances::default();
    let run = run_pipeline_full(&demo_spec("strict-2concave").unwrap()).unwrap();
    let bad = run.dilation.with_weight(2, perturbed(run.dilation.weight(2), 0.1)).unwrap();
    let iso = check_w_m_isometry(&bad, 2, VerifyOptions::default(), &tol).unwrap();
    o.clause("corrupted isometry fails", !iso.passed && iso.residual > CORRUPTION, iso.residual);
    let diff = check_p_difference(&bad, &tol);
    o.clause("corruption localized", !diff.passed, diff.detail.clone().unwrap_or_default());
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::default();
    let run = run_pipeline_full(&demo_spec("unitary").unwrap()).unwrap();
    o.clause("unitary passes", run.report.overall, run.report.overall);
    o.clause("dim H' = 0", run.report.model.hprime_dim == 0, run.report.model.hprime_dim);
    let t = run.dilation.t().matrix();
    let same = run.dilation.w().rows() == t.rows() && (run.dilation.w() - t).max_norm() == 0.0;
    o.clause("W = T", same, same);

    let run = run_pipeline_full(&demo_spec("zero-operator").unwrap()).unwrap();
    o.clause("zero passes", run.report.overall, run.report.overall);
    let u = run.dilation.u();
    let u_err = (u - &ComplexMatrix::identity(1)).max_norm();
    o.clause("U = I", u.rows() == 1 && u_err <= TIGHT, u_err);
    let w = run.dilation.w();
    let n = w.rows();
    let shift = ComplexMatrix::from_fn(n, n, |i, j| if i == j + 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let s_err = (w - &shift).max_norm();
    o.clause("unweighted shift", s_err <= TIGHT, s_err);
    // W*W = I except on the last block, where the truncation cuts the shift.
    let gram = w.adjoint_mul(w).leading(n - 1);
    let iso_err = (&gram - &ComplexMatrix::identity(n - 1)).max_norm();
    o.clause("isometry", iso_err <= TIGHT, iso_err);
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::default();
    let tol = Tolerances::default();
    for d in DEMOS.iter() {
        let spec = demo_spec(d.name).unwrap();
        let OperatorSpec::Shift { rule } = &spec.operator else { continue };
        let run = run_pipeline_full(&spec).unwrap();
        let model = run.dilation.source();
        let fast = diagonal_model(rule, model.path, model.m, spec.h_dim(), spec.horizon(), 8, &tol).unwrap();
        let diff = |x: &HermitianMatrix, d: &[f64]| {
            let dense = x.real_diagonal();
            let gap = dense.iter().zip(d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let len = if dense.len() == d.len() { 0.0 } else { f64::INFINITY };
            gap.max(x.as_matrix().off_diagonal_max()).max(len)
        };
        let mut worst = diff(&model.a, &fast.a).max(diff(&model.b, &fast.b));
        for j in 1..=8 {
            worst = worst.max(diff(run.weights.get(j), &fast.weights[j - 1]));
        }
        let q = model.q.as_ref().unwrap().q.real_diagonal();
        let q_gap = (0..=8).map(|n| (q[n] - fast.q[n]).abs()).fold(0.0, f64::max);
        worst = worst.max(q_gap);
        o.clause(d.name, worst <= ORACLE, worst);
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::default();
    for d in DEMOS.iter() {
        let spec = demo_spec(d.name).unwrap();
        let base = run_pipeline(&spec).unwrap();
        let big = run_pipeline(&spec.enlarged(2)).unwrap();
        let mut worst = 0.0f64;
        let mut ok = base.overall == big.overall && base.checks.len() == big.checks.len();
        for c in &base.checks {
            let Some(e) = big.check(&c.name) else {
                ok = false;
                continue;
            };
            let change = (e.residual - c.residual).abs();
            ok &= e.passed == c.passed && change <= WINDOW_FACTOR * c.tolerance.max(e.tolerance);
            worst = worst.max(change);
        }
        o.clause(d.name, ok, worst);
    }
    o
}

fn random_psd(rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let n = rng.random_range(1..=KERNEL_MAX_DIM);
    let rank = rng.random_range(0..=n);
    let mut g = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let f = ComplexMatrix::from_fn(n, rank, |_, _| g());
    HermitianMatrix::symmetrize(f.matmul(&f.adjoint()).scale_real(1.0 / n as f64))
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::default();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(KERNEL_SEED);
    let (mut sqrt_worst, mut proj_worst, mut eig_worst) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..KERNEL_SAMPLES {
        let x = random_psd(&mut rng);
        let scale = 1.0 + x.max_norm();
        let e = eigh(&x).unwrap();
        let eig = e.reconstruction_residual(&x).max(e.unitarity_residual());
        eig_worst = eig_worst.max(eig / scale);

        let r = sqrt_psd(&x, tol.psd).unwrap();
        let sq = (&r.as_matrix().matmul(r.as_matrix()) - x.as_matrix()).max_norm();
        sqrt_worst = sqrt_worst.max(sq / scale);

        let p = pinv_sqrt(&x, tol.rank, tol.psd).unwrap();
        let z = p.inv_sqrt.as_matrix();
        let proj = (&z.matmul(x.as_matrix()).matmul(z) - p.projector.as_matrix()).max_norm();
        proj_worst = proj_worst.max(proj);
    }
    o.clause("eigh", eig_worst <= tol.eig, eig_worst);
    o.clause("sqrt", sqrt_worst <= tol.sqrt, sqrt_worst);
    o.clause("pinv projector", proj_worst <= tol.sqrt, proj_worst);
    o
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "scalar 3-concave walkthrough", criterion_1),
        (2, "Dirichlet shift", criterion_2),
        (3, "strict 2-concave shift", criterion_3),
        (4, "non-isomorphic dilations", criterion_4),
        (5, "isometry criterion equivalence", criterion_5),
        (6, "degenerate inputs", criterion_6),
        (7, "diagonal oracle", criterion_7),
        (8, "window stability", criterion_8),
        (9, "kernel properties", criterion_9),
    ];
    let mut surprises = Vec::new();
    for (id, title, run) in criteria {
        let o = run();
        let verdict = if o.failed.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id} {verdict}: {title}");
        for note in &o.notes {
            println!("    {note}");
        }
        for f in &o.failed {
            println!("    failed: {f}");
        }
        let mut expected: Vec<String> =
            KNOWN_FAILURES.iter().filter(|(k, _)| *k == id).map(|(_, c)| c.to_string()).collect();
        let mut got = o.failed.clone();
        expected.sort();
        got.sort();
        if got != expected {
            surprises.push(format!("criterion {id}: failing {got:?}, expected {expected:?}"));
        }
    }
    if !surprises.is_empty() {
        eprintln!("{}", surprises.join("\n"));
        std::process::exit(1);
    }
    println!("acceptance: failing clauses match KNOWN_FAILURES");
}
