//! Acceptance gate: one PASS/FAIL line per criterion, then a single assertion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use common::*;
use fbstokes::geometry::{mean_curvature, spherical_graph_mean_curvature, RadialJet, SphericalGraph, SurfaceSpec};
use fbstokes::halfspace::*;
use fbstokes::harness::config::*;
use fbstokes::harness::{run, Execution, TaskConfig, VerificationReport};
use fbstokes::nonlinear::{f_terms, g_terms, Transport};
use fbstokes::quadrature::chebyshev_points;
use fbstokes::rng::{complex_unit_box, complex_vec, sector_point, stream, uniform};
use fbstokes::symbols::*;
use num_complex::Complex64 as C64;
use num_traits::{One, Zero};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

struct Gate {
    lines: Vec<String>,
    failed: Vec<usize>,
}

impl Gate {
    fn record(&mut self, n: usize, name: &str, ok: bool, detail: String) {
        let line = format!("criterion {n:>2} {} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        if !ok {
            self.failed.push(n);
        }
    }
}

fn report(task: TaskConfig) -> VerificationReport {
    run(&task, Execution::Parallel).expect("task config is valid")
}

/// Names of failing records and checks, for the detail column.
fn failures(r: &VerificationReport) -> String {
    let mut names: Vec<String> = r.records.iter().filter(|x| !x.pass).map(|x| x.label.clone()).collect();
    names.extend(r.checks.iter().filter(|c| !c.1).map(|c| c.0.clone()));
    names.truncate(5);
    if names.is_empty() {
        "none".into()
    } else {
        names.join("; ")
    }
}

fn scalar(r: &VerificationReport, name: &str) -> f64 {
    r.scalars.iter().find(|s| s.0 == name).map_or(f64::NAN, |s| s.1)
}

fn max_metric(r: &VerificationReport, name: &str) -> f64 {
    let k = r.schema.metrics.iter().position(|m| *m == name).expect("metric exists");
    r.records.iter().map(|x| x.metrics[k]).fold(0.0, f64::max)
}

fn lopatinski(g: &mut Gate) {
    let mut rng = stream(1, 1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let a = 3.0 * complex_unit_box(&mut rng);
        let b = 3.0 * complex_unit_box(&mut rng);
        let lhs = (a * a + b * b).powi(2) - 4.0 * a * a * a * b;
        let rhs = (b - a) * compute_d(a, b);
        worst = worst.max((lhs - rhs).norm() / (a.norm() + b.norm()).powi(4));
    }
    g.record(1, "Lopatinski factorization", worst <= 1e-12, format!("worst relative gap {worst:.2e} over 1e4 pairs (tol 1e-12)"));
}

fn neumann(g: &mut Gate) {
    let mut rng = stream(2, 1);
    let (mut interior, mut boundary) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let point = ResolventPoint::new(sector_point(&mut rng, PI / 4.0, 1.0, 1e4), uniform(&mut rng, 0.5, 2.0));
        let freq = TangentialFrequency::new(vec![uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0)]);
        let h = complex_vec(&mut rng, 3);
        let p = solve_neumann_model(&point, &freq, &h).expect("admissible point");
        let data: Vec<C64> = h.iter().map(|v| -v).collect();
        let r = p.residuals(&chebyshev_points(32, 0.0, 10.0 / p.b.re), &data);
        interior = interior.max(r.momentum).max(r.divergence);
        boundary = boundary.max(r.boundary_tangential).max(r.boundary_normal);
    }
    g.record(
        2,
        "Neumann model residuals",
        interior <= 1e-9 && boundary <= 1e-10,
        format!("interior {interior:.2e} (tol 1e-9), boundary {boundary:.2e} (tol 1e-10), 100 triples"),
    );
}

fn tension(g: &mut Gate) {
    let mut rng = stream(3, 1);
    let (mut worst, mut formula) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let point = ResolventPoint::new(sector_point(&mut rng, PI / 4.0, 1.0, 1e4), uniform(&mut rng, 0.5, 2.0))
            .with_sigma(uniform(&mut rng, 0.1, 2.0))
            .with_a_kappa(vec![uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]);
        let freq = TangentialFrequency::new(vec![uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0)]);
        let d_hat = complex_unit_box(&mut rng);
        let p = solve_surface_tension_model(&point, &freq, d_hat).expect("admissible point");
        let r = p.tension_residuals(&chebyshev_points(32, 0.0, 10.0 / p.b.re), d_hat);
        worst = worst.max(r.max()).max(r.kinematic.unwrap_or(f64::INFINITY));
        let h = p.h_hat.expect("tension profile carries the height");
        let want = point.mu * compute_d(freq.a, p.b) * d_hat / compute_e_kappa(&point, &freq).expect("E_kappa");
        formula = formula.max((h - want).norm() / want.norm().max(f64::MIN_POSITIVE));
    }
    g.record(
        3,
        "surface-tension model residuals",
        worst <= 1e-9 && formula <= 1e-12,
        format!("max residual incl. kinematic {worst:.2e} (tol 1e-9), height formula gap {formula:.1e}"),
    );
}

fn symbol_bounds(g: &mut Gate) {
    let r = report(TaskConfig::VerifySymbols(SymbolsTask::default()));
    let drift = max_metric(&r, "drift");
    let lambda1 = scalar(&r, "lambda1");
    g.record(
        4,
        "symbol bounds",
        r.passed() && lambda1.is_finite() && drift < 0.05,
        format!("lambda1 = {lambda1:.4}, max drift {drift:.2e} (tol 5e-2), failing: {}", failures(&r)),
    );
}

fn wholespace(g: &mut Gate) {
    let r = report(TaskConfig::WholespaceCheck(WholespaceTask::default()));
    g.record(
        5,
        "whole-space resolvent",
        r.passed() && r.records.len() == 10_000,
        format!(
            "momentum {:.2e}, divergence {:.2e} (tol 1e-10), {} samples, failing: {}",
            max_metric(&r, "momentum"),
            max_metric(&r, "divergence"),
            r.records.len(),
            failures(&r)
        ),
    );
}

fn bumpy_gap() -> f64 {
    let graph = SphericalGraph::new(|_phi, theta| {
        let (s, c) = theta.sin_cos();
        RadialJet { v: 1.0 + 0.1 * c, t: -0.1 * s, tt: -0.1 * c, ..Default::default() }
    });
    let patch = graph.patch();
    (0..1000)
        .map(|i| {
            let theta = 0.05 + 3.04 * ((i as f64 * 0.618_033_988_75) % 1.0);
            let phi = 2.0 * PI * ((i as f64 * 0.414_213_562_37) % 1.0);
            let f = spherical_graph_mean_curvature(&graph, phi, theta).expect("away from the poles");
            let h = mean_curvature(&patch, &[theta, phi]).expect("regular chart");
            (f - h.h_trace).abs()
        })
        .fold(0.0, f64::max)
}

fn curvature(g: &mut Gate) {
    let mut sphere_ok = true;
    let mut sphere_err = 0.0f64;
    for (radius, dim) in [(1.0, 3), (2.5, 3), (1.5, 2)] {
        let mut t = CurvatureTask::new(SurfaceSpec::Sphere { radius, dim });
        t.tol = 1e-10;
        let r = report(TaskConfig::Curvature(t));
        sphere_ok &= r.passed();
        sphere_err = sphere_err.max(max_metric(&r, "err_reference"));
    }
    let bumpy = bumpy_gap();
    let lin = report(TaskConfig::NonlinearAudit(AuditTask::new(AuditCase::CurvatureLinearization)));
    let slope = scalar(&lin, "slope");
    g.record(
        6,
        "mean curvature",
        sphere_ok && bumpy <= 1e-8 && lin.passed() && slope >= 1.9,
        format!("sphere {sphere_err:.2e} (tol 1e-10), bumpy graph routes {bumpy:.2e} (tol 1e-8), linearization slope {slope:.3} (min 1.9)"),
    );
}

fn spectra(g: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for radius in [1.0, 2.0] {
        let r = report(TaskConfig::BallSpectra(SpectraTask { radius, ..SpectraTask::default() }));
        let gap = scalar(&r, "gap_formula");
        ok &= r.passed() && (gap - 4.0 / (radius * radius)).abs() <= 1e-10;
        detail.push(format!("R={radius}: eigen {:.1e}, gap {gap} vs 4/R^2, failing: {}", max_metric(&r, "eigen_residual"), failures(&r)));
    }
    g.record(7, "sphere spectra", ok, detail.join("; "));
}

fn transforms(g: &mut Gate) {
    let flows = [
        FlowSpec::Dilation { dim: 3 },
        FlowSpec::Dilation { dim: 2 },
        FlowSpec::Trig { seed: 4, dim: 3, amp: 0.5 },
        FlowSpec::Affine { k: vec![vec![0.1, 0.3, 0.0], vec![-0.2, 0.0, 0.1], vec![0.0, 0.4, -0.3]], b: vec![0.2, 0.0, -0.1] },
    ];
    let mut ok = true;
    let mut fails = Vec::new();
    let mut inverse = 0.0f64;
    for flow in flows {
        let r = report(TaskConfig::TransportCheck(TransportTask::new(flow)));
        ok &= r.passed();
        inverse = inverse.max(max_metric(&r, "inverse_residual"));
        if !r.passed() {
            fails.push(failures(&r));
        }
    }
    for dim in [2, 3] {
        let r = report(TaskConfig::BallSpectra(SpectraTask { dim, radius: 1.3, ..SpectraTask::default() }));
        let gram = r.checks.iter().find(|c| c.0.starts_with("rigid_gram")).is_some_and(|c| c.1);
        ok &= gram;
        if !gram {
            fails.push(format!("rigid_gram N={dim}"));
        }
    }
    g.record(
        8,
        "transforms",
        ok,
        format!("inverse identity {inverse:.1e} (tol 1e-12), failing: {}", if fails.is_empty() { "none".into() } else { fails.join("; ") }),
    );
}

fn exact_oracles() -> bool {
    let point = |dim: usize| -> Vec<Q> {
        let mut x: Vec<Q> = [q(1, 3), q(-1, 5), q(2, 7)].into_iter().take(dim).collect();
        x.push(q(1, 2));
        x
    };
    let mut ok = true;
    for dim in [2, 3] {
        for seed in 100..104 {
            let flow = PolyFlow::random(seed, dim, 2, 2);
            let x = point(dim);
            let jet = flow.jet(&x, q(3, 2), q(5, 4));
            ok &= f_terms(&jet, &Transport::Hanzawa) == f_oracle(&jet);
            let jet = flow.jet(&x, Q::one(), Q::one());
            let (g, gvec) = g_terms(&jet);
            ok &= g == g_oracle(&jet);
            let gp = flow.gvec_poly();
            ok &= gvec == gp.iter().map(|p| p.eval(&x)).collect::<Vec<Q>>();
            let div = (0..dim).fold(Q::zero(), |acc, i| acc + gp[i].deriv(i).eval(&x));
            ok &= div == g;
        }
    }
    ok
}

fn nonlinear(g: &mut Gate) {
    let mut ok = true;
    let mut parts = Vec::new();
    for case in AuditCase::ALL {
        let r = report(TaskConfig::NonlinearAudit(AuditTask::new(case)));
        ok &= r.passed();
        let slope = scalar(&r, "slope");
        parts.push(if slope.is_nan() {
            format!("{} {}", case.name(), if r.passed() { "ok" } else { "FAILED" })
        } else {
            format!("{} slope {slope:.2}", case.name())
        });
    }
    let exact = exact_oracles();
    ok &= exact;
    parts.push(format!("exact oracles {}", if exact { "equal" } else { "DIFFER" }));
    g.record(9, "nonlinear audit", ok, parts.join(", "));
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fbstokes")
}

fn run_cli(args: &[&str], serial: bool, out: &Path) -> Vec<u8> {
    let mut cmd = Command::new(bin());
    cmd.args(args).arg("--out").arg(out);
    if serial {
        cmd.arg("--serial");
    }
    let status = cmd.output().expect("binary runs").status;
    assert!(status.code().is_some_and(|c| c <= 1), "{args:?} exited with {status}");
    std::fs::read(out).expect("report written")
}

fn determinism(g: &mut Gate) {
    let dir: PathBuf = std::env::temp_dir().join(format!("fbstokes-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let surface = dir.join("surface.json");
    std::fs::write(&surface, r#"{"kind": "spherical_graph", "R": 1.0, "r_series": [[2, 0, 0.1], [3, 1, 0.05]]}"#).unwrap();
    let flow = dir.join("flow.json");
    std::fs::write(&flow, r#"{"kind": "trig", "seed": 5}"#).unwrap();
    let (surface, flow) = (surface.to_str().unwrap().to_string(), flow.to_str().unwrap().to_string());
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify-symbols"],
        vec!["solve-halfspace", "--model", "neumann", "--seed", "3"],
        vec!["solve-halfspace", "--model", "tension", "--lambda", "2,5", "--xi", "0.5,-1", "--a-kappa", "0.3,0.1"],
        vec!["wholespace-check", "--seed", "9"],
        vec!["curvature", "--surface", &surface],
        vec!["transport-check", "--flow", &flow],
        vec!["transport-check", "--flow", "builtin:dilation"],
        vec!["ball-spectra", "--R", "1.5"],
        vec!["nonlinear-audit", "--case", "hprime-linearization"],
        vec!["nonlinear-audit", "--case", "divergence-gvec"],
    ];
    let mut mismatched = Vec::new();
    for args in &commands {
        for ext in ["json", "csv"] {
            let out = dir.join(format!("r.{ext}"));
            let first = run_cli(args, false, &out);
            let again = run_cli(args, false, &out);
            let serial = run_cli(args, true, &out);
            if first != again || first != serial || first.is_empty() {
                mismatched.push(format!("{} ({ext})", args.join(" ")));
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    g.record(
        10,
        "determinism",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{} invocations x 2 formats byte-identical across reruns and --serial", commands.len())
        } else {
            format!("differ: {}", mismatched.join("; "))
        },
    );
}

#[test]
fn acceptance_criteria() {
    let mut g = Gate { lines: Vec::new(), failed: Vec::new() };
    lopatinski(&mut g);
    neumann(&mut g);
    tension(&mut g);
    symbol_bounds(&mut g);
    wholespace(&mut g);
    curvature(&mut g);
    spectra(&mut g);
    transforms(&mut g);
    nonlinear(&mut g);
    determinism(&mut g);
    assert_eq!(g.lines.len(), 10);
    assert!(g.failed.is_empty(), "failing criteria: {:?}", g.failed);
}
