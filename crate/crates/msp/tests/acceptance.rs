//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported but do not fail `cargo test`; set
//! `MSP_ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit.

use std::time::{Duration, Instant};

use msp::config::{format_alpha, ExperimentConfig, OutputFormat, PrecondKind, DEFAULT_ALPHAS};
use msp::reference::{self, ReferenceTable, MAX_ITERATIONS, MAX_LEVEL_GROWTH};
use msp::table::{run_table, IterationTable};
use msp::verify::{epsilon_check, q_norm_check, saddle_checks};
use msp_core::control::{exact_schur_precond, Discretization, GeometryKind, ProblemConfig, ProblemKind};
use msp_core::linalg::{cholesky, DenseMatrix};
use msp_core::minres::{minres_solve, MinresOptions};
use msp_core::saddle::{spectrum, PrecondBlock, DENSE_CAP};
use msp_core::spline::{Assembler, GeometryMap, SplineSpace1D, TensorSpace};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel_frobenius(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let mut diff = a.clone();
    let mut nb = b.clone();
    nb.scale(-1.0);
    diff.add_assign(&nb);
    diff.frobenius_norm() / b.frobenius_norm()
}

fn space(d: usize, p: usize, l: u32) -> TensorSpace {
    TensorSpace::uniform(d, SplineSpace1D::maximal(p, l).unwrap()).unwrap()
}

fn sharpness() -> Outcome {
    let (sharp, _) = saddle_checks(&[2, 3, 4, 5, 6], 20, 0).unwrap();
    for c in &sharp {
        println!("    {c}");
    }
    outcome(sharp.iter().all(|c| c.passed), "n = 2..6, 20 instances each, tol 1e-8")
}

fn bound_suite() -> Outcome {
    let (_, bound) = saddle_checks(&[2, 3, 4, 5, 6], 20, 1000).unwrap();
    for c in &bound {
        println!("    {c}");
    }
    outcome(bound.iter().all(|c| c.passed), "n = 2..6, 20 semidefinite instances each")
}

fn appendix() -> Outcome {
    let q = q_norm_check(10).unwrap();
    let e = epsilon_check(8).unwrap();
    println!("    {q}");
    println!("    {e}");
    outcome(q.passed && e.passed, "Q_j norms and epsilon chain to 1e-12")
}

fn table_config(t: &ReferenceTable) -> ExperimentConfig {
    ExperimentConfig {
        problem: ProblemKind::BoundaryObservation,
        dim: t.dim,
        degree: t.degree,
        geometry: GeometryKind::default_for(t.dim),
        levels: t.rows.iter().map(|r| r.0).collect(),
        alphas: DEFAULT_ALPHAS.to_vec(),
        precond: if t.exact { PrecondKind::ExactSchur } else { PrecondKind::Practical },
        tol: 1e-8,
        maxit: 500,
        seed: 0,
        format: OutputFormat::Markdown,
        out: None,
        large: false,
    }
}

fn dofs(tables: &[(ReferenceTable, IterationTable)]) -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for (reference, table) in tables {
        for ((level, dof, _), row) in reference.rows.iter().zip(&table.rows) {
            let formula = table_config(reference).problem_config(*level, 1.0).dof().unwrap();
            ok &= row.dof == *dof && formula == *dof;
            let note = format!("{}D l={level}: {}", reference.dim, row.dof);
            if !seen.contains(&note) {
                seen.push(note);
            }
        }
    }
    outcome(ok, seen.join(", "))
}

fn iteration_tables(tables: &[(ReferenceTable, IterationTable)]) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (reference, table) in tables {
        println!("    {} (reference in brackets, tolerance +-{}):", reference.name, reference.tolerance);
        let mut worst = 0usize;
        let mut misses = 0;
        for ((level, _, expected), row) in reference.rows.iter().zip(&table.rows) {
            let cells: Vec<String> = row
                .cells
                .iter()
                .zip(expected)
                .map(|(c, e)| {
                    let dev = c.iterations.abs_diff(*e);
                    worst = worst.max(dev);
                    if dev > reference.tolerance || !c.converged {
                        misses += 1;
                    }
                    format!("{:>4} [{e:>2}]", c.label())
                })
                .collect();
            println!("      l={level} {}", cells.join(" "));
        }
        let its = table.iterations();
        let max_cell = its.iter().flatten().copied().max().unwrap_or(0);
        let mut growth_ok = true;
        for w in its.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                growth_ok &= (*b as f64) <= (*a as f64) * (1.0 + MAX_LEVEL_GROWTH);
            }
        }
        let table_ok = misses == 0 && max_cell <= MAX_ITERATIONS && growth_ok;
        println!(
            "      cells off by more than {}: {misses}, max deviation {worst}, max cell {max_cell} (limit {MAX_ITERATIONS}), growth within {}%: {growth_ok}",
            reference.tolerance,
            MAX_LEVEL_GROWTH * 100.0
        );
        notes.push(format!("{}: {}", reference.name, if table_ok { "ok" } else { "off" }));
        ok &= table_ok;
    }
    outcome(ok, notes.join(", "))
}

fn lemma_oracle() -> Outcome {
    let geo = GeometryMap::identity(1).unwrap();
    let asm = Assembler::new(&geo);
    let mut worst = 0.0f64;
    let mut same_counts = true;
    for p in [2usize, 3] {
        for l in [2u32, 3] {
            let u = space(1, p, l);
            let w = TensorSpace::uniform(1, SplineSpace1D::new(p, p as i32 - 3, l).unwrap()).unwrap();
            let z = u.zero_trace();
            let rows: Vec<Option<usize>> = (0..w.dim()).map(Some).collect();
            let k = asm.laplacian_strong(&u, &w).unwrap().select(&rows, w.dim(), &z.map, z.dim).to_dense();
            let chol = cholesky(&asm.mass(&w).unwrap()).unwrap();
            let mut minv_k = DenseMatrix::zeros(w.dim(), z.dim);
            for c in 0..z.dim {
                minv_k.set_column(c, &chol.solve(&k.column(c)).unwrap());
            }
            let ktmk = k.transpose().matmul(&minv_k).unwrap();
            let b = asm.biharmonic(&u).unwrap().select(&z.map, z.dim).to_dense();
            worst = worst.max(rel_frobenius(&ktmk, &b));

            let cfg = ProblemConfig::new(ProblemKind::BoundaryObservation, 1, p, l, 1.0)
                .with_geometry(GeometryKind::UnitSquare)
                .with_test_smoothness(p as i32 - 3);
            let disc = Discretization::new(&cfg).unwrap();
            for alpha in DEFAULT_ALPHAS {
                let prob = disc.problem(alpha).unwrap();
                let opts = MinresOptions::default();
                let exact = exact_schur_precond(&prob, DENSE_CAP).unwrap();
                let a = minres_solve(&prob.system, &exact.inverse(), &prob.rhs, &opts).unwrap();
                let b = minres_solve(&prob.system, &prob.practical.inverse(), &prob.rhs, &opts).unwrap();
                if a.iterations != b.iterations {
                    same_counts = false;
                    println!("    p={p} l={l} alpha={}: exact {} vs practical {}", format_alpha(alpha), a.iterations, b.iterations);
                }
            }
        }
    }
    outcome(worst <= 1e-10 && same_counts, format!("max relative deviation {worst:.1e}, identical iteration counts: {same_counts}"))
}

fn certification() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in [ProblemKind::BoundaryObservation, ProblemKind::DistributedVeryWeak, ProblemKind::BoundaryControl] {
        let mut worst = 0.0f64;
        let mut bound = 0.0;
        for l in [2u32, 3, 4] {
            let disc = Discretization::new(&ProblemConfig::new(kind, 2, 2, l, 1.0)).unwrap();
            for alpha in [1.0, 1e-2, 1e-5] {
                let prob = disc.problem(alpha).unwrap();
                let rep = spectrum(&prob.system, &exact_schur_precond(&prob, DENSE_CAP).unwrap(), DENSE_CAP).unwrap();
                bound = rep.bound_set.cond_bound;
                worst = worst.max(rep.cond);
                // Exact bound for every n, plus the rounded 4.05 for three blocks.
                ok &= rep.cond <= bound * (1.0 + 1e-9);
                if kind.blocks() == 3 {
                    ok &= rep.cond <= 4.05;
                }
            }
        }
        println!("    {kind}: max kappa {worst:.12} (bound {bound:.12})");
        notes.push(format!("{kind} {worst:.6}"));
    }
    outcome(ok, notes.join(", "))
}

fn fem_suite() -> Outcome {
    let mut ok = true;
    // Partition of unity on a grid that includes knots and endpoints.
    let mut pu = 0.0f64;
    for p in 1..=4 {
        for l in 0..=4 {
            let s = SplineSpace1D::maximal(p, l).unwrap();
            for i in 0..=97 {
                let x = i as f64 / 97.0;
                let total: f64 = s.eval_basis(x, 0).unwrap().ders[0].iter().sum();
                pu = pu.max((total - 1.0).abs());
            }
        }
    }
    ok &= pu <= 1e-13;

    // -int lap(u) v = int grad u . grad v on zero-trace functions.
    let mut ibp = 0.0f64;
    for geo in [GeometryMap::identity(2).unwrap(), GeometryMap::annulus_2d()] {
        let s = space(2, 2, 3);
        let z = s.zero_trace();
        let asm = Assembler::new(&geo);
        let k = asm.laplacian_strong(&s, &s).unwrap().select(&z.map, z.dim, &z.map, z.dim).to_dense();
        let a = asm.stiffness(&s).unwrap().select(&z.map, z.dim).to_dense();
        ibp = ibp.max(rel_frobenius(&k, &a));
    }
    ok &= ibp <= 1e-9;

    let mut quad = 0.0f64;
    for geo in [GeometryMap::identity(2).unwrap(), GeometryMap::annulus_2d(), GeometryMap::twisted_3d()] {
        let d = geo.dim();
        let p = if d == 3 { 3 } else { 2 };
        let s = space(d, p, 2);
        let m = Assembler::new(&geo).mass(&s).unwrap().to_dense();
        let oracle = Assembler::with_points(&geo, p + 4 + 3 * d).mass(&s).unwrap().to_dense();
        quad = quad.max(rel_frobenius(&m, &oracle));
    }
    ok &= quad <= 1e-11;

    // B and K_b + alpha B factor on the zero-trace spaces of the experiments.
    let mut spd = 0;
    let mut spd_ok = true;
    for (geo, d, p, levels) in [(GeometryMap::annulus_2d(), 2, 2, vec![3u32, 4, 5]), (GeometryMap::twisted_3d(), 3, 3, vec![2])] {
        let asm = Assembler::new(&geo);
        for l in levels {
            let s = space(d, p, l);
            let z = s.zero_trace();
            let b = asm.biharmonic(&s).unwrap().select(&z.map, z.dim);
            let kb = asm.normal_derivative_mass(&s).unwrap().select(&z.map, z.dim);
            spd_ok &= PrecondBlock::sparse(b.clone()).is_ok();
            spd += 1;
            for alpha in DEFAULT_ALPHAS {
                spd_ok &= PrecondBlock::sparse(kb.add_scaled(alpha, &b).unwrap()).is_ok();
                spd += 1;
            }
        }
    }
    ok &= spd_ok;
    outcome(
        ok,
        format!("partition of unity {pu:.1e}, integration by parts {ibp:.1e}, quadrature oracle {quad:.1e}, SPD factorizations {spd}/{spd} ok: {spd_ok}"),
    )
}

fn report(id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let passed = out.passed && in_time;
    let budget = limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {id} {name}: {} ({}; {:.1}s{budget})",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    passed
}

fn main() {
    let minute = Some(Duration::from_secs(60));
    let mut results = Vec::new();
    results.push(report(1, "sharpness suite", minute, sharpness));
    results.push(report(2, "bound suite", minute, bound_suite));
    results.push(report(3, "appendix suite", minute, appendix));

    let start = Instant::now();
    let tables: Vec<(ReferenceTable, IterationTable)> =
        reference::ALL.iter().map(|t| (*t, run_table(&table_config(t)).unwrap())).collect();
    println!("    (tables computed in {:.1}s)", start.elapsed().as_secs_f64());
    results.push(report(4, "dof reproduction", None, || dofs(&tables)));
    results.push(report(5, "iteration-count reproduction", None, || iteration_tables(&tables)));
    results.push(report(6, "conforming test space oracle", None, lemma_oracle));
    results.push(report(7, "discretized bound certification", Some(Duration::from_secs(300)), certification));
    results.push(report(8, "FEM property suite", minute, fem_suite));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 && std::env::var_os("MSP_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
