use msp_core::control::*;
use msp_core::linalg::DenseCholesky;
use msp_core::minres::{minres_solve, MinresOptions};
use msp_core::saddle::{spectrum, PrecondBlock, DENSE_CAP};
use msp_core::spline::{Assembler, GeometryMap, SplineSpace1D, TensorSpace};
use msp_core::Error;

fn iterations(prob: &AssembledProblem, exact: bool) -> usize {
    let pre = if exact { exact_schur_precond(prob, DENSE_CAP).unwrap() } else { prob.practical.clone() };
    let res = minres_solve(&prob.system, &pre.inverse(), &prob.rhs, &MinresOptions::default()).unwrap();
    assert!(res.converged);
    res.iterations
}

#[test]
fn dofs_match_assembled_systems() {
    let cases = [(2, 2, 3, 264), (2, 2, 4, 904), (3, 3, 2, 811)];
    for (d, p, l, dof) in cases {
        let cfg = ProblemConfig::new(ProblemKind::BoundaryObservation, d, p, l, 1.0);
        assert_eq!(cfg.dof().unwrap(), dof);
        assert_eq!(build(&cfg).unwrap().dof(), dof);
    }
    for kind in ProblemKind::ALL {
        let cfg = ProblemConfig::new(kind, 2, 2, 2, 1.0);
        let prob = build(&cfg).unwrap();
        assert_eq!(prob.dof(), cfg.dof().unwrap(), "{kind}");
        assert_eq!(prob.rhs.len(), prob.dof());
        assert_eq!(prob.system.n(), kind.blocks());
        assert_eq!(prob.labels.len(), kind.blocks());
    }
}

#[test]
fn practical_preconditioners_factor_for_all_alphas() {
    for kind in ProblemKind::ALL {
        for geometry in [GeometryKind::UnitSquare, GeometryKind::Annulus2d] {
            for l in [2, 3] {
                for alpha in [1.0, 1e-2, 1e-5, 1e-7] {
                    let cfg = ProblemConfig::new(kind, 2, 2, l, alpha).with_geometry(geometry);
                    // build fails with SchurNotPositiveDefinite otherwise
                    let prob = build(&cfg).unwrap();
                    assert_eq!(prob.practical.block_dims(), prob.system.block_dims());
                }
            }
        }
    }
}

#[test]
fn rhs_is_bit_identical_across_builds() {
    for kind in ProblemKind::ALL {
        let cfg = ProblemConfig::new(kind, 2, 2, 3, 1e-3);
        let a = build(&cfg).unwrap().rhs;
        let b = build(&cfg).unwrap().rhs;
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a.iter().any(|v| *v != 0.0));
    }
}

#[test]
fn exact_schur_condition_within_bounds() {
    for kind in ProblemKind::ALL {
        for geometry in [GeometryKind::UnitSquare, GeometryKind::Annulus2d] {
            for alpha in [1.0, 1e-2, 1e-5] {
                let cfg = ProblemConfig::new(kind, 2, 2, 3, alpha).with_geometry(geometry);
                let prob = build(&cfg).unwrap();
                let pre = exact_schur_precond(&prob, DENSE_CAP).unwrap();
                let rep = spectrum(&prob.system, &pre, DENSE_CAP).unwrap();
                let bound = rep.bound_set.cond_bound * (1.0 + 1e-9);
                assert!(rep.cond <= bound, "{kind} {geometry} alpha={alpha}: {} > {bound}", rep.cond);
                assert!(rep.cond <= if kind.blocks() == 3 { 4.05 } else { 2.6181 });
            }
        }
    }
}

#[test]
fn two_block_exact_schur_needs_at_most_three_iterations() {
    // A_2 = 0, so the preconditioned spectrum has at most three points.
    for kind in [ProblemKind::DistributedVeryWeak, ProblemKind::BoundaryControl] {
        for alpha in [1.0, 1e-3, 1e-7] {
            let prob = build(&ProblemConfig::new(kind, 2, 2, 3, alpha)).unwrap();
            assert!(iterations(&prob, true) <= 3, "{kind} alpha={alpha}");
        }
    }
}

#[test]
fn lemma_setting_gives_identical_iteration_counts() {
    // With W of smoothness p-3 the practical block K_b + alpha B equals the
    // exact Schur complement, so both runs coincide.
    for p in [2, 3] {
        for l in [2, 3] {
            for alpha in [1.0, 1e-2, 1e-5] {
                let cfg = ProblemConfig::new(ProblemKind::BoundaryObservation, 1, p, l, alpha)
                    .with_geometry(GeometryKind::UnitSquare)
                    .with_test_smoothness(p as i32 - 3);
                let prob = build(&cfg).unwrap();
                assert_eq!(iterations(&prob, true), iterations(&prob, false), "p={p} l={l} alpha={alpha}");
            }
        }
    }
}

#[test]
fn biharmonic_factorizes_on_curved_geometries() {
    // K_b + alpha B and B itself are SPD on the zero-trace space.
    for (geo, d, p, l) in [(GeometryMap::annulus_2d(), 2, 2, 3), (GeometryMap::twisted_3d(), 3, 3, 1)] {
        let s = TensorSpace::uniform(d, SplineSpace1D::maximal(p, l).unwrap()).unwrap();
        let z = s.zero_trace();
        let asm = Assembler::new(&geo);
        let b = asm.biharmonic(&s).unwrap().select(&z.map, z.dim);
        assert!(PrecondBlock::sparse(b.clone()).is_ok());
        let kb = asm.normal_derivative_mass(&s).unwrap().select(&z.map, z.dim);
        assert!(PrecondBlock::sparse(kb.add_scaled(1e-7, &b).unwrap()).is_ok());
        assert!(DenseCholesky::factor(&b.to_dense()).is_ok());
    }
}

#[test]
fn practical_counts_stay_moderate() {
    for kind in ProblemKind::ALL {
        for alpha in [1.0, 1e-2, 1e-5] {
            let prob = build(&ProblemConfig::new(kind, 2, 2, 3, alpha)).unwrap();
            let it = iterations(&prob, false);
            assert!(it <= 60, "{kind} alpha={alpha}: {it}");
        }
    }
}

#[test]
fn dense_cap_is_enforced() {
    let prob = build(&ProblemConfig::new(ProblemKind::BoundaryObservation, 2, 2, 3, 1.0)).unwrap();
    let err = exact_schur_precond(&prob, 10).unwrap_err();
    assert!(matches!(err, Error::DenseCapExceeded { size: 64, cap: 10 }));
}

#[test]
fn builders_check_problem_kind() {
    let cfg = ProblemConfig::new(ProblemKind::BoundaryControl, 2, 2, 2, 1.0);
    assert!(build_boundary_observation(&cfg).is_err());
    assert!(build_distributed(&cfg).is_err());
    assert!(build_boundary_control(&cfg).is_ok());
}
