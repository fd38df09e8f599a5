use std::f64::consts::PI;

use msp_core::chebyshev::*;
use msp_core::linalg::{sym_eigvals_dense, tridiag_eigvals, DenseMatrix};
use msp_core::minres::{lanczos_extremes, minres_solve, LinearOperator, MinresOptions};
use msp_core::saddle::*;
use proptest::prelude::*;

fn q_norm_formula(j: usize) -> f64 {
    1.0 / (2.0 * (PI / (2.0 * (2 * j + 1) as f64)).sin())
}

#[test]
fn q_matrix_norms_match_closed_form() {
    for j in 1..=10 {
        // Invert the stored Q_j^{-1} column by column and take the norm of Q_j.
        let qinv = QMatrix::new(j).unwrap().to_dense();
        let mut q = DenseMatrix::zeros(j, j);
        for c in 0..j {
            let mut e = vec![0.0; j];
            e[c] = 1.0;
            q.set_column(c, &qinv.solve(&e).unwrap());
        }
        let eig = sym_eigvals_dense(&q).unwrap();
        let norm = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((norm - q_norm_formula(j)).abs() <= 1e-12 * norm, "j={j}");
        assert!((q_matrix_norm(j).unwrap() - q_norm_formula(j)).abs() <= 1e-12 * norm);
    }
}

#[test]
fn q_inverse_spectrum_is_the_pbar_roots() {
    for j in 1..=8 {
        let q = QMatrix::new(j).unwrap();
        assert_eq!(q.get(0, 0), 1);
        let diag: Vec<f64> = (0..j).map(|i| q.get(i, i) as f64).collect();
        let off: Vec<f64> = (0..j - 1).map(|i| q.get(i, i + 1) as f64).collect();
        for (i, v) in off.iter().enumerate() {
            assert_eq!(*v, if i % 2 == 0 { -1.0 } else { 1.0 });
        }
        let mut eig = tridiag_eigvals(&diag, &off).unwrap();
        let mut roots = pbar_roots(j).unwrap();
        eig.sort_by(f64::total_cmp);
        roots.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn epsilon_chain_and_admissibility() {
    for n in 2..=8 {
        let eps = epsilon_sequence(n).unwrap();
        assert_eq!(eps.len(), n - 1);
        let top = eps[n - 2];
        assert!((top - largest_root(n)).abs() < 1e-12);
        assert!((1.0 + 1.0 / eps[0] - top).abs() < 1e-12, "n={n}");
        for i in 1..n - 1 {
            assert!((eps[i - 1] + 1.0 / eps[i] - top).abs() < 1e-12, "n={n} i={i}");
        }
        for (i, e) in eps.iter().enumerate() {
            assert!(*e >= 1.0 - 1e-12, "n={n} eps_{} = {e}", i + 1);
        }
        for j in 1..=n {
            assert!(pbar_eval(j, top) >= -1e-12);
        }
    }
}

#[test]
fn bounds_examples() {
    let b2 = bounds(2).unwrap();
    assert!((b2.cond_bound - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    let b3 = bounds(3).unwrap();
    assert!((b3.cond_bound - (PI / 7.0).cos() / (PI / 14.0).sin()).abs() < 1e-12);
    assert!(b3.cond_bound < 4.05 && b3.cond_bound > 4.04);
}

/// Literal Schur complement of the leading `k` blocks of the full matrix.
fn literal_schur(full: &DenseMatrix, offsets: &[usize], k: usize) -> DenseMatrix {
    let (lead, end) = (offsets[k], offsets[k + 1]);
    let m = end - lead;
    let a11 = full.block(0, 0, lead, lead);
    let mut out = full.block(lead, lead, m, m);
    for c in 0..m {
        let col: Vec<f64> = (0..lead).map(|r| full[(r, lead + c)]).collect();
        let y = a11.solve(&col).unwrap();
        for r in 0..m {
            let dotv: f64 = (0..lead).map(|t| full[(lead + r, t)] * y[t]).sum();
            out[(r, c)] -= dotv;
        }
    }
    out
}

#[test]
fn schur_recursion_matches_literal_complements() {
    for seed in 0..5 {
        let sys = random_spsd_system(&[6, 5, 4, 3], seed).unwrap();
        let pre = exact_schur(&sys, DENSE_CAP).unwrap();
        let full = sys.assemble_dense();
        for k in 1..sys.n() {
            // Eliminating k blocks leaves (-1)^k S_{k+1} in the trailing corner.
            let lit = literal_schur(&full, sys.offsets(), k);
            let s = pre.blocks()[k].to_dense();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let scale = s.max_abs();
            for r in 0..s.rows() {
                for c in 0..s.cols() {
                    assert!((lit[(r, c)] - sign * s[(r, c)]).abs() <= 1e-9 * scale, "seed={seed} k={k}");
                }
            }
        }
    }
}

#[test]
fn sharpness_and_bounds_for_all_block_counts() {
    for n in 2..=6 {
        let rep = verify_sharpness(n, 5, 100 + n as u64, 4).unwrap();
        assert!(rep.passed(), "n={n}: {rep:?}");
        assert!(rep.max_norm_dev <= SHARPNESS_TOL);
        assert!(rep.max_cond_ratio <= 1.0 + BOUND_SLACK);
    }
}

#[test]
fn decreasing_dims_give_the_full_root_union() {
    for (dims, n) in [(vec![4, 2], 2), (vec![6, 4, 2], 3)] {
        for seed in 0..3 {
            let sys = random_zero_tail_system(&dims, seed).unwrap();
            let rep = spectrum(&sys, &exact_schur(&sys, DENSE_CAP).unwrap(), DENSE_CAP).unwrap();
            assert!(matches_value_set(&rep.eigenvalues, &chebyshev_root_set(n), 1e-8), "{dims:?}: {:?}", rep.eigenvalues);
        }
    }
}

#[test]
fn square_couplings_give_only_the_last_roots() {
    let sys = random_zero_tail_system(&[3, 3], 7).unwrap();
    let rep = spectrum(&sys, &exact_schur(&sys, DENSE_CAP).unwrap(), DENSE_CAP).unwrap();
    assert!(matches_value_set(&rep.eigenvalues, &pbar_roots(2).unwrap(), 1e-8));
}

#[test]
fn minres_with_exact_schur_stops_within_root_count() {
    for n in 2..=5 {
        let dims: Vec<usize> = (0..n).map(|i| 2 * (n - i) + 2).collect();
        let sys = random_zero_tail_system(&dims, n as u64).unwrap();
        let pre = exact_schur(&sys, DENSE_CAP).unwrap();
        let b: Vec<f64> = (0..sys.total_dim()).map(|i| (i as f64 * 0.7).cos()).collect();
        let opts = MinresOptions { tol: 1e-10, ..Default::default() };
        let res = minres_solve(&sys, &pre.inverse(), &b, &opts).unwrap();
        assert!(res.converged);
        assert!(res.iterations <= n * (n + 1) / 2, "n={n}: {}", res.iterations);
    }
}

#[test]
fn lanczos_matches_dense_spectrum() {
    let sys = random_spsd_system(&[8, 6, 4], 3).unwrap();
    let pre = exact_schur(&sys, DENSE_CAP).unwrap();
    let rep = spectrum(&sys, &pre, DENSE_CAP).unwrap();
    let start = vec![1.0; sys.total_dim()];
    let (lo, hi) = lanczos_extremes(&sys, &pre.inverse(), &start, sys.total_dim()).unwrap();
    assert!((lo - rep.eigenvalues[0]).abs() < 1e-8);
    assert!((hi - rep.eigenvalues[rep.eigenvalues.len() - 1]).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn condition_bound_holds(seed in 0u64..10_000, n in 2usize..=5) {
        let dims = random_dims(n, 5, seed);
        let sys = random_spsd_system(&dims, seed).unwrap();
        let rep = spectrum(&sys, &exact_schur(&sys, DENSE_CAP).unwrap(), DENSE_CAP).unwrap();
        prop_assert!(rep.within_bounds);
        prop_assert!(rep.cond <= bounds(n).unwrap().cond_bound * (1.0 + BOUND_SLACK));
    }

    #[test]
    fn minres_history_is_monotone_and_consistent(seed in 0u64..10_000) {
        let sys = random_spsd_system(&[5, 4, 3], seed).unwrap();
        let pre = exact_schur(&sys, DENSE_CAP).unwrap();
        let inv = pre.inverse();
        let b: Vec<f64> = (0..sys.total_dim()).map(|i| ((i as u64 + seed) as f64).sin()).collect();
        let res = minres_solve(&sys, &inv, &b, &MinresOptions::default()).unwrap();
        prop_assert!(res.converged);
        for w in res.residual_history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        let mut ax = vec![0.0; b.len()];
        sys.apply(&res.solution, &mut ax);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(x, y)| x - y).collect();
        let mut z = vec![0.0; r.len()];
        inv.apply(&r, &mut z);
        let explicit = r.iter().zip(&z).map(|(a, c)| a * c).sum::<f64>().sqrt();
        prop_assert!((explicit - res.final_residual()).abs() <= 1e-9 * res.residual_history[0]);
    }

    #[test]
    fn pbar_roots_interlace(j in 2usize..=12) {
        let a = pbar_roots(j).unwrap();
        let b = pbar_roots(j - 1).unwrap();
        // descending order
        for i in 0..j - 1 {
            prop_assert!(a[i] > b[i] && b[i] > a[i + 1]);
        }
    }
}
