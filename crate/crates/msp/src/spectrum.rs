//! Generalized spectra of a system and a block diagonal preconditioner.

use msp_core::control::{build, exact_schur_precond, AssembledProblem, ProblemConfig};
use msp_core::linalg::SparseSymMatrix;
use msp_core::minres::lanczos_extremes;
use msp_core::saddle::{spectrum, BlockTridiagSystem, SchurPreconditioner, SpectrumReport, BOUND_SLACK, DENSE_CAP};
use serde::Serialize;

use crate::config::{format_alpha, PrecondKind};
use crate::error::{MspError, Result};

/// Serialized summary of a spectrum computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub label: String,
    pub method: &'static str,
    pub dof: usize,
    pub blocks: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_abs: f64,
    /// Only available from a dense computation.
    pub min_abs: Option<f64>,
    pub cond: Option<f64>,
    pub norm_bound: f64,
    pub inv_norm_bound: f64,
    pub cond_bound: f64,
    pub within_bounds: bool,
}

impl SpectrumSummary {
    pub fn from_report(label: String, report: &SpectrumReport, blocks: usize) -> Self {
        let e = &report.eigenvalues;
        Self {
            label,
            method: "dense",
            dof: e.len(),
            blocks,
            lambda_min: e[0],
            lambda_max: e[e.len() - 1],
            max_abs: report.norm,
            min_abs: Some(report.min_abs()),
            cond: Some(report.cond),
            norm_bound: report.bound_set.norm_bound,
            inv_norm_bound: report.bound_set.inv_norm_bound,
            cond_bound: report.bound_set.cond_bound,
            within_bounds: report.within_bounds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn precond_for(prob: &AssembledProblem, kind: PrecondKind) -> Result<SchurPreconditioner> {
    Ok(match kind {
        PrecondKind::Practical => prob.practical.clone(),
        PrecondKind::ExactSchur => exact_schur_precond(prob, DENSE_CAP)?,
    })
}

/// Dense spectrum, or `steps` Lanczos steps when `lanczos` is set.
pub fn problem_spectrum(cfg: &ProblemConfig, kind: PrecondKind, lanczos: Option<usize>) -> Result<SpectrumSummary> {
    let prob = build(cfg)?;
    let label = format!("{} d={} p={} level={} alpha={} precond={kind}", cfg.problem, cfg.dim, cfg.degree, cfg.level, format_alpha(cfg.alpha));
    let precond = precond_for(&prob, kind)?;
    match lanczos {
        None => {
            if prob.dof() > DENSE_CAP {
                return Err(MspError::Config(format!(
                    "{} unknowns exceed the dense cap {DENSE_CAP}; rerun with --lanczos STEPS",
                    prob.dof()
                )));
            }
            let rep = spectrum(&prob.system, &precond, DENSE_CAP)?;
            Ok(SpectrumSummary::from_report(label, &rep, prob.system.n()))
        }
        Some(steps) => {
            let (lo, hi) = lanczos_extremes(&prob.system, &precond.inverse(), &prob.rhs, steps)?;
            let b = msp_core::chebyshev::bounds(prob.system.n())?;
            let max_abs = lo.abs().max(hi.abs());
            Ok(SpectrumSummary {
                label,
                method: "lanczos",
                dof: prob.dof(),
                blocks: prob.system.n(),
                lambda_min: lo,
                lambda_max: hi,
                max_abs,
                min_abs: None,
                cond: None,
                norm_bound: b.norm_bound,
                inv_norm_bound: b.inv_norm_bound,
                cond_bound: b.cond_bound,
                within_bounds: max_abs <= b.norm_bound * (1.0 + BOUND_SLACK),
            })
        }
    }
}

/// Spectrum of `P^{-1} A` for a symmetric matrix pair, checked against the
/// bounds for a system of `blocks` blocks.
pub fn matrix_pair_spectrum(a: SparseSymMatrix, p: SparseSymMatrix, blocks: usize) -> Result<SpectrumSummary> {
    let dim = a.dim();
    let sys = BlockTridiagSystem::new(vec![a], vec![])?;
    let pre = SchurPreconditioner::from_sparse(vec![p])?;
    let rep = SpectrumReport::from_eigenvalues(spectrum(&sys, &pre, DENSE_CAP)?.eigenvalues, blocks)?;
    Ok(SpectrumSummary::from_report(format!("matrix pair dim={dim}"), &rep, blocks))
}
