//! Iteration-count tables: rows are levels, columns are alpha values.

use std::fmt::Write as _;

use log::info;
use msp_core::control::{exact_schur_precond, Discretization};
use msp_core::minres::{minres_solve, MinresOptions};
use msp_core::saddle::DENSE_CAP;

use crate::config::{format_alpha, ExperimentConfig, PrecondKind};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
}

impl Cell {
    /// Non-converged cells carry a `>` prefix.
    pub fn label(&self) -> String {
        if self.converged {
            self.iterations.to_string()
        } else {
            format!(">{}", self.iterations)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub level: u32,
    pub dof: usize,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTable {
    pub alphas: Vec<f64>,
    pub rows: Vec<TableRow>,
}

/// Assembles once per level and solves with MINRES for every alpha.
pub fn run_table(cfg: &ExperimentConfig) -> Result<IterationTable> {
    let opts = MinresOptions { tol: cfg.tol, max_iter: cfg.maxit, ..Default::default() };
    let mut rows = Vec::with_capacity(cfg.levels.len());
    for &level in &cfg.levels {
        let disc = Discretization::new(&cfg.problem_config(level, cfg.alphas[0]))?;
        let mut cells = Vec::with_capacity(cfg.alphas.len());
        let mut dof = 0;
        for &alpha in &cfg.alphas {
            let prob = disc.problem(alpha)?;
            dof = prob.dof();
            let precond = match cfg.precond {
                PrecondKind::Practical => prob.practical.clone(),
                PrecondKind::ExactSchur => exact_schur_precond(&prob, DENSE_CAP)?,
            };
            let res = minres_solve(&prob.system, &precond.inverse(), &prob.rhs, &opts)?;
            info!(
                "{} level={level} alpha={} dof={dof} blocks={:?} nnz={} precond_nnz={} iterations={} converged={}",
                cfg.problem,
                format_alpha(alpha),
                prob.system.block_dims(),
                prob.nnz(),
                precond.blocks().iter().map(|b| b.nnz()).sum::<usize>(),
                res.iterations,
                res.converged
            );
            cells.push(Cell { iterations: res.iterations, converged: res.converged, residual_history: res.residual_history });
        }
        rows.push(TableRow { level, dof, cells });
    }
    Ok(IterationTable { alphas: cfg.alphas.clone(), rows })
}

impl IterationTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.cells.iter().all(|c| c.converged))
    }

    pub fn iterations(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.cells.iter().map(|c| c.iterations).collect()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,dof");
        for &a in &self.alphas {
            let _ = write!(out, ",{}", format_alpha(a));
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{},{}", r.level, r.dof);
            for c in &r.cells {
                let _ = write!(out, ",{}", c.label());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| level | dof |");
        for &a in &self.alphas {
            let _ = write!(out, " {} |", format_alpha(a));
        }
        out.push_str("\n|---:|---:|");
        out.push_str(&"---:|".repeat(self.alphas.len()));
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "| {} | {} |", r.level, r.dof);
            for c in &r.cells {
                let _ = write!(out, " {} |", c.label());
            }
            out.push('\n');
        }
        out
    }

    /// Residual histories as `level,alpha,iteration,residual` lines.
    pub fn residuals_csv(&self) -> String {
        let mut out = String::from("level,alpha,iteration,residual\n");
        for r in &self.rows {
            for (c, &a) in r.cells.iter().zip(&self.alphas) {
                for (k, v) in c.residual_history.iter().enumerate() {
                    let _ = writeln!(out, "{},{},{k},{v:e}", r.level, format_alpha(a));
                }
            }
        }
        out
    }
}
