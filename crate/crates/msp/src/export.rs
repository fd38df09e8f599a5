//! Matrix Market export of an assembled problem.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use msp_core::control::{build, exact_schur_precond, ProblemConfig};
use msp_core::saddle::DENSE_CAP;
use serde::Serialize;

use crate::error::Result;
use crate::mtx::{write_symmetric, write_vector};

#[derive(Debug, Serialize)]
struct Layout<'a> {
    problem: String,
    dim: usize,
    degree: usize,
    level: u32,
    alpha: f64,
    labels: &'a [&'static str],
    block_dims: Vec<usize>,
    offsets: &'a [usize],
}

/// Writes `system.mtx`, `rhs.mtx`, `precond_practical.mtx`, optionally
/// `precond_exact.mtx`, and `layout.json` into `dir`. Returns the written paths.
pub fn export_problem(cfg: &ProblemConfig, dir: &Path, exact: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let prob = build(cfg)?;
    let mut written = Vec::new();
    let mut open = |name: &str| -> Result<BufWriter<File>> {
        let p = dir.join(name);
        let f = File::create(&p)?;
        written.push(p);
        Ok(BufWriter::new(f))
    };
    write_symmetric(open("system.mtx")?, &prob.system.assemble_full())?;
    write_vector(open("rhs.mtx")?, &prob.rhs)?;
    write_symmetric(open("precond_practical.mtx")?, &prob.practical.to_sparse())?;
    if exact {
        write_symmetric(open("precond_exact.mtx")?, &exact_schur_precond(&prob, DENSE_CAP)?.to_sparse())?;
    }
    let layout = Layout {
        problem: cfg.problem.to_string(),
        dim: cfg.dim,
        degree: cfg.degree,
        level: cfg.level,
        alpha: cfg.alpha,
        labels: &prob.labels,
        block_dims: prob.system.block_dims(),
        offsets: prob.system.offsets(),
    };
    serde_json::to_writer_pretty(open("layout.json")?, &layout)?;
    Ok(written)
}
