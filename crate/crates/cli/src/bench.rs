//! Query-count benchmark sweeps.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use tarski_core::{Instance, Point, SplitMix64};

use crate::{Algo, CliError, Kind};

/// One CSV row. `verified` is always true: failed runs abort the sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub algo: String,
    pub shape: String,
    #[serde(rename = "N")]
    pub n: i64,
    pub seed: u64,
    pub queries: u64,
    pub verified: bool,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sides: Vec<i64>,
    pub kind: Kind,
    pub reps: u64,
    pub seed: u64,
    pub algos: Vec<Algo>,
    pub wall_time: bool,
}

/// Target for a row: three coordinates drawn from `SplitMix64(row_seed)`.
pub fn sample_target(shape: &[i64], row_seed: u64) -> Point {
    let mut rng = SplitMix64::new(row_seed);
    Point::new(shape.iter().map(|&n| rng.coord(n)).collect())
}

pub fn instance_for(kind: Kind, shape: &[i64], row_seed: u64) -> Result<Instance, CliError> {
    Ok(match kind {
        Kind::Target => Instance::target(shape, sample_target(shape, row_seed))?,
        Kind::Random => tarski_core::oracle::gen_random_monotone(shape, row_seed)?,
        Kind::Affine => tarski_core::oracle::gen_affine(shape, row_seed)?,
        Kind::Rotation => tarski_core::oracle::gen_rotation(shape, row_seed)?,
    })
}

fn run_row(cfg: &BenchConfig, algo: Algo, side: i64, rep: u64) -> Result<BenchRow, CliError> {
    let shape = [side; 3];
    let row_seed = cfg.seed.wrapping_add(rep);
    let inst = instance_for(cfg.kind, &shape, row_seed)?;
    let start = Instant::now();
    let run = crate::solve_instance(&inst, algo, false, false)?;
    let elapsed = start.elapsed().as_millis() as u64;
    // independent of the solver's own check: evaluate F directly
    let verified = inst.eval(&run.fixed_point)? == run.fixed_point;
    if !verified {
        return Err(CliError::Unverified(format!("{} on side {side}, seed {row_seed}", algo.name())));
    }
    Ok(BenchRow {
        algo: algo.name().to_string(),
        shape: format!("{side}x{side}x{side}"),
        n: 3 * side,
        seed: row_seed,
        queries: run.queries,
        verified,
        wall_time_ms: if cfg.wall_time { elapsed } else { 0 },
    })
}

/// Rows in `(algo, side, rep)` order; runs execute in parallel.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    if cfg.sides.iter().any(|&n| n < 1) {
        return Err(CliError::Usage("sides must be positive".into()));
    }
    let jobs: Vec<(Algo, i64, u64)> = cfg
        .algos
        .iter()
        .flat_map(|&a| cfg.sides.iter().flat_map(move |&s| (0..cfg.reps).map(move |r| (a, s, r))))
        .collect();
    jobs.par_iter().map(|&(a, s, r)| run_row(cfg, a, s, r)).collect()
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["algo", "shape", "N", "seed", "queries", "verified", "wall_time_ms"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
