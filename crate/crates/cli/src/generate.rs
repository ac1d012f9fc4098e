//! `generate`: sample a set and write it with its block counts.

use lacunary::relations::block_traces;
use lacunary::seq::{sample_set, sample_two_stage, SetRecord};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::OutDir;

#[derive(Serialize)]
struct BlockRow {
    config_hash: String,
    seed: u64,
    n: u64,
    lo: u64,
    hi: Option<u64>,
    count: usize,
    thinned: Option<usize>,
}

#[derive(Serialize)]
struct SummaryRow {
    config_hash: String,
    seed: u64,
    /// Number of base elements considered.
    n: u64,
    lambda_n: u64,
    count: usize,
    sigma: f64,
    in_band: bool,
}

pub fn run(cfg: &RunConfig, out: &OutDir) -> CliResult<Vec<String>> {
    let hash = cfg.hash();
    let count = usize::try_from(cfg.horizon).unwrap_or(usize::MAX);
    let (set, thinned) = match cfg.schedule.secondary_mean() {
        Some(tau) => {
            let s = sample_two_stage(&cfg.schedule, tau, &cfg.base, count, cfg.seed)?;
            (s.primary, Some(s.thinned))
        }
        None => (sample_set(&cfg.schedule, &cfg.base, count, cfg.seed)?, None),
    };
    let mut written = Vec::new();
    let record = |name: &str, elements| SetRecord {
        name: name.into(),
        schedule: Some(cfg.schedule.clone()),
        seed: Some(cfg.seed),
        elements,
    };
    written.push(out.write("set.json", &(record("lambda", set.clone()).to_json() + "\n"))?);
    if let Some(t) = &thinned {
        written.push(out.write("thinned.json", &(record("lambda_thinned", t.clone()).to_json() + "\n"))?);
    }

    let blocks: Vec<BlockRow> = block_traces(&set, &cfg.blocks)
        .into_iter()
        .map(|(n, trace)| {
            let lo = if n == 0 { 1 } else { cfg.blocks.boundary(n).unwrap_or(1) };
            let hi = cfg.blocks.boundary(n + 1).ok();
            let thinned = thinned.as_ref().map(|t| match hi {
                Some(h) => t.block_trace(lo, h).len(),
                None => t.tail_from(lo).len(),
            });
            BlockRow { config_hash: hash.clone(), seed: cfg.seed, n, lo, hi, count: trace.len(), thinned }
        })
        .collect();
    written.push(out.write_csv("blocks.csv", &blocks)?);

    let values = cfg.base.values(count)?;
    let sigma = cfg.schedule.sigma_table(count);
    let mut grid: Vec<u64> = (1..).map(|k| 10u64.pow(k)).take_while(|&n| n < cfg.horizon).collect();
    grid.push(cfg.horizon);
    let summary: Vec<SummaryRow> = grid
        .into_iter()
        .map(|n| {
            let lambda_n = values[n as usize - 1];
            let c = set.count_up_to(lambda_n);
            let s = sigma[n as usize - 1];
            SummaryRow {
                config_hash: hash.clone(),
                seed: cfg.seed,
                n,
                lambda_n,
                count: c,
                sigma: s,
                in_band: (c as f64) >= s / 2.0 && (c as f64) <= 2.0 * s,
            }
        })
        .collect();
    written.push(out.write_csv("summary.csv", &summary)?);
    written.push(out.write("config.toml", &cfg.to_toml())?);
    Ok(written.into_iter().map(|p| p.display().to_string()).collect())
}
