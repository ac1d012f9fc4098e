//! Run configuration: TOML on disk, overridable from flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use lacunary::seq::{BaseSequence, BlockSchedule, MeanSchedule};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Number of base elements sampled.
    pub horizon: u64,
    /// Not part of the hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    pub schedule: MeanSchedule,
    pub base: BaseSequence,
    pub blocks: BlockSchedule,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::Format { path: path.into(), message: e.to_string() })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form, without
    /// the output directory.
    pub fn hash(&self) -> String {
        let canonical = RunConfig { out_dir: None, ..self.clone() };
        short_hash(&serde_json::to_string(&canonical).expect("configs always serialize"))
    }
}

pub fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    format!("{digest:x}")[..16].to_string()
}

/// Flags shared by the commands that sample or describe a set.
#[derive(Debug, Clone, Default, Args)]
pub struct SetupArgs {
    /// TOML run configuration; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Mean schedule: t2_2, p2_4, t2_5, t2_6, t2_7, t2_10 or katz_mall.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Schedule constant c.
    #[arg(long)]
    pub c: Option<f64>,
    /// Exponent p for t2_5, t2_6 and t2_10.
    #[arg(long)]
    pub p: Option<f64>,
    /// Second-stage mean for t2_7.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Base sequence: naturals, primes, squares or powers:D.
    #[arg(long)]
    pub base: Option<String>,
    /// Block schedule: n_pow_n, exp_loglog_sq, n_pow_beta_n or dyadic.
    #[arg(long)]
    pub blocks: Option<String>,
    /// β for n_pow_beta_n blocks.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Horizon: number of base elements to sample.
    #[arg(long = "n")]
    pub horizon: Option<u64>,
}

impl SetupArgs {
    /// Merges the config file and flags. A schedule is required from one of them.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let file = self.config.as_deref().map(RunConfig::load).transpose()?;
        let schedule = match (&self.schedule, &file) {
            (Some(tag), _) => parse_schedule(tag, self.c, self.p, self.tau)?,
            (None, Some(cfg)) => match self.c {
                Some(c) => cfg.schedule.with_c(c),
                None => cfg.schedule.clone(),
            },
            (None, None) => return Err(CliError::Usage("a schedule is required: pass --schedule or --config".into())),
        };
        schedule.validate()?;
        let base = match &self.base {
            Some(b) => parse_base(b)?,
            None => file.as_ref().map_or(BaseSequence::Naturals, |f| f.base.clone()),
        };
        let blocks = match &self.blocks {
            Some(b) => parse_blocks(b, self.beta)?,
            None => file.as_ref().map_or(BlockSchedule::NPowN, |f| f.blocks),
        };
        let horizon = self.horizon.or(file.as_ref().map(|f| f.horizon)).unwrap_or(100_000);
        if horizon == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        Ok(RunConfig {
            seed: self.seed.or(file.as_ref().map(|f| f.seed)).unwrap_or(0),
            horizon,
            out_dir: file.and_then(|f| f.out_dir),
            schedule,
            base,
            blocks,
        })
    }
}

pub fn parse_schedule(tag: &str, c: Option<f64>, p: Option<f64>, tau: Option<f64>) -> CliResult<MeanSchedule> {
    let c = c.unwrap_or(1.0);
    let p = p.unwrap_or(1.5);
    Ok(match tag {
        "t2_2" => MeanSchedule::LogLog { c },
        "p2_4" => MeanSchedule::LogLogOrlicz { c },
        "t2_5" => MeanSchedule::PowerLog { c, p },
        "t2_6" => MeanSchedule::PowerLogLog { c, p },
        "t2_7" => MeanSchedule::Dyadic { c, tau: tau.unwrap_or(1.0) },
        "t2_10" => MeanSchedule::PowerLogHigh { c, p },
        "katz_mall" => MeanSchedule::KatzMalliavin { c },
        other => return Err(CliError::Usage(format!("unknown schedule '{other}'"))),
    })
}

pub fn parse_base(text: &str) -> CliResult<BaseSequence> {
    Ok(match text {
        "naturals" => BaseSequence::Naturals,
        "primes" => BaseSequence::Primes,
        "squares" => BaseSequence::squares(),
        other => match other.strip_prefix("powers:").map(str::parse::<u32>) {
            Some(Ok(d)) if d >= 1 => BaseSequence::PerfectPowers { d },
            _ => return Err(CliError::Usage(format!("unknown base '{other}'"))),
        },
    })
}

pub fn parse_blocks(text: &str, beta: Option<f64>) -> CliResult<BlockSchedule> {
    Ok(match text {
        "n_pow_n" => BlockSchedule::NPowN,
        "exp_loglog_sq" => BlockSchedule::ExpLogLogSq,
        "dyadic" => BlockSchedule::Dyadic,
        "n_pow_beta_n" => BlockSchedule::NPowBetaN { beta: beta.unwrap_or(1.0) },
        other => return Err(CliError::Usage(format!("unknown block schedule '{other}'"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_keeps_hash() {
        let cfg = RunConfig {
            seed: 7,
            horizon: 1000,
            out_dir: Some("out".into()),
            schedule: MeanSchedule::Dyadic { c: 0.04, tau: 0.04 },
            base: BaseSequence::squares(),
            blocks: BlockSchedule::NPowBetaN { beta: 2.0 },
        };
        let back: RunConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        let moved = RunConfig { out_dir: None, ..cfg.clone() };
        assert_eq!(moved.hash(), cfg.hash());
        assert_ne!(RunConfig { seed: 8, ..cfg.clone() }.hash(), cfg.hash());
    }

    #[test]
    fn flags_override_file_defaults() {
        let args = SetupArgs { schedule: Some("t2_2".into()), c: Some(0.5), seed: Some(3), ..Default::default() };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.schedule, MeanSchedule::LogLog { c: 0.5 });
        assert_eq!(cfg.base, BaseSequence::Naturals);
        assert!(matches!(SetupArgs::default().resolve(), Err(CliError::Usage(_))));
        assert!(parse_base("powers:3").is_ok() && parse_base("powers:0").is_err());
    }
}
