//! Line-oriented `key = value` configuration and the flag/file/default
//! precedence used by every subcommand: a command-line flag wins, a config
//! file entry fills in behind it, and the built-in default comes last.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use biparse::{AgreementConfig, AlphaSchedule, ConvergenceMode, Side};

use crate::fail::{CmdResult, Failure};
use crate::AgreementFlags;

/// Every key any subcommand understands. One shared namespace lets a
/// single file serve several commands of one run; unknown keys fail fast
/// so a typo cannot be silently ignored.
const KNOWN_KEYS: &[&str] = &[
    "alignments",
    "alpha-schedule",
    "alpha0",
    "baseline",
    "baseline-only",
    "convergence",
    "corrected",
    "diagnostics",
    "direction",
    "epochs",
    "gold",
    "inner-iters",
    "iters",
    "kind",
    "lang",
    "models",
    "out",
    "out-src",
    "out-tgt",
    "outer-iters",
    "pairs",
    "seed",
    "side",
    "src",
    "src-lang",
    "tgt",
    "tgt-lang",
    "treebank",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    /// No path means an empty configuration (defaults only).
    pub fn load(path: Option<&Path>) -> CmdResult<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::validation(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    i + 1
                )));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Failure::validation(format!(
                    "{}:{}: unknown key {key:?}",
                    path.display(),
                    i + 1
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    /// Flag value, else config value, else `None`.
    pub fn optional<T>(&self, flag: Option<T>, key: &str) -> CmdResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        debug_assert!(KNOWN_KEYS.contains(&key), "unlisted config key {key}");
        if let Some(value) = flag {
            return Ok(Some(value));
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(text) => text.parse().map(Some).map_err(|e| {
                Failure::validation(format!("config key `{key}`: invalid value {text:?}: {e}"))
            }),
        }
    }

    /// Flag value, else config value, else the built-in default.
    pub fn or_default<T>(&self, flag: Option<T>, key: &str, default: T) -> CmdResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.optional(flag, key)?.unwrap_or(default))
    }

    /// Flag value, else config value, else an error naming both spellings.
    pub fn required<T>(&self, flag: Option<T>, key: &str) -> CmdResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.optional(flag, key)?.ok_or_else(|| {
            Failure::validation(format!("missing --{key} (or config key `{key}`)"))
        })
    }

    /// True when the flag is set or the config enables the key.
    pub fn enabled(&self, flag: bool, key: &str) -> CmdResult<bool> {
        if flag {
            return Ok(true);
        }
        self.or_default(None, key, false)
    }
}

pub fn parse_schedule(text: &str) -> CmdResult<AlphaSchedule> {
    match text {
        "constant" => Ok(AlphaSchedule::Constant),
        "harmonic" => Ok(AlphaSchedule::Harmonic),
        other => Err(Failure::validation(format!(
            "alpha-schedule must be `constant` or `harmonic`, got {other:?}"
        ))),
    }
}

pub fn parse_convergence(text: &str) -> CmdResult<ConvergenceMode> {
    match text {
        "either" => Ok(ConvergenceMode::Either),
        "both" => Ok(ConvergenceMode::Both),
        other => Err(Failure::validation(format!(
            "convergence must be `either` or `both`, got {other:?}"
        ))),
    }
}

pub fn parse_side(text: &str) -> CmdResult<Side> {
    match text {
        "src" => Ok(Side::Src),
        "tgt" => Ok(Side::Tgt),
        other => Err(Failure::validation(format!(
            "side must be `src` or `tgt`, got {other:?}"
        ))),
    }
}

/// Resolve the shared agreement knobs; defaults match the library's.
pub fn resolve_agreement(flags: &AgreementFlags, cfg: &FileConfig) -> CmdResult<AgreementConfig> {
    let defaults = AgreementConfig::default();
    let schedule_name = cfg.or_default(
        flags.alpha_schedule.clone(),
        "alpha-schedule",
        "constant".to_string(),
    )?;
    let convergence_name =
        cfg.or_default(flags.convergence.clone(), "convergence", "either".to_string())?;
    let resolved = AgreementConfig {
        outer_iters: cfg.or_default(flags.outer_iters, "outer-iters", defaults.outer_iters)?,
        inner_iters: cfg.or_default(flags.inner_iters, "inner-iters", defaults.inner_iters)?,
        alpha0: cfg.or_default(flags.alpha0, "alpha0", defaults.alpha0)?,
        alpha_schedule: parse_schedule(&schedule_name)?,
        convergence_mode: parse_convergence(&convergence_name)?,
        seed: cfg.or_default(flags.seed, "seed", defaults.seed)?,
    };
    resolved
        .validate()
        .map_err(|e| Failure::validation(e.to_string()))?;
    Ok(resolved)
}
