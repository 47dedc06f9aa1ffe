//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional and falls
//! back to the defaults below; an unknown key or a malformed value is an error.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use wildhorse::construction::{ChainConfig, MhatRule};
use wildhorse::core_map::{HorseshoeParams, TangencyParams};
use wildhorse::scalar::{parse_rat, Rat};
use wildhorse::symbolic::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Double,
    MpfrLike,
}

impl FromStr for Backend {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Backend::Rational),
            "double" => Ok(Backend::Double),
            "mpfr-like" => Ok(Backend::MpfrLike),
            _ => Err(anyhow!("backend must be rational, double or mpfr-like, got {s:?}")),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rational => "rational",
            Backend::Double => "double",
            Backend::MpfrLike => "mpfr-like",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Target,
    Dirac,
    Historic,
}

impl FromStr for SimMode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target" => Ok(SimMode::Target),
            "dirac" => Ok(SimMode::Dirac),
            "historic" => Ok(SimMode::Historic),
            _ => Err(anyhow!("mode must be target, dirac or historic, got {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub hp: HorseshoeParams,
    pub tp: TangencyParams,
    pub backend: Backend,
    /// `None` picks enough bits for the longest transition.
    pub precision_bits: Option<usize>,
    pub seed: u64,
    pub depth: usize,
    pub bridge_depth: usize,
    pub growth_pairs: usize,
    pub eps: Rat,
    pub chain: ChainConfig,
    pub rho: Rat,
    pub mode: SimMode,
    pub periodic: Word,
    /// Era starts k_1 < k_2 < …; empty means [first+1, first+6].
    pub eras: Vec<usize>,
    pub grid: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            hp: HorseshoeParams::standard(),
            tp: TangencyParams::standard(),
            backend: Backend::Rational,
            precision_bits: None,
            seed: 0,
            depth: 8,
            bridge_depth: 3,
            growth_pairs: 8,
            eps: Rat::ONE / Rat::from(1000),
            chain: ChainConfig { first: 28, points: 3, window_exp: 2, ..Default::default() },
            rho: Rat::ONE / Rat::from(1000),
            mode: SimMode::Target,
            periodic: Word::new(vec![0]),
            eras: Vec::new(),
            grid: 8,
        }
    }
}

pub const KEYS: &[&str] = &[
    "sigma",
    "lambda",
    "epsilon0",
    "alpha",
    "beta",
    "gamma",
    "mu",
    "delta",
    "window_halfwidths",
    "backend",
    "precision_bits",
    "seed",
    "depth",
    "bridge_depth",
    "growth_pairs",
    "eps",
    "chain_first",
    "chain_points",
    "window_exp",
    "eta",
    "mhat",
    "rho",
    "mode",
    "periodic",
    "eras",
    "grid",
];

fn rat_value(key: &str, v: &str) -> Result<Rat> {
    parse_rat(v).ok_or_else(|| anyhow!("{key}: not a number: {v:?}"))
}

fn int_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| anyhow!("{key}: not a non-negative integer: {v:?}"))
}

fn list(v: &str) -> Vec<&str> {
    v.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn mhat_value(v: &str) -> Result<MhatRule> {
    match v.split_once(':') {
        None if v == "square" => Ok(MhatRule::Square),
        Some(("constant", m)) => Ok(MhatRule::Constant(int_value("mhat", m)?)),
        Some(("linear", c)) => Ok(MhatRule::Linear(int_value("mhat", c)?)),
        _ => bail!("mhat must be square, constant:M or linear:C, got {v:?}"),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen = BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", no + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                bail!("line {}: duplicate key {key}", no + 1);
            }
            cfg.set(key, value).with_context(|| format!("line {}", no + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "sigma" => self.hp.sigma = rat_value(key, v)?,
            "lambda" => self.hp.lambda = rat_value(key, v)?,
            "epsilon0" => self.hp.epsilon0 = rat_value(key, v)?,
            "alpha" => self.tp.alpha = rat_value(key, v)?,
            "beta" => self.tp.beta = rat_value(key, v)?,
            "gamma" => self.tp.gamma = rat_value(key, v)?,
            "mu" => self.tp.mu = rat_value(key, v)?,
            "delta" => self.tp.delta = rat_value(key, v)?,
            "window_halfwidths" => {
                let parts = list(v);
                self.tp.window = match parts.as_slice() {
                    [w] => [rat_value(key, w)?, rat_value(key, w)?],
                    [wx, wy] => [rat_value(key, wx)?, rat_value(key, wy)?],
                    _ => bail!("window_halfwidths: expected one or two numbers"),
                };
            }
            "backend" => self.backend = v.parse()?,
            "precision_bits" => {
                self.precision_bits = if v == "auto" { None } else { Some(int_value(key, v)?) };
            }
            "seed" => self.seed = int_value(key, v)?,
            "depth" => self.depth = int_value(key, v)?,
            "bridge_depth" => self.bridge_depth = int_value(key, v)?,
            "growth_pairs" => self.growth_pairs = int_value(key, v)?,
            "eps" => self.eps = rat_value(key, v)?,
            "chain_first" => self.chain.first = int_value(key, v)?,
            "chain_points" => self.chain.points = int_value(key, v)?,
            "window_exp" => self.chain.window_exp = int_value(key, v)?,
            "eta" => self.chain.eta = v.parse().map_err(|_| anyhow!("eta: not a number: {v:?}"))?,
            "mhat" => self.chain.mhat = mhat_value(v)?,
            "rho" => self.rho = rat_value(key, v)?,
            "mode" => self.mode = v.parse()?,
            "periodic" => self.periodic = v.parse().map_err(|e| anyhow!("periodic: {e}"))?,
            "eras" => self.eras = list(v).into_iter().map(|s| int_value(key, s)).collect::<Result<_>>()?,
            "grid" => self.grid = int_value(key, v)?,
            _ => bail!("unknown key {key:?} (known keys: {})", KEYS.join(", ")),
        }
        Ok(())
    }
}
