//! Shared argument groups and the key=value config file.
//!
//! Every numeric input is parsed as an unbounded decimal string. A config
//! file supplies defaults for any long flag; explicit flags win.

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use mh_core::{DeformationSchedule, Equation, Integer, Limits, MutationWord, Rational, SolutionTuple};
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Args, Debug, Clone)]
pub struct EquationArgs {
    /// Number of variables (n >= 3)
    #[arg(long)]
    pub n: Option<usize>,

    /// Comma-separated lambda coefficients (default: all zeros)
    #[arg(long)]
    pub lambda: Option<String>,

    /// Product-coefficient offset a (default: n)
    #[arg(long)]
    pub a: Option<String>,

    /// Constant offset b (default: 0)
    #[arg(long)]
    pub b: Option<String>,
}

impl EquationArgs {
    pub fn build(&self, config: &Config) -> Result<Equation> {
        let n = match self.n.or_else(|| config.get_parsed("n")) {
            Some(n) => n,
            None => bail!("--n is required (or set n= in the config file)"),
        };
        let lambda_text = self
            .lambda
            .clone()
            .or_else(|| config.get("lambda").map(str::to_string));
        let lambda: Vec<Integer> = match lambda_text {
            Some(text) => parse_integer_list(&text).context("parsing --lambda")?,
            None => vec![Integer::new(); n],
        };
        let a = match self.a.clone().or_else(|| config.get("a").map(str::to_string)) {
            Some(text) => parse_integer(&text).context("parsing --a")?,
            None => Integer::from(n as u64),
        };
        let b = match self.b.clone().or_else(|| config.get("b").map(str::to_string)) {
            Some(text) => parse_integer(&text).context("parsing --b")?,
            None => Integer::new(),
        };
        Ok(Equation::new(n, lambda, a, b)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    /// Word source: `cyclic`, `random:<seed>`, `file:<path>`, or an inline
    /// comma-separated label list such as `2,1,3`
    #[arg(long)]
    pub word: Option<String>,

    /// Length of generated (cyclic/random) words
    #[arg(long)]
    pub length: Option<usize>,
}

impl WordArgs {
    pub fn build(&self, config: &Config, n: usize, default_len: Option<usize>) -> Result<MutationWord> {
        let source = self
            .word
            .clone()
            .or_else(|| config.get("word").map(str::to_string))
            .ok_or_else(|| anyhow!("--word is required (cyclic | random:<seed> | file:<path> | inline list)"))?;
        let length = self
            .length
            .or_else(|| config.get_parsed("length"))
            .or(default_len);
        let need_len = || {
            length.ok_or_else(|| anyhow!("--length (or --depth) is required for generated words"))
        };
        let word = if source == "cyclic" {
            MutationWord::cyclic(n, need_len()?)
        } else if let Some(seed_text) = source.strip_prefix("random:") {
            let seed: u64 = seed_text
                .parse()
                .map_err(|_| anyhow!("invalid seed in --word {source}"))?;
            MutationWord::seeded_random(n, need_len()?, seed)
        } else if let Some(path) = source.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading word file {path}"))?;
            let cleaned = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join(",");
            MutationWord::parse(&cleaned)?
        } else {
            MutationWord::parse(&source)?
        };
        word.validate_for(n)?;
        Ok(word)
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format
    #[arg(long)]
    pub format: Option<String>,

    /// Significant digits for floating-point output
    #[arg(long)]
    pub digits: Option<u32>,

    /// Worker threads for parallel frontier expansion
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

impl OutputArgs {
    pub fn format(&self, config: &Config, default: Format) -> Result<Format> {
        let text = self
            .format
            .clone()
            .or_else(|| config.get("format").map(str::to_string));
        Ok(match text.as_deref() {
            None => default,
            Some("table") => Format::Table,
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some("dot") => Format::Dot,
            Some(other) => bail!("unknown format {other:?} (table | json | csv | dot)"),
        })
    }

    pub fn digits(&self, config: &Config) -> u32 {
        self.digits
            .or_else(|| config.get_parsed("digits"))
            .unwrap_or(12)
    }

    pub fn threads(&self, config: &Config) -> usize {
        self.threads
            .or_else(|| config.get_parsed("threads"))
            .unwrap_or(1)
    }
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    /// Maximum bit length per coordinate
    #[arg(long)]
    pub bitlen: Option<u32>,

    /// Maximum descent chain length
    #[arg(long, name = "max-steps")]
    pub max_steps: Option<usize>,
}

impl LimitArgs {
    pub fn build(&self, config: &Config) -> Limits {
        let defaults = Limits::default();
        Limits {
            max_coord_bits: self
                .bitlen
                .or_else(|| config.get_parsed("bitlen"))
                .unwrap_or(defaults.max_coord_bits),
            max_chain_steps: self
                .max_steps
                .or_else(|| config.get_parsed("max-steps"))
                .unwrap_or(defaults.max_chain_steps),
        }
    }
}

/// Values from a `key=value` config file; flags override these.
#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

pub const KNOWN_KEYS: &[&str] = &[
    "n", "lambda", "a", "b", "word", "length", "format", "digits", "threads", "bitlen",
    "max-steps", "point", "depth", "bound", "box-bound", "direction", "k", "start",
];

impl Config {
    pub fn load(path: Option<&str>) -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading config {path}"))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("{path}:{}: expected key=value", lineno + 1))?;
                let key = key.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    bail!("{path}:{}: unknown config key {key:?}", lineno + 1);
                }
                values.insert(key, value.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: FromStr>(&self, key: &str) -> Option<T> {
        self.get(key).and_then(|v| v.parse().ok())
    }
}

pub fn parse_integer(text: &str) -> Result<Integer> {
    Integer::from_str(text.trim()).map_err(|_| anyhow!("not a decimal integer: {text:?}"))
}

pub fn parse_integer_list(text: &str) -> Result<Vec<Integer>> {
    text.split(',')
        .map(parse_integer)
        .collect::<Result<Vec<_>>>()
}

pub fn parse_point(text: &str) -> Result<SolutionTuple> {
    Ok(SolutionTuple::new(parse_integer_list(text)?)?)
}

/// `p`, `p/q`, or a comma-separated list of those for schedules.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    Rational::from_str(trimmed)
        .ok()
        .filter(|r| *r >= 0)
        .ok_or_else(|| anyhow!("not a nonnegative rational: {text:?}"))
}

pub fn parse_schedule(text: &str) -> Result<DeformationSchedule> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() == 1 {
        Ok(DeformationSchedule::constant(parse_rational(parts[0])?)?)
    } else {
        let values = parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeformationSchedule::sequence(values)?)
    }
}
