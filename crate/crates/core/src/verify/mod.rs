//! Verification suites: exhaustive sweeps at small rank,
//! seeded sampling above it, chunked over a rayon pool.
//!
//! Every work unit is a `(rank, index)` pair. Exhaustive suites read `index`
//! as a subset mask or a position in a precomputed list; sampled suites seed
//! a private random stream from `(seed, rank, index)`. Chunk results are
//! merged in chunk order, so the outcome does not depend on the number of
//! workers or on scheduling.

mod binary;
mod free;
mod gen;
mod paving;
mod ternary;
mod two_loose;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::Falsification;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "LOOSEMAT_WORKERS";

/// Violations kept in full per outcome; further ones are only counted.
const VIOLATION_KEEP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ThmBinary,
    ThmTernaryBound,
    ThmTwoLoose,
    ThmPaving,
    PropFree,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::ThmBinary,
        Suite::ThmTernaryBound,
        Suite::ThmTwoLoose,
        Suite::ThmPaving,
        Suite::PropFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ThmBinary => "thm-binary",
            Suite::ThmTernaryBound => "thm-ternary-bound",
            Suite::ThmTwoLoose => "thm-two-loose",
            Suite::ThmPaving => "thm-paving",
            Suite::PropFree => "prop-free",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        let norm = s.replace('_', "-").to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == norm)
            .ok_or_else(|| VerifyError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub q: u8,
    pub min_rank: usize,
    pub max_rank: usize,
    pub mode: Mode,
    /// Samples per rank (sampled mode).
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl SuiteConfig {
    /// Sampled mode at a single rank, 1000 samples, seed 0.
    pub fn new(suite: Suite, q: u8, rank: usize) -> Self {
        SuiteConfig {
            suite,
            q,
            min_rank: rank,
            max_rank: rank,
            mode: Mode::Sampled,
            samples: 1000,
            seed: 0,
            chunk_size: 256,
        }
    }

    pub fn ranks(mut self, min: usize, max: usize) -> Self {
        self.min_rank = min;
        self.max_rank = max;
        self
    }

    pub fn exhaustive(mut self) -> Self {
        self.mode = Mode::Exhaustive;
        self
    }

    pub fn samples(mut self, n: u64) -> Self {
        self.samples = n;
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn chunk_size(mut self, c: u64) -> Self {
        self.chunk_size = c;
        self
    }

    fn rank_range(&self) -> std::ops::RangeInclusive<usize> {
        self.min_rank..=self.max_rank
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// A request outside the table of supported sweeps.
    #[error("guard: {0}")]
    Guard(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A failed check, with the work unit that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rank: usize,
    /// Work-unit index; `None` for a failed control.
    pub index: Option<u64>,
    pub falsification: Falsification,
}

/// A fixed instance with a known expected verdict. Negative controls feed
/// the suite's checker a corrupted instance and expect it to be caught.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Control {
    pub name: String,
    pub negative: bool,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub config: SuiteConfig,
    /// Instances that passed the suite's filters and were checked.
    pub examined: u64,
    pub tallies: BTreeMap<String, u64>,
    pub maxima: BTreeMap<String, u64>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub controls: Vec<Control>,
    /// How sampled instances are skewed away from uniform.
    pub bias: Option<String>,
    pub pass: bool,
    pub elapsed_ms: u64,
}

impl SuiteOutcome {
    /// Everything except the elapsed time, as JSON. Equal seeds give equal
    /// strings regardless of worker count.
    pub fn tallies_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("outcome serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("elapsed_ms");
        }
        serde_json::to_string(&v).expect("value serializes")
    }
}

/// Per-chunk accumulator.
#[derive(Debug, Default)]
pub(crate) struct Acc {
    examined: u64,
    tallies: BTreeMap<String, u64>,
    maxima: BTreeMap<String, u64>,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl Acc {
    pub(crate) fn examined(&mut self) {
        self.examined += 1;
    }

    pub(crate) fn tally(&mut self, key: impl Into<String>, n: u64) {
        *self.tallies.entry(key.into()).or_default() += n;
    }

    pub(crate) fn max(&mut self, key: impl Into<String>, v: u64) {
        let slot = self.maxima.entry(key.into()).or_default();
        *slot = (*slot).max(v);
    }

    pub(crate) fn violate(&mut self, rank: usize, index: u64, falsification: Falsification) {
        self.violation_count += 1;
        if self.violations.len() < VIOLATION_KEEP {
            self.violations.push(Violation {
                rank,
                index: Some(index),
                falsification,
            });
        }
    }

    fn merge(&mut self, other: Acc) {
        self.examined += other.examined;
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_default() += v;
        }
        for (k, v) in other.maxima {
            let slot = self.maxima.entry(k).or_default();
            *slot = (*slot).max(v);
        }
        self.violation_count += other.violation_count;
        let room = VIOLATION_KEEP.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }
}

/// One suite bound to a configuration.
pub(crate) trait Runner: Sync {
    /// `(rank, unit count)` in sweep order.
    fn units(&self) -> Vec<(usize, u64)>;
    fn run(&self, rank: usize, index: u64, acc: &mut Acc);
    /// Controls run once, single-threaded; they may also add tallies.
    fn controls(&self, acc: &mut Acc) -> Vec<Control>;
    fn bias(&self) -> Option<String> {
        None
    }
}

fn runner(cfg: &SuiteConfig) -> Result<Box<dyn Runner>, VerifyError> {
    if cfg.min_rank > cfg.max_rank {
        return Err(VerifyError::Config(format!(
            "rank range {}..{} is empty",
            cfg.min_rank, cfg.max_rank
        )));
    }
    if cfg.chunk_size == 0 {
        return Err(VerifyError::Config("chunk size must be positive".into()));
    }
    crate::gfq::field(cfg.q as u32).map_err(|e| VerifyError::Config(e.to_string()))?;
    Ok(match cfg.suite {
        Suite::ThmBinary => Box::new(binary::BinarySuite::new(cfg)?),
        Suite::ThmTernaryBound => Box::new(ternary::TernarySuite::new(cfg)?),
        Suite::ThmTwoLoose => Box::new(two_loose::TwoLooseSuite::new(cfg)?),
        Suite::ThmPaving => Box::new(paving::PavingSuite::new(cfg)?),
        Suite::PropFree => Box::new(free::FreeSuite::new(cfg)?),
    })
}

fn env_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&w| w > 0)
}

/// Runs a suite with the worker count from [`WORKERS_ENV`], or rayon's
/// default.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome, VerifyError> {
    run_suite_with(cfg, env_workers())
}

pub fn run_suite_with(cfg: &SuiteConfig, workers: Option<usize>) -> Result<SuiteOutcome, VerifyError> {
    let start = Instant::now();
    let runner = runner(cfg)?;
    execute(cfg, runner.as_ref(), workers, start)
}

fn execute(
    cfg: &SuiteConfig,
    runner: &dyn Runner,
    workers: Option<usize>,
    start: Instant,
) -> Result<SuiteOutcome, VerifyError> {
    let mut chunks = Vec::new();
    for (rank, count) in runner.units() {
        let mut lo = 0;
        while lo < count {
            let hi = (lo + cfg.chunk_size).min(count);
            chunks.push((rank, lo, hi));
            lo = hi;
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| VerifyError::Config(e.to_string()))?;
    let parts: Vec<Acc> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(rank, lo, hi)| {
                let mut acc = Acc::default();
                for index in lo..hi {
                    runner.run(rank, index, &mut acc);
                }
                acc
            })
            .collect()
    });
    let mut total = Acc::default();
    for p in parts {
        total.merge(p);
    }
    let controls = runner.controls(&mut total);
    let mut violations = total.violations;
    let mut violation_count = total.violation_count;
    for c in controls.iter().filter(|c| !c.ok) {
        violation_count += 1;
        violations.push(Violation {
            rank: 0,
            index: None,
            falsification: Falsification {
                claim: format!("control {}", c.name),
                detail: format!("expected {}, observed {}", c.expected, c.observed),
                elements: Vec::new(),
                matrix: String::new(),
            },
        });
    }
    Ok(SuiteOutcome {
        config: cfg.clone(),
        examined: total.examined,
        tallies: total.tallies,
        maxima: total.maxima,
        violation_count,
        pass: violation_count == 0,
        violations,
        controls,
        bias: runner.bias(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Re-runs one work unit in isolation.
pub fn replay(cfg: &SuiteConfig, rank: usize, index: u64) -> Result<Vec<Violation>, VerifyError> {
    replay_unit(runner(cfg)?.as_ref(), rank, index)
}

fn replay_unit(runner: &dyn Runner, rank: usize, index: u64) -> Result<Vec<Violation>, VerifyError> {
    let Some(&(_, count)) = runner.units().iter().find(|(r, _)| *r == rank) else {
        return Err(VerifyError::Config(format!(
            "rank {rank} is not swept by this configuration"
        )));
    };
    if index >= count {
        return Err(VerifyError::Config(format!(
            "unit {index} out of range (rank {rank} has {count})"
        )));
    }
    let mut acc = Acc::default();
    runner.run(rank, index, &mut acc);
    Ok(acc.violations)
}

fn control(name: &str, negative: bool, expected: &str, observed: String) -> Control {
    Control {
        name: name.to_string(),
        negative,
        ok: observed == expected,
        expected: expected.to_string(),
        observed,
    }
}
