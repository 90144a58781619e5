//! Timing harness comparing the engine with a materializing baseline.
//!
//! Four inputs: a wrong-typed scalar, a valid scalar, a long valid vector,
//! and a long vector whose first element is missing. Each is checked for
//! "numeric, no missing values, all >= 0" by three implementations:
//!
//! * `engine_structured` builds the options and calls the vector check.
//! * `engine_dsl` parses and evaluates the rule `N[0,]` on every call.
//! * `naive_two_pass` writes a full missingness mask and a full `>= 0` mask
//!   before aggregating either.

use std::collections::HashMap;
use std::fmt;
use std::hint::black_box;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::api::families::{test_numeric, VectorOpts};
use crate::dsl::qtest;
use crate::value::{Data, Value};

pub const DEFAULT_N: usize = 1_000_000;
pub const DEFAULT_REPS: usize = 100;
pub const DEFAULT_WARMUP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioId {
    WrongType,
    ScalarOk,
    LongOk,
    LongNaFirst,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [
        ScenarioId::WrongType,
        ScenarioId::ScalarOk,
        ScenarioId::LongOk,
        ScenarioId::LongNaFirst,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::WrongType => "S1_wrong_type",
            ScenarioId::ScalarOk => "S2_scalar_ok",
            ScenarioId::LongOk => "S3_long_ok",
            ScenarioId::LongNaFirst => "S4_long_na_first",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioId::WrongType => "Str scalar",
            ScenarioId::ScalarOk => "Float scalar",
            ScenarioId::LongOk => "Float vector of n positive elements",
            ScenarioId::LongNaFirst => "Float vector of n elements, the first missing",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = BenchError;

    /// Accepts the full id or its `S1`..`S4` prefix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s || id.as_str().split('_').next() == Some(s))
            .ok_or_else(|| BenchError::UnknownScenario(s.to_owned()))
    }
}

/// A scenario with its input built once, outside any timed region.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: ScenarioId,
    pub n: usize,
    pub input: Value,
}

impl Scenario {
    /// `n` only affects the two long scenarios.
    pub fn new(id: ScenarioId, n: usize) -> Self {
        let input = match id {
            ScenarioId::WrongType => Value::strs(["a"]),
            ScenarioId::ScalarOk => Value::float([1.0]),
            ScenarioId::LongOk => Value::float((0..n).map(|i| 1.0 + (i % 1000) as f64)),
            ScenarioId::LongNaFirst => {
                Value::float((0..n).map(|i| if i == 0 { None } else { Some(1.0 + (i % 1000) as f64) }))
            }
        };
        let n = match id {
            ScenarioId::WrongType | ScenarioId::ScalarOk => 1,
            _ => n,
        };
        Scenario { id, n, input }
    }

    pub fn all(n: usize) -> Vec<Scenario> {
        ScenarioId::ALL.into_iter().map(|id| Scenario::new(id, n)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Implementation {
    EngineStructured,
    EngineDsl,
    NaiveTwoPass,
}

impl Implementation {
    pub const ALL: [Implementation; 3] = [
        Implementation::EngineStructured,
        Implementation::EngineDsl,
        Implementation::NaiveTwoPass,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Implementation::EngineStructured => "engine_structured",
            Implementation::EngineDsl => "engine_dsl",
            Implementation::NaiveTwoPass => "naive_two_pass",
        }
    }

    /// The verdict for "numeric, no missing values, all >= 0".
    pub fn run(self, x: &Value) -> bool {
        match self {
            Implementation::EngineStructured => engine_structured(x),
            Implementation::EngineDsl => qtest(x, "N[0,]").expect("constant rule parses"),
            Implementation::NaiveTwoPass => naive_two_pass(x),
        }
    }
}

impl fmt::Display for Implementation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn engine_structured(x: &Value) -> bool {
    let opts = VectorOpts {
        any_missing_ok: false,
        lower: Some(0.0),
        ..VectorOpts::default()
    };
    test_numeric(x, &opts).expect("constant options are valid")
}

/// Type check, then one full mask per constraint, aggregated afterwards.
pub fn naive_two_pass(x: &Value) -> bool {
    let converted: Vec<f64>;
    let xs: &[f64] = match x.data() {
        Data::Float(v) => v.raw(),
        Data::Int(v) => {
            converted = v.iter().map(|o| o.map_or(f64::NAN, |n| n as f64)).collect();
            &converted
        }
        _ => return false,
    };
    let missing: Vec<bool> = xs.iter().map(|v| v.is_nan()).collect();
    if missing.iter().any(|&m| m) {
        return false;
    }
    let nonneg: Vec<bool> = xs.iter().map(|&v| v >= 0.0).collect();
    nonneg.iter().all(|&ok| ok)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("implementations disagree on {scenario}: {verdicts}")]
    Disagreement { scenario: ScenarioId, verdicts: String },
    #[error("reps must be at least 1")]
    NoReps,
    #[error("no timing records for {0}")]
    EmptyGroup(String),
}

/// One timed replication. `replication` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingRecord {
    pub scenario: ScenarioId,
    pub implementation: Implementation,
    pub replication: usize,
    pub elapsed_ns: u64,
}

/// Fails unless every implementation returns the same verdict per scenario.
pub fn check_agreement(scenarios: &[Scenario], implementations: &[Implementation]) -> Result<(), BenchError> {
    for s in scenarios {
        let verdicts: Vec<(Implementation, bool)> = implementations.iter().map(|i| (*i, i.run(&s.input))).collect();
        if verdicts.windows(2).any(|w| w[0].1 != w[1].1) {
            let verdicts = verdicts
                .iter()
                .map(|(i, v)| format!("{i}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(BenchError::Disagreement { scenario: s.id, verdicts });
        }
    }
    Ok(())
}

/// Times `reps` calls per (scenario, implementation) after `warmup`
/// untimed calls. Verdicts are checked for agreement first.
pub fn run_benchmark(
    scenarios: &[Scenario],
    implementations: &[Implementation],
    reps: usize,
    warmup: usize,
) -> Result<Vec<TimingRecord>, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoReps);
    }
    check_agreement(scenarios, implementations)?;
    let mut records = Vec::with_capacity(scenarios.len() * implementations.len() * reps);
    for s in scenarios {
        for &imp in implementations {
            for _ in 0..warmup {
                black_box(imp.run(black_box(&s.input)));
            }
            for rep in 1..=reps {
                let start = Instant::now();
                let verdict = imp.run(black_box(&s.input));
                let elapsed = start.elapsed();
                black_box(verdict);
                records.push(TimingRecord {
                    scenario: s.id,
                    implementation: imp,
                    replication: rep,
                    elapsed_ns: u64::try_from(elapsed.as_nanos()).unwrap_or(u64::MAX).max(1),
                });
            }
        }
    }
    Ok(records)
}

/// Order statistics of one group, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub min: u64,
    pub median: f64,
    pub mean: f64,
    pub max: u64,
}

impl Stats {
    /// `None` for an empty sample. The median of an even count is the mean
    /// of the central pair.
    pub fn of(samples: &[u64]) -> Option<Stats> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_unstable();
        let k = s.len();
        let median = if k % 2 == 1 {
            s[k / 2] as f64
        } else {
            (s[k / 2 - 1] as f64 + s[k / 2] as f64) / 2.0
        };
        let mean = s.iter().map(|&v| v as f64).sum::<f64>() / k as f64;
        Some(Stats {
            min: s[0],
            median,
            mean,
            max: s[k - 1],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub scenario: ScenarioId,
    pub implementation: Implementation,
    pub stats: Stats,
}

/// One summary per (scenario, implementation) group, in order of first
/// appearance.
pub fn summarize(records: &[TimingRecord]) -> Result<Vec<Summary>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyGroup("any group".into()));
    }
    let mut order = Vec::new();
    let mut groups: HashMap<(ScenarioId, Implementation), Vec<u64>> = HashMap::new();
    for r in records {
        let key = (r.scenario, r.implementation);
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r.elapsed_ns);
    }
    order
        .into_iter()
        .map(|(scenario, implementation)| {
            let stats = Stats::of(&groups[&(scenario, implementation)])
                .ok_or_else(|| BenchError::EmptyGroup(format!("{scenario}/{implementation}")))?;
            Ok(Summary {
                scenario,
                implementation,
                stats,
            })
        })
        .collect()
}

/// Median of one group, if it has records.
pub fn median_ns(records: &[TimingRecord], scenario: ScenarioId, implementation: Implementation) -> Option<f64> {
    let samples: Vec<u64> = records
        .iter()
        .filter(|r| r.scenario == scenario && r.implementation == implementation)
        .map(|r| r.elapsed_ns)
        .collect();
    Stats::of(&samples).map(|s| s.median)
}

pub fn write_records<W: Write>(mut w: W, records: &[TimingRecord]) -> io::Result<()> {
    writeln!(w, "scenario,implementation,replication,elapsed_ns")?;
    for r in records {
        writeln!(w, "{},{},{},{}", r.scenario, r.implementation, r.replication, r.elapsed_ns)?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(mut w: W, summaries: &[Summary]) -> io::Result<()> {
    writeln!(w, "scenario,implementation,min_ns,median_ns,mean_ns,max_ns")?;
    for s in summaries {
        let st = s.stats;
        writeln!(
            w,
            "{},{},{},{},{:.1},{}",
            s.scenario, s.implementation, st.min, st.median, st.mean, st.max
        )?;
    }
    Ok(())
}
