//! Validated run parameters shared by all subcommands.

use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use num_complex::Complex64;
use paramod::rootsys::Series;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Algebra {
    pub series: String,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: Option<(Series, usize)>,
    pub level: i64,
    pub depth: usize,
    pub tau: Complex64,
    pub tolerance: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// A usage problem: bad flag values rather than a failed computation.
#[derive(Debug)]
pub struct UsageError(pub String);

impl RunConfig {
    pub fn validate(self) -> Result<Self, UsageError> {
        if self.depth < 1 {
            return Err(UsageError("--depth must be at least 1".into()));
        }
        if self.level < 0 {
            return Err(UsageError("--level must be nonnegative".into()));
        }
        if !(self.tau.im > 0.0) || !self.tau.re.is_finite() || !self.tau.im.is_finite() {
            return Err(UsageError(format!("tau must lie in the upper half-plane, got {}", self.tau)));
        }
        if !(self.tolerance > 0.0) {
            return Err(UsageError("--tolerance must be positive".into()));
        }
        Ok(self)
    }

    pub fn algebra_label(&self) -> Option<Algebra> {
        self.algebra.map(|(s, r)| Algebra {
            series: s.to_string(),
            rank: r,
        })
    }
}

/// Parses `a+bi`, `bi`, `a` (e.g. `0.1+1.05i`, `1.3i`).
pub fn parse_tau(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&t).map_err(|_| format!("cannot parse '{s}' as a complex number such as 0.1+1.05i"))
}

/// Comma-separated integers such as `1,0,-2`, taken as one argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

pub fn parse_ints(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("'{x}' is not an integer")))
        .collect::<Result<Vec<_>, _>>()
        .map(IntList)
}

pub fn parse_series(s: &str) -> Result<Series, String> {
    Series::from_str(s)
}
