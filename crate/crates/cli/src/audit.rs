//! Randomized cross-check of channel inseparability against entanglement
//! generation on the uniform product input.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use pathent::channel::random_ppcptp;
use pathent::random::derive_seed;
use pathent::separability::{entangling_audit, PPT_EXACT_MAX_DIM};

use crate::format::{csv_float, sig6};
use crate::CliError;

pub const AUDIT_HEADER: &str = "sample,seed,rank,v,n_out,inseparable,entangling,consistent";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSpec {
    /// Cycle through `1..=d_A d_B`.
    All,
    Fixed(usize),
}

impl FromStr for RankSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(RankSpec::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(RankSpec::Fixed(k)),
            _ => Err(format!("rank must be `all` or a positive integer, got `{s}`")),
        }
    }
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::All => f.write_str("all"),
            RankSpec::Fixed(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditSpec {
    pub samples: usize,
    pub seed: u64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub rank: RankSpec,
    pub tol: f64,
}

impl Default for AuditSpec {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 42,
            dim_a: 2,
            dim_b: 2,
            rank: RankSpec::All,
            tol: 1e-9,
        }
    }
}

impl AuditSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let n = self.dim_a * self.dim_b;
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be positive".into()));
        }
        if self.dim_a == 0 || self.dim_b == 0 {
            return Err(CliError::Usage("dimensions must be positive".into()));
        }
        if let RankSpec::Fixed(k) = self.rank {
            if k > n {
                return Err(CliError::Usage(format!("rank {k} exceeds d_A d_B = {n}")));
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Exact two-sided mode is only available where PPT decides separability.
    pub fn exact(&self) -> bool {
        self.dim_a * self.dim_b <= PPT_EXACT_MAX_DIM
    }

    fn rank_of(&self, sample: usize) -> usize {
        match self.rank {
            RankSpec::All => 1 + sample % (self.dim_a * self.dim_b),
            RankSpec::Fixed(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRecord {
    pub sample: usize,
    pub seed: u64,
    pub rank: usize,
    pub v: f64,
    pub n_out: f64,
    /// `𝒱 > tol`.
    pub inseparable: bool,
    /// `𝒩 > tol / (d_A d_B)`.
    pub entangling: bool,
    pub consistent: bool,
}

impl AuditRecord {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.sample,
            self.seed,
            self.rank,
            csv_float(self.v),
            csv_float(self.n_out),
            self.inseparable,
            self.entangling,
            self.consistent
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditSummary {
    pub records: Vec<AuditRecord>,
    /// `contingency[i][j]`: `i = 0` for inseparable, `j = 0` for entangling.
    pub contingency: [[usize; 2]; 2],
    pub inconsistent: usize,
    pub exact: bool,
}

pub fn run_audit(spec: &AuditSpec) -> Result<AuditSummary, CliError> {
    spec.validate()?;
    let n = (spec.dim_a * spec.dim_b) as f64;
    let mut records = Vec::with_capacity(spec.samples);
    let mut contingency = [[0; 2]; 2];
    for sample in 0..spec.samples {
        let seed = derive_seed(spec.seed, sample as u64);
        let rank = spec.rank_of(sample);
        let e = random_ppcptp(seed, spec.dim_a, spec.dim_b, rank)?;
        let a = entangling_audit(&e, spec.tol)?;
        let inseparable = a.v > spec.tol;
        let entangling = a.n_out > spec.tol / n;
        contingency[usize::from(!inseparable)][usize::from(!entangling)] += 1;
        records.push(AuditRecord {
            sample,
            seed,
            rank,
            v: a.v,
            n_out: a.n_out,
            inseparable,
            entangling,
            consistent: a.consistent,
        });
    }
    let inconsistent = records.iter().filter(|r| !r.consistent).count();
    Ok(AuditSummary {
        records,
        contingency,
        inconsistent,
        exact: spec.exact(),
    })
}

impl AuditSummary {
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{AUDIT_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.csv())?;
        }
        Ok(())
    }

    pub fn write_summary(&self, spec: &AuditSpec, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(
            out,
            "audit: {} samples, {}x{}, rank {}, seed {}, tol {} ({} mode)",
            spec.samples,
            spec.dim_a,
            spec.dim_b,
            spec.rank,
            spec.seed,
            sig6(spec.tol),
            if self.exact { "exact" } else { "one-directional" }
        )?;
        let c = &self.contingency;
        writeln!(out, "{:>12} {:>12} {:>12}", "", "N > tol'", "N <= tol'")?;
        writeln!(out, "{:>12} {:>12} {:>12}", "V > tol", c[0][0], c[0][1])?;
        writeln!(out, "{:>12} {:>12} {:>12}", "V <= tol", c[1][0], c[1][1])?;
        writeln!(out, "inconsistent samples: {}", self.inconsistent)
    }
}

pub fn cmd_audit(spec: &AuditSpec, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    spec.validate()?;
    if !spec.exact() {
        writeln!(
            diag,
            "warning: d_A d_B = {} > {PPT_EXACT_MAX_DIM}; PPT does not decide separability here, \
             checking only that inseparable channels entangle",
            spec.dim_a * spec.dim_b
        )?;
    }
    let summary = run_audit(spec)?;
    summary.write_csv(out)?;
    summary.write_summary(spec, diag)?;
    if summary.inconsistent > 0 {
        return Err(CliError::Violation(format!(
            "{} of {} samples inconsistent",
            summary.inconsistent, spec.samples
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_parsing() {
        assert_eq!("all".parse::<RankSpec>().unwrap(), RankSpec::All);
        assert_eq!("3".parse::<RankSpec>().unwrap(), RankSpec::Fixed(3));
        assert!("0".parse::<RankSpec>().is_err());
        assert!("x".parse::<RankSpec>().is_err());
    }

    #[test]
    fn default_audit_is_consistent() {
        let s = run_audit(&AuditSpec::default()).unwrap();
        assert_eq!(s.inconsistent, 0);
        assert_eq!(s.contingency[0][1] + s.contingency[1][0], 0);
        assert_eq!(s.records.len(), 200);
    }

    #[test]
    fn rank_one_samples_entangle() {
        let spec = AuditSpec {
            samples: 40,
            rank: RankSpec::Fixed(1),
            ..AuditSpec::default()
        };
        let s = run_audit(&spec).unwrap();
        assert!(s.records.iter().all(|r| r.v > 0.0 && r.n_out > 0.0 && r.consistent));
    }

    #[test]
    fn large_dimensions_use_one_directional_mode() {
        let spec = AuditSpec {
            samples: 6,
            dim_a: 3,
            dim_b: 3,
            ..AuditSpec::default()
        };
        let s = run_audit(&spec).unwrap();
        assert!(!s.exact);
        assert_eq!(s.inconsistent, 0);
    }

    #[test]
    fn invalid_specs() {
        let base = AuditSpec::default();
        assert!(AuditSpec { samples: 0, ..base }.validate().is_err());
        assert!(AuditSpec {
            rank: RankSpec::Fixed(5),
            ..base
        }
        .validate()
        .is_err());
        assert!(AuditSpec { tol: 0.0, ..base }.validate().is_err());
    }
}
