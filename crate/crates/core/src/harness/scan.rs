//! Randomized scans over one ramification type.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartier::{analyze, check_bounds, AnalysisReport};
use crate::curve::{canonicalize_type, CurveInstance, RamificationType};
use crate::error::{CurveError, HarnessError, OracleError, Violation};
use crate::fields::{make_field, FieldCtx, MAX_FIELD_ORDER};

use super::rng::rng_for;
use super::{cross_check, thread_pool};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub p: u32,
    /// Extension degree; `None` picks the smallest `k` with `p^k >= r + 2`.
    pub k: Option<usize>,
    pub n: u32,
    /// Finite multiplicities. If they do not sum to `0 mod n`, one more branch
    /// point carrying the missing multiplicity is added.
    pub mults: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    pub verify: bool,
    #[serde(skip)]
    pub out_format: OutFormat,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(p: u32, n: u32, mults: &[u32], samples: usize, seed: u64) -> Self {
        ScanConfig {
            p,
            k: None,
            n,
            mults: mults.to_vec(),
            samples,
            seed,
            verify: false,
            out_format: OutFormat::Json,
            out_path: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn verified(mut self) -> Self {
        self.verify = true;
        self
    }

    /// The balanced type actually sampled, in the order given.
    pub fn ramification_type(&self) -> Result<RamificationType, HarnessError> {
        // validates, including the implicit completion
        canonicalize_type(self.n, &self.mults, true)?;
        let mut mults = self.mults.clone();
        let sum: u64 = mults.iter().map(|&m| m as u64).sum();
        let rest = (self.n as u64 - sum % self.n as u64) % self.n as u64;
        if rest != 0 {
            mults.push(rest as u32);
        }
        Ok(RamificationType::new(self.n, mults)?)
    }

    /// The sampling field.
    pub fn field(&self, r: usize) -> Result<Arc<FieldCtx>, HarnessError> {
        let k = match self.k {
            Some(k) => k,
            None => {
                let (p, mut k, mut q) = (self.p as u64, 1, self.p as u64);
                while q < r as u64 + 2 && q * p <= MAX_FIELD_ORDER {
                    q *= p;
                    k += 1;
                }
                k
            }
        };
        let field = make_field(self.p, k, 0)?;
        if field.order() < r as u64 {
            return Err(HarnessError::Config(format!(
                "F_{} has fewer than {r} points; use a larger k",
                field.order()
            )));
        }
        Ok(field)
    }
}

/// One sampled instance. Field order matches the CSV columns.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    #[serde(skip)]
    pub index: usize,
    pub instance: String,
    pub p: u32,
    pub k: usize,
    pub n: u32,
    pub mults: String,
    pub g: usize,
    pub a: usize,
    pub rank: usize,
    pub lb: usize,
    pub ub: usize,
    pub superspecial: bool,
    pub verified: Option<bool>,
    #[serde(skip)]
    pub report: AnalysisReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSummary {
    pub config: ScanConfig,
    pub field: String,
    pub rtype: String,
    pub records: Vec<ScanRecord>,
    /// a-number -> number of samples.
    pub histogram: BTreeMap<usize, usize>,
    /// Branch-point draws rejected because they repeated an earlier point.
    pub collision_rejections: u64,
    pub violations: Vec<Violation>,
}

impl ScanSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for rec in &self.records {
            w.serialize(rec)
                .map_err(|e| HarnessError::Serialize(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| HarnessError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Serialize(e.to_string()))
    }

    pub fn render(&self, format: OutFormat) -> Result<String, HarnessError> {
        match format {
            OutFormat::Json => Ok(self.to_json()),
            OutFormat::Csv => self.to_csv(),
        }
    }
}

struct Sample {
    record: Option<ScanRecord>,
    rejections: u64,
    violations: Vec<Violation>,
}

/// Samples `config.samples` covers with distinct random branch points and
/// analyzes each one. Bound failures and oracle disagreements are collected
/// as violations rather than returned as errors.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary, HarnessError> {
    if config.samples == 0 {
        return Err(HarnessError::Config("samples must be at least 1".into()));
    }
    let rtype = config.ramification_type()?;
    let field = config.field(rtype.r())?;
    let pool = thread_pool();
    let outcomes: Vec<Result<Sample, HarnessError>> = pool.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map(|index| sample(config, &field, &rtype, index))
            .collect()
    });
    let mut records = Vec::with_capacity(config.samples);
    let mut violations = Vec::new();
    let mut collision_rejections = 0;
    for outcome in outcomes {
        let s = outcome?;
        collision_rejections += s.rejections;
        records.extend(s.record);
        violations.extend(s.violations);
    }
    records.sort_by_key(|r| r.index);
    let mut histogram = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.a).or_insert(0) += 1;
    }
    Ok(ScanSummary {
        config: config.clone(),
        field: field.encode(),
        rtype: rtype.encode(),
        records,
        histogram,
        collision_rejections,
        violations,
    })
}

fn sample(
    config: &ScanConfig,
    field: &Arc<FieldCtx>,
    rtype: &RamificationType,
    index: usize,
) -> Result<Sample, HarnessError> {
    let mut rng = rng_for(config.seed, index as u64);
    let mut chosen = BTreeSet::new();
    let mut points = Vec::with_capacity(rtype.r());
    let mut rejections = 0;
    while points.len() < rtype.r() {
        let idx = rng.gen_range(0..field.order());
        if chosen.insert(idx) {
            points.push(field.element(idx));
        } else {
            rejections += 1;
        }
    }
    let c = CurveInstance::new(field, rtype.clone(), points)?;
    let mut violations = Vec::new();
    let mut report = match analyze(&c) {
        Ok(r) => r,
        Err(CurveError::Invariant(v)) => {
            return Ok(Sample {
                record: None,
                rejections,
                violations: vec![v],
            })
        }
        Err(e) => return Err(e.into()),
    };
    if config.verify {
        match cross_check(&c, &report) {
            Ok(v) => {
                if !v.all_agree() {
                    violations.push(
                        Violation::new("oracle-disagreement", format!("{v:?}")).on(c.encode()),
                    );
                }
                report.verification = Some(v);
            }
            Err(OracleError::Curve(CurveError::Invariant(v))) => violations.push(v),
            Err(e) => return Err(e.into()),
        }
    }
    violations.extend(check_bounds(&report).violations(&report));
    let record = ScanRecord {
        index,
        instance: report.instance.clone(),
        p: field.p(),
        k: field.k(),
        n: rtype.n(),
        mults: rtype
            .mults()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(","),
        g: report.genus,
        a: report.a_number,
        rank: report.rank,
        lb: report.lower_bound,
        ub: report.upper_bound,
        superspecial: report.superspecial,
        verified: report.verification.as_ref().map(|v| v.all_agree()),
        report,
    };
    Ok(Sample {
        record: Some(record),
        rejections,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char2_triple_is_always_a_1() {
        let s = run_scan(&ScanConfig::new(2, 3, &[1, 1, 1], 20, 5)).unwrap();
        assert!(s.passed());
        assert_eq!(s.records.len(), 20);
        assert_eq!(s.histogram, BTreeMap::from([(1, 20)]));
    }

    #[test]
    fn hyperelliptic_genus_two_stays_in_sandwich() {
        let s = run_scan(&ScanConfig::new(3, 2, &[1; 6], 50, 9)).unwrap();
        assert!(s.passed());
        for r in &s.records {
            assert_eq!(r.g, 2);
            assert!(r.g - r.a <= 2);
        }
    }

    #[test]
    fn implicit_infinity_is_completed() {
        let cfg = ScanConfig::new(5, 3, &[1, 1], 3, 1);
        assert_eq!(cfg.ramification_type().unwrap().mults(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_scan(&ScanConfig::new(3, 2, &[1; 6], 0, 1)).is_err());
        assert!(run_scan(&ScanConfig::new(3, 3, &[1, 1, 1], 1, 1)).is_err());
        let tiny = ScanConfig::new(2, 3, &[1, 1, 1, 1, 1, 1], 1, 1).with_k(2);
        assert!(matches!(run_scan(&tiny), Err(HarnessError::Config(_))));
    }

    #[test]
    fn csv_has_fixed_columns() {
        let s = run_scan(&ScanConfig::new(2, 3, &[1, 1, 1], 2, 3).verified()).unwrap();
        let csv = s.to_csv().unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "instance,p,k,n,mults,g,a,rank,lb,ub,superspecial,verified"
        );
        assert_eq!(csv.lines().count(), 3);
    }
}
