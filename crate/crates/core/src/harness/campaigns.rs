//! Verification campaigns built on scans and on the oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::curve::{gcd, RamificationType};
use crate::error::{HarnessError, Violation};
use crate::fields::{make_field, FieldCtx};
use crate::oracle::lemma_rank_dim;
use crate::poly::{gcd_all, Poly};

use super::rng::{rng_for, sample_seed};
use super::scan::{run_scan, ScanConfig};

/// Outcome of the characteristic-2 campaign for one type.
#[derive(Clone, Debug, Serialize)]
pub struct Char2Report {
    pub rtype: String,
    pub genus: usize,
    pub sum_min: usize,
    /// `sum min(d_i, d_sigma(i))`, the value the formula gives without `g -`.
    pub uncorrected_value: usize,
    /// `g - sum min(d_i, d_sigma(i))`.
    pub corrected_value: usize,
    /// a-number -> number of samples.
    pub observed: BTreeMap<usize, usize>,
    pub constant: bool,
    pub matches_corrected: bool,
    pub uncorrected_differs: bool,
    pub counterexample: Option<String>,
    pub violations: Vec<Violation>,
}

impl Char2Report {
    pub fn passed(&self) -> bool {
        self.constant && self.matches_corrected && self.violations.is_empty()
    }
}

/// Samples a type over a field of characteristic 2 and checks that the
/// a-number is constant and equal to `g - sum min(d_i, d_sigma(i))`.
pub fn char2_verify(
    n: u32,
    mults: &[u32],
    samples: usize,
    seed: u64,
    k: Option<usize>,
) -> Result<Char2Report, HarnessError> {
    let mut cfg = ScanConfig::new(2, n, mults, samples, seed);
    cfg.k = k;
    let scan = run_scan(&cfg)?;
    let first = scan
        .records
        .first()
        .ok_or_else(|| HarnessError::Config("scan produced no records".into()))?;
    let genus = first.g;
    let sum_min = first.ub;
    let corrected_value = genus - sum_min;
    let constant = scan.histogram.len() == 1;
    let counterexample = scan
        .records
        .iter()
        .find(|r| r.a != corrected_value)
        .map(|r| r.instance.clone());
    Ok(Char2Report {
        rtype: scan.rtype.clone(),
        genus,
        sum_min,
        uncorrected_value: sum_min,
        corrected_value,
        observed: scan.histogram.clone(),
        constant,
        matches_corrected: counterexample.is_none(),
        uncorrected_differs: sum_min != corrected_value,
        counterexample,
        violations: scan.violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperspecialHit {
    pub instance: String,
    pub rtype: String,
    pub g: usize,
    pub dmax: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperspecialReport {
    pub p: u32,
    pub types_scanned: usize,
    pub samples_run: usize,
    pub hits: Vec<SuperspecialHit>,
    /// Genus-1 samples whose point count was compared with `a = 1`.
    pub point_count_checks: usize,
    pub point_count_agreements: usize,
    pub violations: Vec<Violation>,
}

impl SuperspecialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.point_count_checks == self.point_count_agreements
    }
}

/// Canonical types `(n; n_1..n_r)` of positive genus with `n <= n_max`
/// coprime to `p` and `3 <= r <= r_max`.
pub fn enumerate_types(p: u32, n_max: u32, r_max: usize) -> Vec<RamificationType> {
    let mut out = BTreeSet::new();
    for n in 2..=n_max {
        if gcd(p as u64, n as u64) != 1 {
            continue;
        }
        for r in 3..=r_max {
            let mut mults = vec![1u32; r];
            loop {
                if let Ok(t) = RamificationType::new(n, mults.clone()) {
                    if t.genus() >= 1 {
                        out.insert(t.canonical());
                    }
                }
                // next nondecreasing tuple over 1..n
                let Some(pos) = (0..r).rev().find(|&j| mults[j] < n - 1) else {
                    break;
                };
                let v = mults[pos] + 1;
                for m in &mut mults[pos..] {
                    *m = v;
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Scans every type from [`enumerate_types`] and collects the superspecial
/// samples (`a = g >= 1`). Each hit must have every `d_i < p` and
/// `g <= (p-1)(n-1)`; genus-1 samples are also checked by point counting.
pub fn superspecial_search(
    p: u32,
    n_max: u32,
    r_max: usize,
    samples: usize,
    seed: u64,
) -> Result<SuperspecialReport, HarnessError> {
    let types = enumerate_types(p, n_max, r_max);
    let mut report = SuperspecialReport {
        p,
        types_scanned: types.len(),
        samples_run: 0,
        hits: Vec::new(),
        point_count_checks: 0,
        point_count_agreements: 0,
        violations: Vec::new(),
    };
    for (idx, t) in types.iter().enumerate() {
        let mut cfg = ScanConfig::new(p, t.n(), t.mults(), samples, sample_seed(seed, idx as u64));
        cfg.verify = t.genus() == 1;
        let scan = run_scan(&cfg)?;
        report.samples_run += scan.records.len();
        report.violations.extend(scan.violations);
        let bound = (p as usize - 1) * (t.n() as usize - 1);
        for rec in &scan.records {
            if let Some(v) = &rec.report.verification {
                report.point_count_checks += 1;
                if v.point_count == Some(true) {
                    report.point_count_agreements += 1;
                }
            }
            if !rec.superspecial || rec.g == 0 {
                continue;
            }
            if rec.report.dmax >= p as usize || rec.g > bound {
                report.violations.push(
                    Violation::new(
                        "superspecial-hit-bound",
                        format!(
                            "dmax = {}, g = {}, (p-1)(n-1) = {bound}",
                            rec.report.dmax, rec.g
                        ),
                    )
                    .on(rec.instance.clone()),
                );
            }
            report.hits.push(SuperspecialHit {
                instance: rec.instance.clone(),
                rtype: t.encode(),
                g: rec.g,
                dmax: rec.report.dmax,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaConfig {
    pub p: u32,
    pub k: usize,
    pub r: usize,
    pub deg_max: usize,
    pub m_max: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaViolation {
    pub polys: Vec<String>,
    pub m: usize,
    pub d: usize,
    pub dim: usize,
    pub lower: usize,
    pub cap: usize,
    pub check: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub field: String,
    pub r: usize,
    pub checked: usize,
    /// Random tuples rejected because their gcd was not 1.
    pub rejections: u64,
    pub equality_expected: bool,
    /// `dim V - min(2m, m + d)` -> count.
    pub excess: BTreeMap<usize, usize>,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn new(field: &FieldCtx, r: usize) -> Self {
        LemmaReport {
            field: field.encode(),
            r,
            checked: 0,
            rejections: 0,
            equality_expected: r <= 2,
            excess: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    /// Checks one coprime tuple against the lower bound, the ambient cap and,
    /// for `r <= 2`, equality.
    fn check(&mut self, polys: &[Poly], m: usize) -> Result<(), HarnessError> {
        let d = polys.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let dim = lemma_rank_dim(polys, m)?;
        let lower = (2 * m).min(m + d);
        let cap = (polys.len() * m).min(m + d);
        self.checked += 1;
        let failed = if dim < lower {
            Some("lower-bound")
        } else if dim > cap {
            Some("ambient-cap")
        } else if self.equality_expected && dim != lower {
            Some("equality")
        } else {
            None
        };
        if let Some(check) = failed {
            self.violations.push(LemmaViolation {
                polys: polys.iter().map(Poly::encode).collect(),
                m,
                d,
                dim,
                lower,
                cap,
                check: check.to_string(),
            });
        }
        if dim >= lower {
            *self.excess.entry(dim - lower).or_insert(0) += 1;
        }
        Ok(())
    }
}

fn is_coprime(polys: &[Poly]) -> bool {
    gcd_all(polys).is_some_and(|g| g.degree() == Some(0))
}

fn random_poly(field: &Arc<FieldCtx>, deg_max: usize, rng: &mut impl Rng) -> Poly {
    let coeffs = (0..=deg_max)
        .map(|_| field.element(rng.gen_range(0..field.order())))
        .collect();
    Poly::new(field, coeffs)
}

/// Random coprime `r`-tuples of degree at most `deg_max` with random
/// `0 <= m <= m_max`, drawn by rejection until the gcd is 1.
pub fn lemma_rank_random(cfg: &LemmaConfig) -> Result<LemmaReport, HarnessError> {
    if cfg.r == 0 {
        return Err(HarnessError::Config("r must be at least 1".into()));
    }
    let field = make_field(cfg.p, cfg.k, 0)?;
    let mut report = LemmaReport::new(&field, cfg.r);
    for t in 0..cfg.trials {
        let mut rng = rng_for(cfg.seed, t as u64);
        let polys = loop {
            let polys: Vec<Poly> = (0..cfg.r)
                .map(|_| random_poly(&field, cfg.deg_max, &mut rng))
                .collect();
            if is_coprime(&polys) {
                break polys;
            }
            report.rejections += 1;
        };
        let m = rng.gen_range(0..=cfg.m_max);
        report.check(&polys, m)?;
    }
    Ok(report)
}

/// Every coprime pair of polynomials of degree at most `deg_max` over
/// `F_{p^k}`, for every `1 <= m <= m_max`.
pub fn lemma_rank_exhaustive(
    p: u32,
    k: usize,
    deg_max: usize,
    m_max: usize,
) -> Result<LemmaReport, HarnessError> {
    let field = make_field(p, k, 0)?;
    let q = field.order();
    let count = q.pow(deg_max as u32 + 1);
    let all: Vec<Poly> = (0..count)
        .map(|mut idx| {
            let coeffs = (0..=deg_max)
                .map(|_| {
                    let c = field.element(idx % q);
                    idx /= q;
                    c
                })
                .collect();
            Poly::new(&field, coeffs)
        })
        .collect();
    let mut report = LemmaReport::new(&field, 2);
    for (a, f1) in all.iter().enumerate() {
        for f2 in &all[a..] {
            let pair = [f1.clone(), f2.clone()];
            if !is_coprime(&pair) {
                continue;
            }
            for m in 1..=m_max {
                report.check(&pair, m)?;
            }
        }
    }
    Ok(report)
}
