//! Scans, verification campaigns and report emission.

pub mod campaigns;
pub mod rng;
pub mod scan;

use crate::cartier::{cartier_block, AnalysisReport, Verification};
use crate::curve::CurveInstance;
use crate::error::OracleError;
use crate::oracle::{cartier_via_rational, hyperelliptic_a_number, supersingular_by_count};

pub use campaigns::{
    char2_verify, lemma_rank_exhaustive, lemma_rank_random, superspecial_search, Char2Report,
    LemmaConfig, LemmaReport, LemmaViolation, SuperspecialHit, SuperspecialReport,
};
pub use scan::{run_scan, OutFormat, ScanConfig, ScanRecord, ScanSummary};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CARTIER_KIT_THREADS";

/// Worker pool sized by [`THREADS_ENV`]; unset or unparsable means rayon's default.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool builds")
}

/// Runs every oracle that applies to `c` against its report.
///
/// The dual-path comparison always runs. The Cartier-Manin comparison runs for
/// `n = 2` and odd `p`, and the point count for genus 1.
pub fn cross_check(
    c: &CurveInstance,
    report: &AnalysisReport,
) -> Result<Verification, OracleError> {
    let dims = c.eigen_dims();
    let mut dual_path = true;
    for i in 1..c.n() as usize {
        let block = cartier_block(c, i)?;
        for j in 1..=dims[i - 1] {
            if cartier_via_rational(c, i, j)? != block.matrix.column(j - 1) {
                dual_path = false;
            }
        }
    }
    let cartier_manin = if c.n() == 2 && c.p() != 2 {
        Some(hyperelliptic_a_number(c)? == report.a_number)
    } else {
        None
    };
    let point_count = if report.genus == 1 {
        Some(supersingular_by_count(&c.to_spec())? == (report.a_number == 1))
    } else {
        None
    };
    Ok(Verification {
        dual_path,
        cartier_manin,
        point_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartier::analyze;
    use crate::curve::RamificationType;
    use crate::fields::make_field;

    #[test]
    fn cross_check_on_small_instances() {
        let f = make_field(3, 2, 0).unwrap();
        let pts = (0..6).map(|i| f.element(i)).collect();
        let c = CurveInstance::new(&f, RamificationType::new(2, vec![1; 6]).unwrap(), pts).unwrap();
        let report = analyze(&c).unwrap();
        let v = cross_check(&c, &report).unwrap();
        assert!(v.all_agree());
        assert!(v.cartier_manin.is_some());
        assert!(v.point_count.is_none());

        let f = make_field(2, 2, 0).unwrap();
        let pts = (0..3).map(|i| f.element(i)).collect();
        let c = CurveInstance::new(&f, RamificationType::new(3, vec![1; 3]).unwrap(), pts).unwrap();
        let report = analyze(&c).unwrap();
        let v = cross_check(&c, &report).unwrap();
        assert_eq!(v.point_count, Some(true));
        assert_eq!(v.cartier_manin, None);
        assert!(v.dual_path);
    }
}
