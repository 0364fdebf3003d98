//! The Cartier operator on regular differentials of `y^n = f(x)`, block by
//! block along the eigenspace decomposition.
//!
//! For `1 <= i < n` set `h_rank,i = f^eps(i) h_min,i / h_min,sigma(i)^p` and
//! decompose `h_rank,i = sum_t f_{i,t}(x)^p x^t`. Then
//!
//! ```text
//! C(w_{i,j}) = x^(ceil(j/p) - 1) f_{i, (-j mod p)}(x) w_{sigma(i),1}
//! ```
//!
//! so `C` maps `D_i` into `D_sigma(i)`, and the rank of `C` is the sum of the
//! ranks of the blocks.
//!
//! `C` is `p^{-1}`-linear rather than linear. Over a perfect field the image of
//! a semilinear map is still spanned by the images of a basis, so its
//! dimension is the ordinary rank of the matrix of those images. Ranks are
//! also stable under extension of the base field, so computing over a finite
//! field gives the same answer as over its algebraic closure.

use serde::Serialize;

use crate::curve::CurveInstance;
use crate::error::{CurveError, Violation};
use crate::fields::FieldElem;
use crate::matrix::Matrix;
use crate::poly::{gcd_all, Poly};

/// The matrix of `C` restricted to `D_i`, with columns the images of
/// `w_{i,1}, ..., w_{i,d_i}` in the basis `w_{sigma(i),1..}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierBlock {
    pub source: usize,
    pub target: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSummary {
    pub i: usize,
    pub sigma: usize,
    pub d_i: usize,
    pub d_sigma: usize,
    pub rank: usize,
}

impl BlockSummary {
    /// `min(2 floor(d_i/p), d_sigma(i))`.
    pub fn lower(&self, p: u32) -> usize {
        (2 * (self.d_i / p as usize)).min(self.d_sigma)
    }

    /// `min(d_i, d_sigma(i))`.
    pub fn upper(&self) -> usize {
        self.d_i.min(self.d_sigma)
    }
}

/// Outcome of [`crate::harness::cross_check`]; attached to a report on request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    /// Every block column matches the rational-differential recomputation.
    pub dual_path: bool,
    /// `n = 2`, odd `p`: a-number from the Cartier-Manin matrix matches.
    pub cartier_manin: Option<bool>,
    /// Genus 1: supersingularity by point count matches `a = 1`.
    pub point_count: Option<bool>,
}

impl Verification {
    pub fn all_agree(&self) -> bool {
        self.dual_path && self.cartier_manin != Some(false) && self.point_count != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub instance: String,
    pub genus: usize,
    pub a_number: usize,
    pub rank: usize,
    pub per_block: Vec<BlockSummary>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub superspecial: bool,
    pub dmax: usize,
    pub char2_formula_value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip)]
    pub p: u32,
    #[serde(skip)]
    pub n: u32,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn violation(c: &CurveInstance, check: &str, detail: String) -> CurveError {
    CurveError::Invariant(Violation::new(check, detail).on(c.encode()))
}

/// `f^eps(i) h_min,i / h_min,sigma(i)^p`, with its degree and root orders checked.
pub fn h_rank(c: &CurveInstance, i: usize) -> Result<Poly, CurveError> {
    let src = c.eigen_data(i)?;
    let dst = c.eigen_data(src.sigma)?;
    let p = c.p() as u64;
    let numerator = &c.f().pow(src.eps as u64) * &src.h_min;
    let denominator = dst.h_min.pow(p);
    let h = numerator.exact_div(&denominator).map_err(|_| {
        violation(
            c,
            "h-rank-divisibility",
            format!(
                "h_min,{}^{p} does not divide f^{} h_min,{i}",
                dst.i, src.eps
            ),
        )
    })?;
    let expected = p as i64 * dst.d as i64 - src.d as i64 + p as i64 - 1;
    if h.degree().map(|d| d as i64) != Some(expected) {
        return Err(violation(
            c,
            "h-rank-degree",
            format!("deg h_rank,{i} = {:?}, expected {expected}", h.degree()),
        ));
    }
    for a in c.branch_points() {
        let ord = h.vanishing_order(a).expect("h is nonzero");
        if ord as u64 >= p {
            return Err(violation(
                c,
                "h-rank-root-order",
                format!("h_rank,{i} vanishes to order {ord} at {a}"),
            ));
        }
    }
    Ok(h)
}

/// The components `f_{i,0}, ..., f_{i,p-1}` of `h_rank,i`.
///
/// They generate the unit ideal, and the largest degree
/// `d_sigma(i) - floor(d_i/p)` is reached at `t = (-d_i - 1) mod p`.
pub fn decomp(c: &CurveInstance, i: usize) -> Result<Vec<Poly>, CurveError> {
    let h = h_rank(c, i)?;
    let parts = h.frobenius_decompose();
    let g = gcd_all(&parts).expect("h_rank is nonzero");
    if g.degree() != Some(0) {
        return Err(violation(
            c,
            "unit-ideal",
            format!("components of h_rank,{i} share the factor {g}"),
        ));
    }
    let (sigma, _) = c.sigma_eps(i)?;
    let dims = c.eigen_dims();
    let (d_i, d_s) = (dims[i - 1], dims[sigma - 1]);
    let p = c.p() as usize;
    let cap = d_s - d_i / p;
    let top = (p - (d_i + 1) % p) % p;
    let max_deg = parts.iter().filter_map(Poly::degree).max();
    if max_deg != Some(cap) || parts[top].degree() != Some(cap) {
        return Err(violation(
            c,
            "component-degree",
            format!(
                "max component degree {max_deg:?}, component {top} has {:?}, expected {cap}",
                parts[top].degree()
            ),
        ));
    }
    Ok(parts)
}

/// The block of `C` on `D_i`.
pub fn cartier_block(c: &CurveInstance, i: usize) -> Result<CartierBlock, CurveError> {
    let parts = decomp(c, i)?;
    let (sigma, _) = c.sigma_eps(i)?;
    let dims = c.eigen_dims();
    let (d_i, d_s) = (dims[i - 1], dims[sigma - 1]);
    let p = c.p() as usize;
    let mut columns: Vec<Vec<FieldElem>> = Vec::with_capacity(d_i);
    for j in 1..=d_i {
        let t = (p - j % p) % p;
        let shift = j.div_ceil(p) - 1;
        let image = parts[t].shift(shift);
        if image.degree().is_some_and(|d| d >= d_s) {
            return Err(violation(
                c,
                "block-column-degree",
                format!(
                    "C(w_({i},{j})) has degree {:?} >= d_{sigma} = {d_s}",
                    image.degree()
                ),
            ));
        }
        columns.push((0..d_s).map(|s| image.coeff(s)).collect());
    }
    Ok(CartierBlock {
        source: i,
        target: sigma,
        matrix: Matrix::from_columns(c.field(), d_s, &columns),
    })
}

/// Rank of a `p^{-1}`-linear map given by its matrix on a basis.
///
/// Semilinearity only twists scalars by an automorphism of the (perfect)
/// field, so the image is the column span and the plain rank is its dimension.
pub fn rank_semilinear(m: &Matrix) -> usize {
    m.rank()
}

/// Every block assembled into the `g x g` matrix of `C` on the full basis
/// (eigenspaces in order `D_1, D_2, ...`).
pub fn full_matrix(c: &CurveInstance) -> Result<Matrix, CurveError> {
    let dims = c.eigen_dims();
    let mut offsets = vec![0usize; dims.len() + 1];
    for (idx, d) in dims.iter().enumerate() {
        offsets[idx + 1] = offsets[idx] + d;
    }
    let g = offsets[dims.len()];
    let mut m = Matrix::zeros(c.field(), g, g);
    for i in 1..c.n() as usize {
        let block = cartier_block(c, i)?;
        let (row0, col0) = (offsets[block.target - 1], offsets[i - 1]);
        for r in 0..block.matrix.rows() {
            for s in 0..block.matrix.cols() {
                m.set(row0 + r, col0 + s, block.matrix.get(r, s).clone());
            }
        }
    }
    Ok(m)
}

/// Genus, rank of `C`, a-number, per-block ranks and the bound data.
pub fn analyze(c: &CurveInstance) -> Result<AnalysisReport, CurveError> {
    let p = c.p();
    let genus = c.genus();
    let dims = c.eigen_dims();
    if dims.iter().sum::<usize>() != genus {
        return Err(violation(
            c,
            "genus-dimension-sum",
            format!(
                "sum d_i = {} but genus = {genus}",
                dims.iter().sum::<usize>()
            ),
        ));
    }
    let mut per_block = Vec::with_capacity(dims.len());
    for i in 1..c.n() as usize {
        let block = cartier_block(c, i)?;
        per_block.push(BlockSummary {
            i,
            sigma: block.target,
            d_i: dims[i - 1],
            d_sigma: dims[block.target - 1],
            rank: rank_semilinear(&block.matrix),
        });
    }
    let rank: usize = per_block.iter().map(|b| b.rank).sum();
    let a_number = genus - rank;
    let lower_bound = per_block.iter().map(|b| b.lower(p)).sum();
    let upper_bound: usize = per_block.iter().map(BlockSummary::upper).sum();
    Ok(AnalysisReport {
        instance: c.encode(),
        genus,
        a_number,
        rank,
        per_block,
        lower_bound,
        upper_bound,
        superspecial: a_number == genus,
        dmax: dims.iter().copied().max().unwrap_or(0),
        char2_formula_value: (p == 2).then(|| genus - upper_bound),
        verification: None,
        p,
        n: c.n(),
    })
}

/// Pass/fail flags for every bound that applies to a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    /// `lower <= g - a <= upper`.
    pub sandwich_holds: bool,
    /// `n = 2`, `p > 2`: not `g - a <= 2g/p - 2`. True when not applicable.
    pub hyperelliptic_bound_holds: bool,
    /// Superspecial implies every `d_i < p` and `g <= (p-1)(n-1)`.
    pub superspecial_bound_holds: bool,
    /// Not `g - a < 2g/(p(p+1)) + (p-1)/(p+1)`. Informational only: supersingular
    /// elliptic curves already fall below this, so it is never treated as a violation.
    pub re_curve_consistent: bool,
    /// Per block: `min(2 floor(d_i/p), d_sigma) <= rank <= min(d_i, d_sigma)`.
    pub block_sandwich: Vec<bool>,
    /// `p = 2`: `a = g - sum min(d_i, d_sigma(i))`. True when not applicable.
    pub char2_formula_holds: bool,
}

impl BoundCheck {
    pub fn violations(&self, report: &AnalysisReport) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |check: &str, detail: String| {
            out.push(Violation::new(check, detail).on(report.instance.clone()));
        };
        let ga = report.genus - report.a_number;
        if !self.sandwich_holds {
            push(
                "rank-sandwich",
                format!(
                    "g - a = {ga} outside [{}, {}]",
                    report.lower_bound, report.upper_bound
                ),
            );
        }
        if !self.hyperelliptic_bound_holds {
            push(
                "hyperelliptic-bound",
                format!(
                    "g = {}, a = {}, p = {}",
                    report.genus, report.a_number, report.p
                ),
            );
        }
        if !self.superspecial_bound_holds {
            push(
                "superspecial-bound",
                format!(
                    "superspecial with dmax = {}, g = {}",
                    report.dmax, report.genus
                ),
            );
        }
        for (ok, b) in self.block_sandwich.iter().zip(&report.per_block) {
            if !ok {
                push(
                    "block-sandwich",
                    format!(
                        "block {} -> {}: rank {} outside [{}, {}]",
                        b.i,
                        b.sigma,
                        b.rank,
                        b.lower(report.p),
                        b.upper()
                    ),
                );
            }
        }
        if !self.char2_formula_holds {
            push(
                "char2-formula",
                format!(
                    "a = {} but g - sum min = {:?}",
                    report.a_number, report.char2_formula_value
                ),
            );
        }
        out
    }

    pub fn all_hold(&self) -> bool {
        self.sandwich_holds
            && self.hyperelliptic_bound_holds
            && self.superspecial_bound_holds
            && self.char2_formula_holds
            && self.block_sandwich.iter().all(|&b| b)
    }
}

pub fn check_bounds(report: &AnalysisReport) -> BoundCheck {
    let (p, n) = (report.p as usize, report.n as usize);
    let g = report.genus;
    let ga = g - report.a_number;
    let sandwich_holds = report.lower_bound <= ga && ga <= report.upper_bound;
    // g - a <= 2g/p - 2  <=>  p (g - a) <= 2g - 2p
    let hyperelliptic_bound_holds =
        !(n == 2 && p > 2 && (p * ga) as i64 <= 2 * g as i64 - 2 * p as i64);
    let superspecial_bound_holds = !report.superspecial
        || (report.per_block.iter().all(|b| b.d_i < p) && g <= (p - 1) * (n - 1));
    // g - a < 2g/(p(p+1)) + (p-1)/(p+1)  <=>  (g - a) p (p+1) < 2g + p (p-1)
    let re_curve_consistent = g == 0 || ga * p * (p + 1) >= 2 * g + p * (p - 1);
    let block_sandwich = report
        .per_block
        .iter()
        .map(|b| b.lower(report.p) <= b.rank && b.rank <= b.upper())
        .collect();
    let char2_formula_holds = report
        .char2_formula_value
        .is_none_or(|v| v == report.a_number);
    BoundCheck {
        sandwich_holds,
        hyperelliptic_bound_holds,
        superspecial_bound_holds,
        re_curve_consistent,
        block_sandwich,
        char2_formula_holds,
    }
}
