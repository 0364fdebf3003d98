//! Ramification types, concrete cyclic covers `y^n = f(x)`, and the
//! eigenspace bookkeeping for their regular differentials.
//!
//! For `1 <= i < n` the eigenspace `D_i` has basis
//! `w_{i,j} = x^(j-1) h_min,i(x) dx / y^i`, `1 <= j <= d_i`, where
//! `h_min,i = prod (x - a)^floor(i n_a / n)` over the finite branch points.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{CurveError, ParseError, Violation};
use crate::fields::{FieldCtx, FieldElem};
use crate::poly::Poly;

/// Maximum extension degree [`normalize_infinity`] may use to find a spare point.
pub const MAX_SPARE_EXTENSION: usize = 4;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The tuple `(n; n_1, ..., n_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RamificationType {
    n: u32,
    mults: Vec<u32>,
}

impl RamificationType {
    /// Validates a type whose multiplicities already sum to `0 mod n`.
    pub fn new(n: u32, mults: Vec<u32>) -> Result<Self, CurveError> {
        if n < 2 {
            return Err(CurveError::BadOrder(n));
        }
        if let Some(&m) = mults.iter().find(|&&m| m == 0 || m >= n) {
            return Err(CurveError::BadMultiplicity { n, mult: m });
        }
        let g = mults.iter().fold(n as u64, |g, &m| gcd(g, m as u64));
        if g != 1 {
            return Err(CurveError::Disconnected(g as u32));
        }
        let sum: u64 = mults.iter().map(|&m| m as u64).sum();
        if !sum.is_multiple_of(n as u64) {
            return Err(CurveError::NotBalanced { n, sum });
        }
        Ok(RamificationType { n, mults })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn r(&self) -> usize {
        self.mults.len()
    }

    /// `g = 1 + (n (r - 2) - sum gcd(n, n_j)) / 2`.
    pub fn genus(&self) -> usize {
        let n = self.n as i64;
        let r = self.r() as i64;
        let s: i64 = self
            .mults
            .iter()
            .map(|&m| gcd(self.n as u64, m as u64) as i64)
            .sum();
        let twice = 2 + n * (r - 2) - s;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2) as usize
    }

    /// `d_i = (sum_j (i n_j mod n)) / n - 1`.
    pub fn eigen_dim(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i < self.n as usize);
        let n = self.n as u64;
        let s: u64 = self.mults.iter().map(|&m| (i as u64 * m as u64) % n).sum();
        debug_assert!(s.is_multiple_of(n) && s >= n);
        (s / n - 1) as usize
    }

    /// `[d_1, ..., d_{n-1}]`.
    pub fn eigen_dims(&self) -> Vec<usize> {
        (1..self.n as usize).map(|i| self.eigen_dim(i)).collect()
    }

    /// Smallest representative over units of `Z/n` and permutations.
    pub fn canonical(&self) -> RamificationType {
        let n = self.n as u64;
        let best = (1..n)
            .filter(|&u| gcd(u, n) == 1)
            .map(|u| {
                let mut m: Vec<u32> = self
                    .mults
                    .iter()
                    .map(|&x| ((u * x as u64) % n) as u32)
                    .collect();
                m.sort_unstable();
                m
            })
            .min()
            .expect("u = 1 is always a unit");
        RamificationType {
            n: self.n,
            mults: best,
        }
    }

    /// Text form `n|n_1,...,n_r`.
    pub fn encode(&self) -> String {
        format!("{}|{}", self.n, join(&self.mults, ","))
    }
}

impl fmt::Display for RamificationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.n, join(&self.mults, ","))
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

/// Canonical type for `(n; mults)`.
///
/// When `allow_infinity` is set and the multiplicities do not sum to `0 mod n`,
/// the implied multiplicity at infinity is appended first.
pub fn canonicalize_type(
    n: u32,
    mults: &[u32],
    allow_infinity: bool,
) -> Result<RamificationType, CurveError> {
    let mut mults = mults.to_vec();
    if allow_infinity && n >= 2 {
        let sum: u64 = mults.iter().map(|&m| m as u64).sum();
        let rest = (n as u64 - sum % n as u64) % n as u64;
        if rest != 0 {
            mults.push(rest as u32);
        }
    }
    Ok(RamificationType::new(n, mults)?.canonical())
}

/// `(sigma(i), eps(i))` with `p sigma = i mod n`, `n eps = -i mod p`, so that
/// `p sigma(i) - n eps(i) = i`.
pub fn sigma_eps(p: u32, n: u32, i: usize) -> Result<(usize, usize), CurveError> {
    if i == 0 || i >= n as usize {
        return Err(CurveError::IndexOutOfRange {
            i,
            max: n as usize - 1,
        });
    }
    if gcd(p as u64, n as u64) != 1 {
        return Err(CurveError::WildRamification { p, n });
    }
    let (p_, n_) = (p as usize, n as usize);
    let sigma = (1..n_)
        .find(|s| (p_ * s) % n_ == i % n_)
        .expect("p is a unit mod n");
    let eps = (0..p_)
        .find(|e| (n_ * e + i).is_multiple_of(p_))
        .expect("n is a unit mod p");
    assert_eq!(
        (p_ * sigma) as i64 - (n_ * eps) as i64,
        i as i64,
        "sigma/eps identity"
    );
    Ok((sigma, eps))
}

/// A branch point before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPoint {
    Finite(FieldElem),
    Infinity,
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchPoint::Finite(a) => write!(f, "{a}"),
            BranchPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// A cover as written by a user: infinity may be a branch point, and the
/// multiplicity there may be left implicit.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub field: Arc<FieldCtx>,
    pub n: u32,
    pub mults: Vec<u32>,
    pub points: Vec<BranchPoint>,
}

impl CurveSpec {
    /// Parses `p^k:modulus|n|n_1,...,n_r|alpha_1;...;alpha_r`.
    pub fn parse(s: &str) -> Result<CurveSpec, CurveError> {
        let parts: Vec<&str> = s.trim().split('|').collect();
        if parts.len() != 4 {
            return Err(ParseError::new(s, "expected `p^k:modulus|n|mults|points`").into());
        }
        let field = FieldCtx::parse(parts[0])?;
        let n: u32 = parts[1]
            .trim()
            .parse()
            .map_err(|_| ParseError::new(parts[1], "cover order must be an integer"))?;
        let mults = if parts[2].trim().is_empty() {
            Vec::new()
        } else {
            parts[2]
                .split(',')
                .map(|m| {
                    m.trim()
                        .parse::<u32>()
                        .map_err(|_| ParseError::new(m, "multiplicity must be an integer"))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        let points = if parts[3].trim().is_empty() {
            Vec::new()
        } else {
            parts[3]
                .split(';')
                .map(|a| match a.trim() {
                    "inf" => Ok(BranchPoint::Infinity),
                    other => field.parse_elem(other).map(BranchPoint::Finite),
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(CurveSpec {
            field,
            n,
            mults,
            points,
        })
    }

    pub fn encode(&self) -> String {
        format!(
            "{}|{}|{}|{}",
            self.field.encode(),
            self.n,
            join(&self.mults, ","),
            join(&self.points, ";")
        )
    }

    /// Finite branch points with multiplicities, plus the multiplicity at
    /// infinity (0 when unbranched there).
    pub fn split_infinity(&self) -> Result<(Vec<(FieldElem, u32)>, u32), CurveError> {
        if self.points.len() != self.mults.len() {
            return Err(CurveError::LengthMismatch {
                points: self.points.len(),
                mults: self.mults.len(),
            });
        }
        let mut seen = BTreeSet::new();
        let mut finite = Vec::new();
        let mut at_inf = None;
        for (pt, &m) in self.points.iter().zip(&self.mults) {
            if !seen.insert(pt.to_string()) {
                return Err(CurveError::DuplicatePoint(pt.to_string()));
            }
            match pt {
                BranchPoint::Finite(a) => finite.push((a.clone(), m)),
                BranchPoint::Infinity => at_inf = Some(m),
            }
        }
        let n = self.n as u64;
        let finite_sum: u64 = finite.iter().map(|(_, m)| *m as u64).sum();
        let implied = ((n - finite_sum % n) % n) as u32;
        let inf = match at_inf {
            Some(m) if m as u64 % n != implied as u64 => {
                return Err(CurveError::NotBalanced {
                    n: self.n,
                    sum: finite_sum + m as u64,
                })
            }
            Some(m) => m,
            None => implied,
        };
        Ok((finite, inf))
    }
}

/// A cover `y^n = f(x)` with every branch point finite and `n | deg f`.
#[derive(Clone, Debug)]
pub struct CurveInstance {
    field: Arc<FieldCtx>,
    rtype: RamificationType,
    branch_points: Vec<FieldElem>,
    f: Poly,
    big_n: usize,
}

impl CurveInstance {
    /// `mults` in `rtype` are aligned with `branch_points`.
    pub fn new(
        field: &Arc<FieldCtx>,
        rtype: RamificationType,
        branch_points: Vec<FieldElem>,
    ) -> Result<Self, CurveError> {
        let (p, n) = (field.p(), rtype.n());
        if gcd(p as u64, n as u64) != 1 {
            return Err(CurveError::WildRamification { p, n });
        }
        if branch_points.len() != rtype.r() {
            return Err(CurveError::LengthMismatch {
                points: branch_points.len(),
                mults: rtype.r(),
            });
        }
        let mut seen = BTreeSet::new();
        for a in &branch_points {
            if !field.owns(a) {
                return Err(crate::error::FieldError::MixedContexts {
                    expected: field.k(),
                    got: a.coeffs().len(),
                }
                .into());
            }
            if !seen.insert(a.clone()) {
                return Err(CurveError::DuplicatePoint(a.to_string()));
            }
        }
        let f = branch_points
            .iter()
            .zip(rtype.mults())
            .fold(Poly::one(field), |acc, (a, &m)| {
                &acc * &Poly::linear(field, a).pow(m as u64)
            });
        let big_n = rtype.mults().iter().map(|&m| m as usize).sum();
        Ok(CurveInstance {
            field: Arc::clone(field),
            rtype,
            branch_points,
            f,
            big_n,
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.rtype.n()
    }

    pub fn rtype(&self) -> &RamificationType {
        &self.rtype
    }

    pub fn branch_points(&self) -> &[FieldElem] {
        &self.branch_points
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// `N = deg f`.
    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn genus(&self) -> usize {
        self.rtype.genus()
    }

    pub fn eigen_dims(&self) -> Vec<usize> {
        self.rtype.eigen_dims()
    }

    pub fn sigma_eps(&self, i: usize) -> Result<(usize, usize), CurveError> {
        sigma_eps(self.p(), self.n(), i)
    }

    /// `h_min,i = prod (x - a)^floor(i n_a / n)`.
    pub fn h_min(&self, i: usize) -> Poly {
        let n = self.n() as usize;
        self.branch_points.iter().zip(self.rtype.mults()).fold(
            Poly::one(&self.field),
            |acc, (a, &m)| {
                let e = (i * m as usize) / n;
                &acc * &Poly::linear(&self.field, a).pow(e as u64)
            },
        )
    }

    pub fn eigen_data(&self, i: usize) -> Result<EigenData, CurveError> {
        let (sigma, eps) = self.sigma_eps(i)?;
        let n = self.n() as usize;
        let d = self.rtype.eigen_dim(i);
        let h_min = self.h_min(i);
        // n | N, so the ceiling is exact
        let j_max = (i * self.big_n / n) as i64 - 2;
        let deg_h_min = h_min.degree().expect("h_min is a nonzero product") as i64;
        if d as i64 != j_max - deg_h_min + 1 {
            return Err(self.violation(
                "eigen-dimension",
                format!(
                    "d_{i} = {d} but j_max - deg h_min + 1 = {}",
                    j_max - deg_h_min + 1
                ),
            ));
        }
        self.check_regularity(i, d, j_max)?;
        Ok(EigenData {
            i,
            d,
            sigma,
            eps,
            h_min,
            j_max,
        })
    }

    /// Checks the pole/zero inequalities for every basis form `w_{i,j}`:
    /// `(j_a + 1) n > i n_a` at each finite point and `(sum j_a + 1) n < i N`.
    fn check_regularity(&self, i: usize, d: usize, j_max: i64) -> Result<(), CurveError> {
        let n = self.n() as i64;
        let i_ = i as i64;
        let zero = self.field.zero();
        let zero_mult = self
            .branch_points
            .iter()
            .position(|a| *a == zero)
            .map(|pos| self.rtype.mults()[pos] as i64);
        for j in 1..=d as i64 {
            let mut total = 0i64;
            for (a, &m) in self.branch_points.iter().zip(self.rtype.mults()) {
                let mut ja = (i_ * m as i64) / n;
                if *a == zero {
                    ja += j - 1;
                }
                total += ja;
                if (ja + 1) * n <= i_ * m as i64 {
                    return Err(self.violation(
                        "regularity-zero-order",
                        format!("w_({i},{j}) fails the order condition at {a}"),
                    ));
                }
            }
            if zero_mult.is_none() {
                // x^(j-1) contributes at the non-branch point 0
                total += j - 1;
            }
            if (total + 1) * n >= i_ * self.big_n as i64 || total > j_max {
                return Err(self.violation(
                    "regularity-infinity",
                    format!("w_({i},{j}) has a pole at infinity"),
                ));
            }
        }
        Ok(())
    }

    fn violation(&self, check: &str, detail: String) -> CurveError {
        CurveError::Invariant(Violation::new(check, detail).on(self.encode()))
    }

    /// Text form `p^k:modulus|n|n_1,...,n_r|alpha_1;...;alpha_r`.
    pub fn encode(&self) -> String {
        format!(
            "{}|{}|{}",
            self.field.encode(),
            self.rtype.encode(),
            join(&self.branch_points, ";")
        )
    }

    /// Parses the instance format, normalizing infinity away if present.
    pub fn parse(s: &str) -> Result<CurveInstance, CurveError> {
        normalize_infinity(&CurveSpec::parse(s)?)
    }

    pub fn to_spec(&self) -> CurveSpec {
        CurveSpec {
            field: Arc::clone(&self.field),
            n: self.n(),
            mults: self.rtype.mults().to_vec(),
            points: self
                .branch_points
                .iter()
                .cloned()
                .map(BranchPoint::Finite)
                .collect(),
        }
    }

    /// The same cover over `F_{p^(k * factor)}`.
    pub fn base_change(&self, factor: usize) -> Result<CurveInstance, CurveError> {
        let emb = self.field.extend(factor)?;
        let points = self.branch_points.iter().map(|a| emb.embed(a)).collect();
        CurveInstance::new(emb.target(), self.rtype.clone(), points)
    }
}

/// Per-eigenspace data for `D_i`.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub i: usize,
    pub d: usize,
    pub sigma: usize,
    pub eps: usize,
    pub h_min: Poly,
    pub j_max: i64,
}

impl EigenData {
    /// Exponent of `x` in each basis form `w_{i,j} = x^(j-1) w_{i,1}`, `j = 1..=d`.
    pub fn basis_exponents(&self) -> Vec<usize> {
        (0..self.d).collect()
    }
}

/// Moves every branch point off infinity with `x -> c + 1/x`.
///
/// `c` is the first element (in index order) that is not a finite branch
/// point; if the field has none, the smallest extension that does is used.
/// The image of infinity is `0` and a finite point `a` goes to `1 / (a - c)`.
/// The twist constant `prod (c - a)^(n_a)` is dropped, which leaves the
/// geometric isomorphism class unchanged.
pub fn normalize_infinity(spec: &CurveSpec) -> Result<CurveInstance, CurveError> {
    let (finite, inf_mult) = spec.split_infinity()?;
    if inf_mult == 0 {
        let (points, mults): (Vec<_>, Vec<_>) = finite.into_iter().unzip();
        let rtype = RamificationType::new(spec.n, mults)?;
        return CurveInstance::new(&spec.field, rtype, points);
    }
    let needed = finite.len() + 1;
    let mut field = Arc::clone(&spec.field);
    let mut finite = finite;
    if field.order() < needed as u64 {
        let factor = (2..=MAX_SPARE_EXTENSION)
            .find(|&m| (spec.field.order() as f64).powi(m as i32) >= needed as f64)
            .ok_or(CurveError::FieldTooSmall {
                needed,
                cap: MAX_SPARE_EXTENSION,
            })?;
        let emb = spec.field.extend(factor)?;
        finite = finite
            .into_iter()
            .map(|(a, m)| (emb.embed(&a), m))
            .collect();
        field = Arc::clone(emb.target());
    }
    let taken: BTreeSet<&FieldElem> = finite.iter().map(|(a, _)| a).collect();
    let c = field
        .elements()
        .find(|x| !taken.contains(x))
        .expect("field has a spare element");
    let mut points = Vec::with_capacity(needed);
    let mut mults = Vec::with_capacity(needed);
    let mut inf_placed = false;
    let mut finite_iter = finite.iter();
    for pt in &spec.points {
        match pt {
            BranchPoint::Finite(_) => {
                let (a, m) = finite_iter.next().expect("aligned");
                let moved = field.inv(&field.sub(a, &c))?;
                points.push(moved);
                mults.push(*m);
            }
            BranchPoint::Infinity => {
                points.push(field.zero());
                mults.push(inf_mult);
                inf_placed = true;
            }
        }
    }
    if !inf_placed {
        points.push(field.zero());
        mults.push(inf_mult);
    }
    let rtype = RamificationType::new(spec.n, mults)?;
    CurveInstance::new(&field, rtype, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn instance(p: u32, k: usize, n: u32, mults: &[u32], idx: &[u64]) -> CurveInstance {
        let f = make_field(p, k, 0).unwrap();
        let pts = idx.iter().map(|&i| f.element(i)).collect();
        CurveInstance::new(&f, RamificationType::new(n, mults.to_vec()).unwrap(), pts).unwrap()
    }

    /// Genus by Riemann-Hurwitz from the ramification indices alone:
    /// `2g - 2 = n(-2) + sum_j (n - gcd(n, n_j))`.
    fn riemann_hurwitz(n: u32, mults: &[u32]) -> i64 {
        let n = n as i64;
        let ram: i64 = mults
            .iter()
            .map(|&m| n - gcd(n as u64, m as u64) as i64)
            .sum();
        (-2 * n + ram + 2) / 2
    }

    #[test]
    fn canonical_forms() {
        let hyper = canonicalize_type(2, &[1; 6], false).unwrap();
        assert_eq!(hyper.mults(), &[1; 6]);
        let t = canonicalize_type(5, &[2, 2, 2, 4], false).unwrap();
        assert_eq!(t.mults(), &[1, 1, 1, 2]);
        assert_eq!(
            canonicalize_type(3, &[1, 1, 1], false).unwrap().mults(),
            &[1, 1, 1]
        );
        assert_eq!(
            canonicalize_type(2, &[1, 1, 1], true).unwrap().mults(),
            &[1, 1, 1, 1]
        );
        assert!(matches!(
            canonicalize_type(2, &[1, 1, 1], false),
            Err(CurveError::NotBalanced { .. })
        ));
        assert!(matches!(
            canonicalize_type(4, &[2, 2], false),
            Err(CurveError::Disconnected(2))
        ));
        assert!(matches!(
            canonicalize_type(4, &[4, 1], false),
            Err(CurveError::BadMultiplicity { .. })
        ));
    }

    #[test]
    fn genus_examples() {
        for (n, mults, g) in [
            (2, vec![1; 6], 2),
            (3, vec![1, 1, 1], 1),
            (5, vec![1, 1, 1, 2], 4),
        ] {
            let t = RamificationType::new(n, mults.clone()).unwrap();
            assert_eq!(t.genus(), g);
            assert_eq!(t.eigen_dims().iter().sum::<usize>(), g);
            assert_eq!(riemann_hurwitz(n, &mults), g as i64);
        }
        let t = RamificationType::new(5, vec![1, 1, 1, 2]).unwrap();
        assert_eq!(t.eigen_dims(), vec![0, 1, 1, 2]);
    }

    #[test]
    fn hyperelliptic_d1_is_genus() {
        for g in 0..8usize {
            let t = RamificationType::new(2, vec![1; 2 * g + 2]).unwrap();
            assert_eq!(t.eigen_dims(), vec![g]);
            assert_eq!(t.genus(), g);
        }
    }

    #[test]
    fn sigma_eps_examples() {
        let got: Vec<_> = (1..5).map(|i| sigma_eps(3, 5, i).unwrap()).collect();
        let brute: Vec<_> = (1..5usize)
            .map(|i| {
                let s = (1..5).find(|s| (3 * s) % 5 == i).unwrap();
                let e = (0..3).find(|e| (5 * e + i) % 3 == 0).unwrap();
                (s, e)
            })
            .collect();
        assert_eq!(got, brute);
        assert_eq!(got, vec![(2, 1), (4, 2), (1, 0), (3, 1)]);
        for p in [3, 5, 7, 11] {
            assert_eq!(sigma_eps(p, 2, 1).unwrap().0, 1);
        }
        assert!(sigma_eps(3, 5, 0).is_err());
        assert!(sigma_eps(3, 5, 5).is_err());
        assert!(matches!(
            sigma_eps(3, 6, 1),
            Err(CurveError::WildRamification { .. })
        ));
    }

    #[test]
    fn eigen_data_examples() {
        let c = instance(2, 2, 3, &[1, 1, 1], &[0, 1, 2]);
        let e = c.eigen_data(2).unwrap();
        assert_eq!((e.d, e.j_max, e.sigma, e.eps), (1, 0, 1, 0));
        assert_eq!(e.h_min, Poly::one(c.field()));
        assert_eq!(c.eigen_data(1).unwrap().d, 0);

        let c = instance(3, 2, 2, &[1; 6], &[0, 1, 2, 3, 4, 5]);
        let e = c.eigen_data(1).unwrap();
        assert_eq!((e.d, e.j_max), (2, 1));
        assert_eq!(e.h_min, Poly::one(c.field()));
        assert_eq!(e.basis_exponents(), vec![0, 1]);
    }

    #[test]
    fn h_min_uses_floor_of_scaled_multiplicities() {
        let c = instance(2, 2, 3, &[1, 1, 2, 2], &[0, 1, 2, 3]);
        let f = c.field();
        let expected = &Poly::linear(f, &f.element(2)) * &Poly::linear(f, &f.element(3));
        assert_eq!(c.h_min(2), expected);
        assert_eq!(c.h_min(1), Poly::one(f));
        assert_eq!(c.eigen_data(2).unwrap().d, 1);
    }

    #[test]
    fn instance_validation() {
        let f = make_field(3, 1, 0).unwrap();
        let t = RamificationType::new(2, vec![1, 1, 1, 1]).unwrap();
        let dup = vec![f.element(0), f.element(0), f.element(1), f.element(2)];
        assert!(matches!(
            CurveInstance::new(&f, t.clone(), dup),
            Err(CurveError::DuplicatePoint(_))
        ));
        let t3 = RamificationType::new(3, vec![1, 1, 1]).unwrap();
        assert!(matches!(
            CurveInstance::new(&f, t3, vec![f.element(0), f.element(1), f.element(2)]),
            Err(CurveError::WildRamification { .. })
        ));
    }

    #[test]
    fn finite_instance_is_unchanged_by_normalization() {
        let c = instance(5, 1, 2, &[1, 1, 1, 1], &[0, 1, 2, 3]);
        let again = normalize_infinity(&c.to_spec()).unwrap();
        assert_eq!(again.encode(), c.encode());
    }

    #[test]
    fn legendre_normalizes_over_f9() {
        let spec = CurveSpec::parse("3^1:0,1|2|1,1,1,1|0;1;2;inf").unwrap();
        let c = normalize_infinity(&spec).unwrap();
        assert_eq!(c.field().order(), 9);
        assert_eq!(c.big_n(), 4);
        assert_eq!(c.branch_points().len(), 4);
        assert_eq!(c.genus(), 1);
    }

    #[test]
    fn implicit_infinity_is_added() {
        let spec = CurveSpec::parse("3^1:0,1|2|1,1,1|0;1;2").unwrap();
        let c = normalize_infinity(&spec).unwrap();
        assert_eq!(c.rtype().mults(), &[1, 1, 1, 1]);
        assert_eq!(c.field().order(), 9);
    }

    #[test]
    fn char2_triple_normalizes_over_f4() {
        let spec = CurveSpec::parse("2^1:0,1|3|1,1,1|0;1;inf").unwrap();
        let c = normalize_infinity(&spec).unwrap();
        assert_eq!(c.field().order(), 4);
        assert_eq!(c.big_n() % 3, 0);
        let distinct: BTreeSet<_> = c.branch_points().iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn normalization_errors() {
        let spec = CurveSpec::parse("2^1:0,1|3|1,1|inf;inf").unwrap();
        assert!(matches!(
            normalize_infinity(&spec),
            Err(CurveError::DuplicatePoint(_))
        ));
        let spec = CurveSpec::parse("3^1:0,1|2|1,1,1,1|0;1;2").unwrap();
        assert!(matches!(
            normalize_infinity(&spec),
            Err(CurveError::LengthMismatch { .. })
        ));
        let spec = CurveSpec::parse("3^1:0,1|2|1,1,1,2|0;1;2;inf");
        assert!(spec.is_err() || normalize_infinity(&spec.unwrap()).is_err());
    }

    #[test]
    fn parse_encode_round_trip() {
        let s = "3^2:1,0,1|2|1,1,1,1|0,0;1,0;0,1;1,1";
        let c = CurveInstance::parse(s).unwrap();
        assert_eq!(c.encode(), s);
        assert!(CurveInstance::parse("3^2:1,0,1|2|1,1|x").is_err());
        assert!(CurveInstance::parse("garbage").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Valid balanced types with `n <= 12`, `r <= 8`.
        fn rtype() -> impl Strategy<Value = RamificationType> {
            (2u32..=12)
                .prop_flat_map(|n| (Just(n), prop::collection::vec(1..n, 1..8)))
                .prop_filter_map("disconnected", |(n, mut mults)| {
                    RamificationType::new(n, {
                        let s: u32 = mults.iter().sum();
                        let rest = (n - s % n) % n;
                        if rest != 0 {
                            mults.push(rest);
                        }
                        mults
                    })
                    .ok()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn dims_sum_to_genus(t in rtype()) {
                prop_assert_eq!(t.eigen_dims().iter().sum::<usize>(), t.genus());
                prop_assert_eq!(riemann_hurwitz(t.n(), t.mults()), t.genus() as i64);
            }

            #[test]
            fn canonical_form_preserves_invariants(t in rtype()) {
                let c = t.canonical();
                prop_assert_eq!(c.genus(), t.genus());
                prop_assert_eq!(c.canonical(), c.clone());
                let mut a = t.eigen_dims();
                let mut b = c.eigen_dims();
                a.sort_unstable();
                b.sort_unstable();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn sigma_is_a_permutation_and_bounds_hold(
                t in rtype(),
                p in prop::sample::select(vec![2u32, 3, 5, 7, 11]),
            ) {
                prop_assume!(gcd(p as u64, t.n() as u64) == 1);
                let n = t.n() as usize;
                let dims = t.eigen_dims();
                let mut seen = vec![false; n];
                for i in 1..n {
                    let (s, e) = sigma_eps(p, t.n(), i).unwrap();
                    prop_assert_eq!((p as usize * s) as i64 - (n * e) as i64, i as i64);
                    prop_assert!(!seen[s]);
                    seen[s] = true;
                    prop_assert!(dims[i - 1] < p as usize * dims[s - 1] + p as usize);
                }
            }
        }
    }
}
