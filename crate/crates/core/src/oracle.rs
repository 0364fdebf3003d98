//! Independent recomputations used to cross-check [`crate::cartier`].
//!
//! Nothing here calls `h_rank`, `decomp` or `cartier_block`, and ranks are
//! computed with a separate incremental row reduction, so a bug on the main
//! path cannot confirm itself.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::curve::{gcd, CurveInstance, CurveSpec, RamificationType};
use crate::error::{CurveError, OracleError, Violation};
use crate::fields::{FieldCtx, FieldElem};
use crate::poly::{gcd_monic, Poly};

/// Dimension of the span of `vectors` by inserting them one at a time into
/// an echelon basis keyed by leading position.
pub fn span_dimension(field: &FieldCtx, vectors: &[Vec<FieldElem>]) -> usize {
    let mut basis: BTreeMap<usize, Vec<FieldElem>> = BTreeMap::new();
    for v in vectors {
        let mut v = v.clone();
        while let Some(lead) = v.iter().position(|c| !c.is_zero()) {
            match basis.get(&lead) {
                Some(b) => {
                    // b is normalized to 1 at `lead`
                    let c = v[lead].clone();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = field.sub(x, &field.mul(&c, y));
                    }
                }
                None => {
                    let inv = field.inv(&v[lead]).expect("nonzero lead");
                    let normalized = v.iter().map(|x| field.mul(x, &inv)).collect();
                    basis.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Coordinates of `C(w_{i,j})` in the basis `w_{sigma(i),1..}`, from
/// `w_{i,j} = x^(j-1) h_min,i f^eps(i) dx / y^(p sigma(i))`.
///
/// `C` pulls `y^(-sigma(i))` out, acts on the rational differential
/// `x^(j-1) h_min,i f^eps(i) dx`, and the result is divided by `h_min,sigma(i)`.
pub fn cartier_via_rational(
    c: &CurveInstance,
    i: usize,
    j: usize,
) -> Result<Vec<FieldElem>, OracleError> {
    let dims = c.eigen_dims();
    let d_i = dims[i - 1];
    if j == 0 || j > d_i {
        return Err(OracleError::Precondition(format!(
            "j = {j} outside 1..={d_i}"
        )));
    }
    let (sigma, eps) = c.sigma_eps(i)?;
    let d_s = dims[sigma - 1];
    let g = &c.h_min(i).shift(j - 1) * &c.f().pow(eps as u64);
    let image = g.classical_cartier_rational();
    let coords = image.exact_div(&c.h_min(sigma)).map_err(|_| {
        CurveError::Invariant(
            Violation::new(
                "rational-cartier-divisibility",
                format!("h_min,{sigma} does not divide C(w_({i},{j}))"),
            )
            .on(c.encode()),
        )
    })?;
    if coords.degree().is_some_and(|d| d >= d_s) {
        return Err(CurveError::Invariant(
            Violation::new(
                "rational-cartier-degree",
                format!("C(w_({i},{j})) is not in D_{sigma}"),
            )
            .on(c.encode()),
        )
        .into());
    }
    Ok((0..d_s).map(|s| coords.coeff(s)).collect())
}

/// The Cartier-Manin matrix of `y^2 = f(x)`, `deg f = 2g + 2`:
/// entry `(s, t)` is `c_{p s - t}^(1/p)` for `1 <= s, t <= g`, where
/// `f^((p-1)/2) = sum c_m x^m` and `c_m = 0` for `m < 0`. Returned as rows
/// indexed by `s`.
pub fn cartier_manin_hyperelliptic(c: &CurveInstance) -> Result<Vec<Vec<FieldElem>>, OracleError> {
    let p = c.p() as usize;
    if c.n() != 2 || p == 2 {
        return Err(OracleError::Precondition(format!(
            "needs n = 2 and odd p, got n = {}, p = {p}",
            c.n()
        )));
    }
    let f = c.f();
    let deg = f.degree().unwrap_or(0);
    if !deg.is_multiple_of(2) || deg < 2 {
        return Err(OracleError::Precondition(format!(
            "deg f = {deg} is not even"
        )));
    }
    if gcd_monic(f, &f.derivative())
        .map_err(CurveError::from)?
        .degree()
        != Some(0)
    {
        return Err(OracleError::Precondition("f is not squarefree".into()));
    }
    let g = deg / 2 - 1;
    let field = c.field();
    let power = f.pow(((p - 1) / 2) as u64);
    Ok((1..=g)
        .map(|s| {
            (1..=g)
                .map(|t| match (p * s).checked_sub(t) {
                    Some(m) => field.pth_root(&power.coeff(m)),
                    None => field.zero(),
                })
                .collect()
        })
        .collect())
}

/// `g - rank` of the Cartier-Manin matrix.
pub fn hyperelliptic_a_number(c: &CurveInstance) -> Result<usize, OracleError> {
    let rows = cartier_manin_hyperelliptic(c)?;
    Ok(rows.len() - span_dimension(c.field(), &rows))
}

/// Exact `dim { sum f_i g_i : deg g_i < m }`, by row-reducing the spanning
/// vectors `f_i x^e`, `0 <= e < m`.
pub fn lemma_rank_dim(polys: &[Poly], m: usize) -> Result<usize, OracleError> {
    let Some(first) = polys.iter().find(|f| !f.is_zero()) else {
        return Err(OracleError::Precondition("no nonzero polynomial".into()));
    };
    let field = Arc::clone(first.field());
    let d = polys
        .iter()
        .filter_map(Poly::degree)
        .max()
        .expect("some nonzero");
    let ambient = d + m;
    let vectors: Vec<Vec<FieldElem>> = polys
        .iter()
        .filter(|f| !f.is_zero())
        .flat_map(|f| (0..m).map(move |e| f.shift(e)))
        .map(|v| (0..ambient).map(|s| v.coeff(s)).collect())
        .collect();
    Ok(span_dimension(&field, &vectors))
}

/// `#{ w in F_q : w^e = v }` for `v != 0`.
fn count_roots(field: &FieldCtx, v: &FieldElem, e: u64) -> u64 {
    let q1 = field.order() - 1;
    let g = gcd(e, q1);
    if field.pow(v, q1 / g) == field.one() {
        g
    } else {
        0
    }
}

/// Rational points of the smooth projective model of a genus-1 cover.
///
/// Over a branch point `a` with `e = gcd(n, n_a)` the fibre has `e` points,
/// separated by `z = y^(n/e) / (x-a)^(n_a/e)` with `z^e = u(a)`, where
/// `f = (x-a)^(n_a) u`. Infinity behaves the same way with `e = gcd(n, N)` and
/// `u(inf)` the leading coefficient of `f`.
pub fn count_points(spec: &CurveSpec) -> Result<u64, OracleError> {
    let (finite, _) = spec.split_infinity()?;
    let field = &spec.field;
    let n = spec.n as u64;
    let f = finite.iter().fold(Poly::one(field), |acc, (a, m)| {
        &acc * &Poly::linear(field, a).pow(*m as u64)
    });
    let big_n: u64 = finite.iter().map(|(_, m)| *m as u64).sum();
    let mut total = count_roots(field, f.leading().expect("f is monic"), gcd(n, big_n));
    for x in field.elements() {
        match finite.iter().find(|(a, _)| *a == x) {
            Some((a, m)) => {
                let u = finite
                    .iter()
                    .filter(|(b, _)| b != a)
                    .fold(field.one(), |acc, (b, mb)| {
                        field.mul(&acc, &field.pow(&field.sub(a, b), *mb as u64))
                    });
                total += count_roots(field, &u, gcd(n, *m as u64));
            }
            None => total += count_roots(field, &f.eval(&x), n),
        }
    }
    Ok(total)
}

/// Supersingularity of a genus-1 cover: the Frobenius trace
/// `t = q + 1 - #E(F_q)` is divisible by `p`.
pub fn supersingular_by_count(spec: &CurveSpec) -> Result<bool, OracleError> {
    let (finite, inf) = spec.split_infinity()?;
    let mut mults: Vec<u32> = finite.iter().map(|(_, m)| *m).collect();
    if inf != 0 {
        mults.push(inf);
    }
    let genus = RamificationType::new(spec.n, mults)?.genus();
    if genus != 1 {
        return Err(OracleError::Precondition(format!(
            "genus is {genus}, not 1"
        )));
    }
    if gcd(spec.field.p() as u64, spec.n as u64) != 1 {
        return Err(CurveError::WildRamification {
            p: spec.field.p(),
            n: spec.n,
        }
        .into());
    }
    let count = count_points(spec)? as i64;
    let trace = spec.field.order() as i64 + 1 - count;
    Ok(trace.rem_euclid(spec.field.p() as i64) == 0)
}
