//! Exact arithmetic in prime fields `F_p` and extensions `F_{p^k}`.
//!
//! An element is a dense coordinate vector in the power basis `1, t, ..., t^(k-1)`
//! of `F_p[t] / (modulus)`. Prime fields use the modulus `t`, so the same code
//! path covers `k = 1`.
//!
//! Field orders are capped at [`MAX_FIELD_ORDER`]; enumeration of every element
//! (root search, point counting) is expected to be cheap below that limit.

use std::fmt;
use std::sync::Arc;

use crate::error::{FieldError, ParseError};

/// Largest supported field order `p^k`.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of some `F_{p^k}`; coordinates are reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(Vec<u32>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, c) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An explicit finite field `F_p[t] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    k: usize,
    /// Monic, constant term first, length `k + 1`.
    modulus: Vec<u32>,
    order: u64,
}

/// Builds `F_{p^k}` with a deterministically chosen irreducible modulus.
///
/// Monic candidates are enumerated by the integer `m_0 + m_1 p + ... + m_{k-1} p^(k-1)`
/// and the first irreducible one wins. A nonzero `seed` only rotates the
/// starting point of that enumeration.
pub fn make_field(p: u32, k: usize, seed: u64) -> Result<Arc<FieldCtx>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::BadDegree(k));
    }
    let order = checked_order(p, k)?;
    let count = order;
    let start = if seed == 0 {
        0
    } else {
        splitmix64(seed) % count
    };
    for step in 0..count {
        let idx = (start + step) % count;
        let mut modulus = digits(idx, p, k);
        modulus.push(1);
        if fp::is_irreducible(&modulus, p) {
            return Ok(Arc::new(FieldCtx {
                p,
                k,
                modulus,
                order,
            }));
        }
    }
    Err(FieldError::NoModulus(k))
}

impl FieldCtx {
    /// A field with an explicitly given modulus (constant term first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<FieldCtx>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(FieldError::BadDegree(0));
        }
        let k = modulus.len() - 1;
        let order = checked_order(p, k)?;
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::OutOfRange(c));
        }
        if modulus[k] != 1 || !fp::is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(k));
        }
        Ok(Arc::new(FieldCtx {
            p,
            k,
            modulus,
            order,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.k])
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// The image of an integer under `Z -> F_p -> F_{p^k}`.
    pub fn from_int(&self, v: i64) -> FieldElem {
        let mut c = vec![0; self.k];
        c[0] = v.rem_euclid(self.p as i64) as u32;
        FieldElem(c)
    }

    /// The generator `t` of the power basis (equal to `-m_0` when `k = 1`).
    pub fn generator(&self) -> FieldElem {
        if self.k == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            let mut c = vec![0; self.k];
            c[1] = 1;
            FieldElem(c)
        }
    }

    /// Validates raw coordinates as an element of this field.
    pub fn elem(&self, coeffs: Vec<u32>) -> Result<FieldElem, FieldError> {
        if coeffs.len() != self.k {
            return Err(FieldError::MixedContexts {
                expected: self.k,
                got: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::OutOfRange(c));
        }
        Ok(FieldElem(coeffs))
    }

    /// Whether `a` has the shape of an element of this field.
    pub fn owns(&self, a: &FieldElem) -> bool {
        a.0.len() == self.k && a.0.iter().all(|&c| c < self.p)
    }

    /// The element whose coordinates are the base-`p` digits of `index`.
    pub fn element(&self, index: u64) -> FieldElem {
        debug_assert!(index < self.order);
        FieldElem(digits(index, self.p, self.k))
    }

    pub fn index_of(&self, a: &FieldElem) -> u64 {
        a.0.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// Every element, in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.debug_check(a);
        self.debug_check(b);
        let p = self.p;
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.debug_check(a);
        self.debug_check(b);
        let p = self.p;
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.debug_check(a);
        let p = self.p;
        FieldElem(
            a.0.iter()
                .map(|&x| if x == 0 { 0 } else { p - x })
                .collect(),
        )
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.debug_check(a);
        self.debug_check(b);
        let p = self.p as u64;
        if self.k == 1 {
            return FieldElem(vec![((a.0[0] as u64 * b.0[0] as u64) % p) as u32]);
        }
        let k = self.k;
        let mut buf = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                buf[i + j] = (buf[i + j] + x as u64 * y as u64) % p;
            }
        }
        // t^k = -(m_0 + ... + m_{k-1} t^{k-1})
        for d in (k..2 * k - 1).rev() {
            let c = buf[d];
            if c == 0 {
                continue;
            }
            buf[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let slot = &mut buf[d - k + i];
                *slot = (*slot + (p - c) * m as u64) % p;
            }
        }
        FieldElem(buf[..k].iter().map(|&c| c as u32).collect())
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(k-1))`.
    pub fn pth_root(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.order / self.p as u64)
    }

    /// Text form `p^k:m0,m1,...,mk`.
    pub fn encode(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
        format!("{}^{}:{}", self.p, self.k, m.join(","))
    }

    pub fn parse(s: &str) -> Result<Arc<FieldCtx>, FieldError> {
        let (head, modulus) = s
            .split_once(':')
            .ok_or_else(|| ParseError::new(s, "expected `p^k:m0,...,mk`"))?;
        let (p, k) = head
            .split_once('^')
            .ok_or_else(|| ParseError::new(head, "expected `p^k`"))?;
        let p: u32 = parse_int(p)?;
        let k: usize = parse_int(k)?;
        let modulus = modulus
            .split(',')
            .map(parse_int::<u32>)
            .collect::<Result<Vec<_>, _>>()?;
        if modulus.len() != k + 1 {
            return Err(ParseError::new(
                s,
                format!("modulus needs {} coefficients for k = {k}", k + 1),
            )
            .into());
        }
        FieldCtx::with_modulus(p, modulus)
    }

    /// Parses `c0,...,c(k-1)`.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, FieldError> {
        let coeffs = s
            .split(',')
            .map(parse_int::<u32>)
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != self.k {
            return Err(
                ParseError::new(s, format!("field element needs {} coordinates", self.k)).into(),
            );
        }
        self.elem(coeffs)
            .map_err(|e| ParseError::new(s, e.to_string()).into())
    }

    /// `F_{p^(k * factor)}` together with an embedding of this field into it.
    pub fn extend(self: &Arc<Self>, factor: usize) -> Result<Embedding, FieldError> {
        if factor == 0 {
            return Err(FieldError::BadDegree(0));
        }
        let target = make_field(self.p, self.k * factor, 0)?;
        let theta = if self.k == 1 {
            target.zero()
        } else {
            target
                .elements()
                .find(|x| {
                    let v = self.modulus.iter().rev().fold(target.zero(), |acc, &m| {
                        target.add(&target.mul(&acc, x), &target.from_int(m as i64))
                    });
                    v.is_zero()
                })
                .ok_or(FieldError::NoModulus(self.k))?
        };
        let mut powers = Vec::with_capacity(self.k);
        let mut acc = target.one();
        for _ in 0..self.k {
            powers.push(acc.clone());
            acc = target.mul(&acc, &theta);
        }
        Ok(Embedding {
            source: Arc::clone(self),
            target,
            powers,
        })
    }

    #[inline]
    fn debug_check(&self, a: &FieldElem) {
        debug_assert!(
            self.owns(a),
            "element {a} does not belong to {}",
            self.encode()
        );
    }
}

/// A field homomorphism `F_{p^k} -> F_{p^(km)}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FieldCtx>,
    target: Arc<FieldCtx>,
    /// Images of `1, t, ..., t^(k-1)`.
    powers: Vec<FieldElem>,
}

impl Embedding {
    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.target
    }

    pub fn embed(&self, a: &FieldElem) -> FieldElem {
        let t = &self.target;
        a.coeffs()
            .iter()
            .zip(&self.powers)
            .fold(t.zero(), |acc, (&c, pw)| {
                t.add(&acc, &t.mul(&t.from_int(c as i64), pw))
            })
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, k: usize) -> Result<u64, FieldError> {
    let mut order: u64 = 1;
    for _ in 0..k {
        order = order.saturating_mul(p as u64);
        if order > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge {
                p,
                k,
                limit: MAX_FIELD_ORDER,
            });
        }
    }
    Ok(order)
}

fn digits(mut v: u64, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T, ParseError> {
    s.trim()
        .parse()
        .map_err(|_| ParseError::new(s, "expected a non-negative integer"))
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Bare `F_p[t]` helpers for the irreducibility test; trimmed vectors, constant first.
mod fp {
    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u32, p: u32) -> u32 {
        let (mut acc, mut base, mut e) = (1u64, a as u64, p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p) as u64;
        while r.len() > dm {
            let d = r.len() - 1;
            let c = r[d] as u64 * lead_inv % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let slot = &mut r[d - dm + i];
                *slot = ((*slot as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&prod, m, p)
    }

    fn gcd(a: Vec<u32>, b: Vec<u32>, p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `m` of degree `k` is irreducible iff `gcd(t^(p^i) - t, m) = 1` for `i <= k/2`.
    pub(super) fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = m.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut power = x.clone();
        for _ in 1..=k / 2 {
            // power <- power^p mod m
            let mut acc = vec![1u32];
            for _ in 0..p {
                acc = mulmod(&acc, &power, m, p);
            }
            power = acc;
            let mut diff = power.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            if gcd(m.to_vec(), diff, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root search: a monic quadratic over F_p is irreducible iff it has no root.
    fn first_irreducible_quadratic_by_roots(p: u32) -> Vec<u32> {
        for idx in 0..(p * p) {
            let (m0, m1) = (idx % p, idx / p);
            let has_root = (0..p).any(|x| (x * x + m1 * x + m0) % p == 0);
            if !has_root {
                return vec![m0, m1, 1];
            }
        }
        unreachable!()
    }

    #[test]
    fn prime_field() {
        let f = make_field(3, 1, 0).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.encode(), "3^1:0,1");
        assert_eq!(f.add(&f.from_int(2), &f.from_int(2)), f.from_int(1));
    }

    #[test]
    fn f4_modulus_and_mul() {
        let f = make_field(2, 2, 0).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.generator();
        assert_eq!(f.mul(&t, &t), f.elem(vec![1, 1]).unwrap());
    }

    #[test]
    fn f9_modulus_matches_root_search() {
        let f = make_field(3, 2, 0).unwrap();
        assert_eq!(
            f.modulus(),
            first_irreducible_quadratic_by_roots(3).as_slice()
        );
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let t = f.generator();
        assert_eq!(f.mul(&t, &t), f.from_int(2));
    }

    #[test]
    fn quadratic_moduli_match_root_search() {
        for p in [2, 3, 5, 7, 11] {
            let f = make_field(p, 2, 0).unwrap();
            assert_eq!(
                f.modulus(),
                first_irreducible_quadratic_by_roots(p).as_slice()
            );
        }
    }

    #[test]
    fn cubic_irreducibility_matches_root_search() {
        // A cubic is irreducible iff it has no root.
        let p = 3;
        for idx in 0..27u32 {
            let m = vec![idx % 3, (idx / 3) % 3, idx / 9, 1];
            let has_root = (0..p).any(|x| (m[0] + m[1] * x + m[2] * x * x + x * x * x) % p == 0);
            assert_eq!(fp::is_irreducible(&m, p), !has_root, "{m:?}");
        }
    }

    #[test]
    fn quartic_with_no_roots_can_still_be_reducible() {
        // (t^2 + 1)^2 over F_3 has no root but is reducible.
        assert!(!fp::is_irreducible(&[1, 0, 2, 0, 1], 3));
        assert!(fp::is_irreducible(&make_field(3, 4, 0).unwrap().modulus, 3));
    }

    #[test]
    fn pth_roots() {
        let f3 = make_field(3, 1, 0).unwrap();
        assert_eq!(f3.pth_root(&f3.one()), f3.one());
        let f4 = make_field(2, 2, 0).unwrap();
        let t = f4.generator();
        let r = f4.pth_root(&t);
        assert_eq!(r, f4.elem(vec![1, 1]).unwrap());
        assert_eq!(f4.frobenius(&r), t);
        let f9 = make_field(3, 2, 0).unwrap();
        assert_eq!(f9.pth_root(&f9.from_int(2)), f9.from_int(2));
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(4, 1, 0), Err(FieldError::NotPrime(4)));
        assert_eq!(make_field(3, 0, 0), Err(FieldError::BadDegree(0)));
        assert!(matches!(
            make_field(2, 40, 0),
            Err(FieldError::TooLarge { .. })
        ));
        let f = make_field(5, 1, 0).unwrap();
        assert_eq!(f.inv(&f.zero()), Err(FieldError::DivisionByZero));
        assert!(matches!(
            f.elem(vec![1, 2]),
            Err(FieldError::MixedContexts { .. })
        ));
        assert_eq!(f.elem(vec![7]), Err(FieldError::OutOfRange(7)));
        assert_eq!(
            FieldCtx::with_modulus(3, vec![2, 0, 1]),
            Err(FieldError::BadModulus(2))
        );
    }

    #[test]
    fn seeded_modulus_is_still_irreducible_and_reproducible() {
        let a = make_field(5, 3, 99).unwrap();
        let b = make_field(5, 3, 99).unwrap();
        assert_eq!(a, b);
        for x in a.elements().skip(1) {
            assert_eq!(a.mul(&x, &a.inv(&x).unwrap()), a.one());
        }
    }

    #[test]
    fn encoding_round_trip() {
        let f = make_field(3, 2, 0).unwrap();
        assert_eq!(f.encode(), "3^2:1,0,1");
        assert_eq!(*FieldCtx::parse(&f.encode()).unwrap(), *f);
        for x in f.elements() {
            assert_eq!(f.parse_elem(&x.to_string()).unwrap(), x);
        }
        assert!(FieldCtx::parse("3^2:1,0").is_err());
        assert!(FieldCtx::parse("9^1:0,1").is_err());
        assert!(f.parse_elem("1,x").is_err());
    }

    #[test]
    fn enumeration_is_distinct() {
        let f = make_field(2, 3, 0).unwrap();
        let all: std::collections::HashSet<_> = f.elements().collect();
        assert_eq!(all.len(), 8);
        for x in f.elements() {
            assert_eq!(f.element(f.index_of(&x)), x);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = make_field(3, 2, 0).unwrap();
        let emb = small.extend(2).unwrap();
        let big = emb.target();
        assert_eq!(big.order(), 81);
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(
                    emb.embed(&small.mul(&a, &b)),
                    big.mul(&emb.embed(&a), &emb.embed(&b))
                );
                assert_eq!(
                    emb.embed(&small.add(&a, &b)),
                    big.add(&emb.embed(&a), &emb.embed(&b))
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_and_pair() -> impl Strategy<Value = (Arc<FieldCtx>, u64, u64)> {
            prop_oneof![
                Just((2u32, 3usize)),
                Just((3, 2)),
                Just((5, 2)),
                Just((7, 1)),
                Just((3, 3))
            ]
            .prop_flat_map(|(p, k)| {
                let f = make_field(p, k, 0).unwrap();
                let q = f.order();
                (Just(f), 0..q, 0..q)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn frobenius_is_additive((f, i, j) in field_and_pair()) {
                let (a, b) = (f.element(i), f.element(j));
                prop_assert_eq!(
                    f.frobenius(&f.add(&a, &b)),
                    f.add(&f.frobenius(&a), &f.frobenius(&b))
                );
            }

            #[test]
            fn pth_root_inverts_frobenius((f, i, j) in field_and_pair()) {
                let (a, b) = (f.element(i), f.element(j));
                prop_assert_eq!(f.frobenius(&f.pth_root(&a)), a.clone());
                prop_assert_eq!(
                    f.pth_root(&f.mul(&a, &b)),
                    f.mul(&f.pth_root(&a), &f.pth_root(&b))
                );
            }

            #[test]
            fn field_axioms((f, i, j) in field_and_pair()) {
                let (a, b) = (f.element(i), f.element(j));
                prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a.clone());
                prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
                if !b.is_zero() {
                    prop_assert_eq!(f.mul(&f.div(&a, &b).unwrap(), &b), a.clone());
                }
            }
        }
    }
}
