//! Small finite fields GF(p^m) backed by dense lookup tables.
//!
//! Elements are integer indices in `[0, q)`. The base-p digits of an index
//! are the coefficients of the element as a polynomial in the field
//! generator, digit `i` being the coefficient of `generator^i`. Index 0 is
//! the additive identity and index 1 the multiplicative identity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default ceiling on the field order accepted by [`build_field`].
pub const DEFAULT_ORDER_LIMIT: u32 = 4096;

/// Hard ceiling imposed by the `u16` element storage.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the limit of {limit}")]
    OrderTooLarge { p: u32, m: u32, limit: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element index {index} is out of range for GF({q})")]
    OutOfRange { index: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("field vectors need at least one entry")]
    EmptyVector,
}

/// A field element, stored as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u16);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index_unchecked(index: usize) -> Element {
        debug_assert!(index < MAX_ORDER as usize);
        Element(index as u16)
    }
}

/// A concrete finite field with precomputed arithmetic tables.
///
/// Immutable once built; share it behind an `Arc` for concurrent readers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Coefficients `[c0, c1, ..., cm]` of the monic modulus, `cm == 1`.
    irreducible: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    /// `inv[0]` holds the sentinel 0; zero has no inverse.
    inv: Vec<u16>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Builds GF(p^m) with the default order limit.
pub fn build_field(p: u32, m: u32) -> Result<FieldSpec, FieldError> {
    build_field_with_limit(p, m, DEFAULT_ORDER_LIMIT)
}

/// Builds GF(q) for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<FieldSpec, FieldError> {
    let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    build_field(p, m)
}

pub fn build_field_with_limit(p: u32, m: u32, limit: u32) -> Result<FieldSpec, FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p));
    }
    if m < 1 {
        return Err(FieldError::ZeroDegree);
    }
    let limit = limit.min(MAX_ORDER);
    let too_large = FieldError::OrderTooLarge { p, m, limit };
    let q = (p as u64)
        .checked_pow(m)
        .filter(|&q| q <= limit as u64)
        .ok_or(too_large)? as u32;

    let irreducible = least_irreducible(p, m);
    let add = addition_table(p, m, q);
    let mul = multiplication_table(p, m, q, &irreducible, &add);

    let qs = q as usize;
    let mut neg = vec![0u16; qs];
    let mut inv = vec![0u16; qs];
    for a in 0..qs {
        neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).expect("additive inverse") as u16;
        if a != 0 {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).expect("multiplicative inverse") as u16;
        }
    }

    Ok(FieldSpec {
        p,
        m,
        q,
        irreducible,
        add,
        mul,
        neg,
        inv,
    })
}

fn to_digits(mut index: usize, p: u32, m: u32) -> Vec<u32> {
    let mut digits = Vec::with_capacity(m as usize);
    for _ in 0..m {
        digits.push((index % p as usize) as u32);
        index /= p as usize;
    }
    digits
}

fn from_digits(digits: &[u32], p: u32) -> usize {
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
/// Coefficients are stored constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let t = (r[shift + j] + p - (lead * bj) % p) % p;
                r[shift + j] = t;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    if m <= 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut divisor = to_digits(code, p, d as u32);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible of degree `m`, ordering candidates by the
/// integer whose base-p digits are the non-leading coefficients (constant
/// term least significant).
fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as usize).pow(m);
    (0..count)
        .map(|code| {
            let mut poly = to_digits(code, p, m);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial exists for every degree")
}

fn addition_table(p: u32, m: u32, q: u32) -> Vec<u16> {
    let qs = q as usize;
    let mut table = vec![0u16; qs * qs];
    if p == 2 {
        for a in 0..qs {
            for b in 0..qs {
                table[a * qs + b] = (a ^ b) as u16;
            }
        }
        return table;
    }
    let digits: Vec<Vec<u32>> = (0..qs).map(|i| to_digits(i, p, m)).collect();
    let mut sum = vec![0u32; m as usize];
    for a in 0..qs {
        for b in 0..qs {
            for j in 0..m as usize {
                sum[j] = (digits[a][j] + digits[b][j]) % p;
            }
            table[a * qs + b] = from_digits(&sum, p) as u16;
        }
    }
    table
}

/// Fills the multiplication table row by row using linearity in the second
/// argument: `a*b = a*low + a*(d p^j)` where `d p^j` is the top digit of `b`.
fn multiplication_table(p: u32, m: u32, q: u32, modulus: &[u32], add: &[u16]) -> Vec<u16> {
    let qs = q as usize;
    let ms = m as usize;
    let mut table = vec![0u16; qs * qs];
    let powers: Vec<usize> = (0..ms).map(|j| (p as usize).pow(j as u32)).collect();

    let times_x = |digits: &[u32]| -> Vec<u32> {
        let top = digits[ms - 1];
        let mut out = vec![0u32; ms];
        for j in 0..ms {
            let carried = if j == 0 { 0 } else { digits[j - 1] };
            out[j] = (carried + p - (top * modulus[j]) % p) % p;
        }
        out
    };
    let scale = |d: u32, digits: &[u32]| -> usize {
        let scaled: Vec<u32> = digits.iter().map(|&c| (c * d) % p).collect();
        from_digits(&scaled, p)
    };

    for a in 0..qs {
        let row = &mut table[a * qs..(a + 1) * qs];
        // a * x^j for each j, as digit vectors
        let mut shifted = Vec::with_capacity(ms);
        let mut cur = to_digits(a, p, m);
        for _ in 0..ms {
            shifted.push(cur.clone());
            cur = times_x(&cur);
        }
        for b in 1..qs {
            let j = powers.iter().rposition(|&pw| pw <= b).unwrap();
            let d = (b / powers[j]) % p as usize;
            let head = d * powers[j];
            let low = b - head;
            row[b] = if low == 0 {
                scale(d as u32, &shifted[j]) as u16
            } else {
                add[row[low] as usize * qs + row[head] as usize]
            };
        }
    }
    table
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `[c0, ..., cm]` of the modulus, constant term first.
    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    pub fn element(&self, index: u64) -> Result<Element, FieldError> {
        if index < self.q as u64 {
            Ok(Element(index as u16))
        } else {
            Err(FieldError::OutOfRange { index, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.q).map(|i| Element(i as u16))
    }

    fn check(&self, a: Element) -> Result<usize, FieldError> {
        self.element(a.0 as u64).map(Element::index)
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element, FieldError> {
        Ok(Element(self.add_idx(self.check(a)?, self.check(b)?) as u16))
    }

    pub fn neg(&self, a: Element) -> Result<Element, FieldError> {
        Ok(Element(self.neg[self.check(a)?]))
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element, FieldError> {
        self.add(a, self.neg(b)?)
    }

    pub fn mul(&self, a: Element, b: Element) -> Result<Element, FieldError> {
        Ok(Element(self.mul_idx(self.check(a)?, self.check(b)?) as u16))
    }

    pub fn inv(&self, a: Element) -> Result<Element, FieldError> {
        match self.check(a)? {
            0 => Err(FieldError::ZeroInverse),
            i => Ok(Element(self.inv[i])),
        }
    }

    /// The element `1 + 1 + ... + 1` (`count` terms).
    pub fn integer(&self, count: u64) -> Element {
        Element((count % self.p as u64) as u16)
    }

    /// Base-p digits of an element, constant coefficient first.
    pub fn digits(&self, a: Element) -> Vec<u32> {
        to_digits(a.index(), self.p, self.m)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Element, FieldError> {
        if digits.len() != self.m as usize {
            return Err(FieldError::LengthMismatch(digits.len(), self.m as usize));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= self.p) {
            return Err(FieldError::OutOfRange {
                index: bad as u64,
                q: self.p,
            });
        }
        self.element(from_digits(digits, self.p) as u64)
    }

    #[inline]
    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q as usize + b] as usize
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q as usize + b] as usize
    }

    pub fn dump(&self) -> FieldDump {
        let qs = self.q as usize;
        let rows = |t: &[u16]| -> Vec<Vec<u32>> {
            t.chunks(qs)
                .map(|r| r.iter().map(|&v| v as u32).collect())
                .collect()
        };
        FieldDump {
            p: self.p,
            m: self.m,
            q: self.q,
            irreducible: self.irreducible.clone(),
            add: rows(&self.add),
            mul: rows(&self.mul),
        }
    }
}

/// JSON shape of a field dump, tables row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDump {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub irreducible: Vec<u32>,
    pub add: Vec<Vec<u32>>,
    pub mul: Vec<Vec<u32>>,
}

/// An element of GF(q)^n with `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldVector(Vec<Element>);

impl FieldVector {
    pub fn new(entries: Vec<Element>) -> Result<Self, FieldError> {
        if entries.is_empty() {
            return Err(FieldError::EmptyVector);
        }
        Ok(FieldVector(entries))
    }

    /// Builds a vector from raw indices, validating each against `spec`.
    pub fn from_indices(spec: &FieldSpec, indices: &[u64]) -> Result<Self, FieldError> {
        let entries = indices
            .iter()
            .map(|&i| spec.element(i))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        FieldVector(vec![Element::ZERO; n])
    }

    pub fn ones(n: usize) -> Self {
        assert!(n >= 1);
        FieldVector(vec![Element::ONE; n])
    }

    /// Decodes the canonical mixed-radix index `sum x_i q^i`.
    pub fn from_linear_index(mut index: usize, q: u32, n: usize) -> Self {
        let entries = (0..n)
            .map(|_| {
                let e = Element::from_index_unchecked(index % q as usize);
                index /= q as usize;
                e
            })
            .collect();
        FieldVector(entries)
    }

    pub fn linear_index(&self, q: u32) -> usize {
        self.0
            .iter()
            .rev()
            .fold(0usize, |acc, e| acc * q as usize + e.index())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Element] {
        &self.0
    }

    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|e| e.index() as u32).collect()
    }
}

/// Coordinate-wise product `x ⊙ y`.
pub fn mask_product(
    spec: &FieldSpec,
    x: &FieldVector,
    y: &FieldVector,
) -> Result<FieldVector, FieldError> {
    if x.len() != y.len() {
        return Err(FieldError::LengthMismatch(x.len(), y.len()));
    }
    let entries = x
        .0
        .iter()
        .zip(&y.0)
        .map(|(&a, &b)| spec.mul(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    FieldVector::new(entries)
}

pub fn hamming_distance(x: &FieldVector, y: &FieldVector) -> Result<usize, FieldError> {
    if x.len() != y.len() {
        return Err(FieldError::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
}

/// Number of nonzero coordinates.
pub fn hamming_weight(x: &FieldVector) -> usize {
    x.0.iter().filter(|e| **e != Element::ZERO).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn e(i: u16) -> Element {
        Element(i)
    }

    fn sweep_axioms(f: &FieldSpec) {
        let elems: Vec<Element> = f.elements().collect();
        for &a in &elems {
            assert_eq!(f.add(a, Element::ZERO).unwrap(), a);
            assert_eq!(f.mul(a, Element::ONE).unwrap(), a);
            assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), Element::ZERO);
            if a != Element::ZERO {
                assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), Element::ONE);
            }
            for &b in &elems {
                let ab = f.mul(a, b).unwrap();
                assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                assert_eq!(ab, f.mul(b, a).unwrap());
                for &c in &elems {
                    let l = f.add(f.add(a, b).unwrap(), c).unwrap();
                    assert_eq!(l, f.add(a, f.add(b, c).unwrap()).unwrap());
                    let l = f.mul(ab, c).unwrap();
                    assert_eq!(l, f.mul(a, f.mul(b, c).unwrap()).unwrap());
                    let l = f.mul(a, f.add(b, c).unwrap()).unwrap();
                    let r = f.add(ab, f.mul(a, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            sweep_axioms(&field_of_order(q).unwrap());
        }
    }

    #[test]
    fn gf2_is_xor_and() {
        let f = build_field(2, 1).unwrap();
        for a in 0..2u16 {
            for b in 0..2u16 {
                assert_eq!(f.add(e(a), e(b)).unwrap(), e(a ^ b));
                assert_eq!(f.mul(e(a), e(b)).unwrap(), e(a & b));
            }
        }
    }

    #[test]
    fn gf4_tables() {
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.irreducible(), &[1, 1, 1]);
        assert_eq!(f.mul(e(2), e(2)).unwrap(), e(3));
        assert_eq!(f.mul(e(2), e(3)).unwrap(), e(1));
        assert_eq!(f.inv(e(2)).unwrap(), e(3));
        assert_eq!(f.inv(e(3)).unwrap(), e(2));
        assert_eq!(f.add(e(2), e(3)).unwrap(), e(1));
    }

    #[test]
    fn gf9_uses_x2_plus_1() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.irreducible(), &[1, 0, 1]);
        // x^2 + 1 has no root in GF(3)
        assert!((0..3).all(|x| (x * x + 1) % 3 != 0));
        // generator squared is -1
        assert_eq!(f.mul(e(3), e(3)).unwrap(), e(2));
    }

    #[test]
    fn prime_field_small_cases() {
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.add(e(1), e(2)).unwrap(), e(0));
        assert_eq!(f3.inv(e(2)).unwrap(), e(2));
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.mul(e(2), e(3)).unwrap(), e(1));
        for q in [2u64, 3, 4, 5, 8, 9] {
            let f = field_of_order(q).unwrap();
            assert_eq!(f.inv(Element::ONE).unwrap(), Element::ONE);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(build_field(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(build_field(1, 1), Err(FieldError::NotPrime(1)));
        assert_eq!(build_field(2, 0), Err(FieldError::ZeroDegree));
        assert!(matches!(
            build_field(2, 13),
            Err(FieldError::OrderTooLarge { p: 2, m: 13, .. })
        ));
        assert!(matches!(
            build_field_with_limit(3, 3, 16),
            Err(FieldError::OrderTooLarge { .. })
        ));
        assert_eq!(field_of_order(6), Err(FieldError::NotPrimePower(6)));
    }

    #[test]
    fn element_errors() {
        let f = build_field(2, 2).unwrap();
        assert!(matches!(f.element(4), Err(FieldError::OutOfRange { index: 4, q: 4 })));
        assert!(f.add(e(7), e(0)).is_err());
        assert!(f.mul(e(0), e(4)).is_err());
        assert_eq!(f.inv(e(0)), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn squaring_is_bijective_in_characteristic_two() {
        for m in 1..=8 {
            let f = build_field(2, m).unwrap();
            let mut seen = vec![false; f.q() as usize];
            for a in f.elements() {
                seen[f.mul(a, a).unwrap().index()] = true;
            }
            assert!(seen.iter().all(|&s| s), "GF(2^{m})");
        }
    }

    #[test]
    fn vector_ops() {
        let f = build_field(3, 1).unwrap();
        let x = FieldVector::from_indices(&f, &[1, 2]).unwrap();
        let y = FieldVector::from_indices(&f, &[2, 2]).unwrap();
        assert_eq!(mask_product(&f, &x, &y).unwrap().indices(), vec![2, 1]);
        assert_eq!(mask_product(&f, &x, &FieldVector::ones(2)).unwrap(), x);
        assert_eq!(
            mask_product(&f, &x, &FieldVector::zeros(2)).unwrap(),
            FieldVector::zeros(2)
        );
        assert_eq!(hamming_distance(&x, &x).unwrap(), 0);
        assert_eq!(hamming_distance(&x, &y).unwrap(), 1);
        assert!(mask_product(&f, &x, &FieldVector::ones(3)).is_err());
        assert!(hamming_distance(&x, &FieldVector::ones(1)).is_err());
        assert_eq!(FieldVector::new(vec![]), Err(FieldError::EmptyVector));
        assert!(FieldVector::from_indices(&f, &[3]).is_err());

        let g2 = build_field(2, 1).unwrap();
        let a = FieldVector::from_indices(&g2, &[0, 1]).unwrap();
        let b = FieldVector::from_indices(&g2, &[1, 1]).unwrap();
        assert_eq!(hamming_distance(&a, &b).unwrap(), 1);
        let total: usize = (0..4)
            .map(|i| hamming_weight(&FieldVector::from_linear_index(i, 2, 2)))
            .sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn dump_shape() {
        let d = build_field(2, 2).unwrap().dump();
        assert_eq!(d.q, 4);
        assert_eq!(d.mul[2], vec![0, 2, 3, 1]);
        assert_eq!(d.add[3], vec![3, 2, 1, 0]);
    }

    fn gf3_5() -> &'static FieldSpec {
        static F: OnceLock<FieldSpec> = OnceLock::new();
        F.get_or_init(|| build_field(3, 5).unwrap())
    }

    fn gf2_10() -> &'static FieldSpec {
        static F: OnceLock<FieldSpec> = OnceLock::new();
        F.get_or_init(|| build_field(2, 10).unwrap())
    }

    proptest! {
        #[test]
        fn digit_round_trip(q in prop::sample::select(vec![2u64, 4, 9, 25, 27, 32, 49, 243]), seed in 0u64..100_000) {
            let f = field_of_order(q).unwrap();
            let a = f.element(seed % q).unwrap();
            prop_assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }

        #[test]
        fn sampled_axioms_gf243(a in 0u64..243, b in 0u64..243, c in 0u64..243) {
            check_triple(gf3_5(), a, b, c)?;
        }

        #[test]
        fn sampled_axioms_gf1024(a in 0u64..1024, b in 0u64..1024, c in 0u64..1024) {
            check_triple(gf2_10(), a, b, c)?;
        }
    }

    fn check_triple(f: &FieldSpec, a: u64, b: u64, c: u64) -> Result<(), TestCaseError> {
        let (a, b, c) = (f.element(a).unwrap(), f.element(b).unwrap(), f.element(c).unwrap());
        let add = |x, y| f.add(x, y).unwrap();
        let mul = |x, y| f.mul(x, y).unwrap();
        prop_assert_eq!(add(a, b), add(b, a));
        prop_assert_eq!(mul(a, b), mul(b, a));
        prop_assert_eq!(add(add(a, b), c), add(a, add(b, c)));
        prop_assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
        prop_assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
        if a != Element::ZERO {
            prop_assert_eq!(mul(a, f.inv(a).unwrap()), Element::ONE);
        }
        Ok(())
    }
}
