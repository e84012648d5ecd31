//! Exact distributions on GF(q)^n and the randomness measures over them.
//!
//! Collision probabilities stay exact rationals; only the logarithms in the
//! entropies introduce floating point. All entropies are in bits.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::FunctionTable;
use crate::gf::FieldVector;

/// Arbitrary-precision rational in lowest terms with a positive denominator.
///
/// Serialized as the string `"num/den"` (`"1/1"` for one).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `-log2(self)` computed as `log2(den) - log2(num)`; `self` must be positive.
    pub fn neg_log2(&self) -> f64 {
        assert!(self.0.is_positive(), "log of non-positive rational");
        log2_big(self.denom()) - log2_big(self.numer())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num::traits::Pow::pow(&self.0, exp))
    }
}

fn log2_big(x: &BigInt) -> f64 {
    const KEEP: u64 = 1000;
    let bits = x.bits();
    if bits <= KEEP {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - KEEP;
        (x >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Rational::new(v, 1u32)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("not a rational: {s:?}"));
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, r| acc + r)
    }
}

/// A distribution on a finite support with integer counts over a common total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    support_size: u128,
    counts: BTreeMap<FieldVector, u64>,
    total: u64,
}

impl ExactDistribution {
    /// Collects `(outcome, count)` pairs; repeated outcomes are summed and
    /// zero counts dropped.
    pub fn from_counts(
        support_size: u128,
        counts: impl IntoIterator<Item = (FieldVector, u64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, c) in counts {
            if c > 0 {
                *map.entry(s).or_insert(0u64) += c;
            }
        }
        let total: u64 = map.values().sum();
        if total == 0 {
            return Err(Error::Invalid("distribution has no mass".into()));
        }
        if map.len() as u128 > support_size {
            return Err(Error::Invalid("more outcomes than the support size".into()));
        }
        Ok(ExactDistribution {
            support_size,
            counts: map,
            total,
        })
    }

    pub fn support_size(&self) -> u128 {
        self.support_size
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<FieldVector, u64> {
        &self.counts
    }

    pub fn probability(&self, s: &FieldVector) -> Rational {
        Rational::new(self.counts.get(s).copied().unwrap_or(0), self.total)
    }

    pub fn is_uniform(&self) -> bool {
        self.counts.len() as u128 == self.support_size
            && self.counts.values().all(|&c| c == self.total / self.counts.len() as u64)
    }

    pub fn is_deterministic(&self) -> bool {
        self.counts.len() == 1
    }
}

/// Law of `table(A)` for `A` uniform on the table's domain.
pub fn distribution_of(table: &FunctionTable) -> ExactDistribution {
    let q = table.field().q() as u128;
    let support = q.pow(table.n() as u32);
    let counts = (0..table.size()).map(|x| (table.output(x), 1u64));
    ExactDistribution::from_counts(support, counts).expect("tables have at least one input")
}

pub fn collision_probability(d: &ExactDistribution) -> Rational {
    let t = d.total as u128;
    Rational::new(sum_of_squares(d.counts.values().copied()), t * t)
}

pub fn shannon_entropy(d: &ExactDistribution) -> f64 {
    shannon_from_counts(d.counts.values().copied(), d.total)
}

pub fn renyi2_entropy(d: &ExactDistribution) -> f64 {
    collision_probability(d).neg_log2()
}

pub fn min_entropy(d: &ExactDistribution) -> f64 {
    let max = d.counts.values().copied().max().unwrap_or(d.total);
    Rational::new(max, d.total).neg_log2()
}

pub(crate) fn sum_of_squares(counts: impl Iterator<Item = u64>) -> u128 {
    counts.map(|c| c as u128 * c as u128).sum()
}

/// `log2(total) - (1/total) * sum c log2 c`, skipping zero counts.
pub(crate) fn shannon_from_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let weighted: f64 = counts
        .filter(|&c| c > 1)
        .map(|c| c as f64 * (c as f64).log2())
        .sum();
    ((total as f64).log2() - weighted / total as f64).max(0.0)
}
