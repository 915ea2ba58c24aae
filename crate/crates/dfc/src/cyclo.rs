//! Exact arithmetic in the cyclotomic integer ring Z[zeta_p].
//!
//! Values are kept in the power basis {1, zeta, .., zeta^(p-2)} with the
//! relation 1 + zeta + .. + zeta^(p-1) = 0 applied so that the zeta^(p-1)
//! coordinate is always eliminated. Canonical coefficient vectors are unique,
//! so equality of vectors is equality in the ring. Every quantity the sum
//! tables call sqrt(p*) is represented by the exact Gauss sum element.

use crate::error::{Error, Result};
use crate::gf::legendre;
use num::bigint::Sign;
use num::{BigInt, BigUint, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Element of Z[zeta_p] in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    p: u64,
    /// Coefficients of 1, zeta, .., zeta^(p-2).
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> CycInt {
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_bigint(p: u64, value: BigInt) -> CycInt {
        let mut out = Self::zero(p);
        out.coeffs[0] = value;
        out
    }

    pub fn from_i64(p: u64, value: i64) -> CycInt {
        Self::from_bigint(p, BigInt::from(value))
    }

    /// zeta_p^j, canonicalized.
    pub fn zeta_pow(p: u64, j: u64) -> CycInt {
        let j = (j % p) as usize;
        let mut out = Self::zero(p);
        if j < (p - 1) as usize {
            out.coeffs[j] = BigInt::one();
        } else {
            // zeta^(p-1) = -(1 + zeta + .. + zeta^(p-2))
            for c in out.coeffs.iter_mut() {
                *c = -BigInt::one();
            }
        }
        out
    }

    /// Build from a full exponent-indexed vector of length p.
    fn from_folded(p: u64, mut folded: Vec<BigInt>) -> CycInt {
        debug_assert_eq!(folded.len(), p as usize);
        let top = folded.pop().expect("nonempty");
        for c in folded.iter_mut() {
            *c -= &top;
        }
        CycInt { p, coeffs: folded }
    }

    /// Sum_j counts[j] * zeta^j for a trace fiber count vector of length p.
    pub fn from_trace_counts(p: u64, counts: &[u64]) -> Result<CycInt> {
        if counts.len() != p as usize {
            return Err(Error::BadCountVector {
                p,
                got: counts.len(),
            });
        }
        let folded = counts.iter().map(|&c| BigInt::from(c)).collect();
        Ok(Self::from_folded(p, folded))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer this value equals, if it lies in Z.
    pub fn as_rational(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_prime(&self, other: &CycInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime(self.p, other.p));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn try_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> CycInt {
        self.scale(&BigInt::from(k))
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_prime(other)?;
        let p = self.p as usize;
        let mut folded = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                folded[(i + j) % p] += a * b;
            }
        }
        Ok(Self::from_folded(self.p, folded))
    }

    pub fn pow(&self, e: u32) -> CycInt {
        let mut acc = Self::from_i64(self.p, 1);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same prime");
        }
        acc
    }

    /// Galois action sigma_y: zeta -> zeta^y, for y a unit mod p.
    pub fn galois(&self, y: u64) -> Result<CycInt> {
        if y % self.p == 0 {
            return Err(Error::NonUnitAutomorphism);
        }
        let p = self.p as usize;
        let y = (y % self.p) as usize;
        let mut folded = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            folded[i * y % p] += c;
        }
        Ok(Self::from_folded(self.p, folded))
    }
}

impl std::ops::Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("mismatched cyclotomic primes")
    }
}

impl std::ops::Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("mismatched cyclotomic primes")
    }
}

impl std::ops::Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("mismatched cyclotomic primes")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            let body = match (i, mag == &BigUint::one()) {
                (0, _) => format!("{mag}"),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}z"),
                (_, true) => format!("z^{i}"),
                (_, false) => format!("{mag}z^{i}"),
            };
            if terms.is_empty() {
                if c.sign() == Sign::Minus {
                    terms.push(format!("-{body}"));
                } else {
                    terms.push(body);
                }
            } else if c.sign() == Sign::Minus {
                terms.push(format!("- {body}"));
            } else {
                terms.push(format!("+ {body}"));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" "))
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}, {})", self.p, self)
    }
}

/// p* = (-1)^((p-1)/2) p, the square of the Gauss sum.
pub fn p_star(p: u64) -> BigInt {
    let v = BigInt::from(p);
    if (p - 1) / 2 % 2 == 0 {
        v
    } else {
        -v
    }
}

/// The quadratic Gauss sum over F_p: sum_v eta'(v) zeta^v.
pub fn gauss_sum(p: u64) -> CycInt {
    let mut folded = vec![BigInt::zero(); p as usize];
    for v in 1..p {
        folded[v as usize] = BigInt::from(legendre(v, p));
    }
    CycInt::from_folded(p, folded)
}

/// Exact multiset of cyclotomic values with arbitrary-precision multiplicities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValueDistribution {
    counts: BTreeMap<CycInt, BigUint>,
}

impl ValueDistribution {
    pub fn new() -> ValueDistribution {
        ValueDistribution {
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, value: CycInt, multiplicity: BigUint) {
        if multiplicity.is_zero() {
            return;
        }
        *self.counts.entry(value).or_default() += multiplicity;
    }

    pub fn add_u128(&mut self, value: CycInt, multiplicity: u128) {
        self.add(value, BigUint::from(multiplicity));
    }

    pub fn merge(&mut self, other: ValueDistribution) {
        for (v, c) in other.counts {
            self.add(v, c);
        }
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, value: &CycInt) -> BigUint {
        self.counts.get(value).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CycInt, &BigUint)> {
        self.counts.iter()
    }

    /// Values whose multiplicities differ, as (value, in self, in other).
    pub fn differences(&self, other: &ValueDistribution) -> Vec<(CycInt, BigUint, BigUint)> {
        let mut out = Vec::new();
        let keys: std::collections::BTreeSet<&CycInt> =
            self.counts.keys().chain(other.counts.keys()).collect();
        for k in keys {
            let a = self.get(k);
            let b = other.get(k);
            if a != b {
                out.push((k.clone(), a, b));
            }
        }
        out
    }
}
