//! The two extended trace-code families over F_p of length p^m.
//!
//! A C1 codeword is (Tr(a x^(p^l+1) + b x^2 + c x) + h) sampled over all of
//! F_q in canonical coordinate order; C2 drops the quadratic term. Weight
//! distributions come from two independent routes: exhaustive enumeration of
//! the parameter space (through the shared counting kernel) and closed-form
//! multiplicity tables, evaluated exactly with integrality checks on every
//! division.

use crate::error::{Error, Result};
use crate::gf::{gcd, FieldElem, FieldParams};
use crate::kernel;
use num::{BigInt, BigUint, Integer, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// Tr(a x^(p^l+1) + b x^2 + c x) + h; dimension 3m+1.
    C1,
    /// Tr(a x^(p^l+1) + b x) + h; dimension 2m+1.
    C2,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::C1 => "c1",
            Family::C2 => "c2",
        }
    }

    /// Number of F_q-coefficients in a parameter tuple.
    fn slots(self) -> u32 {
        match self {
            Family::C1 => 3,
            Family::C2 => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One of the two code families over a concrete field.
#[derive(Clone)]
pub struct CodeSpec {
    pub field: Arc<FieldParams>,
    pub family: Family,
    pub l: u32,
}

impl CodeSpec {
    pub fn new(field: Arc<FieldParams>, family: Family, l: u32) -> Result<CodeSpec> {
        if field.m() < 3 {
            return Err(Error::DegreeTooSmallForCodes(field.m()));
        }
        if l == 0 || gcd(field.m() as u64, l as u64) != 1 {
            return Err(Error::GcdViolation { m: field.m(), l });
        }
        Ok(CodeSpec { field, family, l })
    }

    /// Code length p^m.
    pub fn length(&self) -> u64 {
        self.field.q()
    }

    /// Dimension claimed by the closed form: 3m+1 or 2m+1.
    pub fn expected_dimension(&self) -> u32 {
        self.family.slots() * self.field.m() + 1
    }

    /// Materialize a dense codeword over F_p, coordinate i holding the value
    /// at the element of canonical index i. For C2 the quadratic coefficient
    /// must be zero.
    pub fn codeword(
        &self,
        a: FieldElem,
        quad: FieldElem,
        lin: FieldElem,
        h: u64,
    ) -> Result<Vec<u8>> {
        if self.family == Family::C2 && !quad.is_zero() {
            return Err(Error::QuadraticTermForbidden);
        }
        let f = &self.field;
        let p = f.p();
        let e1 = (p as u128).pow(self.l) + 1;
        let h = h % p;
        let mut out = Vec::with_capacity(f.q() as usize);
        for x in f.elements() {
            let v = f.add(
                f.add(f.mul(a, f.pow(x, e1)), f.mul(quad, f.mul(x, x))),
                f.mul(lin, x),
            );
            out.push(((f.trace(v) + h) % p) as u8);
        }
        Ok(out)
    }

    /// Hamming weight of the codeword with the given parameters, via the
    /// fiber-count kernel: p^m - |{x : Tr(..) = -h}|.
    pub fn weight_of(&self, a: FieldElem, quad: FieldElem, lin: FieldElem, h: u64) -> Result<u64> {
        if self.family == Family::C2 && !quad.is_zero() {
            return Err(Error::QuadraticTermForbidden);
        }
        let counts = self.trace_counts(a, quad, lin)?;
        let p = self.field.p();
        let neg_h = (p - h % p) % p;
        Ok(self.field.q() - counts[neg_h as usize])
    }

    /// Trace fiber counts N_j = |{x : Tr(..) = j}| of one parameter tuple.
    pub fn trace_counts(&self, a: FieldElem, quad: FieldElem, lin: FieldElem) -> Result<Vec<u64>> {
        match self.family {
            Family::C1 => kernel::counts_for_tuple(
                &self.field,
                self.l,
                Family::C1,
                a.index(),
                quad.index(),
                lin.index(),
            ),
            Family::C2 => kernel::counts_for_tuple(
                &self.field,
                self.l,
                Family::C2,
                a.index(),
                0,
                lin.index(),
            ),
        }
    }

    /// Exact weight distribution by exhaustive enumeration of the parameter
    /// space. All p affine offsets reuse each tuple's fiber counts.
    pub fn weight_distribution_bruteforce(&self, max_work: u128) -> Result<WeightDistribution> {
        let map = kernel::count_distribution(&self.field, self.l, self.family, max_work)?;
        let q = self.field.q();
        let p = self.field.p();
        let mut wd = WeightDistribution::new();
        for (nvec, mult) in map {
            for h in 0..p {
                let neg_h = ((p - h) % p) as usize;
                let w = q - nvec[neg_h] as u64;
                wd.add(w, BigUint::from(mult));
            }
        }
        Ok(wd)
    }

    /// Exact weight distribution from the closed-form tables; duplicate
    /// weights across rows are merged by addition.
    pub fn weight_distribution_closed(&self) -> WeightDistribution {
        let rows = self.closed_form_rows();
        let mut wd = WeightDistribution::new();
        wd.add(0, BigUint::one());
        for (w, mult) in rows {
            wd.add(w, mult);
        }
        wd.add(
            self.length(),
            (BigInt::from(self.field.p()) - 1u32).to_biguint().unwrap(),
        );
        wd
    }

    /// Nonzero, non-maximal weight rows of the closed-form tables, exact.
    fn closed_form_rows(&self) -> Vec<(u64, BigUint)> {
        let p = self.field.p();
        let m = self.field.m();
        let pb = |e: u32| BigInt::from(p).pow(e);
        let big = |v: i64| BigInt::from(v);
        let qm1 = &pb(m) - 1; // p^m - 1

        let rows: Vec<(BigInt, BigInt)> = match (self.family, m % 2 == 1) {
            (Family::C1, true) => {
                let h = (m - 1) / 2;
                vec![
                    (
                        // The multiplicity polynomial is rebuilt from the
                        // exponential-sum distribution; the commonly printed
                        // form ends in "+2", which is only right at m = 3
                        // (there p^(m-3) + 1 = 2). Exhaustive enumeration
                        // confirms this version at every tested size.
                        &pb(m - 1) * (p - 1),
                        BigInt::from(p)
                            * (big(2) * pb(2 * m - 1) - big(2) * pb(2 * m - 2) + pb(2 * m - 3)
                                - pb(2 * m - 4)
                                + pb(m - 1)
                                - pb(m - 2)
                                + pb(m - 3)
                                + 1)
                            * &qm1,
                    ),
                    (
                        &pb(h) * (&pb(h + 1) - &pb(h) - p + 1),
                        exact_div(&(&pb((3 * m - 3) / 2) * &qm1 * (&pb(h) + 1)), &big(2)),
                    ),
                    (
                        &pb(h) * (&pb(h + 1) - &pb(h) + p - 1),
                        exact_div(&(&pb((3 * m - 3) / 2) * &qm1 * (&pb(h) - 1)), &big(2)),
                    ),
                    (
                        &pb(h) * (&pb(h + 1) - &pb(h) + 1),
                        exact_div(
                            &(&pb(m)
                                * &qm1
                                * (&pb(m + 2) - &pb(m + 1) - &pb(m - 2) + &pb(h + 1) - &pb(h - 1)
                                    + &pb(2))),
                            &(big(2) * (p + 1)),
                        ),
                    ),
                    (
                        &pb(h) * (&pb(h + 1) - &pb(h) - 1),
                        exact_div(
                            &(&pb(m)
                                * &qm1
                                * (&pb(m + 2) - &pb(m + 1) - &pb(m - 2) - &pb(h + 1) + &pb(h - 1)
                                    + &pb(2))),
                            &(big(2) * (p + 1)),
                        ),
                    ),
                    (
                        &pb(h + 1) * (&pb(h) - &pb(h - 1) + 1),
                        exact_div(
                            &(&pb(m - 2) * &qm1 * (&pb(m - 1) - 1)),
                            &(big(2) * (p + 1)),
                        ),
                    ),
                    (
                        &pb(h + 1) * (&pb(h) - &pb(h - 1) - 1),
                        exact_div(
                            &(&pb(m - 2) * &qm1 * (&pb(m - 1) - 1)),
                            &(big(2) * (p + 1)),
                        ),
                    ),
                ]
            }
            (Family::C1, false) => {
                let k = m / 2;
                let d2p2 = big(2) * (&pb(2) - 1);
                let d2p = big(2) * (p + 1);
                let mid_plus = &pb(m) - &pb(m - 1) - &pb(m - 2) + &pb(k) - &pb(k - 1) + 1;
                let mid_minus = &pb(m) - &pb(m - 1) - &pb(m - 2) - &pb(k) + &pb(k - 1) + 1;
                vec![
                    (
                        &pb(m - 1) * (p - 1),
                        BigInt::from(p)
                            * (&pb(2 * m - 1) - &pb(2 * m - 2) + big(2) * &pb(2 * m - 3)
                                - &pb(m - 2)
                                + 1)
                            * &qm1,
                    ),
                    (
                        &pb(k - 1) * (&pb(k + 1) - &pb(k) - p + 1),
                        exact_div(&(&pb(m + 2) * &qm1 * &mid_plus), &d2p2),
                    ),
                    (
                        &pb(k) * (&pb(k) - &pb(k - 1) - p + 1),
                        exact_div(
                            &(&pb(m - 2) * &qm1 * (&pb(k) - 1) * (&pb(k - 1) + 1)),
                            &d2p2,
                        ),
                    ),
                    (
                        &pb(k - 1) * (&pb(k + 1) - &pb(k) + p - 1),
                        exact_div(&(&pb(m + 2) * &qm1 * &mid_minus), &d2p2),
                    ),
                    (
                        &pb(k) * (&pb(k) - &pb(k - 1) + p - 1),
                        exact_div(
                            &(&pb(m - 2) * &qm1 * (&pb(k) + 1) * (&pb(k - 1) - 1)),
                            &d2p2,
                        ),
                    ),
                    (
                        &pb(k - 1) * (&pb(k + 1) - &pb(k) + 1),
                        exact_div(&(&pb(m + 2) * &qm1 * &mid_plus), &d2p),
                    ),
                    (
                        &pb(k) * (&pb(k) - &pb(k - 1) + 1),
                        exact_div(
                            &(&pb(m - 2)
                                * &qm1
                                * (&pb(m + 2) - &pb(m) + &pb(m - 1) + &pb(k) - &pb(k - 1) - 1)),
                            &d2p,
                        ),
                    ),
                    (
                        &pb(k - 1) * (&pb(k + 1) - &pb(k) - 1),
                        exact_div(&(&pb(m + 2) * &qm1 * &mid_minus), &d2p),
                    ),
                    (
                        &pb(k) * (&pb(k) - &pb(k - 1) - 1),
                        exact_div(
                            &(&pb(m - 2)
                                * &qm1
                                * (&pb(m + 2) - &pb(m) + &pb(m - 1) - &pb(k) + &pb(k - 1) - 1)),
                            &d2p,
                        ),
                    ),
                ]
            }
            (Family::C2, true) => {
                let h = (m - 1) / 2;
                let half_band = exact_div(&(&pb(m) * (p - 1) * &qm1), &big(2));
                vec![
                    (
                        &pb(m - 1) * (p - 1),
                        BigInt::from(p) * (&pb(m - 1) + 1) * &qm1,
                    ),
                    (&pb(m - 1) * (p - 1) + &pb(h), half_band.clone()),
                    (&pb(m - 1) * (p - 1) - &pb(h), half_band),
                ]
            }
            (Family::C2, false) => {
                let k = m / 2;
                let s = if k % 2 == 0 { big(1) } else { big(-1) };
                let base = &pb(m - 1) * (p - 1);
                vec![
                    (
                        base.clone(),
                        BigInt::from(p) * (&pb(m - 1) - &pb(m - 2) + 1) * &qm1,
                    ),
                    (
                        &base - &s * &pb(k - 1) * (p - 1),
                        exact_div(&(&pb(m + 1) * &qm1), &big(p as i64 + 1)),
                    ),
                    (
                        &base + &s * &pb(k - 1),
                        exact_div(&(&pb(m + 1) * (p - 1) * &qm1), &big(p as i64 + 1)),
                    ),
                    (
                        &base + &s * &pb(k) * (p - 1),
                        exact_div(&(&pb(m - 2) * &qm1), &big(p as i64 + 1)),
                    ),
                    (
                        &base - &s * &pb(k),
                        exact_div(&(&pb(m - 2) * (p - 1) * &qm1), &big(p as i64 + 1)),
                    ),
                ]
            }
        };

        rows.into_iter()
            .map(|(w, mult)| {
                assert!(!w.is_negative() && !mult.is_negative(), "table row out of range");
                (
                    u64::try_from(&w).expect("weight fits u64"),
                    mult.to_biguint().unwrap(),
                )
            })
            .collect()
    }

    /// Rank of the linear map from parameter tuples to codewords.
    pub fn dimension(&self) -> Result<u32> {
        let f = &self.field;
        let m = f.m() as usize;
        let zero = f.zero();
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for j in 0..m {
            let bj = f.from_coeff_encoding(crate::gf::pow_u64(f.p(), j as u32) as u32);
            rows.push(self.codeword(bj, zero, zero, 0)?);
            if self.family == Family::C1 {
                rows.push(self.codeword(zero, bj, zero, 0)?);
            }
            rows.push(self.codeword(zero, zero, bj, 0)?);
        }
        rows.push(self.codeword(zero, zero, zero, 1)?);
        Ok(rank_fp(rows, f.p()))
    }
}

/// Row-reduce over F_p and return the rank.
fn rank_fp(mut rows: Vec<Vec<u8>>, p: u64) -> u32 {
    let p = p as u32;
    let mut reduced: Vec<(usize, Vec<u8>)> = Vec::new();
    'next: while let Some(mut row) = rows.pop() {
        loop {
            let Some(lead) = row.iter().position(|&c| c != 0) else {
                continue 'next;
            };
            match reduced.iter().find(|(l, _)| *l == lead) {
                None => {
                    // Normalize so the leading coefficient is 1.
                    let inv = mod_inv(row[lead] as u32, p);
                    for c in row.iter_mut() {
                        *c = ((*c as u32) * inv % p) as u8;
                    }
                    reduced.push((lead, row));
                    continue 'next;
                }
                Some((_, basis)) => {
                    let factor = row[lead] as u32;
                    for (c, b) in row.iter_mut().zip(basis) {
                        *c = ((*c as u32 + p * p - factor * (*b as u32) % (p * p)) % p) as u8;
                    }
                }
            }
        }
    }
    reduced.len() as u32
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Divide exactly, panicking on a nonzero remainder; the tables are supposed
/// to produce integers and anything else is a transcription bug.
fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (quot, rem) = num.div_rem(den);
    assert!(rem.is_zero(), "non-integral table multiplicity {num}/{den}");
    quot
}

/// Exact histogram: Hamming weight -> codeword count.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightDistribution {
    counts: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn new() -> WeightDistribution {
        WeightDistribution {
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, weight: u64, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.counts.entry(weight).or_default() += count;
    }

    pub fn get(&self, weight: u64) -> BigUint {
        self.counts.get(&weight).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<u64> {
        self.counts.keys().find(|&&w| w > 0).copied()
    }

    pub fn nonzero_weights(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().filter(|&&w| w > 0).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &BigUint)> {
        self.counts.iter()
    }

    /// Weight enumerator in the conventional 1 + A_i z^i style.
    pub fn enumerator_string(&self) -> String {
        let mut terms = Vec::new();
        for (&w, c) in &self.counts {
            if w == 0 {
                terms.push(format!("{c}"));
            } else {
                terms.push(format!("{c}z^{w}"));
            }
        }
        terms.join(" + ")
    }
}

impl FromIterator<(u64, BigUint)> for WeightDistribution {
    fn from_iter<T: IntoIterator<Item = (u64, BigUint)>>(iter: T) -> Self {
        let mut wd = WeightDistribution::new();
        for (w, c) in iter {
            wd.add(w, c);
        }
        wd
    }
}
