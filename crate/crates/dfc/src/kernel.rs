//! Enumeration kernels shared by the sum and code modules.
//!
//! Everything here exploits additivity of the trace: the fiber counts of
//! Tr(a x^(p^l+1) + b x^2 + c x) stream through precomputed trace-of-powers
//! tables, one byte per element, without touching field addition at all.
//! Parameter space is sharded over the leading coefficient and partial
//! results merge by pointwise addition, so the outcome is independent of
//! the shard layout.

use crate::codes::Family;
use crate::error::{Error, Result};
use crate::gf::FieldParams;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// Fiber-count vector (length p) mapped to the number of parameter tuples
/// producing it.
pub(crate) type CountMap = HashMap<Vec<u32>, u128>;

/// Largest prime the byte-wide kernel tables support.
const KERNEL_P_MAX: u64 = 251;

pub(crate) struct KernelTables {
    pub q: usize,
    pub n: usize,
    pub p: usize,
    /// trace(alpha^(k mod n)) for k in 0..2n, so a shifted window is a plain slice.
    trd: Vec<u8>,
    /// r mod p for r in 0..=2(p-1).
    modp: Vec<u8>,
    /// (p^l + 1) mod n: exponent step of the twisted-square term.
    e_twist: usize,
    /// 2 mod n: exponent step of the square term.
    e_square: usize,
}

impl KernelTables {
    pub fn new(field: &FieldParams, l: u32) -> Result<KernelTables> {
        let p = field.p();
        if p > KERNEL_P_MAX {
            return Err(Error::FieldTooLarge {
                q: p,
                bound: KERNEL_P_MAX,
            });
        }
        let q = field.q() as usize;
        let n = q - 1;
        let tr = field.trace_table();
        let mut trd = vec![0u8; 2 * n];
        for k in 0..n {
            let t = tr[1 + k] as u8;
            trd[k] = t;
            trd[k + n] = t;
        }
        let modp: Vec<u8> = (0..2 * p - 1).map(|r| (r % p) as u8).collect();
        let pl = (p as u128).pow(l) % n as u128;
        Ok(KernelTables {
            q,
            n,
            p: p as usize,
            trd,
            modp,
            e_twist: ((pl + 1) % n as u128) as usize,
            e_square: 2 % n,
        })
    }

    /// Fill tb[i] = Tr(a x^(p^l+1) + b x^2) at x = alpha^i, i in 0..n.
    /// Coefficients are canonical element indices.
    pub fn fill_twist_square(&self, tb: &mut [u8], a_idx: u32, b_idx: u32) {
        self.fill_single(tb, a_idx, self.e_twist);
        if b_idx != 0 {
            let mut k = (b_idx - 1) as usize;
            let n = self.n;
            for t in tb.iter_mut() {
                *t = self.modp[(*t + self.trd[k]) as usize];
                k += self.e_square;
                if k >= n {
                    k -= n;
                }
            }
        }
    }

    /// Fill tb[i] = Tr(a x^(p^l+1)) at x = alpha^i.
    pub fn fill_twist(&self, tb: &mut [u8], a_idx: u32) {
        self.fill_single(tb, a_idx, self.e_twist);
    }

    fn fill_single(&self, tb: &mut [u8], coeff_idx: u32, step: usize) {
        if coeff_idx == 0 {
            tb.fill(0);
            return;
        }
        let n = self.n;
        let mut k = (coeff_idx - 1) as usize;
        for t in tb.iter_mut() {
            *t = self.trd[k];
            k += step;
            if k >= n {
                k -= n;
            }
        }
    }

    /// Count fibers of Tr(..) + Tr(c x) given the tb table of the fixed part.
    /// counts must have length p; the x = 0 term is included.
    pub fn count_fibers(&self, tb: &[u8], c_idx: u32, counts: &mut [u32]) {
        counts.fill(0);
        counts[0] += 1; // x = 0
        if c_idx == 0 {
            for &t in tb {
                counts[t as usize] += 1;
            }
            return;
        }
        let ec = (c_idx - 1) as usize;
        let row = &self.trd[ec..ec + self.n];
        for (&t, &r) in tb.iter().zip(row) {
            counts[self.modp[(t as usize) + (r as usize)] as usize] += 1;
        }
    }

    /// Fill the full trace vector in canonical coordinate order:
    /// j_buf[0] = 0 and j_buf[1+i] = Tr(..) + Tr(c alpha^i).
    pub fn fill_trace_values(&self, tb: &[u8], c_idx: u32, j_buf: &mut [u8]) {
        j_buf[0] = 0;
        if c_idx == 0 {
            j_buf[1..].copy_from_slice(tb);
            return;
        }
        let ec = (c_idx - 1) as usize;
        let row = &self.trd[ec..ec + self.n];
        for ((j, &t), &r) in j_buf[1..].iter_mut().zip(tb).zip(row) {
            *j = self.modp[(t as usize) + (r as usize)];
        }
    }
}

/// Enumeration cost in visited field elements.
pub(crate) fn work_units(field: &FieldParams, family: Family) -> u128 {
    let q = field.q() as u128;
    match family {
        Family::C1 => q * q * q * q,
        Family::C2 => q * q * q,
    }
}

fn check_budget(field: &FieldParams, family: Family, max_work: u128) -> Result<()> {
    let needed = work_units(field, family);
    if needed > max_work {
        return Err(Error::BudgetExceeded {
            needed,
            cap: max_work,
        });
    }
    Ok(())
}

fn bump(map: &mut CountMap, counts: &[u32]) {
    if let Some(v) = map.get_mut(counts) {
        *v += 1;
    } else {
        map.insert(counts.to_vec(), 1);
    }
}

fn merge_maps(mut a: CountMap, b: CountMap) -> CountMap {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Exact distribution of trace fiber-count vectors over the family's full
/// parameter space (without the affine offset h).
pub(crate) fn count_distribution(
    field: &FieldParams,
    l: u32,
    family: Family,
    max_work: u128,
) -> Result<CountMap> {
    check_budget(field, family, max_work)?;
    let tables = KernelTables::new(field, l)?;
    let q = tables.q as u32;
    let p = tables.p;
    let n = tables.n;

    let map = (0..q)
        .into_par_iter()
        .fold(CountMap::new, |mut map, a_idx| {
            let mut tb = vec![0u8; n];
            let mut counts = vec![0u32; p];
            match family {
                Family::C1 => {
                    for b_idx in 0..q {
                        tables.fill_twist_square(&mut tb, a_idx, b_idx);
                        for c_idx in 0..q {
                            tables.count_fibers(&tb, c_idx, &mut counts);
                            bump(&mut map, &counts);
                        }
                    }
                }
                Family::C2 => {
                    tables.fill_twist(&mut tb, a_idx);
                    for b_idx in 0..q {
                        tables.count_fibers(&tb, b_idx, &mut counts);
                        bump(&mut map, &counts);
                    }
                }
            }
            map
        })
        .reduce(CountMap::new, merge_maps);
    Ok(map)
}

/// Fiber counts for a single parameter tuple. For C2 the quadratic slot is
/// ignored and `c_idx` is the linear coefficient.
pub(crate) fn counts_for_tuple(
    field: &FieldParams,
    l: u32,
    family: Family,
    a_idx: u32,
    b_idx: u32,
    c_idx: u32,
) -> Result<Vec<u64>> {
    let tables = KernelTables::new(field, l)?;
    let mut tb = vec![0u8; tables.n];
    match family {
        Family::C1 => tables.fill_twist_square(&mut tb, a_idx, b_idx),
        Family::C2 => tables.fill_twist(&mut tb, a_idx),
    }
    let mut counts = vec![0u32; tables.p];
    tables.count_fibers(&tb, c_idx, &mut counts);
    Ok(counts.into_iter().map(u64::from).collect())
}

/// Support bitmask of a fixed-weight codeword, one bit per canonical
/// coordinate.
pub(crate) type BlockMask = Box<[u64]>;

/// Collect the deduplicated supports of every codeword whose weight lies in
/// `targets`, keyed by weight.
pub(crate) fn support_sets(
    field: &FieldParams,
    l: u32,
    family: Family,
    targets: &BTreeSet<u64>,
    max_work: u128,
    max_blocks: u64,
) -> Result<BTreeMap<u64, HashSet<BlockMask>>> {
    check_budget(field, family, max_work)?;
    let tables = KernelTables::new(field, l)?;
    let q = tables.q as u32;
    let p = tables.p;
    let n = tables.n;
    let words = (tables.q + 63) / 64;

    type SetMap = BTreeMap<u64, HashSet<BlockMask>>;
    // The trace-value buffer is only materialized for tuples that actually
    // hit a requested weight.
    let collect_tuple = |sets: &mut SetMap,
                         tables: &KernelTables,
                         tb: &[u8],
                         lin_idx: u32,
                         j_buf: &mut [u8],
                         counts: &[u32]|
     -> Result<()> {
        let mut hits: Vec<u8> = Vec::new();
        for h in 0..p as u64 {
            let neg_h = ((p as u64 - h) % p as u64) as u8;
            let w = tables.q as u64 - counts[neg_h as usize] as u64;
            if targets.contains(&w) {
                hits.push(neg_h);
            }
        }
        if hits.is_empty() {
            return Ok(());
        }
        tables.fill_trace_values(tb, lin_idx, j_buf);
        for neg_h in hits {
            let w = tables.q as u64 - counts[neg_h as usize] as u64;
            let mut mask = vec![0u64; words].into_boxed_slice();
            for (coord, &j) in j_buf.iter().enumerate() {
                if j != neg_h {
                    mask[coord / 64] |= 1u64 << (coord % 64);
                }
            }
            let set = sets.entry(w).or_default();
            set.insert(mask);
            if set.len() as u64 > max_blocks {
                return Err(Error::BlockCapExceeded { cap: max_blocks });
            }
        }
        Ok(())
    };

    let sets = (0..q)
        .into_par_iter()
        .try_fold(SetMap::new, |mut sets, a_idx| {
            let mut tb = vec![0u8; n];
            let mut j_buf = vec![0u8; tables.q];
            let mut counts = vec![0u32; p];
            match family {
                Family::C1 => {
                    for b_idx in 0..q {
                        tables.fill_twist_square(&mut tb, a_idx, b_idx);
                        for c_idx in 0..q {
                            tables.count_fibers(&tb, c_idx, &mut counts);
                            collect_tuple(&mut sets, &tables, &tb, c_idx, &mut j_buf, &counts)?;
                        }
                    }
                }
                Family::C2 => {
                    tables.fill_twist(&mut tb, a_idx);
                    for b_idx in 0..q {
                        tables.count_fibers(&tb, b_idx, &mut counts);
                        collect_tuple(&mut sets, &tables, &tb, b_idx, &mut j_buf, &counts)?;
                    }
                }
            }
            Ok(sets)
        })
        .try_reduce(SetMap::new, |mut a, b| {
            for (w, set) in b {
                let target = a.entry(w).or_default();
                target.extend(set);
                if target.len() as u64 > max_blocks {
                    return Err(Error::BlockCapExceeded { cap: max_blocks });
                }
            }
            Ok(a)
        })?;
    Ok(sets)
}
