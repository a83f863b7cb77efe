//! Integer partitions, conjugacy-class sizes and exact k-derangement counts.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::math::factorial;
use crate::permutation::{has_subpartition, CycleType, LexPermutations, Permutation};

/// A partition of `n`; identical in shape to a cycle type.
pub type PartitionOfN = CycleType;

pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// One row of the cycle-type table for `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClassReport {
    pub cycle_type: PartitionOfN,
    pub class_size: BigUint,
    pub is_derangement_type: bool,
}

/// All partitions of `n` in reverse-lexicographic order (`{n}` first,
/// `{1,...,1}` last). Empty for `n = 0`.
pub fn partitions(n: usize) -> Vec<PartitionOfN> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut parts = alloc::vec![n];
    loop {
        out.push(CycleType::from_parts_unchecked(parts.clone()));
        // Rightmost part above 1; everything after it is a run of ones.
        let Some(i) = parts.iter().rposition(|&p| p > 1) else {
            break;
        };
        let ones = parts.len() - i - 1;
        let v = parts[i] - 1;
        parts.truncate(i);
        parts.push(v);
        let mut rest = ones + 1;
        while rest > 0 {
            let q = rest.min(v);
            parts.push(q);
            rest -= q;
        }
    }
    out
}

/// Number of permutations of `S_n` with the given cycle type:
/// `n! / ∏ (i^{m_i} · m_i!)`.
pub fn class_size(r: &PartitionOfN) -> BigUint {
    let mut denom = BigUint::one();
    for (len, mult) in r.multiplicities() {
        denom *= BigUint::from(len as u64).pow(mult as u32);
        denom *= factorial(mult);
    }
    factorial(r.n()) / denom
}

pub fn is_derangement_type(r: &PartitionOfN, k: usize) -> bool {
    !has_subpartition(r.parts(), k)
}

/// The cycle types of k-derangements in `S_n`.
pub fn deranged_cycle_types(k: usize, n: usize) -> Vec<PartitionOfN> {
    partitions(n)
        .into_iter()
        .filter(|r| is_derangement_type(r, k))
        .collect()
}

pub fn cycle_class_reports(k: usize, n: usize) -> Vec<CycleClassReport> {
    partitions(n)
        .into_iter()
        .map(|r| CycleClassReport {
            class_size: class_size(&r),
            is_derangement_type: is_derangement_type(&r, k),
            cycle_type: r,
        })
        .collect()
}

/// `D_k(n)`, summed over derangement cycle types.
pub fn count_k_derangements(k: usize, n: usize) -> BigUint {
    deranged_cycle_types(k, n).iter().map(class_size).sum()
}

/// The k-derangements of `S_n` in lexicographic one-line order, for
/// `n <= DEFAULT_ENUMERATION_CAP`.
pub fn enumerate_k_derangements(k: usize, n: usize) -> Result<Vec<Permutation>> {
    enumerate_k_derangements_capped(k, n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_k_derangements_capped(k: usize, n: usize, cap: usize) -> Result<Vec<Permutation>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    Ok(LexPermutations::new(n)
        .filter(|p| p.is_k_derangement(k))
        .collect())
}

/// Parity law for `Γ_{k,n}`: Eulerian iff `k` is even or both `k` and `n`
/// are odd. Only defined for `n > 3` and `1 <= k < n`.
pub fn predict_eulerian(k: usize, n: usize) -> Result<bool> {
    if n <= 3 || k == 0 || k >= n {
        return Err(Error::OutOfHypotheses(alloc::format!(
            "Eulerian law needs n > 3 and 1 <= k < n, got n = {n}, k = {k}"
        )));
    }
    Ok(k.is_multiple_of(2) || n % 2 == 1)
}
