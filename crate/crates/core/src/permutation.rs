//! Permutations of `{1, ..., n}`, their induced action on k-subsets, and the
//! two k-derangement predicates.
//!
//! Points are 1-based at every public boundary and 0-based in storage.
//! `compose(a, b)` applies `b` first: `compose(a, b)(i) = a(b(i))`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 255;

/// A permutation in one-line form.
///
/// Position `i` of the one-line array holds the image of point `i`, so the
/// arrangement `[2, 3, 1, 4, 5]` is used verbatim as a value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    img: Vec<u8>,
}

impl Permutation {
    /// Panics if `n` is 0 or above [`MAX_DEGREE`].
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
        Permutation {
            img: (0..n as u8).collect(),
        }
    }

    /// Builds from a 1-based one-line array.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        check_degree(n)?;
        let mut img = Vec::with_capacity(n);
        for &x in one_line {
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: alloc::format!("entry {x} out of range"),
                });
            }
            img.push((x - 1) as u8);
        }
        Self::from_zero_based(img)
    }

    /// Builds from 0-based images, validating bijectivity.
    pub fn from_zero_based(img: Vec<u8>) -> Result<Self> {
        let n = img.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        for &x in &img {
            let x = x as usize;
            if x >= n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: alloc::format!("entry {} out of range", x + 1),
                });
            }
            if core::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: alloc::format!("entry {} repeated", x + 1),
                });
            }
        }
        Ok(Permutation { img })
    }

    pub(crate) fn from_zero_based_unchecked(img: Vec<u8>) -> Self {
        debug_assert!(Self::from_zero_based(img.clone()).is_ok());
        Permutation { img }
    }

    /// Builds from disjoint cycles given as 1-based point lists.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        check_degree(n)?;
        let mut img: Vec<u8> = (0..n as u8).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(Error::PointOutOfRange { point: a, n });
                }
                if core::mem::replace(&mut touched[a - 1], true) {
                    return Err(Error::InvalidPermutation {
                        n,
                        reason: alloc::format!("point {a} appears in two cycles"),
                    });
                }
                let b = cycle[(i + 1) % cycle.len()];
                img[a - 1] = (b - 1) as u8;
            }
        }
        Ok(Permutation { img })
    }

    /// A single cycle `(points[0] points[1] ...)` in `S_n`.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        Self::from_cycles(n, &[points])
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPermutation {
                n,
                reason: "transposition needs two distinct points".to_string(),
            });
        }
        Self::from_cycles(n, &[&[a, b]])
    }

    /// Parses cycle notation such as `"(1 2 3)(4)"` or `"(1,2)(3,4)"`.
    ///
    /// Without an explicit degree, `n` is the largest point mentioned.
    /// `"()"` and `"e"` denote the identity (and then need an explicit `n`
    /// unless other points are mentioned).
    pub fn parse_cycles(text: &str, n: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        if text != "e" {
            let mut rest = text;
            while !rest.is_empty() {
                rest = rest.trim_start();
                if rest.is_empty() {
                    break;
                }
                let body = rest
                    .strip_prefix('(')
                    .ok_or_else(|| Error::Parse(alloc::format!("expected '(' in {text:?}")))?;
                let close = body
                    .find(')')
                    .ok_or_else(|| Error::Parse(alloc::format!("unclosed cycle in {text:?}")))?;
                let mut cycle = Vec::new();
                for tok in body[..close]
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                {
                    let point: usize = tok
                        .parse()
                        .map_err(|_| Error::Parse(alloc::format!("bad point {tok:?}")))?;
                    cycle.push(point);
                }
                cycles.push(cycle);
                rest = &body[close + 1..];
            }
        }
        let max_point = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = match n {
            Some(n) if n < max_point => {
                return Err(Error::PointOutOfRange {
                    point: max_point,
                    n,
                })
            }
            Some(n) => n,
            None if max_point == 0 => {
                return Err(Error::Parse(
                    "identity needs an explicit degree".to_string(),
                ))
            }
            None => max_point,
        };
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(n, &refs)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of a 1-based point. Panics when out of range.
    pub fn image(&self, point: usize) -> usize {
        self.img[point - 1] as usize + 1
    }

    pub fn zero_based(&self) -> &[u8] {
        &self.img
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { img: inv }
    }

    pub fn pow(&self, exp: u32) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..exp {
            acc = self.compose_unchecked(&acc);
        }
        acc
    }

    /// `by ∘ self ∘ by⁻¹`, the relabeling of `self` along `by`.
    pub fn conjugate_by(&self, by: &Permutation) -> Result<Permutation> {
        Ok(by.compose(self)?.compose_unchecked(&by.inverse()))
    }

    /// Disjoint cycles, fixed points included, each starting at its least
    /// point and listed by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.img[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let parts = self.cycles().iter().map(Vec::len).collect();
        CycleType::from_parts_unchecked(parts)
    }

    /// `σ_(k)(s) = {σ(a) : a ∈ s}`.
    pub fn induced_image(&self, subset: &KSubset) -> Result<KSubset> {
        if let Some(&last) = subset.elems.last() {
            if last as usize >= self.degree() {
                return Err(Error::PointOutOfRange {
                    point: last as usize + 1,
                    n: self.degree(),
                });
            }
        }
        Ok(self.induced_image_unchecked(&subset.elems))
    }

    pub(crate) fn induced_image_unchecked(&self, elems: &[u8]) -> KSubset {
        let mut out: Vec<u8> = elems.iter().map(|&a| self.img[a as usize]).collect();
        out.sort_unstable();
        KSubset { elems: out }
    }

    fn fixes_setwise(&self, elems: &[u8]) -> bool {
        // elems is sorted, so membership is a binary search.
        elems
            .iter()
            .all(|&a| elems.binary_search(&self.img[a as usize]).is_ok())
    }

    /// k-derangement test straight from the definition: no k-subset is
    /// mapped onto itself. Vacuously true for `k > n`.
    pub fn is_k_derangement_direct(&self, k: usize) -> bool {
        let n = self.degree();
        if k > n {
            return true;
        }
        !KSubsets::new(n, k).any(|s| self.fixes_setwise(&s.elems))
    }

    /// k-derangement test through the cycle type: true iff no sub-multiset
    /// of cycle lengths sums to `k`.
    pub fn is_k_derangement(&self, k: usize) -> bool {
        !has_subpartition(self.cycle_type().parts(), k)
    }
}

fn check_degree(n: usize) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree(n))
    }
}

/// Cycle notation without fixed points; `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// An unordered k-subset of `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KSubset {
    elems: Vec<u8>,
}

impl KSubset {
    /// From 1-based points in any order; duplicates are rejected.
    pub fn new(points: &[usize]) -> Result<Self> {
        let mut elems = Vec::with_capacity(points.len());
        for &p in points {
            if p == 0 || p > MAX_DEGREE {
                return Err(Error::InvalidSubset(alloc::format!(
                    "point {p} out of range"
                )));
            }
            elems.push((p - 1) as u8);
        }
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("repeated point".to_string()));
        }
        Ok(KSubset { elems })
    }

    /// `{1, ..., k}`.
    pub fn initial(k: usize) -> Self {
        KSubset {
            elems: (0..k as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn points(&self) -> Vec<usize> {
        self.elems.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn zero_based(&self) -> &[u8] {
        &self.elems
    }

    /// Position of this subset in the lexicographic listing of all
    /// `len()`-subsets of `{1, ..., n}`.
    pub fn lex_index(&self, n: usize) -> u64 {
        let k = self.elems.len();
        let mut index = 0u64;
        let mut prev = 0usize;
        for (i, &e) in self.elems.iter().enumerate() {
            for skipped in prev..e as usize {
                index += crate::math::binomial_u64(n - skipped - 1, k - i - 1).unwrap_or(0);
            }
            prev = e as usize + 1;
        }
        index
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// All k-subsets of `{1, ..., n}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct KSubsets {
    n: usize,
    current: Option<Vec<u8>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k as u8).collect());
        KSubsets { n, current }
    }
}

impl Iterator for KSubsets {
    type Item = KSubset;

    fn next(&mut self) -> Option<KSubset> {
        let cur = self.current.as_mut()?;
        let out = KSubset { elems: cur.clone() };
        let k = cur.len();
        let n = self.n;
        match (0..k).rev().find(|&i| (cur[i] as usize) < n - k + i) {
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Multiset of cycle lengths, stored non-increasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    /// Sorts `parts`; rejects zeros and the empty multiset.
    pub fn from_parts(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidPermutation {
                n: parts.iter().sum(),
                reason: "cycle lengths must be positive and non-empty".to_string(),
            });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub(crate) fn from_parts_unchecked(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(length, multiplicity)` pairs, longest first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((len, m)) if *len == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `3+1+1` style rendering.
    pub fn to_plus_string(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            s.push_str(&p.to_string());
        }
        s
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Whether some sub-multiset of `parts` sums to exactly `k`.
///
/// 0/1 subset-sum over a table of `k + 1` booleans; each part is one item,
/// so multiplicities are honored.
pub fn has_subpartition(parts: &[usize], k: usize) -> bool {
    let mut reachable = vec![false; k + 1];
    reachable[0] = true;
    for &p in parts {
        if p > k {
            continue;
        }
        for s in (p..=k).rev() {
            if reachable[s - p] {
                reachable[s] = true;
            }
        }
        if reachable[k] {
            return true;
        }
    }
    reachable[k]
}

/// Iterates `S_n` in lexicographic one-line order.
#[derive(Clone, Debug)]
pub struct LexPermutations {
    current: Option<Vec<u8>>,
}

impl LexPermutations {
    pub fn new(n: usize) -> Self {
        LexPermutations {
            current: Some((0..n as u8).collect()),
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.as_mut()?;
        let out = Permutation { img: cur.clone() };
        if !next_lex(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_lex(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}
