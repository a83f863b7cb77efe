//! The Cayley graph `Γ_{k,n} = Γ(S_n, D_{k,n})`.
//!
//! Vertices are permutations, identified by their lexicographic (Lehmer)
//! rank. `u ~ v` iff `v ∘ u⁻¹` is in the connection set, so the neighbors
//! of `u` are `s ∘ u` for `s` in the connection set.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::math::factorial_u64;
use crate::permutation::{KSubsets, LexPermutations, Permutation};

/// Largest degree for which the adjacency bitmatrix is materialized.
pub const EXPLICIT_CAP: usize = 7;
/// Largest degree for which any graph is built.
pub const IMPLICIT_CAP: usize = 8;
/// Ranks are `u64`; `20!` is the last factorial that fits.
pub const RANK_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u64);

/// Lexicographic rank of a permutation: position of its one-line form in the
/// sorted listing of `S_n`.
pub fn rank(p: &Permutation) -> Result<VertexId> {
    if p.degree() > RANK_CAP {
        return Err(Error::CapExceeded {
            n: p.degree(),
            cap: RANK_CAP,
        });
    }
    Ok(VertexId(rank_slice(p.zero_based())))
}

/// Lehmer rank of 0-based images; `img.len() <= 20`.
pub(crate) fn rank_slice(img: &[u8]) -> u64 {
    let n = img.len();
    let mut used: u32 = 0;
    let mut r = 0u64;
    for (i, &x) in img.iter().enumerate() {
        let smaller_used = (used & ((1u32 << x) - 1)).count_ones() as u64;
        r = r * (n - i) as u64 + (x as u64 - smaller_used);
        used |= 1 << x;
    }
    r
}

pub fn unrank(r: VertexId, n: usize) -> Result<Permutation> {
    if n == 0 || n > RANK_CAP {
        return Err(Error::CapExceeded { n, cap: RANK_CAP });
    }
    if r.0 >= factorial_u64(n).unwrap() {
        return Err(Error::RankOutOfRange { rank: r.0, n });
    }
    let mut buf = vec![0u8; n];
    unrank_into(r.0, &mut buf);
    Ok(Permutation::from_zero_based_unchecked(buf))
}

pub(crate) fn unrank_into(mut r: u64, out: &mut [u8]) {
    let n = out.len();
    // Lehmer digits, least significant last.
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        out[i] = (r % base) as u8;
        r /= base;
    }
    let mut avail: Vec<u8> = (0..n as u8).collect();
    for slot in out.iter_mut() {
        *slot = avail.remove(*slot as usize);
    }
}

/// An inverse-closed subset of `S_n \ {e}` with a rank-indexed membership
/// table.
#[derive(Clone, Debug)]
pub struct ConnectionSet {
    n: usize,
    members: Vec<Permutation>,
    membership: FixedBitSet,
}

impl ConnectionSet {
    /// `members` must avoid the identity and be closed under inverses.
    pub fn new(n: usize, mut members: Vec<Permutation>) -> Result<Self> {
        if n == 0 || n > IMPLICIT_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: IMPLICIT_CAP,
            });
        }
        let order = factorial_u64(n).unwrap() as usize;
        let mut membership = FixedBitSet::with_capacity(order);
        for m in &members {
            if m.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: m.degree(),
                });
            }
            if m.is_identity() {
                return Err(Error::OutOfHypotheses(
                    "connection set contains the identity".into(),
                ));
            }
            membership.insert(rank_slice(m.zero_based()) as usize);
        }
        for m in &members {
            if !membership.contains(rank_slice(m.inverse().zero_based()) as usize) {
                return Err(Error::OutOfHypotheses(alloc::format!(
                    "connection set is not inverse-closed at {m}"
                )));
            }
        }
        members.sort();
        members.dedup();
        Ok(ConnectionSet {
            n,
            members,
            membership,
        })
    }

    /// `{σ ∈ S_n : σ ≠ e, pred(σ)}`; `pred` must respect inverses.
    pub fn from_predicate(n: usize, pred: impl Fn(&Permutation) -> bool) -> Result<Self> {
        if n == 0 || n > IMPLICIT_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: IMPLICIT_CAP,
            });
        }
        let members = LexPermutations::new(n)
            .filter(|p| !p.is_identity() && pred(p))
            .collect();
        Self::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_rank(&self, r: u64) -> bool {
        self.membership.contains(r as usize)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.n && self.contains_rank(rank_slice(p.zero_based()))
    }

    /// Everything except the identity and the current members.
    pub fn complement(&self) -> ConnectionSet {
        let members = LexPermutations::new(self.n)
            .filter(|p| !p.is_identity() && !self.contains(p))
            .collect();
        Self::new(self.n, members).expect("complement of an inverse-closed set is inverse-closed")
    }

    /// `v ∘ u⁻¹ ∈ S`.
    pub fn joins(&self, u: &Permutation, v: &Permutation) -> bool {
        self.contains(&v.compose_unchecked(&u.inverse()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyMode {
    /// Triangular adjacency bitmatrix over ranks; `n <= EXPLICIT_CAP`.
    Explicit,
    /// Adjacency through connection-set membership; `n <= IMPLICIT_CAP`.
    Implicit,
    /// Explicit when allowed, implicit otherwise.
    Auto,
}

/// Strict upper triangle of a symmetric boolean matrix.
#[derive(Clone, Debug)]
struct TriangularBits {
    bits: FixedBitSet,
}

impl TriangularBits {
    fn new(vertices: usize) -> Self {
        TriangularBits {
            bits: FixedBitSet::with_capacity(vertices * vertices.saturating_sub(1) / 2),
        }
    }

    fn index(a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        hi * (hi - 1) / 2 + lo
    }

    fn set(&mut self, a: usize, b: usize) {
        self.bits.insert(Self::index(a, b));
    }

    fn get(&self, a: usize, b: usize) -> bool {
        a != b && self.bits.contains(Self::index(a, b))
    }
}

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    n: usize,
    k: usize,
    connection: ConnectionSet,
    explicit: Option<TriangularBits>,
}

/// Component summary: components are listed by their least rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub representatives: Vec<VertexId>,
    pub sizes: Vec<u64>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

impl CayleyGraph {
    /// Builds `Γ_{k,n}`. For `k > n` every non-identity permutation is a
    /// neighbor of `e` (complete graph); for `k = n` the graph is edgeless.
    pub fn new(k: usize, n: usize, mode: AdjacencyMode) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfHypotheses("k must be at least 1".into()));
        }
        let connection = ConnectionSet::from_predicate(n, |p| p.is_k_derangement(k))?;
        Self::from_connection_set(k, connection, mode)
    }

    /// A Cayley graph of `S_n` on an arbitrary connection set, labelled with `k`.
    pub fn from_connection_set(
        k: usize,
        connection: ConnectionSet,
        mode: AdjacencyMode,
    ) -> Result<Self> {
        let n = connection.n();
        let explicit = match mode {
            AdjacencyMode::Explicit if n > EXPLICIT_CAP => {
                return Err(Error::CapExceeded {
                    n,
                    cap: EXPLICIT_CAP,
                })
            }
            AdjacencyMode::Explicit => true,
            AdjacencyMode::Auto => n <= EXPLICIT_CAP,
            AdjacencyMode::Implicit => false,
        };
        let mut g = CayleyGraph {
            n,
            k,
            connection,
            explicit: None,
        };
        if explicit {
            let mut tri = TriangularBits::new(g.vertex_count() as usize);
            let mut buf = vec![0u8; n];
            for u in 0..g.vertex_count() {
                g.for_each_neighbor_rank(u, &mut buf, |v| {
                    if v > u {
                        tri.set(u as usize, v as usize);
                    }
                });
            }
            g.explicit = Some(tri);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> AdjacencyMode {
        if self.explicit.is_some() {
            AdjacencyMode::Explicit
        } else {
            AdjacencyMode::Implicit
        }
    }

    pub fn vertex_count(&self) -> u64 {
        factorial_u64(self.n).unwrap()
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.connection
    }

    /// Every vertex has this degree.
    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.vertex_count() * self.degree() as u64 / 2
    }

    pub fn adjacent(&self, u: &Permutation, v: &Permutation) -> Result<bool> {
        for p in [u, v] {
            if p.degree() != self.n {
                return Err(Error::DegreeMismatch {
                    left: self.n,
                    right: p.degree(),
                });
            }
        }
        if let Some(tri) = &self.explicit {
            let a = rank_slice(u.zero_based()) as usize;
            let b = rank_slice(v.zero_based()) as usize;
            return Ok(tri.get(a, b));
        }
        Ok(self.connection.joins(u, v))
    }

    pub fn adjacent_ranks(&self, a: VertexId, b: VertexId) -> Result<bool> {
        let total = self.vertex_count();
        for r in [a, b] {
            if r.0 >= total {
                return Err(Error::RankOutOfRange {
                    rank: r.0,
                    n: self.n,
                });
            }
        }
        if let Some(tri) = &self.explicit {
            return Ok(tri.get(a.0 as usize, b.0 as usize));
        }
        let u = unrank(a, self.n)?;
        let v = unrank(b, self.n)?;
        Ok(self.connection.joins(&u, &v))
    }

    /// Neighbors `s ∘ u` in connection-set order.
    pub fn neighbors<'a>(&'a self, u: &'a Permutation) -> impl Iterator<Item = Permutation> + 'a {
        self.connection
            .members()
            .iter()
            .map(move |s| s.compose_unchecked(u))
    }

    fn for_each_neighbor_rank(&self, u: u64, buf: &mut [u8], mut f: impl FnMut(u64)) {
        unrank_into(u, buf);
        let mut prod = vec![0u8; self.n];
        for s in self.connection.members() {
            let s = s.zero_based();
            for (dst, &x) in prod.iter_mut().zip(buf.iter()) {
                *dst = s[x as usize];
            }
            f(rank_slice(&prod));
        }
    }

    /// Sorted neighbor ranks.
    pub fn neighbor_ranks(&self, u: VertexId) -> Vec<VertexId> {
        let mut buf = vec![0u8; self.n];
        let mut out = Vec::with_capacity(self.degree());
        self.for_each_neighbor_rank(u.0, &mut buf, |v| out.push(VertexId(v)));
        out.sort_unstable();
        out
    }

    /// Breadth-first search from each unvisited vertex in rank order.
    pub fn connected_components(&self) -> Components {
        let total = self.vertex_count();
        let mut visited = FixedBitSet::with_capacity(total as usize);
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut buf = vec![0u8; self.n];
        let mut queue = VecDeque::new();
        let mut seen_total = 0u64;
        for start in 0..total {
            if visited.contains(start as usize) {
                continue;
            }
            visited.insert(start as usize);
            seen_total += 1;
            let mut size = 1u64;
            queue.clear();
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                if seen_total == total {
                    // Everything is reached; the rest of the queue adds nothing.
                    break;
                }
                self.for_each_neighbor_rank(u, &mut buf, |v| {
                    if !visited.put(v as usize) {
                        seen_total += 1;
                        size += 1;
                        queue.push_back(v);
                    }
                });
            }
            representatives.push(VertexId(start));
            sizes.push(size);
            if seen_total == total {
                break;
            }
        }
        Components {
            representatives,
            sizes,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count() == 1
    }

    /// Connected with every degree even (the graph is regular).
    pub fn is_eulerian(&self) -> bool {
        self.degree().is_multiple_of(2) && self.is_connected()
    }

    /// All edges `(u, v)` with `u < v`, sorted. Capped at `EXPLICIT_CAP`.
    pub fn edges(&self) -> Result<Vec<(VertexId, VertexId)>> {
        if self.n > EXPLICIT_CAP {
            return Err(Error::CapExceeded {
                n: self.n,
                cap: EXPLICIT_CAP,
            });
        }
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for u in 0..self.vertex_count() {
            let u = VertexId(u);
            out.extend(
                self.neighbor_ranks(u)
                    .into_iter()
                    .filter(|&v| v > u)
                    .map(|v| (u, v)),
            );
        }
        Ok(out)
    }
}

/// Adjacency through positions: `u` and `v` are adjacent iff no k-subset
/// has the same image under both.
pub fn position_agreement_adjacent(u: &Permutation, v: &Permutation, k: usize) -> Result<bool> {
    if u.degree() != v.degree() {
        return Err(Error::DegreeMismatch {
            left: u.degree(),
            right: v.degree(),
        });
    }
    Ok(first_agreeing_subset(u, v, k).is_none())
}

/// Least k-subset (lexicographically) with `u(s) = v(s)`.
pub fn first_agreeing_subset(
    u: &Permutation,
    v: &Permutation,
    k: usize,
) -> Option<crate::permutation::KSubset> {
    KSubsets::new(u.degree(), k).find(|s| {
        u.induced_image_unchecked(s.zero_based()) == v.induced_image_unchecked(s.zero_based())
    })
}

/// Which identity factors an adjacent transposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorCase {
    /// `(1 2) = c² · (c⁻² (1 2))` with `c = (1 2 ... n)`; used for `k ∈ {1, n-1}`.
    SquaredCycle,
    /// `(1 2) = c⁻¹ · (1 3 4 ... n)`; used for `2 <= k <= n-2`.
    InverseCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub first: Permutation,
    pub second: Permutation,
    pub case: FactorCase,
}

/// Writes `(h h+1)` as `first ∘ second` with both factors k-derangements.
///
/// Requires `n > 3`, `1 <= k < n`, `1 <= h < n`. The identity is built for
/// `(1 2)` and relabeled along `c^{h-1}`, which sends 1 to h and 2 to h+1.
pub fn factor_adjacent_transposition(n: usize, k: usize, h: usize) -> Result<Factorization> {
    if n <= 3 || k == 0 || k >= n || h == 0 || h >= n {
        return Err(Error::OutOfHypotheses(alloc::format!(
            "factorization needs n > 3, 1 <= k < n, 1 <= h < n; got n = {n}, k = {k}, h = {h}"
        )));
    }
    let full: Vec<usize> = (1..=n).collect();
    let c = Permutation::cycle(n, &full)?;
    let (first, second, case) = if k == 1 || k == n - 1 {
        let swap = Permutation::transposition(n, 1, 2)?;
        let sq = c.pow(2);
        let second = sq.inverse().compose(&swap)?;
        (sq, second, FactorCase::SquaredCycle)
    } else {
        let mut tail = alloc::vec![1];
        tail.extend(3..=n);
        (
            c.inverse(),
            Permutation::cycle(n, &tail)?,
            FactorCase::InverseCycle,
        )
    };
    let relabel = c.pow((h - 1) as u32);
    Ok(Factorization {
        first: first.conjugate_by(&relabel)?,
        second: second.conjugate_by(&relabel)?,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, Some(n)).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Permutation::identity(5)).unwrap(), VertexId(0));
        let last = Permutation::from_one_line(&[5, 4, 3, 2, 1]).unwrap();
        assert_eq!(rank(&last).unwrap(), VertexId(119));
        for (i, p) in LexPermutations::new(5).enumerate() {
            assert_eq!(rank(&p).unwrap(), VertexId(i as u64));
            assert_eq!(unrank(VertexId(i as u64), 5).unwrap(), p);
        }
        assert!(unrank(VertexId(120), 5).is_err());
        assert!(unrank(VertexId(0), 21).is_err());
    }

    #[test]
    fn adjacency_examples() {
        let g = CayleyGraph::new(2, 5, AdjacencyMode::Implicit).unwrap();
        let u = Permutation::from_one_line(&[2, 3, 1, 4, 5]).unwrap();
        let v = Permutation::from_one_line(&[4, 1, 3, 5, 2]).unwrap();
        assert!(!g.adjacent(&u, &v).unwrap());
        assert!(!position_agreement_adjacent(&u, &v, 2).unwrap());
        assert!(!g.adjacent(&u, &u).unwrap());

        let g4 = CayleyGraph::new(2, 4, AdjacencyMode::Explicit).unwrap();
        let e = Permutation::identity(4);
        let c = cyc("(1 2 3 4)", 4);
        assert!(g4.adjacent(&e, &c).unwrap());
        assert!(position_agreement_adjacent(&e, &c, 2).unwrap());
        for s in LexPermutations::new(4) {
            assert_eq!(g4.adjacent(&e, &s).unwrap(), s.is_k_derangement(2));
        }
        assert!(g4.adjacent(&e, &Permutation::identity(5)).is_err());
    }

    #[test]
    fn agreeing_subset_witness() {
        let e = Permutation::identity(4);
        let v = cyc("(1 2)(3 4)", 4);
        assert_eq!(
            first_agreeing_subset(&e, &v, 2).unwrap().points(),
            alloc::vec![1, 2]
        );
    }

    #[test]
    fn components_examples() {
        let g = CayleyGraph::new(2, 3, AdjacencyMode::Auto).unwrap();
        let c = g.connected_components();
        assert_eq!(c.count(), 2);
        assert_eq!(c.sizes, alloc::vec![3, 3]);
        assert_eq!(
            CayleyGraph::new(1, 2, AdjacencyMode::Auto)
                .unwrap()
                .connected_components()
                .count(),
            1
        );
        assert_eq!(
            CayleyGraph::new(2, 5, AdjacencyMode::Implicit)
                .unwrap()
                .connected_components()
                .count(),
            1
        );
        // k = n: edgeless, one component per vertex
        assert_eq!(
            CayleyGraph::new(3, 3, AdjacencyMode::Auto)
                .unwrap()
                .connected_components()
                .count(),
            6
        );
    }

    #[test]
    fn eulerian_examples() {
        assert!(CayleyGraph::new(2, 4, AdjacencyMode::Auto)
            .unwrap()
            .is_eulerian());
        assert!(!CayleyGraph::new(1, 4, AdjacencyMode::Auto)
            .unwrap()
            .is_eulerian());
        assert!(!CayleyGraph::new(2, 3, AdjacencyMode::Auto)
            .unwrap()
            .is_eulerian());
    }

    #[test]
    fn degenerate_k() {
        let complete = CayleyGraph::new(5, 3, AdjacencyMode::Auto).unwrap();
        assert_eq!(complete.degree(), 5);
        assert_eq!(complete.edge_count(), 15);
        let empty = CayleyGraph::new(3, 3, AdjacencyMode::Auto).unwrap();
        assert_eq!(empty.edges().unwrap().len(), 0);
        assert!(CayleyGraph::new(0, 3, AdjacencyMode::Auto).is_err());
        assert!(CayleyGraph::new(2, 8, AdjacencyMode::Explicit).is_err());
        assert!(CayleyGraph::new(2, 9, AdjacencyMode::Implicit).is_err());
    }

    #[test]
    fn edge_counts() {
        let g = CayleyGraph::new(2, 3, AdjacencyMode::Auto).unwrap();
        assert_eq!((g.vertex_count(), g.edges().unwrap().len()), (6, 6));
        let g = CayleyGraph::new(1, 2, AdjacencyMode::Auto).unwrap();
        assert_eq!((g.vertex_count(), g.edges().unwrap().len()), (2, 1));
        let g = CayleyGraph::new(2, 4, AdjacencyMode::Auto).unwrap();
        assert_eq!((g.vertex_count(), g.edges().unwrap().len()), (24, 168));
    }

    #[test]
    fn factorization_examples() {
        let f = factor_adjacent_transposition(4, 2, 1).unwrap();
        assert_eq!(f.case, FactorCase::InverseCycle);
        assert_eq!(f.first, cyc("(1 4 3 2)", 4));
        assert_eq!(f.second, cyc("(1 3 4)", 4));
        assert_eq!(f.first.compose(&f.second).unwrap(), cyc("(1 2)", 4));

        let f = factor_adjacent_transposition(4, 1, 1).unwrap();
        assert_eq!(f.case, FactorCase::SquaredCycle);
        assert_eq!(f.first, cyc("(1 3)(2 4)", 4));
        let expected_second = cyc("(4 3 2 1)", 4)
            .pow(2)
            .compose(&cyc("(1 2)", 4))
            .unwrap();
        assert_eq!(f.second, expected_second);
        assert!(f.first.is_k_derangement(1) && f.second.is_k_derangement(1));

        assert!(factor_adjacent_transposition(3, 1, 1).is_err());
        assert!(factor_adjacent_transposition(5, 5, 1).is_err());
        assert!(factor_adjacent_transposition(5, 2, 5).is_err());
    }

    #[test]
    fn relabeled_factorization() {
        let f = factor_adjacent_transposition(6, 3, 4).unwrap();
        assert_eq!(f.first.compose(&f.second).unwrap(), cyc("(4 5)", 6));
        assert!(f.first.is_k_derangement(3) && f.second.is_k_derangement(3));
    }

    #[test]
    fn connection_set_validation() {
        let c3 = cyc("(1 2 3)", 3);
        assert!(ConnectionSet::new(3, alloc::vec![c3.clone()]).is_err());
        assert!(ConnectionSet::new(3, alloc::vec![c3.clone(), c3.inverse()]).is_ok());
        assert!(ConnectionSet::new(3, alloc::vec![Permutation::identity(3)]).is_err());
        let d = ConnectionSet::from_predicate(4, |p| p.is_k_derangement(2)).unwrap();
        assert_eq!(d.len(), 14);
        assert_eq!(d.complement().len(), 24 - 1 - 14);
    }
}
