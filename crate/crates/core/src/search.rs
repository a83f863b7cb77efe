//! Exact and heuristic clique search on Cayley graphs of `S_n`.
//!
//! The exact solver is a bitset branch-and-bound with greedy-coloring upper
//! bounds. On a Cayley graph `Γ(S_n, S)` with `S` closed under inverses and
//! conjugation it uses two symmetry reductions:
//!
//! * left translation is transitive on vertices, so some maximum clique
//!   contains the identity and the rest of it lies inside `S`;
//! * conjugation fixes the identity and permutes each conjugacy class inside
//!   `S` transitively, so the second vertex can be taken from a fixed
//!   representative of each class.
//!
//! `ω = 2 + max over class representatives r of ω(S ∩ N(r))` when `S` is
//! non-empty. Both steps are cross-checked against an unreduced search.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{rank_slice, CayleyGraph, ConnectionSet};
use crate::constructions::{CliqueCertificate, IndependentSetCertificate, Provenance};
use crate::error::{Error, Result};
use crate::math::binomial_u64;
use crate::permutation::{LexPermutations, Permutation};

/// Independent-set search is exact only up to this degree.
pub const EXACT_INDEPENDENT_CAP: usize = 5;

/// The clock is polled once per this many nodes.
const CLOCK_STRIDE: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    LowerBoundOnly,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub mode: SearchMode,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_seconds: 300.0,
            mode: SearchMode::Exact,
        }
    }
}

/// Elapsed wall time, supplied by the caller.
pub trait Clock {
    fn elapsed_seconds(&self) -> f64;
}

/// A clock that never advances; budgets then count nodes only.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_seconds(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Clique(CliqueCertificate),
    IndependentSet(IndependentSetCertificate),
}

impl Witness {
    pub fn members(&self) -> &[Permutation] {
        match self {
            Witness::Clique(c) => &c.members,
            Witness::IndependentSet(c) => &c.members,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub best_size: usize,
    pub witness: Witness,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
}

/// Tracks node and time limits across every subproblem of one search.
struct Limits<'a> {
    budget: SearchBudget,
    clock: &'a dyn Clock,
    nodes: u64,
    aborted: bool,
}

impl Limits<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes.is_multiple_of(CLOCK_STRIDE)
                && self.clock.elapsed_seconds() > self.budget.max_seconds)
        {
            self.aborted = true;
        }
        !self.aborted
    }
}

/// Dense graph on `0..len` as adjacency rows.
struct BitGraph {
    adj: Vec<FixedBitSet>,
}

impl BitGraph {
    fn from_fn(len: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = vec![FixedBitSet::with_capacity(len); len];
        for i in 0..len {
            for j in i + 1..len {
                if edge(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        BitGraph { adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Vertices by non-increasing degree, ties by index; returns the graph
    /// relabeled in that order and the map new → old.
    fn degree_ordered(&self) -> (BitGraph, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (core::cmp::Reverse(self.adj[v].count_ones(..)), v));
        let relabeled = BitGraph::from_fn(self.len(), |i, j| self.adj[order[i]].contains(order[j]));
        (relabeled, order)
    }
}

/// Branch and bound over one `BitGraph`; finds a clique larger than
/// `floor` if one exists.
struct CliqueSearch<'g> {
    graph: &'g BitGraph,
    current: Vec<usize>,
    best: Option<Vec<usize>>,
    floor: usize,
}

impl CliqueSearch<'_> {
    fn run(graph: &BitGraph, floor: usize, limits: &mut Limits<'_>) -> Option<Vec<usize>> {
        let mut search = CliqueSearch {
            graph,
            current: Vec::new(),
            best: None,
            floor,
        };
        let mut all = FixedBitSet::with_capacity(graph.len());
        all.insert_range(..);
        if graph.len() > floor {
            search.expand(all, limits);
        }
        search.best
    }

    fn expand(&mut self, mut candidates: FixedBitSet, limits: &mut Limits<'_>) {
        if !limits.tick() {
            return;
        }
        // Greedy sequential coloring in index order.
        let mut ordered: Vec<(usize, usize)> = Vec::with_capacity(candidates.count_ones(..));
        let mut uncolored = candidates.clone();
        let mut color = 0;
        while uncolored.count_ones(..) > 0 {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.minimum() {
                class.set(v, false);
                uncolored.set(v, false);
                class.difference_with(&self.graph.adj[v]);
                ordered.push((v, color));
            }
        }
        for &(v, bound) in ordered.iter().rev() {
            if self.current.len() + bound <= self.floor {
                return;
            }
            self.current.push(v);
            let mut next = candidates.clone();
            next.intersect_with(&self.graph.adj[v]);
            if next.count_ones(..) == 0 {
                if self.current.len() > self.floor {
                    self.floor = self.current.len();
                    self.best = Some(self.current.clone());
                }
            } else {
                self.expand(next, limits);
            }
            self.current.pop();
            candidates.set(v, false);
            if limits.aborted {
                return;
            }
        }
    }
}

/// Maximum clique in the graph induced on `vertices`, larger than `floor`.
fn clique_among(
    connection: &ConnectionSet,
    vertices: &[Permutation],
    floor: usize,
    limits: &mut Limits<'_>,
) -> Option<Vec<Permutation>> {
    let inverses: Vec<Permutation> = vertices.iter().map(Permutation::inverse).collect();
    let graph = BitGraph::from_fn(vertices.len(), |i, j| {
        connection.contains_rank(rank_slice(
            vertices[j].compose_unchecked(&inverses[i]).zero_based(),
        ))
    });
    let (ordered, map) = graph.degree_ordered();
    CliqueSearch::run(&ordered, floor, limits).map(|found| {
        found
            .into_iter()
            .map(|i| vertices[map[i]].clone())
            .collect()
    })
}

/// Least-rank member of each conjugacy class inside the connection set,
/// by increasing rank.
fn class_representatives(connection: &ConnectionSet) -> Vec<Permutation> {
    let mut reps: Vec<Permutation> = Vec::new();
    let mut seen_types = Vec::new();
    // members() is sorted, so the first member of each cycle type is least.
    for s in connection.members() {
        let t = s.cycle_type();
        if !seen_types.contains(&t) {
            seen_types.push(t);
            reps.push(s.clone());
        }
    }
    reps
}

struct Outcome {
    members: Vec<Permutation>,
    proven_optimal: bool,
    nodes: u64,
}

/// Maximum clique of `Γ(S_n, S)` using both symmetry reductions. `seed`
/// must already be a clique; it is the incumbent to beat.
fn reduced_max_clique(
    connection: &ConnectionSet,
    seed: Vec<Permutation>,
    upper_bound: Option<usize>,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Outcome {
    let n = connection.n();
    let mut limits = Limits {
        budget,
        clock,
        nodes: 0,
        aborted: false,
    };
    let mut best = seed;
    let identity = Permutation::identity(n);
    if best.is_empty() {
        best.push(identity.clone());
    }
    let reached_bound = |size: usize| upper_bound.is_some_and(|b| size >= b);
    for rep in class_representatives(connection) {
        if reached_bound(best.len()) || limits.aborted {
            break;
        }
        if best.len() < 2 {
            best = vec![identity.clone(), rep.clone()];
        }
        let rep_inv = rep.inverse();
        let common: Vec<Permutation> = connection
            .members()
            .iter()
            .filter(|t| connection.contains(&t.compose_unchecked(&rep_inv)))
            .cloned()
            .collect();
        if let Some(found) = clique_among(
            connection,
            &common,
            best.len().saturating_sub(2),
            &mut limits,
        ) {
            let mut members = vec![identity.clone(), rep.clone()];
            members.extend(found);
            best = members;
        }
    }
    let proven_optimal = !limits.aborted || reached_bound(best.len());
    Outcome {
        members: best,
        proven_optimal,
        nodes: limits.nodes,
    }
}

fn check_seed(connection: &ConnectionSet, seed: &[Permutation]) -> Result<()> {
    for (i, u) in seed.iter().enumerate() {
        if u.degree() != connection.n() {
            return Err(Error::DegreeMismatch {
                left: connection.n(),
                right: u.degree(),
            });
        }
        for v in &seed[i + 1..] {
            if !connection.joins(u, v) {
                return Err(Error::OutOfHypotheses(alloc::format!(
                    "seed members {u} and {v} are not adjacent"
                )));
            }
        }
    }
    Ok(())
}

fn subset_bound(g: &CayleyGraph) -> Option<usize> {
    // ω <= C(n,k) holds for k < n.
    (g.k() < g.n())
        .then(|| binomial_u64(g.n(), g.k()))
        .flatten()
        .map(|b| b as usize)
}

fn search_provenance(method: &str, proven_optimal: bool, nodes_explored: u64) -> Provenance {
    Provenance::Search {
        method: String::from(method),
        proven_optimal,
        nodes_explored,
    }
}

/// Maximum clique of `Γ_{k,n}`.
pub fn max_clique(
    g: &CayleyGraph,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<SearchResult> {
    max_clique_seeded(g, &[], budget, clock)
}

/// Maximum clique with a verified clique as the starting incumbent.
pub fn max_clique_seeded(
    g: &CayleyGraph,
    seed: &[Permutation],
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<SearchResult> {
    check_seed(g.connection_set(), seed)?;
    let bound = subset_bound(g);
    if budget.mode == SearchMode::LowerBoundOnly {
        let cert = grow_clique_heuristic(g, seed, budget, clock, DEFAULT_HEURISTIC_SEED)?;
        let nodes = match cert.provenance {
            Provenance::Search { nodes_explored, .. } => nodes_explored,
            _ => 0,
        };
        let proven = bound.is_some_and(|b| cert.members.len() >= b);
        return Ok(clique_result(
            g,
            cert.members,
            proven,
            nodes,
            "greedy-local",
        ));
    }
    let out = reduced_max_clique(g.connection_set(), seed.to_vec(), bound, budget, clock);
    Ok(clique_result(
        g,
        out.members,
        out.proven_optimal,
        out.nodes,
        "branch-and-bound",
    ))
}

fn clique_result(
    g: &CayleyGraph,
    members: Vec<Permutation>,
    proven_optimal: bool,
    nodes: u64,
    method: &str,
) -> SearchResult {
    SearchResult {
        best_size: members.len(),
        witness: Witness::Clique(CliqueCertificate {
            n: g.n(),
            k: g.k(),
            members,
            provenance: search_provenance(method, proven_optimal, nodes),
        }),
        proven_optimal,
        nodes_explored: nodes,
    }
}

/// Exact search over the whole vertex set without symmetry reduction; only
/// meant as a cross-check on small graphs.
pub fn max_clique_unreduced(
    g: &CayleyGraph,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<SearchResult> {
    let mut limits = Limits {
        budget,
        clock,
        nodes: 0,
        aborted: false,
    };
    let vertices: Vec<Permutation> = LexPermutations::new(g.n()).collect();
    let members = clique_among(g.connection_set(), &vertices, 0, &mut limits).unwrap_or_default();
    Ok(clique_result(
        g,
        members,
        !limits.aborted,
        limits.nodes,
        "unreduced",
    ))
}

/// Maximum independent set of `Γ_{k,n}`, as a maximum clique of the
/// complementary Cayley graph. Exact mode needs `n <= 5`.
pub fn max_independent_set(
    g: &CayleyGraph,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<SearchResult> {
    let n = g.n();
    if budget.mode == SearchMode::Exact && n > EXACT_INDEPENDENT_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: EXACT_INDEPENDENT_CAP,
        });
    }
    let complement = g.connection_set().complement();
    let (members, proven, nodes) = match budget.mode {
        SearchMode::Exact => {
            let out = reduced_max_clique(&complement, Vec::new(), None, budget, clock);
            (out.members, out.proven_optimal, out.nodes)
        }
        SearchMode::LowerBoundOnly => {
            let (members, nodes) = local_search(
                &complement,
                &[],
                budget,
                clock,
                DEFAULT_HEURISTIC_SEED,
                None,
            )?;
            (members, false, nodes)
        }
    };
    Ok(SearchResult {
        best_size: members.len(),
        witness: Witness::IndependentSet(IndependentSetCertificate {
            n,
            k: g.k(),
            members,
            provenance: search_provenance("complement-clique", proven, nodes),
        }),
        proven_optimal: proven,
        nodes_explored: nodes,
    })
}

pub const DEFAULT_HEURISTIC_SEED: u64 = 0x005E_ED0F_D3A7;

/// Grows `seed` (a clique, possibly empty) by greedy insertion and
/// one-swap local search inside the common neighborhood of the seed.
///
/// An empty seed starts from the identity. Seed members are never removed,
/// so the result is at least as large as the seed. Runs until the node
/// budget or clock runs out, or no improvement is seen for a while.
pub fn grow_clique_heuristic(
    g: &CayleyGraph,
    seed: &[Permutation],
    budget: SearchBudget,
    clock: &dyn Clock,
    rng_seed: u64,
) -> Result<CliqueCertificate> {
    let (members, nodes) = local_search(
        g.connection_set(),
        seed,
        budget,
        clock,
        rng_seed,
        subset_bound(g),
    )?;
    Ok(CliqueCertificate {
        n: g.n(),
        k: g.k(),
        members,
        provenance: search_provenance("greedy-local", false, nodes),
    })
}

fn local_search(
    connection: &ConnectionSet,
    seed: &[Permutation],
    budget: SearchBudget,
    clock: &dyn Clock,
    rng_seed: u64,
    target: Option<usize>,
) -> Result<(Vec<Permutation>, u64)> {
    check_seed(connection, seed)?;
    let fixed: Vec<Permutation> = if seed.is_empty() {
        vec![Permutation::identity(connection.n())]
    } else {
        seed.to_vec()
    };
    // Vertices adjacent to every fixed member; any extension lives here.
    let anchor = &fixed[0];
    let pool: Vec<Permutation> = connection
        .members()
        .iter()
        .map(|s| s.compose_unchecked(anchor))
        .filter(|v| fixed.iter().all(|f| connection.joins(f, v)))
        .collect();
    let inverses: Vec<Permutation> = pool.iter().map(Permutation::inverse).collect();
    let graph = BitGraph::from_fn(pool.len(), |i, j| {
        connection.contains_rank(rank_slice(
            pool[j].compose_unchecked(&inverses[i]).zero_based(),
        ))
    });
    let m = pool.len();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut limits = Limits {
        budget,
        clock,
        nodes: 0,
        aborted: false,
    };

    let stall_limit = 10_000 + 50 * m as u64;
    let tabu_tenure = 7u64;
    // missing[v]: members of the current clique not adjacent to v.
    let mut in_clique = vec![false; m];
    let mut missing = vec![0usize; m];
    let mut clique: Vec<usize> = Vec::new();
    let mut tabu_until = vec![0u64; m];
    let mut best: Vec<usize> = Vec::new();
    let mut since_improvement = 0u64;
    let target_extra = target.map(|t| t.saturating_sub(fixed.len()));

    let add = |v: usize, clique: &mut Vec<usize>, in_clique: &mut [bool], missing: &mut [usize]| {
        clique.push(v);
        in_clique[v] = true;
        for (u, miss) in missing.iter_mut().enumerate() {
            if u != v && !graph.adj[v].contains(u) {
                *miss += 1;
            }
        }
    };
    let remove =
        |v: usize, clique: &mut Vec<usize>, in_clique: &mut [bool], missing: &mut [usize]| {
            clique.retain(|&x| x != v);
            in_clique[v] = false;
            for (u, miss) in missing.iter_mut().enumerate() {
                if u != v && !graph.adj[v].contains(u) {
                    *miss -= 1;
                }
            }
        };

    while m > 0 && limits.tick() && since_improvement < stall_limit {
        let step = limits.nodes;
        let addable: Vec<usize> = (0..m)
            .filter(|&v| !in_clique[v] && missing[v] == 0)
            .collect();
        if !addable.is_empty() {
            // Prefer the vertex that keeps the most vertices addable.
            let mut addable_bits = FixedBitSet::with_capacity(m);
            addable.iter().for_each(|&v| addable_bits.insert(v));
            let scores: Vec<usize> = addable
                .iter()
                .map(|&v| graph.adj[v].intersection_count(&addable_bits))
                .collect();
            let top = *scores.iter().max().unwrap();
            let ties: Vec<usize> = addable
                .iter()
                .zip(&scores)
                .filter(|&(_, &sc)| sc == top)
                .map(|(&v, _)| v)
                .collect();
            let v = ties[rng.random_range(0..ties.len())];
            add(v, &mut clique, &mut in_clique, &mut missing);
        } else {
            let swaps: Vec<usize> = (0..m)
                .filter(|&v| !in_clique[v] && missing[v] == 1 && tabu_until[v] <= step)
                .collect();
            if !swaps.is_empty() {
                let v = swaps[rng.random_range(0..swaps.len())];
                let out = *clique.iter().find(|&&c| !graph.adj[v].contains(c)).unwrap();
                remove(out, &mut clique, &mut in_clique, &mut missing);
                tabu_until[out] = step + tabu_tenure;
                add(v, &mut clique, &mut in_clique, &mut missing);
            } else {
                // Restart from one random vertex.
                for v in clique.clone() {
                    remove(v, &mut clique, &mut in_clique, &mut missing);
                }
                let v = rng.random_range(0..m);
                add(v, &mut clique, &mut in_clique, &mut missing);
            }
        }
        if clique.len() > best.len() {
            best = clique.clone();
            since_improvement = 0;
            if target_extra.is_some_and(|t| best.len() >= t) {
                break;
            }
        } else {
            since_improvement += 1;
        }
    }
    let mut members = fixed;
    members.extend(best.into_iter().map(|i| pool[i].clone()));
    Ok((members, limits.nodes))
}
