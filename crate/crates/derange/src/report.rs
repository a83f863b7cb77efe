//! The full small-case sweep. Every row compares a computed value with its
//! expected one; rows marked `info` are findings with nothing to compare.
//! Searches run on node budgets only so the output is byte-stable.

use std::fs;
use std::path::Path;

use derange_core::math::{binomial_u64, factorial_u64, odd_double_factorial_below};
use derange_core::search::max_clique_unreduced;
use derange_core::{
    build_clique, build_independent_set, class_size, coset_coloring, count_k_derangements,
    deranged_cycle_types, enumerate_k_derangements, factor_adjacent_transposition,
    frankl_deza_check, max_clique, max_independent_set, partitions, predict_eulerian,
    verify_clique, verify_coloring, verify_independent_set, AdjacencyMode, CayleyGraph, FieldSpec,
    NoClock, Permutation, SearchBudget, SearchMode,
};
use num_bigint::BigUint;
use serde::Serialize;

use crate::formats::write_json;

/// Largest `n` for graph-level checks in the sweep.
pub const SWEEP_N: usize = 6;
/// Largest `n` for counting checks.
pub const COUNT_N: usize = 8;
/// Node budget for every search in the sweep.
pub const SWEEP_NODES: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub claim: String,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "D")]
    pub d: String,
    pub eulerian_predicted: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub rows: Vec<Row>,
    pub counts: Vec<CountRow>,
}

#[derive(Serialize)]
struct Summary<'a> {
    total: usize,
    ok: usize,
    fail: usize,
    info: usize,
    rows: &'a [Row],
}

impl Report {
    fn check(
        &mut self,
        claim: &str,
        n: Option<usize>,
        k: Option<usize>,
        expected: impl ToString,
        computed: impl ToString,
    ) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed {
            Status::Ok
        } else {
            Status::Fail
        };
        self.rows.push(Row {
            claim: claim.into(),
            n,
            k,
            expected,
            computed,
            status,
        });
    }

    fn info(
        &mut self,
        claim: &str,
        n: Option<usize>,
        k: Option<usize>,
        expected: impl ToString,
        computed: impl ToString,
    ) {
        self.rows.push(Row {
            claim: claim.into(),
            n,
            k,
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: Status::Info,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    fn count(&self, s: Status) -> usize {
        self.rows.iter().filter(|r| r.status == s).count()
    }

    /// Writes `report.csv`, `report.json` and `counts.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("report.csv"))?;
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        let mut w = csv::Writer::from_path(dir.join("counts.csv"))?;
        for r in &self.counts {
            w.serialize(r)?;
        }
        w.flush()?;
        let mut f = fs::File::create(dir.join("report.json"))?;
        write_json(
            &mut f,
            &Summary {
                total: self.rows.len(),
                ok: self.count(Status::Ok),
                fail: self.count(Status::Fail),
                info: self.count(Status::Info),
                rows: &self.rows,
            },
        )?;
        Ok(())
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn budget() -> SearchBudget {
    SearchBudget {
        max_nodes: SWEEP_NODES,
        max_seconds: f64::INFINITY,
        mode: SearchMode::Exact,
    }
}

pub fn run() -> anyhow::Result<Report> {
    let mut r = Report::default();
    counting(&mut r)?;
    graphs(&mut r)?;
    constructions(&mut r)?;
    searches(&mut r)?;
    Ok(r)
}

fn counting(r: &mut Report) -> anyhow::Result<()> {
    r.check("D_k(n)", Some(4), Some(2), 14, count_k_derangements(2, 4));
    let types: Vec<String> = deranged_cycle_types(2, 4)
        .iter()
        .map(|t| t.to_plus_string())
        .collect();
    r.check(
        "deranged cycle types",
        Some(4),
        Some(2),
        "4;3+1",
        types.join(";"),
    );
    let listed = "[1234, 1243, 1324, 1342, 1423, 1432, 123, 124, 132, 134, 142, 143, 234, 243]";
    // The 14 permutations of D_{2,4} in cycle notation, fixed points dropped.
    let mut got: Vec<String> = enumerate_k_derangements(2, 4)?
        .iter()
        .map(|p| {
            p.cycles()
                .iter()
                .filter(|c| c.len() > 1)
                .map(|c| c.iter().map(|x| x.to_string()).collect::<String>())
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();
    got.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    r.check(
        "k-derangements listed",
        Some(4),
        Some(2),
        listed,
        format!("[{}]", got.join(", ")),
    );

    for n in 1..=COUNT_N {
        for k in 1..=n {
            let d = count_k_derangements(k, n);
            r.counts.push(CountRow {
                n,
                k,
                d: d.to_string(),
                eulerian_predicted: predict_eulerian(k, n).ok(),
            });
            if k < n {
                r.check(
                    "complement symmetry",
                    Some(n),
                    Some(k),
                    count_k_derangements(n - k, n),
                    &d,
                );
            }
            if n > 3 && k < n {
                let even = &d % 2u32 == BigUint::default();
                r.check(
                    "parity law",
                    Some(n),
                    Some(k),
                    yes(predict_eulerian(k, n)?),
                    yes(even),
                );
            }
        }
    }

    for n in 1..=10 {
        let parts = partitions(n);
        let total: BigUint = parts.iter().map(class_size).sum();
        r.check(
            "class sizes sum to n!",
            Some(n),
            None,
            derange_core::math::factorial(n),
            total,
        );
        let odd_big: Vec<String> = parts
            .iter()
            .filter(|t| {
                t.parts().iter().any(|&p| p > 2) && &class_size(t) % 2u32 == BigUint::from(1u32)
            })
            .map(|t| t.to_plus_string())
            .collect();
        r.check(
            "odd class with a part > 2",
            Some(n),
            None,
            "none",
            if odd_big.is_empty() {
                "none".into()
            } else {
                odd_big.join(";")
            },
        );
        if n % 2 == 0 {
            let matching = parts
                .iter()
                .find(|t| t.parts().iter().all(|&p| p == 2))
                .unwrap();
            r.check(
                "matching class size",
                Some(n),
                None,
                odd_double_factorial_below(n),
                class_size(matching),
            );
        }
    }
    Ok(())
}

fn graphs(r: &mut Report) -> anyhow::Result<()> {
    let g = CayleyGraph::new(2, 3, AdjacencyMode::Explicit)?;
    let c = g.connected_components();
    r.check(
        "component sizes",
        Some(3),
        Some(2),
        "3;3",
        c.sizes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";"),
    );
    for n in 4..=SWEEP_N {
        for k in 1..n {
            let g = CayleyGraph::new(k, n, AdjacencyMode::Explicit)?;
            r.check(
                "degree",
                Some(n),
                Some(k),
                count_k_derangements(k, n),
                g.degree(),
            );
            r.check(
                "components",
                Some(n),
                Some(k),
                1,
                g.connected_components().count(),
            );
            r.check(
                "eulerian",
                Some(n),
                Some(k),
                yes(predict_eulerian(k, n)?),
                yes(g.is_eulerian()),
            );
            if k * 2 < n {
                let h = CayleyGraph::new(n - k, n, AdjacencyMode::Explicit)?;
                r.check(
                    "edge sets of k and n-k agree",
                    Some(n),
                    Some(k),
                    "true",
                    yes(g.edges()? == h.edges()?),
                );
            }
            let mut bad = Vec::new();
            for hh in 1..n {
                let f = factor_adjacent_transposition(n, k, hh)?;
                let target = Permutation::transposition(n, hh, hh + 1)?;
                let ok = f.first.is_k_derangement(k)
                    && f.second.is_k_derangement(k)
                    && f.first.compose(&f.second)? == target;
                if !ok {
                    bad.push(hh.to_string());
                }
            }
            r.check(
                "adjacent transpositions factor",
                Some(n),
                Some(k),
                "all",
                if bad.is_empty() {
                    "all".into()
                } else {
                    format!("fails at h={}", bad.join(","))
                },
            );
        }
    }
    Ok(())
}

fn constructions(r: &mut Report) -> anyhow::Result<()> {
    for (order, p, deg) in [(3usize, 3u32, 1u32), (5, 5, 1), (7, 7, 1), (9, 3, 2)] {
        let spec = FieldSpec::new(p, deg)?;
        let cert = build_clique(&spec, None)?;
        r.check(
            "affine clique size",
            Some(order),
            Some(2),
            binomial_u64(order, 2).unwrap(),
            cert.members.len(),
        );
        r.check(
            "affine clique verifies",
            Some(order),
            Some(2),
            "valid",
            verdict(verify_clique(&cert)),
        );
    }
    let spec = FieldSpec::new(3, 2)?;
    r.check(
        "GF(9) modulus",
        Some(9),
        None,
        "[1, 0, 1]",
        format!("{:?}", spec.modulus()),
    );

    let spec = FieldSpec::new(7, 1)?;
    let t: Vec<_> = [1, 4, 5]
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<_, _>>()?;
    let base: Vec<_> = [1, 2, 3, 4, 5, 6, 0]
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<_, _>>()?;
    let cert = derange_core::constructions::build_clique_over(&spec, Some(&t), &base)?;
    r.check(
        "example clique verifies",
        Some(7),
        Some(2),
        "valid",
        verdict(verify_clique(&cert)),
    );
    // Points are field labels + 1 here; shift by one with 0 written as 7.
    let relabel = |p: &Permutation| -> String {
        p.one_line()
            .iter()
            .map(|&x| if x == 1 { 7 } else { x - 1 }.to_string())
            .collect()
    };
    let firsts: Vec<String> = cert.members.chunks(7).map(|b| relabel(&b[0])).collect();
    r.check(
        "example block leaders",
        Some(7),
        Some(2),
        "1234567;4152637;5316427",
        firsts.join(";"),
    );

    for n in 2..=SWEEP_N {
        for k in 1..n {
            let is = build_independent_set(k, n)?;
            let want = factorial_u64(k).unwrap() * factorial_u64(n - k).unwrap();
            r.check("stabilizer size", Some(n), Some(k), want, is.members.len());
            r.check(
                "stabilizer independent",
                Some(n),
                Some(k),
                "valid",
                verdict(verify_independent_set(&is)),
            );
            if n <= 5 {
                let c = coset_coloring(k, n)?;
                r.check(
                    "coset colors",
                    Some(n),
                    Some(k),
                    binomial_u64(n, k).unwrap(),
                    c.colors_used(),
                );
                r.check(
                    "coset coloring proper",
                    Some(n),
                    Some(k),
                    "valid",
                    verdict(verify_coloring(&c)),
                );
            }
        }
    }
    Ok(())
}

fn verdict<E: std::fmt::Display>(r: Result<(), E>) -> String {
    match r {
        Ok(()) => "valid".into(),
        Err(e) => e.to_string(),
    }
}

fn searches(r: &mut Report) -> anyhow::Result<()> {
    let clock = NoClock;
    let g24 = CayleyGraph::new(2, 4, AdjacencyMode::Explicit)?;
    let w = max_clique(&g24, budget(), &clock)?;
    r.check(
        "clique number",
        Some(4),
        Some(2),
        "5 proven",
        format!("{} {}", w.best_size, proven(w.proven_optimal)),
    );
    let a = max_independent_set(&g24, budget(), &clock)?;
    r.check(
        "independence number",
        Some(4),
        Some(2),
        "4 proven",
        format!("{} {}", a.best_size, proven(a.proven_optimal)),
    );
    r.check(
        "alpha * omega <= n!",
        Some(4),
        Some(2),
        "true",
        yes(frankl_deza_check(a.best_size as u64, w.best_size as u64, 4)),
    );

    let g25 = CayleyGraph::new(2, 5, AdjacencyMode::Explicit)?;
    let w = max_clique(&g25, budget(), &clock)?;
    let a = max_independent_set(&g25, budget(), &clock)?;
    r.check(
        "clique number",
        Some(5),
        Some(2),
        "10 proven",
        format!("{} {}", w.best_size, proven(w.proven_optimal)),
    );
    r.check(
        "independence number",
        Some(5),
        Some(2),
        "12 proven",
        format!("{} {}", a.best_size, proven(a.proven_optimal)),
    );
    r.check(
        "alpha * omega = n!",
        Some(5),
        Some(2),
        120,
        a.best_size * w.best_size,
    );

    let g26 = CayleyGraph::new(2, 6, AdjacencyMode::Explicit)?;
    let w = max_clique(&g26, budget(), &clock)?;
    let ok = match &w.witness {
        derange_core::Witness::Clique(c) => verify_clique(c).is_ok(),
        _ => false,
    };
    r.check(
        "verified clique of size >= 9",
        Some(6),
        Some(2),
        "true",
        yes(ok && w.best_size >= 9),
    );
    r.info(
        "clique number found",
        Some(6),
        Some(2),
        "9..=15",
        format!("{} {}", w.best_size, proven(w.proven_optimal)),
    );
    let u = max_clique_unreduced(&g26, budget(), &clock)?;
    r.info(
        "clique number without symmetry reduction",
        Some(6),
        Some(2),
        "9..=15",
        format!("{} {}", u.best_size, proven(u.proven_optimal)),
    );

    // Small clique numbers for the record; k = 1 and k = n - 1 give n.
    for n in 3..=SWEEP_N {
        for k in 1..n {
            if (k, n) == (2, 4) || (k, n) == (2, 5) || (k, n) == (2, 6) {
                continue;
            }
            let g = CayleyGraph::new(k, n, AdjacencyMode::Explicit)?;
            let w = max_clique(&g, budget(), &clock)?;
            if k == 1 || k == n - 1 {
                r.check(
                    "clique number",
                    Some(n),
                    Some(k),
                    format!("{n} proven"),
                    format!("{} {}", w.best_size, proven(w.proven_optimal)),
                );
            } else {
                r.info(
                    "clique number",
                    Some(n),
                    Some(k),
                    format!("<= {}", binomial_u64(n, k).unwrap()),
                    format!("{} {}", w.best_size, proven(w.proven_optimal)),
                );
            }
        }
    }
    Ok(())
}

fn proven(p: bool) -> &'static str {
    if p {
        "proven"
    } else {
        "lower bound"
    }
}
