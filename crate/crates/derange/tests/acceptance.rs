//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use derange::clock::InstantClock;
use derange_core::constructions::{build_clique_over, verify_clique_with};
use derange_core::math::{binomial_u64, factorial_u64, odd_double_factorial_below};
use derange_core::{
    build_clique, build_independent_set, class_size, coset_coloring, count_k_derangements,
    deranged_cycle_types, enumerate_k_derangements, factor_adjacent_transposition,
    frankl_deza_check, grow_clique_heuristic, max_clique, max_independent_set, partitions,
    predict_eulerian, theoretical_values, verify_clique, verify_coloring, verify_independent_set,
    AdjacencyCheck, AdjacencyMode, CayleyGraph, CycleType, FieldSpec, LexPermutations, NoClock,
    Permutation, SearchBudget, Witness,
};
use num_bigint::BigUint;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn counting_ground_truth() -> Check {
    let d = count_k_derangements(2, 4);
    ensure(d == BigUint::from(14u32), || format!("D_2(4) = {d}"))?;
    let types: Vec<CycleType> = deranged_cycle_types(2, 4);
    let want = vec![
        CycleType::from_parts(vec![4]).map_err(e)?,
        CycleType::from_parts(vec![3, 1]).map_err(e)?,
    ];
    ensure(types == want, || format!("types {types:?}"))?;
    let listed = [
        "(1 2 3 4)",
        "(1 2 4 3)",
        "(1 3 2 4)",
        "(1 3 4 2)",
        "(1 4 2 3)",
        "(1 4 3 2)",
        "(1 2 3)(4)",
        "(1 2 4)(3)",
        "(1 3 2)(4)",
        "(1 3 4)(2)",
        "(1 4 2)(3)",
        "(1 4 3)(2)",
        "(2 3 4)(1)",
        "(2 4 3)(1)",
    ];
    let want: BTreeSet<Permutation> = listed
        .iter()
        .map(|s| Permutation::parse_cycles(s, Some(4)))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let got = enumerate_k_derangements(2, 4).map_err(e)?;
    ensure(got.len() == 14, || format!("{} enumerated", got.len()))?;
    let got: BTreeSet<Permutation> = got.into_iter().collect();
    ensure(got == want, || format!("enumerated set differs: {got:?}"))
}

fn predicate_equivalence() -> Check {
    for n in 1..=6 {
        for p in LexPermutations::new(n) {
            for k in 1..=n {
                ensure(
                    p.is_k_derangement(k) == p.is_k_derangement_direct(k),
                    || format!("{p} at k = {k}"),
                )?;
            }
        }
    }
    Ok(())
}

fn symmetry() -> Check {
    for n in 2..=8 {
        for k in 1..n {
            ensure(
                count_k_derangements(k, n) == count_k_derangements(n - k, n),
                || format!("D differs at n={n} k={k}"),
            )?;
        }
    }
    for n in 2..=6 {
        for k in 1..n {
            let a = CayleyGraph::new(k, n, AdjacencyMode::Explicit).map_err(e)?;
            let b = CayleyGraph::new(n - k, n, AdjacencyMode::Explicit).map_err(e)?;
            ensure(a.edges().map_err(e)? == b.edges().map_err(e)?, || {
                format!("edges differ at n={n} k={k}")
            })?;
        }
    }
    Ok(())
}

fn connectivity() -> Check {
    let g = CayleyGraph::new(2, 3, AdjacencyMode::Implicit).map_err(e)?;
    let c = g.connected_components();
    ensure(c.sizes == vec![3, 3], || {
        format!("Γ_{{2,3}} sizes {:?}", c.sizes)
    })?;
    for n in 4..=7 {
        for k in 1..n {
            let g = CayleyGraph::new(k, n, AdjacencyMode::Implicit).map_err(e)?;
            let c = g.connected_components();
            ensure(c.count() == 1, || {
                format!("Γ_{{{k},{n}}} has {} components", c.count())
            })?;
        }
    }
    Ok(())
}

fn factorization() -> Check {
    for n in 4..=8 {
        for k in 1..n {
            for h in 1..n {
                let f = factor_adjacent_transposition(n, k, h).map_err(e)?;
                let t = Permutation::transposition(n, h, h + 1).map_err(e)?;
                ensure(
                    f.first.is_k_derangement_direct(k)
                        && f.second.is_k_derangement_direct(k)
                        && f.first.compose(&f.second).map_err(e)? == t,
                    || format!("n={n} k={k} h={h}: {} · {}", f.first, f.second),
                )?;
            }
        }
    }
    Ok(())
}

fn eulerian_law() -> Check {
    for n in 4..=8 {
        for k in 1..n {
            let law = k % 2 == 0 || (k % 2 == 1 && n % 2 == 1);
            let even = count_k_derangements(k, n) % 2u32 == BigUint::default();
            ensure(even == law, || format!("parity at n={n} k={k}"))?;
            ensure(predict_eulerian(k, n).map_err(e)? == law, || {
                format!("prediction at n={n} k={k}")
            })?;
            if n <= 6 {
                let g = CayleyGraph::new(k, n, AdjacencyMode::Explicit).map_err(e)?;
                ensure(g.is_eulerian() == law, || {
                    format!("is_eulerian at n={n} k={k}")
                })?;
            }
        }
    }
    Ok(())
}

fn matching_count() -> Check {
    for n in 1..=10 {
        for t in partitions(n) {
            let size = class_size(&t);
            if t.parts().iter().any(|&p| p > 2) {
                ensure(&size % 2u32 == BigUint::default(), || {
                    format!("{t} has odd class size {size}")
                })?;
            }
            if n % 2 == 0 && t.parts().iter().all(|&p| p == 2) {
                // (n-1)!! counted directly: pair 1 with any of n-1 points, recurse.
                let direct: u64 = (1..n as u64).step_by(2).product();
                ensure(
                    size == BigUint::from(direct) && size == odd_double_factorial_below(n),
                    || format!("{t}: {size}"),
                )?;
                ensure(&size % 2u32 == BigUint::from(1u32), || format!("{t} even"))?;
            }
        }
    }
    Ok(())
}

fn field_cliques() -> Check {
    for (order, p, deg) in [
        (3usize, 3u32, 1u32),
        (5, 5, 1),
        (7, 7, 1),
        (9, 3, 2),
        (25, 5, 2),
        (27, 3, 3),
    ] {
        let start = Instant::now();
        let spec = FieldSpec::new(p, deg).map_err(e)?;
        if order == 9 {
            ensure(spec.modulus() == [1, 0, 1], || {
                format!("GF(9) modulus {:?}", spec.modulus())
            })?;
        }
        let cert = build_clique(&spec, None).map_err(e)?;
        let want = binomial_u64(order, 2).unwrap() as usize;
        ensure(cert.members.len() == want, || {
            format!("order {order}: {} members", cert.members.len())
        })?;
        verify_clique(&cert).map_err(|v| format!("order {order}: {v}"))?;
        let limit = if order <= 9 {
            Duration::from_secs(1)
        } else {
            Duration::from_secs(600)
        };
        ensure(start.elapsed() < limit, || {
            format!("order {order} took {:?}", start.elapsed())
        })?;
    }
    let spec = FieldSpec::new(7, 1).map_err(e)?;
    let t: Vec<_> = [1, 4, 5]
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let base: Vec<_> = [1, 2, 3, 4, 5, 6, 0]
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let cert = build_clique_over(&spec, Some(&t), &base).map_err(e)?;
    verify_clique_with(&cert, AdjacencyCheck::PositionScan).map_err(e)?;
    // Entries are field label + 1; write the field element 0 as 7.
    let relabel = |p: &Permutation| -> Vec<usize> {
        p.one_line()
            .iter()
            .map(|&x| if x == 1 { 7 } else { x - 1 })
            .collect()
    };
    let blocks = [
        vec![1, 2, 3, 4, 5, 6, 7],
        vec![4, 1, 5, 2, 6, 3, 7],
        vec![5, 3, 1, 6, 4, 2, 7],
    ];
    ensure(cert.members.len() == 21, || "example size".into())?;
    for (b, lead) in cert.members.chunks(7).zip(&blocks) {
        let got: BTreeSet<Vec<usize>> = b.iter().map(relabel).collect();
        let want: BTreeSet<Vec<usize>> = (0..7)
            .map(|r| {
                let mut v = lead.clone();
                v.rotate_left(r);
                v
            })
            .collect();
        ensure(got == want, || {
            format!("block led by {lead:?} differs: {got:?}")
        })?;
    }
    ensure(relabel(&cert.members[7]) == blocks[1], || {
        format!("f_4,0(v) = {:?}", relabel(&cert.members[7]))
    })
}

fn independent_sets_and_colorings() -> Check {
    for n in 2..=6 {
        for k in 1..n {
            let s = build_independent_set(k, n).map_err(e)?;
            let want = factorial_u64(k).unwrap() * factorial_u64(n - k).unwrap();
            ensure(s.members.len() as u64 == want, || {
                format!("n={n} k={k}: {}", s.members.len())
            })?;
            verify_independent_set(&s).map_err(|v| format!("n={n} k={k}: {v}"))?;
            if n <= 5 {
                let c = coset_coloring(k, n).map_err(e)?;
                verify_coloring(&c).map_err(|v| format!("coloring n={n} k={k}: {v}"))?;
                let want = binomial_u64(n, k).unwrap() as usize;
                ensure(c.colors_used() == want, || {
                    format!("n={n} k={k}: {} colors", c.colors_used())
                })?;
            }
        }
    }
    Ok(())
}

fn product_bound() -> Check {
    ensure(frankl_deza_check(4, 5, 4), || "4·5 <= 24 fails".into())?;
    let g = CayleyGraph::new(2, 5, AdjacencyMode::Explicit).map_err(e)?;
    let a = max_independent_set(&g, SearchBudget::default(), &InstantClock::start()).map_err(e)?;
    let w = max_clique(&g, SearchBudget::default(), &InstantClock::start()).map_err(e)?;
    ensure(a.proven_optimal && w.proven_optimal, || {
        "search not proven".into()
    })?;
    ensure(a.best_size == 12 && w.best_size == 10, || {
        format!("α = {}, ω = {}", a.best_size, w.best_size)
    })?;
    ensure(a.best_size * w.best_size == 120, || {
        "product is not 5!".into()
    })?;
    let exact = theoretical_values(2, 5)
        .map_err(e)?
        .exact
        .ok_or("no exact values")?;
    ensure(
        exact.alpha == BigUint::from(12u32) && exact.omega == BigUint::from(10u32),
        || format!("formula values {} {}", exact.alpha, exact.omega),
    )
}

fn search_findings() -> Check {
    let start = Instant::now();
    let g = CayleyGraph::new(2, 4, AdjacencyMode::Explicit).map_err(e)?;
    let r = max_clique(&g, SearchBudget::default(), &InstantClock::start()).map_err(e)?;
    ensure(r.best_size == 5 && r.proven_optimal, || {
        format!("ω(Γ_{{2,4}}) = {} proven {}", r.best_size, r.proven_optimal)
    })?;
    ensure(start.elapsed() < Duration::from_secs(10), || {
        "Γ_{2,4} too slow".into()
    })?;

    let start = Instant::now();
    let g = CayleyGraph::new(2, 6, AdjacencyMode::Explicit).map_err(e)?;
    let c = grow_clique_heuristic(
        &g,
        &[],
        SearchBudget::default(),
        &InstantClock::start(),
        derange_core::search::DEFAULT_HEURISTIC_SEED,
    )
    .map_err(e)?;
    verify_clique(&c).map_err(e)?;
    ensure(c.members.len() >= 9, || {
        format!("heuristic found {}", c.members.len())
    })?;
    let r = max_clique(&g, SearchBudget::default(), &NoClock).map_err(e)?;
    let Witness::Clique(w) = &r.witness else {
        return Err("wrong witness".into());
    };
    verify_clique(w).map_err(e)?;
    ensure(r.best_size >= 9, || {
        format!("exact search found {}", r.best_size)
    })?;
    ensure(start.elapsed() < Duration::from_secs(300), || {
        "Γ_{2,6} over budget".into()
    })?;
    println!(
        "      note: ω(Γ_{{2,6}}) = {} (proven: {})",
        r.best_size, r.proven_optimal
    );
    Ok(())
}

fn determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_derange");
    let dirs = [
        tempfile::tempdir().map_err(e)?,
        tempfile::tempdir().map_err(e)?,
    ];
    for d in &dirs {
        let status = Command::new(bin)
            .arg("report")
            .arg("--out")
            .arg(d.path())
            .status()
            .map_err(e)?;
        ensure(status.success(), || format!("report exited with {status}"))?;
    }
    for f in ["report.csv", "report.json", "counts.csv"] {
        let a = fs::read(dirs[0].path().join(f)).map_err(e)?;
        let b = fs::read(dirs[1].path().join(f)).map_err(e)?;
        ensure(!a.is_empty() && a == b, || {
            format!("{f} differs between runs")
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "counting ground truth for D_2(4)",
            counting_ground_truth,
            Duration::from_secs(1),
        ),
        (
            "cycle-type predicate matches the definition, n <= 6",
            predicate_equivalence,
            Duration::from_secs(30),
        ),
        (
            "complement symmetry of counts and edge sets",
            symmetry,
            Duration::from_secs(600),
        ),
        (
            "component counts, n = 3 and 4 <= n <= 7",
            connectivity,
            Duration::from_secs(300),
        ),
        (
            "adjacent transpositions factor, 4 <= n <= 8",
            factorization,
            Duration::from_secs(600),
        ),
        (
            "parity of D_k(n) and Eulerian status",
            eulerian_law,
            Duration::from_secs(600),
        ),
        (
            "class-size parity and matching count, n <= 10",
            matching_count,
            Duration::from_secs(600),
        ),
        (
            "finite-field cliques of size C(n,2)",
            field_cliques,
            Duration::from_secs(600),
        ),
        (
            "stabilizer independent sets and coset colorings",
            independent_sets_and_colorings,
            Duration::from_secs(600),
        ),
        (
            "product bound and its tightness at n = 5",
            product_bound,
            Duration::from_secs(600),
        ),
        (
            "clique search on Γ_{2,4} and Γ_{2,6}",
            search_findings,
            Duration::from_secs(310),
        ),
        (
            "report sweep is byte-identical across runs",
            determinism,
            Duration::from_secs(600),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let took = start.elapsed();
        if result.is_ok() && took > *limit {
            result = Err(format!("took {took:?}, limit {limit:?}"));
        }
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({:.2} s)", i + 1, took.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!(
                    "FAIL {:>2} {name} ({:.2} s): {m}",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
