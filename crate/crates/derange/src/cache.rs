//! Optional on-disk memo of `D_k(n)` tables, one CSV per `n`.

use std::fs;
use std::path::{Path, PathBuf};

use derange_core::count_k_derangements;
use num_bigint::BigUint;

pub const CACHE_ENV: &str = "DERANGE_CACHE_DIR";

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn table_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("dk_n{n}.csv"))
}

/// `D_1(n), ..., D_n(n)`.
pub fn compute_table(n: usize) -> Vec<BigUint> {
    (1..=n).map(|k| count_k_derangements(k, n)).collect()
}

fn read_table(path: &Path, n: usize) -> Option<Vec<BigUint>> {
    let mut r = csv::Reader::from_path(path).ok()?;
    let mut out = Vec::with_capacity(n);
    for (i, rec) in r.records().enumerate() {
        let rec = rec.ok()?;
        let k: usize = rec.get(0)?.parse().ok()?;
        if k != i + 1 {
            return None;
        }
        out.push(rec.get(1)?.parse().ok()?);
    }
    (out.len() == n).then_some(out)
}

fn write_table(path: &Path, table: &[BigUint]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "D"])?;
    for (i, d) in table.iter().enumerate() {
        w.write_record([(i + 1).to_string(), d.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `D_k(n)`, read from or stored into `dir` when given. A missing or
/// unreadable table is recomputed and rewritten; cache write failures are
/// ignored since the value is already in hand.
pub fn count(k: usize, n: usize, dir: Option<&Path>) -> BigUint {
    if k == 0 || k > n {
        return count_k_derangements(k, n);
    }
    let Some(dir) = dir else {
        return count_k_derangements(k, n);
    };
    let path = table_path(dir, n);
    let table = match read_table(&path, n) {
        Some(t) => t,
        None => {
            let t = compute_table(n);
            let _ = fs::create_dir_all(dir)
                .map_err(anyhow::Error::from)
                .and_then(|_| write_table(&path, &t));
            t
        }
    };
    table[k - 1].clone()
}
