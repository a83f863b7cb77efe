//! Certificate checking with the pair loop split across threads.

use std::ops::Range;
use std::thread;

use derange_core::constructions::{
    first_clique_violation_in_rows, first_independence_violation_in_rows, rebuild_from_provenance,
};
use derange_core::{verify_coloring, AdjacencyCheck, ColoringCertificate, Permutation, Violation};

use crate::formats::{Certificate, CertificateJson};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Valid { summary: String },
    Invalid(Violation),
    Malformed(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Valid { .. } => 0,
            Outcome::Invalid(_) => 1,
            Outcome::Malformed(_) => 2,
        }
    }
}

pub fn verify_text(text: &str, threads: usize, check: AdjacencyCheck) -> Outcome {
    let json: CertificateJson = match serde_json::from_str(text) {
        Ok(j) => j,
        Err(e) => return Outcome::Malformed(format!("not a certificate: {e}")),
    };
    verify_json(&json, threads, check)
}

pub fn verify_json(json: &CertificateJson, threads: usize, check: AdjacencyCheck) -> Outcome {
    let cert = match json.decode() {
        Ok(c) => c,
        Err(e) => return Outcome::Malformed(e),
    };
    match cert {
        Certificate::Clique(c) => {
            if let Some(v) = first_violation(&c.members, threads, |rows| {
                first_clique_violation_in_rows(&c.members, c.k, rows, check)
            }) {
                return Outcome::Invalid(v);
            }
            match rebuild_from_provenance(&c) {
                Ok(Some(rebuilt)) if rebuilt.members != c.members => {
                    return Outcome::Invalid(Violation::ProvenanceMismatch)
                }
                Ok(_) => {}
                Err(e) => return Outcome::Malformed(format!("provenance: {e}")),
            }
            Outcome::Valid {
                summary: format!(
                    "clique of size {} in Γ_{{{},{}}}",
                    c.members.len(),
                    c.k,
                    c.n
                ),
            }
        }
        Certificate::IndependentSet(c) => {
            match first_violation(&c.members, threads, |rows| {
                first_independence_violation_in_rows(&c.members, c.k, rows)
            }) {
                Some(v) => Outcome::Invalid(v),
                None => Outcome::Valid {
                    summary: format!(
                        "independent set of size {} in Γ_{{{},{}}}",
                        c.members.len(),
                        c.k,
                        c.n
                    ),
                },
            }
        }
        Certificate::Coloring(pairs, n, k, provenance) => {
            let cert = match ColoringCertificate::from_assignments(n, k, &pairs, provenance) {
                Ok(c) => c,
                Err(Violation::Malformed(m)) => return Outcome::Malformed(m),
                Err(v) => return Outcome::Invalid(v),
            };
            match verify_coloring(&cert) {
                Ok(()) => Outcome::Valid {
                    summary: format!(
                        "proper coloring of Γ_{{{k},{n}}} with {} colors",
                        cert.colors_used()
                    ),
                },
                Err(Violation::Malformed(m)) => Outcome::Malformed(m),
                Err(v) => Outcome::Invalid(v),
            }
        }
    }
}

/// Row `i` costs `len - i - 1` pair checks; chunks are cut to roughly equal
/// cost and reassembled in row order so the reported violation does not
/// depend on the thread count.
pub fn row_chunks(len: usize, pieces: usize) -> Vec<Range<usize>> {
    let pieces = pieces.max(1);
    let total: usize = len * len.saturating_sub(1) / 2;
    let target = total.div_ceil(pieces).max(1);
    let mut out = Vec::new();
    let mut start = 0;
    let mut acc = 0;
    for i in 0..len {
        acc += len - i - 1;
        if acc >= target {
            out.push(start..i + 1);
            start = i + 1;
            acc = 0;
        }
    }
    if start < len {
        out.push(start..len);
    }
    out
}

fn first_violation<F>(members: &[Permutation], threads: usize, check: F) -> Option<Violation>
where
    F: Fn(Range<usize>) -> Option<Violation> + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || members.len() < 64 {
        return check(0..members.len());
    }
    let chunks = row_chunks(members.len(), threads * 4);
    let mut results: Vec<Option<Violation>> = vec![None; chunks.len()];
    thread::scope(|s| {
        let check = &check;
        let chunks = &chunks;
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    (t..chunks.len())
                        .step_by(threads)
                        .map(|c| (c, check(chunks[c].clone())))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (c, r) in h.join().expect("verification worker panicked") {
                results[c] = r;
            }
        }
    });
    results.into_iter().flatten().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use derange_core::{build_clique, FieldSpec};

    #[test]
    fn chunks_cover_rows() {
        for len in [0, 1, 2, 10, 351] {
            for pieces in [1, 3, 16] {
                let c = row_chunks(len, pieces);
                let flat: Vec<usize> = c.iter().flat_map(|r| r.clone()).collect();
                assert_eq!(flat, (0..len).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_the_witness() {
        let cert = build_clique(&FieldSpec::new(11, 1).unwrap(), None).unwrap();
        let mut json = CertificateJson::from(&cert);
        json.provenance = Default::default();
        json.members[40] = json.members[7].clone();
        json.members[30].swap(0, 1);
        let one = verify_json(&json, 1, AdjacencyCheck::CycleType);
        assert!(matches!(one, Outcome::Invalid(_)));
        for t in [2, 3, 8] {
            assert_eq!(verify_json(&json, t, AdjacencyCheck::CycleType), one);
        }
    }

    #[test]
    fn provenance_is_checked() {
        let cert = build_clique(&FieldSpec::new(5, 1).unwrap(), None).unwrap();
        let mut json = CertificateJson::from(&cert);
        assert_eq!(
            verify_json(&json, 2, AdjacencyCheck::CycleType).exit_code(),
            0
        );
        json.members.swap(0, 1);
        assert_eq!(
            verify_json(&json, 2, AdjacencyCheck::CycleType),
            Outcome::Invalid(Violation::ProvenanceMismatch)
        );
    }
}
