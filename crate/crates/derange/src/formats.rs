//! JSON, CSV and DIMACS encodings. Permutations are always written as
//! 1-based one-line arrays.

use std::io::{self, Write};

use derange_core::constructions::Provenance;
use derange_core::enumeration::CycleClassReport;
use derange_core::{
    CayleyGraph, CliqueCertificate, ColoringCertificate, FieldSpec, IndependentSetCertificate,
    LexPermutations, Permutation, SearchResult, Witness,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub p: u32,
    pub deg: u32,
    /// Constant term first, trailing 1.
    pub modulus: Vec<u32>,
}

impl From<&FieldSpec> for FieldSpecJson {
    fn from(f: &FieldSpec) -> Self {
        FieldSpecJson {
            p: f.p(),
            deg: f.deg(),
            modulus: f.modulus().to_vec(),
        }
    }
}

impl FieldSpecJson {
    pub fn to_spec(&self) -> derange_core::Result<FieldSpec> {
        let spec = FieldSpec::with_modulus(self.p, self.modulus.clone())?;
        if spec.deg() != self.deg {
            return Err(derange_core::Error::InvalidModulus(format!(
                "declared degree {} but modulus has degree {}",
                self.deg,
                spec.deg()
            )));
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum ProvenanceJson {
    AffineField {
        field: FieldSpecJson,
        t_labels: Vec<u32>,
        base_labels: Vec<u32>,
    },
    SetStabilizer,
    CosetColoring,
    Search {
        method: String,
        proven_optimal: bool,
        nodes_explored: u64,
    },
    #[default]
    Unspecified,
}

impl From<&Provenance> for ProvenanceJson {
    fn from(p: &Provenance) -> Self {
        match p {
            Provenance::AffineField {
                p,
                deg,
                modulus,
                slopes,
                base,
            } => ProvenanceJson::AffineField {
                field: FieldSpecJson {
                    p: *p,
                    deg: *deg,
                    modulus: modulus.clone(),
                },
                t_labels: slopes.clone(),
                base_labels: base.clone(),
            },
            Provenance::SetStabilizer => ProvenanceJson::SetStabilizer,
            Provenance::CosetColoring => ProvenanceJson::CosetColoring,
            Provenance::Search {
                method,
                proven_optimal,
                nodes_explored,
            } => ProvenanceJson::Search {
                method: method.clone(),
                proven_optimal: *proven_optimal,
                nodes_explored: *nodes_explored,
            },
            Provenance::Unspecified => ProvenanceJson::Unspecified,
        }
    }
}

impl From<&ProvenanceJson> for Provenance {
    fn from(p: &ProvenanceJson) -> Self {
        match p {
            ProvenanceJson::AffineField {
                field,
                t_labels,
                base_labels,
            } => Provenance::AffineField {
                p: field.p,
                deg: field.deg,
                modulus: field.modulus.clone(),
                slopes: t_labels.clone(),
                base: base_labels.clone(),
            },
            ProvenanceJson::SetStabilizer => Provenance::SetStabilizer,
            ProvenanceJson::CosetColoring => Provenance::CosetColoring,
            ProvenanceJson::Search {
                method,
                proven_optimal,
                nodes_explored,
            } => Provenance::Search {
                method: method.clone(),
                proven_optimal: *proven_optimal,
                nodes_explored: *nodes_explored,
            },
            ProvenanceJson::Unspecified => Provenance::Unspecified,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Clique,
    IndependentSet,
    Coloring,
}

/// On-disk certificate. Colorings list every vertex in `members` with its
/// color at the same index in `colors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    #[serde(rename = "type")]
    pub kind: CertificateKind,
    pub n: usize,
    pub k: usize,
    pub members: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    #[serde(default)]
    pub provenance: ProvenanceJson,
}

/// A certificate decoded into library types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Clique(CliqueCertificate),
    IndependentSet(IndependentSetCertificate),
    Coloring(Vec<(Permutation, u32)>, usize, usize, Provenance),
}

pub fn one_lines(members: &[Permutation]) -> Vec<Vec<usize>> {
    members.iter().map(Permutation::one_line).collect()
}

impl From<&CliqueCertificate> for CertificateJson {
    fn from(c: &CliqueCertificate) -> Self {
        CertificateJson {
            kind: CertificateKind::Clique,
            n: c.n,
            k: c.k,
            members: one_lines(&c.members),
            colors: None,
            provenance: (&c.provenance).into(),
        }
    }
}

impl From<&IndependentSetCertificate> for CertificateJson {
    fn from(c: &IndependentSetCertificate) -> Self {
        CertificateJson {
            kind: CertificateKind::IndependentSet,
            n: c.n,
            k: c.k,
            members: one_lines(&c.members),
            colors: None,
            provenance: (&c.provenance).into(),
        }
    }
}

impl From<&ColoringCertificate> for CertificateJson {
    fn from(c: &ColoringCertificate) -> Self {
        CertificateJson {
            kind: CertificateKind::Coloring,
            n: c.n,
            k: c.k,
            members: LexPermutations::new(c.n).map(|p| p.one_line()).collect(),
            colors: Some(c.colors.clone()),
            provenance: (&c.provenance).into(),
        }
    }
}

impl From<&Witness> for CertificateJson {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Clique(c) => c.into(),
            Witness::IndependentSet(c) => c.into(),
        }
    }
}

impl CertificateJson {
    /// Decodes member arrays; fails on anything that is not a permutation of
    /// `1..=n` or on a missing/misplaced `colors` field.
    pub fn decode(&self) -> Result<Certificate, String> {
        if self.n == 0 || self.k == 0 {
            return Err("n and k must be positive".into());
        }
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if m.len() != self.n {
                    return Err(format!(
                        "member {i} has length {}, expected {}",
                        m.len(),
                        self.n
                    ));
                }
                Permutation::from_one_line(m).map_err(|e| format!("member {i}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = Provenance::from(&self.provenance);
        match (self.kind, &self.colors) {
            (CertificateKind::Clique, None) => Ok(Certificate::Clique(CliqueCertificate {
                n: self.n,
                k: self.k,
                members,
                provenance,
            })),
            (CertificateKind::IndependentSet, None) => {
                Ok(Certificate::IndependentSet(IndependentSetCertificate {
                    n: self.n,
                    k: self.k,
                    members,
                    provenance,
                }))
            }
            (CertificateKind::Coloring, Some(colors)) => {
                if colors.len() != members.len() {
                    return Err(format!(
                        "{} colors for {} members",
                        colors.len(),
                        members.len()
                    ));
                }
                let pairs = members.into_iter().zip(colors.iter().copied()).collect();
                Ok(Certificate::Coloring(pairs, self.n, self.k, provenance))
            }
            (CertificateKind::Coloring, None) => Err("coloring without colors".into()),
            (_, Some(_)) => Err("colors are only allowed on colorings".into()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResultJson {
    pub best_size: usize,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub witness: CertificateJson,
}

impl From<&SearchResult> for SearchResultJson {
    fn from(r: &SearchResult) -> Self {
        SearchResultJson {
            best_size: r.best_size,
            proven_optimal: r.proven_optimal,
            nodes_explored: r.nodes_explored,
            witness: (&r.witness).into(),
        }
    }
}

/// Compact JSON plus a trailing newline.
pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    /// `p edge V E` then `e u v`, vertices numbered rank + 1.
    Dimacs,
    /// `{n, k, vertices, edges}` with the DIMACS numbering.
    Json,
    /// One `u v` line per edge, DIMACS numbering.
    Edges,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    n: usize,
    k: usize,
    vertices: u64,
    edges: &'a [[u64; 2]],
}

pub fn write_graph(
    out: &mut dyn Write,
    g: &CayleyGraph,
    format: GraphFormat,
) -> anyhow::Result<()> {
    let edges = g.edges()?;
    match format {
        GraphFormat::Dimacs => {
            writeln!(out, "p edge {} {}", g.vertex_count(), edges.len())?;
            for (u, v) in &edges {
                writeln!(out, "e {} {}", u.0 + 1, v.0 + 1)?;
            }
        }
        GraphFormat::Edges => {
            for (u, v) in &edges {
                writeln!(out, "{} {}", u.0 + 1, v.0 + 1)?;
            }
        }
        GraphFormat::Json => {
            let pairs: Vec<[u64; 2]> = edges.iter().map(|(u, v)| [u.0 + 1, v.0 + 1]).collect();
            write_json(
                out,
                &GraphJson {
                    n: g.n(),
                    k: g.k(),
                    vertices: g.vertex_count(),
                    edges: &pairs,
                },
            )?;
        }
    }
    Ok(())
}

/// `n,k,cycle_type,class_size,is_derangement_type`, cycle types as `3+1`.
pub fn write_cycle_type_csv(
    out: &mut dyn Write,
    n: usize,
    k: usize,
    rows: &[CycleClassReport],
) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k", "cycle_type", "class_size", "is_derangement_type"])?;
    for r in rows {
        w.write_record([
            n.to_string(),
            k.to_string(),
            r.cycle_type.to_plus_string(),
            r.class_size.to_string(),
            r.is_derangement_type.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Numbers that fit `u64` are written as JSON numbers, larger ones as
/// decimal strings.
pub fn big_to_json(x: &impl ToString) -> serde_json::Value {
    let s = x.to_string();
    match s.parse::<u64>() {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(s),
    }
}
