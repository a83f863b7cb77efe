//! Certified cliques, independent sets and colorings of `Γ_{k,n}`.
//!
//! Every constructor returns a certificate that its verifier accepts on its
//! own; verifiers never consult constructor state.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigUint;
use thiserror::Error;

use crate::cayley::{first_agreeing_subset, rank_slice, ConnectionSet, EXPLICIT_CAP};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::math::{binomial, binomial_u64, factorial, factorial_u64, is_odd_prime_power};
use crate::permutation::{KSubset, LexPermutations, Permutation};

/// Largest `n` for which the stabilizer subgroup is listed in full.
pub const INDEPENDENT_SET_CAP: usize = 10;

/// Where a certificate came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `{x ↦ s·x + α : s ∈ slopes, α ∈ F}` applied to the base arrangement.
    AffineField {
        p: u32,
        deg: u32,
        modulus: Vec<u32>,
        slopes: Vec<u32>,
        base: Vec<u32>,
    },
    /// The stabilizer of `{1, ..., k}`.
    SetStabilizer,
    /// Colors are the image of `{1, ..., k}`.
    CosetColoring,
    Search {
        method: String,
        proven_optimal: bool,
        nodes_explored: u64,
    },
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCertificate {
    pub n: usize,
    pub k: usize,
    pub members: Vec<Permutation>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSetCertificate {
    pub n: usize,
    pub k: usize,
    pub members: Vec<Permutation>,
    pub provenance: Provenance,
}

/// `colors[r]` is the color of the vertex with rank `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringCertificate {
    pub n: usize,
    pub k: usize,
    pub colors: Vec<u32>,
    pub provenance: Provenance,
}

impl ColoringCertificate {
    /// Collects `(vertex, color)` pairs into a rank-indexed table.
    pub fn from_assignments(
        n: usize,
        k: usize,
        assignments: &[(Permutation, u32)],
        provenance: Provenance,
    ) -> core::result::Result<Self, Violation> {
        let total = factorial_u64(n)
            .filter(|_| n <= EXPLICIT_CAP)
            .ok_or_else(|| Violation::Malformed(alloc::format!("n = {n} above coloring cap")))?;
        let mut colors: Vec<Option<u32>> = alloc::vec![None; total as usize];
        for (i, (p, c)) in assignments.iter().enumerate() {
            if p.degree() != n {
                return Err(Violation::DegreeMismatch { index: i });
            }
            let slot = &mut colors[rank_slice(p.zero_based()) as usize];
            if slot.replace(*c).is_some() {
                return Err(Violation::DuplicateVertex { vertex: p.clone() });
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(r, c)| {
                c.ok_or_else(|| Violation::Uncolored {
                    vertex: crate::cayley::unrank(crate::cayley::VertexId(r as u64), n).unwrap(),
                })
            })
            .collect::<core::result::Result<Vec<_>, _>>()?;
        Ok(ColoringCertificate {
            n,
            k,
            colors,
            provenance,
        })
    }

    pub fn colors_used(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

/// A reason a certificate fails. Pair indices refer to the member list.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("member {index} has the wrong degree")]
    DegreeMismatch { index: usize },
    #[error("members {first} and {second} are equal")]
    Duplicate { first: usize, second: usize },
    #[error(
        "members {first} and {second} are not adjacent: both map {agreeing} to the same subset"
    )]
    NotAdjacent {
        first: usize,
        second: usize,
        agreeing: KSubset,
    },
    #[error("members {first} and {second} are adjacent")]
    Adjacent { first: usize, second: usize },
    #[error("vertex {vertex} is colored twice")]
    DuplicateVertex { vertex: Permutation },
    #[error("vertex {vertex} has no color")]
    Uncolored { vertex: Permutation },
    #[error("color {color} is outside 0..{limit}")]
    ColorOutOfRange { color: u32, limit: u64 },
    #[error("adjacent vertices {u} and {v} share color {color}")]
    Monochromatic {
        u: Permutation,
        v: Permutation,
        color: u32,
    },
    #[error("rebuilding from provenance does not reproduce the members")]
    ProvenanceMismatch,
}

/// Which adjacency test a verifier runs on each pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AdjacencyCheck {
    /// Cycle type of the quotient `v ∘ u⁻¹`.
    #[default]
    CycleType,
    /// Scan all k-subsets for a position agreement.
    PositionScan,
}

/// `x ↦ s·x + α` written against the canonical base arrangement: entry `i`
/// is `label(s·e_i + α) + 1` where `e_i` has label `i - 1`.
pub fn affine_arrangement(
    spec: &FieldSpec,
    s: FieldElement,
    alpha: FieldElement,
) -> Result<Permutation> {
    affine_arrangement_over(spec, s, alpha, &spec.elements())
}

/// Like [`affine_arrangement`] over an arbitrary base arrangement: entry `i`
/// is `label(s·base[i-1] + α) + 1`.
pub fn affine_arrangement_over(
    spec: &FieldSpec,
    s: FieldElement,
    alpha: FieldElement,
    base: &[FieldElement],
) -> Result<Permutation> {
    if s == spec.zero() {
        return Err(Error::OutOfHypotheses("slope 0 is not a bijection".into()));
    }
    check_base(spec, base)?;
    let img = base
        .iter()
        .map(|&x| spec.add(spec.mul(s, x), alpha).label() as u8)
        .collect();
    Ok(Permutation::from_zero_based_unchecked(img))
}

fn check_base(spec: &FieldSpec, base: &[FieldElement]) -> Result<()> {
    let labels: Vec<usize> = base.iter().map(|x| x.label() as usize + 1).collect();
    if labels.len() != spec.order() as usize || Permutation::from_one_line(&labels).is_err() {
        return Err(Error::OutOfHypotheses(
            "base arrangement must list every field element once".into(),
        ));
    }
    Ok(())
}

/// The affine clique in `Γ_{2,q}` for an odd prime power `q`, over the
/// canonical base arrangement.
///
/// Members come in blocks, one per slope in `t` (given order), each block
/// listing `α` by increasing label. `t` defaults to [`FieldSpec::half_set`].
pub fn build_clique(spec: &FieldSpec, t: Option<&[FieldElement]>) -> Result<CliqueCertificate> {
    build_clique_over(spec, t, &spec.elements())
}

pub fn build_clique_over(
    spec: &FieldSpec,
    t: Option<&[FieldElement]>,
    base: &[FieldElement],
) -> Result<CliqueCertificate> {
    let slopes = match t {
        Some(t) => {
            spec.validate_half_set(t)?;
            t.to_vec()
        }
        None => spec.half_set(),
    };
    check_base(spec, base)?;
    let mut members = Vec::with_capacity(slopes.len() * spec.order() as usize);
    for &s in &slopes {
        for alpha in spec.elements() {
            members.push(affine_arrangement_over(spec, s, alpha, base)?);
        }
    }
    Ok(CliqueCertificate {
        n: spec.order() as usize,
        k: 2,
        members,
        provenance: Provenance::AffineField {
            p: spec.p(),
            deg: spec.deg(),
            modulus: spec.modulus().to_vec(),
            slopes: slopes.iter().map(|s| s.label()).collect(),
            base: base.iter().map(|x| x.label()).collect(),
        },
    })
}

/// Rebuilds an affine certificate from its provenance alone.
pub fn rebuild_from_provenance(cert: &CliqueCertificate) -> Result<Option<CliqueCertificate>> {
    let Provenance::AffineField {
        p,
        modulus,
        slopes,
        base,
        ..
    } = &cert.provenance
    else {
        return Ok(None);
    };
    let spec = FieldSpec::with_modulus(*p, modulus.clone())?;
    let slopes = slopes
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<Vec<_>>>()?;
    let base = base
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<Vec<_>>>()?;
    build_clique_over(&spec, Some(&slopes), &base).map(Some)
}

fn check_members(
    n: usize,
    k: usize,
    members: &[Permutation],
) -> core::result::Result<(), Violation> {
    if k == 0 {
        return Err(Violation::Malformed("k must be at least 1".into()));
    }
    match members.iter().position(|m| m.degree() != n) {
        Some(index) => Err(Violation::DegreeMismatch { index }),
        None => Ok(()),
    }
}

/// Checks pairs `(i, j)` with `i` in `rows` and `j > i`, returning the
/// lexicographically first violation.
///
/// Splitting `0..members.len()` into consecutive row ranges and taking the
/// first violation of the earliest failing range gives the same answer as a
/// single pass.
pub fn first_clique_violation_in_rows(
    members: &[Permutation],
    k: usize,
    rows: Range<usize>,
    check: AdjacencyCheck,
) -> Option<Violation> {
    let inverses: Vec<Permutation> = members.iter().map(Permutation::inverse).collect();
    for i in rows {
        for j in i + 1..members.len() {
            let (u, v) = (&members[i], &members[j]);
            if u == v {
                return Some(Violation::Duplicate {
                    first: i,
                    second: j,
                });
            }
            let adjacent = match check {
                AdjacencyCheck::CycleType => v.compose_unchecked(&inverses[i]).is_k_derangement(k),
                AdjacencyCheck::PositionScan => first_agreeing_subset(u, v, k).is_none(),
            };
            if !adjacent {
                let agreeing = first_agreeing_subset(u, v, k)
                    .expect("non-adjacent pair always has an agreeing subset");
                return Some(Violation::NotAdjacent {
                    first: i,
                    second: j,
                    agreeing,
                });
            }
        }
    }
    None
}

pub fn verify_clique(cert: &CliqueCertificate) -> core::result::Result<(), Violation> {
    verify_clique_with(cert, AdjacencyCheck::CycleType)
}

pub fn verify_clique_with(
    cert: &CliqueCertificate,
    check: AdjacencyCheck,
) -> core::result::Result<(), Violation> {
    check_members(cert.n, cert.k, &cert.members)?;
    match first_clique_violation_in_rows(&cert.members, cert.k, 0..cert.members.len(), check) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// The stabilizer of `{1, ..., k}` in `S_n`, in lexicographic order.
pub fn build_independent_set(k: usize, n: usize) -> Result<IndependentSetCertificate> {
    if k == 0 || k >= n {
        return Err(Error::OutOfHypotheses(alloc::format!(
            "independent set needs 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if n > INDEPENDENT_SET_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: INDEPENDENT_SET_CAP,
        });
    }
    let mut members = Vec::new();
    for head in LexPermutations::new(k) {
        for tail in LexPermutations::new(n - k) {
            let mut img = head.zero_based().to_vec();
            img.extend(tail.zero_based().iter().map(|&x| x + k as u8));
            members.push(Permutation::from_zero_based_unchecked(img));
        }
    }
    Ok(IndependentSetCertificate {
        n,
        k,
        members,
        provenance: Provenance::SetStabilizer,
    })
}

pub fn first_independence_violation_in_rows(
    members: &[Permutation],
    k: usize,
    rows: Range<usize>,
) -> Option<Violation> {
    let inverses: Vec<Permutation> = members.iter().map(Permutation::inverse).collect();
    for i in rows {
        for j in i + 1..members.len() {
            if members[i] == members[j] {
                return Some(Violation::Duplicate {
                    first: i,
                    second: j,
                });
            }
            if members[j]
                .compose_unchecked(&inverses[i])
                .is_k_derangement(k)
            {
                return Some(Violation::Adjacent {
                    first: i,
                    second: j,
                });
            }
        }
    }
    None
}

pub fn verify_independent_set(
    cert: &IndependentSetCertificate,
) -> core::result::Result<(), Violation> {
    check_members(cert.n, cert.k, &cert.members)?;
    match first_independence_violation_in_rows(&cert.members, cert.k, 0..cert.members.len()) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Colors each vertex by the lexicographic index of its image of
/// `{1, ..., k}`; color classes are the cosets `σH` of the set stabilizer.
pub fn coset_coloring(k: usize, n: usize) -> Result<ColoringCertificate> {
    if k == 0 || k >= n {
        return Err(Error::OutOfHypotheses(alloc::format!(
            "coloring needs 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if n > EXPLICIT_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: EXPLICIT_CAP,
        });
    }
    let initial = KSubset::initial(k);
    let colors = LexPermutations::new(n)
        .map(|p| p.induced_image_unchecked(initial.zero_based()).lex_index(n) as u32)
        .collect();
    Ok(ColoringCertificate {
        n,
        k,
        colors,
        provenance: Provenance::CosetColoring,
    })
}

/// Checks range and properness; reports the edge `(u, s∘u)` with the least
/// `u` rank, then least neighbor rank.
pub fn verify_coloring(cert: &ColoringCertificate) -> core::result::Result<(), Violation> {
    let n = cert.n;
    if cert.k == 0 || n == 0 || n > EXPLICIT_CAP {
        return Err(Violation::Malformed(alloc::format!(
            "coloring needs k >= 1 and 1 <= n <= {EXPLICIT_CAP}"
        )));
    }
    let total = factorial_u64(n).unwrap();
    if cert.colors.len() as u64 != total {
        return Err(Violation::Malformed(alloc::format!(
            "{} colors for {total} vertices",
            cert.colors.len()
        )));
    }
    let limit = binomial_u64(n, cert.k).unwrap_or(u64::MAX).max(1);
    if let Some(&color) = cert.colors.iter().find(|&&c| c as u64 >= limit) {
        return Err(Violation::ColorOutOfRange { color, limit });
    }
    let k = cert.k;
    let connection = ConnectionSet::from_predicate(n, |p| p.is_k_derangement(k))
        .map_err(|e| Violation::Malformed(alloc::format!("{e}")))?;
    for (r, u) in LexPermutations::new(n).enumerate() {
        let mut clash: Option<(u64, Permutation)> = None;
        for s in connection.members() {
            let v = s.compose_unchecked(&u);
            let rv = rank_slice(v.zero_based());
            if cert.colors[rv as usize] == cert.colors[r]
                && clash.as_ref().is_none_or(|(best, _)| rv < *best)
            {
                clash = Some((rv, v));
            }
        }
        if let Some((_, v)) = clash {
            return Err(Violation::Monochromatic {
                u,
                v,
                color: cert.colors[r],
            });
        }
    }
    Ok(())
}

/// `α · ω <= n!`.
pub fn frankl_deza_check(alpha: u64, omega: u64, n: usize) -> bool {
    BigUint::from(alpha) * BigUint::from(omega) <= factorial(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactValues {
    pub omega: BigUint,
    pub alpha: BigUint,
    pub chi: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoreticalValues {
    pub k: usize,
    pub n: usize,
    /// `ω <= C(n,k)`.
    pub omega_bound: BigUint,
    /// `α >= k!(n-k)!`.
    pub alpha_lower: BigUint,
    /// `χ <= C(n,k)`.
    pub chi_upper: BigUint,
    /// Known exactly when `k = 2` and `n` is an odd prime power.
    pub exact: Option<ExactValues>,
}

pub fn theoretical_values(k: usize, n: usize) -> Result<TheoreticalValues> {
    if k == 0 || k >= n {
        return Err(Error::OutOfHypotheses(alloc::format!(
            "bounds need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let exact = (k == 2 && is_odd_prime_power(n as u64)).then(|| ExactValues {
        omega: binomial(n, 2),
        alpha: BigUint::from(2u32) * factorial(n - 2),
        chi: binomial(n, 2),
    });
    Ok(TheoreticalValues {
        k,
        n,
        omega_bound: binomial(n, k),
        alpha_lower: factorial(k) * factorial(n - k),
        chi_upper: binomial(n, k),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gf(p: u32, d: u32) -> FieldSpec {
        FieldSpec::new(p, d).unwrap()
    }

    #[test]
    fn affine_examples() {
        let f = gf(7, 1);
        let e = |l| f.element(l).unwrap();
        assert!(affine_arrangement(&f, e(1), e(0)).unwrap().is_identity());
        assert!(affine_arrangement(&f, e(0), e(3)).is_err());
        // Canonical base: entry i is label(4·(i-1)) + 1.
        assert_eq!(
            affine_arrangement(&f, e(4), e(0)).unwrap().one_line(),
            vec![1, 5, 2, 6, 3, 7, 4]
        );
    }

    #[test]
    fn clique_sizes() {
        for (p, d, size) in [(3, 1, 3), (5, 1, 10), (7, 1, 21), (3, 2, 36)] {
            let cert = build_clique(&gf(p, d), None).unwrap();
            assert_eq!(cert.members.len(), size);
            assert_eq!(verify_clique(&cert), Ok(()));
            assert_eq!(
                verify_clique_with(&cert, AdjacencyCheck::PositionScan),
                Ok(())
            );
        }
    }

    #[test]
    fn invalid_half_set_rejected() {
        let f = gf(7, 1);
        let t: Vec<_> = [1, 6, 2].iter().map(|&l| f.element(l).unwrap()).collect();
        assert!(build_clique(&f, Some(&t)).is_err());
    }

    #[test]
    fn clique_verifier_failures() {
        let e = Permutation::identity(4);
        let v = Permutation::parse_cycles("(1 2)(3 4)", Some(4)).unwrap();
        let cert = CliqueCertificate {
            n: 4,
            k: 2,
            members: vec![e.clone(), v],
            provenance: Provenance::Unspecified,
        };
        match verify_clique(&cert) {
            Err(Violation::NotAdjacent {
                first: 0,
                second: 1,
                agreeing,
            }) => {
                assert_eq!(agreeing.points(), vec![1, 2])
            }
            other => panic!("unexpected {other:?}"),
        }
        let dup = CliqueCertificate {
            members: vec![e.clone(), e.clone()],
            ..cert.clone()
        };
        assert_eq!(
            verify_clique(&dup),
            Err(Violation::Duplicate {
                first: 0,
                second: 1
            })
        );
        let wrong = CliqueCertificate {
            members: vec![e, Permutation::identity(5)],
            ..cert
        };
        assert_eq!(
            verify_clique(&wrong),
            Err(Violation::DegreeMismatch { index: 1 })
        );
    }

    #[test]
    fn independent_sets() {
        assert_eq!(build_independent_set(2, 4).unwrap().members.len(), 4);
        assert_eq!(build_independent_set(2, 5).unwrap().members.len(), 12);
        let single = build_independent_set(1, 2).unwrap();
        assert_eq!(single.members, vec![Permutation::identity(2)]);
        assert_eq!(
            verify_independent_set(&build_independent_set(2, 4).unwrap()),
            Ok(())
        );
        let bad = IndependentSetCertificate {
            n: 4,
            k: 2,
            members: vec![
                Permutation::identity(4),
                Permutation::parse_cycles("(1 2 3 4)", None).unwrap(),
            ],
            provenance: Provenance::Unspecified,
        };
        assert_eq!(
            verify_independent_set(&bad),
            Err(Violation::Adjacent {
                first: 0,
                second: 1
            })
        );
        let one = IndependentSetCertificate {
            members: vec![Permutation::identity(4)],
            ..bad
        };
        assert_eq!(verify_independent_set(&one), Ok(()));
        assert!(build_independent_set(3, 3).is_err());
        assert!(build_independent_set(2, 11).is_err());
    }

    #[test]
    fn colorings() {
        let c = coset_coloring(2, 4).unwrap();
        assert_eq!(c.colors_used(), 6);
        let mut class_sizes = vec![0; 6];
        for &col in &c.colors {
            class_sizes[col as usize] += 1;
        }
        assert_eq!(class_sizes, vec![4; 6]);
        assert_eq!(c.colors[0], 0); // identity gets the color of {1,2}
        assert_eq!(verify_coloring(&c), Ok(()));

        let mut bad = c.clone();
        bad.colors = vec![0; 24];
        assert!(matches!(
            verify_coloring(&bad),
            Err(Violation::Monochromatic { .. })
        ));
        bad.colors = vec![6; 24];
        assert!(matches!(
            verify_coloring(&bad),
            Err(Violation::ColorOutOfRange { .. })
        ));
        bad.colors.pop();
        assert!(matches!(
            verify_coloring(&bad),
            Err(Violation::Malformed(_))
        ));
    }

    #[test]
    fn coloring_from_assignments() {
        let c = coset_coloring(1, 3).unwrap();
        let pairs: Vec<_> = LexPermutations::new(3)
            .zip(c.colors.iter().copied())
            .collect();
        let rebuilt =
            ColoringCertificate::from_assignments(3, 1, &pairs, Provenance::Unspecified).unwrap();
        assert_eq!(rebuilt.colors, c.colors);
        assert!(matches!(
            ColoringCertificate::from_assignments(3, 1, &pairs[1..], Provenance::Unspecified),
            Err(Violation::Uncolored { .. })
        ));
        let mut dup = pairs.clone();
        dup[1] = dup[0].clone();
        assert!(matches!(
            ColoringCertificate::from_assignments(3, 1, &dup, Provenance::Unspecified),
            Err(Violation::DuplicateVertex { .. })
        ));
    }

    #[test]
    fn frankl_deza() {
        assert!(frankl_deza_check(4, 5, 4));
        assert!(frankl_deza_check(12, 10, 5));
        assert!(!frankl_deza_check(13, 10, 5));
        assert!(frankl_deza_check(1, 1, 1));
    }

    #[test]
    fn theory_table() {
        let v = theoretical_values(2, 7).unwrap();
        let exact = v.exact.unwrap();
        assert_eq!(exact.omega, BigUint::from(21u32));
        assert_eq!(exact.alpha, BigUint::from(240u32));
        assert_eq!(exact.chi, BigUint::from(21u32));
        let v = theoretical_values(2, 4).unwrap();
        assert_eq!(v.exact, None);
        assert_eq!(
            (v.omega_bound, v.alpha_lower, v.chi_upper),
            (
                BigUint::from(6u32),
                BigUint::from(4u32),
                BigUint::from(6u32)
            )
        );
        let v = theoretical_values(1, 2).unwrap();
        assert_eq!(
            (v.omega_bound, v.alpha_lower, v.chi_upper),
            (
                BigUint::from(2u32),
                BigUint::from(1u32),
                BigUint::from(2u32)
            )
        );
        assert!(theoretical_values(3, 3).is_err());
    }

    #[test]
    fn provenance_rebuild() {
        let cert = build_clique(&gf(5, 1), None).unwrap();
        assert_eq!(rebuild_from_provenance(&cert).unwrap().unwrap(), cert);
        let plain = CliqueCertificate {
            provenance: Provenance::Unspecified,
            ..cert
        };
        assert_eq!(rebuild_from_provenance(&plain).unwrap(), None);
    }
}
