//! 1-factorizations of complete and complete bipartite graphs, including the
//! split factorizations used by the constructive extension routines.
//!
//! A 1-factor is a perfect matching; a 1-factorization partitions the edge set
//! of a graph into 1-factors. The complete graph on `m` vertices (m even) has
//! factorizations with `m - 1` factors of `m / 2` edges each.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One perfect matching, stored as `(lo, hi)` edges sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OneFactor {
    edges: Vec<(usize, usize)>,
}

impl OneFactor {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        OneFactor { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Union of two vertex-disjoint matchings.
    pub fn union(&self, other: &OneFactor) -> OneFactor {
        OneFactor::new(self.edges.iter().chain(other.edges.iter()).copied())
    }
}

/// An ordered list of 1-factors over vertices `0..vertex_count` (for the
/// complete case) or over explicit vertex labels (bipartite case).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorization {
    #[serde(rename = "m")]
    vertex_count: usize,
    factors: Vec<OneFactor>,
}

impl OneFactorization {
    pub fn new(vertex_count: usize, factors: Vec<OneFactor>) -> Self {
        OneFactorization {
            vertex_count,
            factors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn factors(&self) -> &[OneFactor] {
        &self.factors
    }

    pub fn factors_mut(&mut self) -> &mut Vec<OneFactor> {
        &mut self.factors
    }
}

/// Which graph a factorization is supposed to cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    /// Complete graph on vertices `0..m`.
    Complete { m: usize },
    /// Complete bipartite graph between two disjoint label sets of equal size.
    CompleteBipartite {
        half_a: Vec<usize>,
        half_b: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorizationViolation {
    OddVertexCount {
        m: usize,
    },
    WrongFactorCount {
        expected: usize,
        actual: usize,
    },
    /// An edge leaves the declared vertex set or joins the wrong sides.
    ForeignEdge {
        factor: usize,
        edge: (usize, usize),
    },
    /// A factor misses or repeats a vertex.
    NotPerfectMatching {
        factor: usize,
        vertex: usize,
    },
    /// The same edge occurs in two factors.
    DuplicateEdge {
        edge: (usize, usize),
    },
    /// A graph edge occurs in no factor.
    UncoveredEdge {
        edge: (usize, usize),
    },
}

impl std::fmt::Display for FactorizationViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorizationViolation::OddVertexCount { m } => {
                write!(f, "vertex count {m} is odd")
            }
            FactorizationViolation::WrongFactorCount { expected, actual } => {
                write!(f, "expected {expected} factors, found {actual}")
            }
            FactorizationViolation::ForeignEdge { factor, edge } => {
                write!(
                    f,
                    "factor {factor} contains foreign edge {{{}, {}}}",
                    edge.0, edge.1
                )
            }
            FactorizationViolation::NotPerfectMatching { factor, vertex } => {
                write!(
                    f,
                    "factor {factor} does not match vertex {vertex} exactly once"
                )
            }
            FactorizationViolation::DuplicateEdge { edge } => {
                write!(
                    f,
                    "edge {{{}, {}}} occurs in more than one factor",
                    edge.0, edge.1
                )
            }
            FactorizationViolation::UncoveredEdge { edge } => {
                write!(f, "edge {{{}, {}}} occurs in no factor", edge.0, edge.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub valid: bool,
    pub violation: Option<FactorizationViolation>,
}

impl FactorizationReport {
    fn ok() -> Self {
        FactorizationReport {
            valid: true,
            violation: None,
        }
    }
    fn fail(violation: FactorizationViolation) -> Self {
        FactorizationReport {
            valid: false,
            violation: Some(violation),
        }
    }
}

/// Checks that every factor is a perfect matching of the declared vertex set
/// and that every graph edge appears in exactly one factor.
pub fn validate_factorization(f: &OneFactorization, graph: &GraphKind) -> FactorizationReport {
    match graph {
        GraphKind::Complete { m } => {
            let m = *m;
            if m % 2 != 0 || m == 0 {
                return FactorizationReport::fail(FactorizationViolation::OddVertexCount { m });
            }
            if f.factors.len() != m - 1 {
                return FactorizationReport::fail(FactorizationViolation::WrongFactorCount {
                    expected: m - 1,
                    actual: f.factors.len(),
                });
            }
            let mut covered = vec![false; m * m];
            for (fi, factor) in f.factors.iter().enumerate() {
                let mut hit = vec![false; m];
                for &(a, b) in factor.edges() {
                    if a >= m || b >= m || a == b {
                        return FactorizationReport::fail(FactorizationViolation::ForeignEdge {
                            factor: fi,
                            edge: (a, b),
                        });
                    }
                    for &x in &[a, b] {
                        if hit[x] {
                            return FactorizationReport::fail(
                                FactorizationViolation::NotPerfectMatching {
                                    factor: fi,
                                    vertex: x,
                                },
                            );
                        }
                        hit[x] = true;
                    }
                    let idx = a.min(b) * m + a.max(b);
                    if covered[idx] {
                        return FactorizationReport::fail(FactorizationViolation::DuplicateEdge {
                            edge: (a.min(b), a.max(b)),
                        });
                    }
                    covered[idx] = true;
                }
                if let Some(x) = hit.iter().position(|&h| !h) {
                    return FactorizationReport::fail(FactorizationViolation::NotPerfectMatching {
                        factor: fi,
                        vertex: x,
                    });
                }
            }
            for a in 0..m {
                for b in a + 1..m {
                    if !covered[a * m + b] {
                        return FactorizationReport::fail(FactorizationViolation::UncoveredEdge {
                            edge: (a, b),
                        });
                    }
                }
            }
            FactorizationReport::ok()
        }
        GraphKind::CompleteBipartite { half_a, half_b } => {
            let n = half_a.len();
            if half_b.len() != n || n == 0 || f.factors.len() != n {
                return FactorizationReport::fail(FactorizationViolation::WrongFactorCount {
                    expected: n,
                    actual: f.factors.len(),
                });
            }
            let side_a: BTreeMap<usize, usize> =
                half_a.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let side_b: BTreeMap<usize, usize> =
                half_b.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let mut covered = vec![false; n * n];
            for (fi, factor) in f.factors.iter().enumerate() {
                let mut hit_a = vec![false; n];
                let mut hit_b = vec![false; n];
                for &(x, y) in factor.edges() {
                    let (ia, ib) = match (side_a.get(&x), side_b.get(&y)) {
                        (Some(&ia), Some(&ib)) => (ia, ib),
                        _ => match (side_a.get(&y), side_b.get(&x)) {
                            (Some(&ia), Some(&ib)) => (ia, ib),
                            _ => {
                                return FactorizationReport::fail(
                                    FactorizationViolation::ForeignEdge {
                                        factor: fi,
                                        edge: (x, y),
                                    },
                                )
                            }
                        },
                    };
                    if hit_a[ia] {
                        return FactorizationReport::fail(
                            FactorizationViolation::NotPerfectMatching {
                                factor: fi,
                                vertex: half_a[ia],
                            },
                        );
                    }
                    if hit_b[ib] {
                        return FactorizationReport::fail(
                            FactorizationViolation::NotPerfectMatching {
                                factor: fi,
                                vertex: half_b[ib],
                            },
                        );
                    }
                    hit_a[ia] = true;
                    hit_b[ib] = true;
                    if covered[ia * n + ib] {
                        return FactorizationReport::fail(FactorizationViolation::DuplicateEdge {
                            edge: (x.min(y), x.max(y)),
                        });
                    }
                    covered[ia * n + ib] = true;
                }
                if let Some(i) = hit_a.iter().position(|&h| !h) {
                    return FactorizationReport::fail(FactorizationViolation::NotPerfectMatching {
                        factor: fi,
                        vertex: half_a[i],
                    });
                }
            }
            for ia in 0..n {
                for ib in 0..n {
                    if !covered[ia * n + ib] {
                        let (x, y) = (half_a[ia], half_b[ib]);
                        return FactorizationReport::fail(FactorizationViolation::UncoveredEdge {
                            edge: (x.min(y), x.max(y)),
                        });
                    }
                }
            }
            FactorizationReport::ok()
        }
    }
}

/// Round-robin ("circle") 1-factorization of the complete graph on `0..m`,
/// `m` even. Vertex `m - 1` is the hub; in round `r` it is matched with `r`,
/// and the remaining vertices pair off as `(r - i, r + i) mod (m - 1)`.
pub fn circle_factorization(m: usize) -> Result<OneFactorization> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::OddOrder { m });
    }
    let n = m - 1;
    let mut factors = Vec::with_capacity(n);
    for r in 0..n {
        let mut edges = vec![(n, r)];
        for i in 1..m / 2 {
            edges.push(((r + n - i) % n, (r + i) % n));
        }
        factors.push(OneFactor::new(edges));
    }
    Ok(OneFactorization::new(m, factors))
}

/// 1-factorization of the complete bipartite graph between two equal-size,
/// disjoint vertex lists: factor `s` matches `a[j]` with `b[(j + s) mod n]`.
pub fn bipartite_factorization(half_a: &[usize], half_b: &[usize]) -> Result<Vec<OneFactor>> {
    let n = half_a.len();
    if half_b.len() != n || n == 0 {
        return Err(Error::SizeMismatch {
            what: "bipartition halves",
            expected: n.max(1),
            actual: half_b.len(),
        });
    }
    if half_a.iter().any(|x| half_b.contains(x)) {
        return Err(Error::InvalidInput {
            detail: "bipartition halves are not disjoint".into(),
        });
    }
    Ok((0..n)
        .map(|s| OneFactor::new((0..n).map(|j| (half_a[j], half_b[(j + s) % n]))))
        .collect())
}

/// One split level of a [`SplitFactorization`]: a block and the indices of the
/// factors joining it crosswise to everything deeper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitLayer {
    pub block: Vec<usize>,
    pub cross_indices: Vec<usize>,
}

/// A 1-factorization of `K_m` with split structure: cross factors between a
/// block and the union of the deeper blocks at each level, and combined
/// factors made of within-block matchings. `half1`/`half2`/`bipartite_indices`
/// give the top-level view; `layers` and `tail_block` describe the full
/// nesting; `combined_indices` are the deepest, all-within-block factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFactorization {
    #[serde(flatten)]
    pub factorization: OneFactorization,
    pub half1: Vec<usize>,
    pub half2: Vec<usize>,
    pub bipartite_indices: Vec<usize>,
    pub layers: Vec<SplitLayer>,
    /// The deepest block (the one paired with the last layer's block).
    pub tail_block: Vec<usize>,
    pub combined_indices: Vec<usize>,
}

/// Split factorization of `K_{v+1}` used by the pairwise constructive
/// extension: requires `v + 1 ≡ 0 (mod 4)`. Writes the vertex set as two
/// halves `Y1 = 0..h`, `Y2 = h..v+1` with `h = (v+1)/2`; the first `h` factors
/// are a bipartite factorization between the halves, the remaining `h - 1`
/// factors are unions `G_i ∪ H_i` of circle factors within each half.
pub fn theorem3_factorization(v: usize) -> Result<SplitFactorization> {
    let m = v + 1;
    if !m.is_multiple_of(4) {
        return Err(Error::Congruence { m });
    }
    recursive_split_factorization(m, &[m / 2, m / 2])
}

/// Layered split factorization of `K_m` over nested halvings.
///
/// `part_sizes` must be `[m/2, m/4, ..., m/2^(p-1), m/2^(p-1)]`: each block is
/// half the remainder, and the innermost two blocks are equal. Cross factors
/// between block `l` and the union of deeper blocks come first per level;
/// the deepest factors combine matchings inside every block. Every block that
/// needs an internal matching (size at least 2) must have even size.
pub fn recursive_split_factorization(m: usize, part_sizes: &[usize]) -> Result<SplitFactorization> {
    let p = part_sizes.len();
    if p < 2 {
        return Err(Error::InvalidInput {
            detail: "need at least two blocks".into(),
        });
    }
    if part_sizes.iter().sum::<usize>() != m {
        return Err(Error::SizeMismatch {
            what: "block sizes sum",
            expected: m,
            actual: part_sizes.iter().sum(),
        });
    }
    // Shape: strict halving, with the last two blocks equal.
    let mut rest = m;
    for (l, &s) in part_sizes.iter().enumerate() {
        let expected = if l + 1 < p { rest / 2 } else { rest };
        if s != expected || (l + 1 < p && !rest.is_multiple_of(2)) {
            return Err(Error::SizeMismatch {
                what: "halving shape",
                expected,
                actual: s,
            });
        }
        rest -= s;
    }
    // Evenness where an internal matching is required.
    for &s in part_sizes {
        if s >= 2 && s % 2 != 0 {
            return Err(Error::Parity { size: s });
        }
    }
    let vertices: Vec<usize> = (0..m).collect();
    let (factors, layers, tail) = build_split(&vertices, part_sizes)?;
    let half1 = layers[0].block.clone();
    let half2: Vec<usize> = vertices[half1.len()..].to_vec();
    let bipartite_indices = layers[0].cross_indices.clone();
    let cross_total: usize = layers.iter().map(|l| l.cross_indices.len()).sum();
    let combined_indices: Vec<usize> = (cross_total..m - 1).collect();
    Ok(SplitFactorization {
        factorization: OneFactorization::new(m, factors),
        half1,
        half2,
        bipartite_indices,
        layers,
        tail_block: tail,
        combined_indices,
    })
}

/// Builds the layered factors over an explicit vertex slice. Returns the
/// factors (cross factors of this level first, then the combined factors),
/// the layer descriptors, and the deepest block.
fn build_split(
    verts: &[usize],
    parts: &[usize],
) -> Result<(Vec<OneFactor>, Vec<SplitLayer>, Vec<usize>)> {
    let h = parts[0];
    let block: Vec<usize> = verts[..h].to_vec();
    let rest: Vec<usize> = verts[h..].to_vec();
    let cross = bipartite_factorization(&block, &rest)?;
    let within_block: Vec<OneFactor> = if h >= 2 {
        circle_factorization(h)?
            .factors()
            .iter()
            .map(|f| OneFactor::new(f.edges().iter().map(|&(a, b)| (block[a], block[b]))))
            .collect()
    } else {
        Vec::new()
    };
    if parts.len() == 2 {
        let within_rest: Vec<OneFactor> = if h >= 2 {
            circle_factorization(h)?
                .factors()
                .iter()
                .map(|f| OneFactor::new(f.edges().iter().map(|&(a, b)| (rest[a], rest[b]))))
                .collect()
        } else {
            Vec::new()
        };
        let mut factors = cross;
        for (g, hf) in within_block.iter().zip(within_rest.iter()) {
            factors.push(g.union(hf));
        }
        let layers = vec![SplitLayer {
            block: block.clone(),
            cross_indices: (0..h).collect(),
        }];
        return Ok((factors, layers, rest));
    }
    let (inner_factors, inner_layers, tail) = build_split(&rest, &parts[1..])?;
    // Deeper factors count |rest| - 1 = h - 1, matching the within-block factors.
    debug_assert_eq!(inner_factors.len(), within_block.len());
    let mut factors = cross;
    for (g, inner) in within_block.iter().zip(inner_factors.iter()) {
        factors.push(g.union(inner));
    }
    let mut layers = vec![SplitLayer {
        block,
        cross_indices: (0..h).collect(),
    }];
    for layer in inner_layers {
        layers.push(SplitLayer {
            block: layer.block,
            cross_indices: layer.cross_indices.iter().map(|i| i + h).collect(),
        });
    }
    Ok((factors, layers, tail))
}
