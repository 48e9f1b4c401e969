//! Switching of k-uniform hypergraphs across a vertex partition `V = V1 ∪ V2`.
//!
//! Requirements: every edge meets `V1` in at most one vertex, and every
//! `(k−1)`-subset of `V2` has `0`, `|V1|/2` or `|V1|` neighbors in `V1`. Each
//! subset with `|V1|/2` neighbors trades its neighbor set for the complement
//! in `V1`. The result is `P·𝒜·Pᵀ` with `P = (2/n1)J − I` on `V1` and the
//! identity on `V2`, an orthogonal involution.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::format_rational;
use crate::algebra::{Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::tensor::mat_sim;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingPartition {
    n: usize,
    v1: VertexSet,
    v2: VertexSet,
}

impl SwitchingPartition {
    /// `V2` is everything outside `v1`. Vertices are 0-based.
    pub fn new(n: usize, v1: Vec<usize>) -> Result<Self> {
        let v1 = VertexSet::new(v1, n).map_err(|e| Error::InvalidPartition(e.to_string()))?;
        if v1.len() < 2 || v1.len() % 2 == 1 {
            return Err(Error::OddV1(v1.len()));
        }
        let v2 = VertexSet::new((0..n).filter(|&v| !v1.contains(v)).collect(), n)?;
        Ok(SwitchingPartition { n, v1, v2 })
    }

    /// From 1-based ids, as in `--v1 1,2,3,4`.
    pub fn from_one_based(n: usize, v1: &[usize]) -> Result<Self> {
        if v1.contains(&0) {
            return Err(Error::InvalidPartition("vertex ids are 1-based".into()));
        }
        Self::new(n, v1.iter().map(|v| v - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v1(&self) -> &VertexSet {
        &self.v1
    }

    pub fn v2(&self) -> &VertexSet {
        &self.v2
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PartitionFile::from(self)).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: PartitionFile = serde_json::from_str(s).map_err(|e| Error::InvalidPartition(e.to_string()))?;
        let p = Self::from_one_based(f.n, &f.v1)?;
        if let Some(v2) = f.v2 {
            if v2.iter().map(|v| v.wrapping_sub(1)).ne(p.v2.iter()) {
                return Err(Error::InvalidPartition("v2 is not the complement of v1".into()));
            }
        }
        Ok(p)
    }
}

/// On-disk form with 1-based ids.
#[derive(Serialize, Deserialize)]
struct PartitionFile {
    n: usize,
    v1: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v2: Option<Vec<usize>>,
}

impl From<&SwitchingPartition> for PartitionFile {
    fn from(p: &SwitchingPartition) -> Self {
        PartitionFile { n: p.n, v1: one_based(p.v1.as_slice()), v2: Some(one_based(p.v2.as_slice())) }
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// Outcome of a successful validation, with 1-based ids when serialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchReport {
    /// `(k−1)`-subsets of `V2` with exactly `|V1|/2` neighbors in `V1`.
    pub switched_sets: Vec<Vec<usize>>,
    /// Number of `(k−1)`-subsets of `V2` by neighbor count.
    pub counts: BTreeMap<usize, usize>,
}

/// Checks both switching conditions.
pub fn validate(h: &Hypergraph, p: &SwitchingPartition) -> Result<SwitchReport> {
    Ok(analyze(h, p)?.0)
}

type HalfSets = Vec<(VertexSet, VertexSet)>;

fn analyze(h: &Hypergraph, p: &SwitchingPartition) -> Result<(SwitchReport, HalfSets)> {
    if p.n != h.n() {
        return Err(Error::InvalidPartition(format!("partition covers {} vertices, hypergraph has {}", p.n, h.n())));
    }
    let n1 = p.v1.len();
    for e in h.edges() {
        let count = e.iter().filter(|&&v| p.v1.contains(v)).count();
        if count > 1 {
            return Err(Error::ConditionAViolated { edge: one_based(e), count });
        }
    }
    let mut counts: BTreeMap<usize, usize> = [(0, 0), (n1 / 2, 0), (n1, 0)].into_iter().collect();
    let mut half = Vec::new();
    let mut switched_sets = Vec::new();
    for s in p.v2.iter().combinations(h.k() - 1) {
        let s = VertexSet::new(s, h.n())?;
        let nb = h.neighbors_in(&s, &p.v1)?;
        let count = nb.len();
        if count != 0 && count != n1 && 2 * count != n1 {
            return Err(Error::ConditionBViolated { subset: one_based(s.as_slice()), count, v1: n1 });
        }
        *counts.entry(count).or_default() += 1;
        if 2 * count == n1 {
            switched_sets.push(one_based(s.as_slice()));
            half.push((s, nb));
        }
    }
    Ok((SwitchReport { switched_sets, counts }, half))
}

/// Switches every half-count subset at once.
pub fn switch(h: &Hypergraph, p: &SwitchingPartition) -> Result<Hypergraph> {
    let (_, half) = analyze(h, p)?;
    let mut edges: Vec<Vec<usize>> = h.edges().map(<[usize]>::to_vec).collect();
    for (s, nb) in &half {
        let with = |u: usize| {
            let mut e = s.as_slice().to_vec();
            e.push(u);
            e.sort_unstable();
            e
        };
        let old: Vec<Vec<usize>> = nb.iter().map(with).collect();
        edges.retain(|e| !old.contains(e));
        edges.extend(p.v1.iter().filter(|&u| !nb.contains(u)).map(with));
    }
    Hypergraph::new(h.n(), h.k(), edges)
}

/// `P` in the hypergraph's own labeling: `2/n1 − δ_uw` on `V1 × V1`, the
/// identity on `V2`, zero elsewhere.
pub fn switching_matrix(p: &SwitchingPartition) -> RationalMatrix {
    let n1 = p.v1.len() as i64;
    let off = Rational::new(2.into(), n1.into());
    let diag = &off - Rational::from_integer(1.into());
    let mut m = RationalMatrix::zeros(p.n, p.n);
    for u in p.v1.iter() {
        for w in p.v1.iter() {
            m.set(u, w, if u == w { diag.clone() } else { off.clone() });
        }
    }
    for v in p.v2.iter() {
        m.set(v, v, Rational::from_integer(1.into()));
    }
    m
}

/// `V1` first, then `V2`: `perm[i]` is the vertex placed at position `i`.
pub fn block_order(p: &SwitchingPartition) -> Vec<usize> {
    p.v1.iter().chain(p.v2.iter()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// 1-based tensor index.
    pub index: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityVerdict {
    pub holds: bool,
    pub mismatch: Option<Mismatch>,
}

/// Exact check of `P·𝒜_H·Pᵀ = 𝒜_G`.
pub fn verify_similarity(h: &Hypergraph, g: &Hypergraph, p: &SwitchingPartition) -> Result<SimilarityVerdict> {
    if h.n() != g.n() || h.k() != g.k() || p.n != h.n() {
        return Err(Error::DimMismatch("hypergraphs and partition must share n and k".into()));
    }
    let transformed = mat_sim(&switching_matrix(p), &h.adjacency_tensor())?;
    let target = g.adjacency_tensor();
    let mismatch = transformed.entries().iter().zip(target.entries()).position(|(a, b)| a != b).map(|flat| Mismatch {
        index: one_based(&target.multi_index(flat)),
        expected: format_rational(&target.entries()[flat]),
        actual: format_rational(&transformed.entries()[flat]),
    });
    Ok(SimilarityVerdict { holds: mismatch.is_none(), mismatch })
}

/// All `V1` of the given size that satisfy both conditions.
pub fn search_partitions(h: &Hypergraph, v1_size: usize) -> Vec<SwitchingPartition> {
    (0..h.n())
        .combinations(v1_size)
        .filter_map(|v1| SwitchingPartition::new(h.n(), v1).ok())
        .filter(|p| validate(h, p).is_ok())
        .collect()
}

/// The standard non-isomorphic pair on `u1..u4, v1..vn` (ids `1..4` and
/// `5..n+4`), with `F` the consecutive triples of the `v`'s.
pub fn switching_example(n: usize) -> Result<(Hypergraph, Hypergraph, SwitchingPartition)> {
    if n < 3 {
        return Err(Error::BadSize(format!("example needs n >= 3, got {n}")));
    }
    let family = (0..n - 2).map(|i| vec![4 + i, 5 + i, 6 + i]).collect();
    switching_example_with_family(n, family)
}

/// Same pair with a caller-supplied `F` (0-based ids among the `v`'s), which
/// must cover `v4..vn`.
pub fn switching_example_with_family(
    n: usize,
    family: Vec<Vec<usize>>,
) -> Result<(Hypergraph, Hypergraph, SwitchingPartition)> {
    if n < 3 {
        return Err(Error::BadSize(format!("example needs n >= 3, got {n}")));
    }
    let total = n + 4;
    let (u, v) = (|i: usize| i - 1, |i: usize| i + 3);
    if family.iter().flatten().any(|&x| x < 4 || x >= total) {
        return Err(Error::BadSize("F must use only v-vertices".into()));
    }
    if let Some(x) = (v(4)..total).find(|x| !family.iter().any(|e| e.contains(x))) {
        return Err(Error::BadSize(format!("F does not cover vertex {}", x + 1)));
    }
    let h_edges = [
        [v(1), v(2), u(2)],
        [v(1), v(2), u(3)],
        [v(2), v(3), u(2)],
        [v(2), v(3), u(4)],
        [v(1), v(3), u(3)],
        [v(1), v(3), u(4)],
    ];
    let g_edges = [
        [v(1), v(2), u(1)],
        [v(1), v(2), u(4)],
        [v(2), v(3), u(1)],
        [v(2), v(3), u(3)],
        [v(1), v(3), u(1)],
        [v(1), v(3), u(2)],
    ];
    let build = |base: [[usize; 3]; 6]| {
        Hypergraph::new(total, 3, base.iter().map(|e| e.to_vec()).chain(family.iter().cloned()))
    };
    Ok((build(h_edges)?, build(g_edges)?, SwitchingPartition::new(total, (0..4).collect())?))
}

/// Entries of `P·𝒜·Pᵀ` whose indices lie entirely in `V2` equal those of
/// `𝒜`, and entries with two or more indices in `V1` vanish in both.
pub fn block_invariants_hold(h: &Hypergraph, p: &SwitchingPartition) -> Result<bool> {
    let a = h.adjacency_tensor();
    let b = mat_sim(&switching_matrix(p), &a)?;
    for flat in 0..a.entries().len() {
        let idx = a.multi_index(flat);
        let in_v1 = idx.iter().filter(|&&i| p.v1.contains(i)).count();
        let (x, y) = (&a.entries()[flat], &b.entries()[flat]);
        if (in_v1 == 0 && x != y) || (in_v1 >= 2 && !(x.is_zero() && y.is_zero())) {
            return Ok(false);
        }
    }
    Ok(true)
}
