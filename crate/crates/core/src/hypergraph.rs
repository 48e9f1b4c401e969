//! Simple k-uniform hypergraphs on the vertices `0..n`.
//!
//! Vertices are 0-based in memory and 1-based in the text format:
//!
//! ```text
//! # comment
//! 5 3
//! 1 2 3
//! 2 3 5
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::inv_factorial;
use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Largest vertex count accepted by [`canonical_form`].
pub const CANONICAL_MAX_N: usize = 10;
/// Largest `C(n, k)` for bitmask enumeration.
pub const ENUMERATION_MAX_EDGES: u128 = 63;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Sorted, duplicate-free subset of `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>, n: usize) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::BadSize(format!("vertex {} out of range 1..={n}", v + 1)));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadSize("repeated vertex in set".into()));
        }
        Ok(VertexSet(vertices))
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if k < 2 || n == 0 {
            return Err(Error::BadSize(format!("need n >= 1 and k >= 2, got n={n} k={k}")));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            let e = VertexSet::new(e, n)?.0;
            if e.len() != k {
                return Err(Error::BadSize(format!(
                    "edge {} has {} distinct vertices, expected {k}",
                    one_based(&e),
                    e.len()
                )));
            }
            if !set.insert(e.clone()) {
                return Err(Error::BadSize(format!("duplicate edge {}", one_based(&e))));
            }
        }
        Ok(Hypergraph { n, k, edges: set })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, [])
    }

    /// `K_n^k`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, (0..n).combinations(k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Order of the vertices in `e` does not matter.
    pub fn has_edge(&self, e: &[usize]) -> bool {
        let mut e = e.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.degrees().iter().enumerate().filter(|(_, &d)| d == 0).map(|(v, _)| v).collect()
    }

    /// Entries `1/(k−1)!` at every ordering of every edge.
    pub fn adjacency_tensor(&self) -> Tensor {
        let mut t = Tensor::zeros(self.k, self.n).expect("k >= 2 and n >= 1");
        let w = inv_factorial(self.k - 1);
        for e in &self.edges {
            for idx in e.iter().copied().permutations(self.k) {
                t.set(&idx, w.clone());
            }
        }
        t
    }

    pub fn complement(&self) -> Hypergraph {
        let edges = (0..self.n).combinations(self.k).filter(|e| !self.edges.contains(e)).collect();
        Hypergraph { n: self.n, k: self.k, edges }
    }

    /// `(k+1)`-sets all of whose `k`-subsets are edges.
    pub fn count_simplices(&self) -> usize {
        (0..self.n)
            .combinations(self.k + 1)
            .filter(|s| s.iter().copied().combinations(self.k).all(|e| self.edges.contains(&e)))
            .count()
    }

    /// Vertices `w ∈ W \ S` with `S ∪ {w}` an edge.
    pub fn neighbors_in(&self, s: &VertexSet, w: &VertexSet) -> Result<VertexSet> {
        if s.len() + 1 != self.k {
            return Err(Error::BadSetSize { expected: self.k - 1, actual: s.len() });
        }
        let out = w
            .iter()
            .filter(|&v| !s.contains(v))
            .filter(|&v| {
                let mut e = s.0.clone();
                e.push(v);
                e.sort_unstable();
                self.edges.contains(&e)
            })
            .collect();
        Ok(VertexSet(out))
    }

    /// Vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut m: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        Hypergraph { n: self.n, k: self.k, edges }
    }

    /// Edge set as a bitmask over the colex-ranked `k`-subsets.
    pub fn to_mask(&self) -> Result<u64> {
        check_mask_cap(self.n, self.k)?;
        Ok(self.edges.iter().fold(0u64, |m, e| m | (1u64 << colex_rank(e))))
    }

    pub fn from_mask(n: usize, k: usize, mask: u64) -> Result<Self> {
        check_mask_cap(n, k)?;
        let subsets = k_subsets_colex(n, k);
        if subsets.len() < 64 && mask >> subsets.len() != 0 {
            return Err(Error::BadSize(format!("mask {mask:#x} has bits beyond C({n},{k})")));
        }
        let edges = subsets.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
        Ok(Hypergraph { n, k, edges })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = BTreeSet::new();
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last = line;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let nums: Vec<usize> = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("not a vertex id: {t:?}") }))
                .collect::<Result<_>>()?;
            let Some((n, k)) = header else {
                let [n, k] = nums[..] else {
                    return Err(Error::Parse { line, msg: "header must be \"n k\"".into() });
                };
                if n == 0 || k < 2 {
                    return Err(Error::Parse { line, msg: format!("need n >= 1 and k >= 2, got n={n} k={k}") });
                }
                header = Some((n, k));
                continue;
            };
            if nums.len() != k {
                return Err(Error::Parse { line, msg: format!("edge has {} vertices, expected {k}", nums.len()) });
            }
            if let Some(&v) = nums.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::Parse { line, msg: format!("vertex {v} out of range 1..={n}") });
            }
            if nums.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse { line, msg: "vertex ids must be strictly ascending".into() });
            }
            if !edges.insert(nums.iter().map(|v| v - 1).collect::<Vec<_>>()) {
                return Err(Error::Parse { line, msg: "duplicate edge".into() });
            }
        }
        let (n, k) = header.ok_or(Error::Parse { line: last.max(1), msg: "missing \"n k\" header".into() })?;
        Ok(Hypergraph { n, k, edges })
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        for e in &self.edges {
            writeln!(f, "{}", e.iter().map(|v| v + 1).join(" "))?;
        }
        Ok(())
    }
}

/// JSON form: `{"n": .., "k": .., "edges": [[1-based ids], ..]}`.
#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let edges = self.edges.iter().map(|e| e.iter().map(|v| v + 1).collect()).collect();
        HypergraphJson { n: self.n, k: self.k, edges }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HypergraphJson::deserialize(d)?;
        if j.edges.iter().flatten().any(|&v| v == 0) {
            return Err(serde::de::Error::custom("vertex ids are 1-based"));
        }
        let edges = j.edges.into_iter().map(|e| e.into_iter().map(|v| v - 1).collect::<Vec<_>>());
        Hypergraph::new(j.n, j.k, edges).map_err(serde::de::Error::custom)
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph::parse(s)
    }
}

fn one_based(e: &[usize]) -> String {
    format!("{{{}}}", e.iter().map(|v| v + 1).join(","))
}

fn check_mask_cap(n: usize, k: usize) -> Result<()> {
    let c = binomial(n, k);
    if c > ENUMERATION_MAX_EDGES {
        return Err(Error::CapExceeded {
            what: "C(n,k) for bitmask enumeration",
            value: c,
            cap: ENUMERATION_MAX_EDGES,
        });
    }
    Ok(())
}

/// `Σ_i C(e_i, i+1)` for a sorted subset.
pub fn colex_rank(e: &[usize]) -> usize {
    e.iter().enumerate().map(|(i, &v)| binomial(v, i + 1) as usize).sum()
}

/// All `k`-subsets of `0..n`, position equal to colex rank.
pub fn k_subsets_colex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    all.sort_by_key(|e| colex_rank(e));
    all
}

/// Minimal edge bitmask over all vertex relabelings; equal iff isomorphic.
///
/// Words are stored most significant first so the derived ordering is the
/// numeric one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub k: usize,
    pub words: Vec<u64>,
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.n, self.k)?;
        for w in &self.words {
            write!(f, "{w:016x}")?;
        }
        Ok(())
    }
}

pub fn canonical_form(h: &Hypergraph) -> Result<CanonicalForm> {
    canonical_form_capped(h, CANONICAL_MAX_N)
}

pub fn canonical_form_capped(h: &Hypergraph, max_n: usize) -> Result<CanonicalForm> {
    if h.n > max_n {
        return Err(Error::CapExceeded {
            what: "vertex count for canonical form",
            value: h.n as u128,
            cap: max_n as u128,
        });
    }
    let total = binomial(h.n, h.k) as usize;
    let nwords = total.div_ceil(64).max(1);
    let edges: Vec<&Vec<usize>> = h.edges.iter().collect();
    let mut best: Option<Vec<u64>> = None;
    let mut mapped = vec![0usize; h.k];
    for perm in (0..h.n).permutations(h.n) {
        let mut words = vec![0u64; nwords];
        for e in &edges {
            for (slot, &v) in mapped.iter_mut().zip(e.iter()) {
                *slot = perm[v];
            }
            mapped.sort_unstable();
            let r = colex_rank(&mapped);
            words[nwords - 1 - r / 64] |= 1u64 << (r % 64);
        }
        if best.as_ref().is_none_or(|b| words < *b) {
            best = Some(words);
        }
    }
    Ok(CanonicalForm { n: h.n, k: h.k, words: best.unwrap_or_else(|| vec![0; nwords]) })
}

/// A relabeling `perm` with `g.relabel(perm) == h`, if one exists.
pub fn is_isomorphic(g: &Hypergraph, h: &Hypergraph) -> Option<Vec<usize>> {
    if g.n != h.n || g.k != h.k || g.edge_count() != h.edge_count() {
        return None;
    }
    let (dg, dh) = (g.degrees(), h.degrees());
    if dg.iter().copied().sorted().ne(dh.iter().copied().sorted()) {
        return None;
    }
    let incidence = |x: &Hypergraph| {
        let mut inc = vec![Vec::new(); x.n];
        for e in &x.edges {
            for &v in e {
                inc[v].push(e.clone());
            }
        }
        inc
    };
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(dg[v]));
    let mut search = IsoSearch {
        g_inc: incidence(g),
        h_inc: incidence(h),
        h_edges: &h.edges,
        dg,
        dh,
        order,
        map: vec![usize::MAX; g.n],
        inverse: vec![usize::MAX; g.n],
    };
    search.extend(0).then_some(search.map)
}

struct IsoSearch<'a> {
    g_inc: Vec<Vec<Vec<usize>>>,
    h_inc: Vec<Vec<Vec<usize>>>,
    h_edges: &'a BTreeSet<Vec<usize>>,
    dg: Vec<usize>,
    dh: Vec<usize>,
    order: Vec<usize>,
    map: Vec<usize>,
    inverse: Vec<usize>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, pos: usize) -> bool {
        let Some(&v) = self.order.get(pos) else {
            return true;
        };
        for w in 0..self.map.len() {
            if self.inverse[w] != usize::MAX || self.dg[v] != self.dh[w] {
                continue;
            }
            self.map[v] = w;
            self.inverse[w] = v;
            if self.consistent(v, w) && self.extend(pos + 1) {
                return true;
            }
            self.map[v] = usize::MAX;
            self.inverse[w] = usize::MAX;
        }
        false
    }

    /// Edges at `v` inside the assigned set map onto edges at `w` inside the
    /// image, and the two counts agree.
    fn consistent(&self, v: usize, w: usize) -> bool {
        let mut count = 0;
        for e in &self.g_inc[v] {
            if e.iter().any(|&x| self.map[x] == usize::MAX) {
                continue;
            }
            let mut m: Vec<usize> = e.iter().map(|&x| self.map[x]).collect();
            m.sort_unstable();
            if !self.h_edges.contains(&m) {
                return false;
            }
            count += 1;
        }
        let image = self.h_inc[w].iter().filter(|e| e.iter().all(|&x| self.inverse[x] != usize::MAX)).count();
        count == image
    }
}

/// Every hypergraph on `(n, k)`, optionally with a fixed edge count, in
/// increasing bitmask order; with `up_to_iso` only the first member of each
/// isomorphism class is kept.
pub fn enumerate_all(
    n: usize,
    k: usize,
    edge_count: Option<usize>,
    up_to_iso: bool,
) -> Result<Box<dyn Iterator<Item = Hypergraph>>> {
    if k < 2 || n == 0 {
        return Err(Error::BadSize(format!("need n >= 1 and k >= 2, got n={n} k={k}")));
    }
    check_mask_cap(n, k)?;
    if up_to_iso && n > CANONICAL_MAX_N {
        return Err(Error::CapExceeded {
            what: "vertex count for canonical form",
            value: n as u128,
            cap: CANONICAL_MAX_N as u128,
        });
    }
    let subsets = k_subsets_colex(n, k);
    let bits = subsets.len();
    let build = move |mask: u64| {
        let edges = subsets.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect();
        Hypergraph { n, k, edges }
    };
    let masks = (0u64..1u64 << bits).filter(move |m| edge_count.is_none_or(|c| m.count_ones() as usize == c));
    let all = masks.map(build);
    if !up_to_iso {
        return Ok(Box::new(all));
    }
    let mut seen = HashSet::new();
    Ok(Box::new(all.filter(move |h| seen.insert(canonical_form(h).expect("n checked above")))))
}
