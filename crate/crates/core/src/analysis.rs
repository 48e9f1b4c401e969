//! Cospectrality decisions and exhaustive checks over small hypergraph
//! families: edge/simplex counts of cospectral pairs, spectral determination
//! by enumeration, and the simplex-destruction minimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::UniPoly;
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, canonical_form, is_isomorphic, CanonicalForm, Hypergraph};
use crate::spectra::{char_poly, e_char_poly, SpectralConfig};
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub edge_count: usize,
    pub simplex_count: usize,
    /// Absent when over the degree cap.
    pub char_poly: Option<UniPoly>,
    /// Normalized; absent when over the Macaulay dimension cap.
    pub e_char_poly: Option<UniPoly>,
}

/// Counts always; polynomials when they fit the caps. Other errors propagate.
pub fn spectral_report(id: &str, h: &Hypergraph, with_e: bool, cfg: &SpectralConfig) -> Result<SpectralReport> {
    let capped = |r: Result<UniPoly>| match r {
        Ok(p) => Ok(Some(p)),
        Err(Error::DegreeCapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let a = h.adjacency_tensor();
    let e_char_poly = if with_e { capped(e_char_poly(&a, cfg).map(|p| p.normalized()))? } else { None };
    Ok(SpectralReport {
        id: id.to_string(),
        n: h.n(),
        k: h.k(),
        edge_count: h.edge_count(),
        simplex_count: h.count_simplices(),
        char_poly: capped(char_poly(&a, cfg))?,
        e_char_poly,
    })
}

/// Equal characteristic polynomials; hypergraphs on different `(n, k)` never are.
pub fn are_cospectral(g: &Hypergraph, h: &Hypergraph, cfg: &SpectralConfig) -> Result<bool> {
    if g.n() != h.n() || g.k() != h.k() {
        return Ok(false);
    }
    Ok(char_poly(&g.adjacency_tensor(), cfg)? == char_poly(&h.adjacency_tensor(), cfg)?)
}

/// Equal normalized E-characteristic polynomials.
pub fn are_e_cospectral(g: &Hypergraph, h: &Hypergraph, cfg: &SpectralConfig) -> Result<bool> {
    if g.n() != h.n() || g.k() != h.k() {
        return Ok(false);
    }
    tensors_e_cospectral(&g.adjacency_tensor(), &h.adjacency_tensor(), cfg)
}

pub fn tensors_e_cospectral(a: &Tensor, b: &Tensor, cfg: &SpectralConfig) -> Result<bool> {
    if a.order() != b.order() || a.dim() != b.dim() {
        return Ok(false);
    }
    Ok(e_char_poly(a, cfg)?.normalized() == e_char_poly(b, cfg)?.normalized())
}

/// What stands in for the spectrum during enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fingerprint {
    #[default]
    CharPoly,
    /// Deliberately weak; used to check that the isomorphism filter catches
    /// false mates.
    EdgeCountOnly,
}

impl Fingerprint {
    fn compute(self, h: &Hypergraph, cfg: &SpectralConfig) -> Result<UniPoly> {
        match self {
            Fingerprint::CharPoly => char_poly(&h.adjacency_tensor(), cfg),
            Fingerprint::EdgeCountOnly => Ok(UniPoly::from_i64(&[h.edge_count() as i64])),
        }
    }
}

/// Fingerprints cached per isomorphism class.
#[derive(Clone, Debug, Default)]
pub struct PolyCache {
    map: BTreeMap<CanonicalForm, UniPoly>,
    computed: usize,
}

impl PolyCache {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Fingerprints computed by this cache (not restored from a checkpoint).
    pub fn computed(&self) -> usize {
        self.computed
    }

    /// Fills in every missing class, computing new ones concurrently.
    fn fill(&mut self, items: &[(CanonicalForm, &Hypergraph)], fp: Fingerprint, cfg: &SpectralConfig) -> Result<()> {
        let mut missing: Vec<(CanonicalForm, &Hypergraph)> = Vec::new();
        for (c, h) in items {
            if !self.map.contains_key(c) && !missing.iter().any(|(m, _)| m == c) {
                missing.push((c.clone(), h));
            }
        }
        let fresh: Vec<(CanonicalForm, UniPoly)> =
            missing.into_par_iter().map(|(c, h)| fp.compute(h, cfg).map(|p| (c, p))).collect::<Result<_>>()?;
        self.computed += fresh.len();
        self.map.extend(fresh);
        Ok(())
    }

    fn get(&self, c: &CanonicalForm) -> &UniPoly {
        &self.map[c]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountViolation {
    pub first: Hypergraph,
    pub second: Hypergraph,
    pub edge_counts: (usize, usize),
    pub simplex_counts: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountScanReport {
    pub n: usize,
    pub k: usize,
    pub hypergraphs: usize,
    pub pairs: usize,
    pub cospectral_pairs: usize,
    pub violations: Vec<CountViolation>,
}

/// Over every pair of hypergraphs on `(n, k)`: equal characteristic
/// polynomials must come with equal edge and simplex counts.
pub fn lemma4_scan(n: usize, k: usize, cfg: &SpectralConfig) -> Result<CountScanReport> {
    let all: Vec<Hypergraph> = crate::hypergraph::enumerate_all(n, k, None, false)?.collect();
    let forms: Vec<CanonicalForm> = all.par_iter().map(canonical_form).collect::<Result<_>>()?;
    let mut cache = PolyCache::default();
    let items: Vec<(CanonicalForm, &Hypergraph)> = forms.iter().cloned().zip(&all).collect();
    cache.fill(&items, Fingerprint::CharPoly, cfg)?;
    let tagged: Vec<(Hypergraph, UniPoly)> =
        all.iter().zip(&forms).map(|(h, c)| (h.clone(), cache.get(c).clone())).collect();
    Ok(lemma4_check(n, k, &tagged))
}

/// The pairwise check itself, on precomputed polynomials.
pub fn lemma4_check(n: usize, k: usize, items: &[(Hypergraph, UniPoly)]) -> CountScanReport {
    let counts: Vec<(usize, usize)> = items.iter().map(|(h, _)| (h.edge_count(), h.count_simplices())).collect();
    let mut cospectral_pairs = 0;
    let mut violations = Vec::new();
    for (i, j) in (0..items.len()).tuple_combinations() {
        if items[i].1 != items[j].1 {
            continue;
        }
        cospectral_pairs += 1;
        if counts[i] != counts[j] {
            violations.push(CountViolation {
                first: items[i].0.clone(),
                second: items[j].0.clone(),
                edge_counts: (counts[i].0, counts[j].0),
                simplex_counts: (counts[i].1, counts[j].1),
            });
        }
    }
    let len = items.len();
    CountScanReport { n, k, hypergraphs: len, pairs: len * len.saturating_sub(1) / 2, cospectral_pairs, violations }
}

#[derive(Clone, Debug, Default)]
pub struct DsOptions {
    /// Skip candidates whose edge or simplex count differs from the target's.
    pub prune: bool,
    pub fingerprint: Fingerprint,
    /// Resumable progress file.
    pub checkpoint: Option<PathBuf>,
    /// Masks processed between checkpoint writes.
    pub chunk: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DsVerdict {
    pub target: Hypergraph,
    /// Every labeled hypergraph on the target's `(n, k)` with its fingerprint,
    /// the target's relabelings included.
    pub cospectral_mates: Vec<Hypergraph>,
    /// Mates not isomorphic to the target.
    pub non_isomorphic_mates: Vec<Hypergraph>,
    pub all_isomorphic: bool,
    pub examined: u64,
    pub fingerprint: Fingerprint,
    pub pruned: bool,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    n: usize,
    k: usize,
    target: Hypergraph,
    fingerprint: Fingerprint,
    prune: bool,
    /// Masks below this are done.
    watermark: u64,
    mates: Vec<u64>,
    cache: Vec<(CanonicalForm, UniPoly)>,
}

const DEFAULT_CHUNK: usize = 256;

/// Enumerates every hypergraph on the target's `(n, k)` and collects those
/// whose fingerprint equals the target's.
pub fn ds_verify(target: &Hypergraph, opts: &DsOptions, cfg: &SpectralConfig) -> Result<DsVerdict> {
    let (n, k) = (target.n(), target.k());
    let bits = binomial(n, k);
    if bits > crate::hypergraph::ENUMERATION_MAX_EDGES {
        return Err(Error::CapExceeded {
            what: "C(n,k) for bitmask enumeration",
            value: bits,
            cap: crate::hypergraph::ENUMERATION_MAX_EDGES,
        });
    }
    let end = 1u64 << bits;
    let mut cache = PolyCache::default();
    let mut mates: Vec<u64> = Vec::new();
    let mut watermark = 0u64;
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = load_checkpoint(path)? {
            if cp.n != n
                || cp.k != k
                || cp.target != *target
                || cp.fingerprint != opts.fingerprint
                || cp.prune != opts.prune
            {
                return Err(Error::Inconsistent(format!("checkpoint {} belongs to a different run", path.display())));
            }
            watermark = cp.watermark;
            mates = cp.mates;
            cache.map.extend(cp.cache);
        }
    }
    let target_form = canonical_form(target)?;
    cache.fill(&[(target_form.clone(), target)], opts.fingerprint, cfg)?;
    let target_fp = cache.get(&target_form).clone();
    let (target_edges, target_simplices) = (target.edge_count(), target.count_simplices());
    let chunk = opts.chunk.unwrap_or(DEFAULT_CHUNK).max(1) as u64;

    while watermark < end {
        let stop = (watermark + chunk).min(end);
        let candidates: Vec<(u64, Hypergraph)> = (watermark..stop)
            .into_par_iter()
            .filter(|m| !opts.prune || m.count_ones() as usize == target_edges)
            .map(|m| (m, Hypergraph::from_mask(n, k, m).expect("cap checked")))
            .filter(|(_, h)| !opts.prune || h.count_simplices() == target_simplices)
            .collect();
        let forms: Vec<CanonicalForm> = candidates.par_iter().map(|(_, h)| canonical_form(h)).collect::<Result<_>>()?;
        let items: Vec<(CanonicalForm, &Hypergraph)> =
            forms.iter().cloned().zip(candidates.iter().map(|(_, h)| h)).collect();
        cache.fill(&items, opts.fingerprint, cfg)?;
        mates.extend(candidates.iter().zip(&forms).filter(|(_, c)| *cache.get(c) == target_fp).map(|((m, _), _)| *m));
        watermark = stop;
        if let Some(path) = &opts.checkpoint {
            save_checkpoint(
                path,
                &Checkpoint {
                    n,
                    k,
                    target: target.clone(),
                    fingerprint: opts.fingerprint,
                    prune: opts.prune,
                    watermark,
                    mates: mates.clone(),
                    cache: cache.map.iter().map(|(c, p)| (c.clone(), p.clone())).collect(),
                },
            )?;
        }
    }

    let mates: Vec<Hypergraph> = mates.into_iter().map(|m| Hypergraph::from_mask(n, k, m)).collect::<Result<_>>()?;
    let non_isomorphic_mates: Vec<Hypergraph> =
        mates.par_iter().filter(|m| is_isomorphic(m, target).is_none()).cloned().collect();
    Ok(DsVerdict {
        target: target.clone(),
        all_isomorphic: non_isomorphic_mates.is_empty(),
        cospectral_mates: mates,
        non_isomorphic_mates,
        examined: end,
        fingerprint: opts.fingerprint,
        pruned: opts.prune,
    })
}

fn load_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    match fs::read_to_string(path) {
        Ok(s) => serde_json::from_str(&s)
            .map(Some)
            .map_err(|e| Error::Inconsistent(format!("unreadable checkpoint {}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::Inconsistent(format!("cannot read checkpoint {}: {e}", path.display()))),
    }
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let body = serde_json::to_string(cp).expect("plain data");
    fs::write(&tmp, body)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Error::Inconsistent(format!("cannot write checkpoint {}: {e}", path.display())))
}

/// `K_{k+1}^k` plus `isolated` isolated vertices, checked by [`ds_verify`].
pub fn disjoint_union_ds_check(k: usize, isolated: usize, opts: &DsOptions, cfg: &SpectralConfig) -> Result<DsVerdict> {
    let n = k + 1 + isolated;
    let target = Hypergraph::new(n, k, (0..=k).combinations(k))?;
    ds_verify(&target, opts, cfg)
}

/// Largest `C(C(n,k), r)` searched by [`simplex_destruction_min`].
pub const DESTRUCTION_CAP: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexBound {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub minimum: usize,
    /// `Σ_{i<r} (n − k − i)`.
    pub predicted: usize,
    /// Deletion sets reaching the minimum, 1-based.
    pub achievers: Vec<Vec<Vec<usize>>>,
    /// Every achiever's edges share `k−1` vertices.
    pub achievers_share_core: bool,
    /// Every deletion set sharing `k−1` vertices is an achiever.
    pub core_sets_achieve: bool,
    pub holds: bool,
}

/// Brute force over all `r`-sets of edges of `K_n^k`: how few simplices can
/// their deletion destroy, and which sets achieve it.
pub fn simplex_destruction_min(n: usize, k: usize, r: usize) -> Result<SimplexBound> {
    if k < 2 || n <= k || r == 0 {
        return Err(Error::BadSize(format!("need 2 <= k < n and r >= 1, got n={n} k={k} r={r}")));
    }
    let edges: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let sets = binomial(edges.len(), r);
    if sets > DESTRUCTION_CAP {
        return Err(Error::CapExceeded { what: "number of deletion sets", value: sets, cap: DESTRUCTION_CAP });
    }
    let destroyed = |set: &[&Vec<usize>]| {
        let mut hit: BTreeSet<Vec<usize>> = BTreeSet::new();
        for e in set {
            for w in (0..n).filter(|w| !e.contains(w)) {
                let mut s = (*e).clone();
                s.push(w);
                s.sort_unstable();
                hit.insert(s);
            }
        }
        hit.len()
    };
    let share_core = |set: &[&Vec<usize>]| {
        let common =
            set.iter().skip(1).fold(set[0].clone(), |acc, e| acc.into_iter().filter(|v| e.contains(v)).collect());
        common.len() + 1 >= k
    };
    let scored: Vec<(usize, bool, Vec<&Vec<usize>>)> = edges
        .iter()
        .combinations(r)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|set| (destroyed(&set), share_core(&set), set))
        .collect();
    let minimum = scored.iter().map(|(d, _, _)| *d).min().expect("at least one deletion set");
    let predicted = (0..r).map(|i| (n - k).saturating_sub(i)).sum();
    let achievers_share_core = scored.iter().filter(|(d, _, _)| *d == minimum).all(|(_, c, _)| *c);
    let core_sets_achieve = scored.iter().filter(|(_, c, _)| *c).all(|(d, _, _)| *d == minimum);
    let achievers = scored
        .iter()
        .filter(|(d, _, _)| *d == minimum)
        .map(|(_, _, set)| set.iter().map(|e| e.iter().map(|v| v + 1).collect()).collect())
        .collect();
    Ok(SimplexBound {
        n,
        k,
        r,
        minimum,
        predicted,
        achievers,
        achievers_share_core,
        core_sets_achieve,
        holds: minimum == predicted && achievers_share_core && core_sets_achieve,
    })
}
