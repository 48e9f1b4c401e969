use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hyperspec::analysis::{self, DsOptions, Fingerprint};
use hyperspec::hypergraph::{is_isomorphic, Hypergraph};
use hyperspec::spectra::{char_poly, e_char_poly, SpectralConfig};
use hyperspec::switching::{self, SwitchingPartition};
use serde_json::{json, Value};

use crate::output::{CliError, Rendered};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Text format, or the JSON form when the file starts with `{`.
pub fn load_hypergraph(path: &Path) -> Result<Hypergraph, CliError> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| hyperspec::Error::Parse { line: e.line(), msg: e.to_string() })
    } else {
        Hypergraph::parse(&text)
    };
    parsed.map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

fn header(h: &Hypergraph) -> Value {
    json!({ "n": h.n(), "k": h.k(), "edge_count": h.edge_count() })
}

pub fn charpoly(file: &Path, cfg: &SpectralConfig) -> Result<Rendered, CliError> {
    let h = load_hypergraph(file)?;
    let p = char_poly(&h.adjacency_tensor(), cfg)?;
    Ok(Rendered {
        json: json!({ "hypergraph": header(&h), "degree": p.degree(), "coefficients": p }),
        table: format!("degree  {}\nΦ(λ)    {p}", p.degree().unwrap_or(0)),
    })
}

pub fn echarpoly(file: &Path, cfg: &SpectralConfig) -> Result<Rendered, CliError> {
    let h = load_hypergraph(file)?;
    let raw = e_char_poly(&h.adjacency_tensor(), cfg)?;
    let normalized = raw.normalized();
    Ok(Rendered {
        json: json!({
            "hypergraph": header(&h),
            "identically_zero": raw.is_zero(),
            "raw": raw,
            "normalized": normalized,
        }),
        table: format!("raw         {raw}\nnormalized  {normalized}"),
    })
}

pub fn cospectral(first: &Path, second: &Path, e: bool, cfg: &SpectralConfig) -> Result<Rendered, CliError> {
    let (g, h) = (load_hypergraph(first)?, load_hypergraph(second)?);
    let verdict = if e { analysis::are_e_cospectral(&g, &h, cfg)? } else { analysis::are_cospectral(&g, &h, cfg)? };
    let kind = if e { "e-characteristic" } else { "characteristic" };
    Ok(Rendered {
        json: json!({ "polynomial": kind, "cospectral": verdict }),
        table: format!("{kind} polynomials {}", if verdict { "agree" } else { "differ" }),
    })
}

pub fn simplices(file: &Path) -> Result<Rendered, CliError> {
    let h = load_hypergraph(file)?;
    let s = h.count_simplices();
    Ok(Rendered { json: json!({ "hypergraph": header(&h), "simplices": s }), table: format!("simplices  {s}") })
}

pub fn verify_switch(file: &Path, v1: &[usize], partition: Option<&Path>) -> Result<Rendered, CliError> {
    let h = load_hypergraph(file)?;
    let p = match partition {
        Some(path) => SwitchingPartition::from_json(&read(path)?)
            .map_err(|source| CliError::Input { path: path.to_path_buf(), source })?,
        None => SwitchingPartition::from_one_based(h.n(), v1)?,
    };
    if p.n() != h.n() {
        return Err(
            hyperspec::Error::DimMismatch(format!("partition on {} vertices, hypergraph on {}", p.n(), h.n())).into()
        );
    }
    let report = switching::validate(&h, &p)?;
    let g = switching::switch(&h, &p)?;
    let verdict = switching::verify_similarity(&h, &g, &p)?;
    let isomorphic = is_isomorphic(&h, &g).is_some();
    let mut table = format!(
        "similarity  {}\nisomorphic  {isomorphic}\nswitched    {} subsets\n\n{g}",
        verdict.holds,
        report.switched_sets.len()
    );
    if let Some(m) = &verdict.mismatch {
        let _ = writeln!(table, "mismatch at {:?}: expected {}, got {}", m.index, m.expected, m.actual);
    }
    Ok(Rendered {
        json: json!({
            "verdict": verdict.holds,
            "mismatch": verdict.mismatch,
            "isomorphic": isomorphic,
            "report": report,
            "switched": g,
            "switched_text": g.to_text(),
        }),
        table,
    })
}

pub fn paper_example(n: usize, dir: &Path) -> Result<Rendered, CliError> {
    let (h, g, p) = switching::switching_example(n)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files: Vec<PathBuf> = ["H.hg", "G.hg", "partition.json"].iter().map(|f| dir.join(f)).collect();
    write(&files[0], &h.to_text())?;
    write(&files[1], &g.to_text())?;
    write(&files[2], &(p.to_json() + "\n"))?;
    Ok(Rendered {
        json: json!({
            "n": n,
            "vertices": h.n(),
            "h_edges": h.edge_count(),
            "g_edges": g.edge_count(),
            "files": ["H.hg", "G.hg", "partition.json"],
        }),
        table: format!(
            "wrote H.hg ({} edges), G.hg ({} edges), partition.json to {}",
            h.edge_count(),
            g.edge_count(),
            dir.display()
        ),
    })
}

pub fn ds(
    file: &Path,
    prune: bool,
    fingerprint: Fingerprint,
    checkpoint: Option<PathBuf>,
    cfg: &SpectralConfig,
) -> Result<Rendered, CliError> {
    let h = load_hypergraph(file)?;
    let opts = DsOptions { prune, fingerprint, checkpoint, chunk: None };
    let v = analysis::ds_verify(&h, &opts, cfg)?;
    Ok(Rendered {
        table: format!(
            "determined by spectrum  {}\nexamined                {}\ncospectral mates        {}\nnon-isomorphic mates    {}",
            v.all_isomorphic,
            v.examined,
            v.cospectral_mates.len(),
            v.non_isomorphic_mates.len()
        ),
        json: to_value(&v),
    })
}

pub fn lemma4(n: usize, k: usize, cfg: &SpectralConfig) -> Result<Rendered, CliError> {
    let r = analysis::lemma4_scan(n, k, cfg)?;
    Ok(Rendered {
        table: format!(
            "hypergraphs        {}\npairs              {}\ncospectral pairs   {}\nviolations         {}",
            r.hypergraphs,
            r.pairs,
            r.cospectral_pairs,
            r.violations.len()
        ),
        json: to_value(&r),
    })
}

pub fn simplex_bound(n: usize, k: usize, r: usize) -> Result<Rendered, CliError> {
    let b = analysis::simplex_destruction_min(n, k, r)?;
    Ok(Rendered {
        table: format!(
            "minimum    {}\npredicted  {}\nachievers  {}\nholds      {}",
            b.minimum,
            b.predicted,
            b.achievers.len(),
            b.holds
        ),
        json: to_value(&b),
    })
}
