//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use common::*;
use hyperspec::algebra::rational::int;
use hyperspec::algebra::{MultiPoly, UniPoly};
use hyperspec::analysis::{ds_verify, lemma4_scan, simplex_destruction_min, DsOptions};
use hyperspec::hypergraph::{enumerate_all, is_isomorphic, Hypergraph};
use hyperspec::resultant::{resultant_value, PolySystem};
use hyperspec::spectra::{char_poly, det_tensor, e_char_poly, SpectralConfig};
use hyperspec::tensor::{mat_sim, Tensor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cfg() -> SpectralConfig {
    SpectralConfig::default()
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperspec")).args(args).env_remove("HYPERSPEC_PRIME_SEED").output().unwrap()
}

fn bin_json(args: &[&str]) -> Result<Value, String> {
    let out = bin(args);
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn switching_pair() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut slowest = Duration::ZERO;
    for n in 3..=6 {
        let start = Instant::now();
        let out = dir.path().join(format!("n{n}"));
        bin_json(&["paper-example", "--n", &n.to_string(), "--out", path_str(&out)])?;
        let h = path_str(&out.join("H.hg")).to_string();
        let part = path_str(&out.join("partition.json")).to_string();
        let v = bin_json(&["verify-switch", &h, "--partition", &part])?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(v["verdict"] == true, format!("n={n}: similarity failed"))?;
        ensure(v["isomorphic"] == false, format!("n={n}: H and G isomorphic"))?;
        let g_file: Hypergraph =
            std::fs::read_to_string(out.join("G.hg")).unwrap().parse().map_err(|e| format!("{e}"))?;
        let switched: Hypergraph = serde_json::from_value(v["switched"].clone()).map_err(|e| e.to_string())?;
        ensure(switched == g_file, format!("n={n}: switched hypergraph differs from G.hg"))?;
        ensure(
            is_isomorphic(&switched, &Hypergraph::parse(&std::fs::read_to_string(&h).unwrap()).unwrap()).is_none(),
            "library isomorphism check disagrees",
        )?;
        ensure(elapsed < Duration::from_secs(5), format!("n={n} took {elapsed:?}"))?;
    }
    Ok(format!("n=3..6 similar and non-isomorphic, slowest {slowest:.2?}"))
}

fn degree_law() -> Check {
    let cases = [
        Hypergraph::empty(3, 3).unwrap(),
        Hypergraph::new(3, 3, [vec![0, 1, 2]]).unwrap(),
        Hypergraph::new(4, 3, [vec![0, 1, 2], vec![1, 2, 3]]).unwrap(),
        Hypergraph::complete(4, 3).unwrap(),
        Hypergraph::new(5, 3, [vec![0, 1, 2]]).unwrap(),
        Hypergraph::new(5, 3, [vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 4]]).unwrap(),
    ];
    let mut degrees = Vec::new();
    for h in &cases {
        let n = h.n();
        let d = char_poly(&h.adjacency_tensor(), &cfg()).map_err(|e| e.to_string())?.degree();
        ensure(d == Some(n * 2usize.pow(n as u32 - 1)), format!("n={n}: degree {d:?}"))?;
        degrees.push(d.unwrap());
    }
    Ok(format!("degrees {degrees:?}"))
}

fn matrix_collapse() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..100 {
        let n = if i < 50 { 4 } else { 5 };
        let m = random_symmetric_matrix(&mut rng, n);
        let t = Tensor::from_matrix(&m).unwrap();
        let oracle = cofactor_charpoly(&m);
        let c = char_poly(&t, &cfg()).map_err(|e| e.to_string())?;
        let e = e_char_poly(&t, &cfg()).map_err(|e| e.to_string())?.normalized();
        ensure(c == oracle, format!("instance {i}: char_poly {c} vs {oracle}"))?;
        ensure(e == oracle.normalized(), format!("instance {i}: e_char_poly {e}"))?;
    }
    Ok("100 matrices (4x4, 5x5) agree with cofactor expansion".into())
}

fn resultant_sanity() -> Check {
    for (nvars, d) in [(2, 1), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2)] {
        let polys = (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = d;
                MultiPoly::monomial(e, int(1))
            })
            .collect();
        let r = resultant_value(&PolySystem::new(polys, vec![d; nvars]).unwrap()).map_err(|e| e.to_string())?;
        ensure(r == int(1), format!("pure powers n={nvars} d={d}: {r}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let m = random_matrix(&mut rng, 1 + i % 5);
        let d = det_tensor(&Tensor::from_matrix(&m).unwrap(), &cfg()).map_err(|e| e.to_string())?;
        ensure(d == cofactor_det(&m), format!("instance {i}"))?;
    }
    Ok("pure powers give 1; 100 order-2 determinants exact".into())
}

fn ds_four_vertices() -> Check {
    let start = Instant::now();
    let all: Vec<Hypergraph> = enumerate_all(4, 3, None, false).map_err(|e| e.to_string())?.collect();
    for h in &all {
        let v = ds_verify(h, &DsOptions::default(), &cfg()).map_err(|e| e.to_string())?;
        ensure(v.all_isomorphic, format!("{} not DS", h.to_text().replace('\n', " ")))?;
        ensure(v.examined == 16, "wrong universe size")?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), format!("took {elapsed:?}"))?;
    Ok(format!("all {} hypergraphs on n=4, k=3 are DS ({elapsed:.1?})", all.len()))
}

fn count_scan() -> Check {
    let r = lemma4_scan(4, 3, &cfg()).map_err(|e| e.to_string())?;
    ensure(r.pairs == 120, format!("{} pairs", r.pairs))?;
    ensure(r.violations.is_empty(), format!("{} violations", r.violations.len()))?;
    Ok(format!("{} pairs, {} cospectral, 0 violations", r.pairs, r.cospectral_pairs))
}

fn destruction() -> Check {
    let start = Instant::now();
    let mut mins = Vec::new();
    for (n, k, r) in [(6, 3, 1), (6, 3, 2), (6, 3, 3), (7, 3, 2)] {
        let b = simplex_destruction_min(n, k, r).map_err(|e| e.to_string())?;
        let expected: usize = (0..r).map(|i| n - k - i).sum();
        ensure(b.minimum == expected, format!("({n},{k},{r}): minimum {} vs {expected}", b.minimum))?;
        ensure(b.achievers_share_core && b.core_sets_achieve, format!("({n},{k},{r}): achievers mismatch"))?;
        mins.push(b.minimum);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("minima {mins:?}, achievers exactly the core-sharing sets"))
}

fn orthogonal_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let instances = 50;
    for i in 0..instances {
        let a = random_symmetric_tensor(&mut rng, 3, 3);
        let p = random_rational_orthogonal(&mut rng);
        ensure(is_orthogonal(&p), "generator produced a non-orthogonal matrix")?;
        let b = mat_sim(&p, &a).map_err(|e| e.to_string())?;
        let (pa, pb) = (
            e_char_poly(&a, &cfg()).map_err(|e| e.to_string())?.normalized(),
            e_char_poly(&b, &cfg()).map_err(|e| e.to_string())?.normalized(),
        );
        ensure(pa == pb, format!("instance {i}: {pa} vs {pb}"))?;
    }
    Ok(format!("{instances} order-3 dim-3 instances invariant"))
}

fn golden_poly(v: &Value) -> UniPoly {
    let s: Vec<&str> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    UniPoly::from_strings(&s).unwrap()
}

fn golden() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/v1");
    let load = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.join(f)).unwrap()).unwrap() };
    let a = Hypergraph::new(3, 3, [vec![0, 1, 2]]).unwrap().adjacency_tensor();
    let c = char_poly(&a, &cfg()).map_err(|e| e.to_string())?;
    ensure(c == golden_poly(&load("single_edge_k3_char_poly.json")["coefficients"]), "char poly differs")?;
    let e = load("single_edge_k3_e_char_poly.json");
    let got = e_char_poly(&a, &cfg()).map_err(|e| e.to_string())?;
    ensure(got == golden_poly(&e["raw_coefficients"]), "raw E-poly differs")?;
    ensure(got.normalized() == golden_poly(&e["normalized_coefficients"]), "normalized E-poly differs")?;
    ensure(c.eval(&int(0)) == int(0) && c.eval(&int(1)) == int(0), "Φ(0) or Φ(1) nonzero")?;
    Ok("single-edge polynomials match references; Φ(0) = Φ(1) = 0".into())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        path_str(&p).to_string()
    };
    let k4 = write("k4.hg", "4 3\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
    let k4e = write("k4e.hg", "4 3\n1 2 3\n1 2 4\n1 3 4\n");
    let edge = write("edge.hg", "3 3\n1 2 3\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["charpoly", &k4],
        vec!["echarpoly", &edge],
        vec!["ds", &k4e],
        vec!["lemma4", "--n", "4", "--k", "3"],
        vec!["simplex-bound", "--n", "6", "--k", "3", "--r", "2"],
    ];
    for args in &runs {
        let outputs: Vec<Vec<u8>> = ["1", "4", "4"]
            .iter()
            .map(|t| {
                let mut full = vec!["--threads", t];
                full.extend(args.iter().copied());
                let out = bin(&full);
                assert!(out.status.success(), "{full:?} failed");
                out.stdout
            })
            .collect();
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), format!("{args:?} output depends on worker count"))?;
    }
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("..");
    for crate_dir in ["core/src", "cli/src"] {
        for entry in walk(&src.join(crate_dir)) {
            let text = std::fs::read_to_string(&entry).unwrap();
            ensure(!text.contains("f64") && !text.contains("f32"), format!("floating point in {}", entry.display()))?;
        }
    }
    Ok(format!("{} commands byte-identical across --threads 1/4; no float types in the result path", runs.len()))
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else if p.extension().is_some_and(|x| x == "rs") {
            out.push(p);
        }
    }
    out
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("paper example reproduction", switching_pair),
        ("degree law", degree_law),
        ("matrix-case collapse", matrix_collapse),
        ("resultant sanity", resultant_sanity),
        ("DS at n=4, k=3", ds_four_vertices),
        ("cospectral pairs share counts", count_scan),
        ("simplex destruction bound", destruction),
        ("E-polynomial orthogonal invariance", orthogonal_invariance),
        ("reference polynomials", golden),
        ("determinism and exactness", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f32();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
