//! Batch scanning for counterexample hunting: deterministic random
//! instances (uniform spanning tree plus extra edges, polarization sampled
//! from the admissible grid), the full pipeline per instance, and one
//! line-delimited record each.

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use abelmap::{
    search_minimal_symmetric, signature, singular_locus, AbelData, DualGraph, Multidegree,
    Polarization, Rat, MAX_VERTICES,
};

use crate::document::document_value;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub vertices: usize,
    pub max_edges: usize,
    pub count: u64,
    pub seed: u64,
    pub denominator: i64,
    pub bound: i64,
}

#[derive(Debug, Clone, Default)]
pub struct ScanSummary {
    pub instances: u64,
    pub unsolvable: u64,
    pub search_failures: u64,
}

/// Uniform random labeled tree by decoding a uniform length-(p-2) sequence.
fn random_tree(rng: &mut ChaCha8Rng, p: usize) -> Vec<(usize, usize)> {
    if p == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..p - 2).map(|_| rng.gen_range(0..p)).collect();
    let mut degree = vec![1usize; p];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(p - 1);
    for &s in &seq {
        let leaf = (0..p).find(|&v| degree[v] == 1).unwrap();
        degree[leaf] -= 1;
        degree[s] -= 1;
        edges.push((leaf, s));
    }
    let rest: Vec<usize> = (0..p).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Connected loopless multigraph: spanning tree plus uniformly chosen extra
/// edges up to a target edge count.
pub fn random_graph(rng: &mut ChaCha8Rng, vertices: usize, max_edges: usize) -> DualGraph {
    let mut edges = random_tree(rng, vertices);
    let target = rng.gen_range(vertices - 1..=max_edges);
    while edges.len() < target {
        let a = rng.gen_range(0..vertices);
        let mut b = rng.gen_range(0..vertices);
        while b == a {
            b = rng.gen_range(0..vertices);
        }
        edges.push((a, b));
    }
    DualGraph::from_edges(vertices, edges).expect("generated graph is valid")
}

/// Degree-0 grid point inside the admissible region, by rejection; falls
/// back to the zero polarization, which always qualifies.
pub fn random_admissible_polarization(
    rng: &mut ChaCha8Rng,
    g: &DualGraph,
    v: usize,
    denominator: i64,
    bound: i64,
) -> Polarization {
    let p = g.vertex_count();
    let limit = denominator * bound;
    for _ in 0..1000 {
        let mut nums: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-limit..=limit)).collect();
        let last = -nums.iter().sum::<i64>();
        if last.abs() > limit {
            continue;
        }
        nums.push(last);
        let e = Polarization::new(nums.iter().map(|&n| Rat::new(n, denominator)).collect());
        if signature(g, v, &e).unwrap().in_xi0() {
            return e;
        }
    }
    Polarization::zero(p)
}

/// Runs the whole pipeline over `count` seeded instances and returns one
/// serialized record per instance plus the summary. Instances are derived
/// from per-index sub-seeds, so results do not depend on scheduling; the
/// `micros` field is the only nondeterministic part of a record.
pub fn run_scan(cfg: &ScanConfig) -> Result<(Vec<String>, ScanSummary)> {
    if cfg.vertices < 2 {
        bail!("need at least 2 vertices");
    }
    if cfg.max_edges < cfg.vertices - 1 {
        bail!(
            "max edges {} cannot connect {} vertices",
            cfg.max_edges,
            cfg.vertices
        );
    }
    if cfg.vertices + 2 * cfg.max_edges > MAX_VERTICES {
        bail!(
            "vertices + 2*max_edges = {} exceeds the supported {} after subdivision",
            cfg.vertices + 2 * cfg.max_edges,
            MAX_VERTICES
        );
    }
    if cfg.denominator < 1 {
        bail!("denominator must be at least 1");
    }

    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sub_seeds: Vec<u64> = (0..cfg.count).map(|_| master.gen()).collect();

    let results: Vec<(String, bool, bool)> = sub_seeds
        .par_iter()
        .enumerate()
        .map(|(index, &sub_seed)| run_instance(cfg, index, sub_seed))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = ScanSummary::default();
    let mut lines = Vec::with_capacity(results.len());
    for (line, solvable, search_failed) in results {
        summary.instances += 1;
        if !solvable {
            summary.unsolvable += 1;
        }
        if search_failed {
            summary.search_failures += 1;
        }
        lines.push(line);
    }
    Ok((lines, summary))
}

fn run_instance(cfg: &ScanConfig, index: usize, sub_seed: u64) -> Result<(String, bool, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let g = random_graph(&mut rng, cfg.vertices, cfg.max_edges);
    let e = random_admissible_polarization(&mut rng, &g, 0, cfg.denominator, cfg.bound);
    let mut q = vec![0i64; g.vertex_count()];
    q[0] = 2;
    let data = AbelData::new(g, e, Multidegree::new(q), 0)?;

    let start = std::time::Instant::now();
    let rep = singular_locus(&data)?;
    let sequence = if rep.solvable {
        search_minimal_symmetric(data.graph(), &rep, None)?
    } else {
        None
    };
    let micros = start.elapsed().as_micros() as u64;

    let search_failed = rep.solvable && sequence.is_none();
    let record = json!({
        "doc": document_value(&format!("scan-{index}"), &data),
        "solvable": rep.solvable,
        "sigma_off_diagonal": rep.sigma_off_diagonal().len(),
        "sequence": sequence.as_ref().map(crate::document::sequence_value),
        "micros": micros,
        "seed": sub_seed,
    });
    Ok((record.to_string(), rep.solvable, search_failed))
}
