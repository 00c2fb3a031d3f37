//! Command implementations. Each returns the rendered output and the exit
//! code; input problems surface as errors and exit with code 2.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;

use abelmap::{
    correction_table, enumerate_stratum_representatives, search_minimal_symmetric, signature,
    singular_locus, verify, AbelData, DualGraph, Multidegree, Polarization, Rat,
    SingularLocusReport, StratumSignature,
};

use crate::document::{format_rational, load_sequence, sequence_value, AbelDataDocument};
use crate::scan::{run_scan, ScanConfig};

fn pair_label(g: &DualGraph, pair: (usize, usize)) -> (String, String) {
    (g.edge_label(pair.0), g.edge_label(pair.1))
}

fn polarization_text(e: &Polarization) -> String {
    let parts: Vec<String> = e.values().iter().map(|&r| format_rational(r)).collect();
    format!("({})", parts.join(", "))
}

fn multidegree_text(q: &Multidegree) -> String {
    let parts: Vec<String> = q.values().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn admissible_flag(data: &AbelData) -> Option<bool> {
    if data.total_degree() == Rat::from_integer(0) {
        signature(data.graph(), data.marked_vertex(), data.polarization())
            .ok()
            .map(|sig| sig.in_xi0())
    } else {
        None
    }
}

fn sigma_json(g: &DualGraph, rep: &SingularLocusReport) -> serde_json::Value {
    let pairs: Vec<serde_json::Value> = rep
        .sigma()
        .iter()
        .map(|&pair| {
            let (a, b) = pair_label(g, pair);
            json!([a, b])
        })
        .collect();
    serde_json::Value::Array(pairs)
}

fn qtable_json(g: &DualGraph, rep: &SingularLocusReport) -> serde_json::Value {
    let mut rows = Vec::new();
    for e1 in 0..g.edge_count() {
        for e2 in 0..g.edge_count() {
            let (a, b) = pair_label(g, (e1, e2));
            let choices: Vec<serde_json::Value> = rep
                .qtable()
                .get(e1, e2)
                .iter()
                .map(|c| json!([c.ends.0 + 1, c.ends.1 + 1]))
                .collect();
            rows.push(json!({ "pair": [a, b], "choices": choices }));
        }
    }
    serde_json::Value::Array(rows)
}

pub fn cmd_check(path: &Path, as_json: bool) -> Result<(String, u8)> {
    let doc = AbelDataDocument::load(path)?;
    let data = doc.to_abel_data()?;
    let g = data.graph();
    let rep = singular_locus(&data)?;
    let xi0 = admissible_flag(&data);
    let code = if rep.solvable { 0 } else { 1 };

    if as_json {
        let value = json!({
            "name": doc.name,
            "vertices": g.vertex_count(),
            "edges": (0..g.edge_count()).map(|e| g.edge_label(e)).collect::<Vec<_>>(),
            "polarization": data.polarization().values().iter().map(|&r| format_rational(r)).collect::<Vec<_>>(),
            "multidegree": data.multidegree().values(),
            "marked_vertex": data.marked_vertex() + 1,
            "in_admissible_region": xi0,
            "solvable": rep.solvable,
            "sigma": sigma_json(g, &rep),
            "sigma_off_diagonal": rep.sigma_off_diagonal().len(),
            "qtable": qtable_json(g, &rep),
        });
        return Ok((serde_json::to_string_pretty(&value)?, code));
    }

    let mut out = String::new();
    writeln!(
        out,
        "document: {} ({} vertices, {} edges)",
        doc.name,
        g.vertex_count(),
        g.edge_count()
    )?;
    let labels: Vec<String> = (0..g.edge_count()).map(|e| g.edge_label(e)).collect();
    writeln!(out, "edges: {}", labels.join(", "))?;
    writeln!(
        out,
        "polarization: {}; multidegree: {}; marked vertex {}",
        polarization_text(data.polarization()),
        multidegree_text(data.multidegree()),
        data.marked_vertex() + 1
    )?;
    writeln!(
        out,
        "admissible region: {}",
        match xi0 {
            Some(true) => "inside",
            Some(false) => "outside",
            None => "n/a (polarization degree is nonzero)",
        }
    )?;
    writeln!(out, "solvable: {}", rep.solvable)?;
    let off = rep.sigma_off_diagonal();
    writeln!(
        out,
        "singular locus: {} pairs, {} off the diagonal",
        rep.sigma().len(),
        off.len()
    )?;
    for pair in &off {
        let (a, b) = pair_label(g, *pair);
        writeln!(out, "  ({a}, {b})")?;
    }
    writeln!(out, "quasistable choices per ordered pair (row, column in edge order):")?;
    for e1 in 0..g.edge_count() {
        let row: Vec<String> = (0..g.edge_count())
            .map(|e2| rep.qtable().get(e1, e2).len().to_string())
            .collect();
        writeln!(out, "  {}", row.join(" "))?;
    }
    Ok((out, code))
}

pub fn cmd_resolve(
    path: &Path,
    max_len: Option<usize>,
    verify_only: Option<&Path>,
    as_json: bool,
) -> Result<(String, u8)> {
    let doc = AbelDataDocument::load(path)?;
    let data = doc.to_abel_data()?;
    let g = data.graph();
    let rep = singular_locus(&data)?;

    if let Some(seq_path) = verify_only {
        let seq = load_sequence(seq_path, g.vertex_count())?;
        let verdict = verify(g, &rep, &seq);
        let symmetric = seq.is_symmetric();
        let ok = verdict.minimal && symmetric;
        let code = if ok { 0 } else { 1 };
        if as_json {
            let value = json!({
                "mode": "verify",
                "solvable": rep.solvable,
                "sequence": sequence_value(&seq),
                "resolves": verdict.resolves,
                "minimal": verdict.minimal,
                "symmetric": symmetric,
                "witness": verdict.witness,
            });
            return Ok((serde_json::to_string_pretty(&value)?, code));
        }
        let mut out = String::new();
        writeln!(out, "solvable: {}", rep.solvable)?;
        writeln!(out, "sequence: {seq}")?;
        writeln!(out, "resolves: {}", verdict.resolves)?;
        writeln!(out, "minimal: {}", verdict.minimal)?;
        writeln!(out, "symmetric: {symmetric}")?;
        writeln!(out, "witness: {}", verdict.witness)?;
        writeln!(out, "resolves minimally: {}", verdict.minimal)?;
        return Ok((out, code));
    }

    if !rep.solvable {
        let msg = if as_json {
            serde_json::to_string_pretty(&json!({
                "mode": "search",
                "solvable": false,
                "sequence": null,
                "outcome": "unsolvable",
            }))?
        } else {
            "solvable: false\noutcome: unsolvable singular locus\n".to_string()
        };
        return Ok((msg, 1));
    }

    let found = search_minimal_symmetric(g, &rep, max_len)?;
    match found {
        Some(seq) => {
            let verdict = verify(g, &rep, &seq);
            let code = 0;
            if as_json {
                let value = json!({
                    "mode": "search",
                    "solvable": true,
                    "sequence": sequence_value(&seq),
                    "resolves": verdict.resolves,
                    "minimal": verdict.minimal,
                    "symmetric": seq.is_symmetric(),
                    "witness": verdict.witness,
                });
                Ok((serde_json::to_string_pretty(&value)?, code))
            } else {
                let mut out = String::new();
                writeln!(out, "solvable: true")?;
                writeln!(out, "sequence: {seq}")?;
                writeln!(out, "resolves minimally: {}", verdict.minimal)?;
                Ok((out, code))
            }
        }
        None => {
            let limit = max_len
                .map(|n| n.to_string())
                .unwrap_or_else(|| "default".into());
            let msg = if as_json {
                serde_json::to_string_pretty(&json!({
                    "mode": "search",
                    "solvable": true,
                    "sequence": null,
                    "outcome": "not found within max length",
                    "max_len": limit,
                }))?
            } else {
                format!("solvable: true\noutcome: no minimal symmetric sequence within max length ({limit})\n")
            };
            Ok((msg, 1))
        }
    }
}

pub fn cmd_delta(
    path: &Path,
    i: usize,
    k: usize,
    m: usize,
    n: usize,
    as_json: bool,
) -> Result<(String, u8)> {
    let doc = AbelDataDocument::load(path)?;
    let data = doc.to_abel_data()?;
    let p = data.graph().vertex_count();
    for (name, idx) in [("i", i), ("k", k), ("m", m), ("n", n)] {
        if idx == 0 || idx > p {
            bail!("index {name}={idx} out of range 1..={p}");
        }
    }
    let table = correction_table(&data)?;
    let value = table.delta(i - 1, k - 1, m - 1, n - 1);
    let w = table.coefficients(i - 1, k - 1);
    if as_json {
        let out = json!({
            "i": i, "k": k, "m": m, "n": n,
            "delta": value,
            "w": w,
        });
        Ok((serde_json::to_string_pretty(&out)?, 0))
    } else {
        let coeffs: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        Ok((
            format!(
                "delta({i},{k},{m},{n}) = {value}\nw({i},{k}) = ({})\n",
                coeffs.join(", ")
            ),
            0,
        ))
    }
}

fn signature_text(sig: &StratumSignature) -> String {
    let parts: Vec<String> = sig
        .entries()
        .iter()
        .map(|s| {
            format!(
                "{}:{}{}",
                s.subset,
                s.floor,
                if s.on_wall { "w" } else { "" }
            )
        })
        .collect();
    parts.join(" ")
}

pub fn cmd_strata(
    path: &Path,
    denominator: i64,
    bound: i64,
    resolve: bool,
    as_json: bool,
) -> Result<(String, u8)> {
    if denominator < 1 {
        bail!("denominator must be at least 1");
    }
    if bound < 0 {
        bail!("bound must be nonnegative");
    }
    let doc = AbelDataDocument::load(path)?;
    // the sweep replaces the document's polarization; only graph, marked
    // vertex and multidegree are read
    let data = doc.to_abel_data()?;
    let g = data.graph().clone();
    let v = data.marked_vertex();
    if resolve && data.multidegree().degree() != 2 {
        bail!("a sweep with --resolve needs a multidegree of total degree 2");
    }
    let reps = enumerate_stratum_representatives(&g, v, denominator, bound)?;

    let mut rows = Vec::new();
    for (e, sig) in &reps {
        let mut row = json!({
            "polarization": e.values().iter().map(|&r| format_rational(r)).collect::<Vec<_>>(),
            "signature": signature_text(sig),
        });
        if resolve {
            let swept = AbelData::new(
                g.clone(),
                e.clone(),
                data.multidegree().clone(),
                v,
            )?;
            let rep = singular_locus(&swept)?;
            let found = if rep.solvable {
                search_minimal_symmetric(&g, &rep, None)?
            } else {
                None
            };
            let obj = row.as_object_mut().unwrap();
            obj.insert("solvable".into(), json!(rep.solvable));
            obj.insert(
                "sigma_off_diagonal".into(),
                json!(rep.sigma_off_diagonal().len()),
            );
            obj.insert(
                "sequence".into(),
                found
                    .as_ref()
                    .map(sequence_value)
                    .unwrap_or(serde_json::Value::Null),
            );
            obj.insert(
                "sequence_text".into(),
                json!(found.map(|s| s.to_string())),
            );
        }
        rows.push(row);
    }

    if as_json {
        let value = json!({
            "name": doc.name,
            "denominator": denominator,
            "bound": bound,
            "signatures": rows,
        });
        return Ok((serde_json::to_string_pretty(&value)?, 0));
    }

    let mut out = String::new();
    writeln!(
        out,
        "grid: denominator {denominator}, bound {bound}; signatures found: {}",
        rows.len()
    )?;
    for (idx, row) in rows.iter().enumerate() {
        let e: Vec<String> = row["polarization"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        write!(out, "#{:<3} e=({})", idx + 1, e.join(", "))?;
        if resolve {
            write!(
                out,
                "  solvable={} sigma-off-diagonal={} sequence={}",
                row["solvable"],
                row["sigma_off_diagonal"],
                row["sequence_text"].as_str().unwrap_or("none"),
            )?;
        }
        writeln!(out)?;
    }
    Ok((out, 0))
}

pub fn cmd_scan(cfg: &ScanConfig, out_path: &Path) -> Result<(String, u8)> {
    let (lines, summary) = run_scan(cfg)?;
    use std::io::Write as _;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(out_path)
        .with_context(|| format!("cannot open {}", out_path.display()))?;
    for line in &lines {
        writeln!(file, "{line}")?;
    }
    file.flush()?;
    let code = if summary.unsolvable > 0 || summary.search_failures > 0 {
        1
    } else {
        0
    };
    let out = format!(
        "instances: {}\nunsolvable: {}\nsearch failures: {}\nrecords appended to {}\n",
        summary.instances,
        summary.unsolvable,
        summary.search_failures,
        out_path.display()
    );
    Ok((out, code))
}
