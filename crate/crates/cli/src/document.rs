//! Input documents: a named intersection matrix with marked vertex,
//! multidegree and exact-rational polarization, plus blowup-sequence files.
//! Rationals travel as strings so no reader ever sees floats.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use abelmap::{AbelData, BlowupSequence, DualGraph, Multidegree, Polarization, Rat, VertexSet};

#[derive(Debug, Clone)]
pub struct AbelDataDocument {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
    /// 1-based, as in the file.
    pub v: usize,
    pub q: Vec<i64>,
    pub e: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: String,
    matrix: Vec<Vec<i64>>,
    v: usize,
    q: Vec<i64>,
    e: Vec<String>,
}

/// Parses an optional sign, digits, and an optional nonzero denominator:
/// `0`, `-1/2`, `3/4`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let body = num.strip_prefix(['+', '-']).unwrap_or(num);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        bail!("bad rational {s:?}: expected sign? digits (\"/\" digits)?");
    }
    let numer: i64 = num.parse().with_context(|| format!("bad rational {s:?}"))?;
    let denom: i64 = match den {
        None => 1,
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                bail!("bad rational {s:?}: denominator must be digits");
            }
            let d: i64 = d.parse().with_context(|| format!("bad rational {s:?}"))?;
            if d == 0 {
                bail!("bad rational {s:?}: zero denominator");
            }
            d
        }
    };
    Ok(Rat::new(numer, denom))
}

/// Canonical rendering of a rational: reduced, `n` or `n/d` with positive
/// denominator.
pub fn format_rational(r: Rat) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl AbelDataDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).context("malformed document")?;
        let e = raw
            .e
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelDataDocument {
            name: raw.name,
            matrix: raw.matrix,
            v: raw.v,
            q: raw.q,
            e,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text)
    }

    /// Validates the document and builds the graph-level data. The marked
    /// vertex converts from the file's 1-based index.
    pub fn to_abel_data(&self) -> Result<AbelData> {
        let graph = DualGraph::from_intersection_matrix(&self.matrix)?;
        if self.v == 0 || self.v > graph.vertex_count() {
            bail!(
                "marked vertex {} out of range 1..={}",
                self.v,
                graph.vertex_count()
            );
        }
        let data = AbelData::new(
            graph,
            Polarization::new(self.e.clone()),
            Multidegree::new(self.q.clone()),
            self.v - 1,
        )?;
        Ok(data)
    }

    /// The canonical JSON form: keys sorted, rationals reduced, diagonal
    /// recomputed from the validated graph.
    pub fn canonical_json(&self) -> Result<Value> {
        let data = self.to_abel_data()?;
        Ok(json!({
            "name": self.name,
            "matrix": data.graph().to_intersection_matrix(),
            "v": self.v,
            "q": self.q,
            "e": self.e.iter().map(|&r| format_rational(r)).collect::<Vec<_>>(),
        }))
    }
}

/// Document value for data built in memory (scan instances).
pub fn document_value(name: &str, data: &AbelData) -> Value {
    json!({
        "name": name,
        "matrix": data.graph().to_intersection_matrix(),
        "v": data.marked_vertex() + 1,
        "q": data.multidegree().values(),
        "e": data
            .polarization()
            .values()
            .iter()
            .map(|&r| format_rational(r))
            .collect::<Vec<_>>(),
    })
}

/// Sequence files hold a list of steps, each a pair of 1-based vertex-index
/// lists: `[[[1],[1]],[[4],[4]]]`.
pub fn parse_sequence(text: &str, vertex_count: usize) -> Result<BlowupSequence> {
    let raw: Vec<(Vec<usize>, Vec<usize>)> =
        serde_json::from_str(text).context("malformed sequence file")?;
    let mut steps = Vec::with_capacity(raw.len());
    for (left, right) in raw {
        steps.push((set_from_1based(&left, vertex_count)?, set_from_1based(&right, vertex_count)?));
    }
    Ok(BlowupSequence::new(vertex_count, steps)?)
}

pub fn load_sequence(path: &Path, vertex_count: usize) -> Result<BlowupSequence> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_sequence(&text, vertex_count)
}

fn set_from_1based(indices: &[usize], vertex_count: usize) -> Result<VertexSet> {
    let mut set = VertexSet::EMPTY;
    for &i in indices {
        if i == 0 || i > vertex_count {
            bail!("vertex index {i} out of range 1..={vertex_count}");
        }
        set = set.with(i - 1);
    }
    Ok(set)
}

pub fn sequence_value(seq: &BlowupSequence) -> Value {
    let steps: Vec<Value> = seq
        .steps()
        .iter()
        .map(|&(a, b)| {
            json!([
                a.iter().map(|v| v + 1).collect::<Vec<_>>(),
                b.iter().map(|v| v + 1).collect::<Vec<_>>(),
            ])
        })
        .collect();
    Value::Array(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for (s, canonical) in [
            ("0", "0"),
            ("-1/2", "-1/2"),
            ("3/4", "3/4"),
            ("+2/4", "1/2"),
            ("-6/3", "-2"),
            ("7", "7"),
        ] {
            assert_eq!(format_rational(parse_rational(s).unwrap()), canonical);
        }
        for bad in ["", "1/0", "a", "1.5", "1/-2", "--1", "1/", "/2"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn document_parse_and_canonicalize() {
        let text = r#"{
            "name": "banana",
            "matrix": [[-2, 2], [2, -2]],
            "v": 1,
            "q": [2, 0],
            "e": ["0", "0"]
        }"#;
        let doc = AbelDataDocument::from_json(text).unwrap();
        let canon = doc.canonical_json().unwrap();
        let rendered = serde_json::to_string(&canon).unwrap();
        // keys are sorted by the default map representation
        assert!(rendered.starts_with("{\"e\":"));
        let again = AbelDataDocument::from_json(&rendered).unwrap();
        assert_eq!(again.canonical_json().unwrap(), canon);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"name":"x","matrix":[[-1,1],[1,-1]],"v":1,"q":[2,0],"e":["0","0"],"extra":1}"#;
        assert!(AbelDataDocument::from_json(text).is_err());
    }

    #[test]
    fn sequences_parse_1based() {
        let seq = parse_sequence("[[[1],[1]],[[4],[4]]]", 4).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.steps()[1].0, VertexSet::singleton(3));
        assert!(parse_sequence("[[[0],[1]]]", 4).is_err());
        assert!(parse_sequence("[[[1,2,3,4],[1]]]", 4).is_err());
        assert_eq!(parse_sequence("[]", 4).unwrap().len(), 0);
    }
}
