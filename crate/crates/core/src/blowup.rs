//! Blowup sequences: symmetry, affected pairs, order, center, the
//! resolves/minimal verdicts, and an iterative-deepening search for a
//! minimal symmetric resolving sequence.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{DualGraph, VertexSet};
use crate::resolution::SingularLocusReport;

/// An ordered list of pairs of proper nonempty vertex subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSequence {
    vertex_count: usize,
    steps: Vec<(VertexSet, VertexSet)>,
}

impl BlowupSequence {
    pub fn new(vertex_count: usize, steps: Vec<(VertexSet, VertexSet)>) -> Result<Self> {
        for &(a, b) in &steps {
            if !a.is_proper_nonempty(vertex_count) || !b.is_proper_nonempty(vertex_count) {
                return Err(Error::EmptyOrFullSubset);
            }
        }
        Ok(BlowupSequence {
            vertex_count,
            steps,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        BlowupSequence {
            vertex_count,
            steps: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[(VertexSet, VertexSet)] {
        &self.steps
    }

    /// Every step with distinct subsets must have the swapped step as a
    /// neighbor; out-of-range neighbors do not count.
    pub fn is_symmetric(&self) -> bool {
        for (j, &(a, b)) in self.steps.iter().enumerate() {
            if a == b {
                continue;
            }
            let before = j > 0 && self.steps[j - 1] == (b, a);
            let after = j + 1 < self.steps.len() && self.steps[j + 1] == (b, a);
            if !before && !after {
                return false;
            }
        }
        true
    }

    /// Exactly one end of each edge of the pair falls inside the matching
    /// subset of the step.
    fn step_affects(g: &DualGraph, step: (VertexSet, VertexSet), pair: (usize, usize)) -> bool {
        let (r, s) = pair;
        let (ra, rb) = g.edge_ends(r).unwrap();
        let (sa, sb) = g.edge_ends(s).unwrap();
        (step.0.contains(ra) != step.0.contains(rb))
            && (step.1.contains(sa) != step.1.contains(sb))
    }

    /// Index of the first step affecting the pair, if any.
    pub fn order_of(&self, g: &DualGraph, pair: (usize, usize)) -> Option<usize> {
        self.steps
            .iter()
            .position(|&step| Self::step_affects(g, step, pair))
    }

    /// The diagonal together with every affected pair.
    pub fn center(&self, g: &DualGraph) -> BTreeSet<(usize, usize)> {
        let ec = g.edge_count();
        let mut out = BTreeSet::new();
        for e in 0..ec {
            out.insert((e, e));
        }
        for r in 0..ec {
            for s in 0..ec {
                if self.order_of(g, (r, s)).is_some() {
                    out.insert((r, s));
                }
            }
        }
        out
    }
}

impl std::fmt::Display for BlowupSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "(empty)");
        }
        for (j, &(a, b)) in self.steps.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{})", a, b)?;
        }
        Ok(())
    }
}

/// Outcome of checking a sequence against a singular locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub resolves: bool,
    pub minimal: bool,
    /// Human-readable reason for the verdict, naming a witnessing pair on
    /// failure.
    pub witness: String,
}

fn pair_label(g: &DualGraph, pair: (usize, usize)) -> String {
    format!("({}, {})", g.edge_label(pair.0), g.edge_label(pair.1))
}

/// Checks the three resolving conditions: the center contains the singular
/// locus, the locus is solvable, and at each off-diagonal locus pair every
/// surviving choice separates across the first affecting step. Minimal
/// additionally requires the center to equal the locus.
pub fn verify(g: &DualGraph, rep: &SingularLocusReport, s: &BlowupSequence) -> Verdict {
    if !rep.solvable {
        return Verdict {
            resolves: false,
            minimal: false,
            witness: "the singular locus is not solvable".into(),
        };
    }
    let center = s.center(g);
    for &pair in rep.sigma() {
        if !center.contains(&pair) {
            return Verdict {
                resolves: false,
                minimal: false,
                witness: format!(
                    "singular-locus pair {} lies outside the center",
                    pair_label(g, pair)
                ),
            };
        }
    }
    for pair in rep.sigma_off_diagonal() {
        let j = s
            .order_of(g, pair)
            .expect("pair inside the center is affected");
        let (left, right) = s.steps()[j];
        for choice in rep.qtable().get(pair.0, pair.1) {
            let (v1, v2) = choice.ends;
            if left.contains(v1) == right.contains(v2) {
                return Verdict {
                    resolves: false,
                    minimal: false,
                    witness: format!(
                        "choice ({},{}) at pair {} is not separated by step {}",
                        v1 + 1,
                        v2 + 1,
                        pair_label(g, pair),
                        j + 1
                    ),
                };
            }
        }
    }
    if &center == rep.sigma() {
        Verdict {
            resolves: true,
            minimal: true,
            witness: "center equals the singular locus".into(),
        }
    } else {
        let extra = center
            .iter()
            .find(|pair| !rep.sigma_contains(**pair))
            .copied();
        Verdict {
            resolves: true,
            minimal: false,
            witness: match extra {
                Some(pair) => format!(
                    "center strictly contains the singular locus, e.g. pair {}",
                    pair_label(g, pair)
                ),
                None => "center strictly contains the singular locus".into(),
            },
        }
    }
}

struct StepData {
    left: VertexSet,
    right: VertexSet,
    cover: u128,
    oriented: u128,
}

/// Coverage data of a candidate step against the off-diagonal locus pairs.
/// `None` when the step affects an off-diagonal pair outside the locus,
/// which no minimal sequence may do.
fn step_data(
    g: &DualGraph,
    rep: &SingularLocusReport,
    index_of: &HashMap<(usize, usize), usize>,
    left: VertexSet,
    right: VertexSet,
) -> Option<StepData> {
    let ec = g.edge_count();
    let crossing = |set: VertexSet, e: usize| {
        let (a, b) = g.edge_ends(e).unwrap();
        set.contains(a) != set.contains(b)
    };
    let left_edges: Vec<usize> = (0..ec).filter(|&e| crossing(left, e)).collect();
    let right_edges: Vec<usize> = (0..ec).filter(|&e| crossing(right, e)).collect();
    let mut cover = 0u128;
    let mut oriented = 0u128;
    for &r in &left_edges {
        for &s in &right_edges {
            if r == s {
                continue;
            }
            let idx = match index_of.get(&(r, s)) {
                Some(&idx) => idx,
                None => return None,
            };
            cover |= 1 << idx;
            let (v1, v2) = rep.qtable().get(r, s)[0].ends;
            if left.contains(v1) != right.contains(v2) {
                oriented |= 1 << idx;
            }
        }
    }
    Some(StepData {
        left,
        right,
        cover,
        oriented,
    })
}

/// Depth-limited search over candidate moves; a move is a single step with
/// equal subsets or an adjacent swapped couple. The first step covering a
/// pair must cover it with the right orientation.
struct Search<'a> {
    equals: &'a [StepData],
    couples: &'a [(StepData, StepData)],
    target: u128,
    max_cover: u32,
    memo: HashMap<u128, usize>,
    steps: Vec<(VertexSet, VertexSet)>,
}

impl Search<'_> {
    fn run(&mut self, covered: u128, remaining: usize) -> bool {
        if covered == self.target {
            return true;
        }
        if remaining == 0 {
            return false;
        }
        let uncovered = (self.target & !covered).count_ones();
        if self.max_cover == 0 || uncovered > remaining as u32 * self.max_cover {
            return false;
        }
        if let Some(&budget) = self.memo.get(&covered) {
            if budget >= remaining {
                return false;
            }
        }
        for cand in self.equals {
            let new = cand.cover & !covered;
            if new == 0 || new & !cand.oriented != 0 {
                continue;
            }
            self.steps.push((cand.left, cand.right));
            if self.run(covered | cand.cover, remaining - 1) {
                return true;
            }
            self.steps.pop();
        }
        if remaining >= 2 {
            for (first, second) in self.couples {
                let new1 = first.cover & !covered;
                if new1 & !first.oriented != 0 {
                    continue;
                }
                let covered1 = covered | first.cover;
                let new2 = second.cover & !covered1;
                if new2 & !second.oriented != 0 {
                    continue;
                }
                if new1 == 0 && new2 == 0 {
                    continue;
                }
                self.steps.push((first.left, first.right));
                self.steps.push((second.left, second.right));
                if self.run(covered1 | second.cover, remaining - 2) {
                    return true;
                }
                self.steps.pop();
                self.steps.pop();
            }
        }
        let slot = self.memo.entry(covered).or_insert(0);
        *slot = (*slot).max(remaining);
        false
    }
}

/// Looks for a symmetric sequence whose center is exactly the singular
/// locus and which verifies as resolving, shortest first. Single steps with
/// equal subsets are tried before swapped couples, subsets ordered by
/// cardinality then bitmask. Returns `None` when no sequence of length at
/// most `max_len` (default `2 * |off-diagonal locus| + 2`) exists under
/// this strategy.
pub fn search_minimal_symmetric(
    g: &DualGraph,
    rep: &SingularLocusReport,
    max_len: Option<usize>,
) -> Result<Option<BlowupSequence>> {
    if !rep.solvable {
        return Err(Error::Unsolvable);
    }
    let p = g.vertex_count();
    let targets = rep.sigma_off_diagonal();
    let nt = targets.len();
    assert!(nt <= 128, "off-diagonal singular locus too large to index");
    let max_len = max_len.unwrap_or(2 * nt + 2);
    let target: u128 = if nt == 128 {
        u128::MAX
    } else {
        (1u128 << nt) - 1
    };
    let index_of: HashMap<(usize, usize), usize> = targets
        .iter()
        .copied()
        .enumerate()
        .map(|(i, pair)| (pair, i))
        .collect();

    let mut masks: Vec<VertexSet> = (1..VertexSet::full(p).0)
        .map(VertexSet)
        .collect();
    masks.sort_unstable_by_key(|m| (m.len(), m.0));

    let equals: Vec<StepData> = masks
        .iter()
        .filter_map(|&m| step_data(g, rep, &index_of, m, m))
        .collect();

    // swapped couples stay tractable only for modest vertex counts; the
    // preferred equal-subset steps are always available
    let mut couples: Vec<(StepData, StepData)> = Vec::new();
    if p <= 10 {
        for &l in &masks {
            for &r in &masks {
                if l == r {
                    continue;
                }
                let first = match step_data(g, rep, &index_of, l, r) {
                    Some(d) => d,
                    None => continue,
                };
                let second = match step_data(g, rep, &index_of, r, l) {
                    Some(d) => d,
                    None => continue,
                };
                couples.push((first, second));
            }
        }
    }

    let max_cover = equals
        .iter()
        .map(|c| c.cover.count_ones())
        .chain(couples.iter().map(|(a, b)| (a.cover | b.cover).count_ones()))
        .max()
        .unwrap_or(0);

    for limit in 0..=max_len {
        let mut search = Search {
            equals: &equals,
            couples: &couples,
            target,
            max_cover,
            memo: HashMap::new(),
            steps: Vec::new(),
        };
        if search.run(0, limit) {
            let seq = BlowupSequence::new(p, search.steps)?;
            debug_assert!(seq.is_symmetric());
            debug_assert!(verify(g, rep, &seq).minimal);
            return Ok(Some(seq));
        }
    }
    Ok(None)
}
