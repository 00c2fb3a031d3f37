//! Per-pair resolution analysis: choices of edge ends for ordered edge
//! pairs, the admissibility inequalities, the two multidegrees induced on
//! the doubly subdivided graph, their chain reductions, quasistable choice
//! sets, and the singular locus.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{DualGraph, SubdividedGraph, VertexSet};
use crate::quasistability::{
    correction_table, AbelData, CorrectionTable, Multidegree, ScaledPolarization,
};

/// How often a chosen end is counted when it coincides with the nearer end
/// of a chain vertex on the same edge. `Literal` counts each of the two
/// slots independently, so a diagonal pair can contribute 2; `AtMostOne`
/// clamps the count. `Literal` is the production reading (it is the one
/// that preserves total degree); `AtMostOne` exists so tests can record
/// both readings side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonMode {
    #[default]
    Literal,
    AtMostOne,
}

/// A choice of one end per edge for an ordered pair of edges. On the
/// diagonal (same edge twice) both slots must pick the same end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairChoice {
    /// Ordered pair of edge ids.
    pub edges: (usize, usize),
    /// Chosen end of each edge.
    pub ends: (usize, usize),
}

impl PairChoice {
    pub fn new(g: &DualGraph, edges: (usize, usize), ends: (usize, usize)) -> Result<Self> {
        let (a1, b1) = g.edge_ends(edges.0)?;
        let (a2, b2) = g.edge_ends(edges.1)?;
        if ends.0 != a1 && ends.0 != b1 {
            return Err(Error::BadVertexIndex {
                index: ends.0,
                vertex_count: g.vertex_count(),
            });
        }
        if ends.1 != a2 && ends.1 != b2 {
            return Err(Error::BadVertexIndex {
                index: ends.1,
                vertex_count: g.vertex_count(),
            });
        }
        if edges.0 == edges.1 && ends.0 != ends.1 {
            return Err(Error::DiagonalChoiceMismatch);
        }
        Ok(PairChoice { edges, ends })
    }

    /// The equivalence class representative: a choice and its mirror form
    /// one class.
    pub fn class_key(&self, g: &DualGraph) -> (usize, usize) {
        let m = mirror(g, self);
        self.ends.min(m.ends)
    }

    /// Equivalent means equal or componentwise different.
    pub fn is_equivalent_to(&self, other: &PairChoice) -> bool {
        debug_assert_eq!(self.edges, other.edges);
        (self.ends.0 == other.ends.0) == (self.ends.1 == other.ends.1)
    }
}

/// Replaces each chosen end by the other end of its edge.
pub fn mirror(g: &DualGraph, c: &PairChoice) -> PairChoice {
    PairChoice {
        edges: c.edges,
        ends: (
            g.other_end(c.edges.0, c.ends.0).unwrap(),
            g.other_end(c.edges.1, c.ends.1).unwrap(),
        ),
    }
}

/// The candidate choices at an ordered pair: two on the diagonal, four off
/// it, in a deterministic order.
pub fn pair_candidates(g: &DualGraph, e1: usize, e2: usize) -> Vec<PairChoice> {
    let (a1, b1) = g.edge_ends(e1).unwrap();
    let (a2, b2) = g.edge_ends(e2).unwrap();
    if e1 == e2 {
        vec![
            PairChoice {
                edges: (e1, e2),
                ends: (a1, a1),
            },
            PairChoice {
                edges: (e1, e2),
                ends: (b1, b1),
            },
        ]
    } else {
        [(a1, a2), (a1, b2), (b1, a2), (b1, b2)]
            .iter()
            .map(|&ends| PairChoice {
                edges: (e1, e2),
                ends,
            })
            .collect()
    }
}

/// The admissibility inequalities at the pair: five per edge away from the
/// pair, ten across the two chosen edges when they differ, two when they
/// coincide.
pub fn admissible_at(a: &AbelData, t: &CorrectionTable, c: &PairChoice) -> bool {
    let g = a.graph();
    let (e1, e2) = c.edges;
    let (v1, v2) = c.ends;
    let (w1, w2) = mirror(g, c).ends;

    for (id, &(m, n)) in g.edges().iter().enumerate() {
        if id == e1 || id == e2 {
            continue;
        }
        let d = |i: usize, k: usize| t.delta(i, k, m, n);
        let checks = [
            d(v1, v2) - d(w1, v2),
            d(v1, v2) - d(v1, w2),
            d(w1, v2) - d(v1, w2),
            d(w1, w2) - d(w1, v2),
            d(w1, w2) - d(v1, w2),
        ];
        if checks.iter().any(|&x| x.abs() > 1) {
            return false;
        }
    }

    if e1 != e2 {
        let da = |i: usize, k: usize| t.delta(i, k, v1, w1);
        let db = |i: usize, k: usize| t.delta(i, k, v2, w2);
        let checks = [
            da(v1, v2) - da(w1, v2) - 1,
            da(v1, v2) - da(v1, w2),
            da(w1, v2) - da(v1, w2) + 1,
            da(w1, w2) - da(w1, v2),
            da(w1, w2) - da(v1, w2) + 1,
            db(v1, w2) - db(v1, v2) + 1,
            db(v1, v2) - db(w1, v2),
            db(w1, v2) - db(v1, w2) - 1,
            db(w1, w2) - db(w1, v2) + 1,
            db(v1, w2) - db(w1, w2),
        ];
        checks.iter().all(|&x| x.abs() <= 1)
    } else {
        let d = |i: usize, k: usize| t.delta(i, k, v1, w1);
        let checks = [d(v1, w1) - d(v1, v1) + 1, d(v1, w1) - d(w1, w1) - 1];
        checks.iter().all(|&x| x.abs() <= 1)
    }
}

/// The two integer functions a choice induces on the double subdivision:
/// the multidegree on original vertices, and on each chain vertex a
/// three-term correction sum minus the slot-coincidence count.
pub fn build_s_functions(
    a: &AbelData,
    t: &CorrectionTable,
    sub: &SubdividedGraph,
    c: &PairChoice,
) -> (Multidegree, Multidegree) {
    build_s_functions_with_mode(a, t, sub, c, EpsilonMode::Literal)
}

pub fn build_s_functions_with_mode(
    a: &AbelData,
    t: &CorrectionTable,
    sub: &SubdividedGraph,
    c: &PairChoice,
    mode: EpsilonMode,
) -> (Multidegree, Multidegree) {
    assert_eq!(sub.depth(), 2, "the pair functions live on the double subdivision");
    let g = a.graph();
    let p = g.vertex_count();
    let total = sub.vertex_count();
    let (v1, v2) = c.ends;
    let (w1, w2) = mirror(g, c).ends;
    let (e1, e2) = c.edges;

    let clamp = |count: i64| match mode {
        EpsilonMode::Literal => count,
        EpsilonMode::AtMostOne => count.min(1),
    };

    let mut s1 = vec![0i64; total];
    let mut s2 = vec![0i64; total];
    for i in 0..p {
        s1[i] = a.multidegree().get(i);
        s2[i] = a.multidegree().get(i);
    }
    for w in p..total {
        let slot = sub.chain_slot(w).unwrap();
        let (m, n) = (slot.nearer_end, slot.far_end);
        let e = slot.edge;
        let eps1 = clamp(
            [(v1, e1), (v2, e2)]
                .iter()
                .filter(|&&(end, edge)| end == m && edge == e)
                .count() as i64,
        );
        let eps2 = clamp(
            [(w1, e1), (w2, e2)]
                .iter()
                .filter(|&&(end, edge)| end == m && edge == e)
                .count() as i64,
        );
        s1[w] = t.delta(v1, v2, m, n) + t.delta(v1, w2, m, n) + t.delta(w1, v2, m, n) - eps1;
        s2[w] = t.delta(w1, w2, m, n) + t.delta(w1, v2, m, n) + t.delta(v1, w2, m, n) - eps2;
    }
    (Multidegree::new(s1), Multidegree::new(s2))
}

/// The canonical representative of `d` modulo twists at exceptional
/// vertices: on every chain the two interior values become `(0,0)`,
/// `(-1,0)` or `(0,-1)`, and the integer twist coefficients spill onto the
/// chain ends. The interior twist lattice has index three, classified by
/// the difference of the interior values mod 3.
pub fn reduce(sub: &SubdividedGraph, d: &Multidegree) -> Multidegree {
    assert_eq!(sub.depth(), 2, "reduction is defined on the double subdivision");
    assert_eq!(d.len(), sub.vertex_count());
    let mut out = d.values().to_vec();
    for (id, &(a, b)) in sub.base().edges().iter().enumerate() {
        let w1 = sub.exceptional_vertex(id, 0);
        let w2 = sub.exceptional_vertex(id, 1);
        let (x, y) = (out[w1], out[w2]);
        let (t1, t2) = match (x - y).rem_euclid(3) {
            0 => (0, 0),
            1 => (0, -1),
            _ => (-1, 0),
        };
        let ca = (2 * (t1 - x) + (t2 - y)) / 3;
        let cb = ((t1 - x) + 2 * (t2 - y)) / 3;
        debug_assert_eq!(2 * (t1 - x) + (t2 - y), 3 * ca);
        debug_assert_eq!((t1 - x) + 2 * (t2 - y), 3 * cb);
        out[w1] = t1;
        out[w2] = t2;
        out[a] -= ca;
        out[b] -= cb;
    }
    Multidegree::new(out)
}

/// Quasistability check on a double subdivision, exact and polynomial: for
/// a fixed trace on the original vertices, each chain's contribution to a
/// subset's slack is minimized independently over its four interior
/// configurations. Covers all subsets, not only connected ones, which is
/// equivalent because slack is additive over induced components.
pub(crate) fn quasistable_on_double_subdivision(
    sub: &SubdividedGraph,
    e: &ScaledPolarization,
    v: usize,
    d: &[i64],
) -> bool {
    assert_eq!(sub.depth(), 2);
    let bg = sub.base();
    let p = bg.vertex_count();
    let den = e.den;
    debug_assert_eq!(e.nums.len(), p);
    debug_assert_eq!(d.len(), sub.vertex_count());

    let chains: Vec<(usize, usize, i64, i64)> = bg
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &(a, b))| {
            (
                a,
                b,
                d[sub.exceptional_vertex(id, 0)],
                d[sub.exceptional_vertex(id, 1)],
            )
        })
        .collect();

    // contribution of one chain, doubled and scaled by den, for interior
    // configuration (t1, t2) against end membership (sa, sb)
    let contrib = |x: i64, y: i64, sa: bool, sb: bool, t1: bool, t2: bool| -> i64 {
        let inner = 2 * den * ((t1 as i64) * x + (t2 as i64) * y);
        let crossing = (sa != t1) as i64 + (t1 != t2) as i64 + (t2 != sb) as i64;
        inner + den * crossing
    };

    let full: u32 = if p == 32 { u32::MAX } else { (1 << p) - 1 };
    for smask in 0..=full {
        let s = VertexSet(smask);
        let mut base = 0i64;
        for i in s.iter() {
            base += 2 * den * d[i] - 2 * e.nums[i];
        }

        if smask != 0 && smask != full {
            let mut total = base;
            for &(a, b, x, y) in &chains {
                let (sa, sb) = (s.contains(a), s.contains(b));
                let m = contrib(x, y, sa, sb, false, false)
                    .min(contrib(x, y, sa, sb, true, false))
                    .min(contrib(x, y, sa, sb, false, true))
                    .min(contrib(x, y, sa, sb, true, true));
                total += m;
            }
            if total < 0 || (total == 0 && s.contains(v)) {
                return false;
            }
        } else {
            // the extreme traces need the all-empty / all-full interior
            // configuration excluded, since the subset must be proper and
            // nonempty
            let extreme_full = smask == full;
            let mut total = base;
            let mut all_uniquely_extreme = true;
            let mut best_switch = i64::MAX;
            for &(a, b, x, y) in &chains {
                let (sa, sb) = (s.contains(a), s.contains(b));
                let extreme = contrib(x, y, sa, sb, extreme_full, extreme_full);
                let mut other = i64::MAX;
                for &(t1, t2) in &[(false, false), (true, false), (false, true), (true, true)] {
                    if (t1, t2) == (extreme_full, extreme_full) {
                        continue;
                    }
                    other = other.min(contrib(x, y, sa, sb, t1, t2));
                }
                let m = extreme.min(other);
                total += m;
                if other <= extreme {
                    all_uniquely_extreme = false;
                }
                best_switch = best_switch.min(other - m);
            }
            let achievable = if all_uniquely_extreme {
                total + best_switch
            } else {
                total
            };
            // v is an original vertex, so it lies in the subset iff the
            // trace is full
            if achievable < 0 || (achievable == 0 && extreme_full) {
                return false;
            }
        }
        if smask == full {
            break;
        }
    }
    true
}

/// Whether the choice is admissible and both induced functions have
/// quasistable reductions on the double subdivision, against the
/// polarization extended by zeros.
pub fn quasistable_at(a: &AbelData, t: &CorrectionTable, c: &PairChoice) -> Result<bool> {
    let sub = a.graph().subdivide(2)?;
    let scaled = a.polarization().scaled();
    Ok(quasistable_at_prepared(
        a,
        t,
        &sub,
        &scaled,
        c,
        EpsilonMode::Literal,
    ))
}

fn quasistable_at_prepared(
    a: &AbelData,
    t: &CorrectionTable,
    sub: &SubdividedGraph,
    scaled: &ScaledPolarization,
    c: &PairChoice,
    mode: EpsilonMode,
) -> bool {
    if !admissible_at(a, t, c) {
        return false;
    }
    let (s1, s2) = build_s_functions_with_mode(a, t, sub, c, mode);
    let v = a.marked_vertex();
    let r1 = reduce(sub, &s1);
    if !quasistable_on_double_subdivision(sub, scaled, v, r1.values()) {
        return false;
    }
    let r2 = reduce(sub, &s2);
    quasistable_on_double_subdivision(sub, scaled, v, r2.values())
}

/// Quasistable choice sets per ordered edge pair.
#[derive(Debug, Clone)]
pub struct QTable {
    edge_count: usize,
    sets: Vec<Vec<PairChoice>>,
}

impl QTable {
    #[cfg(test)]
    pub(crate) fn from_sets(edge_count: usize, sets: Vec<Vec<PairChoice>>) -> Self {
        QTable { edge_count, sets }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn get(&self, e1: usize, e2: usize) -> &[PairChoice] {
        &self.sets[e1 * self.edge_count + e2]
    }
}

/// The singular locus together with everything it was computed from.
#[derive(Debug, Clone)]
pub struct SingularLocusReport {
    /// True when every ordered pair admits at least one quasistable choice.
    pub solvable: bool,
    sigma: BTreeSet<(usize, usize)>,
    qtable: QTable,
}

impl SingularLocusReport {
    #[cfg(test)]
    pub(crate) fn from_parts(
        solvable: bool,
        sigma: BTreeSet<(usize, usize)>,
        qtable: QTable,
    ) -> Self {
        SingularLocusReport {
            solvable,
            sigma,
            qtable,
        }
    }

    /// Ordered edge pairs on which all quasistable resolutions agree up to
    /// mirror.
    pub fn sigma(&self) -> &BTreeSet<(usize, usize)> {
        &self.sigma
    }

    pub fn sigma_contains(&self, pair: (usize, usize)) -> bool {
        self.sigma.contains(&pair)
    }

    /// The pairs of the singular locus away from the diagonal.
    pub fn sigma_off_diagonal(&self) -> Vec<(usize, usize)> {
        self.sigma.iter().copied().filter(|&(a, b)| a != b).collect()
    }

    pub fn qtable(&self) -> &QTable {
        &self.qtable
    }
}

/// Computes quasistable choice sets for all ordered edge pairs, whether
/// quasistable resolutions exist at all, and the pairs on which they are
/// forced up to mirror.
pub fn singular_locus(a: &AbelData) -> Result<SingularLocusReport> {
    singular_locus_with_mode(a, EpsilonMode::Literal)
}

pub fn singular_locus_with_mode(a: &AbelData, mode: EpsilonMode) -> Result<SingularLocusReport> {
    let g = a.graph();
    let t = correction_table(a)?;
    let sub = g.subdivide(2)?;
    let scaled = a.polarization().scaled();
    let ec = g.edge_count();

    let mut sets = Vec::with_capacity(ec * ec);
    for e1 in 0..ec {
        for e2 in 0..ec {
            let q: Vec<PairChoice> = pair_candidates(g, e1, e2)
                .into_iter()
                .filter(|c| quasistable_at_prepared(a, &t, &sub, &scaled, c, mode))
                .collect();
            sets.push(q);
        }
    }
    let qtable = QTable {
        edge_count: ec,
        sets,
    };

    let mut solvable = true;
    let mut sigma = BTreeSet::new();
    for e1 in 0..ec {
        for e2 in 0..ec {
            let q = qtable.get(e1, e2);
            if q.is_empty() {
                solvable = false;
                continue;
            }
            let key = q[0].class_key(g);
            if q.iter().all(|c| c.class_key(g) == key) {
                sigma.insert((e1, e2));
            }
        }
    }
    Ok(SingularLocusReport {
        solvable,
        sigma,
        qtable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasistability::{is_quasistable, Polarization};

    fn banana() -> DualGraph {
        DualGraph::from_edges(2, vec![(0, 1), (0, 1)]).unwrap()
    }

    fn banana_data() -> AbelData {
        AbelData::new(
            banana(),
            Polarization::zero(2),
            Multidegree::new(vec![2, 0]),
            0,
        )
        .unwrap()
    }

    fn triangle() -> DualGraph {
        DualGraph::from_edges(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn mirror_swaps_both_ends() {
        let g = triangle();
        // edge 0 is 1-2, edge 1 is 1-3
        let c = PairChoice::new(&g, (0, 1), (0, 0)).unwrap();
        let m = mirror(&g, &c);
        assert_eq!(m.ends, (1, 2));
        assert_eq!(mirror(&g, &m), c);
    }

    #[test]
    fn mirror_on_the_diagonal() {
        let g = banana();
        let c = PairChoice::new(&g, (0, 0), (0, 0)).unwrap();
        assert_eq!(mirror(&g, &c).ends, (1, 1));
        assert!(PairChoice::new(&g, (0, 0), (0, 1)).is_err());
    }

    #[test]
    fn zero_table_is_admissible_on_the_diagonal() {
        let a = banana_data();
        let t = CorrectionTable::all_zero(2, 0);
        for c in pair_candidates(a.graph(), 0, 0) {
            assert!(admissible_at(&a, &t, &c));
        }
    }

    #[test]
    fn admissibility_is_mirror_invariant_on_the_banana() {
        let a = banana_data();
        let t = correction_table(&a).unwrap();
        for e1 in 0..2 {
            for e2 in 0..2 {
                for c in pair_candidates(a.graph(), e1, e2) {
                    assert_eq!(
                        admissible_at(&a, &t, &c),
                        admissible_at(&a, &t, &mirror(a.graph(), &c))
                    );
                }
            }
        }
    }

    #[test]
    fn banana_s_functions_on_the_diagonal() {
        let a = banana_data();
        let t = correction_table(&a).unwrap();
        let sub = a.graph().subdivide(2).unwrap();
        let c = PairChoice::new(a.graph(), (0, 0), (0, 0)).unwrap();
        let (s1, s2) = build_s_functions(&a, &t, &sub, &c);
        // both slots match the nearer end of the first chain vertex
        assert_eq!(s1.values(), &[2, 0, -2, 0, 0, 0]);
        assert_eq!(s2.values(), &[2, 0, -1, -1, -1, 1]);
        // the clamped reading records -1 there instead
        let (s1c, _) =
            build_s_functions_with_mode(&a, &t, &sub, &c, EpsilonMode::AtMostOne);
        assert_eq!(s1c.values(), &[2, 0, -1, 0, 0, 0]);
        // total degree only matches the polarization under the literal count
        assert_eq!(s1.degree(), 0);
        assert_eq!(s2.degree(), 0);
        assert_eq!(s1c.degree(), 1);
    }

    #[test]
    fn reduce_spills_toward_the_nearer_end() {
        let sub = banana().subdivide(2).unwrap();
        let d = Multidegree::new(vec![0, 0, -2, 1, 0, 0]);
        let r = reduce(&sub, &d);
        assert_eq!(r.values(), &[-1, 0, 0, 0, 0, 0]);
        assert_eq!(r.degree(), d.degree());
        assert_eq!(reduce(&sub, &r), r);
    }

    #[test]
    fn reduce_leaves_canonical_chains_alone() {
        let sub = banana().subdivide(2).unwrap();
        let d = Multidegree::new(vec![1, 0, -1, 0, 0, 0]);
        assert_eq!(reduce(&sub, &d), d);
    }

    #[test]
    fn banana_reductions_match_hand_computation() {
        let a = banana_data();
        let t = correction_table(&a).unwrap();
        let sub = a.graph().subdivide(2).unwrap();
        let c = PairChoice::new(a.graph(), (0, 0), (0, 0)).unwrap();
        let (s1, s2) = build_s_functions(&a, &t, &sub, &c);
        assert_eq!(reduce(&sub, &s1).values(), &[1, 0, 0, -1, 0, 0]);
        assert_eq!(reduce(&sub, &s2).values(), &[1, 0, 0, 0, 0, -1]);
    }

    #[test]
    fn fast_subdivision_check_agrees_with_the_generic_one() {
        let a = banana_data();
        let sub = a.graph().subdivide(2).unwrap();
        let scaled = a.polarization().scaled();
        let e2 = a.polarization().extended_with_zeros(sub.vertex_count());
        for d in [
            vec![1, 0, 0, -1, 0, 0],
            vec![1, 0, 0, 0, 0, -1],
            vec![2, 0, -1, 0, -1, 0],
            vec![0, 0, 0, 0, 0, 0],
            vec![-1, 1, 0, 0, 0, 0],
        ] {
            let m = Multidegree::new(d);
            assert_eq!(
                quasistable_on_double_subdivision(&sub, &scaled, 0, m.values()),
                is_quasistable(sub.graph(), &e2, 0, &m).unwrap(),
                "disagreement on {:?}",
                m
            );
        }
    }

    #[test]
    fn banana_singular_locus_is_everything() {
        let a = banana_data();
        let rep = singular_locus(&a).unwrap();
        assert!(rep.solvable);
        assert_eq!(rep.sigma().len(), 4);
        // the off-diagonal pairs keep only the crossed class
        let q = rep.qtable().get(0, 1);
        let mut ends: Vec<(usize, usize)> = q.iter().map(|c| c.ends).collect();
        ends.sort_unstable();
        assert_eq!(ends, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn single_edge_graph_has_diagonal_singular_locus() {
        let g = DualGraph::from_edges(2, vec![(0, 1)]).unwrap();
        let a = AbelData::new(g, Polarization::zero(2), Multidegree::new(vec![2, 0]), 0).unwrap();
        let rep = singular_locus(&a).unwrap();
        assert!(rep.solvable);
        assert_eq!(rep.sigma().iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn full_choice_sets_fall_outside_sigma() {
        // on the four-vertex fixture with zero polarization, pairs of edges
        // not sharing a vertex near the marked one keep all four choices
        let g = DualGraph::from_intersection_matrix(&[
            vec![-2, 1, 1, 0],
            vec![1, -5, 3, 1],
            vec![1, 3, -6, 2],
            vec![0, 1, 2, -3],
        ])
        .unwrap();
        let a = AbelData::new(g, Polarization::zero(4), Multidegree::new(vec![2, 0, 0, 0]), 0)
            .unwrap();
        let rep = singular_locus(&a).unwrap();
        assert!(rep.solvable);
        for e1 in 0..8 {
            for e2 in 0..8 {
                let q = rep.qtable().get(e1, e2);
                if q.len() == 4 {
                    assert!(!rep.sigma_contains((e1, e2)));
                }
            }
        }
    }
}
