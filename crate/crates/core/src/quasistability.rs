//! Exact-rational quasistability of multidegrees, the twister lattice
//! spanned by the vertex flows, unique quasistable representatives, and the
//! correction table read off from them.
//!
//! Every comparison runs in scaled integer arithmetic: with the polarization
//! written over a common denominator, a subset `I` passes when
//! `2*den*sum_I(d) - 2*sum_I(num) + den*k_I` is nonnegative, strictly
//! positive if the marked vertex lies in `I`.

use crate::error::{Error, Result};
use crate::graph::{Cut, DualGraph};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

/// Exact rational scalar used wherever the polarization appears.
pub type Rat = Ratio<i64>;

/// Iteration cap for the twisting fixpoint; exceeding it signals a bug,
/// not a legal outcome.
const TWIST_CAP: u64 = 1_000_000;

/// Rational number per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    values: Vec<Rat>,
}

impl Polarization {
    pub fn new(values: Vec<Rat>) -> Self {
        Polarization { values }
    }

    pub fn zero(len: usize) -> Self {
        Polarization {
            values: vec![Rat::zero(); len],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Polarization {
            values: values.iter().map(|&x| Rat::from_integer(x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> Rat {
        self.values[v]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn degree(&self) -> Rat {
        self.values.iter().sum()
    }

    /// Same polarization on a larger vertex set, zero on the new vertices.
    pub fn extended_with_zeros(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        values.resize(len, Rat::zero());
        Polarization { values }
    }

    /// Numerators over the least common denominator.
    pub(crate) fn scaled(&self) -> ScaledPolarization {
        let den = self
            .values
            .iter()
            .fold(1i64, |acc, r| acc.lcm(r.denom()));
        let nums = self
            .values
            .iter()
            .map(|r| r.numer() * (den / r.denom()))
            .collect();
        ScaledPolarization { nums, den }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ScaledPolarization {
    pub nums: Vec<i64>,
    pub den: i64,
}


/// Integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidegree {
    values: Vec<i64>,
}

impl Multidegree {
    pub fn new(values: Vec<i64>) -> Self {
        Multidegree { values }
    }

    pub fn zero(len: usize) -> Self {
        Multidegree {
            values: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> i64 {
        self.values[v]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn degree(&self) -> i64 {
        self.values.iter().sum()
    }
}

impl std::ops::Sub<&Multidegree> for &Multidegree {
    type Output = Multidegree;
    fn sub(self, rhs: &Multidegree) -> Multidegree {
        Multidegree {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Indicator multidegree at `u`.
pub fn unit_multidegree(g: &DualGraph, u: usize) -> Result<Multidegree> {
    if u >= g.vertex_count() {
        return Err(Error::BadVertexIndex {
            index: u,
            vertex_count: g.vertex_count(),
        });
    }
    let mut values = vec![0i64; g.vertex_count()];
    values[u] = 1;
    Ok(Multidegree::new(values))
}

/// A dual graph with a polarization `e`, a multidegree `q` and a marked
/// vertex, tied together by the degree relation `sum(e) = sum(q) - 2`.
#[derive(Debug, Clone)]
pub struct AbelData {
    graph: DualGraph,
    e: Polarization,
    q: Multidegree,
    v: usize,
}

impl AbelData {
    pub fn new(graph: DualGraph, e: Polarization, q: Multidegree, v: usize) -> Result<Self> {
        let p = graph.vertex_count();
        if e.len() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                found: e.len(),
            });
        }
        if q.len() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                found: q.len(),
            });
        }
        if v >= p {
            return Err(Error::BadVertexIndex {
                index: v,
                vertex_count: p,
            });
        }
        if e.degree() != Rat::from_integer(q.degree() - 2) {
            return Err(Error::DegreeRelation {
                degree_e: e.degree().to_string(),
                degree_q: q.degree(),
            });
        }
        Ok(AbelData { graph, e, q, v })
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn polarization(&self) -> &Polarization {
        &self.e
    }

    pub fn multidegree(&self) -> &Multidegree {
        &self.q
    }

    pub fn marked_vertex(&self) -> usize {
        self.v
    }

    /// Total degree of the polarization.
    pub fn total_degree(&self) -> Rat {
        self.e.degree()
    }
}

fn check_degrees(e: &Polarization, d: &Multidegree) -> Result<()> {
    if e.degree() != Rat::from_integer(d.degree()) {
        return Err(Error::DegreeMismatch {
            degree_d: d.degree().to_string(),
            degree_e: e.degree().to_string(),
        });
    }
    Ok(())
}

/// Scaled slack of a subset: nonnegative iff the subset passes, zero on
/// the boundary where only subsets avoiding the marked vertex may sit.
fn cut_slack(cut: &Cut, d: &[i64], e: &ScaledPolarization) -> i64 {
    let mut sum = 0i64;
    for i in cut.set.iter() {
        sum += 2 * e.den * d[i] - 2 * e.nums[i];
    }
    sum + e.den * cut.boundary as i64
}

pub(crate) fn is_quasistable_with_cuts(
    cuts: &[Cut],
    e: &ScaledPolarization,
    v: usize,
    d: &[i64],
) -> bool {
    for cut in cuts {
        let s = cut_slack(cut, d, e);
        if s < 0 || (s == 0 && cut.set.contains(v)) {
            return false;
        }
    }
    true
}

/// Whether `d` passes the subset inequalities against `e`, strictly on
/// subsets containing `v`. Connected subsets suffice: the slack of a
/// disconnected subset is the sum of the slacks of its induced components.
pub fn is_quasistable(g: &DualGraph, e: &Polarization, v: usize, d: &Multidegree) -> Result<bool> {
    if v >= g.vertex_count() {
        return Err(Error::BadVertexIndex {
            index: v,
            vertex_count: g.vertex_count(),
        });
    }
    check_degrees(e, d)?;
    let cuts = g.connected_cuts();
    Ok(is_quasistable_with_cuts(
        &cuts,
        &e.scaled(),
        v,
        d.values(),
    ))
}

/// Twists `d` by flow functions until quasistable, visiting violating
/// connected subsets in ascending bitmask order. Returns the representative
/// together with the twist coefficients, normalized to zero at `v`.
pub(crate) fn representative_with_twists(
    g: &DualGraph,
    cuts: &[Cut],
    e: &ScaledPolarization,
    v: usize,
    d: &Multidegree,
) -> Result<(Multidegree, Vec<i64>)> {
    let p = g.vertex_count();
    let mut d = d.values().to_vec();
    let mut coef = vec![0i64; p];
    let mut steps = 0u64;
    'search: loop {
        steps += 1;
        if steps > TWIST_CAP {
            return Err(Error::NonTermination { cap: TWIST_CAP });
        }
        for cut in cuts {
            let s = cut_slack(cut, &d, e);
            if s < 0 || (s == 0 && cut.set.contains(v)) {
                // subtract the combined flow of the subset, which raises
                // this subset's slack by its boundary count
                for i in 0..p {
                    let mut t = 0i64;
                    for m in cut.set.iter() {
                        t += if m == i {
                            -(g.degree(i) as i64)
                        } else {
                            g.multiplicity(i, m) as i64
                        };
                    }
                    d[i] -= t;
                }
                for m in cut.set.iter() {
                    coef[m] += 1;
                }
                continue 'search;
            }
        }
        break;
    }
    let base = coef[v];
    for c in coef.iter_mut() {
        *c -= base;
    }
    Ok((Multidegree::new(d), coef))
}

/// The unique quasistable multidegree in the twister-equivalence class of
/// `d`, found by fixpoint twisting.
pub fn quasistable_representative(
    g: &DualGraph,
    e: &Polarization,
    v: usize,
    d: &Multidegree,
) -> Result<Multidegree> {
    if v >= g.vertex_count() {
        return Err(Error::BadVertexIndex {
            index: v,
            vertex_count: g.vertex_count(),
        });
    }
    check_degrees(e, d)?;
    let cuts = g.connected_cuts();
    let (rep, _) = representative_with_twists(g, &cuts, &e.scaled(), v, d)?;
    Ok(rep)
}

/// The normalized twist coefficients for every ordered vertex pair: for
/// pair `(i,k)`, subtracting the recorded combination of flows from
/// `q - unit_i - unit_k` lands on the quasistable representative. The
/// difference `w(m) - w(n)` is the correction value `delta(i,k,m,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTable {
    vertex_count: usize,
    marked: usize,
    w: Vec<Vec<i64>>,
}

impl CorrectionTable {
    #[cfg(test)]
    pub(crate) fn all_zero(vertex_count: usize, marked: usize) -> Self {
        CorrectionTable {
            vertex_count,
            marked,
            w: vec![vec![0; vertex_count]; vertex_count * vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn marked_vertex(&self) -> usize {
        self.marked
    }

    /// Twist coefficients for the ordered pair `(i,k)`, zero at the marked
    /// vertex.
    pub fn coefficients(&self, i: usize, k: usize) -> &[i64] {
        &self.w[i * self.vertex_count + k]
    }

    /// The correction value for the quadruple `(i,k,m,n)`.
    pub fn delta(&self, i: usize, k: usize, m: usize, n: usize) -> i64 {
        let w = self.coefficients(i, k);
        w[m] - w[n]
    }
}

/// Computes the full correction table of the Abel data. Each ordered pair
/// is solved independently; the symmetry `delta(i,k,..) = delta(k,i,..)`
/// is a consequence of uniqueness, not of shared work.
pub fn correction_table(a: &AbelData) -> Result<CorrectionTable> {
    let g = a.graph();
    let p = g.vertex_count();
    let cuts = g.connected_cuts();
    let scaled = a.polarization().scaled();
    let mut w = Vec::with_capacity(p * p);
    for i in 0..p {
        for k in 0..p {
            let mut start = a.multidegree().values().to_vec();
            start[i] -= 1;
            start[k] -= 1;
            let (_, coef) =
                representative_with_twists(g, &cuts, &scaled, a.marked_vertex(), &Multidegree::new(start))?;
            w.push(coef);
        }
    }
    Ok(CorrectionTable {
        vertex_count: p,
        marked: a.marked_vertex(),
        w,
    })
}
