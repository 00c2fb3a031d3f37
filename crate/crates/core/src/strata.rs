//! Stratification of the degree-0 polarization space by wall data: for each
//! proper subset containing the marked vertex, the position of
//! `sum_I(e) + k_I/2` relative to the integer walls. Polarizations with the
//! same signature produce the same correction table, so one representative
//! per signature suffices for sweeps.

use crate::error::{Error, Result};
use crate::graph::{DualGraph, VertexSet};
use crate::quasistability::{Polarization, Rat};
use num_traits::Zero;

/// Enumeration cap for grid sweeps.
const GRID_CAP: u128 = 20_000_000;

/// Wall data of one subset: which integer interval `sum_I(e) + k_I/2`
/// falls into, and whether it sits exactly on a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignatureEntry {
    pub subset: VertexSet,
    pub floor: i64,
    pub on_wall: bool,
}

/// Signature of a degree-0 polarization: one entry per proper subset
/// containing the marked vertex, ascending by subset bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    entries: Vec<SignatureEntry>,
    in_xi0: bool,
}

impl StratumSignature {
    pub fn entries(&self) -> &[SignatureEntry] {
        &self.entries
    }

    /// Whether the polarization satisfies `-k_I/2 <= sum_I(e) < k_I/2`
    /// for every proper subset containing the marked vertex.
    pub fn in_xi0(&self) -> bool {
        self.in_xi0
    }

    /// Grouping key, independent of the graph instance it was computed on.
    pub fn key(&self) -> Vec<(u32, i64, bool)> {
        self.entries
            .iter()
            .map(|s| (s.subset.0, s.floor, s.on_wall))
            .collect()
    }
}

/// Computes the signature of a degree-0 polarization.
pub fn signature(g: &DualGraph, v: usize, e: &Polarization) -> Result<StratumSignature> {
    let p = g.vertex_count();
    if v >= p {
        return Err(Error::BadVertexIndex {
            index: v,
            vertex_count: p,
        });
    }
    if e.len() != p {
        return Err(Error::LengthMismatch {
            expected: p,
            found: e.len(),
        });
    }
    if e.degree() != Rat::zero() {
        return Err(Error::NonzeroDegree {
            degree: e.degree().to_string(),
        });
    }
    let scaled = e.scaled();
    let full = VertexSet::full(p).0;
    let mut entries = Vec::new();
    let mut in_xi0 = true;
    for mask in 1..full {
        if mask & (1 << v) == 0 {
            continue;
        }
        let set = VertexSet(mask);
        let k = g.boundary_count(set)? as i64;
        // s = sum_I(e) + k/2 as (2*sum(num) + den*k) / (2*den)
        let num: i64 = set.iter().map(|i| 2 * scaled.nums[i]).sum::<i64>() + scaled.den * k;
        let den = 2 * scaled.den;
        entries.push(SignatureEntry {
            subset: set,
            floor: num.div_euclid(den),
            on_wall: num.rem_euclid(den) == 0,
        });
        if num < 0 || num >= k * den {
            in_xi0 = false;
        }
    }
    Ok(StratumSignature { entries, in_xi0 })
}

/// Componentwise equality of the two signatures.
pub fn same_stratum_signature(
    g: &DualGraph,
    v: usize,
    e1: &Polarization,
    e2: &Polarization,
) -> Result<bool> {
    Ok(signature(g, v, e1)? == signature(g, v, e2)?)
}

/// Scans the degree-0 grid of rationals with denominator `denominator` and
/// coordinates in `[-bound, bound]`, keeps the points inside the admissible
/// region, and returns the first-found representative of each signature,
/// sorted by signature key. A stratum with no grid point is missed; callers
/// report the grid used.
pub fn enumerate_stratum_representatives(
    g: &DualGraph,
    v: usize,
    denominator: i64,
    bound: i64,
) -> Result<Vec<(Polarization, StratumSignature)>> {
    assert!(denominator >= 1 && bound >= 0);
    let p = g.vertex_count();
    if v >= p {
        return Err(Error::BadVertexIndex {
            index: v,
            vertex_count: p,
        });
    }
    let limit = bound * denominator;
    let span = (2 * limit + 1) as u128;
    let points = span.pow((p - 1) as u32);
    if points > GRID_CAP {
        return Err(Error::GridTooLarge {
            points,
            cap: GRID_CAP,
        });
    }

    let mut found: Vec<(Polarization, StratumSignature)> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<(u32, i64, bool)>> = Default::default();
    let mut nums = vec![-limit; p - 1];
    loop {
        let last = -nums.iter().sum::<i64>();
        if last.abs() <= limit {
            let e = Polarization::new(
                nums.iter()
                    .chain(std::iter::once(&last))
                    .map(|&n| Rat::new(n, denominator))
                    .collect(),
            );
            let sig = signature(g, v, &e)?;
            if sig.in_xi0() && seen.insert(sig.key()) {
                found.push((e, sig));
            }
        }
        // odometer over the first p-1 coordinates
        let mut i = 0;
        loop {
            if i == p - 1 {
                found.sort_by_key(|(_, sig)| sig.key());
                return Ok(found);
            }
            if nums[i] < limit {
                nums[i] += 1;
                break;
            }
            nums[i] = -limit;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn banana() -> DualGraph {
        DualGraph::from_edges(2, vec![(0, 1), (0, 1)]).unwrap()
    }

    fn half(n: i64) -> Rat {
        Rat::new(n, 2)
    }

    #[test]
    fn banana_zero_signature() {
        let sig = signature(&banana(), 0, &Polarization::zero(2)).unwrap();
        assert_eq!(sig.entries().len(), 1);
        assert_eq!(sig.entries()[0].subset, VertexSet(0b01));
        assert_eq!(sig.entries()[0].floor, 1);
        assert!(sig.entries()[0].on_wall);
        assert!(sig.in_xi0());
    }

    #[test]
    fn four_vertex_half_integer_point_is_admissible() {
        let g = DualGraph::from_intersection_matrix(&[
            vec![-2, 1, 1, 0],
            vec![1, -5, 3, 1],
            vec![1, 3, -6, 2],
            vec![0, 1, 2, -3],
        ])
        .unwrap();
        let e = Polarization::new(vec![half(0), half(-1), half(0), half(1)]);
        let sig = signature(&g, 0, &e).unwrap();
        assert_eq!(sig.entries().len(), 7);
        assert!(sig.in_xi0());

        // shifting weight onto the marked vertex breaks admissibility
        let e_bad = Polarization::new(vec![half(-3), half(3), half(0), half(0)]);
        assert!(!signature(&g, 0, &e_bad).unwrap().in_xi0());
    }

    #[test]
    fn signature_comparisons() {
        let g = DualGraph::from_intersection_matrix(&[
            vec![-2, 1, 1, 0],
            vec![1, -5, 3, 1],
            vec![1, 3, -6, 2],
            vec![0, 1, 2, -3],
        ])
        .unwrap();
        let zero = Polarization::zero(4);
        assert!(same_stratum_signature(&g, 0, &zero, &zero).unwrap());
        // e = (0,-1/2,0,1/2) moves {1,2} onto a wall (s goes from 5/2 to 2),
        // so the signatures differ even though the resolutions agree
        let shifted = Polarization::new(vec![half(0), half(-1), half(0), half(1)]);
        assert!(!same_stratum_signature(&g, 0, &zero, &shifted).unwrap());
    }

    #[test]
    fn nonzero_degree_is_rejected() {
        assert!(matches!(
            signature(&banana(), 0, &Polarization::from_integers(&[1, 0])),
            Err(Error::NonzeroDegree { .. })
        ));
    }

    #[test]
    fn banana_grid_sweep() {
        let reps = enumerate_stratum_representatives(&banana(), 0, 2, 1).unwrap();
        // four admissible points with pairwise distinct wall data
        assert_eq!(reps.len(), 4);
        for (e, sig) in &reps {
            assert!(sig.in_xi0());
            assert_eq!(&signature(&banana(), 0, e).unwrap(), sig);
        }
        let found: Vec<Vec<Rat>> = reps.iter().map(|(e, _)| e.values().to_vec()).collect();
        assert!(found.contains(&vec![half(0), half(0)]));
        assert!(found.contains(&vec![half(-1), half(1)]));
    }

    #[test]
    fn trivial_grid_has_single_row() {
        let reps = enumerate_stratum_representatives(&banana(), 0, 1, 0).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].0, Polarization::zero(2));
    }

    #[test]
    fn refining_the_grid_keeps_signatures() {
        let tri = DualGraph::from_edges(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let coarse = enumerate_stratum_representatives(&tri, 0, 2, 2).unwrap();
        let fine = enumerate_stratum_representatives(&tri, 0, 4, 2).unwrap();
        let fine_keys: Vec<_> = fine.iter().map(|(_, s)| s.key()).collect();
        for (_, sig) in &coarse {
            assert!(fine_keys.contains(&sig.key()));
        }
        assert!(fine.len() >= coarse.len());
    }
}
