//! Sets of crossings whose change unknots a diagram, and a greedy
//! Reidemeister simplifier that certifies unknottedness.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::diagram::{GaussEntry, MarkedSet, OrientedDiagram, Strand};
use crate::error::{Error, Result};

/// Default number of third Reidemeister moves the simplifier may spend.
pub const DEFAULT_R3_BUDGET: usize = 1000;

/// Walks the knot from `basepoint` and marks every crossing that is first
/// reached along its under-strand. Changing those crossings leaves a
/// descending diagram, which is always an unknot.
///
/// The set is listed in the order the crossings are first met.
pub fn descending_set(d: &OrientedDiagram, basepoint: usize) -> Result<MarkedSet> {
    let n2 = d.arc_count();
    if n2 == 0 {
        return if basepoint == 1 { Ok(MarkedSet::empty()) } else { Err(Error::UnknownArc(basepoint)) };
    }
    if basepoint == 0 || basepoint > n2 {
        return Err(Error::UnknownArc(basepoint));
    }
    let mut seen = vec![false; d.crossing_count()];
    let mut marked = Vec::new();
    let mut e = basepoint;
    for _ in 0..n2 {
        let (c, strand) = d.head(e);
        if !seen[c] {
            seen[c] = true;
            if strand == Strand::Under {
                marked.push(c + 1);
            }
        }
        e = d.next_arc(e);
    }
    MarkedSet::new(marked, d)
}

/// Greedy simplification: remove kinks and bigons whenever possible, and
/// otherwise spend one of `r3_budget` triangle moves. `true` means the
/// diagram reached zero crossings; `false` only means "not certified".
pub fn verify_unknotted(d: &OrientedDiagram, r3_budget: usize) -> bool {
    let mut seq = d.gauss_sequence();
    let mut visited: HashSet<Vec<GaussEntry>> = HashSet::new();
    let mut budget = r3_budget;
    loop {
        if seq.is_empty() {
            return true;
        }
        if let Some(i) = find_kink(&seq) {
            let j = (i + 1) % seq.len();
            remove_positions(&mut seq, &[i, j]);
            continue;
        }
        let Ok(current) = OrientedDiagram::from_gauss(&seq) else {
            return false;
        };
        let faces = current.faces();
        if let Some(labels) = find_bigon(&seq, &current, &faces) {
            seq.retain(|g| !labels.contains(&g.crossing));
            continue;
        }
        visited.insert(seq.clone());
        if budget == 0 {
            return false;
        }
        let next = faces
            .iter()
            .filter(|f| f.len() == 3)
            .filter_map(|f| triangle_move(&seq, &current, f))
            .find(|s| !visited.contains(s));
        match next {
            Some(s) => {
                budget -= 1;
                seq = s;
            }
            None => return false,
        }
    }
}

/// Cyclically adjacent visits to one crossing are a removable kink.
fn find_kink(seq: &[GaussEntry]) -> Option<usize> {
    let len = seq.len();
    (0..len).find(|&i| seq[i].crossing == seq[(i + 1) % len].crossing)
}

fn remove_positions(seq: &mut Vec<GaussEntry>, positions: &[usize]) {
    let mut idx = 0;
    seq.retain(|_| {
        let keep = !positions.contains(&idx);
        idx += 1;
        keep
    });
}

/// Sequence positions at the two ends of arc `label` (see
/// [`OrientedDiagram::from_gauss`] for the labelling).
fn arc_ends(label: usize, len: usize) -> (usize, usize) {
    (label - 1, label % len)
}

fn arc_strand(seq: &[GaussEntry], label: usize) -> Option<Strand> {
    let (a, b) = arc_ends(label, seq.len());
    (seq[a].strand == seq[b].strand).then_some(seq[a].strand)
}

fn crossing_labels(seq: &[GaussEntry]) -> Vec<usize> {
    let mut labels: Vec<usize> = seq.iter().map(|g| g.crossing).collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

/// A two-sided face where one arc passes over both crossings and the other
/// passes under both can be pulled apart.
fn find_bigon(seq: &[GaussEntry], d: &OrientedDiagram, faces: &[Vec<(usize, usize)>]) -> Option<[usize; 2]> {
    let labels = crossing_labels(seq);
    faces.iter().filter(|f| f.len() == 2).find_map(|f| {
        let arcs: Vec<usize> = f.iter().map(|&(c, p)| d.crossings()[c].slots[p]).collect();
        let s0 = arc_strand(seq, arcs[0])?;
        let s1 = arc_strand(seq, arcs[1])?;
        (s0 != s1 && f[0].0 != f[1].0).then(|| [labels[f[0].0], labels[f[1].0]])
    })
}

/// Slides one side of a triangular face across the opposite crossing. The
/// move is legal when one of the three sides runs over at both of its ends;
/// in the Gauss sequence it swaps the two visits at the ends of every side.
fn triangle_move(seq: &[GaussEntry], d: &OrientedDiagram, face: &[(usize, usize)]) -> Option<Vec<GaussEntry>> {
    let corners: HashSet<usize> = face.iter().map(|&(c, _)| c).collect();
    if corners.len() != 3 {
        return None;
    }
    let arcs: Vec<usize> = face.iter().map(|&(c, p)| d.crossings()[c].slots[p]).collect();
    if !arcs.iter().any(|&l| arc_strand(seq, l) == Some(Strand::Over)) {
        return None;
    }
    let mut out = seq.to_vec();
    for &l in &arcs {
        let (a, b) = arc_ends(l, seq.len());
        out.swap(a, b);
    }
    OrientedDiagram::from_gauss(&out).ok().map(|_| out)
}

/// Smallest set of at most `size_budget` crossings whose change is certified
/// by [`verify_unknotted`], ties broken lexicographically. Falls back to the
/// descending set from arc 1 when no such set exists within the budget.
pub fn minimal_search(d: &OrientedDiagram, size_budget: usize, r3_budget: usize) -> MarkedSet {
    minimal_search_filtered(d, size_budget, r3_budget, |_| true)
}

/// As [`minimal_search`], considering only sets accepted by `accept`.
pub fn minimal_search_filtered<F>(d: &OrientedDiagram, size_budget: usize, r3_budget: usize, accept: F) -> MarkedSet
where
    F: Fn(&MarkedSet) -> bool + Sync,
{
    let n = d.crossing_count();
    for k in 0..=size_budget.min(n) {
        let candidates = combinations(n, k);
        let found = candidates.par_iter().find_first(|ids| {
            let set = MarkedSet::new(ids.to_vec(), d).expect("candidate ids exist");
            accept(&set) && d.change_crossings(&set).is_ok_and(|c| verify_unknotted(&c, r3_budget))
        });
        if let Some(ids) = found {
            return MarkedSet::new(ids.clone(), d).expect("candidate ids exist");
        }
    }
    descending_set(d, 1).expect("arc 1 exists")
}

/// All `k`-subsets of `1..=n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
