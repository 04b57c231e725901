//! Combinatorial model of the link formed by the changed knot Û and two
//! parallel copies of every double-point loop.
//!
//! Every loop follows a subarc of the knot at a fixed signed offset `s` from
//! Û (positive offsets lie to the left of the orientation). Near each
//! crossing of the knot the parallel strands form a small grid; a strand at
//! offset `s` on one branch meets a strand at offset `q` on the other branch
//! at a point whose coordinates along the two branches are `±q` and `∓s`.
//! Those grid points are the crossings of the link, and sorting them by
//! coordinate gives the order in which each component passes them.

use std::collections::HashMap;

use crate::diagram::{OrientedDiagram, Strand};
use crate::error::{Error, Result};

use super::{DoublePointLoop, Side};

/// A crossing of the link: component indices use 0 for Û, `1 + 2i` for the
/// loop `L_i` and `2 + 2i` for its second pushoff `L_i'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkCrossing {
    pub over: usize,
    pub under: usize,
    pub sign: i8,
}

/// One visit of a component to a link crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct AccessoryLink {
    pub crossings: Vec<LinkCrossing>,
    /// Passages of each component in traversal order.
    pub events: Vec<Vec<Passage>>,
}

impl AccessoryLink {
    pub fn component_count(&self) -> usize {
        self.events.len()
    }

    /// Linking number of component `comp` with Û.
    pub fn linking_with_knot(&self, comp: usize) -> Result<i64> {
        let total: i64 = self
            .crossings
            .iter()
            .filter(|x| (x.over == comp && x.under == 0) || (x.over == 0 && x.under == comp))
            .map(|x| x.sign as i64)
            .sum();
        if total % 2 != 0 {
            return Err(Error::Pipeline(format!("component {comp} meets Û an odd number of times")));
        }
        Ok(total / 2)
    }
}

#[derive(Clone, Copy, Debug)]
enum Range {
    Full,
    Below(i64),
    Above(i64),
}

impl Range {
    fn contains(self, v: i64) -> bool {
        match self {
            Range::Full => true,
            Range::Below(b) => v < b,
            Range::Above(b) => v > b,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Member {
    comp: usize,
    offset: i64,
    range: Range,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Item {
    Edge(usize),
    Pass(usize, Strand),
}

fn strand_index(s: Strand) -> usize {
    match s {
        Strand::Under => 0,
        Strand::Over => 1,
    }
}

/// Arcs of the knot followed by the loop at crossing index `c`: from the
/// outgoing under-strand round to the incoming over-strand.
pub(crate) fn loop_arcs(d: &OrientedDiagram, c: usize) -> Vec<usize> {
    let start = d.crossings()[c].under_out();
    let mut arcs = vec![start];
    let mut e = start;
    while d.head(e) != (c, Strand::Over) {
        e = d.next_arc(e);
        arcs.push(e);
    }
    arcs
}

/// Position (the arc running into it) of every passage of the knot.
fn passage_positions(d: &OrientedDiagram) -> HashMap<(usize, Strand), usize> {
    (1..=d.arc_count()).map(|e| (d.head(e), e)).collect()
}

/// Depth of each loop (0 = closest to Û). A loop that opens earlier along
/// the knot sits closer to Û. `None` when two loops overlap in both orders.
pub(crate) fn nesting_depths(d: &OrientedDiagram, marked: &[usize]) -> Option<Vec<usize>> {
    let n2 = d.arc_count() as i64;
    let pos = passage_positions(d);
    let starts: Vec<i64> = marked.iter().map(|&c| pos[&(c, Strand::Under)] as i64).collect();
    let ends: Vec<i64> = marked.iter().map(|&c| pos[&(c, Strand::Over)] as i64).collect();
    let dist = |a: i64, b: i64| (b - a).rem_euclid(n2);
    let k = marked.len();
    let mut older = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for e in 1..=n2 {
                let in_i = dist(starts[i], e) <= dist(starts[i], ends[i]);
                let in_j = dist(starts[j], e) <= dist(starts[j], ends[j]);
                if in_i && in_j && dist(starts[i], e) > dist(starts[j], e) {
                    older[i][j] = true;
                }
            }
        }
    }
    if (0..k).any(|i| (0..k).any(|j| older[i][j] && older[j][i])) {
        return None;
    }
    let mut depth = vec![0; k];
    let mut remaining: Vec<usize> = (0..k).collect();
    let mut next = 0;
    while !remaining.is_empty() {
        let free = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| j != i && older[j][i]))
            .min()?;
        depth[free] = next;
        next += 1;
        remaining.retain(|&i| i != free);
    }
    Some(depth)
}

/// For every passage of a loop through a marked crossing, whether the loop is
/// still "open" there in last-in-first-out order along Û: the passage at
/// which a loop closes sends every loop opened before it underneath.
fn open_flags(d: &OrientedDiagram, marked: &[usize]) -> HashMap<(usize, usize, Strand), bool> {
    let n2 = d.arc_count() as i64;
    let pos = passage_positions(d);
    let starts: Vec<i64> = marked.iter().map(|&c| pos[&(c, Strand::Under)] as i64).collect();
    let ends: Vec<i64> = marked.iter().map(|&c| pos[&(c, Strand::Over)] as i64).collect();
    let dist = |a: i64, b: i64| (b - a).rem_euclid(n2);
    let mut flags = HashMap::new();
    for e in 1..=n2 {
        let (c, st) = d.head(e as usize);
        if !marked.contains(&c) {
            continue;
        }
        let active: Vec<usize> =
            (0..marked.len()).filter(|&i| dist(starts[i], e) <= dist(starts[i], ends[i])).collect();
        for &i in &active {
            flags.insert((i, c, st), true);
        }
        if let Some(&j) = active.iter().find(|&&i| ends[i] == e) {
            for &i in &active {
                if i != j && dist(starts[i], e) < dist(starts[j], e) {
                    flags.insert((i, c, st), false);
                }
            }
        }
    }
    flags
}

struct LoopComp {
    index: usize,
    crossing: usize,
    offset: i64,
    arcs: Vec<usize>,
    rotation: usize,
}

/// Builds the link. When `twist` is set, every loop receives its recorded
/// number of meridional kinks around Û on its first arc.
pub(crate) fn build(
    d: &OrientedDiagram,
    marked: &[usize],
    loops: &[DoublePointLoop],
    twist: bool,
) -> Result<AccessoryLink> {
    let n = d.crossing_count();
    let is_marked: Vec<bool> = (0..n).map(|c| marked.contains(&c)).collect();
    let orig_sign: Vec<i64> = d.crossings().iter().map(|x| x.sign as i64).collect();
    let sign_u: Vec<i64> = (0..n).map(|c| if is_marked[c] { -orig_sign[c] } else { orig_sign[c] }).collect();

    let mut comps: Vec<Option<LoopComp>> = vec![None];
    for l in loops {
        let side = match l.side {
            Side::Left => 1,
            Side::Right => -1,
        };
        let mag = 2 * l.depth as i64 + 1;
        for p in 0..2 {
            comps.push(Some(LoopComp {
                index: l.index,
                crossing: l.crossing - 1,
                offset: side * (mag + p),
                arcs: l.subarc.clone(),
                rotation: l.rotation,
            }));
        }
    }
    let loop_of = |comp: usize| comps[comp].as_ref().map(|l| l.index);

    // Which strands run through each passage of the knot.
    let mut members: Vec<Vec<Member>> = vec![Vec::new(); 2 * n];
    let slot = |c: usize, st: Strand| 2 * c + strand_index(st);
    for e in 1..=d.arc_count() {
        let (c, st) = d.head(e);
        members[slot(c, st)].push(Member { comp: 0, offset: 0, range: Range::Full });
    }
    for (ci, comp) in comps.iter().enumerate() {
        let Some(l) = comp else { continue };
        let s = l.offset;
        for &e in &l.arcs[..l.arcs.len() - 1] {
            let (c, st) = d.head(e);
            members[slot(c, st)].push(Member { comp: ci, offset: s, range: Range::Full });
        }
        // At its own crossing the loop turns from one branch to the other.
        let sg = orig_sign[l.crossing];
        members[slot(l.crossing, Strand::Over)].push(Member { comp: ci, offset: s, range: Range::Below(-sg * s) });
        members[slot(l.crossing, Strand::Under)].push(Member { comp: ci, offset: s, range: Range::Above(sg * s) });
    }

    let open = open_flags(d, marked);
    let flag = |comp: usize, c: usize, st: Strand| -> Result<bool> {
        match loop_of(comp) {
            None => Ok(true),
            Some(i) => open
                .get(&(i, c, st))
                .copied()
                .ok_or_else(|| Error::Pipeline(format!("loop {} has no passage record at crossing {}", i + 1, c + 1))),
        }
    };

    let mut crossings: Vec<LinkCrossing> = Vec::new();
    let mut passage_events: HashMap<(usize, usize, Strand), Vec<(i64, Passage)>> = HashMap::new();
    for c in 0..n {
        let sg = orig_sign[c];
        for m in &members[slot(c, Strand::Under)] {
            for q in &members[slot(c, Strand::Over)] {
                let y = sg * q.offset;
                let xa = -sg * m.offset;
                if !(m.range.contains(y) && q.range.contains(xa)) {
                    continue;
                }
                let first_over = if is_marked[c] {
                    flag(m.comp, c, Strand::Under)? && flag(q.comp, c, Strand::Over)?
                } else {
                    false
                };
                let sign = if first_over == is_marked[c] { sign_u[c] } else { -sign_u[c] };
                let xid = crossings.len();
                let (over, under) = if first_over { (m.comp, q.comp) } else { (q.comp, m.comp) };
                crossings.push(LinkCrossing { over, under, sign: sign as i8 });
                passage_events
                    .entry((m.comp, c, Strand::Under))
                    .or_default()
                    .push((y, Passage { crossing: xid, over: first_over }));
                passage_events
                    .entry((q.comp, c, Strand::Over))
                    .or_default()
                    .push((xa, Passage { crossing: xid, over: !first_over }));
            }
        }
    }
    for v in passage_events.values_mut() {
        v.sort_by_key(|(coord, _)| *coord);
    }

    let mut seqs: Vec<Vec<Item>> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let mut items = Vec::new();
        match comp {
            None => {
                for e in 1..=d.arc_count() {
                    let (c, st) = d.head(e);
                    items.push(Item::Edge(e));
                    items.push(Item::Pass(c, st));
                }
            }
            Some(l) => {
                items.push(Item::Pass(l.crossing, Strand::Under));
                for (j, &e) in l.arcs.iter().enumerate() {
                    items.push(Item::Edge(e));
                    if j + 1 < l.arcs.len() {
                        let (c, st) = d.head(e);
                        items.push(Item::Pass(c, st));
                    }
                }
                items.push(Item::Pass(l.crossing, Strand::Over));
                if l.rotation > 0 {
                    let at = items
                        .iter()
                        .position(|&it| it == Item::Edge(l.arcs[l.rotation]))
                        .expect("rotation arc lies on the loop");
                    items.rotate_left(at);
                }
            }
        }
        seqs.push(items);
    }

    let mut link = AccessoryLink { crossings, events: Vec::new() };
    let mut edge_events: HashMap<(usize, usize), Vec<Passage>> = HashMap::new();
    if twist {
        // Provisional flattening so that linking numbers can be read off.
        for l in loops {
            let tau = l.twists;
            if tau == 0 {
                continue;
            }
            let comp_l = 1 + 2 * l.index;
            let cl = comps[comp_l].as_ref().unwrap();
            let s_l = cl.offset;
            let g = s_l.signum();
            let kappa = tau.signum() * g;
            let first = cl.arcs[0];
            let mut inner: Vec<(usize, i64)> = vec![(0, 0)];
            for (ci, comp) in comps.iter().enumerate() {
                if let Some(o) = comp {
                    if o.arcs.contains(&first) && o.offset * s_l > 0 && o.offset.abs() < s_l.abs() {
                        inner.push((ci, o.offset));
                    }
                }
            }
            let mut inner_desc = inner.clone();
            inner_desc.sort_by_key(|&(_, s)| -s.abs());
            let sign = (g * kappa) as i8;
            for _ in 0..tau.abs() {
                let mut wraps: [HashMap<usize, Passage>; 4] = Default::default();
                for (p, lc) in [comp_l, comp_l + 1].into_iter().enumerate() {
                    let mut mine = Vec::new();
                    for &(m, _) in &inner_desc {
                        let xid = link.crossings.len();
                        let (over, under) = if kappa == 1 { (lc, m) } else { (m, lc) };
                        link.crossings.push(LinkCrossing { over, under, sign });
                        let ev = Passage { crossing: xid, over: kappa == 1 };
                        mine.push(ev);
                        wraps[p].insert(m, ev);
                    }
                    for &(m, _) in inner_desc.iter().rev() {
                        let xid = link.crossings.len();
                        let (over, under) = if kappa == 1 { (m, lc) } else { (lc, m) };
                        link.crossings.push(LinkCrossing { over, under, sign });
                        let ev = Passage { crossing: xid, over: kappa != 1 };
                        mine.push(ev);
                        wraps[2 + p].insert(m, ev);
                    }
                    edge_events.entry((lc, first)).or_default().extend(mine);
                }
                // Order seen from a wrapped strand: in through L, in through
                // L', back through L', back through L.
                for &(m, _) in &inner {
                    let seen = [wraps[0][&m], wraps[1][&m], wraps[3][&m], wraps[2][&m]];
                    edge_events
                        .entry((m, first))
                        .or_default()
                        .extend(seen.iter().map(|ev| Passage { crossing: ev.crossing, over: !ev.over }));
                }
            }
        }
    }

    link.events = seqs
        .iter()
        .enumerate()
        .map(|(ci, items)| {
            let mut ev = Vec::new();
            for it in items {
                match *it {
                    Item::Edge(e) => {
                        if let Some(v) = edge_events.get(&(ci, e)) {
                            ev.extend(v.iter().copied());
                        }
                    }
                    Item::Pass(c, st) => {
                        if let Some(v) = passage_events.get(&(ci, c, st)) {
                            ev.extend(v.iter().map(|(_, p)| *p));
                        }
                    }
                }
            }
            ev
        })
        .collect();

    check_consistency(&link)?;
    if twist {
        for l in loops {
            for comp in [1 + 2 * l.index, 2 + 2 * l.index] {
                let lk = link.linking_with_knot(comp)?;
                if lk != 0 {
                    return Err(Error::Framing(format!(
                        "loop {} still links Û {lk} times after {} twists",
                        l.index + 1,
                        l.twists
                    )));
                }
            }
        }
    }
    Ok(link)
}

/// Every crossing must be visited exactly once from above and once from
/// below, by the components it names.
fn check_consistency(link: &AccessoryLink) -> Result<()> {
    let mut seen = vec![[0u8; 2]; link.crossings.len()];
    for (ci, ev) in link.events.iter().enumerate() {
        for p in ev {
            let x = link.crossings[p.crossing];
            let owner = if p.over { x.over } else { x.under };
            if owner != ci {
                return Err(Error::Pipeline(format!("crossing {} visited by the wrong component", p.crossing)));
            }
            seen[p.crossing][p.over as usize] += 1;
        }
    }
    if seen.iter().any(|s| *s != [1, 1]) {
        return Err(Error::Pipeline("link crossings are not visited exactly twice".into()));
    }
    Ok(())
}
