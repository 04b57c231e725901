//! Oriented knot diagrams from PD codes and signed Gauss codes.
//!
//! A PD code lists, for every crossing, the four arc labels met when going
//! counterclockwise around it, starting from the incoming under-strand. Arc
//! labels run `1..=2n` along the orientation of the knot, so the under-strand
//! of `[a, b, c, d]` goes `a → c` with `c = a + 1` (cyclically), and the
//! crossing is positive exactly when the over-strand goes `d → b`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which of the two strands through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Strand {
    Under,
    Over,
}

impl Strand {
    pub fn other(self) -> Strand {
        match self {
            Strand::Under => Strand::Over,
            Strand::Over => Strand::Under,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Crossing {
    /// 1-based position in the code.
    pub id: usize,
    pub slots: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.slots[0]
    }

    pub fn under_out(&self) -> usize {
        self.slots[2]
    }

    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.slots[3]
        } else {
            self.slots[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.slots[1]
        } else {
            self.slots[3]
        }
    }

    pub fn incoming(&self, strand: Strand) -> usize {
        match strand {
            Strand::Under => self.under_in(),
            Strand::Over => self.over_in(),
        }
    }

    pub fn outgoing(&self, strand: Strand) -> usize {
        match strand {
            Strand::Under => self.under_out(),
            Strand::Over => self.over_out(),
        }
    }
}

/// One entry of a signed Gauss code: a visit to `crossing` on the given strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussEntry {
    pub crossing: usize,
    pub strand: Strand,
    pub sign: i8,
}

/// A validated oriented knot diagram.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrientedDiagram {
    crossings: Vec<Crossing>,
    #[serde(skip)]
    heads: Vec<(usize, Strand)>,
}

/// An ordered set of crossing ids, numbered `i = 1..d` by position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MarkedSet {
    ids: Vec<usize>,
}

impl MarkedSet {
    /// Checks that every id names a crossing of `diagram` and that none repeats.
    pub fn new(ids: Vec<usize>, diagram: &OrientedDiagram) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &id in &ids {
            diagram.crossing(id)?;
            if !seen.insert(id) {
                return Err(Error::Validation(format!("crossing {id} is marked twice")));
            }
        }
        Ok(MarkedSet { ids })
    }

    pub fn empty() -> Self {
        MarkedSet::default()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.contains(&id)
    }
}

fn succ(e: usize, n2: usize) -> usize {
    e % n2 + 1
}

impl OrientedDiagram {
    /// The crossingless diagram of the unknot.
    pub fn unknot() -> Self {
        OrientedDiagram { crossings: Vec::new(), heads: Vec::new() }
    }

    /// Parses text such as `[[1,4,2,5],[3,6,4,1],[5,2,6,3]]`. A leading `PD`
    /// and `X` markers in front of each tuple, as in `PD[X[1,4,2,5], ...]`,
    /// are accepted too.
    ///
    /// ```
    /// use accessory::diagram::OrientedDiagram;
    /// let d = OrientedDiagram::parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
    /// assert_eq!(d.crossing_count(), 3);
    /// assert_eq!(d.writhe(), -3);
    /// ```
    pub fn parse_pd(text: &str) -> Result<Self> {
        let cleaned: String = text
            .trim()
            .trim_start_matches("PD")
            .chars()
            .filter(|&ch| ch != 'X')
            .collect();
        let tuples: Vec<Vec<i64>> = serde_json::from_str(cleaned.trim())
            .map_err(|e| Error::Parse(format!("PD code is not a list of 4-tuples: {e}")))?;
        let mut pd = Vec::with_capacity(tuples.len());
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != 4 {
                return Err(Error::Parse(format!("PD tuple {} has {} entries, expected 4", i + 1, t.len())));
            }
            let mut slots = [0usize; 4];
            for (s, &v) in slots.iter_mut().zip(t) {
                if v < 1 {
                    return Err(Error::Validation(format!("arc label {v} is not positive")));
                }
                *s = v as usize;
            }
            pd.push(slots);
        }
        Self::from_pd(&pd)
    }

    /// Validates raw PD tuples.
    pub fn from_pd(pd: &[[usize; 4]]) -> Result<Self> {
        let n = pd.len();
        let n2 = 2 * n;
        let mut count = BTreeMap::new();
        for slots in pd {
            for &l in slots {
                *count.entry(l).or_insert(0usize) += 1;
            }
        }
        for (&l, &k) in &count {
            if l == 0 || l > n2 {
                return Err(Error::Validation(format!(
                    "arc label {l} is outside 1..={n2} for a {n}-crossing code"
                )));
            }
            if k != 2 {
                return Err(Error::Validation(format!("arc label {l} appears {k} times, expected 2")));
            }
        }
        if count.len() != n2 {
            let missing: Vec<usize> = (1..=n2).filter(|l| !count.contains_key(l)).collect();
            return Err(Error::Validation(format!("arc labels {missing:?} never appear")));
        }
        let mut crossings = Vec::with_capacity(n);
        for (i, &[a, b, c, d]) in pd.iter().enumerate() {
            let id = i + 1;
            if c != succ(a, n2) {
                return Err(Error::Validation(format!(
                    "crossing {id}: under-strand {a} → {c} does not follow the arc numbering \
                     (the code has several components or wraps inconsistently)"
                )));
            }
            let sign = match (b == succ(d, n2), d == succ(b, n2)) {
                (true, false) => 1,
                (false, true) => -1,
                // Only possible with two arcs, where both readings are
                // consecutive; the over-strand enters on the label that is
                // not the under-strand's incoming arc.
                (true, true) => {
                    if b != a {
                        -1
                    } else {
                        1
                    }
                }
                (false, false) => {
                    return Err(Error::Validation(format!(
                        "crossing {id}: over-strand labels {b} and {d} are not consecutive"
                    )))
                }
            };
            crossings.push(Crossing { id, slots: [a, b, c, d], sign });
        }
        let diagram = Self::with_heads(crossings)?;
        if n > 0 && diagram.face_count() != n + 2 {
            return Err(Error::Validation(format!(
                "code is not planar: {} faces, expected {}",
                diagram.face_count(),
                n + 2
            )));
        }
        Ok(diagram)
    }

    fn with_heads(crossings: Vec<Crossing>) -> Result<Self> {
        let n2 = 2 * crossings.len();
        let mut heads: Vec<Option<(usize, Strand)>> = vec![None; n2 + 1];
        for (idx, x) in crossings.iter().enumerate() {
            for strand in [Strand::Under, Strand::Over] {
                let e = x.incoming(strand);
                if heads[e].is_some() {
                    return Err(Error::Validation(format!(
                        "arc {e} enters two strands; orientation is inconsistent"
                    )));
                }
                heads[e] = Some((idx, strand));
            }
        }
        let heads = heads.into_iter().skip(1).map(|h| h.expect("every arc has a head")).collect();
        Ok(OrientedDiagram { crossings, heads })
    }

    /// Parses a signed Gauss code such as `O1+ U2+ O3+ U1+ O2+ U3+`.
    ///
    /// Crossing labels may be any positive integers; they are renumbered
    /// `1..=n` in increasing order. Tokens may be separated by whitespace or
    /// commas, and `−` is accepted for `-`.
    pub fn parse_gauss(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let token = token.replace('−', "-");
            let mut chars = token.chars();
            let strand = match chars.next() {
                Some('O') | Some('o') => Strand::Over,
                Some('U') | Some('u') => Strand::Under,
                _ => return Err(Error::Parse(format!("Gauss token {token:?} must start with O or U"))),
            };
            let rest: String = chars.collect();
            let (label, sign) = match rest.strip_suffix('+') {
                Some(l) => (l, 1),
                None => match rest.strip_suffix('-') {
                    Some(l) => (l, -1),
                    None => return Err(Error::Parse(format!("Gauss token {token:?} lacks a sign"))),
                },
            };
            let crossing: usize = label
                .parse()
                .map_err(|_| Error::Parse(format!("Gauss token {token:?} has a bad crossing label")))?;
            entries.push(GaussEntry { crossing, strand, sign });
        }
        Self::from_gauss(&entries)
    }

    /// Builds a diagram from a signed Gauss sequence. The arc arriving at
    /// entry `p` gets label `p` (entry 0 receives the last label).
    pub fn from_gauss(entries: &[GaussEntry]) -> Result<Self> {
        let mut visits: BTreeMap<usize, Vec<(usize, GaussEntry)>> = BTreeMap::new();
        for (pos, e) in entries.iter().enumerate() {
            visits.entry(e.crossing).or_default().push((pos, *e));
        }
        let len = entries.len();
        let mut pd = Vec::with_capacity(visits.len());
        for (label, v) in &visits {
            let (under, over) = match v.as_slice() {
                [(p, x), (q, y)] if x.strand != y.strand => {
                    if x.strand == Strand::Under {
                        (*p, *q)
                    } else {
                        (*q, *p)
                    }
                }
                [_, _] => {
                    return Err(Error::Validation(format!(
                        "crossing {label} is visited twice on the same strand"
                    )))
                }
                _ => {
                    return Err(Error::Validation(format!(
                        "crossing {label} is visited {} times, expected 2",
                        v.len()
                    )))
                }
            };
            if v[0].1.sign != v[1].1.sign {
                return Err(Error::Validation(format!("crossing {label} has conflicting signs")));
            }
            let arriving = |p: usize| if p == 0 { len } else { p };
            let (a, c) = (arriving(under), under + 1);
            let (fi, fo) = (arriving(over), over + 1);
            pd.push(if v[0].1.sign > 0 { [a, fo, c, fi] } else { [a, fi, c, fo] });
        }
        Self::from_pd(&pd)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of arcs (edges between consecutive crossing visits), `2n`.
    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: usize) -> Result<&Crossing> {
        id.checked_sub(1)
            .and_then(|i| self.crossings.get(i))
            .ok_or(Error::UnknownCrossing(id))
    }

    pub fn crossing_sign(&self, id: usize) -> Result<i8> {
        Ok(self.crossing(id)?.sign)
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    /// The crossing index (0-based) and strand that arc `e` runs into.
    pub fn head(&self, e: usize) -> (usize, Strand) {
        self.heads[e - 1]
    }

    /// The arc following `e` along the orientation.
    pub fn next_arc(&self, e: usize) -> usize {
        succ(e, self.arc_count())
    }

    /// Swaps over and under at every crossing of `set`.
    pub fn change_crossings(&self, set: &MarkedSet) -> Result<Self> {
        for &id in set.ids() {
            self.crossing(id)?;
        }
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                if !set.contains(x.id) {
                    return x.clone();
                }
                let [a, b, c, d] = x.slots;
                // Rotate so that the old incoming over-strand becomes the
                // incoming under-strand; the orientation of both strands is
                // kept, which flips the sign.
                let slots = if x.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
                Crossing { id: x.id, slots, sign: -x.sign }
            })
            .collect();
        Self::with_heads(crossings)
    }

    /// The mirror image: every crossing changed.
    pub fn mirror(&self) -> Self {
        let all = MarkedSet { ids: (1..=self.crossing_count()).collect() };
        self.change_crossings(&all).expect("every crossing exists")
    }

    pub fn pd(&self) -> Vec<[usize; 4]> {
        self.crossings.iter().map(|x| x.slots).collect()
    }

    /// PD text in the accepted input format.
    pub fn emit_pd(&self) -> String {
        let parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("[{},{},{},{}]", x.slots[0], x.slots[1], x.slots[2], x.slots[3]))
            .collect();
        format!("[{}]", parts.join(","))
    }

    /// The signed Gauss sequence, starting with the visit that arc `2n` runs
    /// into. Feeding it to [`OrientedDiagram::from_gauss`] reproduces the
    /// diagram exactly.
    pub fn gauss_sequence(&self) -> Vec<GaussEntry> {
        let n2 = self.arc_count();
        (0..n2)
            .map(|p| {
                let e = if p == 0 { n2 } else { p };
                let (idx, strand) = self.head(e);
                GaussEntry { crossing: idx + 1, strand, sign: self.crossings[idx].sign }
            })
            .collect()
    }

    pub fn emit_gauss(&self) -> String {
        let tokens: Vec<String> = self
            .gauss_sequence()
            .iter()
            .map(|g| {
                let s = if g.strand == Strand::Over { 'O' } else { 'U' };
                let sign = if g.sign > 0 { '+' } else { '-' };
                format!("{s}{}{sign}", g.crossing)
            })
            .collect();
        tokens.join(" ")
    }

    /// Faces of the diagram as cyclic lists of darts `(crossing index, slot)`.
    ///
    /// Walking a face leaves a crossing along the arc at `slot`, arrives at
    /// the arc's other end and turns to the next slot counterclockwise.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            for (p, &l) in x.slots.iter().enumerate() {
                ends.entry(l).or_default().push((ci, p));
            }
        }
        let alpha = |d: (usize, usize)| {
            let v = &ends[&self.crossings[d.0].slots[d.1]];
            if v[0] == d {
                v[1]
            } else {
                v[0]
            }
        };
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for ci in 0..self.crossings.len() {
            for p in 0..4 {
                let mut d = (ci, p);
                if seen.contains(&d) {
                    continue;
                }
                let mut face = Vec::new();
                while seen.insert(d) {
                    face.push(d);
                    let a = alpha(d);
                    d = (a.0, (a.1 + 1) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }
}

impl fmt::Debug for OrientedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrientedDiagram({})", self.emit_pd())
    }
}
