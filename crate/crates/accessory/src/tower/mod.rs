//! Accessory loops of a singular diagram and the hermitian matrix they
//! define.
//!
//! Changing the crossings in a [`MarkedSet`] turns the knot `K` into an
//! unknot `Û`. Each marked crossing becomes a double point of a homotopy,
//! and the loop through it, running along `K` from the outgoing under-strand
//! back to the incoming over-strand, is pushed off `Û` twice. The loops are
//! kinked around `Û` until they no longer link it ([`frame_loop`]); the
//! equivariant intersection numbers of the pushoffs then give the matrix Λ,
//! and `Ψ = diag(ε) + zΛ` presents the Blanchfield form of `K`, with
//! `z = (1 - t)(1 - t⁻¹)`.
//!
//! ```
//! use accessory::diagram::OrientedDiagram;
//! use accessory::tower::{self, SingularDiagram};
//! use accessory::unknotting::{descending_set, DEFAULT_R3_BUDGET};
//!
//! let d = OrientedDiagram::parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]").unwrap();
//! let marked = descending_set(&d, 1).unwrap();
//! let s = SingularDiagram::new(d, marked, DEFAULT_R3_BUDGET).unwrap();
//! let loops: Vec<_> = tower::build_loops(&s).unwrap().iter().map(tower::frame_loop).collect();
//! let catalog = tower::LoopCrossingCatalog::new(&s, &loops).unwrap();
//! let lambda = tower::lambda_matrix(&s, &loops, &catalog).unwrap();
//! let psi = tower::assemble_psi(&lambda, s.epsilon()).unwrap();
//! assert!(psi.matrix().is_hermitian());
//! ```

mod functional;
mod link;

use std::collections::HashMap;

use serde::Serialize;

use crate::blanchfield::PresentationMatrix;
use crate::diagram::{MarkedSet, OrientedDiagram};
use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::unknotting::verify_unknotted;

use functional::Functional;
pub use link::{LinkCrossing, Passage};

/// A knot diagram with a set of crossings whose change unknots it.
#[derive(Clone, Debug)]
pub struct SingularDiagram {
    base: OrientedDiagram,
    marked: MarkedSet,
    changed: OrientedDiagram,
    epsilon: Vec<i8>,
}

impl SingularDiagram {
    /// Fails with [`Error::Certification`] when the simplifier cannot show
    /// that the changed diagram is an unknot within `r3_budget` moves.
    pub fn new(base: OrientedDiagram, marked: MarkedSet, r3_budget: usize) -> Result<Self> {
        let changed = base.change_crossings(&marked)?;
        if !verify_unknotted(&changed, r3_budget) {
            return Err(Error::Certification(format!(
                "changing crossings {:?} was not certified to unknot the diagram",
                marked.ids()
            )));
        }
        let epsilon = marked
            .ids()
            .iter()
            .map(|&id| -base.crossings()[id - 1].sign)
            .collect();
        Ok(SingularDiagram { base, marked, changed, epsilon })
    }

    pub fn base(&self) -> &OrientedDiagram {
        &self.base
    }

    pub fn marked(&self) -> &MarkedSet {
        &self.marked
    }

    /// The diagram of Û.
    pub fn changed(&self) -> &OrientedDiagram {
        &self.changed
    }

    /// Sign of each marked crossing in Û, in marked order.
    pub fn epsilon(&self) -> &[i8] {
        &self.epsilon
    }

    fn marked_indices(&self) -> Vec<usize> {
        self.marked.ids().iter().map(|&id| id - 1).collect()
    }
}

/// Side of Û on which a loop runs, looking along the orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The loop at one double point, and how it is pushed off Û.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePointLoop {
    /// Position of the crossing in the marked set.
    pub index: usize,
    /// Crossing id (1-based) of the double point.
    pub crossing: usize,
    /// Arcs of the knot followed by the loop, in order.
    pub subarc: Vec<usize>,
    pub side: Side,
    /// Nesting depth; deeper loops run further from Û.
    pub depth: usize,
    /// Index into `subarc` where traversal of the loop begins (0 starts at
    /// the double point itself).
    pub rotation: usize,
    /// Linking number with Û before any twisting.
    pub initial_linking: i64,
    /// Meridional kinks added around Û; framed loops have
    /// `twists == -initial_linking`.
    pub twists: i64,
}

impl DoublePointLoop {
    pub fn is_framed(&self) -> bool {
        self.twists == -self.initial_linking
    }
}

/// Nesting depth of each marked loop, or a [`Error::Pipeline`] naming the
/// conflict when two loops would have to cross each other's pushoffs.
pub fn nesting_depths(s: &SingularDiagram) -> Result<Vec<usize>> {
    link::nesting_depths(&s.base, &s.marked_indices()).ok_or_else(|| {
        Error::Pipeline(format!("the loops at crossings {:?} cannot be nested", s.marked.ids()))
    })
}

/// Whether the loops of `marked` can be nested; used to filter candidate
/// sets in a minimal search.
pub fn is_nestable(d: &OrientedDiagram, marked: &MarkedSet) -> bool {
    let idx: Vec<usize> = marked.ids().iter().map(|&id| id - 1).collect();
    link::nesting_depths(d, &idx).is_some()
}

/// The untwisted loops, one per marked crossing, on the left of Û.
pub fn build_loops(s: &SingularDiagram) -> Result<Vec<DoublePointLoop>> {
    build_loops_rotated(s, &vec![0; s.marked.len()])
}

/// As [`build_loops`], starting the traversal of loop `i` at arc
/// `rotations[i]` of its subarc (taken modulo the subarc length).
pub fn build_loops_rotated(s: &SingularDiagram, rotations: &[usize]) -> Result<Vec<DoublePointLoop>> {
    if rotations.len() != s.marked.len() {
        return Err(Error::Shape(format!(
            "{} rotations for {} loops",
            rotations.len(),
            s.marked.len()
        )));
    }
    let depths = nesting_depths(s)?;
    let mut loops: Vec<DoublePointLoop> = s
        .marked_indices()
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let subarc = link::loop_arcs(&s.base, c);
            let rotation = rotations[i] % subarc.len();
            DoublePointLoop {
                index: i,
                crossing: c + 1,
                subarc,
                side: Side::Left,
                depth: depths[i],
                rotation,
                initial_linking: 0,
                twists: 0,
            }
        })
        .collect();
    let untwisted = link::build(&s.base, &s.marked_indices(), &loops, false)?;
    for l in &mut loops {
        let lk = untwisted.linking_with_knot(1 + 2 * l.index)?;
        let lk_partner = untwisted.linking_with_knot(2 + 2 * l.index)?;
        if lk != lk_partner {
            return Err(Error::Pipeline(format!(
                "the pushoffs of loop {} link Û differently ({lk} and {lk_partner})",
                l.index + 1
            )));
        }
        l.initial_linking = lk;
    }
    Ok(loops)
}

/// Adds the kinks that cancel the loop's linking with Û.
pub fn frame_loop(l: &DoublePointLoop) -> DoublePointLoop {
    DoublePointLoop { twists: -l.initial_linking, ..l.clone() }
}

/// Component of the accessory link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Component {
    Knot,
    Loop(usize),
    Pushoff(usize),
}

impl Component {
    fn from_index(i: usize) -> Self {
        match i {
            0 => Component::Knot,
            i if i % 2 == 1 => Component::Loop((i - 1) / 2),
            i => Component::Pushoff((i - 2) / 2),
        }
    }
}

/// A crossing of the accessory link, with its grading when both strands
/// belong to loops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub over: Component,
    pub under: Component,
    pub sign: i8,
    /// Exponent of `t` carried by the crossing in the intersection number of
    /// the under loop with the over loop.
    pub grading: Option<i64>,
}

/// Every crossing between Û and the framed loops and their pushoffs.
#[derive(Clone, Debug)]
pub struct LoopCrossingCatalog {
    link: link::AccessoryLink,
    entries: Vec<CatalogEntry>,
    functionals: HashMap<usize, Functional>,
}

impl LoopCrossingCatalog {
    /// Fails with [`Error::Framing`] unless every loop is framed, and with
    /// [`Error::Validation`] for loops on the right of Û.
    pub fn new(s: &SingularDiagram, loops: &[DoublePointLoop]) -> Result<Self> {
        if loops.len() != s.marked.len() {
            return Err(Error::Shape(format!("{} loops for {} marked crossings", loops.len(), s.marked.len())));
        }
        if let Some(l) = loops.iter().find(|l| !l.is_framed()) {
            return Err(Error::Framing(format!(
                "loop {} has {} twists but links Û {} times",
                l.index + 1,
                l.twists,
                l.initial_linking
            )));
        }
        if let Some(l) = loops.iter().find(|l| l.side == Side::Right) {
            return Err(Error::Validation(format!(
                "loop {} runs on the right of Û; the grid model only supports left pushoffs",
                l.index + 1
            )));
        }
        let link = link::build(&s.base, &s.marked_indices(), loops, true)?;
        let mut functionals = HashMap::new();
        for b in 1..link.component_count() {
            functionals.insert(b, Functional::solve(&link, b)?);
        }
        let mut entries: Vec<CatalogEntry> = link
            .crossings
            .iter()
            .map(|x| CatalogEntry {
                over: Component::from_index(x.over),
                under: Component::from_index(x.under),
                sign: x.sign,
                grading: None,
            })
            .collect();
        for a in 1..link.component_count() {
            let mut prefix = 0i64;
            for p in &link.events[a] {
                let x = link.crossings[p.crossing];
                if p.over {
                    continue;
                }
                if x.over == 0 {
                    if x.sign > 0 {
                        prefix += 1;
                    } else {
                        prefix -= 1;
                    }
                } else if let Some(w) = functionals[&x.over].b_exponent(p.crossing) {
                    entries[p.crossing].grading = Some(prefix + w);
                }
            }
        }
        Ok(LoopCrossingCatalog { link, entries, functionals })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Passages of a component in traversal order.
    pub fn passages(&self, c: Component) -> &[Passage] {
        let i = match c {
            Component::Knot => 0,
            Component::Loop(i) => 1 + 2 * i,
            Component::Pushoff(i) => 2 + 2 * i,
        };
        &self.link.events[i]
    }

    fn lambda(&self, a: usize, b: usize) -> Result<LaurentPoly> {
        self.functionals[&b].lambda(&self.link, a, b)
    }
}

/// Grading of catalog crossing `x`, which must join two loop components.
pub fn grade_crossing(catalog: &LoopCrossingCatalog, x: usize) -> Result<i64> {
    let entry = catalog
        .entries
        .get(x)
        .ok_or_else(|| Error::Validation(format!("the catalog has no crossing {x}")))?;
    entry
        .grading
        .ok_or_else(|| Error::Validation(format!("crossing {x} involves Û and carries no grading")))
}

/// The matrix Λ of equivariant intersection numbers between the framed
/// loops, with the framing correction on the diagonal.
pub fn lambda_matrix(
    s: &SingularDiagram,
    loops: &[DoublePointLoop],
    catalog: &LoopCrossingCatalog,
) -> Result<LaurentMatrix> {
    let d = loops.len();
    if d != s.marked.len() || catalog.link.component_count() != 1 + 2 * d {
        return Err(Error::Shape("loops, catalog and marked set disagree".into()));
    }
    if let Some(l) = loops.iter().find(|l| !l.is_framed()) {
        return Err(Error::Framing(format!("loop {} is not framed", l.index + 1)));
    }
    let mut m = LaurentMatrix::zeros(d, d);
    for (i, li) in loops.iter().enumerate() {
        for j in 0..d {
            let v = if i == j {
                let eps = s.epsilon[i] as i64;
                let correction = li.twists + (1 + eps) / 2;
                &catalog.lambda(1 + 2 * i, 2 + 2 * i)? + &LaurentPoly::constant(correction)
            } else {
                catalog.lambda(1 + 2 * i, 1 + 2 * j)?
            };
            m.set(i, j, -v);
        }
    }
    Ok(m)
}

/// `Ψ = diag(ε) + zΛ`.
pub fn assemble_psi(lambda: &LaurentMatrix, epsilon: &[i8]) -> Result<PresentationMatrix> {
    let d = epsilon.len();
    if lambda.rows() != d || lambda.cols() != d {
        return Err(Error::Shape(format!(
            "Λ is {}×{} but there are {d} signs",
            lambda.rows(),
            lambda.cols()
        )));
    }
    if epsilon.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::Validation("signs must be ±1".into()));
    }
    let diag: Vec<LaurentPoly> = epsilon.iter().map(|&e| LaurentPoly::constant(e as i64)).collect();
    PresentationMatrix::new(LaurentMatrix::diagonal(&diag).add(&lambda.scale(&LaurentPoly::z()))?)
}

#[cfg(test)]
mod tests;
