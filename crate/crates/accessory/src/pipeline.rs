//! End-to-end computation from a knot diagram: choose crossings to change,
//! build and frame the loops, assemble Ψ, and compare against the Fox
//! calculus oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blanchfield::{check_linking_form, LinkingFormReport};
use crate::diagram::{MarkedSet, OrientedDiagram};
use crate::error::Result;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::oracle::{alexander_poly_oracle, arf_levine};
use crate::tower::{self, SingularDiagram};
use crate::unknotting::{descending_set, minimal_search_filtered, DEFAULT_R3_BUDGET};

/// How the crossings to change are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkedChoice {
    /// Exactly these crossing ids, in this order.
    Explicit(Vec<usize>),
    /// The descending set from the (possibly seeded) basepoint.
    Descending,
    /// A smallest certified set whose loops nest.
    Minimal,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub marked: MarkedChoice,
    pub r3_budget: usize,
    /// Without a seed the basepoint is arc 1 and loops start at their double
    /// points; with one, both are drawn from a ChaCha8 stream.
    pub seed: Option<u64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { marked: MarkedChoice::Descending, r3_budget: DEFAULT_R3_BUDGET, seed: None }
    }
}

/// Pass/fail checks recorded for a run.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Verdicts {
    pub determinant_matches_oracle: bool,
    pub arf_matches_oracle: bool,
    pub hermitian: bool,
    pub unimodular_at_one: bool,
    pub symmetric_determinant: bool,
    pub blanchfield_axioms: bool,
    pub order_matches_oracle: bool,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.determinant_matches_oracle
            && self.arf_matches_oracle
            && self.hermitian
            && self.unimodular_at_one
            && self.symmetric_determinant
            && self.blanchfield_axioms
            && self.order_matches_oracle
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// `det Ψ` in unit normal form.
    pub delta: LaurentPoly,
    pub arf: u8,
    pub psi: LaurentMatrix,
    pub lambda: LaurentMatrix,
    pub epsilon: Vec<i8>,
    pub tau: Vec<i64>,
    pub seed: Option<u64>,
    pub marked: Vec<usize>,
    pub basepoint: usize,
    pub rotations: Vec<usize>,
    pub oracle_delta: LaurentPoly,
    pub oracle_arf: u8,
    pub blanchfield: LinkingFormReport,
    pub verdicts: Verdicts,
}

/// Runs the accessory-loop construction on `d`.
///
/// ```
/// use accessory::diagram::OrientedDiagram;
/// use accessory::pipeline::{run, PipelineOptions};
///
/// let d = OrientedDiagram::parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
/// let report = run(&d, &PipelineOptions::default()).unwrap();
/// assert_eq!(report.arf, 1);
/// assert!(report.verdicts.all_pass());
/// ```
pub fn run(d: &OrientedDiagram, opts: &PipelineOptions) -> Result<PipelineReport> {
    let mut rng = opts.seed.map(ChaCha8Rng::seed_from_u64);
    let basepoint = match (&mut rng, d.arc_count()) {
        (Some(r), n2) if n2 > 0 => r.gen_range(1..=n2),
        _ => 1,
    };
    let marked = match &opts.marked {
        MarkedChoice::Explicit(ids) => MarkedSet::new(ids.clone(), d)?,
        MarkedChoice::Descending => descending_set(d, basepoint)?,
        MarkedChoice::Minimal => {
            minimal_search_filtered(d, d.crossing_count(), opts.r3_budget, |m| tower::is_nestable(d, m))
        }
    };
    let s = SingularDiagram::new(d.clone(), marked, opts.r3_budget)?;
    let subarc_lengths: Vec<usize> = tower::build_loops(&s)?.iter().map(|l| l.subarc.len()).collect();
    let rotations: Vec<usize> = match &mut rng {
        Some(r) => subarc_lengths.iter().map(|&n| r.gen_range(0..n)).collect(),
        None => vec![0; subarc_lengths.len()],
    };
    let loops: Vec<_> = tower::build_loops_rotated(&s, &rotations)?.iter().map(tower::frame_loop).collect();
    let catalog = tower::LoopCrossingCatalog::new(&s, &loops)?;
    let lambda = tower::lambda_matrix(&s, &loops, &catalog)?;
    let psi = tower::assemble_psi(&lambda, s.epsilon())?;

    let delta = psi.order();
    let arf = arf_levine(&delta)?;
    let oracle_delta = alexander_poly_oracle(d)?;
    let oracle_arf = arf_levine(&oracle_delta)?;
    let blanchfield = check_linking_form(&psi);
    let at_one = psi.matrix().eval_int(1)?;
    let unimodular_at_one = at_one.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| *v == if i == j { (s.epsilon()[i] as i64).into() } else { 0.into() })
    });
    let verdicts = Verdicts {
        determinant_matches_oracle: delta.equal_up_to_unit(&oracle_delta),
        arf_matches_oracle: arf == oracle_arf,
        hermitian: psi.matrix().is_hermitian(),
        unimodular_at_one,
        symmetric_determinant: delta.involute().equal_up_to_unit(&delta),
        blanchfield_axioms: blanchfield.passed(),
        order_matches_oracle: blanchfield.order.equal_up_to_unit(&oracle_delta),
    };
    Ok(PipelineReport {
        delta,
        arf,
        psi: psi.into_matrix(),
        lambda,
        epsilon: s.epsilon().to_vec(),
        tau: loops.iter().map(|l| l.twists).collect(),
        seed: opts.seed,
        marked: s.marked().ids().to_vec(),
        basepoint,
        rotations,
        oracle_delta,
        oracle_arf,
        blanchfield,
        verdicts,
    })
}

/// Whether `b = U a Ū` for a diagonal matrix `U` of units `±t^k`.
pub fn unit_congruent(a: &LaurentMatrix, b: &LaurentMatrix) -> bool {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || b.cols() != n {
        return false;
    }
    let mut unit: Vec<Option<LaurentPoly>> = vec![None; n];
    for root in 0..n {
        if unit[root].is_some() {
            continue;
        }
        unit[root] = Some(LaurentPoly::one());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let ui = unit[i].clone().expect("assigned before pushing");
            for (j, slot) in unit.iter_mut().enumerate() {
                if slot.is_some() || a.get(i, j).is_zero() {
                    continue;
                }
                // b_ij = u_i ū_j a_ij, so ū_j = b_ij / (u_i a_ij).
                let Some(uj_bar) = b.get(i, j).div_exact(&(&ui * a.get(i, j))) else {
                    return false;
                };
                if !uj_bar.is_unit() {
                    return false;
                }
                *slot = Some(uj_bar.involute());
                stack.push(j);
            }
        }
    }
    let unit: Vec<LaurentPoly> = unit.into_iter().map(|u| u.expect("every index visited")).collect();
    (0..n).all(|i| (0..n).all(|j| &(&(&unit[i] * a.get(i, j)) * &unit[j].involute()) == b.get(i, j)))
}
