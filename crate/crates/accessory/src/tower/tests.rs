use super::*;
use crate::oracle::alexander_poly_oracle;
use crate::unknotting::{descending_set, DEFAULT_R3_BUDGET};

const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";
const FIGURE_EIGHT: &str = "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]";

fn singular(code: &str, basepoint: usize) -> SingularDiagram {
    let d = OrientedDiagram::parse_pd(code).unwrap();
    let marked = descending_set(&d, basepoint).unwrap();
    SingularDiagram::new(d, marked, DEFAULT_R3_BUDGET).unwrap()
}

fn psi(s: &SingularDiagram) -> LaurentMatrix {
    let loops: Vec<_> = build_loops(s).unwrap().iter().map(frame_loop).collect();
    let catalog = LoopCrossingCatalog::new(s, &loops).unwrap();
    assemble_psi(&lambda_matrix(s, &loops, &catalog).unwrap(), s.epsilon()).unwrap().into_matrix()
}

#[test]
fn determinant_matches_fox_at_every_basepoint() {
    for code in [TREFOIL, FIGURE_EIGHT] {
        let d = OrientedDiagram::parse_pd(code).unwrap();
        let delta = alexander_poly_oracle(&d).unwrap();
        for b in 1..=d.arc_count() {
            let m = psi(&singular(code, b));
            assert!(m.is_hermitian());
            assert!(m.det().unwrap().equal_up_to_unit(&delta), "{code} from arc {b}");
        }
    }
}

#[test]
fn psi_at_one_is_the_sign_matrix() {
    let s = singular(FIGURE_EIGHT, 3);
    let at_one = psi(&s).eval_int(1).unwrap();
    for (i, row) in at_one.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { s.epsilon()[i] as i64 } else { 0 };
            assert_eq!(*v, want.into());
        }
    }
}

#[test]
fn unframed_loops_are_rejected() {
    let s = singular(TREFOIL, 1);
    let loops = build_loops(&s).unwrap();
    if loops.iter().all(|l| l.is_framed()) {
        return;
    }
    assert!(matches!(LoopCrossingCatalog::new(&s, &loops), Err(Error::Framing(_))));
    let mut bad = frame_loop(&loops[0]);
    bad.twists += 1;
    assert!(!bad.is_framed());
}

#[test]
fn graded_crossings_between_loops() {
    let s = singular(FIGURE_EIGHT, 1);
    let loops: Vec<_> = build_loops(&s).unwrap().iter().map(frame_loop).collect();
    let catalog = LoopCrossingCatalog::new(&s, &loops).unwrap();
    for (x, e) in catalog.entries().iter().enumerate() {
        let between_loops = e.over != Component::Knot && e.under != Component::Knot;
        assert_eq!(grade_crossing(&catalog, x).is_ok(), between_loops);
    }
    assert!(grade_crossing(&catalog, catalog.len()).is_err());
    for c in [Component::Knot, Component::Loop(0), Component::Pushoff(0)] {
        let visits = catalog.passages(c).len();
        assert!(visits > 0);
    }
}

#[test]
fn shapes_are_checked() {
    let lambda = LaurentMatrix::zeros(2, 2);
    assert!(matches!(assemble_psi(&lambda, &[1]), Err(Error::Shape(_))));
    assert!(matches!(assemble_psi(&lambda, &[1, 0]), Err(Error::Validation(_))));
    let s = singular(TREFOIL, 1);
    assert!(matches!(build_loops_rotated(&s, &[]), Err(Error::Shape(_))));
}

#[test]
fn uncertified_sets_are_rejected() {
    let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
    let r = SingularDiagram::new(d, MarkedSet::empty(), DEFAULT_R3_BUDGET);
    assert!(matches!(r, Err(Error::Certification(_))));
}

#[test]
fn unknot_has_an_empty_tower() {
    let s = SingularDiagram::new(OrientedDiagram::unknot(), MarkedSet::empty(), 0).unwrap();
    let m = psi(&s);
    assert_eq!(m.rows(), 0);
    assert!(m.det().unwrap().is_one());
}

#[test]
fn rotated_loops_give_the_same_determinant() {
    let d = OrientedDiagram::parse_pd(FIGURE_EIGHT).unwrap();
    let delta = alexander_poly_oracle(&d).unwrap();
    let s = singular(FIGURE_EIGHT, 2);
    for r in 0..4 {
        let loops: Vec<_> =
            build_loops_rotated(&s, &vec![r; s.marked().len()]).unwrap().iter().map(frame_loop).collect();
        let catalog = LoopCrossingCatalog::new(&s, &loops).unwrap();
        let m = assemble_psi(&lambda_matrix(&s, &loops, &catalog).unwrap(), s.epsilon()).unwrap();
        assert!(m.det().equal_up_to_unit(&delta));
    }
}

#[test]
fn right_pushoffs_are_refused() {
    let s = singular(TREFOIL, 1);
    let mut loops: Vec<_> = build_loops(&s).unwrap().iter().map(frame_loop).collect();
    loops[0].side = Side::Right;
    assert!(matches!(LoopCrossingCatalog::new(&s, &loops), Err(Error::Validation(_))));
}

#[test]
fn assembling_psi_from_small_lambdas() {
    let z = LaurentPoly::z();
    for n in [-2i64, 1, 3] {
        let psi = assemble_psi(&LaurentMatrix::diagonal(&[LaurentPoly::constant(-n)]), &[1]).unwrap();
        assert_eq!(psi.matrix().get(0, 0), &(&LaurentPoly::one() - &z.scale(&n.into())));
    }
    let trivial = assemble_psi(&LaurentMatrix::zeros(1, 1), &[1]).unwrap();
    assert!(trivial.det().is_one());
    let p = LaurentPoly::from_dense(0, &[1, 2]);
    let lambda = LaurentMatrix::from_rows(vec![
        vec![LaurentPoly::zero(), p.clone()],
        vec![p.involute(), LaurentPoly::zero()],
    ])
    .unwrap();
    let psi = assemble_psi(&lambda, &[1, -1]).unwrap();
    assert_eq!(psi.matrix().get(0, 1), &(&z * &p));
    assert_eq!(psi.matrix().get(1, 1), &LaurentPoly::constant(-1));
    assert!(psi.matrix().is_hermitian());
}
