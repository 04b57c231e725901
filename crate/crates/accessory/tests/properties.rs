use accessory::diagram::{MarkedSet, OrientedDiagram};
use accessory::oracle::alexander_poly_oracle;
use accessory::pipeline::{run, PipelineOptions};
use accessory::unknotting::{descending_set, verify_unknotted, DEFAULT_R3_BUDGET};
use proptest::prelude::*;

const CODES: [&str; 5] = [
    include_str!("../corpus/rolfsen/3_1.pd"),
    include_str!("../corpus/rolfsen/4_1.pd"),
    include_str!("../corpus/rolfsen/5_1.pd"),
    include_str!("../corpus/rolfsen/5_2.pd"),
    include_str!("../corpus/rolfsen/6_1.pd"),
];

fn diagram(i: usize) -> OrientedDiagram {
    OrientedDiagram::parse_pd(CODES[i]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_seed_gives_the_alexander_polynomial(k in 0usize..CODES.len(), seed in any::<u64>()) {
        let d = match diagram(k) { d if seed % 2 == 0 => d, d => d.mirror() };
        let r = run(&d, &PipelineOptions { seed: Some(seed), ..Default::default() }).unwrap();
        prop_assert!(r.delta.equal_up_to_unit(&alexander_poly_oracle(&d).unwrap()));
        prop_assert!(r.verdicts.all_pass());
        prop_assert_eq!(r.seed, Some(seed));
        prop_assert!(r.basepoint >= 1 && r.basepoint <= d.arc_count());
    }

    #[test]
    fn descending_sets_always_unknot(k in 0usize..CODES.len(), b in 1usize..=12) {
        let d = diagram(k);
        let b = 1 + (b - 1) % d.arc_count();
        let set = descending_set(&d, b).unwrap();
        prop_assert!(verify_unknotted(&d.change_crossings(&set).unwrap(), DEFAULT_R3_BUDGET));
    }

    #[test]
    fn changing_every_crossing_mirrors(k in 0usize..CODES.len()) {
        let d = diagram(k);
        let all = MarkedSet::new((1..=d.crossing_count()).collect(), &d).unwrap();
        let changed = d.change_crossings(&all).unwrap();
        prop_assert_eq!(changed.writhe(), -d.writhe());
        prop_assert_eq!(alexander_poly_oracle(&changed).unwrap(), alexander_poly_oracle(&d).unwrap());
    }
}
