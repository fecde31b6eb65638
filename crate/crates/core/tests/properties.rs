use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use frontkit::classify::{massey_set, rationally_convex_set, stein_set, umbrella_set, EXCLUDED};
use frontkit::cobordism::{
    euler_number, genus_chain, glue_mobius_three_umbrellas, glue_piece, klein_base, mobius_smoothing,
    relabel_umbrella, remove_disk, smooth_disk_cap, torus, CobordismError, PieceName, SurfaceComplex,
};
use frontkit::front::{front_connected_sum, FrontDiagram};
use frontkit::planner::{derive_table, replay, verify_closure, Rule};
use frontkit::random::{random_front, random_knot, random_move, seeded};
use frontkit::rewrite::{apply_move, equivalent_within, inverse_move, invariant_signature, Equivalence};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

/// tb straight from the definition: signed self-crossings minus half the cusps.
fn tb_by_hand(f: &FrontDiagram) -> i64 {
    let mut writhe = 0;
    let mut cusps = 0;
    for k in 0..f.events().len() {
        match f.crossing_sign(k) {
            Some(s) => writhe += s,
            None => cusps += 1,
        }
    }
    writhe - cusps / 2
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn moves_preserve_invariants(seed in any::<u64>(), steps in 2usize..14) {
        let mut rng = seeded(seed);
        let f = random_front(&mut rng, steps, 6);
        let m = random_move(&mut rng, &f).expect("kink insertion is always available");
        let g = apply_move(&f, &m).unwrap();
        prop_assert_eq!(invariant_signature(&f), invariant_signature(&g), "{} via {}", f.word_string(), m);
    }

    #[test]
    fn moves_are_reversible(seed in any::<u64>(), steps in 2usize..14) {
        let mut rng = seeded(seed);
        let f = random_front(&mut rng, steps, 6);
        let m = random_move(&mut rng, &f).unwrap();
        let g = apply_move(&f, &m).unwrap();
        let back = apply_move(&g, &inverse_move(&f, &m).unwrap()).unwrap();
        prop_assert_eq!(back.events(), f.events());
    }

    #[test]
    fn connected_sum_adds_tb(seed in any::<u64>(), a in 2usize..10, b in 2usize..10) {
        let mut rng = seeded(seed);
        let f = random_knot(&mut rng, a, 6);
        let g = random_knot(&mut rng, b, 6);
        let h = front_connected_sum(&f, &g).unwrap();
        prop_assert_eq!(h.component_count(), 1);
        prop_assert_eq!(tb_by_hand(&h), tb_by_hand(&f) + tb_by_hand(&g) + 1);
        prop_assert_eq!(h.invariants().tb, h.invariants().writhe - h.invariants().cusp_count / 2);
        prop_assert_eq!(h.invariants().rot[0], f.invariants().rot[0] + g.invariants().rot[0]);
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn tb_formula_and_orientation(seed in any::<u64>(), steps in 1usize..16) {
        let f = random_front(&mut seeded(seed), steps, 8);
        let inv = f.invariants();
        prop_assert_eq!(inv.cusp_count % 2, 0);
        for c in &inv.components {
            prop_assert_eq!(c.cusp_count % 2, 0);
            prop_assert_eq!(c.tb, c.writhe - c.cusp_count / 2);
        }
        let r = f.reversed().invariants();
        prop_assert_eq!(r.rot.iter().map(|x| -x).collect::<Vec<_>>(), inv.rot);
        prop_assert_eq!(r.components.iter().map(|c| c.tb).collect::<Vec<_>>(),
                        inv.components.iter().map(|c| c.tb).collect::<Vec<_>>());
    }

    #[test]
    fn no_equivalence_across_invariants(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_knot(&mut rng, 6, 4);
        let g = random_knot(&mut rng, 6, 4);
        if invariant_signature(&f) != invariant_signature(&g) {
            prop_assert_eq!(equivalent_within(&f, &g, 3), Equivalence::NoWitnessFound);
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Mobius,
    Smooth,
    Relabel,
    DiskSwap,
    PieceA,
    PieceC,
}

/// Applies one step and returns its stated change in `(χ, e)`.
fn step(s: &SurfaceComplex, op: Step) -> Result<(SurfaceComplex, (i64, i64)), CobordismError> {
    Ok(match op {
        Step::Mobius => (glue_mobius_three_umbrellas(s)?, (-1, -2)),
        Step::Smooth => {
            let i = s.singularities.iter().position(|x| x.is_basic()).ok_or(CobordismError::NotBasicSingularity)?;
            (mobius_smoothing(s, i)?, (-1, 2))
        }
        Step::Relabel => {
            let i = s.singularities.iter().position(|x| x.is_basic()).ok_or(CobordismError::NotBasicSingularity)?;
            (relabel_umbrella(s, i)?, (0, 0))
        }
        Step::DiskSwap => (smooth_disk_cap(&remove_disk(s), 0)?, (0, 0)),
        Step::PieceA => (smooth_disk_cap(&glue_piece(&remove_disk(s), 0, PieceName::A, 0)?, 0)?, (0, -2)),
        Step::PieceC => (smooth_disk_cap(&glue_piece(&remove_disk(s), 0, PieceName::C, 0)?, 0)?, (0, -4)),
    })
}

fn surface_exists(s: &SurfaceComplex) -> bool {
    if s.orientable {
        s.chi <= 2 && s.chi % 2 == 0
    } else {
        s.chi <= 1
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn random_assemblies_track_euler_number(
        base in 0usize..4,
        ops in prop::collection::vec(0usize..6, 1..8),
    ) {
        let mut s = match base {
            0 => klein_base(),
            1 => torus(),
            2 => genus_chain(2).unwrap(),
            _ => genus_chain(3).unwrap(),
        };
        let mut e = euler_number(&s).unwrap();
        for o in ops {
            let op = [Step::Mobius, Step::Smooth, Step::Relabel, Step::DiskSwap, Step::PieceA, Step::PieceC][o];
            match step(&s, op) {
                Ok((next, (dchi, de))) => {
                    prop_assert_eq!(next.chi, s.chi + dchi);
                    e += de;
                    prop_assert_eq!(euler_number(&next).unwrap(), e, "{:?}", op);
                    s = next;
                }
                Err(CobordismError::OrientableSurface) => prop_assert!(s.orientable),
                Err(CobordismError::NotBasicSingularity) => prop_assert_eq!(s.basic_singularity_count(), 0),
                Err(other) => prop_assert!(false, "unexpected {:?}", other),
            }
            prop_assert!(surface_exists(&s));
            prop_assert!(s.singularities.iter().all(|x| x.is_basic()));
            prop_assert_eq!(s.singularities.len() as i64, -e - s.chi);
        }
    }
}

/// Umbrella counts exactly as the literal set expression: orientable `k = -χ` for `χ ≠ 2`;
/// non-orientable `{4 - 3χ, -3χ, …, χ + 4 - 4⌊χ/4 + 1⌋}` without `(1, 1)` and `(0, 0)`.
fn literal_umbrellas(chi: i64, orientable: bool) -> BTreeSet<i64> {
    if orientable {
        return if chi != 2 { BTreeSet::from([-chi]) } else { BTreeSet::new() };
    }
    let floor = ((chi as f64) / 4.0 + 1.0).floor() as i64;
    let low = chi + 4 - 4 * floor;
    let mut out = BTreeSet::new();
    let mut k = 4 - 3 * chi;
    while k >= low {
        if (chi, k) != (1, 1) && (chi, k) != (0, 0) {
            out.insert(k);
        }
        k -= 4;
    }
    out
}

#[test]
fn classifier_sets_nest_and_translate() {
    for chi in -40..=2 {
        for orientable in [true, false] {
            let Ok(m) = massey_set(chi, orientable) else {
                assert!(orientable && chi % 2 != 0 || !orientable && chi > 1);
                continue;
            };
            let s = stein_set(chi, orientable).unwrap();
            let r = rationally_convex_set(chi, orientable).unwrap();
            assert!(r.is_subset(&s) && s.is_subset(&m), "chi {chi}");
            for set in [&m, &s] {
                let v: Vec<i64> = set.iter().copied().collect();
                assert!(v.windows(2).all(|w| w[1] - w[0] == 4));
            }
            let u = umbrella_set(chi, orientable).unwrap();
            assert_eq!(u, r.iter().map(|e| -chi - e).collect::<BTreeSet<_>>());
            assert_eq!(u, literal_umbrellas(chi, orientable), "chi {chi} orientable {orientable}");
        }
    }
    for (chi, e) in EXCLUDED {
        assert!(stein_set(chi, false).unwrap().contains(&e));
        assert!(!rationally_convex_set(chi, false).unwrap().contains(&e));
    }
}

#[test]
fn closure_matches_classifier_down_to_minus_twelve() {
    for min_chi in -12..=0 {
        let report = verify_closure(min_chi).unwrap();
        assert_eq!(report.nodes, report.replayed);
    }
}

#[test]
fn every_edge_replays_with_its_rule_delta() {
    let g = derive_table(-6);
    for edge in &g.edges {
        let path = &g.witnesses[&edge.from];
        let before = replay(path).unwrap();
        let mut longer = path.clone();
        longer.push(edge.rule);
        let after = replay(&longer).unwrap();
        let dk = after.singularities.len() as i64 - before.singularities.len() as i64;
        let de = euler_number(&after).unwrap() - euler_number(&before).unwrap();
        let expected = match edge.rule {
            Rule::Vertical => (3, -2),
            Rule::Diagonal => (-1, 2),
        };
        assert_eq!((dk, de), expected);
        assert_eq!((after.chi, euler_number(&after).unwrap()), edge.to);
        assert!(!after.orientable);
    }
}
