//! One PASS/FAIL line per acceptance criterion; run with `--nocapture` to see them.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use rand::Rng;

use frontkit::classify::{
    classify, lai_relative, massey_set, rationally_convex_set, stein_set, umbrella_set, BundleSpec, EXCLUDED,
};
use frontkit::cobordism::{
    euler_number, genus_chain, glue_mobius_three_umbrellas, glue_piece, klein_base, mobius_smoothing,
    relabel_umbrella, remove_disk, smooth_disk_cap, torus, CobordismError, PieceName, SurfaceComplex,
};
use frontkit::front::{fronts, FrontDiagram};
use frontkit::io::{parse_front, FrontDocument};
use frontkit::numerics::{
    convergence_to_cone, default_grid, liouville_identity, mobius_identities, pullback_residual, rot_calibration,
    rot_oracle, rot_raw_at, tb_at, tb_oracle, Family, FrontCurve, GreatCircle, Grid, LCurve, DEFAULT_PUSH_OFF,
};
use frontkit::planner::{derive_table, verify_closure, Rule};
use frontkit::random::{random_front, random_move, seeded};
use frontkit::rewrite::{apply_move, invariant_signature};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn tb_by_hand(f: &FrontDiagram) -> i64 {
    let mut writhe = 0;
    let mut cusps = 0;
    for k in 0..f.len() {
        match f.crossing_sign(k) {
            Some(s) => writhe += s,
            None => cusps += 1,
        }
    }
    writhe - cusps / 2
}

fn criterion_1() -> Check {
    let named: [(&str, FrontDiagram, i64, i64); 5] = [
        ("trivial", fronts::trivial(), -1, 0),
        ("L_u", fronts::stabilized_unknot(), -2, 1),
        ("two-sum", fronts::lu_chain(2), -3, 0),
        ("three-sum", fronts::lu_chain(3), -4, 1),
        ("four-sum", fronts::lu_chain(4), -5, 0),
    ];
    let mut seen = Vec::new();
    for (name, f, tb, rot) in &named {
        let inv = f.invariants();
        ensure(inv.component_count == 1, format!("{name} is not a knot"))?;
        ensure(inv.tb == *tb && tb_by_hand(f) == *tb, format!("{name}: tb {} expected {tb}", inv.tb))?;
        ensure(inv.rot[0].abs() == *rot, format!("{name}: rot {} expected ±{rot}", inv.rot[0]))?;
        let c = FrontCurve::new(f).map_err(|e| e.to_string())?;
        let (otb, orot) = (tb_oracle(&c, DEFAULT_PUSH_OFF), rot_oracle(&c));
        ensure(
            otb.as_ref().ok() == Some(&inv.tb) && orot.as_ref().ok() == Some(&inv.rot[0]),
            format!("{name}: oracles {otb:?}/{orot:?} disagree with front ({}, {})", inv.tb, inv.rot[0]),
        )?;
        seen.push(format!("{name} ({}, {})", inv.tb, inv.rot[0]));
    }
    Ok(format!("{}; numeric oracles agree", seen.join(", ")))
}

/// Signature computed without `invariant_signature`: per-component tb from the
/// extracted component fronts, |rot|, and the total linking from crossing signs.
fn signature_by_hand(f: &FrontDiagram) -> (usize, Vec<i64>, Vec<i64>, i64) {
    let n = f.component_count();
    let mut tbs = Vec::new();
    let mut own_writhe = 0;
    for c in 0..n {
        let g = f.component_front(c).unwrap();
        tbs.push(tb_by_hand(&g));
        own_writhe += (0..g.len()).filter_map(|k| g.crossing_sign(k)).sum::<i64>();
    }
    let total: i64 = (0..f.len()).filter_map(|k| f.crossing_sign(k)).sum();
    let mut rots: Vec<i64> = f.invariants().rot.iter().map(|r| r.abs()).collect();
    tbs.sort_unstable();
    rots.sort_unstable();
    (n, tbs, rots, (total - own_writhe).abs())
}

fn criterion_2() -> Check {
    let mut rng = seeded(2024);
    let mut kinds = BTreeSet::new();
    for trial in 0..1000 {
        let steps = rng.gen_range(2..14);
        let f = random_front(&mut rng, steps, 6);
        let m = random_move(&mut rng, &f).ok_or(format!("trial {trial}: no move"))?;
        let g = apply_move(&f, &m).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(
            invariant_signature(&f) == invariant_signature(&g) && signature_by_hand(&f) == signature_by_hand(&g),
            format!("trial {trial}: {} via {m} changed invariants", f.word_string()),
        )?;
        kinds.insert(format!("{:?}", m.kind).split('(').next().unwrap().to_string());
    }
    Ok(format!("1000 pairs, 0 failures, move kinds {kinds:?}"))
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

fn step(s: &SurfaceComplex, op: Step) -> Result<(SurfaceComplex, i64, i64), CobordismError> {
    let basic = || s.singularities.iter().position(|x| x.is_basic()).ok_or(CobordismError::NotBasicSingularity);
    Ok(match op {
        Step::Mobius => (glue_mobius_three_umbrellas(s)?, -1, -2),
        Step::Smooth => (mobius_smoothing(s, basic()?)?, -1, 2),
        Step::Relabel => (relabel_umbrella(s, basic()?)?, 0, 0),
        Step::DiskSwap => (smooth_disk_cap(&remove_disk(s), 0)?, 0, 0),
        Step::PieceA => (smooth_disk_cap(&glue_piece(&remove_disk(s), 0, PieceName::A, 0)?, 0)?, 0, -2),
        Step::PieceC => (smooth_disk_cap(&glue_piece(&remove_disk(s), 0, PieceName::C, 0)?, 0)?, 0, -4),
    })
}

fn criterion_3() -> Check {
    let e = |s: &SurfaceComplex| euler_number(s).map_err(|x| x.to_string());
    ensure(e(&klein_base())? == -4, "klein_base")?;
    ensure(e(&torus())? == 0, "torus")?;
    for g in 1..=6 {
        let s = genus_chain(g).map_err(|x| x.to_string())?;
        ensure(e(&s)? == 0, format!("genus_chain({g})"))?;
    }
    let mut rng = seeded(3);
    let mut applied = 0;
    for run in 0..500 {
        let mut s = match rng.gen_range(0..4) {
            0 => klein_base(),
            1 => torus(),
            n => genus_chain(n).unwrap(),
        };
        let mut expected = e(&s)?;
        for _ in 0..rng.gen_range(1..8) {
            let op = [Step::Mobius, Step::Smooth, Step::Relabel, Step::DiskSwap, Step::PieceA, Step::PieceC]
                [rng.gen_range(0..6)];
            match step(&s, op) {
                Ok((next, dchi, de)) => {
                    ensure(next.chi == s.chi + dchi, format!("run {run}: {op:?} chi"))?;
                    expected += de;
                    ensure(e(&next)? == expected, format!("run {run}: {op:?} euler {} vs {expected}", e(&next)?))?;
                    ensure(next.singularities.len() as i64 == -expected - next.chi, format!("run {run}: k"))?;
                    s = next;
                    applied += 1;
                }
                Err(CobordismError::OrientableSurface) if s.orientable => {}
                Err(CobordismError::NotBasicSingularity) if s.basic_singularity_count() == 0 => {}
                Err(other) => return Err(format!("run {run}: {op:?}: {other}")),
            }
        }
    }
    Ok(format!("klein -4, torus 0, genus_chain(1..=6) 0; 500 replays ({applied} steps) match"))
}

/// Rows of the construction table, top to bottom.
const TABLE_ROWS: [(i64, &[i64]); 6] = [
    (0, &[-4]),
    (-1, &[-6, -2]),
    (-2, &[-8, -4, 0]),
    (-3, &[-10, -6, -2, 2]),
    (-4, &[-12, -8, -4, 0, 4]),
    (-5, &[-14, -10, -6, -2, 2]),
];

/// Arrow markers per node in row order (`d` down, `r` down-right); the bottom
/// row's arrows lead out of the table.
const TABLE_ARROWS: [&[&str]; 5] = [
    &["dr"],
    &["dr", "dr"],
    &["dr", "dr", "dr"],
    &["dr", "dr", "dr", "dr"],
    &["dr", "dr", "dr", "dr", "d"],
];

fn criterion_4() -> Check {
    let mut rows = 0;
    for chi in -12..=2 {
        for orientable in [true, false] {
            let Ok(m) = massey_set(chi, orientable) else { continue };
            let s = stein_set(chi, orientable).unwrap();
            let r = rationally_convex_set(chi, orientable).unwrap();
            let u = umbrella_set(chi, orientable).unwrap();
            ensure(r.is_subset(&s) && s.is_subset(&m), format!("nesting at {chi}"))?;
            for set in [&m, &s, &r] {
                let v: Vec<i64> = set.iter().copied().collect();
                ensure(v.windows(2).all(|w| w[1] - w[0] == 4), format!("step-4 at {chi}"))?;
            }
            ensure(u == r.iter().map(|e| -chi - e).collect(), format!("umbrella translation at {chi}"))?;
            rows += 1;
        }
    }
    for (chi, e) in EXCLUDED {
        ensure(stein_set(chi, false).unwrap().contains(&e), format!("({chi},{e}) not stein"))?;
        ensure(!rationally_convex_set(chi, false).unwrap().contains(&e), format!("({chi},{e}) not excluded"))?;
    }
    for (chi, row) in TABLE_ROWS {
        let want: BTreeSet<i64> = row.iter().copied().collect();
        ensure(rationally_convex_set(chi, false).unwrap() == want, format!("rationally convex row {chi}"))?;
        let mut stein = stein_set(chi, false).unwrap();
        // The table lists rationally convex bundles: D~(0,0) is Stein but excluded.
        if chi == 0 {
            ensure(stein.remove(&0), "stein row 0 lacks the excluded D~(0,0)")?;
        }
        ensure(stein == want, format!("stein row {chi}: {stein:?} vs {want:?}"))?;
    }
    Ok(format!(
        "{rows} valid (chi, orientability) rows; exclusions hold; stein rows match the table for chi -1..-5, \
         chi 0 matches after removing the excluded D~(0,0)"
    ))
}

fn criterion_5() -> Check {
    let g = derive_table(-5);
    let want: BTreeSet<(i64, i64)> =
        TABLE_ROWS.iter().flat_map(|(chi, row)| row.iter().map(move |e| (*chi, *e))).collect();
    ensure(g.nodes == want, format!("nodes {:?}", g.nodes))?;
    let mut arrows = BTreeSet::new();
    for (r, marks) in TABLE_ARROWS.iter().enumerate() {
        let (chi, row) = TABLE_ROWS[r];
        for (c, mark) in marks.iter().enumerate() {
            let below = TABLE_ROWS[r + 1].1;
            if mark.contains('d') {
                arrows.insert(((chi, row[c]), (chi - 1, below[c]), Rule::Vertical));
            }
            if mark.contains('r') {
                arrows.insert(((chi, row[c]), (chi - 1, below[c + 1]), Rule::Diagonal));
            }
        }
    }
    let edges: BTreeSet<_> = g.edges.iter().map(|e| (e.from, e.to, e.rule)).collect();
    ensure(edges == arrows, format!("arrows differ: {:?}", edges.symmetric_difference(&arrows).collect::<Vec<_>>()))?;
    ensure(g.out_rules((-4, 4)) == vec![Rule::Vertical], "diagonal at (-4,4)")?;
    let closure = verify_closure(-12).map_err(|e| e.to_string())?;
    ensure(closure.nodes == closure.replayed, "closure replay")?;
    Ok(format!(
        "{} nodes, {} arrows, no diagonal at (-4,4); closure to chi -12: {} nodes replayed",
        g.nodes.len(),
        edges.len(),
        closure.replayed
    ))
}

fn criterion_6() -> Check {
    let mut worst: f64 = 0.0;
    let mut families = vec![];
    for a in [0.1, 0.5, 1.0] {
        families.push(Family::GammaA { a });
    }
    families.push(Family::F);
    families.push(Family::G);
    for fam in &families {
        let r = pullback_residual(fam, &default_grid(fam, 48), 1e-4).map_err(|e| e.to_string())?;
        ensure(r.max_residual < 1e-6, format!("{}: residual {:e}", fam.name(), r.max_residual))?;
        worst = worst.max(r.max_residual);
    }
    let mut mobius_worst: f64 = 0.0;
    for a in [0.1, 0.5, 1.0] {
        let m = mobius_identities(a, 48).map_err(|e| e.to_string())?;
        ensure(m.pass && m.max_residual <= 1e-12, format!("Möbius identities at A={a}: {:e}", m.max_residual))?;
        mobius_worst = mobius_worst.max(m.max_residual);
    }
    let grid = Grid::new((0.0, std::f64::consts::TAU), (0.5, 1.0), 48, 48);
    let conv = convergence_to_cone(&[0.2, 0.1, 0.05, 0.025], &grid).map_err(|e| e.to_string())?;
    ensure(conv.ratios.iter().all(|r| (0.2..=0.3).contains(r)), format!("ratios {:?}", conv.ratios))?;
    let liou = liouville_identity(&Grid::new((-2.0, 2.0), (-2.0, 2.0), 48, 48));
    ensure(liou.max_residual < 1e-12, format!("Liouville {:e}", liou.max_residual))?;

    let err = |e: frontkit::numerics::NumericsError| e.to_string();
    let (tb_l, rot_l) = (tb_oracle(&LCurve, DEFAULT_PUSH_OFF).map_err(err)?, rot_oracle(&LCurve).map_err(err)?);
    ensure(tb_l == -2 && rot_l.abs() == 1, format!("L: tb {tb_l}, rot {rot_l}"))?;
    let tb_circle = tb_oracle(&GreatCircle, DEFAULT_PUSH_OFF).map_err(err)?;
    let tb_front = tb_oracle(&FrontCurve::new(&fronts::trivial()).map_err(err)?, DEFAULT_PUSH_OFF).map_err(err)?;
    ensure(tb_circle == -1 && tb_front == -1, format!("trivial: tb {tb_circle} / {tb_front}"))?;
    for n in [2048, 8192] {
        let coarse = (tb_at(&LCurve, 2.5e-3, n).map_err(err)?, rot_raw_at(&LCurve, n).map_err(err)?);
        let fine = (tb_at(&LCurve, 2.5e-3, 2 * n).map_err(err)?, rot_raw_at(&LCurve, 2 * n).map_err(err)?);
        ensure(coarse == fine, format!("refinement {n}: {coarse:?} vs {fine:?}"))?;
        ensure(coarse.1 * rot_calibration() == rot_l, "calibrated rot")?;
    }
    Ok(format!(
        "pullback max {worst:.1e}; Möbius max {mobius_worst:.1e}; ratios {:?}; Liouville {:.1e}; \
         L (tb {tb_l}, rot {rot_l}); trivial tb {tb_circle}; stable under refinement",
        conv.ratios.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
        liou.max_residual
    ))
}

fn criterion_7() -> Check {
    let got = lai_relative(0, 0, 0, 1, 1);
    ensure(got == (-2, 1), format!("{got:?}"))?;
    // The stabilized unknot bounds the disk with one negative hyperbolic point.
    let inv = fronts::stabilized_unknot().invariants();
    ensure((inv.tb, inv.rot[0].abs()) == (got.0, got.1.abs()), "L_u invariants")?;
    Ok(format!("lai_relative(0,0,0,1;1) = {got:?}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = frontkit_cli::run(std::iter::once("frontkit").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn criterion_8() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure(files.len() == 20, format!("{} corpus files", files.len()))?;
    for p in &files {
        let text = std::fs::read_to_string(p).unwrap();
        let doc = parse_front(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        let again = parse_front(&doc.serialize()).map_err(|e| e.to_string())?;
        ensure(again == doc, format!("{}: document round trip", p.display()))?;
        let f = doc.to_front().map_err(|e| e.to_string())?;
        let regenerated = FrontDocument::from_front(&doc.name, &f);
        ensure(regenerated.to_front().unwrap() == f, format!("{}: front round trip", p.display()))?;
        ensure(
            parse_front(&regenerated.serialize()).unwrap() == regenerated,
            format!("{}: canonical round trip", p.display()),
        )?;
    }
    // (chi, e, orientable, rationally convex, stein, smooth)
    let spotlight = [
        (0, 0, false, false, true, true),
        (1, -2, false, false, true, true),
        (0, -4, false, true, true, true),
        (0, 0, true, true, true, true),
    ];
    for (chi, e, orientable, rc, stein, smooth) in spotlight {
        let c = classify(BundleSpec::new(chi, e, orientable)).map_err(|x| x.to_string())?;
        ensure((c.rationally_convex, c.stein, c.smooth) == (rc, stein, smooth), format!("classify ({chi},{e})"))?;
        let (chi_s, e_s) = (chi.to_string(), e.to_string());
        let mut args = vec!["classify", "--chi", &chi_s, "--euler", &e_s];
        if orientable {
            args.push("--orientable");
        }
        let (code, out) = cli(&args);
        let line = format!(
            "rationally_convex: {rc}; stein: {stein}; smooth: {smooth}; umbrellas: {}",
            -e - chi
        );
        ensure(code == 0 && out.lines().nth(1) == Some(line.as_str()), format!("cli classify ({chi},{e}): {out}"))?;
    }
    Ok("20 corpus files round-trip; four spotlight classifications match".into())
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Check); 8] = [
        ("invariant values", criterion_1),
        ("move invariance", criterion_2),
        ("Euler number bookkeeping", criterion_3),
        ("classifier tables", criterion_4),
        ("table regeneration", criterion_5),
        ("numerics", criterion_6),
        ("relative Lai formulas", criterion_7),
        ("CLI and round trips", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{:.1?}]", i + 1, t.elapsed()),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why} [{:.1?}]", i + 1, t.elapsed());
                failed.push(i + 1);
            }
        }
    }
    println!("total {:.1?}", start.elapsed());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
