//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadowsum::cssum::{lemma_report, rel_dev, theorem_check, wlo_cs};
use shadowsum::modular::ModularData;
use shadowsum::qracah::{compare_table, compare_table_conjugated, shifted_alcove_points, FusionTable};
use shadowsum::repchar::{character_eval, CharacterMethod};
use shadowsum::shadowlink::{
    derive_shadow, shadow_state_sum, shadow_state_sum_with, wlo_shadow, ColoredLink, FaceSpec, FusionSource,
    LoopSpec, ModelKind, Shadow, Surface, VerticalSpec,
};
use shadowsum::{RootSystem, Weight};

const GRID: [(&str, i64); 4] = [("A1", 8), ("A2", 4), ("B2", 3), ("G2", 2)];
const CLOSED_FORM_GRID: [(&str, i64); 2] = [("A1", 6), ("A2", 3)];

fn md(name: &str, k: i64) -> ModularData {
    ModularData::new(RootSystem::new(name.parse().unwrap()).unwrap(), k).unwrap()
}

fn grid() -> Vec<(String, i64, ModularData)> {
    let mut out = Vec::new();
    for (name, kmax) in GRID {
        for k in 1..=kmax {
            out.push((name.to_string(), k, md(name, k)));
        }
    }
    out
}

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
    /// Part of the criterion outside the documented conflict; must pass.
    residual_pass: Option<bool>,
}

fn lp(id: &str, color: &Weight, winding: i64, inside_is_plus: bool, parent: Option<&str>) -> LoopSpec {
    LoopSpec {
        id: id.into(),
        color: color.clone(),
        winding,
        inside_is_plus,
        parent: parent.map(String::from),
        plus_face: None,
        minus_face: None,
    }
}

fn vert(at: Option<&str>, color: &Weight) -> VerticalSpec {
    VerticalSpec { at: at.map(String::from), color: color.clone(), winding: 1 }
}

fn forest(loops: Vec<LoopSpec>, vertical: Vec<VerticalSpec>) -> ColoredLink {
    ColoredLink { loops, vertical, ..Default::default() }
}

fn three_unknots(c: [&Weight; 3]) -> Shadow {
    derive_shadow(&forest(
        vec![lp("l", c[0], 1, true, None), lp("m", c[1], 1, true, None), lp("n", c[2], 1, true, None)],
        vec![],
    ))
    .unwrap()
}

fn nested_unknots(c: [&Weight; 3]) -> Shadow {
    derive_shadow(&forest(
        vec![lp("l", c[0], 1, true, None), lp("m", c[1], 1, true, None), lp("n", c[2], 1, true, Some("l"))],
        vec![],
    ))
    .unwrap()
}

/// Loop around a vertical point colored `nu`; a second vertical point colored `mu` outside.
fn mixed(l: &Weight, m: &Weight, n: &Weight) -> Shadow {
    derive_shadow(&forest(vec![lp("l", l, 1, true, None)], vec![vert(Some("l"), n), vert(None, m)])).unwrap()
}

fn verticals_only(genus: u32, colors: &[&Weight]) -> Shadow {
    let link = ColoredLink {
        surface: Surface { genus },
        model: ModelKind::Explicit,
        faces: Some(vec![FaceSpec { id: "sigma".into(), euler: 2 - 2 * genus as i64 }]),
        sides: Some(Default::default()),
        vertical: colors.iter().map(|c| vert(Some("sigma"), c)).collect(),
        ..Default::default()
    };
    derive_shadow(&link).unwrap()
}

/// Genus-g surface with one separating loop: a disk (`split = 0`) or two
/// pieces of genus `split` and `g - split`, each with one boundary circle.
fn separating(genus: u32, split: u32, color: &Weight, winding: i64) -> Shadow {
    let e1 = 1 - 2 * split as i64;
    let e2 = 1 - 2 * (genus - split) as i64;
    let link = ColoredLink {
        surface: Surface { genus },
        model: ModelKind::Explicit,
        faces: Some(vec![FaceSpec { id: "p".into(), euler: e1 }, FaceSpec { id: "q".into(), euler: e2 }]),
        sides: Some([("l".to_string(), [("p".to_string(), 1), ("q".to_string(), -1)].into())].into()),
        loops: vec![LoopSpec {
            plus_face: Some("p".into()),
            minus_face: Some("q".into()),
            ..lp("l", color, winding, true, None)
        }],
        ..Default::default()
    };
    derive_shadow(&link).unwrap()
}

fn random_forest(rng: &mut ChaCha8Rng, m: &ModularData) -> Shadow {
    let n = rng.gen_range(1..=4);
    let mut loops = Vec::new();
    for i in 0..n {
        let parent = if i > 0 && rng.gen_bool(0.5) { Some(format!("L{}", rng.gen_range(0..i))) } else { None };
        let color = m.alcove[rng.gen_range(0..m.len())].clone();
        loops.push(lp(&format!("L{i}"), &color, rng.gen_range(-2..=2), rng.gen_bool(0.6), parent.as_deref()));
    }
    let mut vertical = Vec::new();
    if rng.gen_bool(0.3) {
        let at = if rng.gen_bool(0.5) { None } else { Some(format!("L{}", rng.gen_range(0..n))) };
        vertical.push(vert(at.as_deref(), &m.alcove[rng.gen_range(0..m.len())]));
    }
    derive_shadow(&forest(loops, vertical)).unwrap()
}

/// The Theorem corpus: (label, algebra, level, shadow).
fn corpus() -> Vec<(String, &'static str, i64, Shadow)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(20_061);
    let levels: [(&str, i64); 6] = [("A1", 3), ("A1", 4), ("A2", 1), ("A2", 2), ("B2", 1), ("G2", 1)];
    for i in 0..24 {
        let (name, k) = levels[i % levels.len()];
        let m = md(name, k);
        out.push((format!("random forest #{i}"), name, k, random_forest(&mut rng, &m)));
    }
    let a1 = |v: i64| Weight(vec![v]);
    let a2 = |a: i64, b: i64| Weight(vec![a, b]);
    out.push(("three unknots".into(), "A1", 4, three_unknots([&a1(1), &a1(2), &a1(3)])));
    out.push(("three unknots".into(), "A2", 2, three_unknots([&a2(1, 0), &a2(1, 0), &a2(1, 0)])));
    out.push(("nested unknots".into(), "A1", 4, nested_unknots([&a1(2), &a1(2), &a1(2)])));
    out.push(("nested unknots".into(), "A2", 2, nested_unknots([&a2(1, 1), &a2(0, 1), &a2(1, 0)])));
    out.push(("genus-1 disk".into(), "A1", 3, separating(1, 0, &a1(1), 2)));
    out.push(("genus-1 disk".into(), "A2", 2, separating(1, 0, &a2(1, 0), -1)));
    out.push(("genus-2 separating".into(), "A1", 3, separating(2, 1, &a1(2), 1)));
    out.push(("mixed vertical".into(), "A2", 2, mixed(&a2(1, 0), &a2(0, 1), &a2(1, 1))));
    out
}

fn c1_modular_identities(g: &[(String, i64, ModularData)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, _, m) in g {
        worst = worst.max(m.s2_dev).max(m.st3_dev);
    }
    Outcome {
        id: 1,
        title: "S^2 = C and (ST)^3 = C",
        pass: worst < 1e-10,
        detail: format!("max dev {worst:.2e} over {} (algebra, level) pairs, tol 1e-10", g.len()),
        residual_pass: None,
    }
}

fn c2_qdim(g: &[(String, i64, ModularData)]) -> Outcome {
    let worst = g.iter().map(|(_, _, m)| m.qdim_check().max_dev).fold(0.0, f64::max);
    Outcome {
        id: 2,
        title: "dim via S ratio equals sine product",
        pass: worst < 1e-10,
        detail: format!("max rel dev {worst:.2e}, tol 1e-10"),
        residual_pass: None,
    }
}

fn c3_verlinde_racah(g: &[(String, i64, ModularData)]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    let mut residual = true;
    let mut conj_ok = true;
    for (name, k, m) in g {
        let t = FusionTable::build(m);
        let c = compare_table(&t, 1e-8);
        worst = worst.max(c.max_dev);
        if !c.pass {
            failing.push(format!("{name} k={k} ({} entries)", c.mismatches));
            if name != "A2" {
                residual = false;
            }
        }
        conj_ok &= compare_table_conjugated(&t, m, 1e-8).pass;
    }
    Outcome {
        id: 3,
        title: "Verlinde N^b_{ga} equals quantum Racah sum",
        pass: failing.is_empty(),
        detail: format!(
            "max dev {worst:.2e}, tol 1e-8; failing: [{}]; Racah sum vs N^b_(g-bar a) on the whole grid: {}",
            failing.join(", "),
            if conj_ok { "exact" } else { "MISMATCH" }
        ),
        residual_pass: Some(residual && conj_ok),
    }
}

fn c4_fusion_matrix(g: &[(String, i64, ModularData)]) -> Outcome {
    let worst = g.iter().map(|(_, _, m)| m.fusion_matrix_identity_check().max_dev).fold(0.0, f64::max);
    Outcome {
        id: 4,
        title: "sum_l dim(l) T_ll N_(m l)^n = (TST)_mn / (T00 S00)",
        pass: worst < 1e-9,
        detail: format!("max dev {worst:.2e}, tol 1e-9"),
        residual_pass: None,
    }
}

fn closed_form_check(id: u32, title: &'static str, nested: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, kmax) in CLOSED_FORM_GRID {
        for k in 1..=kmax {
            let m = md(name, k);
            let n = m.len();
            let s00 = m.s.get(0, 0);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let cols = [&m.alcove[a], &m.alcove[b], &m.alcove[c]];
                        let nval = m.n3(a, b, c) as f64;
                        let (sh, expect) = if !nested {
                            (three_unknots(cols), m.t[a] * m.t[b] * m.t[c] / (m.t[0].powi(3) * s00 * s00) * nval)
                        } else {
                            (nested_unknots(cols), m.t[b] * m.t[b] / (m.t[0].powi(2) * s00 * s00) * nval)
                        };
                        let got = shadow_state_sum(&m, &sh).unwrap();
                        worst = worst.max(rel_dev(got, expect));
                        count += 1;
                    }
                }
            }
        }
    }
    Outcome {
        id,
        title,
        pass: worst < 1e-9,
        detail: format!("max rel dev {worst:.2e} over {count} colorings (A1 k<=6, A2 k<=3), tol 1e-9"),
        residual_pass: None,
    }
}

fn c7_c8_theorem() -> (Outcome, Outcome) {
    let corpus = corpus();
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    let mut wlo_worst: f64 = 0.0;
    for (label, name, k, sh) in &corpus {
        let m = md(name, *k);
        let t = theorem_check(sh, &m).unwrap();
        if t.rel_dev > worst {
            worst = t.rel_dev;
            worst_label = format!("{label} ({name} k={k})");
        }
        let w1 = wlo_cs(sh, &m).unwrap();
        let w2 = wlo_shadow(&m, sh).unwrap();
        wlo_worst = wlo_worst.max(rel_dev(w1, w2));
    }
    let mut empty_worst: f64 = 0.0;
    for (_, _, m) in grid() {
        for g in 0..3 {
            empty_worst = empty_worst.max((wlo_cs(&Shadow::empty(g), &m).unwrap() - 1.0).norm());
        }
    }
    (
        Outcome {
            id: 7,
            title: "ST_CS(L) = K^(2-2g) |X_L|",
            pass: worst < 1e-9 && corpus.len() >= 20,
            detail: format!("{} links, max rel dev {worst:.2e} ({worst_label}), tol 1e-9", corpus.len()),
            residual_pass: None,
        },
        Outcome {
            id: 8,
            title: "WLO normalization and route agreement",
            pass: empty_worst < 1e-10 && wlo_worst < 1e-9,
            detail: format!(
                "|WLO_cs(empty) - 1| max {empty_worst:.2e} (tol 1e-10, genus 0..2 on grid); WLO_cs vs WLO_shadow max rel dev {wlo_worst:.2e} (tol 1e-9)"
            ),
            residual_pass: None,
        },
    )
}

fn c9_vertical() -> Outcome {
    let mut worst3: f64 = 0.0;
    for (_, _, m) in grid() {
        let n = m.len();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let sh = verticals_only(0, &[&m.alcove[a], &m.alcove[b], &m.alcove[c]]);
                    let nval = Complex64::new(m.n3(a, b, c) as f64, 0.0);
                    worst3 = worst3.max((wlo_cs(&sh, &m).unwrap() - nval).norm());
                    worst3 = worst3.max((wlo_shadow(&m, &sh).unwrap() - nval).norm());
                }
            }
        }
    }
    // closed form for vertical-only links in genus g, against both routes
    let mut worst_g: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 1..=4 {
        let m = md("A1", k);
        for g in 0..3u32 {
            for npts in 0..4 {
                let idx: Vec<usize> = (0..npts).map(|_| rng.gen_range(0..m.len())).collect();
                let cols: Vec<&Weight> = idx.iter().map(|&i| &m.alcove[i]).collect();
                let sh = verticals_only(g, &cols);
                let mut closed = Complex64::new(0.0, 0.0);
                for l in 0..m.len() {
                    let mut z = Complex64::new(m.qdim_at(l).powi(2 - 2 * g as i32), 0.0);
                    for &i in &idx {
                        z *= m.s.get(i, l) / m.s.get(0, l);
                    }
                    closed += z;
                }
                closed /= m.empty_sum(g);
                worst_g = worst_g.max(rel_dev(wlo_cs(&sh, &m).unwrap(), closed));
                worst_g = worst_g.max(rel_dev(wlo_shadow(&m, &sh).unwrap(), closed));
            }
        }
    }
    Outcome {
        id: 9,
        title: "vertical loops",
        pass: worst3 < 1e-8 && worst_g < 1e-9,
        detail: format!(
            "3 points on S^2 vs N_lmn: max dev {worst3:.2e} (tol 1e-8, full grid); genus 0..2 closed form (A1 k<=4): max rel dev {worst_g:.2e}"
        ),
        residual_pass: None,
    }
}

fn c10_mixed() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    let mut by_source = std::collections::BTreeMap::<&str, f64>::new();
    for (name, kmax) in CLOSED_FORM_GRID {
        for k in 1..=kmax {
            let m = md(name, k);
            let n = m.len();
            let s00 = m.s.get(0, 0);
            let xe = m.empty_sum(0);
            let mut local: f64 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let sh = mixed(&m.alcove[a], &m.alcove[b], &m.alcove[c]);
                        let expect = m.t[b] / m.t[c] * m.n3(a, b, c) as f64 / (xe * s00 * s00);
                        local = local.max(rel_dev(wlo_cs(&sh, &m).unwrap(), expect));
                        let r = shadow_state_sum_with(&m, &sh, FusionSource::Racah).unwrap();
                        let v = shadow_state_sum_with(&m, &sh, FusionSource::Verlinde).unwrap();
                        let e = by_source.entry(name).or_insert(0.0);
                        *e = e.max(rel_dev(r, v));
                    }
                }
            }
            if local >= 1e-9 {
                failing.push(format!("{name} k={k}"));
            }
            worst = worst.max(local);
        }
    }
    Outcome {
        id: 10,
        title: "mixed link WLO = (T_mm/T_nn) N_lmn / (|X_empty| S00^2)",
        pass: worst < 1e-9,
        detail: format!(
            "max rel dev {worst:.2e} (A1 k<=6, A2 k<=3), tol 1e-9; failing: [{}]; colored sum with Racah vs Verlinde fusion, max rel dev by algebra {by_source:?}",
            failing.join(", ")
        ),
        residual_pass: Some(failing.iter().all(|f| f.starts_with("A2"))),
    }
}

fn c11_lemmas() -> Outcome {
    let a1 = |v: i64| Weight(vec![v]);
    let a2 = |a: i64, b: i64| Weight(vec![a, b]);
    let configs: Vec<(&str, i64, Shadow)> = vec![
        ("A1", 3, three_unknots([&a1(1), &a1(2), &a1(1)])),
        ("A1", 2, separating(1, 0, &a1(2), 2)),
        ("A2", 2, nested_unknots([&a2(1, 0), &a2(0, 1), &a2(1, 1)])),
        ("B2", 1, derive_shadow(&forest(vec![lp("a", &a2(0, 1), -2, false, None)], vec![])).unwrap()),
        ("G2", 1, derive_shadow(&forest(vec![lp("a", &a2(1, 0), 1, true, None)], vec![])).unwrap()),
    ];
    let mut jump = true;
    let mut bij = true;
    let mut det: f64 = 0.0;
    let mut fr: f64 = 0.0;
    for (name, k, sh) in &configs {
        let r = lemma_report(sh, &md(name, *k)).unwrap();
        jump &= r.jump_exact && r.valid_fields > 0;
        bij &= r.bijection;
        det = det.max(r.det_dev);
        fr = fr.max(r.framing_dev);
    }
    let mut shifted = true;
    for (name, kmax) in GRID {
        let rs = RootSystem::new(name.parse().unwrap()).unwrap();
        for k in 1..=kmax {
            let mut a = shifted_alcove_points(&rs, k);
            a.sort();
            let mut b = shadowsum::modular::alcove_weights(&rs, k).unwrap();
            b.sort();
            shifted &= a == b;
        }
    }
    Outcome {
        id: 11,
        title: "Lemma suite",
        pass: jump && bij && det < 1e-10 && fr < 1e-10 && shifted,
        detail: format!(
            "{} configs: jumps exact {jump}, det_reg max rel dev {det:.2e}, framing max dev {fr:.2e}, bijection {bij}; shifted alcove = alcove on grid: {shifted}",
            configs.len()
        ),
        residual_pass: None,
    }
}

fn c12_character_bridge(g: &[(String, i64, ModularData)]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    let mut residual = true;
    for (name, k, m) in g {
        let kh = m.shifted_level();
        let mut local: f64 = 0.0;
        for (mi, mu) in m.alcove.iter().enumerate() {
            for (li, l) in m.alcove.iter().enumerate() {
                let b = (l + &m.rs.rho).over(kh);
                let chi = character_eval(&m.rs, mu, &b, CharacterMethod::MultiplicitySum).unwrap();
                local = local.max((chi - m.s.get(mi, li) / m.s.get(0, li)).norm());
            }
        }
        if local >= 1e-10 {
            failing.push(format!("{name} k={k}"));
            residual &= name == "A2";
        }
        worst = worst.max(local);
    }
    Outcome {
        id: 12,
        title: "chi_mu(exp((l+rho)/(k+c_G))) = S_ml / S_0l",
        pass: failing.is_empty(),
        detail: format!("max dev {worst:.2e}, tol 1e-10; failing: [{}]", failing.join(", ")),
        residual_pass: Some(residual),
    }
}

/// Criteria that conflict with the modular identities or with each other on
/// algebras with non-self-conjugate weights; see the README.
const EXPECTED_FAILURES: [u32; 2] = [3, 12];

#[test]
fn acceptance() {
    let start = Instant::now();
    let g = grid();
    let (c7, c8) = c7_c8_theorem();
    let outcomes = vec![
        c1_modular_identities(&g),
        c2_qdim(&g),
        c3_verlinde_racah(&g),
        c4_fusion_matrix(&g),
        closed_form_check(5, "three unknots closed form", false),
        closed_form_check(6, "nested unknots closed form", true),
        c7,
        c8,
        c9_vertical(),
        c10_mixed(),
        c11_lemmas(),
        c12_character_bridge(&g),
    ];
    println!();
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2}: {} | {}", o.id, o.title, o.detail);
    }
    println!("acceptance suite finished in {:.1} s", start.elapsed().as_secs_f64());

    for o in &outcomes {
        if EXPECTED_FAILURES.contains(&o.id) {
            assert!(!o.pass, "criterion {} now passes; update EXPECTED_FAILURES", o.id);
            assert_eq!(o.residual_pass, Some(true), "criterion {} fails outside A2: {}", o.id, o.detail);
        } else {
            assert!(o.pass, "criterion {} failed: {}", o.id, o.detail);
        }
    }
}
