//! Invariant suite for one `(algebra, level)` pair.

use num_complex::Complex64;
use serde::Serialize;

use crate::cssum::{constants, lemma_report, rel_dev, theorem_check, wlo_cs};
use crate::error::Result;
use crate::links;
use crate::modular::{alcove_weights, CheckReport, ModularData};
use crate::qracah::{compare_table, compare_table_conjugated, shifted_alcove_points, FusionTable};
use crate::repchar::{character_eval, CharacterMethod};
use crate::shadowlink::{derive_shadow, shadow_state_sum, wlo_shadow, ColoredLink, Shadow};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Matrix identities and exact-in-principle floating checks.
    pub modular: f64,
    /// Distance of Verlinde values to the Racah integers.
    pub fusion: f64,
    /// Relative gap between the two routes for link invariants.
    pub theorem: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { modular: 1e-10, fusion: 1e-8, theorem: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub algebra: String,
    pub level: i64,
    pub exponent_sign: i64,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

fn exact(name: &str, ok: bool) -> CheckReport {
    CheckReport::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
}

fn shadow(link: &ColoredLink) -> Shadow {
    derive_shadow(link).expect("built-in documents are valid")
}

/// A handful of colors spread over the alcove, always including weight 0
/// and the last alcove weight.
fn sample_colors(md: &ModularData, count: usize) -> Vec<Weight> {
    let n = md.len();
    let step = (n / count.max(1)).max(1);
    let mut out: Vec<Weight> = (0..n).step_by(step).map(|i| md.alcove[i].clone()).collect();
    if !out.contains(&md.alcove[n - 1]) {
        out.push(md.alcove[n - 1].clone());
    }
    out
}

/// Links on which both routes are compared.
pub fn corpus(md: &ModularData) -> Vec<(String, Shadow)> {
    let colors = sample_colors(md, 3);
    let top = colors.last().unwrap();
    let mid = &colors[colors.len() / 2];
    let zero = &md.alcove[0];
    let mut out = vec![
        ("three unknots".to_string(), shadow(&links::three_unknots(top, mid, top))),
        ("nested unknots".to_string(), shadow(&links::nested_unknots(mid, top, mid))),
        ("loop around vertical".to_string(), shadow(&links::loop_around_vertical(top, mid, top))),
        ("disk on torus".to_string(), shadow(&links::separating_loop(1, 0, mid, 2))),
        ("separating loop in genus 2".to_string(), shadow(&links::separating_loop(2, 1, top, -1))),
        ("vertical points in genus 1".to_string(), shadow(&links::vertical_points(1, &[top.clone(), mid.clone()]))),
        ("zero-colored unknots".to_string(), shadow(&links::three_unknots(zero, zero, mid))),
    ];
    for seed in 0..4 {
        let n = 2 + (seed as usize % 3);
        out.push((format!("forest {seed}"), shadow(&links::forest(seed, n, &colors))));
    }
    out
}

/// Runs every invariant check for `md`.
pub fn verify(md: &ModularData, tol: &Tolerances) -> Result<VerifyReport> {
    let n = md.len();
    let mut checks = md.modular_identity_reports();
    for c in checks.iter_mut().take(2) {
        *c = CheckReport::new(c.name.clone(), c.max_dev, tol.modular);
    }
    let q = md.qdim_check();
    checks.push(CheckReport::new(q.name, q.max_dev, tol.modular));

    // Verlinde integrality and conjugation symmetry
    let mut int_dev: f64 = 0.0;
    let mut conj_dev: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = md.verlinde_raw(a, b, c);
                int_dev = int_dev.max((v - Complex64::new(v.re.round().max(0.0), 0.0)).norm());
                let w = md.verlinde_raw(md.conj[a], md.conj[b], md.conj[c]);
                conj_dev = conj_dev.max((v - w).norm());
            }
        }
    }
    checks.push(CheckReport::new("Verlinde values are non-negative integers", int_dev, tol.fusion));
    checks.push(CheckReport::new("N invariant under charge conjugation", conj_dev, tol.fusion));

    let table = FusionTable::build(md);
    let cmp = compare_table(&table, tol.fusion);
    checks.push(CheckReport {
        name: "Verlinde N^b_{g a} equals quantum Racah sum".into(),
        max_dev: cmp.max_dev,
        tol: tol.fusion,
        pass: cmp.pass,
    });
    let cc = compare_table_conjugated(&table, md, tol.fusion);
    checks.push(CheckReport {
        name: "quantum Racah sum equals Verlinde N^b_{g-bar a}".into(),
        max_dev: cc.max_dev,
        tol: tol.fusion,
        pass: cc.pass,
    });
    let f = md.fusion_matrix_identity_check();
    checks.push(CheckReport::new(f.name, f.max_dev, tol.theorem));

    let kh = md.shifted_level();
    let mut bridge: f64 = 0.0;
    for (mi, mu) in md.alcove.iter().enumerate() {
        for (li, l) in md.alcove.iter().enumerate() {
            let chi = character_eval(&md.rs, mu, &(l + &md.rs.rho).over(kh), CharacterMethod::MultiplicitySum)?;
            bridge = bridge.max((chi - md.s.get(mi, li) / md.s.get(0, li)).norm());
        }
    }
    checks.push(CheckReport::new("character at (l+rho)/(k+c_G) equals S_ml/S_0l", bridge, tol.modular));

    // closed forms over all color triples
    let s00 = md.s.get(0, 0);
    let xe = md.empty_sum(0);
    let (mut ex1, mut ex2, mut three, mut mixed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (l, m, nu) = (&md.alcove[a], &md.alcove[b], &md.alcove[c]);
                let nval = md.n3(a, b, c) as f64;
                let x1 = shadow_state_sum(md, &shadow(&links::three_unknots(l, m, nu)))?;
                ex1 = ex1.max(rel_dev(x1, md.t[a] * md.t[b] * md.t[c] / (md.t[0].powi(3) * s00 * s00) * nval));
                let x2 = shadow_state_sum(md, &shadow(&links::nested_unknots(l, m, nu)))?;
                ex2 = ex2.max(rel_dev(x2, md.t[b] * md.t[b] / (md.t[0].powi(2) * s00 * s00) * nval));
                if a <= b && b <= c {
                    let w = wlo_cs(&shadow(&links::vertical_points(0, &[l.clone(), m.clone(), nu.clone()])), md)?;
                    three = three.max((w - nval).norm());
                }
                let w = wlo_cs(&shadow(&links::loop_around_vertical(l, m, nu)), md)?;
                mixed = mixed.max(rel_dev(w, md.t[b] / md.t[c] * nval / (xe * s00 * s00)));
            }
        }
    }
    checks.push(CheckReport::new("three unknots: |X_L| closed form", ex1, tol.theorem));
    checks.push(CheckReport::new("nested unknots: |X_L| closed form", ex2, tol.theorem));
    checks.push(CheckReport::new("three vertical loops on S^2: WLO = N_lmn", three, tol.fusion));
    checks.push(CheckReport::new("loop around vertical: WLO closed form", mixed, tol.theorem));

    // genus-g vertical-only formula
    let mut vert: f64 = 0.0;
    let colors = sample_colors(md, 3);
    for g in 0..3u32 {
        for count in 0..=colors.len().min(3) {
            let cols = &colors[..count];
            let idx: Vec<usize> = cols.iter().map(|c| md.index_of(c)).collect::<Result<_>>()?;
            let mut closed = Complex64::new(0.0, 0.0);
            for l in 0..n {
                let mut z = Complex64::new(md.qdim_at(l).powi(2 - 2 * g as i32), 0.0);
                for &i in &idx {
                    let b = (&md.alcove[l] + &md.rs.rho).over(kh);
                    z *= character_eval(&md.rs, &md.alcove[i], &b, CharacterMethod::MultiplicitySum)?;
                }
                closed += z;
            }
            closed /= md.empty_sum(g);
            let w = wlo_cs(&shadow(&links::vertical_points(g, cols)), md)?;
            vert = vert.max(rel_dev(w, closed));
        }
    }
    checks.push(CheckReport::new("vertical loops in genus 0..2: closed form", vert, tol.theorem));

    let mut empty: f64 = 0.0;
    for g in 0..3 {
        empty = empty.max((wlo_cs(&Shadow::empty(g), md)? - 1.0).norm());
    }
    checks.push(CheckReport::new("WLO of the empty link is 1", empty, tol.modular));
    let mut c1: f64 = 0.0;
    for g in 0..3 {
        let c = constants(md, g);
        c1 = c1.max(((c.c1 - c.c1_raw) / c.c1).abs());
    }
    checks.push(CheckReport::new("C1 closed form equals lattice sum", c1, tol.modular));

    let (mut thm, mut routes, mut base) = (0.0f64, 0.0f64, 0.0f64);
    for (_, sh) in corpus(md) {
        thm = thm.max(theorem_check(&sh, md)?.rel_dev);
        routes = routes.max(rel_dev(wlo_cs(&sh, md)?, wlo_shadow(md, &sh)?));
        let reference = crate::cssum::cs_state_sum(&sh, md)?;
        for f in 1..sh.faces.len() {
            base = base.max(rel_dev(crate::cssum::cs_state_sum(&sh.with_base_face(f), md)?, reference));
        }
    }
    checks.push(CheckReport::new("ST_CS = K^(2-2g) |X_L| on the corpus", thm, tol.theorem));
    checks.push(CheckReport::new("WLO_cs = WLO_shadow on the corpus", routes, tol.theorem));
    checks.push(CheckReport::new("ST_CS independent of the base face", base, tol.modular));

    // lemmas on small links
    let small = &colors[colors.len().min(2) - 1];
    let mut jump = true;
    let mut bij = true;
    let (mut det, mut fr) = (0.0f64, 0.0f64);
    for link in [links::separating_loop(1, 0, small, 2), links::nested_unknots(small, &md.alcove[0], small)] {
        let r = lemma_report(&shadow(&link), md)?;
        jump &= r.jump_exact;
        bij &= r.bijection;
        det = det.max(r.det_dev);
        fr = fr.max(r.framing_dev);
    }
    checks.push(exact("face-value jumps are alcove weights", jump));
    checks.push(CheckReport::new("det_reg folds to dim^chi", det, tol.modular));
    checks.push(CheckReport::new("framing phase folds to T^gleam", fr, tol.modular));
    checks.push(exact("valid fields biject onto admissible colorings", bij));
    let mut a = shifted_alcove_points(&md.rs, md.level);
    let mut b = alcove_weights(&md.rs, md.level)?;
    a.sort();
    b.sort();
    checks.push(exact("rho-shifted alcove points equal the alcove", a == b));

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        algebra: md.rs.spec.to_string(),
        level: md.level,
        exponent_sign: md.exponent_sign,
        checks,
        pass,
    })
}
