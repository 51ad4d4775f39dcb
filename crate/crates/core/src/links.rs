//! Ready-made link documents used by the verification suite, the command-line
//! front end and the browser demo.

use std::collections::BTreeMap;

use crate::shadowlink::{ColoredLink, FaceSpec, LoopSpec, ModelKind, Surface, VerticalSpec};
use crate::weight::Weight;

fn loop_spec(id: &str, color: &Weight, winding: i64, inside_is_plus: bool, parent: Option<&str>) -> LoopSpec {
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

fn vertical(at: Option<&str>, color: &Weight) -> VerticalSpec {
    VerticalSpec { at: at.map(String::from), color: color.clone(), winding: 1 }
}

/// Three disjoint unknots in the sphere, each winding once.
pub fn three_unknots(l: &Weight, m: &Weight, n: &Weight) -> ColoredLink {
    ColoredLink {
        loops: vec![
            loop_spec("l", l, 1, true, None),
            loop_spec("m", m, 1, true, None),
            loop_spec("n", n, 1, true, None),
        ],
        ..Default::default()
    }
}

/// Like [`three_unknots`], with the third loop nested inside the first.
pub fn nested_unknots(l: &Weight, m: &Weight, n: &Weight) -> ColoredLink {
    ColoredLink {
        loops: vec![
            loop_spec("l", l, 1, true, None),
            loop_spec("m", m, 1, true, None),
            loop_spec("n", n, 1, true, Some("l")),
        ],
        ..Default::default()
    }
}

/// A loop colored `l` around a vertical loop colored `n`, with a second
/// vertical loop colored `m` outside.
pub fn loop_around_vertical(l: &Weight, m: &Weight, n: &Weight) -> ColoredLink {
    ColoredLink {
        loops: vec![loop_spec("l", l, 1, true, None)],
        vertical: vec![vertical(Some("l"), n), vertical(None, m)],
        ..Default::default()
    }
}

/// Vertical loops only, all over one face of a closed genus-`genus` surface.
pub fn vertical_points(genus: u32, colors: &[Weight]) -> ColoredLink {
    ColoredLink {
        surface: Surface { genus },
        model: ModelKind::Explicit,
        faces: Some(vec![FaceSpec { id: "sigma".into(), euler: 2 - 2 * genus as i64 }]),
        sides: Some(BTreeMap::new()),
        vertical: colors.iter().map(|c| vertical(Some("sigma"), c)).collect(),
        ..Default::default()
    }
}

/// One separating loop on a genus-`genus` surface. The plus side has genus
/// `split` (a disk when `split = 0`), the minus side the rest.
pub fn separating_loop(genus: u32, split: u32, color: &Weight, winding: i64) -> ColoredLink {
    assert!(split <= genus);
    let e_plus = 1 - 2 * split as i64;
    let e_minus = 1 - 2 * (genus - split) as i64;
    let sides = BTreeMap::from([("l".to_string(), BTreeMap::from([("p".to_string(), 1), ("q".to_string(), -1)]))]);
    ColoredLink {
        surface: Surface { genus },
        model: ModelKind::Explicit,
        faces: Some(vec![FaceSpec { id: "p".into(), euler: e_plus }, FaceSpec { id: "q".into(), euler: e_minus }]),
        sides: Some(sides),
        loops: vec![LoopSpec {
            plus_face: Some("p".into()),
            minus_face: Some("q".into()),
            ..loop_spec("l", color, winding, true, None)
        }],
        ..Default::default()
    }
}

/// Deterministic nesting forest: loop `i` takes color `colors[i % len]`,
/// winding in `[-2, 2]`, and a parent chosen by `seed`.
pub fn forest(seed: u64, n_loops: usize, colors: &[Weight]) -> ColoredLink {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = |m: u64| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 33) % m
    };
    let loops = (0..n_loops)
        .map(|i| {
            let parent = if i > 0 && next(2) == 1 { Some(format!("L{}", next(i as u64))) } else { None };
            let winding = next(5) as i64 - 2;
            let plus = next(3) != 0;
            loop_spec(&format!("L{i}"), &colors[i % colors.len()], winding, plus, parent.as_deref())
        })
        .collect();
    ColoredLink { loops, ..Default::default() }
}
