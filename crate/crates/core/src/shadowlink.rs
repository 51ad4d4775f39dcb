//! Colored links without double points in a surface times a circle, their
//! combinatorial shadows, and the shadow state sum.
//!
//! A link enters only through its shadow: the faces of the complement of the
//! projected loops, their Euler characteristics, which side of each loop a
//! face lies on, and the integer gleams. Two input models are accepted. The
//! forest model describes loops on the sphere by their nesting; everything is
//! derived from it. The explicit model lists faces, Euler characteristics and
//! the side matrix directly and works in any genus.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::ModularData;
use crate::qracah::racah_with_system;
use crate::repchar::{character_from_system, weight_multiplicities, WeightSystem};
use crate::sum::CompensatedSum;
use crate::weight::Weight;

/// Face id of the unbounded face in the forest model.
pub const OUTER: &str = "outer";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Forest,
    Explicit,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    #[serde(default)]
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub id: String,
    pub color: Weight,
    #[serde(default = "one")]
    pub winding: i64,
    #[serde(default = "yes")]
    pub inside_is_plus: bool,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_face: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_face: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub id: String,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalSpec {
    /// Face id, or the id of the innermost loop enclosing the point (forest model).
    #[serde(default)]
    pub at: Option<String>,
    pub color: Weight,
    #[serde(default = "one")]
    pub winding: i64,
}

fn one() -> i64 {
    1
}

fn yes() -> bool {
    true
}

/// A parsed link document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredLink {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(default)]
    pub surface: Surface,
    #[serde(default)]
    pub model: ModelKind,
    #[serde(default)]
    pub loops: Vec<LoopSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceSpec>>,
    /// `sides[loop][face]` is +1 if the face lies in the positive region of the loop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<BTreeMap<String, BTreeMap<String, i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_face: Option<String>,
    #[serde(default)]
    pub vertical: Vec<VerticalSpec>,
}

impl ColoredLink {
    pub fn genus(&self) -> u32 {
        self.surface.genus
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("link documents serialize")
    }
}

/// Parses and validates a link document.
pub fn parse_link(doc: &str) -> Result<ColoredLink> {
    let link: ColoredLink = serde_json::from_str(doc).map_err(|e| Error::Parse(e.to_string()))?;
    validate_link(&link)?;
    Ok(link)
}

fn validate_link(link: &ColoredLink) -> Result<()> {
    let mut ids = HashSet::new();
    for l in &link.loops {
        if !ids.insert(l.id.as_str()) {
            return Err(Error::DuplicateId(l.id.clone()));
        }
    }
    match link.model {
        ModelKind::Forest => {
            if link.genus() != 0 {
                return Err(Error::ForestGenusMismatch(link.genus()));
            }
            if ids.contains(OUTER) {
                return Err(Error::DuplicateId(OUTER.to_string()));
            }
            for l in &link.loops {
                if let Some(p) = &l.parent {
                    if !ids.contains(p.as_str()) {
                        return Err(Error::Parse(format!("loop {:?} has unknown parent {p:?}", l.id)));
                    }
                }
            }
            forest_parents(&link.loops)?;
        }
        ModelKind::Explicit => {
            let faces = link
                .faces
                .as_ref()
                .ok_or_else(|| Error::Parse("explicit model needs \"faces\"".into()))?;
            let mut fids = HashSet::new();
            for f in faces {
                if !fids.insert(f.id.as_str()) {
                    return Err(Error::DuplicateId(f.id.clone()));
                }
            }
            if link.sides.is_none() {
                return Err(Error::Parse("explicit model needs \"sides\"".into()));
            }
            for l in &link.loops {
                if l.plus_face.is_none() || l.minus_face.is_none() {
                    return Err(Error::Parse(format!(
                        "loop {:?} needs \"plus_face\" and \"minus_face\" in the explicit model",
                        l.id
                    )));
                }
            }
        }
    }
    for v in &link.vertical {
        if v.winding != 1 {
            return Err(Error::VerticalWinding(v.winding));
        }
    }
    Ok(())
}

/// Parent index of every loop; rejects cycles.
fn forest_parents(loops: &[LoopSpec]) -> Result<Vec<Option<usize>>> {
    let index: HashMap<&str, usize> = loops.iter().enumerate().map(|(i, l)| (l.id.as_str(), i)).collect();
    let parents: Vec<Option<usize>> = loops
        .iter()
        .map(|l| l.parent.as_ref().and_then(|p| index.get(p.as_str()).copied()))
        .collect();
    for start in 0..loops.len() {
        let mut cur = parents[start];
        let mut steps = 0;
        while let Some(p) = cur {
            steps += 1;
            if steps > loops.len() {
                return Err(Error::Parse(format!("nesting of loop {:?} is cyclic", loops[start].id)));
            }
            cur = parents[p];
        }
    }
    Ok(parents)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: String,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowLoop {
    pub id: String,
    pub color: Weight,
    pub winding: i64,
    pub plus_face: usize,
    pub minus_face: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerticalPoint {
    pub face: usize,
    pub color: Weight,
}

/// The combinatorial shadow of a link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shadow {
    pub genus: u32,
    pub faces: Vec<Face>,
    pub base_face: usize,
    pub loops: Vec<ShadowLoop>,
    /// `side[face][loop]` in {+1, -1}.
    pub side: Vec<Vec<i8>>,
    pub gleams: Vec<i64>,
    pub vertical: Vec<VerticalPoint>,
}

impl Shadow {
    /// The shadow of the empty link: one face covering the surface.
    pub fn empty(genus: u32) -> Shadow {
        Shadow {
            genus,
            faces: vec![Face { id: OUTER.into(), euler: 2 - 2 * genus as i64 }],
            base_face: 0,
            loops: Vec::new(),
            side: vec![Vec::new()],
            gleams: vec![0],
            vertical: Vec::new(),
        }
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    /// Same shadow with another face holding the base point.
    pub fn with_base_face(&self, face: usize) -> Shadow {
        let mut s = self.clone();
        s.base_face = face;
        s
    }

    /// Removes loop `j`, merging its two adjacent faces into its plus face.
    pub fn remove_loop(&self, j: usize) -> Shadow {
        let keep = self.loops[j].plus_face;
        let drop = self.loops[j].minus_face;
        let remap = |f: usize| -> usize {
            let f = if f == drop { keep } else { f };
            if f > drop {
                f - 1
            } else {
                f
            }
        };
        let mut faces = self.faces.clone();
        faces[keep].euler += faces[drop].euler;
        faces.remove(drop);
        let mut side = self.side.clone();
        side.remove(drop);
        for row in side.iter_mut() {
            row.remove(j);
        }
        let loops: Vec<ShadowLoop> = self
            .loops
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, l)| ShadowLoop {
                plus_face: remap(l.plus_face),
                minus_face: remap(l.minus_face),
                ..l.clone()
            })
            .collect();
        let vertical = self
            .vertical
            .iter()
            .map(|v| VerticalPoint { face: remap(v.face), color: v.color.clone() })
            .collect();
        let mut s = Shadow {
            genus: self.genus,
            faces,
            base_face: remap(self.base_face),
            loops,
            side,
            gleams: Vec::new(),
            vertical,
        };
        s.gleams = compute_gleams(&s);
        s
    }

    pub fn euler_sum(&self) -> i64 {
        self.faces.iter().map(|f| f.euler).sum()
    }

    /// Checks the Euler sum, the side data and the gleam formula.
    pub fn validate(&self) -> Result<()> {
        let expected = 2 - 2 * self.genus as i64;
        let got = self.euler_sum();
        if got != expected {
            return Err(Error::EulerMismatch { got, expected });
        }
        for (j, l) in self.loops.iter().enumerate() {
            if l.plus_face == l.minus_face {
                return Err(Error::SideInconsistent(format!("loop {:?} has the same face on both sides", l.id)));
            }
            if self.side[l.plus_face][j] != 1 || self.side[l.minus_face][j] != -1 {
                return Err(Error::SideInconsistent(format!(
                    "loop {:?}: plus face must have side +1 and minus face side -1",
                    l.id
                )));
            }
            for (i, other) in self.loops.iter().enumerate() {
                if i != j && self.side[l.plus_face][i] != self.side[l.minus_face][i] {
                    return Err(Error::SideInconsistent(format!(
                        "faces next to loop {:?} lie on different sides of loop {:?}",
                        l.id, other.id
                    )));
                }
            }
        }
        if self.gleams != compute_gleams(self) {
            return Err(Error::SideInconsistent("gleams do not match the side data".into()));
        }
        Ok(())
    }
}

/// `gleam(Y) = sum over loops bounding Y of winding * side(Y)`.
pub fn compute_gleams(sh: &Shadow) -> Vec<i64> {
    let mut g = vec![0i64; sh.faces.len()];
    for (j, l) in sh.loops.iter().enumerate() {
        for f in [l.plus_face, l.minus_face] {
            g[f] += l.winding * sh.side[f][j] as i64;
        }
    }
    g
}

/// Derives (forest) or validates (explicit) the shadow of a link.
pub fn derive_shadow(link: &ColoredLink) -> Result<Shadow> {
    validate_link(link)?;
    let mut sh = match link.model {
        ModelKind::Forest => forest_shadow(link)?,
        ModelKind::Explicit => explicit_shadow(link)?,
    };
    sh.gleams = compute_gleams(&sh);
    if let Some(b) = &link.base_face {
        sh.base_face = sh
            .face_index(b)
            .ok_or_else(|| Error::Parse(format!("unknown base face {b:?}")))?;
    }
    sh.vertical = link
        .vertical
        .iter()
        .map(|v| {
            let at = v.at.as_deref().unwrap_or(OUTER);
            let face = sh.face_index(at).ok_or_else(|| Error::Parse(format!("unknown vertical location {at:?}")))?;
            Ok(VerticalPoint { face, color: v.color.clone() })
        })
        .collect::<Result<_>>()?;
    sh.validate()?;
    Ok(sh)
}

fn forest_shadow(link: &ColoredLink) -> Result<Shadow> {
    let n = link.loops.len();
    let parents = forest_parents(&link.loops)?;
    let mut faces = vec![Face { id: OUTER.into(), euler: 2 }];
    faces.extend(link.loops.iter().map(|l| Face { id: l.id.clone(), euler: 1 }));
    // every loop removes one from the face that directly encloses it
    for p in &parents {
        faces[p.map_or(0, |p| p + 1)].euler -= 1;
    }
    let encloses = |j: usize, face: usize| -> bool {
        if face == 0 {
            return false;
        }
        let mut cur = Some(face - 1);
        while let Some(c) = cur {
            if c == j {
                return true;
            }
            cur = parents[c];
        }
        false
    };
    let side: Vec<Vec<i8>> = (0..=n)
        .map(|f| {
            link.loops
                .iter()
                .enumerate()
                .map(|(j, l)| if encloses(j, f) == l.inside_is_plus { 1 } else { -1 })
                .collect()
        })
        .collect();
    let loops = link
        .loops
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let inside = j + 1;
            let outside = parents[j].map_or(0, |p| p + 1);
            let (plus_face, minus_face) = if l.inside_is_plus { (inside, outside) } else { (outside, inside) };
            ShadowLoop { id: l.id.clone(), color: l.color.clone(), winding: l.winding, plus_face, minus_face }
        })
        .collect();
    Ok(Shadow { genus: 0, faces, base_face: 0, loops, side, gleams: Vec::new(), vertical: Vec::new() })
}

fn explicit_shadow(link: &ColoredLink) -> Result<Shadow> {
    let specs = link.faces.as_ref().expect("validated");
    let sides = link.sides.as_ref().expect("validated");
    let faces: Vec<Face> = specs.iter().map(|f| Face { id: f.id.clone(), euler: f.euler }).collect();
    let fidx: HashMap<&str, usize> = specs.iter().enumerate().map(|(i, f)| (f.id.as_str(), i)).collect();
    let face_of = |id: &str| -> Result<usize> {
        fidx.get(id).copied().ok_or_else(|| Error::Parse(format!("unknown face {id:?}")))
    };
    let mut side = vec![vec![0i8; link.loops.len()]; faces.len()];
    for (j, l) in link.loops.iter().enumerate() {
        let row = sides
            .get(&l.id)
            .ok_or_else(|| Error::SideInconsistent(format!("no side data for loop {:?}", l.id)))?;
        for (fid, &s) in row {
            let f = face_of(fid)?;
            if s != 1 && s != -1 {
                return Err(Error::SideInconsistent(format!("side of face {fid:?} for loop {:?} is {s}", l.id)));
            }
            side[f][j] = s as i8;
        }
        if let Some(f) = side.iter().position(|r| r[j] == 0) {
            return Err(Error::SideInconsistent(format!(
                "loop {:?} has no side entry for face {:?}",
                l.id, faces[f].id
            )));
        }
    }
    for key in sides.keys() {
        if !link.loops.iter().any(|l| &l.id == key) {
            return Err(Error::Parse(format!("side data for unknown loop {key:?}")));
        }
    }
    let loops = link
        .loops
        .iter()
        .map(|l| {
            Ok(ShadowLoop {
                id: l.id.clone(),
                color: l.color.clone(),
                winding: l.winding,
                plus_face: face_of(l.plus_face.as_deref().expect("validated"))?,
                minus_face: face_of(l.minus_face.as_deref().expect("validated"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Shadow { genus: link.genus(), faces, base_face: 0, loops, side, gleams: Vec::new(), vertical: Vec::new() })
}

/// Where the fusion factor of each loop comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FusionSource {
    /// Exact quantum Racah integers.
    #[default]
    Racah,
    /// Floating Verlinde values `N^{minus}_{gamma plus}`.
    Verlinde,
}

/// Checks that `w` is an alcove weight and returns its index.
pub(crate) fn color_index(md: &ModularData, w: &Weight) -> Result<usize> {
    md.index_of(w).map_err(|_| Error::ColorNotInAlcove(w.0.clone()))
}

/// Weight systems of the loop and vertical colors, in that order.
pub(crate) fn color_systems(md: &ModularData, sh: &Shadow) -> Result<(Vec<WeightSystem>, Vec<WeightSystem>)> {
    let ws = |w: &Weight| -> Result<WeightSystem> {
        color_index(md, w)?;
        weight_multiplicities(&md.rs, w)
    };
    let loops = sh.loops.iter().map(|l| ws(&l.color)).collect::<Result<_>>()?;
    let vert = sh.vertical.iter().map(|v| ws(&v.color)).collect::<Result<_>>()?;
    Ok((loops, vert))
}

/// `|X_L|`: sum over colorings of the faces by alcove weights.
pub fn shadow_state_sum(md: &ModularData, sh: &Shadow) -> Result<Complex64> {
    shadow_state_sum_with(md, sh, FusionSource::Racah)
}

pub fn shadow_state_sum_with(md: &ModularData, sh: &Shadow, source: FusionSource) -> Result<Complex64> {
    let n = md.len();
    let nf = sh.faces.len();
    let (loop_ws, vert_ws) = color_systems(md, sh)?;
    let kh = md.shifted_level();

    // per-face weight of each color: dim^chi * v^gleam * vertical characters
    let mut face_w = vec![vec![Complex64::new(0.0, 0.0); n]; nf];
    for (f, face) in sh.faces.iter().enumerate() {
        for c in 0..n {
            let mut z = Complex64::new(md.qdim_at(c).powi(face.euler as i32), 0.0) * md.t[c].powi(sh.gleams[f] as i32);
            for (v, ws) in sh.vertical.iter().zip(&vert_ws) {
                if v.face == f {
                    let b = (&md.alcove[c] + &md.rs.rho).over(kh);
                    z *= character_from_system(&md.rs, ws, &b);
                }
            }
            face_w[f][c] = z;
        }
    }

    // fusion factor of loop j, indexed [plus color][minus color]
    let fusion: Vec<Vec<f64>> = sh
        .loops
        .iter()
        .zip(&loop_ws)
        .map(|(l, ws)| {
            let g = md.index_of(&l.color).expect("checked");
            let mut t = vec![0.0; n * n];
            for p in 0..n {
                for m in 0..n {
                    t[p * n + m] = match source {
                        FusionSource::Racah => racah_with_system(md, ws, &md.alcove[p], &md.alcove[m]) as f64,
                        FusionSource::Verlinde => md.verlinde_raw(md.conj[m], g, p).re,
                    };
                }
            }
            t
        })
        .collect();

    let order = face_order(sh);
    let mut pos = vec![0usize; nf];
    for (i, &f) in order.iter().enumerate() {
        pos[f] = i;
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (j, l) in sh.loops.iter().enumerate() {
        checks[pos[l.plus_face].max(pos[l.minus_face])].push(j);
    }

    let ctx = Dfs { n, sh, order: &order, checks: &checks, face_w: &face_w, fusion: &fusion };
    let parts = crate::par::map_indices(n, |c0| {
        let mut colors = vec![usize::MAX; nf];
        let mut acc = CompensatedSum::new();
        colors[order[0]] = c0;
        ctx.descend(0, Complex64::new(1.0, 0.0), &mut colors, &mut acc);
        acc
    });
    let mut total = CompensatedSum::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.value())
}

/// Breadth-first order of faces along loop adjacency, starting at face 0.
fn face_order(sh: &Shadow) -> Vec<usize> {
    let nf = sh.faces.len();
    let mut adj = vec![Vec::new(); nf];
    for l in &sh.loops {
        adj[l.plus_face].push(l.minus_face);
        adj[l.minus_face].push(l.plus_face);
    }
    let mut seen = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    for start in 0..nf {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(f) = q.pop_front() {
            order.push(f);
            for &g in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    q.push_back(g);
                }
            }
        }
    }
    order
}

struct Dfs<'a> {
    n: usize,
    sh: &'a Shadow,
    order: &'a [usize],
    checks: &'a [Vec<usize>],
    face_w: &'a [Vec<Complex64>],
    fusion: &'a [Vec<f64>],
}

impl Dfs<'_> {
    /// Face `order[depth]` already has its color; apply its factors and recurse.
    fn descend(&self, depth: usize, partial: Complex64, colors: &mut [usize], acc: &mut CompensatedSum) {
        let f = self.order[depth];
        let mut z = partial * self.face_w[f][colors[f]];
        for &j in &self.checks[depth] {
            let l = &self.sh.loops[j];
            let v = self.fusion[j][colors[l.plus_face] * self.n + colors[l.minus_face]];
            if v == 0.0 {
                return;
            }
            z *= v;
        }
        if depth + 1 == self.order.len() {
            acc.add(z);
            return;
        }
        let next = self.order[depth + 1];
        for c in 0..self.n {
            colors[next] = c;
            self.descend(depth + 1, z, colors, acc);
        }
        colors[next] = usize::MAX;
    }
}

/// `WLO(L) = |X_L| / |X_empty|` in the same genus.
pub fn wlo_shadow(md: &ModularData, sh: &Shadow) -> Result<Complex64> {
    Ok(shadow_state_sum(md, sh)? / shadow_state_sum(md, &Shadow::empty(sh.genus))?)
}
