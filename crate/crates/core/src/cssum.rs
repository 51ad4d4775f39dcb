//! The torus-gauge Chern-Simons state sum of a link and its normalization.
//!
//! A summand is fixed by a base weight `alpha0` in `rho + alcove` and one
//! weight `alpha_j` of every loop color. Together they give a rational value
//! on every face, jumping by `alpha_j / (k + c_G)` across loop `j`. The sum
//! is taken over all such tuples whose face values avoid every affine wall.

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::LinearForm;
use crate::modular::{sin_pi, ModularData};
use crate::qracah::shifted_alcove_points;
use crate::repchar::{character_from_system, phase, WeightSystem};
use crate::shadowlink::{color_systems, shadow_state_sum, Shadow};
use crate::sum::CompensatedSum;
use crate::weight::{RatWeight, Weight};

/// One summand state: base weight, loop weights and the resulting face values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceField {
    pub alpha0: Weight,
    pub alphas: Vec<Weight>,
    /// `values[face] = (alpha0 + sum_j alpha_j shift_j(face)) / (k + c_G)`.
    pub values: Vec<RatWeight>,
    /// True iff no value pairs integrally with a root.
    pub valid: bool,
}

impl FaceField {
    /// The face coloring `(k + c_G) values - rho`.
    pub fn coloring(&self, md: &ModularData) -> Vec<Weight> {
        let kh = md.shifted_level();
        self.values
            .iter()
            .map(|v| &v.scaled_to_weight(kh).expect("values have denominator dividing k + c_G") - &md.rs.rho)
            .collect()
    }
}

/// `1` if face `f` lies in the positive region of loop `j`, relative to the base face.
fn shift(sh: &Shadow, f: usize, j: usize) -> i64 {
    let ind = |g: usize| (sh.side[g][j] == 1) as i64;
    ind(f) - ind(sh.base_face)
}

fn face_numerators(sh: &Shadow, alpha0: &Weight, alphas: &[Weight]) -> Vec<Vec<i64>> {
    (0..sh.faces.len())
        .map(|f| {
            let mut x = alpha0.0.clone();
            for (j, a) in alphas.iter().enumerate() {
                let s = shift(sh, f, j);
                if s != 0 {
                    for (c, ai) in x.iter_mut().zip(&a.0) {
                        *c += s * ai;
                    }
                }
            }
            x
        })
        .collect()
}

fn is_regular(forms: &[LinearForm], kh: i64, x: &[i64]) -> bool {
    forms.iter().all(|f| f.numer(x) % (f.den * kh) != 0)
}

pub fn face_field(sh: &Shadow, md: &ModularData, alpha0: &Weight, alphas: &[Weight]) -> Result<FaceField> {
    let kh = md.shifted_level();
    let lam = alpha0 - &md.rs.rho;
    if alpha0.rank() != md.rs.rank() || !md.contains(&lam) {
        return Err(Error::BadAlpha0(alpha0.0.clone()));
    }
    if alphas.len() != sh.loops.len() {
        return Err(Error::DimensionMismatch { expected: sh.loops.len(), got: alphas.len() });
    }
    let (loop_ws, _) = color_systems(md, sh)?;
    for (j, (a, ws)) in alphas.iter().zip(&loop_ws).enumerate() {
        if ws.multiplicity(a) == 0 {
            return Err(Error::AlphaNotInSupport { loop_index: j, alpha: a.0.clone() });
        }
    }
    let nums = face_numerators(sh, alpha0, alphas);
    let valid = nums.iter().all(|x| is_regular(md.rs.root_forms(), kh, x));
    Ok(FaceField {
        alpha0: alpha0.clone(),
        alphas: alphas.to_vec(),
        values: nums.into_iter().map(|x| RatWeight::new(x, kh)).collect(),
        valid,
    })
}

/// `prod_Y prod_beta (2 sin(pi (beta, values[Y])))^chi(Y)`, signed.
pub fn det_reg(sh: &Shadow, md: &ModularData, field: &FaceField) -> Result<f64> {
    if !field.valid {
        return Err(Error::InvalidField);
    }
    let mut p = 1.0;
    for (face, v) in sh.faces.iter().zip(&field.values) {
        let mut q = 1.0;
        for f in md.rs.root_forms() {
            q *= 2.0 * sin_pi(f.eval_rat(v));
        }
        p *= q.powi(face.euler as i32);
    }
    Ok(p)
}

/// `prod_j exp(2 pi i winding_j (alpha_j, (values[Y+_j] + values[Y-_j]) / 2))`.
pub fn framing_phase(sh: &Shadow, md: &ModularData, field: &FaceField) -> Result<Complex64> {
    if !field.valid {
        return Err(Error::InvalidField);
    }
    let mut z = Complex64::new(1.0, 0.0);
    for (l, a) in sh.loops.iter().zip(&field.alphas) {
        let a = RatWeight::from_weight(a);
        let q = md.rs.pair_rat(&a, &field.values[l.plus_face]) + md.rs.pair_rat(&a, &field.values[l.minus_face]);
        z *= phase(q * Rational64::new(l.winding, 2));
    }
    Ok(z)
}

/// `K` and `C1` for a genus, with `C1` also computed from its defining lattice sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub k: f64,
    pub c1: f64,
    pub c1_raw: f64,
}

pub fn constants(md: &ModularData, genus: u32) -> Constants {
    let kh = md.shifted_level();
    let rho = &md.rs.rho;
    let k: f64 = md
        .rs
        .root_forms()
        .iter()
        .map(|f| 2.0 * sin_pi(Rational64::new(f.numer(&rho.0), f.den * kh)))
        .product();
    let e = 2 - 2 * genus as i32;
    let c1 = 1.0 / (k.powi(e) * md.empty_sum(genus));
    let raw: f64 = shifted_alcove_points(&md.rs, md.level)
        .iter()
        .map(|l| {
            let x = l + rho;
            let d: f64 = md
                .rs
                .root_forms()
                .iter()
                .map(|f| 4.0 * sin_pi(Rational64::new(f.numer(&x.0), f.den * kh)).powi(2))
                .product();
            d.powi(1 - genus as i32)
        })
        .sum();
    Constants { k, c1, c1_raw: 1.0 / raw }
}

/// Precomputed data shared by every summand.
struct Prepared<'a> {
    sh: &'a Shadow,
    md: &'a ModularData,
    kh: i64,
    /// Per loop: support weights, multiplicities and `(alpha, .)` forms.
    supports: Vec<Vec<(Weight, i64, LinearForm)>>,
    vert_ws: Vec<WeightSystem>,
    /// `shifts[f][j]`.
    shifts: Vec<Vec<i64>>,
    alpha0s: Vec<Weight>,
}

impl<'a> Prepared<'a> {
    fn new(sh: &'a Shadow, md: &'a ModularData) -> Result<Self> {
        for l in &sh.loops {
            crate::shadowlink::color_index(md, &l.color)?;
        }
        if sh.vertical.iter().any(|v| sh.faces.get(v.face).is_none()) {
            return Err(Error::InvalidField);
        }
        let (loop_ws, vert_ws) = color_systems(md, sh)?;
        let supports = loop_ws
            .iter()
            .map(|ws| ws.iter().map(|(w, m)| (w.clone(), m, md.rs.form_of(w))).collect())
            .collect();
        let shifts = (0..sh.faces.len())
            .map(|f| (0..sh.loops.len()).map(|j| shift(sh, f, j)).collect())
            .collect();
        let alpha0s = md.alcove.iter().map(|l| l + &md.rs.rho).collect();
        Ok(Prepared { sh, md, kh: md.shifted_level(), supports, vert_ws, shifts, alpha0s })
    }

    /// Sum over loop weights for a fixed `alpha0`.
    fn partial(&self, a0: usize) -> CompensatedSum {
        let mut acc = CompensatedSum::new();
        let nl = self.sh.loops.len();
        let mut pick = vec![0usize; nl];
        loop {
            if let Some(z) = self.summand(a0, &pick) {
                acc.add(z);
            }
            let mut j = 0;
            while j < nl {
                pick[j] += 1;
                if pick[j] < self.supports[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == nl {
                break;
            }
        }
        acc
    }

    fn summand(&self, a0: usize, pick: &[usize]) -> Option<Complex64> {
        let rs = &self.md.rs;
        let forms = rs.root_forms();
        let nums: Vec<Vec<i64>> = self
            .shifts
            .iter()
            .map(|row| {
                let mut x = self.alpha0s[a0].0.clone();
                for (j, &s) in row.iter().enumerate() {
                    if s != 0 {
                        for (c, ai) in x.iter_mut().zip(&self.supports[j][pick[j]].0 .0) {
                            *c += s * ai;
                        }
                    }
                }
                x
            })
            .collect();
        if !nums.iter().all(|x| is_regular(forms, self.kh, x)) {
            return None;
        }
        let mut mult = 1i64;
        for (j, &p) in pick.iter().enumerate() {
            mult *= self.supports[j][p].1;
        }
        let mut det = 1.0;
        for (face, x) in self.sh.faces.iter().zip(&nums) {
            let mut q = 1.0;
            for f in forms {
                q *= 2.0 * sin_pi(Rational64::new(f.numer(x), f.den * self.kh));
            }
            det *= q.powi(face.euler as i32);
        }
        let mut z = Complex64::new(mult as f64 * det, 0.0);
        for (j, l) in self.sh.loops.iter().enumerate() {
            let form = &self.supports[j][pick[j]].2;
            let s: Vec<i64> = nums[l.plus_face].iter().zip(&nums[l.minus_face]).map(|(a, b)| a + b).collect();
            z *= phase(Rational64::new(l.winding * form.numer(&s), 2 * form.den * self.kh));
        }
        for (v, ws) in self.sh.vertical.iter().zip(&self.vert_ws) {
            let b = RatWeight::new(nums[v.face].clone(), self.kh);
            z *= character_from_system(rs, ws, &b);
        }
        Some(z)
    }
}

/// `ST_CS(L)`.
pub fn cs_state_sum(sh: &Shadow, md: &ModularData) -> Result<Complex64> {
    let prep = Prepared::new(sh, md)?;
    let parts = crate::par::map_indices(prep.alpha0s.len(), |a0| prep.partial(a0));
    let mut total = CompensatedSum::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.value())
}

/// `WLO(L) = C1 ST_CS(L)`.
pub fn wlo_cs(sh: &Shadow, md: &ModularData) -> Result<Complex64> {
    Ok(cs_state_sum(sh, md)? * constants(md, sh.genus).c1)
}

/// Both sides of `ST_CS(L) = K^{2-2g} |X_L|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremCheck {
    pub cs: Complex64,
    pub shadow_scaled: Complex64,
    pub rel_dev: f64,
}

pub fn theorem_check(sh: &Shadow, md: &ModularData) -> Result<TheoremCheck> {
    let cs = cs_state_sum(sh, md)?;
    let k = constants(md, sh.genus).k;
    let shadow_scaled = shadow_state_sum(md, sh)? * k.powi(2 - 2 * sh.genus as i32);
    Ok(TheoremCheck { cs, shadow_scaled, rel_dev: rel_dev(cs, shadow_scaled) })
}

/// Values below this magnitude are compared absolutely; sums that vanish
/// exactly come out near 1e-12 after cancellation.
pub const ZERO_FLOOR: f64 = 1e-9;

/// `|a - b| / max(|a|, |b|)`, or the absolute gap when both are below [`ZERO_FLOOR`].
pub fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < ZERO_FLOOR {
        (a - b).norm()
    } else {
        (a - b).norm() / scale
    }
}

/// Every face field of a link, in enumeration order, including invalid ones.
pub fn all_fields(sh: &Shadow, md: &ModularData) -> Result<Vec<FaceField>> {
    let prep = Prepared::new(sh, md)?;
    let mut out = Vec::new();
    for a0 in &prep.alpha0s {
        let nl = sh.loops.len();
        let mut pick = vec![0usize; nl];
        loop {
            let alphas: Vec<Weight> = pick.iter().enumerate().map(|(j, &p)| prep.supports[j][p].0.clone()).collect();
            out.push(face_field(sh, md, a0, &alphas)?);
            let mut j = 0;
            while j < nl {
                pick[j] += 1;
                if pick[j] < prep.supports[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == nl {
                break;
            }
        }
    }
    Ok(out)
}

/// Results of the per-field identities on one link.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub fields: usize,
    pub valid_fields: usize,
    /// Adjacent face colors differ by the loop weight, exactly.
    pub jump_exact: bool,
    /// Largest relative gap between the determinant and `K^{2-2g} prod sdim^chi`.
    pub det_dev: f64,
    /// Largest gap between the framing phase and `prod v^gleam`.
    pub framing_dev: f64,
    /// Valid fields map injectively onto the brute-force set of admissible colorings.
    pub bijection: bool,
}

pub fn lemma_report(sh: &Shadow, md: &ModularData) -> Result<LemmaReport> {
    let fields = all_fields(sh, md)?;
    let k = constants(md, sh.genus).k;
    let kpow = k.powi(2 - 2 * sh.genus as i32);
    let mut jump_exact = true;
    let mut det_dev: f64 = 0.0;
    let mut framing_dev: f64 = 0.0;
    let mut images: BTreeSet<Vec<Weight>> = BTreeSet::new();
    let mut injective = true;
    let mut valid_fields = 0;
    for fld in &fields {
        let phi = fld.coloring(md);
        for (l, a) in sh.loops.iter().zip(&fld.alphas) {
            if &(&phi[l.plus_face] - &phi[l.minus_face]) != a {
                jump_exact = false;
            }
        }
        if !fld.valid {
            continue;
        }
        valid_fields += 1;
        let d = det_reg(sh, md, fld)?;
        let mut expect = kpow;
        for (face, p) in sh.faces.iter().zip(&phi) {
            expect *= md.signed_qdim(p)?.powi(face.euler as i32);
        }
        det_dev = det_dev.max(((d - expect) / expect).abs());
        let fr = framing_phase(sh, md, fld)?;
        let mut v = Complex64::new(1.0, 0.0);
        for (g, p) in sh.gleams.iter().zip(&phi) {
            v *= md.twist(p).powi(*g as i32);
        }
        framing_dev = framing_dev.max((fr - v).norm());
        if !images.insert(phi) {
            injective = false;
        }
    }
    let bijection = injective && images == admissible_colorings(sh, md)?;
    Ok(LemmaReport { fields: fields.len(), valid_fields, jump_exact, det_dev, framing_dev, bijection })
}

/// Brute force: colorings `phi` with `phi(base)` in the alcove, every
/// `phi(Y) + rho` off the affine walls, and `phi(Y+_j) - phi(Y-_j)` a weight
/// of the color of loop `j`. Faces are scanned over a box of lattice points.
pub fn admissible_colorings(sh: &Shadow, md: &ModularData) -> Result<BTreeSet<Vec<Weight>>> {
    let (loop_ws, _) = color_systems(md, sh)?;
    let kh = md.shifted_level();
    let r = md.rs.rank();
    let reach: Vec<i64> = (0..r)
        .map(|i| {
            loop_ws
                .iter()
                .map(|ws| ws.mults.keys().map(|w| w.0[i].abs()).max().unwrap_or(0))
                .sum::<i64>()
        })
        .collect();
    let lo: Vec<i64> = reach.iter().map(|x| -x).collect();
    let hi: Vec<i64> = reach.iter().map(|x| md.level + x).collect();
    let mut box_pts: Vec<Weight> = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        let w = Weight(cur.clone());
        if is_regular(md.rs.root_forms(), kh, &(&w + &md.rs.rho).0) {
            box_pts.push(w);
        }
        for i in 0..r {
            cur[i] += 1;
            if cur[i] <= hi[i] {
                continue 'scan;
            }
            cur[i] = lo[i];
        }
        break;
    }

    let nf = sh.faces.len();
    let mut out = BTreeSet::new();
    let mut phi: Vec<Option<Weight>> = vec![None; nf];
    fn rec(
        f: usize,
        sh: &Shadow,
        md: &ModularData,
        pts: &[Weight],
        ws: &[WeightSystem],
        phi: &mut Vec<Option<Weight>>,
        out: &mut BTreeSet<Vec<Weight>>,
    ) {
        if f == phi.len() {
            out.insert(phi.iter().map(|p| p.clone().expect("assigned")).collect());
            return;
        }
        for p in pts {
            if f == sh.base_face && !md.contains(p) {
                continue;
            }
            phi[f] = Some(p.clone());
            let ok = sh.loops.iter().zip(ws).all(|(l, w)| {
                match (&phi[l.plus_face], &phi[l.minus_face]) {
                    (Some(a), Some(b)) if l.plus_face.max(l.minus_face) == f => w.multiplicity(&(a - b)) > 0,
                    _ => true,
                }
            });
            if ok {
                rec(f + 1, sh, md, pts, ws, phi, out);
            }
        }
        phi[f] = None;
    }
    rec(0, sh, md, &box_pts, &loop_ws, &mut phi, &mut out);
    Ok(out)
}

/// Folds every valid field face by face and accumulates, per resulting alcove
/// coloring, the multiplicity weight times `prod_Y sgn_Y^chi(Y)`.
pub fn folded_coloring_weights(sh: &Shadow, md: &ModularData) -> Result<HashMap<Vec<Weight>, i64>> {
    let (loop_ws, _) = color_systems(md, sh)?;
    let mut out = HashMap::new();
    for fld in all_fields(sh, md)? {
        if !fld.valid {
            continue;
        }
        let mut sign: i64 = fld.alphas.iter().zip(&loop_ws).map(|(a, ws)| ws.multiplicity(a)).product();
        let mut key = Vec::new();
        for (v, face) in fld.values.iter().zip(&sh.faces) {
            let f = crate::qracah::fold_to_alcove(&md.rs, v);
            sign *= f.sign.pow(face.euler.unsigned_abs() as u32);
            let p = f.folded.expect("valid fields fold to the interior");
            key.push(&p.scaled_to_weight(md.shifted_level()).expect("integral") - &md.rs.rho);
        }
        *out.entry(key).or_insert(0) += sign;
    }
    Ok(out)
}
