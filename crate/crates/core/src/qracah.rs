//! Exact folding into the fundamental alcove and the quantum Racah formula.
//!
//! The fundamental alcove is `P = { y : (y, coroot_i) > 0, (y, theta) < 1 }`.
//! The rho-shifted level-k Weyl group acts on `lambda` through
//! `(lambda + rho) / (k + c_G)`, so folding a point of this form is the same
//! as finding the element of that group that carries it into `P`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::RootSystem;
use crate::modular::ModularData;
use crate::repchar::{weight_multiplicities, WeightSystem};
use crate::weight::{RatWeight, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FoldKind {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldResult {
    pub kind: FoldKind,
    /// Image in the open alcove (interior only).
    pub folded: Option<RatWeight>,
    /// Sign of the affine Weyl element used (interior only).
    pub sign: i64,
    /// Number of reflections applied.
    pub steps: u32,
}

/// Folds numerators `x` over the denominator `den` in place.
///
/// Returns `(interior, sign, steps)`. Simple walls are tried first, in index
/// order, then the affine wall.
pub fn fold_numer(rs: &RootSystem, x: &mut [i64], den: i64) -> (bool, i64, u32) {
    let theta = rs.theta_form();
    let mut sign = 1;
    let mut steps = 0;
    loop {
        if let Some(i) = x.iter().position(|&c| c < 0) {
            rs.reflect_simple(i, x);
        } else {
            let t = theta.numer(x);
            if t <= den {
                break;
            }
            let shift = t - den;
            for (c, th) in x.iter_mut().zip(&rs.theta.0) {
                *c -= shift * th;
            }
        }
        sign = -sign;
        steps += 1;
    }
    let interior = x.iter().all(|&c| c > 0) && theta.numer(x) < den;
    (interior, sign, steps)
}

/// Folds `y` into the closure of the fundamental alcove.
pub fn fold_to_alcove(rs: &RootSystem, y: &RatWeight) -> FoldResult {
    let mut x = y.numer().to_vec();
    let (interior, sign, steps) = fold_numer(rs, &mut x, y.denom());
    if interior {
        FoldResult {
            kind: FoldKind::Interior,
            folded: Some(RatWeight::new(x, y.denom())),
            sign,
            steps,
        }
    } else {
        FoldResult { kind: FoldKind::Boundary, folded: None, sign: 0, steps }
    }
}

/// `N^beta_{gamma alpha} = sum_tau sgn(tau) m_gamma(alpha - tau(beta))`, summed
/// over the weights of `gamma`.
pub fn racah_fusion(md: &ModularData, gamma: &Weight, alpha: &Weight, beta: &Weight) -> Result<i64> {
    md.index_of(gamma)?;
    md.index_of(alpha)?;
    md.index_of(beta)?;
    let ws = weight_multiplicities(&md.rs, gamma)?;
    let v = racah_with_system(md, &ws, alpha, beta);
    if v < 0 {
        return Err(Error::NegativeFusion(v));
    }
    Ok(v)
}

/// Racah sum with a precomputed weight system for `gamma`.
pub fn racah_with_system(md: &ModularData, ws: &WeightSystem, alpha: &Weight, beta: &Weight) -> i64 {
    let rs = &md.rs;
    let kh = md.shifted_level();
    let target = beta + &rs.rho;
    let base = alpha + &rs.rho;
    let mut total = 0;
    let mut x = vec![0i64; rs.rank()];
    for (nu, m) in ws.iter() {
        for ((c, b), n) in x.iter_mut().zip(&base.0).zip(&nu.0) {
            *c = b - n;
        }
        let (interior, sign, _) = fold_numer(rs, &mut x, kh);
        if interior && x == target.0 {
            total += sign * m;
        }
    }
    total
}

/// All `N^beta_{gamma alpha}` from both formulas, indexed `[gamma][alpha][beta]`.
#[derive(Clone, Debug)]
pub struct FusionTable {
    pub n: usize,
    pub verlinde: Vec<f64>,
    pub racah: Vec<i64>,
}

impl FusionTable {
    pub fn build(md: &ModularData) -> FusionTable {
        let n = md.len();
        let rows: Vec<(Vec<f64>, Vec<i64>)> = crate::par::map_indices(n, |g| {
            let ws = weight_multiplicities(&md.rs, &md.alcove[g]).expect("alcove weights are dominant");
            let mut ver = Vec::with_capacity(n * n);
            let mut rac = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    ver.push(md.verlinde_raw(md.conj[b], g, a).re);
                    rac.push(racah_with_system(md, &ws, &md.alcove[a], &md.alcove[b]));
                }
            }
            (ver, rac)
        });
        let mut verlinde = Vec::with_capacity(n * n * n);
        let mut racah = Vec::with_capacity(n * n * n);
        for (v, r) in rows {
            verlinde.extend(v);
            racah.extend(r);
        }
        FusionTable { n, verlinde, racah }
    }

    pub fn racah_at(&self, g: usize, a: usize, b: usize) -> i64 {
        self.racah[(g * self.n + a) * self.n + b]
    }

    pub fn verlinde_at(&self, g: usize, a: usize, b: usize) -> f64 {
        self.verlinde[(g * self.n + a) * self.n + b]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionComparison {
    pub max_dev: f64,
    pub mismatches: usize,
    pub negative: usize,
    pub pass: bool,
}

/// Compares Verlinde values against Racah integers over every alcove triple.
pub fn fusion_table_compare(md: &ModularData) -> FusionComparison {
    compare_table(&FusionTable::build(md), 1e-6)
}

pub fn compare_table(t: &FusionTable, tol: f64) -> FusionComparison {
    let mut max_dev: f64 = 0.0;
    let mut mismatches = 0;
    let mut negative = 0;
    for (v, &r) in t.verlinde.iter().zip(&t.racah) {
        max_dev = max_dev.max((v - r as f64).abs());
        if v.round() as i64 != r {
            mismatches += 1;
        }
        if r < 0 {
            negative += 1;
        }
    }
    FusionComparison { max_dev, mismatches, negative, pass: max_dev < tol && mismatches == 0 && negative == 0 }
}

/// Compares each Racah integer for `gamma` against the Verlinde value for the
/// conjugate of `gamma`, i.e. `M^b_{g a}` against `N^b_{g-bar a}`.
pub fn compare_table_conjugated(t: &FusionTable, md: &ModularData, tol: f64) -> FusionComparison {
    let n = t.n;
    let mut max_dev: f64 = 0.0;
    let mut mismatches = 0;
    for g in 0..n {
        for a in 0..n {
            for b in 0..n {
                let v = t.verlinde_at(md.conj[g], a, b);
                let r = t.racah_at(g, a, b);
                max_dev = max_dev.max((v - r as f64).abs());
                if v.round() as i64 != r {
                    mismatches += 1;
                }
            }
        }
    }
    FusionComparison { max_dev, mismatches, negative: 0, pass: max_dev < tol && mismatches == 0 }
}

/// The weights `lambda` with `(lambda + rho)/(k + c_G)` strictly inside the
/// fundamental alcove, found by scanning a box that contains them.
pub fn shifted_alcove_points(rs: &RootSystem, k: i64) -> Vec<Weight> {
    let kh = k + rs.dual_coxeter;
    let r = rs.rank();
    let lo = -2i64;
    let width = (kh - lo + 1) as usize;
    let mut out = Vec::new();
    let mut cur = vec![lo; r];
    'outer: loop {
        let x: Vec<i64> = cur.iter().map(|c| c + 1).collect();
        if x.iter().all(|&c| c > 0) && rs.theta_form().numer(&x) < kh {
            out.push(Weight(cur.clone()));
        }
        for c in cur.iter_mut() {
            *c += 1;
            if ((*c - lo) as usize) < width {
                continue 'outer;
            }
            *c = lo;
        }
        break;
    }
    out
}
