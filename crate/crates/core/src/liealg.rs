//! Exact root-system, lattice and Weyl-group data for simple Lie algebras.
//!
//! Weights are integer vectors of Dynkin labels. The invariant form is
//! normalized so that long roots have squared length 2 and is carried as the
//! exact Gram matrix of the fundamental weights. Roots and coroots live in the
//! same space through this form, with `coroot(a) = 2a / (a, a)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use crate::weight::{RatWeight, Weight};

/// Default cap on the Weyl group order.
pub const DEFAULT_WEYL_CAP: u128 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

/// A simple Lie algebra by Cartan type, e.g. `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: usize,
}

impl AlgebraSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AlgebraSpec { family, rank })
        } else {
            Err(Error::UnsupportedAlgebra(format!("{family:?}{rank}")))
        }
    }

    /// Order of the Weyl group from the classical formulas.
    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        let r = self.rank;
        match self.family {
            Family::A => fact(r + 1),
            Family::B | Family::C => (1u128 << r) * fact(r),
            Family::D => (1u128 << (r - 1)) * fact(r),
            Family::G => 12,
        }
    }

    /// Real dimension of the compact group, i.e. the dimension of the algebra.
    pub fn dimension(&self) -> usize {
        let r = self.rank;
        match self.family {
            Family::A => r * (r + 2),
            Family::B | Family::C => r * (2 * r + 1),
            Family::D => r * (2 * r - 1),
            Family::G => 14,
        }
    }

    /// Inner products of the simple roots (Bourbaki numbering), long roots of length 2.
    fn simple_root_form(&self) -> Vec<Vec<Rational64>> {
        let r = self.rank;
        let q = |n: i64, d: i64| Rational64::new(n, d);
        let mut b = vec![vec![Rational64::zero(); r]; r];
        match self.family {
            Family::A | Family::D => {
                for i in 0..r {
                    b[i][i] = q(2, 1);
                }
                let chain = if self.family == Family::D { r - 1 } else { r };
                for i in 0..chain.saturating_sub(1) {
                    b[i][i + 1] = q(-1, 1);
                    b[i + 1][i] = q(-1, 1);
                }
                if self.family == Family::D {
                    b[r - 3][r - 1] = q(-1, 1);
                    b[r - 1][r - 3] = q(-1, 1);
                }
            }
            Family::B => {
                for i in 0..r - 1 {
                    b[i][i] = q(2, 1);
                    b[i][i + 1] = q(-1, 1);
                    b[i + 1][i] = q(-1, 1);
                }
                b[r - 1][r - 1] = q(1, 1);
            }
            Family::C => {
                for i in 0..r - 1 {
                    b[i][i] = q(1, 1);
                }
                for i in 0..r.saturating_sub(2) {
                    b[i][i + 1] = q(-1, 2);
                    b[i + 1][i] = q(-1, 2);
                }
                b[r - 2][r - 1] = q(-1, 1);
                b[r - 1][r - 2] = q(-1, 1);
                b[r - 1][r - 1] = q(2, 1);
            }
            Family::G => {
                b[0][0] = q(2, 3);
                b[1][1] = q(2, 1);
                b[0][1] = q(-1, 1);
                b[1][0] = q(-1, 1);
            }
        }
        b
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::UnsupportedAlgebra(s.to_string()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'G' => Family::G,
            _ => return Err(Error::UnsupportedAlgebra(s.to_string())),
        };
        let rank: usize =
            chars.as_str().parse().map_err(|_| Error::UnsupportedAlgebra(s.to_string()))?;
        AlgebraSpec::new(family, rank)
    }
}

/// Weyl group element acting linearly on Dynkin-label coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    rank: usize,
    /// Row-major `rank x rank` integer matrix.
    matrix: Vec<i64>,
    pub sign: i64,
    pub length: u32,
}

impl WeylElement {
    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| self.matrix[i * r + j] * x[j]).sum())
            .collect()
    }

    pub fn apply_weight(&self, x: &Weight) -> Weight {
        Weight(self.apply(&x.0))
    }

    pub fn apply_rat(&self, x: &RatWeight) -> RatWeight {
        RatWeight::new(self.apply(x.numer()), x.denom())
    }
}

/// Integer linear functional `x -> coeffs . x / den` on Dynkin coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub den: i64,
}

impl LinearForm {
    pub fn numer(&self, x: &[i64]) -> i64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn eval(&self, x: &[i64]) -> Rational64 {
        Rational64::new(self.numer(x), self.den)
    }

    pub fn eval_rat(&self, x: &RatWeight) -> Rational64 {
        Rational64::new(self.numer(x.numer()), self.den * x.denom())
    }
}

/// Finite root-system data of a simple Lie algebra.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: AlgebraSpec,
    /// `cartan[i][j] = (alpha_i, coroot_j)`; row `i` is `alpha_i` in Dynkin labels.
    pub cartan: Vec<Vec<i64>>,
    /// `gram[i][j] = (omega_i, omega_j)`.
    pub gram: Vec<Vec<Rational64>>,
    gram_num: Vec<i64>,
    gram_den: i64,
    pub simple_roots: Vec<Weight>,
    /// Sorted by height, then lexicographically.
    pub positive_roots: Vec<Weight>,
    pub rho: Weight,
    pub theta: Weight,
    pub dual_coxeter: i64,
    /// Full enumeration, identity first, in order of nondecreasing length.
    pub weyl: Vec<WeylElement>,
    pub lattice_index: i64,
    /// `(beta, .)` for each positive root, same order as `positive_roots`.
    root_forms: Vec<LinearForm>,
    theta_form: LinearForm,
}

impl RootSystem {
    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(spec: AlgebraSpec, cap: u128) -> Result<Self> {
        let spec = AlgebraSpec::new(spec.family, spec.rank)?;
        let order = spec.weyl_order();
        if order > cap {
            return Err(Error::WeylCapExceeded { order, cap });
        }
        let r = spec.rank;
        let form = spec.simple_root_form();
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let a = form[i][j] * Rational64::from_integer(2) / form[j][j];
                        debug_assert!(a.is_integer());
                        a.to_integer()
                    })
                    .collect()
            })
            .collect();

        // alpha = A omega  =>  form = A G A^T  =>  G = A^{-1} form A^{-T}
        let a_rat: Vec<Vec<Rational64>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let a_inv = mat_inverse(&a_rat);
        let gram = mat_mul(&mat_mul(&a_inv, &form), &transpose(&a_inv));

        let gram_den = gram.iter().flatten().fold(1i64, |l, c| l.lcm(c.denom()));
        let gram_num = gram
            .iter()
            .flatten()
            .map(|c| c.numer() * (gram_den / c.denom()))
            .collect();

        let simple_roots: Vec<Weight> = cartan.iter().map(|row| Weight(row.clone())).collect();
        let rho = Weight(vec![1; r]);

        let mut rs = RootSystem {
            spec,
            cartan,
            gram,
            gram_num,
            gram_den,
            simple_roots,
            positive_roots: Vec::new(),
            rho,
            theta: Weight::zero(r),
            dual_coxeter: 0,
            weyl: Vec::new(),
            lattice_index: 0,
            root_forms: Vec::new(),
            theta_form: LinearForm { coeffs: vec![0; r], den: 1 },
        };

        rs.weyl = rs.enumerate_weyl();
        debug_assert_eq!(rs.weyl.len() as u128, order);

        let mut roots: Vec<Weight> = Vec::new();
        for w in &rs.weyl {
            for a in &rs.simple_roots {
                let b = w.apply_weight(a);
                if !roots.contains(&b) {
                    roots.push(b);
                }
            }
        }
        let mut positive: Vec<Weight> = roots
            .into_iter()
            .filter(|b| rs.pair(b, &rs.rho).is_positive())
            .collect();
        positive.sort_by_key(|b| (rs.height(b), std::cmp::Reverse(b.clone())));
        rs.positive_roots = positive;

        let two = Rational64::from_integer(2);
        rs.theta = rs
            .positive_roots
            .iter()
            .find(|b| b.is_dominant() && rs.pair(b, b) == two)
            .cloned()
            .expect("every simple root system has a dominant long root");
        let c = Rational64::one() + rs.pair(&rs.theta, &rs.rho);
        assert!(c.is_integer());
        rs.dual_coxeter = c.to_integer();

        rs.root_forms = rs.positive_roots.iter().map(|b| rs.form_of(b)).collect();
        rs.theta_form = rs.form_of(&rs.theta.clone());

        // |Lambda / coroot lattice| = Gram determinant of the simple coroots
        let coroot_gram: Vec<Vec<Rational64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        Rational64::from_integer(4) * form[i][j] / (form[i][i] * form[j][j])
                    })
                    .collect()
            })
            .collect();
        let det = mat_det(&coroot_gram);
        assert!(det.is_integer());
        rs.lattice_index = det.to_integer();
        Ok(rs)
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    /// Exact value of the invariant form, checking dimensions.
    pub fn bilinear(&self, x: &Weight, y: &Weight) -> Result<Rational64> {
        let r = self.rank();
        for w in [x, y] {
            if w.rank() != r {
                return Err(Error::DimensionMismatch { expected: r, got: w.rank() });
            }
        }
        Ok(self.pair(x, y))
    }

    /// Invariant form on integral weights (ranks assumed to match).
    pub fn pair(&self, x: &Weight, y: &Weight) -> Rational64 {
        Rational64::new(self.pair_numer(&x.0, &y.0), self.gram_den)
    }

    /// Invariant form on rational weights.
    pub fn pair_rat(&self, x: &RatWeight, y: &RatWeight) -> Rational64 {
        Rational64::new(
            self.pair_numer(x.numer(), y.numer()),
            self.gram_den * x.denom() * y.denom(),
        )
    }

    fn pair_numer(&self, x: &[i64], y: &[i64]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            let row = &self.gram_num[i * r..(i + 1) * r];
            s += x[i] * row.iter().zip(y).map(|(g, b)| g * b).sum::<i64>();
        }
        s
    }

    /// The functional `(v, .)` as an integer form.
    pub fn form_of(&self, v: &Weight) -> LinearForm {
        let r = self.rank();
        let coeffs: Vec<i64> = (0..r)
            .map(|j| (0..r).map(|i| v.0[i] * self.gram_num[i * r + j]).sum())
            .collect();
        let g = coeffs.iter().fold(self.gram_den, |g, &c| g.gcd(&c));
        LinearForm { coeffs: coeffs.iter().map(|c| c / g).collect(), den: self.gram_den / g }
    }

    /// `(beta, .)` for each positive root, aligned with `positive_roots`.
    pub fn root_forms(&self) -> &[LinearForm] {
        &self.root_forms
    }

    /// `(theta, .)`; integral on the weight lattice.
    pub fn theta_form(&self) -> &LinearForm {
        &self.theta_form
    }

    /// Half the squared length of simple root `i`.
    pub fn half_norm(&self, i: usize) -> Rational64 {
        let a = &self.simple_roots[i];
        self.pair(a, a) / Rational64::from_integer(2)
    }

    /// Simple-root expansion `beta = sum c_i alpha_i` of a root-lattice element.
    pub fn simple_coefficients(&self, beta: &Weight) -> Vec<Rational64> {
        (0..self.rank())
            .map(|i| {
                self.pair(beta, &Weight::fundamental(self.rank(), i)) / self.half_norm(i)
            })
            .collect()
    }

    fn height(&self, beta: &Weight) -> i64 {
        self.simple_coefficients(beta).iter().sum::<Rational64>().to_integer()
    }

    /// Coroot `2 beta / (beta, beta)` as a rational weight.
    pub fn coroot(&self, beta: &Weight) -> RatWeight {
        let n = self.pair(beta, beta);
        let scale = Rational64::from_integer(2) / n;
        RatWeight::new(
            beta.0.iter().map(|c| c * scale.numer()).collect(),
            *scale.denom(),
        )
    }

    pub fn act(&self, w: &WeylElement, x: &Weight) -> Weight {
        w.apply_weight(x)
    }

    /// Simple reflection `s_i` on Dynkin coordinates: `x - x_i alpha_i`.
    pub fn reflect_simple(&self, i: usize, x: &mut [i64]) {
        let xi = x[i];
        if xi != 0 {
            for (c, a) in x.iter_mut().zip(&self.cartan[i]) {
                *c -= xi * a;
            }
        }
    }

    /// Dominant Weyl conjugate of `x` and the sign of the element used.
    pub fn dominant_conjugate(&self, x: &Weight) -> (Weight, i64) {
        let mut v = x.0.clone();
        let mut sign = 1;
        while let Some(i) = v.iter().position(|&c| c < 0) {
            self.reflect_simple(i, &mut v);
            sign = -sign;
        }
        (Weight(v), sign)
    }

    /// The longest element of the Weyl group.
    pub fn longest_element(&self) -> &WeylElement {
        self.weyl.iter().max_by_key(|w| w.length).expect("nonempty")
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> i64 {
        let lr = lambda + &self.rho;
        let mut d = Rational64::one();
        for b in &self.positive_roots {
            d *= self.pair(&lr, b) / self.pair(&self.rho, b);
        }
        assert!(d.is_integer());
        d.to_integer()
    }

    fn enumerate_weyl(&self) -> Vec<WeylElement> {
        let r = self.rank();
        let gens: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut m = vec![0; r * r];
                for row in 0..r {
                    m[row * r + row] = 1;
                    // (s_i x)_row = x_row - x_i * cartan[i][row]
                    m[row * r + i] -= self.cartan[i][row];
                }
                m
            })
            .collect();
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut elems: Vec<WeylElement> = Vec::new();
        let mut identity = vec![0; r * r];
        for i in 0..r {
            identity[i * r + i] = 1;
        }
        let mut queue = VecDeque::new();
        index.insert(identity.clone(), 0);
        elems.push(WeylElement { rank: r, matrix: identity.clone(), sign: 1, length: 0 });
        queue.push_back(0usize);
        while let Some(cur) = queue.pop_front() {
            for g in &gens {
                let m = mat_mul_int(g, &elems[cur].matrix, r);
                if !index.contains_key(&m) {
                    let len = elems[cur].length + 1;
                    index.insert(m.clone(), elems.len());
                    elems.push(WeylElement {
                        rank: r,
                        matrix: m,
                        sign: if len.is_multiple_of(2) { 1 } else { -1 },
                        length: len,
                    });
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        elems
    }
}

fn mat_mul_int(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut c = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik != 0 {
                for j in 0..r {
                    c[i * r + j] += aik * b[k * r + j];
                }
            }
        }
    }
    c
}

fn transpose(a: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn mat_mul(a: &[Vec<Rational64>], b: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_inverse(a: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero()).expect("singular matrix");
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn mat_det(a: &[Vec<Rational64>]) -> Rational64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational64::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational64::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for i in col + 1..n {
            let f = m[i][col] / p;
            if !f.is_zero() {
                let pivot_row = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    det
}
