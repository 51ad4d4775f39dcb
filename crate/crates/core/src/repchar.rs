//! Weight multiplicities, characters, Casimir values and conjugate weights of
//! finite-dimensional irreducible representations.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::RootSystem;
use crate::weight::{RatWeight, Weight};

/// Full weight system of the irreducible representation with a given highest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest: Weight,
    /// Multiplicity of every weight in the support, keyed in lexicographic order.
    pub mults: BTreeMap<Weight, i64>,
}

impl WeightSystem {
    pub fn multiplicity(&self, mu: &Weight) -> i64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> i64 {
        self.mults.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.mults.iter().map(|(w, &m)| (w, m))
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }
}

/// Which formula [`character_eval`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CharacterMethod {
    #[default]
    MultiplicitySum,
    WeylQuotient,
}

/// Weight multiplicities by Freudenthal's recursion on dominant weights,
/// expanded to full Weyl orbits.
pub fn weight_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<WeightSystem> {
    check_rank(rs, lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }

    let mut dominant = vec![lambda.clone()];
    let mut seen: HashSet<Weight> = dominant.iter().cloned().collect();
    let mut queue: VecDeque<Weight> = dominant.iter().cloned().collect();
    while let Some(mu) = queue.pop_front() {
        for beta in &rs.positive_roots {
            let nu = &mu - beta;
            if nu.is_dominant() && seen.insert(nu.clone()) {
                dominant.push(nu.clone());
                queue.push_back(nu);
            }
        }
    }
    // highest first: decreasing pairing with rho is compatible with dominance order
    dominant.sort_by(|a, b| rs.pair(b, &rs.rho).cmp(&rs.pair(a, &rs.rho)).then(b.cmp(a)));

    let lr = lambda + &rs.rho;
    let top = rs.pair(&lr, &lr);
    let mut dom_mult: HashMap<Weight, i64> = HashMap::new();
    dom_mult.insert(lambda.clone(), 1);
    for mu in dominant.iter().skip(1) {
        let mut acc = Rational64::zero();
        for beta in &rs.positive_roots {
            let mut nu = mu + beta;
            loop {
                let (d, _) = rs.dominant_conjugate(&nu);
                let Some(&m) = dom_mult.get(&d) else { break };
                acc += Rational64::from_integer(m) * rs.pair(&nu, beta);
                nu = &nu + beta;
            }
        }
        let mr = mu + &rs.rho;
        let denom = top - rs.pair(&mr, &mr);
        let m = acc * Rational64::from_integer(2) / denom;
        debug_assert!(m.is_integer());
        let m = m.to_integer();
        if m > 0 {
            dom_mult.insert(mu.clone(), m);
        }
    }

    let mut mults = BTreeMap::new();
    for (mu, m) in dom_mult {
        for w in &rs.weyl {
            mults.insert(w.apply_weight(&mu), m);
        }
    }
    Ok(WeightSystem { highest: lambda.clone(), mults })
}

/// Second Casimir value `(lambda, lambda + 2 rho)`.
pub fn casimir(rs: &RootSystem, lambda: &Weight) -> Rational64 {
    let shifted = &(lambda + &rs.rho) + &rs.rho;
    rs.pair(lambda, &shifted)
}

/// `(bar, star)` where `bar = -w0 lambda` and `star + rho = -w0 (lambda + rho)`.
pub fn conjugates(rs: &RootSystem, lambda: &Weight) -> Result<(Weight, Weight)> {
    check_rank(rs, lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let w0 = rs.longest_element();
    let bar = -&w0.apply_weight(lambda);
    let star = &(-&w0.apply_weight(&(lambda + &rs.rho))) - &rs.rho;
    Ok((bar, star))
}

/// `exp(2 pi i q)` with `q` reduced modulo 1 exactly before conversion.
pub fn phase(q: Rational64) -> Complex64 {
    let f = q - q.floor();
    let x = *f.numer() as f64 / *f.denom() as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

/// Character of the representation with highest weight `lambda` at `exp(b)`.
pub fn character_eval(
    rs: &RootSystem,
    lambda: &Weight,
    b: &RatWeight,
    method: CharacterMethod,
) -> Result<Complex64> {
    match method {
        CharacterMethod::MultiplicitySum => {
            let ws = weight_multiplicities(rs, lambda)?;
            Ok(character_from_system(rs, &ws, b))
        }
        CharacterMethod::WeylQuotient => {
            check_rank(rs, lambda)?;
            if !lambda.is_dominant() {
                return Err(Error::NotDominant(lambda.0.clone()));
            }
            let b_is_singular = rs
                .positive_roots
                .iter()
                .any(|beta| rs.pair_rat(&RatWeight::from_weight(beta), b).is_integer());
            if b_is_singular {
                return Err(Error::DenominatorZero);
            }
            let num = alternating_sum(rs, &(lambda + &rs.rho), b);
            let den = alternating_sum(rs, &rs.rho, b);
            Ok(num / den)
        }
    }
}

/// Multiplicity-sum character for an already computed weight system.
pub fn character_from_system(rs: &RootSystem, ws: &WeightSystem, b: &RatWeight) -> Complex64 {
    let mut s = Complex64::zero();
    for (mu, m) in ws.iter() {
        s += phase(rs.pair_rat(&RatWeight::from_weight(mu), b)) * m as f64;
    }
    s
}

/// `sum_w sgn(w) exp(2 pi i (w x, b))`.
pub fn alternating_sum(rs: &RootSystem, x: &Weight, b: &RatWeight) -> Complex64 {
    let mut s = Complex64::zero();
    for w in &rs.weyl {
        let wx = RatWeight::from_weight(&w.apply_weight(x));
        s += phase(rs.pair_rat(&wx, b)) * w.sign as f64;
    }
    s
}

fn check_rank(rs: &RootSystem, w: &Weight) -> Result<()> {
    if w.rank() != rs.rank() {
        return Err(Error::DimensionMismatch { expected: rs.rank(), got: w.rank() });
    }
    Ok(())
}
