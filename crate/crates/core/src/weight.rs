//! Exact weight vectors in the fundamental-weight (Dynkin label) basis.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Integral weight, stored as Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_strictly_dominant(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    /// The rational weight `self / den`.
    pub fn over(&self, den: i64) -> RatWeight {
        RatWeight::new(self.0.clone(), den)
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, rhs: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * rhs).collect())
    }
}

/// Rational weight `num / den` with a shared positive denominator.
///
/// Always kept in lowest terms, so structural equality is exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatWeight {
    num: Vec<i64>,
    den: i64,
}

impl RatWeight {
    pub fn new(mut num: Vec<i64>, mut den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        let g = num.iter().fold(den, |g, &c| g.gcd(&c));
        if g > 1 {
            num.iter_mut().for_each(|c| *c /= g);
            den /= g;
        }
        RatWeight { num, den }
    }

    pub fn from_weight(w: &Weight) -> Self {
        RatWeight { num: w.0.clone(), den: 1 }
    }

    pub fn from_rationals(coords: &[Rational64]) -> Self {
        let den = coords.iter().fold(1i64, |l, c| l.lcm(c.denom()));
        let num = coords.iter().map(|c| c.numer() * (den / c.denom())).collect();
        RatWeight::new(num, den)
    }

    pub fn numer(&self) -> &[i64] {
        &self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn coord(&self, i: usize) -> Rational64 {
        Rational64::new(self.num[i], self.den)
    }

    pub fn coords(&self) -> Vec<Rational64> {
        (0..self.rank()).map(|i| self.coord(i)).collect()
    }

    /// The underlying integral weight, if the denominator is one.
    pub fn to_weight(&self) -> Option<Weight> {
        (self.den == 1).then(|| Weight(self.num.clone()))
    }

    /// `self * factor` as an integral weight, if it is one.
    pub fn scaled_to_weight(&self, factor: i64) -> Option<Weight> {
        if factor % self.den != 0 {
            return None;
        }
        let m = factor / self.den;
        Some(Weight(self.num.iter().map(|c| c * m).collect()))
    }

    pub fn neg(&self) -> RatWeight {
        RatWeight { num: self.num.iter().map(|c| -c).collect(), den: self.den }
    }
}

impl fmt::Display for RatWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")/{}", self.den)
    }
}
