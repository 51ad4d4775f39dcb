//! Compensated complex summation.

use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn add(acc: &mut (f64, f64), x: f64) {
    let (s, c) = *acc;
    let t = s + x;
    let c = if s.abs() >= x.abs() { c + ((s - t) + x) } else { c + ((x - t) + s) };
    *acc = (t, c);
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        add(&mut self.re, z.re);
        add(&mut self.im, z.im);
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        add(&mut self.re, other.re.0);
        add(&mut self.re, other.re.1);
        add(&mut self.im, other.im.0);
        add(&mut self.im, other.im.1);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl std::iter::FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}
