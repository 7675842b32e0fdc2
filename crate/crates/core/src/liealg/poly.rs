use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Polynomial in `t` with exact rational coefficients, lowest degree first,
/// truncated at a fixed cap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFn {
    coeffs: Vec<Q>,
}

impl PolyFn {
    pub fn zero(cap: usize) -> Self {
        Self { coeffs: vec![Q::zero(); cap + 1] }
    }

    pub fn monomial(k: usize, cap: usize) -> Self {
        assert!(k <= cap, "monomial degree {k} exceeds cap {cap}");
        let mut p = Self::zero(cap);
        p.coeffs[k] = Q::one();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Q>, cap: usize) -> Self {
        assert!(coeffs.len() <= cap + 1 || coeffs[cap + 1..].iter().all(Zero::is_zero), "degree exceeds cap {cap}");
        let mut c = coeffs;
        c.resize(cap + 1, Q::zero());
        Self { coeffs: c }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.cap());
        for k in 1..self.coeffs.len() {
            out.coeffs[k - 1] = &self.coeffs[k] * q(k as i64);
        }
        out
    }

    /// `t · d/dt`, which preserves degree.
    pub fn t_dt(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c * q(k as i64)).collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.cap(), o.cap());
        Self { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.cap(), o.cap());
        Self { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Product truncated to `cap`; panics if a nonzero coefficient would be
    /// dropped.
    pub fn mul(&self, o: &Self, cap: usize) -> Self {
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out, cap)
    }

    /// Coefficients as floating-point numbers.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Debug for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let mag_s = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
            let mono = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            write!(f, "{sign}{mag_s}{mono}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus() {
        let p = PolyFn::from_coeffs(vec![q(1), q(2), q(3)], 4);
        assert_eq!(p.derivative(), PolyFn::from_coeffs(vec![q(2), q(6)], 4));
        assert_eq!(p.t_dt(), PolyFn::from_coeffs(vec![q(0), q(2), q(6)], 4));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "1+2t+3t^2");
        assert_eq!(PolyFn::zero(2).to_string(), "0");
    }

    #[test]
    fn products_respect_cap() {
        let t = PolyFn::monomial(1, 2);
        assert_eq!(t.mul(&t, 2), PolyFn::monomial(2, 2));
        assert!(std::panic::catch_unwind(|| PolyFn::monomial(2, 2).mul(&PolyFn::monomial(2, 2), 3)).is_err());
    }
}
