//! Closed-form univariate functions.
//!
//! Profiles such as `u0(p)`, the generator parameters `γ(t)`, `α(t)`, and the
//! reduction data `v⁰(ξ)`, `T⁰(ξ)` are all drawn from this small registry of
//! named forms. Derivatives of any order are produced symbolically so that
//! e.g. `β_tt` in the group action is exact.

use serde::{Deserialize, Serialize};

use crate::jet::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScalarFn {
    Const(f64),
    /// `Σ c_k x^k`, lowest degree first.
    Poly(Vec<f64>),
    /// `amp · sin(freq·x + phase)`
    Sin { amp: f64, freq: f64, phase: f64 },
    /// `amp · cos(freq·x + phase)`
    Cos { amp: f64, freq: f64, phase: f64 },
    /// `amp · exp(rate·x)`
    Exp { amp: f64, rate: f64 },
    /// `coef · x^exponent` (requires `x > 0` for non-integer exponents)
    Power { coef: f64, exponent: f64 },
    Sum(Vec<ScalarFn>),
    Product(Box<ScalarFn>, Box<ScalarFn>),
}

impl Default for ScalarFn {
    fn default() -> Self {
        ScalarFn::Const(0.0)
    }
}

impl ScalarFn {
    pub fn zero() -> Self {
        ScalarFn::Const(0.0)
    }

    pub fn constant(c: f64) -> Self {
        ScalarFn::Const(c)
    }

    pub fn poly(coeffs: impl Into<Vec<f64>>) -> Self {
        ScalarFn::Poly(coeffs.into())
    }

    /// The identity function `x`.
    pub fn identity() -> Self {
        ScalarFn::Poly(vec![0.0, 1.0])
    }

    pub fn sin(amp: f64, freq: f64) -> Self {
        ScalarFn::Sin { amp, freq, phase: 0.0 }
    }

    pub fn cos(amp: f64, freq: f64) -> Self {
        ScalarFn::Cos { amp, freq, phase: 0.0 }
    }

    pub fn product(a: ScalarFn, b: ScalarFn) -> Self {
        ScalarFn::Product(Box::new(a), Box::new(b))
    }

    pub fn scaled(self, c: f64) -> Self {
        match self {
            ScalarFn::Const(a) => ScalarFn::Const(a * c),
            ScalarFn::Poly(cs) => ScalarFn::Poly(cs.into_iter().map(|a| a * c).collect()),
            ScalarFn::Sin { amp, freq, phase } => ScalarFn::Sin { amp: amp * c, freq, phase },
            ScalarFn::Cos { amp, freq, phase } => ScalarFn::Cos { amp: amp * c, freq, phase },
            ScalarFn::Exp { amp, rate } => ScalarFn::Exp { amp: amp * c, rate },
            ScalarFn::Power { coef, exponent } => ScalarFn::Power { coef: coef * c, exponent },
            ScalarFn::Sum(fs) => ScalarFn::Sum(fs.into_iter().map(|f| f.scaled(c)).collect()),
            ScalarFn::Product(a, b) => ScalarFn::Product(Box::new(a.scaled(c)), b),
        }
    }

    pub fn eval<S: Real>(&self, x: S) -> S {
        match self {
            ScalarFn::Const(c) => S::cst(*c),
            ScalarFn::Poly(cs) => {
                let mut acc = S::zero();
                for &c in cs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            ScalarFn::Sin { amp, freq, phase } => (x * *freq + *phase).sin() * *amp,
            ScalarFn::Cos { amp, freq, phase } => (x * *freq + *phase).cos() * *amp,
            ScalarFn::Exp { amp, rate } => (x * *rate).exp() * *amp,
            ScalarFn::Power { coef, exponent } => x.powf(*exponent) * *coef,
            ScalarFn::Sum(fs) => fs.iter().fold(S::zero(), |acc, f| acc + f.eval(x)),
            ScalarFn::Product(a, b) => a.eval(x) * b.eval(x),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }

    /// Symbolic first derivative.
    pub fn derivative(&self) -> ScalarFn {
        match self {
            ScalarFn::Const(_) => ScalarFn::Const(0.0),
            ScalarFn::Poly(cs) => {
                if cs.len() <= 1 {
                    ScalarFn::Const(0.0)
                } else {
                    ScalarFn::Poly(
                        cs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect(),
                    )
                }
            }
            ScalarFn::Sin { amp, freq, phase } => {
                ScalarFn::Cos { amp: amp * freq, freq: *freq, phase: *phase }
            }
            ScalarFn::Cos { amp, freq, phase } => {
                ScalarFn::Sin { amp: -amp * freq, freq: *freq, phase: *phase }
            }
            ScalarFn::Exp { amp, rate } => ScalarFn::Exp { amp: amp * rate, rate: *rate },
            ScalarFn::Power { coef, exponent } => {
                if *exponent == 0.0 {
                    ScalarFn::Const(0.0)
                } else {
                    ScalarFn::Power { coef: coef * exponent, exponent: exponent - 1.0 }
                }
            }
            ScalarFn::Sum(fs) => ScalarFn::Sum(fs.iter().map(ScalarFn::derivative).collect()),
            ScalarFn::Product(a, b) => ScalarFn::Sum(vec![
                ScalarFn::product(a.derivative(), (**b).clone()),
                ScalarFn::product((**a).clone(), b.derivative()),
            ]),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> ScalarFn {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    /// Value and first two derivatives at `x`, in the form [`Real::chain`] takes.
    pub fn taylor2(&self, x: f64) -> (f64, f64, f64) {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        (self.value(x), d1.value(x), d2.value(x))
    }

    /// Bundles the function with its first two derivatives.
    pub fn with_derivatives(&self) -> Derivs {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        Derivs { f: self.clone(), d1, d2 }
    }
}

/// A function together with its first and second derivatives.
#[derive(Clone, Debug)]
pub struct Derivs {
    pub f: ScalarFn,
    pub d1: ScalarFn,
    pub d2: ScalarFn,
}

impl Derivs {
    pub fn new(f: &ScalarFn) -> Self {
        f.with_derivatives()
    }
}

/// A function of `t` bundled with its first three derivatives.
#[derive(Clone, Debug)]
pub struct TimeFn([ScalarFn; 4]);

impl TimeFn {
    pub fn new(f: ScalarFn) -> Self {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Self([f, d1, d2, d3])
    }

    pub fn function(&self) -> &ScalarFn {
        &self.0[0]
    }

    /// `k`-th derivative at `t`, `k ≤ 3`.
    pub fn at<S: Real>(&self, k: usize, t: S) -> S {
        self.0[k].eval(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Dual;
    use proptest::prelude::*;

    fn sample() -> ScalarFn {
        ScalarFn::Sum(vec![
            ScalarFn::poly([1.0, -2.0, 0.5, 0.25]),
            ScalarFn::product(ScalarFn::sin(1.5, 2.0), ScalarFn::Exp { amp: 0.3, rate: -0.7 }),
            ScalarFn::Power { coef: 2.0, exponent: 2.0 / 7.0 },
            ScalarFn::Cos { amp: 0.2, freq: 3.0, phase: 0.1 },
        ])
    }

    #[test]
    fn polynomial_derivative() {
        let f = ScalarFn::poly([3.0, 0.0, 1.0]);
        assert_eq!(f.derivative(), ScalarFn::Poly(vec![0.0, 2.0]));
        assert_eq!(f.nth_derivative(3), ScalarFn::Const(0.0));
    }

    #[test]
    fn serde_shape() {
        let f: ScalarFn = serde_json::from_str(r#"{"sin":{"amp":1.0,"freq":2.0,"phase":0.0}}"#).unwrap();
        assert_eq!(f, ScalarFn::sin(1.0, 2.0));
        let g: ScalarFn = serde_json::from_str(r#"{"poly":[1.0,2.0]}"#).unwrap();
        assert_eq!(g.value(2.0), 5.0);
        assert!(serde_json::from_str::<ScalarFn>(r#"{"sin":{"amp":1.0}}"#).is_err());
    }

    proptest! {
        #[test]
        fn symbolic_derivative_agrees_with_dual(x in 0.1f64..2.0) {
            let f = sample();
            let d = f.eval(Dual::<1>::var(x, 0));
            let sym = f.derivative().value(x);
            prop_assert!((d.d[0] - sym).abs() < 1e-11 * (1.0 + sym.abs()));
        }
    }
}
