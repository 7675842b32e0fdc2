//! Forward-mode truncated Taylor arithmetic.
//!
//! Every closed-form expression in the crate (fields, group maps, generator
//! coefficients) is written once against [`Real`] and evaluated on `f64`,
//! on first-order duals [`Dual`] or on second-order jets [`Jet2`]. This is
//! what "exact derivative mode" means throughout: the partials are the exact
//! derivatives of the evaluated expression, not difference quotients.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Scalar type that supports the arithmetic used by the closed-form formulas.
pub trait Real:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn cst(c: f64) -> Self;

    /// The value (zeroth-order) part.
    fn re(&self) -> f64;

    /// Composes with a univariate function whose value and first two
    /// derivatives at `self.re()` are `f0`, `f1`, `f2`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn sin(self) -> Self {
        let v = self.re();
        self.chain(v.sin(), v.cos(), -v.sin())
    }

    fn cos(self) -> Self {
        let v = self.re();
        self.chain(v.cos(), -v.sin(), -v.cos())
    }

    fn exp(self) -> Self {
        let e = self.re().exp();
        self.chain(e, e, e)
    }

    fn ln(self) -> Self {
        let v = self.re();
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    fn recip(self) -> Self {
        let v = self.re();
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    fn sqrt(self) -> Self {
        let s = self.re().sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    /// Real power `x^e`; the base must be positive unless `e` is a
    /// non-negative integer.
    fn powf(self, e: f64) -> Self {
        let v = self.re();
        if e == 0.0 {
            return Self::cst(1.0);
        }
        if e.fract() == 0.0 && e > 0.0 && e <= 64.0 {
            return self.powi(e as i32);
        }
        self.chain(v.powf(e), e * v.powf(e - 1.0), e * (e - 1.0) * v.powf(e - 2.0))
    }

    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::cst(1.0),
            1 => self,
            2 => self * self,
            n if n < 0 => self.powi(-n).recip(),
            n => {
                let v = self.re();
                let nf = n as f64;
                self.chain(
                    v.powi(n),
                    nf * v.powi(n - 1),
                    nf * (nf - 1.0) * v.powi(n - 2),
                )
            }
        }
    }
}

impl Real for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn re(&self) -> f64 {
        *self
    }
    fn chain(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// First-order dual number with `N` infinitesimal directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<const N: usize> {
    pub v: f64,
    pub d: [f64; N],
}

/// Dual over the four independent variables `(t, x, y, p)`.
pub type Jet1 = Dual<4>;

impl<const N: usize> Dual<N> {
    pub fn constant(v: f64) -> Self {
        Self { v, d: [0.0; N] }
    }

    /// Independent variable `k` with value `v`.
    pub fn var(v: f64, k: usize) -> Self {
        let mut d = [0.0; N];
        d[k] = 1.0;
        Self { v, d }
    }

    /// Seeds a full coordinate tuple, one direction per entry.
    pub fn seed(values: [f64; N]) -> [Self; N] {
        std::array::from_fn(|k| Self::var(values[k], k))
    }
}

impl<const N: usize> Real for Dual<N> {
    fn cst(c: f64) -> Self {
        Self::constant(c)
    }
    fn re(&self) -> f64 {
        self.v
    }
    fn chain(self, f0: f64, f1: f64, _f2: f64) -> Self {
        Self { v: f0, d: self.d.map(|g| f1 * g) }
    }
}

impl<const N: usize> Add for Dual<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: std::array::from_fn(|k| self.d[k] + o.d[k]) }
    }
}

impl<const N: usize> Sub for Dual<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: std::array::from_fn(|k| self.d[k] - o.d[k]) }
    }
}

impl<const N: usize> Mul for Dual<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d: std::array::from_fn(|k| self.d[k] * o.v + self.v * o.d[k]),
        }
    }
}

impl<const N: usize> Div for Dual<N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.v / o.v;
        Self { v: q, d: std::array::from_fn(|k| (self.d[k] - q * o.d[k]) / o.v) }
    }
}

impl<const N: usize> Neg for Dual<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d: self.d.map(|g| -g) }
    }
}

impl<const N: usize> Add<f64> for Dual<N> {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        Self { v: self.v + c, d: self.d }
    }
}

impl<const N: usize> Sub<f64> for Dual<N> {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        Self { v: self.v - c, d: self.d }
    }
}

impl<const N: usize> Mul<f64> for Dual<N> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self { v: self.v * c, d: self.d.map(|g| g * c) }
    }
}

impl<const N: usize> Div<f64> for Dual<N> {
    type Output = Self;
    fn div(self, c: f64) -> Self {
        Self { v: self.v / c, d: self.d.map(|g| g / c) }
    }
}

impl<const N: usize> AddAssign for Dual<N> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const N: usize> SubAssign for Dual<N> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const N: usize> MulAssign for Dual<N> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

/// Second-order jet in `(t, x, y, p)`: value, gradient and Hessian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 4],
    pub h: [[f64; 4]; 4],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 4], h: [[0.0; 4]; 4] }
    }

    pub fn var(v: f64, k: usize) -> Self {
        let mut j = Self::constant(v);
        j.g[k] = 1.0;
        j
    }

    pub fn seed(values: [f64; 4]) -> [Self; 4] {
        std::array::from_fn(|k| Self::var(values[k], k))
    }

    /// Drops the Hessian.
    pub fn first_order(&self) -> Jet1 {
        Jet1 { v: self.v, d: self.g }
    }

    /// The partial `∂_k` of this jet as a first-order dual.
    pub fn partial(&self, k: usize) -> Jet1 {
        Jet1 { v: self.g[k], d: self.h[k] }
    }
}

fn mat(f: impl Fn(usize, usize) -> f64) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

impl Real for Jet2 {
    fn cst(c: f64) -> Self {
        Self::constant(c)
    }
    fn re(&self) -> f64 {
        self.v
    }
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            g: self.g.map(|x| f1 * x),
            h: mat(|i, j| f1 * self.h[i][j] + f2 * self.g[i] * self.g[j]),
        }
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            g: std::array::from_fn(|k| self.g[k] + o.g[k]),
            h: mat(|i, j| self.h[i][j] + o.h[i][j]),
        }
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            g: std::array::from_fn(|k| self.g[k] - o.g[k]),
            h: mat(|i, j| self.h[i][j] - o.h[i][j]),
        }
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            g: std::array::from_fn(|k| self.g[k] * o.v + self.v * o.g[k]),
            h: mat(|i, j| {
                self.h[i][j] * o.v
                    + self.v * o.h[i][j]
                    + self.g[i] * o.g[j]
                    + self.g[j] * o.g[i]
            }),
        }
    }
}

impl Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(mut self, c: f64) -> Self {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Self;
    fn sub(mut self, c: f64) -> Self {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self { v: self.v * c, g: self.g.map(|x| x * c), h: self.h.map(|r| r.map(|x| x * c)) }
    }
}

impl Div<f64> for Jet2 {
    type Output = Self;
    fn div(self, c: f64) -> Self {
        self * (1.0 / c)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<S: Real>(x: S, y: S) -> S {
        x * x * y + (x * y).sin() + x.exp() / (y + 2.0)
    }

    #[test]
    fn dual_matches_hand_derivative() {
        let [x, y, _, _] = Jet1::seed([0.7, -0.3, 0.0, 0.0]);
        let r = poly(x, y);
        let (xv, yv) = (0.7_f64, -0.3_f64);
        let dx = 2.0 * xv * yv + yv * (xv * yv).cos() + xv.exp() / (yv + 2.0);
        let dy = xv * xv + xv * (xv * yv).cos() - xv.exp() / (yv + 2.0).powi(2);
        assert!((r.d[0] - dx).abs() < 1e-14);
        assert!((r.d[1] - dy).abs() < 1e-14);
    }

    #[test]
    fn jet2_hessian_matches_finite_differences() {
        let base = [0.4, 0.9, 0.0, 0.0];
        let [x, y, _, _] = Jet2::seed(base);
        let r = poly(x, y);
        let h = 1e-4;
        let f = |a: f64, b: f64| poly(a, b);
        let fxy = (f(0.4 + h, 0.9 + h) - f(0.4 + h, 0.9 - h) - f(0.4 - h, 0.9 + h)
            + f(0.4 - h, 0.9 - h))
            / (4.0 * h * h);
        let fxx = (f(0.4 + h, 0.9) - 2.0 * f(0.4, 0.9) + f(0.4 - h, 0.9)) / (h * h);
        assert!((r.h[0][1] - fxy).abs() < 1e-6);
        assert!((r.h[1][0] - fxy).abs() < 1e-6);
        assert!((r.h[0][0] - fxx).abs() < 1e-6);
        assert!((r.first_order().d[0] - r.g[0]).abs() == 0.0);
    }

    #[test]
    fn powf_handles_fractional_exponents() {
        let p = Jet2::var(0.5, 3);
        let k = 2.0 / 7.0;
        let r = p.powf(k);
        assert!((r.v - 0.5_f64.powf(k)).abs() < 1e-15);
        assert!((r.g[3] - k * 0.5_f64.powf(k - 1.0)).abs() < 1e-14);
        assert!((r.h[3][3] - k * (k - 1.0) * 0.5_f64.powf(k - 2.0)).abs() < 1e-13);
    }
}
